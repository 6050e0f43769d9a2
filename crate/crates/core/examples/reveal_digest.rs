//! Prints SHA-256 digests of the face fixture and of `reveal` at the
//! default parameters, every image encoded as a 16-bit PGM. The acceptance
//! suite compares its own runs against digests produced by a release build
//! of this program.
//!
//! cargo run --release -p macroreveal --example reveal_digest

use macroreveal::fixture::FaceManifest;
use macroreveal::pgm::{load_pgm, save_pgm, MaxVal};
use macroreveal::pipeline::{reveal, RevealParams};
use sha2::{Digest, Sha256};

fn hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn main() -> macroreveal::Result<()> {
    let fixture = save_pgm(&FaceManifest::builtin().raster()?, MaxVal::Sixteen);
    println!("fixture {}", hex(&fixture));
    let out = reveal(&load_pgm(&fixture)?, &RevealParams::default())?;
    println!("output {}", hex(&save_pgm(&out.output, MaxVal::Sixteen)));
    for (label, img) in out.intermediates() {
        println!("{label} {}", hex(&save_pgm(img, MaxVal::Sixteen)));
    }
    Ok(())
}
