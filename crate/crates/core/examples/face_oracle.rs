//! Measures the face fixture and prints the values the manifest thresholds
//! are frozen from: eye margins over the light sweep, persistence NCCs for
//! both erosion presets, ladder variances and symmetry recovery.
//!
//! cargo run --release -p macroreveal --example face_oracle

use std::time::Instant;

use macroreveal::fixture::{FaceLayout, FaceManifest};
use macroreveal::metrics::{best_symmetry_axis, feature_margin, persistence_report};
use macroreveal::pipeline::{blur_ladder, reveal, RevealParams, LADDER_RADII};
use macroreveal::terrain::{erode, illumination_sweep};

fn main() -> macroreveal::Result<()> {
    let m = FaceManifest::builtin();
    let layout = m.layout();
    let t = Instant::now();
    let h = m.heightmap(&layout)?;
    let face = m.raster()?;
    println!("fixture built in {:?}", t.elapsed());

    let t = Instant::now();
    let params = RevealParams {
        blur_radius_px: m.sweep.blur_radius_px,
        ..Default::default()
    };
    reveal(&face, &params)?;
    println!("reveal in {:?}", t.elapsed());

    let t = Instant::now();
    let ladder = blur_ladder(&face, &LADDER_RADII)?;
    for (r, img) in &ladder.rungs {
        println!("ladder r={r:3} variance={:.6e}", img.variance());
    }
    println!("ladder in {:?}", t.elapsed());

    let t = Instant::now();
    let eyes = m.eye_centers(&layout);
    let (r_in, r_out) = m.margin_radii(&layout);
    let mut lowest = f64::INFINITY;
    for (az, img) in illumination_sweep(&h, &m.sweep_azimuths(), m.sweep.elevation_deg, &params)? {
        let margins: Vec<f64> = eyes
            .iter()
            .map(|&c| feature_margin(&img, c, r_in, r_out))
            .collect::<Result<_, _>>()?;
        lowest = lowest.min(margins.iter().copied().fold(f64::INFINITY, f64::min));
        println!("sweep az={az:5.1} margins={margins:?}");
    }
    println!("lowest eye margin {lowest:.6} (sweep in {:?})", t.elapsed());

    let light = m.render_light()?;
    for (name, preset) in [
        ("diffusion_only", &m.erosion.diffusion_only),
        ("cataclysm", &m.erosion.cataclysm),
    ] {
        let t = Instant::now();
        let eroded = erode(&h, &preset.params())?;
        let report = persistence_report(&h, &eroded, &light, m.persistence.blur_radius_px)?;
        let p = report.persistence.expect("persistence report");
        println!(
            "{name}: ncc_sharp={:.6} ncc_blurred={:.6} gain={:.6} ({:?})",
            p.ncc_sharp,
            p.ncc_blurred,
            p.gain(),
            t.elapsed()
        );
    }

    let t = Instant::now();
    let n = m.symmetry.size;
    for offset in [0.0, m.symmetry.rotation_deg] {
        let sym_layout = FaceLayout {
            width: n,
            height: n,
            ridge_axis_deg: m.terrain.ridge_axis_deg + offset,
            with_noise: false,
        };
        let img = m.heightmap(&sym_layout)?.normalized();
        let best = best_symmetry_axis(&img, m.symmetry.angle_step_deg)?;
        let across = macroreveal::metrics::symmetry_score(&img, sym_layout.ridge_axis_deg + 90.0);
        println!(
            "symmetry built at {:.1}: best axis {:.1} score {:.6}; perpendicular score {:.6}",
            sym_layout.ridge_axis_deg, best.axis_deg, best.score, across
        );
    }
    println!("symmetry in {:?}", t.elapsed());
    Ok(())
}
