//! Netpbm graymap (PGM) codec and the `.hmap` heightmap container.
//!
//! Reading accepts ASCII (`P2`) and binary (`P5`) graymaps with maxval 255
//! or 65535; 16-bit payloads are big-endian. Writing always emits `P5`.
//!
//! A heightmap is stored as a 16-bit `P5` file plus a sidecar text file at
//! `<path>.hdr` holding the elevation range and cell size. Samples encode
//! `round((e - min) / (max - min) * 65535)`; decoding inverts that with
//! `e = min * (1 - u) + max * u` where `u = s / 65535`. A flat map stores
//! all zeros.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::raster::{Heightmap, Raster};

/// Allowed maxval choices when writing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaxVal {
    Eight,
    Sixteen,
}

impl MaxVal {
    pub fn value(self) -> u32 {
        match self {
            MaxVal::Eight => 255,
            MaxVal::Sixteen => 65535,
        }
    }

    pub fn from_value(v: u32) -> Option<Self> {
        match v {
            255 => Some(MaxVal::Eight),
            65535 => Some(MaxVal::Sixteen),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Encoding {
    Ascii,
    Binary,
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_whitespace_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    /// Reads an unsigned decimal token. Returns `None` at end of input.
    fn next_uint(&mut self, what: &str) -> Result<Option<(u32, usize)>> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        if start >= self.bytes.len() {
            return Ok(None);
        }
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let end_ok = self
            .bytes
            .get(self.pos)
            .is_none_or(|b| b.is_ascii_whitespace() || *b == b'#');
        if self.pos == start || !end_ok {
            return Err(Error::Parse {
                offset: start,
                reason: format!("expected {what} as an unsigned decimal integer"),
            });
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
        let value = text.parse::<u32>().map_err(|_| Error::Parse {
            offset: start,
            reason: format!("{what} '{text}' is out of range"),
        })?;
        Ok(Some((value, start)))
    }

    fn header_uint(&mut self, what: &str) -> Result<(u32, usize)> {
        self.next_uint(what)?.ok_or(Error::Parse {
            offset: self.bytes.len(),
            reason: format!("header ended before {what}"),
        })
    }
}

/// Decodes a `P2` or `P5` graymap into a raster of `sample / maxval` values.
pub fn load_pgm(bytes: &[u8]) -> Result<Raster> {
    let encoding = match bytes.get(..2) {
        Some(b"P2") => Encoding::Ascii,
        Some(b"P5") => Encoding::Binary,
        _ => {
            return Err(Error::Parse {
                offset: 0,
                reason: "missing P2/P5 magic number".into(),
            })
        }
    };
    let mut cur = Cursor { bytes, pos: 2 };
    if !cur
        .bytes
        .get(2)
        .is_some_and(|b| b.is_ascii_whitespace() || *b == b'#')
    {
        return Err(Error::Parse {
            offset: 2,
            reason: "magic number must be followed by whitespace".into(),
        });
    }
    let (width, w_at) = cur.header_uint("width")?;
    let (height, h_at) = cur.header_uint("height")?;
    if width == 0 {
        return Err(Error::Parse {
            offset: w_at,
            reason: "width must be positive".into(),
        });
    }
    if height == 0 {
        return Err(Error::Parse {
            offset: h_at,
            reason: "height must be positive".into(),
        });
    }
    let (maxval, m_at) = cur.header_uint("maxval")?;
    let Some(depth) = MaxVal::from_value(maxval) else {
        return Err(Error::UnsupportedFormat {
            offset: m_at,
            reason: format!("maxval {maxval} is not 255 or 65535"),
        });
    };
    let (width, height) = (width as usize, height as usize);
    let count = width.checked_mul(height).ok_or(Error::Parse {
        offset: w_at,
        reason: "image dimensions overflow".into(),
    })?;
    let scale = f64::from(maxval);

    let mut samples = Vec::with_capacity(count);
    match encoding {
        Encoding::Binary => {
            // exactly one whitespace byte separates maxval from the payload
            match bytes.get(cur.pos) {
                Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
                _ => {
                    return Err(Error::Parse {
                        offset: cur.pos,
                        reason: "expected a single whitespace byte after maxval".into(),
                    })
                }
            }
            let bytes_per = if depth == MaxVal::Sixteen { 2 } else { 1 };
            let expected = count * bytes_per;
            let payload = &bytes[cur.pos..];
            if payload.len() < expected {
                return Err(Error::TruncatedData {
                    offset: cur.pos,
                    expected,
                    found: payload.len(),
                });
            }
            for (i, chunk) in payload[..expected].chunks_exact(bytes_per).enumerate() {
                let v = if bytes_per == 2 {
                    u32::from(u16::from_be_bytes([chunk[0], chunk[1]]))
                } else {
                    u32::from(chunk[0])
                };
                if v > maxval {
                    return Err(Error::Parse {
                        offset: cur.pos + i * bytes_per,
                        reason: format!("sample {v} exceeds maxval {maxval}"),
                    });
                }
                samples.push(f64::from(v) / scale);
            }
        }
        Encoding::Ascii => {
            for _ in 0..count {
                match cur.next_uint("sample")? {
                    Some((v, at)) if v > maxval => {
                        return Err(Error::Parse {
                            offset: at,
                            reason: format!("sample {v} exceeds maxval {maxval}"),
                        })
                    }
                    Some((v, _)) => samples.push(f64::from(v) / scale),
                    None => {
                        return Err(Error::TruncatedData {
                            offset: cur.pos,
                            expected: count,
                            found: samples.len(),
                        })
                    }
                }
            }
        }
    }
    Raster::new(width, height, samples)
}

fn quantize(sample: f64, maxval: MaxVal) -> u16 {
    // f64::round rounds half away from zero
    (sample * f64::from(maxval.value())).round() as u16
}

/// Encodes a raster as binary `P5`.
pub fn save_pgm(img: &Raster, maxval: MaxVal) -> Vec<u8> {
    let header = format!("P5\n{} {}\n{}\n", img.width(), img.height(), maxval.value());
    let per = if maxval == MaxVal::Sixteen { 2 } else { 1 };
    let mut out = Vec::with_capacity(header.len() + img.samples().len() * per);
    out.extend_from_slice(header.as_bytes());
    for &s in img.samples() {
        let q = quantize(s, maxval);
        match maxval {
            MaxVal::Eight => out.push(q as u8),
            MaxVal::Sixteen => out.extend_from_slice(&q.to_be_bytes()),
        }
    }
    out
}

pub fn read_pgm_file(path: impl AsRef<Path>) -> Result<Raster> {
    load_pgm(&fs::read(path)?)
}

pub fn write_pgm_file(path: impl AsRef<Path>, img: &Raster, maxval: MaxVal) -> Result<()> {
    fs::write(path, save_pgm(img, maxval))?;
    Ok(())
}

/// Sidecar metadata of an `.hmap` heightmap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HmapHeader {
    pub width: usize,
    pub height: usize,
    pub min_elevation: f64,
    pub max_elevation: f64,
    pub cell_size: f64,
}

impl HmapHeader {
    pub fn to_text(&self) -> String {
        format!(
            "# macroreveal heightmap sidecar\nwidth = {}\nheight = {}\nmin_elevation = {:?}\nmax_elevation = {:?}\ncell_size = {:?}\n",
            self.width, self.height, self.min_elevation, self.max_elevation, self.cell_size
        )
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut width = None;
        let mut height = None;
        let mut min = None;
        let mut max = None;
        let mut cell = None;
        let mut offset = 0;
        for line in text.split_inclusive('\n') {
            let at = offset;
            offset += line.len();
            let body = line.trim();
            if body.is_empty() || body.starts_with('#') {
                continue;
            }
            let bad = |reason: String| Error::Parse { offset: at, reason };
            let (key, value) = body
                .split_once('=')
                .ok_or_else(|| bad(format!("expected 'key = value', got '{body}'")))?;
            let (key, value) = (key.trim(), value.trim());
            let real = || {
                value
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| bad(format!("{key}: '{value}' is not a finite number")))
            };
            let count = || {
                value
                    .parse::<usize>()
                    .map_err(|_| bad(format!("{key}: '{value}' is not a pixel count")))
            };
            match key {
                "width" => width = Some(count()?),
                "height" => height = Some(count()?),
                "min_elevation" => min = Some(real()?),
                "max_elevation" => max = Some(real()?),
                "cell_size" => cell = Some(real()?),
                _ => return Err(bad(format!("unknown key '{key}'"))),
            }
        }
        let missing = |k: &str| Error::Parse {
            offset: text.len(),
            reason: format!("sidecar is missing '{k}'"),
        };
        let header = HmapHeader {
            width: width.ok_or_else(|| missing("width"))?,
            height: height.ok_or_else(|| missing("height"))?,
            min_elevation: min.ok_or_else(|| missing("min_elevation"))?,
            max_elevation: max.ok_or_else(|| missing("max_elevation"))?,
            cell_size: cell.ok_or_else(|| missing("cell_size"))?,
        };
        if header.max_elevation < header.min_elevation {
            return Err(Error::Parse {
                offset: 0,
                reason: "max_elevation is below min_elevation".into(),
            });
        }
        Ok(header)
    }
}

/// Encodes a heightmap into its 16-bit graymap and sidecar text.
pub fn encode_hmap(h: &Heightmap) -> (Vec<u8>, String) {
    let (lo, hi) = h.min_max();
    let raster = h.normalized();
    let header = HmapHeader {
        width: h.width(),
        height: h.height(),
        min_elevation: lo,
        max_elevation: hi,
        cell_size: h.cell_size(),
    };
    (save_pgm(&raster, MaxVal::Sixteen), header.to_text())
}

pub fn decode_hmap(pgm: &[u8], sidecar: &str) -> Result<Heightmap> {
    let header = HmapHeader::parse(sidecar)?;
    let raster = load_pgm(pgm)?;
    if raster.width() != header.width || raster.height() != header.height {
        return Err(Error::Shape {
            left_w: raster.width(),
            left_h: raster.height(),
            right_w: header.width,
            right_h: header.height,
        });
    }
    let (lo, hi) = (header.min_elevation, header.max_elevation);
    let elevations = raster
        .samples()
        .iter()
        .map(|&s| {
            if s == 1.0 {
                hi
            } else {
                lo * (1.0 - s) + hi * s
            }
        })
        .collect();
    Heightmap::new(header.width, header.height, elevations, header.cell_size)
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".hdr");
    PathBuf::from(s)
}

pub fn write_hmap_file(path: impl AsRef<Path>, h: &Heightmap) -> Result<()> {
    let path = path.as_ref();
    let (pgm, sidecar) = encode_hmap(h);
    fs::write(path, pgm)?;
    fs::write(sidecar_path(path), sidecar)?;
    Ok(())
}

pub fn read_hmap_file(path: impl AsRef<Path>) -> Result<Heightmap> {
    let path = path.as_ref();
    let pgm = fs::read(path)?;
    let sidecar = fs::read_to_string(sidecar_path(path))?;
    decode_hmap(&pgm, &sidecar)
}
