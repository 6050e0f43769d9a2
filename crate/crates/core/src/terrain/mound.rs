use crate::error::{Error, Result};
use crate::raster::Heightmap;

use super::noise::ValueNoise;
use super::sin_cos_deg;

/// Elongated mound with optional value-noise rubble.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TerrainParams {
    pub width: usize,
    pub height: usize,
    pub peak_height: f64,
    pub ridge_axis_deg: f64,
    pub noise_amplitude: f64,
    pub seed: u64,
    /// Gaussian width of the mound along the ridge axis, in pixels.
    pub major_sigma_px: f64,
    /// Gaussian width across the ridge axis, in pixels.
    pub minor_sigma_px: f64,
    /// Lattice spacing of the coarsest noise octave, in pixels.
    pub noise_scale_px: f64,
    pub cell_size: f64,
}

impl TerrainParams {
    /// Mound proportioned to the image, no noise.
    pub fn new(width: usize, height: usize) -> Self {
        let side = width.min(height) as f64;
        Self {
            width,
            height,
            peak_height: 1.0,
            ridge_axis_deg: 90.0,
            noise_amplitude: 0.0,
            seed: 0,
            major_sigma_px: 0.2 * side,
            minor_sigma_px: 0.14 * side,
            noise_scale_px: 0.025 * side,
            cell_size: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::invalid(format!("{name} must be positive, got {v}")))
            }
        };
        if self.width == 0 || self.height == 0 {
            return Err(Error::invalid("terrain dimensions must be positive"));
        }
        positive("peak_height", self.peak_height)?;
        positive("major_sigma_px", self.major_sigma_px)?;
        positive("minor_sigma_px", self.minor_sigma_px)?;
        positive("noise_scale_px", self.noise_scale_px)?;
        positive("cell_size", self.cell_size)?;
        if !(self.noise_amplitude.is_finite() && self.noise_amplitude >= 0.0) {
            return Err(Error::invalid("noise_amplitude must be non-negative"));
        }
        if !self.ridge_axis_deg.is_finite() {
            return Err(Error::invalid("ridge_axis_deg must be finite"));
        }
        Ok(())
    }

    /// Pixel-space center of the mound.
    pub fn center(&self) -> (f64, f64) {
        (
            (self.width as f64 - 1.0) / 2.0,
            (self.height as f64 - 1.0) / 2.0,
        )
    }
}

/// Anisotropic squared-exponential mound centered in the grid, plus
/// `noise_amplitude` times seeded value noise.
pub fn synth_mound(p: &TerrainParams) -> Result<Heightmap> {
    p.validate()?;
    let (cx, cy) = p.center();
    let (s, c) = sin_cos_deg(p.ridge_axis_deg);
    let (a2, b2) = (
        2.0 * p.major_sigma_px * p.major_sigma_px,
        2.0 * p.minor_sigma_px * p.minor_sigma_px,
    );
    let noise = ValueNoise {
        seed: p.seed,
        scale_px: p.noise_scale_px,
        octaves: 4,
    };
    Heightmap::from_fn(p.width, p.height, p.cell_size, |x, y| {
        let dx = x as f64 - cx;
        let dy = y as f64 - cy;
        let along = dx * c - dy * s;
        let across = dx * s + dy * c;
        let mut h = p.peak_height * (-(along * along / a2 + across * across / b2)).exp();
        if p.noise_amplitude > 0.0 {
            h += p.noise_amplitude * noise.sample(x as f64, y as f64);
        }
        h
    })
}

/// Smooth radial bump: `depth` at the center, zero from `3 * radius_px` out.
/// Negative depth digs a depression.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Feature {
    pub center: (f64, f64),
    pub radius_px: f64,
    pub depth: f64,
}

impl Feature {
    pub fn support(&self) -> f64 {
        3.0 * self.radius_px
    }

    /// Gaussian profile lowered so it reaches zero at the support edge and
    /// rescaled so the center value is exactly 1.
    #[inline]
    fn profile(&self, dist2: f64) -> f64 {
        let support = self.support();
        if dist2 >= support * support {
            return 0.0;
        }
        let denom = 2.0 * self.radius_px * self.radius_px;
        let floor = (-(support * support) / denom).exp();
        ((-dist2 / denom).exp() - floor) / (1.0 - floor)
    }
}

fn feature_order(a: &Feature, b: &Feature) -> std::cmp::Ordering {
    a.center
        .0
        .total_cmp(&b.center.0)
        .then(a.center.1.total_cmp(&b.center.1))
        .then(a.radius_px.total_cmp(&b.radius_px))
        .then(a.depth.total_cmp(&b.depth))
}

/// Adds every feature's bump to the heightmap. Bumps are summed in a
/// canonical order, so the result does not depend on the order of
/// `features`.
pub fn carve_features(h: &Heightmap, features: &[Feature]) -> Result<Heightmap> {
    let (w, ht) = (h.width(), h.height());
    for f in features {
        let (x, y) = f.center;
        if !(x >= 0.0 && x <= (w - 1) as f64 && y >= 0.0 && y <= (ht - 1) as f64) {
            return Err(Error::invalid(format!(
                "feature center ({x}, {y}) outside {w}x{ht} heightmap"
            )));
        }
        if !(f.radius_px.is_finite() && f.radius_px > 0.0) {
            return Err(Error::invalid(format!(
                "feature radius {} must be positive",
                f.radius_px
            )));
        }
        if !f.depth.is_finite() {
            return Err(Error::invalid("feature depth must be finite"));
        }
    }
    if features.is_empty() {
        return Ok(h.clone());
    }
    let mut sorted = features.to_vec();
    sorted.sort_by(feature_order);

    let mut bumps = vec![0.0; w * ht];
    for f in &sorted {
        let support = f.support();
        let (cx, cy) = f.center;
        let x_lo = (cx - support).floor().max(0.0) as usize;
        let x_hi = ((cx + support).ceil() as usize).min(w - 1);
        let y_lo = (cy - support).floor().max(0.0) as usize;
        let y_hi = ((cy + support).ceil() as usize).min(ht - 1);
        for y in y_lo..=y_hi {
            let dy = y as f64 - cy;
            for x in x_lo..=x_hi {
                let dx = x as f64 - cx;
                let p = f.profile(dx * dx + dy * dy);
                if p != 0.0 {
                    bumps[y * w + x] += f.depth * p;
                }
            }
        }
    }
    let elevations = h
        .elevations()
        .iter()
        .zip(&bumps)
        .map(|(e, b)| e + b)
        .collect();
    Heightmap::new(h.width(), h.height(), elevations, h.cell_size())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noiseless_mound_peaks_at_center_and_decays() {
        let p = TerrainParams {
            peak_height: 10.0,
            ridge_axis_deg: 90.0,
            ..TerrainParams::new(41, 41)
        };
        let h = synth_mound(&p).unwrap();
        assert_eq!(h.get(20, 20), 10.0);
        assert_eq!(h.min_max().1, 10.0);
        for d in 0..20 {
            assert!(h.get(20, 20 - d) > h.get(20, 19 - d));
            assert!(h.get(20 + d, 20) > h.get(21 + d, 20));
        }
        // elongated along the vertical ridge
        assert!(h.get(20, 5) > h.get(5, 20));
    }

    #[test]
    fn mound_is_deterministic_in_seed() {
        let p = TerrainParams {
            noise_amplitude: 0.3,
            seed: 99,
            ..TerrainParams::new(32, 24)
        };
        let a = synth_mound(&p).unwrap();
        let b = synth_mound(&p).unwrap();
        assert!(a
            .elevations()
            .iter()
            .zip(b.elevations())
            .all(|(x, y)| x.to_bits() == y.to_bits()));
        let c = synth_mound(&TerrainParams { seed: 100, ..p }).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn rotated_ridge_follows_axis() {
        let p = TerrainParams {
            ridge_axis_deg: 45.0,
            ..TerrainParams::new(61, 61)
        };
        let h = synth_mound(&p).unwrap();
        // up-right diagonal is along the ridge, up-left across it
        assert!(h.get(45, 15) > h.get(15, 15));
    }

    #[test]
    fn empty_feature_list_is_identity() {
        let h = synth_mound(&TerrainParams::new(16, 16)).unwrap();
        assert_eq!(carve_features(&h, &[]).unwrap(), h);
    }

    #[test]
    fn depression_lowers_center_by_depth() {
        let h = synth_mound(&TerrainParams::new(33, 33)).unwrap();
        let f = Feature {
            center: (10.0, 12.0),
            radius_px: 3.0,
            depth: -0.75,
        };
        let out = carve_features(&h, &[f]).unwrap();
        assert_eq!(out.get(10, 12), h.get(10, 12) - 0.75);
        // nothing changes outside the support
        assert_eq!(out.get(20, 12), h.get(20, 12));
        assert_eq!(out.get(10, 22), h.get(10, 22));
        assert!(out.get(11, 12) < h.get(11, 12));
    }

    #[test]
    fn out_of_bounds_center_is_rejected() {
        let h = Heightmap::flat(8, 8, 0.0, 1.0).unwrap();
        let f = Feature {
            center: (8.5, 2.0),
            radius_px: 1.0,
            depth: 1.0,
        };
        assert!(matches!(
            carve_features(&h, &[f]),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn mirrored_eyes_keep_mirror_symmetry() {
        let h = synth_mound(&TerrainParams::new(65, 49)).unwrap();
        let eyes = [
            Feature {
                center: (22.0, 15.0),
                radius_px: 4.0,
                depth: -0.3,
            },
            Feature {
                center: (42.0, 15.0),
                radius_px: 4.0,
                depth: -0.3,
            },
        ];
        let out = carve_features(&h, &eyes).unwrap();
        for y in 0..49 {
            for x in 0..65 {
                assert!((out.get(x, y) - out.get(64 - x, y)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn feature_order_does_not_matter() {
        let h = synth_mound(&TerrainParams {
            noise_amplitude: 0.1,
            ..TerrainParams::new(40, 40)
        })
        .unwrap();
        let fs = [
            Feature {
                center: (10.0, 10.0),
                radius_px: 5.0,
                depth: 0.37,
            },
            Feature {
                center: (14.5, 12.0),
                radius_px: 3.0,
                depth: -0.61,
            },
            Feature {
                center: (12.0, 9.0),
                radius_px: 4.0,
                depth: 0.13,
            },
        ];
        let a = carve_features(&h, &fs).unwrap();
        let b = carve_features(&h, &[fs[2], fs[0], fs[1]]).unwrap();
        let c = carve_features(&h, &[fs[1], fs[2], fs[0]]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
    }
}
