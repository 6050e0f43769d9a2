//! Similarity, symmetry and feature-visibility measures.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::filters::gaussian_blur;
use crate::raster::{Heightmap, Raster};
use crate::terrain::{hillshade, LightSpec};

/// Normalized cross-correlation of mean-centered samples.
///
/// Two constant images correlate at 1.0 when equal and 0.0 otherwise; a
/// constant image against a varying one gives 0.0.
pub fn ncc(a: &Raster, b: &Raster) -> Result<f64> {
    a.ensure_same_shape(b)?;
    Ok(ncc_pairs(
        a.samples().iter().copied().zip(b.samples().iter().copied()),
    ))
}

fn ncc_pairs(pairs: impl Iterator<Item = (f64, f64)> + Clone) -> f64 {
    let (mut n, mut sa, mut sb) = (0usize, 0.0, 0.0);
    let (mut a_lo, mut a_hi, mut b_lo, mut b_hi) = (
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
    );
    for (x, y) in pairs.clone() {
        n += 1;
        sa += x;
        sb += y;
        (a_lo, a_hi) = (a_lo.min(x), a_hi.max(x));
        (b_lo, b_hi) = (b_lo.min(y), b_hi.max(y));
    }
    if n == 0 {
        return 0.0;
    }
    match (a_lo == a_hi, b_lo == b_hi) {
        (true, true) => return if a_lo == b_lo { 1.0 } else { 0.0 },
        (true, false) | (false, true) => return 0.0,
        _ => {}
    }
    let (ma, mb) = (sa / n as f64, sb / n as f64);
    let (mut cov, mut va, mut vb) = (0.0, 0.0, 0.0);
    for (x, y) in pairs {
        let (dx, dy) = (x - ma, y - mb);
        cov += dx * dy;
        va += dx * dx;
        vb += dy * dy;
    }
    (cov / (va * vb).sqrt()).clamp(-1.0, 1.0)
}

fn bilinear(img: &Raster, x: f64, y: f64) -> f64 {
    let (w, h) = (img.width(), img.height());
    let x0 = (x.floor() as usize).min(w - 1);
    let y0 = (y.floor() as usize).min(h - 1);
    let x1 = (x0 + 1).min(w - 1);
    let y1 = (y0 + 1).min(h - 1);
    let (tx, ty) = (x - x0 as f64, y - y0 as f64);
    let top = img.get(x0, y0) + tx * (img.get(x1, y0) - img.get(x0, y0));
    let bottom = img.get(x0, y1) + tx * (img.get(x1, y1) - img.get(x0, y1));
    top + ty * (bottom - top)
}

/// Reflected coordinates closer than this to a pixel center snap onto it.
const SNAP_EPS: f64 = 1e-9;

fn snap_coord(v: f64) -> f64 {
    let r = v.round();
    if (v - r).abs() <= SNAP_EPS {
        r
    } else {
        v
    }
}

/// Mirror correlation of `img` about the axis through its center at
/// `axis_deg` (counter-clockwise from +x, y up). Pixels whose reflection
/// leaves the image are excluded.
pub fn symmetry_score(img: &Raster, axis_deg: f64) -> f64 {
    let (w, h) = (img.width(), img.height());
    let (cx, cy) = ((w as f64 - 1.0) / 2.0, (h as f64 - 1.0) / 2.0);
    let (s, c) = crate::terrain::sin_cos_deg(axis_deg.rem_euclid(180.0));
    let (dx, dy) = (c, -s);
    let (max_x, max_y) = ((w - 1) as f64, (h - 1) as f64);

    let mut pairs = Vec::with_capacity(w * h);
    for y in 0..h {
        for x in 0..w {
            let (vx, vy) = (x as f64 - cx, y as f64 - cy);
            let dot = vx * dx + vy * dy;
            let rx = snap_coord(cx + 2.0 * dot * dx - vx);
            let ry = snap_coord(cy + 2.0 * dot * dy - vy);
            if rx >= 0.0 && rx <= max_x && ry >= 0.0 && ry <= max_y {
                pairs.push((img.get(x, y), bilinear(img, rx, ry)));
            }
        }
    }
    ncc_pairs(pairs.iter().copied())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryAxis {
    pub axis_deg: f64,
    pub score: f64,
}

/// Scores below the current best by no more than this count as ties.
const TIE_EPS: f64 = 1e-12;

/// Grid search over `[0, 180)` in `angle_step_deg` steps; ties go to the
/// smaller angle.
pub fn best_symmetry_axis(img: &Raster, angle_step_deg: f64) -> Result<SymmetryAxis> {
    if !(angle_step_deg > 0.0 && angle_step_deg <= 90.0) {
        return Err(Error::invalid(format!(
            "angle step {angle_step_deg} not in (0, 90]"
        )));
    }
    let mut best = SymmetryAxis {
        axis_deg: 0.0,
        score: symmetry_score(img, 0.0),
    };
    for angle in symmetry_grid(angle_step_deg).skip(1) {
        let score = symmetry_score(img, angle);
        if score > best.score + TIE_EPS {
            best = SymmetryAxis {
                axis_deg: angle,
                score,
            };
        }
    }
    Ok(best)
}

/// Angles `k * step` below 180 degrees.
pub fn symmetry_grid(step: f64) -> impl Iterator<Item = f64> {
    (0..)
        .map(move |k| k as f64 * step)
        .take_while(|&a| a < 180.0)
}

/// `mean(annulus r_inner < d <= r_outer) - mean(disk d <= r_inner)`.
///
/// Positive when the disk reads darker than its surroundings. Sums are
/// formed exactly on the sample grid, so inverting the image negates the
/// margin exactly.
pub fn feature_margin(img: &Raster, center: (f64, f64), r_inner: f64, r_outer: f64) -> Result<f64> {
    let (cx, cy) = center;
    if !(r_inner > 0.0 && r_outer > r_inner && r_outer.is_finite()) {
        return Err(Error::invalid(format!(
            "need 0 < r_inner < r_outer, got {r_inner}, {r_outer}"
        )));
    }
    let (w, h) = (img.width() as f64, img.height() as f64);
    if !(cx - r_outer >= 0.0
        && cy - r_outer >= 0.0
        && cx + r_outer <= w - 1.0
        && cy + r_outer <= h - 1.0)
    {
        return Err(Error::invalid(format!(
            "annulus of radius {r_outer} around ({cx}, {cy}) leaves the {w}x{h} image"
        )));
    }
    let (r_in2, r_out2) = (r_inner * r_inner, r_outer * r_outer);
    let (mut disk_sum, mut disk_n, mut ring_sum, mut ring_n) = (0u128, 0u128, 0u128, 0u128);
    let x_lo = (cx - r_outer).floor() as usize;
    let x_hi = (cx + r_outer).ceil() as usize;
    let y_lo = (cy - r_outer).floor() as usize;
    let y_hi = (cy + r_outer).ceil() as usize;
    let width = img.width();
    let units: Vec<u64> = img.grid_units().collect();
    for y in y_lo..=y_hi.min(img.height() - 1) {
        for x in x_lo..=x_hi.min(width - 1) {
            let (dx, dy) = (x as f64 - cx, y as f64 - cy);
            let d2 = dx * dx + dy * dy;
            let u = u128::from(units[y * width + x]);
            if d2 <= r_in2 {
                disk_sum += u;
                disk_n += 1;
            } else if d2 <= r_out2 {
                ring_sum += u;
                ring_n += 1;
            }
        }
    }
    if disk_n == 0 || ring_n == 0 {
        return Err(Error::invalid("disk or annulus contains no pixels"));
    }
    // (ring_sum / ring_n - disk_sum / disk_n) / GRID over a common denominator
    let numerator = ring_sum as i128 * disk_n as i128 - disk_sum as i128 * ring_n as i128;
    let denominator = (ring_n * disk_n) as f64 * crate::raster::SAMPLE_GRID;
    Ok(numerator as f64 / denominator)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Persistence {
    pub ncc_sharp: f64,
    pub ncc_blurred: f64,
}

impl Persistence {
    pub fn gain(&self) -> f64 {
        self.ncc_blurred - self.ncc_sharp
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMargin {
    pub id: String,
    pub margin: f64,
}

/// Collected measurements, exportable as `key = value` text or as a
/// comma-separated `metric,value` table.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MetricsReport {
    pub persistence: Option<Persistence>,
    pub symmetry: Option<SymmetryAxis>,
    pub feature_margins: Vec<FeatureMargin>,
}

impl MetricsReport {
    fn rows(&self) -> Vec<(String, f64)> {
        let mut rows = Vec::new();
        if let Some(p) = self.persistence {
            rows.push(("ncc_sharp".into(), p.ncc_sharp));
            rows.push(("ncc_blurred".into(), p.ncc_blurred));
            rows.push(("ncc_gain".into(), p.gain()));
        }
        if let Some(s) = self.symmetry {
            rows.push(("symmetry_axis_deg".into(), s.axis_deg));
            rows.push(("symmetry_score".into(), s.score));
        }
        for m in &self.feature_margins {
            rows.push((format!("margin.{}", m.id), m.margin));
        }
        rows
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.rows() {
            let _ = writeln!(out, "{k} = {v:?}");
        }
        out
    }

    pub fn to_table(&self) -> String {
        let mut out = String::from("metric,value\n");
        for (k, v) in self.rows() {
            let _ = writeln!(out, "{k},{v:?}");
        }
        out
    }

    /// Looks up a value by its text-format key.
    pub fn get(&self, key: &str) -> Option<f64> {
        self.rows()
            .into_iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v)
    }
}

/// Shades both heightmaps with `light` and correlates them sharp and after
/// a `blur_radius_px` Gaussian blur.
pub fn persistence_report(
    original: &Heightmap,
    eroded: &Heightmap,
    light: &LightSpec,
    blur_radius_px: usize,
) -> Result<MetricsReport> {
    if !original.same_shape(eroded) {
        return Err(Error::Shape {
            left_w: original.width(),
            left_h: original.height(),
            right_w: eroded.width(),
            right_h: eroded.height(),
        });
    }
    if blur_radius_px < 1 {
        return Err(Error::invalid("persistence blur radius must be at least 1"));
    }
    let a = hillshade(original, light)?;
    let b = hillshade(eroded, light)?;
    let ncc_sharp = ncc(&a, &b)?;
    let ncc_blurred = ncc(
        &gaussian_blur(&a, blur_radius_px),
        &gaussian_blur(&b, blur_radius_px),
    )?;
    Ok(MetricsReport {
        persistence: Some(Persistence {
            ncc_sharp,
            ncc_blurred,
        }),
        ..Default::default()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filters::invert;
    use proptest::prelude::*;

    fn noise(w: usize, h: usize, seed: u64) -> Raster {
        let n = crate::terrain::ValueNoise {
            seed,
            scale_px: 1.0,
            octaves: 1,
        };
        Raster::from_fn(w, h, |x, y| {
            0.5 + 0.5 * n.sample(x as f64 + 0.5, y as f64 + 0.5)
        })
        .unwrap()
    }

    fn mirror_fixture(w: usize, h: usize) -> Raster {
        // symmetric under x -> w - 1 - x, not under y flips
        Raster::from_fn(w, h, |x, y| {
            let dx = x as f64 - (w as f64 - 1.0) / 2.0;
            let t = y as f64 / h as f64;
            (0.5 + 0.4 * (-(dx * dx) / 40.0).exp() * t + 0.1 * (dx.abs() / 3.0).sin() * (1.0 - t))
                .clamp(0.0, 1.0)
        })
        .unwrap()
    }

    #[test]
    fn self_and_inverted_correlation() {
        let a = noise(32, 24, 1);
        assert!((ncc(&a, &a).unwrap() - 1.0).abs() < 1e-12);
        assert!((ncc(&a, &invert(&a)).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn independent_noise_is_uncorrelated() {
        let v = ncc(&noise(256, 256, 10), &noise(256, 256, 20)).unwrap();
        assert!(v.abs() < 0.1, "{v}");
    }

    #[test]
    fn constant_rules() {
        let c = Raster::filled(4, 4, 0.3).unwrap();
        let d = Raster::filled(4, 4, 0.6).unwrap();
        assert_eq!(ncc(&c, &c).unwrap(), 1.0);
        assert_eq!(ncc(&c, &d).unwrap(), 0.0);
        assert_eq!(ncc(&c, &noise(4, 4, 3)).unwrap(), 0.0);
        assert!(matches!(ncc(&c, &noise(5, 4, 3)), Err(Error::Shape { .. })));
    }

    #[test]
    fn mirror_symmetric_fixture_scores() {
        let img = mirror_fixture(41, 33);
        let vertical = symmetry_score(&img, 90.0);
        assert!(vertical >= 0.999, "{vertical}");
        assert!(symmetry_score(&img, 0.0) < vertical);
        assert_eq!(
            symmetry_score(&Raster::filled(9, 9, 0.2).unwrap(), 33.0),
            1.0
        );
    }

    #[test]
    fn best_axis_search() {
        let img = mirror_fixture(41, 41);
        let best = best_symmetry_axis(&img, 5.0).unwrap();
        assert_eq!(best.axis_deg, 90.0);
        assert!(best_symmetry_axis(&img, 0.0).is_err());
        assert!(best_symmetry_axis(&img, 91.0).is_err());
    }

    #[test]
    fn grid_definition() {
        assert_eq!(symmetry_grid(90.0).collect::<Vec<_>>(), vec![0.0, 90.0]);
        assert_eq!(symmetry_grid(45.0).count(), 4);
        assert_eq!(symmetry_grid(1.0).count(), 180);
        assert_eq!(symmetry_grid(7.0).last(), Some(175.0));
    }

    #[test]
    fn disk_ties_resolve_to_zero() {
        let img = Raster::from_fn(31, 31, |x, y| {
            let (dx, dy) = (x as f64 - 15.0, y as f64 - 15.0);
            if dx * dx + dy * dy <= 64.0 {
                0.9
            } else {
                0.1
            }
        })
        .unwrap();
        for a in symmetry_grid(45.0) {
            assert_eq!(symmetry_score(&img, a), 1.0, "{a}");
        }
        assert_eq!(best_symmetry_axis(&img, 45.0).unwrap().axis_deg, 0.0);
    }

    #[test]
    fn margins() {
        let flat = Raster::filled(40, 40, 0.4).unwrap();
        assert_eq!(feature_margin(&flat, (20.0, 20.0), 5.0, 10.0).unwrap(), 0.0);
        let spot = Raster::from_fn(40, 40, |x, y| {
            let (dx, dy) = (x as f64 - 20.0, y as f64 - 20.0);
            if dx * dx + dy * dy <= 25.0 {
                0.2
            } else {
                0.8
            }
        })
        .unwrap();
        let m = feature_margin(&spot, (20.0, 20.0), 5.0, 10.0).unwrap();
        assert!((m - 0.6).abs() < 1e-15, "{m}");
        assert!(feature_margin(&spot, (5.0, 20.0), 3.0, 6.0).is_err());
        assert!(feature_margin(&spot, (20.0, 20.0), 6.0, 6.0).is_err());
    }

    #[test]
    fn report_formats() {
        let report = MetricsReport {
            persistence: Some(Persistence {
                ncc_sharp: 0.5,
                ncc_blurred: 0.75,
            }),
            symmetry: Some(SymmetryAxis {
                axis_deg: 90.0,
                score: 0.99,
            }),
            feature_margins: vec![FeatureMargin {
                id: "eye0".into(),
                margin: 0.125,
            }],
        };
        assert_eq!(
            report.to_text(),
            "ncc_sharp = 0.5\nncc_blurred = 0.75\nncc_gain = 0.25\nsymmetry_axis_deg = 90.0\nsymmetry_score = 0.99\nmargin.eye0 = 0.125\n"
        );
        assert!(report
            .to_table()
            .starts_with("metric,value\nncc_sharp,0.5\n"));
        assert_eq!(report.get("margin.eye0"), Some(0.125));
    }

    #[test]
    fn unchanged_terrain_persists_perfectly() {
        let h = Heightmap::from_fn(40, 40, 1.0, |x, y| {
            ((x as f64 / 5.0).sin() + (y as f64 / 7.0).cos()) * 3.0
        })
        .unwrap();
        let r = persistence_report(&h, &h, &LightSpec::new(315.0, 35.0).unwrap(), 6).unwrap();
        let p = r.persistence.unwrap();
        assert!((p.ncc_sharp - 1.0).abs() < 1e-12);
        assert!((p.ncc_blurred - 1.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn ncc_is_symmetric_and_affine_invariant(
            seed_a in any::<u64>(),
            seed_b in any::<u64>(),
            alpha in 0.05f64..1.0,
            beta in 0.0f64..0.5,
        ) {
            let a = noise(12, 9, seed_a);
            let b = noise(12, 9, seed_b);
            prop_assert_eq!(ncc(&a, &b).unwrap(), ncc(&b, &a).unwrap());
            let scaled = Raster::new(
                12,
                9,
                a.samples().iter().map(|s| (alpha * s + beta).min(1.0)).collect(),
            ).unwrap();
            if alpha + beta <= 1.0 {
                prop_assert!((ncc(&scaled, &b).unwrap() - ncc(&a, &b).unwrap()).abs() < 1e-9);
            }
        }

        #[test]
        fn symmetry_axis_is_periodic(seed in any::<u64>(), angle in 0.0f64..180.0) {
            let img = noise(15, 11, seed);
            let d = (symmetry_score(&img, angle) - symmetry_score(&img, angle + 180.0)).abs();
            prop_assert!(d < 1e-9);
        }

        #[test]
        fn margin_flips_sign_under_inversion(seed in any::<u64>(), cx in 8.0f64..12.0, cy in 8.0f64..12.0) {
            let img = noise(21, 21, seed);
            let m = feature_margin(&img, (cx, cy), 3.0, 7.5).unwrap();
            prop_assert_eq!(feature_margin(&invert(&img), (cx, cy), 3.0, 7.5).unwrap(), -m);
        }
    }
}
