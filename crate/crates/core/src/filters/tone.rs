use crate::error::{Error, Result};
use crate::raster::{clamp_unit, snap, Raster, RawImage};

use super::gaussian_blur;

/// Black point, white point and gamma of a levels adjustment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelsParams {
    black: f64,
    white: f64,
    gamma: f64,
}

impl LevelsParams {
    pub fn new(black: f64, white: f64, gamma: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&black) {
            return Err(Error::invalid(format!(
                "levels black {black} not in [0, 1)"
            )));
        }
        if !(white > black && white <= 1.0) {
            return Err(Error::invalid(format!(
                "levels white {white} not in ({black}, 1]"
            )));
        }
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::invalid(format!(
                "levels gamma {gamma} must be positive"
            )));
        }
        // on the sample grid a sample equal to the black point maps to exactly 0
        Ok(Self {
            black: snap(black),
            white: snap(white),
            gamma,
        })
    }

    pub fn identity() -> Self {
        Self {
            black: 0.0,
            white: 1.0,
            gamma: 1.0,
        }
    }

    pub fn black(&self) -> f64 {
        self.black
    }

    pub fn white(&self) -> f64 {
        self.white
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

pub fn invert(img: &Raster) -> Raster {
    img.map_valid(|s| 1.0 - s)
}

/// `s -> clamp((s - black) / (white - black)) ^ (1 / gamma)`
pub fn levels(img: &Raster, p: LevelsParams) -> Raster {
    let span = p.white - p.black;
    let exponent = 1.0 / p.gamma;
    img.map_valid(|s| ((s - p.black) / span).clamp(0.0, 1.0).powf(exponent))
}

/// Levels with black 0 and the white point at the image maximum. An image
/// whose maximum is 0 comes back unchanged (all zeros).
pub fn levels_to_peak(img: &Raster, gamma: f64) -> Result<Raster> {
    let (_, peak) = img.min_max();
    if peak <= 0.0 {
        LevelsParams::new(0.0, 1.0, gamma)?;
        return Ok(img.clone());
    }
    Ok(levels(img, LevelsParams::new(0.0, peak, gamma)?))
}

/// Percentile of `sorted` (ascending) with linear interpolation between
/// order statistics; `pct` in `[0, 100]`.
pub fn percentile(sorted: &[f64], pct: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let pos = pct / 100.0 * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        let t = pos - lo as f64;
        sorted[lo] + t * (sorted[hi] - sorted[lo])
    }
}

/// Stretches the `clip_low_pct` .. `100 - clip_high_pct` percentile range
/// onto `[0, 1]`. A degenerate range yields a constant 0.5 image.
pub fn autocontrast(img: &Raster, clip_low_pct: f64, clip_high_pct: f64) -> Result<Raster> {
    let valid = clip_low_pct.is_finite()
        && clip_high_pct.is_finite()
        && clip_low_pct >= 0.0
        && clip_high_pct >= 0.0
        && clip_low_pct + clip_high_pct < 100.0;
    if !valid {
        return Err(Error::invalid(format!(
            "autocontrast clips {clip_low_pct}/{clip_high_pct} must be non-negative and sum below 100"
        )));
    }
    let mut sorted = img.samples().to_vec();
    sorted.sort_by(f64::total_cmp);
    let black = percentile(&sorted, clip_low_pct);
    let white = percentile(&sorted, 100.0 - clip_high_pct);
    if white <= black {
        return Ok(img.map_valid(|_| 0.5));
    }
    let span = white - black;
    Ok(img.map_valid(|s| ((s - black) / span).clamp(0.0, 1.0)))
}

/// `clamp(img + amount * (img - blur(img, radius_px)))`
pub fn unsharp_mask(img: &Raster, radius_px: usize, amount: f64) -> Result<Raster> {
    if radius_px < 1 {
        return Err(Error::invalid("unsharp radius must be at least 1 pixel"));
    }
    if !(amount.is_finite() && amount >= 0.0) {
        return Err(Error::invalid(format!(
            "unsharp amount {amount} must be non-negative"
        )));
    }
    let blurred = gaussian_blur(img, radius_px);
    let samples = img
        .samples()
        .iter()
        .zip(blurred.samples())
        .map(|(&s, &b)| s + amount * (s - b))
        .collect();
    clamp_unit(RawImage {
        width: img.width(),
        height: img.height(),
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(v: &[f64]) -> Raster {
        Raster::new(v.len(), 1, v.to_vec()).unwrap()
    }

    #[test]
    fn invert_values() {
        assert_eq!(invert(&row(&[0.0, 0.25, 1.0])).samples(), &[1.0, 0.75, 0.0]);
    }

    #[test]
    fn levels_examples() {
        let img = row(&[0.0, 0.2, 0.5, 0.8, 1.0, 0.123]);
        assert_eq!(levels(&img, LevelsParams::identity()), img);

        let p = LevelsParams::new(0.2, 0.8, 1.0).unwrap();
        let out = levels(&img, p);
        assert_eq!(out.get(1, 0), 0.0);
        assert_eq!(out.get(3, 0), 1.0);
        assert!((out.get(2, 0) - 0.5).abs() < 1e-15);
        assert_eq!(out.get(0, 0), 0.0);
        assert_eq!(out.get(4, 0), 1.0);

        let p = LevelsParams::new(0.0, 1.0, 2.0).unwrap();
        assert!((levels(&row(&[0.25]), p).get(0, 0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn levels_rejects_bad_params() {
        assert!(LevelsParams::new(0.5, 0.5, 1.0).is_err());
        assert!(LevelsParams::new(-0.1, 0.5, 1.0).is_err());
        assert!(LevelsParams::new(1.0, 1.0, 1.0).is_err());
        assert!(LevelsParams::new(0.0, 1.2, 1.0).is_err());
        assert!(LevelsParams::new(0.0, 1.0, 0.0).is_err());
        assert!(LevelsParams::new(0.0, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn levels_to_peak_stretches_and_handles_black_images() {
        let out = levels_to_peak(&row(&[0.0, 0.1, 0.4]), 1.0).unwrap();
        assert_eq!(out.samples(), &[0.0, 0.25, 1.0]);
        let zeros = row(&[0.0, 0.0]);
        assert_eq!(levels_to_peak(&zeros, 0.5).unwrap(), zeros);
        assert!(levels_to_peak(&zeros, -1.0).is_err());
    }

    #[test]
    fn percentile_interpolates() {
        let v = [0.0, 0.1, 0.2, 0.3, 0.4];
        assert_eq!(percentile(&v, 0.0), 0.0);
        assert_eq!(percentile(&v, 100.0), 0.4);
        assert_eq!(percentile(&v, 50.0), 0.2);
        assert!((percentile(&v, 12.5) - 0.05).abs() < 1e-15);
    }

    #[test]
    fn autocontrast_examples() {
        let full = row(&[0.0, 0.3, 1.0, 0.6]);
        assert_eq!(autocontrast(&full, 0.0, 0.0).unwrap(), full);

        let flat = row(&[0.7; 5]);
        assert!(autocontrast(&flat, 1.0, 1.0)
            .unwrap()
            .samples()
            .iter()
            .all(|&s| s == 0.5));

        let two = row(&[0.4, 0.6, 0.6, 0.4]);
        assert_eq!(
            autocontrast(&two, 0.0, 0.0).unwrap().samples(),
            &[0.0, 1.0, 1.0, 0.0]
        );
    }

    #[test]
    fn autocontrast_rejects_bad_clips() {
        let img = row(&[0.1, 0.2]);
        assert!(autocontrast(&img, -1.0, 0.0).is_err());
        assert!(autocontrast(&img, 50.0, 50.0).is_err());
        assert!(autocontrast(&img, f64::NAN, 0.0).is_err());
    }

    #[test]
    fn unsharp_identities() {
        let img = Raster::from_fn(9, 7, |x, y| ((x * 7 + y * 3) % 10) as f64 / 9.0).unwrap();
        assert_eq!(unsharp_mask(&img, 3, 0.0).unwrap(), img);
        let flat = Raster::filled(9, 7, 0.4).unwrap();
        for s in unsharp_mask(&flat, 3, 2.5).unwrap().samples() {
            assert!((s - 0.4).abs() < 1e-12);
        }
        assert!(unsharp_mask(&img, 0, 1.0).is_err());
        assert!(unsharp_mask(&img, 2, -1.0).is_err());
    }

    #[test]
    fn unsharp_step_shows_halo_on_both_sides() {
        let step = row(&(0..16)
            .map(|x| if x < 8 { 0.25 } else { 0.75 })
            .collect::<Vec<_>>());
        let out = unsharp_mask(&step, 3, 1.0).unwrap();
        // dark side undershoots, bright side overshoots, far field unchanged
        assert!(out.get(7, 0) < 0.25);
        assert!(out.get(8, 0) > 0.75);
        assert!((out.get(0, 0) - 0.25).abs() < 1e-12);
        assert!((out.get(15, 0) - 0.75).abs() < 1e-12);
        // hand value at x = 7: blur = sum of weights at offsets +1..+3 times 0.5 plus 0.25
        let k = crate::filters::gaussian_kernel(3).unwrap();
        let tail: f64 = k.weights()[4..].iter().sum();
        let expected = 0.25 - 0.5 * tail;
        assert!((out.get(7, 0) - expected).abs() < 1e-12);
    }
}
