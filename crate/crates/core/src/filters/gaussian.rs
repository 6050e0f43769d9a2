use crate::error::{Error, Result};
use crate::raster::Raster;

use super::clamp_index;

/// Symmetric, normalized 1-D convolution kernel with `2 * radius + 1` taps.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel1D {
    radius: usize,
    weights: Vec<f64>,
}

impl Kernel1D {
    /// Sampled Gaussian of standard deviation `sigma`, truncated at `±radius`
    /// and renormalized to unit sum.
    pub fn gaussian_truncated(sigma: f64, radius: usize) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::invalid(format!(
                "sigma must be positive, got {sigma}"
            )));
        }
        let denom = 2.0 * sigma * sigma;
        // one half, mirrored, so the weights are exactly symmetric
        let half: Vec<f64> = (0..=radius)
            .map(|d| {
                let d = d as f64;
                (-(d * d) / denom).exp()
            })
            .collect();
        let total = half[0] + 2.0 * half[1..].iter().sum::<f64>();
        let weights = (0..2 * radius + 1)
            .map(|i| half[i.abs_diff(radius)] / total)
            .collect();
        Ok(Self { radius, weights })
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn taps(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Gaussian kernel for a blur of `radius_px` pixels: `sigma = radius_px / 3`,
/// taps spanning `±radius_px`.
pub fn gaussian_kernel(radius_px: usize) -> Result<Kernel1D> {
    if radius_px < 1 {
        return Err(Error::invalid("gaussian radius must be at least 1 pixel"));
    }
    Kernel1D::gaussian_truncated(radius_px as f64 / 3.0, radius_px)
}

/// Gaussian blur with a pixel radius; radius 0 returns a copy.
pub fn gaussian_blur(img: &Raster, radius_px: usize) -> Raster {
    if radius_px == 0 {
        return img.clone();
    }
    let kernel = gaussian_kernel(radius_px).expect("radius >= 1");
    convolve_separable(img, &kernel)
}

/// Gaussian blur parameterized by standard deviation, truncated at
/// `ceil(3 * sigma)` pixels.
pub fn gaussian_blur_sigma(img: &Raster, sigma: f64) -> Result<Raster> {
    let radius = (3.0 * sigma).ceil();
    if !(radius.is_finite() && radius >= 1.0) {
        return Err(Error::invalid(format!(
            "sigma {sigma} gives no blur support"
        )));
    }
    let kernel = Kernel1D::gaussian_truncated(sigma, radius as usize)?;
    Ok(convolve_separable(img, &kernel))
}

/// Horizontal pass then vertical pass with the same kernel. Each output
/// sample accumulates taps in ascending order, so the result does not
/// depend on how rows are scheduled.
pub(crate) fn convolve_separable(img: &Raster, kernel: &Kernel1D) -> Raster {
    let (w, h) = (img.width(), img.height());
    let r = kernel.radius();
    let weights = kernel.weights();
    let src = img.samples();

    // rows are padded with replicated edge samples so every tap is a plain
    // slice offset; the accumulation order per pixel is still k = 0..taps
    let mut horizontal = vec![0.0; w * h];
    let mut padded = vec![0.0; w + 2 * r];
    for (row_in, row_out) in src.chunks_exact(w).zip(horizontal.chunks_exact_mut(w)) {
        for (i, p) in padded.iter_mut().enumerate() {
            *p = row_in[clamp_index(i as isize - r as isize, w)];
        }
        for (k, wk) in weights.iter().enumerate() {
            for (o, s) in row_out.iter_mut().zip(&padded[k..k + w]) {
                *o += wk * s;
            }
        }
    }

    let mut out = vec![0.0; w * h];
    for (y, row_out) in out.chunks_exact_mut(w).enumerate() {
        for (k, wk) in weights.iter().enumerate() {
            let yi = clamp_index(y as isize + k as isize - r as isize, h);
            let row_in = &horizontal[yi * w..(yi + 1) * w];
            for (o, s) in row_out.iter_mut().zip(row_in) {
                *o += wk * s;
            }
        }
        for o in row_out.iter_mut() {
            *o = o.clamp(0.0, 1.0);
        }
    }
    Raster::from_valid(w, h, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radius_one_kernel_is_normalized_and_symmetric() {
        let k = gaussian_kernel(1).unwrap();
        assert_eq!(k.taps(), 3);
        let w = k.weights();
        assert_eq!(w[0], w[2]);
        assert!((w.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn radius_three_center_weight_matches_hand_value() {
        // sigma = 1: g(x) = exp(-x^2 / 2) on x in [-3, 3]
        let g: Vec<f64> = (-3..=3)
            .map(|x: i32| (-(x * x) as f64 / 2.0).exp())
            .collect();
        let expected = 1.0 / g.iter().sum::<f64>();
        let k = gaussian_kernel(3).unwrap();
        assert!((k.weights()[3] - expected).abs() < 1e-15);
        assert!((expected - 0.399_050_279_652_450_2).abs() < 1e-12);
    }

    #[test]
    fn weights_decrease_away_from_center() {
        for r in [1, 2, 5, 10, 50, 150, 200] {
            let k = gaussian_kernel(r).unwrap();
            let w = k.weights();
            assert!((w.iter().sum::<f64>() - 1.0).abs() <= 1e-12, "r={r}");
            for i in 0..w.len() {
                assert_eq!(w[i], w[w.len() - 1 - i]);
            }
            for i in r..w.len() - 1 {
                assert!(w[i + 1] < w[i], "r={r} i={i}");
            }
        }
    }

    #[test]
    fn zero_radius_is_rejected_for_kernels() {
        assert!(matches!(
            gaussian_kernel(0),
            Err(Error::InvalidParameter(_))
        ));
        assert!(gaussian_blur_sigma(&Raster::filled(2, 2, 0.5).unwrap(), 0.0).is_err());
    }

    #[test]
    fn radius_zero_blur_is_identity() {
        let img = Raster::from_fn(7, 5, |x, y| ((x * 3 + y * 5) % 11) as f64 / 10.0).unwrap();
        assert_eq!(gaussian_blur(&img, 0), img);
    }

    #[test]
    fn constant_image_stays_constant() {
        let img = Raster::filled(40, 30, 0.37).unwrap();
        for r in [1, 4, 25, 60] {
            for s in gaussian_blur(&img, r).samples() {
                assert!((s - 0.37).abs() <= 1e-12);
            }
        }
    }
}
