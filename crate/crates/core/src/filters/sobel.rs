use crate::error::{Error, Result};
use crate::raster::Raster;

use super::clamp_index;

/// Largest possible Sobel magnitude for samples in `[0, 1]`.
pub const SOBEL_MAX: f64 = 4.0 * std::f64::consts::SQRT_2;

/// Gradient magnitude of the 3x3 Sobel operator, scaled by [`SOBEL_MAX`].
pub fn sobel_magnitude(img: &Raster) -> Result<Raster> {
    let (w, h) = (img.width(), img.height());
    if w < 3 || h < 3 {
        return Err(Error::ImageTooSmall {
            width: w,
            height: h,
            min: 3,
        });
    }
    let at = |x: isize, y: isize| img.get(clamp_index(x, w), clamp_index(y, h));
    let mut out = Vec::with_capacity(w * h);
    for y in 0..h as isize {
        for x in 0..w as isize {
            let gx = (at(x + 1, y - 1) + 2.0 * at(x + 1, y) + at(x + 1, y + 1))
                - (at(x - 1, y - 1) + 2.0 * at(x - 1, y) + at(x - 1, y + 1));
            let gy = (at(x - 1, y + 1) + 2.0 * at(x, y + 1) + at(x + 1, y + 1))
                - (at(x - 1, y - 1) + 2.0 * at(x, y - 1) + at(x + 1, y - 1));
            out.push(((gx * gx + gy * gy).sqrt() / SOBEL_MAX).clamp(0.0, 1.0));
        }
    }
    Ok(Raster::from_valid(w, h, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::snap;

    #[test]
    fn constant_image_has_no_edges() {
        let img = Raster::filled(5, 4, 0.8).unwrap();
        assert!(sobel_magnitude(&img)
            .unwrap()
            .samples()
            .iter()
            .all(|&s| s == 0.0));
    }

    #[test]
    fn too_small_images_are_rejected() {
        for (w, h) in [(2, 5), (5, 2), (1, 1)] {
            let img = Raster::filled(w, h, 0.0).unwrap();
            assert!(matches!(
                sobel_magnitude(&img),
                Err(Error::ImageTooSmall { .. })
            ));
        }
    }

    #[test]
    fn horizontal_ramp_interior() {
        // delta = 1/8 keeps every sample and difference exact
        let w = 9;
        let delta = 1.0 / (w as f64 - 1.0);
        let img = Raster::from_fn(w, 5, |x, _| x as f64 * delta).unwrap();
        let mag = sobel_magnitude(&img).unwrap();
        let expected = snap(8.0 * delta / SOBEL_MAX);
        for y in 0..5 {
            for x in 1..w - 1 {
                assert_eq!(mag.get(x, y), expected);
            }
        }
        // replicated border halves the difference span
        assert_eq!(mag.get(0, 2), snap(4.0 * delta / SOBEL_MAX));
    }

    #[test]
    fn vertical_step_edge_peaks_beside_the_edge() {
        // 4 columns: 0 0 | 1 1
        let img = Raster::from_fn(4, 3, |x, _| if x >= 2 { 1.0 } else { 0.0 }).unwrap();
        let mag = sobel_magnitude(&img).unwrap();
        let peak = snap(4.0 / SOBEL_MAX);
        for y in 0..3 {
            assert_eq!(mag.get(0, y), 0.0);
            assert_eq!(mag.get(1, y), peak);
            assert_eq!(mag.get(2, y), peak);
            assert_eq!(mag.get(3, y), 0.0);
        }
    }
}
