//! Point and convolution filters on [`Raster`](crate::Raster).
//!
//! Every neighbourhood operation here samples outside the image by
//! replicating the nearest edge pixel (clamp-to-edge).

mod blend;
mod gaussian;
mod sobel;
mod tone;

pub use blend::overlay_blend;
pub use gaussian::{gaussian_blur, gaussian_blur_sigma, gaussian_kernel, Kernel1D};
pub use sobel::{sobel_magnitude, SOBEL_MAX};
pub use tone::{
    autocontrast, invert, levels, levels_to_peak, percentile, unsharp_mask, LevelsParams,
};

#[inline]
pub(crate) fn clamp_index(i: isize, len: usize) -> usize {
    i.clamp(0, len as isize - 1) as usize
}
