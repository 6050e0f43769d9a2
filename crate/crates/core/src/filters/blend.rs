use crate::error::{Error, Result};
use crate::raster::Raster;

#[inline]
fn overlay(b: f64, t: f64) -> f64 {
    if b <= 0.5 {
        2.0 * b * t
    } else {
        1.0 - 2.0 * (1.0 - b) * (1.0 - t)
    }
}

/// Overlay blend of `top` onto `base`, mixed back with `base` at `opacity`.
pub fn overlay_blend(base: &Raster, top: &Raster, opacity: f64) -> Result<Raster> {
    base.ensure_same_shape(top)?;
    if !(0.0..=1.0).contains(&opacity) {
        return Err(Error::invalid(format!("opacity {opacity} not in [0, 1]")));
    }
    let keep = 1.0 - opacity;
    let samples = base
        .samples()
        .iter()
        .zip(top.samples())
        .map(|(&b, &t)| (keep * b + opacity * overlay(b, t)).clamp(0.0, 1.0))
        .collect();
    Ok(Raster::from_valid(base.width(), base.height(), samples))
}
