//! Synthetic terrain: mound construction, carved features, Lambertian
//! hillshading and a diffusion-plus-craters erosion model.
//!
//! Orientation angles (`ridge_axis_deg`, symmetry axes) are measured
//! counter-clockwise from the +x axis with y pointing up on screen, so an
//! axis at `theta` runs along the pixel-space direction
//! `(cos theta, -sin theta)`. Light azimuths follow the map convention:
//! clockwise from north (the top edge of the image).

mod erosion;
mod mound;
mod noise;
mod shade;

pub use erosion::{diffuse_step, erode, ErosionParams};
pub use mound::{carve_features, synth_mound, Feature, TerrainParams};
pub use noise::ValueNoise;
pub use shade::{hillshade, illumination_sweep, LightSpec};

/// Exact sine and cosine for multiples of 90 degrees.
pub(crate) fn sin_cos_deg(deg: f64) -> (f64, f64) {
    let d = deg.rem_euclid(360.0);
    if d == 0.0 {
        (0.0, 1.0)
    } else if d == 90.0 {
        (1.0, 0.0)
    } else if d == 180.0 {
        (0.0, -1.0)
    } else if d == 270.0 {
        (-1.0, 0.0)
    } else {
        d.to_radians().sin_cos()
    }
}
