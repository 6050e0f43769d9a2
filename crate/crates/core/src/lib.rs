//! Macro-scale structure in grayscale imagery.
//!
//! The toolkit blurs an image at increasing radii, stretches its contrast,
//! extracts and inverts Sobel edges and overlays them back at low opacity,
//! so that large shapes hidden under fine rubble become readable. A
//! synthetic terrain side builds mound-and-eyes heightmaps, shades them
//! under arbitrary lights, erodes them, and measures how much of the large
//! structure survives.
//!
//! Modules:
//! - [`raster`] and [`pgm`]: image model and graymap / heightmap files
//! - [`filters`]: blur, Sobel, levels, autocontrast, unsharp mask, overlay
//! - [`pipeline`]: scripted filter chains, the reveal procedure, blur ladders
//! - [`terrain`]: mound synthesis, features, hillshade, erosion, light sweeps
//! - [`metrics`]: NCC, mirror symmetry, feature margins, persistence
//! - [`fixture`]: the committed face-terrain manifest

pub mod error;
pub mod filters;
pub mod fixture;
pub mod metrics;
pub mod pgm;
pub mod pipeline;
pub mod raster;
pub mod terrain;

pub use error::{Error, ErrorClass, Result};
pub use raster::{clamp_unit, Heightmap, Raster, RawImage};
