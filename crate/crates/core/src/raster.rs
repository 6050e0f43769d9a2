//! Grayscale rasters and elevation grids.
//!
//! A [`Raster`] always holds finite samples in `[0, 1]`; operations that
//! can overshoot build a [`RawImage`] first and pass it through
//! [`clamp_unit`].
//!
//! Samples are stored on a fixed grid of `2^-53` steps. On that grid
//! `1 - s` is exact, so inversion is an exact involution, and sums of
//! samples can be formed exactly in integers (see [`Raster::grid_units`]).

use crate::error::{Error, Result};

/// Number of grid steps in the unit interval.
pub const SAMPLE_GRID: f64 = (1u64 << 53) as f64;

/// Rounds a unit-interval value onto the sample grid.
#[inline]
pub fn snap(s: f64) -> f64 {
    (s * SAMPLE_GRID).round() / SAMPLE_GRID
}

/// Grayscale image with unit-interval samples stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Raster {
    width: usize,
    height: usize,
    samples: Vec<f64>,
}

/// Unvalidated real-valued image, the input of [`clamp_unit`].
#[derive(Debug, Clone, PartialEq)]
pub struct RawImage {
    pub width: usize,
    pub height: usize,
    pub samples: Vec<f64>,
}

fn check_dims(width: usize, height: usize, len: usize) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::invalid(format!(
            "raster dimensions must be positive, got {width}x{height}"
        )));
    }
    match width.checked_mul(height) {
        Some(n) if n == len => Ok(()),
        _ => Err(Error::invalid(format!(
            "sample count {len} does not match {width}x{height}"
        ))),
    }
}

impl Raster {
    pub fn new(width: usize, height: usize, samples: Vec<f64>) -> Result<Self> {
        check_dims(width, height, samples.len())?;
        if let Some((i, s)) = samples
            .iter()
            .enumerate()
            .find(|(_, s)| !(s.is_finite() && (0.0..=1.0).contains(*s)))
        {
            return Err(Error::invalid(format!(
                "sample {i} = {s} is outside [0, 1]"
            )));
        }
        let mut samples = samples;
        samples.iter_mut().for_each(|s| *s = snap(*s));
        Ok(Self {
            width,
            height,
            samples,
        })
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Result<Self> {
        Self::new(width, height, vec![value; width.saturating_mul(height)])
    }

    /// Builds a raster by evaluating `f(x, y)` at every pixel.
    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> f64,
    ) -> Result<Self> {
        let mut samples = Vec::with_capacity(width.saturating_mul(height));
        for y in 0..height {
            for x in 0..width {
                samples.push(f(x, y));
            }
        }
        Self::new(width, height, samples)
    }

    /// Wraps samples that the caller guarantees are already valid.
    pub(crate) fn from_valid(width: usize, height: usize, mut samples: Vec<f64>) -> Self {
        debug_assert_eq!(samples.len(), width * height);
        debug_assert!(samples.iter().all(|s| (0.0..=1.0).contains(s)));
        samples.iter_mut().for_each(|s| *s = snap(*s));
        Self {
            width,
            height,
            samples,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.samples[y * self.width + x]
    }

    pub fn same_shape(&self, other: &Raster) -> bool {
        self.width == other.width && self.height == other.height
    }

    pub(crate) fn ensure_same_shape(&self, other: &Raster) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::Shape {
                left_w: self.width,
                left_h: self.height,
                right_w: other.width,
                right_h: other.height,
            })
        }
    }

    /// Applies a per-sample map whose output is known to stay in `[0, 1]`.
    pub(crate) fn map_valid(&self, f: impl Fn(f64) -> f64) -> Raster {
        Raster::from_valid(
            self.width,
            self.height,
            self.samples.iter().map(|&s| f(s)).collect(),
        )
    }

    /// Samples as exact integer multiples of the grid step.
    pub fn grid_units(&self) -> impl Iterator<Item = u64> + '_ {
        self.samples.iter().map(|&s| (s * SAMPLE_GRID) as u64)
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.samples.len() as f64
    }

    /// Population variance of the samples.
    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        self.samples
            .iter()
            .map(|s| (s - mean) * (s - mean))
            .sum::<f64>()
            / self.samples.len() as f64
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.samples
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &s| {
                (lo.min(s), hi.max(s))
            })
    }
}

/// Clamps every sample into `[0, 1]`.
pub fn clamp_unit(img: RawImage) -> Result<Raster> {
    check_dims(img.width, img.height, img.samples.len())?;
    let mut samples = img.samples;
    for (i, s) in samples.iter_mut().enumerate() {
        if !s.is_finite() {
            return Err(Error::Numeric(format!("sample {i} is {s}")));
        }
        *s = snap(s.clamp(0.0, 1.0));
    }
    Ok(Raster {
        width: img.width,
        height: img.height,
        samples,
    })
}

impl From<Raster> for RawImage {
    fn from(r: Raster) -> Self {
        RawImage {
            width: r.width,
            height: r.height,
            samples: r.samples,
        }
    }
}

/// Real-valued elevation grid, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Heightmap {
    width: usize,
    height: usize,
    elevations: Vec<f64>,
    cell_size: f64,
}

impl Heightmap {
    pub fn new(width: usize, height: usize, elevations: Vec<f64>, cell_size: f64) -> Result<Self> {
        check_dims(width, height, elevations.len())?;
        if !(cell_size.is_finite() && cell_size > 0.0) {
            return Err(Error::invalid(format!(
                "cell_size must be positive, got {cell_size}"
            )));
        }
        if let Some(i) = elevations.iter().position(|e| !e.is_finite()) {
            return Err(Error::Numeric(format!("elevation {i} is not finite")));
        }
        Ok(Self {
            width,
            height,
            elevations,
            cell_size,
        })
    }

    pub fn flat(width: usize, height: usize, elevation: f64, cell_size: f64) -> Result<Self> {
        Self::new(
            width,
            height,
            vec![elevation; width.saturating_mul(height)],
            cell_size,
        )
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        cell_size: f64,
        mut f: impl FnMut(usize, usize) -> f64,
    ) -> Result<Self> {
        let mut elevations = Vec::with_capacity(width.saturating_mul(height));
        for y in 0..height {
            for x in 0..width {
                elevations.push(f(x, y));
            }
        }
        Self::new(width, height, elevations, cell_size)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    pub fn elevations(&self) -> &[f64] {
        &self.elevations
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.elevations[y * self.width + x]
    }

    pub fn same_shape(&self, other: &Heightmap) -> bool {
        self.width == other.width && self.height == other.height
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.elevations
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &e| {
                (lo.min(e), hi.max(e))
            })
    }

    pub fn sum(&self) -> f64 {
        self.elevations.iter().sum()
    }

    /// Linear map of elevations onto `[0, 1]`; a flat map becomes all zeros.
    pub fn normalized(&self) -> Raster {
        let samples = self.unit_positions();
        Raster::from_valid(self.width, self.height, samples)
    }

    /// Position of each elevation within `[min, max]`. Both ends are halved
    /// first so the span cannot overflow.
    pub(crate) fn unit_positions(&self) -> Vec<f64> {
        let (lo, hi) = self.min_max();
        let span = hi / 2.0 - lo / 2.0;
        self.elevations
            .iter()
            .map(|&e| {
                if span > 0.0 {
                    ((e / 2.0 - lo / 2.0) / span).clamp(0.0, 1.0)
                } else {
                    0.0
                }
            })
            .collect()
    }

    pub(crate) fn with_elevations(&self, elevations: Vec<f64>) -> Heightmap {
        debug_assert_eq!(elevations.len(), self.elevations.len());
        Heightmap {
            width: self.width,
            height: self.height,
            elevations,
            cell_size: self.cell_size,
        }
    }
}
