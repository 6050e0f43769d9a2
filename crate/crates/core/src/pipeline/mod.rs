//! Declarative filter pipelines.
//!
//! A [`PipelineSpec`] is an ordered list of [`Step`]s. Steps may label
//! their output with `as <name>`; overlay steps composite the running image
//! (the top layer) over a previously labeled image (the base layer).

mod ladder;
mod reveal;
mod script;

pub use ladder::{
    blur_ladder, contact_sheet, contact_sheet_size, BlurLadder, LADDER_RADII, SHEET_GUTTER,
};
pub use reveal::{reveal, reveal_script, RevealOutput, RevealParams, REVEAL_LABELS};
pub use script::parse_pipeline_script;

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::filters::{
    autocontrast, gaussian_blur, gaussian_blur_sigma, invert, levels, levels_to_peak,
    overlay_blend, sobel_magnitude, unsharp_mask, LevelsParams,
};
use crate::raster::Raster;

/// Registered step names, in documentation order.
pub const OPERATIONS: [&str; 8] = [
    "blur",
    "levels",
    "autocontrast",
    "sobel",
    "invert",
    "unsharp",
    "overlay",
    "clamp",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BlurSize {
    /// Pixel radius, `sigma = radius / 3`.
    Radius(usize),
    /// Standard deviation in pixels, support `ceil(3 * sigma)`.
    Sigma(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WhitePoint {
    Fixed(f64),
    /// The maximum sample of the image being adjusted.
    Peak,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Operation {
    Blur(BlurSize),
    Levels {
        black: f64,
        white: WhitePoint,
        gamma: f64,
    },
    Autocontrast {
        low: f64,
        high: f64,
    },
    Sobel,
    Invert,
    Unsharp {
        radius: usize,
        amount: f64,
    },
    Overlay {
        opacity: f64,
        base: String,
    },
    Clamp,
}

impl Operation {
    pub fn name(&self) -> &'static str {
        match self {
            Operation::Blur(_) => "blur",
            Operation::Levels { .. } => "levels",
            Operation::Autocontrast { .. } => "autocontrast",
            Operation::Sobel => "sobel",
            Operation::Invert => "invert",
            Operation::Unsharp { .. } => "unsharp",
            Operation::Overlay { .. } => "overlay",
            Operation::Clamp => "clamp",
        }
    }

    fn check(&self) -> std::result::Result<(), String> {
        match *self {
            Operation::Blur(BlurSize::Sigma(s)) if !(s.is_finite() && s > 0.0) => {
                Err(format!("blur sigma {s} must be positive"))
            }
            Operation::Levels {
                black,
                white,
                gamma,
            } => {
                let white = match white {
                    WhitePoint::Fixed(w) => w,
                    WhitePoint::Peak => 1.0,
                };
                LevelsParams::new(black, white, gamma)
                    .map(|_| ())
                    .map_err(|e| e.to_string())
            }
            Operation::Autocontrast { low, high } => {
                if low >= 0.0 && high >= 0.0 && low + high < 100.0 {
                    Ok(())
                } else {
                    Err(format!(
                        "autocontrast clips {low}/{high} must be non-negative and sum below 100"
                    ))
                }
            }
            Operation::Unsharp { radius, amount } => {
                if radius < 1 {
                    Err("unsharp radius must be at least 1".into())
                } else if !(amount.is_finite() && amount >= 0.0) {
                    Err(format!("unsharp amount {amount} must be non-negative"))
                } else {
                    Ok(())
                }
            }
            Operation::Overlay { opacity, .. } if !(0.0..=1.0).contains(&opacity) => {
                Err(format!("overlay opacity {opacity} not in [0, 1]"))
            }
            _ => Ok(()),
        }
    }

    fn apply(&self, img: &Raster, labeled: &[(String, Raster)]) -> Result<Raster> {
        Ok(match self {
            Operation::Blur(BlurSize::Radius(r)) => gaussian_blur(img, *r),
            Operation::Blur(BlurSize::Sigma(s)) => gaussian_blur_sigma(img, *s)?,
            Operation::Levels {
                black,
                white: WhitePoint::Fixed(white),
                gamma,
            } => levels(img, LevelsParams::new(*black, *white, *gamma)?),
            Operation::Levels {
                black,
                white: WhitePoint::Peak,
                gamma,
            } => {
                let (_, peak) = img.min_max();
                if *black == 0.0 {
                    levels_to_peak(img, *gamma)?
                } else if peak > *black {
                    levels(img, LevelsParams::new(*black, peak, *gamma)?)
                } else {
                    img.map_valid(|_| 0.0)
                }
            }
            Operation::Autocontrast { low, high } => autocontrast(img, *low, *high)?,
            Operation::Sobel => sobel_magnitude(img)?,
            Operation::Invert => invert(img),
            Operation::Unsharp { radius, amount } => unsharp_mask(img, *radius, *amount)?,
            Operation::Overlay { opacity, base } => {
                let base = labeled
                    .iter()
                    .rev()
                    .find(|(name, _)| name == base)
                    .map(|(_, r)| r)
                    .expect("labels checked at validation");
                overlay_blend(base, img, *opacity)?
            }
            Operation::Clamp => img.clone(),
        })
    }
}

/// One pipeline step, with its source position for error reporting.
#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub op: Operation,
    pub label: Option<String>,
    pub line: usize,
    pub column: usize,
}

impl Step {
    pub fn new(op: Operation) -> Self {
        Self {
            op,
            label: None,
            line: 0,
            column: 1,
        }
    }

    pub fn labeled(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PipelineSpec {
    steps: Vec<Step>,
}

impl PipelineSpec {
    /// Validates parameters and label references. Steps with `line == 0`
    /// are numbered by position.
    pub fn new(mut steps: Vec<Step>) -> Result<Self> {
        let mut seen = HashSet::new();
        for (i, step) in steps.iter_mut().enumerate() {
            if step.line == 0 {
                step.line = i + 1;
            }
            let fail = |reason: String| Error::Validation {
                line: step.line,
                column: step.column,
                reason,
            };
            step.op.check().map_err(fail)?;
            if let Operation::Overlay { base, .. } = &step.op {
                if !seen.contains(base.as_str()) {
                    return Err(fail(format!("overlay references unknown label '{base}'")));
                }
            }
            if let Some(label) = &step.label {
                seen.insert(label.clone());
            }
        }
        Ok(Self { steps })
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Final image plus every labeled intermediate, in step order.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOutput {
    pub output: Raster,
    pub intermediates: Vec<(String, Raster)>,
}

impl PipelineOutput {
    pub fn intermediate(&self, label: &str) -> Option<&Raster> {
        self.intermediates
            .iter()
            .rev()
            .find(|(name, _)| name == label)
            .map(|(_, r)| r)
    }
}

pub fn run_pipeline(img: &Raster, spec: &PipelineSpec) -> Result<PipelineOutput> {
    let mut current = img.clone();
    let mut intermediates: Vec<(String, Raster)> = Vec::new();
    for step in spec.steps() {
        current = step.op.apply(&current, &intermediates)?;
        if let Some(label) = &step.label {
            intermediates.push((label.clone(), current.clone()));
        }
    }
    Ok(PipelineOutput {
        output: current,
        intermediates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn noise(w: usize, h: usize) -> Raster {
        let mut state = 0x2545_f491_4f6c_dd1du64;
        Raster::from_fn(w, h, |_, _| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        })
        .unwrap()
    }

    #[test]
    fn empty_spec_is_identity() {
        let img = noise(8, 8);
        let spec = PipelineSpec::new(vec![]).unwrap();
        let out = run_pipeline(&img, &spec).unwrap();
        assert_eq!(out.output, img);
        assert!(out.intermediates.is_empty());
    }

    #[test]
    fn double_invert_is_identity() {
        let img = noise(9, 4);
        let spec = PipelineSpec::new(vec![
            Step::new(Operation::Invert),
            Step::new(Operation::Invert),
        ])
        .unwrap();
        assert_eq!(run_pipeline(&img, &spec).unwrap().output, img);
    }

    #[test]
    fn overlay_requires_earlier_label() {
        let err = PipelineSpec::new(vec![
            Step::new(Operation::Invert),
            Step::new(Operation::Overlay {
                opacity: 0.5,
                base: "missing".into(),
            }),
        ])
        .unwrap_err();
        assert!(matches!(err, Error::Validation { line: 2, .. }));
    }

    #[test]
    fn overlay_uses_labeled_base() {
        let img = noise(6, 6);
        let spec = PipelineSpec::new(vec![
            Step::new(Operation::Clamp).labeled("base"),
            Step::new(Operation::Invert),
            Step::new(Operation::Overlay {
                opacity: 0.3,
                base: "base".into(),
            }),
        ])
        .unwrap();
        let out = run_pipeline(&img, &spec).unwrap();
        let expected = overlay_blend(&img, &invert(&img), 0.3).unwrap();
        assert_eq!(out.output, expected);
        assert_eq!(out.intermediate("base"), Some(&img));
    }

    #[test]
    fn invalid_parameters_fail_validation() {
        let bad = [
            Operation::Blur(BlurSize::Sigma(0.0)),
            Operation::Levels {
                black: 0.6,
                white: WhitePoint::Fixed(0.4),
                gamma: 1.0,
            },
            Operation::Autocontrast {
                low: 60.0,
                high: 40.0,
            },
            Operation::Unsharp {
                radius: 0,
                amount: 1.0,
            },
        ];
        for op in bad {
            assert!(matches!(
                PipelineSpec::new(vec![Step::new(op)]),
                Err(Error::Validation { line: 1, .. })
            ));
        }
    }

    #[test]
    fn two_blurs_match_sigma_matched_single_blur() {
        let img = noise(96, 96);
        let twice = PipelineSpec::new(vec![
            Step::new(Operation::Blur(BlurSize::Radius(10))),
            Step::new(Operation::Blur(BlurSize::Radius(10))),
        ])
        .unwrap();
        let sigma = (2.0f64).sqrt() * 10.0 / 3.0;
        let once =
            PipelineSpec::new(vec![Step::new(Operation::Blur(BlurSize::Sigma(sigma)))]).unwrap();
        let a = run_pipeline(&img, &twice).unwrap().output;
        let b = run_pipeline(&img, &once).unwrap().output;
        let margin = 20;
        let mut worst = 0.0f64;
        for y in margin..96 - margin {
            for x in margin..96 - margin {
                worst = worst.max((a.get(x, y) - b.get(x, y)).abs());
            }
        }
        assert!(worst <= 1e-3, "max interior error {worst}");
    }

    #[test]
    fn peak_levels_with_nonzero_black() {
        let img = Raster::new(3, 1, vec![0.1, 0.3, 0.5]).unwrap();
        let op = Operation::Levels {
            black: 0.1,
            white: WhitePoint::Peak,
            gamma: 1.0,
        };
        let out = op.apply(&img, &[]).unwrap();
        assert_eq!(out.samples()[0], 0.0);
        assert_eq!(out.samples()[2], 1.0);
        let dark = Raster::new(2, 1, vec![0.05, 0.1]).unwrap();
        assert_eq!(op.apply(&dark, &[]).unwrap().samples(), &[0.0, 0.0]);
    }
}
