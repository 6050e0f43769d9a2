use crate::error::{Error, Result};
use crate::filters::{
    autocontrast, gaussian_blur, invert, levels_to_peak, overlay_blend, sobel_magnitude,
};
use crate::raster::Raster;

/// Names of the reveal intermediates, in the order they are produced.
pub const REVEAL_LABELS: [&str; 4] = ["blurred", "enhanced", "edges", "inverted_edges"];

/// Parameters of the blur / enhance / edge-overlay procedure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RevealParams {
    pub blur_radius_px: usize,
    pub edge_opacity: f64,
    /// Low and high clip percentages for both autocontrast steps.
    pub contrast_clip_pcts: (f64, f64),
    /// Gamma applied to the peak-normalized Sobel magnitude; below 1
    /// brightens faint edges.
    pub edge_gamma: f64,
}

impl Default for RevealParams {
    fn default() -> Self {
        Self {
            blur_radius_px: 150,
            edge_opacity: 0.09,
            contrast_clip_pcts: (1.0, 1.0),
            edge_gamma: 0.5,
        }
    }
}

impl RevealParams {
    pub fn validate(&self) -> Result<()> {
        if self.blur_radius_px < 1 {
            return Err(Error::invalid("reveal blur radius must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.edge_opacity) {
            return Err(Error::invalid(format!(
                "edge opacity {} not in [0, 1]",
                self.edge_opacity
            )));
        }
        let (lo, hi) = self.contrast_clip_pcts;
        if !(lo >= 0.0 && hi >= 0.0 && lo + hi < 100.0) {
            return Err(Error::invalid(format!(
                "contrast clips {lo}/{hi} must be non-negative and sum below 100"
            )));
        }
        if !(self.edge_gamma.is_finite() && self.edge_gamma > 0.0) {
            return Err(Error::invalid(format!(
                "edge gamma {} must be positive",
                self.edge_gamma
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RevealOutput {
    pub output: Raster,
    pub blurred: Raster,
    pub enhanced: Raster,
    pub edges: Raster,
    pub inverted_edges: Raster,
}

impl RevealOutput {
    /// Intermediates paired with their [`REVEAL_LABELS`] names.
    pub fn intermediates(&self) -> [(&'static str, &Raster); 4] {
        [
            (REVEAL_LABELS[0], &self.blurred),
            (REVEAL_LABELS[1], &self.enhanced),
            (REVEAL_LABELS[2], &self.edges),
            (REVEAL_LABELS[3], &self.inverted_edges),
        ]
    }
}

/// Blur, stretch contrast, extract and boost edges, invert them and
/// overlay them onto the enhanced image.
pub fn reveal(img: &Raster, p: &RevealParams) -> Result<RevealOutput> {
    p.validate()?;
    let (low, high) = p.contrast_clip_pcts;
    let blurred = gaussian_blur(img, p.blur_radius_px);
    let enhanced = autocontrast(&blurred, low, high)?;
    let edges = levels_to_peak(&sobel_magnitude(&enhanced)?, p.edge_gamma)?;
    let inverted_edges = autocontrast(&invert(&edges), low, high)?;
    let output = overlay_blend(&enhanced, &inverted_edges, p.edge_opacity)?;
    Ok(RevealOutput {
        output,
        blurred,
        enhanced,
        edges,
        inverted_edges,
    })
}

/// Pipeline script equivalent to [`reveal`] at the same parameters.
pub fn reveal_script(p: &RevealParams) -> String {
    let (low, high) = p.contrast_clip_pcts;
    format!(
        "blur radius={r} as {b}\n\
         autocontrast low={low:?} high={high:?} as {e}\n\
         sobel\n\
         levels black=0 white=max gamma={g:?} as {d}\n\
         invert\n\
         autocontrast low={low:?} high={high:?} as {i}\n\
         overlay opacity={o:?} with {e}\n",
        r = p.blur_radius_px,
        g = p.edge_gamma,
        o = p.edge_opacity,
        b = REVEAL_LABELS[0],
        e = REVEAL_LABELS[1],
        d = REVEAL_LABELS[2],
        i = REVEAL_LABELS[3],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::{parse_pipeline_script, run_pipeline};

    fn bumpy(w: usize, h: usize) -> Raster {
        Raster::from_fn(w, h, |x, y| {
            let (fx, fy) = (x as f64 / w as f64, y as f64 / h as f64);
            0.5 + 0.3 * (7.0 * fx).sin() * (5.0 * fy).cos()
                + 0.1 * ((x * 31 + y * 17) % 13) as f64 / 13.0
        })
        .unwrap()
    }

    #[test]
    fn constant_input_degenerates_cleanly() {
        let img = Raster::filled(40, 30, 0.3).unwrap();
        let p = RevealParams {
            blur_radius_px: 5,
            ..Default::default()
        };
        let out = reveal(&img, &p).unwrap();
        assert!(out.enhanced.samples().iter().all(|&s| s == 0.5));
        assert!(out.edges.samples().iter().all(|&s| s == 0.0));
        assert!(out.output.samples().iter().all(|&s| s == 0.5));
    }

    #[test]
    fn zero_opacity_returns_enhanced() {
        let img = bumpy(48, 40);
        let p = RevealParams {
            blur_radius_px: 4,
            edge_opacity: 0.0,
            ..Default::default()
        };
        let out = reveal(&img, &p).unwrap();
        assert_eq!(out.output, out.enhanced);
    }

    #[test]
    fn script_matches_builtin_bit_exactly() {
        let img = bumpy(64, 48);
        for p in [
            RevealParams {
                blur_radius_px: 6,
                ..Default::default()
            },
            RevealParams {
                blur_radius_px: 9,
                edge_opacity: 0.3,
                contrast_clip_pcts: (0.5, 2.0),
                edge_gamma: 0.7,
            },
        ] {
            let builtin = reveal(&img, &p).unwrap();
            let spec = parse_pipeline_script(&reveal_script(&p)).unwrap();
            let scripted = run_pipeline(&img, &spec).unwrap();
            assert_eq!(scripted.output, builtin.output);
            for (label, raster) in builtin.intermediates() {
                assert_eq!(scripted.intermediate(label), Some(raster), "{label}");
            }
        }
    }

    #[test]
    fn too_small_after_blur_is_an_error() {
        let img = Raster::filled(2, 2, 0.5).unwrap();
        assert!(reveal(&img, &RevealParams::default()).is_err());
    }

    #[test]
    fn defaults() {
        let p = RevealParams::default();
        assert_eq!(p.blur_radius_px, 150);
        assert_eq!(p.edge_opacity, 0.09);
        assert_eq!(p.contrast_clip_pcts, (1.0, 1.0));
        assert_eq!(p.edge_gamma, 0.5);
        p.validate().unwrap();
    }
}
