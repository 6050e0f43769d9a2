//! The face-terrain fixture manifest.
//!
//! The manifest at `fixtures/face.toml` fixes every parameter of the
//! synthetic face (mound, eyes, rubble, lighting, erosion presets) together
//! with the thresholds the acceptance suite checks against.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::raster::{Heightmap, Raster};
use crate::terrain::{
    carve_features, hillshade, sin_cos_deg, synth_mound, ErosionParams, Feature, LightSpec,
    TerrainParams,
};

pub const FACE_MANIFEST: &str = include_str!("../fixtures/face.toml");

#[derive(Debug, Clone, Deserialize)]
pub struct TerrainSection {
    pub width: usize,
    pub height: usize,
    pub cell_size: f64,
    pub peak_height: f64,
    pub ridge_axis_deg: f64,
    pub major_sigma_frac: f64,
    pub minor_sigma_frac: f64,
    pub noise_amplitude: f64,
    pub noise_scale_frac: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct EyesSection {
    pub along_frac: f64,
    pub across_frac: f64,
    pub radius_frac: f64,
    pub depth: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct RenderSection {
    pub azimuth_deg: f64,
    pub elevation_deg: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct MarginSection {
    pub r_inner_frac: f64,
    pub r_outer_frac: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct SweepSection {
    pub elevation_deg: f64,
    pub azimuth_start: f64,
    pub azimuth_stop: f64,
    pub azimuth_step: f64,
    pub blur_radius_px: usize,
    pub margin_floor: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct ErosionSection {
    pub diffusion_steps: usize,
    pub diffusion_rate: f64,
    pub crater_count: usize,
    pub crater_radius_px: (f64, f64),
    pub crater_depth: (f64, f64),
    pub seed: u64,
}

impl ErosionSection {
    pub fn params(&self) -> ErosionParams {
        ErosionParams {
            diffusion_steps: self.diffusion_steps,
            diffusion_rate: self.diffusion_rate,
            crater_count: self.crater_count,
            crater_radius_px: self.crater_radius_px,
            crater_depth: self.crater_depth,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct ErosionPresets {
    pub diffusion_only: ErosionSection,
    pub cataclysm: ErosionSection,
}

#[derive(Debug, Clone, Deserialize)]
pub struct PersistenceSection {
    pub blur_radius_px: usize,
    pub min_gain_cataclysm: f64,
    pub min_blurred_diffusion: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct SymmetrySection {
    pub size: usize,
    pub angle_step_deg: f64,
    pub rotation_deg: f64,
    pub min_score: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct FaceManifest {
    pub terrain: TerrainSection,
    pub eyes: EyesSection,
    pub render: RenderSection,
    pub margin: MarginSection,
    pub sweep: SweepSection,
    pub erosion: ErosionPresets,
    pub persistence: PersistenceSection,
    pub symmetry: SymmetrySection,
}

/// Size and orientation of one face rendering.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaceLayout {
    pub width: usize,
    pub height: usize,
    pub ridge_axis_deg: f64,
    pub with_noise: bool,
}

impl FaceManifest {
    pub fn builtin() -> Self {
        Self::parse(FACE_MANIFEST).expect("bundled manifest parses")
    }

    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse {
            offset: e.span().map_or(0, |s| s.start),
            reason: e.message().to_string(),
        })
    }

    /// Full-size, noisy layout as listed in the manifest.
    pub fn layout(&self) -> FaceLayout {
        FaceLayout {
            width: self.terrain.width,
            height: self.terrain.height,
            ridge_axis_deg: self.terrain.ridge_axis_deg,
            with_noise: true,
        }
    }

    fn side(layout: &FaceLayout) -> f64 {
        layout.width.min(layout.height) as f64
    }

    pub fn terrain_params(&self, layout: &FaceLayout) -> TerrainParams {
        let side = Self::side(layout);
        let t = &self.terrain;
        TerrainParams {
            width: layout.width,
            height: layout.height,
            peak_height: t.peak_height,
            ridge_axis_deg: layout.ridge_axis_deg,
            noise_amplitude: if layout.with_noise {
                t.noise_amplitude
            } else {
                0.0
            },
            seed: t.seed,
            major_sigma_px: t.major_sigma_frac * side,
            minor_sigma_px: t.minor_sigma_frac * side,
            noise_scale_px: t.noise_scale_frac * side,
            cell_size: t.cell_size,
        }
    }

    /// Eye centers in pixel coordinates, the left-hand eye (seen looking
    /// along the ridge) first.
    pub fn eye_centers(&self, layout: &FaceLayout) -> [(f64, f64); 2] {
        let side = Self::side(layout);
        let (cx, cy) = (
            (layout.width as f64 - 1.0) / 2.0,
            (layout.height as f64 - 1.0) / 2.0,
        );
        let (s, c) = sin_cos_deg(layout.ridge_axis_deg);
        let along = (c, -s);
        let across = (s, c);
        let a = self.eyes.along_frac * side;
        let b = self.eyes.across_frac * side;
        [
            (
                cx + a * along.0 - b * across.0,
                cy + a * along.1 - b * across.1,
            ),
            (
                cx + a * along.0 + b * across.0,
                cy + a * along.1 + b * across.1,
            ),
        ]
    }

    pub fn eye_features(&self, layout: &FaceLayout, depth: f64) -> Vec<Feature> {
        let radius_px = self.eyes.radius_frac * Self::side(layout);
        self.eye_centers(layout)
            .into_iter()
            .map(|center| Feature {
                center,
                radius_px,
                depth,
            })
            .collect()
    }

    pub fn heightmap(&self, layout: &FaceLayout) -> Result<Heightmap> {
        let mound = synth_mound(&self.terrain_params(layout))?;
        carve_features(&mound, &self.eye_features(layout, self.eyes.depth))
    }

    pub fn render_light(&self) -> Result<LightSpec> {
        LightSpec::new(self.render.azimuth_deg, self.render.elevation_deg)
    }

    /// Hillshade of the full-size face under the manifest light.
    pub fn raster(&self) -> Result<Raster> {
        hillshade(&self.heightmap(&self.layout())?, &self.render_light()?)
    }

    /// Disk and annulus radii for eye margins.
    pub fn margin_radii(&self, layout: &FaceLayout) -> (f64, f64) {
        let side = Self::side(layout);
        (
            self.margin.r_inner_frac * side,
            self.margin.r_outer_frac * side,
        )
    }

    pub fn sweep_azimuths(&self) -> Vec<f64> {
        let s = &self.sweep;
        let mut out = Vec::new();
        let mut k = 0usize;
        loop {
            let a = s.azimuth_start + k as f64 * s.azimuth_step;
            if a >= s.azimuth_stop {
                break;
            }
            out.push(a);
            k += 1;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_manifest_parses() {
        let m = FaceManifest::builtin();
        assert_eq!(m.terrain.width, 1024);
        assert_eq!(m.sweep_azimuths().len(), 12);
        m.erosion.diffusion_only.params().validate().unwrap();
        m.erosion.cataclysm.params().validate().unwrap();
    }

    #[test]
    fn eyes_mirror_about_the_ridge() {
        let m = FaceManifest::builtin();
        let layout = FaceLayout {
            width: 101,
            height: 101,
            ridge_axis_deg: 90.0,
            with_noise: false,
        };
        let [l, r] = m.eye_centers(&layout);
        assert!((l.0 + r.0 - 100.0).abs() < 1e-12);
        assert_eq!(l.1, r.1);
        assert!(l.1 < 50.0, "eyes sit above the center");
        assert!(l.0 < r.0);
    }

    #[test]
    fn bad_manifest_reports_location() {
        assert!(matches!(
            FaceManifest::parse("[terrain]\nwidth = 'x'\n"),
            Err(Error::Parse { .. })
        ));
    }
}
