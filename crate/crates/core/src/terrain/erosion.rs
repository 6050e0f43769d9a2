use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::filters::clamp_index;
use crate::raster::Heightmap;

use super::mound::{carve_features, Feature};

/// Linear diffusion followed by random crater impacts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErosionParams {
    pub diffusion_steps: usize,
    /// Explicit 5-point scheme rate; stable up to 0.25.
    pub diffusion_rate: f64,
    pub crater_count: usize,
    /// Inclusive `(min, max)` crater radius in pixels.
    pub crater_radius_px: (f64, f64),
    /// Inclusive `(min, max)` crater depth in elevation units.
    pub crater_depth: (f64, f64),
    pub seed: u64,
}

impl ErosionParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.diffusion_rate > 0.0 && self.diffusion_rate <= 0.25) {
            return Err(Error::invalid(format!(
                "diffusion rate {} not in (0, 0.25]",
                self.diffusion_rate
            )));
        }
        for (name, (lo, hi)) in [
            ("crater radius", self.crater_radius_px),
            ("crater depth", self.crater_depth),
        ] {
            if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo <= hi) {
                return Err(Error::invalid(format!(
                    "{name} range ({lo}, {hi}) must satisfy 0 < min <= max"
                )));
            }
        }
        Ok(())
    }

    /// Crater features drawn for a `width x height` grid.
    pub fn craters(&self, width: usize, height: usize) -> Vec<Feature> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let (rmin, rmax) = self.crater_radius_px;
        let (dmin, dmax) = self.crater_depth;
        (0..self.crater_count)
            .map(|_| {
                let x = rng.gen_range(0.0..=(width - 1) as f64);
                let y = rng.gen_range(0.0..=(height - 1) as f64);
                let radius_px = rng.gen_range(rmin..=rmax);
                let depth = rng.gen_range(dmin..=dmax);
                Feature {
                    center: (x, y),
                    radius_px,
                    depth: -depth,
                }
            })
            .collect()
    }
}

/// One explicit step of `h += rate * laplacian(h)` with replicated edges.
pub fn diffuse_step(h: &Heightmap, rate: f64) -> Heightmap {
    let (w, ht) = (h.width(), h.height());
    let e = h.elevations();
    let mut out = Vec::with_capacity(w * ht);
    for y in 0..ht {
        let up = clamp_index(y as isize - 1, ht) * w;
        let down = clamp_index(y as isize + 1, ht) * w;
        let row = y * w;
        for x in 0..w {
            let left = clamp_index(x as isize - 1, w);
            let right = clamp_index(x as isize + 1, w);
            let c = e[row + x];
            let n = [e[up + x], e[down + x], e[row + left], e[row + right]];
            let v = c + rate * (n[0] + n[1] + n[2] + n[3] - 4.0 * c);
            // the update is a convex combination; clamping only absorbs rounding
            let lo = n.iter().fold(c, |m, &v| m.min(v));
            let hi = n.iter().fold(c, |m, &v| m.max(v));
            out.push(v.clamp(lo, hi));
        }
    }
    h.with_elevations(out)
}

pub fn erode(h: &Heightmap, p: &ErosionParams) -> Result<Heightmap> {
    p.validate()?;
    let mut current = h.clone();
    for _ in 0..p.diffusion_steps {
        current = diffuse_step(&current, p.diffusion_rate);
    }
    if p.crater_count > 0 {
        current = carve_features(&current, &p.craters(h.width(), h.height()))?;
    }
    // extreme elevations can overflow the stencil sum
    Heightmap::new(
        current.width(),
        current.height(),
        current.elevations().to_vec(),
        current.cell_size(),
    )
}
