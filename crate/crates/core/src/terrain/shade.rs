use crate::error::{Error, Result};
use crate::filters::clamp_index;
use crate::pipeline::{reveal, RevealParams};
use crate::raster::{Heightmap, Raster};

use super::sin_cos_deg;

/// Directional light: azimuth clockwise from north, elevation above the
/// horizon, both in degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LightSpec {
    azimuth_deg: f64,
    elevation_deg: f64,
}

impl LightSpec {
    pub fn new(azimuth_deg: f64, elevation_deg: f64) -> Result<Self> {
        if !(0.0..360.0).contains(&azimuth_deg) {
            return Err(Error::invalid(format!(
                "azimuth {azimuth_deg} not in [0, 360)"
            )));
        }
        if !(elevation_deg > 0.0 && elevation_deg <= 90.0) {
            return Err(Error::invalid(format!(
                "elevation {elevation_deg} not in (0, 90]"
            )));
        }
        Ok(Self {
            azimuth_deg,
            elevation_deg,
        })
    }

    pub fn azimuth_deg(&self) -> f64 {
        self.azimuth_deg
    }

    pub fn elevation_deg(&self) -> f64 {
        self.elevation_deg
    }

    /// Unit vector toward the light in (x right, y down, z up) pixel space.
    pub fn direction(&self) -> [f64; 3] {
        let (sa, ca) = sin_cos_deg(self.azimuth_deg);
        let (se, ce) = sin_cos_deg(self.elevation_deg);
        [sa * ce, -ca * ce, se]
    }
}

/// Lambertian shading `max(0, n . l)` with central-difference normals.
/// Edge pixels use the one-sided difference toward the interior.
pub fn hillshade(h: &Heightmap, light: &LightSpec) -> Result<Raster> {
    let (w, ht) = (h.width(), h.height());
    if w < 2 || ht < 2 {
        return Err(Error::ImageTooSmall {
            width: w,
            height: ht,
            min: 2,
        });
    }
    let [lx, ly, lz] = light.direction();
    let cell = h.cell_size();
    let mut out = Vec::with_capacity(w * ht);
    for y in 0..ht {
        let (yu, yd) = (
            clamp_index(y as isize - 1, ht),
            clamp_index(y as isize + 1, ht),
        );
        for x in 0..w {
            let (xl, xr) = (
                clamp_index(x as isize - 1, w),
                clamp_index(x as isize + 1, w),
            );
            let dzdx = (h.get(xr, y) - h.get(xl, y)) / ((xr - xl) as f64 * cell);
            let dzdy = (h.get(x, yd) - h.get(x, yu)) / ((yd - yu) as f64 * cell);
            let norm = (dzdx * dzdx + dzdy * dzdy + 1.0).sqrt();
            let lambert = (-dzdx * lx - dzdy * ly + lz) / norm;
            out.push(lambert.clamp(0.0, 1.0));
        }
    }
    Raster::new(w, ht, out)
}

/// Hillshade followed by [`reveal`] for each azimuth, in input order.
pub fn illumination_sweep(
    h: &Heightmap,
    azimuths: &[f64],
    elevation_deg: f64,
    params: &RevealParams,
) -> Result<Vec<(f64, Raster)>> {
    if azimuths.is_empty() {
        return Err(Error::invalid("sweep needs at least one azimuth"));
    }
    params.validate()?;
    let lights = azimuths
        .iter()
        .map(|&a| LightSpec::new(a, elevation_deg))
        .collect::<Result<Vec<_>>>()?;
    lights
        .iter()
        .map(|light| {
            let shaded = hillshade(h, light)?;
            Ok((light.azimuth_deg(), reveal(&shaded, params)?.output))
        })
        .collect()
}
