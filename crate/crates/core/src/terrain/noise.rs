//! Seeded lattice value noise with smoothstep interpolation.

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Lattice value in `[-1, 1]`.
fn lattice(seed: u64, octave: u32, ix: i64, iy: i64) -> f64 {
    let h = splitmix64(
        seed ^ splitmix64(u64::from(octave) ^ splitmix64((ix as u64) ^ splitmix64(iy as u64))),
    );
    (h >> 11) as f64 / (1u64 << 52) as f64 - 1.0
}

#[inline]
fn smoothstep(t: f64) -> f64 {
    t * t * (3.0 - 2.0 * t)
}

#[derive(Debug, Clone, Copy)]
pub struct ValueNoise {
    pub seed: u64,
    /// Lattice spacing of the coarsest octave, in pixels.
    pub scale_px: f64,
    pub octaves: u32,
}

impl ValueNoise {
    fn octave(&self, octave: u32, x: f64, y: f64) -> f64 {
        let x0 = x.floor();
        let y0 = y.floor();
        let (tx, ty) = (smoothstep(x - x0), smoothstep(y - y0));
        let (ix, iy) = (x0 as i64, y0 as i64);
        let v00 = lattice(self.seed, octave, ix, iy);
        let v10 = lattice(self.seed, octave, ix + 1, iy);
        let v01 = lattice(self.seed, octave, ix, iy + 1);
        let v11 = lattice(self.seed, octave, ix + 1, iy + 1);
        let top = v00 + tx * (v10 - v00);
        let bottom = v01 + tx * (v11 - v01);
        top + ty * (bottom - top)
    }

    /// Fractal sum of octaves (lacunarity 2, gain 0.5), scaled into `[-1, 1]`.
    pub fn sample(&self, x: f64, y: f64) -> f64 {
        let mut total = 0.0;
        let mut norm = 0.0;
        let mut amp = 1.0;
        let mut freq = 1.0 / self.scale_px;
        for o in 0..self.octaves {
            total += amp * self.octave(o, x * freq, y * freq);
            norm += amp;
            amp *= 0.5;
            freq *= 2.0;
        }
        total / norm
    }
}
