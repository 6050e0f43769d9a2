use crate::error::{Error, Result};
use crate::filters::gaussian_blur;
use crate::raster::Raster;

/// Blur radii of the reference ladder.
pub const LADDER_RADII: [usize; 7] = [0, 10, 20, 50, 100, 150, 200];

/// Gutter width, in pixels, around and between contact-sheet tiles.
pub const SHEET_GUTTER: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct BlurLadder {
    /// `(radius, blurred image)` in input order.
    pub rungs: Vec<(usize, Raster)>,
    pub sheet: Raster,
}

/// Sheet dimensions for `n` tiles of `w x h`: `cols = ceil(sqrt(n))`,
/// `rows = ceil(n / cols)`, width `cols * w + (cols + 1) * SHEET_GUTTER`,
/// height `rows * h + (rows + 1) * SHEET_GUTTER`.
pub fn contact_sheet_size(n: usize, w: usize, h: usize) -> (usize, usize, usize, usize) {
    let mut cols = 1;
    while cols * cols < n {
        cols += 1;
    }
    let rows = n.div_ceil(cols).max(1);
    (
        cols,
        rows,
        cols * w + (cols + 1) * SHEET_GUTTER,
        rows * h + (rows + 1) * SHEET_GUTTER,
    )
}

/// Row-major montage on a white background.
pub fn contact_sheet(tiles: &[&Raster]) -> Result<Raster> {
    let first = tiles
        .first()
        .ok_or_else(|| Error::invalid("contact sheet needs at least one tile"))?;
    for t in &tiles[1..] {
        first.ensure_same_shape(t)?;
    }
    let (w, h) = (first.width(), first.height());
    let (cols, _, sheet_w, sheet_h) = contact_sheet_size(tiles.len(), w, h);
    let mut samples = vec![1.0; sheet_w * sheet_h];
    for (i, tile) in tiles.iter().enumerate() {
        let x0 = SHEET_GUTTER + (i % cols) * (w + SHEET_GUTTER);
        let y0 = SHEET_GUTTER + (i / cols) * (h + SHEET_GUTTER);
        for (y, row) in tile.samples().chunks_exact(w).enumerate() {
            let start = (y0 + y) * sheet_w + x0;
            samples[start..start + w].copy_from_slice(row);
        }
    }
    Raster::new(sheet_w, sheet_h, samples)
}

pub fn blur_ladder(img: &Raster, radii: &[usize]) -> Result<BlurLadder> {
    if radii.is_empty() {
        return Err(Error::invalid("blur ladder needs at least one radius"));
    }
    let rungs: Vec<(usize, Raster)> = radii.iter().map(|&r| (r, gaussian_blur(img, r))).collect();
    let tiles: Vec<&Raster> = rungs.iter().map(|(_, r)| r).collect();
    let sheet = contact_sheet(&tiles)?;
    Ok(BlurLadder { rungs, sheet })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_radius_zero() {
        let img = Raster::from_fn(5, 3, |x, y| (x * y) as f64 / 8.0).unwrap();
        let ladder = blur_ladder(&img, &[0]).unwrap();
        assert_eq!(ladder.rungs.len(), 1);
        assert_eq!(ladder.rungs[0].1, img);
        assert_eq!(
            (ladder.sheet.width(), ladder.sheet.height()),
            (5 + 16, 3 + 16)
        );
        assert_eq!(ladder.sheet.get(8, 8), img.get(0, 0));
        assert_eq!(ladder.sheet.get(7, 8), 1.0);
        assert_eq!(ladder.sheet.get(12, 10), img.get(4, 2));
    }

    #[test]
    fn sheet_layout_formula() {
        assert_eq!(contact_sheet_size(1, 10, 10), (1, 1, 26, 26));
        assert_eq!(contact_sheet_size(2, 10, 10), (2, 1, 44, 26));
        assert_eq!(contact_sheet_size(4, 10, 6), (2, 2, 44, 36));
        assert_eq!(contact_sheet_size(7, 10, 10), (3, 3, 62, 62));
        assert_eq!(contact_sheet_size(10, 1, 1), (4, 3, 44, 35));
    }

    #[test]
    fn reference_ladder_has_seven_rungs_and_empty_cells_stay_white() {
        let img = Raster::from_fn(12, 9, |x, y| ((x + 2 * y) % 7) as f64 / 6.0).unwrap();
        let ladder = blur_ladder(&img, &LADDER_RADII).unwrap();
        assert_eq!(ladder.rungs.len(), 7);
        let radii: Vec<usize> = ladder.rungs.iter().map(|(r, _)| *r).collect();
        assert_eq!(radii, LADDER_RADII);
        let (_, _, w, h) = contact_sheet_size(7, 12, 9);
        assert_eq!((ladder.sheet.width(), ladder.sheet.height()), (w, h));
        // cells 7 and 8 of the 3x3 grid are unused
        let x0 = SHEET_GUTTER + 2 * (12 + SHEET_GUTTER);
        let y0 = SHEET_GUTTER + 2 * (9 + SHEET_GUTTER);
        assert_eq!(ladder.sheet.get(x0 + 3, y0 + 3), 1.0);
    }

    #[test]
    fn empty_radius_list_is_rejected() {
        let img = Raster::filled(3, 3, 0.5).unwrap();
        assert!(blur_ladder(&img, &[]).is_err());
    }
}
