//! Binary P5 PGM encoding of raster grids. Cell value k out of `levels`
//! possible values maps to gray floor(255*k/(levels-1)); row 0 of the grid
//! (y_min) becomes the top image row.

use cone_core::RasterGrid;

pub fn render_pgm(grid: &RasterGrid, levels: usize) -> Vec<u8> {
    let n = grid.resolution;
    let mut out = format!("P5\n{n} {n}\n255\n").into_bytes();
    let denom = levels.saturating_sub(1).max(1) as u32;
    out.extend(grid.cells.iter().map(|&k| (255 * k as u32 / denom).min(255) as u8));
    out
}

/// The grid as bare CSV: one line per row, comma-separated integer cells.
pub fn render_grid_csv(grid: &RasterGrid) -> String {
    let n = grid.resolution;
    let mut out = String::new();
    for row in 0..n {
        for col in 0..n {
            if col > 0 {
                out.push(',');
            }
            out.push_str(&grid.cell(row, col).to_string());
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use cone_core::Bounds;

    fn grid(cells: Vec<u8>, resolution: usize) -> RasterGrid {
        RasterGrid {
            bounds: Bounds::new(0.0, 1.0, 0.0, 1.0).unwrap(),
            resolution,
            cells,
        }
    }

    #[test]
    fn header_and_gray_levels() {
        let g = grid(vec![0, 1, 2, 0], 2);
        let bytes = render_pgm(&g, 3);
        assert!(bytes.starts_with(b"P5\n2 2\n255\n"));
        let pixels = &bytes[bytes.len() - 4..];
        assert_eq!(pixels, &[0, 127, 255, 0]);
    }

    #[test]
    fn two_level_grid_uses_full_contrast() {
        let g = grid(vec![0, 1, 1, 0], 2);
        let bytes = render_pgm(&g, 2);
        assert_eq!(&bytes[bytes.len() - 4..], &[0, 255, 255, 0]);
    }

    #[test]
    fn csv_encodes_the_same_cells() {
        let g = grid(vec![0, 1, 2, 0], 2);
        assert_eq!(render_grid_csv(&g), "0,1\n2,0\n");
    }
}
