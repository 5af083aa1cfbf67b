//! File exports: CSV vectors and binary PGM images.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use nalgebra::DVector;

use crate::operators::Grid2;

/// Writes a single-column CSV with a header row.
pub fn write_vector_csv(path: &Path, header: &str, values: &DVector<f64>) -> io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{header}")?;
    for v in values.iter() {
        writeln!(w, "{v}")?;
    }
    w.flush()
}

/// Writes a 16-bit binary PGM (P5, big-endian samples). Intensities are
/// mapped linearly onto [0, 65535]; a constant image maps to zero.
pub fn write_pgm16(path: &Path, width: usize, height: usize, row_major: &[f64]) -> io::Result<()> {
    assert_eq!(row_major.len(), width * height, "pgm data length mismatch");
    let mut w = BufWriter::new(File::create(path)?);
    write!(w, "P5\n{width} {height}\n65535\n")?;
    let min = row_major.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = row_major.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let span = max - min;
    for &v in row_major {
        let scaled = if span > 0.0 {
            ((v - min) / span * 65535.0).round().clamp(0.0, 65535.0) as u16
        } else {
            0
        };
        w.write_all(&scaled.to_be_bytes())?;
    }
    w.flush()
}

/// Reorders a column-major image vector into the top-to-bottom row-major
/// raster expected by PGM (`iy = ny - 1` first).
pub fn image_to_raster(x: &DVector<f64>, grid: Grid2) -> Vec<f64> {
    assert_eq!(x.len(), grid.len());
    let mut out = Vec::with_capacity(grid.len());
    for row in 0..grid.ny {
        let iy = grid.ny - 1 - row;
        for ix in 0..grid.nx {
            out.push(x[grid.index(ix, iy)]);
        }
    }
    out
}
