//! Two-dimensional transforms by row-column decomposition: transform the
//! rows, multiply every entry by the column count, transform the
//! columns. The forward normalization is `1/N` (rows of the grid), the
//! inverse's is `1/M` (columns); together they cancel to `1/(N*M)`.

use crate::complex::{check_finite, Complex, TwiddleTable};
use crate::error::{Error, Result};
use crate::fft::{fft_with_table, reverse_and_scale};
use crate::parallel::{parallel_fft, parallel_ifft};

/// Row-major `rows x cols` matrix of complex values.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexGrid {
    rows: usize,
    cols: usize,
    data: Vec<Complex>,
}

impl ComplexGrid {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex>) -> Result<Self> {
        if rows == 0 || cols == 0 || rows * cols != data.len() {
            return Err(Error::InvalidGrid {
                rows,
                cols,
                len: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Self::new(rows, cols, vec![Complex::new(0.0, 0.0); rows * cols])
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Complex,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self::new(rows, cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex) {
        self.data[r * self.cols + c] = v;
    }

    pub fn data(&self) -> &[Complex] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Complex] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    fn column(&self, c: usize) -> Vec<Complex> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    fn set_column(&mut self, c: usize, values: &[Complex]) {
        for (r, &v) in values.iter().enumerate() {
            self.set(r, c, v);
        }
    }

    fn scale(&mut self, factor: f64) {
        for v in &mut self.data {
            *v *= factor;
        }
    }

    fn validate_pow2(&self) -> Result<()> {
        if !self.rows.is_power_of_two() {
            return Err(Error::InvalidSize(self.rows));
        }
        if !self.cols.is_power_of_two() {
            return Err(Error::InvalidSize(self.cols));
        }
        Ok(())
    }
}

/// Forward 2D transform. Equivalent to [`fft2d_with_workers`] with one
/// worker.
pub fn fft2d(grid: &ComplexGrid) -> Result<ComplexGrid> {
    fft2d_with_workers(grid, 1)
}

/// Forward 2D transform with the column transforms routed through the
/// worker engine when `nproc > 1`; the result is bit-identical to the
/// sequential path for every valid worker count.
pub fn fft2d_with_workers(grid: &ComplexGrid, nproc: usize) -> Result<ComplexGrid> {
    grid.validate_pow2()?;
    check_finite(grid.data())?;
    let mut out = grid.clone();

    // Transform on rows (1/M-normalized), then undo the normalization by
    // the literal multiplication with M.
    let row_table = TwiddleTable::new(out.cols)?;
    for r in 0..out.rows {
        let transformed = fft_with_table(out.row(r), &row_table);
        out.data[r * out.cols..(r + 1) * out.cols].copy_from_slice(&transformed);
    }
    out.scale(out.cols as f64);

    // Transform on columns (1/N-normalized).
    let col_table = TwiddleTable::new(out.rows)?;
    for c in 0..out.cols {
        let column = out.column(c);
        let transformed = if nproc > 1 {
            parallel_fft(&column, nproc)?
        } else {
            fft_with_table(&column, &col_table)
        };
        out.set_column(c, &transformed);
    }
    Ok(out)
}

/// Inverse 2D transform. Equivalent to [`ifft2d_with_workers`] with one
/// worker.
pub fn ifft2d(grid: &ComplexGrid) -> Result<ComplexGrid> {
    ifft2d_with_workers(grid, 1)
}

/// Inverse 2D transform: unnormalized inverse on rows, `1/M` scaling,
/// unnormalized inverse on columns.
pub fn ifft2d_with_workers(grid: &ComplexGrid, nproc: usize) -> Result<ComplexGrid> {
    grid.validate_pow2()?;
    check_finite(grid.data())?;
    let mut out = grid.clone();

    let row_table = TwiddleTable::new(out.cols)?;
    for r in 0..out.rows {
        let transformed = reverse_and_scale(&fft_with_table(out.row(r), &row_table));
        out.data[r * out.cols..(r + 1) * out.cols].copy_from_slice(&transformed);
    }
    out.scale(1.0 / out.cols as f64);

    let col_table = TwiddleTable::new(out.rows)?;
    for c in 0..out.cols {
        let column = out.column(c);
        let transformed = if nproc > 1 {
            parallel_ifft(&column, nproc)?
        } else {
            reverse_and_scale(&fft_with_table(&column, &col_table))
        };
        out.set_column(c, &transformed);
    }
    Ok(out)
}

/// Direct `O((N*M)^2)` double-sum evaluation of the forward 2D
/// transform; ground truth for [`fft2d`]. Accepts any positive
/// dimensions.
pub fn dft2d_oracle(grid: &ComplexGrid) -> Result<ComplexGrid> {
    check_finite(grid.data())?;
    let (n, m) = (grid.rows, grid.cols);
    let mut out = ComplexGrid::zeros(n, m)?;
    for u in 0..n {
        for v in 0..m {
            let mut acc = Complex::new(0.0, 0.0);
            for x in 0..n {
                for y in 0..m {
                    let frac =
                        ((u * x) % n) as f64 / n as f64 + ((v * y) % m) as f64 / m as f64;
                    let angle = -2.0 * std::f64::consts::PI * frac;
                    acc += grid.get(x, y) * Complex::new(angle.cos(), angle.sin());
                }
            }
            out.set(u, v, acc / n as f64);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fft::fft;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn random_grid(rng: &mut StdRng, rows: usize, cols: usize) -> ComplexGrid {
        ComplexGrid::from_fn(rows, cols, |_, _| {
            c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
        .unwrap()
    }

    fn max_err(a: &ComplexGrid, b: &ComplexGrid) -> f64 {
        a.data()
            .iter()
            .zip(b.data())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    /// Direct double sum of the inverse definition, independent of every
    /// fast path.
    fn direct_inverse(grid: &ComplexGrid) -> ComplexGrid {
        let (n, m) = (grid.rows(), grid.cols());
        let mut out = ComplexGrid::zeros(n, m).unwrap();
        for x in 0..n {
            for y in 0..m {
                let mut acc = c(0.0, 0.0);
                for u in 0..n {
                    for v in 0..m {
                        let frac =
                            ((u * x) % n) as f64 / n as f64 + ((v * y) % m) as f64 / m as f64;
                        let angle = 2.0 * std::f64::consts::PI * frac;
                        acc += grid.get(u, v) * c(angle.cos(), angle.sin());
                    }
                }
                out.set(x, y, acc / m as f64);
            }
        }
        out
    }

    #[test]
    fn grid_construction_is_validated() {
        assert!(ComplexGrid::new(2, 3, vec![c(0.0, 0.0); 6]).is_ok());
        assert!(matches!(
            ComplexGrid::new(2, 3, vec![c(0.0, 0.0); 5]),
            Err(Error::InvalidGrid { rows: 2, cols: 3, len: 5 })
        ));
        assert!(ComplexGrid::new(0, 3, vec![]).is_err());
    }

    #[test]
    fn constant_grid_concentrates_at_dc() {
        let grid = ComplexGrid::from_fn(8, 4, |_, _| c(1.0, 0.0)).unwrap();
        let out = fft2d(&grid).unwrap();
        assert!((out.get(0, 0) - c(4.0, 0.0)).norm() < 1e-12);
        for r in 0..8 {
            for col in 0..4 {
                if (r, col) != (0, 0) {
                    assert!(out.get(r, col).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn oracle_single_point_is_identity() {
        let grid = ComplexGrid::new(1, 1, vec![c(3.0, -2.0)]).unwrap();
        let out = dft2d_oracle(&grid).unwrap();
        assert_eq!(out.get(0, 0), c(3.0, -2.0));
    }

    #[test]
    fn fast_path_matches_oracle_on_random_grid() {
        let mut rng = StdRng::seed_from_u64(84);
        let grid = random_grid(&mut rng, 8, 4);
        assert!(max_err(&fft2d(&grid).unwrap(), &dft2d_oracle(&grid).unwrap()) < 1e-10);
    }

    #[test]
    fn separable_input_factorizes() {
        let mut rng = StdRng::seed_from_u64(12);
        let g: Vec<Complex> = (0..8)
            .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let h: Vec<Complex> = (0..4)
            .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let grid = ComplexGrid::from_fn(8, 4, |r, col| g[r] * h[col]).unwrap();

        let out = fft2d(&grid).unwrap();
        assert!(max_err(&out, &dft2d_oracle(&grid).unwrap()) < 1e-10);

        // F(u,v) = M * fft(g)[u] * fft(h)[v] with this normalization.
        let fg = fft(&g).unwrap();
        let fh = fft(&h).unwrap();
        let expected = ComplexGrid::from_fn(8, 4, |u, v| fg[u] * fh[v] * 4.0).unwrap();
        assert!(max_err(&out, &expected) < 1e-10);
    }

    #[test]
    fn inverse_of_dc_only_is_constant() {
        let mut grid = ComplexGrid::zeros(8, 4).unwrap();
        grid.set(0, 0, c(4.0, 0.0));
        let out = ifft2d(&grid).unwrap();
        for v in out.data() {
            assert!((v - c(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn round_trip_is_identity() {
        let mut rng = StdRng::seed_from_u64(168);
        let grid = random_grid(&mut rng, 16, 8);
        let back = ifft2d(&fft2d(&grid).unwrap()).unwrap();
        assert!(max_err(&back, &grid) < 1e-9);
        let forward = fft2d(&ifft2d(&grid).unwrap()).unwrap();
        assert!(max_err(&forward, &grid) < 1e-9);
    }

    #[test]
    fn inverse_matches_direct_double_sum() {
        let mut rng = StdRng::seed_from_u64(44);
        let grid = random_grid(&mut rng, 4, 4);
        assert!(max_err(&ifft2d(&grid).unwrap(), &direct_inverse(&grid)) < 1e-10);
    }

    #[test]
    fn column_first_order_gives_the_same_transform() {
        let mut rng = StdRng::seed_from_u64(7);
        let grid = random_grid(&mut rng, 8, 8);
        let reference = fft2d(&grid).unwrap();

        // Columns (1/N), multiply by M, rows (1/M).
        let mut alt = grid.clone();
        let col_table = TwiddleTable::new(8).unwrap();
        for col in 0..8 {
            let transformed = fft_with_table(&alt.column(col), &col_table);
            alt.set_column(col, &transformed);
        }
        alt.scale(8.0);
        let row_table = TwiddleTable::new(8).unwrap();
        for r in 0..8 {
            let transformed = fft_with_table(alt.row(r), &row_table);
            alt.data[r * 8..(r + 1) * 8].copy_from_slice(&transformed);
        }
        assert!(max_err(&alt, &reference) < 1e-10);
    }

    #[test]
    fn worker_routing_is_bit_identical() {
        let mut rng = StdRng::seed_from_u64(99);
        let grid = random_grid(&mut rng, 8, 4);
        let seq = fft2d(&grid).unwrap();
        for nproc in [2, 4, 8] {
            let par = fft2d_with_workers(&grid, nproc).unwrap();
            for (a, b) in par.data().iter().zip(seq.data()) {
                assert_eq!(a.re.to_bits(), b.re.to_bits());
                assert_eq!(a.im.to_bits(), b.im.to_bits());
            }
        }
        let inv_seq = ifft2d(&seq).unwrap();
        let inv_par = ifft2d_with_workers(&seq, 4).unwrap();
        assert_eq!(inv_seq, inv_par);
    }

    #[test]
    fn non_power_of_two_dims_are_rejected_by_fast_paths() {
        let grid = ComplexGrid::zeros(3, 4).unwrap();
        assert!(matches!(fft2d(&grid), Err(Error::InvalidSize(3))));
        assert!(matches!(ifft2d(&grid), Err(Error::InvalidSize(3))));
        // The oracle accepts them.
        assert!(dft2d_oracle(&grid).is_ok());
    }
}
