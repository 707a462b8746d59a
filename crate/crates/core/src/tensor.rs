//! Dense row-major `f64` matrix and the handful of kernels everything else
//! consumes. Vectors are 1-column matrices. Batches are laid out one sample
//! per column, so a layer computes `W * X + b` over a whole batch.

use crate::error::{Error, Result};
use rand::Rng;

/// Dense 2-D array of `f64`, row-major.
///
/// Values returned by public operations are immutable; clone to mutate.
/// `matmul` can overflow to infinity for inputs near `f64::MAX`; no other
/// operation introduces non-finite values from finite inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    /// Builds a matrix from row-major data. Fails if `data.len() != rows*cols`
    /// or either dimension is zero.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidConfig(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::InvalidConfig(format!(
                "data length {} does not match {rows}x{cols}",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        debug_assert!(rows > 0 && cols > 0);
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    /// Builds from nested rows; every row must have the same length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidConfig("ragged rows".into()));
        }
        Self::new(r, c, rows.concat())
    }

    /// Column vector (n x 1).
    pub fn column_vector(values: &[f64]) -> Result<Self> {
        Self::new(values.len(), 1, values.to_vec())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        debug_assert!(rows > 0 && cols > 0);
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Entries drawn i.i.d. uniform from `[lo, hi)`.
    pub fn random_uniform(rows: usize, cols: usize, lo: f64, hi: f64, rng: &mut impl Rng) -> Self {
        let data = (0..rows * cols).map(|_| rng.gen_range(lo..hi)).collect();
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j] = v;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Standard matrix product. Per output entry the sum runs over `k` in
    /// ascending order with plain sequential accumulation.
    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch {
                op: "matmul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        let n = other.cols;
        for i in 0..self.rows {
            let out_row = &mut out.data[i * n..(i + 1) * n];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                let b_row = &other.data[k * n..(k + 1) * n];
                for j in 0..n {
                    out_row[j] += a * b_row[j];
                }
            }
        }
        Ok(out)
    }

    /// Applies a scalar map to every entry; shape is preserved.
    pub fn elementwise(&self, f: impl Fn(f64) -> f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Adds a column vector to every column: `out[i,j] = self[i,j] + bias[i,0]`.
    pub fn add_broadcast_col(&self, bias: &Matrix) -> Result<Matrix> {
        if bias.cols != 1 || bias.rows != self.rows {
            return Err(Error::ShapeMismatch {
                op: "add_broadcast_col",
                left: self.shape(),
                right: bias.shape(),
            });
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            let b = bias.data[i];
            for v in &mut out.data[i * self.cols..(i + 1) * self.cols] {
                *v += b;
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        out
    }

    fn zip_with(&self, other: &Matrix, op: &'static str, f: impl Fn(f64, f64) -> f64) -> Result<Matrix> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch { op, left: self.shape(), right: other.shape() });
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, "add", |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, "sub", |a, b| a - b)
    }

    /// Entrywise product.
    pub fn hadamard(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, "hadamard", |a, b| a * b)
    }

    pub fn scale(&self, s: f64) -> Matrix {
        self.elementwise(|v| v * s)
    }

    /// Per-row sums as a column vector.
    pub fn row_sums(&self) -> Matrix {
        let data = (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].iter().sum())
            .collect();
        Matrix { rows: self.rows, cols: 1, data }
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.data[i * self.cols + j]).collect()
    }

    /// Gathers the given columns into a new matrix, in the order given.
    pub fn columns_subset(&self, indices: &[usize]) -> Matrix {
        debug_assert!(!indices.is_empty());
        let mut out = Matrix::zeros(self.rows, indices.len());
        for (jj, &j) in indices.iter().enumerate() {
            debug_assert!(j < self.cols);
            for i in 0..self.rows {
                out.data[i * indices.len() + jj] = self.data[i * self.cols + j];
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Naive triple-loop reference, ijk order (sum over k ascending per entry).
    fn matmul_oracle(a: &Matrix, b: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(a.rows(), b.cols());
        for i in 0..a.rows() {
            for j in 0..b.cols() {
                let mut acc = 0.0;
                for k in 0..a.cols() {
                    acc += a.get(i, k) * b.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    fn random_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Matrix {
        Matrix::random_uniform(rows, cols, -2.0, 2.0, rng)
    }

    #[test]
    fn matmul_identity() {
        let v = Matrix::column_vector(&[3.0, 4.0]).unwrap();
        let got = Matrix::identity(2).matmul(&v).unwrap();
        assert_eq!(got.data(), &[3.0, 4.0]);
    }

    #[test]
    fn matmul_row_times_column() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0]]).unwrap();
        let b = Matrix::column_vector(&[3.0, 4.0]).unwrap();
        let got = a.matmul(&b).unwrap();
        assert_eq!(got.shape(), (1, 1));
        assert_eq!(got.get(0, 0), 11.0);
    }

    #[test]
    fn matmul_matches_triple_loop_oracle_bit_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = random_matrix(5, 4, &mut rng);
        let b = random_matrix(4, 3, &mut rng);
        let got = a.matmul(&b).unwrap();
        let want = matmul_oracle(&a, &b);
        // Same per-entry summation order, so bit-identical.
        for (g, w) in got.data().iter().zip(want.data()) {
            assert_eq!(g.to_bits(), w.to_bits());
        }
    }

    #[test]
    fn matmul_shape_mismatch_carries_both_shapes() {
        let a = Matrix::zeros(2, 3);
        let b = Matrix::zeros(2, 3);
        match a.matmul(&b) {
            Err(Error::ShapeMismatch { left, right, .. }) => {
                assert_eq!(left, (2, 3));
                assert_eq!(right, (2, 3));
            }
            other => panic!("expected shape mismatch, got {other:?}"),
        }
    }

    #[test]
    fn elementwise_examples() {
        let m = Matrix::from_rows(&[vec![1.0, -2.0]]).unwrap();
        assert_eq!(m.elementwise(|z| -z).data(), &[-1.0, 2.0]);
        assert_eq!(m.elementwise(|z| z).data(), m.data());
        let sq = Matrix::from_rows(&[vec![3.0]]).unwrap().elementwise(|z| z * z);
        assert_eq!(sq.get(0, 0), 9.0);
    }

    #[test]
    fn add_broadcast_col_examples() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let bias = Matrix::column_vector(&[10.0, 20.0]).unwrap();
        let got = a.add_broadcast_col(&bias).unwrap();
        assert_eq!(got.data(), &[11.0, 12.0, 23.0, 24.0]);

        let zero = Matrix::zeros(2, 1);
        assert_eq!(a.add_broadcast_col(&zero).unwrap().data(), a.data());

        let bad = Matrix::zeros(3, 2).add_broadcast_col(&Matrix::zeros(2, 1));
        assert!(matches!(bad, Err(Error::ShapeMismatch { .. })));
    }

    #[test]
    fn transpose_and_row_sums() {
        let m = Matrix::from_rows(&[vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0]]).unwrap();
        let t = m.transpose();
        assert_eq!(t.shape(), (3, 2));
        assert_eq!(t.get(2, 1), 6.0);
        assert_eq!(m.row_sums().data(), &[6.0, 15.0]);
    }

    #[test]
    fn columns_subset_gathers_in_order() {
        let m = Matrix::from_rows(&[vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0]]).unwrap();
        let s = m.columns_subset(&[2, 0]);
        assert_eq!(s.data(), &[3.0, 1.0, 6.0, 4.0]);
    }

    #[test]
    fn zero_dimension_rejected() {
        assert!(Matrix::new(0, 3, vec![]).is_err());
        assert!(Matrix::new(2, 2, vec![1.0]).is_err());
    }

    proptest! {
        #[test]
        fn matmul_associative_within_tolerance(seed in 0u64..500) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_matrix(3, 4, &mut rng);
            let b = random_matrix(4, 5, &mut rng);
            let c = random_matrix(5, 2, &mut rng);
            let left = a.matmul(&b).unwrap().matmul(&c).unwrap();
            let right = a.matmul(&b.matmul(&c).unwrap()).unwrap();
            for (l, r) in left.data().iter().zip(right.data()) {
                let denom = l.abs().max(r.abs()).max(1e-30);
                prop_assert!(((l - r).abs() / denom) <= 1e-10);
            }
        }

        #[test]
        fn elementwise_preserves_shape(rows in 1usize..6, cols in 1usize..6, seed in 0u64..100) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_matrix(rows, cols, &mut rng);
            prop_assert_eq!(m.elementwise(f64::sin).shape(), (rows, cols));
        }
    }
}
