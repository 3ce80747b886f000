//! Column-major dense complex matrices bridged to faer views.

use faer::linalg::matmul::matmul;
use faer::{Accum, MatMut, MatRef, Par};
use num_complex::Complex64;

use crate::par;

pub type C64 = Complex64;

pub const C_ZERO: C64 = Complex64::new(0.0, 0.0);
pub const C_ONE: C64 = Complex64::new(1.0, 0.0);

/// Global parallelism handle for faer kernels, following the crate feature.
pub fn faer_par() -> Par {
    #[cfg(feature = "parallel")]
    {
        faer::get_global_parallelism()
    }
    #[cfg(not(feature = "parallel"))]
    {
        Par::Seq
    }
}

/// Dense column-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMat {
    n_rows: usize,
    n_cols: usize,
    data: Vec<C64>,
}

impl CMat {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        CMat {
            n_rows,
            n_cols,
            data: vec![C_ZERO; n_rows * n_cols],
        }
    }

    pub fn from_fn(n_rows: usize, n_cols: usize, f: impl Fn(usize, usize) -> C64) -> Self {
        let mut m = CMat::zeros(n_rows, n_cols);
        for c in 0..n_cols {
            for r in 0..n_rows {
                m.data[c * n_rows + r] = f(r, c);
            }
        }
        m
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.data[c * self.n_rows + r]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: C64) {
        self.data[c * self.n_rows + r] = v;
    }

    #[inline]
    pub fn add_to(&mut self, r: usize, c: usize, v: C64) {
        self.data[c * self.n_rows + r] += v;
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn col(&self, c: usize) -> &[C64] {
        &self.data[c * self.n_rows..(c + 1) * self.n_rows]
    }

    pub fn col_mut(&mut self, c: usize) -> &mut [C64] {
        &mut self.data[c * self.n_rows..(c + 1) * self.n_rows]
    }

    /// Parallel loop over columns: `f(col_index, column_slice)`.
    pub fn for_each_col_mut<F: Fn(usize, &mut [C64]) + Sync>(&mut self, f: F) {
        let n = self.n_rows;
        par::for_each_chunk_mut(&mut self.data, n, f);
    }

    /// Sequential twin of [`CMat::for_each_col_mut`] for benchmarks.
    pub fn for_each_col_mut_serial<F: Fn(usize, &mut [C64])>(&mut self, f: F) {
        let n = self.n_rows;
        par::for_each_chunk_mut_serial(&mut self.data, n, f);
    }

    pub fn as_faer(&self) -> MatRef<'_, C64> {
        MatRef::from_column_major_slice(&self.data, self.n_rows, self.n_cols)
    }

    pub fn as_faer_mut(&mut self) -> MatMut<'_, C64> {
        MatMut::from_column_major_slice_mut(&mut self.data, self.n_rows, self.n_cols)
    }

    pub fn from_faer(m: MatRef<'_, C64>) -> Self {
        CMat::from_fn(m.nrows(), m.ncols(), |r, c| m[(r, c)])
    }

    /// Copies the strict upper triangle onto the strict lower triangle as
    /// its conjugate, making the matrix exactly Hermitian by construction.
    pub fn mirror_upper_to_lower(&mut self) {
        assert_eq!(self.n_rows, self.n_cols);
        let n = self.n_rows;
        for c in 0..n {
            for r in (c + 1)..n {
                let v = self.data[r * n + c].conj();
                self.data[c * n + r] = v;
            }
        }
    }

    /// Max-norm departure from Hermitian symmetry.
    pub fn hermiticity_defect(&self) -> f64 {
        assert_eq!(self.n_rows, self.n_cols);
        let n = self.n_rows;
        let mut worst = 0.0f64;
        for c in 0..n {
            for r in 0..=c {
                let d = (self.get(r, c) - self.get(c, r).conj()).norm();
                if d > worst {
                    worst = d;
                }
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `y = alpha * A x` (dense, any shape).
    pub fn matvec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.n_cols);
        let mut y = vec![C_ZERO; self.n_rows];
        let xm = MatRef::from_column_major_slice(x, self.n_cols, 1);
        let ym = MatMut::from_column_major_slice_mut(&mut y, self.n_rows, 1);
        matmul(ym, Accum::Replace, self.as_faer(), xm, C_ONE, faer_par());
        y
    }

    /// `C += alpha * A * B` with `A = self`.
    pub fn gemm_into(&self, b: MatRef<'_, C64>, c: MatMut<'_, C64>, alpha: C64, accum: Accum) {
        matmul(c, accum, self.as_faer(), b, alpha, faer_par());
    }

    /// Hermitian quadratic form `x^H A x`.
    pub fn quadratic_form(&self, x: &[C64]) -> C64 {
        let y = self.matvec(x);
        dotc(x, &y)
    }
}

/// `sum conj(a_i) b_i`.
pub fn dotc(a: &[C64], b: &[C64]) -> C64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = C_ZERO;
    for (x, y) in a.iter().zip(b) {
        acc += x.conj() * y;
    }
    acc
}

pub fn norm2(a: &[C64]) -> f64 {
    a.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

pub fn axpy(alpha: C64, x: &[C64], y: &mut [C64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub fn scale(alpha: C64, x: &mut [C64]) {
    for v in x.iter_mut() {
        *v *= alpha;
    }
}
