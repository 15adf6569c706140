//! Dense row-major complex matrices and the few dense kernels the rest of the
//! crate needs (products, Hermitian spectra, power traces). Heavy lifting is
//! delegated to `faer`, always run sequentially so results are bit-stable.

use faer::{Accum, Mat, Par};
use num_complex::Complex64;

use crate::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Row-major complex matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidArgument("matrix dimensions must be positive".into()));
        }
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                expected: format!("{} entries", rows * cols),
                found: format!("{} entries", entries.len()),
            });
        }
        if let Some(k) = entries.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite {
                row: k / cols,
                col: k % cols,
            });
        }
        Ok(ComplexMatrix { rows, cols, entries })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        ComplexMatrix { rows, cols, entries }
    }

    pub(crate) fn from_vec_unchecked(rows: usize, cols: usize, entries: Vec<C64>) -> Self {
        debug_assert_eq!(entries.len(), rows * cols);
        ComplexMatrix { rows, cols, entries }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            entries: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: C64) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn conjugate(&self) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z * s).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        }
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        from_faer(&mul(&to_faer(self), &to_faer(rhs)))
    }

    /// Spectral norm (largest singular value).
    pub fn operator_norm(&self) -> f64 {
        let m = to_faer(self);
        match m.singular_values() {
            Ok(s) => s.into_iter().fold(0.0, f64::max),
            // SVD failure on tiny well-scaled inputs is not expected; fall back
            // to the Frobenius bound so diagnostics still report something.
            Err(_) => self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(),
        }
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.entries[i * self.cols + j]
    }
}

pub(crate) fn to_faer(m: &ComplexMatrix) -> Mat<C64> {
    Mat::from_fn(m.rows, m.cols, |i, j| m.get(i, j))
}

pub(crate) fn from_faer(m: &Mat<C64>) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

pub(crate) fn mul(a: &Mat<C64>, b: &Mat<C64>) -> Mat<C64> {
    let mut out = Mat::<C64>::zeros(a.nrows(), b.ncols());
    faer::linalg::matmul::matmul(&mut out, Accum::Replace, a, b, ONE, Par::Seq);
    out
}

/// `Tr(A^p)` for `p = 0..=p_max`.
///
/// Only powers up to `ceil(p_max / 2)` are formed; `Tr(A^p)` is read off as
/// `sum_ij (A^ceil(p/2))_ij (A^floor(p/2))_ji`. The split depends on `p`
/// alone, so a given trace is bit-identical whatever `p_max` was requested.
pub fn power_traces(a: &ComplexMatrix, p_max: usize) -> Vec<C64> {
    assert!(a.is_square());
    let n = a.rows;
    let base = to_faer(a);
    let half = p_max.div_ceil(2);
    let mut powers: Vec<Mat<C64>> = Vec::with_capacity(half);
    for k in 0..half {
        let next = if k == 0 { base.clone() } else { mul(&powers[k - 1], &base) };
        powers.push(next);
    }
    let mut out = Vec::with_capacity(p_max + 1);
    out.push(C64::new(n as f64, 0.0));
    for p in 1..=p_max {
        let hi = p.div_ceil(2);
        let lo = p / 2;
        let ph = &powers[hi - 1];
        let t = if lo == 0 {
            (0..n).map(|i| ph[(i, i)]).sum()
        } else {
            let pl = &powers[lo - 1];
            let mut acc = ZERO;
            for i in 0..n {
                for j in 0..n {
                    acc += ph[(i, j)] * pl[(j, i)];
                }
            }
            acc
        };
        out.push(t);
    }
    out
}

/// Eigenvalues (ascending) and eigenvectors (columns) of a Hermitian matrix.
///
/// Every pair is checked against `||Av - λv||₂ <= residual_bound·||v||₂`; a
/// violation is reported as [`Error::Eigen`].
pub fn hermitian_eigen(a: &ComplexMatrix, residual_bound: f64) -> Result<(Vec<f64>, Mat<C64>)> {
    assert!(a.is_square());
    let m = to_faer(a);
    let evd = m
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|e| Error::Eigen(format!("{e:?}")))?;
    let vecs = evd.U().to_owned();
    let s = evd.S().column_vector();
    let vals: Vec<f64> = (0..a.rows).map(|k| s[k].re).collect();

    let av = mul(&m, &vecs);
    for (k, &lambda) in vals.iter().enumerate() {
        let mut res = 0.0;
        let mut norm = 0.0;
        for i in 0..a.rows {
            let v = vecs[(i, k)];
            res += (av[(i, k)] - v * lambda).norm_sqr();
            norm += v.norm_sqr();
        }
        if res.sqrt() > residual_bound * norm.sqrt() {
            return Err(Error::Eigen(format!(
                "eigenpair {k} (λ = {lambda:.6e}) has residual {:.3e} above bound {:.3e}",
                res.sqrt(),
                residual_bound * norm.sqrt()
            )));
        }
    }
    let mut order: Vec<usize> = (0..vals.len()).collect();
    order.sort_by(|&x, &y| vals[x].total_cmp(&vals[y]));
    let sorted_vals = order.iter().map(|&k| vals[k]).collect();
    let sorted_vecs = Mat::from_fn(a.rows, a.rows, |i, j| vecs[(i, order[j])]);
    Ok((sorted_vals, sorted_vecs))
}

/// Row-major digits of `index` in base `base`, most significant first.
pub fn unflatten(mut index: usize, base: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = index % base;
        index /= base;
    }
    out
}

/// Inverse of [`unflatten`].
pub fn flatten(digits: &[usize], base: usize) -> usize {
    digits.iter().fold(0, |acc, &d| acc * base + d)
}

/// `exp(2πi·k/n)`, exact at the quarter turns.
pub fn root_of_unity(k: i64, n: usize) -> C64 {
    let n = n as i64;
    let k = k.rem_euclid(n);
    if 4 * k % n == 0 {
        return match 4 * k / n {
            0 => ONE,
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        };
    }
    C64::cis(std::f64::consts::TAU * k as f64 / n as f64)
}
