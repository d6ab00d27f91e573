//! Dense complex matrices.
//!
//! Everything here is sized for receiver covariances (a handful of antennas),
//! so the routines are straightforward `O(n^3)` loops over a row-major buffer.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::math;
use crate::{Error, Result};

/// Smallest pivot magnitude accepted by [`CMatrix::inverse`].
pub const PIVOT_TOLERANCE: f64 = 1e-14;
/// Smallest determinant magnitude accepted by [`CMatrix::inverse`].
pub const DET_TOLERANCE: f64 = 1e-30;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn diag(values: &[Complex64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        CMatrix { rows, cols, data }
    }

    /// Wraps a row-major buffer.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(Error::Dimension("buffer length does not match rows * cols"));
        }
        Ok(CMatrix { rows, cols, data })
    }

    /// Outer product `u vᴴ`.
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        Self::from_fn(u.len(), v.len(), |r, c| u[r] * v[c].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [Complex64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn scale(&self, k: Complex64) -> Self {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * k).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.norm()))
    }

    /// `A = Aᴴ` entrywise, relative to the largest entry.
    pub fn is_hermitian(&self, rel_tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        for r in 0..self.rows {
            for c in r..self.cols {
                if (self[(r, c)] - self[(c, r)].conj()).norm() > rel_tol * scale {
                    return false;
                }
            }
        }
        true
    }

    pub fn matmul(&self, rhs: &CMatrix) -> Result<CMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension("matmul inner dimensions differ"));
        }
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            let lhs_row = self.row(r);
            let out_row = &mut out.data[r * rhs.cols..(r + 1) * rhs.cols];
            for (k, a) in lhs_row.iter().enumerate() {
                for (o, b) in out_row.iter_mut().zip(rhs.row(k)) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if self.cols != v.len() {
            return Err(Error::Dimension("matrix-vector length mismatch"));
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Adds `k · u uᴴ` in place.
    pub fn add_outer_scaled(&mut self, u: &[Complex64], k: f64) -> Result<()> {
        if !self.is_square() || u.len() != self.rows {
            return Err(Error::Dimension("rank-one update shape mismatch"));
        }
        for r in 0..self.rows {
            let ur = u[r] * k;
            let row = self.row_mut(r);
            for (x, uc) in row.iter_mut().zip(u) {
                *x += ur * uc.conj();
            }
        }
        Ok(())
    }

    fn lu(&self) -> Result<Lu> {
        if !self.is_square() {
            return Err(Error::Dimension("LU of a non-square matrix"));
        }
        Ok(Lu::factor(self.clone()))
    }

    /// Determinant by LU with partial pivoting.
    pub fn det(&self) -> Result<Complex64> {
        Ok(self.lu()?.det())
    }

    /// `ln |det A|` evaluated as a sum of log pivots, so it does not overflow.
    pub fn log_abs_det(&self) -> Result<f64> {
        let lu = self.lu()?;
        Ok((0..lu.n).map(|i| math::ln(lu.a[(i, i)].norm())).sum())
    }

    pub fn inverse(&self) -> Result<CMatrix> {
        let lu = self.lu()?;
        if lu.min_pivot < PIVOT_TOLERANCE {
            return Err(Error::Singular { pivot: lu.min_pivot });
        }
        if lu.det().norm() < DET_TOLERANCE {
            return Err(Error::Singular { pivot: lu.min_pivot });
        }
        let n = lu.n;
        let mut inv = CMatrix::zeros(n, n);
        let mut col = vec![ZERO; n];
        for j in 0..n {
            for (i, x) in col.iter_mut().enumerate() {
                *x = if lu.perm[i] == j { ONE } else { ZERO };
            }
            lu.solve_in_place(&mut col);
            for i in 0..n {
                inv[(i, j)] = col[i];
            }
        }
        Ok(inv)
    }

    /// Lower-triangular `L` with `L Lᴴ = A` for Hermitian positive-definite `A`.
    pub fn cholesky(&self) -> Result<CMatrix> {
        if !self.is_square() {
            return Err(Error::Dimension("Cholesky of a non-square matrix"));
        }
        let n = self.rows;
        let mut l = CMatrix::zeros(n, n);
        for j in 0..n {
            let mut d = self[(j, j)].re;
            for k in 0..j {
                d -= l[(j, k)].norm_sqr();
            }
            if !(d > 0.0) {
                return Err(Error::NotPositiveDefinite);
            }
            let d = math::sqrt(d);
            l[(j, j)] = Complex64::new(d, 0.0);
            for i in j + 1..n {
                let mut s = self[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)].conj();
                }
                l[(i, j)] = s / d;
            }
        }
        Ok(l)
    }
}

/// `yᴴ A y`.
pub fn quad_form(y: &[Complex64], a: &CMatrix) -> Result<Complex64> {
    if !a.is_square() || a.rows != y.len() {
        return Err(Error::Dimension("quadratic form shape mismatch"));
    }
    Ok(quad_form_unchecked(y, a))
}

#[inline]
pub(crate) fn quad_form_unchecked(y: &[Complex64], a: &CMatrix) -> Complex64 {
    let mut acc = ZERO;
    for (r, yr) in y.iter().enumerate() {
        let ay: Complex64 = a.row(r).iter().zip(y).map(|(x, yc)| x * yc).sum();
        acc += yr.conj() * ay;
    }
    acc
}

struct Lu {
    n: usize,
    a: CMatrix,
    perm: Vec<usize>,
    swaps: usize,
    min_pivot: f64,
}

impl Lu {
    fn factor(mut a: CMatrix) -> Lu {
        let n = a.rows;
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        let mut min_pivot = f64::INFINITY;
        for k in 0..n {
            let (p, best) = (k..n)
                .map(|r| (r, a[(r, k)].norm()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            min_pivot = min_pivot.min(best);
            if p != k {
                for c in 0..n {
                    a.data.swap(k * n + c, p * n + c);
                }
                perm.swap(k, p);
                swaps += 1;
            }
            let pivot = a[(k, k)];
            if pivot == ZERO {
                continue;
            }
            for r in k + 1..n {
                let factor = a[(r, k)] / pivot;
                a[(r, k)] = factor;
                for c in k + 1..n {
                    let akc = a[(k, c)];
                    a[(r, c)] -= factor * akc;
                }
            }
        }
        if n == 0 {
            min_pivot = 1.0;
        }
        Lu {
            n,
            a,
            perm,
            swaps,
            min_pivot,
        }
    }

    fn det(&self) -> Complex64 {
        let prod: Complex64 = (0..self.n).map(|i| self.a[(i, i)]).product();
        if self.swaps % 2 == 1 {
            -prod
        } else {
            prod
        }
    }

    // `b` must already be permuted.
    fn solve_in_place(&self, b: &mut [Complex64]) {
        let n = self.n;
        for i in 0..n {
            let mut s = b[i];
            for k in 0..i {
                s -= self.a[(i, k)] * b[k];
            }
            b[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            for k in i + 1..n {
                s -= self.a[(i, k)] * b[k];
            }
            b[i] = s / self.a[(i, i)];
        }
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in add");
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in sub");
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.matmul(rhs).expect("shape mismatch in mul")
    }
}
