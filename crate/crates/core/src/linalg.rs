//! Small dense complex matrices.
//!
//! Everything here works on matrices of at most a few dozen rows (codewords
//! are 4x4 or 4x3, equivalent channels 4n_R x 8), so the routines use direct
//! elimination and cyclic Jacobi sweeps rather than blocked algorithms.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::math;

pub type C64 = Complex<f64>;

/// Default relative tolerance for [`rank`].
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn diag(entries: &[C64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting wrong lengths and
    /// non-finite values.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::LengthMismatch { expected: rows * cols, actual: data.len() });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows<R: AsRef<[C64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::LengthMismatch { expected: cols, actual: r.len() });
            }
            data.extend_from_slice(r);
        }
        Self::from_vec(rows.len(), cols, data)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    #[inline]
    pub fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn row(&self, r: usize) -> &[C64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Conjugate transpose.
    pub fn hermitian(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn conj(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn scale(&self, k: C64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * k).collect() }
    }

    pub fn scale_real(&self, k: f64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * k).collect() }
    }

    /// Matrix product, or `DimensionMismatch` when the inner sizes differ.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(alloc::format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn frobenius_norm_sq(&self) -> f64 {
        frobenius_norm_sq(self)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    /// Panics on shape mismatch.
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in add");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    /// Panics on shape mismatch.
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in sub");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    /// Panics on shape mismatch; use [`ComplexMatrix::matmul`] for a checked product.
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("shape mismatch in mul")
    }
}

/// Sum of squared magnitudes of all entries.
pub fn frobenius_norm_sq(m: &ComplexMatrix) -> f64 {
    m.data.iter().map(|z| z.norm_sqr()).sum()
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det(m: &ComplexMatrix) -> Result<C64> {
    if !m.is_square() {
        return Err(Error::NonSquare { rows: m.rows, cols: m.cols });
    }
    let mut a = m.data.clone();
    Ok(det_in_place(&mut a, m.rows))
}

/// Determinant of the `n x n` row-major matrix in `a`, destroying `a`.
pub(crate) fn det_in_place(a: &mut [C64], n: usize) -> C64 {
    let mut det = C64::new(1.0, 0.0);
    for col in 0..n {
        let mut pivot = col;
        let mut best = a[col * n + col].norm_sqr();
        for r in col + 1..n {
            let v = a[r * n + col].norm_sqr();
            if v > best {
                best = v;
                pivot = r;
            }
        }
        if best == 0.0 {
            return C64::new(0.0, 0.0);
        }
        if pivot != col {
            for c in 0..n {
                a.swap(col * n + c, pivot * n + c);
            }
            det = -det;
        }
        let p = a[col * n + col];
        det *= p;
        let inv = p.inv();
        for r in col + 1..n {
            let f = a[r * n + col] * inv;
            if f == C64::new(0.0, 0.0) {
                continue;
            }
            for c in col + 1..n {
                let upper = a[col * n + c];
                a[r * n + c] -= f * upper;
            }
        }
    }
    det
}

/// `M^H M`, a `cols x cols` Hermitian positive semidefinite matrix.
pub fn gram(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.cols;
    let mut g = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut s = C64::new(0.0, 0.0);
            for r in 0..m.rows {
                s += m[(r, i)].conj() * m[(r, j)];
            }
            if i == j {
                s.im = 0.0;
            }
            g[(i, j)] = s;
            g[(j, i)] = s.conj();
        }
    }
    g
}

/// Eigenvalues of a Hermitian matrix in ascending order.
///
/// Uses cyclic Jacobi rotations on the real symmetric embedding
/// `[[Re, -Im], [Im, Re]]`, whose spectrum is that of the input with every
/// eigenvalue doubled in multiplicity.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    if !m.is_square() {
        return Err(Error::NonSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    let size = 2 * n;
    let mut a = vec![0.0f64; size * size];
    for r in 0..n {
        for c in 0..n {
            // Symmetrize so tiny Hermitian defects cannot break the sweep.
            let z = (m[(r, c)] + m[(c, r)].conj()) * 0.5;
            a[r * size + c] = z.re;
            a[(r + n) * size + (c + n)] = z.re;
            a[(r + n) * size + c] = z.im;
            a[r * size + (c + n)] = -z.im;
        }
    }
    let mut evs = symmetric_eigenvalues(&mut a, size);
    evs.sort_by(f64::total_cmp);
    Ok(evs.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect())
}

/// Cyclic Jacobi eigenvalue iteration for a real symmetric matrix.
fn symmetric_eigenvalues(a: &mut [f64], n: usize) -> Vec<f64> {
    let total: f64 = a.iter().map(|x| x * x).sum();
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        if off <= 1e-30 * total.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + math::sqrt(1.0 + tau * tau))
                } else {
                    -1.0 / (-tau + math::sqrt(1.0 + tau * tau))
                };
                let c = 1.0 / math::sqrt(1.0 + t * t);
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i * n + i]).collect()
}

/// Numerical rank: the number of eigenvalues of `gram(m)` above
/// `tol` times the largest one.
pub fn rank(m: &ComplexMatrix, tol: f64) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    // Work with the smaller Gram matrix; both share the nonzero spectrum.
    let g = if m.cols <= m.rows { gram(m) } else { gram(&m.hermitian()) };
    let evs = hermitian_eigenvalues(&g).expect("gram is square");
    let largest = evs.last().copied().unwrap_or(0.0);
    if largest <= 0.0 {
        return 0;
    }
    evs.iter().filter(|&&e| e > tol * largest).count()
}

/// `log2 det(M)` for a Hermitian positive definite matrix.
pub fn log2_det_hpd(m: &ComplexMatrix) -> Result<f64> {
    let d = det(m)?;
    Ok(math::log2(d.re))
}
