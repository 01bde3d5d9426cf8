//! Dense complex matrices and a Hermitian eigenvalue solver.
//!
//! The eigensolver reduces a Hermitian matrix to real symmetric tridiagonal
//! form with Householder reflections and then runs implicit QL iterations
//! with Wilkinson shifts. Only eigenvalues are produced; nothing in the crate
//! needs eigenvectors.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const C0: Complex64 = Complex64::new(0.0, 0.0);
pub const C1: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Square complex matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![C0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = C1;
        }
        m
    }

    /// Builds a matrix from row-major data. Fails unless `data.len()` is a
    /// perfect square.
    pub fn from_vec(data: Vec<Complex64>) -> Result<Self> {
        let dim = (data.len() as f64).sqrt().round() as usize;
        if dim * dim != data.len() || dim == 0 {
            return Err(Error::config(format!(
                "{} entries do not form a square matrix",
                data.len()
            )));
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows<const N: usize>(rows: [[Complex64; N]; N]) -> Self {
        let data = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self { dim: N, data }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, Complex64::new(d, 0.0));
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, v: Complex64) {
        self.data[row * self.dim + col] = v;
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.data
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch in matmul");
        let n = self.dim;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == C0 {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> CMatrix {
        let n = self.dim;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> CMatrix {
        let n = self.dim;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j];
            }
        }
        out
    }

    pub fn conj(&self) -> CMatrix {
        CMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> CMatrix {
        CMatrix {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, other.dim);
        CMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Kronecker product `self ⊗ other`; `self` occupies the high-order index.
    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let (a, b) = (self.dim, other.dim);
        let n = a * b;
        let mut out = CMatrix::zeros(n);
        for i in 0..a {
            for j in 0..a {
                let s = self.get(i, j);
                if s == C0 {
                    continue;
                }
                for k in 0..b {
                    for l in 0..b {
                        out.data[(i * b + k) * n + j * b + l] = s * other.get(k, l);
                    }
                }
            }
        }
        out
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - self†`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// Largest entrywise deviation of `self† self` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        self.adjoint()
            .matmul(self)
            .max_abs_diff(&CMatrix::identity(self.dim))
    }
}

/// Eigenvalues of a Hermitian matrix in ascending order.
///
/// Only the lower triangle is read; the caller is responsible for the input
/// actually being Hermitian.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let n = m.dim();
    if n == 0 {
        return Vec::new();
    }
    let (mut diag, mut off) = tridiagonalize(m);
    tridiagonal_ql(&mut diag, &mut off);
    diag.sort_by(f64::total_cmp);
    diag
}

/// Householder reduction to a real symmetric tridiagonal matrix with the
/// same spectrum. Returns `(diagonal, subdiagonal)` where `subdiagonal[k]`
/// couples rows `k` and `k + 1`; the last entry is unused and zero.
fn tridiagonalize(m: &CMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = m.dim();
    // Working copy, lower triangle mirrored so the rank-2 updates can run on
    // full rows.
    let mut a = m.clone();
    for i in 0..n {
        for j in (i + 1)..n {
            a.data[i * n + j] = a.data[j * n + i].conj();
        }
    }
    let mut off = vec![0.0; n];
    let mut v = vec![C0; n];
    let mut p = vec![C0; n];

    for k in 0..n.saturating_sub(2) {
        let lo = k + 1;
        let alpha = (lo..n)
            .map(|i| a.data[i * n + k].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if alpha == 0.0 {
            off[k] = 0.0;
            continue;
        }
        let x0 = a.data[lo * n + k];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { C1 };

        for i in lo..n {
            v[i] = a.data[i * n + k];
        }
        v[lo] += phase * alpha;
        let vnorm2: f64 = (lo..n).map(|i| v[i].norm_sqr()).sum();
        if vnorm2 == 0.0 {
            off[k] = 0.0;
            continue;
        }
        let beta = 2.0 / vnorm2;

        // p = beta * S v on the trailing block S = a[lo.., lo..]
        for i in lo..n {
            let row = &a.data[i * n + lo..i * n + n];
            let mut acc = C0;
            for (s, vj) in row.iter().zip(&v[lo..n]) {
                acc += s * vj;
            }
            p[i] = acc * beta;
        }
        // K = beta/2 * v† p, real for Hermitian S
        let vp: Complex64 = (lo..n).map(|i| v[i].conj() * p[i]).sum();
        let kk = 0.5 * beta * vp.re;
        for i in lo..n {
            p[i] -= v[i] * kk;
        }
        // S <- S - v q† - q v†
        for i in lo..n {
            let (vi, qi) = (v[i], p[i]);
            let row = &mut a.data[i * n + lo..i * n + n];
            for (j, s) in row.iter_mut().enumerate() {
                let jj = lo + j;
                *s -= vi * p[jj].conj() + qi * v[jj].conj();
            }
        }
        off[k] = alpha;
    }

    if n >= 2 {
        off[n - 2] = a.data[(n - 1) * n + (n - 2)].norm();
    }
    off[n - 1] = 0.0;
    let diag = (0..n).map(|i| a.data[i * n + i].re).collect();
    (diag, off)
}

/// Implicit QL with Wilkinson shifts on a symmetric tridiagonal matrix.
/// Eigenvalues overwrite `d`; `e` is destroyed.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    if n < 2 {
        return;
    }
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                // converged as far as rounding allows
                break;
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}
