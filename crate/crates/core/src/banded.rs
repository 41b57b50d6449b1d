//! Complex band matrices with bandwidth at most two, and a direct solver.

use num_complex::Complex64 as C64;

use crate::{Error, Result};

pub const MAX_BANDWIDTH: usize = 2;
const NBANDS: usize = 2 * MAX_BANDWIDTH + 1;

/// Relative tolerance for the Hermiticity invariant.
pub const HERMITIAN_TOL: f64 = 1e-14;

/// Square complex matrix with nonzeros on offsets `-2..=2`.
///
/// Offset `k` is stored as a vector of length `n - |k|`; entry `(i, j)` lives
/// at position `min(i, j)` of band `j - i`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix {
    n: usize,
    bands: [Vec<C64>; NBANDS],
}

impl BandMatrix {
    pub fn zeros(n: usize) -> Self {
        let bands = std::array::from_fn(|b| {
            let k = b.abs_diff(MAX_BANDWIDTH);
            vec![C64::new(0.0, 0.0); n.saturating_sub(k)]
        });
        Self { n, bands }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        m.bands[MAX_BANDWIDTH].fill(C64::new(1.0, 0.0));
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Band with offset `k` (`j - i`).
    pub fn band(&self, k: isize) -> &[C64] {
        &self.bands[Self::slot(k)]
    }

    pub fn band_mut(&mut self, k: isize) -> &mut [C64] {
        &mut self.bands[Self::slot(k)]
    }

    fn slot(k: isize) -> usize {
        assert!(
            k.unsigned_abs() <= MAX_BANDWIDTH,
            "offset {k} outside bandwidth {MAX_BANDWIDTH}"
        );
        (k + MAX_BANDWIDTH as isize) as usize
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        if i.abs_diff(j) > MAX_BANDWIDTH || i >= self.n || j >= self.n {
            return C64::new(0.0, 0.0);
        }
        self.band(j as isize - i as isize)[i.min(j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: C64) {
        let pos = i.min(j);
        self.band_mut(j as isize - i as isize)[pos] = value;
    }

    pub fn scaled(&self, factor: C64) -> Self {
        let mut out = self.clone();
        for band in out.bands.iter_mut() {
            band.iter_mut().for_each(|z| *z *= factor);
        }
        out
    }

    /// `self + factor * other`
    pub fn add_scaled(&mut self, factor: C64, other: &BandMatrix) {
        assert_eq!(self.n, other.n);
        for (a, b) in self.bands.iter_mut().zip(other.bands.iter()) {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += factor * y);
        }
    }

    pub fn add_diagonal(&mut self, diag: &[f64]) {
        assert_eq!(diag.len(), self.n);
        self.bands[MAX_BANDWIDTH]
            .iter_mut()
            .zip(diag)
            .for_each(|(z, d)| *z += d);
    }

    /// `y = A x`
    pub fn mul_vec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.n);
        let mut y = vec![C64::new(0.0, 0.0); self.n];
        for k in -(MAX_BANDWIDTH as isize)..=MAX_BANDWIDTH as isize {
            let band = self.band(k);
            if k >= 0 {
                let k = k as usize;
                for (i, a) in band.iter().enumerate() {
                    y[i] += a * x[i + k];
                }
            } else {
                let k = k.unsigned_abs();
                for (j, a) in band.iter().enumerate() {
                    y[j + k] += a * x[j];
                }
            }
        }
        y
    }

    pub fn max_abs(&self) -> f64 {
        self.bands
            .iter()
            .flat_map(|b| b.iter())
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// `max |A - A†|`
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for k in 0..=MAX_BANDWIDTH as isize {
            let upper = self.band(k);
            let lower = self.band(-k);
            for (u, l) in upper.iter().zip(lower) {
                worst = worst.max((u - l.conj()).norm());
            }
        }
        worst
    }

    pub fn to_dense(&self) -> Vec<Vec<C64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    /// LU factorization without pivoting.
    pub fn factorize(&self) -> Result<BandLu> {
        BandLu::new(self)
    }
}

/// Banded LU factors of a matrix with bandwidth two, computed without
/// pivoting. The Crank–Nicolson matrices `1 + iαH` have positive definite
/// Hermitian part, for which elimination without pivoting is stable.
#[derive(Debug, Clone)]
pub struct BandLu {
    lu: BandMatrix,
}

impl BandLu {
    /// Pivots smaller than this relative to the matrix scale are singular.
    const PIVOT_TOL: f64 = 1e-13;

    fn new(a: &BandMatrix) -> Result<Self> {
        let n = a.n;
        let mut lu = a.clone();
        let scale = a.max_abs().max(f64::MIN_POSITIVE);
        for k in 0..n {
            let pivot = lu.get(k, k);
            if !(pivot.norm() > Self::PIVOT_TOL * scale) {
                return Err(Error::SolveFailure { row: k, pivot: pivot.norm() });
            }
            let last = (k + MAX_BANDWIDTH).min(n - 1);
            for i in k + 1..=last {
                let factor = lu.get(i, k) / pivot;
                lu.set(i, k, factor);
                for j in k + 1..=last {
                    let v = lu.get(i, j) - factor * lu.get(k, j);
                    lu.set(i, j, v);
                }
            }
        }
        Ok(Self { lu })
    }

    /// Solves `A x = rhs` in place.
    pub fn solve_in_place(&self, rhs: &mut [C64]) {
        let n = self.lu.n;
        assert_eq!(rhs.len(), n);
        for i in 0..n {
            let lo = i.saturating_sub(MAX_BANDWIDTH);
            let mut acc = rhs[i];
            for j in lo..i {
                acc -= self.lu.get(i, j) * rhs[j];
            }
            rhs[i] = acc;
        }
        for i in (0..n).rev() {
            let hi = (i + MAX_BANDWIDTH).min(n - 1);
            let mut acc = rhs[i];
            for j in i + 1..=hi {
                acc -= self.lu.get(i, j) * rhs[j];
            }
            rhs[i] = acc / self.lu.get(i, i);
        }
    }
}

/// A band matrix that has been checked to equal its conjugate transpose.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianBanded {
    matrix: BandMatrix,
    hermitian: bool,
}

impl HermitianBanded {
    /// Wraps `matrix`, recording whether it passes the Hermiticity check.
    pub fn new(matrix: BandMatrix) -> Self {
        let scale = matrix.max_abs();
        let hermitian = matrix.hermiticity_defect() <= HERMITIAN_TOL * scale.max(f64::MIN_POSITIVE);
        Self { matrix, hermitian }
    }

    pub fn zeros(n: usize) -> Self {
        Self::new(BandMatrix::zeros(n))
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn dim(&self) -> usize {
        self.matrix.n
    }

    pub fn matrix(&self) -> &BandMatrix {
        &self.matrix
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.matrix.get(i, j)
    }

    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        self.matrix.mul_vec(x)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self::new(self.matrix.scaled(C64::new(factor, 0.0)))
    }

    /// `self + factor * other` with a real factor, so Hermiticity is kept.
    pub fn plus(&self, factor: f64, other: &HermitianBanded) -> Self {
        let mut m = self.matrix.clone();
        m.add_scaled(C64::new(factor, 0.0), &other.matrix);
        Self::new(m)
    }

    pub fn plus_diagonal(&self, diag: &[f64]) -> Self {
        let mut m = self.matrix.clone();
        m.add_diagonal(diag);
        Self::new(m)
    }

    /// `Σ conj(x_i) A_ij x_j` (no quadrature weight).
    pub fn form(&self, x: &[C64]) -> C64 {
        let y = self.apply(x);
        x.iter().zip(&y).map(|(a, b)| a.conj() * b).sum()
    }

    /// `1 + α A` as a general band matrix.
    pub fn shifted_identity(&self, alpha: C64) -> BandMatrix {
        let mut m = BandMatrix::identity(self.dim());
        m.add_scaled(alpha, &self.matrix);
        m
    }

    /// Eigenvalues of a real symmetric tridiagonal matrix (the imaginary parts
    /// and the ±2 bands must vanish), by Sturm bisection. Returns the lowest
    /// `count` eigenvalues in ascending order.
    pub fn lowest_eigenvalues_tridiagonal(&self, count: usize) -> Vec<f64> {
        let n = self.dim();
        let diag: Vec<f64> = self.matrix.band(0).iter().map(|z| z.re).collect();
        let off2: Vec<f64> = self.matrix.band(1).iter().map(|z| z.norm_sqr()).collect();
        let radius = (0..n)
            .map(|i| {
                let left = if i > 0 { off2[i - 1].sqrt() } else { 0.0 };
                let right = if i + 1 < n { off2[i].sqrt() } else { 0.0 };
                (diag[i] - left - right, diag[i] + left + right)
            })
            .fold((f64::INFINITY, f64::NEG_INFINITY), |acc, (lo, hi)| {
                (acc.0.min(lo), acc.1.max(hi))
            });
        // number of eigenvalues strictly below x
        let count_below = |x: f64| -> usize {
            let mut q = diag[0] - x;
            let mut c = usize::from(q < 0.0);
            for i in 1..n {
                let denom = if q == 0.0 { f64::EPSILON * off2[i - 1].sqrt().max(1.0) } else { q };
                q = diag[i] - x - off2[i - 1] / denom;
                if q < 0.0 {
                    c += 1;
                }
            }
            c
        };
        (0..count.min(n))
            .map(|k| {
                let (mut lo, mut hi) = radius;
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if count_below(mid) > k {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                    if hi - lo <= 4.0 * f64::EPSILON * hi.abs().max(lo.abs()) {
                        break;
                    }
                }
                0.5 * (lo + hi)
            })
            .collect()
    }

    /// Lowest eigenpair of a Hermitian tridiagonal matrix: the eigenvalue by
    /// bisection, the vector by shifted inverse iteration (unit Euclidean
    /// norm, first nonzero component real and positive).
    pub fn lowest_eigenpair_tridiagonal(&self) -> Result<(f64, Vec<C64>)> {
        let n = self.dim();
        let lams = self.lowest_eigenvalues_tridiagonal(2);
        let gap = if n > 1 { lams[1] - lams[0] } else { 1.0 };
        // just below the spectrum: H - σ stays positive definite
        let sigma = lams[0] - 1e-8 * gap.max(f64::MIN_POSITIVE);
        let mut shifted = self.matrix.clone();
        shifted.add_diagonal(&vec![-sigma; n]);
        let lu = shifted.factorize()?;
        let mut v = vec![C64::new(1.0, 0.0); n];
        for _ in 0..6 {
            lu.solve_in_place(&mut v);
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            v.iter_mut().for_each(|z| *z /= norm);
        }
        if let Some(pivot) = v.iter().find(|z| z.norm() > 0.0).copied() {
            let phase = pivot.conj() / pivot.norm();
            v.iter_mut().for_each(|z| *z *= phase);
        }
        Ok((lams[0], v))
    }
}
