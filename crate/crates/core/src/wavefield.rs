use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::spline::lagrange_cubic;
use crate::{Error, FixedGrid, Mesh, Result};

/// Which picture a wave function lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Frame {
    /// `φ(ξ)` on the reference box `[-1/2, 1/2]`.
    FixedBox,
    /// `ψ(x)` on the physical interval between the walls.
    MovingWall,
}

/// `√2 sin(nπ(ξ + 1/2))` sampled on the reference grid: the `n`-th Dirichlet
/// eigenmode of the box, and an exact eigenvector of the discrete Laplacian.
pub fn box_eigenmode(grid: &FixedGrid, n: usize) -> Vec<C64> {
    let k = n as f64 * std::f64::consts::PI;
    grid.sample(|x| C64::new(std::f64::consts::SQRT_2 * (k * (x + 0.5)).sin(), 0.0))
}

/// Complex amplitudes on the interior nodes of a uniform mesh, with implicit
/// zeros at both ends.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveField {
    pub frame: Frame,
    pub time: f64,
    pub mesh: Mesh,
    pub amplitudes: Vec<C64>,
}

impl WaveField {
    pub fn fixed(grid: &FixedGrid, time: f64, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != grid.dim() {
            return Err(Error::DimensionMismatch { expected: grid.dim(), got: amplitudes.len() });
        }
        Ok(Self { frame: Frame::FixedBox, time, mesh: grid.mesh(), amplitudes })
    }

    pub fn moving(mesh: Mesh, time: f64, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != mesh.interior_len() {
            return Err(Error::DimensionMismatch {
                expected: mesh.interior_len(),
                got: amplitudes.len(),
            });
        }
        Ok(Self { frame: Frame::MovingWall, time, mesh, amplitudes })
    }

    /// Samples a real or complex function on the reference grid.
    pub fn from_fn(grid: &FixedGrid, time: f64, f: impl Fn(f64) -> C64) -> Self {
        Self { frame: Frame::FixedBox, time, mesh: grid.mesh(), amplitudes: grid.sample(f) }
    }

    pub fn expect_frame(&self, frame: Frame) -> Result<()> {
        if self.frame != frame {
            return Err(Error::FrameMismatch { expected: frame, got: self.frame });
        }
        Ok(())
    }

    /// Reference grid of a fixed-box field.
    pub fn grid(&self) -> Result<FixedGrid> {
        self.expect_frame(Frame::FixedBox)?;
        FixedGrid::new(self.mesh.n_cells)
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        self.mesh.spacing()
    }

    /// Trapezoidal `∫|f|²`; the boundary zeros contribute nothing.
    pub fn norm_sqr(&self) -> f64 {
        self.spacing() * self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalize(&mut self) -> f64 {
        let n = self.norm();
        if n > 0.0 {
            self.amplitudes.iter_mut().for_each(|z| *z /= n);
        }
        n
    }

    pub fn normalized(mut self) -> Self {
        self.normalize();
        self
    }

    fn check_same_mesh(&self, other: &Self) -> Result<()> {
        if self.amplitudes.len() != other.amplitudes.len() {
            return Err(Error::DimensionMismatch {
                expected: self.amplitudes.len(),
                got: other.amplitudes.len(),
            });
        }
        Ok(())
    }

    /// `⟨self|other⟩` under the trapezoidal rule.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        self.check_same_mesh(other)?;
        let s: C64 = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(s * self.spacing())
    }

    /// `|⟨self|other⟩|`
    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        self.inner(other).map(|z| z.norm())
    }

    /// `‖self - other‖`
    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.check_same_mesh(other)?;
        let s: f64 = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        Ok((s * self.spacing()).sqrt())
    }

    /// Values including the two boundary zeros, split into real and imaginary
    /// parts.
    fn padded_parts(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.amplitudes.len() + 2;
        let mut re = Vec::with_capacity(n);
        let mut im = Vec::with_capacity(n);
        re.push(0.0);
        im.push(0.0);
        for z in &self.amplitudes {
            re.push(z.re);
            im.push(z.im);
        }
        re.push(0.0);
        im.push(0.0);
        (re, im)
    }

    /// Cubic interpolant at the points `xs`; zero outside the mesh.
    pub fn interpolate(&self, xs: impl IntoIterator<Item = f64>) -> Vec<C64> {
        let (re, im) = self.padded_parts();
        let (x0, h) = (self.mesh.left, self.spacing());
        xs.into_iter()
            .map(|x| C64::new(lagrange_cubic(&re, x0, h, x), lagrange_cubic(&im, x0, h, x)))
            .collect()
    }
}
