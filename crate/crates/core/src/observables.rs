//! Energies, contact-term energy rates and per-snapshot diagnostics.
//!
//! The energy rate caused by moving walls is a pure boundary term:
//!
//! ```text
//! Ė = -(ħ²/(2 m l³)) [ (l̇ ξ + ḋ) |φ'(ξ)|² ] from ξ = -1/2 to ξ = 1/2
//! ```
//!
//! in the fixed box, or `-(ħ²/2m) [ḃ |ψ'(b)|² - ȧ |ψ'(a)|²]` in the
//! laboratory frame. A potential adds `⟨∂V/∂t⟩` and nothing at the walls.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::operators::OperatorSet;
use crate::potential::PotentialSpec;
use crate::schedules::{Kinematics, WallPositions, WallSchedule};
use crate::wavefield::box_eigenmode;
use crate::{Frame, Result, Units, WaveField};

/// Guard used in relative-error denominators.
pub const REL_EPS: f64 = 1e-30;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// One-sided difference stencil for `φ'(±1/2)`, anchored on the Dirichlet
/// zero at the wall.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundaryStencil {
    /// `(3·0 - 4φ₁ + φ₂) / (2Δξ)` style three-point stencil, `O(Δξ²)`.
    SecondOrder,
    /// Five points (wall plus four interior nodes), `O(Δξ⁴)`; exact for
    /// quartic polynomials.
    #[default]
    FourthOrder,
}

impl BoundaryStencil {
    /// Weights on the first interior nodes, counted from the wall, for the
    /// inward derivative `f'(wall)` with unit spacing.
    fn weights(self) -> &'static [f64] {
        match self {
            BoundaryStencil::SecondOrder => &[4.0 / 2.0, -1.0 / 2.0],
            BoundaryStencil::FourthOrder => &[48.0 / 12.0, -36.0 / 12.0, 16.0 / 12.0, -3.0 / 12.0],
        }
    }
}

/// `φ'(∓1/2)` with the default fourth-order stencil.
pub fn boundary_derivative(phi: &WaveField, side: Side) -> C64 {
    boundary_derivative_with(phi, side, BoundaryStencil::default())
}

pub fn boundary_derivative_with(phi: &WaveField, side: Side, stencil: BoundaryStencil) -> C64 {
    let h = phi.spacing();
    let a = &phi.amplitudes;
    let w = stencil.weights();
    match side {
        Side::Left => w.iter().zip(a.iter()).map(|(w, z)| z * *w).sum::<C64>() / h,
        Side::Right => -w.iter().zip(a.iter().rev()).map(|(w, z)| z * *w).sum::<C64>() / h,
    }
}

/// `⟨φ|H(l)|φ⟩` under the trapezoidal rule.
pub fn kinetic_energy(phi: &WaveField, ops: &OperatorSet, l: f64) -> f64 {
    ops.kinetic(l).form(&phi.amplitudes).re * phi.spacing()
}

/// `⟨φ|Ṽ|φ⟩`
pub fn potential_energy(
    phi: &WaveField,
    ops: &OperatorSet,
    kin: Kinematics,
    t: f64,
    potential: &PotentialSpec,
) -> f64 {
    let diag = ops.potential_diagonal(kin, t, potential);
    phi.spacing()
        * phi
            .amplitudes
            .iter()
            .zip(&diag)
            .map(|(z, v)| z.norm_sqr() * v)
            .sum::<f64>()
}

/// `⟨φ|H(l) + Ṽ|φ⟩`; the potential term is dropped when absent.
pub fn energy(
    phi: &WaveField,
    ops: &OperatorSet,
    kin: Kinematics,
    t: f64,
    potential: Option<&PotentialSpec>,
) -> f64 {
    let e = kinetic_energy(phi, ops, kin.l);
    match potential {
        Some(v) => e + potential_energy(phi, ops, kin, t, v),
        None => e,
    }
}

/// Fixed-frame contact formula evaluated from given boundary derivatives.
pub fn contact_rate_fixed(kin: Kinematics, dphi_left: C64, dphi_right: C64, units: Units) -> f64 {
    let prefactor = -units.kinetic_scale() / (kin.l * kin.l * kin.l);
    let right = (0.5 * kin.ldot + kin.ddot) * dphi_right.norm_sqr();
    let left = (-0.5 * kin.ldot + kin.ddot) * dphi_left.norm_sqr();
    prefactor * (right - left)
}

/// `Ė` from the contact terms `|φ'(±1/2)|²`.
pub fn energy_rate_fixed_frame(phi: &WaveField, kin: Kinematics, units: Units) -> f64 {
    contact_rate_fixed(
        kin,
        boundary_derivative(phi, Side::Left),
        boundary_derivative(phi, Side::Right),
        units,
    )
}

/// `Ė = -(ħ²/2m) [ḃ |ψ'(b)|² - ȧ |ψ'(a)|²]`
pub fn energy_rate_moving_frame(dpsi_a: C64, dpsi_b: C64, walls: WallPositions, units: Units) -> f64 {
    -units.kinetic_scale() * (walls.bdot * dpsi_b.norm_sqr() - walls.adot * dpsi_a.norm_sqr())
}

/// `ψ'(a), ψ'(b)` from `φ'(∓1/2)` via `φ'(ξ) = l^{3/2} ψ'(lξ + d)`.
pub fn moving_frame_derivatives(dphi_left: C64, dphi_right: C64, l: f64) -> (C64, C64) {
    let s = l.powf(-1.5);
    (dphi_left * s, dphi_right * s)
}

/// `⟨φ| U ∂V/∂t U† |φ⟩`; exactly zero for static potentials.
pub fn potential_rate(
    phi: &WaveField,
    kin: Kinematics,
    t: f64,
    potential: &PotentialSpec,
) -> Result<f64> {
    if potential.is_static() {
        return Ok(0.0);
    }
    let mut acc = 0.0;
    for (i, z) in phi.amplitudes.iter().enumerate() {
        let x = kin.l * phi.mesh.node(i) + kin.d;
        acc += z.norm_sqr() * potential.time_derivative(x, t)?;
    }
    Ok(acc * phi.spacing())
}

/// `Ė₁ = Ė + ⟨∂V/∂t⟩`
pub fn energy_rate_with_potential(
    phi: &WaveField,
    kin: Kinematics,
    t: f64,
    potential: &PotentialSpec,
    units: Units,
) -> Result<f64> {
    Ok(energy_rate_fixed_frame(phi, kin, units) + potential_rate(phi, kin, t, potential)?)
}

/// `|⟨φ_n|φ⟩|²` for the instantaneous box eigenmode `n` (the discrete
/// Laplacian eigenvectors do not depend on `l`).
pub fn mode_population(phi: &WaveField, n: usize) -> Result<f64> {
    let grid = phi.grid()?;
    let mode = WaveField::fixed(&grid, phi.time, box_eigenmode(&grid, n))?;
    Ok(mode.inner(phi)?.norm_sqr())
}

/// One row of diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub norm: f64,
    /// `⟨φ|H(l)|φ⟩`
    pub energy: f64,
    /// `energy + ⟨Ṽ⟩`
    pub energy_total: f64,
    pub rate_boundary: f64,
    /// Centred difference of `energy_total` across neighbouring records.
    pub rate_fd: Option<f64>,
    pub rate_potential: f64,
    pub dphi_left: C64,
    pub dphi_right: C64,
}

impl DiagnosticsRecord {
    /// Predicted `d/dt energy_total`.
    pub fn rate_predicted(&self) -> f64 {
        self.rate_boundary + self.rate_potential
    }

    /// `|rate_fd - predicted| / max(|rate_fd|, ε)` when `rate_fd` exists.
    pub fn rate_mismatch(&self) -> Option<f64> {
        self.rate_fd
            .map(|fd| (fd - self.rate_predicted()).abs() / fd.abs().max(REL_EPS))
    }
}

/// Diagnostics for a fixed-frame state at its own time stamp. `rate_fd` is
/// left empty; see [`fill_rate_fd`].
pub fn make_record(
    phi: &WaveField,
    schedule: &WallSchedule,
    ops: &OperatorSet,
    potential: Option<&PotentialSpec>,
) -> Result<DiagnosticsRecord> {
    phi.expect_frame(Frame::FixedBox)?;
    let t = phi.time;
    let kin = schedule.evaluate(t)?;
    let units = ops.units();
    let e = kinetic_energy(phi, ops, kin.l);
    let (e_total, rate_potential) = match potential {
        Some(v) => (
            e + potential_energy(phi, ops, kin, t, v),
            potential_rate(phi, kin, t, v)?,
        ),
        None => (e, 0.0),
    };
    let dphi_left = boundary_derivative(phi, Side::Left);
    let dphi_right = boundary_derivative(phi, Side::Right);
    Ok(DiagnosticsRecord {
        t,
        norm: phi.norm(),
        energy: e,
        energy_total: e_total,
        rate_boundary: contact_rate_fixed(kin, dphi_left, dphi_right, units),
        rate_fd: None,
        rate_potential,
        dphi_left,
        dphi_right,
    })
}

/// Fills `rate_fd` for every record with two neighbours.
pub fn fill_rate_fd(records: &mut [DiagnosticsRecord]) {
    for k in 1..records.len().saturating_sub(1) {
        let (prev, next) = (records[k - 1], records[k + 1]);
        records[k].rate_fd = Some((next.energy_total - prev.energy_total) / (next.t - prev.t));
    }
}
