//! Simulation of a quantum particle confined between two moving walls.
//!
//! The moving interval `[d - l/2, d + l/2]` is mapped onto the reference box
//! `[-1/2, 1/2]` by a translation followed by a dilation. In that frame the
//! walls are fixed, the Dirichlet domain is time independent, and the state
//! evolves under `H(l) + K(l, d)`, where `K` is the generator of the moving
//! frame. Everything in this crate works in that fixed-box picture, except
//! the Zeno product-formula propagator which rebuilds the walls on a line
//! from free evolution and projections.
//!
//! Module map:
//!
//! * [`schedules`]: wall-motion laws `l(t)`, `d(t)` and their derivatives.
//! * [`operators`]: discrete `p`, `p²`, `x∘p`, `H(l)`, `K(l,d)` and potentials.
//! * [`dynamics`]: Crank–Nicolson propagation, frame maps, gauge transform,
//!   Zeno propagator.
//! * [`observables`]: energies, contact-term energy rates, diagnostics rows.
//! * [`cli`]: run configuration, runs, sweeps and run comparison.

pub mod banded;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod grid;
pub mod observables;
pub mod operators;
pub mod potential;
pub mod schedules;
pub mod spline;
pub mod wavefield;

pub use error::{Error, Result};
pub use grid::{FixedGrid, Mesh};
pub use schedules::{Kinematics, WallPositions, WallSchedule};
pub use wavefield::{Frame, WaveField};

/// Physical constants threaded through every operator. Defaults to natural
/// units `ħ = m = 1`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Units {
    pub hbar: f64,
    pub mass: f64,
}

impl Default for Units {
    fn default() -> Self {
        Self { hbar: 1.0, mass: 1.0 }
    }
}

impl Units {
    pub fn new(hbar: f64, mass: f64) -> Self {
        Self { hbar, mass }
    }

    /// `ħ² / 2m`
    pub fn kinetic_scale(&self) -> f64 {
        self.hbar * self.hbar / (2.0 * self.mass)
    }
}
