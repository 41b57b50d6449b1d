//! Time evolution in the fixed box, maps between the two pictures, the
//! falling-elevator gauge transformation and the Zeno product formula.

mod frames;
mod gauge;
pub mod zeno;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::observables::{fill_rate_fd, make_record, DiagnosticsRecord};
use crate::operators::OperatorSet;
use crate::potential::PotentialSpec;
use crate::schedules::WallSchedule;
use crate::{Error, Frame, Result, Units, WaveField};

pub use frames::{frame_map, frame_unmap};
pub use gauge::{evolve_elevator_check, gauge_transform, ElevatorCheck};
pub use zeno::{zeno_propagate, ZenoConfig, ZenoOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    #[default]
    CrankNicolson,
    Zeno,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropagatorConfig {
    pub dt: f64,
    pub t_final: f64,
    pub snapshot_stride: usize,
    pub method: Method,
    pub zeno: ZenoConfig,
}

impl PropagatorConfig {
    pub fn crank_nicolson(dt: f64, t_final: f64, snapshot_stride: usize) -> Self {
        Self {
            dt,
            t_final,
            snapshot_stride,
            method: Method::CrankNicolson,
            zeno: ZenoConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) {
            return Err(Error::Validation(format!("dt must be > 0, got {}", self.dt)));
        }
        if !(self.t_final >= 0.0) {
            return Err(Error::Validation(format!("t_final must be >= 0, got {}", self.t_final)));
        }
        if self.snapshot_stride == 0 {
            return Err(Error::Validation("snapshot_stride must be >= 1".into()));
        }
        self.zeno.validate()
    }

    /// Step sizes covering `[0, t_final]`: full steps of `dt`, with the last
    /// one shortened if `t_final` is not a multiple of `dt`.
    pub fn step_sizes(&self) -> Vec<f64> {
        let ratio = self.t_final / self.dt;
        let full = (ratio + 1e-9).floor() as usize;
        let mut steps = vec![self.dt; full];
        let rest = self.t_final - full as f64 * self.dt;
        if rest > 1e-9 * self.dt {
            steps.push(rest);
        }
        steps
    }
}

/// Crank–Nicolson (implicit midpoint) propagator for
/// `iħ dφ/dt = (H(l) + K(l, d) + Ṽ) φ`.
#[derive(Debug, Clone)]
pub struct Propagator<'a> {
    ops: OperatorSet,
    schedule: &'a WallSchedule,
    potential: Option<&'a PotentialSpec>,
}

impl<'a> Propagator<'a> {
    pub fn new(ops: OperatorSet, schedule: &'a WallSchedule, potential: Option<&'a PotentialSpec>) -> Self {
        Self { ops, schedule, potential }
    }

    pub fn operators(&self) -> &OperatorSet {
        &self.ops
    }

    /// Advances `phi` from `phi.time` to `phi.time + dt`, solving
    /// `(1 + i dt H/2ħ) φ' = (1 - i dt H/2ħ) φ` with `H` at the midpoint.
    pub fn step(&self, phi: &WaveField, dt: f64) -> Result<WaveField> {
        phi.expect_frame(Frame::FixedBox)?;
        if phi.len() != self.ops.grid().dim() {
            return Err(Error::DimensionMismatch { expected: self.ops.grid().dim(), got: phi.len() });
        }
        let t_mid = phi.time + 0.5 * dt;
        let kin = self.schedule.evaluate(t_mid)?;
        let h = self.ops.full(kin, t_mid, self.potential)?;
        let alpha = C64::new(0.0, 0.5 * dt / self.ops.units().hbar);
        let explicit = h.shifted_identity(-alpha);
        let implicit = h.shifted_identity(alpha).factorize()?;
        let mut next = explicit.mul_vec(&phi.amplitudes);
        implicit.solve_in_place(&mut next);
        Ok(WaveField {
            frame: Frame::FixedBox,
            time: phi.time + dt,
            mesh: phi.mesh,
            amplitudes: next,
        })
    }

    /// Repeated [`step`](Self::step) over the configured window. `on_snapshot`
    /// sees the state at every stride point, including the start and the end.
    pub fn propagate_with(
        &self,
        phi0: &WaveField,
        config: &PropagatorConfig,
        mut on_snapshot: impl FnMut(&WaveField) -> Result<()>,
    ) -> Result<(WaveField, Vec<DiagnosticsRecord>)> {
        config.validate()?;
        phi0.expect_frame(Frame::FixedBox)?;
        let steps = config.step_sizes();
        let mut records = Vec::with_capacity(steps.len() / config.snapshot_stride + 2);
        let mut phi = phi0.clone();
        records.push(make_record(&phi, self.schedule, &self.ops, self.potential)?);
        on_snapshot(&phi)?;
        for (k, dt) in steps.iter().enumerate() {
            phi = self.step(&phi, *dt)?;
            let done = k + 1;
            if done % config.snapshot_stride == 0 || done == steps.len() {
                records.push(make_record(&phi, self.schedule, &self.ops, self.potential)?);
                on_snapshot(&phi)?;
            }
        }
        fill_rate_fd(&mut records);
        Ok((phi, records))
    }
}

/// Convenience wrapper: propagate `phi0` under `schedule` and return the
/// final state with its diagnostics.
pub fn propagate(
    phi0: &WaveField,
    schedule: &WallSchedule,
    config: &PropagatorConfig,
    potential: Option<&PotentialSpec>,
    units: Units,
) -> Result<(WaveField, Vec<DiagnosticsRecord>)> {
    let grid = phi0.grid()?;
    Propagator::new(OperatorSet::new(grid, units), schedule, potential)
        .propagate_with(phi0, config, |_| Ok(()))
}

/// Single Crank–Nicolson step; see [`Propagator::step`].
pub fn step(
    phi: &WaveField,
    schedule: &WallSchedule,
    dt: f64,
    potential: Option<&PotentialSpec>,
    units: Units,
) -> Result<WaveField> {
    let grid = phi.grid()?;
    Propagator::new(OperatorSet::new(grid, units), schedule, potential).step(phi, dt)
}
