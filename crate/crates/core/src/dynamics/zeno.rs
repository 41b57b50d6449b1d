//! Walls built from free motion on a line and frequent projections.
//!
//! `W_N(t) = P(t_N) e^{-iTτ} ⋯ P(t_1) e^{-iTτ} P(t_0)` with `τ = t/N`, where
//! `T = p²/2m` acts on the whole line and `P(t)` is the indicator of the
//! interval between the walls at time `t`. The line is truncated to a
//! periodic box `[-L, L]` and `T` is applied spectrally.

use std::sync::Arc;

use num_complex::Complex64 as C64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::schedules::WallSchedule;
use crate::spline::lagrange_cubic;
use crate::{Error, Frame, Mesh, Result, Units, WaveField};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ZenoConfig {
    /// Number of projections `N` after the initial one.
    pub slices: usize,
    /// The line box is `[-line_box_halfwidth, line_box_halfwidth]`.
    pub line_box_halfwidth: f64,
    /// Grid points on the periodic line box.
    pub line_grid_points: usize,
    /// Largest tolerated fraction of norm removed by the projections.
    pub leakage_bound: f64,
}

impl Default for ZenoConfig {
    fn default() -> Self {
        Self {
            slices: 256,
            line_box_halfwidth: 2.0,
            line_grid_points: 2048,
            leakage_bound: 0.5,
        }
    }
}

impl ZenoConfig {
    pub fn validate(&self) -> Result<()> {
        if self.slices == 0 {
            return Err(Error::Validation("zeno slices must be >= 1".into()));
        }
        if !(self.line_box_halfwidth > 0.0) {
            return Err(Error::Validation("line_box_halfwidth must be > 0".into()));
        }
        if self.line_grid_points < 8 {
            return Err(Error::Validation("line_grid_points must be >= 8".into()));
        }
        if !(self.leakage_bound > 0.0 && self.leakage_bound <= 1.0) {
            return Err(Error::Validation("leakage_bound must lie in (0, 1]".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct ZenoOutcome {
    /// Final state on the mesh of the final interval, renormalized.
    pub psi: WaveField,
    /// `1 - ‖W_N ψ₀‖² / ‖ψ₀‖²`: norm removed by the projections.
    pub discarded: f64,
}

/// Periodic line grid and the free propagator over one slice.
struct LineBox {
    halfwidth: f64,
    spacing: f64,
    nodes: Vec<f64>,
    phases: Vec<C64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch: Vec<C64>,
}

impl LineBox {
    fn new(config: &ZenoConfig, tau: f64, units: Units) -> Self {
        let m = config.line_grid_points;
        let halfwidth = config.line_box_halfwidth;
        let spacing = 2.0 * halfwidth / m as f64;
        let nodes = (0..m).map(|k| -halfwidth + k as f64 * spacing).collect();
        let dk = std::f64::consts::PI / halfwidth;
        let phases = (0..m)
            .map(|j| {
                let signed = if j <= m / 2 { j as f64 } else { j as f64 - m as f64 };
                let k = signed * dk;
                C64::from_polar(1.0, -units.hbar * k * k * tau / (2.0 * units.mass))
            })
            .collect();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(m);
        let inverse = planner.plan_fft_inverse(m);
        let scratch = vec![C64::new(0.0, 0.0); forward.get_inplace_scratch_len().max(inverse.get_inplace_scratch_len())];
        Self { halfwidth, spacing, nodes, phases, forward, inverse, scratch }
    }

    fn free_step(&mut self, field: &mut [C64]) {
        self.forward.process_with_scratch(field, &mut self.scratch);
        let norm = 1.0 / field.len() as f64;
        for (z, p) in field.iter_mut().zip(&self.phases) {
            *z *= p * norm;
        }
        self.inverse.process_with_scratch(field, &mut self.scratch);
    }

    /// Indicator of `(a, b)`, with half weight within half a cell of a wall.
    fn project(&self, field: &mut [C64], a: f64, b: f64) {
        let half = 0.5 * self.spacing;
        for (z, &x) in field.iter_mut().zip(&self.nodes) {
            let weight = if (x - a).abs() <= half || (x - b).abs() <= half {
                0.5
            } else if x > a && x < b {
                1.0
            } else {
                0.0
            };
            *z *= weight;
        }
    }

    fn norm_sqr(&self, field: &[C64]) -> f64 {
        self.spacing * field.iter().map(|z| z.norm_sqr()).sum::<f64>()
    }

    /// Restriction of the line field to the interior nodes of `mesh`.
    fn restrict(&self, field: &[C64], mesh: Mesh, time: f64) -> Result<WaveField> {
        let re: Vec<f64> = field.iter().map(|z| z.re).collect();
        let im: Vec<f64> = field.iter().map(|z| z.im).collect();
        let amps = mesh
            .nodes()
            .into_iter()
            .map(|x| {
                C64::new(
                    lagrange_cubic(&re, -self.halfwidth, self.spacing, x),
                    lagrange_cubic(&im, -self.halfwidth, self.spacing, x),
                )
            })
            .collect();
        WaveField::moving(mesh, time, amps)
    }
}

/// Product-formula evolution of a laboratory-frame state from `psi0.time`
/// over `t_final`. The result lives on a mesh of the final interval with as
/// many cells as `psi0.mesh`.
pub fn zeno_propagate(
    psi0: &WaveField,
    schedule: &WallSchedule,
    t_final: f64,
    config: &ZenoConfig,
    units: Units,
) -> Result<ZenoOutcome> {
    zeno_propagate_with(psi0, schedule, t_final, config, units, usize::MAX, |_, _| Ok(()))
}

/// As [`zeno_propagate`], calling `on_snapshot(state, discarded)` at the start,
/// every `stride` slices, and at the end, with the restricted, renormalized
/// state.
pub fn zeno_propagate_with(
    psi0: &WaveField,
    schedule: &WallSchedule,
    t_final: f64,
    config: &ZenoConfig,
    units: Units,
    stride: usize,
    mut on_snapshot: impl FnMut(&WaveField, f64) -> Result<()>,
) -> Result<ZenoOutcome> {
    config.validate()?;
    psi0.expect_frame(Frame::MovingWall)?;
    let t0 = psi0.time;
    let slices = config.slices;
    let tau = t_final / slices as f64;
    let mut line = LineBox::new(config, tau, units);

    let walls_at = |t: f64| -> Result<(f64, f64)> {
        let w = schedule.wall_positions(t)?;
        if w.a.abs() >= config.line_box_halfwidth || w.b.abs() >= config.line_box_halfwidth {
            return Err(Error::Validation(format!(
                "walls [{}, {}] at t = {t} leave the line box of half-width {}",
                w.a, w.b, config.line_box_halfwidth
            )));
        }
        Ok((w.a, w.b))
    };
    let snapshot = |line: &LineBox, field: &[C64], t: f64, initial: f64| -> Result<(WaveField, f64)> {
        let (a, b) = walls_at(t)?;
        let mesh = Mesh::new(a, b, psi0.mesh.n_cells)?;
        let mut psi = line.restrict(field, mesh, t)?;
        psi.normalize();
        Ok((psi, 1.0 - line.norm_sqr(field) / initial))
    };

    let walls: Vec<(f64, f64)> = (0..=slices)
        .map(|k| walls_at(t0 + k as f64 * tau))
        .collect::<Result<_>>()?;

    let mut field = psi0.interpolate(line.nodes.iter().copied());
    let initial = line.norm_sqr(&field);
    if !(initial > 0.0) {
        return Err(Error::Validation("initial state has zero norm".into()));
    }
    let (a, b) = walls[0];
    line.project(&mut field, a, b);
    {
        let (psi, discarded) = snapshot(&line, &field, t0, initial)?;
        on_snapshot(&psi, discarded)?;
    }

    for k in 1..=slices {
        let t = t0 + k as f64 * tau;
        line.free_step(&mut field);
        let (a, b) = walls[k];
        line.project(&mut field, a, b);
        let discarded = 1.0 - line.norm_sqr(&field) / initial;
        if discarded > config.leakage_bound {
            return Err(Error::LeakageTooLarge { discarded, bound: config.leakage_bound });
        }
        if k == slices {
            let (psi, discarded) = snapshot(&line, &field, t, initial)?;
            on_snapshot(&psi, discarded)?;
            return Ok(ZenoOutcome { psi, discarded });
        }
        if k % stride == 0 {
            let (psi, discarded) = snapshot(&line, &field, t, initial)?;
            on_snapshot(&psi, discarded)?;
        }
    }
    unreachable!("loop returns on the last slice")
}
