use num_complex::Complex64 as C64;

use super::{propagate, PropagatorConfig};
use crate::potential::PotentialSpec;
use crate::schedules::WallSchedule;
use crate::{Frame, Result, Units, WaveField};

/// `χ(ξ) = exp((i/ħ)(m g ξ t - m g² t³ / 6)) φ(ξ)`.
///
/// This phase turns the box falling with acceleration `g`
/// (`d(t) = d₀ - g t²/2`, generator `+g t p`) into a static box in the
/// potential `-m g x`.
pub fn gauge_transform(phi: &WaveField, t: f64, g: f64, units: Units) -> Result<WaveField> {
    phi.expect_frame(Frame::FixedBox)?;
    let m = units.mass;
    let mut out = phi.clone();
    for (i, z) in out.amplitudes.iter_mut().enumerate() {
        let xi = phi.mesh.node(i);
        let phase = (m * g * xi * t - m * g * g * t * t * t / 6.0) / units.hbar;
        *z *= C64::from_polar(1.0, phase);
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct ElevatorCheck {
    /// `|⟨χ_B | G(T) φ_A⟩|`
    pub fidelity: f64,
    /// Evolved in the unit box falling with acceleration `g`.
    pub boxed: WaveField,
    /// Evolved in the static unit box under `-m g x`.
    pub gravity: WaveField,
}

/// Evolves `phi0` in a falling unit box and, separately, in a static box with
/// a linear gravitational potential, then compares them through the gauge
/// transformation at `t_final`.
pub fn evolve_elevator_check(
    phi0: &WaveField,
    g: f64,
    t_final: f64,
    dt: f64,
    units: Units,
) -> Result<ElevatorCheck> {
    let config = PropagatorConfig::crank_nicolson(dt, t_final, usize::MAX);
    let falling = WallSchedule::uniform_acceleration(1.0, 0.0, -g);
    let (boxed, _) = propagate(phi0, &falling, &config, None, units)?;

    let chi0 = gauge_transform(phi0, 0.0, g, units)?;
    let still = WallSchedule::static_box(1.0, 0.0);
    let gravity_potential = PotentialSpec::linear(-units.mass * g, 0.0);
    let (gravity, _) = propagate(&chi0, &still, &config, Some(&gravity_potential), units)?;

    let gauged = gauge_transform(&boxed, t_final, g, units)?;
    let fidelity = gravity.fidelity(&gauged)?;
    Ok(ElevatorCheck { fidelity, boxed, gravity })
}
