//! Randomized invariants of the operators, schedules and diagnostics.

use movingbox::dynamics::step;
use movingbox::observables::{boundary_derivative, energy_rate_fixed_frame, Side};
use movingbox::operators::{assemble_full, assemble_generator, assemble_kinetic};
use movingbox::schedules::{Anchor, Motion};
use movingbox::{FixedGrid, Kinematics, Units, WallSchedule, WaveField};
use num_complex::Complex64 as C64;
use proptest::prelude::*;

fn motion() -> impl Strategy<Value = Motion> {
    prop_oneof![
        (0.5..3.0f64, -2.0..2.0f64, -2.0..2.0f64).prop_map(|(l0, d0, v)| Motion::LinearTranslation { l0, d0, v }),
        (0.5..3.0f64, -2.0..2.0f64, -3.0..3.0f64).prop_map(|(l0, d0, g)| Motion::UniformAcceleration { l0, d0, g }),
        (0.5..3.0f64, -0.3..0.3f64, -1.0..1.0f64, any::<bool>()).prop_map(|(l0, v, d0, left)| {
            Motion::LinearExpansion { l0, v, d0, anchor: if left { Anchor::LeftWall } else { Anchor::Centered } }
        }),
        (1.0..3.0f64, 0.0..0.9f64, 0.1..7.0f64, any::<bool>()).prop_map(|(l0, frac, omega, left)| {
            Motion::SinusoidalExpansion {
                l0,
                amplitude: frac * l0,
                omega,
                d0: 0.0,
                anchor: if left { Anchor::LeftWall } else { Anchor::Centered },
            }
        }),
    ]
}

/// Random polynomial times the factor `(1/4 - ξ²)^power`.
fn polynomial_state(grid: &FixedGrid, coeffs: &[(f64, f64)], power: i32) -> WaveField {
    WaveField::from_fn(grid, 0.0, |x| {
        let p = coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, (re, im)| acc * x + C64::new(*re, *im));
        p * (0.25 - x * x).powi(power)
    })
}

fn coefficients() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..4)
        .prop_filter("nonzero constant term", |c| c[0].0.abs() + c[0].1.abs() > 0.2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn full_operator_is_hermitian(m in motion(), t in 0.0..1.0f64, n in 8usize..80) {
        let grid = FixedGrid::new(n).unwrap();
        let schedule = WallSchedule::new(m);
        let op = assemble_full(&grid, &schedule, t, None, Units::default()).unwrap();
        prop_assert!(op.is_hermitian());
        prop_assert!(op.matrix().hermiticity_defect() <= 1e-14 * op.matrix().max_abs().max(1.0));
    }

    #[test]
    fn generator_is_linear_in_the_velocities(
        l in 0.2..4.0f64,
        (a1, b1, a2, b2) in (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64),
        s in -2.0..2.0f64,
    ) {
        let grid = FixedGrid::new(32).unwrap();
        let units = Units::default();
        let k = |ldot: f64, ddot: f64| assemble_generator(&grid, Kinematics { l, d: 0.3, ldot, ddot }, units).unwrap();
        let combined = k(a1 + s * a2, b1 + s * b2);
        let sum = k(a1, b1).plus(s, &k(a2, b2));
        let scale = combined.matrix().max_abs().max(1.0);
        for i in 0..grid.dim() {
            for j in i.saturating_sub(2)..(i + 3).min(grid.dim()) {
                prop_assert!((combined.get(i, j) - sum.get(i, j)).norm() <= 1e-13 * scale);
            }
        }
    }

    #[test]
    fn wall_positions_are_consistent(m in motion(), t in 0.0..1.0f64) {
        let schedule = WallSchedule::new(m);
        let k = schedule.evaluate(t).unwrap();
        let w = schedule.wall_positions(t).unwrap();
        prop_assert!((w.a - (k.d - 0.5 * k.l)).abs() < 1e-12);
        prop_assert!((w.b - (k.d + 0.5 * k.l)).abs() < 1e-12);
        prop_assert!((w.adot - (k.ddot - 0.5 * k.ldot)).abs() < 1e-12);
        prop_assert!((w.bdot - (k.ddot + 0.5 * k.ldot)).abs() < 1e-12);
        prop_assert!((w.b - w.a - k.l).abs() < 1e-12);
    }

    #[test]
    fn schedule_derivatives_match_finite_differences(m in motion(), t in 0.01..0.99f64) {
        let schedule = WallSchedule::new(m);
        let h = 1e-6;
        let (lo, hi, mid) = (schedule.evaluate(t - h).unwrap(), schedule.evaluate(t + h).unwrap(), schedule.evaluate(t).unwrap());
        prop_assert!(((hi.l - lo.l) / (2.0 * h) - mid.ldot).abs() < 1e-6 * (1.0 + mid.ldot.abs()));
        prop_assert!(((hi.d - lo.d) / (2.0 * h) - mid.ddot).abs() < 1e-6 * (1.0 + mid.ddot.abs()));
    }

    #[test]
    fn boundary_derivative_matches_analytic_slope(c in coefficients()) {
        // φ = q(ξ)(1/4 - ξ²): φ'(±1/2) = ∓q(±1/2)
        let grid = FixedGrid::new(256).unwrap();
        let phi = polynomial_state(&grid, &c, 1);
        let q = |x: f64| c.iter().rev().fold(C64::new(0.0, 0.0), |acc, (re, im)| acc * x + C64::new(*re, *im));
        let left = boundary_derivative(&phi, Side::Left);
        let right = boundary_derivative(&phi, Side::Right);
        prop_assert!((left - q(-0.5)).norm() < 1e-9, "left {left} vs {}", q(-0.5));
        prop_assert!((right + q(0.5)).norm() < 1e-9, "right {right} vs {}", -q(0.5));
    }

    #[test]
    fn energy_rate_vanishes_when_slopes_vanish(
        c in coefficients(),
        l in 0.3..3.0f64,
        ldot in -5.0..5.0f64,
        ddot in -5.0..5.0f64,
    ) {
        let grid = FixedGrid::new(128).unwrap();
        let phi = polynomial_state(&grid, &c, 2).normalized();
        let units = Units::default();
        let rate = energy_rate_fixed_frame(&phi, Kinematics { l, d: 0.0, ldot, ddot }, units);
        // exact for quartics; higher degrees leave the O(Δξ⁴) stencil residue
        let peak = phi.amplitudes.iter().map(|z| z.norm_sqr()).fold(0.0, f64::max);
        let scale = units.kinetic_scale() / l.powi(3) * (ldot.abs() + ddot.abs()) * peak;
        prop_assert!(rate.abs() <= 1e-8 * scale, "rate {rate}, scale {scale}");
    }

    #[test]
    fn kinetic_form_is_real_and_positive(c in coefficients(), l in 0.3..3.0f64) {
        let grid = FixedGrid::new(64).unwrap();
        let phi = polynomial_state(&grid, &c, 1);
        let e = assemble_kinetic(&grid, l, Units::default()).unwrap().form(&phi.amplitudes);
        prop_assert!(e.re > 0.0);
        prop_assert!(e.im.abs() <= 1e-12 * e.re);
    }

    #[test]
    fn a_step_preserves_the_norm(m in motion(), c in coefficients(), dt in 1e-4..1e-1f64) {
        let grid = FixedGrid::new(64).unwrap();
        let phi = polynomial_state(&grid, &c, 1).normalized();
        let next = step(&phi, &WallSchedule::new(m), dt, None, Units::default()).unwrap();
        prop_assert!((next.norm() - 1.0).abs() < 1e-12);
        prop_assert!((next.time - dt).abs() < 1e-15);
    }
}
