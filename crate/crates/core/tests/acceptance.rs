//! Acceptance suite: one PASS/FAIL line per criterion; exits nonzero if any
//! criterion fails. Runs with `cargo test --test acceptance`.

use std::f64::consts::PI;
use std::time::Instant;

use movingbox::cli::{self, presets};
use movingbox::dynamics::{
    evolve_elevator_check, frame_map, frame_unmap, propagate, zeno_propagate, PropagatorConfig,
    ZenoConfig,
};
use movingbox::observables::{boundary_derivative, contact_rate_fixed, mode_population, DiagnosticsRecord, Side};
use movingbox::operators::{assemble_full, assemble_kinetic, assemble_momentum};
use movingbox::potential::PotentialSpec;
use movingbox::wavefield::box_eigenmode;
use movingbox::{FixedGrid, Units, WallSchedule, WaveField};
use num_complex::Complex64 as C64;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn mode(grid: &FixedGrid, n: usize) -> WaveField {
    WaveField::fixed(grid, 0.0, box_eigenmode(grid, n)).unwrap()
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

fn strictly_decreasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] < w[0])
}

fn median_mismatch(records: &[DiagnosticsRecord]) -> f64 {
    median(records.iter().filter_map(DiagnosticsRecord::rate_mismatch).collect())
}

fn preset_parts(name: &str) -> (FixedGrid, WallSchedule, PropagatorConfig, Units) {
    let c = presets::load(name).unwrap();
    (c.fixed_grid().unwrap(), c.wall_schedule().unwrap(), c.propagator_config(), c.units())
}

/// Every preset through the CLI runner: 10⁴ steps, norm drift < 1e-9, < 30 s.
fn unitarity() -> Outcome {
    let out = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    let mut slowest: f64 = 0.0;
    let mut fails = Vec::new();
    for name in presets::names() {
        let mut config = presets::load(name).unwrap();
        config.output.directory = out.path().join(name);
        let start = Instant::now();
        let summary = cli::run(&config).map_err(|e| format!("{name}: {e}"))?;
        let secs = start.elapsed().as_secs_f64();
        let drift = summary.records.iter().map(|r| (r.norm - 1.0).abs()).fold(0.0, f64::max);
        if summary.manifest.steps != 10_000 || drift >= 1e-9 || secs >= 30.0 {
            fails.push(format!("{name}: steps {} drift {drift:.2e} time {secs:.1}s", summary.manifest.steps));
        }
        worst = worst.max(drift);
        slowest = slowest.max(secs);
    }
    check(
        fails.is_empty(),
        format!("max |norm-1| = {worst:.2e} over 5 presets, slowest {slowest:.1}s {}", fails.join("; ")),
    )
}

fn spectrum() -> Outcome {
    let grid = FixedGrid::new(512).unwrap();
    let units = Units::default();
    let h1 = assemble_kinetic(&grid, 1.0, units).unwrap();
    let eig = h1.lowest_eigenvalues_tridiagonal(5);
    let worst = eig
        .iter()
        .enumerate()
        .map(|(k, e)| {
            let n = (k + 1) as f64;
            let exact = PI * PI * n * n / 2.0;
            (e - exact).abs() / exact
        })
        .fold(0.0, f64::max);
    let e2 = assemble_kinetic(&grid, 2.0, units).unwrap().lowest_eigenvalues_tridiagonal(1)[0];
    let scaling = (e2 - eig[0] / 4.0).abs() / (eig[0] / 4.0);
    check(
        worst < 5e-4 && scaling < 1e-12,
        format!("worst relative eigenvalue error {worst:.2e}, l=2 quarter-scaling error {scaling:.2e}"),
    )
}

fn linear_expansion_mismatch(n: usize, potential: Option<&PotentialSpec>) -> Vec<DiagnosticsRecord> {
    let (_, schedule, config, units) = preset_parts("linear-expansion");
    let grid = FixedGrid::new(n).unwrap();
    propagate(&mode(&grid, 1), &schedule, &config, potential, units).unwrap().1
}

fn contact_terms() -> Outcome {
    let (_, _, config, _) = preset_parts("linear-expansion");
    assert_eq!((config.dt, config.snapshot_stride), (1e-4, 10));
    let errors: Vec<f64> = [128, 256, 512]
        .iter()
        .map(|&n| median_mismatch(&linear_expansion_mismatch(n, None)))
        .collect();
    check(
        errors[2] < 1e-2 && strictly_decreasing(&errors),
        format!("median mismatch N=128/256/512: {:.3e} / {:.3e} / {:.3e}", errors[0], errors[1], errors[2]),
    )
}

fn adiabatic_identity() -> Outcome {
    let v = 0.005;
    let grid = FixedGrid::new(512).unwrap();
    let schedule = WallSchedule::linear_expansion(1.0, v);
    let config = PropagatorConfig::crank_nicolson(1e-3, 10.0, 10);
    let units = Units::default();
    let mut min_pop: f64 = 1.0;
    let mut worst: f64 = 0.0;
    let records = movingbox::dynamics::Propagator::new(
        movingbox::operators::OperatorSet::new(grid, units),
        &schedule,
        None,
    )
    .propagate_with(&mode(&grid, 1), &config, |phi| {
        min_pop = min_pop.min(mode_population(phi, 1)?);
        Ok(())
    })
    .unwrap()
    .1;
    for r in &records {
        let l = 1.0 + v * r.t;
        let exact = -v * PI * PI / l.powi(3);
        worst = worst.max((r.rate_boundary - exact).abs() / exact.abs());
    }
    check(
        worst < 0.02 && min_pop > 0.99,
        format!("worst relative deviation from -v pi^2/l^3: {worst:.2e}, min ground population {min_pop:.6}"),
    )
}

fn galilean() -> Outcome {
    let (grid, schedule, config, units) = preset_parts("galilean");
    let v = schedule.evaluate(0.0).unwrap().ddot;
    let mut entry_err: f64 = 0.0;
    for t in [0.0, 0.37, 1.0] {
        let full = assemble_full(&grid, &schedule, t, None, units).unwrap();
        let reference = assemble_kinetic(&grid, 1.0, units)
            .unwrap()
            .plus(-v, &assemble_momentum(&grid, units));
        let n = grid.dim();
        for i in 0..n {
            for j in i.saturating_sub(2)..(i + 3).min(n) {
                entry_err = entry_err.max((full.get(i, j) - reference.get(i, j)).norm());
            }
        }
    }
    // stationary state of H - v p: |φ| is even, so the wall terms cancel
    let generator = assemble_full(&grid, &schedule, 0.0, None, units).unwrap();
    let (_, vec) = generator.lowest_eigenpair_tridiagonal().map_err(|e| e.to_string())?;
    let phi0 = WaveField::fixed(&grid, 0.0, vec).unwrap().normalized();
    let records = propagate(&phi0, &schedule, &config, None, units).unwrap().1;
    let l: f64 = 1.0;
    let mut worst_ratio: f64 = 0.0;
    for r in &records {
        let dmax = r.dphi_left.norm_sqr().max(r.dphi_right.norm_sqr());
        let bound = 1e-8 * units.kinetic_scale() / l.powi(3) * dmax;
        worst_ratio = worst_ratio.max(r.rate_boundary.abs() / bound);
    }
    check(
        entry_err < 1e-14 && worst_ratio < 1.0,
        format!(
            "max entry deviation {entry_err:.1e}; max |rate|/bound {worst_ratio:.2e} over {} snapshots (v = {v})",
            records.len()
        ),
    )
}

fn superposition(grid: &FixedGrid) -> WaveField {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let amps = box_eigenmode(grid, 1)
        .iter()
        .zip(box_eigenmode(grid, 2))
        .map(|(a, b)| (a + b) * s)
        .collect();
    WaveField::fixed(grid, 0.0, amps).unwrap()
}

fn equivalence_principle() -> Outcome {
    let grid = FixedGrid::new(512).unwrap();
    let units = Units::default();
    let phi0 = superposition(&grid);
    let pinned = evolve_elevator_check(&phi0, 1.0, 0.5, 1e-4, units).map_err(|e| e.to_string())?.fidelity;
    let dts = [1e-2, 5e-3, 2.5e-3];
    let deficits: Vec<f64> = dts
        .iter()
        .map(|&dt| 1.0 - evolve_elevator_check(&phi0, 1.0, 0.5, dt, units).unwrap().fidelity)
        .collect();
    let orders: Vec<f64> = deficits.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    check(
        pinned > 1.0 - 1e-4 && orders.iter().all(|&p| p >= 2.0),
        format!(
            "1 - fidelity at dt=1e-4: {:.1e}; deficits {:.2e} / {:.2e} / {:.2e}, observed orders {:.2} / {:.2}",
            1.0 - pinned,
            deficits[0],
            deficits[1],
            deficits[2],
            orders[0],
            orders[1]
        ),
    )
}

const ZENO_SLICES: [usize; 4] = [16, 64, 256, 1024];

fn zeno_oracle() -> Outcome {
    let start = Instant::now();
    let units = Units::default();
    let grid = FixedGrid::new(512).unwrap();
    let phi0 = mode(&grid, 1);

    let static_box = WallSchedule::static_box(1.0, 0.0);
    let t_static = 0.1;
    let cn = propagate(&phi0, &static_box, &PropagatorConfig::crank_nicolson(1e-4, t_static, 100), None, units)
        .unwrap()
        .0;
    let psi0 = frame_unmap(&phi0, 1.0, 0.0, grid.n_cells()).unwrap();
    let mut fidelities = Vec::new();
    for slices in ZENO_SLICES {
        let cfg = ZenoConfig { slices, ..ZenoConfig::default() };
        let out = zeno_propagate(&psi0, &static_box, t_static, &cfg, units).map_err(|e| e.to_string())?;
        let phi = frame_map(&out.psi, 1.0, 0.0, &grid).unwrap();
        fidelities.push(phi.fidelity(&cn).unwrap());
    }

    let (_, schedule, config, _) = preset_parts("linear-expansion");
    let cn = propagate(&phi0, &schedule, &config, None, units).unwrap().0;
    let kin = schedule.evaluate(config.t_final).unwrap();
    let mut distances = Vec::new();
    let mut leakage = Vec::new();
    for slices in ZENO_SLICES {
        // coarse slicings discard much of the norm over the unit-time run
        let cfg = ZenoConfig { slices, leakage_bound: 0.95, ..ZenoConfig::default() };
        let out = zeno_propagate(&psi0, &schedule, config.t_final, &cfg, units).map_err(|e| e.to_string())?;
        let phi = frame_map(&out.psi, kin.l, kin.d, &grid).unwrap();
        distances.push(phi.distance(&cn).unwrap());
        leakage.push(out.discarded);
    }
    let secs = start.elapsed().as_secs_f64();
    let increasing = fidelities.windows(2).all(|w| w[1] > w[0]);
    let fmt = |xs: &[f64]| xs.iter().map(|x| format!("{x:.5}")).collect::<Vec<_>>().join(" / ");
    check(
        increasing && strictly_decreasing(&distances) && secs < 300.0,
        format!(
            "N_z = 16/64/256/1024: static fidelity {}; expansion distance {} (discarded {}); {secs:.1}s",
            fmt(&fidelities),
            fmt(&distances),
            fmt(&leakage)
        ),
    )
}

fn quartic_state(grid: &FixedGrid) -> WaveField {
    WaveField::from_fn(grid, 0.0, |x| C64::new((0.25 - x * x).powi(2), 0.0)).normalized()
}

fn vanishing_rate() -> Outcome {
    let units = Units::default();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for name in presets::names() {
        let (grid, schedule, config, _) = preset_parts(name);
        let phi = quartic_state(&grid);
        let dl = boundary_derivative(&phi, Side::Left);
        let dr = boundary_derivative(&phi, Side::Right);
        let steps = config.step_sizes().len();
        for k in (0..=steps).step_by(config.snapshot_stride) {
            let kin = schedule.evaluate(k as f64 * config.dt).unwrap();
            worst = worst.max(contact_rate_fixed(kin, dl, dr, units).abs());
            count += 1;
        }
    }
    check(worst < 1e-14, format!("max |rate_boundary| = {worst:.2e} over {count} preset snapshots"))
}

fn static_potential() -> Outcome {
    let v = PotentialSpec::harmonic(2.0, 0.0);
    assert!(v.is_static());
    let records = linear_expansion_mismatch(512, Some(&v));
    let max_rate_potential = records.iter().map(|r| r.rate_potential.abs()).fold(0.0, f64::max);
    let m = median_mismatch(&records);
    check(
        max_rate_potential == 0.0 && m < 2e-2,
        format!("max |rate_potential| = {max_rate_potential:e}, median mismatch with energy_total {m:.3e}"),
    )
}

fn sinusoidal_signs() -> Outcome {
    let (grid, schedule, config, units) = preset_parts("sinusoidal");
    let omega = match schedule.motion() {
        movingbox::schedules::Motion::SinusoidalExpansion { omega, .. } => *omega,
        _ => return Err("sinusoidal preset has the wrong motion".into()),
    };
    let records = propagate(&mode(&grid, 1), &schedule, &config, None, units).unwrap().1;
    let peak = records.iter().map(|r| r.rate_boundary.abs()).fold(0.0, f64::max);
    let mut checked = 0;
    let mut wrong = Vec::new();
    for r in &records {
        if r.rate_boundary.abs() > 1e-6 * peak {
            checked += 1;
            if r.rate_boundary.signum() != (-(omega * r.t).cos()).signum() {
                wrong.push(r.t);
            }
        }
    }
    check(
        wrong.is_empty() && checked > 0,
        format!("{checked} of {} snapshots checked, sign mismatches at t = {wrong:?}", records.len()),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("unitarity", unitarity),
        ("spectral correctness", spectrum),
        ("energy-rate contact terms", contact_terms),
        ("instantaneous-eigenstate identity", adiabatic_identity),
        ("galilean check", galilean),
        ("equivalence principle", equivalence_principle),
        ("zeno oracle", zeno_oracle),
        ("vanishing rate on D([K,H])", vanishing_rate),
        ("static-potential rule", static_potential),
        ("sinusoidal sign structure", sinusoidal_signs),
    ];
    let mut failed = 0;
    for (k, (name, criterion)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(criterion).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({secs:.1}s): {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.1}s): {detail}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
