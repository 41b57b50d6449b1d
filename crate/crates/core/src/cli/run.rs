use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::config::{build_initial_state, from_table, RunConfig};
use super::output::{
    diagnostics_csv, fresh_directory, snapshot_name, snapshot_text, write_plotdata, write_text,
};
use crate::dynamics::zeno::zeno_propagate_with;
use crate::dynamics::{frame_map, frame_unmap, Method, Propagator};
use crate::observables::{fill_rate_fd, make_record, DiagnosticsRecord};
use crate::operators::OperatorSet;
use crate::{Error, Result, WaveField};

/// Relative output directories are resolved against this directory when set.
pub const OUTPUT_ROOT_ENV: &str = "MOVINGBOX_OUTPUT_ROOT";

const MANIFEST: &str = "manifest.json";
const SWEEP_MANIFEST: &str = "sweep_manifest.json";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub config: RunConfig,
    pub version: String,
    pub method: Method,
    pub grid_cells: usize,
    pub grid_spacing: f64,
    pub dt: f64,
    pub steps: usize,
    pub snapshot_stride: usize,
    pub records: usize,
    pub snapshots: usize,
    pub wall_clock_seconds: f64,
    pub final_time: Option<f64>,
    pub final_norm: Option<f64>,
    pub final_energy: Option<f64>,
    /// Total norm removed by the wall projections (Zeno runs only).
    pub discarded_norm: Option<f64>,
    pub partial: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub directory: PathBuf,
    pub records: Vec<DiagnosticsRecord>,
    pub manifest: RunManifest,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepEntry {
    pub value: toml::Value,
    pub directory: PathBuf,
    pub ok: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepManifest {
    pub parameter: String,
    pub directory: PathBuf,
    pub entries: Vec<SweepEntry>,
}

fn output_target(dir: &Path) -> PathBuf {
    match std::env::var_os(OUTPUT_ROOT_ENV) {
        Some(root) if dir.is_relative() => PathBuf::from(root).join(dir),
        _ => dir.to_path_buf(),
    }
}

#[derive(Default)]
struct Progress {
    records: Vec<DiagnosticsRecord>,
    snapshots: usize,
    discarded: Option<f64>,
}

/// Executes one run into a fresh output directory (never overwriting an
/// existing one). The manifest is written once, after the run ends, and
/// flags partial output when the propagation failed.
pub fn run(config: &RunConfig) -> Result<RunSummary> {
    if config.sweep.is_some() {
        log::warn!("ignoring [sweep] section in a single run");
    }
    let dir = fresh_directory(&output_target(&config.output.directory))?;
    run_in(config, dir)
}

fn run_in(config: &RunConfig, dir: PathBuf) -> Result<RunSummary> {
    let start = Instant::now();
    let mut progress = Progress::default();
    let outcome = execute(config, &dir, &mut progress);

    fill_rate_fd(&mut progress.records);
    let mut written = write_text(&dir.join("diagnostics.csv"), &diagnostics_csv(&progress.records));
    if written.is_ok() && config.output.emit_plotdata {
        written = write_plotdata(&dir.join("plotdata"), &progress.records);
    }
    let outcome = outcome.and(written);

    let grid = config.fixed_grid()?;
    let pc = config.propagator_config();
    let last = progress.records.last();
    let manifest = RunManifest {
        config: config.clone(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        method: pc.method,
        grid_cells: grid.n_cells(),
        grid_spacing: grid.spacing(),
        dt: match pc.method {
            Method::CrankNicolson => pc.dt,
            Method::Zeno => pc.t_final / pc.zeno.slices as f64,
        },
        steps: match pc.method {
            Method::CrankNicolson => pc.step_sizes().len(),
            Method::Zeno => pc.zeno.slices,
        },
        snapshot_stride: pc.snapshot_stride,
        records: progress.records.len(),
        snapshots: progress.snapshots,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        final_time: last.map(|r| r.t),
        final_norm: last.map(|r| r.norm),
        final_energy: last.map(|r| r.energy_total),
        discarded_norm: progress.discarded,
        partial: outcome.is_err(),
        error: outcome.as_ref().err().map(|e| e.to_string()),
    };
    let json = serde_json::to_string_pretty(&manifest).map_err(|e| Error::Validation(e.to_string()))?;
    write_text(&dir.join(MANIFEST), &json)?;
    outcome?;
    Ok(RunSummary { directory: dir, records: progress.records, manifest })
}

fn execute(config: &RunConfig, dir: &Path, progress: &mut Progress) -> Result<()> {
    let grid = config.fixed_grid()?;
    let units = config.units();
    let schedule = config.wall_schedule()?;
    let potential = config.potential_spec()?;
    let pc = config.propagator_config();
    let phi0 = build_initial_state(config, &grid)?;
    let ops = OperatorSet::new(grid, units);

    let snapdir = dir.join("snapshots");
    if config.output.emit_snapshots {
        std::fs::create_dir_all(&snapdir).map_err(|e| Error::io(&snapdir, e))?;
    }
    let record = |phi: &WaveField, progress: &mut Progress| -> Result<()> {
        progress.records.push(make_record(phi, &schedule, &ops, potential.as_ref())?);
        if config.output.emit_snapshots {
            write_text(&snapdir.join(snapshot_name(progress.snapshots)), &snapshot_text(phi))?;
        }
        progress.snapshots += 1;
        Ok(())
    };

    match pc.method {
        Method::CrankNicolson => {
            let propagator = Propagator::new(ops.clone(), &schedule, potential.as_ref());
            propagator.propagate_with(&phi0, &pc, |phi| record(phi, progress))?;
        }
        Method::Zeno => {
            if potential.is_some() {
                return Err(Error::Validation("the zeno method does not support a potential".into()));
            }
            let kin0 = schedule.evaluate(0.0)?;
            let psi0 = frame_unmap(&phi0, kin0.l, kin0.d, grid.n_cells())?;
            let out = zeno_propagate_with(
                &psi0,
                &schedule,
                pc.t_final,
                &pc.zeno,
                units,
                pc.snapshot_stride,
                |psi, discarded| {
                    let kin = schedule.evaluate(psi.time)?;
                    let phi = frame_map(psi, kin.l, kin.d, &grid)?;
                    progress.discarded = Some(discarded);
                    record(&phi, progress)
                },
            )?;
            progress.discarded = Some(out.discarded);
        }
    }
    Ok(())
}

fn set_dotted(table: &mut toml::Table, path: &str, value: toml::Value) -> Result<()> {
    let keys: Vec<&str> = path.split('.').collect();
    let (last, parents) = keys.split_last().expect("split yields at least one key");
    let mut node = table;
    for key in parents {
        node = node
            .entry(key.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()))
            .as_table_mut()
            .ok_or_else(|| Error::Validation(format!("sweep.parameter {path:?}: {key} is not a section")))?;
    }
    if last.is_empty() {
        return Err(Error::Validation(format!("sweep.parameter {path:?} is malformed")));
    }
    node.insert(last.to_string(), value);
    Ok(())
}

fn value_label(value: &toml::Value) -> String {
    match value {
        toml::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Runs one configuration per sweep value, concurrently, each in its own
/// directory under the configured output directory, and writes a shared
/// sweep manifest.
pub fn sweep(config: &RunConfig) -> Result<SweepManifest> {
    let spec = config
        .sweep
        .clone()
        .ok_or_else(|| Error::Validation("config has no [sweep] section".into()))?;
    let mut base = toml::Table::try_from(config).map_err(|e| Error::Validation(e.to_string()))?;
    base.remove("sweep");

    let mut variants = Vec::with_capacity(spec.values.len());
    for value in &spec.values {
        let mut table = base.clone();
        set_dotted(&mut table, &spec.parameter, value.clone())?;
        variants.push(from_table(table, &config.base_dir)?);
    }

    let root = fresh_directory(&output_target(&config.output.directory))?;
    let leaf = spec.parameter.rsplit('.').next().unwrap_or(&spec.parameter);
    let dirs: Vec<PathBuf> = spec
        .values
        .iter()
        .map(|v| fresh_directory(&root.join(format!("{leaf}={}", value_label(v)))))
        .collect::<Result<_>>()?;

    let results: Vec<Result<RunSummary>> = std::thread::scope(|scope| {
        let handles: Vec<_> = variants
            .iter()
            .zip(&dirs)
            .map(|(cfg, dir)| scope.spawn(move || run_in(cfg, dir.clone())))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err(Error::Validation("sweep worker panicked".into()))))
            .collect()
    });

    let entries = spec
        .values
        .iter()
        .zip(&dirs)
        .zip(&results)
        .map(|((value, dir), res)| SweepEntry {
            value: value.clone(),
            directory: dir.clone(),
            ok: res.is_ok(),
            error: res.as_ref().err().map(|e| e.to_string()),
        })
        .collect();
    let manifest = SweepManifest { parameter: spec.parameter, directory: root.clone(), entries };
    let json = serde_json::to_string_pretty(&manifest).map_err(|e| Error::Validation(e.to_string()))?;
    write_text(&root.join(SWEEP_MANIFEST), &json)?;
    Ok(manifest)
}
