use std::path::{Path, PathBuf};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{Method, PropagatorConfig, ZenoConfig};
use crate::potential::PotentialSpec;
use crate::schedules::{Anchor, Motion, WallSchedule, DEFAULT_L_MIN};
use crate::spline::lagrange_cubic;
use crate::wavefield::box_eigenmode;
use crate::{Error, FixedGrid, Result, Units, WaveField};

/// Tolerated deviation of a superposition's norm before the loader warns.
const NORM_WARN_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schedule: ScheduleSection,
    #[serde(default)]
    pub grid: GridSection,
    pub propagation: PropagationSection,
    pub initial_state: InitialStateSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential: Option<PotentialSection>,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
    /// Directory that relative paths in the file are resolved against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScheduleKind {
    Static,
    LinearTranslation,
    UniformAcceleration,
    LinearExpansion,
    SinusoidalExpansion,
    Tabulated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleSection {
    pub kind: ScheduleKind,
    #[serde(default = "one")]
    pub l0: f64,
    #[serde(default)]
    pub d0: f64,
    #[serde(default)]
    pub v: f64,
    #[serde(default)]
    pub g: f64,
    #[serde(default)]
    pub omega: f64,
    #[serde(default)]
    pub amplitude: f64,
    #[serde(default)]
    pub anchor: Anchor,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<PathBuf>,
    #[serde(default = "default_l_min")]
    pub l_min: f64,
}

fn one() -> f64 {
    1.0
}

fn default_l_min() -> f64 {
    DEFAULT_L_MIN
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    #[serde(default = "default_cells")]
    pub n: usize,
    #[serde(default = "one")]
    pub hbar: f64,
    #[serde(default = "one")]
    pub mass: f64,
}

fn default_cells() -> usize {
    512
}

impl Default for GridSection {
    fn default() -> Self {
        Self { n: default_cells(), hbar: 1.0, mass: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropagationSection {
    pub dt: f64,
    pub t_final: f64,
    #[serde(default = "default_stride")]
    pub snapshot_stride: usize,
    #[serde(default)]
    pub method: Method,
    #[serde(default = "default_slices")]
    pub zeno_slices: usize,
    #[serde(default = "default_halfwidth")]
    pub line_box_halfwidth: f64,
    #[serde(default = "default_line_points")]
    pub line_grid_points: usize,
    #[serde(default = "default_leakage")]
    pub leakage_bound: f64,
}

fn default_stride() -> usize {
    10
}
fn default_slices() -> usize {
    ZenoConfig::default().slices
}
fn default_halfwidth() -> f64 {
    ZenoConfig::default().line_box_halfwidth
}
fn default_line_points() -> usize {
    ZenoConfig::default().line_grid_points
}
fn default_leakage() -> f64 {
    ZenoConfig::default().leakage_bound
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuperpositionTerm {
    pub n: i64,
    #[serde(default)]
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialStateSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub superposition: Option<Vec<SuperpositionTerm>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PotentialPreset {
    Linear,
    Harmonic,
    CustomTable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialSection {
    pub preset: PotentialPreset,
    /// Linear: `V = (slope + rate t) x`.
    #[serde(default)]
    pub slope: f64,
    #[serde(default)]
    pub rate: f64,
    /// Harmonic: `V = stiffness (x - centre)² / 2`.
    #[serde(default)]
    pub stiffness: f64,
    #[serde(default)]
    pub centre: f64,
    /// Custom table: two columns `x V`, uniformly spaced in `x`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<PathBuf>,
    #[serde(default, rename = "static", skip_serializing_if = "Option::is_none")]
    pub is_static: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "default_directory")]
    pub directory: PathBuf,
    #[serde(default)]
    pub emit_snapshots: bool,
    #[serde(default)]
    pub emit_plotdata: bool,
}

fn default_directory() -> PathBuf {
    PathBuf::from("runs/run")
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { directory: default_directory(), emit_snapshots: false, emit_plotdata: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    /// Dotted key into the config, e.g. `schedule.v`.
    pub parameter: String,
    pub values: Vec<toml::Value>,
}

/// Reads and validates a run configuration.
pub fn parse_config(path: impl AsRef<Path>) -> Result<RunConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    parse_config_str(&text, &base).map_err(|e| match e {
        Error::Parse { context, message } if context == "config" => Error::Parse {
            context: path.display().to_string(),
            message,
        },
        other => other,
    })
}

/// Parses configuration text; relative paths resolve against `base_dir`.
pub fn parse_config_str(text: &str, base_dir: &Path) -> Result<RunConfig> {
    let value: toml::Table = toml::from_str(text).map_err(|e| Error::Parse {
        context: "config".into(),
        message: e.to_string(),
    })?;
    from_table(value, base_dir)
}

pub(crate) fn from_table(table: toml::Table, base_dir: &Path) -> Result<RunConfig> {
    let mut config: RunConfig = toml::Value::Table(table)
        .try_into()
        .map_err(|e: toml::de::Error| Error::Parse {
            context: "config".into(),
            message: e.to_string(),
        })?;
    config.base_dir = base_dir.to_path_buf();
    config.validate()?;
    Ok(config)
}

impl RunConfig {
    pub fn resolve(&self, path: &Path) -> PathBuf {
        if path.is_absolute() {
            path.to_path_buf()
        } else {
            self.base_dir.join(path)
        }
    }

    pub fn units(&self) -> Units {
        Units::new(self.grid.hbar, self.grid.mass)
    }

    pub fn fixed_grid(&self) -> Result<FixedGrid> {
        FixedGrid::new(self.grid.n)
    }

    pub fn wall_schedule(&self) -> Result<WallSchedule> {
        let s = &self.schedule;
        let motion = match s.kind {
            ScheduleKind::Static => Motion::Static { l0: s.l0, d0: s.d0 },
            ScheduleKind::LinearTranslation => Motion::LinearTranslation { l0: s.l0, d0: s.d0, v: s.v },
            ScheduleKind::UniformAcceleration => {
                Motion::UniformAcceleration { l0: s.l0, d0: s.d0, g: s.g }
            }
            ScheduleKind::LinearExpansion => Motion::LinearExpansion {
                l0: s.l0,
                v: s.v,
                d0: s.d0,
                anchor: s.anchor,
            },
            ScheduleKind::SinusoidalExpansion => Motion::SinusoidalExpansion {
                l0: s.l0,
                amplitude: s.amplitude,
                omega: s.omega,
                d0: s.d0,
                anchor: s.anchor,
            },
            ScheduleKind::Tabulated => {
                let table = s.table.as_ref().ok_or_else(|| {
                    Error::Validation("schedule.table is required for kind = \"tabulated\"".into())
                })?;
                return Ok(WallSchedule::from_table_file(self.resolve(table))?.with_l_min(s.l_min));
            }
        };
        Ok(WallSchedule::new(motion).with_l_min(s.l_min))
    }

    pub fn propagator_config(&self) -> PropagatorConfig {
        let p = &self.propagation;
        PropagatorConfig {
            dt: p.dt,
            t_final: p.t_final,
            snapshot_stride: p.snapshot_stride,
            method: p.method,
            zeno: ZenoConfig {
                slices: p.zeno_slices,
                line_box_halfwidth: p.line_box_halfwidth,
                line_grid_points: p.line_grid_points,
                leakage_bound: p.leakage_bound,
            },
        }
    }

    pub fn potential_spec(&self) -> Result<Option<PotentialSpec>> {
        let Some(p) = &self.potential else {
            return Ok(None);
        };
        let spec = match p.preset {
            PotentialPreset::Linear => PotentialSpec::linear(p.slope, p.rate),
            PotentialPreset::Harmonic => PotentialSpec::harmonic(p.stiffness, p.centre),
            PotentialPreset::CustomTable => {
                let table = p.table.as_ref().ok_or_else(|| {
                    Error::Validation("potential.table is required for preset = \"custom-table\"".into())
                })?;
                load_potential_table(&self.resolve(table))?
            }
        };
        if let Some(flag) = p.is_static {
            if flag != spec.is_static() {
                return Err(Error::Validation(format!(
                    "potential.static = {flag} contradicts the {} preset parameters",
                    spec.name()
                )));
            }
        }
        Ok(Some(spec))
    }

    fn validate(&self) -> Result<()> {
        let s = &self.schedule;
        if !(s.l_min > 0.0) {
            return Err(Error::Validation(format!("l_min must be > 0, got {}", s.l_min)));
        }
        if s.kind != ScheduleKind::Tabulated && !(s.l0 >= s.l_min) {
            return Err(Error::Validation(format!(
                "l_min violated: l0 = {} is below l_min = {}",
                s.l0, s.l_min
            )));
        }
        self.fixed_grid()
            .map_err(|e| Error::Validation(e.to_string()))?;
        if !(self.grid.hbar > 0.0 && self.grid.mass > 0.0) {
            return Err(Error::Validation("hbar and mass must be > 0".into()));
        }
        self.propagator_config().validate()?;
        let schedule = self.wall_schedule()?;
        schedule
            .validate_window(0.0, self.propagation.t_final)
            .map_err(|e| Error::Validation(format!("l_min violated: {e}")))?;

        let init = &self.initial_state;
        let sources = [init.mode.is_some(), init.superposition.is_some(), init.file.is_some()];
        if sources.iter().filter(|s| **s).count() != 1 {
            return Err(Error::Validation(
                "exactly one initial-state source (mode, superposition or file) must be given".into(),
            ));
        }
        if let Some(terms) = &init.superposition {
            if terms.is_empty() {
                return Err(Error::Validation("superposition must not be empty".into()));
            }
        }
        self.potential_spec()?;
        if let Some(sweep) = &self.sweep {
            if sweep.values.is_empty() {
                return Err(Error::Validation("sweep.values must not be empty".into()));
            }
        }
        Ok(())
    }
}

/// Uniformly spaced `x V` table, interpolated cubically; zero outside.
fn load_potential_table(path: &Path) -> Result<PotentialSpec> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut xs = Vec::new();
    let mut vs = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()).collect();
        let parse = |s: &str| {
            s.parse::<f64>().map_err(|e| Error::Parse {
                context: format!("{}:{}", path.display(), lineno + 1),
                message: e.to_string(),
            })
        };
        if cols.len() != 2 {
            return Err(Error::Parse {
                context: format!("{}:{}", path.display(), lineno + 1),
                message: format!("expected 2 columns, found {}", cols.len()),
            });
        }
        xs.push(parse(cols[0])?);
        vs.push(parse(cols[1])?);
    }
    if xs.len() < 2 {
        return Err(Error::Validation(format!("{}: need at least two rows", path.display())));
    }
    let spacing = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
    let uniform = spacing > 0.0
        && xs
            .iter()
            .enumerate()
            .all(|(i, x)| (x - (xs[0] + i as f64 * spacing)).abs() <= 1e-9 * spacing.abs().max(1.0));
    if !uniform {
        return Err(Error::Validation(format!(
            "{}: potential table must be uniformly spaced in x",
            path.display()
        )));
    }
    let x0 = xs[0];
    Ok(PotentialSpec::static_profile("custom-table", move |x| {
        lagrange_cubic(&vs, x0, spacing, x)
    }))
}

/// Builds the normalized fixed-frame initial state at `t = 0`.
pub fn build_initial_state(config: &RunConfig, grid: &FixedGrid) -> Result<WaveField> {
    let init = &config.initial_state;
    let amplitudes = if let Some(n) = init.mode {
        eigenmode(grid, n)?
    } else if let Some(terms) = &init.superposition {
        let norm_in: f64 = terms.iter().map(|t| t.re * t.re + t.im * t.im).sum::<f64>().sqrt();
        if (norm_in - 1.0).abs() > NORM_WARN_TOL {
            log::warn!("superposition coefficients have norm {norm_in}; renormalizing");
        }
        let mut acc = vec![C64::new(0.0, 0.0); grid.dim()];
        for term in terms {
            let c = C64::new(term.re, term.im);
            for (a, m) in acc.iter_mut().zip(eigenmode(grid, term.n)?) {
                *a += c * m;
            }
        }
        acc
    } else if let Some(file) = &init.file {
        let snap = super::output::read_snapshot(&config.resolve(file))?;
        if snap.amplitudes.len() != grid.dim() {
            return Err(Error::DimensionMismatch { expected: grid.dim(), got: snap.amplitudes.len() });
        }
        snap.amplitudes
    } else {
        return Err(Error::Validation("no initial-state source".into()));
    };
    let mut phi = WaveField::fixed(grid, 0.0, amplitudes)?;
    if !(phi.normalize() > 0.0) {
        return Err(Error::Validation("initial state has zero norm".into()));
    }
    Ok(phi)
}

fn eigenmode(grid: &FixedGrid, n: i64) -> Result<Vec<C64>> {
    if n < 1 {
        return Err(Error::BadMode(n));
    }
    Ok(box_eigenmode(grid, n as usize))
}
