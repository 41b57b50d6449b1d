use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64 as C64;

use crate::observables::DiagnosticsRecord;
use crate::{Error, Result, WaveField};

pub(crate) const CSV_HEADER: &str = "t,norm,energy,energy_total,rate_boundary,rate_fd,rate_potential,\
re_dphi_left,im_dphi_left,re_dphi_right,im_dphi_right";

/// 17 significant digits.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub(crate) fn diagnostics_csv(records: &[DiagnosticsRecord]) -> String {
    let mut out = String::with_capacity(256 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        let fd = r.rate_fd.map(num).unwrap_or_default();
        let cols = [
            num(r.t),
            num(r.norm),
            num(r.energy),
            num(r.energy_total),
            num(r.rate_boundary),
            fd,
            num(r.rate_potential),
            num(r.dphi_left.re),
            num(r.dphi_left.im),
            num(r.dphi_right.re),
            num(r.dphi_right.im),
        ];
        out.push_str(&cols.join(","));
        out.push('\n');
    }
    out
}

pub(crate) fn snapshot_text(phi: &WaveField) -> String {
    let mut out = String::with_capacity(80 * (phi.len() + 1));
    let _ = writeln!(out, "# t={}", num(phi.time));
    for (x, z) in phi.mesh.nodes().iter().zip(&phi.amplitudes) {
        let _ = writeln!(out, "{} {} {}", num(*x), num(z.re), num(z.im));
    }
    out
}

pub(crate) fn snapshot_name(index: usize) -> String {
    format!("snapshot_{index:06}.dat")
}

/// Writes the two-column series `t E`, `t Ė_boundary`, `t Ė_fd`, `t norm`.
pub(crate) fn write_plotdata(dir: &Path, records: &[DiagnosticsRecord]) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let series: [(&str, fn(&DiagnosticsRecord) -> Option<f64>); 4] = [
        ("energy.dat", |r| Some(r.energy_total)),
        ("rate_boundary.dat", |r| Some(r.rate_boundary)),
        ("rate_fd.dat", |r| r.rate_fd),
        ("norm.dat", |r| Some(r.norm)),
    ];
    for (name, pick) in series {
        let mut text = String::new();
        for r in records {
            if let Some(y) = pick(r) {
                let _ = writeln!(text, "{} {}", num(r.t), num(y));
            }
        }
        write_text(&dir.join(name), &text)?;
    }
    Ok(())
}

/// A wavefunction dump: node coordinates and complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: Option<f64>,
    pub nodes: Vec<f64>,
    pub amplitudes: Vec<C64>,
}

impl Snapshot {
    /// Trapezoidal spacing inferred from the nodes.
    pub fn spacing(&self) -> f64 {
        match self.nodes.len() {
            0 => 0.0,
            1 => 1.0,
            n => (self.nodes[n - 1] - self.nodes[0]) / (n - 1) as f64,
        }
    }
}

/// Reads a file of `x Re Im` rows with an optional `# t=` header.
pub fn read_snapshot(path: &Path) -> Result<Snapshot> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let parse_err = |line: usize, message: String| Error::Parse {
        context: format!("{}:{}", path.display(), line),
        message,
    };
    let mut snap = Snapshot { t: None, nodes: Vec::new(), amplitudes: Vec::new() };
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(t) = comment.trim().strip_prefix("t=") {
                snap.t = Some(t.trim().parse().map_err(|e| parse_err(k + 1, format!("{e}")))?);
            }
            continue;
        }
        let cols: Vec<f64> = line
            .split_whitespace()
            .map(|s| s.parse::<f64>().map_err(|e| parse_err(k + 1, format!("{e}: {s:?}"))))
            .collect::<Result<_>>()?;
        if cols.len() != 3 {
            return Err(parse_err(k + 1, format!("expected 3 columns, found {}", cols.len())));
        }
        snap.nodes.push(cols[0]);
        snap.amplitudes.push(C64::new(cols[1], cols[2]));
    }
    Ok(snap)
}

/// Lists `snapshot_*.dat` files in `dir`, sorted by name.
pub(crate) fn list_snapshots(dir: &Path) -> Result<Vec<PathBuf>> {
    let snapdir = dir.join("snapshots");
    let entries = fs::read_dir(&snapdir).map_err(|e| Error::io(&snapdir, e))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.file_name()
                .and_then(|n| n.to_str())
                .is_some_and(|n| n.starts_with("snapshot_") && n.ends_with(".dat"))
        })
        .collect();
    files.sort();
    Ok(files)
}

/// `path`, or the first of `path-1`, `path-2`, … that does not exist yet.
pub(crate) fn fresh_directory(path: &Path) -> Result<PathBuf> {
    let mut candidate = path.to_path_buf();
    let mut k = 0usize;
    loop {
        if let Some(parent) = candidate.parent() {
            if !parent.as_os_str().is_empty() {
                fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
            }
        }
        match fs::create_dir(&candidate) {
            Ok(()) => return Ok(candidate),
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => {
                k += 1;
                let mut name = path.as_os_str().to_owned();
                name.push(format!("-{k}"));
                candidate = PathBuf::from(name);
            }
            Err(e) => return Err(Error::io(&candidate, e)),
        }
    }
}
