use std::path::Path;

use serde::Serialize;

use super::output::{list_snapshots, read_snapshot};
use crate::{Error, Result};

/// Node coordinates and time stamps must agree to this tolerance.
const MATCH_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SnapshotComparison {
    pub t: f64,
    pub distance: f64,
    pub fidelity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareReport {
    pub snapshots: Vec<SnapshotComparison>,
    pub worst_distance: f64,
    pub worst_fidelity: f64,
}

/// Per-snapshot L² distance and fidelity `|⟨a|b⟩| / (‖a‖ ‖b‖)` between two runs that
/// wrote snapshots on the same grid at the same times.
pub fn compare_runs(dir_a: impl AsRef<Path>, dir_b: impl AsRef<Path>) -> Result<CompareReport> {
    let files_a = list_snapshots(dir_a.as_ref())?;
    let files_b = list_snapshots(dir_b.as_ref())?;
    if files_a.len() != files_b.len() {
        return Err(Error::TimeMismatch(format!(
            "{} snapshots vs {}",
            files_a.len(),
            files_b.len()
        )));
    }
    let mut snapshots = Vec::with_capacity(files_a.len());
    for (fa, fb) in files_a.iter().zip(&files_b) {
        let a = read_snapshot(fa)?;
        let b = read_snapshot(fb)?;
        let same_grid = a.nodes.len() == b.nodes.len()
            && a.nodes.iter().zip(&b.nodes).all(|(x, y)| (x - y).abs() <= MATCH_TOL * x.abs().max(1.0));
        if !same_grid {
            return Err(Error::GridMismatch(format!(
                "{} ({} nodes) vs {} ({} nodes)",
                fa.display(),
                a.nodes.len(),
                fb.display(),
                b.nodes.len()
            )));
        }
        let t = match (a.t, b.t) {
            (Some(ta), Some(tb)) if (ta - tb).abs() <= MATCH_TOL * ta.abs().max(1.0) => ta,
            (ta, tb) => {
                return Err(Error::TimeMismatch(format!(
                    "{}: t={ta:?} vs {}: t={tb:?}",
                    fa.display(),
                    fb.display()
                )))
            }
        };
        let h = a.spacing();
        let overlap: num_complex::Complex64 =
            a.amplitudes.iter().zip(&b.amplitudes).map(|(x, y)| x.conj() * y).sum::<num_complex::Complex64>() * h;
        let distance = (a.amplitudes.iter().zip(&b.amplitudes).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>() * h).sqrt();
        let norm = |z: &[num_complex::Complex64]| (z.iter().map(|x| x.norm_sqr()).sum::<f64>() * h).sqrt();
        let fidelity = overlap.norm() / (norm(&a.amplitudes) * norm(&b.amplitudes));
        snapshots.push(SnapshotComparison { t, distance, fidelity });
    }
    let worst_distance = snapshots.iter().map(|s| s.distance).fold(0.0, f64::max);
    let worst_fidelity = snapshots.iter().map(|s| s.fidelity).fold(f64::INFINITY, f64::min);
    Ok(CompareReport { snapshots, worst_distance, worst_fidelity })
}
