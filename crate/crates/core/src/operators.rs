//! Discrete operators on the reference box with Dirichlet walls.
//!
//! All matrices act on the `N - 1` interior amplitudes. Second-order central
//! stencils are used throughout; the virial term is the symmetrized product
//! of the diagonal position matrix with the momentum matrix, so every
//! assembled operator is Hermitian to rounding.

use num_complex::Complex64 as C64;

use crate::banded::{BandMatrix, HermitianBanded};
use crate::potential::PotentialSpec;
use crate::schedules::{Kinematics, WallSchedule};
use crate::{Error, FixedGrid, Result, Units};

fn check_length(l: f64, l_min: f64) -> Result<()> {
    if !(l >= l_min) {
        return Err(Error::WallCollision { t: f64::NAN, l, l_min });
    }
    Ok(())
}

/// `H(l) = p² / (2 m l²)`: the three-point Dirichlet Laplacian scaled by
/// `ħ² / (2 m l²)`.
pub fn assemble_kinetic(grid: &FixedGrid, l: f64, units: Units) -> Result<HermitianBanded> {
    check_length(l, crate::schedules::DEFAULT_L_MIN)?;
    let n = grid.dim();
    let h = grid.spacing();
    let scale = units.kinetic_scale() / (l * l * h * h);
    let mut m = BandMatrix::zeros(n);
    m.band_mut(0).fill(C64::new(2.0 * scale, 0.0));
    m.band_mut(1).fill(C64::new(-scale, 0.0));
    m.band_mut(-1).fill(C64::new(-scale, 0.0));
    Ok(HermitianBanded::new(m))
}

/// `p = -iħ D`, with `D` the central first difference.
pub fn assemble_momentum(grid: &FixedGrid, units: Units) -> HermitianBanded {
    let n = grid.dim();
    let c = units.hbar / (2.0 * grid.spacing());
    let mut m = BandMatrix::zeros(n);
    m.band_mut(1).fill(C64::new(0.0, -c));
    m.band_mut(-1).fill(C64::new(0.0, c));
    HermitianBanded::new(m)
}

/// `x∘p = (X p + p X) / 2` with `X = diag(ξ_j)`.
pub fn assemble_virial(grid: &FixedGrid, units: Units) -> HermitianBanded {
    let p = assemble_momentum(grid, units);
    let nodes = grid.nodes();
    let mut m = BandMatrix::zeros(grid.dim());
    for k in [1isize, -1] {
        let src = p.matrix().band(k).to_vec();
        for (pos, value) in src.into_iter().enumerate() {
            let mid = 0.5 * (nodes[pos] + nodes[pos + 1]);
            m.band_mut(k)[pos] = value * mid;
        }
    }
    HermitianBanded::new(m)
}

/// `K(l, d) = -(l̇/l) x∘p - (ḋ/l) p`.
pub fn assemble_generator(
    grid: &FixedGrid,
    kin: Kinematics,
    units: Units,
) -> Result<HermitianBanded> {
    check_length(kin.l, crate::schedules::DEFAULT_L_MIN)?;
    let virial = assemble_virial(grid, units);
    let momentum = assemble_momentum(grid, units);
    Ok(virial
        .scaled(-kin.ldot / kin.l)
        .plus(-kin.ddot / kin.l, &momentum))
}

/// `H(l) + K(l, d) + Ṽ` at time `t`.
pub fn assemble_full(
    grid: &FixedGrid,
    schedule: &WallSchedule,
    t: f64,
    potential: Option<&PotentialSpec>,
    units: Units,
) -> Result<HermitianBanded> {
    let kin = schedule.evaluate(t)?;
    OperatorSet::new(*grid, units).full(kin, t, potential)
}

/// The grid-only operators, assembled once and reused at every step.
#[derive(Debug, Clone)]
pub struct OperatorSet {
    grid: FixedGrid,
    units: Units,
    kinetic_unit: HermitianBanded,
    momentum: HermitianBanded,
    virial: HermitianBanded,
    nodes: Vec<f64>,
}

impl OperatorSet {
    pub fn new(grid: FixedGrid, units: Units) -> Self {
        Self {
            grid,
            units,
            kinetic_unit: assemble_kinetic(&grid, 1.0, units).expect("l = 1 is valid"),
            momentum: assemble_momentum(&grid, units),
            virial: assemble_virial(&grid, units),
            nodes: grid.nodes(),
        }
    }

    pub fn grid(&self) -> &FixedGrid {
        &self.grid
    }

    pub fn units(&self) -> Units {
        self.units
    }

    pub fn momentum(&self) -> &HermitianBanded {
        &self.momentum
    }

    pub fn virial(&self) -> &HermitianBanded {
        &self.virial
    }

    pub fn kinetic(&self, l: f64) -> HermitianBanded {
        self.kinetic_unit.scaled(1.0 / (l * l))
    }

    /// `Ṽ(ξ_j, t)` at every interior node.
    pub fn potential_diagonal(&self, kin: Kinematics, t: f64, potential: &PotentialSpec) -> Vec<f64> {
        self.nodes
            .iter()
            .map(|&xi| potential.value(kin.l * xi + kin.d, t))
            .collect()
    }

    pub fn full(
        &self,
        kin: Kinematics,
        t: f64,
        potential: Option<&PotentialSpec>,
    ) -> Result<HermitianBanded> {
        check_length(kin.l, crate::schedules::DEFAULT_L_MIN)?;
        let mut h = self.kinetic(kin.l);
        if kin.ldot != 0.0 {
            h = h.plus(-kin.ldot / kin.l, &self.virial);
        }
        if kin.ddot != 0.0 {
            h = h.plus(-kin.ddot / kin.l, &self.momentum);
        }
        if let Some(v) = potential {
            h = h.plus_diagonal(&self.potential_diagonal(kin, t, v));
        }
        Ok(h)
    }
}
