//! Wall-motion laws.
//!
//! A schedule gives the box length `l(t)` and centre `d(t)` together with
//! their exact first derivatives. The walls sit at `a = d - l/2` and
//! `b = d + l/2`.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::spline::CubicSpline;
use crate::{Error, Result};

/// Default floor on the box length.
pub const DEFAULT_L_MIN: f64 = 1e-6;

/// Where an expanding box is pinned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Anchor {
    /// Centre stays at `d0`; both walls move symmetrically.
    #[default]
    Centered,
    /// Left wall stays at `a = d0`, so `d = d0 + l/2`. With `d0 = 0` this is
    /// the Fermi–Ulam accelerator.
    LeftWall,
}

impl Anchor {
    fn centre(self, d0: f64, l: f64, ldot: f64) -> (f64, f64) {
        match self {
            Anchor::Centered => (d0, 0.0),
            Anchor::LeftWall => (d0 + 0.5 * l, 0.5 * ldot),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Motion {
    Static {
        l0: f64,
        d0: f64,
    },
    LinearTranslation {
        l0: f64,
        d0: f64,
        v: f64,
    },
    UniformAcceleration {
        l0: f64,
        d0: f64,
        g: f64,
    },
    LinearExpansion {
        l0: f64,
        v: f64,
        d0: f64,
        anchor: Anchor,
    },
    SinusoidalExpansion {
        l0: f64,
        amplitude: f64,
        omega: f64,
        d0: f64,
        anchor: Anchor,
    },
    Tabulated {
        length: CubicSpline,
        centre: CubicSpline,
    },
}

/// `l`, `d` and their time derivatives at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kinematics {
    pub l: f64,
    pub d: f64,
    pub ldot: f64,
    pub ddot: f64,
}

impl Kinematics {
    pub fn at_rest(l: f64, d: f64) -> Self {
        Self { l, d, ldot: 0.0, ddot: 0.0 }
    }

    pub fn walls(&self) -> WallPositions {
        WallPositions {
            a: self.d - 0.5 * self.l,
            b: self.d + 0.5 * self.l,
            adot: self.ddot - 0.5 * self.ldot,
            bdot: self.ddot + 0.5 * self.ldot,
        }
    }

    pub fn is_static(&self) -> bool {
        self.ldot == 0.0 && self.ddot == 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WallPositions {
    pub a: f64,
    pub b: f64,
    pub adot: f64,
    pub bdot: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WallSchedule {
    motion: Motion,
    l_min: f64,
}

impl WallSchedule {
    pub fn new(motion: Motion) -> Self {
        Self { motion, l_min: DEFAULT_L_MIN }
    }

    pub fn with_l_min(mut self, l_min: f64) -> Self {
        self.l_min = l_min;
        self
    }

    pub fn static_box(l0: f64, d0: f64) -> Self {
        Self::new(Motion::Static { l0, d0 })
    }

    pub fn linear_translation(l0: f64, d0: f64, v: f64) -> Self {
        Self::new(Motion::LinearTranslation { l0, d0, v })
    }

    pub fn uniform_acceleration(l0: f64, d0: f64, g: f64) -> Self {
        Self::new(Motion::UniformAcceleration { l0, d0, g })
    }

    pub fn linear_expansion(l0: f64, v: f64) -> Self {
        Self::new(Motion::LinearExpansion { l0, v, d0: 0.0, anchor: Anchor::Centered })
    }

    pub fn sinusoidal_expansion(l0: f64, amplitude: f64, omega: f64) -> Self {
        Self::new(Motion::SinusoidalExpansion {
            l0,
            amplitude,
            omega,
            d0: 0.0,
            anchor: Anchor::Centered,
        })
    }

    /// Tabulated motion from `(t, l, d)` samples, interpolated by natural
    /// cubic splines.
    pub fn tabulated(samples: &[(f64, f64, f64)]) -> Result<Self> {
        let t: Vec<f64> = samples.iter().map(|s| s.0).collect();
        let l: Vec<f64> = samples.iter().map(|s| s.1).collect();
        let d: Vec<f64> = samples.iter().map(|s| s.2).collect();
        let length = CubicSpline::natural(&t, &l).ok_or_else(|| {
            Error::InvalidSchedule(
                "tabulated schedule needs at least two samples with strictly increasing t".into(),
            )
        })?;
        let centre = CubicSpline::natural(&t, &d).expect("same knots as length spline");
        Ok(Self::new(Motion::Tabulated { length, centre }))
    }

    /// Reads a whitespace- or comma-separated table with columns `t l [d]`.
    /// Blank lines and lines starting with `#` are skipped.
    pub fn from_table_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut samples = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: std::result::Result<Vec<f64>, _> = line
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .map(str::parse::<f64>)
                .collect();
            let cols = cols.map_err(|e| Error::Parse {
                context: format!("{}:{}", path.display(), lineno + 1),
                message: e.to_string(),
            })?;
            match cols.as_slice() {
                [t, l] => samples.push((*t, *l, 0.0)),
                [t, l, d] => samples.push((*t, *l, *d)),
                _ => {
                    return Err(Error::Parse {
                        context: format!("{}:{}", path.display(), lineno + 1),
                        message: format!("expected 2 or 3 columns, found {}", cols.len()),
                    })
                }
            }
        }
        Self::tabulated(&samples)
    }

    pub fn motion(&self) -> &Motion {
        &self.motion
    }

    pub fn l_min(&self) -> f64 {
        self.l_min
    }

    /// `true` when both walls are at rest for all times.
    pub fn is_static(&self) -> bool {
        match &self.motion {
            Motion::Static { .. } => true,
            Motion::LinearTranslation { v, .. } => *v == 0.0,
            Motion::UniformAcceleration { g, .. } => *g == 0.0,
            Motion::LinearExpansion { v, .. } => *v == 0.0,
            Motion::SinusoidalExpansion { amplitude, omega, .. } => {
                *amplitude == 0.0 || *omega == 0.0
            }
            Motion::Tabulated { .. } => false,
        }
    }

    /// Kinematics without the collision check.
    fn raw(&self, t: f64) -> Result<Kinematics> {
        let k = match &self.motion {
            Motion::Static { l0, d0 } => Kinematics::at_rest(*l0, *d0),
            Motion::LinearTranslation { l0, d0, v } => Kinematics {
                l: *l0,
                d: d0 + v * t,
                ldot: 0.0,
                ddot: *v,
            },
            Motion::UniformAcceleration { l0, d0, g } => Kinematics {
                l: *l0,
                d: d0 + 0.5 * g * t * t,
                ldot: 0.0,
                ddot: g * t,
            },
            Motion::LinearExpansion { l0, v, d0, anchor } => {
                let l = l0 + v * t;
                let (d, ddot) = anchor.centre(*d0, l, *v);
                Kinematics { l, d, ldot: *v, ddot }
            }
            Motion::SinusoidalExpansion { l0, amplitude, omega, d0, anchor } => {
                let l = l0 + amplitude * (omega * t).sin();
                let ldot = amplitude * omega * (omega * t).cos();
                let (d, ddot) = anchor.centre(*d0, l, ldot);
                Kinematics { l, d, ldot, ddot }
            }
            Motion::Tabulated { length, centre } => {
                let (start, end) = (length.start(), length.end());
                if t < start || t > end {
                    return Err(Error::OutOfWindow { t, start, end });
                }
                let (l, ldot) = length.eval(t);
                let (d, ddot) = centre.eval(t);
                Kinematics { l, d, ldot, ddot }
            }
        };
        Ok(k)
    }

    /// `(l, d, l̇, ḋ)` at time `t`.
    pub fn evaluate(&self, t: f64) -> Result<Kinematics> {
        let k = self.raw(t)?;
        if !(k.l >= self.l_min) {
            return Err(Error::WallCollision { t, l: k.l, l_min: self.l_min });
        }
        Ok(k)
    }

    /// `(a, b, ȧ, ḃ)` at time `t`.
    pub fn wall_positions(&self, t: f64) -> Result<WallPositions> {
        self.evaluate(t).map(|k| k.walls())
    }

    /// Checks `l(t) >= l_min` on the whole window `[t0, t1]`.
    pub fn validate_window(&self, t0: f64, t1: f64) -> Result<()> {
        for t in self.critical_times(t0, t1)? {
            self.evaluate(t)?;
        }
        Ok(())
    }

    /// Times in `[t0, t1]` where `l` can attain its minimum.
    fn critical_times(&self, t0: f64, t1: f64) -> Result<Vec<f64>> {
        let mut times = vec![t0, t1];
        match &self.motion {
            Motion::SinusoidalExpansion { amplitude, omega, .. } if *omega != 0.0 => {
                // minima of A sin(ωt): ωt = -π/2 sign(A) + 2πk
                let phase = if amplitude * omega > 0.0 { 1.5 * PI } else { 0.5 * PI };
                let period = 2.0 * PI / omega.abs();
                let first = phase / omega.abs();
                let k0 = ((t0 - first) / period).ceil();
                let mut k = k0;
                loop {
                    let t = first + k * period;
                    if t > t1 {
                        break;
                    }
                    times.push(t);
                    k += 1.0;
                }
            }
            Motion::Tabulated { length, .. } => {
                let (start, end) = (length.start(), length.end());
                if t0 < start || t1 > end {
                    let t = if t0 < start { t0 } else { t1 };
                    return Err(Error::OutOfWindow { t, start, end });
                }
                // spline minima: sample each knot interval densely
                let knots = length.knots();
                for w in knots.windows(2) {
                    for j in 0..=32 {
                        let t = w[0] + (w[1] - w[0]) * j as f64 / 32.0;
                        if t >= t0 && t <= t1 {
                            times.push(t);
                        }
                    }
                }
            }
            _ => {}
        }
        Ok(times)
    }
}
