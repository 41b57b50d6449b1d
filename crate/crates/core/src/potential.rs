//! External potentials `V(x, t)` given in the moving (laboratory) frame.

use std::fmt;
use std::sync::Arc;

use crate::{Error, Result};

type ScalarField = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum TimeDerivative {
    Analytic(ScalarField),
    FiniteDifference { step: f64 },
    Missing,
}

/// A real potential `V(x, t)` on the physical line.
///
/// A potential flagged static is one that does not depend on time inside the
/// box; its contribution to the energy rate is exactly zero.
#[derive(Clone)]
pub struct PotentialSpec {
    name: String,
    value: ScalarField,
    derivative: TimeDerivative,
    is_static: bool,
}

impl fmt::Debug for PotentialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PotentialSpec")
            .field("name", &self.name)
            .field("is_static", &self.is_static)
            .finish_non_exhaustive()
    }
}

impl PotentialSpec {
    /// A time-independent profile `φ(x)`.
    pub fn static_profile(
        name: impl Into<String>,
        profile: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            value: Arc::new(move |x, _| profile(x)),
            derivative: TimeDerivative::Analytic(Arc::new(|_, _| 0.0)),
            is_static: true,
        }
    }

    /// A time-dependent potential with no time derivative attached yet.
    pub fn dynamic(
        name: impl Into<String>,
        value: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            value: Arc::new(value),
            derivative: TimeDerivative::Missing,
            is_static: false,
        }
    }

    pub fn with_time_derivative(
        mut self,
        dvdt: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.derivative = TimeDerivative::Analytic(Arc::new(dvdt));
        self
    }

    /// Approximate `∂V/∂t` by a centred difference with the given step.
    pub fn with_finite_difference(mut self, step: f64) -> Self {
        self.derivative = TimeDerivative::FiniteDifference { step };
        self
    }

    /// `V(x) = slope * x + rate * t * x`.
    pub fn linear(slope: f64, rate: f64) -> Self {
        if rate == 0.0 {
            Self::static_profile("linear", move |x| slope * x)
        } else {
            Self::dynamic("linear", move |x, t| (slope + rate * t) * x)
                .with_time_derivative(move |x, _| rate * x)
        }
    }

    /// `V(x) = k (x - centre)^2 / 2`.
    pub fn harmonic(stiffness: f64, centre: f64) -> Self {
        Self::static_profile("harmonic", move |x| {
            0.5 * stiffness * (x - centre) * (x - centre)
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_static(&self) -> bool {
        self.is_static
    }

    pub fn value(&self, x: f64, t: f64) -> f64 {
        (self.value)(x, t)
    }

    /// `∂V/∂t (x, t)`.
    pub fn time_derivative(&self, x: f64, t: f64) -> Result<f64> {
        match &self.derivative {
            _ if self.is_static => Ok(0.0),
            TimeDerivative::Analytic(f) => Ok(f(x, t)),
            TimeDerivative::FiniteDifference { step } => {
                Ok((self.value(x, t + step) - self.value(x, t - step)) / (2.0 * step))
            }
            TimeDerivative::Missing => Err(Error::MissingTimeDerivative),
        }
    }

    /// `Ṽ(ξ, t) = V(l ξ + d, t)`: the potential seen in the fixed box.
    pub fn transformed(&self, l: f64, d: f64) -> impl Fn(f64, f64) -> f64 + '_ {
        move |xi, t| self.value(l * xi + d, t)
    }
}

/// Free-standing form of [`PotentialSpec::transformed`].
pub fn transform_potential(
    potential: &PotentialSpec,
    l: f64,
    d: f64,
) -> impl Fn(f64, f64) -> f64 + '_ {
    potential.transformed(l, d)
}
