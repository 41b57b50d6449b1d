//! Cubic interpolation helpers: a natural cubic spline for tabulated wall
//! motion and a four-point Lagrange interpolant for uniform meshes.

/// Natural cubic spline through `(x_i, y_i)` with `x` strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    // second derivatives at the knots
    m: Vec<f64>,
}

impl CubicSpline {
    /// Returns `None` if fewer than two knots are given or `x` is not strictly
    /// increasing.
    pub fn natural(x: &[f64], y: &[f64]) -> Option<Self> {
        let n = x.len();
        if n < 2 || y.len() != n || x.windows(2).any(|w| !(w[1] > w[0])) {
            return None;
        }
        let mut m = vec![0.0; n];
        if n > 2 {
            // Thomas algorithm on the interior second-derivative system.
            let k = n - 2;
            let mut diag = vec![0.0; k];
            let mut upper = vec![0.0; k];
            let mut rhs = vec![0.0; k];
            for i in 0..k {
                let h0 = x[i + 1] - x[i];
                let h1 = x[i + 2] - x[i + 1];
                diag[i] = 2.0 * (h0 + h1);
                upper[i] = h1;
                rhs[i] = 6.0 * ((y[i + 2] - y[i + 1]) / h1 - (y[i + 1] - y[i]) / h0);
            }
            for i in 1..k {
                let lower = x[i + 1] - x[i];
                let w = lower / diag[i - 1];
                diag[i] -= w * upper[i - 1];
                rhs[i] -= w * rhs[i - 1];
            }
            m[k] = rhs[k - 1] / diag[k - 1];
            for i in (0..k - 1).rev() {
                m[i + 1] = (rhs[i] - upper[i] * m[i + 2]) / diag[i];
            }
        }
        Some(Self {
            x: x.to_vec(),
            y: y.to_vec(),
            m,
        })
    }

    pub fn start(&self) -> f64 {
        self.x[0]
    }

    pub fn end(&self) -> f64 {
        self.x[self.x.len() - 1]
    }

    pub fn knots(&self) -> &[f64] {
        &self.x
    }

    /// Value and first derivative at `t`. Points outside the knot range are
    /// extrapolated with the end polynomial.
    pub fn eval(&self, t: f64) -> (f64, f64) {
        let n = self.x.len();
        let i = match self.x.partition_point(|&xi| xi <= t) {
            0 => 0,
            p if p >= n => n - 2,
            p => p - 1,
        };
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        let (m0, m1) = (self.m[i], self.m[i + 1]);
        let value = a * self.y[i]
            + b * self.y[i + 1]
            + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0;
        let slope = (self.y[i + 1] - self.y[i]) / h
            + ((1.0 - 3.0 * a * a) * m0 + (3.0 * b * b - 1.0) * m1) * h / 6.0;
        (value, slope)
    }
}

/// Four-point cubic Lagrange interpolation of samples `values[k]` located at
/// `x0 + k * spacing`. Returns zero outside `[x0, x0 + (len-1) spacing]`.
pub fn lagrange_cubic(values: &[f64], x0: f64, spacing: f64, x: f64) -> f64 {
    let n = values.len();
    if n == 0 {
        return 0.0;
    }
    let s = (x - x0) / spacing;
    let last = (n - 1) as f64;
    if s < -1e-12 || s > last + 1e-12 {
        return 0.0;
    }
    if n < 4 {
        // linear fallback for tiny tables
        let s = s.clamp(0.0, last);
        let i = (s.floor() as usize).min(n.saturating_sub(2));
        if n == 1 {
            return values[0];
        }
        let f = s - i as f64;
        return values[i] * (1.0 - f) + values[i + 1] * f;
    }
    let base = (s.floor() as isize - 1).clamp(0, n as isize - 4) as usize;
    let u = s - base as f64;
    let w0 = -(u - 1.0) * (u - 2.0) * (u - 3.0) / 6.0;
    let w1 = u * (u - 2.0) * (u - 3.0) / 2.0;
    let w2 = -u * (u - 1.0) * (u - 3.0) / 2.0;
    let w3 = u * (u - 1.0) * (u - 2.0) / 6.0;
    w0 * values[base] + w1 * values[base + 1] + w2 * values[base + 2] + w3 * values[base + 3]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spline_reproduces_linear_data() {
        let x = [0.0, 0.5, 1.5, 2.0];
        let y: Vec<f64> = x.iter().map(|t| 3.0 * t - 1.0).collect();
        let s = CubicSpline::natural(&x, &y).unwrap();
        for t in [0.1, 0.7, 1.9] {
            let (v, d) = s.eval(t);
            assert!((v - (3.0 * t - 1.0)).abs() < 1e-14);
            assert!((d - 3.0).abs() < 1e-13);
        }
    }

    #[test]
    fn spline_converges_on_smooth_data() {
        let x: Vec<f64> = (0..=200).map(|i| i as f64 * 0.01).collect();
        let y: Vec<f64> = x.iter().map(|t| t.sin()).collect();
        let s = CubicSpline::natural(&x, &y).unwrap();
        let (v, d) = s.eval(1.234);
        assert!((v - 1.234f64.sin()).abs() < 1e-7);
        assert!((d - 1.234f64.cos()).abs() < 1e-5);
    }

    #[test]
    fn spline_rejects_unsorted_knots() {
        assert!(CubicSpline::natural(&[0.0, 1.0, 1.0], &[0.0; 3]).is_none());
        assert!(CubicSpline::natural(&[0.0], &[0.0]).is_none());
    }

    #[test]
    fn lagrange_is_exact_for_cubics() {
        let f = |x: f64| 1.0 - 2.0 * x + 0.5 * x * x - x * x * x;
        let vals: Vec<f64> = (0..10).map(|k| f(-1.0 + 0.25 * k as f64)).collect();
        for x in [-1.0, -0.93, 0.1, 0.77, 1.25] {
            assert!((lagrange_cubic(&vals, -1.0, 0.25, x) - f(x)).abs() < 1e-12);
        }
        assert_eq!(lagrange_cubic(&vals, -1.0, 0.25, 1.5), 0.0);
    }
}
