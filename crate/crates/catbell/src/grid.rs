//! Uniform grids and trapezoidal integration.
//!
//! All densities in the crate live on uniform rectangular grids and are
//! integrated with the trapezoid rule; the integrands are smooth
//! Gaussian-type functions, so the discretization error is measured by
//! step halving rather than estimated a priori.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A uniform 1D grid `[x_min, x_max]` with spacing `step`.
///
/// `(x_max - x_min) / step` must be a positive integer (to within a
/// relative slack of 1e-9); the grid then has that many cells and one
/// more point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub step: f64,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) {
            return Err(Error::InvalidGrid(format!("step must be > 0, got {step}")));
        }
        if !(x_max > x_min) {
            return Err(Error::InvalidGrid(format!(
                "x_max ({x_max}) must exceed x_min ({x_min})"
            )));
        }
        let cells = (x_max - x_min) / step;
        if (cells - cells.round()).abs() > 1e-9 * cells.max(1.0) {
            return Err(Error::InvalidGrid(format!(
                "(x_max - x_min)/step = {cells} is not an integer"
            )));
        }
        Ok(GridSpec { x_min, x_max, step })
    }

    /// Symmetric grid `[-half_width', half_width']` with `half_width`
    /// rounded up to a whole number of steps, so zero is a grid point.
    pub fn symmetric(half_width: f64, step: f64) -> Result<Self> {
        if !(half_width > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "half_width must be > 0, got {half_width}"
            )));
        }
        let n = (half_width / step - 1e-12).ceil() as usize;
        let hw = n as f64 * step;
        GridSpec::new(-hw, hw, step)
    }

    /// Number of grid points.
    pub fn len(&self) -> usize {
        ((self.x_max - self.x_min) / self.step).round() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid point positions.
    pub fn points(&self) -> Vec<f64> {
        let n = self.len();
        (0..n).map(|i| self.x_min + i as f64 * self.step).collect()
    }

    /// Trapezoid quadrature weights (step at interior points, step/2 at
    /// the two ends).
    pub fn trapezoid_weights(&self) -> Vec<f64> {
        let n = self.len();
        let mut w = vec![self.step; n];
        w[0] *= 0.5;
        w[n - 1] *= 0.5;
        w
    }

    /// Trapezoid weights restricted to the positive and negative
    /// half-lines. A grid line at x = 0 gets half its weight on each
    /// side; a cell straddling zero is split by linear interpolation.
    /// The two weight vectors always sum to `trapezoid_weights`.
    pub fn halfline_weights(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.len();
        let h = self.step;
        let xs = self.points();
        let mut pos = vec![0.0; n];
        let mut neg = vec![0.0; n];
        for i in 0..n - 1 {
            let (x0, x1) = (xs[i], xs[i + 1]);
            if x1 <= 0.0 {
                neg[i] += 0.5 * h;
                neg[i + 1] += 0.5 * h;
            } else if x0 >= 0.0 {
                pos[i] += 0.5 * h;
                pos[i + 1] += 0.5 * h;
            } else {
                // linear interpolant on the straddling cell, split at 0
                let t = -x0 / h;
                pos[i] += 0.5 * h * (1.0 - t) * (1.0 - t);
                pos[i + 1] += 0.5 * h * (1.0 - t) * (1.0 + t);
                neg[i] += 0.5 * h * t * (2.0 - t);
                neg[i + 1] += 0.5 * h * t * t;
            }
        }
        (pos, neg)
    }
}

/// Compensated (Kahan) accumulator; keeps grid sums deterministic and
/// near machine precision regardless of length.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let y = value - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// Weighted sum `Σ w[i]·f[i]` with compensated accumulation, in index order.
pub fn weighted_sum(weights: &[f64], values: &[f64]) -> f64 {
    debug_assert_eq!(weights.len(), values.len());
    let mut acc = KahanSum::new();
    for (w, v) in weights.iter().zip(values) {
        acc.add(w * v);
    }
    acc.value()
}

/// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton
/// iteration on the Legendre recurrence.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1);
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        // Chebyshev-based initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre P_n(x) and its derivative by three-term recurrence
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_validation() {
        assert!(GridSpec::new(-1.0, 1.0, 0.1).is_ok());
        assert!(GridSpec::new(-1.0, 1.0, 0.0).is_err());
        assert!(GridSpec::new(1.0, -1.0, 0.1).is_err());
        assert!(GridSpec::new(0.0, 1.0, 0.3).is_err()); // 10/3 cells
        let g = GridSpec::symmetric(9.2426, 0.04).unwrap();
        assert!(g.x_max >= 9.2426 && g.x_max < 9.2426 + 0.04);
        assert_eq!(g.points().len(), g.len());
    }

    #[test]
    fn trapezoid_integrates_gaussian() {
        let g = GridSpec::symmetric(8.0, 0.05).unwrap();
        let vals: Vec<f64> = g.points().iter().map(|&x| (-x * x).exp()).collect();
        let integral = weighted_sum(&g.trapezoid_weights(), &vals);
        assert!((integral - std::f64::consts::PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn halfline_weights_partition_total() {
        for g in [
            GridSpec::symmetric(3.0, 0.1).unwrap(),
            GridSpec::new(-2.05, 3.0, 0.1).unwrap(), // zero not on grid
        ] {
            let (pos, neg) = g.halfline_weights();
            let total = g.trapezoid_weights();
            for i in 0..g.len() {
                assert!((pos[i] + neg[i] - total[i]).abs() < 1e-15);
            }
            // erf oracle: ∫_0^∞ e^{-x²} over the grid span
            let vals: Vec<f64> = g.points().iter().map(|&x| (-x * x).exp()).collect();
            let got = weighted_sum(&pos, &vals);
            let want = 0.5 * std::f64::consts::PI.sqrt() * crate::special::erf(g.x_max);
            assert!((got - want).abs() < 1e-4, "got {got} want {want}");
        }
    }

    #[test]
    fn gauss_legendre_exactness() {
        let (x, w) = gauss_legendre(16);
        // degree-31 polynomial exactness: x^30 integrates to 2/31
        let got: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(30)).sum();
        assert!((got - 2.0 / 31.0).abs() < 1e-14);
        let total: f64 = w.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
    }
}
