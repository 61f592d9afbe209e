//! Sampled functions and curves on uniform grids.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Real function sampled at `n` uniformly spaced nodes of a closed interval,
/// endpoints included. Compact support is modelled by zero boundary values
/// on a large enough interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    lo: f64,
    hi: f64,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(lo: f64, hi: f64, values: Vec<f64>) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && hi > lo) {
            return Err(Error::InvalidInput(format!(
                "interval [{lo}, {hi}] is not a finite interval with hi > lo"
            )));
        }
        if values.len() < 5 {
            return Err(Error::InvalidInput(format!(
                "grid function needs at least 5 nodes, got {}",
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite sample {v}")));
        }
        Ok(Self { lo, hi, values })
    }

    /// Samples `f` at `n` uniform nodes of `[lo, hi]`.
    pub fn from_fn(lo: f64, hi: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if n < 5 {
            return Err(Error::InvalidInput(format!("need n >= 5 nodes, got {n}")));
        }
        let h = (hi - lo) / (n - 1) as f64;
        let values = (0..n).map(|i| f(lo + i as f64 * h)).collect();
        Self::new(lo, hi, values)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// Node spacing `(hi - lo) / (n - 1)`.
    pub fn spacing(&self) -> f64 {
        (self.hi - self.lo) / (self.values.len() - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        self.lo + i as f64 * self.spacing()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Checks the optional non-negativity flag: `values[i] >= -tol` for all i.
    pub fn is_nonneg(&self, tol: f64) -> bool {
        self.min_value() >= -tol
    }
}

/// Real function on the uniform periodic grid `s_j = 2 pi j / n` over `[0, 2 pi)`.
/// Values measure the inward deviation of the radial graph
/// `gamma(s) = (1 - phi(s)) (cos s, sin s)`, so they must stay in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicProfile {
    values: Vec<f64>,
}

impl PeriodicProfile {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 8 {
            return Err(Error::InvalidInput(format!(
                "periodic profile needs at least 8 nodes, got {}",
                values.len()
            )));
        }
        if let Some(v) = values
            .iter()
            .find(|v| !v.is_finite() || **v < 0.0 || **v >= 1.0)
        {
            return Err(Error::InvalidInput(format!(
                "profile value {v} outside [0, 1)"
            )));
        }
        Ok(Self { values })
    }

    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if n < 8 {
            return Err(Error::InvalidInput(format!("need n >= 8 nodes, got {n}")));
        }
        let values = (0..n).map(|j| f(TAU * j as f64 / n as f64)).collect();
        Self::new(values)
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::from_fn(n, |_| 0.0)
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn spacing(&self) -> f64 {
        TAU / self.values.len() as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        TAU * j as f64 / self.values.len() as f64
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// The radial graph `(1 - phi(s_j)) (cos s_j, sin s_j)` as a closed curve.
    pub fn to_curve(&self) -> SampledCurve {
        let n = self.values.len();
        let pts = (0..n)
            .map(|j| {
                let s = self.node(j);
                let r = 1.0 - self.values[j];
                [r * s.cos(), r * s.sin(), 0.0]
            })
            .collect();
        SampledCurve::new(2, pts, true).expect("radial graph of a valid profile is immersed")
    }
}

/// Curve sampled at `n` uniform parameter nodes in 2D or 3D.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledCurve {
    dim: usize,
    points: Vec<[f64; 3]>,
    periodic: bool,
}

impl SampledCurve {
    /// `points` carry a zero third component when `dim == 2`.
    pub fn new(dim: usize, points: Vec<[f64; 3]>, periodic: bool) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::InvalidInput(format!("dim must be 2 or 3, got {dim}")));
        }
        if points.len() < 8 {
            return Err(Error::InvalidInput(format!(
                "curve needs at least 8 samples, got {}",
                points.len()
            )));
        }
        for p in &points {
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidInput("non-finite curve sample".into()));
            }
        }
        let n = points.len();
        let pairs = if periodic { n } else { n - 1 };
        for i in 0..pairs {
            let a = points[i];
            let b = points[(i + 1) % n];
            if a == b {
                return Err(Error::InvalidInput(format!(
                    "consecutive samples {i} and {} coincide",
                    (i + 1) % n
                )));
            }
        }
        Ok(Self {
            dim,
            points,
            periodic,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn periodic(&self) -> bool {
        self.periodic
    }

    pub fn points(&self) -> &[[f64; 3]] {
        &self.points
    }

    pub fn max_norm(&self) -> f64 {
        self.points
            .iter()
            .map(|p| (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt())
            .fold(0.0, f64::max)
    }
}

/// Quadrature result together with a crude `h^2`-scaled error proxy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalarFunctionalValue {
    pub value: f64,
    pub quadrature_error_estimate: f64,
}
