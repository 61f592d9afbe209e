//! Discrete length and bending-energy functionals.
//!
//! Interval quadrature is the composite trapezoid rule over second-order
//! difference stencils; periodic quadrature is the node sum over
//! fourth-order periodic stencils. Solvers rely on the exact gradients of
//! these discrete functionals, so the gradient routines here mirror the
//! stencils term by term.

use crate::diff;
use crate::grid::{GridFunction, PeriodicProfile, SampledCurve, ScalarFunctionalValue};
use crate::{Error, Result};

/// Signed linearised length `int (phi')^2/2 - phi`.
pub fn line_length(phi: &GridFunction) -> f64 {
    let h = phi.spacing();
    let d1 = diff::line_d1(phi.values(), h);
    let f: Vec<f64> = phi
        .values()
        .iter()
        .zip(&d1)
        .map(|(&v, &p)| 0.5 * p * p - v)
        .collect();
    diff::trapezoid(&f, h)
}

/// [`line_length`] together with a quadrature error proxy.
pub fn line_length_value(phi: &GridFunction) -> ScalarFunctionalValue {
    let h = phi.spacing();
    let d1 = diff::line_d1(phi.values(), h);
    let f: Vec<f64> = phi
        .values()
        .iter()
        .zip(&d1)
        .map(|(&v, &p)| 0.5 * p * p - v)
        .collect();
    ScalarFunctionalValue {
        value: diff::trapezoid(&f, h),
        quadrature_error_estimate: diff::trapezoid_error_estimate(&f, h),
    }
}

/// Bending energy `int (phi'')^2` of the line profile.
pub fn line_energy(phi: &GridFunction) -> f64 {
    let h = phi.spacing();
    let d2 = diff::line_d2(phi.values(), h);
    let f: Vec<f64> = d2.iter().map(|&w| w * w).collect();
    diff::trapezoid(&f, h)
}

/// [`line_energy`] together with a quadrature error proxy.
pub fn line_energy_value(phi: &GridFunction) -> ScalarFunctionalValue {
    let h = phi.spacing();
    let d2 = diff::line_d2(phi.values(), h);
    let f: Vec<f64> = d2.iter().map(|&w| w * w).collect();
    ScalarFunctionalValue {
        value: diff::trapezoid(&f, h),
        quadrature_error_estimate: diff::trapezoid_error_estimate(&f, h),
    }
}

/// Bending energy plus `alpha` times the measure of `{phi > support_tol}`.
pub fn line_energy_alpha(phi: &GridFunction, alpha: f64, support_tol: f64) -> f64 {
    let h = phi.spacing();
    let support = phi.values().iter().filter(|&&v| v > support_tol).count();
    line_energy(phi) + alpha * h * support as f64
}

/// Rescales `phi` to `rho^(2/3) phi(rho^(-1/3) x)` on the stretched interval.
///
/// On a uniform grid the rescaling is an exact resampling, so the discrete
/// identities `L -> rho L` and `E -> rho^(1/3) E` hold to roundoff.
pub fn rescale_profile(phi: &GridFunction, rho: f64) -> Result<GridFunction> {
    if !(rho.is_finite() && rho > 0.0) {
        return Err(Error::InvalidInput(format!(
            "rescale factor must be positive, got {rho}"
        )));
    }
    let s = rho.cbrt();
    let amp = s * s;
    let values = phi.values().iter().map(|&v| amp * v).collect();
    GridFunction::new(s * phi.lo(), s * phi.hi(), values)
}

/// Length of the radial graph `gamma(s) = (1 - phi(s)) (cos s, sin s)`.
pub fn radial_length(phi: &PeriodicProfile) -> f64 {
    let h = phi.spacing();
    let d1 = diff::periodic_d1(phi.values(), h);
    let f: Vec<f64> = phi
        .values()
        .iter()
        .zip(&d1)
        .map(|(&v, &p)| ((1.0 - v) * (1.0 - v) + p * p).sqrt())
        .collect();
    diff::periodic_trapezoid(&f, h)
}

/// [`radial_length`] and its gradient with respect to the profile samples.
pub(crate) fn radial_length_grad(values: &[f64], h: f64) -> (f64, Vec<f64>) {
    let v = diff::periodic_d1(values, h);
    let n = values.len();
    let mut q = vec![0.0; n];
    let mut gm = vec![0.0; n];
    let mut gv = vec![0.0; n];
    let mut total = 0.0;
    for j in 0..n {
        let m = 1.0 - values[j];
        q[j] = (m * m + v[j] * v[j]).sqrt();
        total += q[j];
        gm[j] = m / q[j];
        gv[j] = v[j] / q[j];
    }
    let d1t = diff::periodic_d1_t(&gv, h);
    let grad = (0..n).map(|j| h * (-gm[j] + d1t[j])).collect();
    (h * total, grad)
}

fn radial_energy_terms(values: &[f64], h: f64) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let v = diff::periodic_d1(values, h);
    let u = diff::periodic_d2(values, h);
    let m = values.iter().map(|&p| 1.0 - p).collect();
    (m, v, u)
}

fn radial_energy_integrand(m: f64, v: f64, u: f64) -> f64 {
    let q2 = m * m + v * v;
    assert!(q2 > 0.0, "degenerate radial parametrisation");
    let q = q2.sqrt();
    let a = m + u;
    let b = u - m;
    (a * a + 4.0 * v * v - v * v * b * b / q2) / (q2 * q)
}

/// Bending energy of the radial graph in general parametrisation.
pub fn radial_energy(phi: &PeriodicProfile) -> f64 {
    let h = phi.spacing();
    let (m, v, u) = radial_energy_terms(phi.values(), h);
    let f: Vec<f64> = (0..phi.n())
        .map(|j| radial_energy_integrand(m[j], v[j], u[j]))
        .collect();
    diff::periodic_trapezoid(&f, h)
}

/// [`radial_energy`] and its exact discrete gradient.
pub(crate) fn radial_energy_grad(values: &[f64], h: f64) -> (f64, Vec<f64>) {
    let (m, v, u) = radial_energy_terms(values, h);
    let n = values.len();
    let mut total = 0.0;
    let mut wm = vec![0.0; n];
    let mut wv = vec![0.0; n];
    let mut wu = vec![0.0; n];
    for j in 0..n {
        let (mj, vj, uj) = (m[j], v[j], u[j]);
        let q2 = mj * mj + vj * vj;
        let q = q2.sqrt();
        let q3 = q2 * q;
        let q5 = q3 * q2;
        let q7 = q5 * q2;
        let a = mj + uj;
        let b = uj - mj;
        total += (a * a + 4.0 * vj * vj - vj * vj * b * b / q2) / q3;
        wm[j] = 2.0 * a / q3 - 3.0 * mj * a * a / q5 - 12.0 * mj * vj * vj / q5
            + 2.0 * vj * vj * b / q5
            + 5.0 * mj * vj * vj * b * b / q7;
        wv[j] = 8.0 * vj / q3 - 3.0 * vj * a * a / q5 - 12.0 * vj.powi(3) / q5
            - 2.0 * vj * b * b / q5
            + 5.0 * vj.powi(3) * b * b / q7;
        wu[j] = 2.0 * a / q3 - 2.0 * vj * vj * b / q5;
    }
    let d1t = diff::periodic_d1_t(&wv, h);
    let d2t = diff::periodic_d2_t(&wu, h);
    let grad = (0..n).map(|j| h * (-wm[j] + d1t[j] + d2t[j])).collect();
    (h * total, grad)
}

/// Signed discrete curvature of the radial graph at each node
/// (counterclockwise orientation; the unit circle has curvature +1).
pub fn radial_curvature(phi: &PeriodicProfile) -> Vec<f64> {
    let h = phi.spacing();
    let (m, v, u) = radial_energy_terms(phi.values(), h);
    (0..phi.n())
        .map(|j| {
            let q2 = m[j] * m[j] + v[j] * v[j];
            (m[j] * m[j] + 2.0 * v[j] * v[j] + m[j] * u[j]) / (q2 * q2.sqrt())
        })
        .collect()
}

/// Length and bending energy of a sampled curve in 2D or 3D.
pub fn curve_length_energy(gamma: &SampledCurve) -> Result<(f64, f64)> {
    let n = gamma.n();
    let pts = gamma.points();
    let (d1, d2, weights, h) = if gamma.periodic() {
        let h = std::f64::consts::TAU / n as f64;
        let mut d1 = vec![[0.0; 3]; n];
        let mut d2 = vec![[0.0; 3]; n];
        for k in 0..3 {
            let comp: Vec<f64> = pts.iter().map(|p| p[k]).collect();
            let a = diff::periodic_d1(&comp, h);
            let b = diff::periodic_d2(&comp, h);
            for i in 0..n {
                d1[i][k] = a[i];
                d2[i][k] = b[i];
            }
        }
        (d1, d2, vec![1.0; n], h)
    } else {
        let h = 1.0 / (n - 1) as f64;
        let mut d1 = vec![[0.0; 3]; n];
        let mut d2 = vec![[0.0; 3]; n];
        for k in 0..3 {
            let comp: Vec<f64> = pts.iter().map(|p| p[k]).collect();
            let a = diff::line_d1(&comp, h);
            let b = diff::line_d2(&comp, h);
            for i in 0..n {
                d1[i][k] = a[i];
                d2[i][k] = b[i];
            }
        }
        (d1, d2, diff::trapezoid_weights(n), h)
    };

    let mut length = 0.0;
    let mut energy = 0.0;
    for i in 0..n {
        let v = d1[i];
        let a = d2[i];
        let q2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
        if q2 <= 1e-24 {
            return Err(Error::InvalidInput(format!(
                "zero-speed node {i}: derivative vanishes at sample resolution"
            )));
        }
        let q = q2.sqrt();
        let aa = a[0] * a[0] + a[1] * a[1] + a[2] * a[2];
        let av = a[0] * v[0] + a[1] * v[1] + a[2] * v[2];
        length += weights[i] * q;
        energy += weights[i] * (aa - av * av / q2) / (q2 * q);
    }
    Ok((h * length, h * energy))
}

/// [`line_energy`] and its exact discrete gradient.
pub(crate) fn line_energy_grad(values: &[f64], h: f64) -> (f64, Vec<f64>) {
    let n = values.len();
    let w = diff::trapezoid_weights(n);
    let d2 = diff::line_d2(values, h);
    let value = h * d2.iter().zip(&w).map(|(&x, &wi)| wi * x * x).sum::<f64>();
    let wd2: Vec<f64> = d2.iter().zip(&w).map(|(&x, &wi)| 2.0 * h * wi * x).collect();
    (value, diff::line_d2_t(&wd2, h))
}

/// [`line_length`] and its exact discrete gradient.
pub(crate) fn line_length_grad(values: &[f64], h: f64) -> (f64, Vec<f64>) {
    let n = values.len();
    let w = diff::trapezoid_weights(n);
    let d1 = diff::line_d1(values, h);
    let value = h
        * (0..n)
            .map(|i| w[i] * (0.5 * d1[i] * d1[i] - values[i]))
            .sum::<f64>();
    let wd1: Vec<f64> = d1.iter().zip(&w).map(|(&x, &wi)| h * wi * x).collect();
    let mut grad = diff::line_d1_t(&wd1, h);
    for i in 0..n {
        grad[i] -= h * w[i];
    }
    (value, grad)
}
