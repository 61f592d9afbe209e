//! Finite-difference stencils and quadrature weights.
//!
//! Interval grids use second-order central differences with one-sided
//! second-order stencils at the endpoints. Periodic grids use fourth-order
//! central stencils, which keep circles and other smooth closed curves
//! accurate well below the tolerances of the geometric tests.

/// First derivative on an interval grid, second order everywhere.
pub fn line_d1(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    let mut d = vec![0.0; n];
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    for i in 1..n - 1 {
        d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    }
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
    d
}

/// Adjoint of [`line_d1`]: `(D1^T u)_j = sum_i c_{ij} u_i`.
pub fn line_d1_t(u: &[f64], h: f64) -> Vec<f64> {
    let n = u.len();
    let mut out = vec![0.0; n];
    let s = 1.0 / (2.0 * h);
    out[0] += -3.0 * s * u[0];
    out[1] += 4.0 * s * u[0];
    out[2] += -s * u[0];
    for i in 1..n - 1 {
        out[i + 1] += s * u[i];
        out[i - 1] -= s * u[i];
    }
    out[n - 1] += 3.0 * s * u[n - 1];
    out[n - 2] += -4.0 * s * u[n - 1];
    out[n - 3] += s * u[n - 1];
    out
}

/// Second derivative on an interval grid, second order everywhere.
pub fn line_d2(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    let h2 = h * h;
    let mut d = vec![0.0; n];
    d[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
    for i in 1..n - 1 {
        d[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / h2;
    }
    d[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2;
    d
}

/// Adjoint of [`line_d2`].
pub fn line_d2_t(u: &[f64], h: f64) -> Vec<f64> {
    let n = u.len();
    let s = 1.0 / (h * h);
    let mut out = vec![0.0; n];
    out[0] += 2.0 * s * u[0];
    out[1] += -5.0 * s * u[0];
    out[2] += 4.0 * s * u[0];
    out[3] += -s * u[0];
    for i in 1..n - 1 {
        out[i + 1] += s * u[i];
        out[i] += -2.0 * s * u[i];
        out[i - 1] += s * u[i];
    }
    out[n - 1] += 2.0 * s * u[n - 1];
    out[n - 2] += -5.0 * s * u[n - 1];
    out[n - 3] += 4.0 * s * u[n - 1];
    out[n - 4] += -s * u[n - 1];
    out
}

/// Fourth difference at interior node `i`; valid for `2 <= i <= n - 3`.
pub fn line_d4_at(f: &[f64], h: f64, i: usize) -> f64 {
    (f[i - 2] - 4.0 * f[i - 1] + 6.0 * f[i] - 4.0 * f[i + 1] + f[i + 2]) / h.powi(4)
}

/// First derivative on a periodic grid, fourth order.
pub fn periodic_d1(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    let s = 1.0 / (12.0 * h);
    (0..n)
        .map(|i| {
            let m2 = f[(i + n - 2) % n];
            let m1 = f[(i + n - 1) % n];
            let p1 = f[(i + 1) % n];
            let p2 = f[(i + 2) % n];
            s * (-p2 + 8.0 * p1 - 8.0 * m1 + m2)
        })
        .collect()
}

/// Second derivative on a periodic grid, fourth order.
pub fn periodic_d2(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    let s = 1.0 / (12.0 * h * h);
    (0..n)
        .map(|i| {
            let m2 = f[(i + n - 2) % n];
            let m1 = f[(i + n - 1) % n];
            let p1 = f[(i + 1) % n];
            let p2 = f[(i + 2) % n];
            s * (-p2 + 16.0 * p1 - 30.0 * f[i] + 16.0 * m1 - m2)
        })
        .collect()
}

/// Adjoint of [`periodic_d1`]; the circulant stencil is antisymmetric.
pub fn periodic_d1_t(u: &[f64], h: f64) -> Vec<f64> {
    periodic_d1(u, h).into_iter().map(|v| -v).collect()
}

/// Adjoint of [`periodic_d2`]; the circulant stencil is symmetric.
pub fn periodic_d2_t(u: &[f64], h: f64) -> Vec<f64> {
    periodic_d2(u, h)
}

/// Composite trapezoid on an interval grid.
pub fn trapezoid(f: &[f64], h: f64) -> f64 {
    let n = f.len();
    let inner: f64 = f[1..n - 1].iter().sum();
    h * (0.5 * (f[0] + f[n - 1]) + inner)
}

/// Trapezoid weights (1/2 at the endpoints, 1 inside).
pub fn trapezoid_weights(n: usize) -> Vec<f64> {
    let mut w = vec![1.0; n];
    w[0] = 0.5;
    w[n - 1] = 0.5;
    w
}

/// Periodic trapezoid rule; on a periodic grid it is the plain node sum.
pub fn periodic_trapezoid(f: &[f64], h: f64) -> f64 {
    h * f.iter().sum::<f64>()
}

/// `h^2`-scaled total-variation proxy for the trapezoid error.
pub fn trapezoid_error_estimate(f: &[f64], h: f64) -> f64 {
    let n = f.len();
    let mut tv = 0.0;
    for i in 1..n - 1 {
        tv += (f[i + 1] - 2.0 * f[i] + f[i - 1]).abs();
    }
    h * tv / 12.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn dot(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    #[test]
    fn line_stencils_are_exact_on_quadratics() {
        let n = 41;
        let h = 2.0 / (n - 1) as f64;
        let f: Vec<f64> = (0..n)
            .map(|i| {
                let x = -1.0 + i as f64 * h;
                0.3 + 1.7 * x - 0.9 * x * x
            })
            .collect();
        let d1 = line_d1(&f, h);
        let d2 = line_d2(&f, h);
        for i in 0..n {
            let x = -1.0 + i as f64 * h;
            assert!((d1[i] - (1.7 - 1.8 * x)).abs() < 1e-12);
            assert!((d2[i] + 1.8).abs() < 1e-10);
        }
    }

    #[test]
    fn line_stencils_are_second_order() {
        let errs: Vec<f64> = [101usize, 201]
            .iter()
            .map(|&n| {
                let h = 2.0 / (n - 1) as f64;
                let f: Vec<f64> = (0..n).map(|i| (-1.0 + i as f64 * h).powi(5)).collect();
                let d1 = line_d1(&f, h);
                let d2 = line_d2(&f, h);
                let mut e: f64 = 0.0;
                for i in 0..n {
                    let x: f64 = -1.0 + i as f64 * h;
                    e = e.max((d1[i] - 5.0 * x.powi(4)).abs());
                    e = e.max((d2[i] - 20.0 * x.powi(3)).abs());
                }
                e
            })
            .collect();
        assert!(errs[0] / errs[1] > 3.4, "expected ~4x: {errs:?}");
    }

    #[test]
    fn periodic_stencils_are_fourth_order() {
        let errs: Vec<f64> = [64usize, 128]
            .iter()
            .map(|&n| {
                let h = TAU / n as f64;
                let f: Vec<f64> = (0..n).map(|i| (3.0 * i as f64 * h).sin()).collect();
                let d1 = periodic_d1(&f, h);
                let d2 = periodic_d2(&f, h);
                let mut e: f64 = 0.0;
                for i in 0..n {
                    let s = i as f64 * h;
                    e = e.max((d1[i] - 3.0 * (3.0 * s).cos()).abs());
                    e = e.max((d2[i] + 9.0 * (3.0 * s).sin()).abs());
                }
                e
            })
            .collect();
        assert!(errs[0] / errs[1] > 14.0, "expected ~16x: {errs:?}");
    }

    #[test]
    fn adjoints_match_stencils() {
        let n = 23;
        let h = 0.37;
        let x: Vec<f64> = (0..n).map(|i| ((i * 7 + 3) % 11) as f64 - 5.0).collect();
        let y: Vec<f64> = (0..n).map(|i| ((i * 5 + 1) % 13) as f64 - 6.0).collect();
        assert!((dot(&line_d1(&x, h), &y) - dot(&x, &line_d1_t(&y, h))).abs() < 1e-10);
        assert!((dot(&line_d2(&x, h), &y) - dot(&x, &line_d2_t(&y, h))).abs() < 1e-9);
        assert!((dot(&periodic_d1(&x, h), &y) - dot(&x, &periodic_d1_t(&y, h))).abs() < 1e-10);
        assert!((dot(&periodic_d2(&x, h), &y) - dot(&x, &periodic_d2_t(&y, h))).abs() < 1e-9);
    }

    #[test]
    fn trapezoid_integrates_linear_exactly() {
        let n = 11;
        let h = 0.1;
        let f: Vec<f64> = (0..n).map(|i| 2.0 * (i as f64 * h) + 1.0).collect();
        assert!((trapezoid(&f, h) - 2.0).abs() < 1e-14);
    }
}
