//! Explicit solution of the line problem.
//!
//! The minimizer of the bending energy under the signed-length constraint
//! is `a - x^2/2 + alpha cos(mu x)` on `(-r, r)` and zero outside, where
//! `mu r` is the first positive fixed point of the tangent. All remaining
//! constants follow algebraically from that root.

use crate::diff;
use crate::grid::GridFunction;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Solved constants of the explicit minimizer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormParams {
    /// First positive solution of `tan(rho) = rho`.
    pub rho: f64,
    /// Support half-width, `6^(1/3)`.
    pub r: f64,
    /// Cosine frequency `rho / r`.
    pub mu: f64,
    /// Cosine amplitude.
    pub alpha: f64,
    /// Vertical offset.
    pub a: f64,
    /// Minimal bending energy `6^(1/3) rho^2`.
    pub theta: f64,
}

/// Sign of the Lagrange multiplier selecting the trigonometric or
/// hyperbolic family of interval solutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BranchSign {
    /// Negative multiplier: `a + b x + alpha cos(mu x) + beta sin(mu x)` family.
    Trigonometric,
    /// Positive multiplier: the hyperbolic family.
    Hyperbolic,
}

/// First positive solution of `tan(rho) = rho`, in `(pi, 3 pi/2)`.
///
/// The root equation is evaluated as `sin(rho) - rho cos(rho) = 0`, which is
/// free of tangent poles on the bracket; bisection is followed by a Newton
/// polish to roughly machine precision.
pub fn solve_tan_fixed_point() -> f64 {
    static ROOT: OnceLock<f64> = OnceLock::new();
    *ROOT.get_or_init(|| {
        let g = |x: f64| x.sin() - x * x.cos();
        let mut lo = PI;
        let mut hi = 1.5 * PI;
        // g(pi) = pi > 0, g(3 pi / 2) = -1 < 0
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if g(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut x = 0.5 * (lo + hi);
        for _ in 0..4 {
            // g'(rho) = rho sin(rho)
            x -= g(x) / (x * x.sin());
        }
        x
    })
}

/// All six constants computed from the tangent fixed point alone.
///
/// `a` and `alpha` use the algebraic identities available at the root
/// (`cot rho = 1/rho`, `sin rho = -rho / sqrt(1 + rho^2)` on the bracket)
/// instead of raw trigonometry, which avoids cancellation.
pub fn params() -> ClosedFormParams {
    static PARAMS: OnceLock<ClosedFormParams> = OnceLock::new();
    *PARAMS.get_or_init(|| {
        let rho = solve_tan_fixed_point();
        let r = 6.0f64.cbrt();
        let rho2 = rho * rho;
        ClosedFormParams {
            rho,
            r,
            mu: rho / r,
            alpha: r * r * (1.0 + rho2).sqrt() / rho2,
            a: (0.5 + 1.0 / rho2) * r * r,
            theta: r * rho2,
        }
    })
}

/// Derivative of order `order <= 3` of the explicit minimizer; identically
/// zero for `|x| >= r`.
pub fn eval_minimizer(x: f64, order: usize) -> f64 {
    assert!(order <= 3, "derivative order must be at most 3");
    let p = params();
    if x.abs() >= p.r {
        return 0.0;
    }
    let mu = p.mu;
    match order {
        0 => p.a - 0.5 * x * x + p.alpha * (mu * x).cos(),
        1 => -x - p.alpha * mu * (mu * x).sin(),
        2 => -1.0 - p.alpha * mu * mu * (mu * x).cos(),
        _ => p.alpha * mu * mu * mu * (mu * x).sin(),
    }
}

/// Length and energy of the interval solution with parameters `(rho, r)` on
/// the chosen multiplier branch.
pub fn branch_length_energy(rho: f64, r: f64, branch: BranchSign) -> Result<(f64, f64)> {
    if !(rho.is_finite() && rho > 0.0 && r.is_finite() && r > 0.0) {
        return Err(Error::InvalidInput(format!(
            "branch parameters must be positive, got rho={rho}, r={r}"
        )));
    }
    let r3 = r * r * r;
    match branch {
        BranchSign::Trigonometric => {
            let k = (rho / PI).round();
            if (rho - k * PI).abs() < 1e-9 && k >= 1.0 {
                return Err(Error::InvalidInput(format!(
                    "trigonometric formulas have a pole at rho = {k} pi"
                )));
            }
            let sn = rho.sin();
            let cs = rho.cos();
            let energy = (rho * rho / (sn * sn) + rho * cs / sn - 2.0) * r;
            let length = (-1.0 / 3.0 + 0.5 / sn * (1.0 / sn - cs / rho)) * r3;
            Ok((length, energy))
        }
        BranchSign::Hyperbolic => {
            let sh = rho.sinh();
            let ch = rho.cosh();
            let energy = (rho * rho / (sh * sh) + rho * ch / sh - 2.0) * r;
            let length = (-1.0 / 3.0 + 0.5 / sh * (ch / rho - 1.0 / sh)) * r3;
            Ok((length, energy))
        }
    }
}

/// Maximal interior residual of `phi'''' + (theta/6)(phi'' + 1) = 0` over the
/// support of `phi`.
///
/// The explicit minimizer is only `C^{2,1}` at the support boundary, so the
/// five-point stencil is inconsistent there; a three-node collar at each end
/// of every support run is excluded from the reported maximum.
pub fn el_residual(phi: &GridFunction, theta: f64) -> f64 {
    let values = phi.values();
    let n = values.len();
    let h = phi.spacing();
    let support_tol = 1e-12 * values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let d2 = diff::line_d2(values, h);

    // contiguous support runs
    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut start = None;
    for i in 0..n {
        if values[i] > support_tol {
            if start.is_none() {
                start = Some(i);
            }
        } else if let Some(s) = start.take() {
            runs.push((s, i - 1));
        }
    }
    if let Some(s) = start {
        runs.push((s, n - 1));
    }

    let mut worst: f64 = 0.0;
    for (s, e) in runs {
        let lo = (s + 3).max(2);
        if e < 3 {
            continue;
        }
        let hi = (e - 3).min(n - 3);
        for i in lo..=hi {
            let r = diff::line_d4_at(values, h, i) + theta / 6.0 * (d2[i] + 1.0);
            worst = worst.max(r.abs());
        }
    }
    worst
}

/// Discrete sample of the minimizer on `[-R, R]`.
pub fn sample_minimizer(domain_radius: f64, n: usize) -> Result<GridFunction> {
    GridFunction::from_fn(-domain_radius, domain_radius, n, |x| eval_minimizer(x, 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functionals::{line_energy, line_length};

    #[test]
    fn fixed_point_value_and_residual() {
        let rho = solve_tan_fixed_point();
        assert!((rho - 4.4934).abs() < 1e-4);
        assert!((rho.sin() - rho * rho.cos()).abs() < 1e-12);
        assert!(rho > PI && rho < 1.5 * PI);
    }

    #[test]
    fn sine_identity_at_root() {
        let rho = solve_tan_fixed_point();
        let s2 = rho.sin() * rho.sin();
        assert!((s2 - rho * rho / (1.0 + rho * rho)).abs() < 1e-10);
    }

    #[test]
    fn parameter_table() {
        let p = params();
        assert!((p.theta - 36.6890).abs() < 1e-3);
        assert!((p.mu - 2.4728).abs() < 1e-3);
        assert!((p.a - 1.8145).abs() < 1e-3);
        assert!((p.alpha - 0.7528).abs() < 1e-3);
        assert!((p.r - 1.8171).abs() < 1e-3);
        // internal identities
        assert!((p.r.powi(3) - 6.0).abs() < 1e-12);
        assert!((p.mu * p.r - p.rho).abs() < 1e-12);
        assert!((p.rho.tan() - p.rho).abs() < 1e-9);
    }

    #[test]
    fn minimizer_peak_value() {
        let p = params();
        assert!((eval_minimizer(0.0, 0) - (p.a + p.alpha)).abs() < 1e-14);
        assert!((eval_minimizer(0.0, 0) - 2.5673).abs() < 1e-3);
    }

    #[test]
    fn minimizer_is_c2_at_the_free_boundary() {
        let r = params().r;
        for order in 0..3 {
            for x in [r, -r] {
                assert_eq!(eval_minimizer(x, order), 0.0);
                // interior limit
                let inside = x.signum() * (x.abs() - 1e-9);
                assert!(
                    eval_minimizer(inside, order).abs() < 1e-7,
                    "order {order} at {x}"
                );
            }
        }
    }

    #[test]
    fn third_derivative_jumps_at_boundary() {
        let p = params();
        let inside = eval_minimizer(p.r - 1e-9, 3);
        assert_eq!(eval_minimizer(p.r, 3), 0.0);
        // interior limit of phi''' is -rho^2 / r
        assert!((inside + p.rho * p.rho / p.r).abs() < 1e-5);
    }

    #[test]
    fn minimizer_is_even_and_positive_inside() {
        let p = params();
        for i in 0..1000 {
            let x = p.r * (i as f64 + 0.5) / 1000.0;
            assert_eq!(eval_minimizer(x, 0), eval_minimizer(-x, 0));
            if x < p.r - 1e-6 {
                assert!(eval_minimizer(x, 0) > 0.0);
            }
        }
    }

    #[test]
    fn minimizer_is_monotone_on_each_side() {
        let p = params();
        for i in 0..1000 {
            let x = -p.r + p.r * (i as f64 + 0.5) / 1000.0; // (-r, 0)
            assert!(eval_minimizer(x, 1) >= 0.0, "increasing on (-r,0) at {x}");
            assert!(eval_minimizer(-x, 1) <= 0.0, "decreasing on (0,r) at {x}");
        }
    }

    #[test]
    fn branch_values_at_the_root() {
        let p = params();
        let (l, e) = branch_length_energy(p.rho, p.r, BranchSign::Trigonometric).unwrap();
        assert!((l - 1.0).abs() < 1e-6);
        assert!((e - p.theta).abs() < 1e-6);
    }

    #[test]
    fn branch_rejects_tangent_poles() {
        assert!(branch_length_energy(PI, 1.0, BranchSign::Trigonometric).is_err());
        assert!(branch_length_energy(2.0 * PI, 1.0, BranchSign::Trigonometric).is_err());
        assert!(branch_length_energy(PI, 1.0, BranchSign::Hyperbolic).is_ok());
    }

    #[test]
    fn small_rho_expansions() {
        // hyperbolic branch: L / (rho^2 r^3) -> -2/45
        let rho = 1e-3;
        let (l, _) = branch_length_energy(rho, 1.0, BranchSign::Hyperbolic).unwrap();
        let ratio = l / (rho * rho);
        assert!(
            (ratio + 2.0 / 45.0).abs() < 0.01 * (2.0 / 45.0),
            "ratio {ratio}"
        );

        // trigonometric branch: central value (a + alpha)/r^2 -> -rho^2/24
        let r = 1.0;
        let a = 0.5 * r * r + r * r / rho * (rho.cos() / rho.sin());
        let alpha = -r * r / (rho * rho.sin());
        let central = (a + alpha) / (r * r);
        assert!(
            (central + rho * rho / 24.0).abs() < 0.01 * rho * rho / 24.0,
            "central {central}"
        );
    }

    #[test]
    fn el_residual_of_sampled_minimizer_is_small() {
        let p = params();
        let res: Vec<f64> = [1001usize, 2001, 4001]
            .iter()
            .map(|&n| el_residual(&sample_minimizer(4.0, n).unwrap(), p.theta))
            .collect();
        assert!(res[2] <= 0.05, "residual {res:?}");
        // stencil truncation shrinks under refinement until the h^-4
        // roundoff floor takes over near n = 4001
        assert!(res[1] < res[0], "{res:?}");
        assert!(res[2] < res[0], "{res:?}");
    }

    #[test]
    fn el_residual_ignores_empty_support() {
        let z = GridFunction::from_fn(-4.0, 4.0, 101, |_| 0.0).unwrap();
        assert_eq!(el_residual(&z, params().theta), 0.0);
    }

    #[test]
    fn el_residual_of_pure_parabola_vanishes() {
        // any a - x^2/2 solves the interior equation: phi'''' = 0, phi'' = -1;
        // the tolerance absorbs h^-4 roundoff in the fourth difference
        let phi = GridFunction::from_fn(-1.0, 1.0, 801, |x| 2.0 - 0.5 * x * x).unwrap();
        assert!(el_residual(&phi, params().theta) < 1e-4);
    }

    #[test]
    fn discrete_functionals_converge_to_branch_values() {
        let p = params();
        let (l_exact, e_exact) = branch_length_energy(p.rho, p.r, BranchSign::Trigonometric).unwrap();
        let coarse = sample_minimizer(4.0, 2001).unwrap();
        let fine = sample_minimizer(4.0, 4001).unwrap();
        let el = [
            (line_length(&coarse) - l_exact).abs(),
            (line_length(&fine) - l_exact).abs(),
        ];
        let ee = [
            (line_energy(&coarse) - e_exact).abs(),
            (line_energy(&fine) - e_exact).abs(),
        ];
        assert!(el[0] / el[1] > 3.5);
        assert!(ee[0] / ee[1] > 3.5);
    }
}
