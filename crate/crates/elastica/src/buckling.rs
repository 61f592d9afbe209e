//! Reduced bifurcation model for a stiff outer shell confining a thinner
//! inner shell with excess preferred length.
//!
//! The competition between compression and ridge formation reduces to the
//! scalar family `e_lambda(s) = (s - 1)^2 + lambda s^(1/3)`: an interior
//! minimum means buckling, a minimum at zero means compression. The
//! critical parameter and the resulting excess-length thresholds are
//! computed here.

use crate::closedform;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Material and geometry inputs in any consistent unit system.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BucklingInput {
    /// Bending modulus (energy * length).
    pub chi_h: f64,
    /// Stretching modulus (energy / length^3).
    pub c_stretch: f64,
    /// Radius of the rigid outer shell.
    pub r_o: f64,
    /// Thickness of the inner shell.
    pub h: f64,
    /// Adhesion strength (energy / length^2); zero disables the adhesive.
    pub alpha_adh: f64,
    /// Preferred excess length of the inner profile.
    pub delta: f64,
}

impl BucklingInput {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("chi_h", self.chi_h),
            ("c_stretch", self.c_stretch),
            ("r_o", self.r_o),
            ("h", self.h),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidInput(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.alpha_adh >= 0.0 && self.alpha_adh.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "alpha_adh must be nonnegative, got {}",
                self.alpha_adh
            )));
        }
        if !(self.delta >= 0.0 && self.delta.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "delta must be nonnegative, got {}",
                self.delta
            )));
        }
        Ok(())
    }

    /// Soft model-validity warnings; the computation proceeds regardless.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.h / self.r_o > 0.1 {
            out.push(format!(
                "thin-shell assumption is doubtful: h/r_o = {:.3} > 0.1",
                self.h / self.r_o
            ));
        }
        if self.alpha_adh > 0.0 {
            if let Ok(dc) = delta_crit(self) {
                if dc > 0.1 * self.r_o {
                    out.push(format!(
                        "adhesive threshold {dc:.4} is not small against r_o; the small-excess asymptotics are invalid in this regime"
                    ));
                }
            }
        }
        out
    }
}

/// Which side of the bifurcation an input falls on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    Compress,
    Buckle,
    BoundaryBand,
}

/// Decision and the associated scalars.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BucklingOutcome {
    pub regime: Regime,
    /// Dimensionless bifurcation parameter.
    pub lambda: f64,
    /// Optimal ridge fraction `t/delta`.
    pub s_star: f64,
    /// Ridge excess length `s_star * delta`.
    pub t_star: f64,
    pub delta_crit: f64,
}

/// Half-width of the indifference band around the critical parameter.
pub const LAMBDA_BAND: f64 = 1e-4;

/// Global minimum of `e_lambda(s) = (s-1)^2 + lambda s^(1/3)` over `s >= 0`,
/// returned as `(s_star, e_star)`.
///
/// The substitution `t = s^(1/3)` turns stationarity into the quintic
/// `6 t^5 - 6 t^2 + lambda = 0`, which removes the singularity at zero.
/// Interior candidates only exist for `lambda < 9 (2/5)^(5/3)`.
pub fn e_lambda_min(lambda: f64) -> (f64, f64) {
    assert!(lambda >= 0.0, "lambda must be nonnegative");
    if lambda == 0.0 {
        return (1.0, 0.0);
    }
    // fold of the quintic at t = (2/5)^(1/3)
    let t_fold = 0.4f64.cbrt();
    let lambda_fold = 6.0 * t_fold * t_fold - 6.0 * t_fold.powi(5);
    if lambda >= lambda_fold {
        return (0.0, 1.0);
    }
    let g = |t: f64| 6.0 * t.powi(5) - 6.0 * t * t + lambda;
    // larger root lies in (t_fold, 1]: g(t_fold) < 0, g(1) = lambda > 0
    let mut lo = t_fold;
    let mut hi = 1.0;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut t = 0.5 * (lo + hi);
    for _ in 0..3 {
        t -= g(t) / (30.0 * t.powi(4) - 12.0 * t);
    }
    let s = t * t * t;
    let e = (s - 1.0) * (s - 1.0) + lambda * t;
    if e < 1.0 {
        (s, e)
    } else {
        (0.0, 1.0)
    }
}

/// Critical `lambda` at which the global minimizer of `e_lambda` jumps from
/// an interior point to zero; bisection on the minimizer switch.
pub fn lambda_critical() -> f64 {
    static LAMBDA0: OnceLock<f64> = OnceLock::new();
    *LAMBDA0.get_or_init(|| {
        let mut lo = 1.0f64;
        let mut hi = 1.95f64;
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            let (_, e) = e_lambda_min(mid);
            if e < 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    })
}

/// Radius of the relaxed outer circle: the minimizer of
/// `(r - l_o)^2 + 4 pi^2 eps_o / r` over `r > 0`.
pub fn outer_radius(l_o: f64, eps_o: f64) -> Result<f64> {
    if !(l_o > 0.0 && eps_o > 0.0) {
        return Err(Error::InvalidInput(format!(
            "outer_radius needs positive inputs, got l_o={l_o}, eps_o={eps_o}"
        )));
    }
    let df = |r: f64| 2.0 * (r - l_o) - 4.0 * PI * PI * eps_o / (r * r);
    // derivative is negative at l_o and positive at the analytic upper bound
    let mut lo = l_o;
    let mut hi = l_o + 2.0 * PI * PI * eps_o / (l_o * l_o);
    while df(hi) < 0.0 {
        hi += 2.0 * PI * PI * eps_o / (l_o * l_o);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if df(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 * l_o.max(1.0) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn adhesive_coefficient(lambda0: f64) -> f64 {
    4.0f64.powf(0.4) * 3.0f64.powf(0.4) * PI.powf(1.6) / (2.0 * lambda0).powf(0.4)
}

/// Critical preferred excess length separating compression (below) from
/// buckling (above); adhesive branch used iff `alpha_adh > 0`.
pub fn delta_crit(input: &BucklingInput) -> Result<f64> {
    input.validate()?;
    let lambda0 = lambda_critical();
    let theta = closedform::params().theta;
    let c = input.c_stretch;
    if input.alpha_adh == 0.0 {
        let base = theta * PI * PI * input.chi_h / (lambda0 * c * input.r_o.powf(7.0 / 3.0));
        Ok(base.powf(0.6) * input.h.powf(1.2))
    } else {
        Ok(adhesive_coefficient(lambda0) * input.chi_h.powf(0.2) / c.powf(0.6)
            / input.r_o.powf(1.4)
            * (input.alpha_adh * input.h).powf(0.4))
    }
}

/// Evaluates the bifurcation parameter for `input.delta` and classifies the
/// regime against the critical parameter with a small dead band.
///
/// The parameter is computed through the closed threshold formula,
/// `lambda = lambda0 (delta_crit / delta)^(5/3)`, which for zero adhesion
/// equals the dimensionless group `Theta eps_i / (r_o^(4/3) delta^(5/3))`
/// exactly and keeps the decision consistent with [`delta_crit`].
pub fn decide(input: &BucklingInput) -> Result<BucklingOutcome> {
    input.validate()?;
    if input.delta <= 0.0 {
        return Err(Error::InvalidInput(
            "regime decision needs a positive excess length delta".into(),
        ));
    }
    let lambda0 = lambda_critical();
    let dc = delta_crit(input)?;
    let lambda = lambda0 * (dc / input.delta).powf(5.0 / 3.0);
    let (s_star, _) = e_lambda_min(lambda);
    let regime = if lambda < lambda0 - LAMBDA_BAND {
        Regime::Buckle
    } else if lambda > lambda0 + LAMBDA_BAND {
        Regime::Compress
    } else {
        Regime::BoundaryBand
    };
    Ok(BucklingOutcome {
        regime,
        lambda,
        s_star,
        t_star: s_star * input.delta,
        delta_crit: dc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_limit() {
        let (s, e) = e_lambda_min(0.0);
        assert_eq!((s, e), (1.0, 0.0));
    }

    #[test]
    fn unit_lambda_has_interior_minimum_below_one() {
        let (s, e) = e_lambda_min(1.0);
        assert!(s > 0.0 && s != 1.0);
        assert!(e < 1.0);
        // e(0) = e(1) = 1 at lambda = 1
        assert_eq!((0.0f64 - 1.0).powi(2) + 1.0 * 0.0, 1.0);
        assert_eq!((1.0f64 - 1.0).powi(2) + 1.0 * 1.0, 1.0);
    }

    #[test]
    fn large_lambda_compresses() {
        let (s, e) = e_lambda_min(2.0);
        assert_eq!((s, e), (0.0, 1.0));
    }

    #[test]
    fn interior_roots_satisfy_stationarity() {
        for lambda in [0.1, 0.5, 0.9, 1.0, 1.02] {
            let (s, _) = e_lambda_min(lambda);
            if s > 0.0 {
                let resid = 2.0 * (s - 1.0) + lambda / 3.0 * s.powf(-2.0 / 3.0);
                assert!(resid.abs() <= 1e-8, "lambda {lambda}: resid {resid}");
            }
        }
    }

    #[test]
    fn minimum_value_is_monotone_in_lambda_and_at_most_one() {
        let mut last = -1.0;
        for i in 0..100 {
            let lambda = 2.0 * i as f64 / 99.0;
            let (_, e) = e_lambda_min(lambda);
            assert!(e <= 1.0 + 1e-14);
            assert!(e >= last - 1e-12, "lambda {lambda}");
            last = e;
        }
    }

    #[test]
    fn critical_lambda_bracket() {
        let l0 = lambda_critical();
        assert!(l0 > 1.0341 && l0 < 1.0342, "lambda0 = {l0}");
        // independent closed form: the switch point solves e = 1, e' = 0
        // simultaneously, which yields s = 4/5 and lambda = (6/5)(4/5)^(2/3)
        let exact = 1.2 * 0.8f64.powf(2.0 / 3.0);
        assert!((l0 - exact).abs() < 1e-9);
        let (s_lo, e_lo) = e_lambda_min(l0 - 1e-3);
        assert!(s_lo > 0.0 && e_lo < 1.0);
        let (s_hi, e_hi) = e_lambda_min(l0 + 1e-3);
        assert_eq!((s_hi, e_hi), (0.0, 1.0));
    }

    #[test]
    fn outer_radius_stationarity_and_bracket() {
        let r = outer_radius(1.0, 0.01).unwrap();
        assert!(r > 1.0 && r < 1.0 + 2.0 * PI * PI * 0.01);
        let d = 2.0 * (r - 1.0) - 4.0 * PI * PI * 0.01 / (r * r);
        assert!(d.abs() < 1e-10, "stationarity {d}");
        // penalty off: radius collapses to the preferred length
        let r0 = outer_radius(1.0, 1e-8).unwrap();
        assert!((r0 - 1.0).abs() < 1e-5);
    }

    #[test]
    fn delta_crit_alpha_zero_coefficient() {
        let input = BucklingInput {
            chi_h: 1.0,
            c_stretch: 1.0,
            r_o: 1.0,
            h: 0.01,
            alpha_adh: 0.0,
            delta: 0.0,
        };
        let dc = delta_crit(&input).unwrap();
        let expected = 33.62 * 0.01f64.powf(1.2);
        assert!((dc - expected).abs() / expected < 0.005, "dc = {dc}");
    }

    #[test]
    fn delta_crit_adhesive_coefficient() {
        let input = BucklingInput {
            chi_h: 1.0,
            c_stretch: 1.0,
            r_o: 1.0,
            h: 0.01,
            alpha_adh: 1e-3,
            delta: 0.0,
        };
        let dc = delta_crit(&input).unwrap();
        let coeff = dc / (1e-3 * 0.01f64).powf(0.4);
        assert!((coeff - 12.61).abs() / 12.61 < 0.005, "coeff = {coeff}");
    }

    #[test]
    fn delta_crit_power_law_in_thickness() {
        let mut input = BucklingInput {
            chi_h: 2.0,
            c_stretch: 3.0,
            r_o: 1.5,
            h: 0.01,
            alpha_adh: 0.0,
            delta: 0.0,
        };
        let d1 = delta_crit(&input).unwrap();
        input.h *= 2.0;
        let d2 = delta_crit(&input).unwrap();
        assert!((d2 / d1 - 2.0f64.powf(1.2)).abs() < 1e-10);
    }

    #[test]
    fn coefficient_identities() {
        let lambda0 = lambda_critical();
        let theta = crate::closedform::params().theta;
        let c1 = (theta * PI * PI / lambda0).powf(0.6);
        assert!((33.4..=33.9).contains(&c1), "c1 = {c1}");
        let c2 = adhesive_coefficient(lambda0);
        assert!((12.55..=12.68).contains(&c2), "c2 = {c2}");
    }

    #[test]
    fn decide_extremes_and_dead_band() {
        let mut input = BucklingInput {
            chi_h: 1.0,
            c_stretch: 1.0,
            r_o: 1.0,
            h: 0.01,
            alpha_adh: 0.0,
            delta: 1.0,
        };
        // delta far above threshold: buckling with a positive ridge
        let out = decide(&input).unwrap();
        assert_eq!(out.regime, Regime::Buckle);
        assert!(out.t_star > 0.0);
        assert!(out.lambda < lambda_critical());

        // delta far below threshold: compression
        input.delta = 1e-4;
        let out = decide(&input).unwrap();
        assert_eq!(out.regime, Regime::Compress);
        assert_eq!(out.t_star, 0.0);

        // exactly at the threshold: inside the dead band
        input.delta = delta_crit(&input).unwrap();
        let out = decide(&input).unwrap();
        assert_eq!(out.regime, Regime::BoundaryBand);

        input.delta = 0.0;
        assert!(decide(&input).is_err());
    }

    #[test]
    fn decision_consistent_with_threshold_for_random_inputs() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(123);
        for _ in 0..100 {
            let input = BucklingInput {
                chi_h: rng.random_range(0.1..10.0),
                c_stretch: rng.random_range(0.1..10.0),
                r_o: rng.random_range(0.5..5.0),
                h: rng.random_range(1e-3..0.05),
                alpha_adh: if rng.random_bool(0.5) {
                    0.0
                } else {
                    rng.random_range(1e-5..1e-2)
                },
                delta: rng.random_range(1e-4..0.5),
            };
            let out = decide(&input).unwrap();
            let dc = delta_crit(&input).unwrap();
            match out.regime {
                Regime::Buckle => assert!(input.delta > dc),
                Regime::Compress => assert!(input.delta < dc),
                Regime::BoundaryBand => {
                    assert!((input.delta / dc - 1.0).abs() < 1e-3)
                }
            }
            // e_star = 1 exactly when the regime is compression
            let (_, e_star) = e_lambda_min(out.lambda);
            if out.regime == Regime::Compress {
                assert_eq!(e_star, 1.0);
            }
        }
    }

    #[test]
    fn thickness_warning() {
        let input = BucklingInput {
            chi_h: 1.0,
            c_stretch: 1.0,
            r_o: 1.0,
            h: 0.2,
            alpha_adh: 0.0,
            delta: 0.1,
        };
        assert!(!input.warnings().is_empty());
    }
}
