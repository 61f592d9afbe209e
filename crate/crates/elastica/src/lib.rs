//! Elastic curves confined to the unit disk.
//!
//! The crate is organised around the 1D obstacle problem that governs a
//! closed curve whose length slightly exceeds the circumference of the
//! disk it is confined to:
//!
//! * [`grid`] — sampled functions on intervals and periodic grids, and
//!   sampled curves in 2D/3D,
//! * [`functionals`] — discrete length and bending-energy functionals,
//! * [`closedform`] — the explicit minimizer of the line problem and its
//!   parameter table,
//! * [`linesolver`] — projected-gradient recovery of the energy constant
//!   on the line, with and without a detachment penalty,
//! * [`disksolver`] — the constrained problem in the disk, the excess-length
//!   scaling sweep, and explicit curve constructions,
//! * [`buckling`] — the reduced two-shell bifurcation model,
//! * [`verify`] — named invariant suites used by the CLI.

pub mod buckling;
pub mod closedform;
mod diff;
pub mod disksolver;
mod error;
pub mod functionals;
pub mod grid;
pub mod linesolver;
mod precond;
mod spg;
mod spline;
pub mod verify;

pub use error::{Error, Result};

// test/debug shims, not part of the public surface
#[doc(hidden)]
pub mod precond_debug {
    pub use crate::precond::BandedSpd;
    pub fn template(n: usize, h: f64, sigma: f64) -> BandedSpd {
        crate::precond::energy_hessian_preconditioner(n, h, sigma)
    }
    pub fn factored_masked(m: &BandedSpd, active: &[bool]) -> BandedSpd {
        m.factored_masked(active)
    }
    pub fn solve(m: &BandedSpd, b: &[f64]) -> Vec<f64> {
        m.solve(b)
    }
    pub fn descent(
        x0: Vec<f64>,
        f_and_g: impl FnMut(&[f64], &mut Vec<f64>) -> f64,
        project: impl Fn(&mut Vec<f64>),
        template: &BandedSpd,
        max_iters: usize,
        grad_tol: f64,
    ) -> (Vec<f64>, f64, usize, f64, bool) {
        let res = crate::precond::preconditioned_descent(
            x0,
            f_and_g,
            project,
            template,
            &crate::precond::PgdOptions {
                max_iters,
                grad_tol,
                ..Default::default()
            },
        );
        (res.x, res.f, res.iterations, res.pg_norm, res.converged)
    }
}

#[doc(hidden)]
pub mod linesolver_debug {
    pub fn inner_solve(r: f64, n: usize, max_iters: usize) -> (f64, f64, usize, bool) {
        let cfg = crate::linesolver::LineSolveConfig {
            n,
            ..Default::default()
        };
        let (x, e, iters, conv) =
            crate::linesolver::debug_clamped_unit_length_solve(r, n, &cfg, None, max_iters);
        let h = 2.0 * r / (n - 1) as f64;
        let l = crate::functionals_debug::line_length_grad(&x, h).0;
        (e, (l - 1.0).abs(), iters, conv)
    }
}

#[doc(hidden)]
pub mod functionals_debug {
    pub fn line_energy_grad(values: &[f64], h: f64) -> (f64, Vec<f64>) {
        crate::functionals::line_energy_grad(values, h)
    }
    pub fn line_length_grad(values: &[f64], h: f64) -> (f64, Vec<f64>) {
        crate::functionals::line_length_grad(values, h)
    }
}
