//! Spectral projected gradient descent over a closed convex set.
//!
//! Barzilai-Borwein steps with the nonmonotone Grippo-Lampariello-Lucidi
//! line search. The feasible set is supplied as a projection callback;
//! objectives may return infinity to veto a trial point.

pub struct SpgOptions {
    pub max_iters: usize,
    /// Convergence on the sup norm of `P(x - g) - x`.
    pub grad_tol: f64,
    /// Nonmonotone memory length.
    pub memory: usize,
    pub step_min: f64,
    pub step_max: f64,
    /// Fixed step size instead of Barzilai-Borwein + line search.
    pub fixed_step: Option<f64>,
}

impl Default for SpgOptions {
    fn default() -> Self {
        Self {
            max_iters: 20_000,
            grad_tol: 1e-8,
            memory: 10,
            step_min: 1e-12,
            step_max: 1e12,
            fixed_step: None,
        }
    }
}

pub struct SpgResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub iterations: usize,
    pub converged: bool,
    pub pg_norm: f64,
}

/// Minimizes `f` over `{x : x = project(x)}`.
///
/// `f_and_g` evaluates the objective and fills the gradient; `project` maps
/// its argument onto the feasible set in place.
pub fn spg(
    x0: Vec<f64>,
    mut f_and_g: impl FnMut(&[f64], &mut Vec<f64>) -> f64,
    project: impl Fn(&mut Vec<f64>),
    opts: &SpgOptions,
) -> SpgResult {
    let n = x0.len();
    let mut x = x0;
    project(&mut x);
    let mut g = vec![0.0; n];
    let mut f = f_and_g(&x, &mut g);
    let mut history = vec![f; opts.memory.max(1)];
    let mut step = opts.fixed_step.unwrap_or(1.0);
    let mut iterations = 0;
    let mut pg_norm = f64::INFINITY;

    for k in 0..opts.max_iters {
        iterations = k + 1;

        // projected gradient stopping measure at unit step
        let mut probe = x.clone();
        for i in 0..n {
            probe[i] -= g[i];
        }
        project(&mut probe);
        pg_norm = probe
            .iter()
            .zip(&x)
            .map(|(p, xi)| (p - xi).abs())
            .fold(0.0, f64::max);
        if pg_norm <= opts.grad_tol {
            return SpgResult {
                x,
                f,
                iterations,
                converged: true,
                pg_norm,
            };
        }

        let f_ref = history.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut lambda = step.clamp(opts.step_min, opts.step_max);
        let mut accepted = false;
        let mut x_new = Vec::new();
        let mut g_new = vec![0.0; n];
        let mut f_new = f64::INFINITY;

        for _ in 0..60 {
            x_new = x.clone();
            for i in 0..n {
                x_new[i] -= lambda * g[i];
            }
            project(&mut x_new);
            let d2: f64 = x_new
                .iter()
                .zip(&x)
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            if d2 == 0.0 {
                break;
            }
            f_new = f_and_g(&x_new, &mut g_new);
            let gd: f64 = g
                .iter()
                .zip(x_new.iter().zip(&x))
                .map(|(gi, (a, b))| gi * (a - b))
                .sum();
            if opts.fixed_step.is_some() || f_new <= f_ref + 1e-4 * gd {
                accepted = true;
                break;
            }
            lambda *= 0.5;
            if lambda < opts.step_min {
                break;
            }
        }
        if !accepted {
            break;
        }

        // Barzilai-Borwein step for the next iteration
        if opts.fixed_step.is_none() {
            let mut sty = 0.0;
            let mut sts = 0.0;
            for i in 0..n {
                let s = x_new[i] - x[i];
                let y = g_new[i] - g[i];
                sty += s * y;
                sts += s * s;
            }
            step = if sty > 0.0 {
                (sts / sty).clamp(opts.step_min, opts.step_max)
            } else {
                opts.step_max.min(lambda * 10.0)
            };
        }

        x = x_new;
        g = g_new;
        f = f_new;
        let slot = k % history.len();
        history[slot] = f;
    }

    SpgResult {
        x,
        f,
        iterations,
        converged: pg_norm <= opts.grad_tol,
        pg_norm,
    }
}
