//! Banded SPD Cholesky factorization and a preconditioned projected
//! descent loop for the stiff fourth-order line problems.
//!
//! Plain gradient steps on `int (phi'')^2` stall: the discrete operator has
//! condition `O(h^-4)`. Solving `(sigma I + H_E) d = g` with the banded
//! energy Hessian turns the quotient descent into a well-scaled iteration;
//! the nonnegativity projection stays the plain clamp.

use crate::diff;

/// Symmetric banded matrix in lower form: `entry(i, i - d)` for `d <= p`.
pub struct BandedSpd {
    n: usize,
    p: usize,
    /// Cholesky factor in the same layout after `factor`.
    band: Vec<f64>,
}

impl Clone for BandedSpd {
    fn clone(&self) -> Self {
        Self {
            n: self.n,
            p: self.p,
            band: self.band.clone(),
        }
    }
}

impl BandedSpd {
    pub fn zeros(n: usize, p: usize) -> Self {
        Self {
            n,
            p,
            band: vec![0.0; n * (p + 1)],
        }
    }

    #[inline]
    fn idx(&self, i: usize, d: usize) -> usize {
        i * (self.p + 1) + d
    }

    /// Diagonal of the (unfactored) matrix.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.band[self.idx(i, 0)]).collect()
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
        let d = hi - lo;
        assert!(d <= self.p, "entry ({i}, {j}) outside the band");
        let k = self.idx(hi, d);
        self.band[k] += v;
    }

    /// In-place `L L^T` factorization; panics if the matrix is not SPD.
    pub fn factor(&mut self) {
        let (n, p) = (self.n, self.p);
        for i in 0..n {
            let jmin = i.saturating_sub(p);
            for j in jmin..=i {
                let mut s = self.band[self.idx(i, i - j)];
                let kmin = jmin.max(j.saturating_sub(p));
                for k in kmin..j {
                    s -= self.band[self.idx(i, i - k)] * self.band[self.idx(j, j - k)];
                }
                if i == j {
                    assert!(s > 0.0, "matrix is not positive definite at row {i}");
                    let k = self.idx(i, 0);
                    self.band[k] = s.sqrt();
                } else {
                    let diag = self.band[self.idx(j, 0)];
                    let k = self.idx(i, i - j);
                    self.band[k] = s / diag;
                }
            }
        }
    }

    /// Copy with rows and columns of `active` nodes decoupled (diagonal
    /// kept), then factored. Gives the two-metric direction: the inverse
    /// acts as `M_FF^-1` on free nodes and as diagonal scaling on active
    /// ones.
    pub fn factored_masked(&self, active: &[bool]) -> BandedSpd {
        let mut m = self.clone();
        for i in 0..m.n {
            for d in 1..=m.p.min(i) {
                let j = i - d;
                if active[i] || active[j] {
                    let k = m.idx(i, d);
                    m.band[k] = 0.0;
                }
            }
        }
        m.factor();
        m
    }

    /// Solves `L L^T x = b` after [`factor`](Self::factor).
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let (n, p) = (self.n, self.p);
        let mut x = b.to_vec();
        for i in 0..n {
            let jmin = i.saturating_sub(p);
            let mut s = x[i];
            for j in jmin..i {
                s -= self.band[self.idx(i, i - j)] * x[j];
            }
            x[i] = s / self.band[self.idx(i, 0)];
        }
        for i in (0..n).rev() {
            let jmax = (i + p).min(n - 1);
            let mut s = x[i];
            for j in i + 1..=jmax {
                s -= self.band[j * (p + 1) + (j - i)] * x[j];
            }
            x[i] = s / self.band[self.idx(i, 0)];
        }
        x
    }
}

/// `sigma I + 2 h D2^T W D2`, the Hessian of the discrete bending energy
/// shifted to stay positive definite, factored and ready to solve.
pub fn energy_hessian_preconditioner(n: usize, h: f64, sigma: f64) -> BandedSpd {
    let w = diff::trapezoid_weights(n);
    let mut m = BandedSpd::zeros(n, 3);
    for i in 0..n {
        m.add(i, i, sigma);
    }
    let h2 = h * h;
    // assemble row by row of D2; one-sided stencils at the ends
    let mut row: Vec<(usize, f64)> = Vec::with_capacity(4);
    for k in 0..n {
        row.clear();
        if k == 0 {
            row.extend_from_slice(&[(0, 2.0 / h2), (1, -5.0 / h2), (2, 4.0 / h2), (3, -1.0 / h2)]);
        } else if k == n - 1 {
            row.extend_from_slice(&[
                (n - 1, 2.0 / h2),
                (n - 2, -5.0 / h2),
                (n - 3, 4.0 / h2),
                (n - 4, -1.0 / h2),
            ]);
        } else {
            row.extend_from_slice(&[(k - 1, 1.0 / h2), (k, -2.0 / h2), (k + 1, 1.0 / h2)]);
        }
        let scale = 2.0 * h * w[k];
        for &(i, ci) in &row {
            for &(j, cj) in &row {
                if i >= j {
                    m.add(i, j, scale * ci * cj);
                }
            }
        }
    }
    m
}

pub struct PgdOptions {
    pub max_iters: usize,
    /// Convergence on the sup norm of `P(x - g) - x`.
    pub grad_tol: f64,
    pub memory: usize,
}

impl Default for PgdOptions {
    fn default() -> Self {
        Self {
            max_iters: 4000,
            grad_tol: 1e-8,
            memory: 8,
        }
    }
}

/// Rank-one augmentation `M + weight u u^T` of the banded preconditioner,
/// solved with the Sherman-Morrison identity. Used for penalty terms whose
/// Hessian is a stiff rank-one outer product.
pub struct RankOneUpdate {
    pub u: Vec<f64>,
    pub weight: f64,
}

pub struct PgdResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub iterations: usize,
    pub converged: bool,
    pub pg_norm: f64,
}

/// Projected descent along two-metric preconditioned directions with a
/// nonmonotone Armijo line search. `template` is the unfactored shifted
/// energy Hessian; nodes sitting on the obstacle with an outward gradient
/// are decoupled from the solve so the direction stays a descent direction
/// after clamping.
pub fn preconditioned_descent(
    x0: Vec<f64>,
    f_and_g: impl FnMut(&[f64], &mut Vec<f64>) -> f64,
    project: impl Fn(&mut Vec<f64>),
    template: &BandedSpd,
    opts: &PgdOptions,
) -> PgdResult {
    preconditioned_descent_r1(x0, f_and_g, project, template, |_| None, opts)
}

/// [`preconditioned_descent`] with an iterate-dependent rank-one update of
/// the preconditioner.
pub fn preconditioned_descent_r1(
    x0: Vec<f64>,
    mut f_and_g: impl FnMut(&[f64], &mut Vec<f64>) -> f64,
    project: impl Fn(&mut Vec<f64>),
    template: &BandedSpd,
    mut rank_one: impl FnMut(&[f64]) -> Option<RankOneUpdate>,
    opts: &PgdOptions,
) -> PgdResult {
    let n = x0.len();
    let mut x = x0;
    project(&mut x);
    let mut g = vec![0.0; n];
    let mut f = f_and_g(&x, &mut g);
    let mut history = vec![f; opts.memory.max(1)];
    let mut step = 1.0f64;
    let mut pg_norm = f64::INFINITY;
    let mut iterations = 0;

    let mut active = vec![false; n];
    let mut eps_active = 1e-3;
    let diag = template.diagonal();
    for k in 0..opts.max_iters {
        iterations = k + 1;

        // epsilon-active set: nodes at or slightly above the obstacle that
        // the gradient presses outward are handled diagonally, which keeps
        // coupled directions from punching mid-sized nodes through zero
        for i in 0..n {
            active[i] = x[i] <= eps_active && g[i] > 0.0;
        }
        let m = template.factored_masked(&active);
        let d = match rank_one(&x) {
            None => m.solve(&g),
            Some(r1) => {
                let mut u = r1.u;
                for i in 0..n {
                    if active[i] {
                        u[i] = 0.0;
                    }
                }
                let minv_g = m.solve(&g);
                let minv_u = m.solve(&u);
                let beta = 1.0 + r1.weight * u.iter().zip(&minv_u).map(|(a, b)| a * b).sum::<f64>();
                let coef = r1.weight * u.iter().zip(&minv_g).map(|(a, b)| a * b).sum::<f64>() / beta;
                (0..n).map(|i| minv_g[i] - coef * minv_u[i]).collect()
            }
        };
        let gtd: f64 = g.iter().zip(&d).map(|(a, b)| a * b).sum();
        let mut probe = x.clone();
        for i in 0..n {
            probe[i] -= d[i];
        }
        project(&mut probe);
        pg_norm = probe
            .iter()
            .zip(&x)
            .map(|(p, xi)| (p - xi).abs())
            .fold(0.0, f64::max);
        if pg_norm <= opts.grad_tol {
            return PgdResult {
                x,
                f,
                iterations,
                converged: true,
                pg_norm,
            };
        }
        // expected decrease below the floating-point resolution of f:
        // no representable progress is left along this direction
        if gtd.abs() < 1e-13 * (1.0 + f.abs()) {
            break;
        }
        let f_ref = history.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let slack = 4.0 * f64::EPSILON * (1.0 + f_ref.abs());
        let mut search = |dir: &[f64], s0: f64, g: &[f64], x: &[f64]| {
            let mut s = s0;
            let mut g_new = vec![0.0; n];
            for _ in 0..70 {
                let mut x_new = x.to_vec();
                for i in 0..n {
                    x_new[i] -= s * dir[i];
                }
                project(&mut x_new);
                let moved: f64 = x_new
                    .iter()
                    .zip(x)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum();
                if moved == 0.0 {
                    return None;
                }
                let f_new = f_and_g(&x_new, &mut g_new);
                let gd: f64 = g
                    .iter()
                    .zip(x_new.iter().zip(x))
                    .map(|(gi, (a, b))| gi * (a - b))
                    .sum();
                if f_new <= f_ref + 1e-4 * gd + slack && f_new.is_finite() {
                    return Some((x_new, g_new, f_new, s));
                }
                s *= 0.5;
                if s < 1e-14 {
                    return None;
                }
            }
            None
        };

        let mut outcome = search(&d, (step * 2.0).clamp(1e-14, 1e6), &g, &x);
        if outcome.is_none() {
            // fall back to the diagonally scaled gradient, which cannot be
            // derailed by the pinned/free interface of the banded solve
            let dd: Vec<f64> = (0..n).map(|i| g[i] / diag[i]).collect();
            outcome = search(&dd, 1.0, &g, &x);
        }
        let Some((x_new, g_new, f_new, s)) = outcome else {
            break;
        };
        step = s;
        x = x_new;
        g = g_new;
        f = f_new;
        let slot = k % history.len();
        history[slot] = f;
        eps_active = pg_norm.min(1e-3);
    }

    PgdResult {
        x,
        f,
        iterations,
        converged: pg_norm <= opts.grad_tol,
        pg_norm,
    }
}
