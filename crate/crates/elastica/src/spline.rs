//! Cubic spline interpolation on uniform and periodic knot sequences.

/// Natural cubic spline through uniformly spaced samples.
///
/// Natural boundary conditions are exact for compactly supported data that
/// vanishes near the interval ends, which is the only use here.
pub struct NaturalSpline {
    lo: f64,
    h: f64,
    y: Vec<f64>,
    m: Vec<f64>, // second derivatives at the knots
}

impl NaturalSpline {
    pub fn new(lo: f64, hi: f64, y: &[f64]) -> Self {
        let n = y.len();
        assert!(n >= 3);
        let h = (hi - lo) / (n - 1) as f64;
        let mut m = vec![0.0; n];
        if n > 2 {
            // Thomas algorithm for the interior tridiagonal system
            let k = n - 2;
            let mut diag = vec![4.0; k];
            let mut rhs: Vec<f64> = (1..n - 1)
                .map(|i| 6.0 * (y[i - 1] - 2.0 * y[i] + y[i + 1]) / (h * h))
                .collect();
            for i in 1..k {
                let w = 1.0 / diag[i - 1];
                diag[i] -= w;
                rhs[i] -= w * rhs[i - 1];
            }
            m[k] = rhs[k - 1] / diag[k - 1];
            for i in (1..k).rev() {
                m[i] = (rhs[i - 1] - m[i + 1]) / diag[i - 1];
            }
        }
        Self {
            lo,
            h,
            y: y.to_vec(),
            m,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.y.len();
        let pos = (x - self.lo) / self.h;
        if pos <= 0.0 {
            return self.y[0];
        }
        if pos >= (n - 1) as f64 {
            return self.y[n - 1];
        }
        let i = pos.floor() as usize;
        let t = pos - i as f64;
        let h = self.h;
        let (y0, y1) = (self.y[i], self.y[i + 1]);
        let (m0, m1) = (self.m[i], self.m[i + 1]);
        let a = 1.0 - t;
        m0 * h * h / 6.0 * (a * a * a - a) + m1 * h * h / 6.0 * (t * t * t - t) + y0 * a + y1 * t
    }
}

/// Periodic cubic spline through knots `(t_i, y_i)` with period `t_end`.
pub struct PeriodicSpline {
    t: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>,
    period: f64,
}

impl PeriodicSpline {
    pub fn new(t: Vec<f64>, y: Vec<f64>, period: f64) -> Self {
        let n = t.len();
        assert!(n >= 3 && y.len() == n && period > t[n - 1]);
        let h: Vec<f64> = (0..n)
            .map(|i| {
                if i + 1 < n {
                    t[i + 1] - t[i]
                } else {
                    period - t[n - 1] + t[0]
                }
            })
            .collect();
        let dy = |i: usize| {
            let yn = if i + 1 < n { y[i + 1] } else { y[0] };
            (yn - y[i]) / h[i]
        };
        let mut a = vec![0.0; n];
        let mut b = vec![0.0; n];
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        for i in 0..n {
            let hm = h[(i + n - 1) % n];
            a[i] = hm;
            b[i] = 2.0 * (hm + h[i]);
            c[i] = h[i];
            d[i] = 6.0 * (dy(i) - dy((i + n - 1) % n));
        }
        let m = solve_cyclic_tridiagonal(&a, &b, &c, &d);
        Self { t, y, m, period }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.t.len();
        let mut s = (x - self.t[0]).rem_euclid(self.period) + self.t[0];
        if s >= self.t[0] + self.period {
            s -= self.period;
        }
        // locate segment by binary search
        let mut i = match self
            .t
            .binary_search_by(|probe| probe.partial_cmp(&s).unwrap())
        {
            Ok(k) => k,
            Err(k) => k.saturating_sub(1),
        };
        if i >= n {
            i = n - 1;
        }
        let t0 = self.t[i];
        let (t1, y1, m1) = if i + 1 < n {
            (self.t[i + 1], self.y[i + 1], self.m[i + 1])
        } else {
            (self.t[0] + self.period, self.y[0], self.m[0])
        };
        let h = t1 - t0;
        let u = (s - t0) / h;
        let a = 1.0 - u;
        self.m[i] * h * h / 6.0 * (a * a * a - a)
            + m1 * h * h / 6.0 * (u * u * u - u)
            + self.y[i] * a
            + y1 * u
    }
}

/// Cyclic tridiagonal solve via Sherman-Morrison on top of the Thomas
/// algorithm; the spline systems are diagonally dominant.
fn solve_cyclic_tridiagonal(a: &[f64], b: &[f64], c: &[f64], d: &[f64]) -> Vec<f64> {
    let n = b.len();
    let gamma = -b[0];
    let mut bb = b.to_vec();
    bb[0] -= gamma;
    bb[n - 1] -= a[0] * c[n - 1] / gamma;
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = c[n - 1];

    let solve = |rhs: &[f64], bb: &[f64]| -> Vec<f64> {
        let mut cp = vec![0.0; n];
        let mut dp = vec![0.0; n];
        cp[0] = c[0] / bb[0];
        dp[0] = rhs[0] / bb[0];
        for i in 1..n {
            let m = bb[i] - a[i] * cp[i - 1];
            cp[i] = if i + 1 < n { c[i] / m } else { 0.0 };
            dp[i] = (rhs[i] - a[i] * dp[i - 1]) / m;
        }
        let mut x = vec![0.0; n];
        x[n - 1] = dp[n - 1];
        for i in (0..n - 1).rev() {
            x[i] = dp[i] - cp[i] * x[i + 1];
        }
        x
    };

    let y = solve(d, &bb);
    let z = solve(&u, &bb);
    let vy = y[0] + a[0] / gamma * y[n - 1];
    let vz = z[0] + a[0] / gamma * z[n - 1];
    let factor = vy / (1.0 + vz);
    (0..n).map(|i| y[i] - factor * z[i]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    #[test]
    fn natural_spline_reproduces_smooth_compactly_supported_data() {
        let n = 201;
        let f = |x: f64| {
            if x.abs() < 1.0 {
                (1.0 - x * x).powi(3)
            } else {
                0.0
            }
        };
        let y: Vec<f64> = (0..n).map(|i| f(-2.0 + 4.0 * i as f64 / (n - 1) as f64)).collect();
        let s = NaturalSpline::new(-2.0, 2.0, &y);
        for k in 0..100 {
            let x = -1.5 + 3.0 * k as f64 / 99.0;
            assert!((s.eval(x) - f(x)).abs() < 2e-6, "at {x}");
        }
    }

    #[test]
    fn periodic_spline_reproduces_sine() {
        let n = 40;
        let t: Vec<f64> = (0..n).map(|i| TAU * i as f64 / n as f64).collect();
        let y: Vec<f64> = t.iter().map(|&s| s.sin() + 0.3 * (2.0 * s).cos()).collect();
        let sp = PeriodicSpline::new(t, y, TAU);
        for k in 0..200 {
            let x = TAU * k as f64 / 200.0;
            let want = x.sin() + 0.3 * (2.0 * x).cos();
            assert!((sp.eval(x) - want).abs() < 5e-5, "at {x}");
        }
        // periodic continuation
        assert!((sp.eval(TAU + 0.3) - sp.eval(0.3)).abs() < 1e-12);
    }
}
