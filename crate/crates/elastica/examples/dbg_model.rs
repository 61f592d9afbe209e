fn main() {
    let n = 201;
    let h = 4.0 / (n - 1) as f64;
    let b: Vec<f64> = (0..n)
        .map(|i| {
            let t = -2.0 + i as f64 * h;
            (1.0f64 - t * t).max(0.0)
        })
        .collect();
    let m = elastica::precond_debug::template(n, h, 1.0);
    let mut x = vec![0.0; n];
    let mut g = vec![0.0; n];
    let fg = |x: &[f64], g: &mut Vec<f64>| -> f64 {
        let (e, ge) = elastica::functionals_debug::line_energy_grad(x, h);
        let mut f = e;
        for i in 0..n {
            g[i] = ge[i] - b[i];
            f -= b[i] * x[i];
        }
        f
    };
    let project = |x: &mut Vec<f64>| {
        for v in x.iter_mut() {
            if *v < 0.0 { *v = 0.0; }
        }
        x[0] = 0.0;
        x[n - 1] = 0.0;
    };
    let mut f = fg(&x, &mut g);
    let mut step = 1.0f64;
    for k in 0..40 {
        let active: Vec<bool> = (0..n).map(|i| x[i] <= 0.0 && g[i] > 0.0).collect();
        let mm = elastica::precond_debug::factored_masked(&m, &active);
        let d = elastica::precond_debug::solve(&mm, &g);
        let gtd: f64 = g.iter().zip(&d).map(|(a, c)| a * c).sum();
        let mut s = (step * 2.0).min(1e6);
        let mut accepted = false;
        let mut tried = 0;
        loop {
            let mut xn = x.clone();
            for i in 0..n { xn[i] -= s * d[i]; }
            project(&mut xn);
            let mut gn = vec![0.0; n];
            let fn_ = fg(&xn, &mut gn);
            let gd: f64 = g.iter().zip(xn.iter().zip(&x)).map(|(gi, (a, bb))| gi * (a - bb)).sum();
            if fn_ <= f + 1e-4 * gd && fn_.is_finite() {
                x = xn; g = gn; f = fn_; step = s; accepted = true;
                break;
            }
            tried += 1;
            s *= 0.5;
            if s < 1e-14 { break; }
        }
        println!("k={k} f={f:.6e} gtd={gtd:.3e} s={s:.2e} tried={tried} acc={accepted} xmax={:.3}", x.iter().cloned().fold(0.0f64, f64::max));
        if !accepted { break; }
    }
}
