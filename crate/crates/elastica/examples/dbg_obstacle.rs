fn main() {
    let n = 201;
    let h = 4.0 / (n - 1) as f64;
    let t: Vec<f64> = (0..n)
        .map(|i| {
            let s = -2.0 + i as f64 * h;
            (2.0f64 * s).sin() - 0.3
        })
        .collect();
    let m = elastica::precond_debug::template(n, h, 2.0);
    for iters in [500usize, 2000, 8000, 30000] {
        let tt = t.clone();
        let res = elastica::precond_debug::descent(
            vec![0.0; n],
            move |x, g| {
                let (e, ge) = elastica::functionals_debug::line_energy_grad(x, h);
                let mut f = e;
                for i in 0..n {
                    g[i] = ge[i] + 2.0 * (x[i] - tt[i]);
                    f += (x[i] - tt[i]) * (x[i] - tt[i]);
                }
                f
            },
            |x: &mut Vec<f64>| {
                for v in x.iter_mut() {
                    if *v < 0.0 { *v = 0.0; }
                }
                x[0] = 0.0;
                x[n - 1] = 0.0;
            },
            &m,
            iters,
            1e-9,
        );
        println!("iters {iters}: pg {:.3e} f {:.10} it {} conv {}", res.3, res.1, res.2, res.4);
    }
}
