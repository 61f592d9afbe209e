use elastica::grid::GridFunction;
use elastica::linesolver::{minimize_theta_from, LineSolveConfig};

fn main() {
    let n = 801usize;
    let h = 8.0 / (n - 1) as f64;
    let shape: Vec<f64> = (0..n)
        .map(|i| {
            let x = -4.0 + i as f64 * h;
            (1.0 - (x / 2.0) * (x / 2.0)).max(0.0)
        })
        .collect();
    // same amplitude normalization as the solver default
    let mut cfg = LineSolveConfig { n, ..Default::default() };
    for iters in [50, 100, 200, 400, 800, 1600] {
        cfg.max_iters = iters;
        let init = GridFunction::new(-4.0, 4.0, scale(shape.clone(), h)).unwrap();
        let rep = minimize_theta_from(&cfg, &init).unwrap();
        let v = rep.minimizer.values();
        let mass: f64 = v.iter().sum();
        let com: f64 = v
            .iter()
            .enumerate()
            .map(|(i, x)| x * rep.minimizer.node(i))
            .sum::<f64>()
            / mass;
        println!("iters {iters}: obj {:.5} com {:.4}", rep.objective, com);
    }
}

fn scale(shape: Vec<f64>, h: f64) -> Vec<f64> {
    let n = shape.len();
    let mut a = 0.0;
    let mut b = 0.0;
    let d1: Vec<f64> = (0..n)
        .map(|i| {
            if i == 0 || i == n - 1 {
                0.0
            } else {
                (shape[i + 1] - shape[i - 1]) / (2.0 * h)
            }
        })
        .collect();
    for i in 0..n {
        a += 0.5 * h * d1[i] * d1[i];
        b += h * shape[i];
    }
    let c = (b + (b * b + 4.0 * a).sqrt()) / (2.0 * a);
    shape.into_iter().map(|v| c * v).collect()
}
