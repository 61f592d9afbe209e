use elastica::grid::GridFunction;
use elastica::linesolver::{minimize_theta_from, LineSolveConfig};

fn main() {
    let n = 801usize;
    let h = 8.0 / (n - 1) as f64;
    let cfg = LineSolveConfig { n, max_iters: 8000, ..Default::default() };
    for w in [1.0f64, 1.2, 1.4, 1.6, 1.8, 2.0, 2.4] {
        let shape: Vec<f64> = (0..n)
            .map(|i| {
                let x: f64 = -4.0 + i as f64 * h;
                (1.0 - (x / w) * (x / w)).max(0.0)
            })
            .collect();
        // amplitude -> L = 1
        let d1: Vec<f64> = (0..n)
            .map(|i| {
                if i == 0 || i == n - 1 { 0.0 } else { (shape[i + 1] - shape[i - 1]) / (2.0 * h) }
            })
            .collect();
        let a: f64 = d1.iter().map(|v| 0.5 * h * v * v).sum();
        let b: f64 = shape.iter().map(|v| h * v).sum();
        let c = (b + (b * b + 4.0 * a).sqrt()) / (2.0 * a);
        let init = GridFunction::new(-4.0, 4.0, shape.iter().map(|v| c * v).collect()).unwrap();
        let rep = minimize_theta_from(&cfg, &init).unwrap();
        println!("w={w}: amp {:.3} obj {:.5} iters {} conv {}", c, rep.objective, rep.iterations, rep.converged);
    }
}
