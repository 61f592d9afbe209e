use elastica::closedform;
use elastica::functionals::{line_energy, line_length};
use elastica::linesolver::{minimize_theta, minimize_theta_from, LineSolveConfig};

fn props(tag: &str, rep: &elastica::linesolver::SolveReport) {
    let v = rep.minimizer.values();
    let h = rep.minimizer.spacing();
    let support = v.iter().filter(|&&x| x > 1e-12).count() as f64 * h;
    let peak = v.iter().cloned().fold(0.0f64, f64::max);
    let peak_at = v.iter().position(|&x| x == peak).unwrap();
    println!(
        "{tag}: obj {:.5} iters {} conv {} support {:.4} peak {:.4} at x={:.3} L {:.6} E {:.5}",
        rep.objective,
        rep.iterations,
        rep.converged,
        support,
        peak,
        rep.minimizer.node(peak_at),
        line_length(&rep.minimizer),
        line_energy(&rep.minimizer)
    );
}

fn main() {
    let cfg = LineSolveConfig {
        n: 801,
        max_iters: 8000,
        ..Default::default()
    };
    let rep = minimize_theta(&cfg).unwrap();
    props("default", &rep);
    let init = closedform::sample_minimizer(4.0, cfg.n).unwrap();
    let rep2 = minimize_theta_from(&cfg, &init).unwrap();
    props("ubar-init", &rep2);
    println!("theta = {:.5}, 2*r = {:.4}", closedform::params().theta, 2.0 * closedform::params().r);
}
