use elastica::linesolver_debug::inner_solve;

fn main() {
    let n = 801;
    for r in [0.05f64, 0.0942, 0.1254, 0.2, 0.4, 0.8, 1.6] {
        let (e, lresid, iters, conv) = inner_solve(r, n, 16000);
        let ana = {
            // raised-cosine family upper bound
            let a = (r / std::f64::consts::PI.powi(2))
                * (2.0 * r + (4.0 * r * r + 2.0 * std::f64::consts::PI.powi(2) / r).sqrt());
            a * a * std::f64::consts::PI.powi(4) / r.powi(3)
        };
        println!(
            "r={r:.4}: E={e:.3} (family {ana:.3}) |L-1|={lresid:.2e} iters={iters} conv={conv}"
        );
    }
}
