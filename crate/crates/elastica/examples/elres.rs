fn main() {
    let p = elastica::closedform::params();
    for n in [1001usize, 2001, 4001, 8001] {
        let u = elastica::closedform::sample_minimizer(4.0, n).unwrap();
        println!("n={n}: el_residual = {:.6e}", elastica::closedform::el_residual(&u, p.theta));
    }
}
