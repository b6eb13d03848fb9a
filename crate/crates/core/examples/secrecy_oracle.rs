// Exact leakage to a direct-detection eavesdropper on tiny instances,
// next to the analytic secrecy bound.

use ppm_wiretap::bounds::{best_budget, SearchGrid};
use ppm_wiretap::pipeline::{classical_secrecy_oracle, SchemeParams};

pub fn run_example() -> ppm_wiretap::Result<()> {
    println!("eta   k lambda alpha^2   oracle      bound");
    for (eta, k, lambda, alpha_sq) in [(0.8, 2, 1, 0.5), (0.9, 1, 2, 0.5), (0.7, 2, 2, 3.0)] {
        let p = SchemeParams::new(eta, 8, k, alpha_sq, lambda)?;
        let d = classical_secrecy_oracle(&p)?;
        let (_, r) = best_budget(&p, &SearchGrid::default())?;
        println!("{eta:<5} {k} {lambda:>6} {alpha_sq:>7} {d:>9.3e} {:>10.3e}", r.delta_bound);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("secrecy oracle example");
}
