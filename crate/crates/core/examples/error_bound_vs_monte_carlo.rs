// Exact erasure-tail bound against simulated decoding errors.

use ppm_wiretap::bounds::{hoeffding_error_bound, hoeffding_error_bound_for, pr_error_bound};
use ppm_wiretap::pipeline::{run_trials, SchemeParams};

pub fn run_example() -> ppm_wiretap::Result<()> {
    let (eta, theta) = (0.8, 0.1);
    println!("   b    q   k  simulated  +-3sigma   I_q bound  e^-2n.th^2  corrected");
    for b in [8u64, 16, 32] {
        for q in [0.3f64, 0.6] {
            let n = b - 1;
            let k = ((1.0 - theta) * (1.0 - q) * n as f64).floor() as u64;
            let p = SchemeParams::new(eta, b, k, -q.ln() / eta, 1)?;
            let s = run_trials(&p, 20_000, 5, 1)?;
            println!(
                "{b:>4} {q:>4} {k:>3} {:>10.5} {:>9.5} {:>11.5} {:>11.5} {:>10.5}",
                s.error_rate,
                s.radius,
                pr_error_bound(n, k, q),
                hoeffding_error_bound(n, theta),
                hoeffding_error_bound_for(n, theta, q)
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("error bound example");
}
