// Optimized secret-key rate against capacity for eta = 0.8, with error
// target 1e-6 and secrecy target 0.05.

use ppm_wiretap::bounds::{optimize, secrecy_capacity};

pub fn run_example() -> ppm_wiretap::Result<()> {
    println!("{:>6} {:>10} {:>10} {:>12} {:>12} {:>7}", "E", "b", "lambda", "rate", "capacity", "ratio");
    for d in 3..=9 {
        let e = 10f64.powi(-d);
        let o = optimize(0.8, e, 1e-6, 0.05);
        let c = secrecy_capacity(0.8, e);
        let (b, lambda) = o.params.map_or((0, 0), |p| (p.b, if o.feasible { p.lambda } else { 0 }));
        println!(
            "{e:>6.0e} {b:>10} {lambda:>10} {:>12.4e} {c:>12.4e} {:>7.3}",
            o.rate_nats_per_use,
            o.rate_nats_per_use / c
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("rate sweep example");
}
