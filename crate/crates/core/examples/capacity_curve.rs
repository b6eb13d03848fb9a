// Secrecy capacity against its low-photon approximation.

use ppm_wiretap::bounds::{secrecy_capacity, secrecy_capacity_approx};

pub fn run_example() -> ppm_wiretap::Result<()> {
    println!("{:>8} {:>14} {:>14} {:>7}", "E", "capacity", "approx", "ratio");
    for d in 1..=12 {
        let e = 10f64.powi(-d);
        let (c, a) = (secrecy_capacity(0.8, e), secrecy_capacity_approx(0.8, e));
        println!("{e:>8.0e} {c:>14.6e} {a:>14.6e} {:>7.4}", a / c);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("capacity example");
}
