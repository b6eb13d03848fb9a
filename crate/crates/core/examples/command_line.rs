// The `ppmwt` subcommands driven in-process.

use ppm_wiretap::cli::{cmd_capacity, cmd_params, cmd_simulate, config_from_args};

pub fn run_example() -> ppm_wiretap::Result<()> {
    print!("{}", cmd_capacity(&config_from_args(["--E-sweep", "1e-6:1e-4:1"])?)?);
    print!("{}", cmd_params(&config_from_args(["--E", "1e-4", "--theta", "0.1"])?)?);
    let sim = config_from_args(["--b", "8", "--k", "2", "--alpha-sq", "2.0", "--trials", "5000", "--rng-seed", "7"])?;
    print!("{}", cmd_simulate(&sim)?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("command line example");
}
