// One message through extractor inversion, RS encoding, PPM and the lossy
// channel, then a short Monte-Carlo run.

use ppm_wiretap::pipeline::{run_trials, trial_rng, Scheme, SchemeParams};

pub fn run_example() -> ppm_wiretap::Result<()> {
    let p = SchemeParams::new(0.8, 16, 6, 1.2, 16)?;
    let scheme = Scheme::new(&p)?;
    let rec = scheme.transmit(&mut trial_rng(1, 0));
    println!("codeword   {:?}", rec.codeword.0);
    println!(
        "bob sees   {:?}",
        rec.bob_output.0.iter().map(|s| s.map_or(-1, |v| v as i32)).collect::<Vec<_>>()
    );
    println!(
        "eve clicks {}/{}, bob erasures {}, decoded ok: {}",
        rec.eve_record.iter().filter(|r| r.0.is_some()).count(),
        p.n,
        rec.erasures(),
        !rec.is_error()
    );
    let s = run_trials(&p, 20_000, 1, 2)?;
    println!("error rate {:.4} +- {:.4} over {} trials", s.error_rate, s.radius, s.trials);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("end-to-end example");
}
