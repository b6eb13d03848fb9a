// Encode over GF(16), erase as many symbols as the code tolerates and one
// more.

use ppm_wiretap::rscode::{ErasureWord, RsCode};

pub fn run_example() -> ppm_wiretap::Result<()> {
    let code = RsCode::new(4, 5)?;
    let msg = vec![1, 7, 0, 12, 3];
    let c = code.encode(&msg)?;
    println!("({}, {}) code, codeword {:?}", code.n(), code.k(), c.0);

    let mut y = ErasureWord::from(&c);
    for i in (0..code.n()).map(|i| i * 7 % code.n()).take(code.n() - code.k()) {
        y.0[i] = None;
    }
    println!("{} erasures -> {:?}", y.erasures(), code.decode_erasures(&y)?);

    let first_kept = y.0.iter().position(Option::is_some).unwrap();
    y.0[first_kept] = None;
    match code.decode_erasures(&y) {
        Ok(_) => println!("unexpectedly decoded"),
        Err(e) => println!("{} erasures -> {e}", y.erasures()),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("reed-solomon example");
}
