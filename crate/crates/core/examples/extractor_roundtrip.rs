// Invert the extractor to spread a message over a long field element, then
// extract it back.

use ppm_wiretap::extractor::{extract, invert, BitString, ExtractorSpec, LocalRandomness, Message, Seed};
use ppm_wiretap::galois::FieldSpec;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> ppm_wiretap::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let field = FieldSpec::with_default_modulus(96)?;
    let spec = ExtractorSpec::new(field.clone(), 40)?;
    let seed = Seed::random(&field, &mut rng);
    let msg = Message(BitString::random(40, &mut rng));
    for _ in 0..3 {
        let r = LocalRandomness(BitString::random(spec.randomness_bits(), &mut rng));
        let l = invert(&msg, &seed, &r, &spec)?;
        let back = extract(&l, &seed, &spec)?;
        println!("L = {:016x}{:016x}.. -> message recovered: {}", l.0.limbs()[1], l.0.limbs()[0], back == msg);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("extractor example");
}
