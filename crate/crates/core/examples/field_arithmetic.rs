// Arithmetic in GF(2^m): the small lookup-table field used for code symbols
// and the wide carry-less field used by the extractor.

use ppm_wiretap::galois::{gf_inv, gf_mul, gf_pow, FieldSpec, SymbolField};

pub fn run_example() -> ppm_wiretap::Result<()> {
    let f = FieldSpec::from_modulus(3, 0b1011)?;
    let a = f.element(0b010)?;
    let b = f.element(0b011)?;
    println!("GF(8): 010 * 011 = {:03b}", gf_mul(&a, &b)?.to_u64().unwrap());
    println!("GF(8): 011^-1   = {:03b}", gf_inv(&b)?.to_u64().unwrap());

    let wide = FieldSpec::with_default_modulus(246)?;
    let x = wide.element(0xdead_beef)?;
    let y = gf_pow(&x, (1u64 << 62) - 1);
    println!("GF(2^246) modulus has {} nonzero limbs", wide.modulus().iter().filter(|&&w| w != 0).count());
    println!("x * x^-1 is one: {}", gf_mul(&x, &gf_inv(&x)?)?.is_one());
    println!("x^(2^62 - 1) is nonzero: {}", !y.is_zero());

    let sym = SymbolField::new(6)?;
    println!(
        "GF(64) generator {} has order {}: g^63 = {}",
        sym.generator(),
        sym.order(),
        sym.exp(sym.order())
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("field arithmetic example");
}
