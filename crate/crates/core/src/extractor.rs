//! Finite-field strong extractor and its inverter.
//!
//! `extract(l, s)` keeps the `lambda` most significant bits (coefficients of
//! `x^{m-1} .. x^{m-lambda}`) of the field product `l * s`. The inverter places
//! the message in those top bits, fills the rest with local randomness and
//! divides by the seed, so for a fixed message and seed it enumerates the
//! pre-image set exactly once per randomness value.
//!
//! Seeds are drawn from the nonzero elements only: `extract(., 0)` is
//! constant and the inverter would have to divide by zero.

use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::galois::{gf_inv, gf_mul, poly, FieldElement, FieldSpec};

/// Fixed-length bit string. The first bit is the most significant bit of the
/// stored integer, so `value < 2^len`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BitString {
    len: usize,
    value: Vec<u64>,
}

impl BitString {
    pub fn new(len: usize, value: Vec<u64>) -> Result<Self> {
        let mut value = value;
        poly::trim(&mut value);
        if let Some(d) = poly::degree(&value) {
            if d >= len {
                return Err(Error::usage(format!(
                    "value needs {} bits, string has {len}",
                    d + 1
                )));
            }
        }
        value.resize(len.div_ceil(64), 0);
        Ok(BitString { len, value })
    }

    pub fn from_u64(len: usize, value: u64) -> Result<Self> {
        Self::new(len, vec![value])
    }

    pub fn empty() -> Self {
        BitString {
            len: 0,
            value: Vec::new(),
        }
    }

    /// Builds a string from bits in reading order (first = most significant).
    pub fn from_bits(bits: &[bool]) -> Self {
        let len = bits.len();
        let mut value = vec![0u64; len.div_ceil(64)];
        for (i, &b) in bits.iter().enumerate() {
            if b {
                let pos = len - 1 - i;
                value[pos / 64] |= 1 << (pos % 64);
            }
        }
        BitString { len, value }
    }

    pub fn to_bits(&self) -> Vec<bool> {
        (0..self.len)
            .map(|i| poly::get_bit(&self.value, self.len - 1 - i))
            .collect()
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        let mut value: Vec<u64> = (0..len.div_ceil(64)).map(|_| rng.gen()).collect();
        poly::truncate_bits(&mut value, len);
        BitString { len, value }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn limbs(&self) -> &[u64] {
        &self.value
    }

    pub fn to_u64(&self) -> Option<u64> {
        match self.value.as_slice() {
            [] => Some(0),
            [v] => Some(*v),
            _ => None,
        }
    }
}

/// The message `M`: exactly `lambda` bits.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Message(pub BitString);

/// Alice's local randomness `R`: exactly `m - lambda` bits.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LocalRandomness(pub BitString);

/// The long string `L`, an element of the extractor field.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SourceWord(pub FieldElement);

/// A nonzero extractor seed.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Seed(FieldElement);

impl Seed {
    pub fn new(value: FieldElement) -> Result<Self> {
        if value.is_zero() {
            return Err(Error::domain("extractor seed must be nonzero"));
        }
        Ok(Seed(value))
    }

    /// Uniform over the nonzero field elements.
    pub fn random<R: Rng + ?Sized>(field: &Arc<FieldSpec>, rng: &mut R) -> Self {
        loop {
            let v = field.random_element(rng);
            if !v.is_zero() {
                return Seed(v);
            }
        }
    }

    pub fn value(&self) -> &FieldElement {
        &self.0
    }
}

#[derive(Clone, Debug)]
pub struct ExtractorSpec {
    field: Arc<FieldSpec>,
    lambda: usize,
}

impl ExtractorSpec {
    pub fn new(field: Arc<FieldSpec>, lambda: usize) -> Result<Self> {
        if lambda > field.degree() {
            return Err(Error::usage(format!(
                "output length {lambda} exceeds field degree {}",
                field.degree()
            )));
        }
        Ok(ExtractorSpec { field, lambda })
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    /// Output length in bits.
    pub fn lambda(&self) -> usize {
        self.lambda
    }

    /// Input length in bits.
    pub fn input_bits(&self) -> usize {
        self.field.degree()
    }

    pub fn randomness_bits(&self) -> usize {
        self.field.degree() - self.lambda
    }
}

/// Top `lambda` bits of `l * s`.
pub fn extract(l: &SourceWord, s: &Seed, spec: &ExtractorSpec) -> Result<Message> {
    let product = gf_mul(&l.0, &s.0)?;
    let shift = spec.input_bits() - spec.lambda;
    let top = poly::shr(product.limbs(), shift);
    Ok(Message(BitString::new(spec.lambda, top)?))
}

/// `(m || r) * s^{-1}`: a pre-image of `m` under seed `s`, selected by `r`.
pub fn invert(
    m: &Message,
    s: &Seed,
    r: &LocalRandomness,
    spec: &ExtractorSpec,
) -> Result<SourceWord> {
    if m.0.len() != spec.lambda {
        return Err(Error::usage(format!(
            "message has {} bits, extractor outputs {}",
            m.0.len(),
            spec.lambda
        )));
    }
    if r.0.len() != spec.randomness_bits() {
        return Err(Error::usage(format!(
            "local randomness has {} bits, expected {}",
            r.0.len(),
            spec.randomness_bits()
        )));
    }
    let mut packed = r.0.limbs().to_vec();
    poly::xor_shl(&mut packed, m.0.limbs(), spec.randomness_bits());
    let concat = spec.field.element_from_limbs(packed)?;
    let s_inv = gf_inv(&s.0)?;
    Ok(SourceWord(gf_mul(&concat, &s_inv)?))
}

/// Total variation distance between a joint distribution of (message, side
/// information) and uniform-message x side-information marginal.
///
/// `joint[z][m]` is the probability of side information `z` and message `m`.
pub fn statistical_distance_to_uniform(joint: &[Vec<f64>]) -> Result<f64> {
    let width = joint.first().map_or(0, Vec::len);
    if width == 0 || joint.iter().any(|row| row.len() != width) {
        return Err(Error::domain("joint distribution must be a non-empty matrix"));
    }
    let mut total = 0.0;
    for &p in joint.iter().flatten() {
        if !(p >= 0.0) {
            return Err(Error::domain("negative or NaN probability"));
        }
        total += p;
    }
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::domain(format!("distribution sums to {total}, not 1")));
    }
    let uniform = 1.0 / width as f64;
    let mut dist = 0.0;
    for row in joint {
        let marginal: f64 = row.iter().sum();
        dist += row.iter().map(|&p| (p - marginal * uniform).abs()).sum::<f64>();
    }
    Ok(0.5 * dist)
}

/// Joint distribution of (seed, extractor output) when `L` has the given
/// distribution (indexed by field value) and the seed is uniform over
/// nonzero elements. Rows are seeds `1..2^m`, columns messages. Only for
/// fields of at most 20 bits.
pub fn output_distribution(source: &[f64], spec: &ExtractorSpec) -> Result<Vec<Vec<f64>>> {
    let m = spec.input_bits();
    if m > 20 || source.len() != 1 << m {
        return Err(Error::usage(
            "source distribution must cover GF(2^m) with m <= 20",
        ));
    }
    let seeds = (1u64 << m) - 1;
    let mut joint = vec![vec![0.0; 1 << spec.lambda]; seeds as usize];
    for s in 1..=seeds {
        let seed = Seed::new(spec.field.element(s)?)?;
        for (l, &p) in source.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let word = SourceWord(spec.field.element(l as u64)?);
            let msg = extract(&word, &seed, spec)?.0.to_u64().unwrap();
            joint[s as usize - 1][msg as usize] += p / seeds as f64;
        }
    }
    Ok(joint)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;

    fn gf8() -> Arc<FieldSpec> {
        FieldSpec::from_modulus(3, 0b1011).unwrap()
    }

    fn word(f: &Arc<FieldSpec>, v: u64) -> SourceWord {
        SourceWord(f.element(v).unwrap())
    }

    fn seed(f: &Arc<FieldSpec>, v: u64) -> Seed {
        Seed::new(f.element(v).unwrap()).unwrap()
    }

    #[test]
    fn bitstring_order_is_msb_first() {
        let b = BitString::from_bits(&[true, false, false]);
        assert_eq!(b.to_u64(), Some(0b100));
        assert_eq!(b.to_bits(), vec![true, false, false]);
        assert!(BitString::from_u64(2, 4).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let r = BitString::random(130, &mut rng);
        assert_eq!(BitString::from_bits(&r.to_bits()), r);
    }

    #[test]
    fn identity_seed_returns_top_bits() {
        let f = FieldSpec::with_default_modulus(6).unwrap();
        let spec = ExtractorSpec::new(f.clone(), 4).unwrap();
        for l in 0..64 {
            let m = extract(&word(&f, l), &seed(&f, 1), &spec).unwrap();
            assert_eq!(m.0.to_u64(), Some(l >> 2));
        }
    }

    #[test]
    fn zero_lambda_gives_empty_message() {
        let f = gf8();
        let spec = ExtractorSpec::new(f.clone(), 0).unwrap();
        let m = extract(&word(&f, 5), &seed(&f, 3), &spec).unwrap();
        assert!(m.0.is_empty());
    }

    #[test]
    fn worked_example_gf8() {
        let f = gf8();
        let spec = ExtractorSpec::new(f.clone(), 1).unwrap();
        let m = extract(&word(&f, 0b010), &seed(&f, 0b011), &spec).unwrap();
        assert_eq!(m.0.to_bits(), vec![true]);
    }

    #[test]
    fn lambda_above_degree_rejected() {
        assert!(ExtractorSpec::new(gf8(), 4).is_err());
    }

    #[test]
    fn zero_seed_rejected() {
        let f = gf8();
        assert!(matches!(Seed::new(f.zero()), Err(Error::Domain(_))));
    }

    #[test]
    fn invert_checks_lengths() {
        let f = gf8();
        let spec = ExtractorSpec::new(f.clone(), 1).unwrap();
        let m = Message(BitString::from_u64(2, 1).unwrap());
        let r = LocalRandomness(BitString::from_u64(2, 0).unwrap());
        assert!(invert(&m, &seed(&f, 3), &r, &spec).is_err());
    }

    #[test]
    fn full_length_output_is_unique_preimage() {
        let f = gf8();
        let spec = ExtractorSpec::new(f.clone(), 3).unwrap();
        let s = seed(&f, 0b011);
        let s_inv = gf_inv(s.value()).unwrap();
        for v in 0..8 {
            let m = Message(BitString::from_u64(3, v).unwrap());
            let l = invert(&m, &s, &LocalRandomness(BitString::empty()), &spec).unwrap();
            assert_eq!(l.0, gf_mul(&f.element(v).unwrap(), &s_inv).unwrap());
        }
    }

    #[test]
    fn preimages_enumerated_by_randomness_gf8() {
        let f = gf8();
        let spec = ExtractorSpec::new(f.clone(), 1).unwrap();
        let s = seed(&f, 0b011);
        for bit in 0..2u64 {
            let m = Message(BitString::from_u64(1, bit).unwrap());
            let brute: HashSet<u64> = (0..8)
                .filter(|&l| extract(&word(&f, l), &s, &spec).unwrap() == m)
                .collect();
            let mut got = Vec::new();
            for r in 0..4 {
                let r = LocalRandomness(BitString::from_u64(2, r).unwrap());
                got.push(invert(&m, &s, &r, &spec).unwrap().0.to_u64().unwrap());
            }
            assert_eq!(got.len(), 4);
            assert_eq!(got.iter().copied().collect::<HashSet<_>>(), brute);
        }
    }

    #[test]
    fn round_trip_and_bijectivity_exhaustive() {
        for m_bits in 1..=8usize {
            let f = FieldSpec::with_default_modulus(m_bits).unwrap();
            for lambda in 0..=m_bits {
                let spec = ExtractorSpec::new(f.clone(), lambda).unwrap();
                for s in 1..(1u64 << m_bits) {
                    let s = seed(&f, s);
                    for msg in 0..(1u64 << lambda) {
                        let message = Message(BitString::from_u64(lambda, msg).unwrap());
                        let mut seen = HashSet::new();
                        for r in 0..(1u64 << (m_bits - lambda)) {
                            let r = LocalRandomness(
                                BitString::from_u64(m_bits - lambda, r).unwrap(),
                            );
                            let l = invert(&message, &s, &r, &spec).unwrap();
                            assert_eq!(extract(&l, &s, &spec).unwrap(), message);
                            assert!(seen.insert(l.0.to_u64().unwrap()));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn two_universal_up_to_seed_exclusion() {
        for m_bits in 1..=6usize {
            let f = FieldSpec::with_default_modulus(m_bits).unwrap();
            let size = 1u64 << m_bits;
            for lambda in 0..=m_bits {
                let spec = ExtractorSpec::new(f.clone(), lambda).unwrap();
                let bound =
                    (0.5f64).powi(lambda as i32) * size as f64 / (size - 1) as f64 + 1e-12;
                for l1 in 0..size {
                    for l2 in (l1 + 1)..size {
                        let collisions = (1..size)
                            .filter(|&s| {
                                let s = seed(&f, s);
                                extract(&word(&f, l1), &s, &spec).unwrap()
                                    == extract(&word(&f, l2), &s, &spec).unwrap()
                            })
                            .count();
                        assert!(collisions as f64 / (size - 1) as f64 <= bound);
                    }
                }
            }
        }
    }

    #[test]
    fn distance_examples() {
        let uniform = vec![vec![0.125; 4]; 2];
        assert!(statistical_distance_to_uniform(&uniform).unwrap().abs() < 1e-15);
        let point = vec![vec![1.0, 0.0]];
        assert!((statistical_distance_to_uniform(&point).unwrap() - 0.5).abs() < 1e-15);
        assert!(statistical_distance_to_uniform(&[vec![0.3, 0.3]]).is_err());
        assert!(statistical_distance_to_uniform(&[vec![1.5, -0.5]]).is_err());
    }

    #[test]
    fn uniform_source_meets_leftover_hash_bound() {
        let f = FieldSpec::with_default_modulus(4).unwrap();
        let spec = ExtractorSpec::new(f, 2).unwrap();
        let joint = output_distribution(&[1.0 / 16.0; 16], &spec).unwrap();
        let d = statistical_distance_to_uniform(&joint).unwrap();
        assert!(d <= 0.5 * (4.0f64 / 16.0).sqrt() + 1e-12, "d = {d}");
    }
}
