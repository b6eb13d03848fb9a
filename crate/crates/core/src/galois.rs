//! Arithmetic over binary extension fields GF(2^m).
//!
//! Elements are polynomials over GF(2) stored as little-endian `u64` limbs:
//! bit `i` of the value is the coefficient of `x^i`. Multiplication is
//! carry-less (shift/XOR) followed by reduction modulo the field polynomial,
//! so the same code path serves tiny fields and the multi-hundred-bit fields
//! the extractor needs. [`SymbolField`] adds log/antilog tables for the small
//! alphabets used by the Reed-Solomon code.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};

/// Largest extension degree accepted by [`FieldSpec`].
pub const MAX_DEGREE: usize = 1 << 14;

/// Largest symbol width (bits) for table-backed [`SymbolField`]s.
pub const MAX_SYMBOL_BITS: u32 = 16;

/// Polynomial arithmetic over GF(2) on limb slices.
pub(crate) mod poly {
    pub fn degree(a: &[u64]) -> Option<usize> {
        a.iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * 64 + 63 - w.leading_zeros() as usize)
    }

    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    #[inline]
    pub fn clmul64(a: u64, b: u64) -> u128 {
        #[cfg(target_arch = "x86_64")]
        {
            if std::arch::is_x86_feature_detected!("pclmulqdq") {
                // SAFETY: the CPU supports the instruction, checked just above.
                return unsafe { clmul64_hw(a, b) };
            }
        }
        clmul64_soft(a, b)
    }

    #[cfg(target_arch = "x86_64")]
    #[target_feature(enable = "pclmulqdq,sse2")]
    unsafe fn clmul64_hw(a: u64, b: u64) -> u128 {
        use std::arch::x86_64::{_mm_clmulepi64_si128, _mm_set_epi64x, _mm_storeu_si128};
        let r = _mm_clmulepi64_si128(_mm_set_epi64x(0, a as i64), _mm_set_epi64x(0, b as i64), 0);
        let mut out = 0u128;
        _mm_storeu_si128(&mut out as *mut u128 as *mut _, r);
        out
    }

    pub fn clmul64_soft(a: u64, b: u64) -> u128 {
        let a = a as u128;
        let mut acc = 0u128;
        let mut b = b;
        while b != 0 {
            let i = b.trailing_zeros();
            acc ^= a << i;
            b &= b - 1;
        }
        acc
    }

    /// `dst ^= src << shift` on equal-length buffers; bits shifted past the
    /// end are dropped. Only the first `src_words` words of `src` are read.
    #[inline]
    pub fn xor_shl_fixed(dst: &mut [u64], src: &[u64], src_words: usize, shift: usize) {
        let (words, bits) = (shift / 64, shift % 64);
        let len = dst.len();
        for i in 0..src_words.min(len.saturating_sub(words)) {
            let w = src[i];
            dst[i + words] ^= w << bits;
            if bits != 0 && i + words + 1 < len {
                dst[i + words + 1] ^= w >> (64 - bits);
            }
        }
    }

    /// Degree of `a`, scanning down from bit `from`.
    #[inline]
    pub fn degree_below(a: &[u64], from: usize) -> Option<usize> {
        let mut i = from / 64;
        loop {
            if a[i] != 0 {
                return Some(i * 64 + 63 - a[i].leading_zeros() as usize);
            }
            if i == 0 {
                return None;
            }
            i -= 1;
        }
    }

    pub fn mul(a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; a.len() + b.len()];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let p = clmul64(x, y);
                out[i + j] ^= p as u64;
                out[i + j + 1] ^= (p >> 64) as u64;
            }
        }
        out
    }

    pub fn get_bit(a: &[u64], i: usize) -> bool {
        a.get(i / 64).is_some_and(|w| (w >> (i % 64)) & 1 == 1)
    }

    /// `dst ^= src << shift`, growing `dst` as needed.
    pub fn xor_shl(dst: &mut Vec<u64>, src: &[u64], shift: usize) {
        let (words, bits) = (shift / 64, shift % 64);
        let need = src.len() + words + 1;
        if dst.len() < need {
            dst.resize(need, 0);
        }
        for (i, &w) in src.iter().enumerate() {
            if w == 0 {
                continue;
            }
            dst[i + words] ^= w << bits;
            if bits != 0 {
                dst[i + words + 1] ^= w >> (64 - bits);
            }
        }
    }

    /// `a >> shift`.
    pub fn shr(a: &[u64], shift: usize) -> Vec<u64> {
        let (words, bits) = (shift / 64, shift % 64);
        if words >= a.len() {
            return Vec::new();
        }
        let mut out = Vec::with_capacity(a.len() - words);
        for i in words..a.len() {
            let mut w = a[i] >> bits;
            if bits != 0 {
                if let Some(&next) = a.get(i + 1) {
                    w |= next << (64 - bits);
                }
            }
            out.push(w);
        }
        out
    }

    /// Clears every bit at position `>= nbits`.
    pub fn truncate_bits(a: &mut Vec<u64>, nbits: usize) {
        let words = nbits.div_ceil(64);
        a.truncate(words);
        if nbits % 64 != 0 && a.len() == words {
            a[words - 1] &= (1u64 << (nbits % 64)) - 1;
        }
    }

    /// Remainder of `a` modulo `f` (generic long division).
    pub fn rem(a: &[u64], f: &[u64]) -> Vec<u64> {
        let df = degree(f).expect("division by zero polynomial");
        let mut r = a.to_vec();
        while let Some(dr) = degree(&r) {
            if dr < df {
                break;
            }
            xor_shl(&mut r, f, dr - df);
        }
        trim(&mut r);
        r
    }

    pub fn gcd(a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while degree(&b).is_some() {
            let r = rem(&a, &b);
            a = b;
            b = r;
        }
        a
    }

    fn prime_factors(mut m: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut p = 2;
        while p * p <= m {
            if m % p == 0 {
                out.push(p);
                while m % p == 0 {
                    m /= p;
                }
            }
            p += 1;
        }
        if m > 1 {
            out.push(m);
        }
        out
    }

    /// Rabin's irreducibility test for a polynomial `f` of degree `m`.
    pub fn is_irreducible(f: &[u64], m: usize) -> bool {
        if degree(f) != Some(m) || m == 0 {
            return false;
        }
        let primes = prime_factors(m);
        let checkpoints: Vec<usize> = primes.iter().map(|p| m / p).collect();
        let x_mod_f = rem(&[2], f);
        let mut h = x_mod_f.clone();
        for i in 1..=m {
            h = rem(&mul(&h, &h), f);
            if checkpoints.contains(&i) {
                let mut diff = h.clone();
                let n = diff.len().max(x_mod_f.len());
                diff.resize(n, 0);
                for (d, x) in diff.iter_mut().zip(&x_mod_f) {
                    *d ^= x;
                }
                trim(&mut diff);
                let g = gcd(f, &diff);
                if degree(&g) != Some(0) {
                    return false;
                }
            }
        }
        let mut lhs = h;
        trim(&mut lhs);
        let mut rhs = x_mod_f;
        trim(&mut rhs);
        lhs == rhs
    }
}

/// Description of GF(2^m): the degree and its irreducible modulus.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    degree: usize,
    modulus: Vec<u64>,
    /// Exponents of the modulus below `x^m`, used for sparse reduction.
    tail: Vec<usize>,
    limbs: usize,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{}) mod ", self.degree)?;
        let terms: Vec<String> = std::iter::once(self.degree)
            .chain(self.tail.iter().rev().copied())
            .map(|e| match e {
                0 => "1".to_string(),
                1 => "x".to_string(),
                e => format!("x^{e}"),
            })
            .collect();
        write!(f, "{}", terms.join("+"))
    }
}

impl FieldSpec {
    /// Builds a field from an explicit modulus given as little-endian limbs.
    pub fn new(degree: usize, modulus: Vec<u64>) -> Result<Arc<Self>> {
        if degree == 0 || degree > MAX_DEGREE {
            return Err(Error::usage(format!(
                "extension degree {degree} outside 1..={MAX_DEGREE}"
            )));
        }
        let mut modulus = modulus;
        poly::trim(&mut modulus);
        if poly::degree(&modulus) != Some(degree) {
            return Err(Error::usage(format!(
                "modulus does not have degree exactly {degree}"
            )));
        }
        if !poly::is_irreducible(&modulus, degree) {
            return Err(Error::usage("modulus is reducible over GF(2)"));
        }
        Ok(Arc::new(Self::from_parts(degree, modulus)))
    }

    /// Convenience constructor for moduli that fit in 128 bits.
    pub fn from_modulus(degree: usize, modulus: u128) -> Result<Arc<Self>> {
        Self::new(degree, vec![modulus as u64, (modulus >> 64) as u64])
    }

    /// GF(2^m) under the numerically smallest irreducible modulus of degree m.
    pub fn with_default_modulus(degree: usize) -> Result<Arc<Self>> {
        if degree == 0 || degree > MAX_DEGREE {
            return Err(Error::usage(format!(
                "extension degree {degree} outside 1..={MAX_DEGREE}"
            )));
        }
        Ok(Arc::new(Self::from_parts(degree, default_modulus(degree))))
    }

    fn from_parts(degree: usize, modulus: Vec<u64>) -> Self {
        let tail = (0..degree)
            .filter(|&i| poly::get_bit(&modulus, i))
            .collect();
        FieldSpec {
            degree,
            modulus,
            tail,
            limbs: degree.div_ceil(64),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Modulus as an integer, when it fits.
    pub fn modulus_u128(&self) -> Option<u128> {
        match self.modulus.len() {
            1 => Some(self.modulus[0] as u128),
            2 => Some(self.modulus[0] as u128 | (self.modulus[1] as u128) << 64),
            _ => None,
        }
    }

    /// Reduces an arbitrary polynomial modulo the field polynomial.
    pub(crate) fn reduce(&self, mut a: Vec<u64>) -> Vec<u64> {
        let m = self.degree;
        let (top, off) = (m / 64, m % 64);
        let mut i = a.len();
        while i > top {
            i -= 1;
            let mask = if i == top { !((1u64 << off) - 1) } else { !0 };
            loop {
                // bits at positions >= m in word i fold down by x^m = tail
                let w = a[i] & mask;
                if w == 0 {
                    break;
                }
                a[i] ^= w;
                for &t in &self.tail {
                    let base = (64 * i + t) as isize - m as isize;
                    if base < 0 {
                        a[0] ^= w >> -base;
                    } else {
                        let (q, r) = (base as usize / 64, base as usize % 64);
                        a[q] ^= w << r;
                        if r != 0 {
                            a[q + 1] ^= w >> (64 - r);
                        }
                    }
                }
            }
        }
        a.resize(self.limbs, 0);
        a
    }

    pub(crate) fn mul_raw(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        self.reduce(poly::mul(a, b))
    }

    /// Inverse by the binary extended Euclidean algorithm; `None` for zero.
    pub(crate) fn inv_raw(&self, a: &[u64]) -> Option<Vec<u64>> {
        let len = self.degree / 64 + 1;
        let mut u = vec![0u64; len];
        let n = a.len().min(len);
        u[..n].copy_from_slice(&a[..n]);
        let mut du = poly::degree(&u)?;
        let mut v = self.modulus.clone();
        v.resize(len, 0);
        let mut dv = self.degree;
        let mut g1 = vec![0u64; len];
        g1[0] = 1;
        let mut g2 = vec![0u64; len];
        // invariant: g1 a = u and g2 a = v modulo the field polynomial
        while du != 0 {
            if du < dv {
                std::mem::swap(&mut u, &mut v);
                std::mem::swap(&mut g1, &mut g2);
                std::mem::swap(&mut du, &mut dv);
            }
            let j = du - dv;
            poly::xor_shl_fixed(&mut u, &v, dv / 64 + 1, j);
            poly::xor_shl_fixed(&mut g1, &g2, len, j);
            du = poly::degree_below(&u, du).expect("u stays nonzero for invertible input");
        }
        Some(self.reduce(g1))
    }

    fn check_value(&self, value: &[u64]) -> Result<()> {
        match poly::degree(value) {
            Some(d) if d >= self.degree => Err(Error::usage(format!(
                "value has degree {d}, field is GF(2^{})",
                self.degree
            ))),
            _ => Ok(()),
        }
    }

    pub fn element(self: &Arc<Self>, value: u64) -> Result<FieldElement> {
        self.element_from_limbs(vec![value])
    }

    pub fn element_from_limbs(self: &Arc<Self>, value: Vec<u64>) -> Result<FieldElement> {
        self.check_value(&value)?;
        let mut value = value;
        value.resize(self.limbs, 0);
        Ok(FieldElement {
            spec: Arc::clone(self),
            value,
        })
    }

    pub fn zero(self: &Arc<Self>) -> FieldElement {
        FieldElement {
            spec: Arc::clone(self),
            value: vec![0; self.limbs],
        }
    }

    pub fn one(self: &Arc<Self>) -> FieldElement {
        let mut value = vec![0; self.limbs];
        value[0] = 1;
        FieldElement {
            spec: Arc::clone(self),
            value,
        }
    }

    /// Uniformly random element (including zero).
    pub fn random_element<R: Rng + ?Sized>(self: &Arc<Self>, rng: &mut R) -> FieldElement {
        let mut value: Vec<u64> = (0..self.limbs).map(|_| rng.gen()).collect();
        poly::truncate_bits(&mut value, self.degree);
        value.resize(self.limbs, 0);
        FieldElement {
            spec: Arc::clone(self),
            value,
        }
    }
}

/// Numerically smallest irreducible polynomial of the given degree.
pub fn default_modulus(degree: usize) -> Vec<u64> {
    assert!(degree >= 1, "degree must be positive");
    let mut f = vec![0u64; degree / 64 + 1];
    f[degree / 64] |= 1u64 << (degree % 64);
    // Degree one: x itself is the smallest irreducible. Otherwise the
    // constant term must be 1, so only odd tails are candidates.
    let (start, step) = if degree == 1 { (0u64, 1u64) } else { (1u64, 2u64) };
    let mut tail = start;
    loop {
        let mut cand = f.clone();
        cand[0] ^= tail;
        if poly::is_irreducible(&cand, degree) {
            return cand;
        }
        tail += step;
        assert!(
            degree >= 64 || tail < (1u64 << degree),
            "no irreducible polynomial found for degree {degree}"
        );
    }
}

/// An element of GF(2^m), tagged with its field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    spec: Arc<FieldSpec>,
    value: Vec<u64>,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0x")?;
        for w in self.value.iter().rev() {
            write!(f, "{w:016x}")?;
        }
        Ok(())
    }
}

impl FieldElement {
    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    pub fn limbs(&self) -> &[u64] {
        &self.value
    }

    pub fn into_limbs(self) -> Vec<u64> {
        self.value
    }

    /// Value as an integer when the field has at most 64 bits.
    pub fn to_u64(&self) -> Option<u64> {
        match self.value.as_slice() {
            [v] => Some(*v),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.value.iter().all(|&w| w == 0)
    }

    pub fn is_one(&self) -> bool {
        self.value[0] == 1 && self.value[1..].iter().all(|&w| w == 0)
    }

    /// Coefficient of `x^i`.
    pub fn bit(&self, i: usize) -> bool {
        poly::get_bit(&self.value, i)
    }

    fn same_field(&self, other: &FieldElement) -> Result<()> {
        if Arc::ptr_eq(&self.spec, &other.spec) || self.spec == other.spec {
            Ok(())
        } else {
            Err(Error::usage(format!(
                "field mismatch: {:?} vs {:?}",
                self.spec, other.spec
            )))
        }
    }

    fn with_value(&self, value: Vec<u64>) -> FieldElement {
        FieldElement {
            spec: Arc::clone(&self.spec),
            value,
        }
    }
}

pub fn gf_add(a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
    a.same_field(b)?;
    let value = a.value.iter().zip(&b.value).map(|(x, y)| x ^ y).collect();
    Ok(a.with_value(value))
}

pub fn gf_mul(a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
    a.same_field(b)?;
    Ok(a.with_value(a.spec.mul_raw(&a.value, &b.value)))
}

pub fn gf_inv(a: &FieldElement) -> Result<FieldElement> {
    a.spec
        .inv_raw(&a.value)
        .map(|v| a.with_value(v))
        .ok_or_else(|| Error::domain("zero has no multiplicative inverse"))
}

pub fn gf_pow(a: &FieldElement, mut e: u64) -> FieldElement {
    let mut base = a.value.clone();
    let mut acc = a.spec.one().value;
    while e > 0 {
        if e & 1 == 1 {
            acc = a.spec.mul_raw(&acc, &base);
        }
        base = a.spec.mul_raw(&base, &base);
        e >>= 1;
    }
    a.with_value(acc)
}

/// Small field GF(2^w), w <= 16, with log/antilog tables over a fixed
/// primitive element. Symbols are plain `u16` values.
#[derive(Clone)]
pub struct SymbolField {
    spec: Arc<FieldSpec>,
    bits: u32,
    generator: u16,
    exp: Vec<u16>,
    log: Vec<u32>,
}

impl fmt::Debug for SymbolField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SymbolField")
            .field("spec", &self.spec)
            .field("generator", &self.generator)
            .finish()
    }
}

impl SymbolField {
    pub fn new(bits: u32) -> Result<Self> {
        if bits == 0 || bits > MAX_SYMBOL_BITS {
            return Err(Error::usage(format!(
                "symbol width {bits} outside 1..={MAX_SYMBOL_BITS}"
            )));
        }
        Self::from_spec(FieldSpec::with_default_modulus(bits as usize)?)
    }

    pub fn from_spec(spec: Arc<FieldSpec>) -> Result<Self> {
        let bits = spec.degree() as u32;
        if bits > MAX_SYMBOL_BITS {
            return Err(Error::usage("symbol field too wide for tables"));
        }
        let order = (1usize << bits) - 1;
        let generator = (1..=order as u64)
            .map(|g| spec.element(g).expect("in range"))
            .find(|g| is_primitive(g, order as u64))
            .and_then(|g| g.to_u64())
            .expect("every finite field has a primitive element") as u16;

        let g = spec.element(generator as u64)?;
        let mut exp = Vec::with_capacity(2 * order);
        let mut log = vec![0u32; order + 1];
        let mut x = spec.one();
        for i in 0..order {
            let v = x.to_u64().unwrap() as u16;
            exp.push(v);
            log[v as usize] = i as u32;
            x = gf_mul(&x, &g)?;
        }
        exp.extend_from_within(..);
        // zero region addressed through the log of zero, see `log_ext`
        exp.resize(4 * order + 1, 0);
        Ok(SymbolField {
            spec,
            bits,
            generator,
            exp,
            log,
        })
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Number of field elements, `2^w`.
    pub fn size(&self) -> usize {
        1 << self.bits
    }

    /// Multiplicative group order, `2^w - 1`.
    pub fn order(&self) -> usize {
        self.size() - 1
    }

    pub fn generator(&self) -> u16 {
        self.generator
    }

    /// `g^i` for the fixed generator `g`.
    pub fn exp(&self, i: usize) -> u16 {
        self.exp[i % self.order()]
    }

    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    pub fn inv(&self, a: u16) -> Result<u16> {
        if a == 0 {
            return Err(Error::domain("zero has no multiplicative inverse"));
        }
        let l = self.log[a as usize] as usize;
        Ok(self.exp[(self.order() - l) % self.order()])
    }

    #[inline]
    pub fn div(&self, a: u16, b: u16) -> Result<u16> {
        if b == 0 {
            return Err(Error::domain("division by zero"));
        }
        if a == 0 {
            return Ok(0);
        }
        let order = self.order();
        let l = self.log[a as usize] as usize + order - self.log[b as usize] as usize;
        Ok(self.exp[l % order])
    }

    /// `a * g^log_b` for `log_b < order`.
    #[inline]
    pub(crate) fn mul_log(&self, a: u16, log_b: u32) -> u16 {
        if a == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + log_b) as usize]
    }

    /// Discrete log of a nonzero element.
    #[inline]
    pub(crate) fn log_of(&self, a: u16) -> u32 {
        self.log[a as usize]
    }

    /// Discrete log with zero mapped to `2 order`: sums of at most two such
    /// logs index [`SymbolField::exp_ext`] and land in a run of zeros
    /// whenever a zero is involved.
    #[inline]
    pub(crate) fn log_ext(&self, a: u16) -> u32 {
        if a == 0 {
            2 * self.order() as u32
        } else {
            self.log[a as usize]
        }
    }

    /// `g^i` for `i < 2 order`, zero for `2 order <= i <= 4 order`.
    #[inline]
    pub(crate) fn exp_ext(&self, i: usize) -> u16 {
        self.exp[i]
    }

    pub fn contains(&self, a: u16) -> bool {
        (a as usize) < self.size()
    }
}

fn is_primitive(g: &FieldElement, order: u64) -> bool {
    if g.is_zero() {
        return false;
    }
    if !gf_pow(g, order).is_one() {
        return false;
    }
    let mut rest = order;
    let mut p = 2;
    let mut factors = Vec::new();
    while p * p <= rest {
        if rest % p == 0 {
            factors.push(p);
            while rest % p == 0 {
                rest /= p;
            }
        }
        p += 1;
    }
    if rest > 1 {
        factors.push(rest);
    }
    factors.iter().all(|&p| !gf_pow(g, order / p).is_one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Schoolbook multiply then reduce, one bit at a time.
    fn schoolbook(a: u64, b: u64, m: usize, modulus: u128) -> u64 {
        let mut prod: u128 = 0;
        for i in 0..m {
            if (b >> i) & 1 == 1 {
                prod ^= (a as u128) << i;
            }
        }
        for i in (m..2 * m).rev() {
            if (prod >> i) & 1 == 1 {
                prod ^= modulus << (i - m);
            }
        }
        prod as u64
    }

    /// Trial division by every polynomial of degree 1..=m/2.
    fn irreducible_by_search(f: u64, m: usize) -> bool {
        for d in 1..=m / 2 {
            for g in (1u64 << d)..(1u64 << (d + 1)) {
                if poly::rem(&[f], &[g]).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    fn gf8() -> Arc<FieldSpec> {
        FieldSpec::from_modulus(3, 0b1011).unwrap()
    }

    #[test]
    fn add_examples() {
        let f = gf8();
        let a = f.element(0b010).unwrap();
        let b = f.element(0b011).unwrap();
        assert_eq!(gf_add(&a, &b).unwrap().to_u64(), Some(0b001));
        assert_eq!(gf_add(&a, &f.zero()).unwrap(), a);
        assert!(gf_add(&a, &a).unwrap().is_zero());
    }

    #[test]
    fn mul_examples() {
        let f = gf8();
        let a = f.element(0b010).unwrap();
        let b = f.element(0b011).unwrap();
        assert_eq!(schoolbook(0b010, 0b011, 3, 0b1011), 0b110);
        assert_eq!(gf_mul(&a, &b).unwrap().to_u64(), Some(0b110));
        for v in 0..8 {
            let x = f.element(v).unwrap();
            assert_eq!(gf_mul(&x, &f.one()).unwrap(), x);
            assert!(gf_mul(&x, &f.zero()).unwrap().is_zero());
        }
    }

    #[test]
    fn inv_examples() {
        let f = gf8();
        assert!(gf_inv(&f.one()).unwrap().is_one());
        let expected = (1..8)
            .find(|&c| schoolbook(0b010, c, 3, 0b1011) == 1)
            .unwrap();
        assert_eq!(expected, 0b101);
        assert_eq!(
            gf_inv(&f.element(0b010).unwrap()).unwrap().to_u64(),
            Some(0b101)
        );
        assert!(matches!(gf_inv(&f.zero()), Err(Error::Domain(_))));
    }

    #[test]
    fn pow_examples() {
        let f = gf8();
        let a = f.element(0b010).unwrap();
        assert!(gf_pow(&a, 0).is_one());
        assert_eq!(gf_pow(&a, 1), a);
        let mut acc = f.one();
        for _ in 0..7 {
            acc = gf_mul(&acc, &a).unwrap();
        }
        assert!(acc.is_one());
        assert!(gf_pow(&a, 7).is_one());
    }

    #[test]
    fn mismatched_fields_rejected() {
        let a = gf8().one();
        let b = FieldSpec::with_default_modulus(4).unwrap().one();
        assert!(matches!(gf_add(&a, &b), Err(Error::Usage(_))));
        assert!(matches!(gf_mul(&a, &b), Err(Error::Usage(_))));
        // Structurally equal specs built separately are the same field.
        let c = FieldSpec::from_modulus(3, 0b1011).unwrap().one();
        assert!(gf_mul(&a, &c).is_ok());
    }

    #[test]
    fn constructor_validation() {
        assert!(matches!(
            FieldSpec::from_modulus(3, 0b1001),
            Err(Error::Usage(_))
        ));
        assert!(matches!(FieldSpec::from_modulus(3, 0b111), Err(Error::Usage(_))));
        assert!(FieldSpec::from_modulus(0, 0b1).is_err());
        assert!(gf8().element(8).is_err());
    }

    #[test]
    fn rabin_matches_exhaustive_search() {
        for m in 1..=12usize {
            for f in (1u64 << m)..(1u64 << (m + 1)) {
                assert_eq!(
                    poly::is_irreducible(&[f], m),
                    irreducible_by_search(f, m),
                    "m={m} f={f:#b}"
                );
            }
        }
    }

    #[test]
    fn default_moduli_are_smallest() {
        for m in 2..=16usize {
            let d = default_modulus(m)[0];
            let smallest = ((1u64 << m)..(1u64 << (m + 1)))
                .find(|&f| irreducible_by_search(f, m))
                .unwrap();
            assert_eq!(d, smallest, "m={m}");
        }
        assert_eq!(default_modulus(3)[0], 0b1011);
        assert_eq!(default_modulus(8)[0], 0x11b);
        assert_eq!(default_modulus(64), vec![0b11011, 1]);
    }

    #[test]
    fn mul_matches_schoolbook_exhaustive_small() {
        for m in 1..=4usize {
            let spec = FieldSpec::with_default_modulus(m).unwrap();
            let modulus = spec.modulus_u128().unwrap();
            for a in 0..(1u64 << m) {
                for b in 0..(1u64 << m) {
                    let got = gf_mul(&spec.element(a).unwrap(), &spec.element(b).unwrap())
                        .unwrap()
                        .to_u64()
                        .unwrap();
                    assert_eq!(got, schoolbook(a, b, m, modulus));
                }
            }
        }
    }

    #[test]
    fn mul_matches_schoolbook_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for m in 5..=16usize {
            let spec = FieldSpec::with_default_modulus(m).unwrap();
            let modulus = spec.modulus_u128().unwrap();
            let pairs = if m == 16 { 100_000 } else { 10_000 };
            for _ in 0..pairs {
                let a = rng.gen_range(0..(1u64 << m));
                let b = rng.gen_range(0..(1u64 << m));
                let got = spec.mul_raw(&[a], &[b])[0];
                assert_eq!(got, schoolbook(a, b, m, modulus));
            }
        }
    }

    #[test]
    fn multiplicative_group_axioms_exhaustive() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for m in 1..=8usize {
            let spec = FieldSpec::with_default_modulus(m).unwrap();
            let elems: Vec<_> = (1..(1u64 << m)).map(|v| spec.element(v).unwrap()).collect();
            for a in &elems {
                let inv = gf_inv(a).unwrap();
                assert!(gf_mul(a, &inv).unwrap().is_one());
                assert_eq!(&gf_inv(&inv).unwrap(), a);
                assert!(gf_pow(a, (1u64 << m) - 1).is_one());
                for b in &elems {
                    // closure: product of nonzero elements is nonzero
                    assert!(!gf_mul(a, b).unwrap().is_zero());
                }
            }
            for _ in 0..2000 {
                let pick = |r: &mut ChaCha8Rng| elems[r.gen_range(0..elems.len())].clone();
                let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
                let ab_c = gf_mul(&gf_mul(&a, &b).unwrap(), &c).unwrap();
                let a_bc = gf_mul(&a, &gf_mul(&b, &c).unwrap()).unwrap();
                assert_eq!(ab_c, a_bc);
                let dist = gf_mul(&a, &gf_add(&b, &c).unwrap()).unwrap();
                let split = gf_add(&gf_mul(&a, &b).unwrap(), &gf_mul(&a, &c).unwrap()).unwrap();
                assert_eq!(dist, split);
            }
        }
    }

    #[test]
    fn wide_field_inverse_and_axioms() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for m in [65usize, 128, 246, 378] {
            let spec = FieldSpec::with_default_modulus(m).unwrap();
            for _ in 0..50 {
                let a = spec.random_element(&mut rng);
                let b = spec.random_element(&mut rng);
                let c = spec.random_element(&mut rng);
                assert_eq!(gf_mul(&a, &b).unwrap(), gf_mul(&b, &a).unwrap());
                assert_eq!(
                    gf_mul(&gf_mul(&a, &b).unwrap(), &c).unwrap(),
                    gf_mul(&a, &gf_mul(&b, &c).unwrap()).unwrap()
                );
                if !a.is_zero() {
                    assert!(gf_mul(&a, &gf_inv(&a).unwrap()).unwrap().is_one());
                }
            }
            // Frobenius: a^(2^m) = a
            let a = spec.random_element(&mut rng);
            let mut x = a.clone();
            for _ in 0..m {
                x = gf_mul(&x, &x).unwrap();
            }
            assert_eq!(x, a);
        }
    }

    #[test]
    fn clmul_paths_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10_000 {
            let (a, b): (u64, u64) = (rng.gen(), rng.gen());
            assert_eq!(poly::clmul64(a, b), poly::clmul64_soft(a, b));
        }
        assert_eq!(poly::clmul64(u64::MAX, u64::MAX), poly::clmul64_soft(u64::MAX, u64::MAX));
    }

    #[test]
    fn sparse_reduction_matches_long_division() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        // a dense modulus exercises tail terms close to x^m
        let dense = (1..)
            .map(|_| {
                let mut f: Vec<u64> = (0..3).map(|_| rng.gen()).collect();
                f[2] = f[2] & ((1 << 2) - 1) | 1 << 2;
                f[0] |= 1;
                f
            })
            .find(|f| poly::is_irreducible(f, 130))
            .unwrap();
        let specs = [
            FieldSpec::new(130, dense).unwrap(),
            FieldSpec::with_default_modulus(246).unwrap(),
            FieldSpec::with_default_modulus(64).unwrap(),
            FieldSpec::with_default_modulus(7).unwrap(),
        ];
        for spec in &specs {
            for _ in 0..200 {
                let len = 2 * spec.degree().div_ceil(64);
                let a: Vec<u64> = (0..len).map(|_| rng.gen()).collect();
                let mut want = poly::rem(&a, spec.modulus());
                want.resize(spec.degree().div_ceil(64), 0);
                assert_eq!(spec.reduce(a), want);
            }
        }
    }

    #[test]
    fn symbol_field_tables_agree_with_generic() {
        for w in 1..=8u32 {
            let sf = SymbolField::new(w).unwrap();
            let spec = sf.spec().clone();
            for a in 0..sf.size() as u16 {
                for b in 0..sf.size() as u16 {
                    let generic = spec.mul_raw(&[a as u64], &[b as u64])[0] as u16;
                    assert_eq!(sf.mul(a, b), generic);
                }
                if a != 0 {
                    assert_eq!(sf.mul(a, sf.inv(a).unwrap()), 1);
                }
            }
            let mut seen: Vec<u16> = (0..sf.order()).map(|i| sf.exp(i)).collect();
            seen.sort_unstable();
            seen.dedup();
            assert_eq!(seen.len(), sf.order());
        }
    }
}
