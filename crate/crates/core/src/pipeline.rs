//! Alice's encoder, Bob's decoder and the Monte-Carlo harness.
//!
//! The source word `L` (an element of GF(2^{k w})) is split into `k` symbols
//! of `w` bits: symbol `i` holds the coefficients of `x^{w i} .. x^{w i + w - 1}`.
//! Those symbols are the message coefficients of the Reed-Solomon code.

use std::collections::HashMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::{self, ChannelParams, EveRecord};
use crate::error::{DecodeFailure, Error, Result};
use crate::extractor::{
    extract, invert, statistical_distance_to_uniform, BitString, ExtractorSpec, LocalRandomness,
    Message, Seed, SourceWord,
};
use crate::galois::{FieldSpec, SymbolField, MAX_DEGREE, MAX_SYMBOL_BITS};
use crate::rscode::{Codeword, ErasureWord, RsCode};

/// Physical and code parameters of one scheme instance.
///
/// Plain numbers only, so that parameter sets far beyond simulable sizes can
/// still be fed to the bounds. [`Scheme::new`] builds the actual fields.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SchemeParams {
    pub eta: f64,
    /// Mean photons per channel use, `alpha^2 / b`.
    pub photon_budget: f64,
    pub b: u64,
    pub n: u64,
    pub k: u64,
    /// Mean photon number of each pulse.
    pub alpha_sq: f64,
    /// Message length in bits.
    pub lambda: u64,
}

impl SchemeParams {
    pub fn new(eta: f64, b: u64, k: u64, alpha_sq: f64, lambda: u64) -> Result<Self> {
        if !(eta > 0.5 && eta < 1.0) {
            return Err(Error::usage(format!("transmissivity {eta} outside (0.5, 1)")));
        }
        if b < 2 || !b.is_power_of_two() || b > 1 << 62 {
            return Err(Error::usage(format!("frame length {b} is not a power of two >= 2")));
        }
        if !(alpha_sq >= 0.0 && alpha_sq.is_finite()) {
            return Err(Error::usage(format!("pulse energy {alpha_sq} must be >= 0")));
        }
        let n = b - 1;
        if k == 0 || k > n {
            return Err(Error::usage(format!("k = {k} outside 1..={n}")));
        }
        let p = SchemeParams {
            eta,
            photon_budget: alpha_sq / b as f64,
            b,
            n,
            k,
            alpha_sq,
            lambda,
        };
        if lambda > p.extractor_bits() {
            return Err(Error::usage(format!(
                "message length {lambda} exceeds k log2 b = {}",
                p.extractor_bits()
            )));
        }
        Ok(p)
    }

    /// `w = log2 b`.
    pub fn symbol_bits(&self) -> u32 {
        self.b.trailing_zeros()
    }

    /// Extractor field degree `m = k log2 b`.
    pub fn extractor_bits(&self) -> u64 {
        self.k * self.symbol_bits() as u64
    }

    /// Bob's per-frame erasure probability `exp(-eta alpha^2)`.
    pub fn erasure_probability(&self) -> f64 {
        (-self.eta * self.alpha_sq).exp()
    }

    /// Eve's mean photon count over the whole block, `(1 - eta) alpha^2 n`.
    pub fn eve_mean_photons(&self) -> f64 {
        (1.0 - self.eta) * self.alpha_sq * self.n as f64
    }

    /// Channel uses per block, `n b`.
    pub fn channel_uses(&self) -> f64 {
        self.n as f64 * self.b as f64
    }

    /// `lambda ln 2 / (n b)`.
    pub fn rate_nats_per_use(&self) -> f64 {
        self.lambda as f64 * std::f64::consts::LN_2 / self.channel_uses()
    }
}

/// A parameter set with its fields, code and channel instantiated.
#[derive(Clone, Debug)]
pub struct Scheme {
    params: SchemeParams,
    extractor: ExtractorSpec,
    code: RsCode,
    channel: ChannelParams,
}

impl Scheme {
    pub fn new(params: &SchemeParams) -> Result<Self> {
        let p = SchemeParams::new(params.eta, params.b, params.k, params.alpha_sq, params.lambda)?;
        let w = p.symbol_bits();
        if w > MAX_SYMBOL_BITS {
            return Err(Error::infeasible(format!(
                "frame length 2^{w} too large to simulate (at most 2^{MAX_SYMBOL_BITS})"
            )));
        }
        let m = p.extractor_bits() as usize;
        if m > MAX_DEGREE {
            return Err(Error::infeasible(format!(
                "extractor field degree {m} exceeds {MAX_DEGREE}"
            )));
        }
        let field = FieldSpec::with_default_modulus(m)?;
        let extractor = ExtractorSpec::new(field, p.lambda as usize)?;
        let code = RsCode::with_field(SymbolField::new(w)?, p.k as usize)?;
        let channel = ChannelParams::new(p.eta, p.alpha_sq, p.b as u32)?;
        Ok(Scheme {
            params: p,
            extractor,
            code,
            channel,
        })
    }

    pub fn params(&self) -> &SchemeParams {
        &self.params
    }

    pub fn extractor(&self) -> &ExtractorSpec {
        &self.extractor
    }

    pub fn code(&self) -> &RsCode {
        &self.code
    }

    pub fn channel(&self) -> &ChannelParams {
        &self.channel
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        self.extractor.field()
    }

    /// Splits a source word into `k` code symbols.
    pub fn pack(&self, l: &SourceWord) -> Vec<u16> {
        let w = self.params.symbol_bits() as usize;
        let limbs = l.0.limbs();
        (0..self.params.k as usize)
            .map(|i| bits_at(limbs, i * w, w) as u16)
            .collect()
    }

    /// Inverse of [`Scheme::pack`].
    pub fn unpack(&self, symbols: &[u16]) -> Result<SourceWord> {
        let w = self.params.symbol_bits() as usize;
        let m = self.params.extractor_bits() as usize;
        if symbols.len() != self.params.k as usize {
            return Err(Error::usage(format!(
                "expected {} symbols, got {}",
                self.params.k,
                symbols.len()
            )));
        }
        let mut limbs = vec![0u64; m.div_ceil(64)];
        for (i, &s) in symbols.iter().enumerate() {
            for j in 0..w {
                if s >> j & 1 == 1 {
                    let pos = i * w + j;
                    limbs[pos / 64] |= 1 << (pos % 64);
                }
            }
        }
        Ok(SourceWord(self.field().element_from_limbs(limbs)?))
    }

    /// Alice: `L = Inv(m, s, r)`, then RS-encode the symbols of `L`.
    pub fn alice_encode(
        &self,
        m: &Message,
        s: &Seed,
        r: &LocalRandomness,
    ) -> Result<(SourceWord, Codeword)> {
        let l = invert(m, s, r, &self.extractor)?;
        let c = self.code.encode(&self.pack(&l))?;
        Ok((l, c))
    }

    /// Bob: erasure-decode `L'`, then `M' = Ext(L', s)`.
    pub fn bob_decode(&self, y: &ErasureWord, s: &Seed) -> Result<Message> {
        let symbols = self.code.decode_erasures(y)?;
        extract(&self.unpack(&symbols)?, s, &self.extractor)
    }

    /// Draws a fresh message, seed and local randomness and sends them
    /// through the channel.
    pub fn transmit<R: Rng + ?Sized>(&self, rng: &mut R) -> TransmissionRecord {
        let message = Message(BitString::random(self.extractor.lambda(), rng));
        let seed = Seed::random(self.field(), rng);
        let r = LocalRandomness(BitString::random(self.extractor.randomness_bits(), rng));
        let (source_word, codeword) = self
            .alice_encode(&message, &seed, &r)
            .expect("lengths come from the scheme itself");
        let mut bob = Vec::with_capacity(codeword.0.len());
        let mut eve = Vec::with_capacity(codeword.0.len());
        for &sym in &codeword.0 {
            let pos = channel::modulate(sym, self.channel.frame_len()).expect("symbol fits frame");
            let (frame, record) =
                channel::transmit_frame(pos, &self.channel, rng).expect("position in range");
            let frame_len = self.channel.frame_len();
            bob.push(frame.0.map(|x| channel::demodulate(x, frame_len).expect("position in range")));
            eve.push(record);
        }
        let bob_output = ErasureWord(bob);
        let decoded = match self.bob_decode(&bob_output, &seed) {
            Ok(msg) => Ok(msg),
            Err(Error::Decode(f)) => Err(f),
            Err(e) => panic!("decoder rejected a well-formed word: {e}"),
        };
        TransmissionRecord {
            message,
            seed,
            source_word,
            codeword,
            bob_output,
            eve_record: eve,
            decoded,
        }
    }
}

/// `len <= 16` bits of `limbs` starting at bit `start`.
fn bits_at(limbs: &[u64], start: usize, len: usize) -> u64 {
    let word = |i: usize| limbs.get(i).copied().unwrap_or(0);
    let (i, off) = (start / 64, start % 64);
    let mut v = word(i) >> off;
    if off + len > 64 {
        v |= word(i + 1) << (64 - off);
    }
    v & ((1u64 << len) - 1)
}

/// One simulated transmission, end to end.
#[derive(Clone, Debug, PartialEq)]
pub struct TransmissionRecord {
    pub message: Message,
    pub seed: Seed,
    pub source_word: SourceWord,
    pub codeword: Codeword,
    pub bob_output: ErasureWord,
    pub eve_record: Vec<EveRecord>,
    pub decoded: std::result::Result<Message, DecodeFailure>,
}

impl TransmissionRecord {
    pub fn is_error(&self) -> bool {
        self.decoded.as_ref() != Ok(&self.message)
    }

    pub fn erasures(&self) -> usize {
        self.bob_output.erasures()
    }
}

pub fn alice_encode(
    m: &Message,
    s: &Seed,
    r: &LocalRandomness,
    p: &SchemeParams,
) -> Result<(SourceWord, Codeword)> {
    Scheme::new(p)?.alice_encode(m, s, r)
}

pub fn bob_decode(y: &ErasureWord, s: &Seed, p: &SchemeParams) -> Result<Message> {
    Scheme::new(p)?.bob_decode(y, s)
}

/// Random stream of trial `index`: the same for any worker count.
pub fn trial_rng(rng_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    rng.set_stream(index);
    rng
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrialSummary {
    pub trials: u64,
    pub errors: u64,
    /// Errors with at most `n - k` erasures plus successes with more; zero
    /// when error events are exactly the too-many-erasures events.
    pub inconsistent: u64,
    pub error_rate: f64,
    /// Three binomial standard errors.
    pub radius: f64,
}

/// Runs `trials` independent transmissions on `workers` threads.
pub fn run_trials(p: &SchemeParams, trials: u64, rng_seed: u64, workers: usize) -> Result<TrialSummary> {
    if trials == 0 {
        return Err(Error::usage("need at least one trial"));
    }
    let scheme = Scheme::new(p)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::usage(format!("cannot start worker pool: {e}")))?;
    let correctable = (p.n - p.k) as usize;
    let (errors, inconsistent) = pool.install(|| {
        (0..trials)
            .into_par_iter()
            .map(|t| {
                let rec = scheme.transmit(&mut trial_rng(rng_seed, t));
                let err = rec.is_error();
                let too_many = rec.erasures() > correctable;
                (err as u64, (err != too_many) as u64)
            })
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
    });
    let rate = errors as f64 / trials as f64;
    Ok(TrialSummary {
        trials,
        errors,
        inconsistent,
        error_rate: rate,
        radius: 3.0 * (rate * (1.0 - rate) / trials as f64).sqrt(),
    })
}

/// Largest `seeds x source words x Eve patterns` the oracle enumerates.
pub const ORACLE_STATE_LIMIT: u64 = 1 << 24;

/// Exact statistical distance between `(M, S, Eve's record)` and
/// `uniform(M) x (S, Eve's record)` for a direct-detection eavesdropper.
///
/// Enumerates every seed, every source word (message and local randomness
/// together) and every subset of frames Eve detects.
pub fn classical_secrecy_oracle(p: &SchemeParams) -> Result<f64> {
    let m = p.extractor_bits();
    let states = (m < 24 && p.n < 24)
        .then(|| ((1u64 << m) - 1) * (1 << m) * (1 << p.n))
        .filter(|&s| s <= ORACLE_STATE_LIMIT);
    if states.is_none() {
        return Err(Error::usage(format!(
            "state space of b={}, k={} exceeds 2^24",
            p.b, p.k
        )));
    }
    let scheme = Scheme::new(p)?;
    let field = scheme.field().clone();
    let (n, w) = (p.n as usize, p.symbol_bits() as usize);
    let detect = -(-(1.0 - p.eta) * p.alpha_sq).exp_m1();
    let pattern_prob: Vec<f64> = (0u64..1 << n)
        .map(|t| {
            let seen = t.count_ones() as i32;
            detect.powi(seen) * (1.0 - detect).powi(n as i32 - seen)
        })
        .collect();

    let words: Vec<SourceWord> = (0..1u64 << m)
        .map(|l| field.element(l).map(SourceWord))
        .collect::<Result<_>>()?;
    let codewords: Vec<Codeword> = words
        .iter()
        .map(|l| scheme.code.encode(&scheme.pack(l)))
        .collect::<Result<_>>()?;

    let seeds = (1u64 << m) - 1;
    let weight = 1.0 / (seeds as f64 * (1u64 << m) as f64);
    let width = 1usize << p.lambda;
    let mut joint: Vec<Vec<f64>> = Vec::new();
    for s in 1..=seeds {
        let seed = Seed::new(field.element(s)?)?;
        let mut rows: HashMap<u64, usize> = HashMap::new();
        for (l, c) in words.iter().zip(&codewords) {
            let msg = extract(l, &seed, &scheme.extractor)?
                .0
                .to_u64()
                .expect("oracle messages fit a word") as usize;
            for (t, &pt) in pattern_prob.iter().enumerate() {
                // Eve's view: which frames clicked, and the positions there.
                let mut key = t as u64;
                for (i, &sym) in c.0.iter().enumerate() {
                    if t >> i & 1 == 1 {
                        key |= (sym as u64) << (n + i * w);
                    }
                }
                let row = *rows.entry(key).or_insert_with(|| {
                    joint.push(vec![0.0; width]);
                    joint.len() - 1
                });
                joint[row][msg] += pt * weight;
            }
        }
    }
    statistical_distance_to_uniform(&joint)
}
