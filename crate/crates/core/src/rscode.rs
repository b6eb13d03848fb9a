//! (b, n, k) Reed-Solomon codes over GF(b), b = 2^w, n = b - 1.
//!
//! Evaluation-style encoding: the message is the coefficient vector of a
//! polynomial of degree < k, evaluated at `g^0, g^1, .., g^{n-1}` for the
//! symbol field's fixed generator `g`. Decoding handles erasures only.

use crate::error::{DecodeFailure, Error, Result};
use crate::galois::SymbolField;

/// A transmitted codeword, `n` symbols.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Codeword(pub Vec<u16>);

/// A received word: `None` marks an erased symbol.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ErasureWord(pub Vec<Option<u16>>);

impl ErasureWord {
    pub fn erasures(&self) -> usize {
        self.0.iter().filter(|s| s.is_none()).count()
    }
}

impl From<&Codeword> for ErasureWord {
    fn from(c: &Codeword) -> Self {
        ErasureWord(c.0.iter().copied().map(Some).collect())
    }
}

#[derive(Clone, Debug)]
pub struct RsCode {
    field: SymbolField,
    n: usize,
    k: usize,
    eval_points: Vec<u16>,
}

impl RsCode {
    /// Code over GF(2^bits) with message length `k`.
    pub fn new(bits: u32, k: usize) -> Result<Self> {
        Self::with_field(SymbolField::new(bits)?, k)
    }

    pub fn with_field(field: SymbolField, k: usize) -> Result<Self> {
        let n = field.order();
        if k == 0 || k > n {
            return Err(Error::usage(format!(
                "message length k = {k} outside 1..={n}"
            )));
        }
        let eval_points = (0..n).map(|i| field.exp(i)).collect();
        Ok(RsCode {
            field,
            n,
            k,
            eval_points,
        })
    }

    pub fn field(&self) -> &SymbolField {
        &self.field
    }

    /// Alphabet size `b`.
    pub fn alphabet(&self) -> usize {
        self.field.size()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn distance(&self) -> usize {
        self.n - self.k + 1
    }

    pub fn eval_points(&self) -> &[u16] {
        &self.eval_points
    }

    /// Value at `g^pos` given the coefficient logs from [`SymbolField::log_ext`].
    #[inline]
    fn eval_at_position(&self, logs: &[u32], pos: usize) -> u16 {
        let n = self.n;
        let mut acc = 0;
        let mut step = 0usize;
        for &l in logs {
            acc ^= self.field.exp_ext(step + l as usize);
            step += pos;
            step = if step >= n { step - n } else { step };
        }
        acc
    }

    fn logs(&self, coeffs: &[u16]) -> Vec<u32> {
        coeffs.iter().map(|&c| self.field.log_ext(c)).collect()
    }

    pub fn encode(&self, message: &[u16]) -> Result<Codeword> {
        if message.len() != self.k {
            return Err(Error::usage(format!(
                "message has {} symbols, code expects {}",
                message.len(),
                self.k
            )));
        }
        if let Some(&bad) = message.iter().find(|&&s| !self.field.contains(s)) {
            return Err(Error::usage(format!("symbol {bad} outside GF({})", self.alphabet())));
        }
        let logs = self.logs(message);
        Ok(Codeword(
            (0..self.n).map(|i| self.eval_at_position(&logs, i)).collect(),
        ))
    }

    /// Coefficients of the unique polynomial of degree < k through the
    /// given positions (indices into the codeword) and values.
    ///
    /// Lagrange form: with `master = prod (x - x_i)` and weights
    /// `w_i = y_i / prod_{j != i} (x_i - x_j)`, coefficient `d` is
    /// `sum_{e > d} master_e T_{e - d - 1}` where `T_t = sum_i w_i x_i^t`.
    pub fn interpolate(&self, positions: &[usize], values: &[u16]) -> Result<Vec<u16>> {
        let (n, k) = (self.n, self.k);
        if positions.len() != k || values.len() != k {
            return Err(Error::usage(format!("interpolation needs exactly {k} points")));
        }
        if let Some(&p) = positions.iter().find(|&&p| p >= n) {
            return Err(Error::usage(format!("position {p} outside the codeword")));
        }
        let f = &self.field;
        // x_j = g^{p_j}, so log x_j = p_j
        let xs: Vec<u16> = positions.iter().map(|&p| self.eval_points[p]).collect();
        let mut master = vec![0u16; k + 1];
        master[0] = 1;
        for (deg, &pj) in positions.iter().enumerate() {
            for i in (1..=deg + 1).rev() {
                master[i] = master[i - 1] ^ f.mul_log(master[i], pj as u32);
            }
            master[0] = f.mul_log(master[0], pj as u32);
        }

        let mut idx = Vec::with_capacity(k);
        let mut steps = Vec::with_capacity(k);
        for (i, (&xi, &yi)) in xs.iter().zip(values).enumerate() {
            let mut denom_log = 0usize;
            for (j, &xj) in xs.iter().enumerate() {
                if j != i {
                    if xi == xj {
                        return Err(Error::usage("interpolation positions must be distinct"));
                    }
                    denom_log += f.log_of(xi ^ xj) as usize;
                }
            }
            if yi != 0 {
                idx.push((f.log_of(yi) as usize + n - denom_log % n) % n);
                steps.push(positions[i]);
            }
        }
        let mut power_sums = vec![0u32; k];
        for t in power_sums.iter_mut() {
            let mut acc = 0u16;
            for (l, &p) in idx.iter_mut().zip(&steps) {
                acc ^= f.exp_ext(*l);
                *l += p;
                *l = if *l >= n { *l - n } else { *l };
            }
            *t = f.log_ext(acc);
        }
        let master_logs = self.logs(&master);
        Ok((0..k)
            .map(|d| {
                (d + 1..=k).fold(0u16, |acc, e| {
                    acc ^ f.exp_ext((master_logs[e] + power_sums[e - d - 1]) as usize)
                })
            })
            .collect())
    }

    /// Recovers the message from a word with at most `n - k` erasures.
    pub fn decode_erasures(&self, received: &ErasureWord) -> Result<Vec<u16>> {
        if received.0.len() != self.n {
            return Err(Error::usage(format!(
                "received word has {} symbols, code length is {}",
                received.0.len(),
                self.n
            )));
        }
        let known = received.0.len() - received.erasures();
        if known < self.k {
            return Err(DecodeFailure::TooManyErasures {
                erasures: self.n - known,
                correctable: self.n - self.k,
            }
            .into());
        }
        let mut positions = Vec::with_capacity(self.k);
        let mut values = Vec::with_capacity(self.k);
        let mut rest = Vec::with_capacity(known - self.k);
        for (i, s) in received.0.iter().enumerate() {
            if let Some(v) = *s {
                if !self.field.contains(v) {
                    return Err(Error::usage(format!("symbol {v} outside GF({})", self.alphabet())));
                }
                if positions.len() < self.k {
                    positions.push(i);
                    values.push(v);
                } else {
                    rest.push((i, v));
                }
            }
        }
        let coeffs = self.interpolate(&positions, &values)?;
        let logs = self.logs(&coeffs);
        for (i, v) in rest {
            if self.eval_at_position(&logs, i) != v {
                return Err(DecodeFailure::Corrupt { position: i }.into());
            }
        }
        Ok(coeffs)
    }
}
