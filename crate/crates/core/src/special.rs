//! Log-space combinatorics and discrete tails: binomial and Poisson.
//!
//! Large arguments use Stirling's series arranged so that the leading terms
//! never cancel catastrophically (`j ln(n/j)` style), which keeps the
//! absolute error of log-probabilities near machine epsilon even for
//! `n ~ 10^11`.

use std::f64::consts::PI;
use std::sync::OnceLock;

const TABLE: usize = 256;

fn table() -> &'static [f64; TABLE] {
    static T: OnceLock<[f64; TABLE]> = OnceLock::new();
    T.get_or_init(|| {
        let mut t = [0.0; TABLE];
        for i in 1..TABLE {
            t[i] = t[i - 1] + (i as f64).ln();
        }
        t
    })
}

/// Stirling remainder `ln x! - (x ln x - x + ln(2 pi x)/2)`.
fn stirling_tail(x: f64) -> f64 {
    let r = 1.0 / x;
    let r2 = r * r;
    r * (1.0 / 12.0 - r2 * (1.0 / 360.0 - r2 * (1.0 / 1260.0 - r2 / 1680.0)))
}

pub fn ln_factorial(n: u64) -> f64 {
    if (n as usize) < TABLE {
        return table()[n as usize];
    }
    let x = n as f64;
    x * x.ln() - x + 0.5 * (2.0 * PI * x).ln() + stirling_tail(x)
}

pub fn ln_choose(n: u64, j: u64) -> f64 {
    assert!(j <= n, "ln_choose: j > n");
    let j = j.min(n - j);
    if j == 0 {
        return 0.0;
    }
    if j < TABLE as u64 {
        let falling: f64 = (0..j).map(|i| ((n - i) as f64).ln()).sum();
        return falling - ln_factorial(j);
    }
    let (nf, jf) = (n as f64, j as f64);
    let rest = nf - jf;
    jf * (nf / jf).ln() - rest * (-jf / nf).ln_1p() + 0.5 * (nf / (2.0 * PI * jf * rest)).ln()
        + stirling_tail(nf)
        - stirling_tail(jf)
        - stirling_tail(rest)
}

/// `ln P[Poisson(mu) = j]` for `mu > 0`.
pub fn ln_poisson_pmf(mu: f64, j: u64) -> f64 {
    if j < TABLE as u64 {
        return -mu + j as f64 * mu.ln() - ln_factorial(j);
    }
    let x = j as f64;
    // -mu + j ln mu - (j ln j - j + ln(2 pi j)/2 + tail)
    (x - mu) - x * ((x - mu) / mu).ln_1p() - 0.5 * (2.0 * PI * x).ln() - stirling_tail(x)
}

/// Sums a geometric-like series of terms given the log of the first term
/// and the ratio between successive terms. Returns `ln(sum)`.
fn ln_series(ln_first: f64, mut ratio: impl FnMut(u64) -> Option<f64>) -> f64 {
    let mut sum = 1.0;
    let mut term = 1.0;
    let mut step = 0u64;
    while let Some(r) = ratio(step) {
        term *= r;
        sum += term;
        step += 1;
        if term < sum * 1e-18 {
            break;
        }
    }
    ln_first + sum.ln()
}

/// `P[Poisson(mu) >= j]`.
pub fn poisson_upper_tail(mu: f64, j: u64) -> f64 {
    if j == 0 {
        return 1.0;
    }
    if mu <= 0.0 {
        return 0.0;
    }
    if (j as f64) <= mu {
        return 1.0 - poisson_lower_tail(mu, j - 1);
    }
    let ln_first = ln_poisson_pmf(mu, j);
    ln_series(ln_first, |step| Some(mu / (j + step + 1) as f64))
        .exp()
        .min(1.0)
}

/// `P[Poisson(mu) <= j]`.
pub fn poisson_lower_tail(mu: f64, j: u64) -> f64 {
    if mu <= 0.0 {
        return 1.0;
    }
    if (j as f64) > mu {
        return 1.0 - poisson_upper_tail(mu, j + 1);
    }
    let ln_first = ln_poisson_pmf(mu, j);
    ln_series(ln_first, |step| {
        let i = j.checked_sub(step)?;
        (i > 0).then(|| i as f64 / mu)
    })
    .exp()
    .min(1.0)
}

/// `ln P[Binomial(n, p) = j]` given `ln p` and `ln(1 - p)`.
fn ln_binomial_pmf(n: u64, j: u64, ln_p: f64, ln_q: f64) -> f64 {
    let mut out = ln_choose(n, j);
    if j > 0 {
        out += j as f64 * ln_p;
    }
    if n > j {
        out += (n - j) as f64 * ln_q;
    }
    out
}

/// `P[Binomial(n, p) <= j]` where `p = 1 - q`. Taking `q` (not `p`) keeps
/// precision when `p` is tiny.
pub fn binomial_lower_tail(n: u64, j: u64, q: f64) -> f64 {
    if j >= n {
        return 1.0;
    }
    if q >= 1.0 {
        return 1.0;
    }
    if q <= 0.0 {
        return 0.0;
    }
    let p = 1.0 - q;
    let (ln_p, ln_q) = ((-q).ln_1p(), q.ln());
    let odds = q / p;
    if (j as f64) <= n as f64 * p {
        let ln_first = ln_binomial_pmf(n, j, ln_p, ln_q);
        ln_series(ln_first, |step| {
            let i = j.checked_sub(step)?;
            (i > 0).then(|| i as f64 / (n - i + 1) as f64 * odds)
        })
        .exp()
        .min(1.0)
    } else {
        let start = j + 1;
        let ln_first = ln_binomial_pmf(n, start, ln_p, ln_q);
        let upper = ln_series(ln_first, |step| {
            let i = start + step;
            (i < n).then(|| (n - i) as f64 / (i + 1) as f64 / odds)
        })
        .exp();
        (1.0 - upper).clamp(0.0, 1.0)
    }
}

/// Natural-log binary entropy.
pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -p * p.ln() - (1.0 - p) * (-p).ln_1p()
}

/// `ln(exp(a) + exp(b))`.
pub fn ln_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}
