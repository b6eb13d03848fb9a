//! Closed-form numerics: secrecy capacity, parameter choice, finite-length
//! error and secrecy bounds, and the smoothing-parameter optimizer.
//!
//! Everything is in nats. Secrecy bounds are assembled in log space; the
//! final exponentiation is clamped to `[-745, 745]` so that `b ~ 2^30`
//! parameter sets neither overflow nor silently turn into NaN.

use std::collections::HashMap;
use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::pipeline::SchemeParams;
use crate::special::{
    binary_entropy, binomial_lower_tail, ln_add_exp, ln_choose, poisson_upper_tail,
};

/// Exponent clamp for `exp`, in natural-log units.
pub const EXP_CLAMP: f64 = 745.0;

/// Smallest frame length `choose_params` accepts.
pub const MIN_FRAME_LEN: u64 = 8;

/// Largest frame length `choose_params` will produce.
pub const MAX_FRAME_LEN: u64 = 1 << 60;

/// `g(N) = (1 + N) ln(1 + N) - N ln N`, the thermal-state entropy.
fn thermal_entropy(mean: f64) -> f64 {
    if mean <= 0.0 {
        return 0.0;
    }
    (1.0 + mean) * mean.ln_1p() - mean * mean.ln()
}

/// Secrecy capacity of the pure-loss bosonic wiretap channel under a mean
/// photon number constraint `photon_budget` per channel use.
pub fn secrecy_capacity(eta: f64, photon_budget: f64) -> f64 {
    thermal_entropy(eta * photon_budget) - thermal_entropy((1.0 - eta) * photon_budget)
}

/// Low-photon approximation `(2 eta - 1) E ln(1/E)`.
pub fn secrecy_capacity_approx(eta: f64, photon_budget: f64) -> f64 {
    if photon_budget <= 0.0 {
        return 0.0;
    }
    (2.0 * eta - 1.0) * photon_budget * (1.0 / photon_budget).ln()
}

/// Asymptotic rate of the PPM scheme; coincides with
/// [`secrecy_capacity_approx`].
pub fn asymptotic_rate(eta: f64, photon_budget: f64) -> f64 {
    secrecy_capacity_approx(eta, photon_budget)
}

/// Real-valued frame length target `1 / (eta E ln(1 / (eta E)))`.
pub fn frame_len_target(eta: f64, photon_budget: f64) -> f64 {
    let x = eta * photon_budget;
    1.0 / (x * (1.0 / x).ln())
}

/// Picks `b`, `n`, `alpha^2` and `k` for a given budget and back-off `theta`.
/// The message length is left at zero.
pub fn choose_params(eta: f64, photon_budget: f64, theta: f64) -> Result<SchemeParams> {
    if !(photon_budget > 0.0) || !(eta > 0.5 && eta < 1.0) {
        return Err(Error::usage(format!(
            "need 0.5 < eta < 1 and E > 0 (got eta={eta}, E={photon_budget})"
        )));
    }
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::usage(format!("theta {theta} outside [0, 1]")));
    }
    let target = frame_len_target(eta, photon_budget);
    // x ln(1/x) peaks at 1/e, so the target is only meaningful below it.
    if !(target >= MIN_FRAME_LEN as f64) || eta * photon_budget >= (-1.0f64).exp() {
        return Err(Error::infeasible(format!(
            "frame length target {target:.3} below {MIN_FRAME_LEN}"
        )));
    }
    if target >= MAX_FRAME_LEN as f64 {
        return Err(Error::infeasible(format!(
            "frame length target {target:.3e} too large"
        )));
    }
    let b = 1u64 << (63 - (target as u64).leading_zeros());
    let n = b - 1;
    let alpha_sq = b as f64 * photon_budget;
    let detect = -(-eta * alpha_sq).exp_m1();
    let k = ((1.0 - theta) * detect * n as f64).floor() as u64;
    if k == 0 {
        return Err(Error::infeasible("message length k rounds to zero"));
    }
    SchemeParams::new(eta, b, k, alpha_sq, 0)
}

/// `I_q(n - k + 1, k)`: probability that more than `n - k` of `n` frames
/// are erased when each is erased independently with probability `q`.
pub fn pr_error_bound(n: u64, k: u64, q: f64) -> f64 {
    assert!(k >= 1 && k <= n, "pr_error_bound needs 1 <= k <= n");
    // #erasures >= n-k+1  <=>  #detections <= k-1
    binomial_lower_tail(n, k - 1, q)
}

/// `exp(-2 n theta^2)`, the exponential decay stated for the
/// `k = floor((1 - theta)(1 - q) n)` choice.
///
/// This is not a valid bound when the detection probability `1 - q` is
/// small; [`hoeffding_error_bound_for`] keeps the `(1 - q)^2` factor that
/// Hoeffding's inequality actually yields.
pub fn hoeffding_error_bound(n: u64, theta: f64) -> f64 {
    (-2.0 * n as f64 * theta * theta).exp()
}

/// Hoeffding bound `exp(-2 n theta^2 (1 - q)^2)` on the same event.
pub fn hoeffding_error_bound_for(n: u64, theta: f64, q: f64) -> f64 {
    let p = 1.0 - q;
    (-2.0 * n as f64 * theta * theta * p * p).exp()
}

/// `2 P[Poisson(mu) >= floor(s) + 1]`, i.e. `2 gamma(floor(s+1), mu) / floor(s)!`.
///
/// The factor 2 is kept as stated even though the plain tail already bounds
/// the probability of more than `s` photons.
pub fn eve_photon_tail(s: f64, mu: f64) -> Result<f64> {
    if !(s > mu) || mu < 0.0 {
        return Err(Error::usage(format!(
            "photon cutoff {s} must exceed the mean {mu}"
        )));
    }
    if mu == 0.0 {
        return Ok(0.0);
    }
    Ok(2.0 * poisson_upper_tail(mu, s.floor() as u64 + 1))
}

/// Bennett-inequality bound on the smoothing parameter for
/// `s = (1 + delta) mu`, `mu = (1 - eta) alpha^2 n`.
pub fn bennett_eps_prime(n: u64, eta: f64, alpha_sq: f64, delta: f64) -> f64 {
    let mu = (1.0 - eta) * alpha_sq * n as f64;
    let h = (1.0 + delta) * delta.ln_1p() - delta;
    (-0.5 * mu * h).exp()
}

/// Analytic max-entropy bound `(nb - 1 + s) H_b(s / (nb - 1 + s)) + ln s`.
pub fn hmax_bound(n: u64, b: u64, s: f64) -> f64 {
    assert!(s >= 1.0, "photon cutoff must be at least one");
    let modes = n as f64 * b as f64 - 1.0;
    let total = modes + s;
    // total * H(s/total) = s ln(total/s) + modes ln(total/modes)
    let spread = if modes > 0.0 {
        s * (total / s).ln() - modes * (-s / total).ln_1p()
    } else {
        total * binary_entropy(s / total)
    };
    spread + s.ln()
}

/// `ln sum_{i=0}^{floor(s)} C(nb - 1 + i, i)`: log-dimension of the
/// at-most-`s`-photon subspace over `nb` modes, vacuum included.
pub fn hmax_exact(n: u64, b: u64, s: f64) -> f64 {
    let modes = n * b;
    (0..=s.floor() as u64).fold(f64::NEG_INFINITY, |acc, i| {
        ln_add_exp(acc, ln_choose(modes - 1 + i, i))
    })
}

/// Smoothing and slack parameters of the secrecy bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SecurityBudget {
    /// Min-entropy smoothing.
    pub eps: f64,
    /// Max-entropy smoothing, derived from the photon cutoff.
    pub eps_prime: f64,
    /// Photon cutoff slack: `s = (1 + delta) (1 - eta) alpha^2 n`.
    pub delta: f64,
    /// Back-off of `k` below the expected number of detections.
    pub theta: f64,
    /// Photon cutoff `s` (at least one).
    pub photon_cutoff: f64,
}

impl SecurityBudget {
    /// Derives the cutoff and `eps'` for these parameters. `eps'` is the
    /// smaller of the incomplete-gamma and Bennett routes.
    pub fn derive(params: &SchemeParams, theta: f64, delta: f64, eps: f64) -> Result<Self> {
        if !(delta > 0.0) || !(eps > 0.0) {
            return Err(Error::usage("delta and eps must be positive"));
        }
        let mu = params.eve_mean_photons();
        let photon_cutoff = ((1.0 + delta) * mu).max(1.0);
        let gamma_route = eve_photon_tail(photon_cutoff, mu)?.min(1.0).sqrt();
        let bennett = bennett_eps_prime(params.n, params.eta, params.alpha_sq, delta);
        let budget = SecurityBudget {
            eps,
            eps_prime: gamma_route.min(bennett),
            delta,
            theta,
            photon_cutoff,
        };
        budget.check()?;
        Ok(budget)
    }

    fn check(&self) -> Result<()> {
        if !(self.eps_prime < self.eps / 2.0) {
            return Err(Error::infeasible(format!(
                "eps' = {:.3e} is not below eps/2 = {:.3e}",
                self.eps_prime,
                self.eps / 2.0
            )));
        }
        Ok(())
    }

    /// `2 ln(2 / (eps - 2 eps')^2)`.
    fn smoothing_penalty(&self) -> f64 {
        2.0 * (2.0f64.ln() - 2.0 * (self.eps - 2.0 * self.eps_prime).ln())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundReport {
    pub pr_error_bound: f64,
    /// Secrecy distance bound, clamped to 1.
    pub delta_bound: f64,
    /// Whether the unclamped secrecy bound exceeded 1.
    pub delta_vacuous: bool,
    pub rate_nats_per_use: f64,
    /// `k ln b`.
    pub hmin_term: f64,
    /// Analytic max-entropy bound at the photon cutoff.
    pub hmax_term: f64,
    pub eps_prime: f64,
    /// Both bounds are below one.
    pub feasible: bool,
}

/// Exponent `-k ln b + Hmax + 2 ln(2/(eps - 2 eps')^2)` without the message term.
fn entropy_deficit(p: &SchemeParams, budget: &SecurityBudget) -> (f64, f64, f64) {
    let hmin = p.k as f64 * (p.b as f64).ln();
    let hmax = hmax_bound(p.n, p.b, budget.photon_cutoff);
    (hmin, hmax, -hmin + hmax + budget.smoothing_penalty())
}

/// Finite-length error and secrecy bounds for one parameter set.
pub fn delta_bound(p: &SchemeParams, budget: &SecurityBudget) -> Result<BoundReport> {
    budget.check()?;
    let (hmin, hmax, deficit) = entropy_deficit(p, budget);
    let exponent = p.lambda as f64 * LN_2 + deficit;
    let half = (exponent / 2.0).clamp(-EXP_CLAMP, EXP_CLAMP);
    let raw = 0.5 * half.exp() + budget.eps;
    if raw.is_nan() {
        return Err(Error::Numeric("secrecy bound evaluated to NaN".into()));
    }
    let pr_error = pr_error_bound(p.n, p.k, p.erasure_probability());
    Ok(BoundReport {
        pr_error_bound: pr_error,
        delta_bound: raw.min(1.0),
        delta_vacuous: raw > 1.0,
        rate_nats_per_use: p.rate_nats_per_use(),
        hmin_term: hmin,
        hmax_term: hmax,
        eps_prime: budget.eps_prime,
        feasible: raw < 1.0 && pr_error < 1.0,
    })
}

/// Largest message length (bits) with secrecy bound at most `delta_target`.
pub fn max_lambda(p: &SchemeParams, budget: &SecurityBudget, delta_target: f64) -> Option<u64> {
    let slack = delta_target - budget.eps;
    if !(slack > 0.0) || budget.check().is_err() {
        return None;
    }
    let (_, _, deficit) = entropy_deficit(p, budget);
    // 0.5 exp((lambda ln2 + deficit)/2) <= slack
    let room = 2.0 * (2.0 * slack).ln() - deficit;
    if room < 0.0 {
        return None;
    }
    let mut lambda = ((room / LN_2).floor() as u64).min(p.extractor_bits());
    let mut probe = *p;
    loop {
        probe.lambda = lambda;
        match delta_bound(&probe, budget) {
            Ok(r) if r.delta_bound <= delta_target && !r.delta_vacuous => return Some(lambda),
            _ if lambda == 0 => return None,
            _ => lambda -= 1,
        }
    }
}

/// Grid layout of the coarse-to-fine search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchGrid {
    pub rounds: usize,
    /// Points per axis in the first round.
    pub points: usize,
    /// Step shrink factor between rounds.
    pub refinement: f64,
    pub theta_max: f64,
    pub delta_max: f64,
}

impl Default for SearchGrid {
    fn default() -> Self {
        SearchGrid {
            rounds: 3,
            points: 10,
            refinement: 10.0,
            theta_max: 0.5,
            delta_max: 5.0,
        }
    }
}

/// Final step sizes of the search along each axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Resolution {
    pub theta: f64,
    pub delta: f64,
    pub eps: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Optimization {
    pub eta: f64,
    pub photon_budget: f64,
    pub pr_error_target: f64,
    pub delta_target: f64,
    /// Parameters with the optimal message length; `None` when the
    /// photon budget cannot be mapped to a frame length at all.
    pub params: Option<SchemeParams>,
    pub budget: Option<SecurityBudget>,
    pub report: Option<BoundReport>,
    pub feasible: bool,
    pub rate_nats_per_use: f64,
    pub resolution: Resolution,
}

fn axis(center: Option<f64>, step: f64, points: usize, lo_open: f64, hi: f64, hi_open: bool) -> Vec<f64> {
    let in_range = |v: f64| v > lo_open && (if hi_open { v < hi } else { v <= hi + 1e-12 });
    match center {
        None => (1..=points)
            .map(|i| lo_open + step * i as f64)
            .filter(|&v| in_range(v))
            .collect(),
        Some(c) => (-(points as i64)..=points as i64)
            .map(|i| c + step * i as f64)
            .filter(|&v| in_range(v))
            .collect(),
    }
}

#[derive(Clone, Copy)]
struct Candidate {
    lambda: u64,
    theta: f64,
    delta: f64,
    eps: f64,
}

impl Candidate {
    /// Larger lambda, then smaller eps, theta, delta.
    fn beats(&self, other: &Candidate) -> bool {
        (self.lambda, -self.eps, -self.theta, -self.delta)
            .partial_cmp(&(other.lambda, -other.eps, -other.theta, -other.delta))
            == Some(std::cmp::Ordering::Greater)
    }
}

/// Maximizes the message length over `(theta, delta, eps)` subject to
/// `pr_error_bound <= pr_error_target` and `delta_bound <= delta_target`.
pub fn optimize(eta: f64, photon_budget: f64, pr_error_target: f64, delta_target: f64) -> Optimization {
    optimize_with(eta, photon_budget, pr_error_target, delta_target, &SearchGrid::default())
}

pub fn optimize_with(
    eta: f64,
    photon_budget: f64,
    pr_error_target: f64,
    delta_target: f64,
    grid: &SearchGrid,
) -> Optimization {
    let mut steps = Resolution {
        theta: grid.theta_max / grid.points as f64,
        delta: grid.delta_max / grid.points as f64,
        eps: delta_target / grid.points as f64,
    };
    let mut out = Optimization {
        eta,
        photon_budget,
        pr_error_target,
        delta_target,
        params: None,
        budget: None,
        report: None,
        feasible: false,
        rate_nats_per_use: 0.0,
        resolution: steps,
    };
    let Ok(base) = choose_params(eta, photon_budget, 0.0) else {
        return out;
    };
    out.params = Some(base);
    if !(delta_target > 0.0) {
        return out;
    }
    let q = base.erasure_probability();
    let detect = -(-eta * base.alpha_sq).exp_m1();

    let mut k_cache: HashMap<u64, bool> = HashMap::new();
    let mut k_ok = |theta: f64| -> Option<u64> {
        let k = ((1.0 - theta) * detect * base.n as f64).floor() as u64;
        if k == 0 {
            return None;
        }
        let ok = *k_cache
            .entry(k)
            .or_insert_with(|| pr_error_bound(base.n, k, q) <= pr_error_target);
        ok.then_some(k)
    };

    let mut best: Option<Candidate> = None;
    for round in 0..grid.rounds {
        let center = best;
        let thetas = axis(center.map(|c| c.theta), steps.theta, grid.points, 0.0, grid.theta_max, false);
        let deltas = axis(center.map(|c| c.delta), steps.delta, grid.points, 0.0, grid.delta_max, false);
        let epss = axis(center.map(|c| c.eps), steps.eps, grid.points, 0.0, delta_target, true);
        let valid_k: Vec<(f64, u64)> = thetas
            .iter()
            .filter_map(|&t| k_ok(t).map(|k| (t, k)))
            .collect();
        for &delta in &deltas {
            for &eps in &epss {
                let Ok(budget) = SecurityBudget::derive(&base, 0.0, delta, eps) else {
                    continue;
                };
                for &(theta, k) in &valid_k {
                    let mut p = base;
                    p.k = k;
                    let Some(lambda) = max_lambda(&p, &budget, delta_target) else {
                        continue;
                    };
                    if lambda == 0 {
                        continue;
                    }
                    let cand = Candidate { lambda, theta, delta, eps };
                    if best.is_none_or(|b| cand.beats(&b)) {
                        best = Some(cand);
                    }
                }
            }
        }
        out.resolution = steps;
        if best.is_none() {
            log::debug!("E={photon_budget:e}: no feasible point in round {round}");
            break;
        }
        steps = Resolution {
            theta: steps.theta / grid.refinement,
            delta: steps.delta / grid.refinement,
            eps: steps.eps / grid.refinement,
        };
    }

    let Some(c) = best else {
        return out;
    };
    let mut p = base;
    p.k = k_ok(c.theta).expect("candidate theta was feasible");
    p.lambda = c.lambda;
    let budget = SecurityBudget::derive(&p, c.theta, c.delta, c.eps).expect("candidate budget was valid");
    let report = delta_bound(&p, &budget).expect("candidate budget was valid");
    out.params = Some(p);
    out.budget = Some(budget);
    out.report = Some(report);
    out.feasible = true;
    out.rate_nats_per_use = p.rate_nats_per_use();
    out
}

/// Smallest secrecy bound over `(delta, eps)` for fixed parameters
/// (including their message length). The reported `theta` is the back-off
/// implied by `k`, clamped at zero.
pub fn best_budget(p: &SchemeParams, grid: &SearchGrid) -> Result<(SecurityBudget, BoundReport)> {
    let detect = -(-p.eta * p.alpha_sq).exp_m1();
    let theta = (1.0 - p.k as f64 / (detect * p.n as f64)).max(0.0);
    let mut steps = (grid.delta_max / grid.points as f64, 1.0 / grid.points as f64);
    let mut best: Option<(SecurityBudget, BoundReport)> = None;
    for _ in 0..grid.rounds {
        let center = best.as_ref().map(|(b, _)| (b.delta, b.eps));
        let deltas = axis(center.map(|c| c.0), steps.0, grid.points, 0.0, grid.delta_max, false);
        let epss = axis(center.map(|c| c.1), steps.1, grid.points, 0.0, 1.0, true);
        for &delta in &deltas {
            for &eps in &epss {
                let Ok(budget) = SecurityBudget::derive(p, theta, delta, eps) else {
                    continue;
                };
                let report = delta_bound(p, &budget)?;
                let better = match &best {
                    None => true,
                    Some((b, r)) => {
                        (report.delta_bound, budget.eps, budget.delta)
                            < (r.delta_bound, b.eps, b.delta)
                    }
                };
                if better {
                    best = Some((budget, report));
                }
            }
        }
        steps = (steps.0 / grid.refinement, steps.1 / grid.refinement);
    }
    best.ok_or_else(|| Error::infeasible("no smoothing budget satisfies eps' < eps/2"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::ln_factorial;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn capacity_edges() {
        assert_eq!(secrecy_capacity(0.8, 0.0), 0.0);
        for e in [1e-1, 1e-4, 1e-8] {
            assert!(secrecy_capacity(0.5, e).abs() < 1e-15);
        }
        // 50-digit reference evaluation.
        assert!(rel(secrecy_capacity(0.8, 0.1), 0.186_737_076_021_012_8) < 1e-12);
    }

    #[test]
    fn capacity_positive_and_increasing_in_eta() {
        for e in [1e-2, 1e-5, 1e-9] {
            let mut last = 0.0;
            for i in 1..50 {
                let eta = 0.5 + 0.01 * i as f64;
                let c = secrecy_capacity(eta, e);
                assert!(c > 0.0 && c > last);
                last = c;
            }
        }
    }

    #[test]
    fn approximation_edges_and_trend() {
        assert_eq!(secrecy_capacity_approx(0.5, 1e-3), 0.0);
        assert_eq!(secrecy_capacity_approx(0.8, 1.0), 0.0);
        assert_eq!(asymptotic_rate(0.8, 1.0), 0.0);
        let mut gap = f64::INFINITY;
        for d in 2..=12 {
            let e = 10f64.powi(-d);
            assert_eq!(asymptotic_rate(0.8, e), secrecy_capacity_approx(0.8, e));
            let g = (secrecy_capacity_approx(0.8, e) / secrecy_capacity(0.8, e) - 1.0).abs();
            assert!(g < gap);
            gap = g;
        }
    }

    #[test]
    fn choose_params_worked_example() {
        let target = frame_len_target(0.8, 1e-4);
        let direct = 1.0 / (8e-5 * (1.0f64 / 8e-5).ln());
        assert!((target - direct).abs() < 1e-9);
        assert!((target - 1325.1).abs() < 0.1, "{target}");
        let p = choose_params(0.8, 1e-4, 0.1).unwrap();
        assert_eq!((p.b, p.n), (1024, 1023));
        assert!((p.alpha_sq - 0.1024).abs() < 1e-15);
        let detect = 1.0 - (-0.08192f64).exp();
        assert_eq!(p.k, (0.9 * detect * 1023.0).floor() as u64);
    }

    #[test]
    fn choose_params_degenerate() {
        assert!(matches!(choose_params(0.8, 1e-4, 1.0), Err(Error::Infeasible(_))));
        assert!(matches!(choose_params(0.8, 0.05, 0.1), Err(Error::Infeasible(_))));
        assert!(matches!(choose_params(0.8, 0.3, 0.1), Err(Error::Infeasible(_))));
        assert!(choose_params(0.8, -1.0, 0.1).is_err());
    }

    #[test]
    fn frame_len_monotone_in_budget() {
        let mut last = 0;
        for i in 0..200 {
            let e = 10f64.powf(-2.5 - i as f64 * 0.05);
            let b = choose_params(0.8, e, 0.1).unwrap().b;
            assert!(b >= last);
            last = b;
        }
    }

    #[test]
    fn pr_error_examples() {
        assert_eq!(pr_error_bound(10, 3, 0.0), 0.0);
        assert_eq!(pr_error_bound(10, 3, 1.0), 1.0);
        assert!((pr_error_bound(3, 2, 0.5) - 0.5).abs() < 1e-15);
        // 50-digit binomial sums.
        let q = (-0.08192f64).exp();
        assert!(rel(pr_error_bound(1023, 40, q), 8.804_973_140_907_760e-8) < 1e-11);
        assert!(rel(pr_error_bound(63, 5, 0.9), 0.232_362_416_830_435_5) < 1e-12);
        assert!(rel(pr_error_bound(255, 100, 0.5), 2.157_459_195_784_296e-4) < 1e-12);
        assert!((pr_error_bound(255, 200, 0.5) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn corrected_hoeffding_dominates_exact_tail() {
        for n in [7u64, 15, 31, 63, 127, 255, 511, 1023] {
            for theta in [0.01, 0.05, 0.1, 0.2, 0.3] {
                for q in [0.05, 0.3, 0.6, 0.9, 0.97] {
                    let k = ((1.0 - theta) * (1.0 - q) * n as f64).floor() as u64;
                    if k == 0 {
                        continue;
                    }
                    let exact = pr_error_bound(n, k, q);
                    assert!(exact <= hoeffding_error_bound_for(n, theta, q) + 1e-15);
                }
            }
        }
    }

    #[test]
    fn uncorrected_hoeffding_fails_at_high_erasure() {
        // n = 63, theta = 0.2, q = 0.9: k = 5 and the exact tail is 0.232.
        let exact = pr_error_bound(63, 5, 0.9);
        assert!(exact > hoeffding_error_bound(63, 0.2));
        // At low erasure probability the stated form does hold on this grid.
        for n in [7u64, 63, 255, 1023] {
            for theta in [0.01, 0.1, 0.3] {
                let q = 0.05;
                let k = ((1.0 - theta) * (1.0 - q) * n as f64).floor() as u64;
                assert!(pr_error_bound(n, k, q) <= hoeffding_error_bound(n, theta));
            }
        }
    }

    #[test]
    fn hoeffding_edges() {
        assert_eq!(hoeffding_error_bound(100, 0.0), 1.0);
        let mut last = 1.0;
        for n in [1u64, 10, 100, 1000, 10_000] {
            let h = hoeffding_error_bound(n, 0.1);
            assert!(h < last);
            last = h;
        }
    }

    #[test]
    fn eve_photon_tail_examples() {
        assert_eq!(eve_photon_tail(3.0, 0.0).unwrap(), 0.0);
        // 2 P[Poisson(1) >= 11], direct sum
        let direct: f64 = 2.0
            * (11..60)
                .map(|j| (-1.0 - ln_factorial(j)).exp())
                .sum::<f64>();
        let got = eve_photon_tail(10.0, 1.0).unwrap();
        assert!(rel(got, direct) < 1e-12);
        assert!(rel(got, 2.009_553_275_138_187_4e-8) < 1e-12);
        assert!(rel(eve_photon_tail(30.5, 12.25).unwrap(), 1.007_115_790_516_669_6e-5) < 1e-11);
        assert!(rel(eve_photon_tail(260.0, 200.0).unwrap(), 4.186_499_413_579_056e-5) < 1e-10);
        assert!(eve_photon_tail(1.0, 1.0).is_err());
        let mut last = 1.0;
        for s in 6..60 {
            let t = eve_photon_tail(s as f64, 5.0).unwrap();
            assert!(t <= last);
            last = t;
        }
    }

    #[test]
    fn bennett_examples() {
        assert!((bennett_eps_prime(100, 0.8, 1.0, 1e-12) - 1.0).abs() < 1e-12);
        // mu = (1 - 0.8) * 5 * 100 = 100
        let got = bennett_eps_prime(100, 0.8, 5.0, 0.5);
        let want = (-50.0 * (1.5 * 1.5f64.ln() - 0.5)).exp();
        assert!(rel(got, want) < 1e-13);
        assert!(rel(got, 4.472_162_940_364_42e-3) < 1e-12);
        let mut last = 1.0;
        for n in [10u64, 100, 1000, 10_000] {
            let v = bennett_eps_prime(n, 0.8, 1.0, 0.3);
            assert!(v < last);
            last = v;
        }
    }

    #[test]
    fn hmax_exact_small_cases() {
        // s = 1: C(nb-1, 0) + C(nb, 1) = 1 + nb
        assert!((hmax_exact(10, 10, 1.0) - 101f64.ln()).abs() < 1e-13);
        assert!(rel(hmax_exact(100, 10, 7.0), 39.857_055_851_979_65) < 1e-13);
        // hockey stick identity: sum = C(nb + S, S)
        for (n, b, s) in [(7u64, 8u64, 5.0), (31, 32, 12.3), (63, 64, 40.0)] {
            let fl = s as u64;
            assert!((hmax_exact(n, b, s) - ln_choose(n * b + fl, fl)).abs() < 1e-10);
        }
    }

    #[test]
    fn hmax_analytic_dominates_exact() {
        for nb in [10u64, 30, 100, 300, 1000, 3000, 10_000] {
            for s in 1..=50 {
                let s = s as f64;
                assert!(
                    hmax_bound(nb, 1, s) >= hmax_exact(nb, 1, s),
                    "nb={nb} s={s}"
                );
            }
        }
    }

    #[test]
    fn hmax_entropy_limit() {
        // Tiny cutoff relative to mode count: spread term ~ s ln(nb/s) + s
        let v = hmax_bound(1 << 20, 1 << 20, 1.0);
        let modes = (1u64 << 40) as f64 - 1.0;
        assert!(rel(v, (modes + 1.0) * binary_entropy(1.0 / (modes + 1.0))) < 1e-9);
        assert!(hmax_bound(1, 1, 1.0) >= 0.0);
    }

    fn small_params(lambda: u64) -> SchemeParams {
        let mut p = choose_params(0.8, 1e-6, 0.05).unwrap();
        p.lambda = lambda;
        p
    }

    #[test]
    fn delta_bound_lambda_doubling() {
        let p0 = small_params(0);
        let budget = SecurityBudget::derive(&p0, 0.05, 0.2, 0.02).unwrap();
        let r0 = delta_bound(&p0, &budget).unwrap();
        // entropy surplus: first term underflows, bound collapses to eps
        assert!((r0.delta_bound - budget.eps).abs() < 1e-15);
        let first = |l: u64| {
            let mut p = p0;
            p.lambda = l;
            delta_bound(&p, &budget).unwrap().delta_bound - budget.eps
        };
        let lmax = max_lambda(&p0, &budget, 0.05).unwrap();
        let (a, b) = (first(lmax - 20), first(lmax - 19));
        assert!(rel(b * b, 2.0 * a * a) < 1e-9, "{a} {b}");
    }

    #[test]
    fn delta_bound_matches_independent_evaluation() {
        let opt = optimize(0.8, 1e-5, 1e-6, 0.05);
        assert!(opt.feasible);
        let p = opt.params.unwrap();
        let bud = opt.budget.unwrap();
        // Re-evaluate the closed form from scratch, term by term.
        let modes = (p.n * p.b) as f64 - 1.0;
        let s = bud.photon_cutoff;
        let x = s / (modes + s);
        let hb = -x * x.ln() - (1.0 - x) * (1.0 - x).ln();
        let exponent = p.lambda as f64 * 2f64.ln() - p.k as f64 * (p.b as f64).ln()
            + (modes + s) * hb
            + s.ln()
            + 2.0 * (2.0 / (bud.eps - 2.0 * bud.eps_prime).powi(2)).ln();
        let want = 0.5 * exponent.exp().sqrt() + bud.eps;
        let got = opt.report.unwrap().delta_bound;
        assert!((got - want).abs() < 1e-9, "{got} vs {want}");
        assert!(got <= 0.05);
    }

    #[test]
    fn budget_requires_eps_prime_below_half_eps() {
        let p = small_params(0);
        assert!(matches!(
            SecurityBudget::derive(&p, 0.05, 1e-6, 0.01),
            Err(Error::Infeasible(_))
        ));
        let mut b = SecurityBudget::derive(&p, 0.05, 0.5, 0.01).unwrap();
        b.eps_prime = 0.006;
        assert!(delta_bound(&p, &b).is_err());
    }

    #[test]
    fn optimizer_examples() {
        let hi = optimize(0.8, 1e-3, 1e-6, 0.05);
        assert!(!hi.feasible);
        assert_eq!(hi.rate_nats_per_use, 0.0);

        let lo = optimize(0.8, 1e-6, 1e-6, 0.05);
        assert!(lo.feasible);
        assert!(lo.rate_nats_per_use > 0.0);
        assert!(lo.rate_nats_per_use < secrecy_capacity(0.8, 1e-6));
        let r = lo.report.unwrap();
        assert!(r.pr_error_bound <= 1e-6 && r.delta_bound <= 0.05);
        assert!(lo.resolution.theta < 0.001);

        let edge = optimize(0.5 + 1e-9, 1e-6, 1e-6, 0.05);
        assert_eq!(edge.rate_nats_per_use, 0.0);

        assert!(!optimize(0.8, 1e-6, 1e-6, 0.0).feasible);
    }

    #[test]
    fn optimizer_is_deterministic() {
        let a = optimize(0.8, 3e-6, 1e-6, 0.05);
        let b = optimize(0.8, 3e-6, 1e-6, 0.05);
        assert_eq!(a, b);
    }
}
