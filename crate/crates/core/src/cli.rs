//! `ppmwt` command line: formula evaluation, bound sweeps, Monte-Carlo runs
//! and a self-test. Every data command writes CSV.
//!
//! Options come from flags and, optionally, a `key = value` config file
//! (`#` starts a comment). Keys are the long flag names without dashes
//! prefix, e.g. `eta = 0.8` or `E-sweep = 1e-9:1e-3:1`. Flags win.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::{self, SearchGrid};
use crate::error::{Error, Result};
use crate::extractor::{extract, invert, BitString, ExtractorSpec, LocalRandomness, Message, Seed};
use crate::galois::{gf_add, gf_inv, gf_mul, FieldSpec};
use crate::pipeline::{self, Scheme, SchemeParams};
use crate::rscode::{ErasureWord, RsCode};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "ppmwt", version, about = "Secret communication over the pure-loss bosonic wiretap channel")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Secrecy capacity and its low-photon approximation.
    Capacity,
    /// Frame length, pulse energy and code dimension for each budget.
    Params,
    /// Error and secrecy bounds for explicit or derived parameters.
    Bounds,
    /// Maximize the secret-key rate under error and secrecy targets.
    Optimize,
    /// Monte-Carlo decoding error against the analytic bound.
    Simulate,
    /// Exhaustive small-instance checks.
    Selftest,
}

#[derive(Args, Debug, Default, Clone)]
struct Flags {
    /// Channel transmissivity, in (0.5, 1).
    #[arg(long, global = true)]
    eta: Option<f64>,
    /// Mean photons per channel use.
    #[arg(long = "E", global = true)]
    e: Option<f64>,
    /// Log-spaced sweep lo:hi:points_per_decade.
    #[arg(long = "E-sweep", global = true)]
    e_sweep: Option<String>,
    /// Largest acceptable decoding error probability.
    #[arg(long, global = true)]
    pr_error_target: Option<f64>,
    /// Largest acceptable secrecy distance.
    #[arg(long, global = true)]
    delta_target: Option<f64>,
    /// Monte-Carlo trials per parameter set.
    #[arg(long, global = true)]
    trials: Option<u64>,
    #[arg(long, global = true)]
    rng_seed: Option<u64>,
    /// Worker threads (results do not depend on this).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// key=value file; command-line flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write CSV here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Frame length (power of two).
    #[arg(long, global = true)]
    b: Option<u64>,
    /// Code dimension.
    #[arg(long, global = true)]
    k: Option<u64>,
    /// Pulse mean photon number.
    #[arg(long, global = true)]
    alpha_sq: Option<f64>,
    /// Message length in bits.
    #[arg(long, global = true)]
    lambda: Option<u64>,
    /// Back-off of k below the expected detections.
    #[arg(long, global = true)]
    theta: Option<f64>,
    /// Corrupt one code symbol after encoding in the self-test.
    #[arg(long, global = true)]
    inject_fault: bool,
}

/// Fully resolved options of one invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub eta: f64,
    pub energies: Vec<f64>,
    pub pr_error_target: f64,
    pub delta_target: f64,
    pub trials: u64,
    pub rng_seed: u64,
    pub workers: usize,
    pub out: Option<PathBuf>,
    pub b: Option<u64>,
    pub k: Option<u64>,
    pub alpha_sq: Option<f64>,
    pub lambda: Option<u64>,
    pub theta: f64,
    pub inject_fault: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            eta: 0.8,
            energies: parse_sweep("1e-9:1e-3:1").expect("default sweep parses"),
            pr_error_target: 1e-6,
            delta_target: 0.05,
            trials: 100_000,
            rng_seed: 0,
            workers: 1,
            out: None,
            b: None,
            k: None,
            alpha_sq: None,
            lambda: None,
            theta: 0.1,
            inject_fault: false,
        }
    }
}

const CONFIG_KEYS: &[&str] = &[
    "eta", "E", "E-sweep", "pr-error-target", "delta-target", "trials", "rng-seed", "workers",
    "out", "b", "k", "alpha-sq", "lambda", "theta", "inject-fault",
];

/// Parses a `key = value` config file body.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::usage(format!("config line {}: expected key = value", no + 1)))?;
        let key = key.trim();
        if !CONFIG_KEYS.contains(&key) {
            return Err(Error::usage(format!("config line {}: unknown key `{key}`", no + 1)));
        }
        out.insert(key.to_string(), value.trim().to_string());
    }
    Ok(out)
}

fn parse_value<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::usage(format!("cannot parse {key} = `{v}`")))
}

/// `lo * 10^(i / per_decade)` from `lo` up to `hi` inclusive.
pub fn parse_sweep(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [lo, hi, per] = parts[..] else {
        return Err(Error::usage(format!("sweep `{spec}` is not lo:hi:points_per_decade")));
    };
    let lo: f64 = parse_value("sweep start", lo)?;
    let hi: f64 = parse_value("sweep end", hi)?;
    let per: u32 = parse_value("points per decade", per)?;
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) || per == 0 {
        return Err(Error::usage(format!("sweep `{spec}` needs 0 < lo <= hi and points >= 1")));
    }
    let steps = ((hi / lo).log10() * per as f64 + 1e-9).floor() as u32;
    let lo_text = format!("{lo:e}");
    let (mant, exp) = lo_text.split_once('e').expect("exponent notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    Ok((0..=steps)
        .map(|i| {
            if i % per == 0 {
                // whole decades are parsed from text so 1e-5 is exactly 1e-5
                format!("{mant}e{}", exp + (i / per) as i32)
                    .parse()
                    .expect("valid float")
            } else {
                lo * 10f64.powf(i as f64 / per as f64)
            }
        })
        .collect())
}

impl RunConfig {
    fn resolve(flags: &Flags, file: &BTreeMap<String, String>) -> Result<Self> {
        let mut c = RunConfig::default();
        let get = |key: &str| file.get(key).map(String::as_str);
        macro_rules! merge {
            ($field:ident, $flag:expr, $key:literal) => {
                if let Some(v) = $flag {
                    c.$field = v;
                } else if let Some(v) = get($key) {
                    c.$field = parse_value($key, v)?;
                }
            };
        }
        macro_rules! merge_opt {
            ($field:ident, $flag:expr, $key:literal) => {
                if let Some(v) = $flag {
                    c.$field = Some(v);
                } else if let Some(v) = get($key) {
                    c.$field = Some(parse_value($key, v)?);
                }
            };
        }
        merge!(eta, flags.eta, "eta");
        merge!(pr_error_target, flags.pr_error_target, "pr-error-target");
        merge!(delta_target, flags.delta_target, "delta-target");
        merge!(trials, flags.trials, "trials");
        merge!(rng_seed, flags.rng_seed, "rng-seed");
        merge!(workers, flags.workers, "workers");
        merge!(theta, flags.theta, "theta");
        merge_opt!(out, flags.out.clone(), "out");
        merge_opt!(b, flags.b, "b");
        merge_opt!(k, flags.k, "k");
        merge_opt!(alpha_sq, flags.alpha_sq, "alpha-sq");
        merge_opt!(lambda, flags.lambda, "lambda");
        c.inject_fault = flags.inject_fault
            || get("inject-fault").map(|v| parse_value("inject-fault", v)).transpose()?.unwrap_or(false);

        // A single E or a sweep; flags of either kind beat the file.
        let energy = match (flags.e, &flags.e_sweep) {
            (Some(e), _) => Some(vec![e]),
            (None, Some(s)) => Some(parse_sweep(s)?),
            (None, None) => match (get("E"), get("E-sweep")) {
                (Some(e), _) => Some(vec![parse_value("E", e)?]),
                (None, Some(s)) => Some(parse_sweep(s)?),
                (None, None) => None,
            },
        };
        if let Some(e) = energy {
            c.energies = e;
        }
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<()> {
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return Err(Error::usage(format!("eta {} outside (0, 1)", self.eta)));
        }
        if let Some(&e) = self.energies.iter().find(|&&e| !(e > 0.0 && e.is_finite())) {
            return Err(Error::usage(format!("photon budget {e} must be positive")));
        }
        if !(self.pr_error_target > 0.0 && self.pr_error_target < 1.0) {
            return Err(Error::usage("pr-error-target must lie in (0, 1)"));
        }
        if !(self.delta_target >= 0.0 && self.delta_target < 1.0) {
            return Err(Error::usage("delta-target must lie in [0, 1)"));
        }
        if !(0.0..1.0).contains(&self.theta) {
            return Err(Error::usage("theta must lie in [0, 1)"));
        }
        if self.workers == 0 || self.trials == 0 {
            return Err(Error::usage("workers and trials must be positive"));
        }
        Ok(())
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| Error::usage(format!("cannot start worker pool: {e}")))
    }

    /// The parameter set given by `--b/--k/--alpha-sq`, if any was given.
    fn explicit_params(&self) -> Result<Option<SchemeParams>> {
        match (self.b, self.k, self.alpha_sq) {
            (None, None, None) => Ok(None),
            (Some(b), Some(k), Some(a)) => {
                SchemeParams::new(self.eta, b, k, a, self.lambda.unwrap_or(1)).map(Some)
            }
            _ => Err(Error::usage("explicit parameters need all of --b, --k and --alpha-sq")),
        }
    }
}

/// Parses the command line (and config file) into a command and options.
fn parse(args: impl IntoIterator<Item = OsString>) -> Result<(Command, RunConfig)> {
    let cli = Cli::try_parse_from(args).map_err(|e| Error::Usage(e.to_string()))?;
    let file = match &cli.flags.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::usage(format!("cannot read {}: {e}", path.display())))?;
            parse_config(&text)?
        }
        None => BTreeMap::new(),
    };
    Ok((cli.command, RunConfig::resolve(&cli.flags, &file)?))
}

/// Round-trip float formatting: 17 significant digits, `.` decimal point.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn cmd_capacity(c: &RunConfig) -> Result<String> {
    Ok(csv(
        &["E", "eta", "capacity_nats", "approx_nats"],
        c.energies.iter().map(|&e| {
            vec![
                num(e),
                num(c.eta),
                num(bounds::secrecy_capacity(c.eta, e)),
                num(bounds::secrecy_capacity_approx(c.eta, e)),
            ]
        }),
    ))
}

pub fn cmd_params(c: &RunConfig) -> Result<String> {
    let rows = c
        .energies
        .iter()
        .map(|&e| {
            let p = bounds::choose_params(c.eta, e, c.theta)?;
            Ok(vec![
                num(e),
                num(c.eta),
                num(c.theta),
                p.b.to_string(),
                p.n.to_string(),
                p.k.to_string(),
                num(p.alpha_sq),
                num(p.erasure_probability()),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(csv(
        &["E", "eta", "theta", "b", "n", "k", "alpha_sq", "erasure_prob"],
        rows,
    ))
}

pub fn cmd_bounds(c: &RunConfig) -> Result<String> {
    let sets: Vec<SchemeParams> = match c.explicit_params()? {
        Some(p) => vec![p],
        None => c
            .energies
            .iter()
            .map(|&e| {
                let mut p = bounds::choose_params(c.eta, e, c.theta)?;
                p.lambda = c.lambda.unwrap_or(1).min(p.extractor_bits());
                Ok(p)
            })
            .collect::<Result<_>>()?,
    };
    let mut rows = Vec::new();
    for p in sets {
        let (budget, r) = bounds::best_budget(&p, &SearchGrid::default())?;
        rows.push(vec![
            num(p.photon_budget),
            p.b.to_string(),
            p.n.to_string(),
            p.k.to_string(),
            p.lambda.to_string(),
            num(p.alpha_sq),
            num(budget.theta),
            num(budget.delta),
            num(budget.eps),
            num(budget.eps_prime),
            num(r.pr_error_bound),
            num(r.delta_bound),
            r.delta_vacuous.to_string(),
            num(r.rate_nats_per_use),
        ]);
    }
    Ok(csv(
        &[
            "E", "b", "n", "k", "lambda_bits", "alpha_sq", "theta", "delta", "eps", "eps_prime",
            "pr_error_bound", "delta_bound", "delta_vacuous", "rate_nats",
        ],
        rows,
    ))
}

pub fn cmd_optimize(c: &RunConfig) -> Result<String> {
    if !(c.eta > 0.5) {
        return Err(Error::usage("optimize needs eta > 0.5"));
    }
    let results: Vec<bounds::Optimization> = c.pool()?.install(|| {
        c.energies
            .par_iter()
            .map(|&e| bounds::optimize(c.eta, e, c.pr_error_target, c.delta_target))
            .collect()
    });
    let rows = results.iter().map(|o| {
        let capacity = bounds::secrecy_capacity(o.eta, o.photon_budget);
        let p = o.params;
        let field = |f: fn(&SchemeParams) -> String| p.as_ref().map_or(String::new(), f);
        let budget = |f: fn(&bounds::SecurityBudget) -> f64| o.budget.as_ref().map_or(String::new(), |b| num(f(b)));
        vec![
            num(o.photon_budget),
            field(|p| p.b.to_string()),
            field(|p| p.n.to_string()),
            if o.feasible { field(|p| p.k.to_string()) } else { String::new() },
            if o.feasible { field(|p| p.lambda.to_string()) } else { "0".into() },
            field(|p| num(p.alpha_sq)),
            budget(|b| b.theta),
            budget(|b| b.delta),
            budget(|b| b.eps),
            num(o.rate_nats_per_use),
            num(capacity),
            o.feasible.to_string(),
        ]
    });
    Ok(csv(
        &[
            "E", "b", "n", "k", "lambda_bits", "alpha_sq", "theta", "delta", "eps", "rate_nats",
            "capacity_nats", "feasible",
        ],
        rows.collect::<Vec<_>>(),
    ))
}

/// Parameter sets `simulate` runs when none are given: `b` from 8 to 64,
/// `q` in {0.3, 0.6} and `k` backed off by `theta` from `(1 - q) n`.
pub fn default_simulation_grid(eta: f64, theta: f64) -> Result<Vec<SchemeParams>> {
    let mut out = Vec::new();
    for b in [8u64, 16, 32, 64] {
        for q in [0.3f64, 0.6] {
            let alpha_sq = -q.ln() / eta;
            let k = ((1.0 - theta) * (1.0 - q) * (b - 1) as f64).floor() as u64;
            out.push(SchemeParams::new(eta, b, k.max(1), alpha_sq, 1)?);
        }
    }
    Ok(out)
}

pub fn cmd_simulate(c: &RunConfig) -> Result<String> {
    let sets = match c.explicit_params()? {
        Some(p) => vec![p],
        None => default_simulation_grid(c.eta, c.theta)?,
    };
    let mut rows = Vec::new();
    for p in sets {
        let s = pipeline::run_trials(&p, c.trials, c.rng_seed, c.workers)?;
        let bound = bounds::pr_error_bound(p.n, p.k, p.erasure_probability());
        let pass = s.error_rate <= bound + s.radius;
        if !pass {
            log::warn!("b={} k={}: empirical error above bound + 3 sigma", p.b, p.k);
        }
        rows.push(vec![
            p.b.to_string(),
            p.n.to_string(),
            p.k.to_string(),
            p.lambda.to_string(),
            num(p.alpha_sq),
            num(p.eta),
            num(p.erasure_probability()),
            s.trials.to_string(),
            c.rng_seed.to_string(),
            s.errors.to_string(),
            num(s.error_rate),
            num(s.radius),
            num(bound),
            pass.to_string(),
        ]);
    }
    Ok(csv(
        &[
            "b", "n", "k", "lambda_bits", "alpha_sq", "eta", "erasure_prob", "trials", "rng_seed",
            "errors", "error_rate", "radius", "pr_error_bound", "dominance_pass",
        ],
        rows,
    ))
}

type Check = std::result::Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib(e: Error) -> String {
    e.to_string()
}

fn check_field_axioms() -> Check {
    for m in 1..=6 {
        let f = FieldSpec::with_default_modulus(m).map_err(lib)?;
        let all: Vec<_> = (0..1u64 << m).map(|v| f.element(v).unwrap()).collect();
        for a in &all {
            if !a.is_zero() {
                let inv = gf_inv(a).map_err(lib)?;
                ensure(gf_mul(a, &inv).map_err(lib)?.is_one(), || format!("GF(2^{m}): bad inverse"))?;
            }
            for b in &all {
                let ab = gf_mul(a, b).map_err(lib)?;
                ensure(ab == gf_mul(b, a).map_err(lib)?, || format!("GF(2^{m}): mul not commutative"))?;
                for c in all.iter().step_by(3) {
                    let lhs = gf_mul(a, &gf_add(b, c).map_err(lib)?).map_err(lib)?;
                    let rhs = gf_add(&ab, &gf_mul(a, c).map_err(lib)?).map_err(lib)?;
                    ensure(lhs == rhs, || format!("GF(2^{m}): not distributive"))?;
                }
            }
        }
    }
    Ok(())
}

fn check_extractor_round_trip() -> Check {
    for m in 2..=6usize {
        let f = FieldSpec::with_default_modulus(m).map_err(lib)?;
        for lambda in 1..=m {
            let spec = ExtractorSpec::new(f.clone(), lambda).map_err(lib)?;
            for s in 1..1u64 << m {
                let seed = Seed::new(f.element(s).unwrap()).map_err(lib)?;
                let mut seen = vec![false; 1 << m];
                for mv in 0..1u64 << lambda {
                    let msg = Message(BitString::from_u64(lambda, mv).unwrap());
                    for rv in 0..1u64 << (m - lambda) {
                        let r = LocalRandomness(BitString::from_u64(m - lambda, rv).unwrap());
                        let l = invert(&msg, &seed, &r, &spec).map_err(lib)?;
                        let back = extract(&l, &seed, &spec).map_err(lib)?;
                        ensure(back == msg, || format!("m={m} lambda={lambda}: round trip failed"))?;
                        let idx = l.0.to_u64().unwrap() as usize;
                        ensure(!seen[idx], || format!("m={m} lambda={lambda}: pre-images overlap"))?;
                        seen[idx] = true;
                    }
                }
            }
        }
    }
    Ok(())
}

fn check_rs_exhaustion() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for k in 1..=6usize {
        let code = RsCode::new(3, k).map_err(lib)?;
        for _ in 0..20 {
            let msg: Vec<u16> = (0..k).map(|_| rand::Rng::gen_range(&mut rng, 0..8)).collect();
            let c = code.encode(&msg).map_err(lib)?;
            for pattern in 0u32..128 {
                let y = ErasureWord(
                    c.0.iter()
                        .enumerate()
                        .map(|(i, &v)| (pattern >> i & 1 == 0).then_some(v))
                        .collect(),
                );
                let got = code.decode_erasures(&y);
                if pattern.count_ones() as usize <= 7 - k {
                    ensure(got.as_ref() == Ok(&msg), || format!("k={k}: pattern {pattern:07b} not recovered"))?;
                } else {
                    ensure(got.is_err(), || format!("k={k}: pattern {pattern:07b} decoded"))?;
                }
            }
        }
    }
    Ok(())
}

fn check_pipeline_identity(inject_fault: bool) -> Check {
    let p = SchemeParams::new(0.8, 8, 2, 1.0, 2).map_err(lib)?;
    let s = Scheme::new(&p).map_err(lib)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for t in 0..500 {
        let msg = Message(BitString::random(2, &mut rng));
        let seed = Seed::random(s.field(), &mut rng);
        let r = LocalRandomness(BitString::random(4, &mut rng));
        let (_, mut c) = s.alice_encode(&msg, &seed, &r).map_err(lib)?;
        if inject_fault && t == 0 {
            c.0[3] ^= 1;
        }
        let got = s.bob_decode(&ErasureWord::from(&c), &seed);
        ensure(got.as_ref() == Ok(&msg), || format!("lossless decode failed: {got:?}"))?;
    }
    Ok(())
}

fn check_secrecy_oracle() -> Check {
    for (k, lambda, eta) in [(2u64, 1u64, 0.8), (1, 2, 0.9)] {
        let p = SchemeParams::new(eta, 8, k, 0.5, lambda).map_err(lib)?;
        let oracle = pipeline::classical_secrecy_oracle(&p).map_err(lib)?;
        let (_, r) = bounds::best_budget(&p, &SearchGrid::default()).map_err(lib)?;
        ensure(oracle <= r.delta_bound, || {
            format!("k={k} lambda={lambda}: oracle {oracle} above bound {}", r.delta_bound)
        })?;
    }
    Ok(())
}

/// Runs the exhaustive small-instance suite. Returns the report and whether
/// every check passed.
pub fn cmd_selftest(c: &RunConfig) -> (String, bool) {
    let checks: [(&str, Box<dyn Fn() -> Check>); 5] = [
        ("field axioms GF(2^1..2^6)", Box::new(check_field_axioms)),
        ("extractor round trip and bijectivity", Box::new(check_extractor_round_trip)),
        ("RS (8,7,k) erasure exhaustion", Box::new(check_rs_exhaustion)),
        ("lossless pipeline identity", Box::new(move || check_pipeline_identity(c.inject_fault))),
        ("classical secrecy oracle below bound", Box::new(check_secrecy_oracle)),
    ];
    let mut report = String::new();
    let mut all = true;
    for (name, check) in &checks {
        match check() {
            Ok(()) => writeln!(report, "PASS {name}").unwrap(),
            Err(e) => {
                all = false;
                writeln!(report, "FAIL {name}: {e}").unwrap();
            }
        }
    }
    (report, all)
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Usage(_) | Error::Domain(_) => EXIT_USAGE,
        Error::Infeasible(_) => EXIT_INFEASIBLE,
        Error::Numeric(_) | Error::Decode(_) => EXIT_NUMERIC,
    }
}

fn emit(c: &RunConfig, text: &str) -> Result<()> {
    match &c.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Entry point of the `ppmwt` binary; returns the process exit code.
pub fn run(args: impl IntoIterator<Item = OsString>) -> i32 {
    let _ = env_logger::Builder::from_env(env_logger::Env::new().filter("PPMWT_LOG")).try_init();
    let args: Vec<OsString> = args.into_iter().collect();
    if let Err(e) = Cli::try_parse_from(&args) {
        // --help and --version land here too
        let _ = e.print();
        return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
    }
    let (command, config) = match parse(args) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("ppmwt: {e}");
            return exit_code(&e);
        }
    };
    log::debug!("{command:?} with {config:?}");
    let result = match command {
        Command::Capacity => cmd_capacity(&config),
        Command::Params => cmd_params(&config),
        Command::Bounds => cmd_bounds(&config),
        Command::Optimize => cmd_optimize(&config),
        Command::Simulate => cmd_simulate(&config),
        Command::Selftest => {
            let (report, ok) = cmd_selftest(&config);
            if ok {
                print!("{report}");
                return EXIT_OK;
            }
            eprint!("{report}");
            return EXIT_NUMERIC;
        }
    };
    match result.and_then(|text| emit(&config, &text)) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("ppmwt: {e}");
            exit_code(&e)
        }
    }
}

/// Parses arguments as the binary would; for tests and examples.
pub fn config_from_args<I, T>(args: I) -> Result<RunConfig>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args = std::iter::once(OsString::from("ppmwt")).chain(args.into_iter().map(Into::into));
    parse(args.chain(std::iter::once(OsString::from("capacity")))).map(|(_, c)| c)
}
