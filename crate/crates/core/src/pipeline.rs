//! The full case analysis for `F_n^(k) = N_m`: the small-`k` stage, the
//! large-`k` stage with two reduction passes, the power-of-two branch
//! `n <= k + 1`, and the final exhaustive search. The result is a
//! [`Certificate`] that [`verify_certificate`] rechecks independently.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use log::info;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebraic::{narayana_constants, NarayanaConstantsRecord};
use crate::bounds::{
    large_k_absolute_bounds, large_k_caps, pow2_absolute_bounds, small_k_absolute_bounds,
    zeta_regime_holds, BoundChainReport,
};
use crate::error::{Error, Result};
use crate::real::{AdaptiveReal, RealRecord};
use crate::reduction::{
    baker_davenport_with, continued_fraction_with, epsilon_at, exponent_bound, mu_large_k,
    mu_pow2, mu_small_k, nearest_int_distance, tau_alpha_lambda, tau_lambda_log2,
    PrecisionPolicy, ReductionOutcome, ReductionProblem, ReductionRecord, RealSource,
    DEFAULT_TERM_BUDGET,
};
use crate::search::{
    check_theorem2, intersect_with, narayana_powers_of_two, search_strategies, SearchCaps,
    Solution, TRIVIAL_PAIRS,
};
use crate::sequences::{seq_iter, SequenceKind};
use crate::serde_util::bigint_dec;

pub const CERTIFICATE_FORMAT: &str = "kfnar-certificate";
pub const CERTIFICATE_VERSION: u32 = 1;

/// Precision for the auxiliary reals (`A`, `B`, `tau` in cap conversions).
const AUX_PREC: u32 = 256;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    /// First `k` of the small-`k` stage.
    pub small_k_lo: u32,
    /// Last `k` of the small-`k` stage; the large-`k` stage covers `k > threshold`.
    pub threshold: u32,
    pub precision: PrecisionPolicy,
    pub term_budget: usize,
    /// Worker threads; `None` uses the rayon default.
    pub threads: Option<usize>,
    pub search_strategy: String,
    /// Orders at which `zeta` is measured directly.
    pub zeta_k: Vec<u32>,
    /// `n` runs over `k + 2 ..= k + zeta_n_span` in the measurement.
    pub zeta_n_span: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            small_k_lo: 2,
            threshold: 220,
            precision: PrecisionPolicy::default(),
            term_budget: DEFAULT_TERM_BUDGET,
            threads: None,
            search_strategy: "merge".into(),
            zeta_k: vec![221, 256, 400],
            zeta_n_span: 2000,
            out: None,
        }
    }
}

impl PipelineConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        let cfg: PipelineConfig = serde_json::from_str(s)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.small_k_lo < 2 || self.small_k_lo > self.threshold {
            return Err(Error::Precondition(format!(
                "need 2 <= small_k_lo <= threshold, got {} and {}",
                self.small_k_lo, self.threshold
            )));
        }
        if self.threshold < 220 {
            return Err(Error::Precondition(format!(
                "the large-k bounds hold for k > 220 only; threshold {} is too small",
                self.threshold
            )));
        }
        if self.precision.start < 64 || self.precision.max < self.precision.start {
            return Err(Error::Precondition(format!(
                "bad precision policy {:?}",
                self.precision
            )));
        }
        if self.term_budget == 0 {
            return Err(Error::Precondition("term budget must be >= 1".into()));
        }
        search_strategies().get(&self.search_strategy)?;
        Ok(())
    }

    /// Runs `f` on a pool of `threads` workers when set.
    fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T> {
        match self.threads {
            Some(n) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
                Ok(pool.install(f))
            }
            None => Ok(f()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmallKRecord {
    pub k: u32,
    pub tau: RealRecord,
    /// `M_k`: the absolute bound on `n`, so `u = n - 1 <= M_k`.
    #[serde(with = "bigint_dec")]
    pub m_k: BigInt,
    #[serde(with = "bigint_dec")]
    pub absolute_m_bound: BigInt,
    pub reduction: ReductionRecord,
    pub m_bound: u64,
    /// `floor((m_bound - 1) / tau_k + 2)`.
    pub n_cap: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmallKStage {
    pub k_lo: u32,
    pub k_hi: u32,
    pub records: Vec<SmallKRecord>,
    pub m_cap: u64,
    pub n_cap: u64,
    /// `min(k_hi, n_cap - 2)`, from `k <= n - 2`.
    pub k_cap: u64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LargeKPass {
    pub reduction: ReductionRecord,
    /// `floor(2 X)` where `k / 2 < X` is the reduced exponent bound.
    #[serde(with = "bigint_dec")]
    pub k_cap: BigInt,
    #[serde(with = "bigint_dec")]
    pub n_cap: BigInt,
    #[serde(with = "bigint_dec")]
    pub m_cap: BigInt,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZetaSample {
    pub k: u32,
    pub n_lo: u64,
    pub n_hi: u64,
    /// `n` maximizing `|zeta| 2^(k/2)` in the range.
    pub worst_n: u64,
    /// `log2(|zeta| 2^(k/2))` at `worst_n`, rounded to 1e-6.
    pub worst_log2: f64,
    /// `|zeta| < 2^(-k/2)` for every `n` in the range, decided exactly.
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZetaCheck {
    pub regime_k: u32,
    pub regime_holds: bool,
    pub samples: Vec<ZetaSample>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LargeKStage {
    pub threshold: u32,
    pub bounds: BoundChainReport,
    pub zeta: ZetaCheck,
    pub pass1: LargeKPass,
    pub pass2: LargeKPass,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pow2Stage {
    pub bounds: BoundChainReport,
    pub reduction: ReductionRecord,
    /// `max(reduced l bound, 5)`; the reduction covers `l >= 6`.
    pub l_cap: u64,
    pub m_cap: u64,
    /// `(m, l)` with `N_m = 2^l`, `m <= m_cap`, `N_m > 1`.
    pub powers: Vec<(u64, u64)>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStage {
    pub strategy: String,
    pub caps: SearchCaps,
    /// Nontrivial solutions with `n >= 4`, `m >= 5` inside `caps`.
    pub solutions: Vec<Solution>,
    /// Expected by the published statement but not found.
    pub missing: Vec<(u32, u64, u64)>,
    /// Found but absent from the published statement.
    pub extra: Vec<(u32, u64, u64)>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    /// Every stage closed and the search box dominates every derived cap.
    pub pass: bool,
    pub small_k: bool,
    pub large_k: bool,
    pub pow2: bool,
    pub search: bool,
    /// The complete solution list equals the published statement.
    pub theorem2_statement_matches: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub format: String,
    pub version: u32,
    pub crate_version: String,
    pub config: PipelineConfig,
    pub constants: NarayanaConstantsRecord,
    /// `(n, m)` pairs solving the equation for every `k`.
    pub trivial_solutions: Vec<(u64, u64)>,
    pub small_k: SmallKStage,
    pub large_k: LargeKStage,
    pub pow2: Pow2Stage,
    pub search: SearchStage,
    pub verdict: Verdict,
}

fn aux_a_small() -> Result<AdaptiveReal> {
    let c = narayana_constants(AUX_PREC)?;
    AdaptiveReal::from_int(4).div(&c.lambda.ln()?)
}

/// The small-`k` instance: `|(n-1) tau_k - m + mu_k| < (4 / log lambda) lambda^(-m)`.
pub fn small_k_problem(k: u32, m_k: BigInt) -> Result<ReductionProblem> {
    Ok(ReductionProblem {
        tau: Arc::new(tau_alpha_lambda(k)),
        mu: Arc::new(mu_small_k(k)),
        a: aux_a_small()?,
        b: narayana_constants(AUX_PREC)?.lambda,
        m: m_k,
    })
}

/// The large-`k` instance: `|m tau - n + mu| < 6 * 2^(-k/2)`.
pub fn large_k_problem(m: BigInt) -> ReductionProblem {
    ReductionProblem {
        tau: Arc::new(tau_lambda_log2()),
        mu: Arc::new(mu_large_k()),
        a: AdaptiveReal::from_int(6),
        b: AdaptiveReal::from_int(2),
        m,
    }
}

/// The power-of-two instance: `|m tau - l + mu'| < 3 * 2^(-l)`.
pub fn pow2_problem(m: BigInt) -> ReductionProblem {
    ReductionProblem {
        tau: Arc::new(tau_lambda_log2()),
        mu: Arc::new(mu_pow2()),
        a: AdaptiveReal::from_int(3),
        b: AdaptiveReal::from_int(2),
        m,
    }
}

fn to_u64(x: &BigInt, what: &str) -> Result<u64> {
    x.to_u64()
        .ok_or_else(|| Error::Domain(format!("{what} = {x} does not fit a search index")))
}

/// `floor(upper(num / den + add))`.
fn floor_ratio(num: i64, den: &AdaptiveReal, add: i64) -> Result<u64> {
    let x = AdaptiveReal::from_int(num).div(den)?.add(&AdaptiveReal::from_int(add));
    to_u64(&x.upper().floor(), "cap")
}

fn small_k_n_cap(k: u32, m_bound: u64) -> Result<u64> {
    let tau = tau_alpha_lambda(k).eval(AUX_PREC)?;
    floor_ratio(m_bound as i64 - 1, &tau, 2)
}

fn pow2_m_cap(l_cap: u64) -> Result<u64> {
    let tau = tau_lambda_log2().eval(AUX_PREC)?;
    floor_ratio(l_cap as i64, &tau, 3)
}

fn k_cap_from(out: &ReductionOutcome) -> BigInt {
    out.bound_real.mul_int(2).upper().floor()
}

fn run_small_k_one(cfg: &PipelineConfig, k: u32) -> Result<SmallKRecord> {
    let bounds = small_k_absolute_bounds(k)?;
    let prob = small_k_problem(k, bounds.n_bound.clone())?;
    let out = baker_davenport_with(&prob, cfg.precision, cfg.term_budget)
        .map_err(|e| Error::ReductionFailed(format!("small-k stage, k = {k}: {e}")))?;
    let m_bound = to_u64(&out.u_bound.clone().min(bounds.m_bound.clone()), "m bound")?;
    Ok(SmallKRecord {
        k,
        tau: prob.tau.eval(out.precision)?.to_record(),
        m_k: bounds.n_bound,
        absolute_m_bound: bounds.m_bound,
        reduction: out.to_record(&prob),
        m_bound,
        n_cap: small_k_n_cap(k, m_bound)?,
    })
}

fn aggregate_small_k(k_lo: u32, k_hi: u32, records: Vec<SmallKRecord>) -> SmallKStage {
    let m_cap = records.iter().map(|r| r.m_bound).max().unwrap_or(0);
    let n_cap = records.iter().map(|r| r.n_cap).max().unwrap_or(0);
    let k_cap = (k_hi as u64).min(n_cap.saturating_sub(2));
    SmallKStage {
        k_lo,
        k_hi,
        records,
        m_cap,
        n_cap,
        k_cap,
        pass: true,
    }
}

pub fn run_small_k_stage(cfg: &PipelineConfig) -> Result<SmallKStage> {
    cfg.validate()?;
    info!("small-k stage: k = {}..={}", cfg.small_k_lo, cfg.threshold);
    let records: Result<Vec<SmallKRecord>> = cfg.install(|| {
        (cfg.small_k_lo..=cfg.threshold)
            .into_par_iter()
            .map(|k| run_small_k_one(cfg, k))
            .collect()
    })?;
    let stage = aggregate_small_k(cfg.small_k_lo, cfg.threshold, records?);
    info!(
        "small-k stage: m <= {}, n <= {}, k <= {}",
        stage.m_cap, stage.n_cap, stage.k_cap
    );
    Ok(stage)
}

fn large_k_pass(cfg: &PipelineConfig, m: BigInt, label: &str) -> Result<LargeKPass> {
    let prob = large_k_problem(m);
    let out = baker_davenport_with(&prob, cfg.precision, cfg.term_budget)
        .map_err(|e| Error::ReductionFailed(format!("large-k {label}: {e}")))?;
    let k_cap = k_cap_from(&out);
    let (n_cap, m_cap) = large_k_caps(&k_cap)?;
    info!("large-k {label}: convergent {} gives k <= {k_cap}", out.index);
    Ok(LargeKPass {
        reduction: out.to_record(&prob),
        k_cap,
        n_cap,
        m_cap,
    })
}

fn log2_big(x: &BigUint) -> f64 {
    let b = x.bits();
    if b <= 64 {
        return (x.to_u64().unwrap_or(0) as f64).log2();
    }
    let top = (x >> (b - 64)).to_u64().unwrap_or(u64::MAX);
    (top as f64).log2() + (b - 64) as f64
}

/// Measures `zeta = F_n / 2^(n-2) - 1` over `k + 2 <= n <= k + span`,
/// deciding `|zeta| < 2^(-k/2)` exactly as `d^2 2^k < 4^(n-2)` with
/// `d = |F_n - 2^(n-2)|`.
pub fn measure_zeta(k: u32, span: u64) -> Result<ZetaSample> {
    let n_lo = k as u64 + 2;
    let n_hi = n_lo + span.max(1) - 1;
    let mut holds = true;
    let mut worst = (n_lo, f64::NEG_INFINITY);
    for (n, f) in seq_iter(SequenceKind::k_fib(k)?, n_lo as i64)?.take((n_hi - n_lo + 1) as usize) {
        let n = n as u64;
        let p = BigUint::one() << (n - 2);
        let d = if f >= p { &f - &p } else { &p - &f };
        if (&d * &d) << k >= &p * &p {
            holds = false;
        }
        let l = log2_big(&d) + k as f64 / 2.0 - (n - 2) as f64;
        if l > worst.1 {
            worst = (n, l);
        }
    }
    Ok(ZetaSample {
        k,
        n_lo,
        n_hi,
        worst_n: worst.0,
        worst_log2: (worst.1 * 1e6).round() / 1e6,
        holds,
    })
}

fn zeta_check(cfg: &PipelineConfig) -> Result<ZetaCheck> {
    let regime_k = cfg.threshold + 1;
    let samples: Result<Vec<ZetaSample>> = cfg
        .zeta_k
        .iter()
        .map(|&k| measure_zeta(k, cfg.zeta_n_span))
        .collect();
    Ok(ZetaCheck {
        regime_k,
        regime_holds: zeta_regime_holds(regime_k)?,
        samples: samples?,
    })
}

pub fn run_large_k_stage(cfg: &PipelineConfig) -> Result<LargeKStage> {
    cfg.validate()?;
    info!("large-k stage: k > {}", cfg.threshold);
    let bounds = large_k_absolute_bounds()?;
    let zeta = zeta_check(cfg)?;
    let pass1 = large_k_pass(cfg, bounds.m_bound.clone(), "pass 1")?;
    let pass2 = large_k_pass(cfg, pass1.m_cap.clone(), "pass 2")?;
    let pass = zeta.regime_holds
        && zeta.samples.iter().all(|s| s.holds)
        && pass2.k_cap <= BigInt::from(cfg.threshold);
    Ok(LargeKStage {
        threshold: cfg.threshold,
        bounds,
        zeta,
        pass1,
        pass2,
        pass,
    })
}

pub fn run_pow2_stage(cfg: &PipelineConfig) -> Result<Pow2Stage> {
    cfg.validate()?;
    info!("power-of-two stage");
    let bounds = pow2_absolute_bounds()?;
    let prob = pow2_problem(bounds.m_bound.clone());
    let out = baker_davenport_with(&prob, cfg.precision, cfg.term_budget)
        .map_err(|e| Error::ReductionFailed(format!("power-of-two stage: {e}")))?;
    let l_cap = to_u64(&out.u_bound, "l bound")?.max(5);
    let m_cap = pow2_m_cap(l_cap)?;
    let powers = narayana_powers_of_two(m_cap, false);
    info!("power-of-two stage: l <= {l_cap}, m <= {m_cap}, found {powers:?}");
    Ok(Pow2Stage {
        bounds,
        reduction: out.to_record(&prob),
        l_cap,
        m_cap,
        powers,
        pass: true,
    })
}

pub fn run_search_stage(cfg: &PipelineConfig, small: &SmallKStage) -> Result<SearchStage> {
    let caps = SearchCaps {
        k_max: small.k_cap.max(2) as u32,
        n_max: small.n_cap,
        m_max: small.m_cap,
    };
    info!("final search: k <= {}, n <= {}, m <= {}", caps.k_max, caps.n_max, caps.m_max);
    let strategy = search_strategies().get(&cfg.search_strategy)?;
    let all = cfg.install(|| intersect_with(strategy.as_ref(), 2, caps.k_max, caps.n_max, caps.m_max))??;
    let report = check_theorem2(caps, &all);
    let key = |s: &Solution| (s.k, s.n, s.m);
    Ok(SearchStage {
        strategy: cfg.search_strategy.clone(),
        caps,
        solutions: report.found.clone(),
        missing: report.missing,
        extra: report.extra.iter().map(key).collect(),
        pass: caps_dominate(&caps, small),
    })
}

fn caps_dominate(caps: &SearchCaps, small: &SmallKStage) -> bool {
    caps.k_max as u64 >= small.k_cap && caps.n_max >= small.n_cap && caps.m_max >= small.m_cap
}

fn verdict(small: &SmallKStage, large: &LargeKStage, pow2: &Pow2Stage, search: &SearchStage, cfg: &PipelineConfig) -> Verdict {
    let small_ok = small.pass && small.k_lo == 2 && small.k_hi == cfg.threshold;
    let pass = small_ok && large.pass && pow2.pass && search.pass;
    Verdict {
        pass,
        small_k: small_ok,
        large_k: large.pass,
        pow2: pow2.pass,
        search: search.pass,
        theorem2_statement_matches: search.missing.is_empty() && search.extra.is_empty(),
    }
}

/// Runs every stage and assembles the certificate.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<Certificate> {
    cfg.validate()?;
    let small = run_small_k_stage(cfg)?;
    let large = run_large_k_stage(cfg)?;
    let pow2 = run_pow2_stage(cfg)?;
    let search = run_search_stage(cfg, &small)?;
    let verdict = verdict(&small, &large, &pow2, &search, cfg);
    info!("verdict: {}", if verdict.pass { "pass" } else { "FAIL" });
    Ok(Certificate {
        format: CERTIFICATE_FORMAT.into(),
        version: CERTIFICATE_VERSION,
        crate_version: env!("CARGO_PKG_VERSION").into(),
        config: PipelineConfig {
            out: None,
            ..cfg.clone()
        },
        constants: narayana_constants(cfg.precision.start)?.to_record(),
        trivial_solutions: TRIVIAL_PAIRS.to_vec(),
        small_k: small,
        large_k: large,
        pow2,
        search,
        verdict,
    })
}

pub fn certificate_to_json(cert: &Certificate) -> Result<String> {
    let mut s = serde_json::to_string_pretty(cert)?;
    s.push('\n');
    Ok(s)
}

pub fn emit_certificate(cert: &Certificate, path: &Path) -> Result<()> {
    fs::write(path, certificate_to_json(cert)?)?;
    Ok(())
}

pub fn read_certificate(path: &Path) -> Result<Certificate> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

fn ensure(cond: bool, record: &str, reason: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::verification(record, reason()))
    }
}

fn ensure_eq<T: PartialEq + std::fmt::Debug>(got: &T, want: &T, record: &str) -> Result<()> {
    ensure(got == want, record, || format!("recorded {got:?}, recomputed {want:?}"))
}

/// Rechecks one reduction record against the problem it claims to solve:
/// the convergent, `q > 6M`, `p` nearest to `q tau`, the sign of `eps`
/// and the exponent bound, all recomputed at the recorded precision.
pub fn check_reduction(label: &str, prob: &ReductionProblem, rec: &ReductionRecord, policy: PrecisionPolicy) -> Result<()> {
    let at = |f: &str| format!("{label}.{f}");
    ensure_eq(&rec.tau, &prob.tau.name(), &at("tau"))?;
    ensure_eq(&rec.mu, &prob.mu.name(), &at("mu"))?;
    ensure_eq(&rec.a, &prob.a.to_record(), &at("a"))?;
    ensure_eq(&rec.b, &prob.b.to_record(), &at("b"))?;
    ensure_eq(&rec.m, &prob.m, &at("m"))?;
    ensure(rec.q > &prob.m * 6, &at("q"), || format!("q = {} is not > 6M", rec.q))?;
    ensure(
        rec.precision >= 16 && rec.precision <= policy.max.max(policy.start),
        &at("precision"),
        || format!("precision {} outside the policy {policy:?}", rec.precision),
    )?;
    let cf = continued_fraction_with(prob.tau.as_ref(), rec.index + 1, PrecisionPolicy { start: 128, max: 1 << 17 })
        .map_err(|e| Error::verification(at("index"), e.to_string()))?;
    ensure(
        cf.convergents[rec.index] == (rec.p.clone(), rec.q.clone()),
        &at("q"),
        || format!("({}, {}) is not convergent {} of {}", rec.p, rec.q, rec.index, rec.tau),
    )?;
    let prec = rec.precision;
    let tau_q = prob.tau.eval(prec)?.mul(&AdaptiveReal::from_int(rec.q.clone()));
    let off = tau_q.sub(&AdaptiveReal::from_int(rec.p.clone())).abs();
    ensure(off.lt(&AdaptiveReal::from_f64(0.5)), &at("p"), || {
        format!("p = {} is not the integer nearest to q tau", rec.p)
    })?;
    let (mu_q, tau_q, eps) = epsilon_at(prob, &rec.q, prec)?;
    ensure(eps.is_positive(), &at("epsilon"), || format!("eps = {eps} is not certified positive"))?;
    ensure_eq(&rec.mu_q_dist, &mu_q.to_record(), &at("mu_q_dist"))?;
    ensure_eq(&rec.tau_q_dist, &tau_q.to_record(), &at("tau_q_dist"))?;
    ensure_eq(&rec.epsilon, &eps.to_record(), &at("epsilon"))?;
    let dist = nearest_int_distance(&prob.tau.eval(prec)?.mul(&AdaptiveReal::from_int(rec.q.clone())));
    ensure(dist.overlaps(&off), &at("tau_q_dist"), || "||q tau|| differs from |q tau - p|".into())?;
    let (x, bound) = exponent_bound(&prob.a, &prob.b, &rec.q, &eps, prec)?;
    ensure_eq(&rec.bound_real, &x.to_record(), &at("bound_real"))?;
    ensure_eq(&rec.u_bound, &bound, &at("u_bound"))
}

fn verify_small_k(cert: &Certificate) -> Result<()> {
    let st = &cert.small_k;
    let cfg = &cert.config;
    ensure_eq(&(st.k_lo, st.k_hi), &(cfg.small_k_lo, cfg.threshold), "small_k.range")?;
    ensure_eq(&st.records.len(), &((st.k_hi - st.k_lo + 1) as usize), "small_k.records")?;
    st.records
        .par_iter()
        .enumerate()
        .map(|(i, r)| {
            let label = format!("small_k[k={}]", r.k);
            ensure_eq(&r.k, &(st.k_lo + i as u32), &format!("{label}.k"))?;
            let bounds = small_k_absolute_bounds(r.k)?;
            ensure_eq(&r.m_k, &bounds.n_bound, &format!("{label}.m_k"))?;
            ensure_eq(&r.absolute_m_bound, &bounds.m_bound, &format!("{label}.absolute_m_bound"))?;
            let prob = small_k_problem(r.k, bounds.n_bound)?;
            ensure_eq(&r.tau, &prob.tau.eval(r.reduction.precision)?.to_record(), &format!("{label}.tau"))?;
            check_reduction(&format!("{label}.reduction"), &prob, &r.reduction, cfg.precision)?;
            let m_bound = to_u64(&r.reduction.u_bound.clone().min(bounds.m_bound), "m bound")?;
            ensure_eq(&r.m_bound, &m_bound, &format!("{label}.m_bound"))?;
            ensure_eq(&r.n_cap, &small_k_n_cap(r.k, m_bound)?, &format!("{label}.n_cap"))
        })
        .collect::<Result<Vec<()>>>()?;
    let agg = aggregate_small_k(st.k_lo, st.k_hi, st.records.clone());
    ensure_eq(&st.m_cap, &agg.m_cap, "small_k.m_cap")?;
    ensure_eq(&st.n_cap, &agg.n_cap, "small_k.n_cap")?;
    ensure_eq(&st.k_cap, &agg.k_cap, "small_k.k_cap")?;
    ensure_eq(&st.pass, &agg.pass, "small_k.pass")
}

fn verify_large_pass(label: &str, rec: &LargeKPass, m: &BigInt, policy: PrecisionPolicy) -> Result<()> {
    let prob = large_k_problem(m.clone());
    check_reduction(&format!("{label}.reduction"), &prob, &rec.reduction, policy)?;
    let x = rec.reduction.bound_real.to_real()?;
    let k_cap = x.mul_int(2).upper().floor();
    ensure(rec.k_cap >= k_cap, &format!("{label}.k_cap"), || {
        format!("k cap {} is below floor(2X) = {k_cap}", rec.k_cap)
    })?;
    let (n_cap, m_cap) = large_k_caps(&rec.k_cap)?;
    ensure_eq(&rec.n_cap, &n_cap, &format!("{label}.n_cap"))?;
    ensure_eq(&rec.m_cap, &m_cap, &format!("{label}.m_cap"))
}

fn verify_large_k(cert: &Certificate) -> Result<()> {
    let st = &cert.large_k;
    let cfg = &cert.config;
    ensure_eq(&st.threshold, &cfg.threshold, "large_k.threshold")?;
    ensure_eq(&st.bounds, &large_k_absolute_bounds()?, "large_k.bounds")?;
    ensure_eq(&st.zeta, &zeta_check(cfg)?, "large_k.zeta")?;
    verify_large_pass("large_k.pass1", &st.pass1, &st.bounds.m_bound, cfg.precision)?;
    verify_large_pass("large_k.pass2", &st.pass2, &st.pass1.m_cap, cfg.precision)?;
    let pass = st.zeta.regime_holds
        && st.zeta.samples.iter().all(|s| s.holds)
        && st.pass2.k_cap <= BigInt::from(st.threshold);
    ensure_eq(&st.pass, &pass, "large_k.pass")
}

fn verify_pow2(cert: &Certificate) -> Result<()> {
    let st = &cert.pow2;
    ensure_eq(&st.bounds, &pow2_absolute_bounds()?, "pow2.bounds")?;
    let prob = pow2_problem(st.bounds.m_bound.clone());
    check_reduction("pow2.reduction", &prob, &st.reduction, cert.config.precision)?;
    let l_cap = to_u64(&st.reduction.u_bound, "l bound")?.max(5);
    ensure_eq(&st.l_cap, &l_cap, "pow2.l_cap")?;
    ensure_eq(&st.m_cap, &pow2_m_cap(l_cap)?, "pow2.m_cap")?;
    ensure_eq(&st.powers, &narayana_powers_of_two(st.m_cap, false), "pow2.powers")?;
    ensure_eq(&st.pass, &true, "pow2.pass")
}

fn verify_search(cert: &Certificate) -> Result<()> {
    let st = &cert.search;
    let small = &cert.small_k;
    ensure_eq(&st.strategy, &cert.config.search_strategy, "search.strategy")?;
    ensure(caps_dominate(&st.caps, small) == st.pass, "search.pass", || {
        "recorded pass flag disagrees with cap dominance".into()
    })?;
    ensure(st.caps.k_max as u64 >= small.k_cap, "search.caps.k_max", || {
        format!("{} < small-k cap {}", st.caps.k_max, small.k_cap)
    })?;
    ensure(st.caps.n_max >= small.n_cap, "search.caps.n_max", || {
        format!("{} < small-k cap {}", st.caps.n_max, small.n_cap)
    })?;
    ensure(st.caps.m_max >= small.m_cap, "search.caps.m_max", || {
        format!("{} < small-k cap {}", st.caps.m_max, small.m_cap)
    })?;
    let strategy = search_strategies().get(&st.strategy)?;
    let all = intersect_with(strategy.as_ref(), 2, st.caps.k_max, st.caps.n_max, st.caps.m_max)?;
    let report = check_theorem2(st.caps, &all);
    ensure_eq(&st.solutions, &report.found, "search.solutions")?;
    ensure_eq(&st.missing, &report.missing, "search.missing")?;
    let extra: Vec<_> = report.extra.iter().map(|s| (s.k, s.n, s.m)).collect();
    ensure_eq(&st.extra, &extra, "search.extra")
}

/// Rechecks every record of the certificate and returns its verdict.
/// The first failing record is named in the error.
pub fn verify_certificate(cert: &Certificate) -> Result<Verdict> {
    ensure_eq(&cert.format.as_str(), &CERTIFICATE_FORMAT, "format")?;
    ensure_eq(&cert.version, &CERTIFICATE_VERSION, "version")?;
    cert.config
        .validate()
        .map_err(|e| Error::verification("config", e.to_string()))?;
    ensure_eq(&cert.config.out, &None, "config.out")?;
    ensure_eq(
        &cert.constants,
        &narayana_constants(cert.config.precision.start)?.to_record(),
        "constants",
    )?;
    ensure_eq(&cert.trivial_solutions, &TRIVIAL_PAIRS.to_vec(), "trivial_solutions")?;
    verify_small_k(cert)?;
    verify_large_k(cert)?;
    verify_pow2(cert)?;
    verify_search(cert)?;
    let v = verdict(&cert.small_k, &cert.large_k, &cert.pow2, &cert.search, &cert.config);
    ensure_eq(&cert.verdict, &v, "verdict")?;
    Ok(v)
}

pub fn verify_certificate_file(path: &Path) -> Result<Verdict> {
    let text = fs::read_to_string(path)?;
    let cert: Certificate = serde_json::from_str(&text)
        .map_err(|e| Error::verification("file", format!("malformed certificate: {e}")))?;
    verify_certificate(&cert)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_defaults_and_validation() {
        let cfg = PipelineConfig::from_json("{}").unwrap();
        assert_eq!(cfg, PipelineConfig::default());
        assert!(PipelineConfig::from_json(r#"{"threshold": 100}"#).is_err());
        assert!(PipelineConfig::from_json(r#"{"search_strategy": "nope"}"#).is_err());
        assert!(PipelineConfig::from_json(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn zeta_at_k221() {
        let s = measure_zeta(221, 300).unwrap();
        assert!(s.holds);
        assert!(s.worst_log2 < -100.0);
    }

    #[test]
    fn large_k_passes_shrink() {
        let cfg = PipelineConfig::default();
        let st = run_large_k_stage(&cfg).unwrap();
        assert!(st.pass1.k_cap <= BigInt::from(620));
        assert!(st.pass2.k_cap < BigInt::from(220));
        assert!(st.pass);
        verify_large_pass("p1", &st.pass1, &st.bounds.m_bound, cfg.precision).unwrap();
    }

    #[test]
    fn pow2_stage_finds_two_and_four() {
        let st = run_pow2_stage(&PipelineConfig::default()).unwrap();
        assert_eq!(st.powers, vec![(4, 1), (6, 2)]);
        assert!(st.m_cap >= 12);
    }

    #[test]
    fn tampered_reduction_is_named() {
        let cfg = PipelineConfig::default();
        let st = run_large_k_stage(&cfg).unwrap();
        let mut rec = st.pass2.reduction.clone();
        rec.q += 1;
        let err = check_reduction("x", &large_k_problem(st.pass1.m_cap.clone()), &rec, cfg.precision).unwrap_err();
        assert!(matches!(err, Error::Verification { ref record, .. } if record == "x.q"), "{err}");
    }
}
