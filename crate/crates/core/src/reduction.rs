//! Certified continued fractions and the Baker–Davenport reduction in the
//! Dujella–Pethő form.
//!
//! Real inputs are [`RealSource`]s: anything that can produce an enclosure
//! at a requested precision. Sources are registered by name so the CLI and
//! the pipeline can pick them at runtime.

use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebraic::{dominant_root_alpha, f_k_alpha, narayana_constants};
use crate::error::{Error, Result};
use crate::real::{AdaptiveReal, Dyadic, RealRecord};
use crate::registry::Registry;
use crate::serde_util::bigint_dec;

/// Start and ceiling of the "double and retry" precision schedule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionPolicy {
    pub start: u32,
    pub max: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            start: 256,
            max: 16384,
        }
    }
}

impl PrecisionPolicy {
    /// `start, 2 start, 4 start, ...` up to and including `max`.
    pub fn schedule(&self) -> impl Iterator<Item = u32> {
        let max = self.max.max(self.start);
        std::iter::successors(Some(self.start.max(16)), move |&p| {
            (p < max).then(|| (p * 2).min(max))
        })
    }
}

/// A real number that can be enclosed to any requested precision.
pub trait RealSource: Send + Sync {
    fn name(&self) -> String;

    /// Enclosure with radius roughly `2^-prec` relative to the magnitude.
    fn eval(&self, prec: u32) -> Result<AdaptiveReal>;

    /// The exact value when the source is rational.
    fn exact(&self) -> Option<BigRational> {
        None
    }
}

/// An exact rational.
pub struct RationalSource(pub BigRational);

impl RealSource for RationalSource {
    fn name(&self) -> String {
        format!("rational:{}", self.0)
    }

    fn eval(&self, prec: u32) -> Result<AdaptiveReal> {
        Ok(AdaptiveReal::from_rational(&self.0, prec))
    }

    fn exact(&self) -> Option<BigRational> {
        Some(self.0.clone())
    }
}

type EvalFn = dyn Fn(u32) -> Result<AdaptiveReal> + Send + Sync;

/// A source defined by an evaluation closure.
pub struct FnSource {
    name: String,
    f: Box<EvalFn>,
}

impl FnSource {
    pub fn new(
        name: impl Into<String>,
        f: impl Fn(u32) -> Result<AdaptiveReal> + Send + Sync + 'static,
    ) -> Self {
        FnSource {
            name: name.into(),
            f: Box::new(f),
        }
    }
}

impl RealSource for FnSource {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn eval(&self, prec: u32) -> Result<AdaptiveReal> {
        (self.f)(prec)
    }
}

fn log_lambda(prec: u32) -> Result<AdaptiveReal> {
    narayana_constants(prec.max(64))?.lambda.ln()
}

/// `log lambda / log 2`.
pub fn tau_lambda_log2() -> FnSource {
    FnSource::new("lambda-log2", |prec| {
        let wp = prec + 16;
        log_lambda(wp)?.div(&AdaptiveReal::ln2(wp))
    })
}

/// `log alpha(k) / log lambda`.
pub fn tau_alpha_lambda(k: u32) -> FnSource {
    FnSource::new(format!("alpha-lambda:{k}"), move |prec| {
        let wp = prec + 16;
        dominant_root_alpha(k, wp)?.ln()?.div(&log_lambda(wp)?)
    })
}

/// `log(f_k(alpha) / (C_lambda lambda^2)) / log lambda`.
pub fn mu_small_k(k: u32) -> FnSource {
    FnSource::new(format!("small-k:{k}"), move |prec| {
        let wp = prec + 16;
        let c = narayana_constants(wp)?;
        let fk = f_k_alpha(k, &dominant_root_alpha(k, wp)?)?;
        let arg = fk.div(&c.c_lambda.mul(&c.lambda.sqr()))?;
        arg.ln()?.div(&c.lambda.ln()?)
    })
}

/// `(2 log lambda + 2 log 2 + log C_lambda) / log 2`.
pub fn mu_large_k() -> FnSource {
    FnSource::new("large-k", |prec| {
        let wp = prec + 16;
        let c = narayana_constants(wp)?;
        let ln2 = AdaptiveReal::ln2(wp);
        let num = c.lambda.ln()?.mul_int(2).add(&ln2.mul_int(2)).add(&c.c_lambda.ln()?);
        num.div(&ln2)
    })
}

/// `(2 log lambda + log C_lambda) / log 2`, the shift for `N_m = 2^l`.
pub fn mu_pow2() -> FnSource {
    FnSource::new("pow2", |prec| {
        let wp = prec + 16;
        let c = narayana_constants(wp)?;
        let ln2 = AdaptiveReal::ln2(wp);
        c.lambda.ln()?.mul_int(2).add(&c.c_lambda.ln()?).div(&ln2)
    })
}

/// A named family of real sources, optionally parameterized by `k`.
pub trait SourceFamily: Send + Sync {
    fn build(&self, k: Option<u32>) -> Result<Arc<dyn RealSource>>;
}

struct Family<F>(F);

impl<F> SourceFamily for Family<F>
where
    F: Fn(Option<u32>) -> Result<Arc<dyn RealSource>> + Send + Sync,
{
    fn build(&self, k: Option<u32>) -> Result<Arc<dyn RealSource>> {
        (self.0)(k)
    }
}

fn need_k(name: &str, k: Option<u32>) -> Result<u32> {
    match k {
        Some(k) if k >= 2 => Ok(k),
        Some(k) => Err(Error::Domain(format!("{name}: k must be >= 2, got {k}"))),
        None => Err(Error::Parse(format!("{name} needs a parameter, as in `{name}:K`"))),
    }
}

/// Registry of real sources: `lambda-log2`, `alpha-lambda:K`,
/// `small-k:K`, `large-k`, `pow2`.
pub fn real_sources() -> &'static Registry<dyn SourceFamily> {
    static REG: OnceLock<Registry<dyn SourceFamily>> = OnceLock::new();
    REG.get_or_init(|| {
        let mut r: Registry<dyn SourceFamily> = Registry::new("real source");
        r.register(
            "lambda-log2",
            Arc::new(Family(|_| Ok(Arc::new(tau_lambda_log2()) as Arc<dyn RealSource>))),
        );
        r.register(
            "alpha-lambda",
            Arc::new(Family(|k| {
                Ok(Arc::new(tau_alpha_lambda(need_k("alpha-lambda", k)?)) as Arc<dyn RealSource>)
            })),
        );
        r.register(
            "small-k",
            Arc::new(Family(|k| {
                Ok(Arc::new(mu_small_k(need_k("small-k", k)?)) as Arc<dyn RealSource>)
            })),
        );
        r.register(
            "large-k",
            Arc::new(Family(|_| Ok(Arc::new(mu_large_k()) as Arc<dyn RealSource>))),
        );
        r.register(
            "pow2",
            Arc::new(Family(|_| Ok(Arc::new(mu_pow2()) as Arc<dyn RealSource>))),
        );
        r
    })
}

/// Looks up `name` or `name:K` in [`real_sources`].
pub fn source_from_spec(spec: &str) -> Result<Arc<dyn RealSource>> {
    let (name, k) = match spec.split_once(':') {
        Some((n, k)) => (
            n,
            Some(k.parse::<u32>().map_err(|_| Error::Parse(format!("bad parameter in `{spec}`")))?),
        ),
        None => (spec, None),
    };
    real_sources().get(name)?.build(k)
}

/// Certified prefix of a continued fraction expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuedFraction {
    pub partial_quotients: Vec<BigInt>,
    /// `(p_i, q_i)` for `i = 0, 1, ...`.
    pub convergents: Vec<(BigInt, BigInt)>,
    /// Precision at which the prefix was certified (0 for exact input).
    pub precision: u32,
}

impl ContinuedFraction {
    fn from_quotients(partial_quotients: Vec<BigInt>, precision: u32) -> Self {
        let mut convergents = Vec::with_capacity(partial_quotients.len());
        let (mut p2, mut q2) = (BigInt::zero(), BigInt::one());
        let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
        for a in &partial_quotients {
            let p = a * &p1 + &p2;
            let q = a * &q1 + &q2;
            convergents.push((p.clone(), q.clone()));
            (p2, q2, p1, q1) = (p1, q1, p, q);
        }
        ContinuedFraction {
            partial_quotients,
            convergents,
            precision,
        }
    }

    pub fn len(&self) -> usize {
        self.partial_quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partial_quotients.is_empty()
    }
}

/// Quotients of the exact expansion of `num / den`, `den > 0`.
fn rational_cf(mut num: BigInt, mut den: BigInt, limit: usize) -> Vec<BigInt> {
    let mut out = Vec::new();
    while !den.is_zero() && out.len() < limit {
        let (a, r) = num.div_mod_floor(&den);
        out.push(a);
        num = den;
        den = r;
    }
    out
}

/// Partial quotients shared by every real in `[lo, hi]`. A quotient is only
/// emitted while neither endpoint's expansion has terminated, so the
/// ambiguity `[..., a, 1] = [..., a + 1]` never leaks into the prefix.
fn common_cf_prefix(lo: &Dyadic, hi: &Dyadic, limit: usize) -> Vec<BigInt> {
    let as_frac = |d: &Dyadic| {
        let r = d.to_rational();
        (r.numer().clone(), r.denom().clone())
    };
    let (mut n1, mut d1) = as_frac(lo);
    let (mut n2, mut d2) = as_frac(hi);
    let mut out = Vec::new();
    while out.len() < limit {
        let (a1, r1) = n1.div_mod_floor(&d1);
        let (a2, r2) = n2.div_mod_floor(&d2);
        if a1 != a2 || r1.is_zero() || r2.is_zero() {
            break;
        }
        out.push(a1);
        (n1, d1) = (d1, r1);
        (n2, d2) = (d2, r2);
    }
    out
}

/// The first `terms` partial quotients of `x`, certified by refining the
/// enclosure until both endpoints agree on them.
pub fn continued_fraction(x: &dyn RealSource, terms: usize) -> Result<ContinuedFraction> {
    continued_fraction_with(x, terms, PrecisionPolicy { start: 128, max: 1 << 17 })
}

pub fn continued_fraction_with(
    x: &dyn RealSource,
    terms: usize,
    policy: PrecisionPolicy,
) -> Result<ContinuedFraction> {
    if terms == 0 {
        return Err(Error::Precondition("terms must be >= 1".into()));
    }
    if let Some(q) = x.exact() {
        let qs = rational_cf(q.numer().clone(), q.denom().clone(), terms);
        return Ok(ContinuedFraction::from_quotients(qs, 0));
    }
    let mut best = 0;
    for prec in policy.schedule() {
        let v = x.eval(prec)?;
        let qs = common_cf_prefix(&v.lower(), &v.upper(), terms);
        best = qs.len();
        if qs.len() >= terms {
            return Ok(ContinuedFraction::from_quotients(qs, prec));
        }
    }
    Err(Error::precision(format!(
        "only {best} of {terms} partial quotients of {} certified at {} bits",
        x.name(),
        policy.max
    )))
}

/// Enclosure of the distance from `x` to the nearest integer. The map is
/// 1-Lipschitz, so `||mid|| +- rad` clipped to `[0, 1/2]` is sound even
/// when the ball straddles a half-integer.
pub fn nearest_int_distance(x: &AdaptiveReal) -> AdaptiveReal {
    let m = x.mid();
    let half = Dyadic::pow2(-1);
    let z = m.add(&half).floor();
    let d = m.sub(&Dyadic::from_int(z)).abs();
    let r = x.rad();
    let lo = d.sub(r);
    let lo = if lo.is_negative() { Dyadic::zero() } else { lo };
    let hi = d.add(r).min(half);
    let lo = lo.min(hi.clone());
    AdaptiveReal::from_endpoints(&lo, &hi, x.prec())
}

/// An instance of the reduction: bound the exponent `w` in
/// `0 < |u tau - v + mu| < A B^(-w)` for integers `0 < u <= M`.
#[derive(Clone)]
pub struct ReductionProblem {
    pub tau: Arc<dyn RealSource>,
    pub mu: Arc<dyn RealSource>,
    pub a: AdaptiveReal,
    pub b: AdaptiveReal,
    pub m: BigInt,
}

/// Result of a successful reduction: any solution has `w <= u_bound`.
#[derive(Clone, Debug)]
pub struct ReductionOutcome {
    /// Index of the convergent (0-based, `a_0` first).
    pub index: usize,
    pub p: BigInt,
    pub q: BigInt,
    pub mu_q_dist: AdaptiveReal,
    pub tau_q_dist: AdaptiveReal,
    /// `||mu q|| - M ||tau q||`, certified positive.
    pub epsilon: AdaptiveReal,
    /// `log(A q / eps) / log B` with `eps` replaced by its lower endpoint.
    pub bound_real: AdaptiveReal,
    pub u_bound: BigInt,
    pub precision: u32,
}

/// Serialized [`ReductionOutcome`].
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ReductionRecord {
    pub tau: String,
    pub mu: String,
    pub a: RealRecord,
    pub b: RealRecord,
    #[serde(with = "bigint_dec")]
    pub m: BigInt,
    pub index: usize,
    #[serde(with = "bigint_dec")]
    pub p: BigInt,
    #[serde(with = "bigint_dec")]
    pub q: BigInt,
    pub mu_q_dist: RealRecord,
    pub tau_q_dist: RealRecord,
    pub epsilon: RealRecord,
    pub bound_real: RealRecord,
    #[serde(with = "bigint_dec")]
    pub u_bound: BigInt,
    pub precision: u32,
}

impl ReductionOutcome {
    pub fn to_record(&self, prob: &ReductionProblem) -> ReductionRecord {
        ReductionRecord {
            tau: prob.tau.name(),
            mu: prob.mu.name(),
            a: prob.a.to_record(),
            b: prob.b.to_record(),
            m: prob.m.clone(),
            index: self.index,
            p: self.p.clone(),
            q: self.q.clone(),
            mu_q_dist: self.mu_q_dist.to_record(),
            tau_q_dist: self.tau_q_dist.to_record(),
            epsilon: self.epsilon.to_record(),
            bound_real: self.bound_real.to_record(),
            u_bound: self.u_bound.clone(),
            precision: self.precision,
        }
    }
}

/// `(||mu q||, ||tau q||, eps)` at precision `prec`.
pub fn epsilon_at(
    prob: &ReductionProblem,
    q: &BigInt,
    prec: u32,
) -> Result<(AdaptiveReal, AdaptiveReal, AdaptiveReal)> {
    let qr = AdaptiveReal::from_int(q.clone());
    let mu_q = nearest_int_distance(&prob.mu.eval(prec)?.mul(&qr));
    let tau_q = nearest_int_distance(&prob.tau.eval(prec)?.mul(&qr));
    let eps = mu_q.sub(&tau_q.mul(&AdaptiveReal::from_int(prob.m.clone())));
    Ok((mu_q, tau_q, eps))
}

/// `floor` of an upper bound on `log(A q / eps_lo) / log B`.
pub fn exponent_bound(
    a: &AdaptiveReal,
    b: &AdaptiveReal,
    q: &BigInt,
    eps: &AdaptiveReal,
    prec: u32,
) -> Result<(AdaptiveReal, BigInt)> {
    let eps_lo = AdaptiveReal::exact(eps.lower());
    let arg = a
        .mul(&AdaptiveReal::from_int(q.clone()))
        .with_prec(prec)
        .div(&eps_lo)?;
    let x = arg.ln()?.div(&b.with_prec(prec).ln()?)?;
    let bound = x.upper().floor();
    Ok((x, bound))
}

/// Default cap on partial quotients scanned per reduction.
pub const DEFAULT_TERM_BUDGET: usize = 2000;

pub fn baker_davenport(prob: &ReductionProblem) -> Result<ReductionOutcome> {
    baker_davenport_with(prob, PrecisionPolicy::default(), DEFAULT_TERM_BUDGET)
}

/// Scans the convergents of `tau` in increasing order; for the first `q`
/// with `q > 6M` and certified `eps > 0`, no solution has
/// `w > u_bound`. Convergents with `eps` certainly `<= 0` are skipped; an
/// undecided sign raises the precision.
pub fn baker_davenport_with(
    prob: &ReductionProblem,
    policy: PrecisionPolicy,
    term_budget: usize,
) -> Result<ReductionOutcome> {
    if !prob.a.is_positive() {
        return Err(Error::Precondition("A must be > 0".into()));
    }
    if !prob.b.gt(&AdaptiveReal::from_int(1)) {
        return Err(Error::Precondition("B must be > 1".into()));
    }
    if prob.m < BigInt::one() {
        return Err(Error::Precondition("M must be >= 1".into()));
    }
    let six_m = &prob.m * 6;
    // Convergents whose eps is certainly <= 0; they stay skipped at every
    // higher precision.
    let mut rejected_upto = 0usize;
    let mut last_err = String::new();
    for prec in policy.schedule() {
        let v = prob.tau.eval(prec)?;
        let qs = common_cf_prefix(&v.lower(), &v.upper(), term_budget);
        let cf = ContinuedFraction::from_quotients(qs, prec);
        let mut undecided = false;
        for (index, (p, q)) in cf.convergents.iter().enumerate() {
            if q <= &six_m || index < rejected_upto {
                continue;
            }
            let (mu_q, tau_q, eps) = epsilon_at(prob, q, prec)?;
            if eps.is_positive() {
                let (bound_real, u_bound) = exponent_bound(&prob.a, &prob.b, q, &eps, prec)?;
                return Ok(ReductionOutcome {
                    index,
                    p: p.clone(),
                    q: q.clone(),
                    mu_q_dist: mu_q,
                    tau_q_dist: tau_q,
                    epsilon: eps,
                    bound_real,
                    u_bound,
                    precision: prec,
                });
            }
            if eps.upper() <= Dyadic::zero() {
                rejected_upto = index + 1;
                continue;
            }
            undecided = true;
            last_err = format!("sign of eps undecided at convergent {index} ({prec} bits)");
            break;
        }
        if !undecided && cf.len() >= term_budget {
            return Err(Error::ReductionFailed(format!(
                "no convergent of {} with q > 6M and eps > 0 within {term_budget} terms",
                prob.tau.name()
            )));
        }
        if !undecided {
            last_err = format!("only {} partial quotients certified at {prec} bits", cf.len());
        }
    }
    Err(Error::ReductionFailed(format!(
        "{} (precision ceiling {} bits)",
        last_err, policy.max
    )))
}

/// Which logarithmic linear form to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GammaKind {
    /// `(n - 1) tau_k - m + mu_k` with `tau_k = log alpha / log lambda`.
    SmallK { k: u32, n: i64, m: i64 },
    /// `m tau - n + mu` with `tau = log lambda / log 2`.
    LargeK { n: i64, m: i64 },
    /// `m tau - l + mu'` for `N_m = 2^l`.
    Pow2 { l: i64, m: i64 },
}

/// Certified value of the linear form at `prec` bits.
pub fn linear_form_from_gamma(kind: GammaKind, prec: u32) -> Result<AdaptiveReal> {
    let (u, v, tau, mu) = match kind {
        GammaKind::SmallK { k, n, m } => (n - 1, m, tau_alpha_lambda(k), mu_small_k(k)),
        GammaKind::LargeK { n, m } => (m, n, tau_lambda_log2(), mu_large_k()),
        GammaKind::Pow2 { l, m } => (m, l, tau_lambda_log2(), mu_pow2()),
    };
    Ok(tau
        .eval(prec)?
        .mul_int(u)
        .sub(&AdaptiveReal::from_int(v))
        .add(&mu.eval(prec)?))
}

/// Refines the linear form until its enclosure excludes zero.
pub fn linear_form_nonzero(kind: GammaKind, policy: PrecisionPolicy) -> Result<AdaptiveReal> {
    for prec in policy.schedule() {
        let g = linear_form_from_gamma(kind, prec)?;
        if !g.contains_zero() {
            return Ok(g);
        }
    }
    Err(Error::precision(format!("{kind:?} not separated from 0 at {} bits", policy.max)))
}
