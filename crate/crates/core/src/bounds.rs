//! Matveev's lower bound for linear forms in logarithms, the Sánchez–Luca
//! resolution lemma, and the inequality chains that turn them into absolute
//! bounds on `n`, `m` and `k`.
//!
//! Every quantity is a ball; bounds are read off the conservative endpoint
//! (upper bounds from `upper()`, lower-bound exponents from `lower()`).

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::algebraic::{
    c_lambda_algebraic, dominant_root_alpha, f_k_alpha, lambda_algebraic, log_height,
    narayana_constants,
};
use crate::error::{Error, Result};
use crate::real::{AdaptiveReal, Dyadic, RealRecord};
use crate::serde_util::{bigint_dec, opt_bigint_dec};

/// Working precision of all bound arithmetic.
pub const BOUND_PREC: u32 = 192;

/// Published constants of the inequality chain, kept for comparison.
pub mod published {
    /// Coefficient of `k^4 log^2 k log n` in the small-k bound on `m`.
    pub const SMALL_K_M_COEFF: &str = "3.94e13";
    /// Coefficient of `k^4 log^3 k` in the small-k bound on `n`.
    pub const SMALL_K_N_COEFF: &str = "2.77e15";
    /// Coefficient of `log n` in the large-k Matveev bound.
    pub const LARGE_K_LOG_N_COEFF: &str = "1.59e13";
    /// Coefficient of `log n` in the large-k bound on `k`.
    pub const LARGE_K_K_COEFF: &str = "4.6e13";
    /// Multiplier turning the large-k bound on `k` into `c log k`.
    pub const LARGE_K_LOG_K_FACTOR: &str = "11.9";
    pub const LARGE_K_K_BOUND: f64 = 3.72e16;
    pub const LARGE_K_N_BOUND: f64 = 2.96e86;
    pub const LARGE_K_M_BOUND: f64 = 5.92e86;
}

pub(crate) fn dec(s: &str) -> AdaptiveReal {
    AdaptiveReal::parse_decimal(s, BOUND_PREC).expect("valid decimal literal")
}

fn int(n: i64) -> AdaptiveReal {
    AdaptiveReal::from_int(n)
}

fn ln(x: &AdaptiveReal) -> Result<AdaptiveReal> {
    x.with_prec(BOUND_PREC.max(x.prec())).ln()
}

/// Ball whose upper endpoint is the larger of the two upper endpoints.
fn safer(a: &AdaptiveReal, b: &AdaptiveReal) -> AdaptiveReal {
    if a.upper() >= b.upper() {
        a.clone()
    } else {
        b.clone()
    }
}

fn floor_upper(x: &AdaptiveReal) -> BigInt {
    x.upper().floor()
}

/// Parameters of one application of Matveev's theorem: `t` algebraic
/// numbers in a real field of degree `D`, exponents bounded by `B`, and
/// height parameters `A_i`.
#[derive(Clone, Debug)]
pub struct MatveevInstance {
    pub t: u32,
    pub d: u32,
    pub b: AdaptiveReal,
    pub a: Vec<AdaptiveReal>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MatveevRecord {
    pub t: u32,
    pub d: u32,
    pub b: RealRecord,
    pub a: Vec<RealRecord>,
    /// `-E / (1 + log B)`.
    pub constant: RealRecord,
    /// Lower endpoint of the exponent `E`.
    pub exponent: RealRecord,
}

impl MatveevInstance {
    pub fn new(d: u32, b: AdaptiveReal, a: Vec<AdaptiveReal>) -> Result<Self> {
        let t = a.len() as u32;
        if t == 0 || d == 0 {
            return Err(Error::Precondition("Matveev instance needs t >= 1 and D >= 1".into()));
        }
        if b.lower() < Dyadic::one() {
            return Err(Error::Precondition(format!("B must be >= 1, got {b}")));
        }
        let floor = dec("0.16");
        if let Some(i) = a.iter().position(|ai| ai.upper() < floor.lower()) {
            return Err(Error::Precondition(format!("A_{} = {} is below 0.16", i + 1, a[i])));
        }
        Ok(MatveevInstance { t, d, b, a })
    }

    /// Certifies `A_i >= max(D h_i, |log eta_i|, 0.16)` given upper bounds on
    /// the heights `h_i` and on `|log eta_i|`.
    pub fn check_heights(&self, heights: &[AdaptiveReal], abs_logs: &[AdaptiveReal]) -> Result<()> {
        for (i, ai) in self.a.iter().enumerate() {
            let dh = heights[i].mul_int(self.d as i64);
            // Identical balls arise when A_i is defined as D h_i itself.
            let dominates_dh = ai == &dh || ai.lower() >= dh.upper();
            if !dominates_dh || ai.lower() < abs_logs[i].upper() {
                return Err(Error::Precondition(format!(
                    "A_{} = {} does not dominate D h = {} and |log eta| = {}",
                    i + 1,
                    ai,
                    dh,
                    abs_logs[i]
                )));
            }
        }
        Ok(())
    }

    /// `1.4 * 30^(t+3) * t^4.5 * D^2 (1 + log D) * A_1 ... A_t`, so that the
    /// exponent is `E = -constant * (1 + log B)`.
    pub fn constant(&self) -> Result<AdaptiveReal> {
        let t = int(self.t as i64).with_prec(BOUND_PREC);
        let d = int(self.d as i64).with_prec(BOUND_PREC);
        let mut c = dec("1.4")
            .mul(&int(30).powi(self.t as i64 + 3)?)
            .mul(&t.powi(4)?.mul(&t.sqrt()?))
            .mul(&d.sqr())
            .mul(&int(1).add(&ln(&d)?));
        for ai in &self.a {
            c = c.mul(ai);
        }
        Ok(c)
    }

    pub fn to_record(&self) -> Result<MatveevRecord> {
        Ok(MatveevRecord {
            t: self.t,
            d: self.d,
            b: self.b.to_record(),
            a: self.a.iter().map(|x| x.to_record()).collect(),
            constant: self.constant()?.to_record(),
            exponent: matveev_lower_bound(self)?.to_record(),
        })
    }
}

/// The exponent `E < 0` with `|Lambda| >= exp(E)`; use its `lower()` end.
pub fn matveev_lower_bound(inst: &MatveevInstance) -> Result<AdaptiveReal> {
    let one_plus_log_b = int(1).add(&ln(&inst.b)?);
    Ok(inst.constant()?.mul(&one_plus_log_b).neg())
}

/// If `a / (log a)^r < c` with `r >= 1` and `c > (4r^2)^r`, then
/// `a < 2^r c (log c)^r`; returns that bound.
pub fn sanchez_luca_resolve(r: u32, c: &AdaptiveReal) -> Result<AdaptiveReal> {
    if r == 0 {
        return Err(Error::Precondition("r must be >= 1".into()));
    }
    let threshold = int(4 * (r as i64) * (r as i64)).powi(r as i64)?;
    if c.lower() <= threshold.upper() {
        return Err(Error::Precondition(format!(
            "resolution needs C > (4r^2)^r = {}, got {}",
            threshold.to_decimal(6),
            c.to_decimal(6)
        )));
    }
    let lc = ln(c)?;
    Ok(int(2).powi(r as i64)?.mul(c).mul(&lc.powi(r as i64)?))
}

/// Admissible range of `m` for a solution with index `n`.
#[derive(Clone, Debug)]
pub struct MRange {
    /// `(n - 2) log alpha / log lambda + 1`.
    pub lo: AdaptiveReal,
    /// `(n - 1) log alpha / log lambda + 3`.
    pub hi: AdaptiveReal,
    /// The loosened published form `1.4 n - 1.95`.
    pub loose_lo: AdaptiveReal,
    /// The loosened published form `1.9 n + 0.16`.
    pub loose_hi: AdaptiveReal,
}

impl MRange {
    /// Every integer `m` that may be admissible (from the certified range).
    pub fn integer_range(&self) -> (BigInt, BigInt) {
        (self.lo.lower().ceil(), self.hi.upper().floor())
    }
}

/// From `alpha^(n-2) <= F_n = N_m <= lambda^(m-1)` and
/// `lambda^(m-3) <= N_m = F_n <= alpha^(n-1)`.
pub fn relate_m_n(n: u64, alpha: &AdaptiveReal, lambda: &AdaptiveReal) -> Result<MRange> {
    if n < 4 {
        return Err(Error::Precondition(format!("relate_m_n needs n >= 4, got {n}")));
    }
    let tau = ln(alpha)?.div(&ln(lambda)?)?;
    let n_r = int(n as i64);
    Ok(MRange {
        lo: n_r.sub(&int(2)).mul(&tau).add(&int(1)),
        hi: n_r.sub(&int(1)).mul(&tau).add(&int(3)),
        loose_lo: dec("1.4").mul(&n_r).sub(&dec("1.95")),
        loose_hi: dec("1.9").mul(&n_r).add(&dec("0.16")),
    })
}

/// A named intermediate constant, optionally with its published value.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LabeledValue {
    pub label: String,
    pub value: RealRecord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub published: Option<String>,
}

fn labeled(label: &str, v: &AdaptiveReal, published: Option<&str>) -> LabeledValue {
    LabeledValue {
        label: label.to_string(),
        value: v.to_record(),
        published: published.map(str::to_string),
    }
}

/// Outcome of one inequality chain. Integer bounds are inclusive: every
/// admissible value is at most the recorded bound.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct BoundChainReport {
    pub regime: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    pub matveev: MatveevRecord,
    pub constants: Vec<LabeledValue>,
    #[serde(with = "opt_bigint_dec", default, skip_serializing_if = "Option::is_none")]
    pub k_bound: Option<BigInt>,
    #[serde(with = "bigint_dec")]
    pub n_bound: BigInt,
    #[serde(with = "bigint_dec")]
    pub m_bound: BigInt,
}

impl BoundChainReport {
    pub fn constant(&self, label: &str) -> Option<&LabeledValue> {
        self.constants.iter().find(|c| c.label == label)
    }
}

/// Simplification facts used to tidy the chain; each holds from `min_arg`
/// on with a margin that grows with the argument.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogFact {
    /// `1 + log 2k < 3.5 log k`.
    OnePlusLog2k,
    /// `1 + log(2n + 2) < 2.2 log n`.
    OnePlusLog2nPlus2,
    /// `30.98 + 4 log k + log log k < 49 log k`.
    SmallKResolution,
    /// `35.6 + 4 log k + 3 log log k < 11.9 log k`.
    LargeKResolution,
}

impl LogFact {
    pub const ALL: [LogFact; 4] = [
        LogFact::OnePlusLog2k,
        LogFact::OnePlusLog2nPlus2,
        LogFact::SmallKResolution,
        LogFact::LargeKResolution,
    ];

    pub fn min_arg(self) -> u64 {
        match self {
            LogFact::OnePlusLog2k => 2,
            LogFact::OnePlusLog2nPlus2 => 5,
            LogFact::SmallKResolution => 2,
            LogFact::LargeKResolution => 221,
        }
    }

    /// Certified `rhs - lhs` at `x`.
    pub fn margin(self, x: u64) -> Result<AdaptiveReal> {
        let xr = int(x as i64).with_prec(BOUND_PREC);
        let lx = ln(&xr)?;
        Ok(match self {
            LogFact::OnePlusLog2k => dec("3.5")
                .mul(&lx)
                .sub(&int(1).add(&ln(&xr.mul_int(2))?)),
            LogFact::OnePlusLog2nPlus2 => dec("2.2")
                .mul(&lx)
                .sub(&int(1).add(&ln(&xr.mul_int(2).add(&int(2)))?)),
            LogFact::SmallKResolution => dec("49")
                .mul(&lx)
                .sub(&dec("30.98").add(&lx.mul_int(4)).add(&ln(&lx)?)),
            LogFact::LargeKResolution => dec("11.9")
                .mul(&lx)
                .sub(&dec("35.6").add(&lx.mul_int(4)).add(&ln(&lx)?.mul_int(3))),
        })
    }

    /// Certified truth of the fact at `x`.
    pub fn holds_at(self, x: u64) -> Result<bool> {
        Ok(self.margin(x)?.is_positive())
    }
}

/// Certified Narayana quantities shared by the chains.
struct Ctx {
    log_lambda: AdaptiveReal,
    log2: AdaptiveReal,
}

impl Ctx {
    fn new() -> Result<Ctx> {
        let c = narayana_constants(BOUND_PREC)?;
        Ok(Ctx {
            log_lambda: ln(&c.lambda)?,
            log2: AdaptiveReal::ln2(BOUND_PREC),
        })
    }
}

/// The `n`-bound machinery shared by both regimes for a given `k` (possibly
/// a real upper bound on `k`) and a lower bound `tau` on
/// `log alpha / log lambda`.
struct NChain {
    m_coeff: AdaptiveReal,
    t: AdaptiveReal,
    n_rederived: AdaptiveReal,
    n_published: AdaptiveReal,
    n: AdaptiveReal,
}

/// `1.4 * 30^6 * 3^4.5 * 4 * 6.6 * 2 log 2 * 3.5 * 2.2`: the coefficient of
/// `k^4 log^2 k log n` in the bound on `m`, before dividing out
/// `log lambda` (which cancels against `A_3 = k log lambda`).
fn small_k_m_coefficient(ctx: &Ctx) -> Result<AdaptiveReal> {
    let three = int(3).with_prec(BOUND_PREC);
    Ok(dec("1.4")
        .mul(&int(30).powi(6)?)
        .mul(&three.powi(4)?.mul(&three.sqrt()?))
        .mul_int(4)
        .mul(&dec("6.6"))
        .mul(&ctx.log2.mul_int(2))
        .mul(&dec("3.5"))
        .mul(&dec("2.2")))
}

fn n_chain(ctx: &Ctx, k: &AdaptiveReal, tau: &AdaptiveReal) -> Result<NChain> {
    let lk = ln(k)?;
    let k4l2 = k.powi(4)?.mul(&lk.sqr());
    let c14 = safer(&small_k_m_coefficient(ctx)?, &dec(published::SMALL_K_M_COEFF));
    let m_coeff = c14.mul(&k4l2);
    // m < m_coeff log n + log 2 / log lambda and m >= (n - 2) tau + 1 give
    // n / log n < m_coeff / tau + ((log 2 / log lambda - 1) / tau + 2) / log n,
    // and log n >= log 5.
    let additive = ctx
        .log2
        .div(&ctx.log_lambda)?
        .sub(&int(1))
        .div(tau)?
        .add(&int(2))
        .div(&ln(&int(5))?)?;
    let t = m_coeff.div(tau)?.add(&additive);
    let n_rederived = sanchez_luca_resolve(1, &t)?;
    let n_published = dec(published::SMALL_K_N_COEFF).mul(&k.powi(4)?).mul(&lk.powi(3)?);
    let n = safer(&n_rederived, &n_published);
    Ok(NChain {
        m_coeff,
        t,
        n_rederived,
        n_published,
        n,
    })
}

fn m_from_n(ctx: &Ctx, m_coeff: &AdaptiveReal, n: &AdaptiveReal) -> Result<AdaptiveReal> {
    Ok(m_coeff.mul(&ln(n)?).add(&ctx.log2.div(&ctx.log_lambda)?))
}

/// Absolute bounds for the branch `n >= k + 2` at a fixed `k`.
pub fn small_k_absolute_bounds(k: u32) -> Result<BoundChainReport> {
    if k < 2 {
        return Err(Error::Domain(format!("k must be >= 2, got {k}")));
    }
    if !LogFact::OnePlusLog2k.holds_at(k as u64)? {
        return Err(Error::Precondition(format!("1 + log 2k < 3.5 log k fails at k = {k}")));
    }
    let ctx = Ctx::new()?;
    let nc = narayana_constants(BOUND_PREC)?;
    let alpha = dominant_root_alpha(k, BOUND_PREC)?;
    let tau = ln(&alpha)?.div(&ctx.log_lambda)?;
    let kr = int(k as i64).with_prec(BOUND_PREC);
    let lk = ln(&kr)?;

    let chain = n_chain(&ctx, &kr, &tau)?;
    let m_real = m_from_n(&ctx, &chain.m_coeff, &chain.n)?;

    let eta1 = f_k_alpha(k, &alpha)?.div(&nc.c_lambda)?;
    let h1 = ln(&int(k as i64 + 1))?.add(&ln(&int(31))?.div(&int(3))?);
    // h(alpha) = log(alpha) / k < log(2) / k, since the enclosure of alpha
    // lies below 2; A_2 = 2k * (log 2 / k) = 2 log 2.
    if alpha.upper() > Dyadic::from_int(2) {
        return Err(Error::precision("alpha enclosure reaches past 2"));
    }
    let h2 = ctx.log2.div(&kr)?;
    let inst = MatveevInstance::new(
        2 * k,
        chain.n.mul_int(2).add(&int(2)),
        vec![
            dec("6.6").mul(&kr).mul(&lk),
            h2.mul_int(2 * k as i64),
            kr.mul(&ctx.log_lambda),
        ],
    )?;
    inst.check_heights(
        &[h1, h2, log_height(&lambda_algebraic(), BOUND_PREC)?],
        &[ln(&eta1)?.abs(), ln(&alpha)?, ctx.log_lambda.clone()],
    )?;

    let constants = vec![
        labeled("tau_k", &tau, None),
        labeled("matveev_constant", &inst.constant()?, None),
        labeled("c14_rederived", &small_k_m_coefficient(&ctx)?, None),
        labeled("c14_published", &dec(published::SMALL_K_M_COEFF), Some(published::SMALL_K_M_COEFF)),
        labeled("m_coefficient", &chain.m_coeff, None),
        labeled("resolution_T", &chain.t, None),
        labeled("n_rederived", &chain.n_rederived, None),
        labeled("n_published", &chain.n_published, Some("2.77e15 k^4 log^3 k")),
        labeled("n_bound_real", &chain.n, None),
        labeled("m_bound_real", &m_real, None),
    ];
    Ok(BoundChainReport {
        regime: "small-k".into(),
        k: Some(k),
        matveev: inst.to_record()?,
        constants,
        k_bound: None,
        n_bound: floor_upper(&chain.n),
        m_bound: floor_upper(&m_real),
    })
}

/// Lower bound on `log alpha(k) / log lambda` valid for every `k >= 3`
/// (from `alpha(k) > 2(1 - 2^-k) >= 7/4`).
fn tau_floor(ctx: &Ctx) -> Result<AdaptiveReal> {
    ln(&dec("1.75"))?.div(&ctx.log_lambda)
}

fn large_k_instance(ctx: &Ctx, b: AdaptiveReal) -> Result<MatveevInstance> {
    let inst = MatveevInstance::new(3, b, vec![ctx.log2.mul_int(3), dec("3.44"), dec("0.39")])?;
    let c = narayana_constants(BOUND_PREC)?;
    inst.check_heights(
        &[
            ctx.log2.clone(),
            log_height(&c_lambda_algebraic(), BOUND_PREC)?,
            log_height(&lambda_algebraic(), BOUND_PREC)?,
        ],
        &[ctx.log2.clone(), ln(&c.c_lambda)?.abs(), ctx.log_lambda.clone()],
    )?;
    Ok(inst)
}

/// Upper bound on `n` in the branch `n >= k + 2` as a function of a real
/// upper bound on `k >= 3`.
pub fn large_k_n_bound(k: &AdaptiveReal) -> Result<AdaptiveReal> {
    let ctx = Ctx::new()?;
    Ok(n_chain(&ctx, k, &tau_floor(&ctx)?)?.n)
}

/// Inclusive integer bounds `(n, m)` for `k <= k_cap`, `k >= 3`, with
/// `m < 2n`.
pub fn large_k_caps(k_cap: &BigInt) -> Result<(BigInt, BigInt)> {
    let n = floor_upper(&large_k_n_bound(&AdaptiveReal::from_int(k_cap.clone()))?);
    let m = &n * 2;
    Ok((n, m))
}

/// Absolute bounds for the branch `k > 220`, `n >= k + 2`.
pub fn large_k_absolute_bounds() -> Result<BoundChainReport> {
    let ctx = Ctx::new()?;
    let placeholder = large_k_instance(&ctx, int(1))?;
    let c_mat = placeholder.constant()?;
    // (k/2) log 2 < log 2 + c_mat (1 + log(2n + 2)) <= log 2 + 2.2 c_mat log n.
    let log_n_coeff = safer(&c_mat.mul(&dec("2.2")), &dec(published::LARGE_K_LOG_N_COEFF));
    let k_coeff = safer(
        &log_n_coeff.mul_int(2).div(&ctx.log2)?,
        &dec(published::LARGE_K_K_COEFF),
    );

    // k < k_coeff log N(k) + 2 <= 11.9 k_coeff log k for k >= 221: the gap
    // 11.9 log k - log N(k) grows with k, so the endpoint settles it.
    let factor = dec(published::LARGE_K_LOG_K_FACTOR);
    let k0 = int(221).with_prec(BOUND_PREC);
    let gap = factor.mul(&ln(&k0)?).sub(&ln(&large_k_n_bound(&k0)?)?);
    if !gap.mul(&k_coeff).gt(&int(2)) {
        return Err(Error::Precondition(
            "log N(k) + 2 / c <= 11.9 log k fails at k = 221".into(),
        ));
    }
    let t = k_coeff.mul(&factor);
    let k_real = sanchez_luca_resolve(1, &t)?;
    let n_real = large_k_n_bound(&k_real)?;
    let n_bound = floor_upper(&n_real);
    let m_bound = &n_bound * 2;

    let inst = large_k_instance(&ctx, AdaptiveReal::from_int(&n_bound * 2 + 2))?;
    let constants = vec![
        labeled("matveev_constant", &c_mat, None),
        labeled("log_n_coefficient", &log_n_coeff, Some(published::LARGE_K_LOG_N_COEFF)),
        labeled("k_coefficient", &k_coeff, Some(published::LARGE_K_K_COEFF)),
        labeled("resolution_T", &t, Some("5.48e14")),
        labeled("k_bound_real", &k_real, Some("3.72e16")),
        labeled("n_bound_real", &n_real, Some("2.96e86")),
    ];
    Ok(BoundChainReport {
        regime: "large-k".into(),
        k: None,
        matveev: inst.to_record()?,
        constants,
        k_bound: Some(floor_upper(&k_real)),
        n_bound,
        m_bound,
    })
}

/// True when `N(k) < 2^(k/2)` at `k`, the regime in which
/// `F_n = 2^(n-2)(1 + zeta)` has `|zeta| < 2^(-k/2)`. `log N(k)` grows like
/// `4 log k`, so the check at the smallest `k` covers all larger ones.
pub fn zeta_regime_holds(k: u32) -> Result<bool> {
    let ctx = Ctx::new()?;
    let kr = int(k as i64).with_prec(BOUND_PREC);
    let n = large_k_n_bound(&kr)?;
    Ok(ln(&n)?.lt(&kr.mul(&ctx.log2).div(&int(2))?))
}

/// Absolute bounds for `N_m = 2^l`, i.e. the branch `n <= k + 1` with
/// `l = n - 2`. The report's `n_bound` is `l_bound + 2`.
pub fn pow2_absolute_bounds() -> Result<BoundChainReport> {
    let ctx = Ctx::new()?;
    let nc = narayana_constants(BOUND_PREC)?;
    // |2^l - C_lambda lambda^(m+2)| <= 2 |C_beta| |beta|^(m+2) <= 2 |C_beta| / lambda < 1.
    let tail = nc.c_beta_abs.mul_int(2).div(&nc.lambda)?;
    if !tail.lt(&int(1)) {
        return Err(Error::Precondition("2 |C_beta| / lambda < 1 fails".into()));
    }
    let placeholder = large_k_instance(&ctx, int(1))?;
    let c_mat = placeholder.constant()?;
    // l log 2 < c_mat (1 + log(2l + 4)) <= 2.2 c_mat log l for l >= 6.
    if !dec("2.2").mul(&ln(&int(6))?).gt(&int(1).add(&ln(&int(16))?)) {
        return Err(Error::Precondition("1 + log(2l + 4) < 2.2 log l fails at l = 6".into()));
    }
    let t = c_mat.mul(&dec("2.2")).div(&ctx.log2)?;
    let l_real = sanchez_luca_resolve(1, &t)?;
    // lambda^(m-3) <= N_m = 2^l.
    let m_real = l_real.mul(&ctx.log2).div(&ctx.log_lambda)?.add(&int(3));
    let l_bound = floor_upper(&l_real).max(BigInt::from(5));
    let inst = large_k_instance(&ctx, AdaptiveReal::from_int(&l_bound * 2 + 4))?;
    let constants = vec![
        labeled("matveev_constant", &c_mat, None),
        labeled("resolution_T", &t, None),
        labeled("l_bound_real", &l_real, None),
        labeled("m_bound_real", &m_real, None),
    ];
    Ok(BoundChainReport {
        regime: "pow2".into(),
        k: None,
        matveev: inst.to_record()?,
        constants,
        k_bound: None,
        n_bound: &l_bound + 2,
        m_bound: floor_upper(&m_real),
    })
}
