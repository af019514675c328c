//! The concrete constants of the problem: the dominant root `alpha(k)` of
//! `Psi_k`, Narayana's `lambda` with its companion constants, and `f_k`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use super::poly::IntPoly;
use super::roots::AlgebraicNumber;
use crate::error::{Error, Result};
use crate::real::{AdaptiveReal, Dyadic, RealRecord, Round};

/// Evaluates `g(x) = x^k (x - 2) + 1 = (x - 1) Psi_k(x)` and `g'(x)` on a
/// ball. Cheaper than Horner on `Psi_k` for large `k` and has the same root
/// in `(1, 2)`.
fn g_and_deriv(k: u32, x: &AdaptiveReal) -> (AdaptiveReal, AdaptiveReal) {
    let xk1 = x.powi(k as i64 - 1).expect("positive power");
    let xk = xk1.mul(x);
    let two = AdaptiveReal::from_int(2);
    let g = xk.mul(&x.sub(&two)).add(&AdaptiveReal::from_int(1));
    // g'(x) = x^(k-1) ((k+1) x - 2k)
    let d = xk1.mul(&x.mul_int(k as i64 + 1).sub(&AdaptiveReal::from_int(2 * k as i64)));
    (g, d)
}

/// Certified sign of `g` at a dyadic point, raising precision until the
/// ball excludes zero. `g` has no dyadic roots other than 1.
fn g_sign(k: u32, x: &Dyadic, base_prec: u32) -> Result<i32> {
    let mut prec = base_prec;
    for _ in 0..8 {
        let (v, _) = g_and_deriv(k, &AdaptiveReal::exact(x.clone()).with_prec(prec));
        if v.is_positive() {
            return Ok(1);
        }
        if v.is_negative() {
            return Ok(-1);
        }
        prec *= 2;
    }
    Err(Error::precision(format!(
        "sign of x^{k}(x-2)+1 undecided at {x} up to {prec} bits"
    )))
}

fn refine_alpha(k: u32, target_bits: u32) -> Result<(Dyadic, Dyadic)> {
    let two = Dyadic::from_int(2);
    let mut lo = two.sub(&Dyadic::pow2(1 - k as i64));
    let mut hi = two;
    let base = target_bits + 64 + k.ilog2() + 1;
    if g_sign(k, &lo, base)? >= 0 || g_sign(k, &hi, base)? <= 0 {
        return Err(Error::Precondition(format!(
            "no sign change of Psi_{k} on its dominant-root bracket"
        )));
    }
    let target = Dyadic::pow2(-(target_bits as i64));
    let mut guard = 0u32;
    loop {
        let width = hi.sub(&lo);
        if width <= target {
            return Ok((lo, hi));
        }
        guard += 1;
        if guard > 10_000 {
            return Err(Error::precision("dominant root refinement did not converge"));
        }
        let acc_bits = (-width.msb().unwrap()).max(0) as u32;
        if acc_bits >= 24 {
            let new_bits = (2 * acc_bits).saturating_sub(8).min(target_bits + 8);
            let wp = new_bits + 64 + 2 * (k.ilog2() + 1);
            let c = lo.add(&hi).shl(-1);
            let (v, d) = g_and_deriv(k, &AdaptiveReal::exact(c.clone()).with_prec(wp));
            if !d.contains_zero() {
                let step = v.mid().div(d.mid(), wp, Round::Nearest);
                let cn = c.sub(&step);
                let rho = Dyadic::pow2(-(new_bits as i64));
                let a = cn.sub(&rho).max(lo.clone());
                let b = cn.add(&rho).min(hi.clone());
                if a < b && b.sub(&a) < width.shl(-1) {
                    let sa = if a == lo { -1 } else { g_sign(k, &a, wp)? };
                    let sb = if b == hi { 1 } else { g_sign(k, &b, wp)? };
                    if sa < 0 && sb > 0 {
                        lo = a;
                        hi = b;
                        continue;
                    }
                }
            }
        }
        for _ in 0..8 {
            let m = lo.add(&hi).shl(-1);
            if g_sign(k, &m, base)? < 0 {
                lo = m;
            } else {
                hi = m;
            }
        }
    }
}

type AlphaCache = Mutex<HashMap<(u32, u32), AdaptiveReal>>;

/// Enclosure of the dominant root `alpha(k)` of `Psi_k`, searched inside
/// `(2(1 - 2^-k), 2)`, with radius at most `2^-prec`.
pub fn dominant_root_alpha(k: u32, prec: u32) -> Result<AdaptiveReal> {
    if k < 2 {
        return Err(Error::Domain(format!("k must be >= 2, got {k}")));
    }
    static CACHE: OnceLock<AlphaCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().unwrap().get(&(k, prec)) {
        return Ok(v.clone());
    }
    let (lo, hi) = refine_alpha(k, prec + 1)?;
    let v = AdaptiveReal::from_endpoints(&lo, &hi, prec + 16);
    cache.lock().unwrap().insert((k, prec), v.clone());
    Ok(v)
}

/// `alpha(k)` as an algebraic number with minimal polynomial `Psi_k`.
pub fn alpha_algebraic(k: u32) -> Result<AlgebraicNumber> {
    if k < 2 {
        return Err(Error::Domain(format!("k must be >= 2, got {k}")));
    }
    let two = Dyadic::from_int(2);
    AlgebraicNumber::new(IntPoly::psi(k), two.sub(&Dyadic::pow2(1 - k as i64)), two)
}

/// `lambda`, the real root of `x^3 - x^2 - 1`, isolated in `(1, 2)`.
pub fn lambda_algebraic() -> AlgebraicNumber {
    AlgebraicNumber::new(
        IntPoly::from_i64(&[1, -1, 0, -1]).unwrap(),
        Dyadic::one(),
        Dyadic::from_int(2),
    )
    .expect("x^3 - x^2 - 1 has one root in (1, 2)")
}

/// `C_lambda = 1/(lambda^3 + 2)` as an algebraic number with minimal
/// polynomial `31x^3 - 31x^2 + 10x - 1`.
pub fn c_lambda_algebraic() -> AlgebraicNumber {
    AlgebraicNumber::new(
        IntPoly::from_i64(&[31, -31, 10, -1]).unwrap(),
        Dyadic::from_f64(0.125),
        Dyadic::from_f64(0.25),
    )
    .expect("31x^3 - 31x^2 + 10x - 1 has one root in (1/8, 1/4)")
}

/// Narayana's dominant root and the coefficients of its Binet formula
/// `N_m = C_lambda lambda^(m+2) + C_beta beta^(m+2) + C_gamma gamma^(m+2)`.
#[derive(Clone, Debug)]
pub struct NarayanaConstants {
    pub lambda: AdaptiveReal,
    /// `1 / (lambda^3 + 2)`.
    pub c_lambda: AdaptiveReal,
    /// `|C_beta| = |C_gamma| = sqrt(C_beta C_gamma)`.
    pub c_beta_abs: AdaptiveReal,
    /// `|beta| = |gamma| = lambda^(-1/2)`.
    pub beta_abs: AdaptiveReal,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct NarayanaConstantsRecord {
    pub lambda: RealRecord,
    pub c_lambda: RealRecord,
    pub c_beta_abs: RealRecord,
}

impl NarayanaConstants {
    pub fn to_record(&self) -> NarayanaConstantsRecord {
        NarayanaConstantsRecord {
            lambda: self.lambda.to_record(),
            c_lambda: self.c_lambda.to_record(),
            c_beta_abs: self.c_beta_abs.to_record(),
        }
    }
}

pub fn narayana_constants(prec: u32) -> Result<NarayanaConstants> {
    if prec < 64 {
        return Err(Error::Precondition(format!(
            "Narayana constants need at least 64 bits, got {prec}"
        )));
    }
    let wp = prec + 32;
    let lambda = lambda_algebraic().eval(wp)?;
    let one = AdaptiveReal::from_int(1);
    let two = AdaptiveReal::from_int(2);
    let c_lambda = lambda.powi(3)?.add(&two).recip()?;
    // beta, gamma are the roots of x^2 - s x + p with s = 1 - lambda and
    // p = 1/lambda, so (beta^3 + 2)(gamma^3 + 2) = p^3 + 2(s^3 - 3ps) + 4.
    let s = one.sub(&lambda);
    let p = lambda.recip()?;
    let cubes = s.powi(3)?.sub(&p.mul(&s).mul_int(3));
    let prod = p.powi(3)?.add(&cubes.mul_int(2)).add(&AdaptiveReal::from_int(4));
    let c_beta_abs = prod.sqrt()?.recip()?;
    let beta_abs = p.sqrt()?;
    Ok(NarayanaConstants {
        lambda,
        c_lambda,
        c_beta_abs,
        beta_abs,
    })
}

/// `f_k(alpha) = (alpha - 1) / (2 + (k + 1)(alpha - 2))`.
pub fn f_k_alpha(k: u32, alpha: &AdaptiveReal) -> Result<AdaptiveReal> {
    let two = AdaptiveReal::from_int(2);
    let den = two.add(&alpha.sub(&two).mul_int(k as i64 + 1));
    alpha.sub(&AdaptiveReal::from_int(1)).div(&den)
}

/// Outward-rounded natural logarithm of a positive enclosure.
pub fn certified_log(x: &AdaptiveReal) -> Result<AdaptiveReal> {
    x.ln()
}
