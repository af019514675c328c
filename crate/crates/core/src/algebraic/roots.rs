//! Certified refinement of an isolated real root: bisection to get going,
//! then Newton steps whose output is accepted only after a certified sign
//! change brackets it.

use serde::{Deserialize, Serialize};

use super::poly::IntPoly;
use crate::error::{Error, Result};
use crate::real::{AdaptiveReal, Dyadic, Round};

/// A real algebraic number: primitive minimal polynomial plus an interval
/// holding exactly one of its roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraicNumber {
    minpoly: IntPoly,
    lo: Dyadic,
    hi: Dyadic,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct AlgebraicRecord {
    /// Leading coefficient first.
    pub minpoly: Vec<String>,
    pub lo: String,
    pub hi: String,
}

impl AlgebraicNumber {
    /// Checks primitivity, the sign change, and uniqueness of the root in
    /// `(lo, hi)` (Descartes' rule when it settles the question, a Sturm
    /// count otherwise).
    pub fn new(minpoly: IntPoly, lo: Dyadic, hi: Dyadic) -> Result<Self> {
        if !minpoly.is_primitive() {
            return Err(Error::Precondition(format!(
                "minimal polynomial {minpoly} must be primitive with positive leading coefficient"
            )));
        }
        if lo >= hi {
            return Err(Error::Precondition("empty isolating interval".into()));
        }
        let (sl, sh) = (minpoly.sign_at(&lo), minpoly.sign_at(&hi));
        if sl * sh >= 0 {
            return Err(Error::Precondition(format!(
                "{minpoly} has no sign change on [{lo}, {hi}]"
            )));
        }
        let unique_by_descartes = !lo.is_negative() && minpoly.descartes_positive() == 1;
        if !unique_by_descartes {
            if minpoly.degree() > 32 {
                return Err(Error::Precondition(
                    "cannot certify root uniqueness for degree > 32 without Descartes' rule".into(),
                ));
            }
            let n = minpoly.sturm_sequence().count_in(&lo, &hi);
            if n != 1 {
                return Err(Error::Precondition(format!(
                    "{minpoly} has {n} roots in the interval, expected exactly one"
                )));
            }
        }
        Ok(AlgebraicNumber { minpoly, lo, hi })
    }

    pub fn minpoly(&self) -> &IntPoly {
        &self.minpoly
    }

    pub fn interval(&self) -> (&Dyadic, &Dyadic) {
        (&self.lo, &self.hi)
    }

    /// Enclosure of the root with radius at most `2^-prec`.
    pub fn eval(&self, prec: u32) -> Result<AdaptiveReal> {
        let (lo, hi) = refine_root(&self.minpoly, &self.lo, &self.hi, prec + 1)?;
        Ok(AdaptiveReal::from_endpoints(&lo, &hi, prec + 16))
    }

    pub fn to_record(&self) -> AlgebraicRecord {
        AlgebraicRecord {
            minpoly: self.minpoly.coeffs().iter().map(|c| c.to_string()).collect(),
            lo: self.lo.to_sci_string(30),
            hi: self.hi.to_sci_string(30),
        }
    }
}

/// Shrinks `[lo, hi]` (strict sign change, unique root inside) until its
/// width is at most `2^-target_bits`.
pub fn refine_root(
    poly: &IntPoly,
    lo: &Dyadic,
    hi: &Dyadic,
    target_bits: u32,
) -> Result<(Dyadic, Dyadic)> {
    let mut lo = lo.clone();
    let mut hi = hi.clone();
    let sign_lo = poly.sign_at(&lo);
    let sign_hi = poly.sign_at(&hi);
    if sign_lo == 0 {
        return Ok((lo.clone(), lo));
    }
    if sign_hi == 0 {
        return Ok((hi.clone(), hi));
    }
    if sign_lo == sign_hi {
        return Err(Error::Precondition("no sign change in root bracket".into()));
    }
    let target = Dyadic::pow2(-(target_bits as i64));
    let deriv = poly.derivative();
    let deg_bits = 64 - (poly.degree() as u64).leading_zeros() as u32;
    let coeff_bits = poly
        .coeffs()
        .iter()
        .map(|c| c.bits() as u32)
        .max()
        .unwrap_or(1);
    let mut iterations = 0u32;

    loop {
        let width = hi.sub(&lo);
        if width <= target {
            return Ok((lo, hi));
        }
        iterations += 1;
        if iterations > 10_000 {
            return Err(Error::precision("root refinement did not converge"));
        }
        let acc_bits = (-width.msb().unwrap()).max(0) as u32;

        // Try a Newton step once the bracket is narrow enough for quadratic
        // convergence to plausibly kick in.
        if acc_bits >= 24 {
            let new_bits = (2 * acc_bits).saturating_sub(8).min(target_bits + 8);
            let wp = new_bits + 2 * deg_bits + poly.degree() as u32 * 2 + coeff_bits + 64;
            let c = lo.add(&hi).shl(-1);
            let cb = AdaptiveReal::exact(c.clone()).with_prec(wp);
            let v = poly.eval_ball(&cb);
            let d = deriv.eval_ball(&cb);
            if !d.contains_zero() {
                let step = v.mid().div(d.mid(), wp, Round::Nearest);
                let cn = c.sub(&step);
                let rho = Dyadic::pow2(-(new_bits as i64));
                let a = cn.sub(&rho).max(lo.clone());
                let b = cn.add(&rho).min(hi.clone());
                if a < b && b.sub(&a) < width.shl(-1) {
                    let sa = if a == lo { sign_lo } else { poly.sign_at(&a) };
                    let sb = if b == hi { sign_hi } else { poly.sign_at(&b) };
                    if sa == 0 {
                        return Ok((a.clone(), a));
                    }
                    if sb == 0 {
                        return Ok((b.clone(), b));
                    }
                    if sa == sign_lo && sb == sign_hi {
                        lo = a;
                        hi = b;
                        continue;
                    }
                }
            }
        }

        for _ in 0..8 {
            let m = lo.add(&hi).shl(-1);
            let s = poly.sign_at(&m);
            if s == 0 {
                return Ok((m.clone(), m));
            }
            if s == sign_lo {
                lo = m;
            } else {
                hi = m;
            }
        }
    }
}
