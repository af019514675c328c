//! Logarithmic (Weil) height `h = (log a_0 + sum log max(|root|, 1)) / d`
//! from a primitive minimal polynomial.

use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::complex_roots::certified_roots;
use super::poly::IntPoly;
use super::roots::{refine_root, AlgebraicNumber};
use crate::error::{Error, Result};
use crate::real::{AdaptiveReal, Dyadic};
use crate::registry::Registry;

/// One way of evaluating the logarithmic height of a polynomial's roots.
pub trait HeightMethod: Send + Sync {
    fn name(&self) -> &'static str;
    fn log_height(&self, p: &IntPoly, prec: u32) -> Result<AdaptiveReal>;
}

fn check_primitive(p: &IntPoly) -> Result<()> {
    if !p.is_primitive() {
        return Err(Error::Precondition(format!(
            "{p} is not primitive with positive leading coefficient"
        )));
    }
    Ok(())
}

/// `log max(x, 1)` for a modulus known to lie in `[lo, hi]`.
fn log_max_one(lo: &Dyadic, hi: &Dyadic, prec: u32) -> Result<AdaptiveReal> {
    let one = Dyadic::one();
    if hi <= &one {
        return Ok(AdaptiveReal::from_int(0));
    }
    let lo = if lo < &one { one } else { lo.clone() };
    AdaptiveReal::from_endpoints(&lo, hi, prec).ln()
}

fn assemble(p: &IntPoly, log_terms: AdaptiveReal, prec: u32) -> Result<AdaptiveReal> {
    let lead = AdaptiveReal::from_int(p.leading().clone()).with_prec(prec).ln()?;
    lead.add(&log_terms)
        .div(&AdaptiveReal::from_int(p.degree() as i64))
}

/// General method: certified inclusion disks for every complex root.
pub struct AllRoots;

impl HeightMethod for AllRoots {
    fn name(&self) -> &'static str {
        "all-roots"
    }

    fn log_height(&self, p: &IntPoly, prec: u32) -> Result<AdaptiveReal> {
        check_primitive(p)?;
        let disks = certified_roots(p, prec + 8)?;
        let mut sum = AdaptiveReal::from_int(0);
        for disk in &disks {
            let (lo, hi) = disk.modulus_bounds();
            sum = sum.add(&log_max_one(&lo, &hi, prec + 8)?);
        }
        assemble(p, sum, prec + 8)
    }
}

/// Degree <= 3: isolate the real roots exactly (Sturm) and, for a cubic
/// with a complex pair, take the pair's modulus from the quadratic cofactor.
pub struct LowDegree;

impl LowDegree {
    fn real_root_moduli(p: &IntPoly, prec: u32) -> Result<Vec<(Dyadic, Dyadic)>> {
        let mut out = Vec::new();
        for (lo, hi) in p.isolate_real_roots()? {
            let (a, b) = refine_root(p, &lo, &hi, prec)?;
            let (ma, mb) = (a.abs(), b.abs());
            if a.is_negative() && b.is_positive() {
                out.push((Dyadic::zero(), ma.max(mb)));
            } else {
                out.push((ma.clone().min(mb.clone()), ma.max(mb)));
            }
        }
        Ok(out)
    }
}

/// Exact discriminant of a cubic `a x^3 + b x^2 + c x + d`.
pub fn cubic_discriminant(c: &[BigInt]) -> BigInt {
    let (a, b, cc, d) = (&c[0], &c[1], &c[2], &c[3]);
    BigInt::from(18) * a * b * cc * d - BigInt::from(4) * b * b * b * d + b * b * cc * cc
        - BigInt::from(4) * a * cc * cc * cc
        - BigInt::from(27) * a * a * d * d
}

impl HeightMethod for LowDegree {
    fn name(&self) -> &'static str {
        "cubic"
    }

    fn log_height(&self, p: &IntPoly, prec: u32) -> Result<AdaptiveReal> {
        check_primitive(p)?;
        let wp = prec + 16;
        let c = p.coeffs();
        let mut sum = AdaptiveReal::from_int(0);
        match p.degree() {
            1 | 2 => {
                let disc_neg = p.degree() == 2 && (&c[1] * &c[1] - BigInt::from(4) * &c[0] * &c[2]).is_negative();
                if disc_neg {
                    // Complex pair: |root|^2 = a_2 / a_0 for both.
                    let m2 = AdaptiveReal::from_int(c[2].clone())
                        .with_prec(wp)
                        .div(&AdaptiveReal::from_int(c[0].clone()))?;
                    let m = m2.sqrt()?;
                    let t = log_max_one(&m.lower(), &m.upper(), wp)?;
                    sum = t.mul_int(2);
                } else {
                    for (lo, hi) in Self::real_root_moduli(p, wp)? {
                        sum = sum.add(&log_max_one(&lo, &hi, wp)?);
                    }
                }
            }
            3 => {
                let disc = cubic_discriminant(c);
                if disc.is_zero() {
                    return Err(Error::Precondition(format!("{p} has a repeated root")));
                }
                if disc.is_positive() {
                    for (lo, hi) in Self::real_root_moduli(p, wp)? {
                        sum = sum.add(&log_max_one(&lo, &hi, wp)?);
                    }
                } else {
                    let (lo, hi) = p.isolate_real_roots()?.remove(0);
                    let r = AlgebraicNumber::new(p.clone(), lo, hi)?.eval(wp)?;
                    let a0 = AdaptiveReal::from_int(c[0].clone());
                    // p(x) = (x - r)(a0 x^2 + b x + e)
                    let b = a0.mul(&r).add(&AdaptiveReal::from_int(c[1].clone()));
                    let e = b.mul(&r).add(&AdaptiveReal::from_int(c[2].clone()));
                    let m = e.div(&a0)?.sqrt()?;
                    let pair = log_max_one(&m.lower(), &m.upper(), wp)?.mul_int(2);
                    let real = log_max_one(&r.abs().lower(), &r.abs().upper(), wp)?;
                    sum = pair.add(&real);
                }
            }
            d => {
                return Err(Error::Domain(format!(
                    "cubic method needs degree 1..=3, got {d}"
                )))
            }
        }
        assemble(p, sum, wp)
    }
}

/// Monic polynomial with a single real root outside the unit circle and all
/// others strictly inside (caller-asserted, e.g. `x^k - x^(k-1) - ... - 1`):
/// `h = log(alpha) / d`.
pub struct DominantRoot;

impl HeightMethod for DominantRoot {
    fn name(&self) -> &'static str {
        "dominant-root"
    }

    fn log_height(&self, p: &IntPoly, prec: u32) -> Result<AdaptiveReal> {
        check_primitive(p)?;
        if !p.leading().is_one() {
            return Err(Error::Precondition(format!("{p} is not monic")));
        }
        if p.descartes_positive() != 1 {
            return Err(Error::Precondition(format!(
                "{p} must have exactly one positive root"
            )));
        }
        let lo = Dyadic::one();
        let hi = Dyadic::pow2(p.cauchy_bound_log2());
        let alpha = AlgebraicNumber::new(p.clone(), lo, hi)?.eval(prec + 8)?;
        alpha.ln()?.div(&AdaptiveReal::from_int(p.degree() as i64))
    }
}

pub fn height_methods() -> &'static Registry<dyn HeightMethod> {
    static REG: OnceLock<Registry<dyn HeightMethod>> = OnceLock::new();
    REG.get_or_init(|| {
        let mut r: Registry<dyn HeightMethod> = Registry::new("height method");
        for m in [
            Arc::new(AllRoots) as Arc<dyn HeightMethod>,
            Arc::new(LowDegree),
            Arc::new(DominantRoot),
        ] {
            r.register(m.name(), m);
        }
        r
    })
}

/// Height of an algebraic number: the low-degree route up to cubics, all
/// complex roots beyond.
pub fn log_height(x: &AlgebraicNumber, prec: u32) -> Result<AdaptiveReal> {
    log_height_of(x.minpoly(), prec)
}

pub fn log_height_of(p: &IntPoly, prec: u32) -> Result<AdaptiveReal> {
    let name = if p.degree() <= 3 { "cubic" } else { "all-roots" };
    height_methods().get(name)?.log_height(p, prec)
}
