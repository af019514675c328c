//! Midpoint-radius ball arithmetic over exact dyadic midpoints.
//!
//! Every operation returns a ball guaranteed to contain the exact result of
//! applying the operation to any points of the input balls. Midpoints are
//! rounded to the working precision and the rounding error is folded into
//! the radius; radii are kept as short upward-rounded dyadics.

mod complex;
mod dyadic;
mod elementary;

pub use complex::ComplexBall;
pub use dyadic::{Dyadic, Round};
pub(crate) use dyadic::parse_decimal_rational;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Precision given to results of operations on exact inputs.
pub const DEFAULT_PREC: u32 = 128;

/// A real number known to lie in `[mid - rad, mid + rad]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdaptiveReal {
    mid: Dyadic,
    rad: Dyadic,
    prec: u32,
}

impl AdaptiveReal {
    /// Exact value; `prec == 0` marks it as exact so binary operations take
    /// the precision of the other operand.
    pub fn exact(x: Dyadic) -> Self {
        AdaptiveReal {
            mid: x,
            rad: Dyadic::zero(),
            prec: 0,
        }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Self::exact(Dyadic::from_int(n))
    }

    pub fn from_f64(x: f64) -> Self {
        Self::exact(Dyadic::from_f64(x))
    }

    /// Enclosure of a rational at `prec` bits.
    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        let lo = Dyadic::from_rational(q, prec, Round::Floor);
        let hi = Dyadic::from_rational(q, prec, Round::Ceil);
        Self::from_endpoints(&lo, &hi, prec)
    }

    /// Parse a decimal literal into an enclosing ball.
    pub fn parse_decimal(s: &str, prec: u32) -> Result<Self> {
        let q = parse_decimal_rational(s).ok_or_else(|| Error::Parse(format!("bad decimal `{s}`")))?;
        Ok(Self::from_rational(&q, prec))
    }

    pub fn from_parts(mid: Dyadic, rad: Dyadic, prec: u32) -> Self {
        assert!(!rad.is_negative(), "negative radius");
        AdaptiveReal { mid, rad, prec }
    }

    /// Smallest ball (up to radius rounding) containing `[lo, hi]`.
    pub fn from_endpoints(lo: &Dyadic, hi: &Dyadic, prec: u32) -> Self {
        assert!(lo <= hi, "inverted interval");
        let mid = lo.add(hi).shl(-1);
        let rad = hi.sub(&mid).mag_up();
        AdaptiveReal { mid, rad, prec }
    }

    pub fn mid(&self) -> &Dyadic {
        &self.mid
    }

    pub fn rad(&self) -> &Dyadic {
        &self.rad
    }

    /// Working precision in bits (0 for exact values).
    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn lower(&self) -> Dyadic {
        self.mid.sub(&self.rad)
    }

    pub fn upper(&self) -> Dyadic {
        self.mid.add(&self.rad)
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lower() <= x && x <= &self.upper()
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&Dyadic::zero())
    }

    pub fn contains_ball(&self, other: &AdaptiveReal) -> bool {
        self.lower() <= other.lower() && other.upper() <= self.upper()
    }

    pub fn overlaps(&self, other: &AdaptiveReal) -> bool {
        self.lower() <= other.upper() && other.lower() <= self.upper()
    }

    pub fn is_positive(&self) -> bool {
        self.mid > self.rad
    }

    pub fn is_negative(&self) -> bool {
        self.mid.neg() > self.rad
    }

    /// Certified sign, or `None` when the ball touches zero.
    pub fn sign(&self) -> Option<Ordering> {
        if self.is_positive() {
            Some(Ordering::Greater)
        } else if self.is_negative() {
            Some(Ordering::Less)
        } else if self.is_exact() && self.mid.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Certified `self < other`.
    pub fn lt(&self, other: &AdaptiveReal) -> bool {
        self.upper() < other.lower()
    }

    /// Certified `self > other`.
    pub fn gt(&self, other: &AdaptiveReal) -> bool {
        other.lt(self)
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    /// log2 of the radius, or `None` when exact.
    pub fn rad_log2(&self) -> Option<i64> {
        self.rad.msb()
    }

    /// Number of bits of the midpoint that are correct in the relative
    /// sense (saturates at `u32::MAX` for exact balls, 0 when the ball
    /// straddles zero).
    pub fn rel_accuracy_bits(&self) -> u32 {
        if self.rad.is_zero() {
            return u32::MAX;
        }
        match (self.mid.msb(), self.rad.msb()) {
            (Some(m), Some(r)) if m > r => (m - r) as u32,
            _ => 0,
        }
    }

    fn out_prec(&self, other: &AdaptiveReal) -> u32 {
        match self.prec.max(other.prec) {
            0 => DEFAULT_PREC,
            p => p,
        }
    }

    fn finish(mid_exact: Dyadic, rad: Dyadic, prec: u32) -> Self {
        let mid = mid_exact.round(prec, Round::Nearest);
        let err = mid_exact.sub(&mid).abs();
        AdaptiveReal {
            mid,
            rad: rad.add(&err).mag_up(),
            prec,
        }
    }

    /// Round the midpoint to a new working precision.
    pub fn with_prec(&self, prec: u32) -> Self {
        Self::finish(self.mid.clone(), self.rad.clone(), prec)
    }

    /// Widen the radius by a nonnegative amount.
    pub fn add_error(&self, err: &Dyadic) -> Self {
        AdaptiveReal {
            mid: self.mid.clone(),
            rad: self.rad.add(&err.abs()).mag_up(),
            prec: self.prec,
        }
    }

    pub fn neg(&self) -> Self {
        AdaptiveReal {
            mid: self.mid.neg(),
            rad: self.rad.clone(),
            prec: self.prec,
        }
    }

    pub fn abs(&self) -> Self {
        if !self.contains_zero() {
            return AdaptiveReal {
                mid: self.mid.abs(),
                rad: self.rad.clone(),
                prec: self.prec,
            };
        }
        let hi = self.mid.abs().add(&self.rad);
        Self::from_endpoints(&Dyadic::zero(), &hi, self.prec)
    }

    pub fn add(&self, other: &AdaptiveReal) -> Self {
        Self::finish(
            self.mid.add(&other.mid),
            self.rad.add(&other.rad),
            self.out_prec(other),
        )
    }

    pub fn sub(&self, other: &AdaptiveReal) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &AdaptiveReal) -> Self {
        let rad = self
            .mid
            .abs()
            .mul(&other.rad)
            .add(&other.mid.abs().mul(&self.rad))
            .add(&self.rad.mul(&other.rad));
        Self::finish(self.mid.mul(&other.mid), rad, self.out_prec(other))
    }

    pub fn mul_int(&self, n: impl Into<BigInt>) -> Self {
        self.mul(&AdaptiveReal::from_int(n))
    }

    pub fn sqr(&self) -> Self {
        self.mul(self)
    }

    /// Fails with a precision error when the divisor ball touches zero.
    pub fn div(&self, other: &AdaptiveReal) -> Result<Self> {
        let den_abs = other.mid.abs();
        let den_lo = den_abs.sub(&other.rad);
        if !den_lo.is_positive() {
            return Err(Error::precision("division by a ball containing zero"));
        }
        let prec = self.out_prec(other);
        let q = self.mid.div(&other.mid, prec, Round::Nearest);
        // |q - mid/mid'| < one unit in the last place of q.
        let ulp = match q.msb() {
            Some(m) => Dyadic::pow2(m - prec as i64 + 1),
            None => Dyadic::zero(),
        };
        let rad = if self.rad.is_zero() && other.rad.is_zero() {
            Dyadic::zero()
        } else {
            let num = self.mid.abs().mul(&other.rad).add(&den_abs.mul(&self.rad));
            num.div(&den_abs.mul(&den_lo), dyadic::MAG_BITS, Round::Ceil)
        };
        Ok(AdaptiveReal {
            mid: q,
            rad: rad.add(&ulp).mag_up(),
            prec,
        })
    }

    pub fn recip(&self) -> Result<Self> {
        AdaptiveReal::from_int(1).div(self)
    }

    /// Integer power by repeated squaring; `x^0` is exactly 1.
    pub fn powi(&self, n: i64) -> Result<Self> {
        if n == 0 {
            return Ok(AdaptiveReal::from_int(1));
        }
        if n < 0 {
            return self.powi(-n)?.recip();
        }
        let mut base = self.clone();
        let mut acc: Option<AdaptiveReal> = None;
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        Ok(acc.unwrap())
    }

    /// Midpoint and radius in decimal, `mid ± rad`.
    pub fn to_decimal(&self, digits: usize) -> String {
        format!(
            "{} ± {}",
            self.mid.to_sci_string(digits),
            self.rad.to_sci_string(3)
        )
    }

    /// Decimal record whose ball still contains this one: the midpoint
    /// rounding error is folded into the radius, and the radius is printed
    /// with a small upward margin so decimal rounding cannot shrink it.
    pub fn to_record(&self) -> RealRecord {
        let mid = self.mid.to_sci_string(RECORD_DIGITS);
        let printed = parse_decimal_rational(&mid).expect("rendered decimal parses");
        let drift = (printed - self.mid.to_rational()).abs();
        let total = drift + self.rad.to_rational();
        let rad = if total.is_zero() {
            "0".to_string()
        } else {
            let widened = total * BigRational::new(1001.into(), 1000.into());
            Dyadic::from_rational(&widened, 64, Round::Ceil).to_sci_string(4)
        };
        RealRecord {
            mid,
            rad,
            prec: self.prec,
        }
    }
}

/// Significant digits kept for midpoints in serialized records.
pub const RECORD_DIGITS: usize = 40;

/// Serialized form of a ball: decimal midpoint, decimal radius, precision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealRecord {
    pub mid: String,
    pub rad: String,
    pub prec: u32,
}

impl RealRecord {
    /// Approximate midpoint for human consumption.
    pub fn mid_f64(&self) -> f64 {
        self.mid.parse().unwrap_or(f64::NAN)
    }

    /// A ball containing every value the record describes: the decimal
    /// midpoint widened by the decimal radius, both rounded outward.
    pub fn to_real(&self) -> Result<AdaptiveReal> {
        let bad = || Error::Parse(format!("bad real record {}", self.mid));
        let mid = parse_decimal_rational(&self.mid).ok_or_else(bad)?;
        let rad = parse_decimal_rational(&self.rad).ok_or_else(bad)?;
        let prec = self.prec.max(64);
        let lo = Dyadic::from_rational(&(&mid - &rad), prec, Round::Floor);
        let hi = Dyadic::from_rational(&(&mid + &rad), prec, Round::Ceil);
        Ok(AdaptiveReal::from_endpoints(&lo, &hi, prec))
    }
}

impl fmt::Display for AdaptiveReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        write!(f, "{}", self.to_decimal(digits))
    }
}

impl Zero for AdaptiveReal {
    fn zero() -> Self {
        AdaptiveReal::from_int(0)
    }

    fn is_zero(&self) -> bool {
        self.is_exact() && self.mid.is_zero()
    }
}

impl std::ops::Add for AdaptiveReal {
    type Output = AdaptiveReal;
    fn add(self, rhs: Self) -> Self {
        AdaptiveReal::add(&self, &rhs)
    }
}

impl std::ops::Add<&AdaptiveReal> for &AdaptiveReal {
    type Output = AdaptiveReal;
    fn add(self, rhs: &AdaptiveReal) -> AdaptiveReal {
        AdaptiveReal::add(self, rhs)
    }
}

impl std::ops::Sub<&AdaptiveReal> for &AdaptiveReal {
    type Output = AdaptiveReal;
    fn sub(self, rhs: &AdaptiveReal) -> AdaptiveReal {
        AdaptiveReal::sub(self, rhs)
    }
}

impl std::ops::Mul<&AdaptiveReal> for &AdaptiveReal {
    type Output = AdaptiveReal;
    fn mul(self, rhs: &AdaptiveReal) -> AdaptiveReal {
        AdaptiveReal::mul(self, rhs)
    }
}

impl std::ops::Neg for &AdaptiveReal {
    type Output = AdaptiveReal;
    fn neg(self) -> AdaptiveReal {
        AdaptiveReal::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ball(x: f64, r: f64) -> AdaptiveReal {
        AdaptiveReal::from_parts(Dyadic::from_f64(x), Dyadic::from_f64(r), 64)
    }

    #[test]
    fn exact_arithmetic_stays_exact() {
        let a = AdaptiveReal::from_int(3);
        let b = AdaptiveReal::from_int(4);
        assert!(a.mul(&b).is_exact());
        assert!(a.add(&b).contains(&Dyadic::from_int(7)));
    }

    #[test]
    fn division_encloses_third() {
        let third = AdaptiveReal::from_int(1).div(&AdaptiveReal::from_int(3)).unwrap();
        assert!(!third.is_exact());
        assert!(third.mul_int(3).contains(&Dyadic::one()));
        assert!(third.rad_log2().unwrap() <= -(DEFAULT_PREC as i64) + 1);
    }

    #[test]
    fn division_by_zero_ball_is_refinable() {
        let err = AdaptiveReal::from_int(1).div(&ball(0.0, 1e-3)).unwrap_err();
        assert!(err.is_refinable());
    }

    #[test]
    fn powi_zero_is_exact_one() {
        let x = ball(1.5, 1e-10);
        assert_eq!(x.powi(0).unwrap(), AdaptiveReal::from_int(1));
        let inv = x.powi(-2).unwrap();
        assert!(inv.contains(&Dyadic::from_f64(1.0 / 2.25)));
    }

    #[test]
    fn abs_of_straddling_ball() {
        let a = ball(-0.1, 0.5).abs();
        assert!(a.contains(&Dyadic::zero()));
        assert!(a.contains(&Dyadic::from_f64(0.6)));
    }

    #[test]
    fn record_is_decimal() {
        let r = AdaptiveReal::from_int(5).to_record();
        assert_eq!(r.rad, "0");
        assert!(r.mid.starts_with("5.000"));
    }

    proptest! {
        // Enclosure soundness: sample points inside the operand balls and
        // check the f64 result of the operation against the output ball,
        // allowing for f64's own rounding.
        #[test]
        fn arithmetic_contains_sampled_results(
            a in -1e6f64..1e6, ra in 0f64..1e-3, b in 0.5f64..1e6, rb in 0f64..1e-3,
            ta in -1f64..1.0, tb in -1f64..1.0,
        ) {
            let x = ball(a, ra);
            let y = ball(b, rb);
            let (pa, pb) = (a + ta * ra, b + tb * rb);
            let slack = |v: f64| AdaptiveReal::from_f64(v).add_error(&Dyadic::from_f64(v.abs() * 1e-14 + 1e-300));
            prop_assert!(x.add(&y).overlaps(&slack(pa + pb)));
            prop_assert!(x.sub(&y).overlaps(&slack(pa - pb)));
            prop_assert!(x.mul(&y).overlaps(&slack(pa * pb)));
            prop_assert!(x.div(&y).unwrap().overlaps(&slack(pa / pb)));
        }
    }
}
