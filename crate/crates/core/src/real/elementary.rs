//! Square root and natural logarithm with rigorous error bounds.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::dyadic::MAG_BITS;
use super::{AdaptiveReal, Dyadic, Round, DEFAULT_PREC};
use crate::error::{Error, Result};

impl AdaptiveReal {
    fn own_prec(&self) -> u32 {
        if self.prec == 0 {
            DEFAULT_PREC
        } else {
            self.prec
        }
    }

    /// Square root of a ball whose lower endpoint is strictly positive.
    pub fn sqrt(&self) -> Result<Self> {
        let prec = self.own_prec();
        let lo = self.lower();
        if self.is_exact() && self.mid.is_zero() {
            return Ok(AdaptiveReal::from_int(0));
        }
        if !lo.is_positive() {
            return Err(Error::precision("sqrt of a ball touching zero"));
        }
        let mid_lo = self.mid.sqrt(prec + 2, Round::Floor);
        let mid_hi = self.mid.sqrt(prec + 2, Round::Ceil);
        let mid = self.mid.sqrt(prec, Round::Nearest);
        let round_err = mid_hi.sub(&mid).abs().max(mid.sub(&mid_lo).abs());
        // |sqrt(x) - sqrt(m)| <= r / sqrt(m - r)
        let prop = if self.rad.is_zero() {
            Dyadic::zero()
        } else {
            let root_lo = lo.sqrt(MAG_BITS, Round::Floor);
            self.rad.div(&root_lo, MAG_BITS, Round::Ceil)
        };
        Ok(AdaptiveReal {
            mid,
            rad: round_err.add(&prop).mag_up(),
            prec,
        })
    }

    /// Natural logarithm of a ball whose lower endpoint is strictly positive.
    pub fn ln(&self) -> Result<Self> {
        let prec = self.own_prec();
        let lo = self.lower();
        if !lo.is_positive() {
            return Err(Error::precision("log of a ball touching zero"));
        }
        let (mid, err) = ln_dyadic(&self.mid, prec);
        // |ln x - ln m| <= r / (m - r)
        let prop = if self.rad.is_zero() {
            Dyadic::zero()
        } else {
            self.rad.div(&lo, MAG_BITS, Round::Ceil)
        };
        let rounded = mid.round(prec, Round::Nearest);
        let round_err = mid.sub(&rounded).abs();
        Ok(AdaptiveReal {
            mid: rounded,
            rad: err.add(&prop).add(&round_err).mag_up(),
            prec,
        })
    }

    /// `ln 2` at `prec` bits.
    pub fn ln2(prec: u32) -> Self {
        let w = prec as u64 + 24;
        let (sum, err) = atanh_inv(3, w);
        let s = Dyadic::new(sum << 1usize, -(w as i64));
        let e = Dyadic::new(BigInt::from(2 * err), -(w as i64));
        let mid = s.round(prec, Round::Nearest);
        let round_err = s.sub(&mid).abs();
        AdaptiveReal {
            mid,
            rad: e.add(&round_err).mag_up(),
            prec,
        }
    }
}

/// `(approx, err)` with `|ln x - approx| <= err`, roughly `prec` bits.
pub(crate) fn ln_dyadic(x: &Dyadic, prec: u32) -> (Dyadic, Dyadic) {
    assert!(x.is_positive());
    if x == &Dyadic::one() {
        return (Dyadic::zero(), Dyadic::zero());
    }
    let man = x.mantissa().clone();
    let bits = man.bits() as i64;
    // x = y * 2^e with y in [1, 2)
    let e = x.exponent() + bits - 1;
    let steps = (((prec as f64).sqrt() / 2.0) as u64).max(4);
    let e_bits = 64 - (e.unsigned_abs()).leading_zeros() as u64;
    let w = prec as u64 + steps + e_bits + 40;
    let one = BigInt::one() << w as usize;

    let shift = w as i64 - (bits - 1);
    let mut y = if shift >= 0 {
        &man << shift as usize
    } else {
        &man >> (-shift) as usize
    };
    // Square roots pull y towards 1; each floor costs at most one ulp and
    // earlier errors are halved, so y carries at most 2 ulps afterwards.
    for _ in 0..steps {
        y = (&y << w as usize).sqrt();
    }
    let z = ((&y - &one) << w as usize) / (&y + &one);
    let (sum, series_err) = atanh_fixed(&z, w);
    // atanh' = 1/(1 - z^2) <= 9/8 here; z carries <= 3 ulps.
    let local_err = series_err + 4;
    let ln_y = &sum << (steps as usize + 1);
    let ln_y_err = BigInt::from(local_err) << (steps as usize + 1);

    let (mut total, mut total_err) = (ln_y, ln_y_err);
    if e != 0 {
        let (ln2_half, ln2_err) = atanh_inv(3, w);
        let ln2 = ln2_half << 1usize;
        total += &ln2 * e;
        total_err += BigInt::from(2 * ln2_err) * e.unsigned_abs();
    }
    (
        Dyadic::new(total, -(w as i64)),
        Dyadic::new(total_err, -(w as i64)),
    )
}

/// atanh(z) for a fixed-point `z < 1/2` with `w` fractional bits, returning
/// the sum and an error bound in ulps (excluding the error already in `z`).
fn atanh_fixed(z: &BigInt, w: u64) -> (BigInt, u64) {
    if z.is_zero() {
        return (BigInt::zero(), 0);
    }
    let z2 = (z * z) >> w as usize;
    let mut term = z.clone();
    let mut sum = z.clone();
    let mut i: u64 = 0;
    loop {
        term = (&term * &z2) >> w as usize;
        i += 1;
        if term.is_zero() {
            break;
        }
        sum += &term / BigInt::from(2 * i + 1);
    }
    // Term i carries <= 2i ulps, division adds one; the dropped tail is
    // bounded by a geometric series of the last (zero) term's error.
    (sum, 5 * i + 6)
}

/// atanh(1/n) in fixed point with `w` fractional bits, plus an ulp bound.
fn atanh_inv(n: u64, w: u64) -> (BigInt, u64) {
    let n2 = BigInt::from(n * n);
    let mut term = (BigInt::one() << w as usize) / BigInt::from(n);
    let mut sum = term.clone();
    let mut i: u64 = 0;
    loop {
        term /= &n2;
        i += 1;
        if term.is_zero() {
            break;
        }
        sum += &term / BigInt::from(2 * i + 1);
    }
    (sum, 2 * i + 4)
}

#[cfg(test)]
mod tests {
    use super::*;

    const LN2_50: &str = "6.9314718055994530941723212145817656807550013436026e-1";

    #[test]
    fn ln2_digits() {
        let l = AdaptiveReal::ln2(200);
        assert!(l.rad_log2().unwrap() < -195);
        assert_eq!(l.mid().to_sci_string(50), LN2_50);
        let via_ln = AdaptiveReal::from_int(2).with_prec(200).ln().unwrap();
        assert!(via_ln.overlaps(&l));
    }

    #[test]
    fn ln_one_is_zero() {
        let z = AdaptiveReal::from_int(1).ln().unwrap();
        assert!(z.contains_zero());
        assert!(z.is_exact());
    }

    #[test]
    fn ln_agrees_with_f64() {
        for x in [1e-30, 0.001, 0.5, 0.999, 1.0001, 3.0, 1234.5, 6.02e23, 1e300] {
            let l = AdaptiveReal::from_f64(x).with_prec(100).ln().unwrap();
            let want = x.ln();
            assert!((l.to_f64() - want).abs() <= 1e-15 * want.abs().max(1.0), "{x}");
            assert!(l.rad_log2().unwrap() < -80, "{x}: {l}");
        }
    }

    #[test]
    fn ln_is_additive() {
        let a = AdaptiveReal::from_int(3).with_prec(300);
        let b = AdaptiveReal::from_int(7).with_prec(300);
        let lhs = a.mul(&b).ln().unwrap();
        let rhs = a.ln().unwrap().add(&b.ln().unwrap());
        assert!(lhs.overlaps(&rhs));
        assert!(lhs.sub(&rhs).abs().upper() < Dyadic::pow2(-280));
    }

    #[test]
    fn ln_high_precision_radius() {
        let x = AdaptiveReal::from_int(10).with_prec(4096);
        let l = x.ln().unwrap();
        assert!(l.rad_log2().unwrap() <= -4090);
        let l2 = AdaptiveReal::from_int(10).with_prec(8192).ln().unwrap();
        assert!(l2.overlaps(&l));
    }

    #[test]
    fn sqrt_two() {
        let s = AdaptiveReal::from_int(2).with_prec(256).sqrt().unwrap();
        assert!(s.sqr().contains(&Dyadic::from_int(2)));
        assert!(s.rad_log2().unwrap() < -250);
    }

    #[test]
    fn sqrt_of_ball_propagates_radius() {
        let x = AdaptiveReal::from_parts(Dyadic::from_int(4), Dyadic::from_f64(1e-6), 64);
        let s = x.sqrt().unwrap();
        assert!(s.contains(&Dyadic::from_f64((4.0f64 + 1e-6).sqrt())));
        assert!(s.contains(&Dyadic::from_f64((4.0f64 - 1e-6).sqrt())));
    }
}
