//! Integer polynomials: exact and ball evaluation, Sturm sequences, real
//! root isolation.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::real::{AdaptiveReal, ComplexBall, Dyadic, Round};

/// Polynomial with integer coefficients, stored leading coefficient first:
/// `coeffs = [a_0, a_1, ..., a_d]` means `a_0 x^d + a_1 x^(d-1) + ... + a_d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        let first = coeffs.iter().position(|c| !c.is_zero());
        match first {
            None => Err(Error::Domain("zero polynomial".into())),
            Some(i) => Ok(IntPoly {
                coeffs: coeffs[i..].to_vec(),
            }),
        }
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Parses `"a0,a1,...,ad"` (leading coefficient first).
    pub fn parse(s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<BigInt>()
                    .map_err(|e| Error::Parse(format!("coefficient `{}`: {e}", t.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        IntPoly::new(coeffs)
    }

    /// `x^k - x^(k-1) - ... - x - 1`
    pub fn psi(k: u32) -> Self {
        let mut c = vec![BigInt::from(-1); k as usize + 1];
        c[0] = BigInt::one();
        IntPoly { coeffs: c }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &BigInt {
        &self.coeffs[0]
    }

    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Coefficients coprime and leading coefficient positive.
    pub fn is_primitive(&self) -> bool {
        self.leading().is_positive() && self.content().is_one()
    }

    pub fn primitive_part(&self) -> IntPoly {
        let mut g = self.content();
        if self.leading().is_negative() {
            g = -g;
        }
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| c / &g).collect(),
        }
    }

    pub fn derivative(&self) -> IntPoly {
        let d = self.degree();
        if d == 0 {
            return IntPoly {
                coeffs: vec![BigInt::zero()],
            };
        }
        IntPoly {
            coeffs: self.coeffs[..d]
                .iter()
                .enumerate()
                .map(|(i, c)| c * BigInt::from(d - i))
                .collect(),
        }
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
    }

    pub fn eval_dyadic(&self, x: &Dyadic) -> Dyadic {
        self.coeffs
            .iter()
            .fold(Dyadic::zero(), |acc, c| acc.mul(x).add(&Dyadic::from_int(c.clone())))
    }

    pub fn eval_ball(&self, x: &AdaptiveReal) -> AdaptiveReal {
        self.coeffs.iter().fold(AdaptiveReal::from_int(0), |acc, c| {
            acc.mul(x).add(&AdaptiveReal::from_int(c.clone()))
        })
    }

    pub fn eval_complex(&self, z: &ComplexBall) -> ComplexBall {
        self.coeffs.iter().fold(
            ComplexBall::real(AdaptiveReal::from_int(0)),
            |acc, c| acc.mul(z).add(&ComplexBall::real(AdaptiveReal::from_int(c.clone()))),
        )
    }

    pub fn coeffs_f64(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect()
    }

    /// Certified sign at a dyadic point: ball evaluation at increasing
    /// precision, then exact evaluation as a last resort.
    pub fn sign_at(&self, x: &Dyadic) -> i32 {
        let base = 64 + 2 * (x.bits() as u32).min(4096);
        let mut prec = base;
        for _ in 0..4 {
            let v = self.eval_ball(&AdaptiveReal::exact(x.clone()).with_prec(prec));
            if v.is_positive() {
                return 1;
            }
            if v.is_negative() {
                return -1;
            }
            prec *= 2;
        }
        self.eval_dyadic(x).signum()
    }

    /// Number of sign changes in the coefficient sequence: an upper bound on
    /// the number of positive real roots with equal parity.
    pub fn descartes_positive(&self) -> usize {
        let signs: Vec<i32> = self
            .coeffs
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| if c.is_positive() { 1 } else { -1 })
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// `1 + max |a_i / a_0|`, an upper bound on the modulus of every root,
    /// rounded up to a power of two.
    pub fn cauchy_bound_log2(&self) -> i64 {
        let lead = BigRational::from_integer(self.leading().abs());
        let m = self.coeffs[1..]
            .iter()
            .map(|c| BigRational::from_integer(c.abs()) / &lead)
            .max()
            .unwrap_or_else(BigRational::zero);
        let b = m + BigRational::one();
        let d = Dyadic::from_rational(&b, 16, Round::Ceil);
        d.msb().unwrap() + 1
    }

    fn to_rational_poly(&self) -> Vec<BigRational> {
        self.coeffs
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect()
    }

    pub fn sturm_sequence(&self) -> SturmSequence {
        let p0 = self.to_rational_poly();
        let p1 = self.derivative().to_rational_poly();
        let mut seq = vec![p0, p1];
        loop {
            let n = seq.len();
            if seq[n - 1].len() == 1 && seq[n - 1][0].is_zero() {
                seq.pop();
                break;
            }
            let r = rat_poly_rem(&seq[n - 2], &seq[n - 1]);
            if r.iter().all(|c| c.is_zero()) {
                break;
            }
            seq.push(r.into_iter().map(|c| -c).collect());
        }
        SturmSequence { polys: seq }
    }

    /// Disjoint dyadic intervals `(lo, hi)`, each holding exactly one real
    /// root with a strict sign change at the endpoints. Intended for small
    /// degrees; roots are assumed simple.
    pub fn isolate_real_roots(&self) -> Result<Vec<(Dyadic, Dyadic)>> {
        if self.degree() == 0 {
            return Ok(vec![]);
        }
        let sturm = self.sturm_sequence();
        let r = self.cauchy_bound_log2();
        let mut lo = Dyadic::pow2(r).neg();
        let mut hi = Dyadic::pow2(r);
        // Nudge endpoints off exact roots.
        while self.eval_dyadic(&lo).is_zero() {
            lo = lo.sub(&Dyadic::one());
        }
        while self.eval_dyadic(&hi).is_zero() {
            hi = hi.add(&Dyadic::one());
        }
        let mut out = Vec::new();
        let mut stack = vec![(lo, hi)];
        let mut guard = 0usize;
        while let Some((a, b)) = stack.pop() {
            guard += 1;
            if guard > 100_000 {
                return Err(Error::precision("real root isolation did not terminate"));
            }
            let count = sturm.count_in(&a, &b);
            if count == 0 {
                continue;
            }
            if count == 1 && self.eval_dyadic(&a).signum() * self.eval_dyadic(&b).signum() < 0 {
                out.push((a, b));
                continue;
            }
            let mut m = a.add(&b).shl(-1);
            if self.eval_dyadic(&m).is_zero() {
                // Exact rational root at the midpoint: isolate it in a tiny
                // interval and move the split point.
                let eps = b.sub(&a).shl(-8);
                out.push((m.sub(&eps), m.add(&eps)));
                stack.push((m.add(&eps), b));
                m = m.sub(&eps);
                stack.push((a, m));
                continue;
            }
            stack.push((m.clone(), b));
            stack.push((a, m));
        }
        out.sort_by(|x, y| x.0.cmp(&y.0));
        Ok(out)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = d - i;
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            if !a.is_one() || e == 0 {
                write!(f, "{a}")?;
            }
            match e {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{e}")?,
            }
        }
        Ok(())
    }
}

pub struct SturmSequence {
    polys: Vec<Vec<BigRational>>,
}

impl SturmSequence {
    fn variations(&self, x: &BigRational) -> usize {
        let signs: Vec<i32> = self
            .polys
            .iter()
            .map(|p| {
                let v = p
                    .iter()
                    .fold(BigRational::zero(), |acc, c| acc * x + c);
                if v.is_positive() {
                    1
                } else if v.is_negative() {
                    -1
                } else {
                    0
                }
            })
            .filter(|&s| s != 0)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Distinct real roots in `(a, b]`.
    pub fn count_in(&self, a: &Dyadic, b: &Dyadic) -> usize {
        let va = self.variations(&a.to_rational());
        let vb = self.variations(&b.to_rational());
        va.saturating_sub(vb)
    }
}

fn rat_poly_rem(num: &[BigRational], den: &[BigRational]) -> Vec<BigRational> {
    let mut r: Vec<BigRational> = num.to_vec();
    let dl = &den[0];
    while r.len() >= den.len() {
        let factor = &r[0] / dl;
        for (i, d) in den.iter().enumerate() {
            r[i] = &r[i] - &factor * d;
        }
        r.remove(0);
    }
    while r.len() > 1 && r[0].is_zero() {
        r.remove(0);
    }
    if r.is_empty() {
        r.push(BigRational::zero());
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi_shape() {
        let p = IntPoly::psi(3);
        assert_eq!(p.to_string(), "x^3 - x^2 - x - 1");
        assert_eq!(p.descartes_positive(), 1);
        assert!(p.is_primitive());
    }

    #[test]
    fn parse_and_primitive_part() {
        let p = IntPoly::parse("0, -62, 62,-20, 2").unwrap();
        assert_eq!(p.degree(), 3);
        assert!(!p.is_primitive());
        assert_eq!(p.primitive_part(), IntPoly::from_i64(&[31, -31, 10, -1]).unwrap());
        assert!(IntPoly::parse("1,x").is_err());
        assert!(IntPoly::parse("0,0").is_err());
    }

    #[test]
    fn derivative_and_eval() {
        let p = IntPoly::from_i64(&[1, -1, 0, -1]).unwrap(); // x^3 - x^2 - 1
        assert_eq!(p.derivative(), IntPoly::from_i64(&[3, -2, 0]).unwrap());
        assert_eq!(p.eval_dyadic(&Dyadic::from_int(2)), Dyadic::from_int(3));
        assert_eq!(p.sign_at(&Dyadic::from_int(1)), -1);
        assert_eq!(p.sign_at(&Dyadic::from_int(2)), 1);
    }

    #[test]
    fn sturm_counts() {
        // (x - 1)(x - 2)(x + 3) = x^3 - 7x + 6
        let p = IntPoly::from_i64(&[1, 0, -7, 6]).unwrap();
        let s = p.sturm_sequence();
        assert_eq!(s.count_in(&Dyadic::from_int(-10), &Dyadic::from_int(10)), 3);
        assert_eq!(s.count_in(&Dyadic::from_f64(0.5), &Dyadic::from_f64(1.5)), 1);
        assert_eq!(s.count_in(&Dyadic::from_f64(2.5), &Dyadic::from_int(9)), 0);
    }

    #[test]
    fn isolation_of_cubics() {
        let p = IntPoly::from_i64(&[1, -1, 0, -1]).unwrap();
        let roots = p.isolate_real_roots().unwrap();
        assert_eq!(roots.len(), 1);
        assert!(roots[0].0 < Dyadic::from_f64(1.4656) && roots[0].1 > Dyadic::from_f64(1.4656));

        let q = IntPoly::from_i64(&[1, 0, -7, 6]).unwrap();
        let roots = q.isolate_real_roots().unwrap();
        assert_eq!(roots.len(), 3);
        for ((a, b), r) in roots.iter().zip([-3.0, 1.0, 2.0]) {
            let r = Dyadic::from_f64(r);
            assert!(a <= &r && &r <= b);
        }
    }

    #[test]
    fn c_lambda_poly_has_one_real_root() {
        let p = IntPoly::from_i64(&[31, -31, 10, -1]).unwrap();
        let roots = p.isolate_real_roots().unwrap();
        assert_eq!(roots.len(), 1);
    }
}
