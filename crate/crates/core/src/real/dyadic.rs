//! Exact binary floating-point numbers `man * 2^exp` with explicit rounding.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Direction used when a result has to be cut down to a fixed number of bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Floor,
    Ceil,
    Nearest,
}

/// `man * 2^exp`, kept canonical: `man` is odd, or zero with `exp == 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    man: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(man: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { man, exp };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        if self.man.is_zero() {
            self.exp = 0;
            return;
        }
        if let Some(tz) = self.man.trailing_zeros() {
            if tz > 0 {
                self.man >>= tz;
                self.exp += tz as i64;
            }
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            man: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            man: BigInt::one(),
            exp: 0,
        }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Dyadic::new(n.into(), 0)
    }

    /// `2^e`
    pub fn pow2(e: i64) -> Self {
        Dyadic {
            man: BigInt::one(),
            exp: e,
        }
    }

    /// Exact conversion; panics on NaN or infinity.
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "non-finite f64 {x}");
        if x == 0.0 {
            return Dyadic::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (man, exp) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        Dyadic::new(BigInt::from(man) * sign, exp)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.man
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.man.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.man.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.man.is_negative()
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            man: self.man.abs(),
            exp: self.exp,
        }
    }

    pub fn neg(&self) -> Self {
        Dyadic {
            man: -&self.man,
            exp: self.exp,
        }
    }

    /// Number of significant bits of the mantissa.
    pub fn bits(&self) -> u64 {
        self.man.bits()
    }

    /// `floor(log2 |x|)`; `None` for zero.
    pub fn msb(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exp + self.man.bits() as i64 - 1)
        }
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.man << (self.exp - e) as usize;
        let b = &other.man << (other.exp - e) as usize;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.man * &other.man, self.exp + other.exp)
    }

    pub fn mul_int(&self, n: &BigInt) -> Dyadic {
        Dyadic::new(&self.man * n, self.exp)
    }

    /// Multiply by `2^s`.
    pub fn shl(&self, s: i64) -> Dyadic {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic {
            man: self.man.clone(),
            exp: self.exp + s,
        }
    }

    /// Round to at most `prec` significant bits.
    pub fn round(&self, prec: u32, mode: Round) -> Dyadic {
        let prec = prec.max(1) as u64;
        let bits = self.man.bits();
        if bits <= prec {
            return self.clone();
        }
        let drop = (bits - prec) as i64;
        self.round_at(self.exp + drop, mode)
    }

    /// Round to a multiple of `2^e`.
    pub fn round_at(&self, e: i64, mode: Round) -> Dyadic {
        if self.is_zero() || self.exp >= e {
            return self.clone();
        }
        let drop = (e - self.exp) as usize;
        let (q, r) = self.man.div_mod_floor(&(BigInt::one() << drop));
        let q = match mode {
            Round::Floor => q,
            Round::Ceil => {
                if r.is_zero() {
                    q
                } else {
                    q + 1
                }
            }
            Round::Nearest => {
                let half = BigInt::one() << (drop - 1);
                if r >= half {
                    q + 1
                } else {
                    q
                }
            }
        };
        Dyadic::new(q, e)
    }

    /// Upper bound with a short mantissa, for error radii.
    pub fn mag_up(&self) -> Dyadic {
        debug_assert!(!self.is_negative());
        self.round(MAG_BITS, Round::Ceil)
    }

    /// Quotient rounded to `prec` significant bits. Panics on a zero divisor.
    pub fn div(&self, other: &Dyadic, prec: u32, mode: Round) -> Dyadic {
        assert!(!other.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        // Scale so the integer quotient carries prec + 2 bits.
        let want = prec as i64 + 2;
        let shift = (want + other.man.bits() as i64 - self.man.bits() as i64).max(0);
        let num = &self.man << shift as usize;
        let (q, r) = num.div_mod_floor(&other.man);
        let exp = self.exp - shift - other.exp;
        // q is floor of the true quotient at scale 2^exp; add a sticky bit so
        // the final rounding sees inexactness.
        let exact = r.is_zero();
        let q2 = (q << 1usize) + if exact { 0 } else { 1 };
        Dyadic::new(q2, exp - 1).round(prec, mode)
    }

    /// `floor(sqrt(x))` to `prec` bits (x >= 0).
    pub fn sqrt(&self, prec: u32, mode: Round) -> Dyadic {
        assert!(!self.is_negative(), "sqrt of negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let mut man = self.man.clone();
        let mut exp = self.exp;
        if exp.rem_euclid(2) != 0 {
            man <<= 1usize;
            exp -= 1;
        }
        let want = 2 * (prec as i64 + 2);
        let extra = (want - man.bits() as i64).max(0);
        let extra = extra + extra % 2;
        man <<= extra as usize;
        exp -= extra;
        let root = man.sqrt();
        let exact = &root * &root == man;
        let r2 = (root << 1usize) + if exact { 0 } else { 1 };
        Dyadic::new(r2, exp / 2 - 1).round(prec, mode)
    }

    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.man << self.exp as usize
        } else {
            self.man.div_floor(&(BigInt::one() << (-self.exp) as usize))
        }
    }

    pub fn ceil(&self) -> BigInt {
        -(self.neg().floor())
    }

    pub fn is_integer(&self) -> bool {
        self.exp >= 0 || self.is_zero()
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.man << self.exp as usize)
        } else {
            BigRational::new(self.man.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    pub fn from_rational(q: &BigRational, prec: u32, mode: Round) -> Dyadic {
        Dyadic::from_int(q.numer().clone()).div(&Dyadic::from_int(q.denom().clone()), prec, mode)
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.man.bits() as i64;
        let keep = bits.min(64);
        let top = (&self.man.abs() >> (bits - keep) as usize)
            .to_u64()
            .unwrap_or(u64::MAX) as f64;
        let e = self.exp + bits - keep;
        let v = scale_f64(top, e);
        if self.is_negative() {
            -v
        } else {
            v
        }
    }

    /// Decimal scientific rendering with `digits` significant digits
    /// (rounded to nearest).
    pub fn to_sci_string(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let digits = digits.max(1);
        let neg = self.is_negative();
        let a = self.abs();
        let msb = a.msb().unwrap();
        // Estimate of floor(log10 |x|), corrected below.
        let mut d10 = ((msb as f64) * std::f64::consts::LOG10_2).floor() as i64;
        let mut n;
        loop {
            let s = digits as i64 - 1 - d10;
            n = scaled_round(&a, s);
            let len = n.to_string().len() as i64;
            if len > digits as i64 {
                d10 += 1;
                continue;
            }
            if len < digits as i64 {
                d10 -= 1;
                continue;
            }
            break;
        }
        let s = n.to_string();
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        out.push_str(&s[..1]);
        if s.len() > 1 {
            out.push('.');
            out.push_str(&s[1..]);
        }
        out.push_str(&format!("e{d10}"));
        out
    }

    /// Parse a decimal literal such as `5.92e86` or `-12.5` exactly when the
    /// value is dyadic, otherwise rounded to `prec` bits.
    pub fn parse_decimal(s: &str, prec: u32, mode: Round) -> Option<Dyadic> {
        let q = parse_decimal_rational(s)?;
        Some(Dyadic::from_rational(&q, prec, mode))
    }
}

pub(crate) const MAG_BITS: u32 = 64;

fn scale_f64(mut v: f64, mut e: i64) -> f64 {
    while e > 0 {
        let step = e.min(1000);
        v *= 2f64.powi(step as i32);
        e -= step;
        if v.is_infinite() {
            return v;
        }
    }
    while e < 0 {
        let step = (-e).min(1000);
        v /= 2f64.powi(step as i32);
        e += step;
        if v == 0.0 {
            return v;
        }
    }
    v
}

/// round(|x| * 10^s) for nonnegative x.
fn scaled_round(x: &Dyadic, s: i64) -> BigInt {
    let ten = BigInt::from(10u32);
    let (num, den) = if s >= 0 {
        (x.man.clone() * num_traits::pow(ten, s as usize), BigInt::one())
    } else {
        (x.man.clone(), num_traits::pow(ten, (-s) as usize))
    };
    let (num, den) = if x.exp >= 0 {
        (num << x.exp as usize, den)
    } else {
        (num, den << (-x.exp) as usize)
    };
    let (q, r) = num.div_mod_floor(&den);
    if r * 2 >= den {
        q + 1
    } else {
        q
    }
}

pub(crate) fn parse_decimal_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (mant, exp10) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int_part, frac_part) = match mant.find('.') {
        Some(i) => (&mant[..i], &mant[i + 1..]),
        None => (mant, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut n: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().ok()?
    };
    if neg {
        n = -n;
    }
    let e = exp10 - frac_part.len() as i64;
    let ten = BigInt::from(10u32);
    Some(if e >= 0 {
        BigRational::from_integer(n * num_traits::pow(ten, e as usize))
    } else {
        BigRational::new(n, num_traits::pow(ten, (-e) as usize))
    })
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        // Same sign: magnitudes differing by more than a bit decide quickly.
        let (ma, mb) = (self.msb().unwrap(), other.msb().unwrap());
        if ma != mb {
            let mag = ma.cmp(&mb);
            return if sa > 0 { mag } else { mag.reverse() };
        }
        self.sub(other).signum().cmp(&0)
    }
}

impl From<i64> for Dyadic {
    fn from(n: i64) -> Self {
        Dyadic::from_int(n)
    }
}

impl From<BigUint> for Dyadic {
    fn from(n: BigUint) -> Self {
        Dyadic::from_int(BigInt::from(n))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sci_string(f.precision().unwrap_or(20)))
    }
}
