use super::{AdaptiveReal, Dyadic, Round};
use crate::error::{Error, Result};

/// Rectangular complex ball: real and imaginary parts are independent balls.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexBall {
    pub re: AdaptiveReal,
    pub im: AdaptiveReal,
}

impl ComplexBall {
    pub fn new(re: AdaptiveReal, im: AdaptiveReal) -> Self {
        ComplexBall { re, im }
    }

    pub fn real(re: AdaptiveReal) -> Self {
        ComplexBall {
            re,
            im: AdaptiveReal::from_int(0),
        }
    }

    pub fn from_f64(re: f64, im: f64) -> Self {
        ComplexBall::new(AdaptiveReal::from_f64(re), AdaptiveReal::from_f64(im))
    }

    pub fn add(&self, o: &ComplexBall) -> Self {
        ComplexBall::new(self.re.add(&o.re), self.im.add(&o.im))
    }

    pub fn sub(&self, o: &ComplexBall) -> Self {
        ComplexBall::new(self.re.sub(&o.re), self.im.sub(&o.im))
    }

    pub fn mul(&self, o: &ComplexBall) -> Self {
        let re = self.re.mul(&o.re).sub(&self.im.mul(&o.im));
        let im = self.re.mul(&o.im).add(&self.im.mul(&o.re));
        ComplexBall::new(re, im)
    }

    pub fn scale(&self, s: &AdaptiveReal) -> Self {
        ComplexBall::new(self.re.mul(s), self.im.mul(s))
    }

    pub fn norm_sqr(&self) -> AdaptiveReal {
        self.re.sqr().add(&self.im.sqr())
    }

    pub fn div(&self, o: &ComplexBall) -> Result<Self> {
        let den = o.norm_sqr();
        if !den.is_positive() {
            return Err(Error::precision("complex division by a ball touching zero"));
        }
        let re = self.re.mul(&o.re).add(&self.im.mul(&o.im)).div(&den)?;
        let im = self.im.mul(&o.re).sub(&self.re.mul(&o.im)).div(&den)?;
        Ok(ComplexBall::new(re, im))
    }

    /// Upper bound on the modulus.
    pub fn abs_upper(&self) -> Dyadic {
        let n = self.norm_sqr().upper();
        n.sqrt(self.sqrt_prec(), Round::Ceil)
    }

    /// Lower bound on the modulus (zero when the ball may contain 0).
    pub fn abs_lower(&self) -> Dyadic {
        let lo = self.norm_sqr().lower();
        if lo.is_positive() {
            lo.sqrt(self.sqrt_prec(), Round::Floor)
        } else {
            Dyadic::zero()
        }
    }

    fn sqrt_prec(&self) -> u32 {
        self.re.prec().max(self.im.prec()).max(64)
    }

    /// Largest distance from the center to a corner of the ball.
    pub fn rad_upper(&self) -> Dyadic {
        self.re.rad().add(self.im.rad())
    }

    pub fn mid_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_inverts_multiplication() {
        let a = ComplexBall::from_f64(1.5, -2.0);
        let b = ComplexBall::from_f64(0.25, 3.0);
        let q = a.mul(&b).div(&b).unwrap();
        assert!(q.re.contains(&Dyadic::from_f64(1.5)));
        assert!(q.im.contains(&Dyadic::from_f64(-2.0)));
    }

    #[test]
    fn modulus_bounds() {
        let z = ComplexBall::from_f64(3.0, 4.0);
        assert!(z.abs_lower() <= Dyadic::from_int(5));
        assert!(z.abs_upper() >= Dyadic::from_int(5));
        assert!(z.abs_upper().to_f64() - 5.0 < 1e-15);
    }
}
