//! All complex roots of an integer polynomial with certified inclusion
//! disks.
//!
//! Approximations come from Aberth iteration in `f64`, polished by Newton
//! steps at the working precision. They are then certified with Weierstrass
//! corrections `w_i = p(z_i) / (a_0 prod_{j != i} (z_i - z_j))`: the disks
//! `|z - z_i| <= d |w_i|` cover every root, and a disk disjoint from all
//! others holds exactly one.

use num_complex::Complex64;

use super::poly::IntPoly;
use crate::error::{Error, Result};
use crate::real::{AdaptiveReal, ComplexBall, Dyadic};

/// Largest degree accepted by the all-roots method.
pub const MAX_DEGREE: usize = 64;

#[derive(Clone, Debug)]
pub struct RootDisk {
    pub center: ComplexBall,
    /// Every point of the disk `|z - center_mid| <= radius` may be the root.
    pub radius: Dyadic,
}

impl RootDisk {
    /// Lower and upper bound on the modulus of the root in this disk.
    pub fn modulus_bounds(&self) -> (Dyadic, Dyadic) {
        let lo = self.center.abs_lower().sub(&self.radius);
        let lo = if lo.is_negative() { Dyadic::zero() } else { lo };
        (lo, self.center.abs_upper().add(&self.radius))
    }
}

fn horner_f64(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

fn aberth_f64(coeffs: &[f64]) -> Vec<Complex64> {
    let d = coeffs.len() - 1;
    let lead = coeffs[0];
    let bound = 1.0
        + coeffs[1..]
            .iter()
            .map(|c| (c / lead).abs())
            .fold(0.0, f64::max);
    let r0 = bound.min(1e6) * 0.7;
    let mut z: Vec<Complex64> = (0..d)
        .map(|j| {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / d as f64 + 0.4;
            Complex64::from_polar(r0, theta)
        })
        .collect();
    for _ in 0..1000 {
        let mut max_step: f64 = 0.0;
        for i in 0..d {
            let (p, dp) = horner_f64(coeffs, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..d)
                .filter(|&j| j != i)
                .map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / z[i].norm().max(1.0));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    z
}

fn exact_point(re: &Dyadic, im: &Dyadic, prec: u32) -> ComplexBall {
    ComplexBall::new(
        AdaptiveReal::exact(re.clone()).with_prec(prec),
        AdaptiveReal::exact(im.clone()).with_prec(prec),
    )
}

/// Certified disks for all `deg` roots, each radius below roughly
/// `2^-prec` relative to the root scale.
pub fn certified_roots(poly: &IntPoly, prec: u32) -> Result<Vec<RootDisk>> {
    let d = poly.degree();
    if d == 0 {
        return Ok(vec![]);
    }
    if d > MAX_DEGREE {
        return Err(Error::Domain(format!(
            "all-roots method supports degree <= {MAX_DEGREE}, got {d}"
        )));
    }
    let coeffs = poly.coeffs_f64();
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::Domain("coefficients too large for the f64 start".into()));
    }
    let start = aberth_f64(&coeffs);
    let deriv = poly.derivative();
    let mut pts: Vec<(Dyadic, Dyadic)> = start
        .iter()
        .map(|z| (Dyadic::from_f64(z.re), Dyadic::from_f64(z.im)))
        .collect();

    let mut wp = prec + 32;
    for _attempt in 0..6 {
        // Newton polishing: precision roughly doubles per step from ~50 bits.
        let mut bits = 40u32;
        while bits < wp {
            bits = (bits * 2).min(wp);
            for pt in pts.iter_mut() {
                let z = exact_point(&pt.0, &pt.1, bits + 32);
                let p = poly.eval_complex(&z);
                let dp = deriv.eval_complex(&z);
                if let Ok(step) = p.div(&dp) {
                    let nz = z.sub(&step);
                    pt.0 = nz.re.mid().round(bits + 32, crate::real::Round::Nearest);
                    pt.1 = nz.im.mid().round(bits + 32, crate::real::Round::Nearest);
                }
            }
        }
        match weierstrass_disks(poly, &pts, wp) {
            Ok(disks) => return Ok(disks),
            Err(e) if e.is_refinable() => wp *= 2,
            Err(e) => return Err(e),
        }
    }
    Err(Error::precision(format!(
        "could not separate the roots of {poly} up to {wp} bits"
    )))
}

fn weierstrass_disks(poly: &IntPoly, pts: &[(Dyadic, Dyadic)], wp: u32) -> Result<Vec<RootDisk>> {
    let d = pts.len();
    let lead = AdaptiveReal::from_int(poly.leading().clone());
    let zs: Vec<ComplexBall> = pts.iter().map(|(a, b)| exact_point(a, b, wp)).collect();
    let mut disks = Vec::with_capacity(d);
    for i in 0..d {
        let mut den = ComplexBall::real(lead.clone());
        for j in 0..d {
            if j != i {
                den = den.mul(&zs[i].sub(&zs[j]));
            }
        }
        let w = poly.eval_complex(&zs[i]).div(&den)?;
        let radius = w.abs_upper().mul(&Dyadic::from_int(d as i64)).mag_up();
        disks.push(RootDisk {
            center: zs[i].clone(),
            radius,
        });
    }
    for i in 0..d {
        for j in (i + 1)..d {
            let sep = zs[i].sub(&zs[j]).abs_lower();
            if sep <= disks[i].radius.add(&disks[j].radius) {
                return Err(Error::precision("root inclusion disks overlap"));
            }
        }
    }
    Ok(disks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_unity_disks() {
        let p = IntPoly::from_i64(&[1, 0, 0, 0, 0, -1]).unwrap(); // x^5 - 1
        let disks = certified_roots(&p, 100).unwrap();
        assert_eq!(disks.len(), 5);
        for disk in &disks {
            let (lo, hi) = disk.modulus_bounds();
            assert!(lo <= Dyadic::one() && Dyadic::one() <= hi);
            assert!(disk.radius < Dyadic::pow2(-90));
        }
    }

    #[test]
    fn psi_roots_split_by_unit_circle() {
        let p = IntPoly::psi(12);
        let disks = certified_roots(&p, 80).unwrap();
        let outside = disks
            .iter()
            .filter(|d| d.modulus_bounds().0 > Dyadic::one())
            .count();
        let inside = disks
            .iter()
            .filter(|d| d.modulus_bounds().1 < Dyadic::one())
            .count();
        assert_eq!((outside, inside), (1, 11));
    }

    #[test]
    fn degree_cap() {
        let p = IntPoly::psi(65);
        assert!(matches!(certified_roots(&p, 64), Err(Error::Domain(_))));
    }
}
