use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kfib_narayana::algebraic::narayana_constants;
use kfib_narayana::real::AdaptiveReal;
use kfib_narayana::reduction::{
    baker_davenport, baker_davenport_with, continued_fraction, linear_form_from_gamma,
    linear_form_nonzero, source_from_spec, tau_lambda_log2, FnSource, GammaKind, PrecisionPolicy,
    RationalSource, ReductionProblem,
};

fn log_ratio(p: u32, q: u32) -> FnSource {
    FnSource::new(format!("log{p}/log{q}"), move |prec| {
        let wp = prec + 16;
        AdaptiveReal::from_int(p)
            .with_prec(wp)
            .ln()?
            .div(&AdaptiveReal::from_int(q).with_prec(wp).ln()?)
    })
}

#[test]
fn convergent_law_and_enclosure() {
    for spec in ["lambda-log2", "alpha-lambda:2", "alpha-lambda:7", "alpha-lambda:150"] {
        let src = source_from_spec(spec).unwrap();
        let cf = continued_fraction(src.as_ref(), 150).unwrap();
        let tau = src.eval(cf.precision.max(256) * 2).unwrap();
        let cv = &cf.convergents;
        for i in 0..cv.len() {
            let (p, q) = &cv[i];
            assert!(p.gcd(q).is_one(), "{spec}: convergent {i} not reduced");
            if i >= 1 {
                let (p1, q1) = &cv[i - 1];
                assert!(q > q1 || i == 1, "{spec}: q not increasing at {i}");
                assert_eq!((p * q1 - p1 * q).abs(), BigInt::one(), "{spec}: determinant at {i}");
            }
            if i + 1 < cv.len() {
                let q_next = &cv[i + 1].1;
                let qr = AdaptiveReal::from_int(q.clone());
                let err = tau.mul(&qr).sub(&AdaptiveReal::from_int(p.clone())).abs();
                let bound = AdaptiveReal::from_int(q_next.clone()).recip().unwrap();
                assert!(err.lt(&bound), "{spec}: |tau - p/q| bound at {i}");
                let (pn, qn) = &cv[i + 1];
                let here = tau.mul(&qr).sub(&AdaptiveReal::from_int(p.clone()));
                let next = tau
                    .mul(&AdaptiveReal::from_int(qn.clone()))
                    .sub(&AdaptiveReal::from_int(pn.clone()));
                assert!(here.is_positive() != next.is_positive(), "{spec}: tau not between {i}, {}", i + 1);
            }
        }
    }
}

#[test]
fn golden_convergent_denominator() {
    let cf = continued_fraction(&tau_lambda_log2(), 80).unwrap();
    let want: BigInt = "10555900978374790722282223722863".parse().unwrap();
    let pos = cf.convergents.iter().position(|(_, q)| q == &want);
    assert_eq!(pos, Some(70));
    assert!(cf.precision <= 4096);
}

struct Instance {
    tau: (u32, u32),
    mu: (i64, i64),
    a: u32,
    b: u32,
    m: u64,
}

/// Exhaustive check of the reduction's conclusion: for every `u <= M` and
/// every nearby `v`, `|u tau - v + mu| >= A B^-(bound + 1)`, and the
/// smallest such value is at least `eps / q`.
fn brute_force(inst: &Instance) {
    let prob = ReductionProblem {
        tau: Arc::new(log_ratio(inst.tau.0, inst.tau.1)),
        mu: Arc::new(RationalSource(BigRational::new(inst.mu.0.into(), inst.mu.1.into()))),
        a: AdaptiveReal::from_int(inst.a),
        b: AdaptiveReal::from_int(inst.b),
        m: BigInt::from(inst.m),
    };
    let out = baker_davenport(&prob).unwrap();
    assert!(out.q > BigInt::from(6 * inst.m));
    assert!(out.epsilon.is_positive());
    let tau = (inst.tau.0 as f64).ln() / (inst.tau.1 as f64).ln();
    let mu = inst.mu.0 as f64 / inst.mu.1 as f64;
    let w = out.u_bound.to_i32().unwrap() + 1;
    let threshold = inst.a as f64 * (inst.b as f64).powi(-w);
    let floor_gap = out.epsilon.lower().to_f64() / out.q.to_f64().unwrap();
    let slack = 1.0 - 1e-9;
    for u in 0..=inst.m {
        let x = u as f64 * tau + mu;
        let v0 = x.floor() as i64;
        for v in (v0 - 1)..=(v0 + 2) {
            let lam = (x - v as f64).abs();
            assert!(lam > 0.0);
            assert!(
                lam >= threshold * slack,
                "tau=log{}/log{} mu={}/{} M={} u={u} v={v}: |L| = {lam:e} < A B^-{w} = {threshold:e}",
                inst.tau.0, inst.tau.1, inst.mu.0, inst.mu.1, inst.m
            );
            assert!(lam >= floor_gap * slack);
        }
    }
}

#[test]
fn synthetic_instance() {
    brute_force(&Instance { tau: (3, 2), mu: (1, 3), a: 6, b: 2, m: 1000 });
}

#[test]
fn randomized_instances_agree_with_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let primes = [2u32, 3, 5, 7, 11, 13, 17];
    for _ in 0..100 {
        let i = rng.gen_range(0..primes.len());
        let mut j = rng.gen_range(0..primes.len());
        while j == i {
            j = rng.gen_range(0..primes.len());
        }
        let den = rng.gen_range(2..30i64);
        let mut num = rng.gen_range(-60..60i64);
        if num % den == 0 {
            num += 1;
        }
        brute_force(&Instance {
            tau: (primes[i], primes[j]),
            mu: (num, den),
            a: rng.gen_range(1..12),
            b: rng.gen_range(2..4),
            m: rng.gen_range(10..=10_000),
        });
    }
}

#[test]
fn determinism_across_policies() {
    let prob = ReductionProblem {
        tau: source_from_spec("alpha-lambda:9").unwrap(),
        mu: source_from_spec("small-k:9").unwrap(),
        a: AdaptiveReal::from_int(11),
        b: narayana_constants(256).unwrap().lambda,
        m: BigInt::from(10u32).pow(20),
    };
    let p = PrecisionPolicy::default();
    let a = baker_davenport_with(&prob, p, 500).unwrap().to_record(&prob);
    let b = baker_davenport_with(&prob, p, 500).unwrap().to_record(&prob);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

/// For `-1/2 < y < 0`, `|log(1+y)| < 2|y|`; for `y > 0`, `0 < log(1+y) < y`.
#[test]
fn logarithm_bracketing_on_grid() {
    for i in 1..2000 {
        let y = -0.5 + i as f64 * 0.5 / 2000.0;
        let yb = AdaptiveReal::from_f64(y);
        let x = AdaptiveReal::from_int(1).add(&yb).with_prec(128).ln().unwrap();
        assert!(x.abs().lt(&yb.abs().mul_int(2)), "y = {y}");
        assert!(x.abs().to_f64() < 2.0 * y.abs());
    }
    for i in 1..2000 {
        let y = i as f64 * 0.01;
        let yb = AdaptiveReal::from_f64(y);
        let x = AdaptiveReal::from_int(1).add(&yb).with_prec(128).ln().unwrap();
        assert!(x.is_positive() && x.lt(&yb), "y = {y}");
        assert!(y.ln_1p() < y);
    }
}

#[test]
fn linear_forms_at_known_solutions() {
    let c = narayana_constants(256).unwrap();
    // F_4^(2) = N_5 = 3.
    let g2 = linear_form_from_gamma(GammaKind::SmallK { k: 2, n: 4, m: 5 }, 256).unwrap();
    let rhs = AdaptiveReal::from_f64(5.2).mul(&c.lambda.powi(-5).unwrap());
    assert!(g2.abs().lt(&rhs), "{g2}");
    // N_6 = 4 = 2^2, as a large-k form (n - 2 = 2) and as a power-of-two form.
    let g3 = linear_form_from_gamma(GammaKind::LargeK { n: 4, m: 6 }, 256).unwrap();
    let gp = linear_form_from_gamma(GammaKind::Pow2 { l: 2, m: 6 }, 256).unwrap();
    assert!(g3.overlaps(&gp));
    let lhs = AdaptiveReal::from_int(4).sub(&c.c_lambda.mul(&c.lambda.powi(8).unwrap())).abs();
    assert!(lhs.lt(&AdaptiveReal::from_f64(0.5)));
    let ln2 = AdaptiveReal::ln2(256);
    assert!(g3.mul(&ln2).abs().lt(&lhs.div(&AdaptiveReal::from_int(4)).unwrap().mul_int(2)));
}

#[test]
fn linear_forms_never_vanish() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let policy = PrecisionPolicy { start: 128, max: 4096 };
    for _ in 0..1000 {
        let kind = match rng.gen_range(0..3) {
            0 => GammaKind::SmallK {
                k: rng.gen_range(2..=220),
                n: rng.gen_range(4..2000),
                m: rng.gen_range(5..4000),
            },
            1 => GammaKind::LargeK { n: rng.gen_range(4..5000), m: rng.gen_range(5..10_000) },
            _ => GammaKind::Pow2 { l: rng.gen_range(1..5000), m: rng.gen_range(5..10_000) },
        };
        linear_form_nonzero(kind, policy).unwrap();
    }
}
