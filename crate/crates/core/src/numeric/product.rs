//! Truncated evaluation of infinite products over a part set.
//!
//! The products all have the shape prod_{n in X} (1 -+ f(n) q^n)^(+-1).
//! Factors up to a cap are computed as exact rationals and rounded once
//! each into fixed point, with a running envelope on the accumulated
//! rounding error. The discarded tail T satisfies |ln T| <= 2 S, where
//! S = sum_{n in X, n > cap} |f(n) q^n|, valid as soon as S <= 1/2; so
//! |true - partial| <= |partial| (e^(2S) - 1) plus the rounding envelope.
//!
//! S itself is bounded through the weight's magnitude envelope:
//! - finite part sets and finite-support weights: summed exactly
//! - |q| = 1 with |f(n)| <= c n^p: integral comparison, needs p <= -2
//! - |q| < 1: geometric bound, any polynomial growth is fine
//! - |q| > 1: refused unless the product is essentially finite

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::bigfloat::BigFloat;
use super::zeta::zeta_tail_bound;
use super::{Approximation, PrecisionContext, TailBound};
use crate::partition::{PartSpec, WeightEnvelope, WeightFunction};
use crate::{Error, Result};

/// Sign inside each factor: (1 - a) or (1 + a).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InnerSign {
    Minus,
    Plus,
}

/// Whole-product exponent: the product itself or its reciprocal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OuterExp {
    Direct,
    Inverse,
}

/// Evaluate prod_{n in X, n <= cap} (1 -+ f(n) q^n)^(+-1) with a rigorous
/// bound on the distance to the full product.
pub fn eval_product(
    f: &WeightFunction,
    x: &PartSpec,
    inner: InnerSign,
    outer: OuterExp,
    q: &BigRational,
    cap: u64,
    ctx: &PrecisionContext,
) -> Result<Approximation> {
    if cap == 0 {
        return Err(Error::Invalid("product cap must be >= 1".into()));
    }
    let ws = ctx.working_scale();
    let sigma = tail_weight_sum(f, x, q, cap, ws)?;
    let half = BigFloat::from_rational(&BigRational::new(1.into(), 2.into()), ws);
    if sigma > half {
        return Err(Error::Invalid(format!(
            "tail beyond cap {cap} is not under control (weight sum bound {}); raise the cap",
            sigma.to_sci_string(3)
        )));
    }

    let ulp = BigFloat::ulp_pow(ws, ws);
    let two = BigFloat::from_int(2, ws);
    let mut prod = BigFloat::one(ws);
    let mut err = BigFloat::zero(ws);
    let mut q_pow = BigRational::one();
    let mut last_n = 0u64;
    let mut terms = 0u64;
    for n in x.members_up_to(cap) {
        let w = f.eval(n).expect_rational("infinite product weight")?;
        if w.is_zero() {
            continue;
        }
        q_pow *= q.pow((n - last_n) as i32);
        last_n = n;
        let a = &w * &q_pow;
        let factor = match inner {
            InnerSign::Minus => BigRational::one() - &a,
            InnerSign::Plus => BigRational::one() + &a,
        };
        terms += 1;
        if factor.is_zero() {
            return match outer {
                // one exact zero factor, and the rest of the product is
                // bounded, so the value is exactly zero
                OuterExp::Direct => Ok(Approximation {
                    value: BigFloat::zero(ws),
                    tail: TailBound::Rigorous(BigFloat::zero(ws)),
                    terms_used: terms,
                }),
                OuterExp::Inverse => Err(Error::Divergent(format!(
                    "factor at n = {n} is exactly zero under inversion"
                ))),
            };
        }
        let fb = BigFloat::from_rational(&factor, ws);
        let fa = fb.abs();
        match outer {
            OuterExp::Direct => {
                let next = prod.mul(&fb);
                err = err
                    .mul(&fa.add(&ulp))
                    .add(&ulp.mul(&two.add(&prod.abs())));
                prod = next;
            }
            OuterExp::Inverse => {
                let denom = fa.sub(&ulp);
                if !denom.is_positive() {
                    return Err(Error::Divergent(format!(
                        "factor at n = {n} is below the working resolution"
                    )));
                }
                let next = prod.div(&fb)?;
                let step = ulp.mul(&two.add(&next.abs()).add(&next.abs().div(&denom)?));
                err = err.div(&denom)?.add(&step);
                prod = next;
            }
        }
    }
    // |true - partial| <= |partial| (e^(2S) - 1) + rounding envelope
    let expm1 = sigma.mul_i64(2).exp().sub(&BigFloat::one(ws));
    let bound = prod.abs().mul(&expm1).add(&err.mul_i64(2)).add(&ulp);
    Ok(Approximation {
        value: prod,
        tail: TailBound::Rigorous(bound),
        terms_used: terms,
    })
}

/// The weight with every value replaced by its absolute value; the shape
/// (restrictions, tables, z markers) is preserved.
pub fn abs_weight(f: &WeightFunction) -> WeightFunction {
    match f {
        WeightFunction::Constant(c) => WeightFunction::Constant(c.abs()),
        WeightFunction::Power(e) => WeightFunction::Power(*e),
        WeightFunction::Table(entries) => WeightFunction::Table(
            entries.iter().map(|(n, v)| (*n, v.abs())).collect(),
        ),
        WeightFunction::Restricted(inner, x) => {
            WeightFunction::Restricted(Box::new(abs_weight(inner)), x.clone())
        }
        WeightFunction::ZScaled(inner) => WeightFunction::ZScaled(Box::new(abs_weight(inner))),
    }
}

/// Upper bound on S = sum_{n in X, n > cap} |f(n)| |q|^n at the given scale.
pub fn tail_weight_sum(
    f: &WeightFunction,
    x: &PartSpec,
    q: &BigRational,
    cap: u64,
    ws: u32,
) -> Result<BigFloat> {
    let q_abs = q.abs();
    let one = BigRational::one();
    let round_up = |s: &BigRational| BigFloat::from_rational(s, ws).add(&BigFloat::ulp_pow(ws, ws));

    // a finite leftover is summed exactly
    if let PartSpec::Finite(set) = x {
        let mut s = BigRational::zero();
        for &n in set.range(cap + 1..) {
            let w = f.eval(n).expect_rational("infinite product weight")?;
            s += w.abs() * q_abs.pow(n as i32);
        }
        return Ok(round_up(&s));
    }
    match f.envelope() {
        WeightEnvelope::FiniteSupport { n_max } => {
            let mut s = BigRational::zero();
            for n in x.members_up_to(n_max) {
                if n <= cap {
                    continue;
                }
                let w = f.eval(n).expect_rational("infinite product weight")?;
                s += w.abs() * q_abs.pow(n as i32);
            }
            Ok(round_up(&s))
        }
        WeightEnvelope::PowerLaw { c, p } => {
            if q_abs > one {
                return Err(Error::Divergent(
                    "product terms grow: |q| > 1 with an infinite part set".into(),
                ));
            }
            if q_abs == one {
                // sum_{n > cap} c n^p <= c * integral bound; needs p <= -2
                if p > -2 {
                    return Err(Error::Divergent(format!(
                        "weights decay like n^{p}; the product over an \
                         infinite part set needs decay at least n^-2 at |q| = 1"
                    )));
                }
                let s = BigRational::from(BigInt::from(-p));
                let t = zeta_tail_bound(&s, cap, ws)?;
                return Ok(t.mul(&BigFloat::from_rational(&c, ws)).add(&BigFloat::ulp_pow(ws, ws)));
            }
            // |q| < 1: geometric decay swallows any polynomial factor
            let s = if p <= 0 {
                // n^p <= (cap+1)^p on the tail
                let head = c * BigRational::new(BigInt::one(), BigInt::from(cap + 1).pow((-p) as u32));
                head * q_abs.pow(cap as i32 + 1) / (&one - &q_abs)
            } else {
                // n^p |q|^n <= K r^n with r = (1+|q|)/2 and
                // K = max_n n^p (|q|/r)^n, a unimodal maximum
                let r = (&one + &q_abs) / BigRational::from(BigInt::from(2));
                let u = &q_abs / &r;
                let k = unimodal_peak(p, &u)?;
                c * k * r.pow(cap as i32 + 1) / (&one - &r)
            };
            Ok(round_up(&s))
        }
    }
}

/// max over n >= 1 of n^p u^n for p > 0, 0 < u < 1: locate the turning
/// point in floating point, then evaluate the neighborhood exactly.
fn unimodal_peak(p: i64, u: &BigRational) -> Result<BigRational> {
    let uf = u.to_f64().unwrap_or(0.0);
    if !(0.0..1.0).contains(&uf) {
        return Err(Error::Invalid("peak location needs 0 < u < 1".into()));
    }
    let n_star = (-(p as f64) / uf.ln()).ceil();
    if !n_star.is_finite() || n_star > 1e5 {
        return Err(Error::Invalid(
            "geometric tail too slow to bound (|q| extremely close to 1)".into(),
        ));
    }
    let lo = (n_star as i64 - 3).max(1) as u64;
    let mut best = BigRational::zero();
    for n in lo..=lo + 6 {
        let g = BigRational::from(BigInt::from(n).pow(p as u32)) * u.pow(n as i32);
        if g > best {
            best = g;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::zeta::{pi_power_value, zeta_even_rational};

    fn ctx() -> PrecisionContext {
        PrecisionContext::with_digits(50).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn euler_product_over_primes_approaches_zeta2() {
        let c = ctx();
        let a = eval_product(
            &WeightFunction::Power(-2),
            &PartSpec::Primes,
            InnerSign::Minus,
            OuterExp::Inverse,
            &BigRational::one(),
            10_000,
            &c,
        )
        .unwrap();
        let z2 = pi_power_value(&zeta_even_rational(1), 2, &c);
        let diff = a.value.sub(&z2).abs();
        assert!(a.tail.is_rigorous());
        assert!(
            diff < *a.tail.bound(),
            "diff {} vs bound {}",
            diff.to_sci_string(3),
            a.tail.bound().to_sci_string(3)
        );
    }

    #[test]
    fn finite_part_set_is_exact() {
        let c = ctx();
        let x = PartSpec::finite([1, 2, 3]).unwrap();
        let a = eval_product(
            &WeightFunction::one(),
            &x,
            InnerSign::Minus,
            OuterExp::Direct,
            &rat(1, 2),
            3,
            &c,
        )
        .unwrap();
        // (1/2)(3/4)(7/8) = 21/64
        let expect = BigFloat::from_rational(&rat(21, 64), c.working_scale());
        let diff = a.value.sub(&expect).abs();
        assert!(diff <= *a.tail.bound());
        assert!(a.tail.bound() < &BigFloat::ulp_pow(50, c.working_scale()));
    }

    #[test]
    fn unit_factor_at_one_collapses_direct_product() {
        // first factor of prod (1 - n^-s) is exactly zero at n = 1
        let c = ctx();
        let a = eval_product(
            &WeightFunction::Power(-2),
            &PartSpec::All,
            InnerSign::Minus,
            OuterExp::Direct,
            &BigRational::one(),
            50,
            &c,
        )
        .unwrap();
        assert!(a.value.is_zero());
        assert!(a.tail.bound().is_zero());
    }

    #[test]
    fn zero_factor_under_inversion_is_divergent() {
        let c = ctx();
        let e = eval_product(
            &WeightFunction::Power(-2),
            &PartSpec::All,
            InnerSign::Minus,
            OuterExp::Inverse,
            &BigRational::one(),
            50,
            &c,
        );
        assert!(matches!(e, Err(Error::Divergent(_))));
    }

    #[test]
    fn geometric_bound_covers_the_true_tail() {
        let c = ctx();
        let run = |cap| {
            eval_product(
                &WeightFunction::one(),
                &PartSpec::All,
                InnerSign::Minus,
                OuterExp::Direct,
                &rat(1, 2),
                cap,
                &c,
            )
            .unwrap()
        };
        let lo = run(100);
        let hi = run(260);
        let diff = lo.value.sub(&hi.value).abs();
        assert!(diff <= *lo.tail.bound());
        assert!(hi.tail.bound() < lo.tail.bound());
    }

    #[test]
    fn plus_product_matches_hyperbolic_closed_form() {
        // prod_{n>=1} (1 + n^-3) = cosh(pi sqrt(3) / 2) / pi
        let c = ctx();
        let a = eval_product(
            &WeightFunction::Power(-3),
            &PartSpec::All,
            InnerSign::Plus,
            OuterExp::Direct,
            &BigRational::one(),
            10_000,
            &c,
        )
        .unwrap();
        let ws = c.working_scale();
        let pi = BigFloat::pi(ws);
        let closed = pi
            .mul(&BigFloat::from_int(3, ws).sqrt().unwrap())
            .div_u64(2)
            .cosh()
            .div(&pi)
            .unwrap();
        let diff = a.value.sub(&closed).abs();
        assert!(diff <= *a.tail.bound());
        // tail after 10^4 cubes is ~ 5e-9; the bound should reflect that
        assert!(*a.tail.bound() < BigFloat::ulp_pow(7, ws));
    }

    #[test]
    fn table_weights_allow_q_beyond_one() {
        let c = ctx();
        let f = WeightFunction::Table(vec![(2, rat(1, 3)), (5, rat(7, 1))]);
        let a = eval_product(
            &f,
            &PartSpec::All,
            InnerSign::Minus,
            OuterExp::Direct,
            &rat(2, 1),
            5,
            &c,
        )
        .unwrap();
        // (1 - 4/3)(1 - 224) = 223/3
        let expect = BigFloat::from_rational(&rat(223, 3), c.working_scale());
        assert!(a.value.sub(&expect).abs() <= *a.tail.bound());
    }

    #[test]
    fn divergent_configurations_are_refused() {
        let c = ctx();
        let one_q = BigRational::one();
        // constant weights at q = 1
        assert!(matches!(
            eval_product(
                &WeightFunction::one(),
                &PartSpec::All,
                InnerSign::Plus,
                OuterExp::Direct,
                &one_q,
                100,
                &c
            ),
            Err(Error::Divergent(_))
        ));
        // harmonic decay is still too slow at q = 1
        assert!(matches!(
            eval_product(
                &WeightFunction::Power(-1),
                &PartSpec::All,
                InnerSign::Plus,
                OuterExp::Direct,
                &one_q,
                100,
                &c
            ),
            Err(Error::Divergent(_))
        ));
        // |q| > 1 with an infinite part set
        assert!(matches!(
            eval_product(
                &WeightFunction::Power(-2),
                &PartSpec::All,
                InnerSign::Minus,
                OuterExp::Direct,
                &rat(3, 2),
                100,
                &c
            ),
            Err(Error::Divergent(_))
        ));
    }

    #[test]
    fn growing_weights_with_small_q_converge() {
        let c = ctx();
        let run = |cap| {
            eval_product(
                &WeightFunction::Power(2),
                &PartSpec::All,
                InnerSign::Minus,
                OuterExp::Direct,
                &rat(1, 3),
                cap,
                &c,
            )
            .unwrap()
        };
        let lo = run(60);
        let hi = run(160);
        let diff = lo.value.sub(&hi.value).abs();
        assert!(diff <= *lo.tail.bound());
    }

    #[test]
    fn restricted_weight_skips_parts_outside_its_set() {
        // prod over even n of (1 - n^-2)^-1 via a restricted weight on All
        let c = ctx();
        let f = WeightFunction::Restricted(
            Box::new(WeightFunction::Power(-2)),
            PartSpec::Multiples(2),
        );
        let via_restrict = eval_product(
            &f,
            &PartSpec::All,
            InnerSign::Minus,
            OuterExp::Inverse,
            &BigRational::one(),
            2000,
            &c,
        )
        .unwrap();
        let via_set = eval_product(
            &WeightFunction::Power(-2),
            &PartSpec::Multiples(2),
            InnerSign::Minus,
            OuterExp::Inverse,
            &BigRational::one(),
            2000,
            &c,
        )
        .unwrap();
        assert_eq!(via_restrict.value, via_set.value);
        assert_eq!(via_restrict.terms_used, via_set.terms_used);
    }
}
