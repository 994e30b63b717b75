//! Riemann zeta machinery.
//!
//! - exact Bernoulli numbers by the defining recurrence
//! - even arguments: zeta(2k) as an exact rational times pi^(2k)
//! - real arguments s > 1: Euler-Maclaurin summation with a rigorous
//!   remainder bound (the derivatives of x^(-s) keep one sign on the tail
//!   interval, so the remainder is no larger than the first omitted term)
//! - integral tail bound for partial sums of n^(-s)

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::bigfloat::BigFloat;
use super::{Approximation, PrecisionContext, TailBound};
use crate::{Error, Result};

/// B_0..B_n with the B_1 = -1/2 convention, by the recurrence
/// sum_{j=0}^{m} C(m+1, j) B_j = 0.
pub fn bernoulli_numbers(n: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
    b.push(BigRational::one());
    for m in 1..=n {
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one();
        for (j, bj) in b.iter().enumerate() {
            acc += BigRational::from(binom.clone()) * bj;
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-acc / BigRational::from(BigInt::from(m + 1)));
    }
    b
}

/// Rationals r_0..r_kmax with zeta(2k) = r_k * pi^(2k).
///
/// r_k = (-1)^(k+1) B_2k 2^(2k-1) / (2k)! for k >= 1. The k = 0 entry is
/// the continuation value zeta(0) = -1/2, which reorganized double sums
/// pick up as their boundary term.
pub fn zeta_even_rationals_up_to(kmax: u32) -> Vec<BigRational> {
    let b = bernoulli_numbers(2 * kmax as usize);
    let mut out = Vec::with_capacity(kmax as usize + 1);
    out.push(BigRational::new(BigInt::from(-1), BigInt::from(2)));
    let mut fact = BigInt::one();
    let mut pow2 = BigInt::from(2);
    for k in 1..=kmax as usize {
        fact *= BigInt::from(2 * k - 1) * BigInt::from(2 * k);
        let r = &b[2 * k] * BigRational::new(pow2.clone(), fact.clone());
        out.push(if k % 2 == 1 { r } else { -r });
        pow2 <<= 2;
    }
    out
}

/// zeta(2k) = r * pi^(2k); returns r. See [`zeta_even_rationals_up_to`].
pub fn zeta_even_rational(k: u32) -> BigRational {
    zeta_even_rationals_up_to(k).pop().expect("nonempty")
}

/// base^e for rational e, at the given scale. Exact when e is an integer.
pub fn real_power(base: u64, e: &BigRational, scale: u32) -> Result<BigFloat> {
    if base == 0 {
        return Err(Error::Domain("0 raised to a real power".into()));
    }
    if e.is_integer() {
        let k = e
            .to_integer()
            .to_i64()
            .ok_or_else(|| Error::Domain("exponent out of range".into()))?;
        let p = BigInt::from(base).pow(k.unsigned_abs() as u32);
        let r = if k >= 0 {
            BigRational::from(p)
        } else {
            BigRational::new(BigInt::one(), p)
        };
        return Ok(BigFloat::from_rational(&r, scale));
    }
    let b = BigFloat::from_int(base as i64, scale);
    let e_f = BigFloat::from_rational(e, scale);
    b.pow(&e_f)
}

/// Upper bound for sum_{m > n} m^(-s), s > 1: the integral comparison
/// n^(1-s) / (s-1).
pub fn zeta_tail_bound(s: &BigRational, n: u64, scale: u32) -> Result<BigFloat> {
    let one = BigRational::one();
    if *s <= one {
        return Err(Error::Divergent(format!("tail of n^(-{s}) diverges")));
    }
    if n == 0 {
        return Err(Error::Invalid("tail bound needs n >= 1".into()));
    }
    let exp = &one - s;
    let num = real_power(n, &exp, scale)?;
    let den = BigFloat::from_rational(&(s - &one), scale);
    num.div(&den)
}

/// zeta(s) for rational s > 1 by Euler-Maclaurin:
///
/// zeta(s) = sum_{n<N} n^(-s) + N^(1-s)/(s-1) + N^(-s)/2
///         + sum_{j=1}^{J} B_2j/(2j)! s(s+1)...(s+2j-2) N^(1-s-2j)
///
/// stopping when the correction terms fall below the working resolution.
/// The reported bound is the first omitted term plus a rounding allowance.
pub fn zeta_real(s: &BigRational, ctx: &PrecisionContext) -> Result<Approximation> {
    if *s <= BigRational::one() {
        return Err(Error::Domain(format!("zeta({s}) is outside s > 1")));
    }
    let ws = ctx.working_scale();
    let s_f = BigFloat::from_rational(s, ws);
    // cutoff large enough that correction terms reach the resolution floor
    // before their growth turn at 2j ~ 2 pi N
    let n_cut = (2 * ws as u64) / 5 + 16;

    let mut direct = BigFloat::zero(ws);
    for n in 1..n_cut {
        direct = direct.add(&real_power(n, &(-s), ws)?);
    }
    let one = BigRational::one();
    // N^(1-s)/(s-1)
    let integral = real_power(n_cut, &(&one - s), ws)?
        .div(&BigFloat::from_rational(&(s - &one), ws))?;
    // N^(-s)/2
    let n_pow_ms = real_power(n_cut, &(-s), ws)?;
    let mut sum = direct.add(&integral).add(&n_pow_ms.div_u64(2));

    let mut bern = bernoulli_numbers(64);
    let inv_n2 = BigFloat::one(ws)
        .div(&BigFloat::from_int((n_cut * n_cut) as i64, ws))?;
    // poch = s(s+1)...(s+2j-2); npow = N^(1-s-2j)
    let mut poch = s_f.clone();
    let mut npow = n_pow_ms.div(&BigFloat::from_int(n_cut as i64, ws))?;
    let mut fact = BigInt::from(2);
    let mut terms: u64 = n_cut;
    let mut j = 1usize;
    let bound;
    loop {
        if 2 * j >= bern.len() {
            bern = bernoulli_numbers(bern.len() * 2);
        }
        let coeff = BigFloat::from_rational(&(&bern[2 * j] / BigRational::from(fact.clone())), ws);
        let term = coeff.mul(&poch).mul(&npow);
        if term.is_zero() {
            // resolution floor reached; the omitted term is below one unit
            bound = BigFloat::ulp_pow(ws, ws);
            break;
        }
        if j > 10_000 {
            return Err(Error::Divergent(
                "Euler-Maclaurin corrections did not reach the resolution floor".into(),
            ));
        }
        sum = sum.add(&term);
        terms += 1;
        // advance to j+1
        let a = s_f.add(&BigFloat::from_int((2 * j - 1) as i64, ws));
        let b = s_f.add(&BigFloat::from_int(2 * j as i64, ws));
        poch = poch.mul(&a).mul(&b);
        npow = npow.mul(&inv_n2);
        fact *= BigInt::from(2 * j + 1) * BigInt::from(2 * j + 2);
        j += 1;
    }
    // fold per-operation rounding into the reported bound
    let slack = BigFloat::from_mantissa(BigInt::from(terms + 16), ws);
    Ok(Approximation {
        value: sum,
        tail: TailBound::Rigorous(bound.add(&slack)),
        terms_used: terms,
    })
}

/// Numeric value of r * pi^k.
pub fn pi_power_value(r: &BigRational, k: u32, ctx: &PrecisionContext) -> BigFloat {
    let ws = ctx.working_scale();
    let v = BigFloat::from_rational(r, ws);
    if k == 0 {
        return v;
    }
    v.mul(&BigFloat::pi(ws).powi(k))
}
