//! Partition zeta functions: the q -> 1 boundary of the product expansions.
//!
//! A part set X induces four products over its members, one for each
//! partition class (with multiplicity or distinct, plain or sign weighted):
//!
//! * `zeta_P`:  prod (1 - n^(-s))^(-1), the sum of n_lambda^(-s) over
//!   partitions with all parts in X
//! * `eta_P`:   prod (1 + n^(-s))^(-1), the same sum weighted (-1)^length
//! * `zeta_P*`: prod (1 + n^(-s)), the sum over distinct-part partitions
//! * `eta_P*`:  prod (1 - n^(-s)), distinct parts weighted (-1)^length
//!
//! The module evaluates all four exactly over finite sets and numerically
//! with rigorous integral-comparison tails over infinite ones, and builds
//! the identity layer on top:
//!
//! * fixed-length sums by dynamic programming (the brute-force oracle)
//! * exact rational-times-pi-power closed forms for repeated dyadic
//!   exponents via the doubling recursion, plus the even-zeta and
//!   factorial convolution sums they coincide with
//! * doubling checks, Dirichlet coefficient extraction (Liouville and
//!   Moebius over the primes), and telescoping product chains
//! * the sin/sinh/cosh closed forms and the prime-indexed zeta series

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::numeric::bigfloat::BigFloat;
use crate::numeric::zeta::{
    pi_power_value, real_power, zeta_even_rationals_up_to, zeta_real, zeta_tail_bound,
};
use crate::numeric::{Approximation, PrecisionContext, TailBound, Tracked};
use crate::partition::{primes_up_to, PartSpec};
use crate::{Error, Result};

// =====================================================================
// Queries and class products
// =====================================================================

/// One of the four product shapes over a part set, at exponent s.
#[derive(Clone, Debug)]
pub struct ZetaQuery {
    pub parts: PartSpec,
    pub s: BigRational,
    pub distinct: bool,
    pub signed: bool,
}

impl ZetaQuery {
    /// Plain product with multiplicity: prod (1 - n^(-s))^(-1).
    pub fn new(parts: PartSpec, s: BigRational) -> Self {
        ZetaQuery {
            parts,
            s,
            distinct: false,
            signed: false,
        }
    }

    /// Switch to the distinct-part shape.
    pub fn over_distinct(mut self) -> Self {
        self.distinct = true;
        self
    }

    /// Switch to the (-1)^length weighting.
    pub fn sign_weighted(mut self) -> Self {
        self.signed = true;
        self
    }

    /// Conventional short name of the shape.
    pub fn symbol(&self) -> &'static str {
        match (self.distinct, self.signed) {
            (false, false) => "zeta_P",
            (false, true) => "eta_P",
            (true, false) => "zeta_P*",
            (true, true) => "eta_P*",
        }
    }
}

fn s_int(s: &BigRational) -> Option<i64> {
    if s.is_integer() {
        s.to_integer().to_i64()
    } else {
        None
    }
}

/// n^(-s) exactly, for integer s.
fn int_power_inv(n: u64, s: i64) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::Domain("0 raised to a power".into()));
    }
    if s.unsigned_abs() > 100_000 {
        return Err(Error::Invalid(format!("exponent {s} out of range")));
    }
    let p = BigInt::from(n).pow(s.unsigned_abs() as u32);
    Ok(if s >= 0 {
        BigRational::new(BigInt::one(), p)
    } else {
        BigRational::from(p)
    })
}

/// Exact rational value of a query over a finite part set at integer s.
pub fn zeta_class_exact(query: &ZetaQuery) -> Result<BigRational> {
    let PartSpec::Finite(set) = &query.parts else {
        return Err(Error::Invalid(
            "exact evaluation needs a finite part set".into(),
        ));
    };
    let Some(s) = s_int(&query.s) else {
        return Err(Error::Invalid(
            "exact evaluation needs an integer exponent".into(),
        ));
    };
    let one = BigRational::one();
    let mut acc = BigRational::one();
    for &n in set {
        let t = int_power_inv(n, s)?;
        // zeta_P and eta_P* build on 1 - t, the other two on 1 + t
        let base = if query.distinct == query.signed {
            &one - &t
        } else {
            &one + &t
        };
        if query.distinct {
            acc *= base;
        } else {
            if base.is_zero() {
                return Err(Error::Divergent(format!(
                    "factor at n = {n} vanishes; the reciprocal product diverges"
                )));
            }
            acc *= base.recip();
        }
    }
    Ok(acc)
}

/// Per-operation envelope for the transcendental kernels, generous.
fn kernel_slack(ws: u32) -> BigFloat {
    BigFloat::ulp_pow(ws.saturating_sub(6), ws)
}

/// n^(-s) as a tracked value. Integer exponents round once; real exponents
/// go through exp/ln and get the kernel envelope.
fn power_tracked(n: u64, s: &BigRational, ws: u32) -> Result<Tracked> {
    let v = real_power(n, &(-s), ws)?;
    let e = if s.is_integer() {
        BigFloat::ulp_pow(ws, ws)
    } else {
        kernel_slack(ws)
    };
    Ok(Tracked { v, e })
}

/// Partial product over members <= cap, with a running error envelope.
fn class_partial(
    parts: &PartSpec,
    drop_one: bool,
    distinct: bool,
    signed: bool,
    s: &BigRational,
    cap: u64,
    ws: u32,
) -> Result<(Tracked, u64)> {
    let one = Tracked::exact(BigFloat::one(ws));
    let mut acc = one.clone();
    let mut terms = 0u64;
    for n in parts.members_up_to(cap) {
        if n == 1 && drop_one {
            continue;
        }
        let t = power_tracked(n, s, ws)?;
        acc = match (distinct, signed) {
            (true, false) => acc.mul(&one.add(&t)),
            (true, true) => acc.mul(&one.sub(&t)),
            (false, false) => acc.div(&one.sub(&t)).map_err(|_| {
                Error::Divergent(format!(
                    "factor 1 - {n}^(-s) is not resolved away from zero"
                ))
            })?,
            (false, true) => acc.div(&one.add(&t))?,
        };
        terms += 1;
    }
    Ok((acc, terms))
}

/// Integral-comparison bound for the weight sum beyond the cap, padded for
/// the rounding of its own evaluation.
fn tail_sigma(s: &BigRational, cap: u64, ws: u32) -> Result<BigFloat> {
    Ok(zeta_tail_bound(s, cap, ws)?.add(&kernel_slack(ws)))
}

/// An upper bound for e^(2 sigma) - 1.
fn expm1_upper(sigma: &BigFloat, ws: u32) -> BigFloat {
    sigma
        .mul_i64(2)
        .exp()
        .sub(&BigFloat::one(ws))
        .add(&kernel_slack(ws))
}

/// Numeric value of a class product, truncated at `cap` for infinite sets.
///
/// Finite sets with integer exponent evaluate exactly; finite sets with a
/// real exponent use every member and carry only rounding. Infinite sets
/// need s > 1 and report the rigorous tail: the omitted factors multiply
/// the product by at most e^(2 sigma) with sigma the integral bound on the
/// omitted weights, each below 1/2.
pub fn zeta_class(query: &ZetaQuery, cap: u64, ctx: &PrecisionContext) -> Result<Approximation> {
    let ws = ctx.working_scale();
    let has_one = query.parts.contains(1);
    if has_one && !query.distinct && !query.signed {
        return Err(Error::Domain(
            "part 1 contributes the factor (1 - 1)^(-1); the plain product diverges".into(),
        ));
    }
    if has_one && query.distinct && query.signed {
        // the n = 1 factor is exactly zero
        return Ok(Approximation {
            value: BigFloat::zero(ws),
            tail: TailBound::Rigorous(BigFloat::zero(ws)),
            terms_used: 1,
        });
    }
    let ulp = BigFloat::ulp_pow(ws, ws);
    if let PartSpec::Finite(set) = &query.parts {
        if query.s.is_integer() {
            let exact = zeta_class_exact(query)?;
            return Ok(Approximation {
                value: BigFloat::from_rational(&exact, ws),
                tail: TailBound::Rigorous(ulp),
                terms_used: set.len() as u64,
            });
        }
        let top = *set.iter().next_back().expect("non-empty by construction");
        let (acc, terms) = class_partial(
            &query.parts,
            false,
            query.distinct,
            query.signed,
            &query.s,
            top,
            ws,
        )?;
        return Ok(Approximation {
            value: acc.v,
            tail: TailBound::Rigorous(acc.e.add(&ulp)),
            terms_used: terms,
        });
    }
    if query.s <= BigRational::one() {
        return Err(Error::Domain(
            "the product over an infinite part set needs s > 1".into(),
        ));
    }
    if cap < 2 {
        return Err(Error::Invalid("cap must be at least 2".into()));
    }
    let sigma = tail_sigma(&query.s, cap, ws)?;
    let half = BigFloat::one(ws).div_u64(2);
    if sigma.cmp_abs(&half) == Ordering::Greater {
        return Err(Error::Invalid(format!(
            "omitted weights beyond cap {cap} sum to more than 1/2; raise the cap"
        )));
    }
    let (acc, terms) = class_partial(
        &query.parts,
        false,
        query.distinct,
        query.signed,
        &query.s,
        cap,
        ws,
    )?;
    let expm = expm1_upper(&sigma, ws);
    let bound = acc
        .v
        .abs()
        .add(&acc.e)
        .mul(&expm)
        .add(&acc.e)
        .add(&ulp);
    Ok(Approximation {
        value: acc.v,
        tail: TailBound::Rigorous(bound),
        terms_used: terms,
    })
}

// =====================================================================
// Fixed-length sums (the brute-force oracle)
// =====================================================================

/// Sum of n_lambda^(-s) over partitions of length exactly k with parts in
/// the set (bounded by `part_cap`), with or without repeated parts.
///
/// One pass of the standard knapsack recurrences: ascending length updates
/// admit repeats, descending updates keep parts distinct. The tail estimate
/// for a truncated part set is heuristic: k times the single-part tail
/// times the completed length-(k-1) sum.
pub fn zeta_fixed_length(
    parts: &PartSpec,
    s: &BigRational,
    k: usize,
    distinct: bool,
    part_cap: u64,
    ctx: &PrecisionContext,
) -> Result<Approximation> {
    let ws = ctx.working_scale();
    if k == 0 {
        return Ok(Approximation::exact(BigFloat::one(ws)));
    }
    if part_cap == 0 {
        return Err(Error::Invalid("part cap must be at least 1".into()));
    }
    if parts.is_infinite() && *s <= BigRational::one() {
        return Err(Error::Domain(
            "the fixed-length sum over an infinite part set needs s > 1".into(),
        ));
    }
    let members = parts.members_up_to(part_cap);
    let neg_s = -s;
    let mut arr = vec![BigFloat::zero(ws); k + 1];
    arr[0] = BigFloat::one(ws);
    for &m in &members {
        let t = real_power(m, &neg_s, ws)?;
        if distinct {
            for j in (1..=k).rev() {
                arr[j] = arr[j].add(&t.mul(&arr[j - 1]));
            }
        } else {
            for j in 1..=k {
                arr[j] = arr[j].add(&t.mul(&arr[j - 1]));
            }
        }
    }
    let ops = (members.len() * (k + 1) + 16) as i64;
    let slack = BigFloat::from_int(ops, ws).mul(&kernel_slack(ws));
    let complete = match parts {
        PartSpec::Finite(set) => set.iter().all(|&n| n <= part_cap),
        _ => false,
    };
    let tail = if complete {
        TailBound::Rigorous(slack)
    } else {
        let per_part = zeta_tail_bound(s, part_cap, ws)?;
        TailBound::Heuristic(
            per_part
                .mul_i64(k as i64)
                .mul(&arr[k - 1])
                .add(&slack),
        )
    };
    Ok(Approximation {
        value: arr[k].clone(),
        tail,
        terms_used: members.len() as u64,
    })
}

// =====================================================================
// Closed forms: rational times a power of pi
// =====================================================================

/// An exact value of the form coeff * pi^pi_power.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedForm {
    pub coeff: BigRational,
    pub pi_power: u32,
}

impl ClosedForm {
    pub fn one() -> Self {
        ClosedForm {
            coeff: BigRational::one(),
            pi_power: 0,
        }
    }

    /// Numeric value at the context's working scale.
    pub fn value(&self, ctx: &PrecisionContext) -> BigFloat {
        pi_power_value(&self.coeff, self.pi_power, ctx)
    }

    /// Numeric value with a small rigorous rounding envelope.
    pub fn approx(&self, ctx: &PrecisionContext) -> Approximation {
        Approximation {
            value: self.value(ctx),
            tail: TailBound::Rigorous(kernel_slack(ctx.working_scale())),
            terms_used: 0,
        }
    }
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pi_power == 0 {
            write!(f, "{}", self.coeff)
        } else {
            write!(f, "{} * pi^{}", self.coeff, self.pi_power)
        }
    }
}

/// 2^e as an exact rational, e possibly negative.
fn pow2_rat(e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from(BigInt::one() << e as u32)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (-e) as u32)
    }
}

/// 1/(2j+1)! for j = 0..=top.
fn inv_odd_factorials(top: usize) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(top + 1);
    let mut fact = BigInt::one();
    out.push(BigRational::one());
    for j in 1..=top {
        fact *= BigInt::from(2 * j) * BigInt::from(2 * j + 1);
        out.push(BigRational::new(BigInt::one(), fact.clone()));
    }
    out
}

/// zeta_P({2^t}^k): the length-k sum over all partitions at exponent 2^t,
/// as an exact rational times pi^(2^t k).
///
/// Level 1 is the even-zeta family (2^(2k-1) - 1)/2^(2k-2) * zeta(2k),
/// whose k = 0 member forces the boundary value zeta(0) = -1/2. Each
/// doubling step is the alternating self-convolution
/// value(2S, k) = sum_{j=0}^{2k} (-1)^j value(S, j) value(S, 2k - j),
/// read off from F(x) F(-x) = G(x^2) for the length generating functions.
pub fn repeated_zeta_closed(t: u32, k: u32) -> Result<ClosedForm> {
    repeated_closed(t, k, false)
}

/// zeta({2^t}^k) over distinct parts: the multiple zeta value with k equal
/// entries 2^t. Level 1 is pi^(2k)/(2k+1)!; each doubling step is the same
/// alternating self-convolution with an extra (-1)^k, from
/// G(x) G(-x) = H(-x^2) for the distinct-part generating functions.
pub fn repeated_mzv_closed(t: u32, k: u32) -> Result<ClosedForm> {
    repeated_closed(t, k, true)
}

fn repeated_closed(t: u32, k: u32, distinct: bool) -> Result<ClosedForm> {
    if t == 0 || t > 20 {
        return Err(Error::Invalid(
            "exponent level must satisfy 1 <= t <= 20".into(),
        ));
    }
    let top = (k as u64) << (t - 1);
    if top > 8192 {
        return Err(Error::Invalid(format!(
            "closed-form chain needs 2^(t-1) k <= 8192, got {top}"
        )));
    }
    let top = top as usize;
    let mut cur: Vec<BigRational> = if distinct {
        inv_odd_factorials(top)
    } else {
        let r = zeta_even_rationals_up_to(top as u32);
        (0..=top)
            .map(|j| {
                let scale = (pow2_rat(2 * j as i64 - 1) - BigRational::one())
                    / pow2_rat(2 * j as i64 - 2);
                scale * &r[j]
            })
            .collect()
    };
    while cur.len() > k as usize + 1 {
        let m = (cur.len() - 1) / 2;
        let mut next = Vec::with_capacity(m + 1);
        for j in 0..=m {
            let mut acc = BigRational::zero();
            for i in 0..=2 * j {
                let term = &cur[i] * &cur[2 * j - i];
                if i % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            if distinct && j % 2 == 1 {
                acc = -acc;
            }
            next.push(acc);
        }
        cur = next;
    }
    Ok(ClosedForm {
        coeff: cur[k as usize].clone(),
        pi_power: k << t,
    })
}

/// zeta_P({4}^k) as an alternating convolution of even zeta values:
/// 16^(1-k) sum_{n=0}^{2k} (-1)^n (2^(2n-1)-1)(2^(4k-2n-1)-1)
/// zeta(2n) zeta(4k-2n), with the boundary terms using zeta(0) = -1/2.
/// Coincides with `repeated_zeta_closed(2, k)`.
pub fn repeated_zeta_4_products(k: u32) -> ClosedForm {
    let r = zeta_even_rationals_up_to(2 * k);
    let kk = k as usize;
    let one = BigRational::one();
    let mut acc = BigRational::zero();
    for n in 0..=2 * kk {
        let a = pow2_rat(2 * n as i64 - 1) - &one;
        let b = pow2_rat(2 * (2 * kk - n) as i64 - 1) - &one;
        let term = a * b * &r[n] * &r[2 * kk - n];
        if n % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc = acc * pow2_rat(4 * (1 - k as i64));
    ClosedForm {
        coeff: acc,
        pi_power: 4 * k,
    }
}

/// zeta({4}^k) over distinct parts as a factorial sum:
/// (-1)^k sum_{n=0}^{2k} (-1)^n / ((2n+1)! (4k-2n+1)!) times pi^(4k).
/// Coincides with `repeated_mzv_closed(2, k)`.
pub fn repeated_mzv_4_factorials(k: u32) -> ClosedForm {
    let f = inv_odd_factorials(2 * k as usize);
    let kk = k as usize;
    let mut acc = BigRational::zero();
    for n in 0..=2 * kk {
        let term = &f[n] * &f[2 * kk - n];
        if n % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    if k % 2 == 1 {
        acc = -acc;
    }
    ClosedForm {
        coeff: acc,
        pi_power: 4 * k,
    }
}

/// zeta({8}^k) over distinct parts through the kernel
/// A_j = sum_{i=0}^{j} (-1)^i / ((2i+1)! (2j-2i+1)!):
/// (-1)^k sum_{m=0}^{2k} (-1)^m A_{2m} A_{4k-2m} times pi^(8k).
/// Coincides with `repeated_mzv_closed(3, k)`.
pub fn repeated_mzv_8_factorials(k: u32) -> ClosedForm {
    let kk = k as usize;
    let f = inv_odd_factorials(4 * kk);
    let a: Vec<BigRational> = (0..=4 * kk)
        .map(|j| {
            let mut acc = BigRational::zero();
            for i in 0..=j {
                let term = &f[i] * &f[j - i];
                if i % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        })
        .collect();
    let mut acc = BigRational::zero();
    for m in 0..=2 * kk {
        let term = &a[2 * m] * &a[4 * kk - 2 * m];
        if m % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    if k % 2 == 1 {
        acc = -acc;
    }
    ClosedForm {
        coeff: acc,
        pi_power: 8 * k,
    }
}

/// zeta_P({s}^2) for even integer s, exactly: (zeta(2s) + zeta(s)^2)/2.
pub fn repeated_zeta_pair_closed(s: u32) -> Result<ClosedForm> {
    if s == 0 || s % 2 != 0 {
        return Err(Error::Invalid(
            "the exact pair form needs an even exponent s >= 2".into(),
        ));
    }
    let r = zeta_even_rationals_up_to(s);
    let coeff = (&r[s as usize] + r[s as usize / 2].pow(2))
        / BigRational::from(BigInt::from(2));
    Ok(ClosedForm {
        coeff,
        pi_power: 2 * s,
    })
}

/// zeta_P({s}^2) for real s > 1: (zeta(2s) + zeta(s)^2)/2 numerically.
pub fn repeated_zeta_pair(s: &BigRational, ctx: &PrecisionContext) -> Result<Approximation> {
    let z1 = zeta_real(s, ctx)?;
    let z2 = zeta_real(&(s + s), ctx)?;
    let ws = ctx.working_scale();
    let value = z2.value.add(&z1.value.mul(&z1.value)).div_u64(2);
    let b1 = z1.tail.bound();
    let b2 = z2.tail.bound();
    // |(z2 + z1^2) - true| <= b2 + b1 (2|z1| + b1), halved
    let bound = b2
        .add(&b1.mul(&z1.value.abs().mul_i64(2).add(b1)))
        .div_u64(2)
        .add(&BigFloat::ulp_pow(ws, ws));
    Ok(Approximation {
        value,
        tail: TailBound::Rigorous(bound),
        terms_used: z1.terms_used + z2.terms_used,
    })
}

// =====================================================================
// Identity checks
// =====================================================================

/// A closed-form value against a truncated product, with the allowed gap.
#[derive(Clone, Debug)]
pub struct ClosedVsProduct {
    pub label: String,
    pub closed: BigFloat,
    pub product: Approximation,
    pub gap: BigFloat,
    pub allowance: BigFloat,
    pub agrees: bool,
}

fn compare_closed(
    label: String,
    closed: BigFloat,
    slack: BigFloat,
    product: Approximation,
) -> ClosedVsProduct {
    let gap = closed.sub(&product.value).abs();
    let allowance = product.tail.bound().add(&slack);
    let agrees = gap.cmp_abs(&allowance) != Ordering::Greater;
    ClosedVsProduct {
        label,
        closed,
        product,
        gap,
        allowance,
        agrees,
    }
}

/// The multiples-of-m sum at exponent 2^t against its closed form:
/// t = 1 gives pi/(m sin(pi/m)), t = 2 gives
/// pi^2/(m^2 sin(pi/m) sinh(pi/m)). m = 2, t = 1 is the value pi/2.
pub fn pi_formula(m: u64, t: u32, cap: u64, ctx: &PrecisionContext) -> Result<ClosedVsProduct> {
    if m < 2 {
        return Err(Error::Invalid("the closed forms need m >= 2".into()));
    }
    if t != 1 && t != 2 {
        return Err(Error::Invalid("t must be 1 or 2 (exponent 2^t)".into()));
    }
    let ws = ctx.working_scale();
    let pi = BigFloat::pi(ws);
    let x = pi.div(&BigFloat::from_int(m as i64, ws))?;
    let sn = x.sin();
    let (closed, label) = if t == 1 {
        (
            pi.div(&sn.mul_i64(m as i64))?,
            format!("pi/({m} sin(pi/{m}))"),
        )
    } else {
        (
            pi.powi(2)
                .div(&sn.mul(&x.sinh()).mul_i64((m * m) as i64))?,
            format!("pi^2/({m}^2 sin(pi/{m}) sinh(pi/{m}))"),
        )
    };
    let s = BigRational::from(BigInt::from(1i64 << t));
    let query = ZetaQuery::new(PartSpec::multiples(m)?, s);
    let product = zeta_class(&query, cap, ctx)?;
    Ok(compare_closed(
        label,
        closed,
        kernel_slack(ws).mul_i64(8),
        product,
    ))
}

/// The three cubic product values around c = cosh(pi sqrt(3)/2):
///
/// * prod_{n>=2} (1 - n^(-3))^(-1) = 3 pi / c
/// * prod_{n>=1} (1 + n^(-3))      = c / pi
/// * prod_{n>=2} (1 - n^(-6))^(-1) = 6 pi^2 / c^2, the product of the
///   first value with the n >= 2 restriction of the second one inverted
pub fn cubic_cosh_checks(cap: u64, ctx: &PrecisionContext) -> Result<Vec<ClosedVsProduct>> {
    let ws = ctx.working_scale();
    let pi = BigFloat::pi(ws);
    let c = pi
        .mul(&BigFloat::from_int(3, ws).sqrt()?)
        .div_u64(2)
        .cosh();
    let slack = kernel_slack(ws).mul_i64(8);
    let three = BigRational::from(BigInt::from(3));
    let six = BigRational::from(BigInt::from(6));
    let mut out = Vec::with_capacity(3);
    out.push(compare_closed(
        "3 pi / cosh(pi sqrt(3)/2)".into(),
        pi.mul_i64(3).div(&c)?,
        slack.clone(),
        zeta_class(
            &ZetaQuery::new(PartSpec::greater_eq(2)?, three.clone()),
            cap,
            ctx,
        )?,
    ));
    out.push(compare_closed(
        "cosh(pi sqrt(3)/2) / pi".into(),
        c.div(&pi)?,
        slack.clone(),
        zeta_class(
            &ZetaQuery::new(PartSpec::All, three).over_distinct(),
            cap,
            ctx,
        )?,
    ));
    out.push(compare_closed(
        "6 pi^2 / cosh(pi sqrt(3)/2)^2".into(),
        pi.powi(2).mul_i64(6).div(&c.powi(2))?,
        slack,
        zeta_class(&ZetaQuery::new(PartSpec::greater_eq(2)?, six), cap, ctx)?,
    ));
    Ok(out)
}

/// 1 + sum_{p <= cap} p^(-s) / prod_{r <= p} (1 - r^(-s)), primes p, r.
///
/// Each new prime extends the sum by exactly the factor that turns the
/// running value into the Euler product over r <= p, so the partial sum
/// equals that product and inherits its rigorous tail.
pub fn prime_sum_zeta(s: &BigRational, cap: u64, ctx: &PrecisionContext) -> Result<Approximation> {
    if *s <= BigRational::one() {
        return Err(Error::Domain("the prime sum needs s > 1".into()));
    }
    if cap < 2 {
        return Err(Error::Invalid("cap must be at least 2".into()));
    }
    let ws = ctx.working_scale();
    let one = Tracked::exact(BigFloat::one(ws));
    let mut prod = one.clone();
    let mut sum = one.clone();
    let primes = primes_up_to(cap);
    for &p in &primes {
        let t = power_tracked(p, s, ws)?;
        prod = prod.mul(&one.sub(&t));
        sum = sum.add(&t.div(&prod)?);
    }
    let sigma = tail_sigma(s, cap, ws)?;
    let expm = expm1_upper(&sigma, ws);
    let ulp = BigFloat::ulp_pow(ws, ws);
    let bound = sum.v.abs().add(&sum.e).mul(&expm).add(&sum.e).add(&ulp);
    Ok(Approximation {
        value: sum.v,
        tail: TailBound::Rigorous(bound),
        terms_used: primes.len() as u64,
    })
}

/// Coefficients c_1..c_m of the Dirichlet series attached to a class: c_n
/// is the (optionally sign-weighted by length) number of partitions with
/// parts in X whose part product equals n.
///
/// Over the primes, unique factorization makes these the classical
/// arithmetic functions: signed counts with multiplicity give the
/// Liouville function, and the distinct-part counts give |mu| (plain) and
/// mu (signed).
pub fn dirichlet_extract(
    parts: &PartSpec,
    distinct: bool,
    signed: bool,
    m: u64,
) -> Result<Vec<i64>> {
    if m == 0 {
        return Err(Error::Invalid("coefficient range must be >= 1".into()));
    }
    let m_us = m as usize;
    let members = parts.members_up_to(m);
    if !distinct && members.first() == Some(&1) {
        return Err(Error::Divergent(
            "part 1 repeats without bound; every product has infinitely many preimages".into(),
        ));
    }
    let sgn: i64 = if signed { -1 } else { 1 };
    let mut c = vec![0i64; m_us + 1];
    c[1] = 1;
    for &p in &members {
        if p == 1 {
            // a distinct part 1 leaves the product alone: every partition
            // pairs with its copy extended by 1, scaling all counts
            for x in c.iter_mut() {
                *x += sgn * *x;
            }
            continue;
        }
        let p_us = p as usize;
        if distinct {
            for q in (1..=m_us / p_us).rev() {
                c[q * p_us] += sgn * c[q];
            }
        } else {
            for q in 1..=m_us / p_us {
                c[q * p_us] += sgn * c[q];
            }
        }
    }
    Ok(c)
}

/// Both sides of the finite doubling identity at integer s, exactly:
/// with multiplicity zeta_P(2s) vs zeta_P(s) eta_P(s); over distinct parts
/// eta_P*(2s) vs eta_P*(s) zeta_P*(s).
pub fn doubling_exact(
    parts: &PartSpec,
    s: i64,
    distinct: bool,
) -> Result<(BigRational, BigRational)> {
    let rs = BigRational::from(BigInt::from(s));
    let rs2 = BigRational::from(BigInt::from(2 * s));
    let make = |sv: BigRational, signed: bool| {
        let mut q = ZetaQuery::new(parts.clone(), sv);
        if distinct {
            q = q.over_distinct();
        }
        if signed {
            q = q.sign_weighted();
        }
        q
    };
    // multiplicity pairs zeta_P with eta_P, distinct pairs eta_P* with zeta_P*
    let left_signed = distinct;
    let left = zeta_class_exact(&make(rs2, left_signed))?;
    let right = zeta_class_exact(&make(rs.clone(), left_signed))?
        * zeta_class_exact(&make(rs, !left_signed))?;
    Ok((left, right))
}

/// The doubling identity with the sign data moved into a Dirichlet series.
#[derive(Clone, Debug)]
pub struct DoublingReport {
    /// The product at exponent 2s.
    pub left: Approximation,
    /// The product at exponent s.
    pub base: Approximation,
    /// Truncated series sum_{n <= series_cap} c_n n^(-s).
    pub series_value: BigFloat,
    pub series_terms: u64,
    pub gap: BigFloat,
    pub allowance: BigFloat,
    /// Whether the series tail estimate is proven (|c_n| <= 1 over primes).
    pub series_rigorous: bool,
    pub agrees: bool,
}

/// Checks zeta_P(2s) = zeta_P(s) * sum c_n n^(-s) with the sign-weighted
/// multiplicity counts c_n, or (distinct = true) the mirrored identity
/// eta_P*(2s) = eta_P*(s) * sum c_n n^(-s) with plain distinct counts.
/// Over the primes these series are the Liouville function and the
/// squarefree indicator.
pub fn doubling_series_check(
    parts: &PartSpec,
    s: &BigRational,
    distinct: bool,
    cap: u64,
    series_cap: u64,
    ctx: &PrecisionContext,
) -> Result<DoublingReport> {
    let ws = ctx.working_scale();
    let s2 = s + s;
    let (left_q, base_q, series_signed) = if distinct {
        (
            ZetaQuery::new(parts.clone(), s2).over_distinct().sign_weighted(),
            ZetaQuery::new(parts.clone(), s.clone())
                .over_distinct()
                .sign_weighted(),
            false,
        )
    } else {
        (
            ZetaQuery::new(parts.clone(), s2),
            ZetaQuery::new(parts.clone(), s.clone()),
            true,
        )
    };
    let left = zeta_class(&left_q, cap, ctx)?;
    let base = zeta_class(&base_q, cap, ctx)?;
    let c = dirichlet_extract(parts, distinct, series_signed, series_cap)?;
    let neg_s = -s;
    let mut series_value = BigFloat::zero(ws);
    let mut series_terms = 0u64;
    for (n, &cn) in c.iter().enumerate().skip(1) {
        if cn != 0 {
            series_value = series_value.add(&real_power(n as u64, &neg_s, ws)?.mul_i64(cn));
            series_terms += 1;
        }
    }
    let series_tail = tail_sigma(s, series_cap, ws)?
        .add(&BigFloat::from_int(series_terms as i64 + 4, ws).mul(&kernel_slack(ws)));
    let series_rigorous = matches!(parts, PartSpec::Primes);
    let right = base.value.mul(&series_value);
    let gap = left.value.sub(&right).abs();
    let bb = base.tail.bound();
    let allowance = left
        .tail
        .bound()
        .add(&base.value.abs().mul(&series_tail))
        .add(&series_value.abs().mul(bb))
        .add(&bb.mul(&series_tail))
        .add(&BigFloat::ulp_pow(ws, ws).mul_i64(4));
    let agrees = gap.cmp_abs(&allowance) != Ordering::Greater;
    Ok(DoublingReport {
        left,
        base,
        series_value,
        series_terms,
        gap,
        allowance,
        series_rigorous,
        agrees,
    })
}

/// Partial products of a doubling chain against its target, truncated at
/// one common cap.
#[derive(Clone, Debug)]
pub struct TelescopingReport {
    /// The chain factors at exponents s, 2s, 4s, ...
    pub factors: Vec<BigFloat>,
    /// Running products after each factor.
    pub partials: Vec<BigFloat>,
    /// The target product at exponent s, same cap.
    pub target: BigFloat,
    pub gap: BigFloat,
    pub allowance: BigFloat,
    pub agrees: bool,
    /// Part 1 was removed from the set before evaluating.
    pub dropped_one: bool,
}

/// Evaluates a depth-D doubling chain against its target, all truncated at
/// the same cap so the comparison needs no tail cancellation:
///
/// * plain chain: prod_{t<D} zeta_P*(2^t s) -> zeta_P(s)
/// * alternating chain: prod_{t<D} eta_P(2^t s) -> eta_P*(s)
///
/// Per part the chain telescopes, (1+x)(1+x^2)(1+x^4)... = 1/(1-x), which
/// needs x = n^(-s) < 1; part 1 is therefore dropped when present (keeping
/// it the plain target diverges and the alternating target is identically
/// zero). The allowance combines rounding envelopes with the double
/// exponential depth residual: each part's truncated chain misses exactly
/// a factor (1 - x^(2^D))^(+-1).
pub fn telescoping_check(
    parts: &PartSpec,
    s: &BigRational,
    alternating: bool,
    depth: u32,
    cap: u64,
    ctx: &PrecisionContext,
) -> Result<TelescopingReport> {
    if *s <= BigRational::one() {
        return Err(Error::Domain("the telescoping chain needs s > 1".into()));
    }
    if depth == 0 || depth > 30 {
        return Err(Error::Invalid("depth must satisfy 1 <= depth <= 30".into()));
    }
    if cap < 2 {
        return Err(Error::Invalid("cap must be at least 2".into()));
    }
    let ws = ctx.working_scale();
    let drop = parts.contains(1);
    let one = Tracked::exact(BigFloat::one(ws));
    let mut acc = one.clone();
    let mut factors = Vec::with_capacity(depth as usize);
    let mut partials = Vec::with_capacity(depth as usize);
    let mut level_s = s.clone();
    for _ in 0..depth {
        let (f, _) = class_partial(parts, drop, !alternating, alternating, &level_s, cap, ws)?;
        factors.push(f.v.clone());
        acc = acc.mul(&f);
        partials.push(acc.v.clone());
        level_s = &level_s + &level_s;
    }
    let (tgt, _) = class_partial(parts, drop, alternating, alternating, s, cap, ws)?;
    // sum over parts of x^(2^depth) <= 3 * 2^(-2^depth s); the exponential
    // wrapper for the alternating chain costs another factor 6
    let deep = -(BigRational::from(BigInt::one() << depth) * s);
    let resid = real_power(2, &deep, ws)?
        .mul_i64(18)
        .mul(&tgt.v.abs().add(&BigFloat::one(ws)));
    let ulp = BigFloat::ulp_pow(ws, ws);
    let gap = acc.v.sub(&tgt.v).abs();
    let allowance = acc.e.add(&tgt.e).add(&resid).add(&ulp.mul_i64(2));
    let agrees = gap.cmp_abs(&allowance) != Ordering::Greater;
    Ok(TelescopingReport {
        factors,
        partials,
        target: tgt.v,
        gap,
        allowance,
        agrees,
        dropped_one: drop,
    })
}
