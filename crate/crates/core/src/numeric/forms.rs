//! Five numeric routes to the weighted product series at a rational point.
//!
//! Each route evaluates the same function of q inside the unit disc, the
//! reciprocal of prod_{n>=1} (1 - f(n) q^n), but through a different
//! identity, so agreement between them exercises the identities with
//! concrete numbers:
//!
//! - [`series_route`]: power-series coefficients summed at q, with a
//!   majorant bound on the discarded coefficient tail (the coefficient
//!   recurrence is itself checked against direct partition enumeration in
//!   the series layer)
//! - [`quotient_sum_route`]: 1 + sum q^n f(n) / phi_n, dividing by prefix
//!   products
//! - [`product_sum_route`]: 1 + (sum q^n f(n) phi_(n-1)) / phi, multiplying
//!   by prefix products and normalizing by the full product
//! - [`inverted_argument_route`]: the same sum as the quotient route with
//!   every prefix rewritten at inverted argument and inverted weights;
//!   only applies when no weight vanishes, and only claims a heuristic
//!   error estimate
//! - [`continued_fraction_route`]: the fixed point of
//!   x -> 1 + S / (1 - T / x) built from the two partial sums above
//!
//! Everything runs in fixed point (exact rational prefix state would grow
//! denominators of n(n+1)/2 digits): the partial-sum and series routes
//! carry a tracked error envelope folded into their rigorous bounds, while
//! the inverted-argument route runs on guard digits under its heuristic
//! estimate. The per-step rational inputs (weights, powers of q) stay
//! exact until each single rounding.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::bigfloat::BigFloat;
use super::product::{abs_weight, eval_product, tail_weight_sum, InnerSign, OuterExp};
use super::{Approximation, PrecisionContext, TailBound, Tracked};
use crate::partition::{PartSpec, WeightEnvelope, WeightFunction};
use crate::{Error, Result};

/// All routes for one (f, q) evaluation; the inverted-argument route is
/// absent when some weight vanishes (it divides by weights).
#[derive(Debug)]
pub struct FormsReport {
    pub series: Approximation,
    pub quotient_sum: Approximation,
    pub product_sum: Approximation,
    pub inverted: Option<Approximation>,
    pub continued_fraction: Approximation,
}

impl FormsReport {
    /// (label, result) pairs for the routes that apply.
    pub fn entries(&self) -> Vec<(&'static str, &Approximation)> {
        let mut v = vec![
            ("series-sum", &self.series),
            ("prefix-quotient-sum", &self.quotient_sum),
            ("prefix-product-sum", &self.product_sum),
        ];
        if let Some(inv) = &self.inverted {
            v.push(("inverted-argument-sum", inv));
        }
        v.push(("continued-fraction", &self.continued_fraction));
        v
    }

    /// Largest |a - b| over all pairs of applicable routes.
    pub fn max_pairwise_gap(&self) -> BigFloat {
        let entries = self.entries();
        let mut best = BigFloat::zero(entries[0].1.value.scale());
        for (i, (_, a)) in entries.iter().enumerate() {
            for (_, b) in entries.iter().skip(i + 1) {
                let d = a.value.sub(&b.value).abs();
                if d > best {
                    best = d;
                }
            }
        }
        best
    }
}

/// Run every route. `max_cap` limits the work of any single route.
pub fn eval_all_routes(
    f: &WeightFunction,
    q: &BigRational,
    ctx: &PrecisionContext,
    max_cap: u64,
) -> Result<FormsReport> {
    let inverted = match inverted_argument_route(f, q, ctx, max_cap) {
        Ok(a) => Some(a),
        Err(Error::Domain(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(FormsReport {
        series: series_route(f, q, ctx, max_cap)?,
        quotient_sum: quotient_sum_route(f, q, ctx, max_cap)?,
        product_sum: product_sum_route(f, q, ctx, max_cap)?,
        inverted,
        continued_fraction: continued_fraction_route(f, q, ctx, max_cap)?,
    })
}

fn require_unit_disc(q: &BigRational) -> Result<BigRational> {
    let q_abs = q.abs();
    if q_abs >= BigRational::one() {
        return Err(Error::Divergent(
            "the series evaluations need |q| < 1".into(),
        ));
    }
    Ok(q_abs)
}

/// Smallest n with ratio^n below 10^(-decades), clamped to [4, max_cap].
fn geometric_cap(ratio: f64, decades: f64, max_cap: u64) -> u64 {
    if !(ratio > 0.0) {
        return 4;
    }
    if ratio >= 1.0 {
        return max_cap;
    }
    let n = decades * std::f64::consts::LN_10 / -ratio.ln();
    let n = if n.is_finite() { n.ceil() as u64 + 8 } else { max_cap };
    n.clamp(4, max_cap)
}

// =====================================================================
// Series route
// =====================================================================

/// First n from which c n^p x^n stays below 1, walking out past the peak.
fn envelope_settles_below_one(f: &WeightFunction, x0: &BigRational) -> Result<u64> {
    match f.envelope() {
        WeightEnvelope::FiniteSupport { n_max } => Ok(n_max),
        WeightEnvelope::PowerLaw { c, p } => {
            let x0f = x0.to_f64().unwrap_or(0.99);
            let peak = if p <= 0 {
                1.0
            } else {
                (-(p as f64) / x0f.ln()).max(1.0)
            };
            if !peak.is_finite() || peak > 1e6 {
                return Err(Error::Divergent(
                    "weight growth outruns the available contraction".into(),
                ));
            }
            let mut n = peak.ceil() as u64;
            loop {
                let env = envelope_value(&c, p, n) * x0.pow(n as i32);
                if env < BigRational::one() {
                    return Ok(n);
                }
                n = n.saturating_mul(2);
                if n > 10_000_000 {
                    return Err(Error::Divergent(
                        "majorant factors never settle below one".into(),
                    ));
                }
            }
        }
    }
}

fn envelope_value(c: &BigRational, p: i64, n: u64) -> BigRational {
    let np = if p >= 0 {
        BigRational::from(BigInt::from(n).pow(p as u32))
    } else {
        BigRational::new(BigInt::one(), BigInt::from(n).pow((-p) as u32))
    };
    c * np
}

/// Are all majorant factors (1 - |f(n)| x0^n) strictly positive?
fn majorant_factors_positive(f_abs: &WeightFunction, x0: &BigRational) -> Result<bool> {
    let limit = envelope_settles_below_one(f_abs, x0)?;
    let one = BigRational::one();
    let mut xp = BigRational::one();
    for n in 1..=limit {
        xp *= x0;
        let w = f_abs.eval(n).expect_rational("series majorant")?;
        if &w * &xp >= one {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Sum the exact series coefficients at q. The tail is bounded through a
/// majorant evaluation point x0 in (|q|, 1): every coefficient of the
/// all-positive companion series is at most M(x0) / x0^n, so the discarded
/// part is at most M(x0) (|q|/x0)^(cap+1) / (1 - |q|/x0).
pub fn series_route(
    f: &WeightFunction,
    q: &BigRational,
    ctx: &PrecisionContext,
    max_cap: u64,
) -> Result<Approximation> {
    let ws = ctx.working_scale();
    if q.is_zero() {
        return Ok(Approximation::exact(BigFloat::one(ws)));
    }
    let q_abs = require_unit_disc(q)?;
    let one = BigRational::one();
    let two = BigRational::from(BigInt::from(2));
    let f_abs = abs_weight(f);
    let mut x0 = (&one + &q_abs) / &two;
    let mut shrinks = 0;
    while !majorant_factors_positive(&f_abs, &x0)? {
        x0 = (&q_abs + &x0) / &two;
        shrinks += 1;
        if shrinks > 64 {
            return Err(Error::Divergent(
                "q sits at or beyond the radius of convergence".into(),
            ));
        }
    }

    // upper bound for the majorant value at x0
    let cap_p = geometric_cap(
        x0.to_f64().unwrap_or(0.6),
        (ctx.digits() + 14) as f64,
        40_000,
    );
    let m_hat = eval_product(
        &f_abs,
        &PartSpec::All,
        InnerSign::Minus,
        OuterExp::Inverse,
        &x0,
        cap_p,
        ctx,
    )?;
    let m_upper = m_hat.value.abs().add(m_hat.tail.bound());

    // series order: push M(x0) (|q|/x0)^(n+1)/(1 - |q|/x0) under the target
    let ratio = &q_abs / &x0;
    let extra = m_upper.to_f64().abs().log10().max(0.0) + 2.0;
    let order = geometric_cap(
        ratio.to_f64().unwrap_or(0.5),
        ctx.digits() as f64 + 8.0 + extra,
        max_cap,
    );

    let val = tracked_series_value(f, q, order as usize, ws)?;

    let ratio_f = BigFloat::from_rational(&ratio, ws);
    let geo = ratio_f.powi(order as u32 + 1).div(
        &BigFloat::from_rational(&(&one - &ratio), ws),
    )?;
    // powi rounds to nearest; double the geometric part to stay an upper bound
    let bound = m_upper
        .mul(&geo.mul_i64(2))
        .add(&val.e)
        .add(&BigFloat::ulp_pow(ws, ws).mul_i64(2));
    Ok(Approximation {
        value: val.v,
        tail: TailBound::Rigorous(bound),
        terms_used: order,
    })
}

/// Coefficients of the reciprocal series up to `order`, evaluated at q by
/// Horner, all in tracked fixed point: build the product coefficients by
/// sparse updates, invert through the convolution recurrence. The same two
/// recurrences run exactly over rationals in the series layer, where the
/// coefficients are pinned against direct partition enumeration.
fn tracked_series_value(
    f: &WeightFunction,
    q: &BigRational,
    order: usize,
    ws: u32,
) -> Result<Tracked> {
    let one = Tracked::exact(BigFloat::one(ws));
    let zero = Tracked::exact(BigFloat::zero(ws));
    let mut phi = vec![zero.clone(); order + 1];
    phi[0] = one.clone();
    for n in 1..=order {
        let w = f.eval(n as u64).expect_rational("series weight")?;
        if w.is_zero() {
            continue;
        }
        let a = Tracked::from_rational(&w, ws);
        for m in (n..=order).rev() {
            let upd = a.mul(&phi[m - n]);
            phi[m] = phi[m].sub(&upd);
        }
    }
    let mut inv = vec![zero.clone(); order + 1];
    inv[0] = one;
    for m in 1..=order {
        let mut acc = zero.clone();
        for j in 1..=m {
            // untouched entries are exact zeros and contribute nothing
            if phi[j].v.is_zero() && phi[j].e.is_zero() {
                continue;
            }
            acc = acc.add(&phi[j].mul(&inv[m - j]));
        }
        inv[m] = acc.neg();
    }
    let qt = Tracked::from_rational(q, ws);
    let mut val = zero;
    for c in inv.iter().rev() {
        val = val.mul(&qt).add(c);
    }
    Ok(val)
}

// =====================================================================
// Prefix-quotient route
// =====================================================================

/// 1 + sum_{n>=1} q^n f(n) / phi_n with prefix products phi_n =
/// prod_{k<=n} (1 - f(k) q^k). Tail: sigma e^(2 sigma) / |phi_cap|, where
/// sigma bounds the discarded weight sum; rounding is carried alongside.
pub fn quotient_sum_route(
    f: &WeightFunction,
    q: &BigRational,
    ctx: &PrecisionContext,
    max_cap: u64,
) -> Result<Approximation> {
    let ws = ctx.working_scale();
    if q.is_zero() {
        return Ok(Approximation::exact(BigFloat::one(ws)));
    }
    let q_abs = require_unit_disc(q)?;
    let cap = geometric_cap(
        q_abs.to_f64().unwrap_or(0.5),
        (ws + 8) as f64,
        max_cap,
    );
    let sigma = checked_tail_sigma(f, q, cap, ws)?;
    let ps = prefix_sums(f, q, cap, ws)?;
    let ulp = BigFloat::ulp_pow(ws, ws);

    let value = BigFloat::one(ws).add(&ps.quot.v);
    // every later phi_n stays within e^(2 sigma) of phi_cap
    let phi_low = ps.phi.v.abs().sub(&ps.phi.e);
    if !phi_low.is_positive() {
        return Err(Error::Divergent(
            "prefix product is below the working resolution".into(),
        ));
    }
    let bound = sigma
        .mul(&sigma.mul_i64(2).exp())
        .div(&phi_low)?
        .add(&ps.quot.e)
        .add(&ulp.mul_i64(2));
    Ok(Approximation {
        value,
        tail: TailBound::Rigorous(bound),
        terms_used: ps.terms,
    })
}

/// Tail weight sum with the smallness check every tail argument relies on.
fn checked_tail_sigma(
    f: &WeightFunction,
    q: &BigRational,
    cap: u64,
    ws: u32,
) -> Result<BigFloat> {
    let sigma = tail_weight_sum(f, &PartSpec::All, q, cap, ws)?;
    let half = BigFloat::from_rational(&BigRational::new(1.into(), 2.into()), ws);
    if sigma > half {
        return Err(Error::Invalid(format!(
            "tail weights beyond cap {cap} sum to more than 1/2; raise the cap"
        )));
    }
    Ok(sigma)
}

/// One tracked pass over n <= cap shared by the partial-sum routes.
struct PrefixSums {
    /// sum q^n f(n) / phi_n
    quot: Tracked,
    /// sum q^n f(n) phi_(n-1)
    prod: Tracked,
    /// phi_cap
    phi: Tracked,
    terms: u64,
}

fn prefix_sums(
    f: &WeightFunction,
    q: &BigRational,
    cap: u64,
    ws: u32,
) -> Result<PrefixSums> {
    let one = Tracked::exact(BigFloat::one(ws));
    let mut phi = one.clone();
    let mut quot = Tracked::exact(BigFloat::zero(ws));
    let mut prod = Tracked::exact(BigFloat::zero(ws));
    let mut qp = BigRational::one();
    let mut terms = 0u64;
    for n in 1..=cap {
        qp *= q;
        let w = f.eval(n).expect_rational("prefix-sum weight")?;
        if w.is_zero() {
            continue;
        }
        let a = Tracked::from_rational(&(&w * &qp), ws);
        prod = prod.add(&a.mul(&phi));
        phi = phi.mul(&one.sub(&a));
        quot = quot.add(&a.div(&phi).map_err(|_| {
            Error::Divergent(format!(
                "prefix product is not resolved away from zero at n = {n}"
            ))
        })?);
        terms += 1;
    }
    Ok(PrefixSums {
        quot,
        prod,
        phi,
        terms,
    })
}

// =====================================================================
// Prefix-product route
// =====================================================================

/// 1 + (sum_{n>=1} q^n f(n) phi_(n-1)) / phi, with phi the full product.
pub fn product_sum_route(
    f: &WeightFunction,
    q: &BigRational,
    ctx: &PrecisionContext,
    max_cap: u64,
) -> Result<Approximation> {
    let ws = ctx.working_scale();
    if q.is_zero() {
        return Ok(Approximation::exact(BigFloat::one(ws)));
    }
    let q_abs = require_unit_disc(q)?;
    let cap = geometric_cap(
        q_abs.to_f64().unwrap_or(0.5),
        (ws + 8) as f64,
        max_cap,
    );
    let sigma = checked_tail_sigma(f, q, cap, ws)?;
    let ulp = BigFloat::ulp_pow(ws, ws);

    // |phi_(n-1)| never exceeds the all-plus magnitude product
    let f_abs = abs_weight(f);
    let plus = eval_product(
        &f_abs,
        &PartSpec::All,
        InnerSign::Plus,
        OuterExp::Direct,
        &q_abs,
        cap,
        ctx,
    )?;
    let prefix_sup = plus.value.abs().add(plus.tail.bound());

    let ps = prefix_sums(f, q, cap, ws)?;
    // fold both truncations into the envelopes and let the division
    // propagate them: the sum tail is sigma * sup |phi_(n-1)|, the full
    // product sits within a factor e^(2 sigma) of phi_cap
    let mut s = ps.prod;
    s.e = s.e.add(&sigma.mul(&prefix_sup)).add(&ulp);
    let mut phi = ps.phi;
    let expm = sigma
        .mul_i64(2)
        .exp()
        .sub(&BigFloat::one(ws))
        .add(&ulp.mul_i64(2));
    phi.e = phi
        .e
        .add(&phi.v.abs().add(&phi.e).mul(&expm))
        .add(&ulp);
    let res = Tracked::exact(BigFloat::one(ws)).add(&s.div(&phi).map_err(|_| {
        Error::Divergent("full product is not resolved away from zero".into())
    })?);
    Ok(Approximation {
        value: res.v,
        tail: TailBound::Rigorous(res.e.add(&ulp)),
        terms_used: ps.terms,
    })
}

// =====================================================================
// Inverted-argument route
// =====================================================================

/// Term-by-term rewrite of the prefix-quotient sum: term n becomes
///
///   (-1)^n q^(-n(n-1)/2) f(n) / (prod_{k<=n} f(k) * psi_n)
///
/// with psi_n = prod_{k<=n} (1 - q^(-k) / f(k)), the prefix product at
/// inverted argument and inverted weights. Consecutive terms differ by the
/// small factor -q^(1-n) / (f(n-1) (1 - q^(-n)/f(n))), so the run carries
/// one fixed-point term and an exact rational step ratio; it stops at the
/// resolution floor. No independent envelope exists on this side, so the
/// reported error is the last term, a heuristic.
pub fn inverted_argument_route(
    f: &WeightFunction,
    q: &BigRational,
    ctx: &PrecisionContext,
    max_cap: u64,
) -> Result<Approximation> {
    let ws = ctx.working_scale();
    if q.is_zero() {
        return Ok(Approximation::exact(BigFloat::one(ws)));
    }
    require_unit_disc(q)?;
    // guard digits keep the stop threshold above the resolution
    let ws2 = ws + 16;
    let stop = BigFloat::ulp_pow(ws + 2, ws2);
    let blowup = BigFloat::from_bigint(&BigInt::from(10).pow(ctx.digits()), ws2);
    let q_inv = BigRational::one() / q;

    let mut qi = BigRational::one(); // q^(-(n-1)) entering step n
    let mut term = BigFloat::zero(ws2);
    let mut w_prev: Option<BigRational> = None;
    let mut sum = BigFloat::zero(ws2);
    let mut last_mag: Option<BigFloat> = None;
    let mut growth_streak = 0u32;
    let mut used = 0u64;
    let mut final_mag = BigFloat::zero(ws2);
    for n in 1..=max_cap {
        let w = f.eval(n).expect_rational("inverted-argument weight")?;
        if w.is_zero() {
            return Err(Error::Domain(format!(
                "weight vanishes at n = {n}; the inverted-argument rewrite divides by it"
            )));
        }
        let qi_n = &qi * &q_inv; // q^(-n)
        let d = BigRational::one() - &qi_n / &w;
        if d.is_zero() {
            return Err(Error::Divergent(format!(
                "inverted prefix product vanishes at n = {n}"
            )));
        }
        term = match &w_prev {
            None => BigFloat::from_rational(&(-BigRational::one() / &d), ws2),
            Some(wp) => term.mul(&BigFloat::from_rational(&-(&qi / (wp * &d)), ws2)),
        };
        qi = qi_n;
        w_prev = Some(w);
        let mag = term.abs();
        sum = sum.add(&term);
        used = n;
        if mag < stop {
            final_mag = mag;
            break;
        }
        if mag > blowup {
            return Err(Error::Divergent(
                "inverted-argument terms exceed the precision budget".into(),
            ));
        }
        if let Some(prev) = &last_mag {
            if mag > *prev {
                growth_streak += 1;
                if growth_streak >= 5 {
                    return Err(Error::Divergent(
                        "inverted-argument terms grow for five consecutive steps".into(),
                    ));
                }
            } else {
                growth_streak = 0;
            }
        }
        final_mag = mag.clone();
        last_mag = Some(mag);
    }
    let value = sum.add(&BigFloat::one(ws2)).with_scale(ws);
    // the recursion rounds below the coarse grid; two coarse ulps cover it
    let est = final_mag
        .with_scale(ws)
        .add(&BigFloat::ulp_pow(ws, ws).mul_i64(2));
    Ok(Approximation {
        value,
        tail: TailBound::Heuristic(est),
        terms_used: used,
    })
}

// =====================================================================
// Continued-fraction route
// =====================================================================

/// Fixed point of x -> 1 + T / (1 - S / x), where S is the prefix-quotient
/// sum and T the prefix-product sum (without its normalization). The map
/// contracts at rate |S T| near the fixed point; iteration stops when the
/// step falls to a few units of resolution.
pub fn continued_fraction_route(
    f: &WeightFunction,
    q: &BigRational,
    ctx: &PrecisionContext,
    max_cap: u64,
) -> Result<Approximation> {
    let ws = ctx.working_scale();
    if q.is_zero() {
        return Ok(Approximation::exact(BigFloat::one(ws)));
    }
    let q_abs = require_unit_disc(q)?;
    let cap = geometric_cap(
        q_abs.to_f64().unwrap_or(0.5),
        (ws + 8) as f64,
        max_cap,
    );
    checked_tail_sigma(f, q, cap, ws)?;

    let ps = prefix_sums(f, q, cap, ws)?;
    let s = ps.quot.v.clone();
    let t = ps.prod.v.clone();
    let one = BigFloat::one(ws);
    let ulp = BigFloat::ulp_pow(ws, ws);
    let tol = ulp.mul_i64(4);
    let floor = ulp.mul_i64(16);

    let mut x = one.clone();
    let mut delta = one.clone();
    let mut iters = 0u64;
    while iters < 4000 {
        let denom = one.sub(&s.div(&x)?);
        if denom.abs() < floor {
            return Err(Error::Divergent(
                "continued-fraction denominator collapses".into(),
            ));
        }
        let next = one.add(&t.div(&denom)?);
        delta = next.sub(&x).abs();
        x = next;
        iters += 1;
        if delta <= tol {
            break;
        }
    }
    Ok(Approximation {
        value: x,
        tail: TailBound::Heuristic(delta.add(&ps.quot.e).add(&ps.prod.e).add(&ulp)),
        terms_used: iters,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::with_digits(50).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn assert_all_close(report: &FormsReport, decimal: u32, scale: u32) {
        let gap = report.max_pairwise_gap();
        assert!(
            gap < BigFloat::ulp_pow(decimal, scale),
            "routes disagree by {}",
            gap.to_sci_string(3)
        );
    }

    #[test]
    fn routes_agree_constant_weight() {
        let c = ctx();
        let f = WeightFunction::Constant(rat(1, 2));
        let r = eval_all_routes(&f, &rat(1, 10), &c, 2000).unwrap();
        assert!(r.inverted.is_some());
        assert_all_close(&r, 45, c.working_scale());
    }

    #[test]
    fn routes_agree_inverse_square_weight() {
        let c = ctx();
        let f = WeightFunction::Power(-2);
        let r = eval_all_routes(&f, &rat(3, 10), &c, 2000).unwrap();
        assert!(r.inverted.is_some());
        assert_all_close(&r, 45, c.working_scale());
    }

    #[test]
    fn routes_agree_negative_weight_and_negative_q() {
        let c = ctx();
        let f = WeightFunction::Constant(rat(-2, 3));
        let r = eval_all_routes(&f, &rat(-1, 5), &c, 2000).unwrap();
        assert_all_close(&r, 45, c.working_scale());
    }

    #[test]
    fn restricted_weight_drops_only_the_inverted_route() {
        let c = ctx();
        let f = WeightFunction::Restricted(
            Box::new(WeightFunction::one()),
            PartSpec::Multiples(2),
        );
        let r = eval_all_routes(&f, &rat(1, 10), &c, 2000).unwrap();
        assert!(r.inverted.is_none());
        assert_all_close(&r, 45, c.working_scale());
    }

    #[test]
    fn table_weight_four_routes() {
        let c = ctx();
        let f = WeightFunction::Table(vec![(1, rat(1, 2)), (3, rat(5, 1))]);
        let r = eval_all_routes(&f, &rat(1, 10), &c, 2000).unwrap();
        assert!(r.inverted.is_none());
        assert_all_close(&r, 45, c.working_scale());
        // finite support makes the function rational: check against the
        // directly evaluated reciprocal of (1 - q/2)(1 - 5 q^3)
        let q = rat(1, 10);
        let exact = BigRational::one()
            / ((BigRational::one() - &q / BigRational::from(BigInt::from(2)))
                * (BigRational::one() - rat(5, 1) * q.pow(3)));
        let exact_f = BigFloat::from_rational(&exact, c.working_scale());
        let d = r.series.value.sub(&exact_f).abs();
        assert!(d < BigFloat::ulp_pow(45, c.working_scale()));
    }

    #[test]
    fn large_constant_weight_shrinks_the_majorant_point() {
        let c = ctx();
        let f = WeightFunction::constant_int(20);
        let r = eval_all_routes(&f, &rat(1, 100), &c, 4000).unwrap();
        assert_all_close(&r, 45, c.working_scale());
    }

    #[test]
    fn beyond_radius_is_divergent() {
        // sum of (20 q)^k needs |q| < 1/20
        let c = ctx();
        let f = WeightFunction::constant_int(20);
        let e = series_route(&f, &rat(1, 10), &c, 2000);
        assert!(matches!(e, Err(Error::Divergent(_))));
    }

    #[test]
    fn zero_q_is_exactly_one() {
        let c = ctx();
        let f = WeightFunction::Power(-1);
        let r = eval_all_routes(&f, &BigRational::zero(), &c, 100).unwrap();
        assert!(r.max_pairwise_gap().is_zero());
        assert_eq!(r.series.value, BigFloat::one(c.working_scale()));
    }

    #[test]
    fn unit_q_is_refused() {
        let c = ctx();
        let f = WeightFunction::Power(-2);
        assert!(matches!(
            quotient_sum_route(&f, &BigRational::one(), &c, 100),
            Err(Error::Divergent(_))
        ));
    }

    #[test]
    fn rigorous_bounds_cover_the_route_gaps() {
        let c = ctx();
        let f = WeightFunction::Constant(rat(1, 3));
        let q = rat(1, 7);
        let a = series_route(&f, &q, &c, 2000).unwrap();
        let b = quotient_sum_route(&f, &q, &c, 2000).unwrap();
        let gap = a.abs_diff(&b);
        let allowance = a.tail.bound().add(b.tail.bound());
        assert!(gap <= allowance);
        assert!(a.tail.is_rigorous() && b.tail.is_rigorous());
    }
}
