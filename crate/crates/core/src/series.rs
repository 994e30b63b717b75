//! Truncated formal power series in q, over a pluggable coefficient ring.
//!
//! Two rings are provided:
//!
//! * [`QRing`]: exact rationals.
//! * [`ZPolyRing`]: polynomials in a formal marker `z` over the rationals,
//!   truncated at a fixed z-degree. One factor of `z` per part lets series
//!   track partition length through products and reciprocals.
//!
//! Every series carries its truncation order `N` explicitly: a series is the
//! exact list of coefficients of q^0..q^N. Operations never extend order;
//! mixed-order arithmetic is an error, not a silent truncation.
//!
//! The expansion routines realize the equivalent forms of the reciprocal
//! product `1 / prod_{k>=1} (1 - f(k) q^k)` and of the product itself:
//!
//! * sum over all partitions, weighted by the part-weight product (form
//!   [`expand_form4`], and signed over distinct partitions
//!   [`expand_distinct15`]);
//! * single sums whose terms divide by (or multiply) finite partial products
//!   ([`expand_form5`], [`expand_form6`], [`expand_distinct16`],
//!   [`expand_distinct17`]);
//! * continued-fraction convergents built from the two single sums
//!   ([`cf_convergent`], [`cf_convergent_dual`]).
//!
//! All of them agree with [`reciprocal`]`(`[`phi_series`]`)` (respectively
//! [`phi_series`]) up to the truncation order; the tests and the verify
//! suites exercise exactly that.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::partition::{enumerate, PartitionClass, WeightFunction};
use crate::{Error, Result};

/// Exact rational coefficient.
pub type Coefficient = BigRational;

// =====================================================================
// Coefficient rings
// =====================================================================

/// Commutative ring interface used by the series code. The ring object
/// carries context (for [`ZPolyRing`], the z-degree cap); elements are data.
pub trait CoeffRing: Clone + PartialEq + std::fmt::Debug {
    type Elem: Clone + PartialEq + std::fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; errors when `a` is not a unit.
    fn invert(&self, a: &Self::Elem) -> Result<Self::Elem>;
    /// Embed an exact rational.
    fn embed(&self, r: &BigRational) -> Self::Elem;
    /// Value of the weight function at part n, as a ring element. For the
    /// rational ring this rejects z-scaled weights.
    fn weight(&self, f: &WeightFunction, n: u64) -> Result<Self::Elem>;
}

/// The rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct QRing;

impl CoeffRing for QRing {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn invert(&self, a: &BigRational) -> Result<BigRational> {
        if a.is_zero() {
            return Err(Error::NotInvertible("rational zero".into()));
        }
        Ok(a.recip())
    }
    fn embed(&self, r: &BigRational) -> BigRational {
        r.clone()
    }
    fn weight(&self, f: &WeightFunction, n: u64) -> Result<BigRational> {
        f.eval(n).expect_rational("rational series coefficient")
    }
}

/// Polynomial in the length marker z, coefficients ascending by z-degree,
/// trailing zeros trimmed. The empty vector is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZPoly(pub Vec<BigRational>);

impl ZPoly {
    pub fn constant(r: BigRational) -> Self {
        if r.is_zero() {
            ZPoly(Vec::new())
        } else {
            ZPoly(vec![r])
        }
    }

    /// Coefficient of z^d (zero beyond stored degree).
    pub fn coeff(&self, d: usize) -> BigRational {
        self.0.get(d).cloned().unwrap_or_else(BigRational::zero)
    }

    fn trim(mut v: Vec<BigRational>) -> Self {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        ZPoly(v)
    }
}

/// Z-polynomials truncated at z-degree `zcap` (working modulo z^{zcap+1}).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ZPolyRing {
    pub zcap: usize,
}

impl ZPolyRing {
    pub fn new(zcap: usize) -> Self {
        ZPolyRing { zcap }
    }
}

impl CoeffRing for ZPolyRing {
    type Elem = ZPoly;

    fn zero(&self) -> ZPoly {
        ZPoly(Vec::new())
    }
    fn one(&self) -> ZPoly {
        ZPoly(vec![BigRational::one()])
    }
    fn is_zero(&self, a: &ZPoly) -> bool {
        a.0.is_empty()
    }
    fn add(&self, a: &ZPoly, b: &ZPoly) -> ZPoly {
        let len = a.0.len().max(b.0.len());
        let mut v = Vec::with_capacity(len);
        for i in 0..len {
            v.push(a.coeff(i) + b.coeff(i));
        }
        ZPoly::trim(v)
    }
    fn sub(&self, a: &ZPoly, b: &ZPoly) -> ZPoly {
        let len = a.0.len().max(b.0.len());
        let mut v = Vec::with_capacity(len);
        for i in 0..len {
            v.push(a.coeff(i) - b.coeff(i));
        }
        ZPoly::trim(v)
    }
    fn mul(&self, a: &ZPoly, b: &ZPoly) -> ZPoly {
        if a.0.is_empty() || b.0.is_empty() {
            return ZPoly(Vec::new());
        }
        let len = (a.0.len() + b.0.len() - 1).min(self.zcap + 1);
        let mut v = vec![BigRational::zero(); len];
        for (i, ai) in a.0.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.0.iter().enumerate() {
                if i + j > self.zcap {
                    break;
                }
                v[i + j] += ai * bj;
            }
        }
        ZPoly::trim(v)
    }
    fn neg(&self, a: &ZPoly) -> ZPoly {
        ZPoly(a.0.iter().map(|c| -c).collect())
    }
    fn invert(&self, a: &ZPoly) -> Result<ZPoly> {
        let a0 = a.coeff(0);
        if a0.is_zero() {
            return Err(Error::NotInvertible(
                "z-polynomial with zero constant term".into(),
            ));
        }
        // Power-series inversion modulo z^{zcap+1}.
        let inv0 = a0.recip();
        let mut b = vec![inv0.clone()];
        for k in 1..=self.zcap {
            let mut s = BigRational::zero();
            for j in 1..=k.min(a.0.len().saturating_sub(1)) {
                s += a.coeff(j) * &b[k - j];
            }
            b.push(-&inv0 * s);
        }
        Ok(ZPoly::trim(b))
    }
    fn embed(&self, r: &BigRational) -> ZPoly {
        ZPoly::constant(r.clone())
    }
    fn weight(&self, f: &WeightFunction, n: u64) -> Result<ZPoly> {
        let w = f.eval(n);
        let d = w.z_power as usize;
        if w.value.is_zero() || d > self.zcap {
            return Ok(ZPoly(Vec::new()));
        }
        let mut v = vec![BigRational::zero(); d + 1];
        v[d] = w.value;
        Ok(ZPoly(v))
    }
}

// =====================================================================
// Truncated series
// =====================================================================

/// Coefficients of q^0..q^N over ring R. Order N is explicit and fixed.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<R: CoeffRing> {
    ring: R,
    coeffs: Vec<R::Elem>,
}

pub type QSeries = TruncatedSeries<QRing>;
pub type ZSeries = TruncatedSeries<ZPolyRing>;

impl<R: CoeffRing> TruncatedSeries<R> {
    pub fn zero(ring: R, order: usize) -> Self {
        let coeffs = vec![ring.zero(); order + 1];
        TruncatedSeries { ring, coeffs }
    }

    pub fn one(ring: R, order: usize) -> Self {
        let mut s = Self::zero(ring, order);
        s.coeffs[0] = s.ring.one();
        s
    }

    pub fn from_coeffs(ring: R, coeffs: Vec<R::Elem>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Invalid("series needs at least the q^0 coefficient".into()));
        }
        Ok(TruncatedSeries { ring, coeffs })
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    /// Truncation order N.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> &R::Elem {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, i: usize, v: R::Elem) {
        self.coeffs[i] = v;
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch(self.order(), other.order()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| self.ring.add(a, b))
            .collect();
        Ok(TruncatedSeries { ring: self.ring.clone(), coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| self.ring.sub(a, b))
            .collect();
        Ok(TruncatedSeries { ring: self.ring.clone(), coeffs })
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|a| self.ring.neg(a)).collect();
        TruncatedSeries { ring: self.ring.clone(), coeffs }
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let coeffs = self.coeffs.iter().map(|a| self.ring.mul(a, c)).collect();
        TruncatedSeries { ring: self.ring.clone(), coeffs }
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let n = self.order();
        let mut coeffs = vec![self.ring.zero(); n + 1];
        for i in 0..=n {
            if self.ring.is_zero(&self.coeffs[i]) {
                continue;
            }
            for j in 0..=(n - i) {
                if self.ring.is_zero(&other.coeffs[j]) {
                    continue;
                }
                let prod = self.ring.mul(&self.coeffs[i], &other.coeffs[j]);
                coeffs[i + j] = self.ring.add(&coeffs[i + j], &prod);
            }
        }
        Ok(TruncatedSeries { ring: self.ring.clone(), coeffs })
    }

    /// Multiplicative inverse: requires an invertible constant term.
    /// b_0 = 1/a_0, then b_n = -b_0 * sum_{k=1..n} a_k b_{n-k}.
    pub fn reciprocal(&self) -> Result<Self> {
        let inv0 = self.ring.invert(&self.coeffs[0]).map_err(|_| {
            Error::NotInvertible("series constant term has no inverse".into())
        })?;
        let n = self.order();
        let mut b: Vec<R::Elem> = Vec::with_capacity(n + 1);
        b.push(inv0.clone());
        for m in 1..=n {
            let mut s = self.ring.zero();
            for k in 1..=m {
                if self.ring.is_zero(&self.coeffs[k]) {
                    continue;
                }
                let prod = self.ring.mul(&self.coeffs[k], &b[m - k]);
                s = self.ring.add(&s, &prod);
            }
            let term = self.ring.neg(&self.ring.mul(&inv0, &s));
            b.push(term);
        }
        Ok(TruncatedSeries { ring: self.ring.clone(), coeffs: b })
    }

    /// Multiply in place by the sparse factor (1 + c q^k), k >= 1.
    pub fn mul_sparse_factor(&mut self, c: &R::Elem, k: usize) {
        if k == 0 || self.ring.is_zero(c) {
            return;
        }
        let n = self.order();
        for i in (k..=n).rev() {
            let add = self.ring.mul(&self.coeffs[i - k], c);
            self.coeffs[i] = self.ring.add(&self.coeffs[i], &add);
        }
    }

    /// Index of the lowest nonzero coefficient, if any.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !self.ring.is_zero(c))
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }
}

// =====================================================================
// Product and expansion builders
// =====================================================================

/// Finite partial product phi_n(f; q) = prod_{k=1}^{n} (1 - f(k) q^k),
/// truncated at order N. `phi_series(ring, f, N, N)` is the full product to
/// the truncation order: factors beyond q^N cannot touch coefficients <= N.
pub fn phi_partial<R: CoeffRing>(ring: &R, f: &WeightFunction, n: usize, order: usize) -> Result<TruncatedSeries<R>> {
    let mut s = TruncatedSeries::one(ring.clone(), order);
    for k in 1..=n {
        let w = ring.weight(f, k as u64)?;
        let c = ring.neg(&w);
        s.mul_sparse_factor(&c, k);
    }
    Ok(s)
}

/// The generalized product prod_{k=1}^{N} (1 - f(k) q^k) at order N.
pub fn phi_series<R: CoeffRing>(ring: &R, f: &WeightFunction, order: usize) -> Result<TruncatedSeries<R>> {
    phi_partial(ring, f, order, order)
}

/// All partial products phi_0..phi_n at the given order (phi_0 = 1).
fn phi_prefixes<R: CoeffRing>(
    ring: &R,
    f: &WeightFunction,
    n: usize,
    order: usize,
) -> Result<Vec<TruncatedSeries<R>>> {
    let mut out = Vec::with_capacity(n + 1);
    let mut s = TruncatedSeries::one(ring.clone(), order);
    out.push(s.clone());
    for k in 1..=n {
        let w = ring.weight(f, k as u64)?;
        let c = ring.neg(&w);
        s.mul_sparse_factor(&c, k);
        out.push(s.clone());
    }
    Ok(out)
}

/// Reciprocal product as a sum over all partitions:
/// coefficient of q^n is sum over partitions of n of the part-weight product.
/// Built by direct enumeration, independently of series inversion.
pub fn expand_form4<R: CoeffRing>(ring: &R, f: &WeightFunction, order: usize) -> Result<TruncatedSeries<R>> {
    expand_by_enumeration(ring, f, order, false)
}

/// The product itself as a signed sum over partitions into distinct parts:
/// coefficient of q^n is sum over distinct partitions of n of
/// (-1)^length times the part-weight product.
pub fn expand_distinct15<R: CoeffRing>(ring: &R, f: &WeightFunction, order: usize) -> Result<TruncatedSeries<R>> {
    expand_by_enumeration(ring, f, order, true)
}

fn expand_by_enumeration<R: CoeffRing>(
    ring: &R,
    f: &WeightFunction,
    order: usize,
    distinct_signed: bool,
) -> Result<TruncatedSeries<R>> {
    let class = if distinct_signed {
        PartitionClass::distinct_over(crate::partition::PartSpec::All)
    } else {
        PartitionClass::unrestricted()
    };
    let mut s = TruncatedSeries::zero(ring.clone(), order);
    for n in 0..=order {
        let mut acc = ring.zero();
        for lam in enumerate(n as u64, &class) {
            let mut term = ring.one();
            for &p in lam.parts() {
                let w = ring.weight(f, p)?;
                term = ring.mul(&term, &w);
            }
            if distinct_signed && lam.length() % 2 == 1 {
                term = ring.neg(&term);
            }
            acc = ring.add(&acc, &term);
        }
        s.set_coeff(n, acc);
    }
    Ok(s)
}

/// Reciprocal product as a single sum with divided partial products:
/// 1 + sum_{n>=1} f(n) q^n / phi_n(f; q).
pub fn expand_form5<R: CoeffRing>(ring: &R, f: &WeightFunction, order: usize) -> Result<TruncatedSeries<R>> {
    let sum5 = sum_terms5(ring, f, order)?;
    TruncatedSeries::one(ring.clone(), order).add(&sum5)
}

/// Reciprocal product via multiplied partial products:
/// 1 + (1/phi_N) * sum_{n>=1} f(n) q^n phi_{n-1}(f; q).
pub fn expand_form6<R: CoeffRing>(ring: &R, f: &WeightFunction, order: usize) -> Result<TruncatedSeries<R>> {
    let phi = phi_series(ring, f, order)?;
    let sum6 = sum_terms6(ring, f, order)?;
    let one = TruncatedSeries::one(ring.clone(), order);
    one.add(&phi.reciprocal()?.mul(&sum6)?)
}

/// The product via the dual single sum: 1 - sum_{n>=1} f(n) q^n phi_{n-1}.
pub fn expand_distinct16<R: CoeffRing>(ring: &R, f: &WeightFunction, order: usize) -> Result<TruncatedSeries<R>> {
    let sum6 = sum_terms6(ring, f, order)?;
    TruncatedSeries::one(ring.clone(), order).sub(&sum6)
}

/// The product via the divided single sum: 1 - phi_N * sum_{n>=1} f(n) q^n / phi_n.
pub fn expand_distinct17<R: CoeffRing>(ring: &R, f: &WeightFunction, order: usize) -> Result<TruncatedSeries<R>> {
    let phi = phi_series(ring, f, order)?;
    let sum5 = sum_terms5(ring, f, order)?;
    TruncatedSeries::one(ring.clone(), order).sub(&phi.mul(&sum5)?)
}

/// sum_{n=1}^{N} f(n) q^n / phi_n(f; q); each term has q-valuation >= n,
/// so truncating the sum at n = N is exact at order N.
pub fn sum_terms5<R: CoeffRing>(ring: &R, f: &WeightFunction, order: usize) -> Result<TruncatedSeries<R>> {
    let phis = phi_prefixes(ring, f, order, order)?;
    let mut acc = TruncatedSeries::zero(ring.clone(), order);
    for n in 1..=order {
        let w = ring.weight(f, n as u64)?;
        if ring.is_zero(&w) {
            continue;
        }
        let inv = phis[n].reciprocal()?;
        // Shift by q^n and scale by f(n).
        for i in 0..=(order - n) {
            let add = ring.mul(inv.coeff(i), &w);
            let cur = acc.coeff(i + n).clone();
            acc.set_coeff(i + n, ring.add(&cur, &add));
        }
    }
    Ok(acc)
}

/// sum_{n=1}^{N} f(n) q^n phi_{n-1}(f; q).
pub fn sum_terms6<R: CoeffRing>(ring: &R, f: &WeightFunction, order: usize) -> Result<TruncatedSeries<R>> {
    let phis = phi_prefixes(ring, f, order.saturating_sub(1), order)?;
    let mut acc = TruncatedSeries::zero(ring.clone(), order);
    for n in 1..=order {
        let w = ring.weight(f, n as u64)?;
        if ring.is_zero(&w) {
            continue;
        }
        let phi_prev = &phis[n - 1];
        for i in 0..=(order - n) {
            let add = ring.mul(phi_prev.coeff(i), &w);
            let cur = acc.coeff(i + n).clone();
            acc.set_coeff(i + n, ring.add(&cur, &add));
        }
    }
    Ok(acc)
}

/// Depth-m convergent of the continued fraction
/// 1 + S6 / (1 - S5 / (1 + S6 / (1 - ...))) built bottom-up, where S5 and S6
/// are the two single sums. Depth 1 is 1 + S6. The convergent agrees with
/// the reciprocal product to q-order at least depth-1, so depth N+1 is exact
/// at truncation order N.
pub fn cf_convergent<R: CoeffRing>(
    ring: &R,
    f: &WeightFunction,
    depth: usize,
    order: usize,
) -> Result<TruncatedSeries<R>> {
    if depth == 0 {
        return Err(Error::Invalid("continued fraction depth must be >= 1".into()));
    }
    let s5 = sum_terms5(ring, f, order)?;
    let s6 = sum_terms6(ring, f, order)?;
    let one = TruncatedSeries::one(ring.clone(), order);
    let mut acc = one.clone();
    for level in (1..=depth).rev() {
        let inv = acc.reciprocal()?;
        acc = if level % 2 == 1 {
            one.add(&s6.mul(&inv)?)?
        } else {
            one.sub(&s5.mul(&inv)?)?
        };
    }
    Ok(acc)
}

/// Depth-m convergent of the dual continued fraction
/// 1 - S5 / (1 + S6 / (1 - S5 / (1 + ...))); converges to the product itself.
pub fn cf_convergent_dual<R: CoeffRing>(
    ring: &R,
    f: &WeightFunction,
    depth: usize,
    order: usize,
) -> Result<TruncatedSeries<R>> {
    if depth == 0 {
        return Err(Error::Invalid("continued fraction depth must be >= 1".into()));
    }
    let s5 = sum_terms5(ring, f, order)?;
    let s6 = sum_terms6(ring, f, order)?;
    let one = TruncatedSeries::one(ring.clone(), order);
    let mut acc = one.clone();
    for level in (1..=depth).rev() {
        let inv = acc.reciprocal()?;
        acc = if level % 2 == 1 {
            one.sub(&s5.mul(&inv)?)?
        } else {
            one.add(&s6.mul(&inv)?)?
        };
    }
    Ok(acc)
}

// =====================================================================
// Congruence check and z extraction
// =====================================================================

/// Report for the arithmetic-progression congruence between the two series
/// 1/prod_{n == a (mod m)} (1 - n^s q^n) and 1/prod_{n == a (mod m)} (1 - a^s q^n),
/// compared coefficientwise modulo m up to the truncation order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceReport {
    pub modulus: u64,
    pub order: usize,
    pub agrees: bool,
    pub first_mismatch: Option<usize>,
}

/// Check the congruence for residue class a mod m with integer exponent s >= 0.
pub fn congruence_check(a: u64, m: u64, s: u32, order: usize) -> Result<CongruenceReport> {
    if m == 0 || a == 0 || a > m {
        return Err(Error::Invalid(format!(
            "congruence requires 1 <= a <= m, got a={a}, m={m}"
        )));
    }
    let spec = crate::partition::PartSpec::ArithProg { a, m };
    let lhs_weight = WeightFunction::Restricted(
        Box::new(WeightFunction::Power(s as i64)),
        spec.clone(),
    );
    let a_pow = BigRational::from(BigInt::from(a).pow(s));
    let rhs_weight = WeightFunction::Restricted(
        Box::new(WeightFunction::Constant(a_pow)),
        spec,
    );
    let ring = QRing;
    let lhs = phi_series(&ring, &lhs_weight, order)?.reciprocal()?;
    let rhs = phi_series(&ring, &rhs_weight, order)?.reciprocal()?;
    let modulus = BigInt::from(m);
    let mut first_mismatch = None;
    for i in 0..=order {
        let ci = integer_coeff(lhs.coeff(i), i)?;
        let di = integer_coeff(rhs.coeff(i), i)?;
        let diff = (ci - di) % &modulus;
        if !diff.is_zero() {
            first_mismatch = Some(i);
            break;
        }
    }
    Ok(CongruenceReport {
        modulus: m,
        order,
        agrees: first_mismatch.is_none(),
        first_mismatch,
    })
}

fn integer_coeff(c: &BigRational, i: usize) -> Result<BigInt> {
    if !c.denom().is_one() {
        return Err(Error::Invalid(format!(
            "coefficient of q^{i} is not an integer: {c}"
        )));
    }
    Ok(c.numer().clone())
}

/// Extract the coefficient of z^d from every q-coefficient of a z-polynomial
/// series, yielding a rational series of the same order.
pub fn z_marker_extract(series: &ZSeries, d: usize) -> QSeries {
    let coeffs = series
        .coeffs()
        .iter()
        .map(|p| p.coeff(d))
        .collect::<Vec<_>>();
    TruncatedSeries {
        ring: QRing,
        coeffs,
    }
}

// =====================================================================
// JSON serialization (bit-exact round trip)
// =====================================================================

fn rational_to_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn rational_from_string(s: &str) -> Result<BigRational> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad integer in rational: {s}")))?;
    let den: BigInt = den
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad integer in rational: {s}")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator: {s}")));
    }
    Ok(BigRational::new(num, den))
}

impl QSeries {
    /// {"order": N, "coeffs": ["num/den", ...]} with reduced fractions.
    pub fn to_json(&self) -> Value {
        json!({
            "order": self.order(),
            "coeffs": self.coeffs().iter().map(rational_to_string).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let order = v
            .get("order")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("series json needs integer 'order'".into()))?
            as usize;
        let coeffs = v
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("series json needs array 'coeffs'".into()))?;
        if coeffs.len() != order + 1 {
            return Err(Error::Parse(format!(
                "series json: expected {} coefficients, found {}",
                order + 1,
                coeffs.len()
            )));
        }
        let coeffs = coeffs
            .iter()
            .map(|c| {
                c.as_str()
                    .ok_or_else(|| Error::Parse("coefficient must be a string".into()))
                    .and_then(rational_from_string)
            })
            .collect::<Result<Vec<_>>>()?;
        TruncatedSeries::from_coeffs(QRing, coeffs)
    }
}

impl ZSeries {
    /// {"order": N, "zcap": C, "coeffs": [["num/den", ...], ...]}: each
    /// q-coefficient is the list of its z-coefficients, ascending degree.
    pub fn to_json(&self) -> Value {
        json!({
            "order": self.order(),
            "zcap": self.ring().zcap,
            "coeffs": self
                .coeffs()
                .iter()
                .map(|p| p.0.iter().map(rational_to_string).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let order = v
            .get("order")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("series json needs integer 'order'".into()))?
            as usize;
        let zcap = v
            .get("zcap")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("series json needs integer 'zcap'".into()))?
            as usize;
        let coeffs = v
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("series json needs array 'coeffs'".into()))?;
        if coeffs.len() != order + 1 {
            return Err(Error::Parse(format!(
                "series json: expected {} coefficients, found {}",
                order + 1,
                coeffs.len()
            )));
        }
        let coeffs = coeffs
            .iter()
            .map(|p| {
                let arr = p
                    .as_array()
                    .ok_or_else(|| Error::Parse("z-coefficient must be an array".into()))?;
                let v = arr
                    .iter()
                    .map(|c| {
                        c.as_str()
                            .ok_or_else(|| Error::Parse("coefficient must be a string".into()))
                            .and_then(rational_from_string)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(ZPoly::trim(v))
            })
            .collect::<Result<Vec<_>>>()?;
        TruncatedSeries::from_coeffs(ZPolyRing::new(zcap), coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::{partition_counts_pentagonal, PartSpec};
    use num_bigint::BigUint;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn assert_series_eq(a: &QSeries, b: &QSeries, what: &str) {
        assert_eq!(a.order(), b.order(), "{what}: order");
        for i in 0..=a.order() {
            assert_eq!(a.coeff(i), b.coeff(i), "{what}: coefficient of q^{i}");
        }
    }

    #[test]
    fn reciprocal_of_one_minus_q() {
        // 1/(1-q) = 1 + q + q^2 + ...
        let f = WeightFunction::Restricted(
            Box::new(WeightFunction::one()),
            PartSpec::Finite([1].into_iter().collect()),
        );
        let s = phi_series(&QRing, &f, 8).unwrap().reciprocal().unwrap();
        for i in 0..=8 {
            assert_eq!(*s.coeff(i), BigRational::one());
        }
    }

    #[test]
    fn mul_and_reciprocal_are_inverse() {
        let f = WeightFunction::Power(-1);
        let phi = phi_series(&QRing, &f, 12).unwrap();
        let prod = phi.mul(&phi.reciprocal().unwrap()).unwrap();
        assert_series_eq(&prod, &TruncatedSeries::one(QRing, 12), "phi * 1/phi");
    }

    #[test]
    fn partition_generating_function_vs_pentagonal() {
        let s = phi_series(&QRing, &WeightFunction::one(), 40)
            .unwrap()
            .reciprocal()
            .unwrap();
        let p = partition_counts_pentagonal(40);
        for n in 0..=40usize {
            let c = s.coeff(n);
            assert!(c.denom().is_one());
            assert_eq!(c.numer().to_biguint().unwrap(), p[n], "p({n})");
        }
    }

    #[test]
    fn five_forms_agree_constant_weight() {
        let f = WeightFunction::Constant(q(1, 2));
        let n = 24;
        let base = phi_series(&QRing, &f, n).unwrap().reciprocal().unwrap();
        assert_series_eq(&expand_form4(&QRing, &f, n).unwrap(), &base, "form 4");
        assert_series_eq(&expand_form5(&QRing, &f, n).unwrap(), &base, "form 5");
        assert_series_eq(&expand_form6(&QRing, &f, n).unwrap(), &base, "form 6");
        assert_series_eq(
            &cf_convergent(&QRing, &f, n + 1, n).unwrap(),
            &base,
            "continued fraction",
        );
    }

    #[test]
    fn dual_forms_agree_power_weight() {
        let f = WeightFunction::Power(-1);
        let n = 20;
        let phi = phi_series(&QRing, &f, n).unwrap();
        assert_series_eq(&expand_distinct15(&QRing, &f, n).unwrap(), &phi, "form 15");
        assert_series_eq(&expand_distinct16(&QRing, &f, n).unwrap(), &phi, "form 16");
        assert_series_eq(&expand_distinct17(&QRing, &f, n).unwrap(), &phi, "form 17");
        assert_series_eq(
            &cf_convergent_dual(&QRing, &f, n + 1, n).unwrap(),
            &phi,
            "dual continued fraction",
        );
    }

    #[test]
    fn cf_convergent_gains_order_per_level() {
        let f = WeightFunction::one();
        let n = 16;
        let base = phi_series(&QRing, &f, n).unwrap().reciprocal().unwrap();
        for depth in 1..=n {
            let conv = cf_convergent(&QRing, &f, depth, n).unwrap();
            let diff = conv.sub(&base).unwrap();
            if let Some(v) = diff.valuation() {
                assert!(
                    v >= depth,
                    "depth {depth}: agreement only to q^{v}"
                );
            }
        }
    }

    #[test]
    fn euler_identity_distinct_vs_odd_reciprocal() {
        // prod (1+q^k) = 1/prod(1-q^{2k-1}): check via signed expansion with
        // f = -1 (so 1 - f q^k = 1 + q^k).
        let n = 30;
        let minus_one = WeightFunction::constant_int(-1);
        let distinct = phi_series(&QRing, &minus_one, n).unwrap();
        let odd = WeightFunction::Restricted(
            Box::new(WeightFunction::one()),
            PartSpec::ArithProg { a: 1, m: 2 },
        );
        let odd_recip = phi_series(&QRing, &odd, n).unwrap().reciprocal().unwrap();
        assert_series_eq(&distinct, &odd_recip, "Euler identity");
    }

    #[test]
    fn golden_ratio_like_relation() {
        // S5 - S6 = S5 * S6 exactly, for several weights.
        let weights = [
            WeightFunction::one(),
            WeightFunction::Constant(q(2, 3)),
            WeightFunction::Power(-2),
            WeightFunction::Power(1),
        ];
        for f in &weights {
            let n = 18;
            let s5 = sum_terms5(&QRing, f, n).unwrap();
            let s6 = sum_terms6(&QRing, f, n).unwrap();
            let lhs = s5.sub(&s6).unwrap();
            let rhs = s5.mul(&s6).unwrap();
            assert_series_eq(&lhs, &rhs, "golden-ratio-like relation");
        }
    }

    #[test]
    fn restriction_matches_restricted_enumeration() {
        // Restricting the weight to X is the same as expanding over
        // partitions with parts in X.
        let x = PartSpec::Multiples(3);
        let f = WeightFunction::Restricted(Box::new(WeightFunction::Power(-1)), x.clone());
        let n = 18;
        let lhs = expand_form4(&QRing, &f, n).unwrap();
        // Direct: enumerate partitions with parts in X only.
        let class = PartitionClass::over(x);
        let mut rhs = TruncatedSeries::zero(QRing, n);
        for m in 0..=n {
            let mut acc = BigRational::zero();
            for lam in enumerate(m as u64, &class) {
                let w = crate::partition::weight_product(&lam, &WeightFunction::Power(-1));
                acc += w.value;
            }
            rhs.set_coeff(m, acc);
        }
        assert_series_eq(&lhs, &rhs, "restriction law");
    }

    #[test]
    fn z_marker_counts_length() {
        // With f = z (constant 1 scaled by z), the reciprocal product's
        // q^n coefficient is sum_k #{partitions of n with k parts} z^k.
        let ring = ZPolyRing::new(12);
        let f = WeightFunction::ZScaled(Box::new(WeightFunction::one()));
        let s = phi_series(&ring, &f, 12).unwrap().reciprocal().unwrap();
        // Partitions of 5: lengths 1,2,2,3,3,4,5 -> z + 2z^2 + 2z^3 + z^4 + z^5.
        let c5 = s.coeff(5);
        assert_eq!(c5.coeff(0), BigRational::zero());
        assert_eq!(c5.coeff(1), BigRational::one());
        assert_eq!(c5.coeff(2), q(2, 1));
        assert_eq!(c5.coeff(3), q(2, 1));
        assert_eq!(c5.coeff(4), BigRational::one());
        assert_eq!(c5.coeff(5), BigRational::one());
        // d = 0 extraction of the reciprocal is the constant series 1.
        let d0 = z_marker_extract(&s, 0);
        assert_series_eq(&d0, &TruncatedSeries::one(QRing, 12), "z^0 slice");
    }

    #[test]
    fn z_limit_recovers_weight_series() {
        // The z^1 slice of 1/phi(z f) - 1 is sum_n f(n) q^n.
        let ring = ZPolyRing::new(10);
        let inner = WeightFunction::Power(-2);
        let f = WeightFunction::ZScaled(Box::new(inner.clone()));
        let s = phi_series(&ring, &f, 10).unwrap().reciprocal().unwrap();
        let d1 = z_marker_extract(&s, 1);
        for n in 1..=10u64 {
            let expect = inner.eval(n).value;
            assert_eq!(*d1.coeff(n as usize), expect, "q^{n}");
        }
        assert_eq!(*d1.coeff(0), BigRational::zero());
    }

    #[test]
    fn congruence_holds_and_detects_breakage() {
        let r = congruence_check(1, 3, 1, 25).unwrap();
        assert!(r.agrees, "a=1, m=3, s=1");
        let r = congruence_check(2, 4, 1, 25).unwrap();
        assert!(r.agrees, "a=2, m=4, s=1");
        let r = congruence_check(1, 5, 2, 25).unwrap();
        assert!(r.agrees, "a=1, m=5, s=2");
        // s = 0 makes both sides literally equal.
        let r = congruence_check(2, 3, 0, 20).unwrap();
        assert!(r.agrees);
    }

    #[test]
    fn json_round_trip_q_series() {
        let f = WeightFunction::Power(-2);
        let s = phi_series(&QRing, &f, 9).unwrap().reciprocal().unwrap();
        let v = s.to_json();
        let back = QSeries::from_json(&v).unwrap();
        assert_eq!(s, back);
    }

    #[test]
    fn json_round_trip_z_series() {
        let ring = ZPolyRing::new(7);
        let f = WeightFunction::ZScaled(Box::new(WeightFunction::Power(-1)));
        let s = phi_series(&ring, &f, 7).unwrap().reciprocal().unwrap();
        let v = s.to_json();
        let back = ZSeries::from_json(&v).unwrap();
        assert_eq!(s, back);
    }

    #[test]
    fn order_mismatch_is_an_error() {
        let a = TruncatedSeries::one(QRing, 4);
        let b = TruncatedSeries::one(QRing, 5);
        assert!(matches!(a.mul(&b), Err(Error::OrderMismatch(4, 5))));
    }

    #[test]
    fn reciprocal_needs_unit_constant_term() {
        let mut s = TruncatedSeries::zero(QRing, 3);
        s.set_coeff(1, BigRational::one());
        assert!(matches!(s.reciprocal(), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn zpoly_ring_invert_is_exact_inverse() {
        let ring = ZPolyRing::new(6);
        let a = ZPoly(vec![q(2, 1), q(1, 3), q(0, 1), q(5, 7)]);
        let inv = ring.invert(&a).unwrap();
        let prod = ring.mul(&a, &inv);
        assert_eq!(prod, ring.one());
    }

    #[test]
    fn counts_as_biguint_sanity() {
        // coefficient extraction used elsewhere expects integer coefficients
        let s = phi_series(&QRing, &WeightFunction::one(), 10)
            .unwrap()
            .reciprocal()
            .unwrap();
        let c = s.coeff(10);
        assert_eq!(c.numer().to_biguint(), Some(BigUint::from(42u32)));
    }
}
