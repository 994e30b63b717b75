//! Integer partitions, part-set filters, and multiplicative weights.
//!
//! A partition is a non-increasing tuple of positive integer parts. Three
//! statistics drive everything downstream:
//!
//! * `size`: the sum of parts,
//! * `length`: the number of parts,
//! * `integer`: the product of parts (`n_lambda`), which maps partitions into
//!   multiplicative number theory.
//!
//! The empty partition is a first-class citizen: size 0, length 0, integer 1.
//!
//! Part sets ([`PartSpec`]) restrict which integers may appear as parts;
//! classes ([`PartitionClass`]) add distinctness and fixed-length constraints.
//! Weight functions ([`WeightFunction`]) assign an exact rational to each
//! part, optionally carrying a power of a formal marker `z` per part so that
//! series code can track partition length through products.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

// =====================================================================
// Partitions
// =====================================================================

/// A partition: parts stored non-increasing, all parts >= 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<u64>,
}

impl Partition {
    /// The empty partition.
    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// Build from arbitrary part order; parts are sorted non-increasing.
    /// Rejects zero parts.
    pub fn new(mut parts: Vec<u64>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::Invalid("partition parts must be >= 1".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    /// Build from parts already sorted non-increasing.
    pub fn from_sorted(parts: Vec<u64>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::Invalid("partition parts must be >= 1".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Invalid("parts must be non-increasing".into()));
        }
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    /// Sum of parts.
    pub fn size(&self) -> u64 {
        self.parts.iter().sum()
    }

    /// Number of parts.
    pub fn length(&self) -> usize {
        self.parts.len()
    }

    /// Product of parts (`n_lambda`); 1 for the empty partition.
    pub fn integer(&self) -> BigUint {
        let mut acc = BigUint::one();
        for &p in &self.parts {
            acc *= BigUint::from(p);
        }
        acc
    }

    /// True when no part repeats.
    pub fn is_distinct(&self) -> bool {
        self.parts.windows(2).all(|w| w[0] > w[1])
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

// =====================================================================
// Part sets
// =====================================================================

/// A subset of the positive integers from which parts may be drawn.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PartSpec {
    /// All positive integers.
    All,
    /// An explicit finite set (non-empty, stored sorted).
    Finite(BTreeSet<u64>),
    /// Positive multiples of m.
    Multiples(u64),
    /// Integers congruent to a modulo m, with 1 <= a <= m.
    ArithProg { a: u64, m: u64 },
    /// Integers >= a.
    GreaterEq(u64),
    /// Prime numbers.
    Primes,
}

impl PartSpec {
    /// Finite set constructor; rejects empty sets and zero members.
    pub fn finite<I: IntoIterator<Item = u64>>(members: I) -> Result<Self> {
        let set: BTreeSet<u64> = members.into_iter().collect();
        if set.is_empty() {
            return Err(Error::Invalid("finite part set must be non-empty".into()));
        }
        if set.contains(&0) {
            return Err(Error::Invalid("parts must be >= 1".into()));
        }
        Ok(PartSpec::Finite(set))
    }

    pub fn multiples(m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::Invalid("multiples modulus must be >= 1".into()));
        }
        Ok(PartSpec::Multiples(m))
    }

    pub fn arith_prog(a: u64, m: u64) -> Result<Self> {
        if m == 0 || a == 0 || a > m {
            return Err(Error::Invalid(format!(
                "arithmetic progression requires 1 <= a <= m, got a={a}, m={m}"
            )));
        }
        Ok(PartSpec::ArithProg { a, m })
    }

    /// Integers >= a; `a = 1` normalizes to `All`.
    pub fn greater_eq(a: u64) -> Result<Self> {
        match a {
            0 => Err(Error::Invalid("lower bound must be >= 1".into())),
            1 => Ok(PartSpec::All),
            _ => Ok(PartSpec::GreaterEq(a)),
        }
    }

    /// Membership test.
    pub fn contains(&self, n: u64) -> bool {
        if n == 0 {
            return false;
        }
        match self {
            PartSpec::All => true,
            PartSpec::Finite(set) => set.contains(&n),
            PartSpec::Multiples(m) => n % m == 0,
            PartSpec::ArithProg { a, m } => n % m == a % m,
            PartSpec::GreaterEq(a) => n >= *a,
            PartSpec::Primes => is_prime(n),
        }
    }

    /// Members up to and including `limit`, ascending.
    pub fn members_up_to(&self, limit: u64) -> Vec<u64> {
        match self {
            PartSpec::All => (1..=limit).collect(),
            PartSpec::Finite(set) => set.iter().copied().filter(|&n| n <= limit).collect(),
            PartSpec::Multiples(m) => (1..).map(|k| k * m).take_while(|&n| n <= limit).collect(),
            PartSpec::ArithProg { a, m } => {
                let first = if *a == *m && *m == 1 { 1 } else { *a };
                (0..)
                    .map(|k| first + k * m)
                    .take_while(|&n| n <= limit)
                    .collect()
            }
            PartSpec::GreaterEq(a) => (*a..=limit).collect(),
            PartSpec::Primes => primes_up_to(limit),
        }
    }

    /// Unbounded ascending iterator over members. Finite sets terminate.
    pub fn iter(&self) -> PartSpecIter<'_> {
        PartSpecIter { spec: self, next: 0 }
    }

    /// The smallest member, if any.
    pub fn min_member(&self) -> Option<u64> {
        self.iter().next()
    }

    /// True for variants with infinitely many members.
    pub fn is_infinite(&self) -> bool {
        !matches!(self, PartSpec::Finite(_))
    }
}

/// Ascending member iterator; see [`PartSpec::iter`].
pub struct PartSpecIter<'a> {
    spec: &'a PartSpec,
    next: u64,
}

impl Iterator for PartSpecIter<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        loop {
            self.next += 1;
            let n = self.next;
            match self.spec {
                PartSpec::Finite(set) => match set.range(n..).next() {
                    Some(&m) => {
                        self.next = m;
                        return Some(m);
                    }
                    None => return None,
                },
                PartSpec::Multiples(m) => {
                    let k = n.div_ceil(*m);
                    self.next = k * m;
                    return Some(self.next);
                }
                PartSpec::GreaterEq(a) => {
                    self.next = n.max(*a);
                    return Some(self.next);
                }
                _ => {
                    if self.spec.contains(n) {
                        return Some(n);
                    }
                }
            }
        }
    }
}

// =====================================================================
// Classes
// =====================================================================

/// A family of partitions: parts drawn from a set, optionally distinct,
/// optionally of fixed length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionClass {
    pub parts: PartSpec,
    pub distinct: bool,
    pub fixed_length: Option<usize>,
}

impl PartitionClass {
    pub fn unrestricted() -> Self {
        PartitionClass {
            parts: PartSpec::All,
            distinct: false,
            fixed_length: None,
        }
    }

    pub fn over(parts: PartSpec) -> Self {
        PartitionClass {
            parts,
            distinct: false,
            fixed_length: None,
        }
    }

    pub fn distinct_over(parts: PartSpec) -> Self {
        PartitionClass {
            parts,
            distinct: true,
            fixed_length: None,
        }
    }

    pub fn with_length(mut self, k: usize) -> Self {
        self.fixed_length = Some(k);
        self
    }

    /// Does `lambda` satisfy every constraint of this class?
    pub fn matches(&self, lambda: &Partition) -> bool {
        if let Some(k) = self.fixed_length {
            if lambda.length() != k {
                return false;
            }
        }
        if self.distinct && !lambda.is_distinct() {
            return false;
        }
        lambda.parts().iter().all(|&p| self.parts.contains(p))
    }
}

// =====================================================================
// Enumeration and counting
// =====================================================================

/// All partitions of `n` in `class`, in decreasing-lexicographic order of
/// part tuples: for n=4 unrestricted, (4), (3,1), (2,2), (2,1,1), (1,1,1,1).
///
/// # Edge cases
/// `n = 0` yields exactly the empty partition when the class admits it
/// (always, unless a nonzero fixed length is demanded).
pub fn enumerate(n: u64, class: &PartitionClass) -> Vec<Partition> {
    let mut out = Vec::new();
    let members_desc: Vec<u64> = {
        let mut m = class.parts.members_up_to(n);
        m.reverse();
        m
    };
    let mut stack: Vec<u64> = Vec::new();
    descend(n, u64::MAX, &members_desc, class, &mut stack, &mut out);
    out
}

fn descend(
    remaining: u64,
    max_part: u64,
    members_desc: &[u64],
    class: &PartitionClass,
    stack: &mut Vec<u64>,
    out: &mut Vec<Partition>,
) {
    if remaining == 0 {
        if class.fixed_length.map_or(true, |k| stack.len() == k) {
            out.push(Partition {
                parts: stack.clone(),
            });
        }
        return;
    }
    if let Some(k) = class.fixed_length {
        if stack.len() >= k {
            return;
        }
        // Each remaining slot holds at least the smallest usable member.
        let slots = (k - stack.len()) as u64;
        match members_desc.last() {
            Some(&min_m) if min_m.saturating_mul(slots) <= remaining => {}
            _ => return,
        }
    }
    for &p in members_desc {
        if p > remaining || p > max_part {
            continue;
        }
        let next_cap = if class.distinct { p - 1 } else { p };
        stack.push(p);
        descend(remaining - p, next_cap, members_desc, class, stack, out);
        stack.pop();
    }
}

/// Number of partitions of `n` in `class`, computed by dynamic programming
/// over the admissible members. Agrees with `enumerate(n, class).len()`.
pub fn count(n: u64, class: &PartitionClass) -> BigUint {
    let members = class.parts.members_up_to(n);
    let n = n as usize;
    match class.fixed_length {
        None => {
            // 1-D knapsack; member loop outside keeps multisets unordered.
            let mut dp = vec![BigUint::zero(); n + 1];
            dp[0] = BigUint::one();
            for &m in &members {
                let m = m as usize;
                if class.distinct {
                    for s in (m..=n).rev() {
                        let add = dp[s - m].clone();
                        dp[s] += add;
                    }
                } else {
                    for s in m..=n {
                        let add = dp[s - m].clone();
                        dp[s] += add;
                    }
                }
            }
            dp[n].clone()
        }
        Some(k) => {
            // 2-D: dp[len][sum].
            let mut dp = vec![vec![BigUint::zero(); n + 1]; k + 1];
            dp[0][0] = BigUint::one();
            for &m in &members {
                let m = m as usize;
                if class.distinct {
                    for len in (1..=k).rev() {
                        for s in (m..=n).rev() {
                            let add = dp[len - 1][s - m].clone();
                            dp[len][s] += add;
                        }
                    }
                } else {
                    for len in 1..=k {
                        for s in m..=n {
                            let add = dp[len - 1][s - m].clone();
                            dp[len][s] += add;
                        }
                    }
                }
            }
            dp[k][n].clone()
        }
    }
}

/// Unrestricted partition counts p(0..=n) by the pentagonal-number
/// recurrence. Independent of both the enumerator and the series engine;
/// used as the counting oracle.
pub fn partition_counts_pentagonal(n: u64) -> Vec<BigUint> {
    let n = n as usize;
    let mut p = vec![BigUint::zero(); n + 1];
    p[0] = BigUint::one();
    for m in 1..=n {
        let mut acc = BigInt::zero();
        let mut k: i64 = 1;
        loop {
            let g1 = k * (3 * k - 1) / 2;
            let g2 = k * (3 * k + 1) / 2;
            if g1 as usize > m && g2 as usize > m {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            for g in [g1, g2] {
                let g = g as usize;
                if g <= m {
                    let term = BigInt::from(p[m - g].clone());
                    if sign > 0 {
                        acc += term;
                    } else {
                        acc -= term;
                    }
                }
            }
            k += 1;
        }
        assert!(!acc.is_negative(), "pentagonal recurrence went negative");
        p[m] = acc.to_biguint().expect("non-negative");
    }
    p
}

// =====================================================================
// Weight functions
// =====================================================================

/// Exact weight attached to a part: a rational value times an optional power
/// of the formal length marker `z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightValue {
    pub value: BigRational,
    pub z_power: u32,
}

impl WeightValue {
    pub fn rational(value: BigRational) -> Self {
        WeightValue { value, z_power: 0 }
    }

    /// The rational value, failing if a z marker is attached.
    pub fn expect_rational(&self, what: &str) -> Result<BigRational> {
        if self.z_power != 0 {
            return Err(Error::InexactWeight(format!(
                "{what}: carries z^{}",
                self.z_power
            )));
        }
        Ok(self.value.clone())
    }
}

/// Exact weight function on parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightFunction {
    /// f(n) = c.
    Constant(BigRational),
    /// f(n) = n^e with integer e (negative exponents give exact rationals).
    Power(i64),
    /// Explicit table; parts outside the table weigh 0.
    Table(Vec<(u64, BigRational)>),
    /// f(n) = inner(n) for n in X, else 0.
    Restricted(Box<WeightFunction>, PartSpec),
    /// f(n) = z * inner(n): each part contributes one power of the length
    /// marker on top of its inner weight.
    ZScaled(Box<WeightFunction>),
}

impl WeightFunction {
    pub fn one() -> Self {
        WeightFunction::Constant(BigRational::one())
    }

    pub fn constant_int(c: i64) -> Self {
        WeightFunction::Constant(BigRational::from(BigInt::from(c)))
    }

    /// Evaluate at part n >= 1. Exact; total on its domain.
    pub fn eval(&self, n: u64) -> WeightValue {
        match self {
            WeightFunction::Constant(c) => WeightValue::rational(c.clone()),
            WeightFunction::Power(e) => {
                let base = BigInt::from(n);
                let value = if *e >= 0 {
                    BigRational::from(base.pow(*e as u32))
                } else {
                    BigRational::new(BigInt::one(), base.pow((-*e) as u32))
                };
                WeightValue::rational(value)
            }
            WeightFunction::Table(entries) => {
                for (m, v) in entries {
                    if *m == n {
                        return WeightValue::rational(v.clone());
                    }
                }
                WeightValue::rational(BigRational::zero())
            }
            WeightFunction::Restricted(inner, x) => {
                if x.contains(n) {
                    inner.eval(n)
                } else {
                    WeightValue::rational(BigRational::zero())
                }
            }
            WeightFunction::ZScaled(inner) => {
                let mut v = inner.eval(n);
                v.z_power += 1;
                v
            }
        }
    }

    /// True when eval never attaches a z marker.
    pub fn is_z_free(&self) -> bool {
        match self {
            WeightFunction::ZScaled(_) => false,
            WeightFunction::Restricted(inner, _) => inner.is_z_free(),
            _ => true,
        }
    }

    /// Magnitude envelope, used by tail bounds: either a power law valid for
    /// every part, or a promise that weights vanish beyond some point.
    pub fn envelope(&self) -> WeightEnvelope {
        match self {
            WeightFunction::Constant(c) => WeightEnvelope::PowerLaw { c: c.abs(), p: 0 },
            WeightFunction::Power(e) => WeightEnvelope::PowerLaw {
                c: BigRational::one(),
                p: *e,
            },
            WeightFunction::Table(entries) => WeightEnvelope::FiniteSupport {
                n_max: entries.iter().map(|(n, _)| *n).max().unwrap_or(0),
            },
            WeightFunction::Restricted(inner, _) => inner.envelope(),
            WeightFunction::ZScaled(inner) => inner.envelope(),
        }
    }
}

/// See [`WeightFunction::envelope`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightEnvelope {
    /// |f(n)| <= c * n^p for all n >= 1.
    PowerLaw { c: BigRational, p: i64 },
    /// f(n) = 0 for all n > n_max.
    FiniteSupport { n_max: u64 },
}

/// Product of part weights over `lambda`; 1 (empty product) for the empty
/// partition. The z powers of the parts add.
pub fn weight_product(lambda: &Partition, f: &WeightFunction) -> WeightValue {
    let mut value = BigRational::one();
    let mut z_power = 0u32;
    for &p in lambda.parts() {
        let w = f.eval(p);
        value *= w.value;
        z_power += w.z_power;
    }
    WeightValue { value, z_power }
}

// =====================================================================
// Primes and the prime-partition bijection
// =====================================================================

/// Deterministic primality by trial division; fine at desk scale.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    if n % 3 == 0 {
        return n == 3;
    }
    let mut d = 5u64;
    while d * d <= n {
        if n % d == 0 || n % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}

/// All primes <= limit, ascending (simple sieve).
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut sieve = vec![true; limit + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut p = 2usize;
    while p * p <= limit {
        if sieve[p] {
            let mut q = p * p;
            while q <= limit {
                sieve[q] = false;
                q += p;
            }
        }
        p += 1;
    }
    (2..=limit).filter(|&i| sieve[i]).map(|i| i as u64).collect()
}

/// The multiset of prime factors of `n` as a partition; `1` maps to the
/// empty partition. This inverts [`Partition::integer`] on prime partitions.
pub fn integer_to_prime_partition(n: u64) -> Result<Partition> {
    if n == 0 {
        return Err(Error::Invalid("0 has no prime factorization".into()));
    }
    let mut parts = Vec::new();
    let mut m = n;
    let mut d = 2u64;
    while d * d <= m {
        while m % d == 0 {
            parts.push(d);
            m /= d;
        }
        d += 1;
    }
    if m > 1 {
        parts.push(m);
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    Ok(Partition { parts })
}

/// Product of parts, checking that every part is prime; the inverse
/// direction of the bijection between prime partitions and integers.
pub fn prime_partition_to_integer(lambda: &Partition) -> Result<u64> {
    let mut acc: u64 = 1;
    for &p in lambda.parts() {
        if !is_prime(p) {
            return Err(Error::NoSuchPartition(format!(
                "part {p} is not prime"
            )));
        }
        acc = acc
            .checked_mul(p)
            .ok_or_else(|| Error::Invalid("product of parts overflows u64".into()))?;
    }
    Ok(acc)
}
