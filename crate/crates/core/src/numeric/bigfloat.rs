//! Fixed-point arbitrary-precision reals: value = mantissa * 10^(-scale).
//!
//! The mantissa is an unbounded integer, so magnitude is never limited; the
//! scale fixes absolute resolution. Multiplication and division round to
//! nearest at the operand scale (ties away from zero), so each operation
//! contributes at most one unit in the last place of absolute error.
//! Transcendental kernels run at an enlarged internal scale and round back,
//! keeping their results well within one ulp of the target scale.
//!
//! Only what the evaluation layer needs is implemented: field operations,
//! integer powers, square root, pi (Machin's arctangent formula), exp, ln,
//! sin, cos, sinh, cosh, and rational powers via exp(s ln n).

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Extra decimal digits used inside transcendental kernels.
const KERNEL_GUARD: u32 = 12;

/// Fixed-point real number at a given decimal scale.
#[derive(Clone, PartialEq, Eq)]
pub struct BigFloat {
    mant: BigInt,
    scale: u32,
}

fn pow10(e: u32) -> BigInt {
    BigInt::from(10u32).pow(e)
}

/// Nearest integer to num/den, ties away from zero. `den` must be positive.
fn div_round(num: &BigInt, den: &BigInt) -> BigInt {
    debug_assert!(den.is_positive());
    let q = num / den;
    let r = num % den;
    if (r.abs() << 1u32) >= *den {
        if num.is_negative() {
            q - 1
        } else {
            q + 1
        }
    } else {
        q
    }
}

impl BigFloat {
    pub fn zero(scale: u32) -> Self {
        BigFloat {
            mant: BigInt::zero(),
            scale,
        }
    }

    pub fn one(scale: u32) -> Self {
        BigFloat {
            mant: pow10(scale),
            scale,
        }
    }

    pub fn from_int(n: i64, scale: u32) -> Self {
        BigFloat {
            mant: BigInt::from(n) * pow10(scale),
            scale,
        }
    }

    pub fn from_bigint(n: &BigInt, scale: u32) -> Self {
        BigFloat {
            mant: n * pow10(scale),
            scale,
        }
    }

    pub fn from_rational(r: &BigRational, scale: u32) -> Self {
        let num = r.numer() * pow10(scale);
        let den = r.denom().clone();
        debug_assert!(den.is_positive());
        BigFloat {
            mant: div_round(&num, &den),
            scale,
        }
    }

    /// Raw constructor: value = mant * 10^(-scale).
    pub fn from_mantissa(mant: BigInt, scale: u32) -> Self {
        BigFloat { mant, scale }
    }

    /// 10^(-k) at this scale: the unit of absolute error bookkeeping.
    pub fn ulp_pow(k: u32, scale: u32) -> Self {
        debug_assert!(k <= scale);
        BigFloat {
            mant: pow10(scale - k),
            scale,
        }
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn abs(&self) -> Self {
        BigFloat {
            mant: self.mant.abs(),
            scale: self.scale,
        }
    }

    pub fn neg(&self) -> Self {
        BigFloat {
            mant: -&self.mant,
            scale: self.scale,
        }
    }

    fn assert_same_scale(&self, other: &Self) {
        assert_eq!(self.scale, other.scale, "mixed BigFloat scales");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_same_scale(other);
        BigFloat {
            mant: &self.mant + &other.mant,
            scale: self.scale,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.assert_same_scale(other);
        BigFloat {
            mant: &self.mant - &other.mant,
            scale: self.scale,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_same_scale(other);
        BigFloat {
            mant: div_round(&(&self.mant * &other.mant), &pow10(self.scale)),
            scale: self.scale,
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.assert_same_scale(other);
        if other.mant.is_zero() {
            return Err(Error::Domain("division by zero".into()));
        }
        let num = &self.mant * pow10(self.scale);
        let (num, den) = if other.mant.is_negative() {
            (-num, -other.mant.clone())
        } else {
            (num, other.mant.clone())
        };
        Ok(BigFloat {
            mant: div_round(&num, &den),
            scale: self.scale,
        })
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        BigFloat {
            mant: &self.mant * BigInt::from(k),
            scale: self.scale,
        }
    }

    pub fn div_u64(&self, k: u64) -> Self {
        BigFloat {
            mant: div_round(&self.mant, &BigInt::from(k)),
            scale: self.scale,
        }
    }

    /// Integer power by repeated squaring.
    pub fn powi(&self, e: u32) -> Self {
        let mut result = BigFloat::one(self.scale);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        result
    }

    /// Rescale (rounding when the new scale is coarser).
    pub fn with_scale(&self, scale: u32) -> Self {
        match scale.cmp(&self.scale) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => BigFloat {
                mant: &self.mant * pow10(scale - self.scale),
                scale,
            },
            Ordering::Less => BigFloat {
                mant: div_round(&self.mant, &pow10(self.scale - scale)),
                scale,
            },
        }
    }

    pub fn cmp_abs(&self, other: &Self) -> Ordering {
        self.assert_same_scale(other);
        self.mant.abs().cmp(&other.mant.abs())
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.mant.clone(), pow10(self.scale))
    }

    pub fn to_f64(&self) -> f64 {
        self.to_rational().to_f64().unwrap_or(f64::NAN)
    }

    /// Plain decimal string with exactly `frac` digits after the point,
    /// rounded at the last digit. Deterministic.
    pub fn to_decimal_string(&self, frac: u32) -> String {
        let shown = self.with_scale(frac);
        let neg = shown.mant.is_negative();
        let abs = shown.mant.abs();
        let s = abs.to_string();
        let (int_part, frac_part) = if frac == 0 {
            (s, String::new())
        } else if s.len() > frac as usize {
            let split = s.len() - frac as usize;
            (s[..split].to_string(), s[split..].to_string())
        } else {
            ("0".to_string(), format!("{:0>width$}", s, width = frac as usize))
        };
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        out.push_str(&int_part);
        if frac > 0 {
            out.push('.');
            out.push_str(&frac_part);
        }
        out
    }

    /// Scientific string with `sig` significant digits: "d.ddde-12".
    /// Deterministic; zero prints as "0".
    pub fn to_sci_string(&self, sig: u32) -> String {
        if self.mant.is_zero() {
            return "0".to_string();
        }
        let sig = sig.max(1) as usize;
        let neg = self.mant.is_negative();
        let mut ds = self.mant.abs().to_string().into_bytes();
        // value = 0.d1 d2 ... * 10^(exp10 + 1)
        let mut exp10 = ds.len() as i64 - self.scale as i64 - 1;
        if ds.len() > sig {
            let round_up = ds[sig] >= b'5';
            ds.truncate(sig);
            if round_up {
                let mut i = sig;
                loop {
                    if i == 0 {
                        // carry ran off the front: 999 -> 1000
                        ds.insert(0, b'1');
                        ds.truncate(sig);
                        exp10 += 1;
                        break;
                    }
                    i -= 1;
                    if ds[i] == b'9' {
                        ds[i] = b'0';
                    } else {
                        ds[i] += 1;
                        break;
                    }
                }
            }
        } else {
            ds.resize(sig, b'0');
        }
        let digits = String::from_utf8(ds).unwrap();
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        out.push_str(&digits[..1]);
        if digits.len() > 1 {
            out.push('.');
            out.push_str(&digits[1..]);
        }
        out.push('e');
        out.push_str(&exp10.to_string());
        out
    }

    // =================================================================
    // Algebraic functions
    // =================================================================

    /// Square root by integer Newton iteration; errors on negatives.
    pub fn sqrt(&self) -> Result<Self> {
        if self.mant.is_negative() {
            return Err(Error::Domain("sqrt of negative".into()));
        }
        if self.mant.is_zero() {
            return Ok(self.clone());
        }
        let target = &self.mant * pow10(self.scale);
        Ok(BigFloat {
            mant: isqrt(&target),
            scale: self.scale,
        })
    }

    // =================================================================
    // Transcendental functions
    // =================================================================

    /// pi at the given scale.
    pub fn pi(scale: u32) -> Self {
        let ws = scale + KERNEL_GUARD;
        // Machin: pi = 16 atan(1/5) - 4 atan(1/239).
        let a = atan_recip_mant(5, ws);
        let b = atan_recip_mant(239, ws);
        let pi = BigFloat {
            mant: a * 16 - b * 4,
            scale: ws,
        };
        pi.with_scale(scale)
    }

    /// ln 2 via 2 atanh(1/3).
    pub fn ln2(scale: u32) -> Self {
        let ws = scale + KERNEL_GUARD;
        BigFloat {
            mant: atanh_recip_mant(3, ws) * 2,
            scale: ws,
        }
        .with_scale(scale)
    }

    /// e^x. Argument reduction by powers of two, then the Taylor series on
    /// |r| <= ln2/2; the series remainder is below the working resolution.
    pub fn exp(&self) -> Self {
        let scale = self.scale;
        let ws = scale + KERNEL_GUARD;
        let x = self.with_scale(ws);
        if x.mant.is_zero() {
            return BigFloat::one(scale);
        }
        let ln2 = BigFloat::ln2(ws);
        // k = round(x / ln2)
        let k_f = x.div(&ln2).expect("ln2 != 0");
        let k = div_round(&k_f.mant, &pow10(ws))
            .to_i64()
            .expect("exp argument out of range");
        let r = x.sub(&ln2.mul_i64(k));
        // Taylor on r
        let mut term = BigFloat::one(ws);
        let mut sum = BigFloat::one(ws);
        let mut n = 1u64;
        loop {
            term = term.mul(&r).div_u64(n);
            if term.mant.is_zero() {
                break;
            }
            sum = sum.add(&term);
            n += 1;
            if n > 10_000 {
                panic!("exp series failed to converge");
            }
        }
        // scale by 2^k
        let result = if k >= 0 {
            BigFloat {
                mant: sum.mant << (k as u32),
                scale: ws,
            }
        } else {
            BigFloat {
                mant: div_round(&sum.mant, &(BigInt::one() << ((-k) as u32))),
                scale: ws,
            }
        };
        result.with_scale(scale)
    }

    /// Natural log; domain x > 0. Normalizes into [1, 2) by powers of two,
    /// then ln m = 2 atanh((m-1)/(m+1)) with |y| < 1/3.
    pub fn ln(&self) -> Result<Self> {
        if !self.mant.is_positive() {
            return Err(Error::Domain("ln of non-positive value".into()));
        }
        let scale = self.scale;
        let ws = scale + KERNEL_GUARD;
        let mut m = self.with_scale(ws);
        let one = BigFloat::one(ws);
        let two = BigFloat::from_int(2, ws);
        let mut k: i64 = 0;
        while m.cmp_abs(&two) != Ordering::Less {
            m = BigFloat {
                mant: div_round(&m.mant, &BigInt::from(2)),
                scale: ws,
            };
            k += 1;
        }
        while m.cmp_abs(&one) == Ordering::Less {
            m = BigFloat {
                mant: &m.mant << 1,
                scale: ws,
            };
            k -= 1;
        }
        // y = (m-1)/(m+1) in [0, 1/3)
        let y = m.sub(&one).div(&m.add(&one))?;
        let y2 = y.mul(&y);
        let mut term = y.clone();
        let mut sum = BigFloat::zero(ws);
        let mut n = 0u64;
        loop {
            let add = term.div_u64(2 * n + 1);
            if add.mant.is_zero() {
                break;
            }
            sum = sum.add(&add);
            term = term.mul(&y2);
            n += 1;
            if n > 100_000 {
                panic!("ln series failed to converge");
            }
        }
        let ln_m = sum.mul_i64(2);
        let result = BigFloat::ln2(ws).mul_i64(k).add(&ln_m);
        Ok(result.with_scale(scale))
    }

    /// x^s for real s via exp(s ln x); domain x > 0.
    pub fn pow(&self, s: &Self) -> Result<Self> {
        Ok(self.ln()?.mul(s).exp())
    }

    /// sin x by direct Taylor; callers keep |x| modest (below ~2 pi), where
    /// the series converges fast and peak terms cost only a few digits.
    pub fn sin(&self) -> Self {
        self.circular(true)
    }

    /// cos x by direct Taylor.
    pub fn cos(&self) -> Self {
        self.circular(false)
    }

    fn circular(&self, odd: bool) -> Self {
        let scale = self.scale;
        let ws = scale + KERNEL_GUARD;
        let x = self.with_scale(ws);
        let x2 = x.mul(&x).neg();
        let mut term = if odd { x.clone() } else { BigFloat::one(ws) };
        let mut sum = term.clone();
        let mut n = 1u64;
        loop {
            let (d1, d2) = if odd { (2 * n, 2 * n + 1) } else { (2 * n - 1, 2 * n) };
            term = term.mul(&x2).div_u64(d1).div_u64(d2);
            if term.mant.is_zero() {
                break;
            }
            sum = sum.add(&term);
            n += 1;
            if n > 10_000 {
                panic!("sin/cos series failed to converge");
            }
        }
        sum.with_scale(scale)
    }

    /// sinh x by direct Taylor (all-positive terms).
    pub fn sinh(&self) -> Self {
        self.hyperbolic(true)
    }

    /// cosh x by direct Taylor.
    pub fn cosh(&self) -> Self {
        self.hyperbolic(false)
    }

    fn hyperbolic(&self, odd: bool) -> Self {
        let scale = self.scale;
        let ws = scale + KERNEL_GUARD;
        let x = self.with_scale(ws);
        let x2 = x.mul(&x);
        let mut term = if odd { x.clone() } else { BigFloat::one(ws) };
        let mut sum = term.clone();
        let mut n = 1u64;
        loop {
            let (d1, d2) = if odd { (2 * n, 2 * n + 1) } else { (2 * n - 1, 2 * n) };
            term = term.mul(&x2).div_u64(d1).div_u64(d2);
            if term.mant.is_zero() {
                break;
            }
            sum = sum.add(&term);
            n += 1;
            if n > 10_000 {
                panic!("sinh/cosh series failed to converge");
            }
        }
        sum.with_scale(scale)
    }
}

impl fmt::Debug for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.to_decimal_string(self.scale.min(30)), self.scale)
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BigFloat {
    fn cmp(&self, other: &Self) -> Ordering {
        self.assert_same_scale(other);
        self.mant.cmp(&other.mant)
    }
}

/// Integer square root, rounded to nearest (via isqrt of 4n then halving).
fn isqrt(n: &BigInt) -> BigInt {
    // floor sqrt of 4n, then (s+1)/2 rounds to nearest integer sqrt of n
    let four_n = n << 2u32;
    let s = isqrt_floor(&four_n);
    (s + 1) >> 1
}

fn isqrt_floor(n: &BigInt) -> BigInt {
    if n.is_zero() {
        return BigInt::zero();
    }
    let bits = n.bits();
    let mut x: BigInt = BigInt::one() << ((bits / 2) + 1) as u32;
    loop {
        let y = (&x + n / &x) >> 1;
        if y >= x {
            return x;
        }
        x = y;
    }
}

/// Mantissa of atan(1/x) at the given scale (x >= 2), by the alternating
/// reciprocal-power series with pure integer arithmetic.
fn atan_recip_mant(x: u64, scale: u32) -> BigInt {
    let x2 = BigInt::from(x) * BigInt::from(x);
    let mut u = pow10(scale) / BigInt::from(x);
    let mut total = BigInt::zero();
    let mut k = 0u64;
    loop {
        let term = &u / BigInt::from(2 * k + 1);
        if term.is_zero() {
            break;
        }
        if k % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
        u /= &x2;
        k += 1;
    }
    total
}

/// Mantissa of atanh(1/x) at the given scale (x >= 2).
fn atanh_recip_mant(x: u64, scale: u32) -> BigInt {
    let x2 = BigInt::from(x) * BigInt::from(x);
    let mut u = pow10(scale) / BigInt::from(x);
    let mut total = BigInt::zero();
    let mut k = 0u64;
    loop {
        let term = &u / BigInt::from(2 * k + 1);
        if term.is_zero() {
            break;
        }
        total += term;
        u /= &x2;
        k += 1;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    const S: u32 = 60;

    fn close(a: &BigFloat, b: &BigFloat, ulps: i64) {
        let diff = a.sub(b).abs();
        let tol = BigFloat {
            mant: BigInt::from(ulps),
            scale: a.scale(),
        };
        assert!(
            diff.cmp_abs(&tol) != Ordering::Greater,
            "difference {} exceeds {} ulps",
            diff.to_sci_string(3),
            ulps
        );
    }

    #[test]
    fn pi_digits() {
        let pi = BigFloat::pi(S);
        // digit 51 onward is 058..., so the 50th digit rounds 0 -> 1
        assert_eq!(
            pi.to_decimal_string(50),
            "3.14159265358979323846264338327950288419716939937511",
        );
    }

    #[test]
    fn pi_two_machin_routes_agree() {
        // pi/4 = atan(1/2) + atan(1/3) is an independent arctangent identity.
        let ws = S + KERNEL_GUARD;
        let alt = BigFloat {
            mant: (atan_recip_mant(2, ws) + atan_recip_mant(3, ws)) * 4,
            scale: ws,
        }
        .with_scale(S);
        close(&BigFloat::pi(S), &alt, 4);
    }

    #[test]
    fn exp_and_ln_roundtrip() {
        let x = BigFloat::from_rational(&BigRational::new(37.into(), 11.into()), S);
        let e = x.exp();
        let back = e.ln().unwrap();
        close(&back, &x, 8);
        let one = BigFloat::one(S);
        close(&x.exp().mul(&x.neg().exp()), &one, 8);
    }

    #[test]
    fn e_digits() {
        let e = BigFloat::one(S).exp();
        // continuation is ...35266, so the 30th digit rounds 2 -> 3
        assert_eq!(
            e.to_decimal_string(30),
            "2.718281828459045235360287471353"
        );
    }

    #[test]
    fn ln2_digits() {
        let l = BigFloat::ln2(S);
        assert!(l
            .to_decimal_string(30)
            .starts_with("0.693147180559945309417232121458"));
        // exp(ln 2) = 2
        close(&l.exp(), &BigFloat::from_int(2, S), 8);
    }

    #[test]
    fn trig_pythagoras_and_special_values() {
        let pi = BigFloat::pi(S);
        let x = BigFloat::from_rational(&BigRational::new(7.into(), 5.into()), S);
        let s = x.sin();
        let c = x.cos();
        close(&s.mul(&s).add(&c.mul(&c)), &BigFloat::one(S), 8);
        // sin(pi/6) = 1/2
        let half = BigFloat::from_rational(&BigRational::new(1.into(), 2.into()), S);
        close(&pi.div_u64(6).sin(), &half, 8);
        // cos(pi/3) = 1/2
        close(&pi.div_u64(3).cos(), &half, 8);
        // sin(pi) = 0
        let sp = pi.sin().abs();
        assert!(sp.cmp_abs(&BigFloat { mant: BigInt::from(10), scale: S }) != Ordering::Greater);
    }

    #[test]
    fn hyperbolic_identities() {
        let x = BigFloat::from_rational(&BigRational::new(27.into(), 10.into()), S);
        let sh = x.sinh();
        let ch = x.cosh();
        // cosh^2 - sinh^2 = 1
        close(&ch.mul(&ch).sub(&sh.mul(&sh)), &BigFloat::one(S), 8);
        // against the exponential definition
        let ex = x.exp();
        let emx = x.neg().exp();
        close(&ex.sub(&emx).div_u64(2), &sh, 8);
        close(&ex.add(&emx).div_u64(2), &ch, 8);
    }

    #[test]
    fn sqrt_squares_back() {
        let two = BigFloat::from_int(2, S);
        let r = two.sqrt().unwrap();
        assert!(r
            .to_decimal_string(50)
            .starts_with("1.4142135623730950488016887242096980785696718753769"));
        close(&r.mul(&r), &two, 8);
        assert!(BigFloat::from_int(-1, S).sqrt().is_err());
    }

    #[test]
    fn pow_matches_integer_powers() {
        // exp(s ln x) amplifies the ulp-level ln error by roughly |s| * x^s,
        // so the absolute tolerance scales with the result magnitude.
        let three = BigFloat::from_int(3, S);
        let seven = BigFloat::from_int(7, S);
        let p = three.pow(&seven).unwrap();
        close(&p, &BigFloat::from_int(2187, S), 7 * 2187 * 4);
        // fractional: 4^(1/2) = 2
        let half = BigFloat::from_rational(&BigRational::new(1.into(), 2.into()), S);
        close(
            &BigFloat::from_int(4, S).pow(&half).unwrap(),
            &BigFloat::from_int(2, S),
            32,
        );
    }

    #[test]
    fn decimal_and_sci_strings() {
        let x = BigFloat::from_rational(&BigRational::new((-1234567).into(), 100000.into()), S);
        assert_eq!(x.to_decimal_string(3), "-12.346");
        assert_eq!(x.to_decimal_string(7), "-12.3456700");
        assert_eq!(x.to_sci_string(4), "-1.235e1");
        let tiny = BigFloat::from_rational(&BigRational::new(3.into(), 1_000_000_000i64.into()), S);
        assert_eq!(tiny.to_sci_string(2), "3.0e-9");
        assert_eq!(BigFloat::zero(S).to_sci_string(5), "0");
    }

    #[test]
    fn rounding_is_nearest() {
        let r = BigRational::new(15.into(), 1000.into()); // 0.015
        let x = BigFloat::from_rational(&r, 2);
        assert_eq!(x.to_decimal_string(2), "0.02");
        let r = BigRational::new((-15).into(), 1000.into());
        let x = BigFloat::from_rational(&r, 2);
        assert_eq!(x.to_decimal_string(2), "-0.02");
        let r = BigRational::new(14.into(), 1000.into());
        let x = BigFloat::from_rational(&r, 2);
        assert_eq!(x.to_decimal_string(2), "0.01");
    }

    #[test]
    fn large_magnitude_retains_relative_accuracy() {
        // mul then div of a 10^30-sized value must come back sub-ulp exact
        let big = BigFloat::from_bigint(&pow10(30), S);
        let r = big.mul(&big).div(&big).unwrap();
        close(&r, &big, 2);
    }
}
