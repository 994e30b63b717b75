//! Arbitrary-precision numeric evaluation.
//!
//! Everything here reports results as an [`Approximation`]: a fixed-point
//! value together with a tail bound saying how far the reported partial
//! computation can sit from the true limit. Bounds are rigorous wherever a
//! convergence envelope exists (geometric or integral-comparison tails);
//! a few evaluation routes only admit empirical bounds and say so.
//!
//! - [`bigfloat`]: the fixed-point real type and its transcendental kernels
//! - [`zeta`]: Bernoulli numbers, even zeta values, real-argument zeta
//! - [`product`]: truncated infinite products over a part set, with tails
//! - [`forms`]: the five numeric evaluation routes for the product series

pub mod bigfloat;
pub mod forms;
pub mod product;
pub mod zeta;

use num_rational::BigRational;

use crate::{Error, Result};
use bigfloat::BigFloat;

/// How many decimal digits a numeric request wants, plus guard digits the
/// evaluation layer works with internally.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionContext {
    digits: u32,
    guard: u32,
}

impl PrecisionContext {
    /// `digits` is the target precision (at least 10); internal work adds
    /// `guard` extra digits on top.
    pub fn new(digits: u32, guard: u32) -> Result<Self> {
        if digits < 10 {
            return Err(Error::Invalid(format!(
                "precision must be at least 10 digits, got {digits}"
            )));
        }
        Ok(PrecisionContext { digits, guard })
    }

    pub fn with_digits(digits: u32) -> Result<Self> {
        Self::new(digits, 10)
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Scale used for intermediate arithmetic.
    pub fn working_scale(&self) -> u32 {
        self.digits + self.guard
    }

    /// 10^(-digits) at the working scale: the "done" threshold for tails.
    pub fn target_ulp(&self) -> BigFloat {
        BigFloat::ulp_pow(self.digits, self.working_scale())
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext {
            digits: 50,
            guard: 10,
        }
    }
}

/// Bound on the distance from a reported partial value to the true limit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TailBound {
    /// Proven envelope: |true - reported| <= bound.
    Rigorous(BigFloat),
    /// Size of the last computed increment; indicative only.
    Heuristic(BigFloat),
}

impl TailBound {
    pub fn bound(&self) -> &BigFloat {
        match self {
            TailBound::Rigorous(b) | TailBound::Heuristic(b) => b,
        }
    }

    pub fn is_rigorous(&self) -> bool {
        matches!(self, TailBound::Rigorous(_))
    }
}

/// A numeric result: partial value, tail bound, and how much work it took.
#[derive(Clone, Debug)]
pub struct Approximation {
    pub value: BigFloat,
    pub tail: TailBound,
    pub terms_used: u64,
}

impl Approximation {
    pub fn exact(value: BigFloat) -> Self {
        let scale = value.scale();
        Approximation {
            value,
            tail: TailBound::Rigorous(BigFloat::zero(scale)),
            terms_used: 0,
        }
    }

    /// |self - other| as a nonnegative value (scales must match).
    pub fn abs_diff(&self, other: &Approximation) -> BigFloat {
        self.value.sub(&other.value).abs()
    }

    /// JSON fragment: value to the context's digit count, the tail bound in
    /// scientific notation, and the term count.
    pub fn to_json(&self, ctx: &PrecisionContext) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        map.insert(
            "value".into(),
            serde_json::Value::String(self.value.to_decimal_string(ctx.digits())),
        );
        let (kind, bound) = match &self.tail {
            TailBound::Rigorous(b) => ("rigorous", b),
            TailBound::Heuristic(b) => ("heuristic", b),
        };
        map.insert(
            "tail_bound".into(),
            serde_json::Value::String(bound.to_sci_string(3)),
        );
        map.insert("tail_kind".into(), serde_json::Value::String(kind.into()));
        map.insert("terms_used".into(), serde_json::Value::from(self.terms_used));
        serde_json::Value::Object(map)
    }
}

/// Evaluate a rational exactly at the working scale.
pub fn rational_to_float(r: &BigRational, ctx: &PrecisionContext) -> BigFloat {
    BigFloat::from_rational(r, ctx.working_scale())
}

/// Fixed-point value with a running absolute-error envelope.
///
/// Each operation rounds to nearest and grows the envelope by generous
/// constants, so `|true - v| <= e` is preserved throughout; additions are
/// exact in fixed point and only combine envelopes.
#[derive(Clone, Debug)]
pub struct Tracked {
    pub v: BigFloat,
    pub e: BigFloat,
}

impl Tracked {
    pub fn exact(v: BigFloat) -> Self {
        let scale = v.scale();
        Tracked {
            v,
            e: BigFloat::zero(scale),
        }
    }

    pub fn from_rational(r: &BigRational, ws: u32) -> Self {
        Tracked {
            v: BigFloat::from_rational(r, ws),
            e: BigFloat::ulp_pow(ws, ws),
        }
    }

    fn ulp(&self) -> BigFloat {
        BigFloat::ulp_pow(self.v.scale(), self.v.scale())
    }

    pub fn neg(&self) -> Tracked {
        Tracked {
            v: self.v.neg(),
            e: self.e.clone(),
        }
    }

    pub fn add(&self, o: &Tracked) -> Tracked {
        Tracked {
            v: self.v.add(&o.v),
            e: self.e.add(&o.e),
        }
    }

    pub fn sub(&self, o: &Tracked) -> Tracked {
        Tracked {
            v: self.v.sub(&o.v),
            e: self.e.add(&o.e),
        }
    }

    pub fn mul(&self, o: &Tracked) -> Tracked {
        let e = self
            .e
            .mul(&o.v.abs().add(&o.e))
            .add(&o.e.mul(&self.v.abs()))
            .add(&self.ulp());
        Tracked {
            v: self.v.mul(&o.v),
            e,
        }
    }

    pub fn div(&self, o: &Tracked) -> Result<Tracked> {
        let low = o.v.abs().sub(&o.e);
        if !low.is_positive() {
            return Err(Error::Divergent(
                "division by a value not resolved away from zero".into(),
            ));
        }
        let v = self.v.div(&o.v)?;
        let u = self.ulp();
        let e = self
            .e
            .add(&v.abs().add(&u).mul(&o.e))
            .div(&low)?
            .add(&u);
        Ok(Tracked { v, e })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn context_validates_digits() {
        assert!(PrecisionContext::with_digits(9).is_err());
        let ctx = PrecisionContext::with_digits(25).unwrap();
        assert_eq!(ctx.working_scale(), 35);
        assert_eq!(PrecisionContext::default().working_scale(), 60);
    }

    #[test]
    fn approximation_json_shape()  {
        let ctx = PrecisionContext::with_digits(10).unwrap();
        let v = BigFloat::from_int(3, ctx.working_scale());
        let a = Approximation {
            value: v,
            tail: TailBound::Rigorous(BigFloat::ulp_pow(12, ctx.working_scale())),
            terms_used: 7,
        };
        let j = a.to_json(&ctx);
        assert_eq!(j["value"], "3.0000000000");
        assert_eq!(j["tail_kind"], "rigorous");
        assert_eq!(j["tail_bound"], "1.00e-12");
        assert_eq!(j["terms_used"], 7);
    }
}
