//! Textual descriptions of part sets, classes, weights, and layers.
//!
//! Grammar (all tokens case-sensitive, no whitespace):
//!
//! * part set: `all` | `finite:1,2,3` | `multiples:m` | `mod:a,m` |
//!   `geq:a` | `primes`
//! * class: part set plus `;`-joined modifiers `distinct` and `len:k`
//! * rational: `7`, `-3`, `3/10`, `-22/7`
//! * weight: `const:c` | `pow:e` | `table:n1=v1,n2=v2`, each optionally
//!   followed by `;restrict:<part set>`
//! * layer: `X=<part set>;f=<weight>;inner=+|-;exp=+1|-1` (the weight may
//!   itself carry a `;restrict:` tail)

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::etaq::ProductLayer;
use crate::partition::{PartSpec, PartitionClass, WeightFunction};
use crate::{Error, Result};

fn parse_err(what: &str, token: &str) -> Error {
    Error::Parse(format!("{what}: {token:?}"))
}

/// `7`, `-3`, `3/10`, `-22/7`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(parse_err("empty rational", s));
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| parse_err("bad numerator", num))?;
    let d: BigInt = match den {
        Some(d) => d.parse().map_err(|_| parse_err("bad denominator", d))?,
        None => BigInt::from(1),
    };
    if d.is_zero() {
        return Err(parse_err("zero denominator", s));
    }
    Ok(BigRational::new(n, d))
}

fn parse_u64(what: &str, s: &str) -> Result<u64> {
    s.parse().map_err(|_| parse_err(what, s))
}

/// One part-set token.
pub fn parse_part_set(s: &str) -> Result<PartSpec> {
    let s = s.trim();
    match s {
        "all" => return Ok(PartSpec::All),
        "primes" => return Ok(PartSpec::Primes),
        _ => {}
    }
    let Some((head, rest)) = s.split_once(':') else {
        return Err(parse_err("unknown part set", s));
    };
    match head {
        "finite" => {
            let members = rest
                .split(',')
                .map(|t| parse_u64("bad part", t))
                .collect::<Result<Vec<u64>>>()?;
            PartSpec::finite(members)
        }
        "multiples" => PartSpec::multiples(parse_u64("bad modulus", rest)?),
        "mod" => {
            let Some((a, m)) = rest.split_once(',') else {
                return Err(parse_err("mod needs a,m", s));
            };
            PartSpec::arith_prog(parse_u64("bad residue", a)?, parse_u64("bad modulus", m)?)
        }
        "geq" => PartSpec::greater_eq(parse_u64("bad lower bound", rest)?),
        _ => Err(parse_err("unknown part set", s)),
    }
}

/// Part set with `distinct` and `len:k` modifiers, `;`-separated.
pub fn parse_class(s: &str) -> Result<PartitionClass> {
    let mut pieces = s.split(';');
    let base = pieces.next().unwrap_or("");
    let mut class = PartitionClass::over(parse_part_set(base)?);
    for piece in pieces {
        let piece = piece.trim();
        if piece == "distinct" {
            class.distinct = true;
        } else if let Some(k) = piece.strip_prefix("len:") {
            class.fixed_length = Some(
                k.parse()
                    .map_err(|_| parse_err("bad length", piece))?,
            );
        } else {
            return Err(parse_err("unknown class modifier", piece));
        }
    }
    Ok(class)
}

fn parse_weight_base(s: &str) -> Result<WeightFunction> {
    let Some((head, rest)) = s.split_once(':') else {
        return Err(parse_err("unknown weight", s));
    };
    match head {
        "const" => Ok(WeightFunction::Constant(parse_rational(rest)?)),
        "pow" => Ok(WeightFunction::Power(
            rest.parse().map_err(|_| parse_err("bad exponent", rest))?,
        )),
        "table" => {
            let mut entries = Vec::new();
            for item in rest.split(',') {
                let Some((n, v)) = item.split_once('=') else {
                    return Err(parse_err("table entry needs n=v", item));
                };
                entries.push((parse_u64("bad table part", n)?, parse_rational(v)?));
            }
            Ok(WeightFunction::Table(entries))
        }
        _ => Err(parse_err("unknown weight", s)),
    }
}

/// Weight with optional `;restrict:<part set>` tails.
pub fn parse_weight(s: &str) -> Result<WeightFunction> {
    let mut pieces = s.split(';');
    let mut w = parse_weight_base(pieces.next().unwrap_or(""))?;
    for piece in pieces {
        let Some(set) = piece.strip_prefix("restrict:") else {
            return Err(parse_err("unknown weight modifier", piece));
        };
        w = WeightFunction::Restricted(Box::new(w), parse_part_set(set)?);
    }
    Ok(w)
}

/// `X=<part set>;f=<weight>;inner=+|-;exp=+1|-1`, any field order. The
/// weight's own `;restrict:` tail stays attached to the `f=` field.
pub fn parse_layer(s: &str) -> Result<ProductLayer> {
    let mut fields: Vec<(char, String)> = Vec::new();
    for piece in s.split(';') {
        if let Some(v) = piece.strip_prefix("X=") {
            fields.push(('X', v.to_string()));
        } else if let Some(v) = piece.strip_prefix("f=") {
            fields.push(('f', v.to_string()));
        } else if let Some(v) = piece.strip_prefix("inner=") {
            fields.push(('i', v.to_string()));
        } else if let Some(v) = piece.strip_prefix("exp=") {
            fields.push(('e', v.to_string()));
        } else {
            // continuation of the previous field (a weight's restrict tail)
            match fields.last_mut() {
                Some((_, v)) => {
                    v.push(';');
                    v.push_str(piece);
                }
                None => return Err(parse_err("layer field", piece)),
            }
        }
    }
    let mut parts = None;
    let mut weight = None;
    let mut inner = None;
    let mut exp = None;
    for (key, value) in &fields {
        match key {
            'X' => parts = Some(parse_part_set(value)?),
            'f' => weight = Some(parse_weight(value)?),
            'i' => {
                inner = Some(match value.as_str() {
                    "+" => 1i8,
                    "-" => -1,
                    _ => return Err(parse_err("inner sign must be + or -", value)),
                })
            }
            'e' => {
                exp = Some(match value.as_str() {
                    "+1" => 1i8,
                    "-1" => -1,
                    _ => return Err(parse_err("exponent must be +1 or -1", value)),
                })
            }
            _ => unreachable!(),
        }
    }
    let parts = parts.ok_or_else(|| parse_err("layer is missing", "X="))?;
    let weight = weight.ok_or_else(|| parse_err("layer is missing", "f="))?;
    let inner = inner.ok_or_else(|| parse_err("layer is missing", "inner="))?;
    let exp = exp.ok_or_else(|| parse_err("layer is missing", "exp="))?;
    ProductLayer::new(parts, weight, inner, exp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("7").unwrap(), BigRational::from(BigInt::from(7)));
        assert_eq!(
            parse_rational("-3/10").unwrap(),
            BigRational::new(BigInt::from(-3), BigInt::from(10))
        );
        assert_eq!(
            parse_rational(" 22/7 ").unwrap(),
            BigRational::new(BigInt::from(22), BigInt::from(7))
        );
        assert!(matches!(parse_rational(""), Err(Error::Parse(_))));
        assert!(matches!(parse_rational("1/0"), Err(Error::Parse(_))));
        assert!(matches!(parse_rational("x"), Err(Error::Parse(_))));
    }

    #[test]
    fn part_sets() {
        assert!(matches!(parse_part_set("all").unwrap(), PartSpec::All));
        assert!(matches!(parse_part_set("primes").unwrap(), PartSpec::Primes));
        let f = parse_part_set("finite:3,1,2").unwrap();
        assert_eq!(f.members_up_to(10), vec![1, 2, 3]);
        assert!(matches!(
            parse_part_set("multiples:4").unwrap(),
            PartSpec::Multiples(4)
        ));
        assert!(matches!(
            parse_part_set("mod:1,3").unwrap(),
            PartSpec::ArithProg { a: 1, m: 3 }
        ));
        assert!(matches!(
            parse_part_set("geq:5").unwrap(),
            PartSpec::GreaterEq(5)
        ));
        assert!(matches!(parse_part_set("geq:1").unwrap(), PartSpec::All));
        assert!(matches!(parse_part_set("bogus"), Err(Error::Parse(_))));
        assert!(matches!(parse_part_set("finite:0"), Err(Error::Invalid(_))));
        assert!(matches!(parse_part_set("mod:5,3"), Err(Error::Invalid(_))));
    }

    #[test]
    fn classes() {
        let c = parse_class("all;len:2").unwrap();
        assert!(!c.distinct);
        assert_eq!(c.fixed_length, Some(2));
        let c = parse_class("primes;distinct").unwrap();
        assert!(c.distinct);
        assert_eq!(c.fixed_length, None);
        assert!(matches!(parse_class("all;fancy"), Err(Error::Parse(_))));
    }

    #[test]
    fn weights() {
        let w = parse_weight("const:1/2").unwrap();
        assert_eq!(
            w.eval(9).expect_rational("t").unwrap(),
            BigRational::new(BigInt::from(1), BigInt::from(2))
        );
        let w = parse_weight("pow:-1").unwrap();
        assert_eq!(
            w.eval(4).expect_rational("t").unwrap(),
            BigRational::new(BigInt::one(), BigInt::from(4))
        );
        let w = parse_weight("table:1=1/2,3=-2").unwrap();
        assert_eq!(
            w.eval(3).expect_rational("t").unwrap(),
            BigRational::from(BigInt::from(-2))
        );
        assert!(w.eval(2).expect_rational("t").unwrap().is_zero());
        let w = parse_weight("pow:1;restrict:finite:2,3").unwrap();
        assert_eq!(
            w.eval(2).expect_rational("t").unwrap(),
            BigRational::from(BigInt::from(2))
        );
        assert!(w.eval(5).expect_rational("t").unwrap().is_zero());
        assert!(matches!(parse_weight("exp:3"), Err(Error::Parse(_))));
        assert!(matches!(parse_weight("pow:1;scale:2"), Err(Error::Parse(_))));
    }

    #[test]
    fn layers() {
        let l = parse_layer("X=finite:1,2;f=const:1;inner=-;exp=-1").unwrap();
        assert_eq!(l.inner_sign, -1);
        assert_eq!(l.outer_exp, -1);
        let l = parse_layer("X=all;f=pow:1;restrict:finite:2,3;inner=+;exp=+1").unwrap();
        assert_eq!(l.inner_sign, 1);
        assert!(l
            .weight
            .eval(5)
            .expect_rational("t")
            .unwrap()
            .is_zero());
        assert!(matches!(
            parse_layer("f=const:1;inner=-;exp=-1"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_layer("X=all;f=const:1;inner=*;exp=-1"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_layer("X=all;f=const:1;inner=-;exp=2"),
            Err(Error::Parse(_))
        ));
    }
}
