//! Coefficients of finite double products ("generalized eta quotients"):
//! products of layers prod_{k in X_j} (1 + s_j f_j(k) q^k)^(e_j) with
//! s_j, e_j in {+1, -1}, expanded two independent ways.
//!
//! `coeffs_nested` walks partitions: each layer contributes bracket values
//! B_j(m), a weighted count of the partitions of m drawn from the layer's
//! class, and the product coefficient c_k is the nested sum of bracket
//! products over all splittings of k. `coeffs_direct` never sees a
//! partition: it multiplies the sparse factors in the truncated series
//! ring. The two must agree coefficient for coefficient, exactly.
//!
//! Sign table (inner sign s, outer exponent e) -> (class, weight):
//!
//! * (-, -1): with multiplicity over X, weight prod f(part)
//! * (+, +1): distinct parts, weight prod f(part)
//! * (-, +1): distinct parts, weight prod of -f(part)
//! * (+, -1): with multiplicity, weight prod of -f(part)
//!
//! The first two are the defining product expansions; the mixed rows
//! follow by substituting -f for f, which flips the inner sign without
//! touching the exponent. In short: the class tracks the exponent, and
//! the weight picks up (-1)^length exactly when the signs differ.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::partition::{enumerate, PartSpec, PartitionClass, WeightFunction};
use crate::series::{CoeffRing, QRing, QSeries, TruncatedSeries};
use crate::{Error, Result};

/// One factor group prod_{k in X} (1 + sign * f(k) q^k)^(exp).
#[derive(Clone, Debug)]
pub struct ProductLayer {
    pub parts: PartSpec,
    pub weight: WeightFunction,
    pub inner_sign: i8,
    pub outer_exp: i8,
}

impl ProductLayer {
    pub fn new(
        parts: PartSpec,
        weight: WeightFunction,
        inner_sign: i8,
        outer_exp: i8,
    ) -> Result<Self> {
        if inner_sign.abs() != 1 || outer_exp.abs() != 1 {
            return Err(Error::Invalid(
                "layer signs must be +1 or -1".into(),
            ));
        }
        if !weight.is_z_free() {
            return Err(Error::InexactWeight(
                "eta quotient layers need plain rational weights".into(),
            ));
        }
        Ok(ProductLayer {
            parts,
            weight,
            inner_sign,
            outer_exp,
        })
    }

    /// prod (1 + f(k) q^k): the distinct-part expansion.
    pub fn numerator(parts: PartSpec, weight: WeightFunction) -> Result<Self> {
        ProductLayer::new(parts, weight, 1, 1)
    }

    /// prod (1 - f(k) q^k)^(-1): the with-multiplicity expansion.
    pub fn denominator(parts: PartSpec, weight: WeightFunction) -> Result<Self> {
        ProductLayer::new(parts, weight, -1, -1)
    }

    /// Same factors with the opposite exponent; cancels `self` exactly.
    pub fn inverse(&self) -> Self {
        ProductLayer {
            parts: self.parts.clone(),
            weight: self.weight.clone(),
            inner_sign: self.inner_sign,
            outer_exp: -self.outer_exp,
        }
    }

    fn class(&self) -> PartitionClass {
        if self.outer_exp == 1 {
            PartitionClass::distinct_over(self.parts.clone())
        } else {
            PartitionClass::over(self.parts.clone())
        }
    }

    /// Weight sign differs from the canonical expansion: (-1)^length.
    fn flips(&self) -> bool {
        self.inner_sign != self.outer_exp
    }
}

/// An ordered product of layers, expanded to a fixed order.
#[derive(Clone, Debug)]
pub struct QuotientSpec {
    pub layers: Vec<ProductLayer>,
    pub order: usize,
}

impl QuotientSpec {
    pub fn new(layers: Vec<ProductLayer>, order: usize) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::Invalid("quotient needs at least one layer".into()));
        }
        Ok(QuotientSpec { layers, order })
    }
}

/// Bracket values B(0..=order) of one layer: B(m) sums the weight product
/// over the partitions of m from the layer's class, with the sign flip
/// applied per length where the table calls for it.
fn bracket_table(layer: &ProductLayer, order: usize) -> Result<Vec<BigRational>> {
    let class = layer.class();
    let flip = layer.flips();
    let mut out = Vec::with_capacity(order + 1);
    for m in 0..=order as u64 {
        let mut acc = BigRational::zero();
        for lambda in enumerate(m, &class) {
            let mut w = BigRational::one();
            for &p in lambda.parts() {
                w *= layer
                    .weight
                    .eval(p)
                    .expect_rational("eta quotient bracket weight")?;
            }
            if flip && lambda.parts().len() % 2 == 1 {
                w = -w;
            }
            acc += w;
        }
        out.push(acc);
    }
    Ok(out)
}

/// Coefficients by the nested combinatorial sum: with brackets B_j as
/// above, c_k = sum over k >= k_2 >= ... >= k_n >= 0 of
/// B_1(k - k_2) B_2(k_2 - k_3) ... B_n(k_n). Brackets are tabulated once
/// per layer and the nest collapses innermost first, so the whole
/// evaluation costs O(layers * order^2) bracket lookups.
pub fn coeffs_nested(spec: &QuotientSpec) -> Result<QSeries> {
    let n = spec.order;
    let tables: Vec<Vec<BigRational>> = spec
        .layers
        .iter()
        .map(|l| bracket_table(l, n))
        .collect::<Result<_>>()?;
    let mut inner = tables[tables.len() - 1].clone();
    for table in tables.iter().rev().skip(1) {
        let mut next = vec![BigRational::zero(); n + 1];
        for (m, slot) in next.iter_mut().enumerate() {
            let mut acc = BigRational::zero();
            for t in 0..=m {
                acc += &table[m - t] * &inner[t];
            }
            *slot = acc;
        }
        inner = next;
    }
    TruncatedSeries::from_coeffs(QRing, inner)
}

/// The same coefficients by plain series arithmetic: each layer is the
/// product of its sparse factors (reciprocated when the exponent is -1),
/// and the layers multiply out in the truncated ring. Independent of the
/// partition walk; serves as the oracle for `coeffs_nested`.
pub fn coeffs_direct(spec: &QuotientSpec) -> Result<QSeries> {
    let ring = QRing;
    let mut acc = TruncatedSeries::one(ring, spec.order);
    for layer in &spec.layers {
        let mut base = TruncatedSeries::one(ring, spec.order);
        for k in layer.parts.members_up_to(spec.order as u64) {
            let w = ring.weight(&layer.weight, k)?;
            let c = if layer.inner_sign == 1 { w } else { -w };
            base.mul_sparse_factor(&c, k as usize);
        }
        if layer.outer_exp == -1 {
            base = base.reciprocal()?;
        }
        acc = acc.mul(&base)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::{count, partition_counts_pentagonal};
    use crate::series::phi_series;
    use num_bigint::{BigInt, BigUint};

    fn rat(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    fn set(members: &[u64]) -> PartSpec {
        PartSpec::finite(members.iter().copied()).unwrap()
    }

    fn assert_same(a: &QSeries, b: &QSeries) {
        assert_eq!(a.coeffs(), b.coeffs());
    }

    #[test]
    fn geometric_series_from_one_part() {
        let spec = QuotientSpec::new(
            vec![ProductLayer::denominator(set(&[1]), WeightFunction::one()).unwrap()],
            12,
        )
        .unwrap();
        let nested = coeffs_nested(&spec).unwrap();
        for k in 0..=12 {
            assert_eq!(nested.coeff(k), &BigRational::one());
        }
        assert_same(&nested, &coeffs_direct(&spec).unwrap());
    }

    #[test]
    fn numerator_times_geometric() {
        // (1 + q) / (1 - q) = 1 + 2q + 2q^2 + ...
        let spec = QuotientSpec::new(
            vec![
                ProductLayer::numerator(set(&[1]), WeightFunction::one()).unwrap(),
                ProductLayer::denominator(set(&[1]), WeightFunction::one()).unwrap(),
            ],
            10,
        )
        .unwrap();
        let nested = coeffs_nested(&spec).unwrap();
        assert_eq!(nested.coeff(0), &BigRational::one());
        for k in 1..=10 {
            assert_eq!(nested.coeff(k), &rat(2), "k = {k}");
        }
        assert_same(&nested, &coeffs_direct(&spec).unwrap());
    }

    #[test]
    fn full_denominator_counts_partitions() {
        let spec = QuotientSpec::new(
            vec![ProductLayer::denominator(PartSpec::All, WeightFunction::one()).unwrap()],
            10,
        )
        .unwrap();
        let nested = coeffs_nested(&spec).unwrap();
        let table = partition_counts_pentagonal(10);
        for k in 0..=10usize {
            let want = BigRational::from(BigInt::from(table[k].clone()));
            assert_eq!(nested.coeff(k), &want, "p({k})");
        }
        assert_same(&nested, &coeffs_direct(&spec).unwrap());
    }

    #[test]
    fn full_numerator_counts_distinct_partitions() {
        let spec = QuotientSpec::new(
            vec![ProductLayer::numerator(PartSpec::All, WeightFunction::one()).unwrap()],
            12,
        )
        .unwrap();
        let nested = coeffs_nested(&spec).unwrap();
        let class = PartitionClass::distinct_over(PartSpec::All);
        for k in 0..=12u64 {
            let c: BigUint = count(k, &class);
            let want = BigRational::from(BigInt::from(c));
            assert_eq!(nested.coeff(k as usize), &want, "q({k})");
        }
        assert_same(&nested, &coeffs_direct(&spec).unwrap());
    }

    #[test]
    fn flipped_numerator_is_the_euler_product() {
        // inner -, exp +1 over all parts: prod (1 - q^k)
        let spec = QuotientSpec::new(
            vec![ProductLayer::new(PartSpec::All, WeightFunction::one(), -1, 1).unwrap()],
            16,
        )
        .unwrap();
        let nested = coeffs_nested(&spec).unwrap();
        let phi = phi_series(&QRing, &WeightFunction::one(), 16).unwrap();
        assert_same(&nested, &phi);
        assert_same(&nested, &coeffs_direct(&spec).unwrap());
    }

    #[test]
    fn weighted_bracket_values() {
        // 1/((1 - 2 q^2)(1 - 3 q^3)): coefficient of q^6 is 2^3 + 3^2
        let spec = QuotientSpec::new(
            vec![ProductLayer::denominator(set(&[2, 3]), WeightFunction::Power(1)).unwrap()],
            6,
        )
        .unwrap();
        let nested = coeffs_nested(&spec).unwrap();
        assert_eq!(nested.coeff(6), &rat(17));
        assert_eq!(nested.coeff(5), &rat(6)); // 2 * 3
        assert_same(&nested, &coeffs_direct(&spec).unwrap());
    }

    #[test]
    fn inverse_layer_cancels() {
        for (inner, outer) in [(1i8, 1i8), (-1, -1), (-1, 1), (1, -1)] {
            let layer =
                ProductLayer::new(set(&[1, 3, 4]), WeightFunction::Power(1), inner, outer)
                    .unwrap();
            let spec =
                QuotientSpec::new(vec![layer.inverse(), layer], 14).unwrap();
            let got = coeffs_nested(&spec).unwrap();
            let unit = TruncatedSeries::one(QRing, 14);
            assert_same(&got, &unit);
        }
    }

    #[test]
    fn layer_order_does_not_matter() {
        let a = ProductLayer::numerator(set(&[1, 2]), WeightFunction::constant_int(2)).unwrap();
        let b = ProductLayer::denominator(set(&[2, 5]), WeightFunction::Power(-1)).unwrap();
        let c = ProductLayer::new(set(&[3]), WeightFunction::one(), 1, -1).unwrap();
        let fwd = QuotientSpec::new(vec![a.clone(), b.clone(), c.clone()], 12).unwrap();
        let rev = QuotientSpec::new(vec![c, a, b], 12).unwrap();
        assert_same(&coeffs_nested(&fwd).unwrap(), &coeffs_nested(&rev).unwrap());
        assert_same(&coeffs_direct(&fwd).unwrap(), &coeffs_direct(&rev).unwrap());
    }

    #[test]
    fn zero_weight_layer_is_the_identity() {
        let spec = QuotientSpec::new(
            vec![ProductLayer::new(set(&[1, 2, 3]), WeightFunction::constant_int(0), -1, -1)
                .unwrap()],
            8,
        )
        .unwrap();
        let unit = TruncatedSeries::one(QRing, 8);
        assert_same(&coeffs_nested(&spec).unwrap(), &unit);
        assert_same(&coeffs_direct(&spec).unwrap(), &unit);
    }

    #[test]
    fn construction_guards() {
        assert!(matches!(
            ProductLayer::new(set(&[1]), WeightFunction::one(), 0, 1),
            Err(Error::Invalid(_))
        ));
        let z = WeightFunction::ZScaled(Box::new(WeightFunction::one()));
        assert!(matches!(
            ProductLayer::new(set(&[1]), z, 1, 1),
            Err(Error::InexactWeight(_))
        ));
        assert!(matches!(
            QuotientSpec::new(vec![], 5),
            Err(Error::Invalid(_))
        ));
    }

    #[test]
    fn randomized_specs_agree_across_paths() {
        // deterministic linear congruential stream
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            state >> 33
        };
        for trial in 0..50 {
            let n_layers = 1 + (next() % 3) as usize;
            let mut layers = Vec::with_capacity(n_layers);
            for _ in 0..n_layers {
                let mask = (next() % 1023) as u16;
                let members: Vec<u64> = (1..=10u64).filter(|k| mask >> (k - 1) & 1 == 1).collect();
                let parts = if members.is_empty() {
                    set(&[1])
                } else {
                    PartSpec::finite(members).unwrap()
                };
                let weight = match next() % 3 {
                    0 => WeightFunction::constant_int((next() % 5) as i64 - 2),
                    1 => WeightFunction::Power((next() % 4) as i64 - 1),
                    _ => WeightFunction::Table(
                        (1..=10)
                            .map(|k| (k, rat((next() % 7) as i64 - 3)))
                            .collect(),
                    ),
                };
                let inner = if next() % 2 == 0 { 1 } else { -1 };
                let outer = if next() % 2 == 0 { 1 } else { -1 };
                layers.push(ProductLayer::new(parts, weight, inner, outer).unwrap());
            }
            let spec = QuotientSpec::new(layers, 15).unwrap();
            let nested = coeffs_nested(&spec).unwrap();
            let direct = coeffs_direct(&spec).unwrap();
            assert_eq!(nested.coeffs(), direct.coeffs(), "trial {trial}");
        }
    }
}
