//! Property tests: algebraic laws the library promises on randomized
//! inputs, independent of any particular identity instance.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use pzeta::partition::{
    count, enumerate, weight_product, PartSpec, PartitionClass, WeightFunction,
};
use pzeta::series::{
    cf_convergent, cf_convergent_dual, expand_distinct15, expand_distinct16, expand_distinct17,
    expand_form4, expand_form5, expand_form6, phi_series, sum_terms5, sum_terms6,
    z_marker_extract, QRing, TruncatedSeries, ZPolyRing,
};
use pzeta::zeta::{zeta_class_exact, ZetaQuery};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn big(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

fn arb_rational() -> impl Strategy<Value = BigRational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn arb_part_set() -> impl Strategy<Value = PartSpec> {
    prop_oneof![
        Just(PartSpec::All),
        proptest::collection::btree_set(1u64..=10, 1..5)
            .prop_map(|s| PartSpec::finite(s).unwrap()),
        (2u64..=4).prop_map(|m| PartSpec::multiples(m).unwrap()),
        (1u64..=3, 3u64..=4).prop_map(|(a, m)| PartSpec::arith_prog(a, m).unwrap()),
        (2u64..=5).prop_map(|a| PartSpec::greater_eq(a).unwrap()),
    ]
}

fn arb_weight() -> impl Strategy<Value = WeightFunction> {
    let leaf = prop_oneof![
        arb_rational().prop_map(WeightFunction::Constant),
        (-2i64..=2).prop_map(WeightFunction::Power),
        proptest::collection::vec((1u64..=9, arb_rational()), 1..6)
            .prop_map(WeightFunction::Table),
    ];
    (leaf, proptest::option::of(arb_part_set())).prop_map(|(w, restrict)| match restrict {
        None => w,
        Some(x) => WeightFunction::Restricted(Box::new(w), x),
    })
}

fn q_series(coeffs: Vec<BigRational>) -> TruncatedSeries<QRing> {
    TruncatedSeries::from_coeffs(QRing, coeffs).unwrap()
}

/// Exact value of one of the four product families over a finite set,
/// with the empty set contributing the empty product.
fn family_value(members: &BTreeSet<u64>, s: i64, distinct: bool, signed: bool) -> BigRational {
    if members.is_empty() {
        return BigRational::one();
    }
    let mut q = ZetaQuery::new(
        PartSpec::finite(members.iter().copied()).unwrap(),
        big(s),
    );
    if distinct {
        q = q.over_distinct();
    }
    if signed {
        q = q.sign_weighted();
    }
    zeta_class_exact(&q).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn series_multiplication_is_a_commutative_ring(
        a in proptest::collection::vec(arb_rational(), 13),
        b in proptest::collection::vec(arb_rational(), 13),
        c in proptest::collection::vec(arb_rational(), 13),
    ) {
        let (a, b, c) = (q_series(a), q_series(b), q_series(c));
        let assoc_l = a.mul(&b).unwrap().mul(&c).unwrap();
        let assoc_r = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(assoc_l.coeffs(), assoc_r.coeffs());
        let dist_l = a.mul(&b.add(&c).unwrap()).unwrap();
        let dist_r = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(dist_l.coeffs(), dist_r.coeffs());
        let ab = a.mul(&b).unwrap();
        let ba = b.mul(&a).unwrap();
        prop_assert_eq!(ab.coeffs(), ba.coeffs());
    }

    #[test]
    fn five_forms_agree_on_random_weights(f in arb_weight()) {
        let order = 12;
        let base = phi_series(&QRing, &f, order).unwrap().reciprocal().unwrap();
        for route in [
            expand_form4(&QRing, &f, order).unwrap(),
            expand_form5(&QRing, &f, order).unwrap(),
            expand_form6(&QRing, &f, order).unwrap(),
            cf_convergent(&QRing, &f, order + 1, order).unwrap(),
        ] {
            prop_assert_eq!(route.coeffs(), base.coeffs());
        }
    }

    #[test]
    fn dual_forms_agree_on_random_weights(f in arb_weight()) {
        let order = 12;
        let base = phi_series(&QRing, &f, order).unwrap();
        for route in [
            expand_distinct15(&QRing, &f, order).unwrap(),
            expand_distinct16(&QRing, &f, order).unwrap(),
            expand_distinct17(&QRing, &f, order).unwrap(),
            cf_convergent_dual(&QRing, &f, order + 1, order).unwrap(),
        ] {
            prop_assert_eq!(route.coeffs(), base.coeffs());
        }
    }

    #[test]
    fn golden_relation_on_random_weights(f in arb_weight()) {
        let order = 12;
        let s5 = sum_terms5(&QRing, &f, order).unwrap();
        let s6 = sum_terms6(&QRing, &f, order).unwrap();
        let diff = s5.sub(&s6).unwrap();
        let prod = s5.mul(&s6).unwrap();
        prop_assert_eq!(diff.coeffs(), prod.coeffs());
    }

    #[test]
    fn length_marker_slice_recovers_the_weight(f in arb_weight()) {
        let order = 10;
        let ring = ZPolyRing::new(2);
        let zf = WeightFunction::ZScaled(Box::new(f.clone()));
        let inv = phi_series(&ring, &zf, order).unwrap().reciprocal().unwrap();
        let slice = z_marker_extract(&inv, 1);
        prop_assert!(slice.coeff(0).is_zero());
        for n in 1..=order {
            let expect = f.eval(n as u64).expect_rational("z-free weight").unwrap();
            prop_assert_eq!(slice.coeff(n), &expect);
        }
    }

    #[test]
    fn restriction_matches_class_enumeration(
        f in arb_weight(),
        members in proptest::collection::btree_set(1u64..=9, 1..5),
    ) {
        let order = 10;
        let x = PartSpec::finite(members.iter().copied()).unwrap();
        let restricted = WeightFunction::Restricted(Box::new(f.clone()), x.clone());
        let series = phi_series(&QRing, &restricted, order)
            .unwrap()
            .reciprocal()
            .unwrap();
        let class = PartitionClass::over(x);
        for n in 0..=order {
            let mut total = BigRational::from(BigInt::from(0));
            for lam in enumerate(n as u64, &class) {
                total += weight_product(&lam, &f).expect_rational("z-free weight").unwrap();
            }
            prop_assert_eq!(series.coeff(n), &total);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn union_intersection_multiplicativity(
        x in proptest::collection::btree_set(2u64..=12, 1..5),
        y in proptest::collection::btree_set(2u64..=12, 1..5),
        s in 2i64..=3,
    ) {
        let union: BTreeSet<u64> = x.union(&y).copied().collect();
        let inter: BTreeSet<u64> = x.intersection(&y).copied().collect();
        for distinct in [false, true] {
            for signed in [false, true] {
                let lhs = family_value(&x, s, distinct, signed)
                    * family_value(&y, s, distinct, signed);
                let rhs = family_value(&union, s, distinct, signed)
                    * family_value(&inter, s, distinct, signed);
                prop_assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn reciprocity_between_the_families(
        members in proptest::collection::btree_set(2u64..=12, 1..6),
        s in 2i64..=4,
    ) {
        // zeta*_X eta_X = 1 and eta*_X zeta_X = 1 on sets without part 1
        let a = family_value(&members, s, true, false)
            * family_value(&members, s, false, true);
        prop_assert_eq!(a, BigRational::one());
        let b = family_value(&members, s, true, true)
            * family_value(&members, s, false, false);
        prop_assert_eq!(b, BigRational::one());
    }

    #[test]
    fn enumeration_respects_the_class(
        n in 0u64..=14,
        spec in arb_part_set(),
        distinct in any::<bool>(),
        len in proptest::option::of(1usize..=4),
    ) {
        let mut class = if distinct {
            PartitionClass::distinct_over(spec.clone())
        } else {
            PartitionClass::over(spec.clone())
        };
        if let Some(k) = len {
            class = class.with_length(k);
        }
        let lams = enumerate(n, &class);
        let mut seen = BTreeSet::new();
        for lam in &lams {
            let parts = lam.parts();
            prop_assert_eq!(parts.iter().sum::<u64>(), n);
            prop_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
            prop_assert!(parts.iter().all(|&p| spec.contains(p)));
            if distinct {
                prop_assert!(parts.windows(2).all(|w| w[0] > w[1]));
            }
            if let Some(k) = len {
                prop_assert_eq!(lam.length(), k);
            }
            prop_assert!(seen.insert(parts.to_vec()), "duplicate partition");
        }
        prop_assert_eq!(
            count(n, &class),
            num_bigint::BigUint::from(lams.len())
        );
    }
}
