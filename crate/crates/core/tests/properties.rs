use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use proptest::prelude::*;

use wreath_vertex::fock::{combine, is_balanced, n_quotient};
use wreath_vertex::rational::RationalTerm;
use wreath_vertex::series::ExpImage;
use wreath_vertex::{field, CycNum, CyclotomicField, MultiPartition, Partition, Series, VarSet};

fn k12() -> &'static CyclotomicField {
    field(12)
}

fn cyc() -> impl Strategy<Value = CycNum> {
    prop::collection::vec((-6i64..=6, 1i64..=4), 12).prop_map(|v| {
        k12().from_coeffs(v.into_iter().map(|(a, b)| BigRational::new(BigInt::from(a), BigInt::from(b))).collect())
    })
}

fn xy() -> Arc<VarSet> {
    VarSet::new(vec!["x".into(), "y".into()], 2, vec![1, 1])
}

/// A truncated series in `x, y` with positive-degree terms only.
fn positive_series(prec: i64) -> impl Strategy<Value = Series> {
    prop::collection::vec(((0i64..4, 0i64..4), -3i64..=3), 0..6).prop_map(move |ts| {
        let vars = xy();
        let terms = ts
            .into_iter()
            .filter(|((a, b), _)| a + b > 0)
            .map(|((a, b), c)| (vec![a, b], k12().from_i64(c)));
        Series::from_terms(&vars, k12(), terms, Some(prec))
    })
}

fn multipartition(n: u32, max_d: u32) -> impl Strategy<Value = MultiPartition> {
    (0..=max_d).prop_flat_map(move |d| {
        let all = MultiPartition::all(n, d);
        (0..all.len()).prop_map(move |i| all[i].clone())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_ring_axioms(a in cyc(), b in cyc(), c in cyc()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a - &a, k12().zero());
    }

    #[test]
    fn field_inverse(a in cyc()) {
        prop_assume!(!a.is_zero());
        prop_assert!((&a * &a.inv().unwrap()).is_one());
    }

    #[test]
    fn conjugation_is_an_automorphism(a in cyc(), b in cyc()) {
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
        prop_assert_eq!(a.conj().conj(), a.clone());
    }

    #[test]
    fn complex_embedding_is_multiplicative(a in cyc(), b in cyc()) {
        let (x, y) = a.to_complex();
        let (u, v) = b.to_complex();
        let (p, q) = (&a * &b).to_complex();
        let scale = 1.0 + (x * x + y * y).sqrt() * (u * u + v * v).sqrt();
        prop_assert!((p - (x * u - y * v)).abs() < 1e-9 * scale);
        prop_assert!((q - (x * v + y * u)).abs() < 1e-9 * scale);
    }

    #[test]
    fn exp_is_a_homomorphism(f in positive_series(12), g in positive_series(12)) {
        let lhs = f.try_add(&g).unwrap().exp().unwrap();
        let rhs = f.exp().unwrap().try_mul(&g.exp().unwrap()).unwrap();
        prop_assert_eq!(lhs.first_difference(&rhs).unwrap(), None);
    }

    #[test]
    fn log_inverts_exp(f in positive_series(10)) {
        let back = f.exp().unwrap().log().unwrap();
        prop_assert_eq!(back.first_difference(&f).unwrap(), None);
    }

    #[test]
    fn inverse_of_unit(f in positive_series(10)) {
        let one = Series::one(&xy(), k12());
        let u = one.try_add(&f).unwrap();
        let p = u.try_mul(&u.inv().unwrap()).unwrap();
        prop_assert_eq!(p.first_difference(&one.truncate(10)).unwrap(), None);
    }

    #[test]
    fn expansion_is_multiplicative(
        a in prop::collection::vec((1i64..3, 0i64..3, -2i64..=2), 1..3),
        b in prop::collection::vec((0i64..3, 1i64..3, -2i64..=2), 1..3),
    ) {
        let vars = xy();
        let build = |fs: &[(i64, i64, i64)]| {
            let mut t = RationalTerm::new(k12().one(), vec![Rational64::new(1, 2), Rational64::from(0)]);
            for &(x, y, c) in fs {
                t = t.with_factor(k12().from_i64(c), vec![Rational64::from(x), Rational64::from(y)]);
            }
            t
        };
        let (s, t) = (build(&a), build(&b));
        let lhs = s.mul(&t).expand(&vars, 16).unwrap();
        let rhs = s.expand(&vars, 16).unwrap().try_mul(&t.expand(&vars, 16).unwrap()).unwrap();
        prop_assert_eq!(lhs.first_difference(&rhs).unwrap(), None);
    }

    #[test]
    fn monomial_substitution_is_a_homomorphism(f in positive_series(10), g in positive_series(10)) {
        // x ↦ x y, y ↦ y²: both images have degree 2, so truncation transfers
        let vars = xy();
        let images = vec![
            ExpImage::monomial(k12(), vec![Rational64::from(1), Rational64::from(1)]),
            ExpImage::monomial(k12(), vec![Rational64::from(0), Rational64::from(2)]),
        ];
        let sub = |s: &Series| s.substitute(&images, &vars, 20).unwrap();
        let lhs = sub(&f.try_mul(&g).unwrap());
        let rhs = sub(&f).try_mul(&sub(&g)).unwrap();
        prop_assert_eq!(lhs.first_difference(&rhs).unwrap(), None);
    }

    #[test]
    fn quotient_round_trip_random(n in 1u32..=3, m in 0u32..=20) {
        for p in Partition::all(m) {
            if is_balanced(&p, n) {
                let q = n_quotient(&p, n).unwrap();
                prop_assert_eq!(combine(&q), p);
            }
        }
    }

    #[test]
    fn combine_then_quotient(n in 1u32..=3, lam in (1u32..=3).prop_flat_map(|n| multipartition(n, 5))) {
        prop_assume!(lam.n() == n);
        prop_assert_eq!(n_quotient(&combine(&lam), n).unwrap(), lam);
    }

    #[test]
    fn twisting_involutions(mu in (2u32..=4).prop_flat_map(|n| multipartition(n, 4)), k in 0i64..4) {
        prop_assert_eq!(mu.negate().negate(), mu.clone());
        prop_assert_eq!(mu.g(k).g(k), mu.clone());
        let h = |m: &MultiPartition| m.negate().g(k).negate();
        prop_assert_eq!(h(&h(&mu)), mu.clone());
        prop_assert_eq!(mu.z(), mu.g(k).z());
    }
}
