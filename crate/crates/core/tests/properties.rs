use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use freemagma::decimal::Fixed;
use freemagma::motzkin::{count_paths, enumerate_paths, PathSpec, Step};
use freemagma::sequences::{cat_transform, BigSeq};
use freemagma::subgroupoid::{closure_up_to, contains};
use freemagma::term::{Encoding, Term};

fn term() -> impl Strategy<Value = Term> {
    Just(Term::leaf()).prop_recursive(6, 24, 2, |inner| (inner.clone(), inner).prop_map(|(l, r)| Term::sum(l, r)))
}

fn step() -> impl Strategy<Value = Step> {
    prop_oneof![Just(Step::U), Just(Step::D), Just(Step::F)]
}

proptest! {
    #[test]
    fn encoding_round_trips(t in term()) {
        let enc = t.encode();
        prop_assert_eq!(enc.len(), 2 * t.len() - 1);
        prop_assert_eq!(Term::decode(&enc).unwrap(), t.clone());
        let text: Encoding = enc.to_string().parse().unwrap();
        prop_assert_eq!(text, enc);
    }

    #[test]
    fn text_round_trips(t in term()) {
        prop_assert_eq!(t.to_string().parse::<Term>().unwrap(), t);
    }

    #[test]
    fn order_matches_encoding_within_a_length(a in term(), b in term()) {
        if a.len() == b.len() {
            prop_assert_eq!(a.cmp(&b), a.encode().cmp(&b.encode()));
        } else {
            prop_assert_eq!(a.cmp(&b), a.len().cmp(&b.len()));
        }
    }

    #[test]
    fn product_length_and_identity(a in term(), b in term()) {
        prop_assert_eq!(a.product(&b).len(), a.len() * b.len());
        prop_assert_eq!(a.product(&Term::leaf()), a.clone());
        prop_assert_eq!(Term::leaf().product(&a), a);
    }

    #[test]
    fn transform_dominates_nonnegative_input(v in prop::collection::vec(0i64..5, 1..20)) {
        let a = BigSeq::from_i64s(&v);
        let b = cat_transform(&a);
        for n in 1..=v.len() {
            prop_assert!(b.at(n) >= a.at(n));
        }
        prop_assert_eq!(b.at(1), a.at(1));
    }

    #[test]
    fn enumeration_matches_dp(
        length in 0usize..=10,
        forbidden in prop::collection::btree_set((step(), step()), 0..3),
        colors in prop::array::uniform3(1u32..=2),
    ) {
        let spec = PathSpec { length, forbidden, colors };
        let paths = enumerate_paths(&spec).unwrap();
        prop_assert_eq!(BigInt::from(paths.len()), count_paths(&spec));
        let distinct: BTreeSet<_> = paths.iter().collect();
        prop_assert_eq!(distinct.len(), paths.len());
        for p in &paths {
            prop_assert!(p.satisfies(&spec));
            prop_assert!(p.heights().iter().all(|&h| h >= 0));
            prop_assert_eq!(&p.render(&spec).parse::<freemagma::motzkin::Path>().unwrap(), p);
        }
    }

    #[test]
    fn membership_agrees_with_closure(gens in prop::collection::vec(term(), 1..3), probe in term()) {
        let gens: Vec<Term> = gens.into_iter().filter(|g| g.len() >= 2 && g.len() <= 5).collect();
        prop_assume!(!gens.is_empty() && probe.len() <= 10);
        let closure = closure_up_to(&gens, 10, 16).unwrap();
        prop_assert_eq!(contains(&gens, &probe), closure[probe.len()].contains(&probe));
    }

    #[test]
    fn ratio_rounding_is_within_half_ulp(n in -10_000i64..10_000, d in 1i64..10_000, scale in 0u32..12) {
        let f = Fixed::from_ratio(&BigInt::from(n), &BigInt::from(d), scale).unwrap();
        let exact = BigRational::new(n.into(), d.into());
        let err = (f.to_rational() - exact) * BigRational::from_integer(num_traits::pow(BigInt::from(10), scale as usize));
        prop_assert!(err <= BigRational::new(1.into(), 2.into()));
        prop_assert!(err >= BigRational::new((-1).into(), 2.into()));
    }
}

#[test]
fn transform_is_not_linear() {
    let a = BigSeq::from_i64s(&[1, 0, 0, 0]);
    let doubled = BigSeq::from_i64s(&[2, 0, 0, 0]);
    let sum: Vec<BigInt> = cat_transform(&a).entries().iter().map(|x| x * 2).collect();
    assert_ne!(cat_transform(&doubled).entries(), &sum[..]);
}
