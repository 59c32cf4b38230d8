use std::sync::OnceLock;

use proptest::prelude::*;

use quatram::catalog::{bounds, enumerate, member, stable_value, witness};
use quatram::cli::{resolve_field, run_verify};
use quatram::localfield::{Elem, Field};
use quatram::ramify::ClassTag;
use quatram::squares::{class_dim, class_representative, square_class_vector, SquareClassVector};
use quatram::symbols::hilbert_symbol;

fn t4i() -> &'static Field {
    static K: OnceLock<Field> = OnceLock::new();
    K.get_or_init(|| resolve_field("t4i").unwrap().build().unwrap())
}

fn tag() -> impl Strategy<Value = ClassTag> {
    prop_oneof![Just(ClassTag::One), Just(ClassTag::OneStar), Just(ClassTag::Two)]
}

fn class(k: &Field, bits: u32) -> Elem {
    let mut v = SquareClassVector::zero(class_dim(k));
    for (i, c) in v.coords.iter_mut().enumerate() {
        *c = bits >> i & 1 == 1;
    }
    class_representative(k, &v)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn catalog_triples_respect_bounds(tag in tag(), e in 1i64..12) {
        for t in enumerate(tag, e) {
            prop_assert!(member(tag, e, t.s1, t.s2, t.s3));
            prop_assert!(t.s1 % 2 == 1 && t.s1 < 2 * e && t.s1 < t.s2);
            let (lo, hi) = bounds(tag, e, t.s1, t.s2);
            if t.stable {
                prop_assert!(lo >= hi);
                prop_assert_eq!(t.s3, stable_value(tag, e, t.s1, t.s2));
            } else {
                prop_assert!(lo <= t.s3 && t.s3 <= hi);
            }
        }
    }

    #[test]
    fn member_rejects_perturbations(tag in tag(), e in 1i64..8, d in 1i64..4) {
        for t in enumerate(tag, e) {
            let stable_neighbour = member(tag, e, t.s1, t.s2, t.s3 + d);
            if t.stable {
                prop_assert!(!stable_neighbour);
            }
            prop_assert!(!member(tag, e, t.s1 + 1, t.s2, t.s3));
        }
    }

    #[test]
    fn hilbert_symbol_is_symmetric_and_bilinear(a in 1u32..64, b in 1u32..64, c in 1u32..64) {
        let k = t4i();
        let (x, y, z) = (class(k, a), class(k, b), class(k, c));
        let s = |p: &Elem, q: &Elem| hilbert_symbol(p, q).unwrap();
        prop_assert_eq!(s(&x, &y), s(&y, &x));
        prop_assert_eq!(s(&x, &y.mul(&z)), s(&x, &y) * s(&x, &z));
        prop_assert_eq!(s(&x, &x), s(&x, &Elem::from_int(k, -1)));
    }

    #[test]
    fn class_vector_round_trips(a in 1u32..64) {
        let k = t4i();
        prop_assert_eq!(square_class_vector(&class(k, a)).unwrap().coords.iter().enumerate()
            .fold(0u32, |acc, (i, &c)| acc | (u32::from(c) << i)), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn random_seeds_give_no_violations(seed in any::<u64>()) {
        let spec = resolve_field("q2i").unwrap();
        let (rows, summary) = run_verify(&spec, 10, seed).unwrap();
        prop_assert_eq!(summary.violations, 0);
        prop_assert!(rows.iter().all(|r| r.in_catalog));
    }

    #[test]
    fn witnesses_round_trip(idx in 0usize..7) {
        let k = t4i();
        let triples: Vec<_> = enumerate(ClassTag::OneStar, 2).into_iter().chain(enumerate(ClassTag::Two, 2)).collect();
        let t = triples[idx];
        let o = witness(k, &t).unwrap().execute().unwrap();
        prop_assert!(o.matched);
        prop_assert_eq!(o.measured, t.triple());
    }
}
