//! Property tests for the serialization layer and the interval arithmetic.

use ktc_core::bignum::{euler_number, ln_interval, Interval};
use ktc_core::graph::{pair_count, LabeledGraph};
use num_rational::BigRational;
use proptest::prelude::*;

fn arbitrary_graph() -> impl Strategy<Value = LabeledGraph> {
    (1usize..=16).prop_flat_map(|n| {
        let bits = pair_count(n) as u32;
        let mask = if bits == 128 { u128::MAX } else { (1u128 << bits) - 1 };
        any::<u128>().prop_map(move |raw| LabeledGraph::from_index(n, raw & mask).unwrap())
    })
}

proptest! {
    #[test]
    fn graph6_roundtrips(g in arbitrary_graph()) {
        let encoded = g.to_graph6();
        prop_assert!(encoded.bytes().all(|b| (63..=126).contains(&b)));
        prop_assert_eq!(LabeledGraph::from_graph6(&encoded).unwrap(), g);
    }

    #[test]
    fn index_roundtrips(g in arbitrary_graph()) {
        prop_assert_eq!(LabeledGraph::from_index(g.n(), g.index()).unwrap(), g);
        prop_assert_eq!(g.edge_count() as u32, g.index().count_ones());
    }

    #[test]
    fn graph6_decoder_never_panics(bytes in proptest::collection::vec(any::<u8>(), 0..24)) {
        if let Ok(s) = std::str::from_utf8(&bytes) {
            let _ = LabeledGraph::from_graph6(s);
        }
    }

    #[test]
    fn interval_products_bracket_and_nest(a in 1i64..500, b in 1i64..500, c in 1i64..500) {
        let x = BigRational::new(a.into(), b.into());
        let point = |p: u32| Interval::from_rational(&x, p);
        let coarse = point(24).mul(&euler_number(24)).add(&ln_interval(&BigRational::from_integer(c.into()), 24));
        let fine = point(48).mul(&euler_number(48)).add(&ln_interval(&BigRational::from_integer(c.into()), 48));
        prop_assert!(fine.is_subinterval_of(&coarse));
        prop_assert!(coarse.lo <= coarse.hi);
        prop_assert!(fine.width() <= coarse.width());
    }
}
