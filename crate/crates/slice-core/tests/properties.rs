use std::cmp::Ordering;
use std::collections::BTreeSet;

use proptest::prelude::*;
use slice_core::invariants::generators;
use slice_core::rootsys::Root;
use slice_core::strata::{stratify, Strata};
use slice_core::weyl::{act_on_root, delta_s_from_factors, delta_sets, representative};

fn class_point(max_l: usize) -> impl Strategy<Value = (usize, usize)> {
    (1..=max_l).prop_flat_map(|l| (Just(l), 1..=l))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn representative_is_a_single_cycle((l, lp) in class_point(8)) {
        let rep = representative(l, lp).unwrap();
        prop_assert_eq!(rep.s.order(), lp + 1);
        let fixed: Vec<u16> = rep.s.fixed_points();
        let block: Vec<u16> = rep.block().collect();
        prop_assert_eq!(fixed, block);
        prop_assert_eq!(rep.s.moved_points().len(), lp + 1);
    }

    #[test]
    fn inversion_sets_agree((l, lp) in class_point(8)) {
        let rep = representative(l, lp).unwrap();
        let ds = delta_sets(&rep).unwrap();
        prop_assert_eq!(&ds.closed_form_s_inv, &ds.delta_s_inv);
        prop_assert_eq!(delta_s_from_factors(&rep), ds.delta_s.clone());
        prop_assert_eq!(ds.delta_s.len(), ds.delta_s_inv.len());
        let image: BTreeSet<Root> = ds.delta_s.iter().map(|r| act_on_root(&rep.s, *r).negate()).collect();
        let image_inv: BTreeSet<Root> = ds.delta_s.iter().map(|r| act_on_root(&rep.s_inv(), *r).negate()).collect();
        prop_assert!(image == ds.delta_s_inv || image_inv == ds.delta_s_inv);
    }

    #[test]
    fn layers_partition_the_outer_roots((l, lp) in class_point(8)) {
        let st = stratify(&representative(l, lp).unwrap());
        prop_assert_eq!(st.layers.len(), st.big_d + 1);
        let mut seen = BTreeSet::new();
        for (k, layer) in st.layers.iter().enumerate() {
            for r in layer {
                prop_assert!(seen.insert(*r), "{} in two layers", r);
                prop_assert_eq!(st.d_of(*r), Some(k + 1));
            }
        }
        let outer: BTreeSet<Root> = st.k_plus.iter().copied().collect();
        prop_assert_eq!(seen, outer);
    }

    #[test]
    fn slice_orders_are_total((l, lp) in class_point(6)) {
        let st = stratify(&representative(l, lp).unwrap());
        let roots = st.k_plus.clone();
        for &a in &roots {
            for &b in &roots {
                let ab = st.cmp_prec(a, b);
                prop_assert_eq!(ab, st.cmp_prec(b, a).reverse());
                prop_assert_eq!(ab == Ordering::Equal, a == b);
                prop_assert_eq!(Strata::cmp_z(a, b), Strata::cmp_z(b, a).reverse());
            }
        }
        let sorted = st.prec_order();
        for w in sorted.windows(2) {
            prop_assert_eq!(st.cmp_prec(w[0], w[1]), Ordering::Less);
        }
    }

    #[test]
    fn one_generator_per_root_of_delta_s((l, lp) in class_point(5)) {
        let rep = representative(l, lp).unwrap();
        let ds = delta_sets(&rep).unwrap();
        let gens = generators(&stratify(&rep)).unwrap();
        let kappas: BTreeSet<Root> = gens.kappa_to_poly.keys().copied().collect();
        prop_assert_eq!(kappas, ds.delta_s);
    }
}
