mod common;

use std::collections::{BTreeMap, BTreeSet};

use evac_core::horizon::{a_hat_subset, AdmitTuple};
use evac_core::oracle::default_step;
use evac_core::rational::int;
use evac_core::{
    compute_a_hat, enumerate_a_hat, enumerate_a_hat_exhaustive, min_required_time, min_time_horizon,
    oracle_max_outflow, successive_shortest_paths, Network, NodeId, SupplyFunction,
};
use proptest::prelude::*;

fn subsets(net: &Network) -> Vec<Vec<NodeId>> {
    let s = net.sources();
    (1u32..1 << s.len()).map(|mask| (0..s.len()).filter(|i| mask >> i & 1 == 1).map(|i| s[i]).collect()).collect()
}

fn theta(net: &Network, w: &SupplyFunction, set: &[NodeId]) -> evac_core::Rational {
    let r = successive_shortest_paths(net, set).unwrap();
    min_required_time(&r, &w.of_set(set)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 96, ..ProptestConfig::default() })]

    #[test]
    fn pruned_search_matches_every_tuple(raw in common::instance(7, 5)) {
        let Some((net, w)) = raw.build() else { return Ok(()) };
        let pruned = enumerate_a_hat(&net, &w).unwrap();
        let full = enumerate_a_hat_exhaustive(&net, &w).unwrap();
        prop_assert_eq!(pruned.entries(), full.entries());
        prop_assert_eq!(pruned.tuples_examined(), full.tuples_examined());
    }

    #[test]
    fn a_hat_is_the_union_of_admitting_subsets(raw in common::instance(7, 5)) {
        let Some((net, _)) = raw.build() else { return Ok(()) };
        let mut unions: BTreeMap<Vec<NodeId>, BTreeSet<NodeId>> = BTreeMap::new();
        for set in subsets(&net) {
            let origins = successive_shortest_paths(&net, &set).unwrap().origins();
            unions.entry(origins).or_default().extend(set);
        }
        for (tuple, union) in unions {
            let got = a_hat_subset(&net, &AdmitTuple::new(tuple.clone())).unwrap();
            prop_assert_eq!(got, union.into_iter().collect::<Vec<_>>(), "tuple {:?}", tuple);
        }
    }

    #[test]
    fn t_star_is_the_largest_theta(raw in common::instance(7, 5)) {
        let Some((net, w)) = raw.build() else { return Ok(()) };
        let h = min_time_horizon(&net, &w).unwrap();
        let brute = subsets(&net).iter().map(|s| theta(&net, &w, s)).max().unwrap();
        prop_assert_eq!(&h.t_star, &brute);
        prop_assert_eq!(theta(&net, &w, &h.a_star), h.t_star);
    }

    #[test]
    fn theta_is_when_the_outflow_covers_the_supply(raw in common::instance(6, 4)) {
        let Some((net, w)) = raw.build() else { return Ok(()) };
        for set in subsets(&net) {
            let t = theta(&net, &w, &set);
            let step = default_step(&net, &t);
            prop_assert_eq!(oracle_max_outflow(&net, &set, &t, &step).unwrap(), w.of_set(&set));
            let earlier = &t - &step;
            if earlier >= int(0) {
                prop_assert!(oracle_max_outflow(&net, &set, &earlier, &step).unwrap() < w.of_set(&set));
            }
        }
    }

    #[test]
    fn more_supply_never_shortens_the_horizon(raw in common::instance(7, 5), extra in 1..4i64) {
        let Some((net, w)) = raw.build() else { return Ok(()) };
        let before = min_time_horizon(&net, &w).unwrap().t_star;
        let s = net.sources()[0];
        let mut values = w.values().to_vec();
        values[s.index()] += int(extra);
        values[net.sink().index()] -= int(extra);
        let after = min_time_horizon(&net, &SupplyFunction::new(values)).unwrap().t_star;
        prop_assert!(after >= before);
    }

    #[test]
    fn family_size_is_bounded(raw in common::instance(8, 6)) {
        let Some((net, w)) = raw.build() else { return Ok(()) };
        let family = enumerate_a_hat(&net, &w).unwrap();
        let k = net.source_count() as u128;
        let bound: u128 = (1..=net.sink_in_degree() as u32).map(|p| k.pow(p)).sum();
        prop_assert!(family.len() as u128 <= bound);
        for e in family.entries() {
            prop_assert_eq!(&compute_a_hat(&net, &w, &e.tuple).unwrap().subset, &e.subset);
        }
    }
}
