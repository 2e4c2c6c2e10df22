mod common;

use evac_core::polytope::is_vertex;
use evac_core::rational::int;
use evac_core::{lexmax_flow, solve, verify_dynamic_flow, vertex_from_order, Rational};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn decomposition_reconstructs_the_supply(raw in common::instance(7, 5)) {
        let Some((net, w)) = raw.build() else { return Ok(()) };
        let sol = solve(&net, &w).unwrap();
        let dec = &sol.decomposition;
        prop_assert_eq!(dec.lambda_sum(), int(1));
        prop_assert!(dec.terms.iter().all(|t| t.lambda > int(0)));
        let x = dec.combination(&net);
        for v in net.sources().iter().copied().chain([net.sink()]) {
            prop_assert_eq!(&x.get(v), w.get(v));
        }
        prop_assert!(sol.report.passed(), "{}", sol.report.summary());
    }

    #[test]
    fn terms_are_vertices_of_their_orders(raw in common::instance(6, 4)) {
        let Some((net, w)) = raw.build() else { return Ok(()) };
        let sol = solve(&net, &w).unwrap();
        let t_star = &sol.horizon.t_star;
        for t in &sol.decomposition.terms {
            let v = vertex_from_order(&net, t_star, &t.order).unwrap();
            prop_assert_eq!(&v.point, &t.vertex);
            prop_assert!(is_vertex(&net, &sol.horizon.family, t_star, &t.vertex).unwrap());
            let flow = lexmax_flow(&net, &t.order, t_star).unwrap();
            for s in net.sources() {
                prop_assert_eq!(flow.net_outflow(&net, *s), t.vertex.get(*s));
            }
        }
    }

    #[test]
    fn mixing_the_term_flows_gives_the_quickest_flow(raw in common::instance(6, 4)) {
        let Some((net, w)) = raw.build() else { return Ok(()) };
        let sol = solve(&net, &w).unwrap();
        let mut mixed: Option<evac_core::TimeExpandedFlow> = None;
        for (t, f) in sol.decomposition.terms.iter().zip(&sol.flows) {
            let part = f.scaled(&t.lambda);
            match &mut mixed {
                None => mixed = Some(part),
                Some(m) => m.add(&part).unwrap(),
            }
        }
        prop_assert_eq!(mixed.as_ref(), Some(&sol.quickest));
        let report = verify_dynamic_flow(&net, &sol.quickest, &w, &sol.horizon.t_star);
        prop_assert!(report.passed());
    }
}

#[test]
fn supply_at_a_vertex_is_one_term() {
    let (net, _) = common::Raw {
        n: 3,
        parents: vec![(2, 3), (2, 1)],
        extra: vec![(0, 1, 1)],
        sources: vec![0, 1],
        supply: vec![2, 3],
        capacity: 1,
    }
    .build()
    .unwrap();
    let w = evac_core::SupplyFunction::new(vec![int(4), int(1), int(-5)]);
    let sol = solve(&net, &w).unwrap();
    assert_eq!(sol.decomposition.terms.len(), 1);
    assert_eq!(sol.decomposition.terms[0].lambda, int(1));
    assert_eq!(sol.horizon.t_star, Rational::new(9.into(), 2.into()));
}
