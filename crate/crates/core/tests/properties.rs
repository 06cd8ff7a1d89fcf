mod common;

use std::collections::BTreeSet;

use common::*;
use proptest::prelude::*;
use simcol::exact_color::{
    chromatic_number, hypergraph_index, list_feasible, simultaneous_index, Budget, ListOutcome,
};
use simcol::fraclp::{nu_star, tau_star, NuWitness};
use simcol::graph_core::{
    stars_from_hypergraph, Colour, GraphCollection, ListAssignment, Multihypergraph, Profile,
    SimpleGraph,
};

fn collection_strategy() -> impl Strategy<Value = GraphCollection> {
    (
        1usize..=4,
        2u32..=7,
        proptest::collection::vec((0u32..7, 0u32..7, 1u64..16), 0..14),
    )
        .prop_map(|(k, n, raw)| {
            let mut seen = BTreeSet::new();
            let edges: Vec<_> = raw
                .into_iter()
                .map(|(u, v, m)| (u % n, v % n, Profile(m & ((1 << k) - 1))))
                .filter(|(u, v, p)| u != v && !p.is_empty() && seen.insert((*u.min(v), *u.max(v))))
                .collect();
            GraphCollection::new(k, &[], edges).unwrap()
        })
}

fn hypergraph_strategy(max_n: usize, max_edges: usize) -> impl Strategy<Value = Multihypergraph> {
    (1..=max_n).prop_flat_map(move |n| {
        proptest::collection::vec((1u32..(1 << n), 1usize..=3), 0..=max_edges).prop_map(
            move |raw| {
                Multihypergraph::new(
                    n,
                    raw.into_iter().map(|(mask, mult)| {
                        ((0..n).filter(|b| mask >> b & 1 == 1).collect(), mult)
                    }),
                )
                .unwrap()
            },
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn profile_classes_partition_the_edges(c in collection_strategy()) {
        let classes = c.partition_by_profile();
        let total: usize = classes.values().map(Vec::len).sum();
        prop_assert_eq!(total, c.edge_count());
        let all: BTreeSet<usize> = classes.values().flatten().copied().collect();
        prop_assert_eq!(all.len(), c.edge_count());
        for (s, ids) in &classes {
            prop_assert!(ids.iter().all(|&id| c.edges()[id].profile == *s));
        }
    }

    #[test]
    fn collection_json_round_trips(c in collection_strategy()) {
        let text = c.to_json();
        let back = GraphCollection::from_json(&text).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(back.to_json(), text);
    }

    #[test]
    fn conflict_graph_matches_definition(c in collection_strategy()) {
        let g = c.conflict_graph();
        let adj = conflict_matrix(&c);
        for (a, row) in adj.iter().enumerate() {
            for (b, &x) in row.iter().enumerate() {
                prop_assert_eq!(g.has_edge(a, b), x);
            }
        }
    }

    #[test]
    fn single_graph_conflicts_are_line_graph_edges(c in collection_strategy()) {
        let one = GraphCollection::new(
            1,
            &[],
            c.edges().iter().map(|e| (e.u, e.v, Profile::from_indices([1]))),
        ).unwrap();
        let n = one.vertices().iter().max().map_or(0, |v| *v as usize + 1);
        let g = SimpleGraph::from_edges(
            n,
            &one.edges().iter().map(|e| (e.u as usize, e.v as usize)).collect::<Vec<_>>(),
        );
        prop_assert_eq!(one.conflict_graph().edges(), g.line_graph().edges());
    }

    #[test]
    fn stars_round_trip_through_profiles(h in hypergraph_strategy(5, 8)) {
        let stars = stars_from_hypergraph(&h);
        let back = stars.profile_hypergraph();
        prop_assert_eq!(back.edges(), h.edges());
    }

    #[test]
    fn star_index_equals_hypergraph_index(h in hypergraph_strategy(4, 5)) {
        prop_assume!(h.edge_count() <= 10);
        let stars = stars_from_hypergraph(&h);
        let a = simultaneous_index(&stars, Budget::default());
        let b = hypergraph_index(&h, Budget::default());
        prop_assert_eq!(a.optimum, b.optimum);
    }

    #[test]
    fn hypergraph_text_round_trips(h in hypergraph_strategy(6, 8)) {
        prop_assert_eq!(Multihypergraph::from_text(&h.to_text()).unwrap(), h);
    }

    #[test]
    fn index_matches_brute_force(c in collection_strategy()) {
        prop_assume!(c.edge_count() <= 8);
        let rep = simultaneous_index(&c, Budget::default());
        prop_assert!(rep.optimal);
        prop_assert!(rep.certificate.verdict.is_valid());
        prop_assert!(rep.lower_bound_witness.len() <= rep.optimum);
        prop_assert_eq!(rep.optimum, brute_chromatic(&conflict_matrix(&c)));
    }

    #[test]
    fn list_solver_matches_brute_force(c in collection_strategy(), seed in any::<u64>()) {
        prop_assume!(c.edge_count() <= 8);
        let mut r = rng(seed);
        let lists = random_lists(&mut r, c.edge_count(), 2, 4);
        let g = c.conflict_graph();
        let got = list_feasible(&g, &lists, Budget::default()).unwrap();
        let oracle = brute_list(&conflict_matrix(&c), lists.lists());
        prop_assert_eq!(got.is_feasible(), oracle.is_some());
        if let ListOutcome::Feasible(cert) = got {
            prop_assert!(c.validate(&cert.assignment, Some(&lists)).unwrap().is_valid());
        }
    }

    #[test]
    fn lp_duality_and_feasibility(h in hypergraph_strategy(7, 10)) {
        let m = nu_star(&h);
        let t = tau_star(&h);
        prop_assert!(m.is_valid(h.n()));
        prop_assert!(t.covers(&h));
        prop_assert_eq!(m.size, t.size);
    }

    #[test]
    fn antichain_reduction_keeps_nu(seed in any::<u64>()) {
        // dropping an edge that contains another edge never lowers ν* of an
        // intersecting family: its weight can move to the smaller edge
        let mut r = rng(seed);
        let h = random_intersecting(&mut r, 6, 14);
        let edges: Vec<Vec<usize>> = h.edges().iter().map(|(e, _)| e.clone()).collect();
        let minimal: Vec<(Vec<usize>, usize)> = edges
            .iter()
            .filter(|e| !edges.iter().any(|f| f != *e && f.iter().all(|x| e.contains(x))))
            .map(|e| (e.clone(), 1))
            .collect();
        let anti = Multihypergraph::new(6, minimal).unwrap();
        prop_assert_eq!(nu_star(&anti).size, nu_star(&h).size);
    }

    #[test]
    fn chromatic_number_is_at_most_greedy_bound(n in 1usize..9, raw in proptest::collection::vec((0usize..9, 0usize..9), 0..20)) {
        let edges: Vec<(usize, usize)> = raw.into_iter().map(|(a, b)| (a % n, b % n)).collect();
        let g = SimpleGraph::from_edges(n, &edges);
        let rep = chromatic_number(&g, Budget::default());
        prop_assert!(rep.optimum <= g.max_degree() + 1);
        prop_assert!(g.find_conflict(&rep.certificate.assignment).is_none());
    }
}

#[test]
fn list_json_round_trips() {
    let mut r = rng(1);
    let c = random_collection(&mut r, 3, 6, 10);
    let lists = random_lists(&mut r, c.edge_count(), 3, 8);
    let back = ListAssignment::from_json(&lists.to_json(&c), &c).unwrap();
    assert_eq!(back, lists);
}

#[test]
fn witness_json_is_checked() {
    let good = r#"{"k":3,"edges":[[1,2],[1,3],[2,3]],"weights":["1/2","1/2","1/2"],"size":"3/2","optimal":true}"#;
    let w = NuWitness::from_json(good).unwrap();
    assert_eq!(w.to_json(), good);
    let heavy = good
        .replace("\"1/2\",\"1/2\",\"1/2\"", "\"1\",\"1/2\",\"1/2\"")
        .replace("3/2", "2");
    assert!(NuWitness::from_json(&heavy).is_err());
    let apart =
        r#"{"k":4,"edges":[[1,2],[3,4]],"weights":["1/1","1/1"],"size":"2/1","optimal":true}"#;
    assert!(NuWitness::from_json(apart).is_err());
}

#[test]
fn tampered_certificate_is_rejected() {
    let c = GraphCollection::new(
        2,
        &[],
        [
            (0, 1, Profile::from_indices([1])),
            (1, 2, Profile::from_indices([1, 2])),
        ],
    )
    .unwrap();
    let rep = simultaneous_index(&c, Budget::default());
    let mut a: Vec<Colour> = rep.certificate.assignment.clone();
    a[1] = a[0];
    assert!(!c.validate(&a, None).unwrap().is_valid());
}
