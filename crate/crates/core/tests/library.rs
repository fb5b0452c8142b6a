//! End-to-end library checks against independent oracles.

use std::collections::BTreeSet;
use std::sync::Arc;

use gauge_orbits::graph::{Graph, RefinementTable, Step};
use gauge_orbits::groups::{GroupContext, GroupElem, DEFAULT_BUDGET};
use gauge_orbits::lattice::{quotient_class_count, Connection, GaugeTransform};
use gauge_orbits::orbit::{brute_force_stabilizer, holonomy_group, same_type, stabilizer};
use gauge_orbits::paths::PathWord;

/// Permutation of {1,2,3} from 1-based cycle notation, as an image array.
fn perm(cycles: &str) -> [usize; 3] {
    let mut p = [0, 1, 2];
    if cycles == "e" {
        return p;
    }
    for cycle in cycles.trim_matches(|c| c == '(' || c == ')').split(")(") {
        let pts: Vec<usize> = cycle.chars().map(|c| c.to_digit(10).unwrap() as usize - 1).collect();
        for (i, &x) in pts.iter().enumerate() {
            p[x] = pts[(i + 1) % pts.len()];
        }
    }
    p
}

/// `(pq)(x) = p(q(x))`
fn compose(p: [usize; 3], q: [usize; 3]) -> [usize; 3] {
    [p[q[0]], p[q[1]], p[q[2]]]
}

fn name_of(p: [usize; 3]) -> &'static str {
    ["e", "(12)", "(13)", "(23)", "(123)", "(132)"]
        .into_iter()
        .find(|n| perm(n) == p)
        .unwrap()
}

fn s3() -> Arc<GroupContext> {
    Arc::new(GroupContext::builtin("S3").unwrap())
}

#[test]
fn s3_table_matches_permutation_oracle() {
    let g = s3();
    let names = ["e", "(12)", "(13)", "(23)", "(123)", "(132)"];
    for a in names {
        for b in names {
            let got = g.mul(&g.element(a).unwrap(), &g.element(b).unwrap()).unwrap();
            assert_eq!(g.display(&got), name_of(compose(perm(a), perm(b))), "{a}·{b}");
        }
    }
    assert_eq!(name_of(compose(perm("(12)"), perm("(13)"))), "(132)");
}

#[test]
fn figure_eight_holonomy_matches_oracle() {
    let graph = Arc::new(Graph::catalog("figure-eight").unwrap());
    let g = s3();
    let a = Connection::new(graph.clone(), g.clone(), vec![g.element("(12)").unwrap(), g.element("(123)").unwrap()]).unwrap();
    let w = PathWord::new(graph, vec![Step::forward(0), Step::backward(1)]).unwrap();
    let oracle = compose(perm("(12)"), perm("(132)"));
    assert_eq!(g.display(&a.holonomy(&w).unwrap()), name_of(oracle));
}

/// `(1/|G|) Σ_g |C(g)|²` from the permutation oracle.
fn burnside_pairs() -> usize {
    let names = ["e", "(12)", "(13)", "(23)", "(123)", "(132)"];
    let sum: usize = names
        .iter()
        .map(|a| {
            let c = names.iter().filter(|b| compose(perm(a), perm(b)) == compose(perm(b), perm(a))).count();
            c * c
        })
        .sum();
    sum / names.len()
}

#[test]
fn quotient_counts_against_burnside() {
    let g = s3();
    assert_eq!(burnside_pairs(), 11);
    assert_eq!(g.simultaneous_ad_classes(2, DEFAULT_BUDGET).unwrap(), burnside_pairs());
    assert_eq!(quotient_class_count(&Graph::catalog("figure-eight").unwrap(), &g, DEFAULT_BUDGET).unwrap(), 11);
    assert_eq!(quotient_class_count(&Graph::catalog("loop").unwrap(), &g, DEFAULT_BUDGET).unwrap(), 3);
    let path = Graph::new(&["m", "a", "b"], "m", &[(0, "m", "a"), (1, "b", "a")]).unwrap();
    let z3 = GroupContext::builtin("Z3").unwrap();
    assert_eq!(quotient_class_count(&path, &z3, DEFAULT_BUDGET).unwrap(), 1);
}

#[test]
fn holonomy_group_of_generating_pair_is_everything() {
    let graph = Arc::new(Graph::catalog("figure-eight").unwrap());
    let g = s3();
    let a = Connection::new(graph, g.clone(), vec![g.element("(12)").unwrap(), g.element("(123)").unwrap()]).unwrap();
    assert_eq!(holonomy_group(&a).unwrap().order(), Some(6));
    assert_eq!(stabilizer(&a).unwrap().order(), 1);
}

#[test]
fn stabilizer_of_abelian_connections_is_full() {
    let graph = Arc::new(Graph::catalog("theta").unwrap());
    let z4 = Arc::new(GroupContext::builtin("Z4").unwrap());
    let a = Connection::new(graph, z4.clone(), ["1", "2", "3"].iter().map(|n| z4.element(n).unwrap()).collect()).unwrap();
    let report = stabilizer(&a).unwrap();
    assert_eq!(report.order(), 4);
    let brute: BTreeSet<_> = brute_force_stabilizer(&a, DEFAULT_BUDGET).unwrap().iter().filter_map(GaugeTransform::code).collect();
    assert_eq!(report.codes(), brute);
}

#[test]
fn conjugate_transpositions_share_a_type() {
    let graph = Arc::new(Graph::catalog("loop").unwrap());
    let g = s3();
    let a = Connection::new(graph.clone(), g.clone(), vec![g.element("(12)").unwrap()]).unwrap();
    let b = Connection::new(graph, g.clone(), vec![g.element("(13)").unwrap()]).unwrap();
    let verdict = same_type(&a, &b).unwrap();
    assert!(verdict.same);
    // the witness w satisfies w⁻¹ (12) w = (13) in the oracle
    let w = perm(&g.display(&verdict.witness.unwrap()));
    let w_inv = {
        let mut inv = [0; 3];
        for (i, &x) in w.iter().enumerate() {
            inv[x] = i;
        }
        inv
    };
    assert_eq!(compose(compose(w_inv, perm("(12)")), w), perm("(13)"));
}

#[test]
fn refinement_chain_composes() {
    let coarse = Arc::new(Graph::new(&["m", "a"], "m", &[(0, "m", "a")]).unwrap());
    let mid = Arc::new(Graph::new(&["m", "a", "c"], "m", &[(1, "m", "c"), (2, "c", "a")]).unwrap());
    let fine = Arc::new(Graph::new(&["m", "a", "c", "d"], "m", &[(3, "m", "c"), (4, "d", "c"), (5, "d", "a")]).unwrap());
    let t12 = RefinementTable::new(coarse, mid.clone(), vec![0, 1], vec![vec![Step::forward(1), Step::forward(2)]]).unwrap();
    let t23 = RefinementTable::new(
        mid,
        fine.clone(),
        vec![0, 1, 2],
        vec![vec![Step::forward(3)], vec![Step::forward(4).inverse(), Step::forward(5)]],
    )
    .unwrap();
    let t13 = t12.then(&t23).unwrap();
    assert_eq!(t13.word_at(0), &[Step::forward(3), Step::backward(4), Step::forward(5)]);
    let g = s3();
    let a3 = Connection::new(fine, g.clone(), ["(12)", "(123)", "(23)"].iter().map(|n| g.element(n).unwrap()).collect()).unwrap();
    let via_mid = gauge_orbits::lattice::project_connection(&t12, &gauge_orbits::lattice::project_connection(&t23, &a3).unwrap()).unwrap();
    let direct = gauge_orbits::lattice::project_connection(&t13, &a3).unwrap();
    assert_eq!(via_mid.values(), direct.values());
    let oracle = compose(compose(perm("(12)"), perm("(132)")), perm("(23)"));
    assert_eq!(g.display(&direct.values()[0]), name_of(oracle));
}

#[test]
fn same_type_rejects_mixed_groups() {
    let graph = Arc::new(Graph::catalog("loop").unwrap());
    let a = Connection::trivial(graph.clone(), s3());
    let b = Connection::trivial(graph, Arc::new(GroupContext::builtin("Z2").unwrap()));
    assert!(same_type(&a, &b).is_err());
}

#[test]
fn gauge_elements_round_trip_through_json() {
    let g = s3();
    for e in g.elements().unwrap() {
        assert_eq!(g.elem_from_json(&g.elem_to_json(&e)).unwrap(), e);
    }
    assert!(g.element("(1234)").is_err());
    assert_eq!(g.identity(), GroupElem::Finite(0));
}
