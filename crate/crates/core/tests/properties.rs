use std::collections::BTreeSet;
use std::sync::Arc;

use gauge_orbits::cli::gen;
use gauge_orbits::graph::{Graph, Step, CATALOG_GRAPHS};
use gauge_orbits::groups::{GroupContext, GroupElem, MatrixGroup, DEFAULT_BUDGET, DEFAULT_CLOSURE_CAP, DEFAULT_TOLERANCE};
use gauge_orbits::lattice::{Connection, GaugeTransform};
use gauge_orbits::orbit::{brute_force_stabilizer, orbit_type, stabilizer};
use gauge_orbits::paths::PathWord;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GROUPS: [&str; 6] = ["Z2", "Z3", "Z4", "S3", "D4", "Q8"];

fn instance() -> impl Strategy<Value = (Arc<Graph>, Arc<GroupContext>, u64)> {
    (0..CATALOG_GRAPHS.len(), 0..GROUPS.len(), any::<u64>()).prop_map(|(g, h, seed)| {
        (
            Arc::new(Graph::catalog(CATALOG_GRAPHS[g]).unwrap()),
            Arc::new(GroupContext::builtin(GROUPS[h]).unwrap()),
            seed,
        )
    })
}

/// Repeatedly removes the leftmost adjacent cancelling pair.
fn naive(steps: &[Step]) -> Vec<Step> {
    let mut s = steps.to_vec();
    'outer: loop {
        for i in 1..s.len() {
            if s[i - 1].edge == s[i].edge && s[i - 1].dir != s[i].dir {
                s.drain(i - 1..=i);
                continue 'outer;
            }
        }
        return s;
    }
}

fn word() -> impl Strategy<Value = PathWord> {
    (0..CATALOG_GRAPHS.len(), 0usize..=64, any::<u64>()).prop_map(|(g, len, seed)| {
        let graph = Arc::new(Graph::catalog(CATALOG_GRAPHS[g]).unwrap());
        gen::random_walk(&graph, len, &mut ChaCha8Rng::seed_from_u64(seed))
    })
}

proptest! {
    #[test]
    fn reduce_matches_naive_oracle(w in word()) {
        let r = w.reduce();
        let expected = naive(w.steps());
        prop_assert_eq!(r.steps(), expected.as_slice());
    }

    #[test]
    fn reduce_is_idempotent_and_keeps_endpoints(w in word()) {
        let r = w.reduce();
        prop_assert_eq!(r.reduce(), r.clone());
        prop_assert_eq!((r.start(), r.end()), (w.start(), w.end()));
        prop_assert!(w.compose(&w.inverse()).unwrap().reduce().is_empty());
    }

    #[test]
    fn holonomy_ignores_retracings((graph, group, seed) in instance(), len in 0usize..32) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = Connection::random(graph.clone(), group, &mut rng).unwrap();
        let w = gen::random_walk(&graph, len, &mut rng);
        prop_assert_eq!(a.holonomy(&w).unwrap(), a.holonomy(&w.reduce()).unwrap());
    }

    #[test]
    fn action_is_a_right_action((graph, group, seed) in instance()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = Connection::random(graph.clone(), group.clone(), &mut rng).unwrap();
        let g1 = GaugeTransform::random(graph.clone(), group.clone(), &mut rng).unwrap();
        let g2 = GaugeTransform::random(graph, group, &mut rng).unwrap();
        prop_assert_eq!(a.act(&g1).unwrap().act(&g2).unwrap(), a.act(&g1.mul(&g2).unwrap()).unwrap());
    }

    #[test]
    fn stabilizer_agrees_with_brute_force((graph, group, seed) in instance()) {
        let a = Connection::random(graph, group, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let brute: BTreeSet<usize> = brute_force_stabilizer(&a, DEFAULT_BUDGET).unwrap().iter().filter_map(GaugeTransform::code).collect();
        prop_assert_eq!(stabilizer(&a).unwrap().codes(), brute);
    }

    #[test]
    fn orbit_type_is_gauge_invariant((graph, group, seed) in instance()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = Connection::random(graph.clone(), group.clone(), &mut rng).unwrap();
        let g = GaugeTransform::random(graph, group, &mut rng).unwrap();
        prop_assert_eq!(orbit_type(&a).unwrap(), orbit_type(&a.act(&g).unwrap()).unwrap());
    }

    #[test]
    fn canonical_class_is_conjugation_invariant(h in 0..GROUPS.len(), gens in prop::collection::vec(0usize..8, 0..3), by in 0usize..8) {
        let group = GroupContext::builtin(GROUPS[h]).unwrap();
        let n = group.order().unwrap();
        let gens = gens.into_iter().map(|x| GroupElem::Finite(x % n)).collect();
        let sub = group.subgroup(gens, DEFAULT_CLOSURE_CAP).unwrap();
        let conj = group.conjugate_subgroup(&sub, &GroupElem::Finite(by % n)).unwrap();
        prop_assert_eq!(group.canonical_class(&sub).unwrap(), group.canonical_class(&conj).unwrap());
    }

    #[test]
    fn commutant_dimension_is_unitarily_invariant(seed in any::<u64>(), k in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let group = GroupContext::matrix(MatrixGroup::new(2, DEFAULT_TOLERANCE, vec![]).unwrap());
        let gens: Vec<_> = (0..k).map(|_| gen::random_su2(&mut rng)).collect();
        let v = gen::random_su2(&mut rng);
        let moved: Vec<_> = gens.iter().map(|g| GroupElem::Matrix(v.adjoint() * g * &v)).collect();
        let gens: Vec<_> = gens.into_iter().map(GroupElem::Matrix).collect();
        prop_assert_eq!(group.commutant_dimension(&gens).unwrap(), group.commutant_dimension(&moved).unwrap());
    }
}
