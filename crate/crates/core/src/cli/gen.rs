//! Seeded random instances for the harness and the acceptance suite.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{Graph, RefinementTable, Step};
use crate::groups::{su2_from_quaternion, Automorphism, CMatrix, FiniteGroup};
use crate::paths::PathWord;

/// Random walk of `len` steps from a random vertex. A vertex without
/// incident edges gives the empty word there.
pub fn random_walk<R: Rng + ?Sized>(graph: &Arc<Graph>, len: usize, rng: &mut R) -> PathWord {
    let start = rng.gen_range(0..graph.vertex_count());
    random_walk_from(graph, start, len, rng)
}

pub fn random_walk_from<R: Rng + ?Sized>(graph: &Arc<Graph>, start: usize, len: usize, rng: &mut R) -> PathWord {
    let mut steps = Vec::with_capacity(len);
    let mut at = start;
    for _ in 0..len {
        let options: Vec<Step> = graph
            .edges()
            .iter()
            .flat_map(|e| {
                let fwd = (e.src == at).then(|| Step::forward(e.id));
                let bwd = (e.dst == at).then(|| Step::backward(e.id));
                fwd.into_iter().chain(bwd)
            })
            .collect();
        let Some(&step) = options.choose(rng) else { break };
        at = graph.head(step).expect("incident edge");
        steps.push(step);
    }
    PathWord::with_anchor(graph.clone(), start, steps).expect("walk is composable")
}

/// Random sequence of steps on a single loop edge per letter, so every
/// word is composable: the graph must be a bouquet of loops.
pub fn random_bouquet_word<R: Rng + ?Sized>(graph: &Arc<Graph>, len: usize, rng: &mut R) -> PathWord {
    let ids: Vec<u64> = graph.edge_ids().collect();
    let steps = (0..len)
        .map(|_| {
            let id = *ids.choose(rng).expect("graph has edges");
            if rng.gen() {
                Step::forward(id)
            } else {
                Step::backward(id)
            }
        })
        .collect();
    PathWord::with_anchor(graph.clone(), graph.base(), steps).expect("loops compose")
}

/// Subdivides each edge of `coarse` into a path of up to `max_extra + 1`
/// fine edges, each path traversed forward or backward at random.
///
/// New vertices are named `{prefix}{k}` and new edge ids start at
/// `first_id`.
pub fn random_subdivision<R: Rng + ?Sized>(
    coarse: &Arc<Graph>,
    max_extra: usize,
    prefix: &str,
    first_id: u64,
    rng: &mut R,
) -> RefinementTable {
    let mut vertices: Vec<String> = coarse.vertices().to_vec();
    let mut edges: Vec<(u64, String, String)> = Vec::new();
    let mut words = Vec::with_capacity(coarse.edge_count());
    let mut next_id = first_id;
    let mut fresh = 0;
    for e in coarse.edges() {
        let extra = rng.gen_range(0..=max_extra);
        let mut chain = vec![coarse.vertex_name(e.src).to_string()];
        for _ in 0..extra {
            let name = format!("{prefix}{fresh}");
            fresh += 1;
            vertices.push(name.clone());
            chain.push(name);
        }
        chain.push(coarse.vertex_name(e.dst).to_string());
        let reversed = rng.gen_bool(0.5);
        let mut word = Vec::with_capacity(chain.len() - 1);
        for pair in chain.windows(2) {
            let id = next_id;
            next_id += 1;
            if reversed {
                edges.push((id, pair[1].clone(), pair[0].clone()));
                word.push(Step::backward(id));
            } else {
                edges.push((id, pair[0].clone(), pair[1].clone()));
                word.push(Step::forward(id));
            }
        }
        words.push(word);
    }
    let edge_refs: Vec<(u64, &str, &str)> = edges.iter().map(|(id, s, d)| (*id, s.as_str(), d.as_str())).collect();
    let fine = Arc::new(
        Graph::new(&vertices, coarse.vertex_name(coarse.base()), &edge_refs).expect("subdivision is a valid graph"),
    );
    let vertex_map = (0..coarse.vertex_count()).collect();
    RefinementTable::new(coarse.clone(), fine, vertex_map, words).expect("subdivision is a valid refinement")
}

/// A uniformly chosen automorphism from the full list.
pub fn random_automorphism<R: Rng + ?Sized>(group: &FiniteGroup, rng: &mut R) -> Automorphism {
    Automorphism::enumerate(group).choose(rng).cloned().expect("identity is an automorphism")
}

/// Haar-random SU(2) element.
pub fn random_su2<R: Rng + ?Sized>(rng: &mut R) -> CMatrix {
    loop {
        let q: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let r2: f64 = q.iter().map(|x| x * x).sum();
        if (1e-6..=1.0).contains(&r2) {
            return su2_from_quaternion(q[0], q[1], q[2], q[3]);
        }
    }
}
