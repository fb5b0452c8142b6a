//! The implication chain from conjugate stabilizers to bijective orbits.

use std::sync::Arc;

use gauge_orbits::graph::Graph;
use gauge_orbits::groups::{GroupContext, DEFAULT_BUDGET};
use gauge_orbits::lattice::Connection;
use gauge_orbits::orbit::implication_chain_check;

fn main() {
    let graph = Arc::new(Graph::catalog("loop").unwrap());
    for (group, x, y) in [("S3", "(12)", "(13)"), ("Q8", "i", "j"), ("S3", "(12)", "(123)")] {
        let g = Arc::new(GroupContext::builtin(group).unwrap());
        let a1 = Connection::new(graph.clone(), g.clone(), vec![g.element(x).unwrap()]).unwrap();
        let a2 = Connection::new(graph.clone(), g.clone(), vec![g.element(y).unwrap()]).unwrap();
        let r = implication_chain_check(&a1, &a2, DEFAULT_BUDGET).unwrap();
        println!("{group}: {x} vs {y}");
        println!("  {}", serde_json::to_string(&r).unwrap());
        println!("  chain holds: {}", r.holds());
    }
}
