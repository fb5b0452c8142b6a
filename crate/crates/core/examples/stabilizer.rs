//! Stabilizer of a connection reconstructed from the holonomy centralizer.

use std::sync::Arc;

use gauge_orbits::graph::Graph;
use gauge_orbits::groups::{GroupContext, DEFAULT_BUDGET};
use gauge_orbits::lattice::Connection;
use gauge_orbits::orbit::{brute_force_stabilizer, stabilizer};

fn main() {
    let graph = Arc::new(Graph::catalog("barbell").unwrap());
    let d4 = Arc::new(GroupContext::builtin("D4").unwrap());
    let vals = ["(13)", "(13)(24)", "(24)"].iter().map(|n| d4.element(n).unwrap()).collect();
    let a = Connection::new(graph, d4, vals).unwrap();
    let report = stabilizer(&a).unwrap();
    println!("{}", serde_json::to_string_pretty(&report.to_json()).unwrap());
    let brute = brute_force_stabilizer(&a, DEFAULT_BUDGET).unwrap();
    println!("brute force agrees: {}", brute.len() == report.order());
}
