//! Orbit types and same-type decisions with conjugating witnesses.

use std::sync::Arc;

use gauge_orbits::graph::Graph;
use gauge_orbits::groups::GroupContext;
use gauge_orbits::lattice::Connection;
use gauge_orbits::orbit::{conjugate_stabilizers, orbit_type, orbit_type_json, same_type};

fn main() {
    let graph = Arc::new(Graph::catalog("loop").unwrap());
    let s3 = Arc::new(GroupContext::builtin("S3").unwrap());
    let conn = |name: &str| Connection::new(graph.clone(), s3.clone(), vec![s3.element(name).unwrap()]).unwrap();
    for name in ["e", "(12)", "(123)"] {
        println!("type of A = {name}: {}", orbit_type_json(&s3, &orbit_type(&conn(name)).unwrap()));
    }
    let (a, b) = (conn("(12)"), conn("(23)"));
    let verdict = same_type(&a, &b).unwrap();
    println!("(12) vs (23): same type {}", verdict.same);
    if let Some(w) = verdict.witness {
        let q = conjugate_stabilizers(&a, &b, &w).unwrap();
        println!("witness {} lifts to gauge element {}", s3.display(&w), q.to_json());
    }
    println!("(12) vs (123): same type {}", same_type(&a, &conn("(123)")).unwrap().same);
}
