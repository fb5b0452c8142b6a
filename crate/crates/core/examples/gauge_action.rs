//! Holonomies, the gauge action and a full gauge orbit.

use std::sync::Arc;

use gauge_orbits::graph::{Graph, Step};
use gauge_orbits::groups::{GroupContext, DEFAULT_BUDGET};
use gauge_orbits::lattice::{gauge_orbit, Connection, GaugeTransform};
use gauge_orbits::paths::PathWord;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let graph = Arc::new(Graph::catalog("figure-eight").unwrap());
    let s3 = Arc::new(GroupContext::builtin("S3").unwrap());
    let a = Connection::new(graph.clone(), s3.clone(), vec![s3.element("(12)").unwrap(), s3.element("(123)").unwrap()]).unwrap();
    let loop01 = PathWord::new(graph.clone(), vec![Step::forward(0), Step::backward(1)]).unwrap();
    println!("A = {}", a.to_json());
    println!("h_A(e0·e1⁻¹) = {}", s3.display(&a.holonomy(&loop01).unwrap()));

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let g = GaugeTransform::random(graph, s3.clone(), &mut rng).unwrap();
    let moved = a.act(&g).unwrap();
    println!("g = {}", g.to_json());
    println!("A∘g = {}", moved.to_json());
    println!("based holonomy moves by conjugation: {}", s3.display(&moved.holonomy(&loop01).unwrap()));
    println!("orbit size: {}", gauge_orbit(&a, DEFAULT_BUDGET).unwrap().len());
}
