//! Refinement tables, projections and their composition.

use std::sync::Arc;

use gauge_orbits::cli::gen;
use gauge_orbits::graph::Graph;
use gauge_orbits::groups::{GroupContext, DEFAULT_BUDGET};
use gauge_orbits::lattice::{project_connection, project_gauge, projection_is_surjective, Connection, GaugeTransform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let coarse = Arc::new(Graph::catalog("theta").unwrap());
    let t12 = gen::random_subdivision(&coarse, 2, "u", 10, &mut rng);
    let t23 = gen::random_subdivision(t12.fine(), 1, "w", 100, &mut rng);
    let t13 = t12.then(&t23).unwrap();
    println!("fine graph: {}", t23.fine());
    for k in 0..coarse.edge_count() {
        println!("  coarse edge {k} -> {:?}", t13.word_at(k).iter().map(ToString::to_string).collect::<Vec<_>>());
    }

    let q8 = Arc::new(GroupContext::builtin("Q8").unwrap());
    let a = Connection::random(t23.fine().clone(), q8.clone(), &mut rng).unwrap();
    let g = GaugeTransform::random(t23.fine().clone(), q8.clone(), &mut rng).unwrap();
    let direct = project_connection(&t13, &a).unwrap();
    let staged = project_connection(&t12, &project_connection(&t23, &a).unwrap()).unwrap();
    println!("p13(A) = {}", direct.to_json()["edges"]);
    println!("composition holds: {}", direct == staged);
    let equivariant = project_connection(&t13, &a.act(&g).unwrap()).unwrap() == direct.act(&project_gauge(&t13, &g).unwrap()).unwrap();
    println!("equivariance holds: {equivariant}");

    let z2 = Arc::new(GroupContext::builtin("Z2").unwrap());
    println!("p12 onto over Z2: {}", projection_is_surjective(&t12, &z2, DEFAULT_BUDGET).unwrap());
}
