//! The orbit as a product of base-pointed data and centralizer cosets.

use std::sync::Arc;

use gauge_orbits::graph::{Graph, CATALOG_GRAPHS};
use gauge_orbits::groups::{GroupContext, DEFAULT_BUDGET};
use gauge_orbits::lattice::Connection;
use gauge_orbits::orbit::factorization_check;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let s3 = Arc::new(GroupContext::builtin("S3").unwrap());
    for name in CATALOG_GRAPHS {
        let graph = Arc::new(Graph::catalog(name).unwrap());
        let a = Connection::random(graph, s3.clone(), &mut rng).unwrap();
        let r = factorization_check(&a, DEFAULT_BUDGET).unwrap();
        println!("{name}: {r:?} holds={}", r.holds());
    }
}
