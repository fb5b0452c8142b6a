//! Commutant dimensions and stabilizer reconstruction in SU(2).

use std::sync::Arc;

use gauge_orbits::cli::gen;
use gauge_orbits::graph::Graph;
use gauge_orbits::groups::{su2_diagonal, GroupContext, GroupElem, MatrixGroup, DEFAULT_TOLERANCE};
use gauge_orbits::lattice::Connection;
use gauge_orbits::orbit::reconstruct_stabilizer_element;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let su2 = MatrixGroup::new(2, DEFAULT_TOLERANCE, vec![]).unwrap();
    println!("dim commutant of {{}}: {}", su2.commutant_dimension(&[]));
    println!("dim commutant of diagonal pair: {}", su2.commutant_dimension(&[su2_diagonal(0.4), su2_diagonal(1.3)]));
    println!("dim commutant of random pair: {}", su2.commutant_dimension(&[gen::random_su2(&mut rng), gen::random_su2(&mut rng)]));

    let group = Arc::new(GroupContext::matrix(su2));
    let graph = Arc::new(Graph::catalog("theta").unwrap());
    let a = Connection::from_fn(graph, group, |_| GroupElem::Matrix(su2_diagonal(0.7))).unwrap();
    let g = reconstruct_stabilizer_element(&a, &GroupElem::Matrix(su2_diagonal(2.0))).unwrap();
    println!("max edge deviation of A∘g from A: {:.1e}", a.act(&g).unwrap().max_deviation(&a).unwrap());
}
