//! Spanning trees and free generators of the hoop group.

use std::sync::Arc;

use gauge_orbits::graph::{Graph, CATALOG_GRAPHS};

fn main() {
    for name in CATALOG_GRAPHS {
        let graph = Arc::new(Graph::catalog(name).unwrap());
        let tree = graph.spanning_tree();
        println!("{name}: rank {}", graph.rank());
        for (v, p) in tree.paths(&graph).iter().enumerate() {
            println!("  tree path to {}: {p}", graph.vertex_name(v));
        }
        for (i, g) in graph.loop_generators().iter().enumerate() {
            println!("  α{}: {g}", i + 1);
        }
    }
}
