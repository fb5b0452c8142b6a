//! Counting gauge classes and matching them with simultaneous conjugacy classes.

use std::sync::Arc;

use gauge_orbits::graph::{Graph, CATALOG_GRAPHS};
use gauge_orbits::groups::{GroupContext, DEFAULT_BUDGET};
use gauge_orbits::lattice::match_quotient_classes;

fn main() {
    for group in ["Z3", "S3", "Q8"] {
        let g = GroupContext::builtin(group).unwrap();
        for name in CATALOG_GRAPHS {
            let graph = Arc::new(Graph::catalog(name).unwrap());
            let m = match_quotient_classes(&graph, &g, DEFAULT_BUDGET).unwrap();
            println!("{group} on {name}: {} gauge classes, {} Ad-classes, bijective {}", m.gauge_classes, m.ad_classes, m.injective && m.surjective);
        }
    }
}
