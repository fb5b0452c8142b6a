//! Free reduction of edge words on the figure-eight graph.

use std::sync::Arc;

use gauge_orbits::graph::{Graph, Step};
use gauge_orbits::paths::PathWord;

fn main() {
    let graph = Arc::new(Graph::catalog("figure-eight").unwrap());
    let w = PathWord::new(graph.clone(), vec![Step::forward(0), Step::forward(1), Step::backward(1), Step::backward(0), Step::forward(1)]).unwrap();
    println!("word:      {w}");
    println!("reduced:   {}", w.reduce());
    println!("w·w⁻¹:     {}", w.compose(&w.inverse()).unwrap().reduce());
    let json = w.reduce().to_json();
    println!("json:      {json}");
    println!("round trip ok: {}", PathWord::from_json(graph, &json).unwrap() == w.reduce());
}
