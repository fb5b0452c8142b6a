//! The path groupoid of a graph: words of signed edges.
//!
//! Two words are equivalent iff they differ by inserting or deleting
//! retracings `δ δ⁻¹`. Since the groupoid is free on the edges, every class
//! has a unique reduced representative, computed by [`PathWord::reduce`].

use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};
use thiserror::Error;

use crate::graph::{Graph, GraphError, RefinementTable, Step};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("cannot compose: first word ends at `{end}`, second starts at `{start}`")]
    EndpointMismatch { end: String, start: String },
    #[error("words live on different graphs")]
    GraphMismatch,
    #[error("steps {at} and {next} are not composable", next = .at + 1)]
    NonComposable { at: usize },
    #[error("substitution produced a non-composable word")]
    NonComposableWord,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("malformed word: {0}")]
    Malformed(String),
}

/// A word of signed edges on a graph, anchored at its start vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathWord {
    graph: Arc<Graph>,
    /// Start vertex; the only endpoint data of an empty word.
    anchor: usize,
    steps: Vec<Step>,
}

pub(crate) fn same_graph(a: &Arc<Graph>, b: &Arc<Graph>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl PathWord {
    /// The trivial word at `vertex`.
    pub fn empty(graph: Arc<Graph>, vertex: usize) -> Self {
        assert!(vertex < graph.vertex_count(), "anchor out of range");
        PathWord { graph, anchor: vertex, steps: Vec::new() }
    }

    /// A nonempty composable word.
    pub fn new(graph: Arc<Graph>, steps: Vec<Step>) -> Result<Self, PathError> {
        let first = *steps
            .first()
            .ok_or_else(|| PathError::Malformed("a nonempty word needs at least one step".into()))?;
        let anchor = graph.tail(first)?;
        Self::with_anchor(graph, anchor, steps)
    }

    /// Checks composability and that `anchor` is the start of the word.
    pub fn with_anchor(graph: Arc<Graph>, anchor: usize, steps: Vec<Step>) -> Result<Self, PathError> {
        if anchor >= graph.vertex_count() {
            return Err(PathError::Malformed(format!("anchor {anchor} out of range")));
        }
        let mut at = anchor;
        for (i, &s) in steps.iter().enumerate() {
            if graph.tail(s)? != at {
                return Err(if i == 0 {
                    PathError::Malformed("anchor is not the start of the first step".into())
                } else {
                    PathError::NonComposable { at: i - 1 }
                });
            }
            at = graph.head(s)?;
        }
        Ok(PathWord { graph, anchor, steps })
    }

    /// Caller guarantees composability.
    pub(crate) fn from_parts(graph: Arc<Graph>, anchor: usize, steps: Vec<Step>) -> Self {
        debug_assert!(Self::with_anchor(graph.clone(), anchor, steps.clone()).is_ok());
        PathWord { graph, anchor, steps }
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn start(&self) -> usize {
        self.anchor
    }

    pub fn end(&self) -> usize {
        match self.steps.last() {
            Some(&s) => self.graph.head(s).expect("validated word"),
            None => self.anchor,
        }
    }

    /// `true` if the word starts and ends at the base vertex.
    pub fn is_hoop(&self) -> bool {
        self.start() == self.graph.base() && self.end() == self.graph.base()
    }

    /// Concatenation; no reduction is applied.
    pub fn compose(&self, other: &PathWord) -> Result<PathWord, PathError> {
        if !same_graph(&self.graph, &other.graph) {
            return Err(PathError::GraphMismatch);
        }
        if self.end() != other.start() {
            return Err(PathError::EndpointMismatch {
                end: self.graph.vertex_name(self.end()).to_string(),
                start: self.graph.vertex_name(other.start()).to_string(),
            });
        }
        let mut steps = self.steps.clone();
        steps.extend_from_slice(&other.steps);
        Ok(PathWord { graph: self.graph.clone(), anchor: self.anchor, steps })
    }

    /// Reversed word with every step inverted.
    pub fn inverse(&self) -> PathWord {
        PathWord {
            graph: self.graph.clone(),
            anchor: self.end(),
            steps: self.steps.iter().rev().map(|s| s.inverse()).collect(),
        }
    }

    /// Free reduction by a single left-to-right stack pass.
    pub fn reduce(&self) -> PathWord {
        let mut stack: Vec<Step> = Vec::with_capacity(self.steps.len());
        for &s in &self.steps {
            match stack.last() {
                Some(&top) if top.cancels(s) => {
                    stack.pop();
                }
                _ => stack.push(s),
            }
        }
        PathWord { graph: self.graph.clone(), anchor: self.anchor, steps: stack }
    }

    pub fn is_reduced(&self) -> bool {
        self.steps.windows(2).all(|w| !w[0].cancels(w[1]))
    }

    /// Equality of reduced forms (anchors included).
    pub fn is_equivalent(&self, other: &PathWord) -> Result<bool, PathError> {
        if !same_graph(&self.graph, &other.graph) {
            return Err(PathError::GraphMismatch);
        }
        let (a, b) = (self.reduce(), other.reduce());
        Ok(a.anchor == b.anchor && a.steps == b.steps)
    }

    /// Rewrites a coarse word on the fine graph of `table`.
    pub fn substitute(&self, table: &RefinementTable) -> Result<PathWord, PathError> {
        if !same_graph(&self.graph, table.coarse()) {
            return Err(PathError::GraphMismatch);
        }
        let steps = table.substitute_steps(&self.steps)?;
        let anchor = table.vertex_map()[self.anchor];
        PathWord::with_anchor(table.fine().clone(), anchor, steps).map_err(|_| PathError::NonComposableWord)
    }

    /// `[[id, ±1], ...]`, or `{"anchor": name}` for the empty word.
    pub fn to_json(&self) -> Value {
        if self.steps.is_empty() {
            json!({ "anchor": self.graph.vertex_name(self.anchor) })
        } else {
            serde_json::to_value(&self.steps).expect("steps serialise")
        }
    }

    /// Parses `[[id, ±1], ...]`, `{"anchor": name}` or
    /// `{"anchor": name, "steps": [...]}`.
    pub fn from_json(graph: Arc<Graph>, value: &Value) -> Result<Self, PathError> {
        let parse_steps = |v: &Value| -> Result<Vec<Step>, PathError> {
            serde_json::from_value(v.clone()).map_err(|e| PathError::Malformed(e.to_string()))
        };
        match value {
            Value::Array(_) => {
                let steps = parse_steps(value)?;
                if steps.is_empty() {
                    return Err(PathError::Malformed("an empty word is written {\"anchor\": vertex}".into()));
                }
                PathWord::new(graph, steps)
            }
            Value::Object(map) => {
                let anchor = map
                    .get("anchor")
                    .and_then(Value::as_str)
                    .ok_or_else(|| PathError::Malformed("missing `anchor`".into()))?;
                let anchor = graph.vertex_index(anchor)?;
                let steps = match map.get("steps") {
                    Some(v) => parse_steps(v)?,
                    None => Vec::new(),
                };
                PathWord::with_anchor(graph, anchor, steps)
            }
            other => Err(PathError::Malformed(format!("expected a word, got {other}"))),
        }
    }
}

impl fmt::Display for PathWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.steps.is_empty() {
            return write!(f, "1@{}", self.graph.vertex_name(self.anchor));
        }
        let parts: Vec<String> = self.steps.iter().map(Step::to_string).collect();
        write!(f, "{}", parts.join("·"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(name: &str) -> Arc<Graph> {
        Arc::new(Graph::catalog(name).unwrap())
    }

    fn word(graph: &Arc<Graph>, steps: &[(u64, i8)]) -> PathWord {
        let steps = steps
            .iter()
            .map(|&(e, d)| if d > 0 { Step::forward(e) } else { Step::backward(e) })
            .collect();
        PathWord::new(graph.clone(), steps).unwrap()
    }

    #[test]
    fn compose_examples() {
        let th = g("theta");
        let e0 = word(&th, &[(0, 1)]);
        let unit = PathWord::empty(th.clone(), th.base());
        assert_eq!(unit.compose(&e0).unwrap(), e0);
        let back = e0.compose(&e0.inverse()).unwrap();
        assert_eq!(back.steps(), &[Step::forward(0), Step::backward(0)]);
        let hoop = e0.compose(&word(&th, &[(1, -1)])).unwrap();
        assert_eq!(hoop.len(), 2);
        assert!(hoop.is_hoop());
        assert!(matches!(e0.compose(&e0), Err(PathError::EndpointMismatch { .. })));
        assert_eq!(e0.compose(&word(&g("loop"), &[(0, 1)])), Err(PathError::GraphMismatch));
    }

    #[test]
    fn inverse_examples() {
        let f8 = g("figure-eight");
        let unit = PathWord::empty(f8.clone(), 0);
        assert_eq!(unit.inverse(), unit);
        assert_eq!(word(&f8, &[(0, 1), (1, -1)]).inverse(), word(&f8, &[(1, 1), (0, -1)]));
    }

    #[test]
    fn reduce_examples() {
        let th = g("theta");
        let r = word(&th, &[(0, 1), (0, -1)]).reduce();
        assert!(r.is_empty());
        assert_eq!(r.start(), 0);
        let r = word(&th, &[(0, -1), (0, 1)]).reduce();
        assert_eq!((r.start(), r.len()), (1, 0));

        let f8 = g("figure-eight");
        let path = Arc::new(Graph::new(&["m", "a", "b", "c"], "m", &[(0, "m", "a"), (1, "a", "b"), (2, "a", "c")]).unwrap());
        let w = word(&path, &[(0, 1), (1, 1), (1, -1), (2, 1)]);
        assert_eq!(w.reduce(), word(&path, &[(0, 1), (2, 1)]));
        // nested cancellation
        assert!(word(&f8, &[(0, 1), (1, 1), (1, -1), (0, -1)]).reduce().is_empty());
    }

    #[test]
    fn equivalence_examples() {
        let f8 = g("figure-eight");
        let e = word(&f8, &[(0, 1)]);
        assert!(!e.is_equivalent(&e.inverse()).unwrap());
        let lhs = word(&f8, &[(0, 1), (1, 1)]);
        let delta = word(&f8, &[(1, -1), (0, 1)]);
        let w1 = word(&f8, &[(0, 1)]);
        let w2 = word(&f8, &[(1, 1)]);
        let inserted = w1.compose(&delta).unwrap().compose(&delta.inverse().compose(&w2).unwrap()).unwrap();
        assert!(lhs.is_equivalent(&inserted).unwrap());

        let th = g("theta");
        assert!(!PathWord::empty(th.clone(), 0).is_equivalent(&PathWord::empty(th, 1)).unwrap());
    }

    #[test]
    fn invalid_words() {
        let th = g("theta");
        assert_eq!(
            PathWord::new(th.clone(), vec![Step::forward(0), Step::forward(1)]),
            Err(PathError::NonComposable { at: 0 })
        );
        assert!(matches!(
            PathWord::new(th.clone(), vec![Step::forward(9)]),
            Err(PathError::Graph(GraphError::UnknownEdge(9)))
        ));
        assert!(PathWord::new(th, vec![]).is_err());
    }

    #[test]
    fn json_forms() {
        let th = g("theta");
        let w = word(&th, &[(0, 1), (1, -1)]);
        assert_eq!(w.to_json(), json!([[0, 1], [1, -1]]));
        assert_eq!(PathWord::from_json(th.clone(), &w.to_json()).unwrap(), w);
        let unit = PathWord::empty(th.clone(), 1);
        assert_eq!(unit.to_json(), json!({"anchor": "v"}));
        assert_eq!(PathWord::from_json(th.clone(), &unit.to_json()).unwrap(), unit);
        assert!(PathWord::from_json(th.clone(), &json!([])).is_err());
        assert!(PathWord::from_json(th.clone(), &json!([[0, 2]])).is_err());
        assert!(PathWord::from_json(th, &json!("e0")).is_err());
    }

    #[test]
    fn substitution() {
        let coarse = Arc::new(Graph::new(&["m", "a"], "m", &[(0, "m", "a")]).unwrap());
        let fine = Arc::new(Graph::new(&["m", "a", "c"], "m", &[(1, "m", "c"), (2, "c", "a")]).unwrap());
        let t = RefinementTable::new(coarse.clone(), fine, vec![0, 1], vec![vec![Step::forward(1), Step::forward(2)]]).unwrap();
        let w = PathWord::new(coarse.clone(), vec![Step::backward(0)]).unwrap();
        assert_eq!(w.substitute(&t).unwrap().steps(), &[Step::backward(2), Step::backward(1)]);
        let id = RefinementTable::identity(coarse.clone());
        assert_eq!(w.substitute(&id).unwrap().steps(), w.steps());
        let unit = PathWord::empty(coarse, 1);
        assert_eq!(unit.substitute(&t).unwrap().start(), 1);
        assert_eq!(w.substitute(&RefinementTable::identity(g("theta"))), Err(PathError::GraphMismatch));
    }
}
