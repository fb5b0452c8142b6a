//! Finite based graphs, spanning trees, hoop generators and refinements.
//!
//! A [`Graph`] is an abstract connected multigraph with directed edges and a
//! designated base vertex. Loops and parallel edges are allowed. Edges are
//! referred to by their id; vertices by position (or by name at the I/O
//! boundary).

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;
use thiserror::Error;

use crate::paths::PathWord;

pub type EdgeId = u64;

/// Names accepted by [`Graph::catalog`].
pub const CATALOG_GRAPHS: [&str; 4] = ["loop", "figure-eight", "theta", "barbell"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph is not connected")]
    Disconnected,
    #[error("edge {edge} references unknown vertex `{vertex}`")]
    DanglingEndpoint { edge: EdgeId, vertex: String },
    #[error("duplicate edge id {0}")]
    DuplicateEdgeId(EdgeId),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("base vertex `{0}` is not a vertex of the graph")]
    MissingBase(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("unknown catalog graph `{0}`")]
    UnknownGraph(String),
    #[error("coarse vertex `{0}` is not mapped into the fine graph")]
    VertexNotMapped(String),
    #[error("vertex map is not injective")]
    VertexMapNotInjective,
    #[error("vertex map sends the shared base vertex elsewhere")]
    BaseNotPreserved,
    #[error("coarse edge {0} has no decomposition")]
    MissingDecomposition(EdgeId),
    #[error("coarse edge {0} decomposes into the empty word")]
    EmptyDecomposition(EdgeId),
    #[error("decomposition of coarse edge {0} is not composable in the fine graph")]
    NonComposableWord(EdgeId),
    #[error("decomposition of coarse edge {0} does not join the images of its endpoints")]
    EndpointMismatch(EdgeId),
    #[error("refinement tables do not chain (fine graph differs from next coarse graph)")]
    GraphMismatch,
    #[error("malformed graph data: {0}")]
    Malformed(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn flip(self) -> Self {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }

    pub fn sign(self) -> i8 {
        match self {
            Direction::Forward => 1,
            Direction::Backward => -1,
        }
    }
}

/// A signed edge: an edge traversed forwards (`+1`) or backwards (`-1`).
///
/// Serialised as the pair `[edge_id, ±1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Step {
    pub edge: EdgeId,
    pub dir: Direction,
}

impl Step {
    pub fn forward(edge: EdgeId) -> Self {
        Step { edge, dir: Direction::Forward }
    }

    pub fn backward(edge: EdgeId) -> Self {
        Step { edge, dir: Direction::Backward }
    }

    pub fn inverse(self) -> Self {
        Step { edge: self.edge, dir: self.dir.flip() }
    }

    /// `true` if `self` followed by `other` is a retracing.
    pub fn cancels(self, other: Step) -> bool {
        self.edge == other.edge && self.dir != other.dir
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.dir {
            Direction::Forward => write!(f, "e{}", self.edge),
            Direction::Backward => write!(f, "e{}⁻¹", self.edge),
        }
    }
}

impl Serialize for Step {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        (self.edge, self.dir.sign()).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Step {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let (edge, sign) = <(EdgeId, i64)>::deserialize(d)?;
        let dir = match sign {
            1 => Direction::Forward,
            -1 => Direction::Backward,
            other => return Err(D::Error::custom(format!("edge direction must be ±1, got {other}"))),
        };
        Ok(Step { edge, dir })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    pub src: usize,
    pub dst: usize,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.src == self.dst
    }
}

/// A validated connected graph with a base vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    base: usize,
    position: BTreeMap<EdgeId, usize>,
}

/// On-disk graph description.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphSpec {
    pub vertices: Vec<String>,
    pub base: String,
    pub edges: Vec<EdgeSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub id: EdgeId,
    pub src: String,
    pub dst: String,
}

impl Graph {
    /// Builds and validates a graph from named vertices and `(id, src, dst)`
    /// edges.
    pub fn new<S: AsRef<str>>(vertices: &[S], base: &str, edges: &[(EdgeId, &str, &str)]) -> Result<Self, GraphError> {
        Self::from_spec(&GraphSpec {
            vertices: vertices.iter().map(|v| v.as_ref().to_string()).collect(),
            base: base.to_string(),
            edges: edges
                .iter()
                .map(|&(id, s, d)| EdgeSpec { id, src: s.into(), dst: d.into() })
                .collect(),
        })
    }

    /// Validates a graph description: base present, endpoints known, edge
    /// ids unique, connected.
    pub fn from_spec(spec: &GraphSpec) -> Result<Self, GraphError> {
        let mut index = HashMap::new();
        for (i, v) in spec.vertices.iter().enumerate() {
            if index.insert(v.as_str(), i).is_some() {
                return Err(GraphError::DuplicateVertex(v.clone()));
            }
        }
        let base = *index
            .get(spec.base.as_str())
            .ok_or_else(|| GraphError::MissingBase(spec.base.clone()))?;

        let mut edges = Vec::with_capacity(spec.edges.len());
        let mut position = BTreeMap::new();
        for e in &spec.edges {
            let endpoint = |name: &str| {
                index.get(name).copied().ok_or_else(|| GraphError::DanglingEndpoint {
                    edge: e.id,
                    vertex: name.to_string(),
                })
            };
            let (src, dst) = (endpoint(&e.src)?, endpoint(&e.dst)?);
            if position.insert(e.id, edges.len()).is_some() {
                return Err(GraphError::DuplicateEdgeId(e.id));
            }
            edges.push(Edge { id: e.id, src, dst });
        }

        let graph = Graph { vertices: spec.vertices.clone(), edges, base, position };
        if graph.reachable_from_base().iter().any(|r| !r) {
            return Err(GraphError::Disconnected);
        }
        Ok(graph)
    }

    /// A catalog name (JSON string) or an inline graph object.
    pub fn from_json(value: &Value) -> Result<Self, GraphError> {
        match value {
            Value::String(name) => Self::catalog(name),
            _ => {
                let spec: GraphSpec =
                    serde_json::from_value(value.clone()).map_err(|e| GraphError::Malformed(e.to_string()))?;
                Self::from_spec(&spec)
            }
        }
    }

    pub fn to_spec(&self) -> GraphSpec {
        GraphSpec {
            vertices: self.vertices.clone(),
            base: self.vertices[self.base].clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeSpec {
                    id: e.id,
                    src: self.vertices[e.src].clone(),
                    dst: self.vertices[e.dst].clone(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self.to_spec()).expect("graph spec serialises")
    }

    /// The built-in graphs:
    ///
    /// - `loop`: one vertex `m`, one loop `0`
    /// - `figure-eight`: one vertex `m`, loops `0` and `1`
    /// - `theta`: vertices `m`, `v`, parallel edges `0, 1, 2` from `m` to `v`
    /// - `barbell`: bridge `0` from `m` to `v`, loop `1` at `m`, loop `2` at `v`
    pub fn catalog(name: &str) -> Result<Self, GraphError> {
        match name {
            "loop" => Self::new(&["m"], "m", &[(0, "m", "m")]),
            "figure-eight" => Self::new(&["m"], "m", &[(0, "m", "m"), (1, "m", "m")]),
            "theta" => Self::new(&["m", "v"], "m", &[(0, "m", "v"), (1, "m", "v"), (2, "m", "v")]),
            "barbell" => Self::new(&["m", "v"], "m", &[(0, "m", "v"), (1, "m", "m"), (2, "v", "v")]),
            other => Err(GraphError::UnknownGraph(other.to_string())),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Rank of the hoop group, `|E| − |V| + 1`.
    pub fn rank(&self) -> usize {
        self.edges.len() + 1 - self.vertices.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_index(&self, name: &str) -> Result<usize, GraphError> {
        self.vertices
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| GraphError::UnknownVertex(name.to_string()))
    }

    pub fn edge(&self, id: EdgeId) -> Result<&Edge, GraphError> {
        self.edge_position(id).map(|p| &self.edges[p])
    }

    /// Position of edge `id` in [`Graph::edges`].
    pub fn edge_position(&self, id: EdgeId) -> Result<usize, GraphError> {
        self.position.get(&id).copied().ok_or(GraphError::UnknownEdge(id))
    }

    /// Edge ids in ascending order.
    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.position.keys().copied()
    }

    /// Vertex at which `step` starts.
    pub fn tail(&self, step: Step) -> Result<usize, GraphError> {
        let e = self.edge(step.edge)?;
        Ok(match step.dir {
            Direction::Forward => e.src,
            Direction::Backward => e.dst,
        })
    }

    /// Vertex at which `step` ends.
    pub fn head(&self, step: Step) -> Result<usize, GraphError> {
        self.tail(step.inverse())
    }

    /// Vertex order used to identify the vertices of two graphs with the
    /// same vertex count: base first, the rest in listed order.
    pub fn based_order(&self) -> Vec<usize> {
        std::iter::once(self.base)
            .chain((0..self.vertices.len()).filter(|&v| v != self.base))
            .collect()
    }

    fn reachable_from_base(&self) -> Vec<bool> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for e in &self.edges {
            adj[e.src].push(e.dst);
            adj[e.dst].push(e.src);
        }
        let mut seen = vec![false; self.vertices.len()];
        seen[self.base] = true;
        let mut queue = VecDeque::from([self.base]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !std::mem::replace(&mut seen[w], true) {
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Breadth-first spanning tree rooted at the base vertex, taking incident
    /// edges in ascending id order.
    pub fn spanning_tree(&self) -> SpanningTree {
        self.spanning_tree_by(|id| id)
    }

    /// Breadth-first spanning tree rooted at the base vertex, taking incident
    /// edges in ascending order of `priority(id)` (ties by id).
    pub fn spanning_tree_by<K: Ord>(&self, priority: impl Fn(EdgeId) -> K) -> SpanningTree {
        let n = self.vertices.len();
        let mut incident: Vec<Vec<(K, EdgeId, Step, usize)>> = (0..n).map(|_| Vec::new()).collect();
        for e in self.edges.iter().filter(|e| !e.is_loop()) {
            incident[e.src].push((priority(e.id), e.id, Step::forward(e.id), e.dst));
            incident[e.dst].push((priority(e.id), e.id, Step::backward(e.id), e.src));
        }
        for list in &mut incident {
            list.sort_by(|a, b| (&a.0, a.1).cmp(&(&b.0, b.1)));
        }

        let mut parent: Vec<Option<Step>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut tree = BTreeSet::new();
        seen[self.base] = true;
        let mut queue = VecDeque::from([self.base]);
        while let Some(v) = queue.pop_front() {
            for (_, id, step, w) in &incident[v] {
                if !seen[*w] {
                    seen[*w] = true;
                    parent[*w] = Some(*step);
                    tree.insert(*id);
                    queue.push_back(*w);
                }
            }
        }
        SpanningTree { edges: tree, parent }
    }

    /// Tree path `γ_x` from the base to `x` in the default spanning tree.
    pub fn path_to_vertex(self: &Arc<Self>, x: &str) -> Result<PathWord, GraphError> {
        let v = self.vertex_index(x)?;
        Ok(self.spanning_tree().path_to(self, v))
    }

    /// Free generators of the hoop group for the default spanning tree.
    pub fn loop_generators(self: &Arc<Self>) -> Vec<PathWord> {
        self.spanning_tree().loop_generators(self)
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "graph(|V|={}, |E|={}, base={})", self.vertex_count(), self.edge_count(), self.vertices[self.base])
    }
}

/// A spanning tree together with the tree step entering each vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningTree {
    edges: BTreeSet<EdgeId>,
    /// `parent[v]` leads from the parent of `v` to `v`; `None` at the root.
    parent: Vec<Option<Step>>,
}

impl SpanningTree {
    pub fn edges(&self) -> &BTreeSet<EdgeId> {
        &self.edges
    }

    pub fn contains(&self, id: EdgeId) -> bool {
        self.edges.contains(&id)
    }

    /// The unique tree path from the base to `x`; empty at the base.
    pub fn path_to(&self, graph: &Arc<Graph>, x: usize) -> PathWord {
        let mut steps = Vec::new();
        let mut v = x;
        while let Some(step) = self.parent[v] {
            steps.push(step);
            v = graph.tail(step).expect("tree edge belongs to graph");
        }
        steps.reverse();
        PathWord::from_parts(graph.clone(), graph.base(), steps)
    }

    /// Tree paths for every vertex, indexed by vertex position.
    pub fn paths(&self, graph: &Arc<Graph>) -> Vec<PathWord> {
        (0..graph.vertex_count()).map(|x| self.path_to(graph, x)).collect()
    }

    /// For each non-tree edge `f` in ascending id order, the hoop
    /// `γ_{src f} · f · γ_{dst f}⁻¹`, reduced.
    pub fn loop_generators(&self, graph: &Arc<Graph>) -> Vec<PathWord> {
        graph
            .edge_ids()
            .filter(|id| !self.contains(*id))
            .map(|id| {
                let e = graph.edge(id).expect("listed edge");
                let word = self
                    .path_to(graph, e.src)
                    .compose(&PathWord::from_parts(graph.clone(), e.src, vec![Step::forward(id)]))
                    .and_then(|w| w.compose(&self.path_to(graph, e.dst).inverse()))
                    .expect("tree paths compose");
                word.reduce()
            })
            .collect()
    }
}

/// A refinement `Γ₁ ≤ Γ₂`: every coarse vertex is a fine vertex and every
/// coarse edge is a nonempty word of fine edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefinementTable {
    coarse: Arc<Graph>,
    fine: Arc<Graph>,
    vertex_map: Vec<usize>,
    /// Indexed by coarse edge position.
    edge_words: Vec<Vec<Step>>,
}

/// On-disk refinement description.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RefinementSpec {
    pub coarse: Value,
    pub fine: Value,
    pub vertex_map: BTreeMap<String, String>,
    pub edge_words: BTreeMap<String, Vec<Step>>,
}

impl RefinementTable {
    /// Builds and validates a table. `vertex_map[v]` is the fine image of
    /// coarse vertex `v`; `edge_words[i]` decomposes the coarse edge at
    /// position `i`.
    pub fn new(
        coarse: Arc<Graph>,
        fine: Arc<Graph>,
        vertex_map: Vec<usize>,
        edge_words: Vec<Vec<Step>>,
    ) -> Result<Self, GraphError> {
        let table = RefinementTable { coarse, fine, vertex_map, edge_words };
        table.validate()?;
        Ok(table)
    }

    /// Each coarse edge decomposes into itself.
    pub fn identity(graph: Arc<Graph>) -> Self {
        let words = graph.edges().iter().map(|e| vec![Step::forward(e.id)]).collect();
        let map = (0..graph.vertex_count()).collect();
        RefinementTable { coarse: graph.clone(), fine: graph, vertex_map: map, edge_words: words }
    }

    pub fn from_spec(spec: &RefinementSpec) -> Result<Self, GraphError> {
        let coarse = Arc::new(Graph::from_json(&spec.coarse)?);
        let fine = Arc::new(Graph::from_json(&spec.fine)?);
        let mut vertex_map = Vec::with_capacity(coarse.vertex_count());
        for v in coarse.vertices() {
            let image = spec.vertex_map.get(v).ok_or_else(|| GraphError::VertexNotMapped(v.clone()))?;
            vertex_map.push(fine.vertex_index(image)?);
        }
        let mut edge_words = Vec::with_capacity(coarse.edge_count());
        for e in coarse.edges() {
            let word = spec
                .edge_words
                .get(&e.id.to_string())
                .ok_or(GraphError::MissingDecomposition(e.id))?;
            edge_words.push(word.clone());
        }
        if let Some(extra) = spec.edge_words.keys().find(|k| {
            k.parse::<EdgeId>().map_or(true, |id| coarse.edge_position(id).is_err())
        }) {
            return Err(GraphError::Malformed(format!("decomposition for unknown coarse edge `{extra}`")));
        }
        Self::new(coarse, fine, vertex_map, edge_words)
    }

    pub fn from_json(value: &Value) -> Result<Self, GraphError> {
        let spec: RefinementSpec =
            serde_json::from_value(value.clone()).map_err(|e| GraphError::Malformed(e.to_string()))?;
        Self::from_spec(&spec)
    }

    pub fn to_spec(&self) -> RefinementSpec {
        RefinementSpec {
            coarse: self.coarse.to_json(),
            fine: self.fine.to_json(),
            vertex_map: self
                .vertex_map
                .iter()
                .enumerate()
                .map(|(v, &w)| (self.coarse.vertex_name(v).to_string(), self.fine.vertex_name(w).to_string()))
                .collect(),
            edge_words: self
                .coarse
                .edges()
                .iter()
                .zip(&self.edge_words)
                .map(|(e, w)| (e.id.to_string(), w.clone()))
                .collect(),
        }
    }

    /// Checks every table invariant.
    pub fn validate(&self) -> Result<(), GraphError> {
        let (coarse, fine) = (&self.coarse, &self.fine);
        if self.vertex_map.len() < coarse.vertex_count() {
            let missing = coarse.vertex_name(self.vertex_map.len());
            return Err(GraphError::VertexNotMapped(missing.to_string()));
        }
        if self.vertex_map.len() > coarse.vertex_count() {
            return Err(GraphError::Malformed("vertex map longer than the coarse vertex list".into()));
        }
        let mut hit = vec![false; fine.vertex_count()];
        for &w in &self.vertex_map {
            if w >= fine.vertex_count() {
                return Err(GraphError::VertexMapNotInjective);
            }
            if std::mem::replace(&mut hit[w], true) {
                return Err(GraphError::VertexMapNotInjective);
            }
        }
        let coarse_base = coarse.vertex_name(coarse.base());
        if coarse_base == fine.vertex_name(fine.base()) && self.vertex_map[coarse.base()] != fine.base() {
            return Err(GraphError::BaseNotPreserved);
        }
        if self.edge_words.len() < coarse.edge_count() {
            return Err(GraphError::MissingDecomposition(coarse.edges()[self.edge_words.len()].id));
        }
        if self.edge_words.len() > coarse.edge_count() {
            return Err(GraphError::Malformed("more decompositions than coarse edges".into()));
        }
        for (e, word) in coarse.edges().iter().zip(&self.edge_words) {
            let (first, last) = match (word.first(), word.last()) {
                (Some(f), Some(l)) => (*f, *l),
                _ => return Err(GraphError::EmptyDecomposition(e.id)),
            };
            for pair in word.windows(2) {
                let joined = fine.head(pair[0]).ok().zip(fine.tail(pair[1]).ok()).is_some_and(|(h, t)| h == t);
                if !joined {
                    return Err(GraphError::NonComposableWord(e.id));
                }
            }
            let start = fine.tail(first).map_err(|_| GraphError::NonComposableWord(e.id))?;
            let end = fine.head(last).map_err(|_| GraphError::NonComposableWord(e.id))?;
            if start != self.vertex_map[e.src] || end != self.vertex_map[e.dst] {
                return Err(GraphError::EndpointMismatch(e.id));
            }
        }
        Ok(())
    }

    pub fn coarse(&self) -> &Arc<Graph> {
        &self.coarse
    }

    pub fn fine(&self) -> &Arc<Graph> {
        &self.fine
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.vertex_map
    }

    /// Decomposition of the coarse edge at `position`.
    pub fn word_at(&self, position: usize) -> &[Step] {
        &self.edge_words[position]
    }

    pub fn word_for(&self, id: EdgeId) -> Result<&[Step], GraphError> {
        Ok(&self.edge_words[self.coarse.edge_position(id)?])
    }

    /// Replaces each coarse step by its decomposition (reversed and inverted
    /// for backward steps).
    pub fn substitute_steps(&self, steps: &[Step]) -> Result<Vec<Step>, GraphError> {
        let mut out = Vec::new();
        for &s in steps {
            let word = self.word_for(s.edge)?;
            match s.dir {
                Direction::Forward => out.extend_from_slice(word),
                Direction::Backward => out.extend(word.iter().rev().map(|f| f.inverse())),
            }
        }
        Ok(out)
    }

    /// The table for `Γ₁ ≤ Γ₃` obtained from `self: Γ₁ ≤ Γ₂` and
    /// `next: Γ₂ ≤ Γ₃`.
    pub fn then(&self, next: &RefinementTable) -> Result<RefinementTable, GraphError> {
        if !(Arc::ptr_eq(&self.fine, &next.coarse) || self.fine == next.coarse) {
            return Err(GraphError::GraphMismatch);
        }
        let vertex_map = self.vertex_map.iter().map(|&v| next.vertex_map[v]).collect();
        let edge_words = self
            .edge_words
            .iter()
            .map(|w| next.substitute_steps(w))
            .collect::<Result<_, _>>()?;
        RefinementTable::new(self.coarse.clone(), next.fine.clone(), vertex_map, edge_words)
    }
}
