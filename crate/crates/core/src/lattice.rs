//! Connections, gauge transforms and projections along refinements.
//!
//! The path groupoid is free on the edges, so a connection is stored as one
//! group element per edge and a gauge transform as one element per vertex.
//! Values are kept in graph order (edge position, vertex position).

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::Rng;
use serde_json::{Map, Value};
use thiserror::Error;

use crate::graph::{Direction, Edge, Graph, GraphError, RefinementTable};
use crate::groups::{enumeration_size, BudgetExceeded, FiniteGroup, GroupContext, GroupElem, GroupError};
use crate::paths::{same_graph, PathError, PathWord};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LatticeError {
    #[error("operands live on different graphs")]
    GraphMismatch,
    #[error("operands use different structure groups")]
    ContextMismatch,
    #[error("expected {expected} values, got {got}")]
    WrongArity { expected: usize, got: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error("malformed lattice data: {0}")]
    Malformed(String),
}

impl LatticeError {
    pub fn is_budget(&self) -> bool {
        matches!(self, LatticeError::Budget(_) | LatticeError::Group(GroupError::Budget(_)))
    }
}

fn same_group(a: &Arc<GroupContext>, b: &Arc<GroupContext>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// An element of `Hom(KΓ, G)`, stored by its edge values.
#[derive(Clone, Debug, PartialEq)]
pub struct Connection {
    graph: Arc<Graph>,
    group: Arc<GroupContext>,
    values: Vec<GroupElem>,
}

/// A map from vertices to the structure group.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeTransform {
    graph: Arc<Graph>,
    group: Arc<GroupContext>,
    values: Vec<GroupElem>,
}

fn check_values(group: &GroupContext, values: &[GroupElem], expected: usize) -> Result<(), LatticeError> {
    if values.len() != expected {
        return Err(LatticeError::WrongArity { expected, got: values.len() });
    }
    for v in values {
        group.check(v)?;
    }
    Ok(())
}

pub(crate) fn encode(values: &[usize], base: usize) -> usize {
    values.iter().fold(0, |acc, &x| acc * base + x)
}

pub(crate) fn decode(mut code: usize, base: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = code % base;
        code /= base;
    }
    out
}

fn finite_indices(values: &[GroupElem]) -> Vec<usize> {
    values.iter().map(|v| v.index().expect("finite value")).collect()
}

/// `(A∘g)(e) = g(src e)⁻¹ A(e) g(dst e)` on raw indices.
pub(crate) fn act_indices(group: &FiniteGroup, graph: &Graph, conn: &[usize], gauge: &[usize]) -> Vec<usize> {
    graph
        .edges()
        .iter()
        .zip(conn)
        .map(|(e, &h)| group.mul(group.mul(group.inv(gauge[e.src]), h), gauge[e.dst]))
        .collect()
}

impl Connection {
    /// Values in edge-position order.
    pub fn new(graph: Arc<Graph>, group: Arc<GroupContext>, values: Vec<GroupElem>) -> Result<Self, LatticeError> {
        check_values(&group, &values, graph.edge_count())?;
        Ok(Connection { graph, group, values })
    }

    pub fn from_fn(
        graph: Arc<Graph>,
        group: Arc<GroupContext>,
        f: impl FnMut(&Edge) -> GroupElem,
    ) -> Result<Self, LatticeError> {
        let values = graph.edges().iter().map(f).collect();
        Self::new(graph, group, values)
    }

    /// Every edge carries the identity.
    pub fn trivial(graph: Arc<Graph>, group: Arc<GroupContext>) -> Self {
        let values = vec![group.identity(); graph.edge_count()];
        Connection { graph, group, values }
    }

    /// Independent uniform edge values (finite groups only).
    pub fn random<R: Rng + ?Sized>(graph: Arc<Graph>, group: Arc<GroupContext>, rng: &mut R) -> Result<Self, LatticeError> {
        let n = group.require_finite()?.order();
        let values = (0..graph.edge_count()).map(|_| GroupElem::Finite(rng.gen_range(0..n))).collect();
        Ok(Connection { graph, group, values })
    }

    /// Decodes a lexicographic index (first edge most significant).
    pub fn from_code(graph: Arc<Graph>, group: Arc<GroupContext>, code: usize) -> Result<Self, LatticeError> {
        let n = group.require_finite()?.order();
        let values = decode(code, n, graph.edge_count()).into_iter().map(GroupElem::Finite).collect();
        Ok(Connection { graph, group, values })
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn group(&self) -> &Arc<GroupContext> {
        &self.group
    }

    pub fn values(&self) -> &[GroupElem] {
        &self.values
    }

    pub fn value(&self, edge: u64) -> Result<&GroupElem, LatticeError> {
        Ok(&self.values[self.graph.edge_position(edge)?])
    }

    /// Lexicographic index of a finite connection.
    pub fn code(&self) -> Option<usize> {
        let n = self.group.order()?;
        Some(encode(&finite_indices(&self.values), n))
    }

    pub fn finite_values(&self) -> Option<Vec<usize>> {
        self.group.as_finite().map(|_| finite_indices(&self.values))
    }

    /// Ordered product of edge values along `word`; backward steps
    /// contribute inverses and the empty word gives the identity.
    pub fn holonomy(&self, word: &PathWord) -> Result<GroupElem, LatticeError> {
        if !same_graph(&self.graph, word.graph()) {
            return Err(LatticeError::GraphMismatch);
        }
        let mut acc = self.group.identity();
        for s in word.steps() {
            let h = &self.values[self.graph.edge_position(s.edge)?];
            acc = match s.dir {
                Direction::Forward => self.group.mul(&acc, h)?,
                Direction::Backward => self.group.mul(&acc, &self.group.inv(h)?)?,
            };
        }
        Ok(acc)
    }

    /// The right action `(A∘g)(e) = g(src e)⁻¹ A(e) g(dst e)`.
    pub fn act(&self, gauge: &GaugeTransform) -> Result<Connection, LatticeError> {
        self.check_gauge(gauge)?;
        let values = self
            .graph
            .edges()
            .iter()
            .zip(&self.values)
            .map(|(e, h)| {
                let left = self.group.inv(&gauge.values[e.src])?;
                self.group.mul(&self.group.mul(&left, h)?, &gauge.values[e.dst])
            })
            .collect::<Result<_, _>>()?;
        Ok(Connection { graph: self.graph.clone(), group: self.group.clone(), values })
    }

    fn check_gauge(&self, gauge: &GaugeTransform) -> Result<(), LatticeError> {
        if !same_graph(&self.graph, &gauge.graph) {
            return Err(LatticeError::GraphMismatch);
        }
        if !same_group(&self.group, &gauge.group) {
            return Err(LatticeError::ContextMismatch);
        }
        Ok(())
    }

    /// Edge-wise equality under the group's equality.
    pub fn approx_eq(&self, other: &Connection) -> Result<bool, LatticeError> {
        if !same_graph(&self.graph, &other.graph) {
            return Err(LatticeError::GraphMismatch);
        }
        for (a, b) in self.values.iter().zip(&other.values) {
            if !GroupContext::eq(&self.group, a, b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Largest edge-wise Frobenius distance (matrix groups); `0` or `1`
    /// for finite groups.
    pub fn max_deviation(&self, other: &Connection) -> Result<f64, LatticeError> {
        if !same_graph(&self.graph, &other.graph) {
            return Err(LatticeError::GraphMismatch);
        }
        let mut worst: f64 = 0.0;
        for (a, b) in self.values.iter().zip(&other.values) {
            let d = match (a, b) {
                (GroupElem::Matrix(x), GroupElem::Matrix(y)) => (x - y).norm(),
                _ => f64::from(u8::from(!GroupContext::eq(&self.group, a, b)?)),
            };
            worst = worst.max(d);
        }
        Ok(worst)
    }

    pub fn to_json(&self) -> Value {
        let edges: Map<String, Value> = self
            .graph
            .edges()
            .iter()
            .zip(&self.values)
            .map(|(e, v)| (e.id.to_string(), self.group.elem_to_json(v)))
            .collect();
        serde_json::json!({
            "graph": self.graph.to_json(),
            "group": self.group.to_json(),
            "edges": edges,
        })
    }

    /// `{"graph": ..., "group": ..., "edges": {"<id>": value, ...}}`
    pub fn from_json(value: &Value) -> Result<Self, LatticeError> {
        let graph = Arc::new(Graph::from_json(field(value, "graph")?)?);
        let group = Arc::new(GroupContext::from_json(field(value, "group")?)?);
        Self::from_json_on(value, graph, group)
    }

    /// Parses the `edges` map against an already known graph and group.
    pub fn from_json_on(value: &Value, graph: Arc<Graph>, group: Arc<GroupContext>) -> Result<Self, LatticeError> {
        let map = field(value, "edges")?
            .as_object()
            .ok_or_else(|| LatticeError::Malformed("`edges` must be an object".into()))?;
        let mut values = vec![None; graph.edge_count()];
        for (key, v) in map {
            let id: u64 = key
                .parse()
                .map_err(|_| LatticeError::Malformed(format!("edge key `{key}` is not an id")))?;
            values[graph.edge_position(id)?] = Some(group.elem_from_json(v)?);
        }
        let values = graph
            .edges()
            .iter()
            .zip(values)
            .map(|(e, v)| v.ok_or_else(|| LatticeError::Malformed(format!("edge {} has no value", e.id))))
            .collect::<Result<_, _>>()?;
        Self::new(graph, group, values)
    }
}

fn field<'a>(value: &'a Value, name: &str) -> Result<&'a Value, LatticeError> {
    value.get(name).ok_or_else(|| LatticeError::Malformed(format!("missing `{name}`")))
}

impl GaugeTransform {
    /// Values in vertex-position order.
    pub fn new(graph: Arc<Graph>, group: Arc<GroupContext>, values: Vec<GroupElem>) -> Result<Self, LatticeError> {
        check_values(&group, &values, graph.vertex_count())?;
        Ok(GaugeTransform { graph, group, values })
    }

    pub fn identity(graph: Arc<Graph>, group: Arc<GroupContext>) -> Self {
        let values = vec![group.identity(); graph.vertex_count()];
        GaugeTransform { graph, group, values }
    }

    pub fn constant(graph: Arc<Graph>, group: Arc<GroupContext>, value: GroupElem) -> Result<Self, LatticeError> {
        let values = vec![value; graph.vertex_count()];
        Self::new(graph, group, values)
    }

    pub fn random<R: Rng + ?Sized>(graph: Arc<Graph>, group: Arc<GroupContext>, rng: &mut R) -> Result<Self, LatticeError> {
        let n = group.require_finite()?.order();
        let values = (0..graph.vertex_count()).map(|_| GroupElem::Finite(rng.gen_range(0..n))).collect();
        Ok(GaugeTransform { graph, group, values })
    }

    pub fn from_code(graph: Arc<Graph>, group: Arc<GroupContext>, code: usize) -> Result<Self, LatticeError> {
        let n = group.require_finite()?.order();
        let values = decode(code, n, graph.vertex_count()).into_iter().map(GroupElem::Finite).collect();
        Ok(GaugeTransform { graph, group, values })
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn group(&self) -> &Arc<GroupContext> {
        &self.group
    }

    pub fn values(&self) -> &[GroupElem] {
        &self.values
    }

    pub fn value(&self, vertex: usize) -> &GroupElem {
        &self.values[vertex]
    }

    /// `g_m`
    pub fn at_base(&self) -> &GroupElem {
        &self.values[self.graph.base()]
    }

    pub fn code(&self) -> Option<usize> {
        let n = self.group.order()?;
        Some(encode(&finite_indices(&self.values), n))
    }

    pub fn finite_values(&self) -> Option<Vec<usize>> {
        self.group.as_finite().map(|_| finite_indices(&self.values))
    }

    fn check(&self, other: &GaugeTransform) -> Result<(), LatticeError> {
        if !same_graph(&self.graph, &other.graph) {
            return Err(LatticeError::GraphMismatch);
        }
        if !same_group(&self.group, &other.group) {
            return Err(LatticeError::ContextMismatch);
        }
        Ok(())
    }

    /// Vertex-wise product `(g·g')(x) = g(x) g'(x)`.
    pub fn mul(&self, other: &GaugeTransform) -> Result<GaugeTransform, LatticeError> {
        self.check(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| self.group.mul(a, b))
            .collect::<Result<_, _>>()?;
        Ok(GaugeTransform { graph: self.graph.clone(), group: self.group.clone(), values })
    }

    pub fn inv(&self) -> Result<GaugeTransform, LatticeError> {
        let values = self.values.iter().map(|a| self.group.inv(a)).collect::<Result<_, _>>()?;
        Ok(GaugeTransform { graph: self.graph.clone(), group: self.group.clone(), values })
    }

    /// `g⁻¹ h g`, vertex-wise.
    pub fn conj(&self, by: &GaugeTransform) -> Result<GaugeTransform, LatticeError> {
        by.inv()?.mul(self)?.mul(by)
    }

    pub fn approx_eq(&self, other: &GaugeTransform) -> Result<bool, LatticeError> {
        self.check(other)?;
        for (a, b) in self.values.iter().zip(&other.values) {
            if !GroupContext::eq(&self.group, a, b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_json(&self) -> Value {
        let vertices: Map<String, Value> = self
            .graph
            .vertices()
            .iter()
            .zip(&self.values)
            .map(|(v, g)| (v.clone(), self.group.elem_to_json(g)))
            .collect();
        serde_json::json!({
            "graph": self.graph.to_json(),
            "group": self.group.to_json(),
            "vertices": vertices,
        })
    }

    /// `{"graph": ..., "group": ..., "vertices": {"<name>": value, ...}}`
    pub fn from_json(value: &Value) -> Result<Self, LatticeError> {
        let graph = Arc::new(Graph::from_json(field(value, "graph")?)?);
        let group = Arc::new(GroupContext::from_json(field(value, "group")?)?);
        let map = field(value, "vertices")?
            .as_object()
            .ok_or_else(|| LatticeError::Malformed("`vertices` must be an object".into()))?;
        let mut values = vec![None; graph.vertex_count()];
        for (name, v) in map {
            values[graph.vertex_index(name)?] = Some(group.elem_from_json(v)?);
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| LatticeError::Malformed(format!("vertex `{}` has no value", graph.vertex_name(i)))))
            .collect::<Result<_, _>>()?;
        Self::new(graph, group, values)
    }

    /// Lists values by vertex name, for reports.
    pub fn named_values(&self) -> BTreeMap<String, String> {
        self.graph
            .vertices()
            .iter()
            .zip(&self.values)
            .map(|(v, g)| (v.clone(), self.group.display(g)))
            .collect()
    }
}

/// Coarse edge `e ↦` holonomy of the fine connection along the
/// decomposition word of `e`.
pub fn project_connection(table: &RefinementTable, fine: &Connection) -> Result<Connection, LatticeError> {
    if !same_graph(table.fine(), &fine.graph) {
        return Err(LatticeError::GraphMismatch);
    }
    let values = (0..table.coarse().edge_count())
        .map(|i| {
            let word = PathWord::new(fine.graph.clone(), table.word_at(i).to_vec())?;
            fine.holonomy(&word)
        })
        .collect::<Result<_, _>>()?;
    Ok(Connection { graph: table.coarse().clone(), group: fine.group.clone(), values })
}

/// Coarse vertex `v ↦ g(vertex_map(v))`.
pub fn project_gauge(table: &RefinementTable, fine: &GaugeTransform) -> Result<GaugeTransform, LatticeError> {
    if !same_graph(table.fine(), &fine.graph) {
        return Err(LatticeError::GraphMismatch);
    }
    let values = table.vertex_map().iter().map(|&w| fine.values[w].clone()).collect();
    Ok(GaugeTransform { graph: table.coarse().clone(), group: fine.group.clone(), values })
}

/// Lexicographic stream of all connections on a graph.
pub struct ConnectionIter {
    graph: Arc<Graph>,
    group: Arc<GroupContext>,
    next: usize,
    total: usize,
}

impl Iterator for ConnectionIter {
    type Item = Connection;

    fn next(&mut self) -> Option<Connection> {
        if self.next == self.total {
            return None;
        }
        let c = Connection::from_code(self.graph.clone(), self.group.clone(), self.next).expect("finite group");
        self.next += 1;
        Some(c)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.total - self.next;
        (left, Some(left))
    }
}

/// Lexicographic stream of all gauge transforms on a graph.
pub struct GaugeIter {
    graph: Arc<Graph>,
    group: Arc<GroupContext>,
    next: usize,
    total: usize,
}

impl Iterator for GaugeIter {
    type Item = GaugeTransform;

    fn next(&mut self) -> Option<GaugeTransform> {
        if self.next == self.total {
            return None;
        }
        let g = GaugeTransform::from_code(self.graph.clone(), self.group.clone(), self.next).expect("finite group");
        self.next += 1;
        Some(g)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.total - self.next;
        (left, Some(left))
    }
}

/// All `|G|^|E|` connections, or [`BudgetExceeded`].
pub fn enumerate_connections(graph: Arc<Graph>, group: Arc<GroupContext>, budget: u64) -> Result<ConnectionIter, LatticeError> {
    let n = group.require_finite()?.order();
    let total = enumeration_size(n, graph.edge_count(), budget)?;
    Ok(ConnectionIter { graph, group, next: 0, total })
}

/// All `|G|^|V|` gauge transforms, or [`BudgetExceeded`].
pub fn enumerate_gauge(graph: Arc<Graph>, group: Arc<GroupContext>, budget: u64) -> Result<GaugeIter, LatticeError> {
    let n = group.require_finite()?.order();
    let total = enumeration_size(n, graph.vertex_count(), budget)?;
    Ok(GaugeIter { graph, group, next: 0, total })
}

/// Lexicographic codes of the gauge orbit of `conn`.
pub fn orbit_codes(conn: &Connection, budget: u64) -> Result<BTreeSet<usize>, LatticeError> {
    let fg = conn.group.require_finite()?;
    let n = fg.order();
    let transforms = enumeration_size(n, conn.graph.vertex_count(), budget)?;
    let values = finite_indices(&conn.values);
    Ok((0..transforms)
        .map(|code| {
            let g = decode(code, n, conn.graph.vertex_count());
            encode(&act_indices(fg, &conn.graph, &values, &g), n)
        })
        .collect())
}

/// The gauge orbit of `conn`, sorted by lexicographic code.
pub fn gauge_orbit(conn: &Connection, budget: u64) -> Result<Vec<Connection>, LatticeError> {
    orbit_codes(conn, budget)?
        .into_iter()
        .map(|c| Connection::from_code(conn.graph.clone(), conn.group.clone(), c))
        .collect()
}

/// Partitions all connections into gauge orbits; returns the orbit index
/// of every connection code and the number of orbits.
fn orbit_partition(graph: &Graph, group: &FiniteGroup, budget: u64) -> Result<(Vec<usize>, usize), LatticeError> {
    let n = group.order();
    let conns = enumeration_size(n, graph.edge_count(), budget)?;
    let transforms = enumeration_size(n, graph.vertex_count(), budget)?;
    let mut class = vec![usize::MAX; conns];
    let mut count = 0;
    for code in 0..conns {
        if class[code] != usize::MAX {
            continue;
        }
        let values = decode(code, n, graph.edge_count());
        for t in 0..transforms {
            let g = decode(t, n, graph.vertex_count());
            class[encode(&act_indices(group, graph, &values, &g), n)] = count;
        }
        count += 1;
    }
    Ok((class, count))
}

/// Number of gauge orbits in the space of connections, by exhaustive
/// orbit partition. Both `|G|^|E|` and `|G|^|V|` must fit in `budget`.
pub fn quotient_class_count(graph: &Graph, group: &GroupContext, budget: u64) -> Result<usize, LatticeError> {
    Ok(orbit_partition(graph, group.require_finite()?, budget)?.1)
}

/// Result of matching gauge classes with `Ad`-classes of hoop holonomies.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ClassMatching {
    pub gauge_classes: usize,
    pub ad_classes: usize,
    /// Distinct gauge classes have distinct holonomy classes.
    pub injective: bool,
    /// Every `Ad`-class of `G^rank` is hit.
    pub surjective: bool,
}

/// Sends every gauge class `[A]` to the `Ad`-class of
/// `(h_A(α₁), …, h_A(α_r))` for the free hoop generators `αᵢ`, and checks
/// that this is a bijection onto `G^r / Ad`.
pub fn match_quotient_classes(graph: &Arc<Graph>, group: &GroupContext, budget: u64) -> Result<ClassMatching, LatticeError> {
    let fg = group.require_finite()?;
    let n = fg.order();
    let (class, count) = orbit_partition(graph, fg, budget)?;
    let generators = graph.loop_generators();
    let rank = generators.len();
    let ad = group.simultaneous_ad_classes(rank, budget)?;

    let hoop_holonomy = |values: &[usize], word: &PathWord| -> usize {
        word.steps().iter().fold(fg.identity(), |acc, s| {
            let h = values[graph.edge_position(s.edge).expect("generator edge")];
            match s.dir {
                Direction::Forward => fg.mul(acc, h),
                Direction::Backward => fg.mul(acc, fg.inv(h)),
            }
        })
    };

    let mut images: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut representative_seen = vec![false; count];
    for (code, &c) in class.iter().enumerate() {
        if std::mem::replace(&mut representative_seen[c], true) {
            continue;
        }
        let values = decode(code, n, graph.edge_count());
        let tuple: Vec<usize> = generators.iter().map(|w| hoop_holonomy(&values, w)).collect();
        let canonical = (0..n)
            .map(|g| encode(&tuple.iter().map(|&x| fg.conj(x, g)).collect::<Vec<_>>(), n))
            .min()
            .expect("nonempty group");
        images.entry(canonical).or_default().push(c);
    }
    Ok(ClassMatching {
        gauge_classes: count,
        ad_classes: ad,
        injective: images.values().all(|v| v.len() == 1),
        surjective: images.len() == ad,
    })
}

/// Exhaustively checks that `project_connection(table, ·)` hits every
/// coarse connection.
pub fn projection_is_surjective(table: &RefinementTable, group: &Arc<GroupContext>, budget: u64) -> Result<bool, LatticeError> {
    let n = group.require_finite()?.order();
    let coarse_total = enumeration_size(n, table.coarse().edge_count(), budget)?;
    let mut hit = vec![false; coarse_total];
    for fine in enumerate_connections(table.fine().clone(), group.clone(), budget)? {
        let coarse = project_connection(table, &fine)?;
        hit[coarse.code().expect("finite")] = true;
    }
    Ok(hit.into_iter().all(|h| h))
}
