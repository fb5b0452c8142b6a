//! Holonomy groups, stabilizers and orbit types.
//!
//! For a connection `A` with holonomy group `H_A` the stabilizer
//! `B(A) = {g | A∘g = A}` is isomorphic to the centralizer `Z(H_A)` via
//! `g ↦ g_m`; the inverse sends `z` to `x ↦ h_A(γ_x)⁻¹ z h_A(γ_x)` for the
//! spanning-tree paths `γ_x`. The orbit type of `A` is the conjugacy class
//! of `Z(H_A)`, and two connections share a type exactly when their
//! stabilizers are conjugate in the gauge group.
//!
//! Operations that compare connections on two different graphs identify
//! their vertices through [`Graph::based_order`]; both graphs must then have
//! the same number of vertices.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::graph::{Graph, GraphError, SpanningTree};
use crate::groups::{
    enumeration_size, Automorphism, BudgetExceeded, FiniteGroup, GroupContext, GroupElem, GroupError, OrbitType,
    SubgroupDescriptor, DEFAULT_CLOSURE_CAP,
};
use crate::lattice::{act_indices, decode, encode, orbit_codes, Connection, GaugeTransform, LatticeError};
use crate::paths::{same_graph, PathWord};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OrbitError {
    #[error("element `{0}` does not commute with the holonomy group")]
    NotInCentralizer(String),
    #[error("`{0}` does not conjugate one holonomy centralizer onto the other")]
    NotAConjugator(String),
    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("automorphism does not map one holonomy centralizer onto the other")]
    CentralizerMismatch,
    #[error("gauge map does not carry one stabilizer onto the other")]
    StabilizerMismatch,
    #[error("graphs have {0} and {1} vertices")]
    VertexCountMismatch(usize, usize),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
}

impl OrbitError {
    pub fn is_budget(&self) -> bool {
        match self {
            OrbitError::Budget(_) | OrbitError::Group(GroupError::Budget(_)) => true,
            OrbitError::Lattice(e) => e.is_budget(),
            _ => false,
        }
    }
}

/// Finite-group view of a connection with precomputed tree holonomies.
struct Frame<'a> {
    fg: &'a FiniteGroup,
    graph: &'a Arc<Graph>,
    conn: Vec<usize>,
    /// `h_A(γ_x)` by vertex position.
    base: Vec<usize>,
    /// Holonomies of the free hoop generators.
    loops: Vec<usize>,
}

impl<'a> Frame<'a> {
    fn new(a: &'a Connection, tree: &SpanningTree) -> Result<Self, OrbitError> {
        let fg = a.group().require_finite()?;
        let graph = a.graph();
        let index = |e: GroupElem| e.index().expect("finite value");
        let base = tree
            .paths(graph)
            .iter()
            .map(|p| a.holonomy(p).map(index))
            .collect::<Result<_, _>>()?;
        let loops = tree
            .loop_generators(graph)
            .iter()
            .map(|p| a.holonomy(p).map(index))
            .collect::<Result<_, _>>()?;
        Ok(Frame { fg, graph, conn: a.finite_values().expect("finite"), base, loops })
    }

    fn centralizer(&self) -> Vec<usize> {
        (0..self.fg.order()).filter(|&z| self.loops.iter().all(|&h| self.fg.commutes(z, h))).collect()
    }

    /// `x ↦ h(γ_x)⁻¹ z h(γ_x)`
    fn reconstruct(&self, z: usize) -> Vec<usize> {
        self.base.iter().map(|&h| self.fg.conj(z, h)).collect()
    }

    fn stabilizer_set(&self) -> BTreeSet<Vec<usize>> {
        self.centralizer().into_iter().map(|z| self.reconstruct(z)).collect()
    }

    fn n(&self) -> usize {
        self.fg.order()
    }

    fn vertices(&self) -> usize {
        self.graph.vertex_count()
    }
}

fn values_of(g: &GaugeTransform) -> Vec<usize> {
    g.finite_values().expect("finite transform")
}

fn transform(a: &Connection, values: &[usize]) -> GaugeTransform {
    GaugeTransform::new(a.graph().clone(), a.group().clone(), values.iter().copied().map(GroupElem::Finite).collect())
        .expect("values fit the graph")
}

/// Reorders vertex-position values into the cross-graph order.
fn aligned(graph: &Graph, values: &[usize]) -> Vec<usize> {
    graph.based_order().iter().map(|&v| values[v]).collect()
}

fn unaligned(graph: &Graph, values: &[usize]) -> Vec<usize> {
    let mut out = vec![0; values.len()];
    for (&v, &x) in graph.based_order().iter().zip(values) {
        out[v] = x;
    }
    out
}

fn hoop_holonomies(a: &Connection, words: &[PathWord]) -> Result<Vec<GroupElem>, OrbitError> {
    Ok(words.iter().map(|w| a.holonomy(w)).collect::<Result<_, _>>()?)
}

fn check_shared(a1: &Connection, a2: &Connection) -> Result<(), OrbitError> {
    if a1.group() != a2.group() {
        return Err(LatticeError::ContextMismatch.into());
    }
    if a1.graph().vertex_count() != a2.graph().vertex_count() {
        return Err(OrbitError::VertexCountMismatch(a1.graph().vertex_count(), a2.graph().vertex_count()));
    }
    Ok(())
}

/// `H_A`: the closure of the hoop-generator holonomies, capped at
/// [`DEFAULT_CLOSURE_CAP`] elements.
pub fn holonomy_group(a: &Connection) -> Result<SubgroupDescriptor, OrbitError> {
    holonomy_group_capped(a, DEFAULT_CLOSURE_CAP)
}

pub fn holonomy_group_capped(a: &Connection, cap: usize) -> Result<SubgroupDescriptor, OrbitError> {
    let gens = hoop_holonomies(a, &a.graph().loop_generators())?;
    Ok(a.group().subgroup(gens, cap)?.with_label("holonomy group"))
}

/// `Z(H_A)`: the centralizer of the hoop-generator holonomies.
pub fn holonomy_centralizer(a: &Connection) -> Result<SubgroupDescriptor, OrbitError> {
    let gens = hoop_holonomies(a, &a.graph().loop_generators())?;
    Ok(a.group().centralizer(&gens)?.with_label("holonomy centralizer"))
}

/// The stabilizer element paired with `z ∈ Z(H_A)`, using the default tree.
pub fn reconstruct_stabilizer_element(a: &Connection, z: &GroupElem) -> Result<GaugeTransform, OrbitError> {
    reconstruct_with_tree(a, z, &a.graph().spanning_tree())
}

/// `x ↦ h_A(γ_x)⁻¹ z h_A(γ_x)` for the paths of `tree`.
pub fn reconstruct_with_tree(a: &Connection, z: &GroupElem, tree: &SpanningTree) -> Result<GaugeTransform, OrbitError> {
    let group = a.group();
    for h in hoop_holonomies(a, &tree.loop_generators(a.graph()))? {
        if !group.commutes(z, &h)? {
            return Err(OrbitError::NotInCentralizer(group.display(z)));
        }
    }
    let values = tree
        .paths(a.graph())
        .iter()
        .map(|p| group.conj(z, &a.holonomy(p)?).map_err(OrbitError::from))
        .collect::<Result<_, _>>()?;
    Ok(GaugeTransform::new(a.graph().clone(), group.clone(), values)?)
}

/// `B(A)` reconstructed from `Z(H_A)`, with the pairing `z ↔ g` and the
/// tree paths used.
#[derive(Clone, Debug)]
pub struct StabilizerReport {
    pub connection: Connection,
    pub centralizer: SubgroupDescriptor,
    /// Sorted by lexicographic code.
    pub stabilizer: Vec<GaugeTransform>,
    /// `(z, g)` with `g_m = z`, in centralizer order.
    pub pairing: Vec<(GroupElem, GaugeTransform)>,
    /// `γ_x` by vertex position.
    pub tree_paths: Vec<PathWord>,
    pub orbit_type: OrbitType,
}

impl StabilizerReport {
    pub fn order(&self) -> usize {
        self.stabilizer.len()
    }

    /// Codes of `B(A)`, for set comparisons.
    pub fn codes(&self) -> BTreeSet<usize> {
        self.stabilizer.iter().filter_map(GaugeTransform::code).collect()
    }

    pub fn to_json(&self) -> Value {
        let group = self.connection.group();
        let graph = self.connection.graph();
        let centralizer: Vec<Value> = self
            .centralizer
            .elements
            .iter()
            .flatten()
            .map(|z| group.elem_to_json(z))
            .collect();
        let pairing: Vec<Value> = self
            .pairing
            .iter()
            .map(|(z, g)| json!({"z": group.elem_to_json(z), "transform": g.named_values()}))
            .collect();
        let paths: serde_json::Map<String, Value> = self
            .tree_paths
            .iter()
            .enumerate()
            .map(|(x, p)| (graph.vertex_name(x).to_string(), p.to_json()))
            .collect();
        json!({
            "centralizer": centralizer,
            "centralizer_order": self.centralizer.order(),
            "stabilizer_order": self.order(),
            "pairing": pairing,
            "tree_paths": paths,
            "orbit_type": orbit_type_json(group, &self.orbit_type),
        })
    }
}

/// `{"order", "class_size", "representative": [names]}`
pub fn orbit_type_json(group: &GroupContext, t: &OrbitType) -> Value {
    json!({
        "order": t.order,
        "class_size": t.class_size,
        "representative": group.names_of(&t.representative),
    })
}

/// `B(A)` from the default spanning tree (finite groups).
pub fn stabilizer(a: &Connection) -> Result<StabilizerReport, OrbitError> {
    stabilizer_with_tree(a, &a.graph().spanning_tree())
}

pub fn stabilizer_with_tree(a: &Connection, tree: &SpanningTree) -> Result<StabilizerReport, OrbitError> {
    let frame = Frame::new(a, tree)?;
    let group = a.group();
    let z = frame.centralizer();
    let centralizer = group.subgroup_from_set(&z)?.with_label("holonomy centralizer");
    let pairing: Vec<(GroupElem, GaugeTransform)> = z
        .iter()
        .map(|&zi| (GroupElem::Finite(zi), transform(a, &frame.reconstruct(zi))))
        .collect();
    let mut stabilizer: Vec<GaugeTransform> = pairing.iter().map(|(_, g)| g.clone()).collect();
    stabilizer.sort_by_key(|g| g.code());
    stabilizer.dedup();
    let orbit_type = group.canonical_class(&centralizer)?;
    Ok(StabilizerReport {
        connection: a.clone(),
        centralizer,
        stabilizer,
        pairing,
        tree_paths: tree.paths(a.graph()),
        orbit_type,
    })
}

/// `{g | A∘g = A}` by exhaustive filter over all `|G|^|V|` transforms,
/// in lexicographic order.
pub fn brute_force_stabilizer(a: &Connection, budget: u64) -> Result<Vec<GaugeTransform>, OrbitError> {
    let fg = a.group().require_finite()?;
    let n = fg.order();
    let graph = a.graph();
    let total = enumeration_size(n, graph.vertex_count(), budget)?;
    let values = a.finite_values().expect("finite");
    Ok((0..total)
        .map(|code| decode(code, n, graph.vertex_count()))
        .filter(|g| act_indices(fg, graph, &values, g) == values)
        .map(|g| transform(a, &g))
        .collect())
}

/// The conjugacy class of `Z(H_A)`.
pub fn orbit_type(a: &Connection) -> Result<OrbitType, OrbitError> {
    Ok(a.group().canonical_class(&holonomy_centralizer(a)?)?)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SameType {
    pub same: bool,
    /// `g` with `g⁻¹ Z(H_A1) g = Z(H_A2)` when `same`.
    pub witness: Option<GroupElem>,
}

/// Compares orbit types; the connections may live on different graphs.
pub fn same_type(a1: &Connection, a2: &Connection) -> Result<SameType, OrbitError> {
    if a1.group() != a2.group() {
        return Err(LatticeError::ContextMismatch.into());
    }
    let group = a1.group();
    let (z1, z2) = (holonomy_centralizer(a1)?, holonomy_centralizer(a2)?);
    let same = group.canonical_class(&z1)? == group.canonical_class(&z2)?;
    let witness = if same { group.find_conjugator(&z1, &z2)? } else { None };
    Ok(SameType { same, witness })
}

/// `q_x = h_{A1}(γ_x)⁻¹ g h_{A2}(γ_x)` on the graph of `a1`, verified to
/// satisfy `q⁻¹ B(A1) q = B(A2)`.
pub fn conjugate_stabilizers(a1: &Connection, a2: &Connection, g: &GroupElem) -> Result<GaugeTransform, OrbitError> {
    check_shared(a1, a2)?;
    let f1 = Frame::new(a1, &a1.graph().spanning_tree())?;
    let f2 = Frame::new(a2, &a2.graph().spanning_tree())?;
    let fg = f1.fg;
    let gi = g.index().filter(|&i| i < fg.order()).ok_or(GroupError::ContextMismatch)?;
    let z2: BTreeSet<usize> = f2.centralizer().into_iter().collect();
    let z1 = f1.centralizer();
    let conjugated: BTreeSet<usize> = z1.iter().map(|&z| fg.conj(z, gi)).collect();
    if conjugated != z2 {
        return Err(OrbitError::NotAConjugator(a1.group().display(g)));
    }
    let h1 = aligned(a1.graph(), &f1.base);
    let h2 = aligned(a2.graph(), &f2.base);
    let q: Vec<usize> = h1.iter().zip(&h2).map(|(&x, &y)| fg.mul(fg.mul(fg.inv(x), gi), y)).collect();

    let b1 = aligned_set(a1.graph(), &f1.stabilizer_set());
    let b2 = aligned_set(a2.graph(), &f2.stabilizer_set());
    if conjugate_gauge_set(fg, &b1, &q) != b2 {
        return Err(OrbitError::NotAConjugator(a1.group().display(g)));
    }
    Ok(transform(a1, &unaligned(a1.graph(), &q)))
}

fn aligned_set(graph: &Graph, set: &BTreeSet<Vec<usize>>) -> BTreeSet<Vec<usize>> {
    set.iter().map(|g| aligned(graph, g)).collect()
}

/// `{q⁻¹ b q | b ∈ set}`, vertex-wise.
fn conjugate_gauge_set(fg: &FiniteGroup, set: &BTreeSet<Vec<usize>>, q: &[usize]) -> BTreeSet<Vec<usize>> {
    set.iter()
        .map(|b| b.iter().zip(q).map(|(&x, &qx)| fg.conj(x, qx)).collect())
        .collect()
}

/// `Ψ(g)_x = h₂(γ_x)⁻¹ ψ(h₁(γ_x) g_x h₁(γ_x)⁻¹) h₂(γ_x)`, a group
/// isomorphism from the gauge group of the first graph to that of the
/// second.
#[derive(Clone, Debug)]
pub struct GaugeMap {
    source: Arc<Graph>,
    target: Arc<Graph>,
    group: Arc<GroupContext>,
    psi: Automorphism,
    /// Tree holonomies in cross-graph order.
    h1: Vec<usize>,
    h2: Vec<usize>,
}

impl GaugeMap {
    pub fn automorphism(&self) -> &Automorphism {
        &self.psi
    }

    pub fn source(&self) -> &Arc<Graph> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Graph> {
        &self.target
    }

    fn fg(&self) -> &FiniteGroup {
        self.group.as_finite().expect("finite")
    }

    /// Applies `Ψ` to raw values in source vertex order.
    pub fn apply_values(&self, g: &[usize]) -> Vec<usize> {
        let fg = self.fg();
        let image: Vec<usize> = aligned(&self.source, g)
            .iter()
            .zip(self.h1.iter().zip(&self.h2))
            .map(|(&gx, (&a, &b))| {
                let inner = fg.mul(fg.mul(a, gx), fg.inv(a));
                fg.mul(fg.mul(fg.inv(b), self.psi.apply(inner)), b)
            })
            .collect();
        unaligned(&self.target, &image)
    }

    pub fn apply(&self, g: &GaugeTransform) -> Result<GaugeTransform, OrbitError> {
        if !same_graph(&self.source, g.graph()) {
            return Err(LatticeError::GraphMismatch.into());
        }
        let values = self.apply_values(&values_of(g)).into_iter().map(GroupElem::Finite).collect();
        Ok(GaugeTransform::new(self.target.clone(), self.group.clone(), values)?)
    }

    /// `Ψ⁻¹`, built from `ψ⁻¹` with the roles of the graphs exchanged.
    pub fn inverse(&self) -> GaugeMap {
        GaugeMap {
            source: self.target.clone(),
            target: self.source.clone(),
            group: self.group.clone(),
            psi: self.psi.inverse(),
            h1: self.h2.clone(),
            h2: self.h1.clone(),
        }
    }
}

/// Builds `Ψ` from an automorphism table `psi` with `ψ(Z(H_A1)) = Z(H_A2)`
/// and checks that it is a homomorphism on sampled pairs, inverts
/// correctly and carries `B(A1)` onto `B(A2)`.
pub fn psi_extension(a1: &Connection, a2: &Connection, psi: &[usize]) -> Result<GaugeMap, OrbitError> {
    check_shared(a1, a2)?;
    let fg = a1.group().require_finite()?;
    let psi = Automorphism::new(fg, psi.to_vec()).map_err(|e| match e {
        GroupError::NotAutomorphism(m) => OrbitError::NotAutomorphism(m),
        other => other.into(),
    })?;
    let f1 = Frame::new(a1, &a1.graph().spanning_tree())?;
    let f2 = Frame::new(a2, &a2.graph().spanning_tree())?;
    let image: BTreeSet<usize> = f1.centralizer().into_iter().map(|z| psi.apply(z)).collect();
    if image != f2.centralizer().into_iter().collect() {
        return Err(OrbitError::CentralizerMismatch);
    }
    let map = GaugeMap {
        source: a1.graph().clone(),
        target: a2.graph().clone(),
        group: a1.group().clone(),
        psi,
        h1: aligned(a1.graph(), &f1.base),
        h2: aligned(a2.graph(), &f2.base),
    };

    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let v = f1.vertices();
    let random = |rng: &mut ChaCha8Rng| (0..v).map(|_| rng.gen_range(0..fg.order())).collect::<Vec<_>>();
    let inverse = map.inverse();
    for _ in 0..64 {
        let (g, h) = (random(&mut rng), random(&mut rng));
        let gh: Vec<usize> = g.iter().zip(&h).map(|(&x, &y)| fg.mul(x, y)).collect();
        let lhs = map.apply_values(&gh);
        let rhs: Vec<usize> = map.apply_values(&g).iter().zip(map.apply_values(&h)).map(|(&x, y)| fg.mul(x, y)).collect();
        if lhs != rhs || inverse.apply_values(&map.apply_values(&g)) != g {
            return Err(OrbitError::NotAutomorphism("extension is not a group isomorphism".into()));
        }
    }
    let mapped: BTreeSet<Vec<usize>> = f1.stabilizer_set().iter().map(|b| map.apply_values(b)).collect();
    if mapped != f2.stabilizer_set() {
        return Err(OrbitError::StabilizerMismatch);
    }
    Ok(map)
}

/// Outcome of building `Φ(A1∘g) = A2∘Ψ(g)` on whole orbits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitMap {
    pub source_size: usize,
    pub target_size: usize,
    /// Independent of the transform chosen to reach a point.
    pub well_defined: bool,
    pub injective: bool,
    pub surjective: bool,
    /// `Φ(x∘h) = Φ(x)∘Ψ(h)` on every point for the sampled `h`.
    pub equivariant: bool,
    pub equivariance_checks: usize,
    /// Source code ↦ target code.
    #[serde(skip)]
    pub map: BTreeMap<usize, usize>,
}

impl OrbitMap {
    pub fn is_bijection(&self) -> bool {
        self.well_defined && self.injective && self.surjective && self.equivariant
    }
}

/// Tabulates `Φ` over all `|G|^|V|` transforms and checks it.
pub fn orbit_map_phi(a1: &Connection, a2: &Connection, psi: &GaugeMap, budget: u64) -> Result<OrbitMap, OrbitError> {
    check_shared(a1, a2)?;
    if !same_graph(psi.source(), a1.graph()) || !same_graph(psi.target(), a2.graph()) {
        return Err(LatticeError::GraphMismatch.into());
    }
    let f1 = Frame::new(a1, &a1.graph().spanning_tree())?;
    let f2 = Frame::new(a2, &a2.graph().spanning_tree())?;
    let mapped: BTreeSet<Vec<usize>> = f1.stabilizer_set().iter().map(|b| psi.apply_values(b)).collect();
    if mapped != f2.stabilizer_set() {
        return Err(OrbitError::StabilizerMismatch);
    }
    let (fg, n, v) = (f1.fg, f1.n(), f1.vertices());
    let total = enumeration_size(n, v, budget)?;
    let (g1, g2) = (a1.graph(), a2.graph());

    let mut map = BTreeMap::new();
    let mut well_defined = true;
    for code in 0..total {
        let g = decode(code, n, v);
        let x = encode(&act_indices(fg, g1, &f1.conn, &g), n);
        let y = encode(&act_indices(fg, g2, &f2.conn, &psi.apply_values(&g)), n);
        if *map.entry(x).or_insert(y) != y {
            well_defined = false;
        }
    }
    let targets: BTreeSet<usize> = map.values().copied().collect();
    let target_orbit = orbit_codes(a2, budget)?;

    let stride = (total / 64).max(1);
    let mut equivariant = true;
    let mut checks = 0;
    for h in (0..total).step_by(stride) {
        let h = decode(h, n, v);
        let ph = psi.apply_values(&h);
        for (&x, &y) in &map {
            let xh = encode(&act_indices(fg, g1, &decode(x, n, g1.edge_count()), &h), n);
            let yh = encode(&act_indices(fg, g2, &decode(y, n, g2.edge_count()), &ph), n);
            checks += 1;
            if map.get(&xh) != Some(&yh) {
                equivariant = false;
            }
        }
    }
    Ok(OrbitMap {
        source_size: map.len(),
        target_size: target_orbit.len(),
        well_defined,
        injective: targets.len() == map.len(),
        surjective: targets == target_orbit,
        equivariant,
        equivariance_checks: checks,
        map,
    })
}

/// Checks of the map `((g_x) with g_m = e, [g] ∈ Z\G) ↦ [φ′(g)·(g_x)] ∈ B\G_Γ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorizationReport {
    /// `|G|^{|V|−1}`
    pub pointed: usize,
    /// `|Z\G|`
    pub centralizer_cosets: usize,
    /// `|B\G_Γ|`, counted by enumeration.
    pub stabilizer_cosets: usize,
    pub well_defined: bool,
    pub injective: bool,
    pub surjective: bool,
    /// `|G|^{|V|−1} · |G|/|Z| = |G|^{|V|}/|B|`
    pub counts_match: bool,
}

impl FactorizationReport {
    pub fn holds(&self) -> bool {
        self.well_defined && self.injective && self.surjective && self.counts_match
    }
}

pub fn factorization_check(a: &Connection, budget: u64) -> Result<FactorizationReport, OrbitError> {
    let f = Frame::new(a, &a.graph().spanning_tree())?;
    let (fg, n, v) = (f.fg, f.n(), f.vertices());
    let total = enumeration_size(n, v, budget)?;
    let base = a.graph().base();
    let z = f.centralizer();
    let b: Vec<Vec<usize>> = f.stabilizer_set().into_iter().collect();

    let right_coset = |k: &[usize]| -> usize {
        b.iter()
            .map(|bi| encode(&bi.iter().zip(k).map(|(&x, &y)| fg.mul(x, y)).collect::<Vec<_>>(), n))
            .min()
            .expect("identity in B")
    };
    let z_coset = |g: usize| z.iter().map(|&zi| fg.mul(zi, g)).min().expect("identity in Z");

    // every B-coset of the gauge group
    let all_cosets: BTreeSet<usize> = (0..total).map(|c| right_coset(&decode(c, n, v))).collect();

    let mut images: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut well_defined = true;
    let mut pointed = 0;
    for code in 0..total {
        let g0 = decode(code, n, v);
        if g0[base] != fg.identity() {
            continue;
        }
        pointed += 1;
        for g in 0..n {
            let k: Vec<usize> = f.reconstruct(g).iter().zip(&g0).map(|(&x, &y)| fg.mul(x, y)).collect();
            let image = right_coset(&k);
            if *images.entry((code, z_coset(g))).or_insert(image) != image {
                well_defined = false;
            }
        }
    }
    let hit: BTreeSet<usize> = images.values().copied().collect();
    let centralizer_cosets = n / z.len();
    Ok(FactorizationReport {
        pointed,
        centralizer_cosets,
        stabilizer_cosets: all_cosets.len(),
        well_defined,
        injective: hit.len() == images.len(),
        surjective: hit == all_cosets,
        counts_match: pointed * centralizer_cosets == total / b.len() && all_cosets.len() * b.len() == total,
    })
}

/// Truth table of the implication chain for a pair of connections.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    /// `B(A1)` and `B(A2)` conjugate in the gauge group (exhaustive).
    pub stabilizers_conjugate: bool,
    /// `Z(H_A1)` and `Z(H_A2)` conjugate in `G`.
    pub centralizers_conjugate: bool,
    /// Some automorphism of `G` maps one centralizer onto the other.
    pub centralizers_extendibly_isomorphic: bool,
    /// Some such automorphism extends to `Ψ` with `Ψ(B(A1)) = B(A2)`.
    pub stabilizers_extendibly_isomorphic: bool,
    pub orbit_sizes: (usize, usize),
    /// An equivariant orbit bijection was built and verified.
    pub orbits_bijective: bool,
}

impl ChainReport {
    /// Every implication of the chain holds, and the first two stages agree.
    pub fn holds(&self) -> bool {
        let implies = |p: bool, q: bool| !p || q;
        self.stabilizers_conjugate == self.centralizers_conjugate
            && implies(self.centralizers_conjugate, self.centralizers_extendibly_isomorphic)
            && implies(self.centralizers_extendibly_isomorphic, self.stabilizers_extendibly_isomorphic)
            && implies(self.stabilizers_extendibly_isomorphic, self.orbits_bijective)
            && implies(self.orbits_bijective, self.orbit_sizes.0 == self.orbit_sizes.1)
    }
}

pub fn implication_chain_check(a1: &Connection, a2: &Connection, budget: u64) -> Result<ChainReport, OrbitError> {
    check_shared(a1, a2)?;
    let f1 = Frame::new(a1, &a1.graph().spanning_tree())?;
    let f2 = Frame::new(a2, &a2.graph().spanning_tree())?;
    let (fg, n, v) = (f1.fg, f1.n(), f1.vertices());
    let total = enumeration_size(n, v, budget)?;

    let b1 = aligned_set(a1.graph(), &f1.stabilizer_set());
    let b2 = aligned_set(a2.graph(), &f2.stabilizer_set());
    let stabilizers_conjugate = b1.len() == b2.len() && (0..total).any(|q| conjugate_gauge_set(fg, &b1, &decode(q, n, v)) == b2);

    let z1 = f1.centralizer();
    let z2: BTreeSet<usize> = f2.centralizer().into_iter().collect();
    let conj_witness = (0..n).find(|&g| z1.iter().map(|&z| fg.conj(z, g)).collect::<BTreeSet<_>>() == z2);

    // inner candidates first so a conjugator is preferred for the orbit map
    let mut candidates: Vec<Automorphism> = conj_witness.map(|g| Automorphism::inner(fg, g)).into_iter().collect();
    candidates.extend(Automorphism::enumerate(fg));
    let matching: Vec<&Automorphism> = candidates
        .iter()
        .filter(|psi| z1.iter().map(|&z| psi.apply(z)).collect::<BTreeSet<_>>() == z2)
        .collect();

    let mut extension = None;
    for psi in &matching {
        match psi_extension(a1, a2, psi.images()) {
            Ok(map) => {
                extension = Some(map);
                break;
            }
            Err(OrbitError::StabilizerMismatch | OrbitError::CentralizerMismatch | OrbitError::NotAutomorphism(_)) => {}
            Err(e) => return Err(e),
        }
    }
    let orbits_bijective = match &extension {
        Some(map) => orbit_map_phi(a1, a2, map, budget)?.is_bijection(),
        None => false,
    };
    Ok(ChainReport {
        stabilizers_conjugate,
        centralizers_conjugate: conj_witness.is_some(),
        centralizers_extendibly_isomorphic: !matching.is_empty(),
        stabilizers_extendibly_isomorphic: extension.is_some(),
        orbit_sizes: (orbit_codes(a1, budget)?.len(), orbit_codes(a2, budget)?.len()),
        orbits_bijective,
    })
}
