//! Seeded property harness behind `gauge-orbits check`.
//!
//! Every suite draws its instances from its own ChaCha8 stream, seeded by
//! `seed_from_u64(seed ^ fnv1a("{suite}/{group}/{graph}"))`, so a report
//! depends only on the configuration and not on suite order.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use super::gen;
use crate::graph::{Graph, GraphError, CATALOG_GRAPHS};
use crate::groups::{
    enumeration_size, su2_diagonal, Automorphism, FiniteGroup, GroupContext, GroupElem, GroupError, MatrixGroup,
    DEFAULT_BUDGET, DEFAULT_CLOSURE_CAP, DEFAULT_TOLERANCE,
};
use crate::lattice::{
    match_quotient_classes, orbit_codes, project_connection, project_gauge, projection_is_surjective,
    quotient_class_count, Connection, GaugeTransform, LatticeError,
};
use crate::orbit::{
    brute_force_stabilizer, conjugate_stabilizers, factorization_check, holonomy_group, implication_chain_check,
    orbit_map_phi, orbit_type, psi_extension, reconstruct_stabilizer_element, same_type, stabilizer,
    stabilizer_with_tree, OrbitError,
};
use crate::paths::{PathError, PathWord};

/// Algorithm identifier written into every report.
pub const PRNG: &str = "ChaCha8Rng";

/// All suite names, sorted.
pub const SUITES: [&str; 18] = [
    "action",
    "chain",
    "closure",
    "conjugacy-classes",
    "extension",
    "factorization",
    "group-axioms",
    "holonomy",
    "holonomy-conjugation",
    "hoop-generators",
    "matrix",
    "orbit-stabilizer",
    "orbit-type",
    "projection",
    "quotient",
    "reduction",
    "stabilizer",
    "tree-independence",
];

/// Suites that enumerate gauge orbits or transform spaces under the budget.
pub const ORBIT_SUITES: [&str; 6] = ["chain", "factorization", "orbit-stabilizer", "orbit-type", "quotient", "stabilizer"];

pub const DEFAULT_GROUPS: [&str; 3] = ["Z2", "S3", "Q8"];

/// Deliberate defects for harness self-tests.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// The harness's gauge action multiplies the first edge value by a
    /// non-identity element whenever the transform is non-trivial.
    CorruptAction,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HarnessError {
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("{0} must be at least 1")]
    ZeroCap(&'static str),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("no {0} selected")]
    Empty(&'static str),
}

#[derive(Clone, Debug)]
pub struct HarnessConfig {
    pub seed: u64,
    pub trials: usize,
    pub groups: Vec<(String, Arc<GroupContext>)>,
    pub graphs: Vec<(String, Arc<Graph>)>,
    /// Cap on every exhaustive enumeration.
    pub budget: u64,
    pub closure_cap: usize,
    pub suites: Vec<String>,
    pub fault: Option<Fault>,
}

impl HarnessConfig {
    /// Default groups, all catalog graphs and every suite.
    pub fn new(seed: u64, trials: usize) -> Self {
        HarnessConfig {
            seed,
            trials,
            groups: DEFAULT_GROUPS
                .iter()
                .map(|n| (n.to_string(), Arc::new(GroupContext::builtin(n).expect("built-in"))))
                .collect(),
            graphs: CATALOG_GRAPHS
                .iter()
                .map(|n| (n.to_string(), Arc::new(Graph::catalog(n).expect("catalog graph"))))
                .collect(),
            budget: DEFAULT_BUDGET,
            closure_cap: DEFAULT_CLOSURE_CAP,
            suites: SUITES.iter().map(|s| s.to_string()).collect(),
            fault: None,
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.trials == 0 {
            return Err(HarnessError::NoTrials);
        }
        if self.budget == 0 {
            return Err(HarnessError::ZeroCap("budget"));
        }
        if self.closure_cap == 0 {
            return Err(HarnessError::ZeroCap("closure cap"));
        }
        if self.groups.is_empty() {
            return Err(HarnessError::Empty("groups"));
        }
        if self.graphs.is_empty() {
            return Err(HarnessError::Empty("graphs"));
        }
        if let Some(s) = self.suites.iter().find(|s| !SUITES.contains(&s.as_str())) {
            return Err(HarnessError::UnknownSuite(s.clone()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SuiteReport {
    pub passed: usize,
    pub failed: usize,
    pub budget_exceeded: usize,
    /// Instances outside the suite's scope (finite-only suites on matrix
    /// groups).
    pub skipped: usize,
    pub counterexample: Option<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HarnessReport {
    pub prng: &'static str,
    pub seed: u64,
    pub trials: usize,
    pub budget: u64,
    pub closure_cap: usize,
    pub groups: Vec<String>,
    pub graphs: Vec<String>,
    pub suites: BTreeMap<String, SuiteReport>,
    pub status: &'static str,
}

impl HarnessReport {
    /// 0 all pass, 2 any failure, 3 budget exceeded without failures.
    pub fn exit_code(&self) -> i32 {
        match self.status {
            "pass" => 0,
            "fail" => 2,
            _ => 3,
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serialises")
    }
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

fn stream(seed: u64, suite: &str, group: &str, graph: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ fnv1a(&format!("{suite}/{group}/{graph}")))
}

pub fn run(config: &HarnessConfig) -> Result<HarnessReport, HarnessError> {
    config.validate()?;
    let mut suites: Vec<&String> = config.suites.iter().collect();
    suites.sort();
    suites.dedup();

    let mut reports = BTreeMap::new();
    for suite in suites {
        let mut report = SuiteReport::default();
        match suite.as_str() {
            "matrix" => {
                for (graph_name, graph) in &config.graphs {
                    let mut rng = stream(config.seed, suite, "U2", graph_name);
                    for trial in 0..config.trials {
                        let outcome = matrix_suite(graph, &mut rng);
                        record(&mut report, outcome, trial, "U2", graph_name, None);
                    }
                }
            }
            _ => {
                let rounds = if suite == "quotient" { 1 } else { config.trials };
                for (group_name, group) in &config.groups {
                    for (graph_name, graph) in &config.graphs {
                        let mut inst = Instance {
                            group: group.clone(),
                            graph: graph.clone(),
                            rng: stream(config.seed, suite, group_name, graph_name),
                            budget: config.budget,
                            cap: config.closure_cap,
                            fault: config.fault,
                            witness: None,
                        };
                        for trial in 0..rounds {
                            inst.witness = None;
                            let outcome = if group.as_finite().is_none() {
                                Err(Failure::OutOfScope)
                            } else {
                                run_suite(suite, &mut inst)
                            };
                            record(&mut report, outcome, trial, group_name, graph_name, inst.witness.take());
                        }
                    }
                }
            }
        }
        reports.insert(suite.clone(), report);
    }

    let failed = reports.values().any(|r| r.failed > 0);
    let budget = reports.values().any(|r| r.budget_exceeded > 0);
    Ok(HarnessReport {
        prng: PRNG,
        seed: config.seed,
        trials: config.trials,
        budget: config.budget,
        closure_cap: config.closure_cap,
        groups: config.groups.iter().map(|(n, _)| n.clone()).collect(),
        graphs: config.graphs.iter().map(|(n, _)| n.clone()).collect(),
        suites: reports,
        status: if failed {
            "fail"
        } else if budget {
            "budget-exceeded"
        } else {
            "pass"
        },
    })
}

fn record(report: &mut SuiteReport, outcome: Outcome, trial: usize, group: &str, graph: &str, witness: Option<Value>) {
    let detail = match outcome {
        Ok(()) => {
            report.passed += 1;
            return;
        }
        Err(Failure::Budget) => {
            report.budget_exceeded += 1;
            return;
        }
        Err(Failure::OutOfScope) => {
            report.skipped += 1;
            return;
        }
        Err(Failure::Violated(d)) => d,
        Err(Failure::Error(d)) => format!("unexpected error: {d}"),
    };
    report.failed += 1;
    if report.counterexample.is_none() {
        report.counterexample = Some(json!({
            "trial": trial,
            "group": group,
            "graph": graph,
            "detail": detail,
            "connection": witness,
        }));
    }
}

#[derive(Debug)]
enum Failure {
    Violated(String),
    Budget,
    OutOfScope,
    Error(String),
}

type Outcome = Result<(), Failure>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let holds: bool = $cond;
        if !holds {
            return Err(Failure::Violated(format!($($msg)+)));
        }
    };
}

impl From<OrbitError> for Failure {
    fn from(e: OrbitError) -> Self {
        if e.is_budget() {
            Failure::Budget
        } else {
            Failure::Error(e.to_string())
        }
    }
}

impl From<LatticeError> for Failure {
    fn from(e: LatticeError) -> Self {
        if e.is_budget() {
            Failure::Budget
        } else {
            Failure::Error(e.to_string())
        }
    }
}

impl From<GroupError> for Failure {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::Budget(_) => Failure::Budget,
            e => Failure::Error(e.to_string()),
        }
    }
}

impl From<crate::groups::BudgetExceeded> for Failure {
    fn from(_: crate::groups::BudgetExceeded) -> Self {
        Failure::Budget
    }
}

impl From<PathError> for Failure {
    fn from(e: PathError) -> Self {
        Failure::Error(e.to_string())
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        Failure::Error(e.to_string())
    }
}

struct Instance {
    group: Arc<GroupContext>,
    graph: Arc<Graph>,
    rng: ChaCha8Rng,
    budget: u64,
    cap: usize,
    fault: Option<Fault>,
    /// Connection under test, for the counterexample dump.
    witness: Option<Value>,
}

impl Instance {
    fn fg(&self) -> &FiniteGroup {
        self.group.as_finite().expect("finite suites run on finite groups")
    }

    fn elem(&mut self) -> GroupElem {
        let n = self.fg().order();
        GroupElem::Finite(self.rng.gen_range(0..n))
    }

    fn connection(&mut self) -> Connection {
        let a = Connection::random(self.graph.clone(), self.group.clone(), &mut self.rng).expect("finite group");
        if self.witness.is_none() {
            self.witness = Some(a.to_json());
        }
        a
    }

    fn gauge(&mut self) -> GaugeTransform {
        GaugeTransform::random(self.graph.clone(), self.group.clone(), &mut self.rng).expect("finite group")
    }

    fn walk(&mut self, max_len: usize) -> PathWord {
        let len = self.rng.gen_range(0..=max_len);
        gen::random_walk(&self.graph.clone(), len, &mut self.rng)
    }

    fn automorphism(&mut self) -> Automorphism {
        let fg = self.group.as_finite().expect("finite").clone();
        gen::random_automorphism(&fg, &mut self.rng)
    }

    /// The gauge action as exercised by the `action` suite.
    fn act(&self, a: &Connection, g: &GaugeTransform) -> Result<Connection, Failure> {
        let out = a.act(g)?;
        match self.fault {
            Some(Fault::CorruptAction)
                if a.graph().edge_count() > 0
                    && *g != GaugeTransform::identity(g.graph().clone(), g.group().clone()) =>
            {
                let fg = self.fg();
                let shift = GroupElem::Finite((fg.identity() + 1) % fg.order());
                let mut values = out.values().to_vec();
                values[0] = self.group.mul(&values[0], &shift)?;
                Ok(Connection::new(a.graph().clone(), a.group().clone(), values)?)
            }
            _ => Ok(out),
        }
    }
}

/// `ψ(A)` edge-wise.
fn apply_automorphism(a: &Connection, psi: &Automorphism) -> Connection {
    let values = a.values().iter().map(|v| GroupElem::Finite(psi.apply(v.index().expect("finite")))).collect();
    Connection::new(a.graph().clone(), a.group().clone(), values).expect("same shape")
}

/// Naive normal form: delete the leftmost cancelling pair until none is left.
fn naive_reduce(word: &PathWord) -> Vec<crate::graph::Step> {
    let mut steps = word.steps().to_vec();
    while let Some(i) = (1..steps.len()).find(|&i| steps[i - 1].cancels(steps[i])) {
        steps.drain(i - 1..=i);
    }
    steps
}

fn run_suite(suite: &str, inst: &mut Instance) -> Outcome {
    match suite {
        "action" => action(inst),
        "chain" => chain(inst),
        "closure" => closure(inst),
        "conjugacy-classes" => conjugacy_classes(inst),
        "extension" => extension(inst),
        "factorization" => factorization(inst),
        "group-axioms" => group_axioms(inst),
        "holonomy" => holonomy(inst),
        "holonomy-conjugation" => holonomy_conjugation(inst),
        "hoop-generators" => hoop_generators(inst),
        "orbit-stabilizer" => orbit_stabilizer(inst),
        "orbit-type" => orbit_type_suite(inst),
        "projection" => projection(inst),
        "quotient" => quotient(inst),
        "reduction" => reduction(inst),
        "stabilizer" => stabilizer_suite(inst),
        "tree-independence" => tree_independence(inst),
        other => unreachable!("validated suite name {other}"),
    }
}

fn group_axioms(inst: &mut Instance) -> Outcome {
    let (a, b, c) = (inst.elem(), inst.elem(), inst.elem());
    let g = &inst.group;
    let e = g.identity();
    ensure!(g.mul(&g.mul(&a, &b)?, &c)? == g.mul(&a, &g.mul(&b, &c)?)?, "associativity fails");
    ensure!(g.mul(&a, &e)? == a && g.mul(&e, &a)? == a, "identity fails");
    ensure!(g.mul(&a, &g.inv(&a)?)? == e, "inverse fails");
    ensure!(g.conj(&a, &b)? == g.mul(&g.mul(&g.inv(&b)?, &a)?, &b)?, "conjugation is not g⁻¹xg");
    Ok(())
}

fn random_subgroup(inst: &mut Instance) -> Result<crate::groups::SubgroupDescriptor, Failure> {
    let k = inst.rng.gen_range(0..=2);
    let gens: Vec<GroupElem> = (0..k).map(|_| inst.elem()).collect();
    Ok(inst.group.subgroup(gens, inst.cap)?)
}

fn closure(inst: &mut Instance) -> Outcome {
    let sub = random_subgroup(inst)?;
    let g = &inst.group;
    let set: BTreeSet<usize> = g.index_set(&sub)?.into_iter().collect();
    let fg = inst.fg();
    ensure!(set.contains(&fg.identity()), "closure lacks the identity");
    ensure!(sub.generators.iter().all(|x| set.contains(&x.index().unwrap())), "closure lacks a generator");
    ensure!(
        set.iter().all(|&x| set.contains(&fg.inv(x)) && set.iter().all(|&y| set.contains(&fg.mul(x, y)))),
        "closure is not closed"
    );
    ensure!(fg.order().is_multiple_of(set.len()), "subgroup order {} does not divide {}", set.len(), fg.order());
    Ok(())
}

fn conjugacy_classes(inst: &mut Instance) -> Outcome {
    let sub = random_subgroup(inst)?;
    let x = inst.elem();
    let g = inst.group.clone();
    let conj = g.conjugate_subgroup(&sub, &x)?;
    ensure!(g.canonical_class(&conj)? == g.canonical_class(&sub)?, "canonical class changes under conjugation");
    let w = g.find_conjugator(&sub, &conj)?;
    ensure!(
        w.is_some_and(|w| g.index_set(&g.conjugate_subgroup(&sub, &w).unwrap()).ok() == g.index_set(&conj).ok()),
        "conjugator search fails"
    );

    let fg = inst.fg();
    let n = fg.order();
    let mut classes = BTreeSet::new();
    for a in 0..n {
        classes.insert((0..n).map(|h| fg.conj(a, h)).min().unwrap());
    }
    ensure!(g.simultaneous_ad_classes(1, inst.budget)? == classes.len(), "Ad-classes of G differ from conjugacy classes");
    let burnside: usize = (0..n).map(|a| (0..n).filter(|&b| fg.commutes(a, b)).count().pow(2)).sum::<usize>() / n;
    ensure!(g.simultaneous_ad_classes(2, inst.budget)? == burnside, "Ad-classes of G² differ from the Burnside count");
    Ok(())
}

fn reduction(inst: &mut Instance) -> Outcome {
    let w = inst.walk(64);
    let r = w.reduce();
    ensure!(r.steps() == naive_reduce(&w).as_slice(), "reduce disagrees with naive oracle on {w}");
    ensure!(r.is_reduced() && r.reduce() == r, "reduce is not idempotent on {w}");
    ensure!(r.start() == w.start() && r.end() == w.end(), "reduce moves endpoints of {w}");
    ensure!(w.compose(&w.inverse())?.reduce().is_empty(), "w·w⁻¹ does not reduce to the trivial path");
    let a = inst.connection();
    ensure!(a.holonomy(&w)? == a.holonomy(&r)?, "holonomy changes under reduction");
    Ok(())
}

fn permuted_tree(inst: &mut Instance) -> crate::graph::SpanningTree {
    let mut ids: Vec<u64> = inst.graph.edge_ids().collect();
    ids.shuffle(&mut inst.rng);
    let rank: BTreeMap<u64, usize> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    inst.graph.spanning_tree_by(|id| rank[&id])
}

fn hoop_generators(inst: &mut Instance) -> Outcome {
    let graph = inst.graph.clone();
    let gens = graph.loop_generators();
    ensure!(gens.len() == graph.rank(), "{} generators for rank {}", gens.len(), graph.rank());
    for w in &gens {
        ensure!(w.is_hoop() && w.start() == graph.base() && !w.is_empty() && w.is_reduced(), "generator {w} is not a reduced hoop");
    }
    let other = permuted_tree(inst).loop_generators(&graph);
    ensure!(other.len() == gens.len(), "generator count depends on the tree");
    let a = inst.connection();
    let g = inst.group.clone();
    let h1: Vec<GroupElem> = gens.iter().map(|w| a.holonomy(w)).collect::<Result<_, _>>()?;
    let h2: Vec<GroupElem> = other.iter().map(|w| a.holonomy(w)).collect::<Result<_, _>>()?;
    ensure!(
        g.index_set(&g.subgroup(h1, inst.cap)?)? == g.index_set(&g.subgroup(h2, inst.cap)?)?,
        "holonomy group depends on the generating hoops"
    );
    Ok(())
}

fn holonomy(inst: &mut Instance) -> Outcome {
    let a = inst.connection();
    let w1 = inst.walk(16);
    let len = inst.rng.gen_range(0..=16);
    let w2 = gen::random_walk_from(&inst.graph.clone(), w1.end(), len, &mut inst.rng);
    let g = &inst.group;
    ensure!(
        a.holonomy(&w1.compose(&w2)?)? == g.mul(&a.holonomy(&w1)?, &a.holonomy(&w2)?)?,
        "holonomy is not multiplicative on {w1} · {w2}"
    );
    ensure!(a.holonomy(&w1.inverse())? == g.inv(&a.holonomy(&w1)?)?, "holonomy of the inverse path");
    ensure!(a.holonomy(&PathWord::empty(inst.graph.clone(), w1.start()))? == g.identity(), "empty word");
    Ok(())
}

fn action(inst: &mut Instance) -> Outcome {
    let a = inst.connection();
    let (g1, g2) = (inst.gauge(), inst.gauge());
    let id = GaugeTransform::identity(inst.graph.clone(), inst.group.clone());
    ensure!(inst.act(&a, &id)? == a, "identity transform moves the connection");
    let lhs = inst.act(&inst.act(&a, &g1)?, &g2)?;
    ensure!(lhs == inst.act(&a, &g1.mul(&g2)?)?, "act is not a right action");
    let w = inst.walk(16);
    let moved = inst.act(&a, &g1)?;
    let g = &inst.group;
    let expected = g.mul(&g.mul(&g.inv(g1.value(w.start()))?, &a.holonomy(&w)?)?, g1.value(w.end()))?;
    ensure!(moved.holonomy(&w)? == expected, "holonomy of A∘g along {w} is not g(x)⁻¹ h g(y)");
    Ok(())
}

fn projection(inst: &mut Instance) -> Outcome {
    let coarse = inst.graph.clone();
    let first = coarse.edge_ids().max().map_or(0, |m| m + 1);
    let t12 = gen::random_subdivision(&coarse, 2, "u", first, &mut inst.rng);
    let next = t12.fine().edge_ids().max().map_or(0, |m| m + 1);
    let t23 = gen::random_subdivision(t12.fine(), 1, "w", next, &mut inst.rng);
    let t13 = t12.then(&t23)?;
    let a3 = Connection::random(t23.fine().clone(), inst.group.clone(), &mut inst.rng)?;
    let g3 = GaugeTransform::random(t23.fine().clone(), inst.group.clone(), &mut inst.rng)?;
    let a2 = project_connection(&t23, &a3)?;
    ensure!(
        project_connection(&t12, &a2)?.values() == project_connection(&t13, &a3)?.values(),
        "connection projections do not compose"
    );
    let g2 = project_gauge(&t23, &g3)?;
    ensure!(
        project_gauge(&t12, &g2)?.values() == project_gauge(&t13, &g3)?.values(),
        "gauge projections do not compose"
    );
    let lhs = project_connection(&t13, &a3.act(&g3)?)?;
    let rhs = project_connection(&t13, &a3)?.act(&project_gauge(&t13, &g3)?)?;
    ensure!(lhs.values() == rhs.values(), "projection is not equivariant");
    let n = inst.fg().order();
    if enumeration_size(n, t12.fine().edge_count(), 10_000).is_ok() {
        ensure!(projection_is_surjective(&t12, &inst.group, 10_000)?, "projection is not surjective");
    }
    Ok(())
}

fn quotient(inst: &mut Instance) -> Outcome {
    let count = quotient_class_count(&inst.graph, &inst.group, inst.budget)?;
    let ad = inst.group.simultaneous_ad_classes(inst.graph.rank(), inst.budget)?;
    ensure!(count == ad, "{count} gauge classes but {ad} Ad-classes");
    let m = match_quotient_classes(&inst.graph, &inst.group, inst.budget)?;
    ensure!(m.injective && m.surjective, "class matching is not a bijection: {m:?}");
    Ok(())
}

fn stabilizer_suite(inst: &mut Instance) -> Outcome {
    let a = inst.connection();
    let report = stabilizer(&a)?;
    let brute: BTreeSet<usize> = brute_force_stabilizer(&a, inst.budget)?.iter().filter_map(GaugeTransform::code).collect();
    ensure!(report.codes() == brute, "reconstructed stabilizer differs from brute force");
    ensure!(Some(report.order()) == report.centralizer.order(), "|B(A)| ≠ |Z(H_A)|");
    for (z, g) in &report.pairing {
        ensure!(g.at_base() == z, "pairing does not evaluate to z at the base");
        ensure!(a.act(g)? == a, "paired transform does not stabilize");
    }
    let k = report.pairing.len();
    for _ in 0..4 {
        let (i, j) = (inst.rng.gen_range(0..k), inst.rng.gen_range(0..k));
        let (z1, t1) = &report.pairing[i];
        let (z2, t2) = &report.pairing[j];
        let t12 = reconstruct_stabilizer_element(&a, &inst.group.mul(z1, z2)?)?;
        ensure!(t12 == t1.mul(t2)?, "pairing is not a homomorphism");
    }
    Ok(())
}

fn tree_independence(inst: &mut Instance) -> Outcome {
    let a = inst.connection();
    let tree = permuted_tree(inst);
    ensure!(stabilizer(&a)?.codes() == stabilizer_with_tree(&a, &tree)?.codes(), "stabilizer depends on the tree");
    Ok(())
}

fn holonomy_conjugation(inst: &mut Instance) -> Outcome {
    let a = inst.connection();
    let g = inst.gauge();
    let grp = &inst.group;
    let moved = grp.index_set(&holonomy_group(&a.act(&g)?)?)?;
    let expected = grp.index_set(&grp.conjugate_subgroup(&holonomy_group(&a)?, g.at_base())?)?;
    ensure!(moved == expected, "H_(A∘g) ≠ g_m⁻¹ H_A g_m");
    Ok(())
}

fn orbit_stabilizer(inst: &mut Instance) -> Outcome {
    let a = inst.connection();
    let orbit = orbit_codes(&a, inst.budget)?.len();
    let b = stabilizer(&a)?.order();
    let total = enumeration_size(inst.fg().order(), inst.graph.vertex_count(), inst.budget)?;
    ensure!(orbit * b == total, "|orbit| · |B| = {orbit} · {b} ≠ {total}");
    Ok(())
}

fn orbit_type_suite(inst: &mut Instance) -> Outcome {
    let a = inst.connection();
    let g = inst.gauge();
    ensure!(orbit_type(&a.act(&g)?)? == orbit_type(&a)?, "orbit type changes along the orbit");
    let a2 = if inst.rng.gen_bool(0.5) { a.act(&inst.gauge())? } else { inst.connection() };
    let verdict = same_type(&a, &a2)?;
    let chain = implication_chain_check(&a, &a2, inst.budget)?;
    ensure!(verdict.same == chain.centralizers_conjugate, "same_type disagrees with the conjugator search");
    ensure!(verdict.same == chain.stabilizers_conjugate, "same_type disagrees with gauge conjugacy of stabilizers");
    if let Some(w) = &verdict.witness {
        conjugate_stabilizers(&a, &a2, w)?;
    }
    Ok(())
}

fn factorization(inst: &mut Instance) -> Outcome {
    let a = inst.connection();
    let r = factorization_check(&a, inst.budget)?;
    ensure!(r.holds(), "factorization fails: {r:?}");
    Ok(())
}

/// `x ↦ h⁻¹ ψ(x) h`
fn twisted(fg: &FiniteGroup, psi: &Automorphism, h: usize) -> Vec<usize> {
    (0..fg.order()).map(|x| fg.conj(psi.apply(x), h)).collect()
}

fn extension(inst: &mut Instance) -> Outcome {
    let a = inst.connection();
    let psi = inst.automorphism();
    let h = inst.gauge();
    let a2 = apply_automorphism(&a, &psi).act(&h)?;
    let images = twisted(inst.fg(), &psi, h.at_base().index().unwrap());
    let map = psi_extension(&a, &a2, &images)?;
    let (g1, g2) = (inst.gauge(), inst.gauge());
    ensure!(map.apply(&g1.mul(&g2)?)? == map.apply(&g1)?.mul(&map.apply(&g2)?)?, "Ψ is not a homomorphism");
    ensure!(map.inverse().apply(&map.apply(&g1)?)? == g1, "Ψ⁻¹ does not invert Ψ");
    let b1 = stabilizer(&a)?;
    let b2: BTreeSet<usize> = stabilizer(&a2)?.codes();
    let mapped: BTreeSet<usize> = b1.stabilizer.iter().map(|g| map.apply(g).map(|x| x.code().unwrap())).collect::<Result<_, _>>()?;
    ensure!(mapped == b2, "Ψ(B(A1)) ≠ B(A2)");
    let phi = orbit_map_phi(&a, &a2, &map, inst.budget)?;
    ensure!(phi.is_bijection(), "orbit map fails: {phi:?}");
    Ok(())
}

fn chain(inst: &mut Instance) -> Outcome {
    let a = inst.connection();
    let kind = inst.rng.gen_range(0..3);
    let a2 = match kind {
        0 => a.act(&inst.gauge())?,
        1 => apply_automorphism(&a, &inst.automorphism()),
        _ => inst.connection(),
    };
    let r = implication_chain_check(&a, &a2, inst.budget)?;
    ensure!(r.holds(), "implication chain fails: {r:?}");
    if kind == 0 {
        ensure!(r.stabilizers_conjugate && r.orbits_bijective, "gauge-equivalent pair not fully related: {r:?}");
    }
    Ok(())
}

fn matrix_suite(graph: &Arc<Graph>, rng: &mut ChaCha8Rng) -> Outcome {
    let mg = MatrixGroup::new(2, DEFAULT_TOLERANCE, vec![])?;
    let group = Arc::new(GroupContext::matrix(mg.clone()).with_label("U2"));
    let (x, y) = (gen::random_su2(rng), gen::random_su2(rng));
    ensure!(mg.commutant_dimension(&[]) == 4, "empty commutant");
    ensure!(mg.commutant_dimension(&[su2_diagonal(0.4), su2_diagonal(1.3)]) == 2, "diagonal commutant");
    ensure!(mg.commutant_dimension(&[x.clone(), y.clone()]) == 1, "generic pair commutant");
    let v = gen::random_su2(rng);
    let conj = |m: &crate::groups::CMatrix| v.adjoint() * m * &v;
    ensure!(mg.commutant_dimension(&[conj(&x), conj(&y)]) == 1, "commutant changes under conjugation");
    ensure!(mg.commutant_dimension(&[conj(&su2_diagonal(0.7))]) == 2, "commutant changes under conjugation");

    let diagonal = Connection::from_fn(graph.clone(), group.clone(), |_| GroupElem::Matrix(su2_diagonal(rng.gen_range(0.0..6.3))))?;
    let z = GroupElem::Matrix(su2_diagonal(rng.gen_range(0.0..6.3)));
    let g = reconstruct_stabilizer_element(&diagonal, &z)?;
    ensure!(diagonal.act(&g)?.max_deviation(&diagonal)? <= 1e-8, "reconstructed element moves a diagonal connection");

    let generic = Connection::from_fn(graph.clone(), group.clone(), |_| GroupElem::Matrix(gen::random_su2(rng)))?;
    let minus = GroupElem::Matrix(-mg.identity());
    let g = reconstruct_stabilizer_element(&generic, &minus)?;
    ensure!(generic.act(&g)?.max_deviation(&generic)? <= 1e-8, "central element moves a connection");
    if graph.rank() > 0 {
        let w = GroupElem::Matrix(gen::random_su2(rng));
        ensure!(
            matches!(reconstruct_stabilizer_element(&generic, &w), Err(OrbitError::NotInCentralizer(_))),
            "generic element accepted as centralizing"
        );
    }
    Ok(())
}
