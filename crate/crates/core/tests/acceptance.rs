//! Acceptance criteria, one line per criterion. Exits non-zero if any fails.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use gauge_orbits::cli::gen;
use gauge_orbits::graph::{Graph, RefinementTable, Step, CATALOG_GRAPHS};
use gauge_orbits::groups::{
    enumeration_size, su2_diagonal, CMatrix, Complex64, GroupContext, GroupElem, MatrixGroup, DEFAULT_TOLERANCE,
};
use gauge_orbits::lattice::{
    enumerate_gauge, orbit_codes, project_connection, project_gauge, projection_is_surjective, quotient_class_count,
    Connection, GaugeTransform,
};
use gauge_orbits::orbit::{
    brute_force_stabilizer, conjugate_stabilizers, factorization_check, holonomy_centralizer,
    reconstruct_stabilizer_element, same_type, stabilizer, stabilizer_with_tree,
};
use gauge_orbits::paths::PathWord;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GROUPS: [&str; 6] = ["Z2", "Z3", "Z4", "S3", "D4", "Q8"];
const BUDGET: u64 = 1_000_000;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

struct Instance {
    group: &'static str,
    graph: &'static str,
    a: Connection,
}

fn group(name: &str) -> Arc<GroupContext> {
    Arc::new(GroupContext::builtin(name).unwrap())
}

fn catalog(name: &str) -> Arc<Graph> {
    Arc::new(Graph::catalog(name).unwrap())
}

/// 240 seeded instances: ten per (group, catalog graph).
fn instances() -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut out = Vec::new();
    for g in GROUPS {
        for c in CATALOG_GRAPHS {
            for _ in 0..10 {
                let a = Connection::random(catalog(c), group(g), &mut rng).unwrap();
                out.push(Instance { group: g, graph: c, a });
            }
        }
    }
    out
}

fn label(i: &Instance) -> String {
    format!("{}/{} {}", i.group, i.graph, i.a.to_json()["edges"])
}

fn criterion_1(all: &[Instance]) -> Outcome {
    for i in all {
        let report = stabilizer(&i.a).map_err(|e| e.to_string())?;
        let brute: BTreeSet<usize> = brute_force_stabilizer(&i.a, BUDGET)
            .map_err(|e| e.to_string())?
            .iter()
            .filter_map(GaugeTransform::code)
            .collect();
        if report.codes() != brute {
            return Err(format!("stabilizer differs from brute force on {}", label(i)));
        }
        let z = holonomy_centralizer(&i.a).map_err(|e| e.to_string())?.order().unwrap();
        if report.order() != z {
            return Err(format!("|B| = {} but |Z| = {z} on {}", report.order(), label(i)));
        }
    }
    Ok(format!("{} instances", all.len()))
}

fn criterion_2(all: &[Instance]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut distinct_trees = 0;
    for i in all {
        let graph = i.a.graph();
        let mut ids: Vec<u64> = graph.edge_ids().collect();
        ids.shuffle(&mut rng);
        let rank: BTreeMap<u64, usize> = ids.iter().enumerate().map(|(k, &id)| (id, k)).collect();
        let shuffled = graph.spanning_tree_by(|id| rank[&id]);
        let reversed = graph.spanning_tree_by(std::cmp::Reverse);
        let base = stabilizer(&i.a).map_err(|e| e.to_string())?.codes();
        for tree in [shuffled, reversed] {
            if tree != graph.spanning_tree() {
                distinct_trees += 1;
            }
            if stabilizer_with_tree(&i.a, &tree).map_err(|e| e.to_string())?.codes() != base {
                return Err(format!("stabilizer depends on the tree on {}", label(i)));
            }
        }
    }
    Ok(format!("{} instances, {distinct_trees} non-default trees", all.len()))
}

fn criterion_3(all: &[Instance]) -> Outcome {
    let mut extra = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for g in GROUPS {
        for c in CATALOG_GRAPHS {
            let t = gen::random_subdivision(&catalog(c), 2, "s", 100, &mut rng);
            let n = group(g).order().unwrap();
            if enumeration_size(n, t.fine().vertex_count(), BUDGET).is_ok() {
                extra.push(Instance { group: g, graph: c, a: Connection::random(t.fine().clone(), group(g), &mut rng).unwrap() });
            }
        }
    }
    let mut checked = 0;
    for i in all.iter().chain(&extra) {
        let n = i.a.group().order().unwrap();
        let total = enumeration_size(n, i.a.graph().vertex_count(), BUDGET).unwrap();
        let orbit = orbit_codes(&i.a, BUDGET).map_err(|e| e.to_string())?.len();
        let b = stabilizer(&i.a).map_err(|e| e.to_string())?.order();
        if orbit * b != total {
            return Err(format!("|orbit|·|B| = {orbit}·{b} ≠ {total} on {}", label(i)));
        }
        checked += 1;
    }
    Ok(format!("{checked} instances ({} on subdivided graphs)", extra.len()))
}

/// S3 as permutation arrays of {0,1,2}, composed as `(pq)(x) = p(q(x))`.
fn s3_permutations() -> Vec<[usize; 3]> {
    vec![[0, 1, 2], [1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0], [2, 0, 1]]
}

fn compose(p: [usize; 3], q: [usize; 3]) -> [usize; 3] {
    [p[q[0]], p[q[1]], p[q[2]]]
}

fn criterion_4() -> Outcome {
    let perms = s3_permutations();
    let burnside: usize = perms
        .iter()
        .map(|&a| perms.iter().filter(|&&b| compose(a, b) == compose(b, a)).count().pow(2))
        .sum::<usize>()
        / perms.len();
    let s3 = group("S3");
    let ad2 = s3.simultaneous_ad_classes(2, BUDGET).map_err(|e| e.to_string())?;
    let f8 = quotient_class_count(&catalog("figure-eight"), &s3, BUDGET).map_err(|e| e.to_string())?;
    let lp = quotient_class_count(&catalog("loop"), &s3, BUDGET).map_err(|e| e.to_string())?;
    let seg = Graph::new(&["m", "a"], "m", &[(0, "m", "a")]).unwrap();
    let star = Graph::new(&["m", "a", "b", "c"], "m", &[(0, "m", "a"), (1, "b", "m"), (2, "a", "c")]).unwrap();
    let tree1 = quotient_class_count(&seg, &group("Z3"), BUDGET).map_err(|e| e.to_string())?;
    let tree2 = quotient_class_count(&star, &group("S3"), BUDGET).map_err(|e| e.to_string())?;
    if burnside != 11 || ad2 != burnside || f8 != ad2 || lp != 3 || tree1 != 1 || tree2 != 1 {
        return Err(format!(
            "figure-eight {f8}, Ad-classes {ad2}, Burnside {burnside}, loop {lp}, trees {tree1} {tree2}"
        ));
    }
    Ok("figure-eight/S3 = 11 = Burnside, loop/S3 = 3, trees = 1".into())
}

fn next_id(graph: &Graph) -> u64 {
    graph.edge_ids().max().map_or(0, |m| m + 1)
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut chains = 0;
    for k in 0..120 {
        let g = group(GROUPS[k % GROUPS.len()]);
        let coarse = catalog(CATALOG_GRAPHS[(k / GROUPS.len()) % CATALOG_GRAPHS.len()]);
        let t12 = gen::random_subdivision(&coarse, 2, "u", next_id(&coarse), &mut rng);
        let t23 = gen::random_subdivision(t12.fine(), 2, "w", next_id(t12.fine()), &mut rng);
        let t13 = t12.then(&t23).map_err(|e| e.to_string())?;
        let a3 = Connection::random(t23.fine().clone(), g.clone(), &mut rng).unwrap();
        let g3 = GaugeTransform::random(t23.fine().clone(), g.clone(), &mut rng).unwrap();
        let p = |t: &RefinementTable, a: &Connection| project_connection(t, a).map_err(|e| e.to_string());
        let q = |t: &RefinementTable, x: &GaugeTransform| project_gauge(t, x).map_err(|e| e.to_string());
        if p(&t12, &p(&t23, &a3)?)?.values() != p(&t13, &a3)?.values() {
            return Err(format!("composition fails on chain {k}"));
        }
        if q(&t12, &q(&t23, &g3)?)?.values() != q(&t13, &g3)?.values() {
            return Err(format!("gauge composition fails on chain {k}"));
        }
        for t in [&t12, &t13] {
            let fine_a = if std::ptr::eq(t, &t12) { p(&t23, &a3)? } else { a3.clone() };
            let fine_g = if std::ptr::eq(t, &t12) { q(&t23, &g3)? } else { g3.clone() };
            let lhs = p(t, &fine_a.act(&fine_g).unwrap())?;
            let rhs = p(t, &fine_a)?.act(&q(t, &fine_g)?).unwrap();
            if lhs.values() != rhs.values() {
                return Err(format!("equivariance fails on chain {k}"));
            }
        }
        chains += 1;
    }

    let mut surjective = 0;
    for name in ["Z2", "Z3"] {
        let g = group(name);
        let edge = Arc::new(Graph::new(&["m", "a"], "m", &[(0, "m", "a")]).unwrap());
        for pieces in 1..=4 {
            let names: Vec<String> = (0..=pieces).map(|i| if i == 0 { "m".into() } else if i == pieces { "a".into() } else { format!("c{i}") }).collect();
            let edges: Vec<(u64, &str, &str)> = (0..pieces).map(|i| (i as u64 + 1, names[i].as_str(), names[i + 1].as_str())).collect();
            let mut vertices = names.clone();
            vertices.sort_by_key(|v| (v != "m", v != "a", v.clone()));
            let fine = Arc::new(Graph::new(&vertices, "m", &edges).unwrap());
            let word = (1..=pieces as u64).map(Step::forward).collect();
            let t = RefinementTable::new(edge.clone(), fine, vec![0, 1], vec![word]).map_err(|e| e.to_string())?;
            if !projection_is_surjective(&t, &g, BUDGET).map_err(|e| e.to_string())? {
                return Err(format!("{name}: subdivision into {pieces} not surjective"));
            }
            surjective += 1;
        }
        for c in CATALOG_GRAPHS {
            let coarse = catalog(c);
            let t = gen::random_subdivision(&coarse, 1, "u", next_id(&coarse), &mut rng);
            if !projection_is_surjective(&t, &g, BUDGET).map_err(|e| e.to_string())? {
                return Err(format!("{name}: subdivided {c} not surjective"));
            }
            surjective += 1;
        }
    }
    Ok(format!("{chains} chains, {surjective} exhaustive surjectivity checks"))
}

/// Brute-force search for `q` with `q⁻¹ B₁ q = B₂` over the whole gauge group.
fn gauge_conjugate(b1: &[GaugeTransform], b2: &BTreeSet<usize>, graph: &Arc<Graph>, g: &Arc<GroupContext>) -> bool {
    b1.len() == b2.len()
        && enumerate_gauge(graph.clone(), g.clone(), BUDGET).unwrap().any(|q| {
            b1.iter().map(|b| b.conj(&q).unwrap().code().unwrap()).collect::<BTreeSet<_>>() == *b2
        })
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut pairs, mut conjugate) = (0, 0);
    for k in 0..72 {
        let g = group(GROUPS[k % GROUPS.len()]);
        let graph = catalog(CATALOG_GRAPHS[(k / GROUPS.len()) % CATALOG_GRAPHS.len()]);
        let a1 = Connection::random(graph.clone(), g.clone(), &mut rng).unwrap();
        let a2 = if k % 2 == 0 {
            a1.act(&GaugeTransform::random(graph.clone(), g.clone(), &mut rng).unwrap()).unwrap()
        } else {
            Connection::random(graph.clone(), g.clone(), &mut rng).unwrap()
        };
        let r1 = stabilizer(&a1).map_err(|e| e.to_string())?;
        let r2 = stabilizer(&a2).map_err(|e| e.to_string())?;
        let by_gauge = gauge_conjugate(&r1.stabilizer, &r2.codes(), &graph, &g);
        let verdict = same_type(&a1, &a2).map_err(|e| e.to_string())?;
        let by_group = g.find_conjugator(&r1.centralizer, &r2.centralizer).map_err(|e| e.to_string())?;
        if by_gauge != by_group.is_some() || verdict.same != by_gauge {
            return Err(format!("gauge conjugacy {by_gauge} vs group conjugacy {} on pair {k}", by_group.is_some()));
        }
        if let Some(w) = verdict.witness {
            let zc: BTreeSet<usize> = r1.centralizer.elements.iter().flatten().map(|z| g.conj(z, &w).unwrap().index().unwrap()).collect();
            let z2: BTreeSet<usize> = r2.centralizer.elements.iter().flatten().map(|z| z.index().unwrap()).collect();
            let q = conjugate_stabilizers(&a1, &a2, &w).map_err(|e| e.to_string())?;
            let conj: BTreeSet<usize> = r1.stabilizer.iter().map(|b| b.conj(&q).unwrap().code().unwrap()).collect();
            if zc != z2 || conj != r2.codes() {
                return Err(format!("witness {} fails explicit set conjugation on pair {k}", g.display(&w)));
            }
            conjugate += 1;
        }
        pairs += 1;
    }
    Ok(format!("{pairs} pairs, {conjugate} conjugate"))
}

fn criterion_7(all: &[Instance]) -> Outcome {
    let mut checked = 0;
    let single = Arc::new(Graph::new(&["m"], "m", &[]).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut extra = Vec::new();
    for g in GROUPS {
        extra.push(Instance { group: g, graph: "single", a: Connection::trivial(single.clone(), group(g)) });
        let t = gen::random_subdivision(&catalog("theta"), 1, "s", 10, &mut rng);
        extra.push(Instance { group: g, graph: "theta*", a: Connection::random(t.fine().clone(), group(g), &mut rng).unwrap() });
    }
    for i in all.iter().chain(&extra) {
        let n = i.a.group().order().unwrap();
        if enumeration_size(n, i.a.graph().vertex_count(), 100_000).is_err() {
            continue;
        }
        let r = factorization_check(&i.a, 100_000).map_err(|e| e.to_string())?;
        if !r.holds() {
            return Err(format!("{r:?} on {}", label(i)));
        }
        checked += 1;
    }
    Ok(format!("{checked} instances"))
}

fn naive_reduce(steps: &[Step]) -> Vec<Step> {
    let mut s = steps.to_vec();
    let mut changed = true;
    while changed {
        changed = false;
        for i in 1..s.len() {
            if s[i - 1].edge == s[i].edge && s[i - 1].dir != s[i].dir {
                s.drain(i - 1..=i);
                changed = true;
                break;
            }
        }
    }
    s
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let graphs: Vec<Arc<Graph>> = CATALOG_GRAPHS.iter().map(|c| catalog(c)).collect();
    let bouquet = Arc::new(Graph::new(&["m"], "m", &[(0, "m", "m"), (1, "m", "m"), (2, "m", "m")]).unwrap());
    for k in 0..10_000 {
        let len = rng.gen_range(0..=64);
        let w: PathWord = if k % 5 == 4 {
            gen::random_bouquet_word(&bouquet, len, &mut rng)
        } else {
            gen::random_walk(graphs.choose(&mut rng).unwrap(), len, &mut rng)
        };
        let r = w.reduce();
        if r.steps() != naive_reduce(w.steps()).as_slice() {
            return Err(format!("reduce disagrees with oracle on {w}"));
        }
        if r.reduce() != r {
            return Err(format!("reduce not idempotent on {w}"));
        }
        if !w.compose(&w.inverse()).unwrap().reduce().is_empty() {
            return Err(format!("w·w⁻¹ not trivial for {w}"));
        }
    }
    Ok("10000 words".into())
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for n in 1..=3 {
        let g = MatrixGroup::new(n, DEFAULT_TOLERANCE, vec![]).unwrap();
        if g.commutant_dimension(&[]) != n * n {
            return Err(format!("empty commutant in dimension {n}"));
        }
    }
    let su2 = MatrixGroup::new(2, 1e-9, vec![]).unwrap();
    let diag = su2.commutant_dimension(&[su2_diagonal(0.3), su2_diagonal(2.1)]);
    // two explicit non-commuting SU(2) elements
    let x = CMatrix::from_row_slice(2, 2, &[Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0), Complex64::new(0.0, 0.0)]);
    let y = su2_diagonal(0.7);
    let generic = su2.commutant_dimension(&[x, y]);
    let random = su2.commutant_dimension(&[gen::random_su2(&mut rng), gen::random_su2(&mut rng)]);
    if diag != 2 || generic != 1 || random != 1 {
        return Err(format!("commutant dims: diagonal {diag}, explicit pair {generic}, random pair {random}"));
    }

    let context = Arc::new(GroupContext::matrix(su2.clone()));
    let mut worst: f64 = 0.0;
    let mut checks = 0;
    for c in CATALOG_GRAPHS {
        let graph = catalog(c);
        for _ in 0..25 {
            let abelian = Connection::from_fn(graph.clone(), context.clone(), |_| GroupElem::Matrix(su2_diagonal(rng.gen_range(0.0..6.3)))).unwrap();
            let z = GroupElem::Matrix(su2_diagonal(rng.gen_range(0.0..6.3)));
            let g = reconstruct_stabilizer_element(&abelian, &z).map_err(|e| e.to_string())?;
            worst = worst.max(abelian.act(&g).unwrap().max_deviation(&abelian).unwrap());

            let generic = Connection::from_fn(graph.clone(), context.clone(), |_| GroupElem::Matrix(gen::random_su2(&mut rng))).unwrap();
            let minus = GroupElem::Matrix(-su2.identity());
            let g = reconstruct_stabilizer_element(&generic, &minus).map_err(|e| e.to_string())?;
            worst = worst.max(generic.act(&g).unwrap().max_deviation(&generic).unwrap());
            checks += 2;
        }
    }
    if worst > 1e-8 {
        return Err(format!("edge deviation {worst:e} exceeds 1e-8"));
    }
    Ok(format!("dims n², 2, 1; {checks} reconstructions, max deviation {worst:.1e}"))
}

fn main() -> ExitCode {
    let all = instances();
    let criteria: Vec<Criterion> = vec![
        ("stabilizer equals brute force, |B| = |Z|", Box::new(|| criterion_1(&all))),
        ("tree independence", Box::new(|| criterion_2(&all))),
        ("orbit-stabilizer counting", Box::new(|| criterion_3(&all))),
        ("quotient counting", Box::new(criterion_4)),
        ("projection laws", Box::new(criterion_5)),
        ("conjugacy equivalence", Box::new(criterion_6)),
        ("factorization bijection", Box::new(|| criterion_7(&all))),
        ("word reduction", Box::new(criterion_8)),
        ("matrix backend", Box::new(criterion_9)),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name} ({detail}) [{secs:.2}s]", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {detail} [{secs:.2}s]", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
