//! Exact finite groups stored as Cayley tables.

use std::collections::{HashMap, VecDeque};

use super::GroupError;

/// Largest group order for which a full multiplication table is built.
pub const MAX_TABLE_ORDER: usize = 1024;

/// A finite group given by its multiplication table.
///
/// Elements are the indices `0..order()`. Products follow the table
/// row-by-column: `mul(a, b) = table[a][b]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    names: Vec<String>,
    table: Vec<usize>,
    inverse: Vec<usize>,
    identity: usize,
}

impl FiniteGroup {
    /// Builds a group from an explicit table, checking the group axioms.
    pub fn from_table(names: Vec<String>, mul: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let n = mul.len();
        if n == 0 {
            return Err(GroupError::InvalidTable("empty table".into()));
        }
        if names.len() != n {
            return Err(GroupError::InvalidTable(format!(
                "{} names for a table of order {n}",
                names.len()
            )));
        }
        let mut seen = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if let Some(j) = seen.insert(name.as_str(), i) {
                return Err(GroupError::InvalidTable(format!(
                    "duplicate element name `{name}` at {j} and {i}"
                )));
            }
        }
        let mut table = Vec::with_capacity(n * n);
        for (i, row) in mul.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::InvalidTable(format!("row {i} has length {}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(GroupError::InvalidTable(format!("entry {bad} out of range in row {i}")));
            }
            table.extend_from_slice(row);
        }
        Self::from_flat(names, table)
    }

    fn from_flat(names: Vec<String>, table: Vec<usize>) -> Result<Self, GroupError> {
        let n = names.len();
        let at = |a: usize, b: usize| table[a * n + b];

        // Latin square
        for a in 0..n {
            let mut row = vec![false; n];
            let mut col = vec![false; n];
            for b in 0..n {
                if std::mem::replace(&mut row[at(a, b)], true) {
                    return Err(GroupError::InvalidTable(format!("row {a} is not a permutation")));
                }
                if std::mem::replace(&mut col[at(b, a)], true) {
                    return Err(GroupError::InvalidTable(format!("column {a} is not a permutation")));
                }
            }
        }

        let identity = (0..n)
            .find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or_else(|| GroupError::InvalidTable("no identity element".into()))?;

        let mut inverse = vec![0; n];
        for (a, slot) in inverse.iter_mut().enumerate() {
            // Latin square guarantees exactly one right inverse
            let b = (0..n).find(|&b| at(a, b) == identity).expect("latin square row");
            if at(b, a) != identity {
                return Err(GroupError::InvalidTable(format!("element {a} has no two-sided inverse")));
            }
            *slot = b;
        }

        let group = FiniteGroup { names, table, inverse, identity };
        group.check_associative()?;
        Ok(group)
    }

    fn check_associative(&self) -> Result<(), GroupError> {
        let n = self.order();
        let fail = |a, b, c| Err(GroupError::InvalidTable(format!("not associative at ({a},{b},{c})")));
        if n <= 128 {
            for a in 0..n {
                for b in 0..n {
                    let ab = self.mul(a, b);
                    for c in 0..n {
                        if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                            return fail(a, b, c);
                        }
                    }
                }
            }
        } else {
            // spot check on a fixed pseudo-random sample
            let mut state: u64 = 0x9E37_79B9_7F4A_7C15;
            for _ in 0..200_000 {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let a = (state >> 33) as usize % n;
                let b = (state >> 13) as usize % n;
                let c = (state >> 43) as usize % n;
                if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                    return fail(a, b, c);
                }
            }
        }
        Ok(())
    }

    /// Generates the permutation group spanned by `generators` on `degree`
    /// points. Each generator lists the (0-based) image of every point.
    ///
    /// Composition is functional: `(p * q)(x) = p(q(x))`. Element 0 is the
    /// identity; the rest appear in breadth-first order.
    pub fn from_permutations(generators: &[Vec<usize>], degree: usize) -> Result<Self, GroupError> {
        for (i, p) in generators.iter().enumerate() {
            if p.len() != degree {
                return Err(GroupError::InvalidTable(format!(
                    "permutation {i} has length {} (degree {degree})",
                    p.len()
                )));
            }
            let mut hit = vec![false; degree];
            for &x in p {
                if x >= degree || std::mem::replace(&mut hit[x], true) {
                    return Err(GroupError::InvalidTable(format!("generator {i} is not a permutation")));
                }
            }
        }

        let identity: Vec<usize> = (0..degree).collect();
        let mut perms = vec![identity.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(identity, 0)]);
        let mut queue = VecDeque::from([0]);
        while let Some(i) = queue.pop_front() {
            for g in generators {
                let next = compose_perm(&perms[i], g);
                if !index.contains_key(&next) {
                    if perms.len() == MAX_TABLE_ORDER {
                        return Err(GroupError::InvalidTable(format!(
                            "permutation group exceeds {MAX_TABLE_ORDER} elements"
                        )));
                    }
                    index.insert(next.clone(), perms.len());
                    queue.push_back(perms.len());
                    perms.push(next);
                }
            }
        }

        let n = perms.len();
        let mut table = Vec::with_capacity(n * n);
        for a in &perms {
            for b in &perms {
                table.push(index[&compose_perm(a, b)]);
            }
        }
        let names = perms.iter().map(|p| cycle_notation(p)).collect();
        Self::from_flat(names, table)
    }

    /// The cyclic group of order `n`, written additively with names `"0"`..
    pub fn cyclic(n: usize) -> Result<Self, GroupError> {
        if n == 0 || n > MAX_TABLE_ORDER {
            return Err(GroupError::InvalidTable(format!("cyclic group of order {n}")));
        }
        let names = (0..n).map(|i| i.to_string()).collect();
        let table = (0..n * n).map(|k| (k / n + k % n) % n).collect();
        Self::from_flat(names, table)
    }

    /// The quaternion group `{±1, ±i, ±j, ±k}`.
    pub fn quaternion() -> Self {
        // index = 2 * unit + sign, unit in (1, i, j, k), sign 1 means negative
        const UNITS: [&str; 4] = ["1", "i", "j", "k"];
        // unit product as (sign, unit)
        const PRODUCT: [[(usize, usize); 4]; 4] = [
            [(0, 0), (0, 1), (0, 2), (0, 3)],
            [(0, 1), (1, 0), (0, 3), (1, 2)],
            [(0, 2), (1, 3), (1, 0), (0, 1)],
            [(0, 3), (0, 2), (1, 1), (1, 0)],
        ];
        let mut names = Vec::with_capacity(8);
        for u in UNITS {
            names.push(u.to_string());
            names.push(format!("-{u}"));
        }
        let mut table = Vec::with_capacity(64);
        for a in 0..8 {
            for b in 0..8 {
                let (s, u) = PRODUCT[a / 2][b / 2];
                table.push(2 * u + ((a % 2) ^ (b % 2) ^ s));
            }
        }
        Self::from_flat(names, table).expect("quaternion table")
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order() + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    /// `g⁻¹ x g`
    #[inline]
    pub fn conj(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), x), g)
    }

    #[inline]
    pub fn commutes(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Rows of the multiplication table.
    pub fn rows(&self) -> impl Iterator<Item = &[usize]> {
        self.table.chunks(self.order())
    }

    /// Breadth-first closure of `gens` under multiplication, identity first.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut member = vec![false; self.order()];
        let mut out = vec![self.identity];
        member[self.identity] = true;
        let mut head = 0;
        while head < out.len() {
            let x = out[head];
            head += 1;
            for &g in gens {
                let y = self.mul(x, g);
                if !member[y] {
                    member[y] = true;
                    out.push(y);
                }
            }
        }
        out
    }

    /// Sorted set `g⁻¹ U g`.
    pub fn conjugate_set(&self, set: &[usize], g: usize) -> Vec<usize> {
        let mut out: Vec<usize> = set.iter().map(|&x| self.conj(x, g)).collect();
        out.sort_unstable();
        out
    }

    /// A small generating set, chosen greedily in index order.
    pub fn generating_set(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![self.identity];
        for x in 0..self.order() {
            if span.len() == self.order() {
                break;
            }
            if !span.contains(&x) {
                gens.push(x);
                span = self.closure(&gens);
            }
        }
        gens
    }
}

fn compose_perm(p: &[usize], q: &[usize]) -> Vec<usize> {
    q.iter().map(|&x| p[x]).collect()
}

/// 1-based cycle notation, e.g. `(12)(34)`; the identity is `e`.
pub fn cycle_notation(p: &[usize]) -> String {
    let sep = if p.len() > 9 { "," } else { "" };
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        let mut cycle = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cycle.push((x + 1).to_string());
            x = p[x];
        }
        out.push('(');
        out.push_str(&cycle.join(sep));
        out.push(')');
    }
    if out.is_empty() {
        out.push('e');
    }
    out
}

/// An automorphism of a finite group, stored as its image table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Automorphism {
    images: Vec<usize>,
}

impl Automorphism {
    /// Validates that `images` is a bijective homomorphism of `group`.
    pub fn new(group: &FiniteGroup, images: Vec<usize>) -> Result<Self, GroupError> {
        let n = group.order();
        if images.len() != n {
            return Err(GroupError::NotAutomorphism(format!(
                "{} images for a group of order {n}",
                images.len()
            )));
        }
        let mut hit = vec![false; n];
        for &x in &images {
            if x >= n || std::mem::replace(&mut hit[x], true) {
                return Err(GroupError::NotAutomorphism("image table is not a bijection".into()));
            }
        }
        for a in 0..n {
            for b in 0..n {
                if images[group.mul(a, b)] != group.mul(images[a], images[b]) {
                    return Err(GroupError::NotAutomorphism(format!(
                        "not a homomorphism at ({}, {})",
                        group.name(a),
                        group.name(b)
                    )));
                }
            }
        }
        Ok(Automorphism { images })
    }

    pub fn identity(group: &FiniteGroup) -> Self {
        Automorphism { images: (0..group.order()).collect() }
    }

    /// `x ↦ g⁻¹ x g`
    pub fn inner(group: &FiniteGroup, g: usize) -> Self {
        Automorphism { images: (0..group.order()).map(|x| group.conj(x, g)).collect() }
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            images[y] = x;
        }
        Automorphism { images }
    }

    /// Every automorphism of `group`, found by trying all images of a
    /// generating set. Intended for small groups.
    pub fn enumerate(group: &FiniteGroup) -> Vec<Automorphism> {
        let gens = group.generating_set();
        // express every element as a word in the generators
        let n = group.order();
        let mut word: Vec<Option<Vec<usize>>> = vec![None; n];
        word[group.identity()] = Some(Vec::new());
        let mut queue = VecDeque::from([group.identity()]);
        while let Some(x) = queue.pop_front() {
            for (k, &g) in gens.iter().enumerate() {
                let y = group.mul(x, g);
                if word[y].is_none() {
                    let mut w = word[x].clone().unwrap();
                    w.push(k);
                    word[y] = Some(w);
                    queue.push_back(y);
                }
            }
        }

        let mut found = Vec::new();
        let mut choice = vec![0usize; gens.len()];
        loop {
            let images: Vec<usize> = word
                .iter()
                .map(|w| {
                    w.as_ref()
                        .unwrap()
                        .iter()
                        .fold(group.identity(), |acc, &k| group.mul(acc, choice[k]))
                })
                .collect();
            if let Ok(a) = Automorphism::new(group, images) {
                found.push(a);
            }
            // odometer over generator images
            let mut pos = gens.len();
            loop {
                if pos == 0 {
                    return found;
                }
                pos -= 1;
                choice[pos] += 1;
                if choice[pos] < n {
                    break;
                }
                choice[pos] = 0;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> FiniteGroup {
        FiniteGroup::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]], 3).unwrap()
    }

    #[test]
    fn s3_has_six_named_elements() {
        let g = s3();
        assert_eq!(g.order(), 6);
        let mut names: Vec<_> = g.names().to_vec();
        names.sort();
        assert_eq!(names, ["(12)", "(123)", "(13)", "(132)", "(23)", "e"]);
        assert_eq!(g.name(g.identity()), "e");
    }

    #[test]
    fn closure_of_three_cycle() {
        let g = s3();
        let c = g.closure(&[g.index_of("(123)").unwrap()]);
        let mut names: Vec<_> = c.iter().map(|&x| g.name(x)).collect();
        names.sort();
        assert_eq!(names, ["(123)", "(132)", "e"]);
    }

    #[test]
    fn quaternion_relations() {
        let q = FiniteGroup::quaternion();
        let [one, m1, i, j, k] = ["1", "-1", "i", "j", "k"].map(|s| q.index_of(s).unwrap());
        assert_eq!(q.identity(), one);
        assert_eq!(q.mul(i, i), m1);
        assert_eq!(q.mul(j, j), m1);
        assert_eq!(q.mul(k, k), m1);
        assert_eq!(q.mul(q.mul(i, j), k), m1);
        assert_eq!(q.mul(i, j), k);
        assert_eq!(q.mul(j, i), q.index_of("-k").unwrap());
    }

    #[test]
    fn rejects_non_group_tables() {
        let names = vec!["a".to_string(), "b".to_string()];
        assert!(FiniteGroup::from_table(names.clone(), vec![vec![0, 0], vec![1, 1]]).is_err());
        assert!(FiniteGroup::from_table(names.clone(), vec![vec![0, 2], vec![1, 0]]).is_err());
        assert!(FiniteGroup::from_table(vec!["a".into(), "a".into()], vec![vec![0, 1], vec![1, 0]]).is_err());
        // identity need not sit at index 0
        assert!(FiniteGroup::from_table(names, vec![vec![1, 0], vec![0, 1]]).is_ok());
        let no_id = vec!["a".into(), "b".into(), "c".into()];
        let t = vec![vec![1, 2, 0], vec![2, 0, 1], vec![0, 1, 2]];
        assert!(FiniteGroup::from_table(no_id.clone(), t).is_ok());
        let t = vec![vec![0, 2, 1], vec![2, 1, 0], vec![1, 0, 2]];
        assert!(matches!(FiniteGroup::from_table(no_id, t), Err(GroupError::InvalidTable(_))));
    }

    #[test]
    fn automorphism_counts() {
        // |Aut(S3)| = 6, |Aut(Q8)| = 24, |Aut(Z4)| = 2
        assert_eq!(Automorphism::enumerate(&s3()).len(), 6);
        assert_eq!(Automorphism::enumerate(&FiniteGroup::quaternion()).len(), 24);
        assert_eq!(Automorphism::enumerate(&FiniteGroup::cyclic(4).unwrap()).len(), 2);
    }

    #[test]
    fn inner_automorphism_is_valid() {
        let g = s3();
        for x in 0..g.order() {
            let a = Automorphism::inner(&g, x);
            assert!(Automorphism::new(&g, a.images().to_vec()).is_ok());
            assert_eq!(a.inverse(), Automorphism::inner(&g, g.inv(x)));
        }
    }

    #[test]
    fn rejects_bad_automorphism() {
        let g = FiniteGroup::cyclic(3).unwrap();
        assert!(Automorphism::new(&g, vec![0, 1, 1]).is_err());
        assert!(Automorphism::new(&g, vec![1, 0, 2]).is_err());
        assert!(Automorphism::new(&g, vec![0, 2, 1]).is_ok());
    }
}
