//! Structure groups.
//!
//! A [`GroupContext`] is either an exact finite group (a Cayley table) or a
//! numeric group of unitary matrices. Every lattice quantity takes its values
//! in one context. Subgroup enumeration, conjugacy search and the canonical
//! conjugacy-class representative ([`OrbitType`]) are only available for
//! finite contexts; matrix contexts support membership tests and the
//! commutant dimension.

mod finite;
mod matrix;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

pub use finite::{cycle_notation, Automorphism, FiniteGroup, MAX_TABLE_ORDER};
pub use matrix::{
    rotation, su2_diagonal, su2_from_quaternion, unitarity_defect, CMatrix, Complex64, MatrixGroup,
    DEFAULT_TOLERANCE,
};

/// Default cap for breadth-first subgroup closure.
pub const DEFAULT_CLOSURE_CAP: usize = 10_000;

/// Default cap on exhaustive enumerations (`|G|^|V|`, `|G|^n`, ...).
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Built-in finite groups available by name.
pub const BUILTIN_GROUPS: [&str; 6] = ["Z2", "Z3", "Z4", "S3", "D4", "Q8"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("enumeration of {needed} items exceeds budget {budget}")]
pub struct BudgetExceeded {
    /// Saturates at `u128::MAX`.
    pub needed: u128,
    pub budget: u64,
}

/// `base^exp` if it fits in `budget`.
pub fn enumeration_size(base: usize, exp: usize, budget: u64) -> Result<usize, BudgetExceeded> {
    let needed = u32::try_from(exp)
        .ok()
        .and_then(|e| (base as u128).checked_pow(e))
        .unwrap_or(u128::MAX);
    if needed > budget as u128 {
        return Err(BudgetExceeded { needed, budget });
    }
    Ok(needed as usize)
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GroupError {
    #[error("element or subgroup does not belong to this group context")]
    ContextMismatch,
    #[error("operation requires a finite group")]
    NotFinite,
    #[error("closure exceeded {cap} elements (subgroup may be infinite)")]
    CapExceeded { cap: usize },
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error("invalid group table: {0}")]
    InvalidTable(String),
    #[error("matrix is not unitary (defect {0:e})")]
    NotUnitary(f64),
    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("unknown built-in group `{0}`")]
    UnknownGroup(String),
    #[error("malformed group data: {0}")]
    Malformed(String),
    #[error("subgroup has no enumerated element set")]
    NotEnumerated,
}

/// An element of a structure group.
#[derive(Clone, Debug, PartialEq)]
pub enum GroupElem {
    Finite(usize),
    Matrix(CMatrix),
}

impl GroupElem {
    pub fn index(&self) -> Option<usize> {
        match self {
            GroupElem::Finite(i) => Some(*i),
            GroupElem::Matrix(_) => None,
        }
    }

    pub fn matrix(&self) -> Option<&CMatrix> {
        match self {
            GroupElem::Matrix(m) => Some(m),
            GroupElem::Finite(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Backend {
    Finite(FiniteGroup),
    Matrix(MatrixGroup),
}

/// A structure group together with an optional display label.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupContext {
    label: Option<String>,
    backend: Backend,
}

/// On-disk description of a group context.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct GroupSpec {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mul: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub permutation_generators: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Value>>,
}

impl GroupContext {
    pub fn finite(group: FiniteGroup) -> Self {
        GroupContext { label: None, backend: Backend::Finite(group) }
    }

    pub fn matrix(group: MatrixGroup) -> Self {
        GroupContext { label: None, backend: Backend::Matrix(group) }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// One of [`BUILTIN_GROUPS`], or `Z<n>` for any cyclic group.
    pub fn builtin(name: &str) -> Result<Self, GroupError> {
        let group = match name {
            "S3" => FiniteGroup::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]], 3)?,
            "D4" => FiniteGroup::from_permutations(&[vec![1, 2, 3, 0], vec![0, 3, 2, 1]], 4)?,
            "Q8" => FiniteGroup::quaternion(),
            _ => match name.strip_prefix('Z').and_then(|n| n.parse::<usize>().ok()) {
                Some(n) if n > 0 => FiniteGroup::cyclic(n)?,
                _ => return Err(GroupError::UnknownGroup(name.to_string())),
            },
        };
        Ok(Self::finite(group).with_label(name))
    }

    pub fn from_spec(spec: &GroupSpec) -> Result<Self, GroupError> {
        match spec.kind.as_str() {
            "finite" => {
                let group = match (&spec.mul, &spec.permutation_generators) {
                    (Some(mul), None) => {
                        let names = match &spec.names {
                            Some(n) => n.clone(),
                            None => (0..mul.len()).map(|i| i.to_string()).collect(),
                        };
                        FiniteGroup::from_table(names, mul.clone())?
                    }
                    (None, Some(gens)) => {
                        let degree = spec
                            .degree
                            .or_else(|| gens.first().map(Vec::len))
                            .ok_or_else(|| GroupError::Malformed("missing `degree`".into()))?;
                        FiniteGroup::from_permutations(gens, degree)?
                    }
                    _ => {
                        return Err(GroupError::Malformed(
                            "finite group needs exactly one of `mul` or `permutation_generators`".into(),
                        ))
                    }
                };
                Ok(Self::finite(group))
            }
            "matrix" => {
                let dim = spec.dim.ok_or_else(|| GroupError::Malformed("missing `dim`".into()))?;
                let tolerance = spec.tolerance.unwrap_or(DEFAULT_TOLERANCE);
                let gens = spec
                    .generators
                    .iter()
                    .flatten()
                    .map(|v| parse_matrix(v, dim))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Self::matrix(MatrixGroup::new(dim, tolerance, gens)?))
            }
            other => Err(GroupError::Malformed(format!("unknown group kind `{other}`"))),
        }
    }

    /// Accepts a built-in name (JSON string) or an inline group object.
    pub fn from_json(value: &Value) -> Result<Self, GroupError> {
        match value {
            Value::String(name) => Self::builtin(name),
            _ => {
                let spec: GroupSpec =
                    serde_json::from_value(value.clone()).map_err(|e| GroupError::Malformed(e.to_string()))?;
                Self::from_spec(&spec)
            }
        }
    }

    /// JSON form: the label for built-ins, an explicit table otherwise.
    pub fn to_json(&self) -> Value {
        if let Some(label) = &self.label {
            if Self::builtin(label).as_ref() == Ok(self) {
                return Value::String(label.clone());
            }
        }
        let spec = match &self.backend {
            Backend::Finite(g) => GroupSpec {
                kind: "finite".into(),
                names: Some(g.names().to_vec()),
                mul: Some(g.rows().map(<[usize]>::to_vec).collect()),
                ..Default::default()
            },
            Backend::Matrix(g) => GroupSpec {
                kind: "matrix".into(),
                dim: Some(g.dim()),
                tolerance: Some(g.tolerance()),
                generators: Some(g.generators().iter().map(matrix_to_json).collect()),
                ..Default::default()
            },
        };
        serde_json::to_value(spec).expect("group spec serialises")
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    pub fn as_finite(&self) -> Option<&FiniteGroup> {
        match &self.backend {
            Backend::Finite(g) => Some(g),
            Backend::Matrix(_) => None,
        }
    }

    pub fn as_matrix(&self) -> Option<&MatrixGroup> {
        match &self.backend {
            Backend::Matrix(g) => Some(g),
            Backend::Finite(_) => None,
        }
    }

    pub fn require_finite(&self) -> Result<&FiniteGroup, GroupError> {
        self.as_finite().ok_or(GroupError::NotFinite)
    }

    pub fn order(&self) -> Option<usize> {
        self.as_finite().map(FiniteGroup::order)
    }

    pub fn is_abelian(&self) -> Option<bool> {
        let g = self.as_finite()?;
        Some((0..g.order()).all(|a| (0..a).all(|b| g.commutes(a, b))))
    }

    /// Checks that `a` belongs to this context.
    pub fn check(&self, a: &GroupElem) -> Result<(), GroupError> {
        match (&self.backend, a) {
            (Backend::Finite(g), GroupElem::Finite(i)) if *i < g.order() => Ok(()),
            (Backend::Matrix(g), GroupElem::Matrix(m)) => g.check(m),
            _ => Err(GroupError::ContextMismatch),
        }
    }

    pub fn mul(&self, a: &GroupElem, b: &GroupElem) -> Result<GroupElem, GroupError> {
        match (&self.backend, a, b) {
            (Backend::Finite(g), GroupElem::Finite(x), GroupElem::Finite(y))
                if *x < g.order() && *y < g.order() =>
            {
                Ok(GroupElem::Finite(g.mul(*x, *y)))
            }
            (Backend::Matrix(g), GroupElem::Matrix(x), GroupElem::Matrix(y))
                if x.shape() == (g.dim(), g.dim()) && y.shape() == (g.dim(), g.dim()) =>
            {
                Ok(GroupElem::Matrix(x * y))
            }
            _ => Err(GroupError::ContextMismatch),
        }
    }

    pub fn inv(&self, a: &GroupElem) -> Result<GroupElem, GroupError> {
        match (&self.backend, a) {
            (Backend::Finite(g), GroupElem::Finite(x)) if *x < g.order() => Ok(GroupElem::Finite(g.inv(*x))),
            (Backend::Matrix(g), GroupElem::Matrix(x)) if x.shape() == (g.dim(), g.dim()) => {
                Ok(GroupElem::Matrix(x.adjoint()))
            }
            _ => Err(GroupError::ContextMismatch),
        }
    }

    pub fn identity(&self) -> GroupElem {
        match &self.backend {
            Backend::Finite(g) => GroupElem::Finite(g.identity()),
            Backend::Matrix(g) => GroupElem::Matrix(g.identity()),
        }
    }

    /// Exact for finite groups; `‖a − b‖_F ≤ ε` for matrices.
    pub fn eq(&self, a: &GroupElem, b: &GroupElem) -> Result<bool, GroupError> {
        self.check_shape(a)?;
        self.check_shape(b)?;
        Ok(match (&self.backend, a, b) {
            (Backend::Finite(_), GroupElem::Finite(x), GroupElem::Finite(y)) => x == y,
            (Backend::Matrix(g), GroupElem::Matrix(x), GroupElem::Matrix(y)) => g.eq(x, y),
            _ => unreachable!("shapes checked"),
        })
    }

    /// `g⁻¹ x g`
    pub fn conj(&self, x: &GroupElem, g: &GroupElem) -> Result<GroupElem, GroupError> {
        self.mul(&self.mul(&self.inv(g)?, x)?, g)
    }

    pub fn commutes(&self, a: &GroupElem, b: &GroupElem) -> Result<bool, GroupError> {
        self.eq(&self.mul(a, b)?, &self.mul(b, a)?)
    }

    fn check_shape(&self, a: &GroupElem) -> Result<(), GroupError> {
        match (&self.backend, a) {
            (Backend::Finite(g), GroupElem::Finite(i)) if *i < g.order() => Ok(()),
            (Backend::Matrix(g), GroupElem::Matrix(m)) if m.shape() == (g.dim(), g.dim()) => Ok(()),
            _ => Err(GroupError::ContextMismatch),
        }
    }

    /// All elements in index order (finite only).
    pub fn elements(&self) -> Result<Vec<GroupElem>, GroupError> {
        let g = self.require_finite()?;
        Ok((0..g.order()).map(GroupElem::Finite).collect())
    }

    /// Looks up an element by display name (finite only).
    pub fn element(&self, name: &str) -> Result<GroupElem, GroupError> {
        let g = self.require_finite()?;
        g.index_of(name)
            .map(GroupElem::Finite)
            .ok_or_else(|| GroupError::UnknownElement(name.to_string()))
    }

    pub fn elem_to_json(&self, a: &GroupElem) -> Value {
        match (&self.backend, a) {
            (Backend::Finite(g), GroupElem::Finite(i)) if *i < g.order() => Value::String(g.name(*i).to_string()),
            (_, GroupElem::Finite(i)) => Value::from(*i),
            (_, GroupElem::Matrix(m)) => matrix_to_json(m),
        }
    }

    /// Finite: element name or index. Matrix: row-major list of `[re, im]`.
    pub fn elem_from_json(&self, value: &Value) -> Result<GroupElem, GroupError> {
        let elem = match (&self.backend, value) {
            (Backend::Finite(_), Value::String(name)) => self.element(name)?,
            (Backend::Finite(_), Value::Number(n)) => {
                let i = n
                    .as_u64()
                    .ok_or_else(|| GroupError::UnknownElement(n.to_string()))?;
                GroupElem::Finite(i as usize)
            }
            (Backend::Matrix(g), v) => GroupElem::Matrix(parse_matrix(v, g.dim())?),
            (_, v) => return Err(GroupError::UnknownElement(v.to_string())),
        };
        self.check(&elem)?;
        Ok(elem)
    }

    pub fn display(&self, a: &GroupElem) -> String {
        match &self.elem_to_json(a) {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        }
    }

    /// Smallest subset containing `gens` and the identity that is closed
    /// under products and inverses, in breadth-first order.
    ///
    /// Matrix closures stop with [`GroupError::CapExceeded`] once more than
    /// `cap` elements have been found.
    pub fn closure(&self, gens: &[GroupElem], cap: usize) -> Result<Vec<GroupElem>, GroupError> {
        for g in gens {
            self.check(g)?;
        }
        match &self.backend {
            Backend::Finite(g) => {
                let idx: Vec<usize> = gens.iter().filter_map(GroupElem::index).collect();
                let out = g.closure(&idx);
                if out.len() > cap {
                    return Err(GroupError::CapExceeded { cap });
                }
                Ok(out.into_iter().map(GroupElem::Finite).collect())
            }
            Backend::Matrix(g) => {
                let mut steps: Vec<CMatrix> = Vec::with_capacity(2 * gens.len());
                for m in gens.iter().filter_map(GroupElem::matrix) {
                    steps.push(m.clone());
                    steps.push(m.adjoint());
                }
                let mut out = vec![g.identity()];
                let mut head = 0;
                while head < out.len() {
                    let x = out[head].clone();
                    head += 1;
                    for s in &steps {
                        let y = &x * s;
                        if !out.iter().any(|z| g.eq(z, &y)) {
                            if out.len() == cap {
                                return Err(GroupError::CapExceeded { cap });
                            }
                            out.push(y);
                        }
                    }
                }
                Ok(out.into_iter().map(GroupElem::Matrix).collect())
            }
        }
    }

    /// The subgroup generated by `gens`, with its element set enumerated.
    pub fn subgroup(&self, gens: Vec<GroupElem>, cap: usize) -> Result<SubgroupDescriptor, GroupError> {
        let mut elements = self.closure(&gens, cap)?;
        if self.as_finite().is_some() {
            elements.sort_by_key(|e| e.index());
        }
        Ok(SubgroupDescriptor { generators: gens, elements: Some(elements), commutes_with: None, label: None })
    }

    /// Wraps an explicit element set, checking that it is a subgroup.
    pub fn subgroup_from_set(&self, set: &[usize]) -> Result<SubgroupDescriptor, GroupError> {
        let g = self.require_finite()?;
        let sorted: BTreeSet<usize> = set.iter().copied().collect();
        if sorted.iter().any(|&x| x >= g.order()) {
            return Err(GroupError::ContextMismatch);
        }
        let closed = sorted.contains(&g.identity())
            && sorted.iter().all(|&a| sorted.contains(&g.inv(a)) && sorted.iter().all(|&b| sorted.contains(&g.mul(a, b))));
        if !closed {
            return Err(GroupError::Malformed("element set is not a subgroup".into()));
        }
        Ok(finite_descriptor(g, sorted.into_iter().collect()))
    }

    /// `{ z ∈ G | z gᵢ = gᵢ z for every generator }`.
    ///
    /// Finite contexts enumerate the result; matrix contexts return a
    /// descriptor that only supports membership tests.
    pub fn centralizer(&self, gens: &[GroupElem]) -> Result<SubgroupDescriptor, GroupError> {
        for g in gens {
            self.check(g)?;
        }
        match &self.backend {
            Backend::Finite(g) => {
                let idx: Vec<usize> = gens.iter().filter_map(GroupElem::index).collect();
                let set: Vec<usize> = (0..g.order()).filter(|&z| idx.iter().all(|&x| g.commutes(z, x))).collect();
                let mut d = finite_descriptor(g, set);
                d.commutes_with = Some(gens.to_vec());
                Ok(d)
            }
            Backend::Matrix(_) => Ok(SubgroupDescriptor {
                generators: Vec::new(),
                elements: None,
                commutes_with: Some(gens.to_vec()),
                label: None,
            }),
        }
    }

    /// Membership in `sub`: by element list when enumerated, otherwise by the
    /// commutation rule of a centralizer descriptor.
    pub fn contains(&self, sub: &SubgroupDescriptor, a: &GroupElem) -> Result<bool, GroupError> {
        self.check_shape(a)?;
        if let Some(elements) = &sub.elements {
            for e in elements {
                if self.eq(e, a)? {
                    return Ok(true);
                }
            }
            return Ok(false);
        }
        if let Some(gens) = &sub.commutes_with {
            for g in gens {
                if !self.commutes(a, g)? {
                    return Ok(false);
                }
            }
            return Ok(true);
        }
        Err(GroupError::NotEnumerated)
    }

    /// Complex dimension of `{X ∈ ℂ^{n×n} | X gᵢ = gᵢ X}` (matrix only).
    pub fn commutant_dimension(&self, gens: &[GroupElem]) -> Result<usize, GroupError> {
        let g = self.as_matrix().ok_or(GroupError::ContextMismatch)?;
        let mats = gens
            .iter()
            .map(|e| {
                self.check_shape(e)?;
                Ok(e.matrix().expect("shape checked").clone())
            })
            .collect::<Result<Vec<_>, GroupError>>()?;
        Ok(g.commutant_dimension(&mats))
    }

    /// `g⁻¹ U g`, element-wise.
    pub fn conjugate_subgroup(&self, sub: &SubgroupDescriptor, g: &GroupElem) -> Result<SubgroupDescriptor, GroupError> {
        let fg = self.require_finite()?;
        let gi = g.index().filter(|&i| i < fg.order()).ok_or(GroupError::ContextMismatch)?;
        let set = self.index_set(sub)?;
        let mut out = finite_descriptor(fg, fg.conjugate_set(&set, gi));
        out.generators = sub
            .generators
            .iter()
            .map(|x| self.conj(x, g))
            .collect::<Result<_, _>>()?;
        out.label = sub.label.clone();
        Ok(out)
    }

    /// Some `g` with `g⁻¹ U₁ g = U₂`, searching elements in index order.
    pub fn find_conjugator(&self, u1: &SubgroupDescriptor, u2: &SubgroupDescriptor) -> Result<Option<GroupElem>, GroupError> {
        let fg = self.require_finite()?;
        let s1 = self.index_set(u1)?;
        let s2 = self.index_set(u2)?;
        if s1.len() != s2.len() {
            return Ok(None);
        }
        Ok((0..fg.order()).find(|&g| fg.conjugate_set(&s1, g) == s2).map(GroupElem::Finite))
    }

    /// Lexicographically least sorted index tuple among all conjugates.
    pub fn canonical_class(&self, sub: &SubgroupDescriptor) -> Result<OrbitType, GroupError> {
        let fg = self.require_finite()?;
        let set = self.index_set(sub)?;
        let conjugates: BTreeSet<Vec<usize>> = (0..fg.order()).map(|g| fg.conjugate_set(&set, g)).collect();
        Ok(OrbitType {
            order: set.len(),
            class_size: conjugates.len(),
            representative: conjugates.into_iter().next().expect("at least one conjugate"),
        })
    }

    /// Number of orbits of `Gⁿ` under simultaneous conjugation, by explicit
    /// orbit enumeration.
    pub fn simultaneous_ad_classes(&self, n: usize, budget: u64) -> Result<usize, GroupError> {
        let fg = self.require_finite()?;
        let order = fg.order();
        let total = enumeration_size(order, n, budget)?;
        let mut seen = vec![false; total];
        let mut tuple = vec![0usize; n];
        let mut classes = 0;
        for code in 0..total {
            if seen[code] {
                continue;
            }
            classes += 1;
            decode_into(code, order, &mut tuple);
            for g in 0..order {
                let image = tuple.iter().fold(0, |acc, &x| acc * order + fg.conj(x, g));
                seen[image] = true;
            }
        }
        Ok(classes)
    }

    /// Sorted element indices of an enumerated finite subgroup.
    pub fn index_set(&self, sub: &SubgroupDescriptor) -> Result<Vec<usize>, GroupError> {
        let fg = self.require_finite()?;
        let elements = sub.elements.as_ref().ok_or(GroupError::NotEnumerated)?;
        let mut out = Vec::with_capacity(elements.len());
        for e in elements {
            match e.index() {
                Some(i) if i < fg.order() => out.push(i),
                _ => return Err(GroupError::ContextMismatch),
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    pub fn names_of(&self, set: &[usize]) -> Vec<String> {
        match self.as_finite() {
            Some(g) => set.iter().map(|&i| g.name(i).to_string()).collect(),
            None => set.iter().map(usize::to_string).collect(),
        }
    }
}

impl fmt::Display for GroupContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.label, &self.backend) {
            (Some(l), _) => write!(f, "{l}"),
            (None, Backend::Finite(g)) => write!(f, "finite group of order {}", g.order()),
            (None, Backend::Matrix(g)) => write!(f, "U({}) matrix group", g.dim()),
        }
    }
}

fn decode_into(mut code: usize, base: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = code % base;
        code /= base;
    }
}

fn finite_descriptor(g: &FiniteGroup, sorted: Vec<usize>) -> SubgroupDescriptor {
    // greedy generating set in index order
    let mut generators = Vec::new();
    let mut span = vec![g.identity()];
    for &x in &sorted {
        if span.len() == sorted.len() {
            break;
        }
        if !span.contains(&x) {
            generators.push(x);
            span = g.closure(&generators);
        }
    }
    SubgroupDescriptor {
        generators: generators.into_iter().map(GroupElem::Finite).collect(),
        elements: Some(sorted.into_iter().map(GroupElem::Finite).collect()),
        commutes_with: None,
        label: None,
    }
}

fn matrix_to_json(m: &CMatrix) -> Value {
    let mut entries = Vec::with_capacity(m.len());
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let z = m[(r, c)];
            entries.push(serde_json::json!([z.re, z.im]));
        }
    }
    Value::Array(entries)
}

fn parse_matrix(value: &Value, dim: usize) -> Result<CMatrix, GroupError> {
    let bad = || GroupError::Malformed(format!("expected {} entries of the form [re, im]", dim * dim));
    let entries = value.as_array().ok_or_else(bad)?;
    if entries.len() != dim * dim {
        return Err(bad());
    }
    let mut data = Vec::with_capacity(dim * dim);
    for e in entries {
        let pair = e.as_array().filter(|p| p.len() == 2).ok_or_else(bad)?;
        let re = pair[0].as_f64().ok_or_else(bad)?;
        let im = pair[1].as_f64().ok_or_else(bad)?;
        data.push(Complex64::new(re, im));
    }
    Ok(CMatrix::from_row_slice(dim, dim, &data))
}

/// A subgroup given by generators, optionally with its full element set.
#[derive(Clone, Debug, PartialEq)]
pub struct SubgroupDescriptor {
    pub generators: Vec<GroupElem>,
    /// Sorted by index for finite groups.
    pub elements: Option<Vec<GroupElem>>,
    /// Membership rule for centralizers that cannot be enumerated.
    pub commutes_with: Option<Vec<GroupElem>>,
    pub label: Option<String>,
}

impl SubgroupDescriptor {
    pub fn order(&self) -> Option<usize> {
        self.elements.as_ref().map(Vec::len)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }
}

/// Canonical conjugacy-class representative of a finite subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct OrbitType {
    /// Least sorted index tuple among all conjugates.
    pub representative: Vec<usize>,
    /// Number of distinct conjugates.
    pub class_size: usize,
    /// Subgroup order.
    pub order: usize,
}
