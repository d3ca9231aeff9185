//! Quivers, paths and elements of the path algebra `KQ`.
//!
//! Paths compose left to right: `a b` means first `a`, then `b`, so the
//! target of `a` must be the source of `b`. The monomial order is
//! length-first, then lexicographic in the declared arrow order, then by
//! source vertex.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

pub type VertexId = u32;
pub type ArrowId = u32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: VertexId,
    pub target: VertexId,
}

/// A finite quiver with named vertices and arrows in declaration order.
#[derive(Debug, Clone)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    vertex_index: HashMap<String, VertexId>,
    arrow_index: HashMap<String, ArrowId>,
}

impl PartialEq for Quiver {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.arrows == other.arrows
    }
}

impl Eq for Quiver {}

impl Quiver {
    pub fn new(vertices: Vec<String>, arrows: Vec<(String, String, String)>) -> Result<Self> {
        let mut vertex_index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if vertex_index.insert(v.clone(), i as VertexId).is_some() {
                return Err(Error::Validation(format!("duplicate vertex `{v}`")));
            }
        }
        let mut arrow_index = HashMap::new();
        let mut out = Vec::with_capacity(arrows.len());
        for (i, (name, s, t)) in arrows.into_iter().enumerate() {
            if vertex_index.contains_key(&name) {
                return Err(Error::Validation(format!("arrow `{name}` reuses a vertex name")));
            }
            if arrow_index.insert(name.clone(), i as ArrowId).is_some() {
                return Err(Error::Validation(format!("duplicate arrow `{name}`")));
            }
            let lookup = |v: &str| {
                vertex_index
                    .get(v)
                    .copied()
                    .ok_or_else(|| Error::Validation(format!("arrow `{name}` uses undeclared vertex `{v}`")))
            };
            let source = lookup(&s)?;
            let target = lookup(&t)?;
            out.push(Arrow { name, source, target });
        }
        Ok(Quiver { vertices, arrows: out, vertex_index, arrow_index })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v as usize]
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, a: ArrowId) -> &Arrow {
        &self.arrows[a as usize]
    }

    pub fn vertex_id(&self, name: &str) -> Option<VertexId> {
        self.vertex_index.get(name).copied()
    }

    pub fn arrow_id(&self, name: &str) -> Option<ArrowId> {
        self.arrow_index.get(name).copied()
    }

    pub fn arrows_from(&self, v: VertexId) -> impl Iterator<Item = ArrowId> + '_ {
        (0..self.arrows.len() as ArrowId).filter(move |&a| self.arrows[a as usize].source == v)
    }

    pub fn arrows_into(&self, v: VertexId) -> impl Iterator<Item = ArrowId> + '_ {
        (0..self.arrows.len() as ArrowId).filter(move |&a| self.arrows[a as usize].target == v)
    }

    /// The trivial path at `v`.
    pub fn vertex_path(&self, v: VertexId) -> Path {
        Path::trivial(v)
    }

    pub fn arrow_path(&self, a: ArrowId) -> Path {
        let arr = self.arrow(a);
        Path { source: arr.source, target: arr.target, arrows: vec![a] }
    }

    /// Builds a path from consecutive arrows; `None` if they do not compose.
    pub fn path(&self, arrows: &[ArrowId]) -> Option<Path> {
        let first = self.arrows.get(*arrows.first()? as usize)?;
        let mut target = first.target;
        for &a in &arrows[1..] {
            let arr = self.arrows.get(a as usize)?;
            if arr.source != target {
                return None;
            }
            target = arr.target;
        }
        Some(Path { source: first.source, target, arrows: arrows.to_vec() })
    }

    /// Path from arrow names, convenient in tests and family builders.
    pub fn path_by_names(&self, names: &[&str]) -> Result<Path> {
        let ids = names
            .iter()
            .map(|n| self.arrow_id(n).ok_or_else(|| Error::Validation(format!("unknown arrow `{n}`"))))
            .collect::<Result<Vec<_>>>()?;
        self.path(&ids)
            .ok_or_else(|| Error::Validation(format!("arrows `{}` do not compose", names.join(" "))))
    }

    /// The same quiver with its arrows listed in `order` (a permutation of
    /// the arrow names). Returns the new quiver and the old-to-new id map.
    pub fn reorder_arrows(&self, order: &[String]) -> Result<(Quiver, Vec<ArrowId>)> {
        if order.len() != self.arrows.len() {
            return Err(Error::Validation(format!(
                "arrow order lists {} arrows, quiver has {}",
                order.len(),
                self.arrows.len()
            )));
        }
        let mut remap = vec![u32::MAX; self.arrows.len()];
        let mut arrows = Vec::with_capacity(order.len());
        for (new_id, name) in order.iter().enumerate() {
            let old = self
                .arrow_id(name)
                .ok_or_else(|| Error::Validation(format!("arrow order names unknown arrow `{name}`")))?;
            if remap[old as usize] != u32::MAX {
                return Err(Error::Validation(format!("arrow `{name}` repeated in order")));
            }
            remap[old as usize] = new_id as ArrowId;
            let a = self.arrow(old);
            arrows.push((a.name.clone(), self.vertex_name(a.source).to_string(), self.vertex_name(a.target).to_string()));
        }
        Ok((Quiver::new(self.vertices.clone(), arrows)?, remap))
    }

    pub fn format_path(&self, p: &Path) -> String {
        if p.arrows.is_empty() {
            format!("e_{}", self.vertex_name(p.source))
        } else {
            p.arrows.iter().map(|&a| self.arrow(a).name.as_str()).collect::<Vec<_>>().join(" ")
        }
    }
}

/// A path with explicit endpoints; an empty arrow list is the trivial path.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    source: VertexId,
    target: VertexId,
    arrows: Vec<ArrowId>,
}

impl Path {
    pub fn trivial(v: VertexId) -> Path {
        Path { source: v, target: v, arrows: Vec::new() }
    }

    /// Unchecked constructor for callers that already know the endpoints.
    pub(crate) fn from_parts(source: VertexId, target: VertexId, arrows: Vec<ArrowId>) -> Path {
        Path { source, target, arrows }
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn target(&self) -> VertexId {
        self.target
    }

    pub fn arrows(&self) -> &[ArrowId] {
        &self.arrows
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    /// `self` followed by `other`, or `None` when the endpoints disagree.
    pub fn concat(&self, other: &Path) -> Option<Path> {
        if self.target != other.source {
            return None;
        }
        let mut arrows = Vec::with_capacity(self.len() + other.len());
        arrows.extend_from_slice(&self.arrows);
        arrows.extend_from_slice(&other.arrows);
        Some(Path { source: self.source, target: other.target, arrows })
    }

    /// Subpath `arrows[start..end]`; endpoints are read from `quiver`.
    pub fn subpath(&self, quiver: &Quiver, start: usize, end: usize) -> Path {
        if start == end {
            let v = if start == 0 {
                self.source
            } else {
                quiver.arrow(self.arrows[start - 1]).target
            };
            return Path::trivial(v);
        }
        Path {
            source: quiver.arrow(self.arrows[start]).source,
            target: quiver.arrow(self.arrows[end - 1]).target,
            arrows: self.arrows[start..end].to_vec(),
        }
    }
}

impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        self.arrows
            .len()
            .cmp(&other.arrows.len())
            .then_with(|| self.arrows.cmp(&other.arrows))
            .then_with(|| self.source.cmp(&other.source))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A finite linear combination of paths with no zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FreeElement {
    terms: BTreeMap<Path, Scalar>,
}

impl FreeElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_path(p: Path, c: Scalar) -> Self {
        let mut e = Self::zero();
        e.add_term(p, c);
        e
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Path, Scalar)>) -> Self {
        let mut e = Self::zero();
        for (p, c) in terms {
            e.add_term(p, c);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Terms in increasing monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Path, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, p: &Path) -> Option<&Scalar> {
        self.terms.get(p)
    }

    /// The largest term (tip) and its coefficient.
    pub fn leading(&self) -> Option<(&Path, &Scalar)> {
        self.terms.last_key_value()
    }

    pub fn min_len(&self) -> usize {
        self.terms.keys().map(Path::len).min().unwrap_or(0)
    }

    pub fn max_len(&self) -> usize {
        self.terms.keys().map(Path::len).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, p: Path, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(p) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = &*e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn pop_leading(&mut self) -> Option<(Path, Scalar)> {
        self.terms.pop_last()
    }

    pub fn add_scaled(&mut self, c: &Scalar, other: &FreeElement) {
        for (p, d) in &other.terms {
            self.add_term(p.clone(), c * d);
        }
    }

    pub fn scale(&self, c: &Scalar) -> FreeElement {
        if c.is_zero() {
            return FreeElement::zero();
        }
        FreeElement { terms: self.terms.iter().map(|(p, d)| (p.clone(), c * d)).collect() }
    }

    pub fn sub(&self, other: &FreeElement) -> FreeElement {
        let mut out = self.clone();
        for (p, d) in &other.terms {
            out.add_term(p.clone(), -d);
        }
        out
    }

    pub fn add(&self, other: &FreeElement) -> FreeElement {
        let mut out = self.clone();
        for (p, d) in &other.terms {
            out.add_term(p.clone(), d.clone());
        }
        out
    }

    /// Product in `KQ`: bilinear path concatenation, zero on non-composable pairs.
    pub fn compose(&self, other: &FreeElement) -> FreeElement {
        let mut out = FreeElement::zero();
        for (p, c) in &self.terms {
            for (q, d) in &other.terms {
                if let Some(pq) = p.concat(q) {
                    out.add_term(pq, c * d);
                }
            }
        }
        out
    }

    /// `left * self * right` for single paths.
    pub fn sandwich(&self, left: &Path, right: &Path) -> FreeElement {
        let mut out = FreeElement::zero();
        for (p, c) in &self.terms {
            if let Some(lp) = left.concat(p) {
                if let Some(lpr) = lp.concat(right) {
                    out.add_term(lpr, c.clone());
                }
            }
        }
        out
    }

    /// Common endpoints of all terms, if there are any and they agree.
    pub fn endpoints(&self) -> Option<(VertexId, VertexId)> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        let ends = (first.source, first.target);
        it.all(|p| (p.source, p.target) == ends).then_some(ends)
    }

    pub fn format(&self, quiver: &Quiver) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (p, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = if neg { -c } else { c.clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if !mag.is_one() {
                out.push_str(&mag.to_string());
                out.push(' ');
            }
            out.push_str(&quiver.format_path(p));
        }
        out
    }
}

/// A nonzero element whose paths all share one origin and one terminus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniformElement {
    element: FreeElement,
    origin: VertexId,
    terminus: VertexId,
}

impl UniformElement {
    pub fn new(element: FreeElement) -> Result<Self> {
        if element.is_zero() {
            return Err(Error::Validation("uniform element must be nonzero".into()));
        }
        let (origin, terminus) = element
            .endpoints()
            .ok_or_else(|| Error::NonUniform("paths do not share endpoints".into()))?;
        Ok(UniformElement { element, origin, terminus })
    }

    pub fn element(&self) -> &FreeElement {
        &self.element
    }

    pub fn origin(&self) -> VertexId {
        self.origin
    }

    pub fn terminus(&self) -> VertexId {
        self.terminus
    }

    pub fn into_element(self) -> FreeElement {
        self.element
    }
}

/// `KQ/I` given by a quiver and uniform generators of `I`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub field: FieldSpec,
    pub quiver: Quiver,
    pub relations: Vec<UniformElement>,
    /// One display name per relation.
    pub labels: Vec<String>,
}

impl Presentation {
    /// Validates admissibility of the generators: uniform, every path of
    /// length at least two, scalars in `field`.
    pub fn new(field: FieldSpec, quiver: Quiver, relations: Vec<FreeElement>, labels: Vec<String>) -> Result<Self> {
        if labels.len() != relations.len() {
            return Err(Error::Validation("one label per relation required".into()));
        }
        let mut uniform = Vec::with_capacity(relations.len());
        for (rel, label) in relations.into_iter().zip(&labels) {
            for (p, c) in rel.terms() {
                if c.spec() != field {
                    return Err(Error::Validation(format!("relation {label} has a scalar outside {field}")));
                }
                if p.len() < 2 {
                    return Err(Error::RelationTooShort(format!(
                        "relation {label} contains `{}` of length {}",
                        quiver.format_path(p),
                        p.len()
                    )));
                }
            }
            let u = UniformElement::new(rel).map_err(|e| match e {
                Error::NonUniform(_) => Error::NonUniform(format!("relation {label} is not uniform")),
                Error::Validation(_) => Error::Validation(format!("relation {label} is zero")),
                other => other,
            })?;
            uniform.push(u);
        }
        Ok(Presentation { field, quiver, relations: uniform, labels })
    }

    pub fn max_relation_len(&self) -> usize {
        self.relations.iter().map(|r| r.element().max_len()).max().unwrap_or(0)
    }

    /// Same algebra with arrows declared in `order`; relations are
    /// re-expressed in the new arrow ids.
    pub fn with_arrow_order(&self, order: &[String]) -> Result<Presentation> {
        let (quiver, remap) = self.quiver.reorder_arrows(order)?;
        let relations = self
            .relations
            .iter()
            .map(|r| {
                FreeElement::from_terms(r.element().terms().map(|(p, c)| {
                    let arrows: Vec<ArrowId> = p.arrows().iter().map(|&a| remap[a as usize]).collect();
                    (Path::from_parts(p.source(), p.target(), arrows), c.clone())
                }))
            })
            .collect();
        Presentation::new(self.field, quiver, relations, self.labels.clone())
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::dsl::print_presentation(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn two_loop_quiver() -> Quiver {
        Quiver::new(
            vec!["x".into(), "y".into()],
            vec![
                ("a".into(), "x".into(), "y".into()),
                ("b".into(), "y".into(), "x".into()),
                ("c".into(), "x".into(), "x".into()),
            ],
        )
        .unwrap()
    }

    fn one() -> Scalar {
        FieldSpec::Rationals.one()
    }

    #[test]
    fn unit_and_concatenation() {
        let q = two_loop_quiver();
        let a = FreeElement::from_path(q.arrow_path(0), one());
        let b = FreeElement::from_path(q.arrow_path(1), one());
        let ex = FreeElement::from_path(Path::trivial(0), one());
        assert_eq!(ex.compose(&a), a);
        let ab = a.compose(&b);
        assert_eq!(ab, FreeElement::from_path(q.path(&[0, 1]).unwrap(), one()));
        // t(a) = y but c starts at x
        let c = FreeElement::from_path(q.arrow_path(2), one());
        assert!(a.compose(&c).is_zero());
    }

    #[test]
    fn order_is_length_first() {
        let q = two_loop_quiver();
        let c = q.arrow_path(2);
        let ab = q.path(&[0, 1]).unwrap();
        let cc = q.path(&[2, 2]).unwrap();
        assert!(c < ab);
        assert!(ab < cc);
        assert!(Path::trivial(0) < Path::trivial(1));
        assert!(Path::trivial(1) < c);
    }

    #[test]
    fn non_uniform_rejected() {
        let q = two_loop_quiver();
        let ab = q.path(&[0, 1]).unwrap();
        let ba = q.path(&[1, 0]).unwrap();
        let rel = FreeElement::from_terms([(ab, one()), (ba, -one())]);
        let err = Presentation::new(FieldSpec::Rationals, q, vec![rel], vec!["r1".into()]).unwrap_err();
        assert!(matches!(err, Error::NonUniform(_)));
    }

    #[test]
    fn short_relation_rejected() {
        let q = two_loop_quiver();
        let rel = FreeElement::from_path(q.arrow_path(2), one());
        let err = Presentation::new(FieldSpec::Rationals, q, vec![rel], vec!["r1".into()]).unwrap_err();
        assert!(matches!(err, Error::RelationTooShort(_)));
    }

    fn random_element(q: &Quiver, words: Vec<(Vec<u32>, i64)>) -> FreeElement {
        FreeElement::from_terms(words.into_iter().filter_map(|(w, c)| {
            let p = if w.is_empty() { Some(Path::trivial(0)) } else { q.path(&w) }?;
            Some((p, FieldSpec::Rationals.from_int(c)))
        }))
    }

    fn words() -> impl Strategy<Value = Vec<(Vec<u32>, i64)>> {
        prop::collection::vec((prop::collection::vec(0u32..3, 0..4), -3i64..4), 0..5)
    }

    proptest! {
        #[test]
        fn compose_is_associative(x in words(), y in words(), z in words()) {
            let q = two_loop_quiver();
            let (x, y, z) = (random_element(&q, x), random_element(&q, y), random_element(&q, z));
            prop_assert_eq!(x.compose(&y).compose(&z), x.compose(&y.compose(&z)));
        }

        #[test]
        fn vertex_sum_is_identity(x in words()) {
            let q = two_loop_quiver();
            let x = random_element(&q, x);
            let unit = FreeElement::from_terms([(Path::trivial(0), one()), (Path::trivial(1), one())]);
            prop_assert_eq!(unit.compose(&x), x.clone());
            prop_assert_eq!(x.compose(&unit), x);
        }
    }
}
