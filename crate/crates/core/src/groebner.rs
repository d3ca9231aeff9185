//! Noncommutative Gröbner bases for ideals of path algebras, normal forms,
//! and the path basis of the quotient.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::quiver::{ArrowId, FreeElement, Path, Presentation, Quiver, VertexId};

/// `sum c * u * g_k * v`, keyed by `(u, k, v)`.
pub type Cofactors = BTreeMap<(Path, usize, Path), Scalar>;

pub fn add_cofactor(acc: &mut Cofactors, key: (Path, usize, Path), c: Scalar) {
    if c.is_zero() {
        return;
    }
    match acc.get_mut(&key) {
        Some(x) => {
            *x += &c;
            if x.is_zero() {
                acc.remove(&key);
            }
        }
        None => {
            acc.insert(key, c);
        }
    }
}

/// `c * left * (sum) * right`, added into `acc`.
fn add_wrapped(acc: &mut Cofactors, c: &Scalar, left: &Path, src: &Cofactors, right: &Path) {
    for ((u, k, v), d) in src {
        let lu = left.concat(u).expect("cofactor endpoints");
        let vr = v.concat(right).expect("cofactor endpoints");
        add_cofactor(acc, (lu, *k, vr), c * d);
    }
}

/// Evaluates cofactors against the elements they refer to.
pub fn expand_cofactors(cof: &Cofactors, gens: &[FreeElement]) -> FreeElement {
    let mut out = FreeElement::zero();
    for ((u, k, v), c) in cof {
        out.add_scaled(c, &gens[*k].sandwich(u, v));
    }
    out
}

/// Which occurrence of a tip is rewritten first when several apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum TieBreak {
    #[default]
    Leftmost,
    Rightmost,
}

/// Default length cap for completion and enumeration.
pub fn default_cap(pres: &Presentation) -> usize {
    4 * pres.max_relation_len() + 4
}

#[derive(Debug, Clone)]
struct Member {
    element: FreeElement,
    /// The member in terms of the input generators, when tracking.
    track: Option<Cofactors>,
}

impl Member {
    fn tip(&self) -> &Path {
        self.element.leading().expect("members are nonzero").0
    }
}

/// Reduced Gröbner basis of an ideal of `KQ` for the length-lexicographic
/// order fixed by the quiver's arrow order.
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    field: FieldSpec,
    quiver: Quiver,
    members: Vec<Member>,
    tips: HashMap<Vec<ArrowId>, usize>,
    tip_lengths: Vec<usize>,
    tracked: bool,
}

impl GroebnerBasis {
    /// Completes `gens` by processing overlaps in order of increasing
    /// length. Fails with `CapExceeded` if a member with a tip longer than
    /// `cap` would be needed.
    pub fn compute(field: FieldSpec, quiver: &Quiver, gens: &[FreeElement], cap: usize, track: bool) -> Result<Self> {
        let mut gb = GroebnerBasis {
            field,
            quiver: quiver.clone(),
            members: Vec::new(),
            tips: HashMap::new(),
            tip_lengths: Vec::new(),
            tracked: track,
        };
        let mut slots: Vec<Option<Member>> = Vec::new();
        let mut queue: BinaryHeap<Reverse<(usize, usize, usize, usize)>> = BinaryHeap::new();
        let mut pending: Vec<Member> = gens
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let track = track.then(|| {
                    let (s, t) = g.endpoints().expect("generators are uniform");
                    let mut c = Cofactors::new();
                    add_cofactor(&mut c, (Path::trivial(s), i, Path::trivial(t)), field.one());
                    c
                });
                Member { element: g.clone(), track }
            })
            .collect();
        loop {
            while let Some(m) = pending.pop() {
                let m = gb.reduce_member(&slots, m);
                if m.element.is_zero() {
                    continue;
                }
                let m = monic(m);
                let tip = m.tip().clone();
                if tip.len() > cap {
                    return Err(Error::CapExceeded {
                        cap,
                        context: format!("completion needs a rule with leading path of length {}", tip.len()),
                    });
                }
                // members whose tip the new rule divides are reduced again
                for (i, slot) in slots.iter_mut().enumerate() {
                    if let Some(old) = slot {
                        if occurrences(old.tip().arrows(), tip.arrows()).next().is_some() {
                            gb.tips.remove(old.tip().arrows());
                            pending.push(slot.take().unwrap());
                            let _ = i;
                        }
                    }
                }
                let id = slots.len();
                gb.tips.insert(tip.arrows().to_vec(), id);
                slots.push(Some(m));
                for (j, slot) in slots.iter().enumerate() {
                    if let Some(other) = slot {
                        for (len, ell) in overlaps(tip.arrows(), other.tip().arrows()) {
                            queue.push(Reverse((len, id, j, ell)));
                        }
                        if j != id {
                            for (len, ell) in overlaps(other.tip().arrows(), tip.arrows()) {
                                queue.push(Reverse((len, j, id, ell)));
                            }
                        }
                    }
                }
                gb.refresh_lengths(&slots);
            }
            let Some(Reverse((_, a, b, ell))) = queue.pop() else { break };
            let (Some(ga), Some(gb_)) = (&slots[a], &slots[b]) else { continue };
            let ta = ga.tip().clone();
            let tb = gb_.tip().clone();
            let u = ta.subpath(quiver, 0, ta.len() - ell);
            let v = tb.subpath(quiver, ell, tb.len());
            let mut s = ga.element.sandwich(&Path::trivial(ta.source()), &v);
            s.add_scaled(&-field.one(), &gb_.element.sandwich(&u, &Path::trivial(tb.target())));
            let track = track.then(|| {
                let mut c = Cofactors::new();
                add_wrapped(&mut c, &field.one(), &Path::trivial(ta.source()), ga.track.as_ref().unwrap(), &v);
                add_wrapped(&mut c, &-field.one(), &u, gb_.track.as_ref().unwrap(), &Path::trivial(tb.target()));
                c
            });
            pending.push(Member { element: s, track });
        }
        let mut members: Vec<Member> = slots.into_iter().flatten().collect();
        members.sort_by(|x, y| x.tip().cmp(y.tip()));
        gb.members = members;
        gb.reindex();
        gb.interreduce();
        Ok(gb)
    }

    /// Gröbner basis of the ideal generated by a presentation's relations.
    pub fn from_presentation(pres: &Presentation, cap: usize) -> Result<Self> {
        let min_cap = 2 * pres.max_relation_len();
        if cap < min_cap || cap < 2 {
            return Err(Error::Validation(format!("cap {cap} is below the minimum {}", min_cap.max(2))));
        }
        let gens: Vec<FreeElement> = pres.relations.iter().map(|r| r.element().clone()).collect();
        Self::compute(pres.field, &pres.quiver, &gens, cap, false)
    }

    /// Rebuilds a basis from stored members (already reduced and monic).
    pub fn from_members(field: FieldSpec, quiver: &Quiver, members: Vec<FreeElement>) -> Result<Self> {
        let mut gb = GroebnerBasis {
            field,
            quiver: quiver.clone(),
            members: members.into_iter().map(|element| Member { element, track: None }).collect(),
            tips: HashMap::new(),
            tip_lengths: Vec::new(),
            tracked: false,
        };
        if gb.members.iter().any(|m| m.element.is_zero()) {
            return Err(Error::Cache("zero Gröbner basis member".into()));
        }
        gb.reindex();
        Ok(gb)
    }

    fn reindex(&mut self) {
        self.tips = self.members.iter().enumerate().map(|(i, m)| (m.tip().arrows().to_vec(), i)).collect();
        let mut lens: Vec<usize> = self.members.iter().map(|m| m.tip().len()).collect();
        lens.sort_unstable();
        lens.dedup();
        self.tip_lengths = lens;
    }

    fn refresh_lengths(&mut self, slots: &[Option<Member>]) {
        let mut lens: Vec<usize> = slots.iter().flatten().map(|m| m.tip().len()).collect();
        lens.sort_unstable();
        lens.dedup();
        self.tip_lengths = lens;
    }

    fn lookup_member<'a>(&self, slots: &'a [Option<Member>], id: usize) -> &'a Member {
        slots[id].as_ref().expect("indexed tip has a live member")
    }

    /// Fully reduces a pending member against the live slots.
    fn reduce_member(&self, slots: &[Option<Member>], m: Member) -> Member {
        let mut x = m.element;
        let mut track = m.track;
        let mut rem = FreeElement::zero();
        while let Some((p, c)) = x.leading().map(|(p, c)| (p.clone(), c.clone())) {
            match self.find_divisor(&p, TieBreak::Leftmost) {
                Some((id, start)) => {
                    let g = self.lookup_member(slots, id);
                    let (u, v) = self.split(&p, start, g.tip().len());
                    x.add_scaled(&-&c, &g.element.sandwich(&u, &v));
                    if let (Some(t), Some(gt)) = (track.as_mut(), g.track.as_ref()) {
                        add_wrapped(t, &-&c, &u, gt, &v);
                    }
                }
                None => {
                    x.pop_leading();
                    rem.add_term(p, c);
                }
            }
        }
        Member { element: rem, track }
    }

    /// Reduces tails so every member is in normal form apart from its tip.
    fn interreduce(&mut self) {
        for i in 0..self.members.len() {
            let m = self.members[i].clone();
            let (tip, c) = m.element.leading().map(|(p, c)| (p.clone(), c.clone())).unwrap();
            let mut tail = m.element.clone();
            tail.pop_leading();
            let (r, steps) = self.reduce_with(&tail, TieBreak::Leftmost);
            let mut element = r;
            element.add_term(tip, c);
            let track = m.track.map(|mut t| {
                for ((u, k, v), d) in steps {
                    let gt = self.members[k].track.as_ref().unwrap().clone();
                    add_wrapped(&mut t, &-&d, &u, &gt, &v);
                }
                t
            });
            self.members[i] = Member { element, track };
        }
    }

    fn split(&self, p: &Path, start: usize, len: usize) -> (Path, Path) {
        (p.subpath(&self.quiver, 0, start), p.subpath(&self.quiver, start + len, p.len()))
    }

    /// A member whose tip occurs in `p`, with the start position.
    pub fn find_divisor(&self, p: &Path, tie: TieBreak) -> Option<(usize, usize)> {
        let arrows = p.arrows();
        let mut best: Option<(usize, usize)> = None;
        for &len in &self.tip_lengths {
            if len > arrows.len() {
                break;
            }
            for start in 0..=arrows.len() - len {
                if let Some(&id) = self.tips.get(&arrows[start..start + len]) {
                    let better = match (best, tie) {
                        (None, _) => true,
                        (Some((bid, bstart)), TieBreak::Leftmost) => (start, id) < (bstart, bid),
                        (Some((bid, bstart)), TieBreak::Rightmost) => start > bstart || (start == bstart && id < bid),
                    };
                    if better {
                        best = Some((id, start));
                    }
                }
            }
        }
        best
    }

    pub fn is_reducible(&self, p: &Path) -> bool {
        self.find_divisor(p, TieBreak::Leftmost).is_some()
    }

    /// True if some tip is a suffix of `p`.
    fn has_tip_suffix(&self, p: &Path) -> bool {
        let arrows = p.arrows();
        self.tip_lengths
            .iter()
            .take_while(|&&l| l <= arrows.len())
            .any(|&l| self.tips.contains_key(&arrows[arrows.len() - l..]))
    }

    /// Normal form together with the rewriting steps `(u, k, v) -> c`,
    /// meaning `x = nf + sum c * u * g_k * v`.
    pub fn reduce_with(&self, x: &FreeElement, tie: TieBreak) -> (FreeElement, Cofactors) {
        let mut x = x.clone();
        let mut steps = Cofactors::new();
        let mut rem = FreeElement::zero();
        while let Some((p, c)) = x.leading().map(|(p, c)| (p.clone(), c.clone())) {
            match self.find_divisor(&p, tie) {
                Some((id, start)) => {
                    let g = &self.members[id];
                    let (u, v) = self.split(&p, start, g.tip().len());
                    x.add_scaled(&-&c, &g.element.sandwich(&u, &v));
                    add_cofactor(&mut steps, (u, id, v), c);
                }
                None => {
                    x.pop_leading();
                    rem.add_term(p, c);
                }
            }
        }
        (rem, steps)
    }

    pub fn normal_form(&self, x: &FreeElement) -> FreeElement {
        let mut x = x.clone();
        let mut rem = FreeElement::zero();
        while let Some((p, c)) = x.leading().map(|(p, c)| (p.clone(), c.clone())) {
            match self.find_divisor(&p, TieBreak::Leftmost) {
                Some((id, start)) => {
                    let g = &self.members[id];
                    let (u, v) = self.split(&p, start, g.tip().len());
                    x.add_scaled(&-&c, &g.element.sandwich(&u, &v));
                }
                None => {
                    x.pop_leading();
                    rem.add_term(p, c);
                }
            }
        }
        rem
    }

    /// With tracking: `x = nf + sum c * u * gen_k * v` over the generators
    /// the basis was computed from.
    pub fn reduce_tracked(&self, x: &FreeElement, tie: TieBreak) -> (FreeElement, Cofactors) {
        assert!(self.tracked, "basis was computed without tracking");
        let (r, steps) = self.reduce_with(x, tie);
        let mut out = Cofactors::new();
        for ((u, k, v), c) in steps {
            add_wrapped(&mut out, &c, &u, self.members[k].track.as_ref().unwrap(), &v);
        }
        (r, out)
    }

    pub fn members(&self) -> impl Iterator<Item = &FreeElement> {
        self.members.iter().map(|m| &m.element)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    /// Breadth-first enumeration of irreducible paths.
    pub fn enumerate_basis(&self, cap: usize) -> Result<AlgebraBasis> {
        let q = &self.quiver;
        let mut level: Vec<Path> = (0..q.vertex_count() as VertexId).map(Path::trivial).collect();
        let mut all = level.clone();
        let mut length = 0;
        loop {
            let mut next = Vec::new();
            for p in &level {
                for a in q.arrows_from(p.target()) {
                    let ext = p.concat(&q.arrow_path(a)).unwrap();
                    if !self.has_tip_suffix(&ext) {
                        next.push(ext);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            length += 1;
            if length >= cap {
                return Err(Error::CapExceeded {
                    cap,
                    context: "irreducible paths reach the length cap; the algebra may be infinite-dimensional".into(),
                });
            }
            all.extend(next.iter().cloned());
            level = next;
        }
        Ok(AlgebraBasis::new(q, all, length + 1))
    }
}

fn monic(m: Member) -> Member {
    let lead = m.element.leading().unwrap().1.clone();
    if lead.is_one() {
        return m;
    }
    let inv = lead.inv().expect("nonzero leading coefficient");
    Member {
        element: m.element.scale(&inv),
        track: m.track.map(|t| t.into_iter().map(|(k, c)| (k, &c * &inv)).collect()),
    }
}

/// Start positions of `needle` inside `hay`.
fn occurrences<'a>(hay: &'a [ArrowId], needle: &'a [ArrowId]) -> impl Iterator<Item = usize> + 'a {
    let n = needle.len();
    (0..(hay.len() + 1).saturating_sub(n)).filter(move |&i| n > 0 && &hay[i..i + n] == needle)
}

/// Proper overlaps where a suffix of `a` of length `ell` is a prefix of
/// `b`, with `0 < ell < min(|a|, |b|)`. Yields `(overlap length, ell)`.
fn overlaps(a: &[ArrowId], b: &[ArrowId]) -> Vec<(usize, usize)> {
    let m = a.len().min(b.len());
    (1..m).filter(|&ell| a[a.len() - ell..] == b[..ell]).map(|ell| (a.len() + b.len() - ell, ell)).collect()
}

/// The irreducible paths, grouped by endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraBasis {
    paths: Vec<Path>,
    index: HashMap<Path, usize>,
    by_pair: BTreeMap<(VertexId, VertexId), Vec<usize>>,
    nil_index: usize,
}

impl AlgebraBasis {
    pub fn new(quiver: &Quiver, mut paths: Vec<Path>, nil_index: usize) -> Self {
        paths.sort_by(|x, y| (x.source(), x.target()).cmp(&(y.source(), y.target())).then_with(|| x.cmp(y)));
        let index = paths.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let mut by_pair: BTreeMap<(VertexId, VertexId), Vec<usize>> = BTreeMap::new();
        for (i, p) in paths.iter().enumerate() {
            by_pair.entry((p.source(), p.target())).or_default().push(i);
        }
        let _ = quiver;
        AlgebraBasis { paths, index, by_pair, nil_index }
    }

    pub fn dim(&self) -> usize {
        self.paths.len()
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn path(&self, i: usize) -> &Path {
        &self.paths[i]
    }

    pub fn index_of(&self, p: &Path) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Least `L` such that every path of length at least `L` is reducible.
    pub fn nil_index(&self) -> usize {
        self.nil_index
    }

    /// Basis of `e_v Λ e_w`.
    pub fn between(&self, v: VertexId, w: VertexId) -> &[usize] {
        self.by_pair.get(&(v, w)).map(Vec::as_slice).unwrap_or(&[])
    }

    /// `dim e_v Λ`.
    pub fn dim_from(&self, v: VertexId) -> usize {
        self.paths.iter().filter(|p| p.source() == v).count()
    }

    /// `dim Λ e_w`.
    pub fn dim_into(&self, w: VertexId) -> usize {
        self.paths.iter().filter(|p| p.target() == w).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_presentation;
    use proptest::prelude::*;

    fn gb_of(text: &str) -> (Presentation, GroebnerBasis) {
        let p = parse_presentation(text).unwrap();
        let cap = default_cap(&p);
        let gb = GroebnerBasis::from_presentation(&p, cap).unwrap();
        (p, gb)
    }

    #[test]
    fn dual_numbers_basis() {
        let (_, gb) = gb_of("field Q quiver { vertex v; arrow a: v -> v; } relations { a a; }");
        assert_eq!(gb.len(), 1);
        let b = gb.enumerate_basis(12).unwrap();
        assert_eq!(b.dim(), 2);
        assert_eq!(b.nil_index(), 2);
    }

    #[test]
    fn commutative_plane_truncated() {
        // K<x,y>/(xy - yx, xx, yy): basis 1, x, y, xy
        let (p, gb) = gb_of(
            "field Q quiver { vertex v; arrow x: v -> v; arrow y: v -> v; } relations { x y - y x; x x; y y; }",
        );
        let b = gb.enumerate_basis(default_cap(&p)).unwrap();
        assert_eq!(b.dim(), 4);
        let xyx = FreeElement::from_path(p.quiver.path_by_names(&["x", "y", "x"]).unwrap(), FieldSpec::Rationals.one());
        assert!(gb.normal_form(&xyx).is_zero());
    }

    #[test]
    fn infinite_dimensional_hits_cap() {
        let (p, gb) = gb_of("field Q quiver { vertex v; arrow x: v -> v; arrow y: v -> v; } relations { x y - y x; }");
        assert!(matches!(gb.enumerate_basis(default_cap(&p)), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn relations_reduce_to_zero() {
        let (p, gb) = gb_of(
            "field Q quiver { vertex v; arrow x: v -> v; arrow y: v -> v; } relations { x x - y y; x y; y x; }",
        );
        for r in &p.relations {
            assert!(gb.normal_form(r.element()).is_zero());
        }
        // x^3 = x y y = 0
        let xxx = FreeElement::from_path(p.quiver.path_by_names(&["x", "x", "x"]).unwrap(), FieldSpec::Rationals.one());
        assert!(gb.normal_form(&xxx).is_zero());
        assert_eq!(gb.enumerate_basis(default_cap(&p)).unwrap().dim(), 4);
    }

    #[test]
    fn tracked_reduction_recovers_element() {
        let p = parse_presentation(
            "field Q quiver { vertex v; arrow x: v -> v; arrow y: v -> v; } relations { x x - y y; x y; y x; }",
        )
        .unwrap();
        let gens: Vec<FreeElement> = p.relations.iter().map(|r| r.element().clone()).collect();
        let gb = GroebnerBasis::compute(p.field, &p.quiver, &gens, 12, true).unwrap();
        let yyy = FreeElement::from_path(p.quiver.path_by_names(&["y", "y", "y"]).unwrap(), FieldSpec::Rationals.one());
        for tie in [TieBreak::Leftmost, TieBreak::Rightmost] {
            let (r, cof) = gb.reduce_tracked(&yyy, tie);
            assert!(r.is_zero());
            assert_eq!(expand_cofactors(&cof, &gens), yyy);
        }
    }

    const TWO_LOOPS: &str =
        "field Q quiver { vertex v; arrow x: v -> v; arrow y: v -> v; } relations { x x - y y; x y x; y x y; x x x; }";

    fn element_from(p: &Presentation, words: &[(Vec<u8>, i64)]) -> FreeElement {
        FreeElement::from_terms(words.iter().map(|(w, c)| {
            let names: Vec<&str> = w.iter().map(|&b| if b == 0 { "x" } else { "y" }).collect();
            let path = if names.is_empty() { Path::trivial(0) } else { p.quiver.path_by_names(&names).unwrap() };
            (path, p.field.from_int(*c))
        }))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn normal_form_is_multiplicative(
            a in prop::collection::vec((prop::collection::vec(0u8..2, 0..5), -3i64..4), 0..4),
            b in prop::collection::vec((prop::collection::vec(0u8..2, 0..5), -3i64..4), 0..4),
        ) {
            let (p, gb) = gb_of(TWO_LOOPS);
            let (x, y) = (element_from(&p, &a), element_from(&p, &b));
            let lhs = gb.normal_form(&x.compose(&y));
            let rhs = gb.normal_form(&gb.normal_form(&x).compose(&gb.normal_form(&y)));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn reduction_order_does_not_matter(
            a in prop::collection::vec((prop::collection::vec(0u8..2, 0..7), -3i64..4), 0..5),
        ) {
            let (p, gb) = gb_of(TWO_LOOPS);
            let x = element_from(&p, &a);
            let (l, _) = gb.reduce_with(&x, TieBreak::Leftmost);
            let (r, _) = gb.reduce_with(&x, TieBreak::Rightmost);
            prop_assert_eq!(&l, &r);
            prop_assert_eq!(gb.normal_form(&l), l);
        }
    }
}
