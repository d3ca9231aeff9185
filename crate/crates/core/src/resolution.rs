//! The first four terms of the minimal projective bimodule resolution
//!
//! ```text
//! Q3 --A3--> Q2 --A2--> Q1 --A1--> Q0 --g--> Λ --> 0
//! ```
//!
//! with `Qn = ⊕_{x ∈ fⁿ} Λ o(x) ⊗ t(x) Λ`. Here `f⁰` are the vertices, `f¹`
//! the arrows, `f²` a minimal generating set of `I` chosen from the input
//! relations and `f³` the generators of the next syzygy. Bimodule maps are
//! stored by the images of the generators `o(x) ⊗ t(x)`, fully expanded in
//! the tensor basis `b ⊗ b'` of basis paths.

use std::collections::{BTreeMap, HashMap};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::groebner::{GroebnerBasis, TieBreak};
use crate::linalg::{axpy, ColumnMatrix, Echelon, Insert, SparseVec};
use crate::quiver::{ArrowId, FreeElement, Path, Quiver, UniformElement, VertexId};

/// One summand `Λ o(x) ⊗ t(x) Λ` per generator, in generator order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectiveDescriptor {
    pub level: usize,
    pub summands: Vec<(VertexId, VertexId)>,
}

impl ProjectiveDescriptor {
    /// `dim_K` of the projective bimodule.
    pub fn dim(&self, alg: &Algebra) -> usize {
        self.summands.iter().map(|&(v, w)| alg.basis().dim_into(v) * alg.basis().dim_from(w)).sum()
    }
}

/// Element of a projective bimodule: `(summand, left basis index, right
/// basis index) -> coefficient`.
pub type TensorElement = BTreeMap<(usize, usize, usize), Scalar>;

pub fn tensor_add(acc: &mut TensorElement, key: (usize, usize, usize), c: Scalar) {
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

/// Adds `c * left ⊗ right` in summand `j`.
fn tensor_add_product(acc: &mut TensorElement, j: usize, left: &[(usize, Scalar)], right: &[(usize, Scalar)], c: &Scalar) {
    for (l, a) in left {
        for (r, b) in right {
            tensor_add(acc, (j, *l, *r), c * &(a * b));
        }
    }
}

/// A bimodule map `Qn -> Q(n-1)` given on the generators of `Qn`.
#[derive(Debug, Clone)]
pub struct BimoduleMap {
    pub level: usize,
    pub images: Vec<TensorElement>,
}

impl BimoduleMap {
    /// Image of an arbitrary element, using `b (o ⊗ t) b' -> b · image · b'`.
    pub fn apply(&self, alg: &Algebra, x: &TensorElement) -> TensorElement {
        let mut out = TensorElement::new();
        for (&(j, b, b2), c) in x {
            for (&(k, l, r), d) in &self.images[j] {
                let left = alg.mul_basis(b, l);
                let right = alg.mul_basis(r, b2);
                if left.is_empty() || right.is_empty() {
                    continue;
                }
                tensor_add_product(&mut out, k, left, right, &(c * d));
            }
        }
        out
    }
}

/// The multiplication map `g: Q0 -> Λ` on a tensor element.
pub fn multiplication(alg: &Algebra, x: &TensorElement) -> SparseVec {
    let mut out = Vec::new();
    for (&(_, b, b2), c) in x {
        out = axpy(&out, c, alg.mul_basis(b, b2));
    }
    out
}

/// One term `coeff * left * f²_gen * right` of a two-sided expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoSidedTerm {
    pub left: Path,
    pub gen: usize,
    pub right: Path,
    pub coeff: Scalar,
}

/// An element of `f³` with both of its expressions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct F3Member {
    pub element: UniformElement,
    /// `y = sum_i f²_i p_i`; indexed by position in `f²`.
    pub right: Vec<FreeElement>,
    /// `y = sum coeff * q * f²_gen * r` with every `q` in the arrow ideal.
    pub two_sided: Vec<TwoSidedTerm>,
}

/// Evaluates `sum_i f²_i p_i`.
pub fn expand_right(f2: &[FreeElement], p: &[FreeElement]) -> FreeElement {
    let mut out = FreeElement::zero();
    for (f, pi) in f2.iter().zip(p) {
        out = out.add(&f.compose(pi));
    }
    out
}

/// Evaluates `sum coeff * q * f²_gen * r`.
pub fn expand_two_sided(f2: &[FreeElement], terms: &[TwoSidedTerm]) -> FreeElement {
    let mut out = FreeElement::zero();
    for t in terms {
        out.add_scaled(&t.coeff, &f2[t.gen].sandwich(&t.left, &t.right));
    }
    out
}

/// All paths of `KQ` starting at `v` with length at most `max_len`.
pub fn kq_paths_from(q: &Quiver, v: VertexId, max_len: usize) -> Vec<Path> {
    let mut out = vec![Path::trivial(v)];
    let mut frontier = out.clone();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for p in &frontier {
            for a in q.arrows_from(p.target()) {
                next.push(p.concat(&q.arrow_path(a)).unwrap());
            }
        }
        if next.is_empty() {
            break;
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// All paths of `KQ` ending at `w` with length at most `max_len`.
pub fn kq_paths_into(q: &Quiver, w: VertexId, max_len: usize) -> Vec<Path> {
    let mut out = vec![Path::trivial(w)];
    let mut frontier = out.clone();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for p in &frontier {
            for a in q.arrows_into(p.source()) {
                next.push(q.arrow_path(a).concat(p).unwrap());
            }
        }
        if next.is_empty() {
            break;
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Assigns consecutive indices to paths on first use.
#[derive(Default)]
struct PathIndex {
    map: HashMap<Path, usize>,
}

impl PathIndex {
    fn id(&mut self, p: &Path) -> usize {
        let n = self.map.len();
        *self.map.entry(p.clone()).or_insert(n)
    }

    fn vector(&mut self, x: &FreeElement) -> SparseVec {
        crate::linalg::from_entries(x.terms().map(|(p, c)| (self.id(p), c.clone())))
    }
}

/// Indices of input relations forming a minimal generating set of `I`.
///
/// A relation is kept when it is independent, modulo `JI + IJ` and the
/// relations kept so far. Since `J^(m+1) ⊆ JI` for `m` the nilpotency index
/// of the radical, all computations take place among paths of length at
/// most `m`.
pub fn minimal_generators(alg: &Algebra, nilpotency: usize) -> Vec<usize> {
    let q = alg.quiver();
    let rels = &alg.presentation().relations;
    let m = nilpotency;
    let truncate = |x: FreeElement| FreeElement::from_terms(x.terms().filter(|(p, _)| p.len() <= m).map(|(p, c)| (p.clone(), c.clone())));
    let mut index = PathIndex::default();
    let mut echelon = Echelon::new(alg.field());
    let mut into_cache: HashMap<VertexId, Vec<Path>> = HashMap::new();
    let mut from_cache: HashMap<VertexId, Vec<Path>> = HashMap::new();
    for r in rels {
        let min = r.element().min_len();
        if min >= m {
            continue;
        }
        let budget = m - min;
        let lefts = into_cache.entry(r.origin()).or_insert_with(|| kq_paths_into(q, r.origin(), m)).clone();
        let rights = from_cache.entry(r.terminus()).or_insert_with(|| kq_paths_from(q, r.terminus(), m)).clone();
        for u in lefts.iter().filter(|u| u.len() <= budget) {
            for v in rights.iter().filter(|v| u.len() + v.len() <= budget && u.len() + v.len() >= 1) {
                let x = truncate(r.element().sandwich(u, v));
                if !x.is_zero() {
                    echelon.insert(&index.vector(&x));
                }
            }
        }
    }
    let mut chosen = Vec::new();
    for (i, r) in rels.iter().enumerate() {
        let x = truncate(r.element().clone());
        if x.is_zero() {
            continue;
        }
        if let Insert::Independent(_) = echelon.insert(&index.vector(&x)) {
            chosen.push(i);
        }
    }
    chosen
}

/// Left derivative `a⁻¹ x`: the terms of `x` starting with `a`, with `a` removed.
fn left_derivative(q: &Quiver, x: &FreeElement, a: ArrowId) -> FreeElement {
    FreeElement::from_terms(
        x.terms().filter(|(p, _)| p.arrows().first() == Some(&a)).map(|(p, c)| (p.subpath(q, 1, p.len()), c.clone())),
    )
}

/// Generators of the third syzygy.
///
/// The map `Ψ: ⊕_i t(f²_i)Λ -> ⊕_a t(a)Λ`, `(p_i) -> (sum_i (a⁻¹ f²_i) p_i)_a`,
/// is the second differential of the minimal resolution of `Λ/rad Λ` as a
/// right module. A complement of `(ker Ψ) rad Λ` in `ker Ψ` is chosen in each
/// block of fixed origin and terminus; an element `(p_i)` of it gives
/// `y = sum_i f²_i p_i`, which lies in `(⊕ f² KQ) ∩ (⊕ f¹ I)` and not in
/// `⊕ f² I`.
pub fn compute_f3(alg: &Algebra, f2: &[UniformElement]) -> Result<Vec<(UniformElement, Vec<FreeElement>)>> {
    let q = alg.quiver();
    let basis = alg.basis();
    let field = alg.field();
    // domain coordinates (i, b) with b a basis path leaving t(f²_i)
    let mut dom: Vec<(usize, usize)> = Vec::new();
    let mut dom_index: HashMap<(usize, usize), usize> = HashMap::new();
    for (i, f) in f2.iter().enumerate() {
        for b in 0..basis.dim() {
            if basis.path(b).source() == f.terminus() {
                dom_index.insert((i, b), dom.len());
                dom.push((i, b));
            }
        }
    }
    let mut cod_index: HashMap<(ArrowId, usize), usize> = HashMap::new();
    let derivs: Vec<Vec<(ArrowId, SparseVec)>> = f2
        .iter()
        .map(|f| {
            q.arrows_from(f.origin())
                .map(|a| (a, alg.coords(&left_derivative(q, f.element(), a))))
                .filter(|(_, v)| !v.is_empty())
                .collect()
        })
        .collect();
    let psi = |i: usize, b: usize, cod_index: &mut HashMap<(ArrowId, usize), usize>| -> SparseVec {
        let mut entries = Vec::new();
        for (a, g) in &derivs[i] {
            for (x, c) in alg.mul(g, &[(b, field.one())]) {
                let n = cod_index.len();
                let id = *cod_index.entry((*a, x)).or_insert(n);
                entries.push((id, c));
            }
        }
        crate::linalg::from_entries(entries)
    };
    // blocks keyed by (origin of f², terminus of b)
    let mut blocks: BTreeMap<(VertexId, VertexId), Vec<usize>> = BTreeMap::new();
    for (d, &(i, b)) in dom.iter().enumerate() {
        blocks.entry((f2[i].origin(), basis.path(b).target())).or_default().push(d);
    }
    let mut kernels: BTreeMap<(VertexId, VertexId), Vec<SparseVec>> = BTreeMap::new();
    for (&key, cols) in &blocks {
        let columns: Vec<SparseVec> = cols.iter().map(|&d| psi(dom[d].0, dom[d].1, &mut cod_index)).collect();
        let m = ColumnMatrix::new(field, usize::MAX, columns);
        let ker: Vec<SparseVec> = m
            .kernel()
            .into_iter()
            .map(|v| crate::linalg::from_entries(v.into_iter().map(|(j, c)| (cols[j], c))))
            .collect();
        if !ker.is_empty() {
            kernels.insert(key, ker);
        }
    }
    // (ker Ψ)·rad, spanned by k·c for arrows c
    let mut radical_part: BTreeMap<(VertexId, VertexId), Echelon> = BTreeMap::new();
    for (&(v, w), ker) in &kernels {
        for c in q.arrows_from(w) {
            let cc = alg.path_coords(&q.arrow_path(c));
            let target = q.arrow(c).target;
            for k in ker {
                let mut entries = Vec::new();
                for (d, coef) in k {
                    let (i, b) = dom[*d];
                    for (x, e) in alg.mul(&[(b, field.one())], &cc) {
                        entries.push((dom_index[&(i, x)], coef * &e));
                    }
                }
                let kc = crate::linalg::from_entries(entries);
                if !kc.is_empty() {
                    radical_part.entry((v, target)).or_insert_with(|| Echelon::new(field)).insert(&kc);
                }
            }
        }
    }
    let mut out = Vec::new();
    for (key, ker) in &kernels {
        let e = radical_part.entry(*key).or_insert_with(|| Echelon::new(field));
        for k in ker {
            if let Insert::Independent(_) = e.insert(k) {
                let mut p = vec![FreeElement::zero(); f2.len()];
                for (d, coef) in k {
                    let (i, b) = dom[*d];
                    if basis.path(b).is_trivial() {
                        return Err(Error::Invariant("third syzygy generator has a coefficient outside the radical".into()));
                    }
                    p[i].add_term(basis.path(b).clone(), coef.clone());
                }
                let f2e: Vec<FreeElement> = f2.iter().map(|f| f.element().clone()).collect();
                let y = expand_right(&f2e, &p);
                let y = UniformElement::new(y).map_err(|_| {
                    Error::Invariant("right multiples of the minimal relations are linearly dependent in KQ".into())
                })?;
                out.push((y, p));
            }
        }
    }
    Ok(out)
}

/// Solves `y = sum_i f²_i p_i` in `KQ`, with each `p_i` a combination of
/// paths of length at most `maxlen(y) - minlen(f²_i)`.
pub fn decompose_right(q: &Quiver, y: &UniformElement, f2: &[UniformElement]) -> Result<Vec<FreeElement>> {
    let field = y.element().leading().unwrap().1.spec();
    let mut index = PathIndex::default();
    let mut unknowns: Vec<(usize, Path)> = Vec::new();
    let mut columns = Vec::new();
    let maxlen = y.element().max_len();
    for (i, f) in f2.iter().enumerate() {
        if f.origin() != y.origin() || f.element().min_len() > maxlen {
            continue;
        }
        let bound = maxlen - f.element().min_len();
        for p in kq_paths_from(q, f.terminus(), bound) {
            if p.target() != y.terminus() {
                continue;
            }
            let img = f.element().sandwich(&Path::trivial(f.origin()), &p);
            columns.push(index.vector(&img));
            unknowns.push((i, p));
        }
    }
    let target = index.vector(y.element());
    let mut e = Echelon::tracked(field);
    for c in &columns {
        if let Insert::Dependent(_) = e.insert(c) {
            return Err(Error::NonUnique(format!(
                "{} admits several right expressions",
                y.element().format(q)
            )));
        }
    }
    let sol = e.solve(&target).ok_or_else(|| Error::NoSolution(format!("{} is not in ⊕ f² KQ", y.element().format(q))))?;
    let mut out = vec![FreeElement::zero(); f2.len()];
    for (j, c) in sol {
        let (i, p) = &unknowns[j];
        out[*i].add_term(p.clone(), c);
    }
    Ok(out)
}

/// Writes `y = sum c * q * f²_k * r` with every `q` in the arrow ideal, by
/// splitting `y = sum_a a · y_a` and reducing each `y_a` to zero with a
/// Gröbner basis that tracks how its members arise from `f²`.
pub fn decompose_two_sided(q: &Quiver, y: &FreeElement, tracked: &GroebnerBasis, tie: TieBreak) -> Result<Vec<TwoSidedTerm>> {
    let mut parts: BTreeMap<ArrowId, FreeElement> = BTreeMap::new();
    for (p, c) in y.terms() {
        let Some(&a) = p.arrows().first() else {
            return Err(Error::ReductionStuck(format!("{} has a trivial path term", y.format(q))));
        };
        parts.entry(a).or_default().add_term(p.subpath(q, 1, p.len()), c.clone());
    }
    let mut terms: BTreeMap<(Path, usize, Path), Scalar> = BTreeMap::new();
    for (a, ya) in parts {
        let (rem, cof) = tracked.reduce_tracked(&ya, tie);
        if !rem.is_zero() {
            return Err(Error::ReductionStuck(format!("{} is not in the ideal", ya.format(q))));
        }
        let ap = q.arrow_path(a);
        for ((u, k, v), c) in cof {
            crate::groebner::add_cofactor(&mut terms, (ap.concat(&u).expect("composable"), k, v), c);
        }
    }
    Ok(terms.into_iter().map(|((left, gen, right), coeff)| TwoSidedTerm { left, gen, right, coeff }).collect())
}

/// Assembled resolution data.
#[derive(Debug, Clone)]
pub struct Resolution {
    pub q: [ProjectiveDescriptor; 4],
    pub a1: BimoduleMap,
    pub a2: BimoduleMap,
    pub a3: BimoduleMap,
}

pub fn projectives(alg: &Algebra, f2: &[UniformElement], f3: &[F3Member]) -> [ProjectiveDescriptor; 4] {
    let q = alg.quiver();
    [
        ProjectiveDescriptor { level: 0, summands: (0..q.vertex_count() as VertexId).map(|v| (v, v)).collect() },
        ProjectiveDescriptor { level: 1, summands: q.arrows().iter().map(|a| (a.source, a.target)).collect() },
        ProjectiveDescriptor { level: 2, summands: f2.iter().map(|x| (x.origin(), x.terminus())).collect() },
        ProjectiveDescriptor {
            level: 3,
            summands: f3.iter().map(|y| (y.element.origin(), y.element.terminus())).collect(),
        },
    ]
}

pub fn build_a1(alg: &Algebra) -> BimoduleMap {
    let q = alg.quiver();
    let one = alg.field().one();
    let images = (0..q.arrow_count() as ArrowId)
        .map(|a| {
            let arr = q.arrow(a);
            let ca = alg.path_coords(&q.arrow_path(a));
            let eo = alg.path_coords(&Path::trivial(arr.source));
            let et = alg.path_coords(&Path::trivial(arr.target));
            let mut t = TensorElement::new();
            tensor_add_product(&mut t, arr.source as usize, &eo, &ca, &one);
            tensor_add_product(&mut t, arr.target as usize, &ca, &et, &-&one);
            t
        })
        .collect();
    BimoduleMap { level: 1, images }
}

pub fn build_a2(alg: &Algebra, f2: &[UniformElement]) -> BimoduleMap {
    let q = alg.quiver();
    let images = f2
        .iter()
        .map(|x| {
            let mut t = TensorElement::new();
            for (p, c) in x.element().terms() {
                for k in 0..p.len() {
                    let left = alg.path_coords(&p.subpath(q, 0, k));
                    let right = alg.path_coords(&p.subpath(q, k + 1, p.len()));
                    tensor_add_product(&mut t, p.arrows()[k] as usize, &left, &right, c);
                }
            }
            t
        })
        .collect();
    BimoduleMap { level: 2, images }
}

pub fn build_a3(alg: &Algebra, f3: &[F3Member]) -> BimoduleMap {
    let one = alg.field().one();
    let images = f3
        .iter()
        .map(|y| {
            let mut t = TensorElement::new();
            let e = alg.path_coords(&Path::trivial(y.element.origin()));
            for (i, p) in y.right.iter().enumerate() {
                if !p.is_zero() {
                    tensor_add_product(&mut t, i, &e, &alg.coords(p), &one);
                }
            }
            for term in &y.two_sided {
                let l = alg.path_coords(&term.left);
                let r = alg.path_coords(&term.right);
                tensor_add_product(&mut t, term.gen, &l, &r, &-&term.coeff);
            }
            t
        })
        .collect();
    BimoduleMap { level: 3, images }
}

impl Resolution {
    pub fn build(alg: &Algebra, f2: &[UniformElement], f3: &[F3Member]) -> Self {
        Resolution { q: projectives(alg, f2, f3), a1: build_a1(alg), a2: build_a2(alg, f2), a3: build_a3(alg, f3) }
    }

    /// `g A1 = 0`, `A1 A2 = 0`, `A2 A3 = 0`.
    pub fn check_complex(&self, alg: &Algebra) -> Result<()> {
        for (a, img) in self.a1.images.iter().enumerate() {
            if !multiplication(alg, img).is_empty() {
                return Err(Error::Invariant(format!("g A1 is nonzero on arrow {}", alg.quiver().arrow(a as u32).name)));
            }
        }
        for (j, img) in self.a2.images.iter().enumerate() {
            if !self.a1.apply(alg, img).is_empty() {
                return Err(Error::Invariant(format!("A1 A2 is nonzero on generator {j} of Q2")));
            }
        }
        for (j, img) in self.a3.images.iter().enumerate() {
            if !self.a2.apply(alg, img).is_empty() {
                return Err(Error::Invariant(format!("A2 A3 is nonzero on generator {j} of Q3")));
            }
        }
        Ok(())
    }

    /// Exactness at `Q0`: the rank of `A1` as a linear map equals
    /// `dim Q0 - dim Λ`, the dimension of the kernel of `g`.
    pub fn check_exact_at_q0(&self, alg: &Algebra) -> Result<()> {
        let basis = alg.basis();
        let mut index: HashMap<(usize, usize, usize), usize> = HashMap::new();
        let mut e = Echelon::new(alg.field());
        for (a, &(v, w)) in self.q[1].summands.iter().enumerate() {
            for b in (0..basis.dim()).filter(|&b| basis.path(b).target() == v) {
                for b2 in (0..basis.dim()).filter(|&b2| basis.path(b2).source() == w) {
                    let mut x = TensorElement::new();
                    x.insert((a, b, b2), alg.field().one());
                    let img = self.a1.apply(alg, &x);
                    let vec = crate::linalg::from_entries(img.into_iter().map(|(k, c)| {
                        let n = index.len();
                        (*index.entry(k).or_insert(n), c)
                    }));
                    e.insert(&vec);
                }
            }
        }
        let expected = self.q[0].dim(alg) - alg.dim();
        if e.rank() != expected {
            return Err(Error::Invariant(format!("rank A1 = {} but dim ker g = {expected}", e.rank())));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_presentation;
    use crate::groebner::default_cap;

    fn setup(text: &str) -> (Algebra, Vec<UniformElement>, usize) {
        let p = parse_presentation(text).unwrap();
        let cap = default_cap(&p);
        let alg = Algebra::from_presentation(p, cap).unwrap();
        let m = alg.radical_nilpotency(cap).unwrap();
        let idx = minimal_generators(&alg, m);
        let f2 = idx.iter().map(|&i| alg.presentation().relations[i].clone()).collect();
        (alg, f2, m)
    }

    const DUAL: &str = "field Q quiver { vertex v; arrow a: v -> v; } relations { a a; }";

    #[test]
    fn dual_numbers_resolution() {
        let (alg, f2, _) = setup(DUAL);
        assert_eq!(f2.len(), 1);
        let f3 = compute_f3(&alg, &f2).unwrap();
        assert_eq!(f3.len(), 1);
        let aaa = alg.quiver().path_by_names(&["a", "a", "a"]).unwrap();
        assert_eq!(f3[0].0.element(), &FreeElement::from_path(aaa, alg.field().one()));
        let r = decompose_right(alg.quiver(), &f3[0].0, &f2).unwrap();
        assert_eq!(r[0], FreeElement::from_path(alg.quiver().arrow_path(0), alg.field().one()));
        let gens: Vec<FreeElement> = f2.iter().map(|x| x.element().clone()).collect();
        let gb = GroebnerBasis::compute(alg.field(), alg.quiver(), &gens, 12, true).unwrap();
        let ts = decompose_two_sided(alg.quiver(), f3[0].0.element(), &gb, TieBreak::Leftmost).unwrap();
        assert_eq!(ts.len(), 1);
        assert_eq!(ts[0].left, alg.quiver().arrow_path(0));
        assert!(ts[0].right.is_trivial());
    }

    #[test]
    fn redundant_relation_dropped() {
        // a b a is implied by a b
        let (_, f2, _) = setup(
            "field Q quiver { vertex x, y; arrow a: x -> y; arrow b: y -> x; } relations { a b a; a b; b a; }",
        );
        assert_eq!(f2.len(), 2);
    }

    #[test]
    fn complex_conditions_hold() {
        for text in [
            DUAL,
            "field Q quiver { vertex x, y; arrow a: x -> y; arrow b: y -> x; } relations { a b; b a; }",
            "field Q quiver { vertex v; arrow x: v -> v; arrow y: v -> v; } relations { x x - y y; x y; y x; }",
            "field F3 quiver { vertex v; arrow x: v -> v; arrow y: v -> v; } relations { x y - y x; x x; y y; }",
        ] {
            let (alg, f2, _) = setup(text);
            let gens: Vec<FreeElement> = f2.iter().map(|x| x.element().clone()).collect();
            let gb = GroebnerBasis::compute(alg.field(), alg.quiver(), &gens, 40, true).unwrap();
            let f3: Vec<F3Member> = compute_f3(&alg, &f2)
                .unwrap()
                .into_iter()
                .map(|(y, right)| {
                    let two_sided = decompose_two_sided(alg.quiver(), y.element(), &gb, TieBreak::Leftmost).unwrap();
                    assert_eq!(&expand_two_sided(&gens, &two_sided), y.element());
                    assert_eq!(&expand_right(&gens, &right), y.element());
                    F3Member { element: y, right, two_sided }
                })
                .collect();
            let res = Resolution::build(&alg, &f2, &f3);
            res.check_complex(&alg).unwrap();
            res.check_exact_at_q0(&alg).unwrap();
        }
    }

    #[test]
    fn paths_into_and_from() {
        let p = parse_presentation(DUAL).unwrap();
        assert_eq!(kq_paths_from(&p.quiver, 0, 3).len(), 4);
        assert_eq!(kq_paths_into(&p.quiver, 0, 0).len(), 1);
    }
}
