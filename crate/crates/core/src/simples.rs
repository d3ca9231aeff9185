//! Minimal projective resolutions of the simple right modules, computed
//! directly by linear algebra: each step is the projective cover of the
//! previous syzygy.

use std::collections::{BTreeMap, HashMap};

use crate::algebra::Algebra;
use crate::linalg::{from_entries, ColumnMatrix, Echelon, Insert, SparseVec};
use crate::quiver::VertexId;

/// For each simple module `S_v`, the sorted termini of the indecomposable
/// projectives `e_w Λ` in each step of its minimal resolution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleResolutionReport {
    pub steps: BTreeMap<VertexId, Vec<Vec<VertexId>>>,
}

impl SimpleResolutionReport {
    /// Multiset of termini at step `n`, summed over all simples.
    pub fn step_total(&self, n: usize) -> Vec<VertexId> {
        let mut all: Vec<VertexId> = self.steps.values().flat_map(|s| s[n].iter().copied()).collect();
        all.sort_unstable();
        all
    }
}

/// A submodule of `⊕_j e_{w_j} Λ`, given by a spanning set of vectors over
/// coordinates `(j, b)` with `b` a basis path leaving `w_j`.
struct Submodule {
    coords: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
    span: Vec<SparseVec>,
}

impl Submodule {
    fn free(alg: &Algebra, summands: &[VertexId]) -> (Vec<(usize, usize)>, HashMap<(usize, usize), usize>) {
        let mut coords = Vec::new();
        let mut index = HashMap::new();
        for (j, &w) in summands.iter().enumerate() {
            for b in 0..alg.dim() {
                if alg.basis().path(b).source() == w {
                    index.insert((j, b), coords.len());
                    coords.push((j, b));
                }
            }
        }
        (coords, index)
    }

    /// `x · b` for a basis element `b` of Λ.
    fn act(&self, alg: &Algebra, x: &[(usize, crate::field::Scalar)], b: usize) -> SparseVec {
        let mut entries = Vec::new();
        for (k, c) in x {
            let (j, y) = self.coords[*k];
            for (z, d) in alg.mul_basis(y, b) {
                entries.push((self.index[&(j, *z)], c * d));
            }
        }
        from_entries(entries)
    }

    fn terminus(&self, alg: &Algebra, k: usize) -> VertexId {
        alg.basis().path(self.coords[k].1).target()
    }

    /// Termini of a minimal generating set, and the generators themselves.
    fn top(&self, alg: &Algebra) -> Vec<(VertexId, SparseVec)> {
        let q = alg.quiver();
        let arrows: Vec<usize> = (0..q.arrow_count() as u32)
            .map(|a| alg.basis().index_of(&q.arrow_path(a)).expect("arrows are basis elements"))
            .collect();
        // split spanning vectors by terminus; each part lies in the submodule
        let mut by_terminus: BTreeMap<VertexId, Echelon> = BTreeMap::new();
        for v in &self.span {
            let mut parts: BTreeMap<VertexId, SparseVec> = BTreeMap::new();
            for (k, c) in v {
                parts.entry(self.terminus(alg, *k)).or_default().push((*k, c.clone()));
            }
            for (w, part) in parts {
                by_terminus.entry(w).or_insert_with(|| Echelon::new(alg.field())).insert(&part);
            }
        }
        let mut radical: BTreeMap<VertexId, Echelon> = BTreeMap::new();
        for e in by_terminus.values() {
            for m in e.rref() {
                for &a in &arrows {
                    let ma = self.act(alg, &m, a);
                    if let Some((k, _)) = ma.first() {
                        let w = self.terminus(alg, *k);
                        radical.entry(w).or_insert_with(|| Echelon::new(alg.field())).insert(&ma);
                    }
                }
            }
        }
        let mut out = Vec::new();
        for (w, e) in &by_terminus {
            let rad = radical.entry(*w).or_insert_with(|| Echelon::new(alg.field()));
            for m in e.rref() {
                if let Insert::Independent(_) = rad.insert(&m) {
                    out.push((*w, m));
                }
            }
        }
        out
    }
}

fn resolve(alg: &Algebra, v: VertexId, depth: usize) -> Vec<Vec<VertexId>> {
    let mut steps = vec![vec![v]];
    let (coords, index) = Submodule::free(alg, &[v]);
    let span = coords
        .iter()
        .enumerate()
        .filter(|(_, &(_, b))| !alg.basis().path(b).is_trivial())
        .map(|(k, _)| vec![(k, alg.field().one())])
        .collect();
    let mut module = Submodule { coords, index, span };
    for _ in 1..=depth {
        let top = module.top(alg);
        let cover: Vec<VertexId> = top.iter().map(|(w, _)| *w).collect();
        let mut sorted = cover.clone();
        sorted.sort_unstable();
        steps.push(sorted);
        let (coords, index) = Submodule::free(alg, &cover);
        let columns: Vec<SparseVec> =
            coords.iter().map(|&(i, b)| module.act(alg, &top[i].1, b)).collect();
        let kernel = ColumnMatrix::new(alg.field(), module.coords.len(), columns).kernel();
        module = Submodule { coords, index, span: kernel };
    }
    steps
}

/// Resolves every simple module to step `depth`.
pub fn min_resolution_simples(alg: &Algebra, depth: usize) -> SimpleResolutionReport {
    let steps = (0..alg.quiver().vertex_count() as VertexId).map(|v| (v, resolve(alg, v, depth))).collect();
    SimpleResolutionReport { steps }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_presentation;
    use crate::groebner::default_cap;

    fn algebra(text: &str) -> Algebra {
        let p = parse_presentation(text).unwrap();
        let cap = default_cap(&p);
        Algebra::from_presentation(p, cap).unwrap()
    }

    #[test]
    fn dual_numbers_periodic() {
        let a = algebra("field Q quiver { vertex v; arrow a: v -> v; } relations { a a; }");
        let r = min_resolution_simples(&a, 3);
        assert_eq!(r.steps[&0], vec![vec![0], vec![0], vec![0], vec![0]]);
    }

    #[test]
    fn two_cycle() {
        let a = algebra("field Q quiver { vertex x, y; arrow a: x -> y; arrow b: y -> x; } relations { a b; b a; }");
        let r = min_resolution_simples(&a, 3);
        assert_eq!(r.steps[&0], vec![vec![0], vec![1], vec![0], vec![1]]);
    }

    #[test]
    fn hereditary_stops() {
        let a = algebra("field Q quiver { vertex x, y; arrow a: x -> y; }");
        let r = min_resolution_simples(&a, 3);
        assert_eq!(r.steps[&0], vec![vec![0], vec![1], vec![], vec![]]);
        assert_eq!(r.step_total(1), vec![1]);
    }
}
