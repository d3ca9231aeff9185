//! `Hom(-, Λ)` applied to the resolution, and `HH⁰`, `HH¹`, `HH²`.
//!
//! `Hom(Λv ⊗ wΛ, Λ) ≅ vΛw` by evaluation at `v ⊗ w`, so a cochain on `Qn`
//! is one element of `o(x)Λt(x)` per generator `x`.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::{ColumnMatrix, Echelon, SparseVec};
use crate::resolution::{BimoduleMap, ProjectiveDescriptor};

/// Coordinates on `Hom(Qn, Λ)`: per summand the basis of `o(x)Λt(x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomSpace {
    pub level: usize,
    pub summands: Vec<(u32, u32)>,
    pub paths: Vec<Vec<usize>>,
    offsets: Vec<usize>,
    positions: Vec<HashMap<usize, usize>>,
}

impl HomSpace {
    pub fn new(desc: &ProjectiveDescriptor, alg: &Algebra) -> Self {
        let mut paths = Vec::new();
        let mut offsets = Vec::new();
        let mut positions = Vec::new();
        let mut total = 0;
        for &(v, w) in &desc.summands {
            let ps = alg.basis().between(v, w).to_vec();
            offsets.push(total);
            total += ps.len();
            positions.push(ps.iter().enumerate().map(|(k, &b)| (b, k)).collect());
            paths.push(ps);
        }
        offsets.push(total);
        HomSpace { level: desc.level, summands: desc.summands.clone(), paths, offsets, positions }
    }

    pub fn dim(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    /// Coordinate of the cochain sending generator `j` to basis path `b`.
    pub fn coordinate(&self, j: usize, b: usize) -> Option<usize> {
        self.positions[j].get(&b).map(|k| self.offsets[j] + k)
    }

    /// Generator and basis path of a coordinate.
    pub fn locate(&self, index: usize) -> (usize, usize) {
        let j = self.offsets.partition_point(|&o| o <= index) - 1;
        (j, self.paths[j][index - self.offsets[j]])
    }

    /// Splits a cochain vector by generator, as basis-coordinate vectors of Λ.
    pub fn components(&self, v: &[(usize, Scalar)]) -> BTreeMap<usize, SparseVec> {
        let mut out: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for (i, c) in v {
            let (j, b) = self.locate(*i);
            out.entry(j).or_default().push((b, c.clone()));
        }
        for comp in out.values_mut() {
            comp.sort_by_key(|(b, _)| *b);
        }
        out
    }

    /// Cochain with `values[j]` (basis coordinates of Λ) on generator `j`.
    pub fn cochain(&self, values: &[(usize, SparseVec)]) -> Result<SparseVec> {
        let mut entries = Vec::new();
        for (j, v) in values {
            for (b, c) in v {
                let k = self.coordinate(*j, *b).ok_or_else(|| {
                    Error::Validation(format!("value on generator {j} does not lie in o(x)Λt(x)"))
                })?;
                entries.push((k, c.clone()));
            }
        }
        Ok(crate::linalg::from_entries(entries))
    }
}

/// Matrix of `φ -> φ ∘ A` from `Hom(Q(n-1), Λ)` to `Hom(Qn, Λ)`.
pub fn induced_matrix(alg: &Algebra, map: &BimoduleMap, source: &HomSpace, target: &HomSpace) -> Result<ColumnMatrix> {
    let mut columns: Vec<BTreeMap<usize, Scalar>> = vec![BTreeMap::new(); source.dim()];
    for (m, image) in map.images.iter().enumerate() {
        for (&(j, b, b2), d) in image {
            for (k, &beta) in source.paths[j].iter().enumerate() {
                let col = source.offsets[j] + k;
                let left = alg.mul_basis(b, beta);
                if left.is_empty() {
                    continue;
                }
                let prod = alg.mul(left, &[(b2, alg.field().one())]);
                for (t, c) in prod {
                    let row = target.coordinate(m, t).ok_or_else(|| {
                        Error::Invariant(format!("cochain value escapes the block of generator {m}"))
                    })?;
                    let entry = columns[col].entry(row).or_insert_with(|| alg.field().zero());
                    *entry += &(d * &c);
                }
            }
        }
    }
    let columns = columns.into_iter().map(|c| c.into_iter().filter(|(_, x)| !x.is_zero()).collect()).collect();
    Ok(ColumnMatrix::new(alg.field(), target.dim(), columns))
}

/// The complex `Hom(Q0,Λ) -> Hom(Q1,Λ) -> Hom(Q2,Λ) -> Hom(Q3,Λ)`.
#[derive(Debug, Clone)]
pub struct CochainComplex {
    pub hom: [HomSpace; 4],
    pub m1: ColumnMatrix,
    pub m2: ColumnMatrix,
    pub m3: ColumnMatrix,
    pub rank_m1: usize,
    pub rank_m2: usize,
    pub rank_m3: usize,
}

impl CochainComplex {
    pub fn new(alg: &Algebra, q: &[ProjectiveDescriptor; 4], a1: &BimoduleMap, a2: &BimoduleMap, a3: &BimoduleMap) -> Result<Self> {
        let hom = [
            HomSpace::new(&q[0], alg),
            HomSpace::new(&q[1], alg),
            HomSpace::new(&q[2], alg),
            HomSpace::new(&q[3], alg),
        ];
        let m1 = induced_matrix(alg, a1, &hom[0], &hom[1])?;
        let m2 = induced_matrix(alg, a2, &hom[1], &hom[2])?;
        let m3 = induced_matrix(alg, a3, &hom[2], &hom[3])?;
        let (rank_m1, rank_m2, rank_m3) = (m1.rank(), m2.rank(), m3.rank());
        Ok(CochainComplex { hom, m1, m2, m3, rank_m1, rank_m2, rank_m3 })
    }

    /// `M2 M1 = 0` and `M3 M2 = 0`.
    pub fn check(&self) -> Result<()> {
        if !self.m2.compose(&self.m1).is_zero() {
            return Err(Error::Invariant("d2 d1 is nonzero".into()));
        }
        if !self.m3.compose(&self.m2).is_zero() {
            return Err(Error::Invariant("d3 d2 is nonzero".into()));
        }
        Ok(())
    }

    pub fn hh0(&self) -> usize {
        self.hom[0].dim() - self.rank_m1
    }

    pub fn hh1(&self) -> usize {
        self.hom[1].dim() - self.rank_m2 - self.rank_m1
    }

    pub fn dim_ker_d3(&self) -> usize {
        self.hom[2].dim() - self.rank_m3
    }

    pub fn hh2(&self) -> usize {
        self.dim_ker_d3() - self.rank_m2
    }

    /// Is the cochain a cocycle, i.e. in `Ker d3`?
    pub fn is_cocycle(&self, h: &[(usize, Scalar)]) -> bool {
        self.m3.apply(h).is_empty()
    }

    /// Is the cochain in `Im d2`?
    pub fn is_coboundary(&self, h: &[(usize, Scalar)]) -> bool {
        let mut e = Echelon::new(self.m2.field);
        for c in &self.m2.columns {
            e.insert(c);
        }
        e.contains(h)
    }

    /// Rank of a family of cochains modulo `Im d2`.
    pub fn rank_mod_coboundaries(&self, hs: &[SparseVec]) -> usize {
        let mut e = Echelon::new(self.m2.field);
        for c in &self.m2.columns {
            e.insert(c);
        }
        let base = e.rank();
        for h in hs {
            e.insert(h);
        }
        e.rank() - base
    }

    /// Representatives of a basis of `HH²`: kernel vectors of `M3` with
    /// the pivot coordinates of `Im M2` eliminated, in reduced echelon form.
    pub fn hh2_representatives(&self) -> Vec<SparseVec> {
        let mut image = Echelon::new(self.m2.field);
        for c in &self.m2.columns {
            image.insert(c);
        }
        let mut reps = Echelon::new(self.m2.field);
        for k in self.m3.kernel() {
            let (r, _) = image.reduce(&k);
            if !r.is_empty() {
                reps.insert(&r);
            }
        }
        reps.rref()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomDims {
    pub q0: usize,
    pub q1: usize,
    pub q2: usize,
    pub q3: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HhDims {
    pub hh0: usize,
    pub hh1: usize,
    pub hh2: usize,
}

/// Report in the published JSON layout.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HHReport {
    pub field: String,
    pub dim_algebra: usize,
    pub f2_count: usize,
    pub f3_count: usize,
    pub hom_dims: HomDims,
    pub rank_d1: usize,
    pub rank_d2: usize,
    pub dim_ker_d3: usize,
    pub hh: HhDims,
    pub hh2_basis: Vec<BTreeMap<String, String>>,
}

impl HHReport {
    pub fn new(alg: &Algebra, complex: &CochainComplex, f2_names: &[String], f3_count: usize) -> Self {
        let reps = complex.hh2_representatives();
        let hh2_basis = reps
            .iter()
            .map(|r| {
                complex.hom[2]
                    .components(r)
                    .into_iter()
                    .map(|(j, v)| (f2_names[j].clone(), alg.format(&v)))
                    .collect()
            })
            .collect();
        HHReport {
            field: alg.field().label(),
            dim_algebra: alg.dim(),
            f2_count: f2_names.len(),
            f3_count,
            hom_dims: HomDims {
                q0: complex.hom[0].dim(),
                q1: complex.hom[1].dim(),
                q2: complex.hom[2].dim(),
                q3: complex.hom[3].dim(),
            },
            rank_d1: complex.rank_m1,
            rank_d2: complex.rank_m2,
            dim_ker_d3: complex.dim_ker_d3(),
            hh: HhDims { hh0: complex.hh0(), hh1: complex.hh1(), hh2: complex.hh2() },
            hh2_basis,
        }
    }
}
