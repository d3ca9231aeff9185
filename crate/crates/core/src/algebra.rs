//! The finite-dimensional algebra `Λ = KQ/I` in the basis of irreducible
//! paths.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::groebner::{AlgebraBasis, GroebnerBasis};
use crate::linalg::{axpy, from_entries, Echelon, SparseVec};
use crate::quiver::{FreeElement, Path, Presentation, Quiver, VertexId};

#[derive(Debug, Clone)]
pub struct Algebra {
    presentation: Presentation,
    gb: GroebnerBasis,
    basis: AlgebraBasis,
    /// Products of composable basis paths, in basis coordinates.
    products: HashMap<(usize, usize), SparseVec>,
    /// For each basis index `t`, the pairs `(x, y, c)` with `c` the
    /// coefficient of `t` in `x * y`.
    factorizations: Vec<Vec<(usize, usize, Scalar)>>,
}

impl Algebra {
    pub fn new(presentation: Presentation, gb: GroebnerBasis, basis: AlgebraBasis) -> Self {
        let mut alg = Algebra {
            presentation,
            gb,
            basis,
            products: HashMap::new(),
            factorizations: Vec::new(),
        };
        let n = alg.basis.dim();
        let mut factorizations = vec![Vec::new(); n];
        for x in 0..n {
            let px = alg.basis.path(x).clone();
            for y in alg.starting_at(px.target()) {
                let py = alg.basis.path(y);
                let prod = px.concat(py).expect("composable");
                let coords = alg.coords(&FreeElement::from_path(prod, alg.field().one()));
                for (t, c) in &coords {
                    factorizations[*t].push((x, y, c.clone()));
                }
                alg.products.insert((x, y), coords);
            }
        }
        alg.factorizations = factorizations;
        alg
    }

    /// Completes the relations and enumerates the basis.
    pub fn from_presentation(presentation: Presentation, cap: usize) -> Result<Self> {
        let gb = GroebnerBasis::from_presentation(&presentation, cap)?;
        let basis = gb.enumerate_basis(cap)?;
        Ok(Algebra::new(presentation, gb, basis))
    }

    fn starting_at(&self, v: VertexId) -> Vec<usize> {
        (0..self.basis.dim()).filter(|&i| self.basis.path(i).source() == v).collect()
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn quiver(&self) -> &Quiver {
        &self.presentation.quiver
    }

    pub fn field(&self) -> FieldSpec {
        self.presentation.field
    }

    pub fn gb(&self) -> &GroebnerBasis {
        &self.gb
    }

    pub fn basis(&self) -> &AlgebraBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn nf(&self, x: &FreeElement) -> FreeElement {
        self.gb.normal_form(x)
    }

    /// Basis coordinates of the residue of `x`.
    pub fn coords(&self, x: &FreeElement) -> SparseVec {
        let r = self.gb.normal_form(x);
        from_entries(r.terms().map(|(p, c)| {
            (self.basis.index_of(p).expect("normal forms are spanned by basis paths"), c.clone())
        }))
    }

    pub fn element(&self, v: &[(usize, Scalar)]) -> FreeElement {
        FreeElement::from_terms(v.iter().map(|(i, c)| (self.basis.path(*i).clone(), c.clone())))
    }

    pub fn path_coords(&self, p: &Path) -> SparseVec {
        match self.basis.index_of(p) {
            Some(i) => vec![(i, self.field().one())],
            None => self.coords(&FreeElement::from_path(p.clone(), self.field().one())),
        }
    }

    /// Product of two basis elements.
    pub fn mul_basis(&self, x: usize, y: usize) -> &[(usize, Scalar)] {
        self.products.get(&(x, y)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn mul(&self, x: &[(usize, Scalar)], y: &[(usize, Scalar)]) -> SparseVec {
        let mut out = Vec::new();
        for (i, a) in x {
            for (j, b) in y {
                let prod = self.mul_basis(*i, *j);
                if !prod.is_empty() {
                    out = axpy(&out, &(a * b), prod);
                }
            }
        }
        out
    }

    /// Pairs `(x, y, c)` with `c` the coefficient of basis element `t` in `x y`.
    pub fn factorizations(&self, t: usize) -> &[(usize, usize, Scalar)] {
        &self.factorizations[t]
    }

    pub fn format(&self, v: &[(usize, Scalar)]) -> String {
        self.element(v).format(self.quiver())
    }

    /// Least `m` with `rad(Λ)^m = 0`. Fails if the radical is not nilpotent
    /// within `cap` steps, which happens exactly when the ideal is not
    /// admissible.
    /// Basis of `rad^m` for the least `m` with `rad^m = rad^(m+1)`. Empty
    /// exactly when the radical is nilpotent.
    pub fn stable_radical_power(&self) -> Vec<SparseVec> {
        let q = self.quiver();
        let mut level: Vec<SparseVec> =
            (0..self.dim()).filter(|&i| !self.basis.path(i).is_trivial()).map(|i| vec![(i, self.field().one())]).collect();
        loop {
            let mut e = Echelon::new(self.field());
            for x in &level {
                for a in 0..q.arrow_count() as u32 {
                    let prod = self.mul(x, &self.path_coords(&q.arrow_path(a)));
                    if !prod.is_empty() {
                        e.insert(&prod);
                    }
                }
            }
            if e.rank() == level.len() {
                return level;
            }
            level = e.rref();
        }
    }

    pub fn radical_nilpotency(&self, cap: usize) -> Result<usize> {
        let q = self.quiver();
        let mut level: Vec<SparseVec> =
            (0..self.dim()).filter(|&i| !self.basis.path(i).is_trivial()).map(|i| vec![(i, self.field().one())]).collect();
        let mut m = 1;
        while !level.is_empty() {
            if m > cap {
                return Err(Error::Validation("the radical is not nilpotent; the ideal is not admissible".into()));
            }
            let mut e = Echelon::new(self.field());
            for x in &level {
                for a in 0..q.arrow_count() as u32 {
                    let ca = self.path_coords(&q.arrow_path(a));
                    let prod = self.mul(x, &ca);
                    if !prod.is_empty() {
                        e.insert(&prod);
                    }
                }
            }
            level = e.rref();
            m += 1;
        }
        Ok(m)
    }
}
