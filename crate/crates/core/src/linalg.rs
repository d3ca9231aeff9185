//! Sparse exact linear algebra: incremental row echelon forms with optional
//! tracking of how each row was obtained from the inserted vectors.

use std::collections::BTreeMap;

use crate::field::{FieldSpec, Scalar};

/// Sparse vector as `(index, coefficient)` pairs, strictly increasing in
/// index, with no zero coefficients.
pub type SparseVec = Vec<(usize, Scalar)>;

/// `y + c * x`.
pub fn axpy(y: &[(usize, Scalar)], c: &Scalar, x: &[(usize, Scalar)]) -> SparseVec {
    if c.is_zero() {
        return y.to_vec();
    }
    let mut out = Vec::with_capacity(y.len() + x.len());
    let (mut i, mut j) = (0, 0);
    while i < y.len() || j < x.len() {
        if j == x.len() || (i < y.len() && y[i].0 < x[j].0) {
            out.push(y[i].clone());
            i += 1;
        } else if i == y.len() || x[j].0 < y[i].0 {
            out.push((x[j].0, c * &x[j].1));
            j += 1;
        } else {
            let s = &y[i].1 + &(c * &x[j].1);
            if !s.is_zero() {
                out.push((y[i].0, s));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale(v: &[(usize, Scalar)], c: &Scalar) -> SparseVec {
    if c.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, x)| (*i, c * x)).collect()
}

/// Builds a sparse vector from unsorted entries, summing duplicates.
pub fn from_entries(entries: impl IntoIterator<Item = (usize, Scalar)>) -> SparseVec {
    let mut map: BTreeMap<usize, Scalar> = BTreeMap::new();
    for (i, c) in entries {
        if c.is_zero() {
            continue;
        }
        match map.get_mut(&i) {
            Some(x) => *x += &c,
            None => {
                map.insert(i, c);
            }
        }
    }
    map.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

pub fn unit(i: usize, field: FieldSpec) -> SparseVec {
    vec![(i, field.one())]
}

#[derive(Debug, Clone)]
struct Row {
    vec: SparseVec,
    /// `vec` as a combination of inserted vectors (only when tracking).
    tag: SparseVec,
}

/// Outcome of [`Echelon::insert`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Insert {
    /// New pivot at this index.
    Independent(usize),
    /// The vector depended on earlier ones; with tracking, the coefficients
    /// of a vanishing combination of inserted vectors (the new one has
    /// coefficient 1).
    Dependent(SparseVec),
}

/// Row echelon form built one vector at a time. Each stored row has a
/// leading coefficient 1 at its pivot and no entries before it.
#[derive(Debug, Clone)]
pub struct Echelon {
    field: FieldSpec,
    rows: BTreeMap<usize, Row>,
    track: bool,
    inserted: usize,
}

impl Echelon {
    pub fn new(field: FieldSpec) -> Self {
        Echelon { field, rows: BTreeMap::new(), track: false, inserted: 0 }
    }

    /// Echelon form that remembers each row as a combination of the
    /// inserted vectors, numbered from zero in insertion order.
    pub fn tracked(field: FieldSpec) -> Self {
        Echelon { field, rows: BTreeMap::new(), track: true, inserted: 0 }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn inserted(&self) -> usize {
        self.inserted
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn is_pivot(&self, i: usize) -> bool {
        self.rows.contains_key(&i)
    }

    /// Eliminates every pivot coordinate of `v`. Returns the residual and,
    /// when tracking, the combination `c` with `v = residual + sum c_j v_j`.
    pub fn reduce(&self, v: &[(usize, Scalar)]) -> (SparseVec, SparseVec) {
        let mut v = v.to_vec();
        let mut comb = Vec::new();
        let mut k = 0;
        while k < v.len() {
            let (idx, c) = (v[k].0, v[k].1.clone());
            match self.rows.get(&idx) {
                Some(row) => {
                    v = axpy(&v, &-&c, &row.vec);
                    if self.track {
                        comb = axpy(&comb, &c, &row.tag);
                    }
                    // entries before idx are untouched; idx itself is now gone
                }
                None => k += 1,
            }
        }
        (v, comb)
    }

    pub fn contains(&self, v: &[(usize, Scalar)]) -> bool {
        self.reduce(v).0.is_empty()
    }

    pub fn insert(&mut self, v: &[(usize, Scalar)]) -> Insert {
        let id = self.inserted;
        self.inserted += 1;
        let (r, comb) = self.reduce(v);
        let tag = if self.track { axpy(&unit(id, self.field), &-self.field.one(), &comb) } else { Vec::new() };
        match r.first() {
            None => Insert::Dependent(tag),
            Some((p, lead)) => {
                let p = *p;
                let inv = lead.inv().expect("nonzero leading entry");
                let row = Row { vec: scale(&r, &inv), tag: scale(&tag, &inv) };
                self.rows.insert(p, row);
                Insert::Independent(p)
            }
        }
    }

    /// With tracking: coefficients `x` with `v = sum x_j v_j` over the
    /// inserted vectors, if `v` lies in their span.
    pub fn solve(&self, v: &[(usize, Scalar)]) -> Option<SparseVec> {
        assert!(self.track, "solve needs a tracked echelon form");
        let (r, comb) = self.reduce(v);
        r.is_empty().then_some(comb)
    }

    /// Reduced row echelon basis of the row space, sorted by pivot.
    pub fn rref(&self) -> Vec<SparseVec> {
        let mut done: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for (&p, row) in self.rows.iter().rev() {
            let mut v = row.vec.clone();
            let mut k = 1;
            while k < v.len() {
                let idx = v[k].0;
                if let Some(other) = done.get(&idx) {
                    let c = v[k].1.clone();
                    v = axpy(&v, &-c, other);
                } else {
                    k += 1;
                }
            }
            done.insert(p, v);
        }
        done.into_values().collect()
    }
}

/// A matrix stored by columns.
#[derive(Debug, Clone)]
pub struct ColumnMatrix {
    pub field: FieldSpec,
    pub rows: usize,
    pub columns: Vec<SparseVec>,
}

impl ColumnMatrix {
    pub fn new(field: FieldSpec, rows: usize, columns: Vec<SparseVec>) -> Self {
        debug_assert!(columns.iter().all(|c| c.iter().all(|(i, _)| *i < rows)));
        ColumnMatrix { field, rows, columns }
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new(self.field);
        for c in &self.columns {
            e.insert(c);
        }
        e.rank()
    }

    /// Basis of the null space, as vectors indexed by column.
    pub fn kernel(&self) -> Vec<SparseVec> {
        let mut e = Echelon::tracked(self.field);
        let mut out = Vec::new();
        for c in &self.columns {
            if let Insert::Dependent(tag) = e.insert(c) {
                out.push(tag);
            }
        }
        out
    }

    /// Image of a vector indexed by column.
    pub fn apply(&self, x: &[(usize, Scalar)]) -> SparseVec {
        let mut out = Vec::new();
        for (j, c) in x {
            out = axpy(&out, c, &self.columns[*j]);
        }
        out
    }

    /// `self * other` (apply `other` first).
    pub fn compose(&self, other: &ColumnMatrix) -> ColumnMatrix {
        assert_eq!(self.cols(), other.rows);
        ColumnMatrix::new(self.field, self.rows, other.columns.iter().map(|c| self.apply(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_empty())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> Scalar {
        FieldSpec::Rationals.from_int(n)
    }

    fn dense(v: &[i64]) -> SparseVec {
        from_entries(v.iter().enumerate().map(|(i, &x)| (i, q(x))))
    }

    #[test]
    fn rank_and_kernel() {
        let m = ColumnMatrix::new(
            FieldSpec::Rationals,
            3,
            vec![dense(&[1, 2, 3]), dense(&[2, 4, 6]), dense(&[0, 1, 1]), dense(&[1, 3, 4])],
        );
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.apply(v).is_empty());
        }
    }

    #[test]
    fn solve_in_span() {
        let mut e = Echelon::tracked(FieldSpec::Rationals);
        e.insert(&dense(&[1, 1, 0]));
        e.insert(&dense(&[0, 1, 1]));
        let x = e.solve(&dense(&[2, 5, 3])).unwrap();
        assert_eq!(x, dense(&[2, 3]));
        assert!(e.solve(&dense(&[1, 0, 0])).is_none());
    }

    #[test]
    fn rref_is_reduced() {
        let mut e = Echelon::new(FieldSpec::Rationals);
        e.insert(&dense(&[1, 2, 3]));
        e.insert(&dense(&[0, 1, 5]));
        let r = e.rref();
        assert_eq!(r, vec![dense(&[1, 0, -7]), dense(&[0, 1, 5])]);
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..5, 1usize..6).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-2i64..3, r), c))
    }

    proptest! {
        #[test]
        fn rank_nullity(cols in small_matrix()) {
            let rows = cols[0].len();
            let m = ColumnMatrix::new(FieldSpec::Rationals, rows, cols.iter().map(|c| dense(c)).collect());
            let k = m.kernel();
            prop_assert_eq!(m.rank() + k.len(), m.cols());
            for v in &k {
                prop_assert!(m.apply(v).is_empty());
            }
        }

        #[test]
        fn rank_matches_over_large_prime(cols in small_matrix()) {
            // small integer entries: rank over Q and over a large prime agree generically
            // but not always, so only check rank over F_p never exceeds rank over Q.
            let rows = cols[0].len();
            let f = FieldSpec::Prime(1_000_003);
            let mq = ColumnMatrix::new(FieldSpec::Rationals, rows, cols.iter().map(|c| dense(c)).collect());
            let mp = ColumnMatrix::new(f, rows, cols.iter().map(|c| from_entries(c.iter().enumerate().map(|(i, &x)| (i, f.from_int(x))))).collect());
            prop_assert!(mp.rank() <= mq.rank());
        }
    }
}
