//! Hochschild cohomology from the unnormalized bar complex
//! `Hom_K(Λ^{⊗n}, Λ)`, used as an independent check on small algebras.

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::{from_entries, Echelon, SparseVec};

pub const DEFAULT_ORACLE_BOUND: usize = 12;

/// Index of the cochain value at tuple `t` (base `d` digits) and output `z`.
fn encode(t: &[usize], z: usize, d: usize) -> usize {
    t.iter().fold(0, |acc, &x| acc * d + x) * d + z
}

fn decode(mut index: usize, n: usize, d: usize) -> (Vec<usize>, usize) {
    let z = index % d;
    index /= d;
    let mut t = vec![0; n];
    for k in (0..n).rev() {
        t[k] = index % d;
        index /= d;
    }
    (t, z)
}

/// `δ` applied to the basis cochain of `C^n` sending `t` to `z` and all
/// other tuples to zero.
fn coboundary(alg: &Algebra, t: &[usize], z: usize) -> SparseVec {
    let d = alg.dim();
    let n = t.len();
    let mut entries: Vec<(usize, Scalar)> = Vec::new();
    let sign = |k: usize| if k % 2 == 0 { alg.field().one() } else { -alg.field().one() };
    // a_1 f(a_2, ..., a_{n+1})
    for a in 0..d {
        for (x, c) in alg.mul_basis(a, z) {
            let mut s = vec![a];
            s.extend_from_slice(t);
            entries.push((encode(&s, *x, d), c.clone()));
        }
    }
    // (-1)^i f(..., a_i a_{i+1}, ...)
    for i in 0..n {
        for (x, y, c) in alg.factorizations(t[i]) {
            let mut s = Vec::with_capacity(n + 1);
            s.extend_from_slice(&t[..i]);
            s.push(*x);
            s.push(*y);
            s.extend_from_slice(&t[i + 1..]);
            entries.push((encode(&s, z, d), &sign(i + 1) * c));
        }
    }
    // (-1)^{n+1} f(a_1, ..., a_n) a_{n+1}
    for a in 0..d {
        for (x, c) in alg.mul_basis(z, a) {
            let mut s = t.to_vec();
            s.push(a);
            entries.push((encode(&s, *x, d), &sign(n + 1) * c));
        }
    }
    from_entries(entries)
}

/// Rank of `δ: C^n -> C^(n+1)`.
fn coboundary_rank(alg: &Algebra, n: usize) -> usize {
    let d = alg.dim();
    let mut e = Echelon::new(alg.field());
    for index in 0..d.pow(n as u32 + 1) {
        let (t, z) = decode(index, n, d);
        let v = coboundary(alg, &t, z);
        if !v.is_empty() {
            e.insert(&v);
        }
    }
    e.rank()
}

/// `(dim HH⁰, dim HH¹, dim HH²)` from the bar complex. Refuses algebras
/// of dimension above `bound`.
pub fn bar_hh_dims(alg: &Algebra, bound: usize) -> Result<(usize, usize, usize)> {
    let d = alg.dim();
    if d > bound {
        return Err(Error::OracleTooLarge { dim: d, bound });
    }
    let r0 = coboundary_rank(alg, 0);
    let r1 = coboundary_rank(alg, 1);
    let r2 = coboundary_rank(alg, 2);
    let c0 = d;
    let c1 = d * d;
    let c2 = d * d * d;
    Ok((c0 - r0, c1 - r1 - r0, c2 - r2 - r1))
}

/// Checks `δ δ = 0` on `C^0` and `C^1`.
pub fn check_square_zero(alg: &Algebra) -> bool {
    let d = alg.dim();
    for n in 0..2 {
        for index in 0..d.pow(n as u32 + 1) {
            let (t, z) = decode(index, n, d);
            let mut total: SparseVec = Vec::new();
            for (k, c) in coboundary(alg, &t, z) {
                let (s, x) = decode(k, n + 1, d);
                total = crate::linalg::axpy(&total, &c, &coboundary(alg, &s, x));
            }
            if !total.is_empty() {
                return false;
            }
        }
    }
    true
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
    fn ground_field() {
        let a = algebra("field Q quiver { vertex v; }");
        assert_eq!(bar_hh_dims(&a, 12).unwrap(), (1, 0, 0));
    }

    #[test]
    fn dual_numbers_over_q() {
        // K[x]/(x^2) in characteristic 0: HH^n has dimension 2, 1, 1
        let a = algebra("field Q quiver { vertex v; arrow a: v -> v; } relations { a a; }");
        assert!(check_square_zero(&a));
        assert_eq!(bar_hh_dims(&a, 12).unwrap(), (2, 1, 1));
    }

    #[test]
    fn dual_numbers_in_characteristic_two() {
        let a = algebra("field F2 quiver { vertex v; arrow a: v -> v; } relations { a a; }");
        assert_eq!(bar_hh_dims(&a, 12).unwrap(), (2, 2, 2));
    }

    #[test]
    fn bound_enforced() {
        let a = algebra("field Q quiver { vertex v; arrow a: v -> v; } relations { a a a; }");
        assert!(matches!(bar_hh_dims(&a, 2), Err(Error::OracleTooLarge { dim: 3, bound: 2 })));
    }

    #[test]
    fn encode_roundtrip() {
        for i in 0..125 {
            let (t, z) = decode(i, 2, 5);
            assert_eq!(encode(&t, z, 5), i);
        }
    }
}
