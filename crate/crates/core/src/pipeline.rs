//! End-to-end computation: presentation → Gröbner basis → `f²`, `f³` →
//! resolution → `Hom` complex → report. Every stage is checked.

use std::path::PathBuf;

use crate::algebra::Algebra;
use crate::cache::{self, Cache, CacheEntry, SCHEMA_VERSION};
use crate::error::{Error, Result};
use crate::groebner::{default_cap, AlgebraBasis, GroebnerBasis, TieBreak};
use crate::hochschild::{CochainComplex, HHReport};
use crate::linalg::SparseVec;
use crate::quiver::{FreeElement, Presentation, UniformElement};
use crate::resolution::{
    compute_f3, decompose_right, decompose_two_sided, expand_right, expand_two_sided, minimal_generators, F3Member,
    Resolution,
};

#[derive(Debug, Clone, Default)]
pub struct Options {
    pub cap: Option<usize>,
    pub tie: TieBreak,
    pub cache_dir: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct Output {
    pub algebra: Algebra,
    pub cap: usize,
    /// Least `m` with `rad(Λ)^m = 0`.
    pub nilpotency: usize,
    pub f2: Vec<UniformElement>,
    pub f2_names: Vec<String>,
    pub f3: Vec<F3Member>,
    pub resolution: Resolution,
    pub complex: CochainComplex,
    pub report: HHReport,
    pub cache_hit: bool,
}

impl Output {
    /// Cochain on `Q²` from values keyed by relation label. Labels outside
    /// `f²` are an error; omitted generators map to zero.
    pub fn q2_cochain(&self, values: &[(String, FreeElement)]) -> Result<SparseVec> {
        let mut parts = Vec::new();
        for (label, x) in values {
            let j = self
                .f2_names
                .iter()
                .position(|n| n == label)
                .ok_or_else(|| Error::Validation(format!("{label} is not a minimal relation")))?;
            parts.push((j, self.algebra.coords(x)));
        }
        self.complex.hom[2].cochain(&parts)
    }

    pub fn f3_names(&self) -> Vec<String> {
        (1..=self.f3.len()).map(|i| format!("y{i}")).collect()
    }
}

struct Stages {
    gb: GroebnerBasis,
    basis: AlgebraBasis,
    nilpotency: usize,
    f2_idx: Vec<usize>,
    f3: Vec<F3Member>,
}

fn compute_stages(pres: &Presentation, cap: usize, tie: TieBreak) -> Result<(Algebra, Stages)> {
    let gb = GroebnerBasis::from_presentation(pres, cap)?;
    let basis = gb.enumerate_basis(cap)?;
    let alg = Algebra::new(pres.clone(), gb.clone(), basis.clone());
    let nilpotency = alg.radical_nilpotency(cap)?;
    let f2_idx = minimal_generators(&alg, nilpotency);
    let f2: Vec<UniformElement> = f2_idx.iter().map(|&i| pres.relations[i].clone()).collect();
    let gens: Vec<FreeElement> = f2.iter().map(|x| x.element().clone()).collect();
    let tracked = GroebnerBasis::compute(pres.field, &pres.quiver, &gens, cap, true)?;
    let mut f3 = Vec::new();
    for (y, from_kernel) in compute_f3(&alg, &f2)? {
        let right = decompose_right(&pres.quiver, &y, &f2)?;
        if right != from_kernel {
            return Err(Error::Invariant(format!(
                "right coefficients of {} disagree between the kernel and the direct solve",
                y.element().format(&pres.quiver)
            )));
        }
        let two_sided = decompose_two_sided(&pres.quiver, y.element(), &tracked, tie)?;
        f3.push(F3Member { element: y, right, two_sided });
    }
    Ok((alg, Stages { gb, basis, nilpotency, f2_idx, f3 }))
}

fn to_entry(key: &str, s: &Stages) -> CacheEntry {
    CacheEntry {
        schema: SCHEMA_VERSION,
        key: key.to_string(),
        groebner: s.gb.members().map(cache::encode_element).collect(),
        basis: s.basis.paths().iter().map(cache::encode_path).collect(),
        nil_index: s.basis.nil_index(),
        nilpotency: s.nilpotency,
        f2: s.f2_idx.clone(),
        f3: s.f3.iter().map(cache::encode_f3).collect(),
    }
}

fn from_entry(pres: &Presentation, e: &CacheEntry) -> Result<(Algebra, Stages)> {
    let (field, q) = (pres.field, &pres.quiver);
    let members = e.groebner.iter().map(|m| cache::decode_element(field, q, m)).collect::<Result<_>>()?;
    let gb = GroebnerBasis::from_members(field, q, members)?;
    let paths = e.basis.iter().map(|p| cache::decode_path(q, p)).collect::<Result<_>>()?;
    let basis = AlgebraBasis::new(q, paths, e.nil_index);
    if e.f2.iter().any(|&i| i >= pres.relations.len()) {
        return Err(Error::Cache("relation index out of range".into()));
    }
    let f3 = e.f3.iter().map(|y| cache::decode_f3(field, q, y)).collect::<Result<_>>()?;
    let alg = Algebra::new(pres.clone(), gb.clone(), basis.clone());
    Ok((alg, Stages { gb, basis, nilpotency: e.nilpotency, f2_idx: e.f2.clone(), f3 }))
}

/// Runs the full computation. With a cache directory, the Gröbner basis,
/// algebra basis, `f²` and `f³` are read from or written to the cache; all
/// checks run either way.
pub fn compute(pres: &Presentation, opts: &Options) -> Result<Output> {
    let cap = opts.cap.unwrap_or_else(|| default_cap(pres));
    if cap < 2 {
        return Err(Error::Validation(format!("cap {cap} is below 2")));
    }
    let cache = opts.cache_dir.as_ref().map(Cache::new);
    let key = cache::cache_key(pres, cap, opts.tie);
    let cached = cache.as_ref().and_then(|c| c.load(&key)).and_then(|e| from_entry(pres, &e).ok());
    let cache_hit = cached.is_some();
    let (algebra, stages) = match cached {
        Some(x) => x,
        None => {
            let x = compute_stages(pres, cap, opts.tie)?;
            if let Some(c) = &cache {
                c.store(&to_entry(&key, &x.1))?;
            }
            x
        }
    };
    let f2: Vec<UniformElement> = stages.f2_idx.iter().map(|&i| pres.relations[i].clone()).collect();
    let f2_names: Vec<String> = stages.f2_idx.iter().map(|&i| pres.labels[i].clone()).collect();
    let gens: Vec<FreeElement> = f2.iter().map(|x| x.element().clone()).collect();
    for y in &stages.f3 {
        if &expand_right(&gens, &y.right) != y.element.element()
            || &expand_two_sided(&gens, &y.two_sided) != y.element.element()
        {
            return Err(Error::Invariant(format!(
                "decomposition of {} does not reproduce it",
                y.element.element().format(&pres.quiver)
            )));
        }
    }
    let resolution = Resolution::build(&algebra, &f2, &stages.f3);
    resolution.check_complex(&algebra)?;
    resolution.check_exact_at_q0(&algebra)?;
    let complex = CochainComplex::new(&algebra, &resolution.q, &resolution.a1, &resolution.a2, &resolution.a3)?;
    complex.check()?;
    let report = HHReport::new(&algebra, &complex, &f2_names, stages.f3.len());
    Ok(Output {
        algebra,
        cap,
        nilpotency: stages.nilpotency,
        f2,
        f2_names,
        f3: stages.f3,
        resolution,
        complex,
        report,
        cache_hit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_presentation;

    fn run(text: &str) -> Output {
        compute(&parse_presentation(text).unwrap(), &Options::default()).unwrap()
    }

    #[test]
    fn point() {
        let out = run("field Q quiver { vertex v; }");
        assert_eq!((out.report.hh.hh0, out.report.hh.hh1, out.report.hh.hh2), (1, 0, 0));
    }

    #[test]
    fn dual_numbers() {
        let out = run("field Q quiver { vertex v; arrow a: v -> v; } relations { a a; }");
        assert_eq!((out.report.hh.hh0, out.report.hh.hh1, out.report.hh.hh2), (2, 1, 1));
        assert_eq!(out.report.f2_count, 1);
        assert_eq!(out.report.f3_count, 1);
        let out = run("field F2 quiver { vertex v; arrow a: v -> v; } relations { a a; }");
        assert_eq!((out.report.hh.hh0, out.report.hh.hh1, out.report.hh.hh2), (2, 2, 2));
    }

    #[test]
    fn non_admissible_rejected() {
        let p = parse_presentation("field Q quiver { vertex v; arrow x: v -> v; } relations { x x - x x x; }").unwrap();
        assert!(matches!(compute(&p, &Options::default()), Err(Error::Validation(_))));
    }

    #[test]
    fn warm_cache_matches() {
        let dir = tempfile::tempdir().unwrap();
        let p = parse_presentation(
            "field Q quiver { vertex x, y; arrow a: x -> y; arrow b: y -> x; } relations { a b a; b a b; }",
        )
        .unwrap();
        let opts = Options { cache_dir: Some(dir.path().to_path_buf()), ..Options::default() };
        let cold = compute(&p, &opts).unwrap();
        let warm = compute(&p, &opts).unwrap();
        assert!(!cold.cache_hit);
        assert!(warm.cache_hit);
        assert_eq!(serde_json::to_string(&cold.report).unwrap(), serde_json::to_string(&warm.report).unwrap());
    }
}
