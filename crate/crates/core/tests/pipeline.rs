use proptest::prelude::*;

use qha_core::bar::bar_hh_dims;
use qha_core::dsl::{parse_presentation, print_presentation};
use qha_core::families::{build_gamma_star, build_lambda_family, dim_report};
use qha_core::pipeline::{compute, Options};
use qha_core::{FieldSpec, Presentation};

/// Monomial presentation on a random quiver: `arrows` gives endpoints, and
/// every path of length `l` plus the chosen length-2 paths are relations.
fn monomial(nv: usize, arrows: &[(usize, usize)], l: usize, keep: &[bool], field: &str) -> Option<Presentation> {
    let mut paths: Vec<Vec<usize>> = (0..arrows.len()).map(|a| vec![a]).collect();
    let mut rels = Vec::new();
    let mut flags = keep.iter().cycle();
    for len in 2..=l {
        let mut longer = Vec::new();
        for p in &paths {
            let end = arrows[*p.last().unwrap()].1;
            for a in (0..arrows.len()).filter(|&a| arrows[a].0 == end) {
                longer.push([p.clone(), vec![a]].concat());
            }
        }
        paths = longer;
        for p in &paths {
            if len == l || *flags.next().unwrap() {
                rels.push(p.clone());
            }
        }
    }
    if rels.is_empty() {
        return None;
    }
    let vertices: Vec<String> = (0..nv).map(|v| format!("v{v}")).collect();
    let mut text = format!("field {field} quiver {{ vertex {};", vertices.join(", "));
    for (i, (s, t)) in arrows.iter().enumerate() {
        text += &format!(" arrow x{i}: v{s} -> v{t};");
    }
    text += " } relations {";
    for r in &rels {
        let names: Vec<String> = r.iter().map(|a| format!("x{a}")).collect();
        text += &format!(" {};", names.join(" "));
    }
    text += " }";
    Some(parse_presentation(&text).unwrap())
}

fn small_monomial() -> impl Strategy<Value = Option<Presentation>> {
    (1usize..=3)
        .prop_flat_map(|nv| {
            (
                Just(nv),
                prop::collection::vec((0..nv, 0..nv), 1..=3),
                2usize..=3,
                prop::collection::vec(any::<bool>(), 1..8),
                prop::sample::select(vec!["Q", "F2", "F3"]),
            )
        })
        .prop_map(|(nv, arrows, l, keep, field)| monomial(nv, &arrows, l, &keep, field))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pipeline_matches_bar_complex(pres in small_monomial()) {
        let Some(pres) = pres else { return Ok(()) };
        prop_assume!(dim_report(&pres, None).unwrap().total <= 9);
        let out = compute(&pres, &Options::default()).unwrap();
        let hh = &out.report.hh;
        prop_assert_eq!((hh.hh0, hh.hh1, hh.hh2), bar_hh_dims(&out.algebra, 9).unwrap());
    }

    #[test]
    fn reversed_arrow_order(pres in small_monomial()) {
        let Some(pres) = pres else { return Ok(()) };
        let names: Vec<String> = pres.quiver.arrows().iter().rev().map(|a| a.name.clone()).collect();
        let other = pres.with_arrow_order(&names).unwrap();
        let a = compute(&pres, &Options::default()).unwrap().report;
        let b = compute(&other, &Options::default()).unwrap().report;
        prop_assert_eq!((a.dim_algebra, a.f2_count, a.f3_count, a.rank_d2, a.dim_ker_d3), (b.dim_algebra, b.f2_count, b.f3_count, b.rank_d2, b.dim_ker_d3));
        prop_assert_eq!(a.hh, b.hh);
    }

    #[test]
    fn printed_presentation_reparses(pres in small_monomial()) {
        let Some(pres) = pres else { return Ok(()) };
        let again = parse_presentation(&print_presentation(&pres)).unwrap();
        prop_assert_eq!(print_presentation(&again), print_presentation(&pres));
    }
}

#[test]
fn cache_round_trip_on_families() {
    let dir = tempfile::tempdir().unwrap();
    let opts = Options { cache_dir: Some(dir.path().to_path_buf()), ..Options::default() };
    let q = FieldSpec::Rationals;
    for pres in [build_gamma_star(q, 3).unwrap(), build_lambda_family(q, 2, 1, 3, 2, &q.one()).unwrap()] {
        let cold = compute(&pres, &opts).unwrap();
        let warm = compute(&pres, &opts).unwrap();
        assert!(warm.cache_hit);
        assert_eq!(cold.report, warm.report);
        assert_eq!(cold.f3.len(), warm.f3.len());
    }
}

#[test]
fn rightmost_tie_break_agrees() {
    let q = FieldSpec::Rationals;
    let pres = build_gamma_star(q, 3).unwrap();
    let a = compute(&pres, &Options::default()).unwrap();
    let b = compute(&pres, &Options { tie: qha_core::groebner::TieBreak::Rightmost, ..Options::default() }).unwrap();
    assert_eq!(a.report.hh, b.report.hh);
}

#[test]
fn finite_fields_on_lambda() {
    for p in [3u64, 5, 7] {
        let f = FieldSpec::Prime(p);
        let pres = build_lambda_family(f, 1, 1, 4, 1, &f.one()).unwrap();
        let out = compute(&pres, &Options::default()).unwrap();
        assert_eq!(out.report.hh.hh2, 1, "F{p}");
    }
}
