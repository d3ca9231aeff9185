use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use qha_core::bar::bar_hh_dims;
use qha_core::dsl::{parse_presentation_over, print_presentation};
use qha_core::families::{dim_report, DimReport, FamilySpec};
use qha_core::groebner::TieBreak;
use qha_core::pipeline::{compute, Options, Output};
use qha_core::{Error, FieldSpec, Presentation, Scalar};

const EXIT_INTERNAL: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_VALIDATION: u8 = 3;
const EXIT_CAP: u8 = 4;
const EXIT_ORACLE_BOUND: u8 = 5;
const EXIT_ORACLE_MISMATCH: u8 = 6;

/// `println!` that exits quietly when stdout is closed, e.g. when piped into `head`.
macro_rules! outln {
    ($($arg:tt)*) => {{
        use std::io::Write;
        if let Err(e) = writeln!(std::io::stdout(), $($arg)*) {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                std::process::exit(0);
            }
        }
    }};
}

#[derive(Parser, Debug)]
#[command(name = "qha", version, about = "Hochschild cohomology HH⁰, HH¹, HH² of quiver algebras KQ/I")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args, Debug)]
struct Global {
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Ground field, `Q` or `F<p>`; overrides the field declared in a file.
    #[arg(long, global = true)]
    field: Option<String>,
    /// Length cap for Gröbner completion and basis enumeration.
    #[arg(long, global = true)]
    cap: Option<usize>,
    /// Cache directory for Gröbner bases and resolution data.
    #[arg(long, global = true, env = "QHA_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Arrow order, as a comma-separated list of arrow names.
    #[arg(long, global = true, value_delimiter = ',')]
    order: Option<Vec<String>>,
    /// Which Hochschild degrees to print.
    #[arg(long, global = true, value_enum, default_value_t = Degree::All)]
    degree: Degree,
    /// Largest algebra dimension the bar-complex oracle accepts.
    #[arg(long, global = true, default_value_t = qha_core::bar::DEFAULT_ORACLE_BOUND)]
    oracle_bound: usize,
    /// Divisor choice when a path has several reducible subwords.
    #[arg(long, global = true, value_enum, default_value_t = Tie::Leftmost)]
    tie: Tie,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Degree {
    #[value(name = "0")]
    Zero,
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    All,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Tie {
    Leftmost,
    Rightmost,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute HH from a presentation file.
    Compute { file: PathBuf },
    /// Build a family member and compute its HH.
    Family {
        #[arg(value_enum)]
        kind: FamilyKind,
        #[command(flatten)]
        params: Params,
        /// Print the canonical presentation instead of computing.
        #[arg(long)]
        emit_dsl: bool,
    },
    /// Compare dimensions of a family member and its deformation.
    Deform {
        #[arg(value_enum)]
        kind: DeformKind,
        #[command(flatten)]
        params: Params,
    },
    /// Compare HH dimensions with the bar-complex oracle.
    Oracle {
        /// A presentation file or a family name.
        input: String,
        #[command(flatten)]
        params: Params,
    },
    /// Per-vertex dimensions dim e_v Λ.
    Dims {
        /// A presentation file or a family name.
        input: String,
        #[command(flatten)]
        params: Params,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyKind {
    Lambda,
    GammaStar,
    LambdaEta,
    GammaEta2,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DeformKind {
    LambdaEta,
    GammaEta2,
}

#[derive(Args, Debug, Default)]
struct Params {
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    s: Option<usize>,
    /// λ, default 1.
    #[arg(long, allow_hyphen_values = true)]
    lam: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    /// Deformation parameter t, default 1.
    #[arg(long, allow_hyphen_values = true)]
    t: Option<String>,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Syntax { .. } | Error::UnknownIdentifier { .. } => EXIT_PARSE,
            Error::Field(_) | Error::NonUniform(_) | Error::RelationTooShort(_) | Error::Validation(_) => EXIT_VALIDATION,
            Error::CapExceeded { .. } => EXIT_CAP,
            Error::OracleTooLarge { .. } => EXIT_ORACLE_BOUND,
            _ => EXIT_INTERNAL,
        };
        Failure { code, message: e.to_string() }
    }
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

type Run<T> = std::result::Result<T, Failure>;

fn field_of(global: &Global) -> Run<Option<FieldSpec>> {
    global.field.as_deref().map(|f| FieldSpec::parse_label(f).map_err(|e| fail(EXIT_VALIDATION, e.to_string()))).transpose()
}

fn scalar(field: FieldSpec, text: Option<&str>, name: &str) -> Run<Scalar> {
    match text {
        None => Ok(field.one()),
        Some(t) => field.parse_literal(t).map_err(|e| fail(EXIT_VALIDATION, format!("--{name}: {e}"))),
    }
}

fn need(x: Option<usize>, name: &str) -> Run<usize> {
    x.ok_or_else(|| fail(EXIT_VALIDATION, format!("--{name} is required")))
}

fn family_spec(kind: FamilyKind, params: &Params, field: FieldSpec) -> Run<FamilySpec> {
    let lambda_params = || -> Run<(usize, usize, usize, usize, Scalar)> {
        Ok((
            need(params.p, "p")?,
            need(params.q, "q")?,
            need(params.k, "k")?,
            need(params.s, "s")?,
            scalar(field, params.lam.as_deref(), "lam")?,
        ))
    };
    Ok(match kind {
        FamilyKind::Lambda => {
            let (p, q, k, s, lambda) = lambda_params()?;
            FamilySpec::Lambda { p, q, k, s, lambda }
        }
        FamilyKind::GammaStar => FamilySpec::GammaStar { n: need(params.n, "n")? },
        FamilyKind::LambdaEta => {
            let (p, q, k, s, lambda) = lambda_params()?;
            FamilySpec::LambdaEta { p, q, k, s, lambda, t: scalar(field, params.t.as_deref(), "t")? }
        }
        FamilyKind::GammaEta2 => {
            FamilySpec::GammaStarEta2 { n: need(params.n, "n")?, t: scalar(field, params.t.as_deref(), "t")? }
        }
    })
}

fn apply_order(pres: Presentation, global: &Global) -> Run<Presentation> {
    match &global.order {
        Some(order) => Ok(pres.with_arrow_order(order)?),
        None => Ok(pres),
    }
}

fn load_file(path: &Path, global: &Global) -> Run<Presentation> {
    let text = fs::read_to_string(path).map_err(|e| fail(EXIT_PARSE, format!("cannot read {}: {e}", path.display())))?;
    apply_order(parse_presentation_over(&text, field_of(global)?)?, global)
}

fn build_family(kind: FamilyKind, params: &Params, global: &Global) -> Run<Presentation> {
    let field = field_of(global)?.unwrap_or(FieldSpec::Rationals);
    apply_order(family_spec(kind, params, field)?.build(field)?, global)
}

/// A file path, or a family name when no such file exists.
fn load_input(input: &str, params: &Params, global: &Global) -> Run<Presentation> {
    let path = Path::new(input);
    if !path.exists() {
        if let Some(kind) = FamilyKind::from_str(input, true).ok() {
            return build_family(kind, params, global);
        }
    }
    load_file(path, global)
}

fn options(global: &Global) -> Options {
    Options {
        cap: global.cap,
        tie: match global.tie {
            Tie::Leftmost => TieBreak::Leftmost,
            Tie::Rightmost => TieBreak::Rightmost,
        },
        cache_dir: global.cache_dir.clone(),
    }
}

fn warn_characteristic(pres: &Presentation) {
    if pres.field.characteristic() == 2 {
        eprintln!("warning: characteristic 2; Hochschild dimensions may differ from characteristic 0");
    }
}

fn json_text(value: &serde_json::Value) -> Run<String> {
    serde_json::to_string_pretty(value).map_err(|e| fail(EXIT_INTERNAL, e.to_string()))
}

fn print_report(out: &Output, global: &Global) -> Run<()> {
    let r = &out.report;
    if global.json {
        let v = serde_json::to_value(r).map_err(|e| fail(EXIT_INTERNAL, e.to_string()))?;
        outln!("{}", json_text(&v)?);
        return Ok(());
    }
    outln!("field {}", r.field);
    outln!("dim Λ = {}", r.dim_algebra);
    outln!("|f2| = {}, |f3| = {}", r.f2_count, r.f3_count);
    outln!(
        "dim Hom(Qn, Λ) = {}, {}, {}, {}",
        r.hom_dims.q0, r.hom_dims.q1, r.hom_dims.q2, r.hom_dims.q3
    );
    outln!("rank d1 = {}, rank d2 = {}, dim ker d3 = {}", r.rank_d1, r.rank_d2, r.dim_ker_d3);
    let show = |d: Degree| global.degree == Degree::All || global.degree == d;
    if show(Degree::Zero) {
        outln!("HH0 = {}", r.hh.hh0);
    }
    if show(Degree::One) {
        outln!("HH1 = {}", r.hh.hh1);
    }
    if show(Degree::Two) {
        outln!("HH2 = {}", r.hh.hh2);
        for (i, rep) in r.hh2_basis.iter().enumerate() {
            let parts: Vec<String> = rep.iter().map(|(k, v)| format!("{k} ↦ {v}")).collect();
            outln!("  [{}] {}", i + 1, parts.join(", "));
        }
    }
    Ok(())
}

fn run_compute(pres: Presentation, global: &Global) -> Run<()> {
    warn_characteristic(&pres);
    let out = compute(&pres, &options(global))?;
    print_report(&out, global)
}

fn dims_json(d: &DimReport) -> serde_json::Value {
    json!({
        "per_vertex": d.per_vertex.iter().map(|(v, n)| json!({"vertex": v, "dim": n})).collect::<Vec<_>>(),
        "total": d.total,
        "admissible": d.admissible,
    })
}

fn print_dims(d: &DimReport) {
    for (v, n) in &d.per_vertex {
        outln!("dim e_{v} Λ = {n}");
    }
    outln!("dim Λ = {}", d.total);
    if !d.admissible {
        outln!("radical not nilpotent; dimensions are of KQ/(I + J^m) for large m");
    }
}

fn run_dims(pres: Presentation, global: &Global) -> Run<()> {
    let d = dim_report(&pres, global.cap)?;
    if global.json {
        outln!("{}", json_text(&dims_json(&d))?);
    } else {
        print_dims(&d);
    }
    Ok(())
}

fn run_deform(kind: DeformKind, params: &Params, global: &Global) -> Run<()> {
    let (base, deformed) = match kind {
        DeformKind::LambdaEta => (FamilyKind::Lambda, FamilyKind::LambdaEta),
        DeformKind::GammaEta2 => (FamilyKind::GammaStar, FamilyKind::GammaEta2),
    };
    let a = dim_report(&build_family(base, params, global)?, global.cap)?;
    let b = dim_report(&build_family(deformed, params, global)?, global.cap)?;
    let equal = a.per_vertex == b.per_vertex;
    if global.json {
        let v = json!({
            "undeformed": dims_json(&a),
            "deformed": dims_json(&b),
            "equal_total": a.total == b.total,
            "equal_per_vertex": equal,
        });
        outln!("{}", json_text(&v)?);
    } else {
        outln!("{:<12} {:>10} {:>10}", "vertex", "undeformed", "deformed");
        for ((v, x), (_, y)) in a.per_vertex.iter().zip(&b.per_vertex) {
            outln!("{v:<12} {x:>10} {y:>10}");
        }
        outln!("{:<12} {:>10} {:>10}", "total", a.total, b.total);
        if !b.admissible {
            outln!("deformed radical not nilpotent; dimensions are of KQ/(I + J^m) for large m");
        }
        outln!("{}", if equal { "dimensions agree" } else { "dimensions differ" });
    }
    Ok(())
}

fn run_oracle(pres: Presentation, global: &Global) -> Run<()> {
    warn_characteristic(&pres);
    let out = compute(&pres, &options(global))?;
    let (o0, o1, o2) = bar_hh_dims(&out.algebra, global.oracle_bound)?;
    let hh = &out.report.hh;
    let matched = (hh.hh0, hh.hh1, hh.hh2) == (o0, o1, o2);
    if global.json {
        let v = json!({
            "field": out.report.field,
            "dim_algebra": out.report.dim_algebra,
            "pipeline": {"hh0": hh.hh0, "hh1": hh.hh1, "hh2": hh.hh2},
            "oracle": {"hh0": o0, "hh1": o1, "hh2": o2},
            "match": matched,
        });
        outln!("{}", json_text(&v)?);
    } else {
        outln!("{:<6} {:>8} {:>8}", "", "pipeline", "bar");
        outln!("{:<6} {:>8} {:>8}", "HH0", hh.hh0, o0);
        outln!("{:<6} {:>8} {:>8}", "HH1", hh.hh1, o1);
        outln!("{:<6} {:>8} {:>8}", "HH2", hh.hh2, o2);
        outln!("{}", if matched { "match" } else { "MISMATCH" });
    }
    if matched {
        Ok(())
    } else {
        Err(fail(EXIT_ORACLE_MISMATCH, "pipeline and bar-complex dimensions differ"))
    }
}

fn run(cli: Cli) -> Run<()> {
    let g = &cli.global;
    if g.cap.is_some_and(|c| c < 2) {
        return Err(fail(EXIT_VALIDATION, "--cap must be at least 2"));
    }
    match &cli.command {
        Command::Compute { file } => run_compute(load_file(file, g)?, g),
        Command::Family { kind, params, emit_dsl } => {
            let pres = build_family(*kind, params, g)?;
            if *emit_dsl {
                print!("{}", print_presentation(&pres));
                Ok(())
            } else {
                run_compute(pres, g)
            }
        }
        Command::Deform { kind, params } => run_deform(*kind, params, g),
        Command::Oracle { input, params } => run_oracle(load_input(input, params, g)?, g),
        Command::Dims { input, params } => run_dims(load_input(input, params, g)?, g),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_code_mapping() {
        let code = |e: Error| Failure::from(e).code;
        assert_eq!(code(Error::Syntax { line: 1, column: 1, message: String::new() }), EXIT_PARSE);
        assert_eq!(code(Error::Validation(String::new())), EXIT_VALIDATION);
        assert_eq!(code(Error::CapExceeded { cap: 1, context: String::new() }), EXIT_CAP);
        assert_eq!(code(Error::OracleTooLarge { dim: 2, bound: 1 }), EXIT_ORACLE_BOUND);
        assert_eq!(code(Error::Invariant(String::new())), EXIT_INTERNAL);
        assert_eq!(fail(EXIT_ORACLE_MISMATCH, "x").code, 6);
    }
}
