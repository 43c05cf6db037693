//! Command-line front end.
//!
//! Exit codes: 0 when every check passes, 1 when a mathematical check fails
//! (the report lists which under `failed_checks`), 2 for usage and parse
//! errors.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::algebra::{Arity, Element, StructureAlgebra};
use crate::catalog;
use crate::claims::{self, ClaimResult};
use crate::file;
use crate::peirce::{check_faithfulness, check_peirce_relations, validate_symmetric_idempotent};
use crate::rational::Rational;
use crate::report::{self, Report};
use crate::solver::{self, defining_law, solve_space, SpaceKind};

const LINEARITY_NOTE: &str = "maps are modelled as Q-linear; an additive map between Q-vector spaces is Q-linear, \
so this covers every additive map, which is the class the conclusion is about";
const ADDITIVITY_NOTE: &str = "C2-C8 establish additivity and carry no content for a linear map; \
only their map-free identities are checked, by the claims command";

#[derive(Debug, Parser)]
#[command(name = "altstar", version, about = "Exact checks for derivations on alternative *-algebras")]
pub struct Cli {
    /// Add wall-clock runtime to the report (makes output run-dependent).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SpaceArg {
    Der,
    StarDer,
    Jordan,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check alternativity, unit and involution axioms.
    Validate { file: PathBuf },
    /// Peirce decomposition and faithfulness for an idempotent.
    Peirce {
        file: PathBuf,
        /// A name from the file's idempotents, or comma-separated coordinates.
        #[arg(long)]
        idempotent: String,
    },
    /// Solve for a space of derivation-type maps.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum)]
        space: SpaceArg,
        #[arg(long)]
        n: Option<usize>,
        /// Use the unrestricted n-ary identity (jordan only).
        #[arg(long)]
        full: bool,
    },
    /// Compare *-derivations with restricted *-Jordan n-derivations.
    VerifyTheorem {
        file: PathBuf,
        #[arg(long)]
        idempotent: String,
        #[arg(long)]
        n: usize,
    },
    /// Run the identity bank and the per-map claim pipeline.
    Claims {
        file: PathBuf,
        #[arg(long)]
        idempotent: String,
        #[arg(long)]
        n: usize,
    },
    /// Write a catalog algebra to an algebra file.
    Catalog {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(catalog::CATALOG_NAMES))]
        name: String,
        #[arg(short, long)]
        output: PathBuf,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(message: impl Into<String>) -> Self {
        let mut stderr = message.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Outcome { code: 2, stdout: String::new(), stderr }
    }
}

#[derive(Debug)]
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

/// Parses `argv` (program name first) and runs the command.
pub fn dispatch<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome::usage(text)
            };
        }
    };
    let start = Instant::now();
    let result = match &cli.command {
        Command::Validate { file } => validate(file),
        Command::Peirce { file, idempotent } => peirce(file, idempotent),
        Command::Solve { file, space, n, full } => solve(file, *space, *n, *full),
        Command::VerifyTheorem { file, idempotent, n } => verify_theorem(file, idempotent, *n),
        Command::Claims { file, idempotent, n } => claims_command(file, idempotent, *n),
        Command::Catalog { name, output } => catalog_command(name, output),
    };
    match result {
        Ok(report) => {
            let code = if report.passed() { 0 } else { 1 };
            let ms = cli.timing.then(|| start.elapsed().as_millis());
            Outcome { code, stdout: report.render(ms), stderr: String::new() }
        }
        Err(UsageError(message)) => Outcome::usage(format!("error: {message}")),
    }
}

fn load(path: &Path) -> Result<StructureAlgebra, UsageError> {
    Ok(file::load_algebra_file(path)?)
}

fn arity(n: usize) -> Result<Arity, UsageError> {
    Arity::new(n).map_err(|_| UsageError(format!("--n must be at least 2, got {n}")))
}

/// Looks `spec` up among the named idempotents, otherwise reads it as
/// comma-separated rational coordinates.
fn resolve_idempotent(alg: &StructureAlgebra, spec: &str) -> Result<(String, Element), UsageError> {
    if let Some(e) = alg.idempotent(spec) {
        return Ok((spec.to_string(), e.clone()));
    }
    if !spec.contains(',') && alg.dim() > 1 {
        let known: Vec<&str> = alg.idempotents().keys().map(String::as_str).collect();
        return Err(UsageError(format!("unknown idempotent {spec:?}; named idempotents: [{}]", known.join(", "))));
    }
    let coords = spec
        .split(',')
        .map(|s| s.trim().parse::<Rational>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| UsageError(format!("idempotent coordinates: {e}")))?;
    let e = alg.element(coords)?;
    Ok((alg.format(&e), e))
}

fn inputs(path: &Path, alg: &StructureAlgebra) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("file".into(), json!(path.display().to_string()));
    m.insert("algebra".into(), json!(alg.name()));
    m.insert("dim".into(), json!(alg.dim()));
    m
}

fn validation_section(report: &mut Report, alg: &StructureAlgebra) {
    let v = alg.validate();
    if !v.is_valid() {
        report.fail("validation");
    }
    report.set("validation", report::validation(alg, &v));
}

fn validate(path: &Path) -> Result<Report, UsageError> {
    let alg = load(path)?;
    let mut r = Report::new("validate");
    r.set("inputs", Value::Object(inputs(path, &alg)));
    validation_section(&mut r, &alg);
    Ok(r)
}

fn peirce(path: &Path, spec: &str) -> Result<Report, UsageError> {
    let alg = load(path)?;
    let (label, e) = resolve_idempotent(&alg, spec)?;
    let mut r = Report::new("peirce");
    let mut inp = inputs(path, &alg);
    inp.insert("idempotent".into(), json!(label));
    r.set("inputs", Value::Object(inp));
    validation_section(&mut r, &alg);
    match validate_symmetric_idempotent(&alg, &e) {
        Ok(ctx) => {
            let faith = check_faithfulness(&ctx);
            r.set("hypotheses", report::hypotheses(true, Some(&faith)));
            if !faith.spade {
                r.fail("spade");
            }
            if !faith.club {
                r.fail("club");
            }
            if let Some(w) = report::faithfulness_witnesses(&faith) {
                r.set("faithfulness_witnesses", w);
            }
            let rules = check_peirce_relations(&ctx);
            if !rules.holds() {
                r.fail("peirce_rules");
            }
            r.set("peirce", report::peirce(&ctx, &rules));
        }
        Err(err) => {
            r.set("hypotheses", report::hypotheses(false, None));
            r.set("idempotent_error", json!(err.to_string()));
            r.fail("idempotent");
        }
    }
    Ok(r)
}

fn solve(path: &Path, space: SpaceArg, n: Option<usize>, full: bool) -> Result<Report, UsageError> {
    let kind = match (space, full) {
        (SpaceArg::Der, false) => SpaceKind::Derivation,
        (SpaceArg::StarDer, false) => SpaceKind::StarDerivation,
        (SpaceArg::Jordan, false) => SpaceKind::JordanRestricted,
        (SpaceArg::Jordan, true) => SpaceKind::JordanFull,
        (_, true) => return Err(UsageError("--full applies to --space jordan only".into())),
    };
    let n = match (kind.needs_arity(), n) {
        (true, None) => return Err(UsageError("--space jordan needs --n".into())),
        (true, Some(n)) => Some(arity(n)?),
        (false, Some(_)) => return Err(UsageError("--n applies to --space jordan only".into())),
        (false, None) => None,
    };
    let alg = load(path)?;
    let mut r = Report::new("solve");
    let mut inp = inputs(path, &alg);
    inp.insert("space".into(), json!(kind.label()));
    if let Some(n) = n {
        inp.insert("n".into(), json!(n.get()));
    }
    r.set("inputs", Value::Object(inp));
    validation_section(&mut r, &alg);
    let solved = solve_space(&alg, kind, n)?;
    r.set("spaces", json!({ kind.label(): solved.dim() }));
    let ops: Vec<Value> = solved.operators().iter().map(report::operator).collect();
    r.set("basis_operators", json!({ kind.label(): ops }));
    r.set("notes", json!([LINEARITY_NOTE]));
    Ok(r)
}

fn verify_theorem(path: &Path, spec: &str, n: usize) -> Result<Report, UsageError> {
    let n = arity(n)?;
    let alg = load(path)?;
    let (label, e) = resolve_idempotent(&alg, spec)?;
    let mut r = Report::new("verify-theorem");
    let mut inp = inputs(path, &alg);
    inp.insert("idempotent".into(), json!(label));
    inp.insert("n".into(), json!(n.get()));
    r.set("inputs", Value::Object(inp));

    let t = solver::verify_theorem(&alg, &e, n)?;
    if !t.validation.is_valid() {
        r.fail("validation");
    }
    r.set("validation", report::validation(&alg, &t.validation));
    r.set("hypotheses", report::hypotheses(t.idempotent.is_ok(), t.faithfulness.as_ref()));
    if let Err(msg) = &t.idempotent {
        r.set("idempotent_error", json!(msg));
        r.fail("idempotent");
    }
    if let Some(f) = &t.faithfulness {
        if !f.spade {
            r.fail("spade");
        }
        if !f.club {
            r.fail("club");
        }
        if let Some(w) = report::faithfulness_witnesses(f) {
            r.set("faithfulness_witnesses", w);
        }
    }
    r.set(
        "spaces",
        json!({
            SpaceKind::StarDerivation.label(): t.star_derivation_dim,
            SpaceKind::JordanRestricted.label(): t.jordan_restricted_dim,
        }),
    );
    r.set("theorem_equal", json!(t.equal));
    r.set("star_in_jordan", json!(t.star_in_jordan));
    if !t.equal {
        r.fail("theorem_equal");
        let separating = t.jordan_space.operators().into_iter().find(|d| !t.star_space.contains(d));
        if let Some(d) = separating {
            let mut m = serde_json::Map::new();
            m.insert("operator".into(), report::operator(&d));
            if let Some(w) = defining_law(&alg, &d, SpaceKind::StarDerivation, None) {
                m.insert("star_derivation_witness".into(), report::op_witness(&alg, &w));
            }
            r.set("separating_operator", Value::Object(m));
        }
    }
    if !t.claims.is_empty() {
        if !t.claims_pass() {
            r.fail("claims");
        }
        r.set("claims", report::claims(&t.claims));
    }
    r.set("notes", json!([LINEARITY_NOTE, ADDITIVITY_NOTE]));
    Ok(r)
}

fn claims_command(path: &Path, spec: &str, n: usize) -> Result<Report, UsageError> {
    let n = arity(n)?;
    let alg = load(path)?;
    let (label, e) = resolve_idempotent(&alg, spec)?;
    let mut r = Report::new("claims");
    let mut inp = inputs(path, &alg);
    inp.insert("idempotent".into(), json!(label));
    inp.insert("n".into(), json!(n.get()));
    r.set("inputs", Value::Object(inp));
    validation_section(&mut r, &alg);
    let ctx = match validate_symmetric_idempotent(&alg, &e) {
        Ok(ctx) => ctx,
        Err(err) => {
            r.set("hypotheses", report::hypotheses(false, None));
            r.set("idempotent_error", json!(err.to_string()));
            r.fail("idempotent");
            return Ok(r);
        }
    };
    let faith = check_faithfulness(&ctx);
    r.set("hypotheses", report::hypotheses(true, Some(&faith)));
    let bank = claims::check_identity_bank(&ctx, n);
    if bank.iter().any(ClaimResult::is_failure) {
        r.fail("claims");
    }
    r.set("claims", report::claims(&bank));

    let jordan = solve_space(&alg, SpaceKind::JordanRestricted, Some(n))?;
    r.set("spaces", json!({ SpaceKind::JordanRestricted.label(): jordan.dim() }));
    let runs: Vec<Vec<ClaimResult>> = jordan
        .operators()
        .iter()
        .map(|d| claims::run_claim_pipeline(&ctx, d, n).unwrap_or_else(|err| vec![err.into_result()]))
        .collect();
    let pipeline = claims::aggregate(&runs);
    if pipeline.iter().any(ClaimResult::is_failure) {
        r.fail("pipeline");
    }
    if !pipeline.is_empty() {
        r.set("pipeline", report::claims(&pipeline));
    }
    r.set("notes", json!([ADDITIVITY_NOTE, LINEARITY_NOTE]));
    Ok(r)
}

fn catalog_command(name: &str, output: &Path) -> Result<Report, UsageError> {
    let alg = catalog::by_name(name).ok_or_else(|| UsageError(format!("unknown catalog algebra {name:?}")))?;
    fs::write(output, file::export_algebra(&alg))
        .map_err(|e| UsageError(format!("cannot write {}: {e}", output.display())))?;
    let mut r = Report::new("catalog");
    r.set("inputs", json!({ "name": name, "output": output.display().to_string() }));
    r.set(
        "algebra",
        json!({
            "name": alg.name(),
            "dim": alg.dim(),
            "idempotents": alg.idempotents().keys().collect::<Vec<_>>(),
        }),
    );
    Ok(r)
}
