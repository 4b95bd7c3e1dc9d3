//! The `wproj` command-line front end.
//!
//! Every subcommand reads matrices from JSON files, makes one library call
//! and writes a single document with the keys `result`, `residuals`, `dims`
//! and `tolerances`. Exit codes: 0 success, 1 failed check or precondition,
//! 2 input error.

pub mod io;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Error;
use crate::numkernel::{
    block_decompose, fro, rank_factorization, Flag, Matrix, PsdOperator, Subspace, Tolerances, DEFAULT_RANK_REL_TOL,
    DEFAULT_RESIDUAL_TOL,
};
use crate::projections::{
    classify_operator, compatibility_certificate, distinguished_projection, kernel_intersection, projection_family,
    projection_set_membership, weighted_projection_family, weighted_projection_membership, AffineOperatorFamily,
    Membership,
};
use crate::splines::{spline_membership, spline_set, weighted_distance};
use crate::verify::{run_suite, SuiteConfig};
use crate::winverse::{
    a1a2_inverse, a_inverse_family, a_lss_solve, inverse_check, normal_equation_residual, restricted_a_inverse,
    weighted_generalized_inverse, InverseKind, InverseReport,
};
use io::{read_matrix, read_subspace, to_canonical_string, write_output, FamilyFile, MatrixFile};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Precondition(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Precondition(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            CliError::Input(e.to_string())
        } else {
            CliError::Precondition(e.to_string())
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "wproj", version, about = "Projections and generalized inverses under PSD seminorms")]
pub struct Cli {
    /// Residual tolerance.
    #[arg(long, global = true, env = "WPROJ_TOL")]
    pub tol: Option<f64>,
    /// Relative rank cutoff.
    #[arg(long = "rank-tol", global = true, env = "WPROJ_RANK_TOL")]
    pub rank_tol: Option<f64>,
    /// Root seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output file (default: stdout).
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct WeightSubspace {
    #[arg(long = "A")]
    pub a: PathBuf,
    #[arg(long = "S")]
    pub s: PathBuf,
}

#[derive(Debug, Args)]
pub struct WeightOperator {
    #[arg(long = "A")]
    pub a: PathBuf,
    #[arg(long = "B")]
    pub b: PathBuf,
}

#[derive(Debug, Args)]
pub struct TwoWeights {
    #[arg(long = "A1")]
    pub a1: PathBuf,
    #[arg(long = "A2")]
    pub a2: PathBuf,
    #[arg(long = "B")]
    pub b: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Block decomposition of A with respect to S ⊕ S⊥.
    Decompose(WeightSubspace),
    /// Moore-Penrose pseudoinverse of B.
    Pinv {
        #[arg(long = "B")]
        b: PathBuf,
    },
    /// The distinguished A-selfadjoint projection onto S.
    Project(WeightSubspace),
    /// A-selfadjoint projections onto S, as an affine family.
    Pfamily(WeightSubspace),
    /// A-projections into S, as an affine family.
    Pifamily(WeightSubspace),
    /// Classify T with respect to the A-seminorm.
    Classify {
        #[arg(long = "A")]
        a: PathBuf,
        #[arg(long = "T")]
        t: PathBuf,
        #[arg(long = "S")]
        s: Option<PathBuf>,
    },
    /// Spline set of (C, S, x) and the weighted distance from x to S.
    Spline {
        #[arg(long = "C")]
        c: PathBuf,
        #[arg(long = "S")]
        s: PathBuf,
        #[arg(long = "x")]
        x: PathBuf,
    },
    /// A-least-squares solution of Bx = y.
    Alss {
        #[command(flatten)]
        inputs: WeightOperator,
        #[arg(long = "y")]
        y: PathBuf,
    },
    /// A-inverses of B, as an affine family.
    Ainv(WeightOperator),
    /// A-inverse of B restricted to the column span of M.
    Rainv {
        #[command(flatten)]
        inputs: WeightOperator,
        #[arg(long = "M")]
        m: PathBuf,
    },
    /// A1A2-inverse of B.
    A12inv(TwoWeights),
    /// Weighted generalized inverse of B.
    Wgi(TwoWeights),
    /// Check a candidate against a defining set of equations.
    Check(CheckArgs),
    /// Rewrite a matrix file in canonical form.
    Format {
        #[arg(long = "A")]
        a: PathBuf,
    },
    /// Run the randomized invariant suite.
    Verify {
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    AProjection,
    PiMember,
    PMember,
    Inverse(InverseKind),
}

impl std::str::FromStr for CheckKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "a-projection" => Ok(CheckKind::AProjection),
            "pi-member" => Ok(CheckKind::PiMember),
            "p-member" => Ok(CheckKind::PMember),
            _ => s.parse().map(CheckKind::Inverse),
        }
    }
}

impl std::fmt::Display for CheckKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CheckKind::AProjection => f.write_str("a-projection"),
            CheckKind::PiMember => f.write_str("pi-member"),
            CheckKind::PMember => f.write_str("p-member"),
            CheckKind::Inverse(k) => k.fmt(f),
        }
    }
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// a-projection | pi-member | p-member | a-inverse | restricted | a1a2 |
    /// weak-a1a2 | wgi | weak-wgi-system
    #[arg(long)]
    pub kind: CheckKind,
    /// Weight (alias of --A1 for inverse kinds).
    #[arg(long = "A")]
    pub a: Option<PathBuf>,
    #[arg(long = "A1")]
    pub a1: Option<PathBuf>,
    #[arg(long = "A2")]
    pub a2: Option<PathBuf>,
    #[arg(long = "S")]
    pub s: Option<PathBuf>,
    #[arg(long = "T")]
    pub t: Option<PathBuf>,
    #[arg(long = "B")]
    pub b: Option<PathBuf>,
    #[arg(long = "G")]
    pub g: Option<PathBuf>,
    #[arg(long = "M")]
    pub m: Option<PathBuf>,
}

/// The document written by every subcommand.
#[derive(Debug, Serialize)]
pub struct Document {
    pub result: Value,
    pub residuals: BTreeMap<String, Flag>,
    pub dims: BTreeMap<&'static str, usize>,
    pub tolerances: Tolerances,
}

/// A finished command: its document and whether every check passed.
pub struct Outcome {
    pub document: Document,
    pub passed: bool,
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let finished = execute(&cli).and_then(|outcome| match outcome {
        Some(outcome) => {
            write_output(cli.output.as_deref(), &to_canonical_string(&outcome.document))?;
            Ok(outcome.passed)
        }
        None => Ok(true),
    });
    match finished {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("wproj: {e}");
            e.exit_code()
        }
    }
}

pub fn tolerances(cli: &Cli) -> Result<Tolerances, CliError> {
    Ok(Tolerances::new(
        cli.rank_tol.unwrap_or(DEFAULT_RANK_REL_TOL),
        cli.tol.unwrap_or(DEFAULT_RESIDUAL_TOL),
    )?)
}

fn weight(path: &Path, tol: &Tolerances) -> Result<PsdOperator, CliError> {
    Ok(PsdOperator::new(read_matrix(path)?, tol)?)
}

fn value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("result types serialize to JSON")
}

fn matrix(m: &Matrix) -> Value {
    value(&MatrixFile::from(m))
}

fn family(f: &AffineOperatorFamily) -> Value {
    value(&FamilyFile::from(f))
}

fn conditions(m: &Membership) -> BTreeMap<String, Flag> {
    m.conditions.iter().map(|(k, f)| (k.to_string(), *f)).collect()
}

fn equations(r: &InverseReport) -> BTreeMap<String, Flag> {
    r.equations.iter().map(|(k, f)| (k.to_string(), *f)).collect()
}

struct Builder {
    tol: Tolerances,
    residuals: BTreeMap<String, Flag>,
    dims: BTreeMap<&'static str, usize>,
}

impl Builder {
    fn new(tol: Tolerances) -> Self {
        Builder {
            tol,
            residuals: BTreeMap::new(),
            dims: BTreeMap::new(),
        }
    }

    fn dim(mut self, key: &'static str, v: usize) -> Self {
        self.dims.insert(key, v);
        self
    }

    fn flag(mut self, key: &str, f: Flag) -> Self {
        self.residuals.insert(key.to_string(), f);
        self
    }

    fn flags(mut self, m: BTreeMap<String, Flag>) -> Self {
        self.residuals.extend(m);
        self
    }

    fn finish(self, result: Value, passed: bool) -> Outcome {
        Outcome {
            document: Document {
                result,
                residuals: self.residuals,
                dims: self.dims,
                tolerances: self.tol,
            },
            passed,
        }
    }

    fn done(self, result: Value) -> Outcome {
        self.finish(result, true)
    }
}

fn need<'a>(p: &'a Option<PathBuf>, what: &'static str) -> Result<&'a Path, CliError> {
    p.as_deref().ok_or(CliError::Input(format!("missing input: {what}")))
}

/// Runs the command. `Ok(None)` means the command wrote its own output.
pub fn execute(cli: &Cli) -> Result<Option<Outcome>, CliError> {
    let tol = tolerances(cli)?;
    let out = Builder::new(tol);
    let outcome = match &cli.command {
        Command::Decompose(w) => {
            let a = weight(&w.a, &tol)?;
            let s = read_subspace(&w.s, &tol)?;
            let dec = block_decompose(&a, &s)?;
            let cert = compatibility_certificate(&a, &s, &tol)?;
            let reassembly = fro(&(dec.assemble() - a.matrix()));
            Ok(out
                .dim("n", a.dim())
                .dim("dim_s", s.dim())
                .dim("dim_n", cert.degenerate.dim())
                .flag("reassembly", Flag::new(reassembly, tol.threshold(&[a.fro_norm()])))
                .flag("range_condition", Flag::new(cert.residual, cert.threshold))
                .done(json!({
                    "a": matrix(&dec.a),
                    "b": matrix(&dec.b),
                    "c": matrix(&dec.c),
                    "subspace_basis": matrix(dec.subspace.basis()),
                    "complement_basis": matrix(dec.complement.basis()),
                    "degenerate_basis": matrix(cert.degenerate.basis()),
                    "compatible": cert.compatible,
                })))
        }
        Command::Pinv { b } => {
            let b = read_matrix(b)?;
            let f = rank_factorization(&b, &tol)?;
            let x = f.pseudo_inverse();
            let thr = tol.threshold(&[fro(&b), fro(&x)]);
            let bx = &b * &x;
            let xb = &x * &b;
            Ok(out
                .dim("rows", b.nrows())
                .dim("cols", b.ncols())
                .dim("rank", f.rank)
                .flag("bxb_eq_b", Flag::new(fro(&(&bx * &b - &b)), thr))
                .flag("xbx_eq_x", Flag::new(fro(&(&xb * &x - &x)), thr))
                .flag("bx_hermitian", Flag::new(fro(&(&bx - bx.adjoint())), thr))
                .flag("xb_hermitian", Flag::new(fro(&(&xb - xb.adjoint())), thr))
                .done(json!({ "pinv": matrix(&x), "singular_values": f.singular_values })))
        }
        Command::Project(w) => {
            let a = weight(&w.a, &tol)?;
            let s = read_subspace(&w.s, &tol)?;
            let p = distinguished_projection(&a, &s, &tol)?;
            let n = kernel_intersection(&a, &s, &tol)?;
            let m = projection_set_membership(&a, &s, &p, &tol)?;
            Ok(out
                .dim("n", a.dim())
                .dim("dim_s", s.dim())
                .dim("dim_n", n.dim())
                .flags(conditions(&m))
                .done(json!({ "projection": matrix(&p) })))
        }
        Command::Pfamily(w) | Command::Pifamily(w) => {
            let a = weight(&w.a, &tol)?;
            let s = read_subspace(&w.s, &tol)?;
            let (fam, m) = if matches!(cli.command, Command::Pfamily(_)) {
                let fam = projection_family(&a, &s, &tol)?;
                let m = projection_set_membership(&a, &s, &fam.base, &tol)?;
                (fam, m)
            } else {
                let fam = weighted_projection_family(&a, &s, &tol)?;
                let m = weighted_projection_membership(&a, &s, &fam.base, &tol)?;
                (fam, m)
            };
            Ok(out
                .dim("n", a.dim())
                .dim("dim_s", s.dim())
                .dim("dim_n", fam.range_space.dim())
                .dim("dim_domain", fam.domain_space.dim())
                .flags(conditions(&m))
                .done(family(&fam)))
        }
        Command::Classify { a, t, s } => {
            let a = weight(a, &tol)?;
            let t = read_matrix(t)?;
            let s = s.as_deref().map(|p| read_subspace(p, &tol)).transpose()?;
            let rep = classify_operator(&a, &t, s.as_ref(), &tol)?;
            let mut out = out
                .dim("n", a.dim())
                .flag("a_selfadjoint", rep.a_selfadjoint)
                .flag("a_idempotent", rep.a_idempotent)
                .flag("a_projection", rep.a_projection);
            if let Some(s) = &s {
                out = out.dim("dim_s", s.dim());
            }
            Ok(out.done(value(&rep)))
        }
        Command::Spline { c, s, x } => {
            let c = read_matrix(c)?;
            let s = read_subspace(s, &tol)?;
            let x = read_matrix(x)?;
            let sp = spline_set(&c, &s, &x, &tol)?;
            let distance = weighted_distance(&c, &s, &x, &tol)?;
            let member = spline_membership(&c, &s, &x, &sp.representative, &tol)?;
            Ok(out
                .dim("n", s.ambient_dim())
                .dim("dim_s", s.dim())
                .dim("dim_n", sp.direction_space.dim())
                .flag("representative_is_spline", member)
                .done(json!({
                    "representative": matrix(&sp.representative),
                    "direction_basis": matrix(sp.direction_space.basis()),
                    "distance": distance,
                })))
        }
        Command::Alss { inputs, y } => {
            let a = weight(&inputs.a, &tol)?;
            let b = read_matrix(&inputs.b)?;
            let y = read_matrix(y)?;
            let x = a_lss_solve(&a, &b, &y, &tol)?;
            let residual = normal_equation_residual(&a, &b, &y, &x);
            let objective = fro(&(a.sqrt() * (&y - &b * &x)));
            let thr = tol.threshold(&[a.fro_norm(), fro(&b), fro(&y)]) * (1.0 + fro(&b)).powi(2);
            Ok(out
                .dim("rows", b.nrows())
                .dim("cols", b.ncols())
                .flag("normal_equation", Flag::new(residual, thr))
                .done(json!({ "x": matrix(&x), "objective": objective })))
        }
        Command::Ainv(inputs) => {
            let a = weight(&inputs.a, &tol)?;
            let b = read_matrix(&inputs.b)?;
            let fam = a_inverse_family(&a, &b, &tol)?;
            let rep = inverse_check(&a, None, &b, &fam.base, InverseKind::AInverse, None, &tol)?;
            Ok(out
                .dim("rows", b.nrows())
                .dim("cols", b.ncols())
                .dim("dim_ambiguity", fam.range_space.dim())
                .flags(equations(&rep))
                .done(family(&fam)))
        }
        Command::Rainv { inputs, m } => {
            let a = weight(&inputs.a, &tol)?;
            let b = read_matrix(&inputs.b)?;
            let m = read_subspace(m, &tol)?;
            let g = restricted_a_inverse(&a, &b, &m, &tol)?;
            let rep = inverse_check(&a, None, &b, &g, InverseKind::Restricted, Some(&m), &tol)?;
            Ok(out
                .dim("rows", b.nrows())
                .dim("cols", b.ncols())
                .dim("dim_m", m.dim())
                .flags(equations(&rep))
                .done(json!({ "inverse": matrix(&g) })))
        }
        Command::A12inv(w) | Command::Wgi(w) => {
            let a1 = weight(&w.a1, &tol)?;
            let a2 = weight(&w.a2, &tol)?;
            let b = read_matrix(&w.b)?;
            let (g, kind) = if matches!(cli.command, Command::Wgi(_)) {
                (weighted_generalized_inverse(&a1, &a2, &b, &tol)?, InverseKind::Wgi)
            } else {
                (a1a2_inverse(&a1, &a2, &b, &tol)?, InverseKind::A1A2)
            };
            let rep = inverse_check(&a1, Some(&a2), &b, &g, kind, None, &tol)?;
            Ok(out
                .dim("rows", b.nrows())
                .dim("cols", b.ncols())
                .flags(equations(&rep))
                .done(json!({ "inverse": matrix(&g) })))
        }
        Command::Check(args) => check(args, &tol, out),
        Command::Format { a } => {
            let m = read_matrix(a)?;
            let text = to_canonical_string(&MatrixFile::from(&m));
            write_output(cli.output.as_deref(), &text)?;
            return Ok(None);
        }
        Command::Verify { n, trials } => {
            let report = run_suite(
                SuiteConfig {
                    n: *n,
                    trials: *trials,
                    seed: cli.seed,
                },
                &tol,
            )?;
            Ok(out
                .dim("n", *n)
                .dim("trials", *trials)
                .finish(value(&report), report.passed))
        }
    };
    outcome.map(Some)
}

fn check(args: &CheckArgs, tol: &Tolerances, out: Builder) -> Result<Outcome, CliError> {
    let kind = args.kind;
    match kind {
        CheckKind::AProjection | CheckKind::PiMember | CheckKind::PMember => {
            let a = weight(need(&args.a, "weight A")?, tol)?;
            let s: Subspace = read_subspace(need(&args.s, "subspace S")?, tol)?;
            let t = read_matrix(need(&args.t, "operator T")?)?;
            let out = out.dim("n", a.dim()).dim("dim_s", s.dim());
            let (flags, passed) = match kind {
                CheckKind::AProjection => {
                    let rep = classify_operator(&a, &t, Some(&s), tol)?;
                    let into = rep.a_projection_into_s.expect("subspace supplied");
                    let flags = BTreeMap::from([
                        ("a_projection".to_string(), rep.a_projection),
                        ("a_projection_into_s".to_string(), into),
                    ]);
                    (flags, into.passed)
                }
                CheckKind::PiMember => {
                    let m = weighted_projection_membership(&a, &s, &t, tol)?;
                    (conditions(&m), m.member)
                }
                _ => {
                    let m = projection_set_membership(&a, &s, &t, tol)?;
                    (conditions(&m), m.member)
                }
            };
            Ok(out
                .flags(flags)
                .finish(json!({ "kind": kind.to_string(), "passed": passed }), passed))
        }
        CheckKind::Inverse(k) => {
            let a1_path = args.a1.as_ref().or(args.a.as_ref());
            let a1 = weight(need(&a1_path.cloned(), "weight A1 (or A)")?, tol)?;
            let a2 = args.a2.as_deref().map(|p| weight(p, tol)).transpose()?;
            let b = read_matrix(need(&args.b, "operator B")?)?;
            let g = read_matrix(need(&args.g, "candidate G")?)?;
            let m = args.m.as_deref().map(|p| read_subspace(p, tol)).transpose()?;
            let rep = inverse_check(&a1, a2.as_ref(), &b, &g, k, m.as_ref(), tol)?;
            let mut result = json!({ "kind": kind.to_string(), "passed": rep.passed });
            if let Some(eq) = rep.equivalence {
                result["equivalence"] = value(&eq);
            }
            Ok(out
                .dim("rows", b.nrows())
                .dim("cols", b.ncols())
                .flags(equations(&rep))
                .finish(result, rep.passed))
        }
    }
}
