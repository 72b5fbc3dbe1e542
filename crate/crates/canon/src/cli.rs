//! Command-line front end.
//!
//! Four commands, one contract: every run writes (or prints) a
//! [`RunReport`] whose residuals are recomputable from the inputs alone.
//!
//! * `canon gen (spd|vectors) --n N [--cond C] --seed S -o FILE` — seeded
//!   random test instances; identical parameters give byte-identical files.
//! * `canon decompose (orthogonal|pseudo M N|williamson) -i FILE -o FILE` —
//!   congruence diagonalization of an SPD matrix.
//! * `canon basis (gs|sw|lorentz M N|symplectic) -i FILE -o FILE
//!   [--audit TRIALS --seed S]` — canonical basis from a vector set.
//! * `canon verify -r RESULT -i ORIGINAL` — recompute every residual of a
//!   previous run from scratch and re-judge it.
//!
//! Exit codes: `0` pass, `1` residual failure, `2` parse/validation error.
//! The residual tolerance defaults to `10⁻⁸`, can be set process-wide via
//! the `CANON_TOL` environment variable, and per-run via `--tol` (which
//! wins).

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bases::{
    extremum_audit, gram_schmidt, lorentz_basis, random_vector_set, schweinler_wigner,
    symplectic_basis, BasesError, BasisKind, BasisResult, VectorSet,
};
use crate::congruence::{pseudo_congruence, random_spd, williamson, CongruenceError};
use crate::forms::{Form, FormsError};
use crate::io::{
    parse_matrix_file, report_residuals, sha256_hex, write_json, AnyMatrix, AuditJson,
    DiagnosticsJson, InputDigest, IoError, MatrixFile, ReportKind, ReportOutputs,
    ReportTolerances, RunReport,
};
use crate::linalg::LinalgError;
use crate::scalar::Scalar;
use crate::tol;

/// Canonical congruence forms, extremal bases, and verification reports.
#[derive(Debug, Parser)]
#[command(name = "canon", version, about)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a seeded random test instance.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Congruence-diagonalize a positive definite matrix.
    Decompose {
        #[command(subcommand)]
        method: DecomposeMethod,
    },
    /// Build a canonical basis from a set of independent vectors.
    Basis {
        #[command(subcommand)]
        method: BasisMethod,
    },
    /// Recompute a run's residuals from scratch and re-judge it.
    Verify {
        /// Run report written by `decompose` or `basis`.
        #[arg(short = 'r', long)]
        result: PathBuf,
        /// The original input file that run consumed.
        #[arg(short = 'i', long)]
        input: PathBuf,
        /// Residual tolerance (overrides CANON_TOL and the default).
        #[arg(long)]
        tol: Option<f64>,
    },
}

#[derive(Debug, Subcommand)]
enum GenKind {
    /// Random SPD matrix with prescribed condition number.
    Spd {
        /// Dimension (≥ 1).
        #[arg(long)]
        n: usize,
        /// Condition number (≥ 1) of the generated matrix.
        #[arg(long, default_value_t = 10.0)]
        cond: f64,
        /// RNG seed; same (kind, n, cond, seed) → byte-identical file.
        #[arg(long)]
        seed: u64,
        /// Output path for the matrix file.
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Random independent vector set (square Gaussian matrix).
    Vectors {
        /// Dimension and vector count (≥ 1).
        #[arg(long)]
        n: usize,
        /// RNG seed; same (kind, n, seed) → byte-identical file.
        #[arg(long)]
        seed: u64,
        /// Output path for the vectors file.
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Input matrix (or vectors) file.
    #[arg(short, long)]
    input: PathBuf,
    /// Residual tolerance (overrides CANON_TOL and the default).
    #[arg(long)]
    tol: Option<f64>,
    /// Output path for the run report.
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Debug, Subcommand)]
enum DecomposeMethod {
    /// Plain orthogonal/unitary diagonalization (definite metric).
    Orthogonal {
        #[command(flatten)]
        args: RunArgs,
    },
    /// Signature-(M, N) pseudo-orthogonal/pseudo-unitary diagonalization.
    Pseudo {
        /// Number of positive metric directions.
        m: usize,
        /// Number of negative metric directions.
        n: usize,
        #[command(flatten)]
        args: RunArgs,
    },
    /// Symplectic (Williamson) diagonalization.
    Williamson {
        #[command(flatten)]
        args: RunArgs,
    },
}

#[derive(Debug, Subcommand)]
enum BasisMethod {
    /// Sequential Gram–Schmidt orthonormalization.
    Gs {
        #[command(flatten)]
        args: BasisArgs,
    },
    /// Schweinler–Wigner (quartic-maximizing) orthonormal basis.
    Sw {
        #[command(flatten)]
        args: BasisArgs,
    },
    /// Pseudo-orthonormal basis for the signature-(M, N) metric.
    Lorentz {
        /// Number of positive metric directions.
        m: usize,
        /// Number of negative metric directions.
        n: usize,
        #[command(flatten)]
        args: BasisArgs,
    },
    /// Symplectic basis with paired canonical diagonal.
    Symplectic {
        #[command(flatten)]
        args: BasisArgs,
    },
}

#[derive(Debug, Args)]
struct BasisArgs {
    /// Input vectors file (square, columns independent).
    #[arg(short, long)]
    input: PathBuf,
    /// Run the extremum audit with this many random trials.
    #[arg(long, value_name = "TRIALS")]
    audit: Option<usize>,
    /// Seed for the audit trials.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Residual tolerance (overrides CANON_TOL and the default).
    #[arg(long)]
    tol: Option<f64>,
    /// Output path for the run report.
    #[arg(short, long)]
    output: PathBuf,
}

/// Anything that makes a command invalid before residuals are even judged.
#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Forms(#[from] FormsError),
    #[error(transparent)]
    Congruence(#[from] CongruenceError),
    #[error(transparent)]
    Bases(#[from] BasesError),
    #[error("invalid parameter: {0}")]
    Invalid(String),
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(IoError::Parse(e.to_string()))
    }
}

/// Parse the process arguments and run; returns the process exit code.
pub fn main_entry() -> i32 {
    run(Cli::parse())
}

/// Execute a parsed invocation: `0` pass, `1` residual failure, `2` error.
pub fn run(cli: Cli) -> i32 {
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Gen { kind } => cmd_gen(kind),
        Command::Decompose { method } => cmd_decompose(method),
        Command::Basis { method } => cmd_basis(method),
        Command::Verify { result, input, tol } => cmd_verify(&result, &input, tol),
    }
}

/// Print a line to stdout, tolerating a closed pipe (`canon … | head`).
fn emit(text: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout(), "{text}");
}

/// Resolve the residual tolerance: `--tol` > `CANON_TOL` > default.
fn resolve_tol(flag: Option<f64>) -> Result<f64, CliError> {
    let tol = match flag {
        Some(t) => t,
        None => match std::env::var("CANON_TOL") {
            Ok(text) => text
                .trim()
                .parse::<f64>()
                .map_err(|_| CliError::Invalid(format!("CANON_TOL is not a number: {text:?}")))?,
            Err(_) => tol::RESIDUAL,
        },
    };
    if !(tol.is_finite() && tol > 0.0) {
        return Err(CliError::Invalid(format!(
            "tolerance must be positive and finite, got {tol}"
        )));
    }
    Ok(tol)
}

fn cmd_gen(kind: GenKind) -> Result<i32, CliError> {
    match kind {
        GenKind::Spd {
            n,
            cond,
            seed,
            output,
        } => {
            if n < 1 {
                return Err(CliError::Invalid("--n must be at least 1".into()));
            }
            if !(cond.is_finite() && cond >= 1.0) {
                return Err(CliError::Invalid(format!(
                    "--cond must be a finite number ≥ 1, got {cond}"
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let v: DMatrix<f64> = random_spd(n, cond, &mut rng);
            write_json(&output, &MatrixFile::from_matrix(&v))?;
            emit(&format!(
                "gen spd: n={n} cond={cond} seed={seed} -> {}",
                output.display()
            ));
        }
        GenKind::Vectors { n, seed, output } => {
            if n < 1 {
                return Err(CliError::Invalid("--n must be at least 1".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let vs: VectorSet<f64> = random_vector_set(n, &mut rng);
            write_json(&output, &MatrixFile::from_matrix(vs.vectors()))?;
            emit(&format!(
                "gen vectors: n={n} seed={seed} -> {}",
                output.display()
            ));
        }
    }
    Ok(0)
}

/// `(form, claimed kind)` for a decomposition method acting on dimension `dim`.
fn decompose_kind(method: &DecomposeMethod, dim: usize) -> Result<(Form, ReportKind), CliError> {
    match method {
        DecomposeMethod::Orthogonal { .. } => Ok((
            Form::metric(dim, 0)?,
            ReportKind {
                op: "decompose".into(),
                method: "orthogonal".into(),
                m: Some(dim),
                n: Some(0),
            },
        )),
        DecomposeMethod::Pseudo { m, n, .. } => Ok((
            Form::metric(*m, *n)?,
            ReportKind {
                op: "decompose".into(),
                method: "pseudo".into(),
                m: Some(*m),
                n: Some(*n),
            },
        )),
        DecomposeMethod::Williamson { .. } => {
            if dim % 2 != 0 {
                return Err(LinalgError::OddDimension { dim }.into());
            }
            Ok((
                Form::symplectic(dim / 2)?,
                ReportKind {
                    op: "decompose".into(),
                    method: "williamson".into(),
                    m: None,
                    n: None,
                },
            ))
        }
    }
}

fn decompose_typed<T: Scalar>(
    v: &DMatrix<T>,
    method: &DecomposeMethod,
    args: &RunArgs,
    digest: String,
) -> Result<i32, CliError> {
    let tolerance = resolve_tol(args.tol)?;
    let (form, kind) = decompose_kind(method, v.nrows())?;
    let result = match method {
        DecomposeMethod::Orthogonal { .. } => pseudo_congruence(v, v.nrows(), 0)?,
        DecomposeMethod::Pseudo { m, n, .. } => pseudo_congruence(v, *m, *n)?,
        DecomposeMethod::Williamson { .. } => williamson(v)?,
    };

    let residuals = report_residuals(&result.s, v, Some(&form), true);
    let pass = residuals.pass(tolerance);
    let kappa = result
        .williamson_spectrum()
        .map(|ws| MatrixFile::from_vector(&ws.kappa));
    let report = RunReport {
        command: format!(
            "decompose {} -i {} -o {}",
            kind.method,
            args.input.display(),
            args.output.display()
        ),
        kind: kind.clone(),
        inputs: vec![InputDigest {
            path: args.input.display().to_string(),
            sha256: digest,
        }],
        outputs: ReportOutputs {
            s: Some(MatrixFile::from_matrix(&result.s)),
            d: Some(MatrixFile::from_vector(&result.canonical_diagonal())),
            kappa,
            z: None,
        },
        residuals,
        pass,
        tolerances: ReportTolerances {
            residual: tolerance,
        },
        seed: None,
        diagnostics: None,
        audit: None,
    };
    write_json(&args.output, &report)?;
    print_summary(&format!("decompose {}", kind.method), &report, Some(&args.output));
    Ok(if pass { 0 } else { 1 })
}

fn cmd_decompose(method: DecomposeMethod) -> Result<i32, CliError> {
    let args = match &method {
        DecomposeMethod::Orthogonal { args }
        | DecomposeMethod::Pseudo { args, .. }
        | DecomposeMethod::Williamson { args } => args,
    };
    let (matrix, digest) = parse_matrix_file(&args.input)?;
    match matrix {
        AnyMatrix::Real(v) => decompose_typed(&v, &method, args, digest),
        AnyMatrix::Complex(v) => decompose_typed(&v, &method, args, digest),
    }
}

/// `(claimed kind, diagonal promised)` for a basis method.
fn basis_kind(method: &BasisMethod) -> ReportKind {
    let (name, m, n) = match method {
        BasisMethod::Gs { .. } => ("gs", None, None),
        BasisMethod::Sw { .. } => ("sw", None, None),
        BasisMethod::Lorentz { m, n, .. } => ("lorentz", Some(*m), Some(*n)),
        BasisMethod::Symplectic { .. } => ("symplectic", None, None),
    };
    ReportKind {
        op: "basis".into(),
        method: name.into(),
        m,
        n,
    }
}

fn basis_typed<T: Scalar>(
    vectors: DMatrix<T>,
    method: &BasisMethod,
    args: &BasisArgs,
    digest: String,
) -> Result<i32, CliError> {
    let tolerance = resolve_tol(args.tol)?;
    let vs = VectorSet::new(vectors)?;
    let kind = basis_kind(method);
    let basis: BasisResult<T> = match method {
        BasisMethod::Gs { .. } => gram_schmidt(&vs)?,
        BasisMethod::Sw { .. } => schweinler_wigner(&vs)?,
        BasisMethod::Lorentz { m, n, .. } => lorentz_basis(&vs, *m, *n)?,
        BasisMethod::Symplectic { .. } => symplectic_basis(&vs)?,
    };

    let expect_diagonal = basis.kind != BasisKind::GramSchmidt;
    let form = basis.kind.form();
    let m_hat = vs.m_hat();
    let residuals = report_residuals(&basis.z, &m_hat, form.as_ref(), expect_diagonal);
    let pass = residuals.pass(tolerance);

    let audit = match args.audit {
        Some(trials) => Some(AuditJson::from(&extremum_audit(
            &vs, &basis, trials, args.seed,
        )?)),
        None => None,
    };
    let kappa = match basis.kind {
        BasisKind::Symplectic { n } => Some(MatrixFile::from_vector(
            &basis.diagnostics.m_diag.rows(0, n).clone_owned(),
        )),
        _ => None,
    };
    let report = RunReport {
        command: format!(
            "basis {} -i {} -o {}",
            kind.method,
            args.input.display(),
            args.output.display()
        ),
        kind: kind.clone(),
        inputs: vec![InputDigest {
            path: args.input.display().to_string(),
            sha256: digest,
        }],
        outputs: ReportOutputs {
            s: None,
            d: Some(MatrixFile::from_vector(&basis.diagnostics.m_diag)),
            kappa,
            z: Some(MatrixFile::from_matrix(&basis.z)),
        },
        residuals,
        pass,
        tolerances: ReportTolerances {
            residual: tolerance,
        },
        seed: args.audit.map(|_| args.seed),
        diagnostics: Some(DiagnosticsJson {
            quartic_value: basis.diagnostics.quartic_value,
            odd_norm: basis.diagnostics.odd_norm,
            m_diag: basis.diagnostics.m_diag.iter().copied().collect(),
            degenerate: basis.diagnostics.degenerate,
        }),
        audit,
    };
    write_json(&args.output, &report)?;
    print_summary(&format!("basis {}", kind.method), &report, Some(&args.output));
    Ok(if pass { 0 } else { 1 })
}

fn cmd_basis(method: BasisMethod) -> Result<i32, CliError> {
    let args = match &method {
        BasisMethod::Gs { args }
        | BasisMethod::Sw { args }
        | BasisMethod::Lorentz { args, .. }
        | BasisMethod::Symplectic { args } => args,
    };
    let (matrix, digest) = parse_matrix_file(&args.input)?;
    match matrix {
        AnyMatrix::Real(v) => basis_typed(v, &method, args, digest),
        AnyMatrix::Complex(v) => basis_typed(v, &method, args, digest),
    }
}

/// Map a report's claimed kind to the form and diagonality expectation used
/// when re-verifying, validating the claim against the actual dimension.
fn verification_contract(
    kind: &ReportKind,
    dim: usize,
) -> Result<(Option<Form>, bool), CliError> {
    let claim = (kind.op.as_str(), kind.method.as_str());
    match claim {
        ("decompose", "orthogonal") => Ok((Some(Form::metric(dim, 0)?), true)),
        ("decompose", "pseudo") | ("basis", "lorentz") => {
            let (m, n) = match (kind.m, kind.n) {
                (Some(m), Some(n)) => (m, n),
                _ => {
                    return Err(CliError::Invalid(
                        "metric report is missing its signature (m, n)".into(),
                    ))
                }
            };
            if m + n != dim {
                return Err(CliError::Invalid(format!(
                    "signature ({m}, {n}) does not match dimension {dim}"
                )));
            }
            Ok((Some(Form::metric(m, n)?), true))
        }
        ("decompose", "williamson") | ("basis", "symplectic") => {
            if dim % 2 != 0 {
                return Err(LinalgError::OddDimension { dim }.into());
            }
            Ok((Some(Form::symplectic(dim / 2)?), true))
        }
        ("basis", "gs") => Ok((None, false)),
        ("basis", "sw") => Ok((None, true)),
        _ => Err(CliError::Invalid(format!(
            "unknown report kind: {} {}",
            kind.op, kind.method
        ))),
    }
}

fn verify_typed<T: Scalar>(
    s: DMatrix<T>,
    original: DMatrix<T>,
    report: &RunReport,
    paths: (&Path, &Path),
    digests: (String, String),
    tolerance: f64,
) -> Result<i32, CliError> {
    if s.nrows() != s.ncols() {
        return Err(CliError::Invalid(format!(
            "claimed transformation is not square: {}×{}",
            s.nrows(),
            s.ncols()
        )));
    }
    // Basis reports act on the overlap operator of the original vectors;
    // decomposition reports act on the original matrix itself.
    let target = match report.kind.op.as_str() {
        "basis" => VectorSet::new(original)?.m_hat(),
        _ => original,
    };
    if target.nrows() != s.nrows() {
        return Err(CliError::Invalid(format!(
            "transformation dimension {} does not match input dimension {}",
            s.nrows(),
            target.nrows()
        )));
    }
    let (form, expect_diagonal) = verification_contract(&report.kind, s.nrows())?;
    let residuals = report_residuals(&s, &target, form.as_ref(), expect_diagonal);
    let pass = residuals.pass(tolerance);

    let verdict = RunReport {
        command: format!("verify -r {} -i {}", paths.0.display(), paths.1.display()),
        kind: report.kind.clone(),
        inputs: vec![
            InputDigest {
                path: paths.0.display().to_string(),
                sha256: digests.0,
            },
            InputDigest {
                path: paths.1.display().to_string(),
                sha256: digests.1,
            },
        ],
        outputs: ReportOutputs::default(),
        residuals,
        pass,
        tolerances: ReportTolerances {
            residual: tolerance,
        },
        seed: None,
        diagnostics: None,
        audit: None,
    };
    print_summary(
        &format!("verify {} {}", report.kind.op, report.kind.method),
        &verdict,
        None,
    );
    emit(&serde_json::to_string_pretty(&verdict)?);
    Ok(if pass { 0 } else { 1 })
}

fn cmd_verify(result_path: &Path, input_path: &Path, tol: Option<f64>) -> Result<i32, CliError> {
    let tolerance = resolve_tol(tol)?;
    let report_bytes = std::fs::read(result_path).map_err(IoError::from)?;
    let report_digest = sha256_hex(&report_bytes);
    let report: RunReport = serde_json::from_slice(&report_bytes)?;
    let claimed = report
        .outputs
        .z
        .as_ref()
        .or(report.outputs.s.as_ref())
        .ok_or_else(|| CliError::Invalid("report contains no transformation matrix".into()))?;
    let s = claimed.to_matrix()?;
    let (original, input_digest) = parse_matrix_file(input_path)?;
    let paths = (result_path, input_path);
    let digests = (report_digest, input_digest);
    match (s, original) {
        (AnyMatrix::Real(s), AnyMatrix::Real(v)) => {
            verify_typed(s, v, &report, paths, digests, tolerance)
        }
        (AnyMatrix::Complex(s), AnyMatrix::Complex(v)) => {
            verify_typed(s, v, &report, paths, digests, tolerance)
        }
        (AnyMatrix::Complex(s), AnyMatrix::Real(v)) => {
            // A complex transformation may legitimately act on a real input.
            let lifted = v.map(|x| Complex64::new(x, 0.0));
            verify_typed(s, lifted, &report, paths, digests, tolerance)
        }
        (AnyMatrix::Real(_), AnyMatrix::Complex(_)) => Err(CliError::Invalid(
            "real transformation cannot be verified against a complex input".into(),
        )),
    }
}

fn print_summary(label: &str, report: &RunReport, output: Option<&Path>) {
    let verdict = if report.pass { "PASS" } else { "FAIL" };
    let dest = match output {
        Some(p) => format!(" -> {}", p.display()),
        None => String::new(),
    };
    emit(&format!(
        "{label}: {verdict} (form {:.2e}, diag {:.2e}, det {:.2e}; tol {:.1e}){dest}",
        report.residuals.form_residual,
        report.residuals.diag_residual,
        report.residuals.det_deviation,
        report.tolerances.residual,
    ));
}
