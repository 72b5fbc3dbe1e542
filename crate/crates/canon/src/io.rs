//! File formats and machine-readable run reports.
//!
//! Matrices travel as JSON ([`MatrixFile`]): an explicit shape, a field tag
//! (`"real"` / `"complex"`), and row-major data with complex entries written
//! as `[re, im]` pairs. Doubles are serialized in shortest-round-trip form,
//! so write-then-parse reproduces every entry bit-exactly.
//!
//! Command results travel as JSON ([`RunReport`]): the command echo, SHA-256
//! digests of the inputs, the outputs themselves as embedded matrix
//! payloads, the three scale-normalized residuals, the tolerances in force,
//! and the seed (when one was used) — enough to reproduce and re-verify any
//! run from its report alone.

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::forms::Form;
use crate::linalg::{max_abs, max_abs_diff};
use crate::scalar::{Field, Scalar};

/// Errors from parsing, validating, or writing matrix and report files.
#[derive(Debug, Error)]
pub enum IoError {
    /// Filesystem failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),
    /// Malformed JSON or structurally invalid content.
    #[error("parse error: {0}")]
    Parse(String),
    /// Declared shape disagrees with the data length.
    #[error("shape mismatch: declared {expected} entries, found {found}")]
    Shape { expected: usize, found: usize },
    /// A matrix entry is NaN or infinite.
    #[error("non-finite entry in matrix data")]
    NonFinite,
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        IoError::Parse(e.to_string())
    }
}

/// One matrix entry on disk: a bare number (real) or a `[re, im]` pair.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    /// Real entry.
    Real(f64),
    /// Complex entry as `[re, im]`.
    Complex([f64; 2]),
}

/// JSON wire format for a matrix.
///
/// Shape is given either as `dim` (square) or as `rows`/`cols`; `data` holds
/// the entries in row-major order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixFile {
    /// Square dimension, interchangeable with equal `rows`/`cols`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    /// Row count (with `cols`), alternative to `dim`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<usize>,
    /// Column count (with `rows`), alternative to `dim`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cols: Option<usize>,
    /// Coefficient field of the entries.
    pub field: Field,
    /// Entries in row-major order.
    pub data: Vec<Entry>,
}

/// A parsed matrix of either field.
#[derive(Debug, Clone)]
pub enum AnyMatrix {
    /// Real double-precision matrix.
    Real(DMatrix<f64>),
    /// Complex double-precision matrix.
    Complex(DMatrix<Complex64>),
}

impl AnyMatrix {
    /// Field tag of the payload.
    pub fn field(&self) -> Field {
        match self {
            AnyMatrix::Real(_) => Field::Real,
            AnyMatrix::Complex(_) => Field::Complex,
        }
    }

    /// `(rows, cols)`.
    pub fn shape(&self) -> (usize, usize) {
        match self {
            AnyMatrix::Real(m) => m.shape(),
            AnyMatrix::Complex(m) => m.shape(),
        }
    }
}

impl MatrixFile {
    /// Wrap a matrix of either supported field for serialization. Square
    /// matrices are written with `dim`; rectangular ones with `rows`/`cols`.
    pub fn from_matrix<T: Scalar>(m: &DMatrix<T>) -> Self {
        let (rows, cols) = m.shape();
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let x = m[(i, j)];
                data.push(match T::FIELD {
                    Field::Real => Entry::Real(x.re()),
                    Field::Complex => Entry::Complex([x.re(), x.im()]),
                });
            }
        }
        if rows == cols {
            Self {
                dim: Some(rows),
                rows: None,
                cols: None,
                field: T::FIELD,
                data,
            }
        } else {
            Self {
                dim: None,
                rows: Some(rows),
                cols: Some(cols),
                field: T::FIELD,
                data,
            }
        }
    }

    /// Wrap a real vector as an `N×1` payload.
    pub fn from_vector(v: &DVector<f64>) -> Self {
        Self::from_matrix(&DMatrix::from_column_slice(v.len(), 1, v.as_slice()))
    }

    /// Resolve the declared shape, validating consistency.
    fn resolve_shape(&self) -> Result<(usize, usize), IoError> {
        let (rows, cols) = match (self.dim, self.rows, self.cols) {
            (Some(d), None, None) => (d, d),
            (None, Some(r), Some(c)) => (r, c),
            (Some(d), Some(r), Some(c)) if r == d && c == d => (d, d),
            _ => {
                return Err(IoError::Parse(
                    "shape must be given as `dim` or as `rows` and `cols`".into(),
                ))
            }
        };
        if rows == 0 || cols == 0 {
            return Err(IoError::Parse("matrix dimensions must be positive".into()));
        }
        Ok((rows, cols))
    }

    /// Validate and convert to a typed matrix.
    pub fn to_matrix(&self) -> Result<AnyMatrix, IoError> {
        let (rows, cols) = self.resolve_shape()?;
        if self.data.len() != rows * cols {
            return Err(IoError::Shape {
                expected: rows * cols,
                found: self.data.len(),
            });
        }
        for entry in &self.data {
            let finite = match entry {
                Entry::Real(x) => x.is_finite(),
                Entry::Complex([re, im]) => re.is_finite() && im.is_finite(),
            };
            if !finite {
                return Err(IoError::NonFinite);
            }
            if self.field == Field::Real {
                if let Entry::Complex(_) = entry {
                    return Err(IoError::Parse(
                        "complex `[re, im]` entry in a matrix declared real".into(),
                    ));
                }
            }
        }
        Ok(match self.field {
            Field::Real => AnyMatrix::Real(DMatrix::from_fn(rows, cols, |i, j| {
                match self.data[i * cols + j] {
                    Entry::Real(x) => x,
                    Entry::Complex(_) => unreachable!("gated above"),
                }
            })),
            Field::Complex => AnyMatrix::Complex(DMatrix::from_fn(rows, cols, |i, j| {
                match self.data[i * cols + j] {
                    Entry::Real(x) => Complex64::new(x, 0.0),
                    Entry::Complex([re, im]) => Complex64::new(re, im),
                }
            })),
        })
    }
}

/// Hex-encoded SHA-256 of a byte string.
pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for byte in digest {
        out.push_str(&format!("{byte:02x}"));
    }
    out
}

/// Read, digest, and validate a matrix file.
pub fn parse_matrix_file(path: &Path) -> Result<(AnyMatrix, String), IoError> {
    let bytes = std::fs::read(path)?;
    let digest = sha256_hex(&bytes);
    let file: MatrixFile = serde_json::from_slice(&bytes)?;
    Ok((file.to_matrix()?, digest))
}

/// Serialize a JSON value to a file (pretty, trailing newline), returning
/// the written bytes' digest.
pub fn write_json<S: Serialize>(path: &Path, value: &S) -> Result<String, IoError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, &text)?;
    Ok(sha256_hex(text.as_bytes()))
}

/// Digest of one input file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InputDigest {
    /// Path as given on the command line.
    pub path: String,
    /// SHA-256 of the file bytes, hex.
    pub sha256: String,
}

/// What a report's transformation claims to be, recorded so verification
/// can recompute every residual from scratch without consulting the code
/// path that produced it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportKind {
    /// `"decompose"` or `"basis"`.
    pub op: String,
    /// Method: `orthogonal`, `pseudo`, `williamson`, `gs`, `sw`, `lorentz`,
    /// or `symplectic`.
    pub method: String,
    /// Positive signature count, for metric methods.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    /// Negative signature count, for metric methods.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
}

/// Transformation outputs embedded in a report.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ReportOutputs {
    /// Congruence transformation `S` (decompose commands).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<MatrixFile>,
    /// Diagonal of `S†VS` (or `Z†M̂Z`), as an `N×1` payload.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<MatrixFile>,
    /// Symplectic spectrum `κ` (Williamson/symplectic methods), `n×1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<MatrixFile>,
    /// Basis matrix `Z` (basis commands).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<MatrixFile>,
}

/// The three normalized residuals every command reports.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ReportResiduals {
    /// Group-membership defect of `S` (or orthonormality defect of `Z`).
    pub form_residual: f64,
    /// Off-diagonal norm of the canonical matrix, divided by `‖V‖_max`.
    /// Zero for methods that do not promise a diagonal canonical form.
    pub diag_residual: f64,
    /// `|det − 1|` for group elements; `||det| − 1|` for orthonormal bases
    /// (whose column phases are free).
    pub det_deviation: f64,
}

impl ReportResiduals {
    /// `true` iff every residual is within `tol`.
    pub fn pass(&self, tol: f64) -> bool {
        self.form_residual <= tol && self.diag_residual <= tol && self.det_deviation <= tol
    }

    /// The largest of the three residuals.
    pub fn max(&self) -> f64 {
        self.form_residual
            .max(self.diag_residual)
            .max(self.det_deviation)
    }
}

/// Tolerances a run was judged against.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ReportTolerances {
    /// Absolute bound applied to each normalized residual.
    pub residual: f64,
}

/// Basis diagnostics embedded in a report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiagnosticsJson {
    /// Quartic form `m(z)`.
    pub quartic_value: f64,
    /// Minimized structure defect (odd-part norm or off-diagonal norm²).
    pub odd_norm: f64,
    /// Diagonal of `M(z)`.
    pub m_diag: Vec<f64>,
    /// Near-degenerate Gram spectrum flag.
    pub degenerate: bool,
}

/// Extremum-audit evidence embedded in a report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AuditJson {
    /// Quartic value of the audited basis.
    pub baseline_quartic: f64,
    /// Quartic values after compact perturbations.
    pub perturbed_quartics: Vec<f64>,
    /// Odd-part norm of the audited basis.
    pub odd_norm_baseline: f64,
    /// Odd-part norms after general perturbations.
    pub odd_norms_perturbed: Vec<f64>,
    /// Maximal relative drift of the quadratic group invariant.
    pub invariant_drift: f64,
    /// Quartic values along the noncompact growth family.
    pub growth_curve: Vec<f64>,
}

impl From<&crate::bases::AuditReport> for AuditJson {
    fn from(a: &crate::bases::AuditReport) -> Self {
        Self {
            baseline_quartic: a.baseline_quartic,
            perturbed_quartics: a.perturbed_quartics.clone(),
            odd_norm_baseline: a.odd_norm_baseline,
            odd_norms_perturbed: a.odd_norms_perturbed.clone(),
            invariant_drift: a.invariant_drift,
            growth_curve: a.growth_curve.clone(),
        }
    }
}

/// Machine-readable result of one command invocation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    /// Human-readable echo of the invocation.
    pub command: String,
    /// What transformation the outputs claim to realize.
    pub kind: ReportKind,
    /// Digests of every input file.
    pub inputs: Vec<InputDigest>,
    /// The outputs themselves.
    pub outputs: ReportOutputs,
    /// Scale-normalized residuals.
    pub residuals: ReportResiduals,
    /// `true` iff every residual is within the tolerance.
    pub pass: bool,
    /// Tolerances in force for this run.
    pub tolerances: ReportTolerances,
    /// RNG seed, when the command used one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Basis diagnostics, for basis commands.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<DiagnosticsJson>,
    /// Extremum-audit evidence, when requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub audit: Option<AuditJson>,
}

/// Recompute the report residuals for a claimed transformation, from scratch.
///
/// `s` is the claimed group element (or orthonormal basis), `v` the matrix
/// it acts on (`V` for decompositions, `M̂ = VV†` for bases). `form` selects
/// the preserved quadratic form — `None` means the orthonormality contract
/// `S†S = I`. `expect_diagonal` controls whether the off-diagonal of `S†VS`
/// counts as a defect (it does for every method except sequential
/// orthonormalization, which promises no diagonal canonical form).
///
/// The diagonal residual is computed on `V/‖V‖_max`, making the pass
/// criterion scale-free; the form residual compares against the fixed,
/// order-one form matrix and needs no normalization.
pub fn report_residuals<T: Scalar>(
    s: &DMatrix<T>,
    v: &DMatrix<T>,
    form: Option<&Form>,
    expect_diagonal: bool,
) -> ReportResiduals {
    let canonical = s.adjoint() * v * s;
    let vmax = max_abs(v).max(f64::MIN_POSITIVE);

    let form_residual = match form {
        Some(f) => f
            .congruence_defect(s)
            .expect("dimensions validated upstream"),
        None => {
            let identity = DMatrix::<T>::identity(s.ncols(), s.ncols());
            max_abs_diff(&(s.adjoint() * s), &identity)
        }
    };

    let diag_residual = if expect_diagonal {
        let mut defect = 0.0f64;
        for i in 0..canonical.nrows() {
            for j in 0..canonical.ncols() {
                if i != j {
                    defect = defect.max(canonical[(i, j)].mag());
                }
            }
        }
        defect / vmax
    } else {
        0.0
    };

    let det = s.clone().determinant();
    let det_deviation = match form {
        Some(_) => (det - T::one()).mag(),
        None => (det.mag() - 1.0).abs(),
    };

    ReportResiduals {
        form_residual,
        diag_residual,
        det_deviation,
    }
}
