//! Dense matrix kernels: hermitian eigendecomposition, SPD powers and the
//! canonical form of antisymmetric matrices.
//!
//! Everything downstream (congruence decompositions, basis construction)
//! reduces to the three kernels in this module, so their conventions are
//! pinned down precisely:
//!
//! * [`eig_hermitian`] sorts eigenvalues ascending and fixes each
//!   eigenvector's phase so that its largest-magnitude entry is positive
//!   real, making results deterministic across runs.
//! * [`spd_power`] evaluates `V^p` through the eigendecomposition of a
//!   checked positive definite matrix.
//! * [`antisym_canonical`] brings a real antisymmetric nonsingular `M` to
//!   the block form `Rᵀ M R = [[0, Ω], [−Ω, 0]]` with `Ω` diagonal, positive
//!   and descending; [`antisym_youla`] is the complex-antisymmetric analogue
//!   under unitary congruence `Qᵀ A Q`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use thiserror::Error;

use crate::scalar::Scalar;
use crate::tol;

/// Errors reported by the matrix kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    /// The operation needs a square matrix.
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    /// The matrix contains NaN or infinite entries.
    #[error("matrix contains non-finite entries")]
    NonFinite,
    /// `‖A − A†‖_max` exceeds the hermiticity tolerance.
    #[error("matrix is not hermitian: asymmetry {residual:.3e} exceeds tolerance {tol:.3e}")]
    NotHermitian { residual: f64, tol: f64 },
    /// An eigenvalue sits at or below the positive-definiteness floor.
    #[error(
        "matrix is not positive definite: min eigenvalue {min_eig:.6e}, max eigenvalue {max_eig:.6e}"
    )]
    NotPositiveDefinite { min_eig: f64, max_eig: f64 },
    /// `‖A + Aᵀ‖_max` exceeds the antisymmetry tolerance.
    #[error("matrix is not antisymmetric: ‖A + Aᵀ‖_max = {residual:.3e} exceeds {tol:.3e}")]
    NotAntisymmetric { residual: f64, tol: f64 },
    /// The matrix is singular to working precision.
    #[error("matrix is singular to working precision: min |eig| {min_abs:.3e}, max {max_abs:.3e}")]
    Singular { min_abs: f64, max_abs: f64 },
    /// The operation needs an even dimension.
    #[error("dimension {dim} is odd, an even dimension is required")]
    OddDimension { dim: usize },
}

/// Largest entry magnitude, `‖A‖_max`.
pub fn max_abs<T: Scalar>(a: &DMatrix<T>) -> f64 {
    a.iter().map(|x| x.mag()).fold(0.0, f64::max)
}

/// Largest entry-wise difference, `‖A − B‖_max`. Panics on shape mismatch.
pub fn max_abs_diff<T: Scalar>(a: &DMatrix<T>, b: &DMatrix<T>) -> f64 {
    assert_eq!(a.shape(), b.shape(), "max_abs_diff: shape mismatch");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (*x - *y).mag())
        .fold(0.0, f64::max)
}

/// True when every entry is finite.
pub fn all_finite<T: Scalar>(a: &DMatrix<T>) -> bool {
    a.iter().all(|x| x.re().is_finite() && x.im().is_finite())
}

/// `‖A − A†‖_max`, the deviation from hermiticity.
pub fn hermiticity_residual<T: Scalar>(a: &DMatrix<T>) -> f64 {
    let adj = a.adjoint();
    max_abs_diff(a, &adj)
}

/// Reject non-square inputs, returning the common dimension otherwise.
pub fn check_square<T: Scalar>(a: &DMatrix<T>) -> Result<usize, LinalgError> {
    if a.nrows() != a.ncols() {
        return Err(LinalgError::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    Ok(a.nrows())
}

/// Relative window used to break ties deterministically when two candidate
/// magnitudes agree to within rounding noise (phase pivots, projection
/// pivots). Wide enough to absorb `1e-15`-level solver noise, narrow enough
/// never to fire on genuinely distinct magnitudes.
const PIVOT_TIE_REL: f64 = 1e-9;

/// Index of the first entry whose magnitude is within a relative tie window
/// of the maximum. Returns `None` for an all-zero slice.
fn pivot_index(mags: &[f64]) -> Option<usize> {
    let max = mags.iter().copied().fold(0.0, f64::max);
    if max <= 0.0 {
        return None;
    }
    mags.iter().position(|&m| m >= max * (1.0 - PIVOT_TIE_REL))
}

/// Rotate a column's global phase so its pivot entry (first largest-magnitude
/// entry) becomes positive real. For real scalars this is a sign flip.
fn fix_column_phase<T: Scalar>(col: &mut nalgebra::DVectorViewMut<T>) {
    let mags: Vec<f64> = col.iter().map(|x| x.mag()).collect();
    let Some(idx) = pivot_index(&mags) else {
        return;
    };
    let pivot = col[idx];
    let scale = pivot.conjugate() * T::from_real(1.0 / pivot.mag());
    for x in col.iter_mut() {
        *x *= scale;
    }
}

/// Eigendecomposition of a hermitian matrix.
///
/// Invariants: `values` ascending; `vectors` has orthonormal columns matching
/// `values` order; each column's largest-magnitude entry is positive real.
#[derive(Debug, Clone)]
pub struct EigenDecomposition<T: Scalar> {
    /// Eigenvalues in ascending order (real for hermitian input).
    pub values: DVector<f64>,
    /// Orthonormal eigenvector columns, `vectors.column(k)` pairs with `values[k]`.
    pub vectors: DMatrix<T>,
}

impl<T: Scalar> EigenDecomposition<T> {
    /// Rebuild `Q diag(f(λ)) Q†` from the decomposition.
    pub fn assemble(&self, f: impl Fn(f64) -> f64) -> DMatrix<T> {
        let d = DMatrix::from_diagonal(&self.values.map(|x| T::from_real(f(x))));
        &self.vectors * d * self.vectors.adjoint()
    }
}

/// One cyclic complex Jacobi pass over `r` (hermitian, nearly diagonal),
/// accumulating the rotations into `q`. Returns the largest off-diagonal
/// magnitude remaining afterwards.
///
/// Each 2×2 block `[[a, h·u],[h·ū, b]]` (`h = |r_pq|`, `u` unit) is
/// annihilated by the unitary `J = diag(1, ū)·G` with the classic symmetric
/// rotation `G`; convergence is quadratic from a nearly-diagonal start.
fn jacobi_sweep<T: Scalar>(r: &mut DMatrix<T>, q: &mut DMatrix<T>, threshold: f64) -> f64 {
    let n = r.nrows();
    for p in 0..n {
        for s_idx in (p + 1)..n {
            let h = r[(p, s_idx)].mag();
            if h <= threshold {
                continue;
            }
            let u = r[(p, s_idx)] * T::from_real(1.0 / h);
            let a = r[(p, p)].re();
            let b = r[(s_idx, s_idx)].re();
            let theta = (b - a) / (2.0 * h);
            let t = theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt());
            let c = 1.0 / (1.0 + t * t).sqrt();
            let s = t * c;

            // Columns p, s_idx of the identity are replaced so that J†·R·J
            // zeroes the (p, s_idx) entry:
            // J[:,p] = c·e_p − s·ū·e_s,  J[:,s] = s·u·e_p + c·e_s.
            let jpp = T::from_real(c);
            let jsp = -(T::from_real(s) * u.conjugate());
            let jps = T::from_real(s) * u;
            let jss = T::from_real(c);

            // R ← J† R J (rows and columns p, s_idx).
            for k in 0..n {
                let rkp = r[(k, p)];
                let rks = r[(k, s_idx)];
                r[(k, p)] = rkp * jpp + rks * jsp;
                r[(k, s_idx)] = rkp * jps + rks * jss;
            }
            for k in 0..n {
                let rpk = r[(p, k)];
                let rsk = r[(s_idx, k)];
                r[(p, k)] = jpp.conjugate() * rpk + jsp.conjugate() * rsk;
                r[(s_idx, k)] = jps.conjugate() * rpk + jss.conjugate() * rsk;
            }
            r[(p, s_idx)] = T::zero();
            r[(s_idx, p)] = T::zero();

            // Q ← Q·J.
            for k in 0..q.nrows() {
                let qkp = q[(k, p)];
                let qks = q[(k, s_idx)];
                q[(k, p)] = qkp * jpp + qks * jsp;
                q[(k, s_idx)] = qkp * jps + qks * jss;
            }
        }
    }
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                worst = worst.max(r[(i, j)].mag());
            }
        }
    }
    worst
}

/// Eigendecomposition of a hermitian (real symmetric or complex hermitian)
/// matrix with deterministic ordering and phases.
///
/// The input is accepted when `‖A − A†‖_max ≤ SYM_REL · ‖A‖_max` and is
/// symmetrised before the solve, so rounding-level asymmetry never leaks
/// into the output.
pub fn eig_hermitian<T: Scalar>(a: &DMatrix<T>) -> Result<EigenDecomposition<T>, LinalgError> {
    let n = check_square(a)?;
    if !all_finite(a) {
        return Err(LinalgError::NonFinite);
    }
    let amax = max_abs(a);
    let residual = hermiticity_residual(a);
    let sym_tol = tol::SYM_REL * amax;
    if residual > sym_tol {
        return Err(LinalgError::NotHermitian {
            residual,
            tol: sym_tol,
        });
    }
    let sym = (a + a.adjoint()).scale(0.5);
    let se = SymmetricEigen::new(sym.clone());

    // The solver's eigenvectors are unitary to machine precision, but its
    // eigenvalue/eigenvector pairing can carry errors well above machine
    // epsilon for complex input. A few cyclic Jacobi passes on Q†AQ —
    // quadratically convergent from a nearly diagonal start — polish the
    // decomposition to machine precision, and leave exactly diagonal inputs
    // untouched.
    let mut q = se.eigenvectors;
    let mut r = &q.adjoint() * &sym * &q;
    r = (&r + r.adjoint()).scale(0.5);
    let target = 8.0 * f64::EPSILON * amax.max(f64::MIN_POSITIVE);
    for _ in 0..6 {
        if jacobi_sweep(&mut r, &mut q, target) <= target {
            break;
        }
    }
    let eigenvalues = r.diagonal().map(|x| x.re());

    // Stable ascending sort keeps the solver's column order within ties,
    // which preserves exact eigenvectors for already-diagonal inputs.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eigenvalues[i].partial_cmp(&eigenvalues[j]).unwrap());

    let values = DVector::from_iterator(n, order.iter().map(|&i| eigenvalues[i]));
    let mut vectors = DMatrix::<T>::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        vectors.set_column(new_col, &q.column(old_col));
        fix_column_phase(&mut vectors.column_mut(new_col));
    }

    let out = EigenDecomposition { values, vectors };
    debug_assert!(
        max_abs_diff(&out.assemble(|x| x), &sym) <= tol::EIG_PER_DIM * n as f64 * amax.max(1.0),
        "hermitian eigendecomposition failed to reconstruct its input"
    );
    Ok(out)
}

/// Reason a matrix failed the positive-definiteness check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpdRejection {
    /// Not a square matrix.
    NotSquare,
    /// Contains non-finite entries.
    NonFinite,
    /// Asymmetry exceeds the hermiticity tolerance.
    NotHermitian,
    /// Some eigenvalue is at or below the positive-definiteness floor.
    NotPositiveDefinite,
}

impl std::fmt::Display for SpdRejection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let label = match self {
            SpdRejection::NotSquare => "not square",
            SpdRejection::NonFinite => "non-finite entries",
            SpdRejection::NotHermitian => "not hermitian",
            SpdRejection::NotPositiveDefinite => "not positive definite",
        };
        f.write_str(label)
    }
}

/// Outcome of [`check_spd`]: a verdict plus enough spectrum information to
/// explain it. Never an error — rejection is a result, not a failure.
#[derive(Debug, Clone)]
pub struct SpdCheck {
    /// Whether the matrix is hermitian positive definite at the given floor.
    pub is_spd: bool,
    /// Why the check failed, when it did.
    pub reason: Option<SpdRejection>,
    /// Smallest eigenvalue, when the spectrum was computable.
    pub min_eig: Option<f64>,
    /// Largest eigenvalue, when the spectrum was computable.
    pub max_eig: Option<f64>,
}

/// Check hermitian positive definiteness: hermitian within tolerance and
/// `λ_min > pd_floor · λ_max`. Use [`tol::PD_FLOOR`] for the standard gate.
pub fn check_spd<T: Scalar>(a: &DMatrix<T>, pd_floor: f64) -> SpdCheck {
    let reject = |reason| SpdCheck {
        is_spd: false,
        reason: Some(reason),
        min_eig: None,
        max_eig: None,
    };
    let eig = match eig_hermitian(a) {
        Ok(e) => e,
        Err(LinalgError::NotSquare { .. }) => return reject(SpdRejection::NotSquare),
        Err(LinalgError::NonFinite) => return reject(SpdRejection::NonFinite),
        Err(LinalgError::NotHermitian { .. }) => return reject(SpdRejection::NotHermitian),
        // eig_hermitian has no other error paths.
        Err(_) => unreachable!("unexpected eigendecomposition failure"),
    };
    let min_eig = eig.values[0];
    let max_eig = eig.values[eig.values.len() - 1];
    let is_spd = min_eig > pd_floor * max_eig.max(0.0) && max_eig > 0.0;
    SpdCheck {
        is_spd,
        reason: if is_spd {
            None
        } else {
            Some(SpdRejection::NotPositiveDefinite)
        },
        min_eig: Some(min_eig),
        max_eig: Some(max_eig),
    }
}

/// A validated hermitian positive definite matrix with its cached
/// eigendecomposition.
#[derive(Debug, Clone)]
pub struct SpdMatrix<T: Scalar> {
    matrix: DMatrix<T>,
    eigen: EigenDecomposition<T>,
}

impl<T: Scalar> SpdMatrix<T> {
    /// Validate and wrap a matrix. Fails with [`LinalgError::NotPositiveDefinite`]
    /// when any eigenvalue is at or below `PD_FLOOR · λ_max`, and with the
    /// hermiticity / shape / finiteness errors of [`eig_hermitian`] otherwise.
    pub fn new(matrix: DMatrix<T>) -> Result<Self, LinalgError> {
        let eigen = eig_hermitian(&matrix)?;
        let min_eig = eigen.values[0];
        let max_eig = eigen.values[eigen.values.len() - 1];
        if !(min_eig > tol::PD_FLOOR * max_eig.max(0.0) && max_eig > 0.0) {
            return Err(LinalgError::NotPositiveDefinite { min_eig, max_eig });
        }
        // Store the symmetrised matrix so later residuals see exactly what
        // the eigendecomposition saw.
        let matrix = (&matrix + matrix.adjoint()).scale(0.5);
        Ok(Self { matrix, eigen })
    }

    /// The validated matrix.
    pub fn matrix(&self) -> &DMatrix<T> {
        &self.matrix
    }

    /// Cached eigendecomposition (ascending eigenvalues, all positive).
    pub fn eigen(&self) -> &EigenDecomposition<T> {
        &self.eigen
    }

    /// Matrix dimension.
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Spectral condition number `λ_max / λ_min`.
    pub fn condition_number(&self) -> f64 {
        let n = self.eigen.values.len();
        self.eigen.values[n - 1] / self.eigen.values[0]
    }
}

/// Real power `V^p` of a positive definite matrix through its
/// eigendecomposition, `Q diag(λ^p) Q†`, symmetrised on the way out.
/// Intended exponents are `1/2`, `−1/2` and `−1`; any finite `p` works.
pub fn spd_power<T: Scalar>(v: &SpdMatrix<T>, p: f64) -> DMatrix<T> {
    let powered = v.eigen().assemble(|x| x.powf(p));
    (&powered + powered.adjoint()).scale(0.5)
}

/// Canonical form of a real antisymmetric nonsingular matrix.
///
/// Invariants: `rotation` is orthogonal; `omega` is positive and descending;
/// `rotationᵀ · M · rotation` equals `[[0, Ω], [−Ω, 0]]` to tolerance.
///
/// `det(rotation) = +1` whenever the orientation class of `M` admits a
/// special-orthogonal reduction, which covers every matrix of the form
/// `A β Aᵀ` with `det A > 0` (in particular everything the Williamson
/// decomposition feeds in). For the opposite orientation class, a
/// determinant `−1` is forced: the Pfaffian identity
/// `pf(RᵀMR) = det(R) · pf(M)` fixes `det(R)` once all `ω_k` are positive,
/// so no choice of `R` can restore `+1` there.
#[derive(Debug, Clone)]
pub struct AntisymCanonical {
    /// Orthogonal matrix bringing `M` to block canonical form.
    pub rotation: DMatrix<f64>,
    /// Canonical frequencies, positive, sorted descending.
    pub omega: DVector<f64>,
}

impl AntisymCanonical {
    /// The target block form `[[0, Ω], [−Ω, 0]]`.
    pub fn block_form(&self) -> DMatrix<f64> {
        block_form_matrix(&self.omega)
    }
}

/// Build `[[0, Ω], [−Ω, 0]]` from the diagonal of `Ω`.
pub fn block_form_matrix(omega: &DVector<f64>) -> DMatrix<f64> {
    let n = omega.len();
    let mut j = DMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        j[(k, n + k)] = omega[k];
        j[(n + k, k)] = -omega[k];
    }
    j
}

/// Validate a (real or complex) matrix as antisymmetric, even-dimensional and
/// finite; returns the antisymmetrised copy and half-dimension.
fn antisym_gate<T: Scalar>(m: &DMatrix<T>) -> Result<(DMatrix<T>, usize), LinalgError> {
    let dim = check_square(m)?;
    if !all_finite(m) {
        return Err(LinalgError::NonFinite);
    }
    if dim % 2 != 0 || dim == 0 {
        return Err(LinalgError::OddDimension { dim });
    }
    let amax = max_abs(m);
    let residual = max_abs_diff(&m.transpose().scale(-1.0), m);
    let sym_tol = tol::SYM_REL * amax;
    if residual > sym_tol {
        return Err(LinalgError::NotAntisymmetric {
            residual,
            tol: sym_tol,
        });
    }
    if amax == 0.0 {
        return Err(LinalgError::Singular {
            min_abs: 0.0,
            max_abs: 0.0,
        });
    }
    Ok(((m - m.transpose()).scale(0.5), dim / 2))
}

/// Group sorted magnitudes into clusters separated by more than a relative
/// gap; `parity_even` additionally refuses to close a cluster of odd size
/// (needed when members must come in pairs).
fn cluster_ranges(sorted: &[f64], window: f64, parity_even: bool) -> Vec<std::ops::Range<usize>> {
    let mut ranges = Vec::new();
    let mut start = 0;
    for i in 0..sorted.len() {
        let last = i + 1 == sorted.len();
        let gap_closes = !last && (sorted[i + 1] - sorted[i]).abs() > window;
        let parity_ok = !parity_even || (i + 1 - start) % 2 == 0;
        if last || (gap_closes && parity_ok) {
            if last || parity_ok {
                ranges.push(start..i + 1);
                start = i + 1;
            }
        }
    }
    ranges
}

/// Replace each value with the mean of its near-degenerate cluster (values
/// within a relative `window` of their neighbours, in sorted order). Used to
/// build sort keys: stable sorts on snapped keys preserve input order across
/// ties instead of amplifying eps-level eigensolver noise into permutations.
pub(crate) fn tie_snapped(values: &[f64], window: f64) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
    let sorted: Vec<f64> = order.iter().map(|&i| values[i]).collect();
    let mut keys = vec![0.0f64; values.len()];
    for range in cluster_ranges(&sorted, window, false) {
        let mean = sorted[range.clone()].iter().sum::<f64>() / range.len() as f64;
        for &i in &order[range] {
            keys[i] = mean;
        }
    }
    keys
}

/// Deterministically re-pick an orthonormal basis of the span of `cols`:
/// greedily normalise the projection of the earliest standard basis vector
/// with (near-)maximal projection norm, then deflate. For a one-dimensional
/// span this reduces to the global phase convention; for degenerate
/// eigenspaces it makes the output independent of the solver's arbitrary
/// internal basis, so canonical inputs reproduce canonical outputs.
fn canonical_span_basis(cols: &DMatrix<Complex64>) -> Vec<DVector<Complex64>> {
    let d = cols.ncols();
    let mut projector = cols * cols.adjoint();
    let mut basis = Vec::with_capacity(d);
    for _ in 0..d {
        let norms: Vec<f64> = (0..projector.ncols())
            .map(|k| projector.column(k).norm())
            .collect();
        let idx = pivot_index(&norms).expect("projector collapsed before basis was complete");
        let mut eta: DVector<Complex64> = projector.column(idx).into_owned();
        eta /= Complex64::new(norms[idx], 0.0);
        {
            let mut view = eta.column_mut(0);
            fix_column_phase(&mut view);
        }
        projector -= &eta * eta.adjoint();
        basis.push(eta);
    }
    basis
}

/// Canonical form of a real antisymmetric nonsingular matrix `M`:
/// an orthogonal `R` and positive descending `Ω` with
/// `Rᵀ M R = [[0, Ω], [−Ω, 0]]`.
///
/// Built from the hermitian eigenproblem of `iM`: eigenvectors `η_k` for the
/// negative eigenvalues `−ω_k` give `R = [√2·Re η | √2·Im η]`, with the
/// conjugate vectors serving the positive half implicitly. Within degenerate
/// frequency clusters the eigenbasis is re-picked deterministically, so a
/// matrix already in canonical form comes back with `R = identity`.
pub fn antisym_canonical(m: &DMatrix<f64>) -> Result<AntisymCanonical, LinalgError> {
    let (ms, n) = antisym_gate(m)?;
    let h: DMatrix<Complex64> = ms.map(|x| Complex64::new(0.0, x));
    let eig = eig_hermitian(&h)?;

    let abs_max = eig.values.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    let abs_min = eig.values.iter().fold(f64::INFINITY, |a, &v| a.min(v.abs()));
    if !(abs_min > tol::PD_FLOOR * abs_max) {
        return Err(LinalgError::Singular {
            min_abs: abs_min,
            max_abs: abs_max,
        });
    }
    // The spectrum of i·(antisymmetric) is symmetric about zero; a nonsingular
    // input therefore splits into n negative followed by n positive values.
    if eig.values[n - 1] >= 0.0 || eig.values[n] <= 0.0 {
        return Err(LinalgError::Singular {
            min_abs: abs_min,
            max_abs: abs_max,
        });
    }

    // Negative eigenvalues ascending = frequencies descending.
    let neg: Vec<f64> = eig.values.as_slice()[..n].to_vec();
    let window = tol::DEGENERATE_GAP * abs_max;
    let mut etas: Vec<DVector<Complex64>> = Vec::with_capacity(n);
    for range in cluster_ranges(&neg, window, false) {
        let cols = eig.vectors.columns(range.start, range.len()).into_owned();
        etas.extend(canonical_span_basis(&cols));
    }

    let dim = 2 * n;
    let mut rotation = DMatrix::<f64>::zeros(dim, dim);
    for (k, eta) in etas.iter().enumerate() {
        let sqrt2 = std::f64::consts::SQRT_2;
        for i in 0..dim {
            rotation[(i, k)] = sqrt2 * eta[i].re;
            rotation[(i, n + k)] = sqrt2 * eta[i].im;
        }
    }
    let omega = DVector::from_iterator(n, neg.iter().map(|&l| -l));

    let out = AntisymCanonical { rotation, omega };
    debug_assert!(
        max_abs_diff(
            &(out.rotation.transpose() * &ms * &out.rotation),
            &out.block_form()
        ) <= tol::RESIDUAL * abs_max.max(1.0),
        "antisymmetric canonical form failed to reconstruct"
    );
    Ok(out)
}

/// Canonical form of a complex antisymmetric nonsingular matrix under
/// unitary congruence (Youla form).
///
/// Invariants: `unitary` has orthonormal columns; `omega` is positive and
/// descending (the paired singular values of the input); and
/// `unitaryᵀ · A · unitary = [[0, Ω], [−Ω, 0]]` — note the transpose, not the
/// adjoint: congruence with a bilinear form.
#[derive(Debug, Clone)]
pub struct AntisymYoula {
    /// Unitary matrix bringing `A` to block canonical form by `Qᵀ A Q`.
    pub unitary: DMatrix<Complex64>,
    /// Canonical frequencies (paired singular values), positive, descending.
    pub omega: DVector<f64>,
}

impl AntisymYoula {
    /// The target block form `[[0, Ω], [−Ω, 0]]` as a complex matrix.
    pub fn block_form(&self) -> DMatrix<Complex64> {
        block_form_matrix(&self.omega).map(|x| Complex64::new(x, 0.0))
    }
}

/// Youla canonical form of a complex antisymmetric nonsingular matrix:
/// a unitary `Q` and positive descending `Ω` with `Qᵀ A Q = [[0, Ω], [−Ω, 0]]`.
///
/// Construction: the hermitian matrix `A†A` has each eigenvalue `ω²` with
/// even multiplicity. Within each eigenvalue cluster, pick `q` by the same
/// deterministic projection pivoting as the real case and set
/// `p = −conj(A q)/‖A q‖`; the pair satisfies `A q = −ω p̄`, `A p = ω q̄`,
/// and `q ⊥ p` holds automatically because `qᵀ A q = 0` for antisymmetric `A`.
pub fn antisym_youla(a: &DMatrix<Complex64>) -> Result<AntisymYoula, LinalgError> {
    let (asym, n) = antisym_gate(a)?;
    let h = asym.adjoint() * &asym;
    let eig = eig_hermitian(&h)?;

    let mu_max = eig.values[eig.values.len() - 1].max(0.0);
    let sigma_max = mu_max.sqrt();
    let sigma_min = eig.values[0].max(0.0).sqrt();
    if !(sigma_min > tol::PD_FLOOR * sigma_max) {
        return Err(LinalgError::Singular {
            min_abs: sigma_min,
            max_abs: sigma_max,
        });
    }

    // Clusters of A†A eigenvalues, each of even size, processed from the
    // largest ω down so omega comes out descending.
    let window = tol::DEGENERATE_GAP * mu_max;
    let mut ranges = cluster_ranges(eig.values.as_slice(), window, true);
    ranges.reverse();

    let dim = 2 * n;
    let mut qs: Vec<DVector<Complex64>> = Vec::with_capacity(n);
    let mut ps: Vec<DVector<Complex64>> = Vec::with_capacity(n);
    let mut omega = Vec::with_capacity(n);
    for range in ranges {
        let cols = eig.vectors.columns(range.start, range.len()).into_owned();
        let pairs = range.len() / 2;
        debug_assert_eq!(range.len() % 2, 0, "odd antisymmetric singular cluster");
        let mut projector = &cols * cols.adjoint();
        for _ in 0..pairs {
            let norms: Vec<f64> = (0..dim).map(|k| projector.column(k).norm()).collect();
            let idx =
                pivot_index(&norms).expect("projector collapsed before pairing was complete");
            let mut q: DVector<Complex64> = projector.column(idx).into_owned();
            q /= Complex64::new(norms[idx], 0.0);
            {
                let mut view = q.column_mut(0);
                fix_column_phase(&mut view);
            }
            let aq = &asym * &q;
            let sigma = aq.norm();
            let p: DVector<Complex64> = aq.map(|x| -x.conj() / sigma);
            projector -= &q * q.adjoint();
            projector -= &p * p.adjoint();
            omega.push(sigma);
            qs.push(q);
            ps.push(p);
        }
    }

    let mut unitary = DMatrix::<Complex64>::zeros(dim, dim);
    for k in 0..n {
        unitary.set_column(k, &qs[k]);
        unitary.set_column(n + k, &ps[k]);
    }
    let out = AntisymYoula {
        unitary,
        omega: DVector::from_vec(omega),
    };
    debug_assert!(
        max_abs_diff(
            &(out.unitary.transpose() * &asym * &out.unitary),
            &out.block_form()
        ) <= tol::RESIDUAL * sigma_max.max(1.0),
        "Youla canonical form failed to reconstruct"
    );
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_antisym(n: usize, seed: u64) -> DMatrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
        (&a - a.transpose()).scale(0.5)
    }

    fn random_antisym_complex(n: usize, seed: u64) -> DMatrix<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = DMatrix::from_fn(n, n, |_, _| {
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        (&a - a.transpose()).scale(0.5)
    }

    #[test]
    fn eig_identity_is_trivial() {
        let eig = eig_hermitian(&DMatrix::<f64>::identity(3, 3)).unwrap();
        assert_eq!(eig.values.as_slice(), &[1.0, 1.0, 1.0]);
        assert_eq!(eig.vectors, DMatrix::identity(3, 3));
    }

    #[test]
    fn eig_diagonal_sorts_ascending_with_standard_basis() {
        let eig = eig_hermitian(&dmatrix![5.0, 0.0; 0.0, 2.0]).unwrap();
        assert_eq!(eig.values.as_slice(), &[2.0, 5.0]);
        assert_eq!(eig.vectors, dmatrix![0.0, 1.0; 1.0, 0.0]);
    }

    #[test]
    fn eig_symmetric_2x2_matches_characteristic_roots() {
        // char(λ) = λ² − 4λ + 3 = 0 → λ = 1, 3 with eigenvectors (1, ∓1)/√2.
        let eig = eig_hermitian(&dmatrix![2.0, 1.0; 1.0, 2.0]).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((eig.values[0] - 1.0).abs() < 1e-14);
        assert!((eig.values[1] - 3.0).abs() < 1e-14);
        let expect = dmatrix![s, s; -s, s];
        assert!(max_abs_diff(&eig.vectors, &expect) < 1e-14);
    }

    #[test]
    fn eig_complex_hermitian_2x2() {
        // det(A − λ) = (2−λ)² − 1 → λ = 1, 3.
        let a = dmatrix![c(2.0, 0.0), c(0.0, 1.0); c(0.0, -1.0), c(2.0, 0.0)];
        let eig = eig_hermitian(&a).unwrap();
        assert!((eig.values[0] - 1.0).abs() < 1e-14);
        assert!((eig.values[1] - 3.0).abs() < 1e-14);
        assert!(max_abs_diff(&eig.assemble(|x| x), &a) < 1e-14);
        // Orthonormal columns and pivot entries positive real.
        let gram = eig.vectors.adjoint() * &eig.vectors;
        assert!(max_abs_diff(&gram, &DMatrix::identity(2, 2)) < 1e-14);
        for k in 0..2 {
            let col = eig.vectors.column(k);
            let mags: Vec<f64> = col.iter().map(|x| x.norm()).collect();
            let idx = pivot_index(&mags).unwrap();
            assert!(col[idx].im.abs() < 1e-14 && col[idx].re > 0.0);
        }
    }

    #[test]
    fn eig_rejects_non_hermitian_and_non_finite() {
        let err = eig_hermitian(&dmatrix![1.0, 2.0; 0.0, 1.0]).unwrap_err();
        assert!(matches!(err, LinalgError::NotHermitian { .. }));
        let err = eig_hermitian(&dmatrix![f64::NAN, 0.0; 0.0, 1.0]).unwrap_err();
        assert_eq!(err, LinalgError::NonFinite);
        let err = eig_hermitian(&DMatrix::<f64>::zeros(2, 3)).unwrap_err();
        assert!(matches!(err, LinalgError::NotSquare { .. }));
    }

    #[test]
    fn eig_reconstructs_random_hermitian() {
        for seed in 0..12u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = 1 + (seed as usize % 8);
            let a = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
            let sym = (&a + a.transpose()).scale(0.5);
            let eig = eig_hermitian(&sym).unwrap();
            assert!(max_abs_diff(&eig.assemble(|x| x), &sym) < tol::EIG_PER_DIM * n as f64);
            for k in 1..n {
                assert!(eig.values[k] >= eig.values[k - 1]);
            }
        }
    }

    #[test]
    fn spd_power_closed_forms() {
        let id = SpdMatrix::new(DMatrix::<f64>::identity(3, 3)).unwrap();
        assert_eq!(spd_power(&id, -0.5), DMatrix::identity(3, 3));

        let v = SpdMatrix::new(dmatrix![4.0, 0.0; 0.0, 9.0]).unwrap();
        assert!(max_abs_diff(&spd_power(&v, 0.5), &dmatrix![2.0, 0.0; 0.0, 3.0]) < 1e-14);

        // Inverse of [[2,1],[1,2]] by the adjugate: (1/3)·[[2,−1],[−1,2]].
        let v = SpdMatrix::new(dmatrix![2.0, 1.0; 1.0, 2.0]).unwrap();
        let expect = dmatrix![2.0 / 3.0, -1.0 / 3.0; -1.0 / 3.0, 2.0 / 3.0];
        assert!(max_abs_diff(&spd_power(&v, -1.0), &expect) < 1e-14);
    }

    #[test]
    fn spd_power_half_squares_back() {
        for seed in 0..8u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
            let n = 2 + (seed as usize % 6);
            let a = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
            let v = &a * a.transpose() + DMatrix::identity(n, n).scale(0.5);
            let spd = SpdMatrix::new(v.clone()).unwrap();
            let half = spd_power(&spd, 0.5);
            assert!(max_abs_diff(&(&half * &half), &v) < 1e-10);
            let inv_half = spd_power(&spd, -0.5);
            assert!(max_abs_diff(&(&half * &inv_half), &DMatrix::identity(n, n)) < 1e-10);
        }
    }

    #[test]
    fn spd_rejects_indefinite() {
        // Eigenvalues −1 and 3.
        let err = SpdMatrix::new(dmatrix![1.0, 2.0; 2.0, 1.0]).unwrap_err();
        assert!(matches!(err, LinalgError::NotPositiveDefinite { .. }));

        let check = check_spd(&dmatrix![1.0, 2.0; 2.0, 1.0], tol::PD_FLOOR);
        assert!(!check.is_spd);
        assert_eq!(check.reason, Some(SpdRejection::NotPositiveDefinite));
        assert!(check.min_eig.unwrap() < 0.0);

        let check = check_spd(&dmatrix![1.0, 2.0; 0.0, 1.0], tol::PD_FLOOR);
        assert!(!check.is_spd);
        assert_eq!(check.reason, Some(SpdRejection::NotHermitian));

        let check = check_spd(&dmatrix![2.0, 1.0; 1.0, 2.0], tol::PD_FLOOR);
        assert!(check.is_spd);
        assert_eq!(check.reason, None);
    }

    #[test]
    fn antisym_canonical_of_standard_form_is_identity() {
        let beta = dmatrix![0.0, 1.0; -1.0, 0.0];
        let out = antisym_canonical(&beta).unwrap();
        assert!(max_abs_diff(&out.rotation, &DMatrix::identity(2, 2)) < 1e-12);
        assert!((out.omega[0] - 1.0).abs() < 1e-12);

        let scaled = dmatrix![0.0, 5.0; -5.0, 0.0];
        let out = antisym_canonical(&scaled).unwrap();
        assert!(max_abs_diff(&out.rotation, &DMatrix::identity(2, 2)) < 1e-12);
        assert!((out.omega[0] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn antisym_canonical_of_block_form_is_identity_with_descending_omega() {
        // Already canonical 4×4 with Ω = diag(3, 1).
        let m = block_form_matrix(&DVector::from_vec(vec![3.0, 1.0]));
        let out = antisym_canonical(&m).unwrap();
        assert!(max_abs_diff(&out.rotation, &DMatrix::identity(4, 4)) < 1e-10);
        assert!((out.omega[0] - 3.0).abs() < 1e-12 && (out.omega[1] - 1.0).abs() < 1e-12);

        // Fully degenerate block form must also come back as identity.
        let m = block_form_matrix(&DVector::from_vec(vec![2.0, 2.0, 2.0]));
        let out = antisym_canonical(&m).unwrap();
        assert!(max_abs_diff(&out.rotation, &DMatrix::identity(6, 6)) < 1e-10);
    }

    #[test]
    fn antisym_canonical_reconstructs_random_inputs() {
        for seed in 0..16u64 {
            let n = 2 * (1 + seed as usize % 4);
            let m = random_antisym(n, seed);
            let out = antisym_canonical(&m).unwrap();
            let amax = max_abs(&m);
            // Orthogonality and reconstruction.
            let rtr = out.rotation.transpose() * &out.rotation;
            assert!(max_abs_diff(&rtr, &DMatrix::identity(n, n)) < 1e-12);
            let rec = out.rotation.transpose() * &m * &out.rotation;
            assert!(max_abs_diff(&rec, &out.block_form()) < tol::RESIDUAL * amax.max(1.0));
            // Descending positive frequencies.
            for k in 0..out.omega.len() {
                assert!(out.omega[k] > 0.0);
                if k > 0 {
                    assert!(out.omega[k] <= out.omega[k - 1] + 1e-15);
                }
            }
        }
    }

    #[test]
    fn antisym_canonical_frequencies_match_general_eigensolver() {
        // Independent oracle: eigenvalues of antisymmetric M are ±iω, so the
        // sorted |imag| parts of the Schur eigenvalues must reproduce Ω.
        for seed in 20..26u64 {
            let n = 2 * (1 + seed as usize % 3);
            let m = random_antisym(n, seed);
            let out = antisym_canonical(&m).unwrap();
            let mut oracle: Vec<f64> = m.complex_eigenvalues().iter().map(|z| z.im.abs()).collect();
            oracle.sort_by(|a, b| b.partial_cmp(a).unwrap());
            for (k, &w) in out.omega.iter().enumerate() {
                // Oracle values come in pairs; pick every second entry.
                assert!((oracle[2 * k] - w).abs() < 1e-9 * oracle[0].max(1.0));
            }
        }
    }

    #[test]
    fn antisym_canonical_rejections() {
        let err = antisym_canonical(&DMatrix::zeros(3, 3)).unwrap_err();
        assert!(matches!(err, LinalgError::OddDimension { dim: 3 }));
        let err = antisym_canonical(&dmatrix![0.0, 1.0; 1.0, 0.0]).unwrap_err();
        assert!(matches!(err, LinalgError::NotAntisymmetric { .. }));
        let err = antisym_canonical(&DMatrix::zeros(2, 2)).unwrap_err();
        assert!(matches!(err, LinalgError::Singular { .. }));
        // Singular but nonzero: a 4×4 with a zero 2×2 block.
        let mut m = DMatrix::zeros(4, 4);
        m[(0, 1)] = 1.0;
        m[(1, 0)] = -1.0;
        let err = antisym_canonical(&m).unwrap_err();
        assert!(matches!(err, LinalgError::Singular { .. }));
    }

    #[test]
    fn youla_of_standard_form_is_identity() {
        let beta4 = block_form_matrix(&DVector::from_vec(vec![1.0, 1.0]));
        let out = antisym_youla(&beta4.map(|x| c(x, 0.0))).unwrap();
        assert!(max_abs_diff(&out.unitary, &DMatrix::identity(4, 4)) < 1e-12);
        assert!((out.omega[0] - 1.0).abs() < 1e-12 && (out.omega[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn youla_reconstructs_random_complex_inputs() {
        for seed in 0..12u64 {
            let n = 2 * (1 + seed as usize % 4);
            let a = random_antisym_complex(n, 40 + seed);
            let out = antisym_youla(&a).unwrap();
            let amax = max_abs(&a);
            let qtq = out.unitary.adjoint() * &out.unitary;
            assert!(max_abs_diff(&qtq, &DMatrix::identity(n, n)) < 1e-12);
            let rec = out.unitary.transpose() * &a * &out.unitary;
            assert!(max_abs_diff(&rec, &out.block_form()) < tol::RESIDUAL * amax.max(1.0));
            // Omega must be the singular values of A (each taken once), by
            // the independent SVD oracle.
            let mut sv: Vec<f64> = a.clone().svd(false, false).singular_values.iter().copied().collect();
            sv.sort_by(|x, y| y.partial_cmp(x).unwrap());
            for (k, &w) in out.omega.iter().enumerate() {
                assert!((sv[2 * k] - w).abs() < 1e-9 * sv[0].max(1.0));
            }
        }
    }

    #[test]
    fn youla_rejects_hermitian_antisymmetry_confusion() {
        // i·(real symmetric) is hermitian but NOT antisymmetric; the gate is
        // on A + Aᵀ, so this must be rejected.
        let a = dmatrix![c(0.0, 1.0), c(0.0, 1.0); c(0.0, 1.0), c(0.0, 1.0)];
        let err = antisym_youla(&a).unwrap_err();
        assert!(matches!(err, LinalgError::NotAntisymmetric { .. }));
    }
}
