//! Canonical congruence transformations of positive definite matrices.
//!
//! For a hermitian positive definite `V` and a quadratic form `J` this module
//! builds the group element `S` that brings `V` to its canonical congruence
//! form while preserving `J` exactly:
//!
//! * [`pseudo_congruence`] — `S† g S = g` and `S† V S = D²` diagonal, with
//!   `S` in `SO(m,n)` (real) or `SU(m,n)` (complex);
//! * [`williamson`] — `Sᵀ β S = β` and `S† V S = diag(κ₁…κ_n, κ₁…κ_n)`,
//!   with `S` in the real or complex symplectic group.
//!
//! It also provides [`group_check`] (membership verification), seeded
//! samplers for group elements of controlled type (compact, noncompact, or
//! general), and random SPD/unitary test-instance generators shared by the
//! command-line tool and by audits.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::forms::{Form, FormsError, MetricG, SymplecticBeta};
use crate::linalg::{
    self, antisym_canonical, antisym_youla, eig_hermitian, spd_power, LinalgError, SpdMatrix,
};
use crate::scalar::{Field, Scalar};
use crate::tol;

/// Errors from canonical congruence construction.
#[derive(Debug, Error)]
pub enum CongruenceError {
    /// A failure in the underlying dense linear algebra (shape, finiteness,
    /// hermiticity, positive definiteness, …).
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    /// A failure in form construction or a form/matrix dimension mismatch.
    #[error(transparent)]
    Forms(#[from] FormsError),
    /// The diagonalized `V^{−1/2} g V^{−1/2}` did not reproduce the signature
    /// of `g`. For positive definite `V` this is impossible by Sylvester's
    /// law of inertia, so it can only indicate numerical breakdown (an
    /// eigenvalue pushed across zero by rounding).
    #[error(
        "signature breakdown: expected ({expected_pos}, {expected_neg}) \
         but the diagonalization produced ({found_pos}, {found_neg})"
    )]
    SignatureMismatch {
        expected_pos: usize,
        expected_neg: usize,
        found_pos: usize,
        found_neg: usize,
    },
}

/// Residuals of a canonical congruence, all in the max-abs norm.
#[derive(Debug, Clone, Copy)]
pub struct Residuals {
    /// `‖S† J S − J‖` (metric) or `‖Sᵀ J S − J‖` (symplectic): group
    /// membership defect of `S`.
    pub form_residual: f64,
    /// `‖S† V S − diag(d²)‖`: distance from the canonical diagonal.
    pub diag_residual: f64,
    /// `|det S − 1|`.
    pub det_deviation: f64,
}

/// Result of a canonical congruence transformation: `S† V S = diag(d²)`
/// with `S` in the symmetry group of `form`.
#[derive(Debug, Clone)]
pub struct CongruenceResult<T: Scalar> {
    /// The transforming group element.
    pub s: DMatrix<T>,
    /// Positive diagonal of `D`, so that `S† V S = diag(d²)`.
    pub d: DVector<f64>,
    /// The form preserved by `S`, carrying the group tag.
    pub form: Form,
    /// Construction residuals (absolute, max-abs norm).
    pub residuals: Residuals,
    /// Condition number of the input `V` (ratio of extreme eigenvalues).
    pub condition_number: f64,
    /// `true` when the condition number exceeds the warn threshold; the
    /// result is still returned but accuracy degrades like `cond(V)^{1/2}`.
    pub ill_conditioned: bool,
}

impl<T: Scalar> CongruenceResult<T> {
    /// The canonical diagonal `d²` (entries of `S† V S`).
    pub fn canonical_diagonal(&self) -> DVector<f64> {
        self.d.map(|x| x * x)
    }

    /// For symplectic results, the symplectic spectrum `κ` (the canonical
    /// diagonal is `diag(κ; κ)`). `None` for metric results.
    pub fn williamson_spectrum(&self) -> Option<WilliamsonSpectrum> {
        match self.form {
            Form::Symplectic(b) => {
                let n = b.modes();
                Some(WilliamsonSpectrum {
                    kappa: DVector::from_fn(n, |k, _| self.d[k] * self.d[k]),
                })
            }
            Form::Metric(_) => None,
        }
    }
}

/// The symplectic spectrum of a positive definite matrix: `κ` sorted
/// descending, with `S† V S = diag(κ₁…κ_n, κ₁…κ_n)`.
#[derive(Debug, Clone)]
pub struct WilliamsonSpectrum {
    /// Positive symplectic eigenvalues, descending.
    pub kappa: DVector<f64>,
}

/// Group membership report for a candidate transformation.
#[derive(Debug, Clone, Copy)]
pub struct GroupCheck {
    /// Defect `‖S^♦ J S − J‖_max` where `♦` is `†` for metric forms and
    /// `ᵀ` for the symplectic form.
    pub form_residual: f64,
    /// Real part of `det S`.
    pub det_re: f64,
    /// Imaginary part of `det S` (zero for real input).
    pub det_im: f64,
    /// `|det S − 1|`.
    pub det_deviation: f64,
    /// `true` iff both the form residual and the determinant deviation are
    /// within tolerance.
    pub pass: bool,
}

/// Which stratum of the symmetry group to sample from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupElementKind {
    /// Maximal compact subgroup: block rotations `SO(m)×SO(n)` /
    /// `S(U(m)×U(n))` for metrics, orthogonal symplectic `[[X,Y],[−Y,X]]`
    /// (real) or unitary symplectic (complex) for `β`.
    Compact,
    /// A single noncompact one-parameter element: a hyperbolic boost in a
    /// mixed-signature plane, or a single-mode squeeze.
    Noncompact,
    /// Product compact · noncompact · compact.
    General,
}

// ---------------------------------------------------------------------------
// Field dispatch helpers
// ---------------------------------------------------------------------------

fn re_matrix<T: Scalar>(m: &DMatrix<T>) -> DMatrix<f64> {
    debug_assert_eq!(T::FIELD, Field::Real);
    m.map(|x| x.re())
}

fn lift_real<T: Scalar>(m: &DMatrix<f64>) -> DMatrix<T> {
    m.map(|x| T::from_re_im(x, 0.0))
}

fn c64_matrix<T: Scalar>(m: &DMatrix<T>) -> DMatrix<Complex64> {
    m.map(|x| Complex64::new(x.re(), x.im()))
}

fn lower_complex<T: Scalar>(m: &DMatrix<Complex64>) -> DMatrix<T> {
    debug_assert_eq!(T::FIELD, Field::Complex);
    m.map(|c| T::from_re_im(c.re, c.im))
}

fn diag_in<T: Scalar>(values: &DVector<f64>) -> DMatrix<T> {
    DMatrix::from_fn(values.len(), values.len(), |i, j| {
        if i == j {
            T::from_re_im(values[i], 0.0)
        } else {
            T::zero()
        }
    })
}

fn assemble_result<T: Scalar>(
    v: &DMatrix<T>,
    s: DMatrix<T>,
    d: DVector<f64>,
    form: Form,
    condition_number: f64,
) -> CongruenceResult<T> {
    let canonical = s.adjoint() * v * &s;
    let diag_residual = linalg::max_abs_diff(&canonical, &diag_in::<T>(&d.map(|x| x * x)));
    let form_residual = form
        .congruence_defect(&s)
        .expect("dimensions were validated");
    let det_deviation = (s.determinant() - T::one()).mag();
    CongruenceResult {
        s,
        d,
        form,
        residuals: Residuals {
            form_residual,
            diag_residual,
            det_deviation,
        },
        condition_number,
        ill_conditioned: condition_number > tol::COND_WARN,
    }
}

// ---------------------------------------------------------------------------
// Pseudo-orthogonal / pseudo-unitary canonical form
// ---------------------------------------------------------------------------

/// Canonical congruence of an SPD matrix under the metric-preserving group.
///
/// Diagonalizes `K = V^{−1/2} g V^{−1/2}` with an orthogonal/unitary `R`,
/// orders the columns so the `m` positive eigenvalues come first (descending,
/// then the `n` negative ones by descending magnitude; ties keep input
/// order), and returns `S = V^{−1/2} R D` with `d_k = |λ_k|^{−1/2}`. Then
/// `S† g S = g` and `S† V S = diag(d²)`, where `d²` equals the magnitudes of
/// the eigenvalues of `g V`. The determinant is normalized to `+1` by
/// rescaling the last column with a unit phase (a sign, for real input),
/// which changes neither congruence, so `S` lands in `SO(m,n)` / `SU(m,n)`.
///
/// Already-canonical inputs are reproduced exactly: `V = I` returns `S = I`
/// for every partition.
pub fn pseudo_congruence<T: Scalar>(
    v: &DMatrix<T>,
    m: usize,
    n: usize,
) -> Result<CongruenceResult<T>, CongruenceError> {
    let metric = MetricG::new(m, n)?;
    let form = Form::Metric(metric);
    let dim = metric.dim();
    if v.nrows() != dim || v.ncols() != dim {
        return Err(FormsError::DimensionMismatch {
            matrix_dim: v.nrows().max(v.ncols()),
            form_dim: dim,
        }
        .into());
    }
    let spd = SpdMatrix::new(v.clone())?;
    let w_inv_half = spd_power(&spd, -0.5);
    let k_matrix = &w_inv_half * metric.matrix::<T>() * &w_inv_half;
    let eig = eig_hermitian(&k_matrix)?;

    let abs_max = eig.values.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
    let abs_min = eig.values.iter().fold(f64::MAX, |a, &x| a.min(x.abs()));
    if abs_min <= tol::PD_FLOOR * abs_max {
        return Err(LinalgError::Singular {
            min_abs: abs_min,
            max_abs: abs_max,
        }
        .into());
    }

    // eig_hermitian returns ascending order: negatives first (most negative
    // leading, i.e. descending magnitude), then positives ascending.
    let negatives: Vec<usize> = (0..dim).filter(|&k| eig.values[k] < 0.0).collect();
    let mut positives: Vec<usize> = (0..dim).filter(|&k| eig.values[k] > 0.0).collect();
    if positives.len() != m || negatives.len() != n {
        return Err(CongruenceError::SignatureMismatch {
            expected_pos: m,
            expected_neg: n,
            found_pos: positives.len(),
            found_neg: negatives.len(),
        });
    }
    // Stable descending sort on cluster-snapped keys: near-degenerate
    // eigenvalues compare as exact ties and keep eigensolver order, so
    // canonical inputs map to the identity.
    let keys = linalg::tie_snapped(eig.values.as_slice(), tol::DEGENERATE_GAP * abs_max);
    positives.sort_by(|&a, &b| keys[b].partial_cmp(&keys[a]).unwrap());

    let order: Vec<usize> = positives.into_iter().chain(negatives).collect();
    let mut r = DMatrix::<T>::zeros(dim, dim);
    let mut d = DVector::<f64>::zeros(dim);
    for (new_col, &old_col) in order.iter().enumerate() {
        r.set_column(new_col, &eig.vectors.column(old_col));
        d[new_col] = eig.values[old_col].abs().powf(-0.5);
    }

    let mut s = w_inv_half * r * diag_in::<T>(&d);
    normalize_determinant(&mut s);
    Ok(assemble_result(v, s, d, form, spd.condition_number()))
}

/// Rescale the last column by the unit phase of `conj(det S)` so that
/// `det S = 1`. For real matrices this is a sign flip (or a no-op). The
/// rescaling commutes with both diagonal congruences `S† J S` and `S† V S`.
fn normalize_determinant<T: Scalar>(s: &mut DMatrix<T>) {
    let det = s.determinant();
    let mag = det.mag();
    debug_assert!(mag > 0.0, "determinant collapsed to zero");
    let phase = det.conjugate() * T::from_re_im(1.0 / mag, 0.0);
    let last = s.ncols() - 1;
    for x in s.column_mut(last).iter_mut() {
        *x *= phase;
    }
}

// ---------------------------------------------------------------------------
// Williamson canonical form
// ---------------------------------------------------------------------------

/// Williamson canonical congruence of an SPD matrix of even dimension `2n`.
///
/// Real input: with `M = V^{−1/2} β V^{−1/2}` brought to the canonical
/// antisymmetric form `Rᵀ M R = [[0, Ω], [−Ω, 0]]`, the element
/// `S = V^{−1/2} R D` with `D = diag(Ω^{−1/2}; Ω^{−1/2})` satisfies
/// `Sᵀ β S = β` and `Sᵀ V S = diag(κ; κ)` with `κ = 1/ω`. Its determinant
/// is automatically `+1`: the Pfaffian identity
/// `pf(Rᵀ M R) = det(R)·pf(M)` fixes `det R = +1` because `M` is congruent
/// to `β` by a positive-determinant factor.
///
/// Complex input: membership uses the bilinear symplectic condition
/// `Sᵀ β S = β` (the group `Sp(2n, C)`), while `V` transforms
/// sesquilinearly, `S† V S = diag(κ; κ)`. The sesquilinear condition
/// `S† β S = β` cannot diagonalize a general hermitian `V`: it would leave
/// the spectrum of `β V` invariant, and that spectrum is not `{±iκ}`-paired
/// for hermitian `V` with nonzero imaginary part (e.g. `[[2, i], [−i, 2]]`
/// has `eig(βV) = {i, −3i}`). The construction takes the Youla canonical
/// form `Qᵀ A Q = [[0, Ω], [−Ω, 0]]` of the complex antisymmetric
/// `A = conj(V^{−1/2}) β V^{−1/2}` and returns `S = V^{−1/2} Q D`.
///
/// Columns are permuted in matched `(k, n+k)` pairs — preserving the
/// symplectic condition — so `κ` is sorted descending; ties keep input
/// order, making the identity map to the identity.
pub fn williamson<T: Scalar>(v: &DMatrix<T>) -> Result<CongruenceResult<T>, CongruenceError> {
    linalg::check_square(v)?;
    if v.nrows() % 2 != 0 {
        return Err(LinalgError::OddDimension { dim: v.nrows() }.into());
    }
    let n = v.nrows() / 2;
    let beta = SymplecticBeta::new(n)?;
    let form = Form::Symplectic(beta);
    let spd = SpdMatrix::new(v.clone())?;

    let (rotation_t, omega): (DMatrix<T>, DVector<f64>) = match T::FIELD {
        Field::Real => {
            let w_inv_half = spd_power(&SpdMatrix::new(re_matrix(v))?, -0.5);
            let m_mat = &w_inv_half * beta.matrix::<f64>() * &w_inv_half;
            let canonical = antisym_canonical(&m_mat)?;
            (lift_real::<T>(&canonical.rotation), canonical.omega)
        }
        Field::Complex => {
            let w_inv_half = spd_power(&SpdMatrix::new(c64_matrix(v))?, -0.5);
            let a = w_inv_half.map(|x| x.conj()) * beta.matrix::<Complex64>() * &w_inv_half;
            let youla = antisym_youla(&a)?;
            (lower_complex::<T>(&youla.unitary), youla.omega)
        }
    };

    // κ = 1/ω; reorder matched column pairs so κ descends. Sorting uses
    // cluster-snapped keys so near-degenerate κ compare as exact ties and the
    // stable sort preserves input order — canonical inputs stay canonical
    // instead of picking up a pair permutation from eigensolver noise.
    let kappa: Vec<f64> = omega.iter().map(|&w| 1.0 / w).collect();
    let kappa_max = kappa.iter().fold(0.0f64, |a, &x| a.max(x));
    let keys = linalg::tie_snapped(&kappa, tol::DEGENERATE_GAP * kappa_max);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.sort_by(|&a, &b| keys[b].partial_cmp(&keys[a]).unwrap());

    let dim = 2 * n;
    let mut r = DMatrix::<T>::zeros(dim, dim);
    let mut d = DVector::<f64>::zeros(dim);
    for (new_k, &old_k) in perm.iter().enumerate() {
        r.set_column(new_k, &rotation_t.column(old_k));
        r.set_column(n + new_k, &rotation_t.column(n + old_k));
        d[new_k] = kappa[old_k].sqrt();
        d[n + new_k] = kappa[old_k].sqrt();
    }

    let w_inv_half = spd_power(&spd, -0.5);
    let s = w_inv_half * r * diag_in::<T>(&d);
    debug_assert!(
        (s.determinant() - T::one()).mag() < 1e-6,
        "symplectic canonical element should have unit determinant"
    );
    Ok(assemble_result(v, s, d, form, spd.condition_number()))
}

// ---------------------------------------------------------------------------
// Group membership
// ---------------------------------------------------------------------------

/// Verify that `S` preserves `form` and has unit determinant.
pub fn group_check<T: Scalar>(
    s: &DMatrix<T>,
    form: &Form,
    tolerance: f64,
) -> Result<GroupCheck, CongruenceError> {
    let form_residual = form.congruence_defect(s)?;
    let det = s.determinant();
    let det_deviation = (det - T::one()).mag();
    Ok(GroupCheck {
        form_residual,
        det_re: det.re(),
        det_im: det.im(),
        det_deviation,
        pass: form_residual <= tolerance && det_deviation <= tolerance,
    })
}

// ---------------------------------------------------------------------------
// Samplers
// ---------------------------------------------------------------------------

/// Haar-like random special orthogonal matrix (QR of a Gaussian matrix with
/// the R-diagonal sign convention, then a last-column flip into `SO(dim)`).
pub fn random_orthogonal<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DMatrix<f64> {
    if dim == 0 {
        return DMatrix::identity(0, 0);
    }
    let a = DMatrix::from_fn(dim, dim, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = a.qr();
    let r = qr.r();
    let mut q = qr.q();
    for k in 0..dim {
        if r[(k, k)] < 0.0 {
            for x in q.column_mut(k).iter_mut() {
                *x = -*x;
            }
        }
    }
    if q.determinant() < 0.0 {
        for x in q.column_mut(dim - 1).iter_mut() {
            *x = -*x;
        }
    }
    q
}

/// Haar-like random unitary matrix (QR of a complex Gaussian matrix with the
/// R-diagonal phase convention). The determinant is an arbitrary unit phase.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DMatrix<Complex64> {
    if dim == 0 {
        return DMatrix::identity(0, 0);
    }
    let a = DMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(
            rng.sample::<f64, _>(StandardNormal),
            rng.sample::<f64, _>(StandardNormal),
        ) * std::f64::consts::FRAC_1_SQRT_2
    });
    let qr = a.qr();
    let r = qr.r();
    let mut q = qr.q();
    for k in 0..dim {
        let rkk = r[(k, k)];
        if rkk.norm() > 0.0 {
            let phase = rkk.conj() / rkk.norm();
            for x in q.column_mut(k).iter_mut() {
                *x *= phase;
            }
        }
    }
    q
}

/// Random SPD matrix `Q diag(λ) Q†` with eigenvalues log-spaced in
/// `[1, cond]` (so the condition number is exactly `cond`, up to rounding)
/// and `Q` a random orthogonal/unitary matrix.
pub fn random_spd<T: Scalar, R: Rng + ?Sized>(dim: usize, cond: f64, rng: &mut R) -> DMatrix<T> {
    assert!(dim >= 1, "dimension must be positive");
    assert!(cond >= 1.0, "condition number must be at least 1");
    let lambda = DVector::from_fn(dim, |k, _| {
        if dim == 1 {
            1.0
        } else {
            cond.powf(k as f64 / (dim - 1) as f64)
        }
    });
    let v = match T::FIELD {
        Field::Real => {
            let q = random_orthogonal(dim, rng);
            lift_real::<T>(&(&q * DMatrix::from_diagonal(&lambda) * q.transpose()))
        }
        Field::Complex => {
            let u = random_unitary(dim, rng);
            let d = DMatrix::from_diagonal(&lambda.map(|x| Complex64::new(x, 0.0)));
            lower_complex::<T>(&(&u * d * u.adjoint()))
        }
    };
    (&v + v.adjoint()).scale(0.5)
}

/// Sample an element of the symmetry group of `form`, of the requested kind.
///
/// All returned matrices pass [`group_check`] to rounding accuracy:
///
/// * metric compact — block `SO(m)×SO(n)` (real) or `U(m)×U(n)` with the
///   overall determinant phase removed (complex);
/// * metric noncompact — a hyperbolic boost `cosh μ / sinh μ` in one mixed
///   plane, `|μ| ≤ 2`; the identity when the metric is definite (the group
///   is then compact and has no boosts);
/// * symplectic compact — `[[X, Y], [−Y, X]]` with `X + iY` unitary, real
///   entries in both fields (the subgroup compatible with both the bilinear
///   membership condition and sesquilinear transport; see `sample_compact`);
/// * symplectic noncompact — a single-mode squeeze `diag(e^μ, e^{−μ})`;
/// * general — compact · noncompact · compact.
pub fn sample_group_element<T: Scalar, R: Rng + ?Sized>(
    form: &Form,
    kind: GroupElementKind,
    rng: &mut R,
) -> DMatrix<T> {
    match kind {
        GroupElementKind::Compact => sample_compact(form, rng),
        GroupElementKind::Noncompact => sample_noncompact(form, rng),
        GroupElementKind::General => {
            let a = sample_compact::<T, R>(form, rng);
            let b = sample_noncompact::<T, R>(form, rng);
            let c = sample_compact::<T, R>(form, rng);
            a * b * c
        }
    }
}

fn sample_compact<T: Scalar, R: Rng + ?Sized>(form: &Form, rng: &mut R) -> DMatrix<T> {
    match (form, T::FIELD) {
        (Form::Metric(g), Field::Real) => {
            let (m, n) = (g.positives(), g.negatives());
            let mut s = DMatrix::<f64>::identity(m + n, m + n);
            s.view_mut((0, 0), (m, m)).copy_from(&random_orthogonal(m, rng));
            s.view_mut((m, m), (n, n)).copy_from(&random_orthogonal(n, rng));
            lift_real::<T>(&s)
        }
        (Form::Metric(g), Field::Complex) => {
            let (m, n) = (g.positives(), g.negatives());
            let dim = m + n;
            let mut s = DMatrix::<Complex64>::identity(dim, dim);
            s.view_mut((0, 0), (m, m)).copy_from(&random_unitary(m, rng));
            s.view_mut((m, m), (n, n)).copy_from(&random_unitary(n, rng));
            // Remove the overall determinant phase to land in S(U(m)×U(n)).
            let det = s.determinant();
            let phase = det.conj() / det.norm();
            for x in s.column_mut(dim - 1).iter_mut() {
                *x *= phase;
            }
            lower_complex::<T>(&s)
        }
        // Symplectic elements are sampled real-valued in both fields:
        // `[[X, Y], [−Y, X]]` with `X + iY` unitary. Real matrices are the
        // intersection of the bilinear group (`Sᵀ β S = β`, the membership
        // condition) with the stabilizer of the sesquilinear transport
        // `M ↦ S† M S` used when a basis is re-mixed — for complex `S` the
        // two conditions require `Sᵀ = S†`, i.e. `S` real. Sampling that
        // intersection keeps the quadratic trace invariant exactly conserved
        // under both transports.
        (Form::Symplectic(b), _) => {
            let n = b.modes();
            let w = random_unitary(n, rng);
            let mut s = DMatrix::<T>::zeros(2 * n, 2 * n);
            for i in 0..n {
                for j in 0..n {
                    s[(i, j)] = T::from_re_im(w[(i, j)].re, 0.0);
                    s[(i, n + j)] = T::from_re_im(w[(i, j)].im, 0.0);
                    s[(n + i, j)] = T::from_re_im(-w[(i, j)].im, 0.0);
                    s[(n + i, n + j)] = T::from_re_im(w[(i, j)].re, 0.0);
                }
            }
            s
        }
    }
}

fn sample_noncompact<T: Scalar, R: Rng + ?Sized>(form: &Form, rng: &mut R) -> DMatrix<T> {
    let mu: f64 = rng.gen_range(-tol::NONCOMPACT_MU_MAX..tol::NONCOMPACT_MU_MAX);
    match form {
        Form::Metric(g) => {
            let (m, n) = (g.positives(), g.negatives());
            let mut s = DMatrix::<T>::identity(m + n, m + n);
            if m == 0 || n == 0 {
                return s; // definite metric: the symmetry group is compact
            }
            let i = rng.gen_range(0..m);
            let j = m + rng.gen_range(0..n);
            s[(i, i)] = T::from_re_im(mu.cosh(), 0.0);
            s[(j, j)] = T::from_re_im(mu.cosh(), 0.0);
            s[(i, j)] = T::from_re_im(mu.sinh(), 0.0);
            s[(j, i)] = T::from_re_im(mu.sinh(), 0.0);
            s
        }
        Form::Symplectic(b) => {
            let n = b.modes();
            let k = rng.gen_range(0..n);
            let mut s = DMatrix::<T>::identity(2 * n, 2 * n);
            s[(k, k)] = T::from_re_im(mu.exp(), 0.0);
            s[(n + k, n + k)] = T::from_re_im((-mu).exp(), 0.0);
            s
        }
    }
}
