//! Basis construction from linearly independent vectors, and the extremum
//! audit for the associated quartic functional.
//!
//! Given `N` independent vectors `v₁…v_N` (columns of a square matrix `V`),
//! four canonical bases are built:
//!
//! * [`gram_schmidt`] — sequential orthonormalization; depends on input
//!   order.
//! * [`schweinler_wigner`] — `Z = V U₀ P^{−1/2}` where `U₀† G U₀ = P`
//!   diagonalizes the Gram matrix; order-independent, diagonalizes the
//!   overlap operator `M̂ = Σ v_j v_j†` in the new basis, and *maximizes*
//!   the quartic form `m(z) = Σ_k M(z)_kk²` over all orthonormal bases.
//! * [`lorentz_basis`] — a pseudo-orthonormal frame `Z† g Z = g` in which
//!   `M(z) = Z† M̂ Z` is diagonal; the two-step extremum: minimize the odd
//!   part (to zero), then the compact subgroup maximizes the quartic form.
//! * [`symplectic_basis`] — a symplectic frame `Zᵀ β Z = β` with
//!   `M(z) = diag(κ; κ)`, same two-step principle.
//!
//! [`extremum_audit`] collects numerical evidence for the extremal
//! characterization: compact perturbations never raise the quartic value,
//! general perturbations never lower the odd-part norm, group invariants do
//! not drift, and a noncompact one-parameter family grows without bound.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::congruence::{
    pseudo_congruence, random_orthogonal, random_unitary, sample_group_element, williamson,
    CongruenceError, GroupElementKind,
};
use crate::forms::{even_odd_split, quartic_form, Form, FormsError};
use crate::linalg::{self, check_spd, LinalgError, SpdMatrix};
use crate::scalar::{Field, Scalar};
use crate::tol;

/// Errors from basis construction and audits.
#[derive(Debug, Error)]
pub enum BasesError {
    /// Underlying dense linear algebra failure.
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    /// Form construction failure or form/matrix dimension mismatch.
    #[error(transparent)]
    Forms(#[from] FormsError),
    /// Failure propagated from the congruence layer.
    #[error(transparent)]
    Congruence(#[from] CongruenceError),
    /// The input vectors are not linearly independent: their Gram matrix
    /// fails the positive definiteness check.
    #[error("vectors are linearly dependent (gram eigenvalues span [{min_eig:.3e}, {max_eig:.3e}])")]
    DependentVectors { min_eig: f64, max_eig: f64 },
    /// A matrix does not have the dimension required by the vector set.
    #[error("expected dimension {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    /// The audited basis does not belong to the given vector set.
    #[error("basis dimension {basis_dim} does not match vector set dimension {vectors_dim}")]
    KindMismatch { basis_dim: usize, vectors_dim: usize },
    /// The squeeze family is undefined at parameter zero.
    #[error("the squeeze family has no element at parameter 0")]
    ZeroParameter,
}

/// A set of `N` linearly independent vectors in an `N`-dimensional space,
/// stored as the columns of a square matrix. Independence itself is gated
/// where the Gram matrix is formed ([`gram`]), not at construction.
#[derive(Debug, Clone)]
pub struct VectorSet<T: Scalar> {
    vectors: DMatrix<T>,
}

impl<T: Scalar> VectorSet<T> {
    /// Wrap a square matrix of column vectors. Rejects non-square or
    /// non-finite input.
    pub fn new(vectors: DMatrix<T>) -> Result<Self, BasesError> {
        linalg::check_square(&vectors)?;
        if !vectors.iter().all(|x| x.re().is_finite() && x.im().is_finite()) {
            return Err(LinalgError::NonFinite.into());
        }
        Ok(Self { vectors })
    }

    /// Ambient (and set) dimension `N`.
    pub fn dim(&self) -> usize {
        self.vectors.nrows()
    }

    /// The vectors as matrix columns.
    pub fn vectors(&self) -> &DMatrix<T> {
        &self.vectors
    }

    /// The overlap operator `M̂ = Σ_j v_j v_j† = V V†` (hermitian, and
    /// positive definite exactly when the vectors are independent).
    pub fn m_hat(&self) -> DMatrix<T> {
        let m = &self.vectors * self.vectors.adjoint();
        (&m + m.adjoint()).scale(0.5)
    }
}

/// The Gram matrix `G_ij = (v_i, v_j)` of a vector set, validated positive
/// definite (the linear-independence gate).
#[derive(Debug, Clone)]
pub struct GramMatrix<T: Scalar> {
    spd: SpdMatrix<T>,
}

impl<T: Scalar> GramMatrix<T> {
    /// The Gram matrix entries.
    pub fn matrix(&self) -> &DMatrix<T> {
        self.spd.matrix()
    }

    /// The validated SPD wrapper (cached eigendecomposition).
    pub fn spd(&self) -> &SpdMatrix<T> {
        &self.spd
    }
}

/// Build and validate the Gram matrix `G = V†V`.
pub fn gram<T: Scalar>(vs: &VectorSet<T>) -> Result<GramMatrix<T>, BasesError> {
    let g = vs.vectors.adjoint() * &vs.vectors;
    let spd = SpdMatrix::new(g).map_err(|e| match e {
        LinalgError::NotPositiveDefinite { min_eig, max_eig } => {
            BasesError::DependentVectors { min_eig, max_eig }
        }
        other => BasesError::Linalg(other),
    })?;
    Ok(GramMatrix { spd })
}

/// The overlap operator expressed in the basis `Z`:
/// `M(z) = Z† M̂ Z` with `M̂ = Σ v_j v_j†`. Hermitian, and positive definite
/// whenever `Z` is invertible.
pub fn m_of_basis<T: Scalar>(
    vs: &VectorSet<T>,
    z: &DMatrix<T>,
) -> Result<DMatrix<T>, BasesError> {
    let n = vs.dim();
    if z.nrows() != n || z.ncols() != n {
        return Err(BasesError::DimensionMismatch {
            expected: n,
            found: z.nrows().max(z.ncols()),
        });
    }
    let m = z.adjoint() * vs.m_hat() * z;
    Ok((&m + m.adjoint()).scale(0.5))
}

/// Which canonical basis a [`BasisResult`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    /// Sequential orthonormalization (order-dependent).
    GramSchmidt,
    /// The quartic-maximizing orthonormal basis.
    SchweinlerWigner,
    /// Pseudo-orthonormal basis for the metric with signature `(m, n)`.
    Lorentz { m: usize, n: usize },
    /// Symplectic basis on `n` mode pairs.
    Symplectic { n: usize },
}

impl BasisKind {
    /// The quadratic form preserved by this kind of basis, if any (the
    /// orthonormal kinds are governed by the full unitary group instead).
    pub fn form(&self) -> Option<Form> {
        match *self {
            BasisKind::GramSchmidt | BasisKind::SchweinlerWigner => None,
            BasisKind::Lorentz { m, n } => Form::metric(m, n).ok(),
            BasisKind::Symplectic { n } => Form::symplectic(n).ok(),
        }
    }
}

/// Diagnostics attached to every constructed basis.
#[derive(Debug, Clone)]
pub struct BasisDiagnostics {
    /// The quartic form `m(z) = Σ_k M(z)_kk²`.
    pub quartic_value: f64,
    /// The minimized structure defect: `tr((M^odd)²)` under the form
    /// involution for the Lorentz/symplectic kinds; the squared off-diagonal
    /// norm `Σ_{j≠k} |M_jk|²` for the orthonormal kinds.
    pub odd_norm: f64,
    /// Diagonal of `M(z)` (real for hermitian `M`).
    pub m_diag: DVector<f64>,
    /// Defining-contract residual: `‖Z†Z − I‖_max` for orthonormal kinds,
    /// the form congruence defect for Lorentz/symplectic kinds.
    pub residual: f64,
    /// Set when the Gram spectrum has a gap below `10⁻⁸·‖G‖`, in which case
    /// the Schweinler–Wigner basis is not unique (any mixing inside the
    /// near-degenerate eigenspace is equally extremal). Always `false` for
    /// the other kinds.
    pub degenerate: bool,
}

/// A constructed basis: columns of `z` are the basis vectors in ambient
/// coordinates.
#[derive(Debug, Clone)]
pub struct BasisResult<T: Scalar> {
    /// Basis vectors as matrix columns.
    pub z: DMatrix<T>,
    /// Which construction produced it.
    pub kind: BasisKind,
    /// Quality and structure diagnostics.
    pub diagnostics: BasisDiagnostics,
}

/// Squared off-diagonal norm `Σ_{j≠k} |M_jk|²`.
fn off_diagonal_norm_sq<T: Scalar>(m: &DMatrix<T>) -> f64 {
    let mut sum = 0.0;
    for j in 0..m.nrows() {
        for k in 0..m.ncols() {
            if j != k {
                sum += m[(j, k)].mag().powi(2);
            }
        }
    }
    sum
}

fn orthonormal_diagnostics<T: Scalar>(
    vs: &VectorSet<T>,
    z: &DMatrix<T>,
    degenerate: bool,
) -> Result<BasisDiagnostics, BasesError> {
    let m_z = m_of_basis(vs, z)?;
    let identity = DMatrix::<T>::identity(z.nrows(), z.ncols());
    Ok(BasisDiagnostics {
        quartic_value: quartic_form(&m_z),
        odd_norm: off_diagonal_norm_sq(&m_z),
        m_diag: m_z.diagonal().map(|x| x.re()),
        residual: linalg::max_abs_diff(&(z.adjoint() * z), &identity),
        degenerate,
    })
}

/// Sequential (modified) Gram–Schmidt orthonormalization.
///
/// The result satisfies `Z†Z = I` and `z_k ∈ span(v₁…v_k)`; equivalently
/// `Z = V·S` with `S` upper triangular and `S†GS = I`. The output depends on
/// the input order — reordering the vectors produces a genuinely different
/// basis, which is the defect the Schweinler–Wigner construction removes.
pub fn gram_schmidt<T: Scalar>(vs: &VectorSet<T>) -> Result<BasisResult<T>, BasesError> {
    gram(vs)?; // linear-independence gate
    let n = vs.dim();
    let mut z = vs.vectors.clone();
    for k in 0..n {
        for j in 0..k {
            let zj = z.column(j).clone_owned();
            let coeff = zj.dotc(&z.column(k));
            let update = zj.map(|x| x * coeff);
            let mut col = z.column_mut(k);
            col -= update;
        }
        let norm = z.column(k).norm();
        if !(norm > 0.0) {
            return Err(BasesError::DependentVectors {
                min_eig: 0.0,
                max_eig: 1.0,
            });
        }
        let scale = T::from_re_im(1.0 / norm, 0.0);
        for x in z.column_mut(k).iter_mut() {
            *x *= scale;
        }
    }
    let diagnostics = orthonormal_diagnostics(vs, &z, false)?;
    Ok(BasisResult {
        z,
        kind: BasisKind::GramSchmidt,
        diagnostics,
    })
}

/// The Schweinler–Wigner basis `Z = V U₀ P^{−1/2}`, where `U₀† G U₀ = P`
/// diagonalizes the Gram matrix (eigenvalues ascending).
///
/// `Z` is orthonormal, treats the input vectors democratically (permuting
/// them permutes nothing but column order/phases), diagonalizes the overlap
/// operator — `M(z) = P` — and maximizes the quartic form `m(z)` over all
/// orthonormal bases of the span, with maximal value `tr(G²)`.
pub fn schweinler_wigner<T: Scalar>(vs: &VectorSet<T>) -> Result<BasisResult<T>, BasesError> {
    let g = gram(vs)?;
    let eig = g.spd().eigen();
    let n = vs.dim();
    let mut min_gap = f64::MAX;
    for k in 1..n {
        min_gap = min_gap.min(eig.values[k] - eig.values[k - 1]);
    }
    let degenerate = n > 1 && min_gap < tol::DEGENERATE_GAP * linalg::max_abs(g.matrix());

    let p_inv_half = DMatrix::<T>::from_fn(n, n, |i, j| {
        if i == j {
            T::from_re_im(eig.values[i].powf(-0.5), 0.0)
        } else {
            T::zero()
        }
    });
    let z = &vs.vectors * &eig.vectors * p_inv_half;
    let diagnostics = orthonormal_diagnostics(vs, &z, degenerate)?;
    Ok(BasisResult {
        z,
        kind: BasisKind::SchweinlerWigner,
        diagnostics,
    })
}

fn congruence_basis<T: Scalar>(
    vs: &VectorSet<T>,
    result: Result<crate::congruence::CongruenceResult<T>, CongruenceError>,
    kind: BasisKind,
) -> Result<BasisResult<T>, BasesError> {
    let res = result.map_err(|e| match e {
        CongruenceError::Linalg(LinalgError::NotPositiveDefinite { min_eig, max_eig }) => {
            BasesError::DependentVectors { min_eig, max_eig }
        }
        other => BasesError::Congruence(other),
    })?;
    let form = kind.form().expect("congruence kinds carry a form");
    let z = res.s;
    let m_z = m_of_basis(vs, &z)?;
    let diagnostics = BasisDiagnostics {
        quartic_value: quartic_form(&m_z),
        odd_norm: even_odd_split(&m_z, &form)?.odd_norm(),
        m_diag: m_z.diagonal().map(|x| x.re()),
        residual: res.residuals.form_residual,
        degenerate: false,
    };
    Ok(BasisResult {
        z,
        kind,
        diagnostics,
    })
}

/// A Lorentz (pseudo-orthonormal) basis for the signature-(m, n) metric:
/// `Z† g Z = g` and `M(z) = Z† M̂ Z` diagonal positive, so the odd part of
/// `M(z)` vanishes. Works over both fields (the group is `SO(m,n)` for real
/// input and `SU(m,n)` for complex input).
pub fn lorentz_basis<T: Scalar>(
    vs: &VectorSet<T>,
    m: usize,
    n: usize,
) -> Result<BasisResult<T>, BasesError> {
    congruence_basis(
        vs,
        pseudo_congruence(&vs.m_hat(), m, n),
        BasisKind::Lorentz { m, n },
    )
}

/// A symplectic basis: `Zᵀ β Z = β` and `M(z) = diag(κ₁…κ_n, κ₁…κ_n)`.
pub fn symplectic_basis<T: Scalar>(vs: &VectorSet<T>) -> Result<BasisResult<T>, BasesError> {
    if vs.dim() % 2 != 0 {
        return Err(LinalgError::OddDimension { dim: vs.dim() }.into());
    }
    let n = vs.dim() / 2;
    congruence_basis(vs, williamson(&vs.m_hat()), BasisKind::Symplectic { n })
}

/// Numerical evidence that a basis realizes its extremum principle.
#[derive(Debug, Clone)]
pub struct AuditReport {
    /// Quartic value of the audited basis.
    pub baseline_quartic: f64,
    /// Quartic values after random compact-subgroup perturbations; the
    /// extremum principle says none exceeds the baseline.
    pub perturbed_quartics: Vec<f64>,
    /// Odd-part norm of the audited basis (off-diagonal norm² for the
    /// orthonormal kinds).
    pub odd_norm_baseline: f64,
    /// Odd-part norms after general group perturbations; none goes below
    /// the baseline.
    pub odd_norms_perturbed: Vec<f64>,
    /// Maximal relative drift of the group invariant `tr((J M)²)` (or
    /// `tr(M²)` for orthonormal kinds) across every perturbation.
    pub invariant_drift: f64,
    /// Quartic values along a deterministic noncompact one-parameter family
    /// (boost in the leading mixed plane, or squeeze of the leading mode),
    /// sampled at increasing parameter values. Monotonically nondecreasing,
    /// demonstrating that the quartic form is unbounded above on the full
    /// group orbit. Empty for the orthonormal kinds (their group is compact)
    /// and for definite metrics.
    pub growth_curve: Vec<f64>,
}

/// Number of samples on the audit growth curve.
const GROWTH_POINTS: usize = 9;

fn perturbation<T: Scalar, R: Rng + ?Sized>(
    kind: &BasisKind,
    dim: usize,
    group_kind: GroupElementKind,
    rng: &mut R,
) -> DMatrix<T> {
    match kind.form() {
        Some(form) => sample_group_element(&form, group_kind, rng),
        None => match T::FIELD {
            Field::Real => random_orthogonal(dim, rng).map(|x| T::from_re_im(x, 0.0)),
            Field::Complex => {
                random_unitary(dim, rng).map(|c| T::from_re_im(c.re, c.im))
            }
        },
    }
}

/// The relevant quadratic invariant of `M` for a basis kind: `tr((J M)²)`
/// under the kind's form, or `tr(M²)` for the orthonormal kinds.
fn kind_invariant<T: Scalar>(m: &DMatrix<T>, kind: &BasisKind) -> Result<f64, BasesError> {
    match kind.form() {
        Some(form) => Ok(crate::forms::invariant_trace(m, &form, 2)?),
        None => Ok((m * m).trace().re()),
    }
}

fn odd_norm_of<T: Scalar>(m: &DMatrix<T>, kind: &BasisKind) -> Result<f64, BasesError> {
    match kind.form() {
        Some(form) => Ok(even_odd_split(m, &form)?.odd_norm()),
        None => Ok(off_diagonal_norm_sq(m)),
    }
}

/// A deterministic noncompact element at parameter `mu ≥ 0` for the kind's
/// group: a boost in the plane of the first positive and first negative
/// metric directions, or a squeeze of the first mode pair. `None` when the
/// group has no noncompact directions.
fn growth_element<T: Scalar>(kind: &BasisKind, mu: f64) -> Option<DMatrix<T>> {
    match *kind {
        BasisKind::Lorentz { m, n } if m > 0 && n > 0 => {
            let dim = m + n;
            let mut s = DMatrix::<T>::identity(dim, dim);
            s[(0, 0)] = T::from_re_im(mu.cosh(), 0.0);
            s[(m, m)] = T::from_re_im(mu.cosh(), 0.0);
            s[(0, m)] = T::from_re_im(mu.sinh(), 0.0);
            s[(m, 0)] = T::from_re_im(mu.sinh(), 0.0);
            Some(s)
        }
        BasisKind::Symplectic { n } => {
            let mut s = DMatrix::<T>::identity(2 * n, 2 * n);
            s[(0, 0)] = T::from_re_im(mu.exp(), 0.0);
            s[(n, n)] = T::from_re_im((-mu).exp(), 0.0);
            Some(s)
        }
        _ => None,
    }
}

/// Audit the extremum principle for `basis` against `trials` random
/// perturbations (seeded, reproducible; trial `t` uses an RNG derived from
/// `seed` and `t` only, so trials are order-independent).
pub fn extremum_audit<T: Scalar>(
    vs: &VectorSet<T>,
    basis: &BasisResult<T>,
    trials: usize,
    seed: u64,
) -> Result<AuditReport, BasesError> {
    if basis.z.nrows() != vs.dim() || basis.z.ncols() != vs.dim() {
        return Err(BasesError::KindMismatch {
            basis_dim: basis.z.nrows().max(basis.z.ncols()),
            vectors_dim: vs.dim(),
        });
    }
    let dim = vs.dim();
    let m_z = m_of_basis(vs, &basis.z)?;
    let baseline_quartic = quartic_form(&m_z);
    let odd_norm_baseline = odd_norm_of(&m_z, &basis.kind)?;
    let invariant_baseline = kind_invariant(&m_z, &basis.kind)?;
    let invariant_scale = invariant_baseline.abs().max(1.0);

    let mut perturbed_quartics = Vec::with_capacity(trials);
    let mut odd_norms_perturbed = Vec::with_capacity(trials);
    let mut invariant_drift = 0.0f64;

    for trial in 0..trials {
        let trial_seed = seed.wrapping_add((trial as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);

        let s_c: DMatrix<T> = perturbation(&basis.kind, dim, GroupElementKind::Compact, &mut rng);
        let m_compact = s_c.adjoint() * &m_z * &s_c;
        perturbed_quartics.push(quartic_form(&m_compact));
        invariant_drift = invariant_drift.max(
            (kind_invariant(&m_compact, &basis.kind)? - invariant_baseline).abs()
                / invariant_scale,
        );

        let s_g: DMatrix<T> = perturbation(&basis.kind, dim, GroupElementKind::General, &mut rng);
        let m_general = s_g.adjoint() * &m_z * &s_g;
        odd_norms_perturbed.push(odd_norm_of(&m_general, &basis.kind)?);
        invariant_drift = invariant_drift.max(
            (kind_invariant(&m_general, &basis.kind)? - invariant_baseline).abs()
                / invariant_scale,
        );
    }

    let mut growth_curve = Vec::new();
    for j in 0..GROWTH_POINTS {
        let mu = tol::NONCOMPACT_MU_MAX * j as f64 / (GROWTH_POINTS - 1) as f64;
        match growth_element::<T>(&basis.kind, mu) {
            Some(s) => {
                let m_mu = s.adjoint() * &m_z * &s;
                growth_curve.push(quartic_form(&m_mu));
            }
            None => break,
        }
    }

    Ok(AuditReport {
        baseline_quartic,
        perturbed_quartics,
        odd_norm_baseline,
        odd_norms_perturbed,
        invariant_drift,
        growth_curve,
    })
}

/// The two closed-form unbounded-growth families for `2×2` overlap matrices
/// `M = diag(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoncompactFamily {
    /// Hyperbolic boosts in `SO(1,1)`.
    So11,
    /// Squeezes in `Sp(2, R)`.
    Sp2,
}

/// Quartic value of `diag(a, b)` transported along a noncompact family.
///
/// * `So11`: the boost `S = [[cosh μ, sinh μ], [sinh μ, cosh μ]]` gives
///   diagonal entries `(a cosh²μ + b sinh²μ, a sinh²μ + b cosh²μ)`, hence
///   `m(z) = a² + b² + 2 (a+b)² sinh²μ cosh²μ`.
/// * `Sp2`: the squeeze `S = diag(√|μ|, 1/√|μ|)` (an `Sp(2, R)` element for
///   any `μ ≠ 0`) gives `m(z) = μ² a² + b²/μ²`.
///
/// Both families grow without bound as `|μ| → ∞`, which is why the quartic
/// form is only extremized over the *compact* subgroup after the odd part
/// has been removed. The value is computed from the closed form and from the
/// explicit congruence, and the two routes are asserted to agree.
pub fn unboundedness_demo(
    a: f64,
    b: f64,
    mu: f64,
    family: NoncompactFamily,
) -> Result<f64, BasesError> {
    assert!(a > 0.0 && b > 0.0, "weights must be positive");
    let m = DMatrix::<f64>::from_diagonal(&DVector::from_vec(vec![a, b]));
    let (formula, s) = match family {
        NoncompactFamily::So11 => {
            let sc = mu.sinh() * mu.cosh();
            let formula = a * a + b * b + 2.0 * (a + b) * (a + b) * sc * sc;
            let s = nalgebra::dmatrix![mu.cosh(), mu.sinh(); mu.sinh(), mu.cosh()];
            (formula, s)
        }
        NoncompactFamily::Sp2 => {
            if mu == 0.0 {
                return Err(BasesError::ZeroParameter);
            }
            let formula = mu * mu * a * a + b * b / (mu * mu);
            let r = mu.abs().sqrt();
            let s = nalgebra::dmatrix![r, 0.0; 0.0, 1.0 / r];
            (formula, s)
        }
    };
    let congruence_route = quartic_form(&(s.transpose() * &m * &s));
    let scale = formula.abs().max(1.0);
    assert!(
        (formula - congruence_route).abs() <= 1e-10 * scale,
        "closed form {formula} disagrees with congruence route {congruence_route}"
    );
    Ok(congruence_route)
}

/// Random square vector set with independent Gaussian entries, regenerated
/// until the Gram matrix passes the SPD check (near-certain on the first
/// draw; the loop only guards against freak rank deficiency).
pub fn random_vector_set<T: Scalar, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> VectorSet<T> {
    assert!(dim >= 1, "dimension must be positive");
    loop {
        let v = DMatrix::<T>::from_fn(dim, dim, |_, _| match T::FIELD {
            Field::Real => T::from_re_im(rng.sample::<f64, _>(StandardNormal), 0.0),
            Field::Complex => T::from_re_im(
                rng.sample::<f64, _>(StandardNormal),
                rng.sample::<f64, _>(StandardNormal),
            ),
        });
        let g = v.adjoint() * &v;
        if check_spd(&g, tol::PD_FLOOR).is_spd {
            return VectorSet::new(v).expect("generated square finite matrix");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use nalgebra::dmatrix;
    use num_complex::Complex64;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn vs2() -> VectorSet<f64> {
        // v₁ = (1,0), v₂ = (1,1).
        VectorSet::new(dmatrix![1.0, 1.0; 0.0, 1.0]).unwrap()
    }

    fn vector_set_with_m_hat(m_hat: &DMatrix<f64>) -> VectorSet<f64> {
        // V = M̂^{1/2} has V V† = M̂.
        let spd = SpdMatrix::new(m_hat.clone()).unwrap();
        VectorSet::new(crate::linalg::spd_power(&spd, 0.5)).unwrap()
    }

    #[test]
    fn gram_examples() {
        let std3 = VectorSet::new(DMatrix::<f64>::identity(3, 3)).unwrap();
        assert_eq!(gram(&std3).unwrap().matrix(), &DMatrix::identity(3, 3));

        let g = gram(&vs2()).unwrap();
        assert!(max_abs_diff(g.matrix(), &dmatrix![1.0, 1.0; 1.0, 2.0]) < 1e-15);
    }

    #[test]
    fn gram_rejects_dependent_vectors() {
        let dependent = VectorSet::new(dmatrix![1.0, 2.0; 1.0, 2.0]).unwrap();
        match gram(&dependent) {
            Err(BasesError::DependentVectors { .. }) => {}
            other => panic!("expected DependentVectors, got {other:?}"),
        }
    }

    #[test]
    fn m_of_basis_examples() {
        let std2 = VectorSet::new(DMatrix::<f64>::identity(2, 2)).unwrap();
        let m = m_of_basis(&std2, &DMatrix::identity(2, 2)).unwrap();
        assert!(max_abs_diff(&m, &DMatrix::identity(2, 2)) < 1e-15);

        let m = m_of_basis(&vs2(), &DMatrix::identity(2, 2)).unwrap();
        assert!(max_abs_diff(&m, &dmatrix![2.0, 1.0; 1.0, 1.0]) < 1e-15);

        match m_of_basis(&vs2(), &DMatrix::identity(3, 3)) {
            Err(BasesError::DimensionMismatch {
                expected: 2,
                found: 3,
            }) => {}
            other => panic!("expected DimensionMismatch, got {other:?}"),
        }
    }

    #[test]
    fn gram_and_overlap_operator_share_their_spectrum() {
        let mut r = rng(5);
        let vs: VectorSet<f64> = random_vector_set(5, &mut r);
        let g_eig = gram(&vs).unwrap().spd().eigen().values.clone();
        let m_hat = SpdMatrix::new(vs.m_hat()).unwrap();
        let m_eig = m_hat.eigen().values.clone();
        for k in 0..5 {
            assert!(
                (g_eig[k] - m_eig[k]).abs() <= 1e-8 * m_eig[k].max(1.0),
                "eigenvalue {k}: {} vs {}",
                g_eig[k],
                m_eig[k]
            );
        }
    }

    #[test]
    fn gram_schmidt_examples() {
        // Orthonormal input passes through unchanged.
        let std3 = VectorSet::new(DMatrix::<f64>::identity(3, 3)).unwrap();
        let b = gram_schmidt(&std3).unwrap();
        assert!(max_abs_diff(&b.z, &DMatrix::identity(3, 3)) < 1e-15);
        assert!(b.diagnostics.residual < 1e-15);

        // (1,0), (1,1) orthonormalizes to the standard basis.
        let b = gram_schmidt(&vs2()).unwrap();
        assert!(max_abs_diff(&b.z, &DMatrix::identity(2, 2)) < 1e-14);

        // Reversing the input order produces a different basis.
        let reversed = VectorSet::new(dmatrix![1.0, 1.0; 1.0, 0.0]).unwrap();
        let b_rev = gram_schmidt(&reversed).unwrap();
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        assert!((b_rev.z[(0, 0)] - inv_sqrt2).abs() < 1e-14);
        assert!((b_rev.z[(1, 0)] - inv_sqrt2).abs() < 1e-14);
        assert!(max_abs_diff(&b_rev.z, &b.z) > 0.5);
    }

    #[test]
    fn gram_schmidt_transform_is_upper_triangular_and_whitens_gram() {
        let mut r = rng(8);
        let vs: VectorSet<f64> = random_vector_set(4, &mut r);
        let b = gram_schmidt(&vs).unwrap();
        // S = V⁻¹ Z must be upper triangular with S†GS = I.
        let s = vs
            .vectors()
            .clone()
            .lu()
            .solve(&b.z)
            .expect("independent vectors are invertible");
        for i in 0..4 {
            for j in 0..i {
                assert!(s[(i, j)].abs() < 1e-10, "S[({i},{j})] = {}", s[(i, j)]);
            }
        }
        let g = gram(&vs).unwrap();
        let whitened = s.adjoint() * g.matrix() * &s;
        assert!(max_abs_diff(&whitened, &DMatrix::identity(4, 4)) < 1e-10);
    }

    #[test]
    fn schweinler_wigner_small_example() {
        let b = schweinler_wigner(&vs2()).unwrap();
        // m(z) = tr(G²) = 7 for G = [[1,1],[1,2]].
        assert!((b.diagnostics.quartic_value - 7.0).abs() < 1e-10);
        assert!(b.diagnostics.residual < 1e-12);
        assert!(b.diagnostics.odd_norm < 1e-12);
        // M(z) = P ascending.
        assert!(b.diagnostics.m_diag[0] <= b.diagnostics.m_diag[1]);
        assert!(!b.diagnostics.degenerate);
    }

    #[test]
    fn schweinler_wigner_on_standard_basis_is_identity_and_degenerate() {
        let std4 = VectorSet::new(DMatrix::<f64>::identity(4, 4)).unwrap();
        let b = schweinler_wigner(&std4).unwrap();
        assert!(max_abs_diff(&b.z, &DMatrix::identity(4, 4)) < 1e-12);
        assert!((b.diagnostics.quartic_value - 4.0).abs() < 1e-12);
        assert!(b.diagnostics.degenerate, "G = I is fully degenerate");
    }

    #[test]
    fn schweinler_wigner_diagonalizes_and_maximizes() {
        let mut r = rng(21);
        for dim in [3usize, 5] {
            let vs: VectorSet<f64> = random_vector_set(dim, &mut r);
            let b = schweinler_wigner(&vs).unwrap();
            let g = gram(&vs).unwrap();
            let tr_g2 = (g.matrix() * g.matrix()).trace();
            assert!(
                (b.diagnostics.quartic_value - tr_g2).abs() <= 1e-8 * tr_g2,
                "m(z) = {} vs tr(G²) = {}",
                b.diagnostics.quartic_value,
                tr_g2
            );
            let m_z = m_of_basis(&vs, &b.z).unwrap();
            assert!(off_diagonal_norm_sq(&m_z) < 1e-16 * tr_g2);
            // Maximality against 100 random orthogonal mixings.
            for t in 0..100u64 {
                let mut r2 = rng(1000 + t);
                let u = random_orthogonal(dim, &mut r2);
                let mixed = u.transpose() * &m_z * &u;
                assert!(
                    quartic_form(&mixed) <= b.diagnostics.quartic_value + 1e-8 * tr_g2,
                    "trial {t} exceeded the maximum"
                );
            }
        }
    }

    #[test]
    fn schweinler_wigner_complex_field() {
        let mut r = rng(33);
        let vs: VectorSet<Complex64> = random_vector_set(4, &mut r);
        let b = schweinler_wigner(&vs).unwrap();
        assert!(b.diagnostics.residual < 1e-10);
        assert!(b.diagnostics.odd_norm < 1e-16 * b.diagnostics.quartic_value);
        let g = gram(&vs).unwrap();
        let tr_g2 = (g.matrix() * g.matrix()).trace().re;
        assert!((b.diagnostics.quartic_value - tr_g2).abs() <= 1e-8 * tr_g2);
    }

    #[test]
    fn schweinler_wigner_is_order_independent() {
        let mut r = rng(44);
        let vs: VectorSet<f64> = random_vector_set(4, &mut r);
        let b = schweinler_wigner(&vs).unwrap();
        assert!(!b.diagnostics.degenerate, "test needs distinct eigenvalues");

        // Permute the input vectors.
        let v = vs.vectors();
        let perm = [2usize, 0, 3, 1];
        let mut shuffled = DMatrix::<f64>::zeros(4, 4);
        for (new_col, &old_col) in perm.iter().enumerate() {
            shuffled.set_column(new_col, &v.column(old_col));
        }
        let b2 = schweinler_wigner(&VectorSet::new(shuffled).unwrap()).unwrap();

        // Same basis up to column order and sign.
        for k in 0..4 {
            let col2 = b2.z.column(k);
            let matched = (0..4).any(|j| {
                let col = b.z.column(j);
                let diff_plus: f64 = (col2 - col).norm();
                let diff_minus: f64 = (col2 + col).norm();
                diff_plus.min(diff_minus) < 1e-8
            });
            assert!(matched, "column {k} has no ± match");
        }
    }

    #[test]
    fn orthonormalizer_freedom_under_unitary_mixing() {
        let mut r = rng(55);
        let vs: VectorSet<f64> = random_vector_set(4, &mut r);
        let g = gram(&vs).unwrap();
        for basis in [gram_schmidt(&vs).unwrap(), schweinler_wigner(&vs).unwrap()] {
            let s = vs.vectors().clone().lu().solve(&basis.z).unwrap();
            let whitened = s.adjoint() * g.matrix() * &s;
            assert!(max_abs_diff(&whitened, &DMatrix::identity(4, 4)) < 1e-8);
            for t in 0..20u64 {
                let mut r2 = rng(7000 + t);
                let u = random_orthogonal(4, &mut r2);
                let su = &s * &u;
                let whitened = su.adjoint() * g.matrix() * &su;
                assert!(
                    max_abs_diff(&whitened, &DMatrix::identity(4, 4)) < 1e-8,
                    "trial {t}"
                );
            }
        }
    }

    #[test]
    fn lorentz_basis_examples() {
        // Standard basis: already canonical for every partition.
        let std3 = VectorSet::new(DMatrix::<f64>::identity(3, 3)).unwrap();
        let b = lorentz_basis(&std3, 2, 1).unwrap();
        assert!(max_abs_diff(&b.z, &DMatrix::identity(3, 3)) < 1e-12);
        assert!(b.diagnostics.m_diag.iter().all(|&x| (x - 1.0).abs() < 1e-12));

        // M̂ = [[2,1],[1,2]] with signature (1,1): M(z) = diag(√3, √3).
        let vs = vector_set_with_m_hat(&dmatrix![2.0, 1.0; 1.0, 2.0]);
        let b = lorentz_basis(&vs, 1, 1).unwrap();
        let rt3 = 3.0f64.sqrt();
        assert!((b.diagnostics.m_diag[0] - rt3).abs() < 1e-10);
        assert!((b.diagnostics.m_diag[1] - rt3).abs() < 1e-10);
        assert!(b.diagnostics.residual < 1e-10);
        assert!(b.diagnostics.odd_norm < 1e-20);
    }

    #[test]
    fn lorentz_basis_complex_field() {
        let mut r = rng(66);
        let vs: VectorSet<Complex64> = random_vector_set(4, &mut r);
        let b = lorentz_basis(&vs, 2, 2).unwrap();
        let g = Form::metric(2, 2).unwrap().matrix::<Complex64>();
        let back = b.z.adjoint() * &g * &b.z;
        assert!(max_abs_diff(&back, &g) < 1e-9);
        let m_hat_norm = crate::linalg::max_abs(&vs.m_hat());
        assert!(b.diagnostics.odd_norm <= 1e-10 * m_hat_norm * m_hat_norm);
    }

    #[test]
    fn symplectic_basis_examples() {
        let std2 = VectorSet::new(DMatrix::<f64>::identity(2, 2)).unwrap();
        let b = symplectic_basis(&std2).unwrap();
        assert!(max_abs_diff(&b.z, &DMatrix::identity(2, 2)) < 1e-12);
        assert!((b.diagnostics.m_diag[0] - 1.0).abs() < 1e-12);

        let vs = vector_set_with_m_hat(&dmatrix![1.0, 0.0; 0.0, 4.0]);
        let b = symplectic_basis(&vs).unwrap();
        assert!((b.diagnostics.m_diag[0] - 2.0).abs() < 1e-10);
        assert!((b.diagnostics.m_diag[1] - 2.0).abs() < 1e-10);

        let odd = VectorSet::new(DMatrix::<f64>::identity(3, 3)).unwrap();
        match symplectic_basis(&odd) {
            Err(BasesError::Linalg(LinalgError::OddDimension { dim: 3 })) => {}
            other => panic!("expected OddDimension, got {other:?}"),
        }
    }

    #[test]
    fn symplectic_basis_random_contracts() {
        let mut r = rng(77);
        let vs: VectorSet<f64> = random_vector_set(6, &mut r);
        let b = symplectic_basis(&vs).unwrap();
        assert!(b.diagnostics.residual < 1e-9);
        let m_hat_norm = crate::linalg::max_abs(&vs.m_hat());
        assert!(b.diagnostics.odd_norm <= 1e-10 * m_hat_norm * m_hat_norm);
        // Paired diagonal, descending κ.
        let d = &b.diagnostics.m_diag;
        for k in 0..3 {
            assert!((d[k] - d[3 + k]).abs() <= 1e-8 * d[k].max(1.0));
        }
        assert!(d[0] >= d[1] && d[1] >= d[2]);
    }

    #[test]
    fn audit_confirms_two_step_extremum_for_lorentz() {
        let mut r = rng(88);
        let vs: VectorSet<f64> = random_vector_set(4, &mut r);
        let b = lorentz_basis(&vs, 2, 2).unwrap();
        let report = extremum_audit(&vs, &b, 60, 4242).unwrap();
        let scale = report.baseline_quartic.max(1.0);
        for (t, &q) in report.perturbed_quartics.iter().enumerate() {
            assert!(
                q <= report.baseline_quartic + 1e-8 * scale,
                "compact trial {t}: {q} > {}",
                report.baseline_quartic
            );
        }
        for (t, &o) in report.odd_norms_perturbed.iter().enumerate() {
            assert!(
                o >= report.odd_norm_baseline - 1e-8 * scale,
                "general trial {t}: odd norm {o} below baseline"
            );
        }
        assert!(report.invariant_drift <= 1e-8);
        // Growth curve: nondecreasing, and strictly growing at the end.
        for w in report.growth_curve.windows(2) {
            assert!(w[1] >= w[0] - 1e-10 * scale);
        }
        assert!(report.growth_curve.last().unwrap() > &(report.baseline_quartic + 1.0));
    }

    #[test]
    fn audit_confirms_two_step_extremum_for_symplectic() {
        let mut r = rng(99);
        let vs: VectorSet<f64> = random_vector_set(4, &mut r);
        let b = symplectic_basis(&vs).unwrap();
        let report = extremum_audit(&vs, &b, 60, 777).unwrap();
        let scale = report.baseline_quartic.max(1.0);
        for &q in &report.perturbed_quartics {
            assert!(q <= report.baseline_quartic + 1e-8 * scale);
        }
        for &o in &report.odd_norms_perturbed {
            assert!(o >= report.odd_norm_baseline - 1e-8 * scale);
        }
        assert!(report.invariant_drift <= 1e-8);
        for w in report.growth_curve.windows(2) {
            assert!(w[1] >= w[0] - 1e-10 * scale);
        }
    }

    #[test]
    fn audit_of_schweinler_wigner_has_compact_group_only() {
        let mut r = rng(111);
        let vs: VectorSet<f64> = random_vector_set(4, &mut r);
        let b = schweinler_wigner(&vs).unwrap();
        let report = extremum_audit(&vs, &b, 40, 31).unwrap();
        let scale = report.baseline_quartic.max(1.0);
        for &q in &report.perturbed_quartics {
            assert!(q <= report.baseline_quartic + 1e-8 * scale);
        }
        for &o in &report.odd_norms_perturbed {
            assert!(o >= report.odd_norm_baseline - 1e-8 * scale);
        }
        assert!(report.invariant_drift <= 1e-8);
        assert!(report.growth_curve.is_empty());
    }

    #[test]
    fn audit_on_identity_overlap_is_flat() {
        let std3 = VectorSet::new(DMatrix::<f64>::identity(3, 3)).unwrap();
        let b = schweinler_wigner(&std3).unwrap();
        let report = extremum_audit(&std3, &b, 25, 5).unwrap();
        assert!((report.baseline_quartic - 3.0).abs() < 1e-12);
        for &q in &report.perturbed_quartics {
            assert!((q - 3.0).abs() < 1e-10, "M̂ = I must be perturbation-flat");
        }
    }

    #[test]
    fn audit_rejects_foreign_basis() {
        let mut r = rng(13);
        let vs3: VectorSet<f64> = random_vector_set(3, &mut r);
        let vs4: VectorSet<f64> = random_vector_set(4, &mut r);
        let b4 = schweinler_wigner(&vs4).unwrap();
        match extremum_audit(&vs3, &b4, 5, 1) {
            Err(BasesError::KindMismatch {
                basis_dim: 4,
                vectors_dim: 3,
            }) => {}
            other => panic!("expected KindMismatch, got {other:?}"),
        }
    }

    #[test]
    fn unboundedness_demo_so11() {
        // μ = 0: the identity boost leaves a² + b².
        let q0 = unboundedness_demo(1.3, 0.7, 0.0, NoncompactFamily::So11).unwrap();
        assert!((q0 - (1.3f64.powi(2) + 0.7f64.powi(2))).abs() < 1e-12);
        // Strict growth in |μ| and sign symmetry.
        let q1 = unboundedness_demo(1.3, 0.7, 1.0, NoncompactFamily::So11).unwrap();
        let q2 = unboundedness_demo(1.3, 0.7, 2.0, NoncompactFamily::So11).unwrap();
        assert!(q2 > q1 && q1 > q0);
        let qm1 = unboundedness_demo(1.3, 0.7, -1.0, NoncompactFamily::So11).unwrap();
        assert!((q1 - qm1).abs() < 1e-12);
    }

    #[test]
    fn unboundedness_demo_sp2() {
        // a = b = 1, μ = 2 → 4 + 1/4.
        let q = unboundedness_demo(1.0, 1.0, 2.0, NoncompactFamily::Sp2).unwrap();
        assert!((q - 4.25).abs() < 1e-12);
        match unboundedness_demo(1.0, 1.0, 0.0, NoncompactFamily::Sp2) {
            Err(BasesError::ZeroParameter) => {}
            other => panic!("expected ZeroParameter, got {other:?}"),
        }
        // Monotone growth for μ ≥ 1 when a ≥ b.
        let q1 = unboundedness_demo(1.5, 0.5, 1.0, NoncompactFamily::Sp2).unwrap();
        let q15 = unboundedness_demo(1.5, 0.5, 1.5, NoncompactFamily::Sp2).unwrap();
        let q2 = unboundedness_demo(1.5, 0.5, 2.0, NoncompactFamily::Sp2).unwrap();
        assert!(q2 > q15 && q15 > q1);
    }
}
