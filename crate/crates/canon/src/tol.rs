//! Centralised numerical tolerances.
//!
//! Every tolerance used by the kernels lives here with its rationale, so the
//! trade-offs are auditable in one place and tests can reference the same
//! constants the implementation uses. All tolerances are relative unless
//! stated otherwise.

/// Hermiticity / symmetry gate: `A` counts as hermitian when
/// `‖A − A†‖_max ≤ SYM_REL · ‖A‖_max`. At double precision a handful of
/// products leaves asymmetry of order `1e-15`; `1e-10` accepts that while
/// rejecting genuinely lopsided inputs.
pub const SYM_REL: f64 = 1e-10;

/// Eigen-reconstruction budget per dimension: `‖QΛQ† − A‖_max` must stay
/// below `EIG_PER_DIM · N · ‖A‖_max`. The QL/QR sweep loses roughly one digit
/// per order of magnitude in `N`, hence the linear scaling.
pub const EIG_PER_DIM: f64 = 1e-9;

/// Positive-definiteness floor: the smallest eigenvalue must exceed
/// `PD_FLOOR · λ_max`. Anything below is indistinguishable from a singular
/// matrix after the `V^{±1/2}` powers the decompositions take.
pub const PD_FLOOR: f64 = 1e-12;

/// Default residual tolerance for group-membership and congruence checks,
/// e.g. `‖S†JS − J‖_max` and off-diagonal remainders relative to `‖V‖`.
pub const RESIDUAL: f64 = 1e-8;

/// Condition number of the input above which results are flagged as ill
/// conditioned (reported, not fatal: the decomposition still runs).
pub const COND_WARN: f64 = 1e12;

/// Relative eigenvalue gap below which a spectrum is reported degenerate,
/// e.g. the Gram spectrum in the extremal orthonormal basis.
pub const DEGENERATE_GAP: f64 = 1e-8;

/// Default half-width of the parameter range for non-compact (boost /
/// squeeze) group sampling. `cosh(2) ≈ 3.76` keeps sampled elements far from
/// identity without drowning residuals in amplification.
pub const NONCOMPACT_MU_MAX: f64 = 2.0;
