//! Canonical congruence forms of positive definite matrices.
//!
//! A positive definite matrix `V` can be brought to a canonical diagonal form
//! not only by rotations but by congruence with elements of the non-compact
//! classical groups that preserve an indefinite metric or a symplectic form:
//!
//! * `S† V S = D²` with `S` pseudo-orthogonal / pseudo-unitary (signature `(m, n)`),
//! * `Sᵀ V S = diag(κ₁..κ_n, κ₁..κ_n)` with `S` symplectic (Williamson form).
//!
//! On top of the matrix-level decompositions the crate builds distinguished
//! bases for a set of linearly independent vectors (orthonormal, Lorentz and
//! symplectic variants) characterised by a two-step extremum principle:
//! minimise the odd part of the overlap matrix over the full group, then
//! maximise the sum of squared diagonal entries over the maximal compact
//! subgroup. Audit routines verify both steps numerically, and a small CLI
//! (`canon`) exposes generation, decomposition and verification round trips.

pub mod bases;
pub mod cli;
pub mod congruence;
pub mod forms;
pub mod io;
pub mod linalg;
pub mod scalar;
pub mod tol;

pub use scalar::Scalar;
