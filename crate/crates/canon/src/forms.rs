//! Quadratic form descriptors and form-aware matrix functionals.
//!
//! Two families of forms drive everything in this crate:
//!
//! * the indefinite metric `g = diag(1…1, −1…−1)` with signature `(m, n)`,
//!   preserved by the pseudo-orthogonal / pseudo-unitary groups, and
//! * the symplectic form `β = [[0, I], [−I, 0]]` of dimension `2n`,
//!   preserved by the (real or complex) symplectic group.
//!
//! The form matrix `J` acts as an involution on overlap matrices:
//! `M ↦ J M Jᵀ` splits any `M` into an even part (commuting with the
//! structure) and an odd part (anticommuting). Traces of powers `tr((J·M)^l)`
//! are invariant under the corresponding group congruence and serve as
//! cross-checks; the quartic form `Σ_k (M_kk)²` is the functional maximised
//! by the extremal bases.

use nalgebra::DMatrix;
use thiserror::Error;

use crate::scalar::Scalar;
use crate::tol;

/// Errors from form construction and form-aware functionals.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormsError {
    /// A form needs at least one dimension.
    #[error("form dimension must be positive")]
    ZeroDimension,
    /// Matrix dimension does not match the form dimension.
    #[error("matrix dimension {matrix_dim} does not match form dimension {form_dim}")]
    DimensionMismatch { matrix_dim: usize, form_dim: usize },
}

/// The indefinite metric `g = diag(+1 × m, −1 × n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MetricG {
    m: usize,
    n: usize,
}

impl MetricG {
    /// Metric with `m` positive and `n` negative directions. At least one
    /// dimension must be present; either count may be zero (the definite
    /// cases, whose symmetry group is the plain orthogonal/unitary group).
    pub fn new(m: usize, n: usize) -> Result<Self, FormsError> {
        if m + n == 0 {
            return Err(FormsError::ZeroDimension);
        }
        Ok(Self { m, n })
    }

    /// Number of `+1` entries.
    pub fn positives(&self) -> usize {
        self.m
    }

    /// Number of `−1` entries.
    pub fn negatives(&self) -> usize {
        self.n
    }

    /// Total dimension `m + n`.
    pub fn dim(&self) -> usize {
        self.m + self.n
    }

    /// The metric as a dense matrix over the requested scalar field.
    pub fn matrix<T: Scalar>(&self) -> DMatrix<T> {
        DMatrix::from_fn(self.dim(), self.dim(), |i, j| {
            if i != j {
                T::zero()
            } else if i < self.m {
                T::one()
            } else {
                -T::one()
            }
        })
    }
}

/// The symplectic form `β = [[0, I], [−I, 0]]` in dimension `2n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymplecticBeta {
    n: usize,
}

impl SymplecticBeta {
    /// Symplectic form on `n` mode pairs (matrix dimension `2n`).
    pub fn new(n: usize) -> Result<Self, FormsError> {
        if n == 0 {
            return Err(FormsError::ZeroDimension);
        }
        Ok(Self { n })
    }

    /// Number of mode pairs.
    pub fn modes(&self) -> usize {
        self.n
    }

    /// Matrix dimension `2n`.
    pub fn dim(&self) -> usize {
        2 * self.n
    }

    /// The form as a dense matrix over the requested scalar field.
    pub fn matrix<T: Scalar>(&self) -> DMatrix<T> {
        DMatrix::from_fn(self.dim(), self.dim(), |i, j| {
            if j == i + self.n {
                T::one()
            } else if i == j + self.n {
                -T::one()
            } else {
                T::zero()
            }
        })
    }
}

/// A quadratic form together with its group semantics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Form {
    /// Indefinite metric, group `SO(m, n)` / `SU(m, n)`.
    Metric(MetricG),
    /// Symplectic form, group `Sp(2n, R)` / `Sp(2n, C)`.
    Symplectic(SymplecticBeta),
}

impl Form {
    /// Convenience constructor for [`MetricG`].
    pub fn metric(m: usize, n: usize) -> Result<Self, FormsError> {
        Ok(Form::Metric(MetricG::new(m, n)?))
    }

    /// Convenience constructor for [`SymplecticBeta`].
    pub fn symplectic(n: usize) -> Result<Self, FormsError> {
        Ok(Form::Symplectic(SymplecticBeta::new(n)?))
    }

    /// Matrix dimension the form acts on.
    pub fn dim(&self) -> usize {
        match self {
            Form::Metric(g) => g.dim(),
            Form::Symplectic(b) => b.dim(),
        }
    }

    /// The form as a dense matrix over the requested scalar field.
    pub fn matrix<T: Scalar>(&self) -> DMatrix<T> {
        match self {
            Form::Metric(g) => g.matrix(),
            Form::Symplectic(b) => b.matrix(),
        }
    }

    /// Deviation of `S` from the symmetry group of the form:
    /// `‖S† g S − g‖_max` for the metric (sesquilinear form) and
    /// `‖Sᵀ β S − β‖_max` for the symplectic form (bilinear form). For real
    /// `S` the two congruences coincide.
    pub fn congruence_defect<T: Scalar>(&self, s: &DMatrix<T>) -> Result<f64, FormsError> {
        self.check_dim(s)?;
        let j = self.matrix::<T>();
        let transformed = match self {
            Form::Metric(_) => s.adjoint() * &j * s,
            Form::Symplectic(_) => s.transpose() * &j * s,
        };
        Ok(crate::linalg::max_abs_diff(&transformed, &j))
    }

    fn check_dim<T: Scalar>(&self, m: &DMatrix<T>) -> Result<(), FormsError> {
        if m.nrows() != self.dim() || m.ncols() != self.dim() {
            return Err(FormsError::DimensionMismatch {
                matrix_dim: m.nrows().max(m.ncols()),
                form_dim: self.dim(),
            });
        }
        Ok(())
    }
}

/// Even/odd decomposition of a matrix with respect to a form's involution.
#[derive(Debug, Clone)]
pub struct EvenOddSplit<T: Scalar> {
    /// `(M + J M Jᵀ) / 2`, the part commuting with the form structure.
    pub even: DMatrix<T>,
    /// `(M − J M Jᵀ) / 2`, the part anticommuting with it.
    pub odd: DMatrix<T>,
}

impl<T: Scalar> EvenOddSplit<T> {
    /// `tr(odd²)` as a real number — the functional the group congruence
    /// minimises (zero exactly on canonical form).
    pub fn odd_norm(&self) -> f64 {
        (&self.odd * &self.odd).trace().re()
    }
}

/// Split `M` into even and odd parts under the form involution
/// `M ↦ J M Jᵀ` (note the literal transpose on the second factor, also for
/// the antisymmetric `β`).
pub fn even_odd_split<T: Scalar>(
    m: &DMatrix<T>,
    form: &Form,
) -> Result<EvenOddSplit<T>, FormsError> {
    match form {
        Form::Metric(g) => g_check(g, m)?,
        Form::Symplectic(b) => b_check(b, m)?,
    }
    let j = form.matrix::<T>();
    let conj = &j * m * j.transpose();
    Ok(EvenOddSplit {
        even: (m + &conj).scale(0.5),
        odd: (m - &conj).scale(0.5),
    })
}

fn g_check<T: Scalar>(g: &MetricG, m: &DMatrix<T>) -> Result<(), FormsError> {
    if m.nrows() != g.dim() || m.ncols() != g.dim() {
        return Err(FormsError::DimensionMismatch {
            matrix_dim: m.nrows().max(m.ncols()),
            form_dim: g.dim(),
        });
    }
    Ok(())
}

fn b_check<T: Scalar>(b: &SymplecticBeta, m: &DMatrix<T>) -> Result<(), FormsError> {
    if m.nrows() != b.dim() || m.ncols() != b.dim() {
        return Err(FormsError::DimensionMismatch {
            matrix_dim: m.nrows().max(m.ncols()),
            form_dim: b.dim(),
        });
    }
    Ok(())
}

/// Group-invariant trace `tr((J M)^l)`, returned as a real number.
///
/// For a hermitian `M` the trace is real whenever the power pairs with the
/// form symmetry: any `l` for the metric, even `l` for the symplectic form.
/// Odd symplectic powers vanish identically (their trace is purely
/// imaginary, with zero real part), so the returned value is `0` up to
/// rounding there; callers interested in symplectic invariants should use
/// even powers.
pub fn invariant_trace<T: Scalar>(
    m: &DMatrix<T>,
    form: &Form,
    l: u32,
) -> Result<f64, FormsError> {
    match form {
        Form::Metric(g) => g_check(g, m)?,
        Form::Symplectic(b) => b_check(b, m)?,
    }
    let jm = form.matrix::<T>() * m;
    let mut power = jm.clone();
    for _ in 1..l {
        power *= &jm;
    }
    let trace = power.trace();
    let scale = crate::linalg::max_abs(m).max(1.0).powi(l as i32);
    let symplectic_odd = matches!(form, Form::Symplectic(_)) && l % 2 == 1;
    debug_assert!(
        symplectic_odd || trace.im().abs() <= tol::SYM_REL * scale * m.nrows() as f64,
        "invariant trace has unexpected imaginary part {:.3e}",
        trace.im()
    );
    Ok(trace.re())
}

/// The quartic functional `m(z) = Σ_k (M_kk)²` of an overlap matrix, using
/// the real parts of the diagonal (exactly the diagonal for hermitian `M`).
pub fn quartic_form<T: Scalar>(m: &DMatrix<T>) -> f64 {
    m.diagonal().iter().map(|x| x.re() * x.re()).sum()
}
