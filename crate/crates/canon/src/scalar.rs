//! Scalar field abstraction.
//!
//! Every numerical kernel in this crate is generic over the entry field of
//! the matrices involved. Exactly two fields are supported — `f64` and
//! `Complex64` — which is what [`Scalar`] encodes: it is
//! [`nalgebra::ComplexField`] pinned to double precision, extended with the
//! few conversions the I/O layer needs.

use nalgebra::ComplexField;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Tag distinguishing the two supported coefficient fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    /// Real double precision entries.
    Real,
    /// Complex double precision entries.
    Complex,
}

impl Field {
    /// Lower-case name used by the file format (`"real"` / `"complex"`).
    pub fn name(self) -> &'static str {
        match self {
            Field::Real => "real",
            Field::Complex => "complex",
        }
    }
}

/// Matrix entry type: `f64` or `Complex64`.
///
/// The supertrait bound pins the associated real field to `f64`, so
/// tolerances and norms are plain doubles throughout.
pub trait Scalar: ComplexField<RealField = f64> + Copy {
    /// Field tag for this scalar type.
    const FIELD: Field;

    /// Build a scalar from real and imaginary parts. For the real field the
    /// imaginary part is discarded; callers validate it upstream.
    fn from_re_im(re: f64, im: f64) -> Self;

    /// Real part of the scalar.
    fn re(self) -> f64;

    /// Imaginary part of the scalar (identically zero for `f64`).
    fn im(self) -> f64;

    /// Magnitude `|x|`.
    fn mag(self) -> f64 {
        self.modulus()
    }
}

impl Scalar for f64 {
    const FIELD: Field = Field::Real;

    fn from_re_im(re: f64, _im: f64) -> Self {
        re
    }

    fn re(self) -> f64 {
        self
    }

    fn im(self) -> f64 {
        0.0
    }
}

impl Scalar for Complex64 {
    const FIELD: Field = Field::Complex;

    fn from_re_im(re: f64, im: f64) -> Self {
        Complex64::new(re, im)
    }

    fn re(self) -> f64 {
        self.re
    }

    fn im(self) -> f64 {
        self.im
    }
}
