//! Exact symbolic substrate: parameter spaces, affine-linear exponent forms,
//! and the group(oid) of monomial maps between split tori.

mod linear;
mod matrix;
mod monomial;
mod params;

pub use linear::{Assignment, EvalError, LinearForm};
pub use matrix::{identity_matrix, mat_mul, matrix_det, unimodular_inverse};
pub use monomial::{MapError, MonomialMap};
pub use params::{ParamSpace, ParamSpaceError};

use alloc::vec::Vec;

/// Exponent data of a rank-one local system in a chart: one affine-linear
/// form per base coordinate and one per fiber coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentVector {
    pub base: Vec<LinearForm>,
    pub fiber: Vec<LinearForm>,
}

impl ExponentVector {
    pub fn new(base: Vec<LinearForm>, fiber: Vec<LinearForm>) -> Self {
        Self { base, fiber }
    }

    /// Base forms followed by fiber forms.
    pub fn concat(&self) -> Vec<LinearForm> {
        let mut out = self.base.clone();
        out.extend(self.fiber.iter().cloned());
        out
    }

    pub fn from_concat(mut forms: Vec<LinearForm>, base_len: usize) -> Self {
        let fiber = forms.split_off(base_len);
        Self { base: forms, fiber }
    }
}
