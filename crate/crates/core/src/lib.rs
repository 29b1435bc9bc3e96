//! Exact computer algebra for monomial chart atlases.
//!
//! The crate decides cleanness of rank-one twisted local systems on torus
//! compactifications described by monomial gluing data. Everything is exact:
//! parameters are rationals, exponent matrices are arbitrary-precision
//! integers, and no floating point appears anywhere.
//!
//! The pieces fit together as follows:
//!
//! * [`symcore`] is the symbolic substrate: affine-linear exponent forms in
//!   declared parameters and the groupoid of monomial maps between split
//!   tori.
//! * [`atlas`] holds the chart atlas data model with its divisorial flags,
//!   fiber-torus twist cocycles, cocycle verification, and the derivation of
//!   line-bundle transition functions from log top-forms.
//! * [`cleanness`] transports exponents into every chart, collects boundary
//!   forms, and produces the non-integrality criterion and verdicts.
//! * [`lattice`] is an independent brute-force oracle: the pushed-forward
//!   rank-one module on affine space realized on its integer weight basis,
//!   with simplicity decided by graph reachability.
//! * [`loopgroup`] is a second independent oracle: truncated Laurent-series
//!   2x2 matrices over a rational-function field, with Iwahori membership
//!   and coset-equality checks for the chart and section identities.
//! * [`builtin`] provides the built-in four-chart SL2 affine-flag model and
//!   its loop-group fixture set.
//!
//! The crate is `no_std` (with `alloc`); file formats and the command-line
//! surface live in the companion `flagmodel-cli` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod atlas;
pub mod builtin;
pub mod cleanness;
pub mod lattice;
pub mod loopgroup;
pub mod rat;
pub mod symcore;

pub use rat::{Int, Rat};
