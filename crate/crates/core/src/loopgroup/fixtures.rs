//! Coset-identity fixtures: exact Laurent matrices materialized at a chosen
//! working precision and checked by the membership oracle.

use alloc::string::String;
use alloc::vec::Vec;

use super::matrix::{LoopMatrix, MemberStatus, Subgroup};
use super::poly::MultiPoly;
use super::ratfunc::RatFunc;
use super::series::LaurentSeries;
use super::LoopError;

/// An exact Laurent polynomial in `t`: finitely many `(power, coefficient)`
/// terms. Fixtures keep entries exact so they can be re-materialized at any
/// precision.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ExactLaurent {
    terms: Vec<(i64, RatFunc)>,
}

impl ExactLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn new(mut terms: Vec<(i64, RatFunc)>) -> Self {
        terms.retain(|(_, c)| !c.is_zero());
        terms.sort_by_key(|(k, _)| *k);
        // merge duplicate powers
        let mut merged: Vec<(i64, RatFunc)> = Vec::with_capacity(terms.len());
        for (k, c) in terms {
            match merged.last_mut() {
                Some((lk, lc)) if *lk == k => *lc = lc.add(&c),
                _ => merged.push((k, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        Self { terms: merged }
    }

    pub fn terms(&self) -> &[(i64, RatFunc)] {
        &self.terms
    }

    pub fn materialize(&self, nvars: usize, precision: i64) -> LaurentSeries {
        LaurentSeries::from_terms(nvars, &self.terms, precision)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopFixture {
    pub name: String,
    pub subgroup: Subgroup,
    /// Expected answer of the coset-equality check.
    pub expect_equal: bool,
    pub lhs: [[ExactLaurent; 2]; 2],
    pub rhs: [[ExactLaurent; 2]; 2],
}

impl LoopFixture {
    fn materialize_side(
        name: &str,
        side: &[[ExactLaurent; 2]; 2],
        nvars: usize,
        precision: i64,
    ) -> Result<LoopMatrix, LoopError> {
        let m = |r: usize, c: usize| side[r][c].materialize(nvars, precision);
        LoopMatrix::sl2([[m(0, 0), m(0, 1)], [m(1, 0), m(1, 1)]])
            .map_err(|_| LoopError::BadFixture(String::from(name)))
    }

    pub fn materialize(
        &self,
        nvars: usize,
        precision: i64,
    ) -> Result<(LoopMatrix, LoopMatrix), LoopError> {
        Ok((
            Self::materialize_side(&self.name, &self.lhs, nvars, precision)?,
            Self::materialize_side(&self.name, &self.rhs, nvars, precision)?,
        ))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixtureOutcome {
    pub name: String,
    pub subgroup: Subgroup,
    pub expected: bool,
    pub status: MemberStatus,
    pub denominators: Vec<MultiPoly>,
    /// Precision the reported verdict was decided at.
    pub precision: i64,
    pub pass: bool,
}

fn run_once(
    f: &LoopFixture,
    nvars: usize,
    precision: i64,
) -> Result<super::matrix::MembershipVerdict, LoopError> {
    let (lhs, rhs) = f.materialize(nvars, precision)?;
    LoopMatrix::coset_equal(&lhs, &rhs, f.subgroup)
}

/// Run every fixture at the given precision; when a verdict comes back as
/// insufficient precision, or the precision is too low to even verify the
/// determinant claims, retry once at twice the precision.
pub fn verify_fixtures(
    fixtures: &[LoopFixture],
    nvars: usize,
    precision: i64,
) -> Result<Vec<FixtureOutcome>, LoopError> {
    let mut out = Vec::with_capacity(fixtures.len());
    for f in fixtures {
        let mut used = precision;
        let verdict = match run_once(f, nvars, used) {
            Ok(v) if v.status.decided() => v,
            first => {
                used = precision * 2;
                match run_once(f, nvars, used) {
                    Ok(v) => v,
                    Err(e) => return Err(first.err().unwrap_or(e)),
                }
            }
        };
        let pass = match verdict.status {
            MemberStatus::Yes => f.expect_equal,
            MemberStatus::No { .. } => !f.expect_equal,
            MemberStatus::InsufficientPrecision => false,
        };
        out.push(FixtureOutcome {
            name: f.name.clone(),
            subgroup: f.subgroup,
            expected: f.expect_equal,
            status: verdict.status,
            denominators: verdict.denominators,
            precision: used,
            pass,
        });
    }
    Ok(out)
}
