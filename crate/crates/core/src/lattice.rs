//! Brute-force cleanness oracle on the integer weight lattice.
//!
//! The pushforward of a rank-one torus local system to affine n-space has a
//! basis indexed by integer vectors `w`. The coordinate-type operator moves
//! `w -> w + e_i` with coefficient 1; the derivative-type operator moves
//! `w -> w - e_i` with coefficient `c_i(w) = -(mu_i + w_i)`, which vanishes
//! exactly at `w_i = -mu_i`. Basis vectors are joint eigenvectors of the
//! Euler operators with pairwise distinct eigenvalue tuples `mu + w`, so
//! every submodule is spanned by basis vectors and simplicity is mutual
//! reachability on the lattice. The oracle decides reachability on a finite
//! window and never consults the closed-form criterion.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::atlas::AtlasModel;
use crate::cleanness::{self, CleanError};
use crate::rat::{nearest_integer, rat_int, Rat};
use crate::symcore::Assignment;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("window {given} is too small; need at least {required}")]
    WindowTooSmall { required: i64, given: i64 },
    #[error("window of size {nodes} nodes is too large to enumerate")]
    WindowTooLarge { nodes: u128 },
    #[error("start point lies outside the window")]
    StartOutsideWindow,
    #[error(transparent)]
    Clean(#[from] CleanError),
}

/// Coefficient of the derivative-type operator moving `w -> w - e_i`:
/// `c_i(w) = -(mu_i + w_i)`. The descent edge is missing exactly where this
/// vanishes, which needs `mu_i` integral. Only the vanishing locus matters
/// for reachability, so left/right action conventions give the same
/// verdicts; this sign is fixed to keep fixtures deterministic.
pub fn descent_coefficient(mu_i: &Rat, w_i: i64) -> Rat {
    -(mu_i + rat_int(w_i))
}

/// Smallest window bound that keeps every potential coefficient zero strictly
/// inside the window, with margin.
pub fn required_window(mu: &[Rat]) -> i64 {
    2 + mu
        .iter()
        .map(|m| nearest_integer(m).abs().to_i64().unwrap_or(i64::MAX / 4))
        .max()
        .unwrap_or(0)
}

fn check_window(mu: &[Rat], bound: i64) -> Result<(), OracleError> {
    let required = required_window(mu);
    if bound < required {
        return Err(OracleError::WindowTooSmall {
            required,
            given: bound,
        });
    }
    Ok(())
}

struct WindowGraph {
    dim: usize,
    side: usize,
    total: usize,
    strides: Vec<usize>,
    /// blocked[i][pos] is true when the descent edge out of coordinate value
    /// `pos - bound` in direction `i` is missing, i.e. `mu_i + w_i = 0`.
    blocked: Vec<Vec<bool>>,
}

impl WindowGraph {
    fn build(mu: &[Rat], bound: i64) -> Result<Self, OracleError> {
        let dim = mu.len();
        let side = (2 * bound + 1) as usize;
        let mut total: u128 = 1;
        for _ in 0..dim {
            total *= side as u128;
            if total > 1 << 26 {
                return Err(OracleError::WindowTooLarge { nodes: total });
            }
        }
        let mut strides = Vec::with_capacity(dim);
        let mut s = 1usize;
        for _ in 0..dim {
            strides.push(s);
            s *= side;
        }
        let blocked = mu
            .iter()
            .map(|m| {
                (0..side)
                    .map(|pos| descent_coefficient(m, pos as i64 - bound).is_zero())
                    .collect()
            })
            .collect();
        Ok(Self {
            dim,
            side,
            total: total as usize,
            strides,
            blocked,
        })
    }

    fn coord(&self, index: usize, dir: usize) -> usize {
        (index / self.strides[dir]) % self.side
    }

    fn search(&self, start: usize, forward: bool) -> usize {
        let mut seen = vec![false; self.total];
        let mut stack = vec![start];
        seen[start] = true;
        let mut count = 1usize;
        while let Some(v) = stack.pop() {
            for dir in 0..self.dim {
                let pos = self.coord(v, dir);
                // ascent edges always exist inside the window; descent out of
                // position p exists unless blocked[p]
                let up_ok = pos + 1 < self.side;
                let down_ok = pos > 0 && !self.blocked[dir][pos];
                let (to_upper, to_lower) = if forward {
                    (up_ok, down_ok)
                } else {
                    // reverse edges: the upper neighbour reaches us by its
                    // descent edge, the lower one by its ascent edge
                    (pos + 1 < self.side && !self.blocked[dir][pos + 1], pos > 0)
                };
                if to_upper {
                    let w = v + self.strides[dir];
                    if !seen[w] {
                        seen[w] = true;
                        count += 1;
                        stack.push(w);
                    }
                }
                if to_lower {
                    let w = v - self.strides[dir];
                    if !seen[w] {
                        seen[w] = true;
                        count += 1;
                        stack.push(w);
                    }
                }
            }
        }
        count
    }

    fn reachable_from(&self, start: usize) -> Vec<bool> {
        let mut seen = vec![false; self.total];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            for dir in 0..self.dim {
                let pos = self.coord(v, dir);
                if pos + 1 < self.side {
                    let w = v + self.strides[dir];
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
                if pos > 0 && !self.blocked[dir][pos] {
                    let w = v - self.strides[dir];
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        seen
    }
}

/// Whether the windowed module is simple: all window nodes mutually
/// reachable, decided by a forward and a backward search from one corner.
/// With the window precondition this equals simplicity of the full lattice
/// module. Refuses (rather than extends) undersized windows.
pub fn is_simple(mu: &[Rat], bound: i64) -> Result<bool, OracleError> {
    check_window(mu, bound)?;
    if mu.is_empty() {
        return Ok(true);
    }
    let g = WindowGraph::build(mu, bound)?;
    let corner = g.total - 1;
    Ok(g.search(corner, true) == g.total && g.search(corner, false) == g.total)
}

/// Cleanness via simplicity at both signs of the exponents.
pub fn is_clean_oracle(mu: &[Rat], bound: i64) -> Result<bool, OracleError> {
    let neg: Vec<Rat> = mu.iter().map(|m| -m).collect();
    Ok(is_simple(mu, bound)? && is_simple(&neg, bound)?)
}

/// Reachable set of lattice points from `start`, for diagnosing where a
/// generated submodule stops.
pub fn submodule_support(
    mu: &[Rat],
    start: &[i64],
    bound: i64,
) -> Result<BTreeSet<Vec<i64>>, OracleError> {
    check_window(mu, bound)?;
    if start.len() != mu.len() || start.iter().any(|&s| s.abs() > bound) {
        return Err(OracleError::StartOutsideWindow);
    }
    let g = WindowGraph::build(mu, bound)?;
    let mut index = 0usize;
    for (i, &s) in start.iter().enumerate() {
        index += ((s + bound) as usize) * g.strides[i];
    }
    let seen = g.reachable_from(index);
    let mut out = BTreeSet::new();
    for (idx, hit) in seen.iter().enumerate() {
        if *hit {
            let mut w = Vec::with_capacity(g.dim);
            for dir in 0..g.dim {
                w.push(g.coord(idx, dir) as i64 - bound);
            }
            out.insert(w);
        }
    }
    Ok(out)
}

/// Per-chart oracle outcome inside an agreement report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartAgreement {
    pub chart: String,
    /// Values of the divisorial base exponents at the assignment.
    pub exponents: Vec<Rat>,
    pub window: i64,
    pub clean: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgreementReport {
    pub charts: Vec<ChartAgreement>,
    pub oracle_clean: bool,
    pub criterion_clean: bool,
}

impl AgreementReport {
    pub fn agree(&self) -> bool {
        self.oracle_clean == self.criterion_clean
    }
}

/// Run the reachability oracle chart by chart on the divisorial base
/// exponents and compare the conjunction with the criterion verdict. The
/// requested window is widened per chart to the sound minimum for the
/// transported values, so the refuse policy of [`is_simple`] is never
/// tripped by large transported exponents.
pub fn oracle_vs_criterion(
    model: &AtlasModel,
    assignment: &Assignment,
    window: i64,
) -> Result<AgreementReport, OracleError> {
    let verdict = cleanness::evaluate_clean(model, assignment)?;
    let mut charts = Vec::new();
    let mut oracle_clean = true;
    for chart in model.charts() {
        let exps = chart_divisorial_values(model, &chart.id, assignment)?;
        let effective = window.max(required_window(&exps));
        let clean = is_clean_oracle(&exps, effective)?;
        oracle_clean &= clean;
        charts.push(ChartAgreement {
            chart: chart.id.clone(),
            exponents: exps,
            window: effective,
            clean,
        });
    }
    Ok(AgreementReport {
        charts,
        oracle_clean,
        criterion_clean: verdict.clean,
    })
}

fn chart_divisorial_values(
    model: &AtlasModel,
    id: &str,
    assignment: &Assignment,
) -> Result<Vec<Rat>, OracleError> {
    let chart = model.chart(id).ok_or_else(|| {
        CleanError::Atlas(crate::atlas::AtlasError::UnknownChart(String::from(id)))
    })?;
    let ev = cleanness::chart_exponents(model, id).map_err(CleanError::from)?;
    let mut out = Vec::new();
    for (i, form) in ev.base.iter().enumerate() {
        if chart.divisorial[i] {
            out.push(
                form.evaluate(assignment)
                    .map_err(|e| cleanness::lift_eval(model, e))?,
            );
        }
    }
    Ok(out)
}

/// All reduced rationals `p/q` with `1 <= q <= max_denominator` and
/// `|p/q| <= range`, ordered by denominator then numerator.
pub fn grid_values(max_denominator: u32, range: i64) -> Vec<Rat> {
    let mut out = Vec::new();
    for q in 1..=max_denominator as i64 {
        let lim = range * q;
        for p in -lim..=lim {
            if num_integer_gcd(p, q) == 1 {
                out.push(crate::rat::rat(p, q));
            }
        }
    }
    out
}

fn num_integer_gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridDisagreement {
    pub assignment: Vec<Rat>,
    pub oracle_clean: bool,
    pub criterion_clean: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridOutcome {
    pub cases: usize,
    pub agreements: usize,
    pub disagreements: Vec<GridDisagreement>,
}

impl GridOutcome {
    pub fn all_agree(&self) -> bool {
        self.agreements == self.cases
    }
}

/// Exhaustive grid of parameter assignments over `values`, deterministically
/// strided down to at most `max_cases` cases, comparing the per-chart oracle
/// conjunction with the criterion verdict. Chart exponent forms and criterion
/// forms are hoisted out of the loop; each case only evaluates forms and runs
/// lattice searches.
pub fn oracle_grid(
    model: &AtlasModel,
    values: &[Rat],
    window: i64,
    max_cases: usize,
) -> Result<GridOutcome, OracleError> {
    let k = model.params().len();
    let crit = cleanness::criterion(model).map_err(CleanError::from)?;
    let crit_forms: Vec<_> = crit.forms().cloned().collect();
    let mut chart_forms = Vec::new();
    for chart in model.charts() {
        let ev = cleanness::chart_exponents(model, &chart.id).map_err(CleanError::from)?;
        let forms: Vec<_> = ev
            .base
            .iter()
            .enumerate()
            .filter(|(i, _)| chart.divisorial[*i])
            .map(|(_, f)| f.clone())
            .collect();
        chart_forms.push(forms);
    }

    let mut total: u128 = 1;
    for _ in 0..k {
        total = total.saturating_mul(values.len() as u128);
    }
    let stride = if max_cases == 0 {
        1
    } else {
        total.div_ceil(max_cases as u128).max(1)
    };

    let mut cases = 0usize;
    let mut agreements = 0usize;
    let mut disagreements = Vec::new();
    let mut case_index: u128 = 0;
    while case_index < total {
        let mut rest = case_index;
        let mut point = Vec::with_capacity(k);
        for _ in 0..k {
            point.push(values[(rest % values.len() as u128) as usize].clone());
            rest /= values.len() as u128;
        }
        let assignment = Assignment::from_values(&point);
        let mut criterion_clean = true;
        for f in &crit_forms {
            if f.evaluate(&assignment)
                .map_err(|e| cleanness::lift_eval(model, e))?
                .is_integer()
            {
                criterion_clean = false;
                break;
            }
        }
        let mut oracle_clean = true;
        for forms in &chart_forms {
            let mut exps = Vec::with_capacity(forms.len());
            for f in forms {
                exps.push(
                    f.evaluate(&assignment)
                        .map_err(|e| cleanness::lift_eval(model, e))?,
                );
            }
            let effective = window.max(required_window(&exps));
            if !is_clean_oracle(&exps, effective)? {
                oracle_clean = false;
                break;
            }
        }
        cases += 1;
        if oracle_clean == criterion_clean {
            agreements += 1;
        } else if disagreements.len() < 16 {
            disagreements.push(GridDisagreement {
                assignment: point,
                oracle_clean,
                criterion_clean,
            });
        }
        case_index += stride;
    }
    Ok(GridOutcome {
        cases,
        agreements,
        disagreements,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn descent_coefficient_vanishes_exactly_at_the_wall() {
        assert!(descent_coefficient(&rat(2, 1), -2).is_zero());
        assert!(!descent_coefficient(&rat(2, 1), 2).is_zero());
        assert!(!descent_coefficient(&rat(1, 2), 0).is_zero());
        assert_eq!(descent_coefficient(&rat(1, 2), 1), rat(-3, 2));
    }

    #[test]
    fn window_policy_refuses_rather_than_extends() {
        let mu = [rat(2, 1), rat(1, 2)];
        assert_eq!(required_window(&mu), 4);
        assert_eq!(
            is_simple(&mu, 3),
            Err(OracleError::WindowTooSmall {
                required: 4,
                given: 3
            })
        );
        assert_eq!(is_simple(&mu, 8), Ok(false));
    }

    #[test]
    fn simplicity_examples() {
        assert_eq!(is_simple(&[rat(1, 2), rat(1, 3)], 4), Ok(true));
        assert_eq!(is_simple(&[rat(0, 1), rat(1, 2)], 4), Ok(false));
    }

    #[test]
    fn cleanness_is_sign_symmetric() {
        assert_eq!(is_clean_oracle(&[rat(1, 2), rat(1, 3)], 4), Ok(true));
        assert_eq!(is_clean_oracle(&[rat(1, 1), rat(1, 2)], 4), Ok(false));
        assert_eq!(
            is_clean_oracle(&[rat(-1, 2), rat(-1, 3)], 4),
            is_clean_oracle(&[rat(1, 2), rat(1, 3)], 4)
        );
    }

    #[test]
    fn supports_stop_exactly_at_blocked_edges() {
        let full = submodule_support(&[rat(1, 2)], &[0], 4).unwrap();
        assert_eq!(full.len(), 9);

        // descent out of 0 is blocked for mu = 0
        let half = submodule_support(&[rat(0, 1)], &[0], 4).unwrap();
        let expected: BTreeSet<Vec<i64>> = (0..=4).map(|w| alloc::vec![w]).collect();
        assert_eq!(half, expected);

        // from -1 the ascent recovers everything
        let all = submodule_support(&[rat(0, 1)], &[-1], 4).unwrap();
        assert_eq!(all.len(), 9);
    }

    #[test]
    fn grid_values_are_reduced_and_bounded() {
        let v = grid_values(4, 3);
        assert_eq!(v.len(), 37);
        assert!(v.iter().all(|x| x.abs() <= rat(3, 1)));
    }
}
