//! 2x2 loop-group matrices with Iwahori membership and coset checks.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::poly::MultiPoly;
use super::ratfunc::RatFunc;
use super::series::LaurentSeries;
use super::LoopError;

/// Which membership test to run: the Iwahori subgroup (power-series entries,
/// lower-left divisible by `t`) or its pro-unipotent radical (additionally
/// diagonal entries 1 at `t^0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subgroup {
    Iwahori,
    IwahoriUnipotent,
}

impl Subgroup {
    pub fn label(&self) -> &'static str {
        match self {
            Subgroup::Iwahori => "I",
            Subgroup::IwahoriUnipotent => "Iu",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MemberStatus {
    Yes,
    /// Certified failure: the offending entry and power of `t`.
    No {
        row: usize,
        col: usize,
        power: i64,
    },
    InsufficientPrecision,
}

impl MemberStatus {
    pub fn is_yes(&self) -> bool {
        matches!(self, MemberStatus::Yes)
    }

    pub fn is_no(&self) -> bool {
        matches!(self, MemberStatus::No { .. })
    }

    pub fn decided(&self) -> bool {
        !matches!(self, MemberStatus::InsufficientPrecision)
    }
}

/// Membership verdict plus the set of denominators that were assumed
/// invertible, i.e. the locus the identity was verified over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipVerdict {
    pub status: MemberStatus,
    pub denominators: Vec<MultiPoly>,
}

/// A 2x2 matrix of truncated Laurent series. `det_is_one` records that the
/// determinant was checked to equal 1 to working precision at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopMatrix {
    entries: [[LaurentSeries; 2]; 2],
    det_is_one: bool,
}

impl LoopMatrix {
    pub fn new(entries: [[LaurentSeries; 2]; 2]) -> Self {
        Self {
            entries,
            det_is_one: false,
        }
    }

    /// Construct and verify `det = 1` to working precision.
    pub fn sl2(entries: [[LaurentSeries; 2]; 2]) -> Result<Self, LoopError> {
        let mut m = Self::new(entries);
        if !m.det_one_to_precision() {
            return Err(LoopError::NonUnitDeterminant);
        }
        m.det_is_one = true;
        Ok(m)
    }

    pub fn identity(nvars: usize, precision: i64) -> Self {
        let one = LaurentSeries::one(nvars, precision);
        let zero = LaurentSeries::zero(nvars, precision);
        Self {
            entries: [[one.clone(), zero.clone()], [zero, one]],
            det_is_one: true,
        }
    }

    pub fn entry(&self, row: usize, col: usize) -> &LaurentSeries {
        &self.entries[row][col]
    }

    pub fn nvars(&self) -> usize {
        self.entries[0][0].nvars()
    }

    pub fn claims_det_one(&self) -> bool {
        self.det_is_one
    }

    pub fn det(&self) -> LaurentSeries {
        let [[a, b], [c, d]] = &self.entries;
        a.mul(d).sub(&b.mul(c))
    }

    fn det_one_to_precision(&self) -> bool {
        let d = self.det();
        if d.precision() < 1 {
            return false;
        }
        let one = LaurentSeries::one(self.nvars(), d.precision());
        d.eq_to_precision(&one)
    }

    pub fn multiply(&self, other: &Self) -> Self {
        let [[a, b], [c, d]] = &self.entries;
        let [[e, f], [g, h]] = &other.entries;
        Self {
            entries: [
                [a.mul(e).add(&b.mul(g)), a.mul(f).add(&b.mul(h))],
                [c.mul(e).add(&d.mul(g)), c.mul(f).add(&d.mul(h))],
            ],
            det_is_one: self.det_is_one && other.det_is_one,
        }
    }

    /// Inverse: the adjugate when the determinant is 1, otherwise the
    /// adjugate scaled by the inverse determinant series (which must be
    /// invertible to precision).
    pub fn inverse(&self) -> Result<Self, LoopError> {
        let [[a, b], [c, d]] = &self.entries;
        let adj = Self {
            entries: [[d.clone(), b.neg()], [c.neg(), a.clone()]],
            det_is_one: self.det_is_one,
        };
        if self.det_is_one || self.det_one_to_precision() {
            return Ok(adj);
        }
        let det_inv = self.det().inverse()?;
        let scale = |s: &LaurentSeries| s.mul(&det_inv);
        Ok(Self {
            entries: [
                [scale(&adj.entries[0][0]), scale(&adj.entries[0][1])],
                [scale(&adj.entries[1][0]), scale(&adj.entries[1][1])],
            ],
            det_is_one: false,
        })
    }

    fn collect_denominators(&self, out: &mut BTreeSet<MultiPoly>) {
        for row in &self.entries {
            for s in row {
                for (_, c) in s.terms() {
                    if let Some(d) = c.nonconstant_den() {
                        out.insert(d.clone());
                    }
                }
            }
        }
    }

    fn membership(&self, subgroup: Subgroup) -> MembershipVerdict {
        let nvars = self.nvars();
        let one = RatFunc::one(nvars);
        let mut denominators = BTreeSet::new();
        self.collect_denominators(&mut denominators);

        let mut first_no: Option<(usize, usize, i64)> = None;
        let mut insufficient = false;
        for row in 0..2 {
            for col in 0..2 {
                let s = &self.entries[row][col];
                // entries must lie in R[[t]]
                for (k, c) in s.terms() {
                    if k < 0 && !c.is_zero() && first_no.is_none() {
                        first_no = Some((row, col, k));
                    }
                }
                if s.precision() < 0 {
                    insufficient = true;
                }
                // lower-left needs t | entry
                if row == 1 && col == 0 {
                    match s.known_coeff(0) {
                        None => insufficient = true,
                        Some(c) => {
                            if !c.is_zero() && first_no.is_none() {
                                first_no = Some((row, col, 0));
                            }
                        }
                    }
                }
                // pro-unipotent radical pins the diagonal at t^0
                if subgroup == Subgroup::IwahoriUnipotent && row == col {
                    match s.known_coeff(0) {
                        None => insufficient = true,
                        Some(c) => {
                            if c != one && first_no.is_none() {
                                first_no = Some((row, col, 0));
                            }
                        }
                    }
                }
            }
        }
        let status = match first_no {
            Some((row, col, power)) => MemberStatus::No { row, col, power },
            None if insufficient => MemberStatus::InsufficientPrecision,
            None => MemberStatus::Yes,
        };
        MembershipVerdict {
            status,
            denominators: denominators.into_iter().collect(),
        }
    }

    pub fn in_iwahori(&self) -> MembershipVerdict {
        self.membership(Subgroup::Iwahori)
    }

    pub fn in_iwahori_unipotent(&self) -> MembershipVerdict {
        self.membership(Subgroup::IwahoriUnipotent)
    }

    /// `g1 * subgroup == g2 * subgroup`, decided as membership of
    /// `g1^-1 * g2`.
    pub fn coset_equal(
        g1: &Self,
        g2: &Self,
        subgroup: Subgroup,
    ) -> Result<MembershipVerdict, LoopError> {
        let q = g1.inverse()?.multiply(g2);
        Ok(q.membership(subgroup))
    }

    pub fn eq_to_precision(&self, other: &Self) -> bool {
        (0..2).all(|r| (0..2).all(|c| self.entries[r][c].eq_to_precision(&other.entries[r][c])))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat_int;

    const N: usize = 2; // variables a_-1 (index 0) and a_0 (index 1)
    const P: i64 = 8;

    fn c(v: i64) -> RatFunc {
        RatFunc::constant(N, rat_int(v))
    }

    fn a1() -> RatFunc {
        RatFunc::var(N, 0)
    }

    fn a0() -> RatFunc {
        RatFunc::var(N, 1)
    }

    fn series(terms: &[(i64, RatFunc)]) -> LaurentSeries {
        LaurentSeries::from_terms(N, terms, P)
    }

    fn zero() -> LaurentSeries {
        LaurentSeries::zero(N, P)
    }

    /// (t, a_-1 t^-1 + a_0; 0, t^-1)
    fn upper_family() -> LoopMatrix {
        LoopMatrix::sl2([
            [series(&[(1, c(1))]), series(&[(-1, a1()), (0, a0())])],
            [zero(), series(&[(-1, c(1))])],
        ])
        .unwrap()
    }

    #[test]
    fn adjugate_inverse_of_the_upper_family() {
        let g = upper_family();
        let inv = g.inverse().unwrap();
        // (t^-1, -a_-1 t^-1 - a_0; 0, t)
        assert!(inv.entry(0, 0).eq_to_precision(&series(&[(-1, c(1))])));
        assert!(inv
            .entry(0, 1)
            .eq_to_precision(&series(&[(-1, a1().neg()), (0, a0().neg())])));
        assert!(inv.entry(1, 0).eq_to_precision(&zero()));
        assert!(inv.entry(1, 1).eq_to_precision(&series(&[(1, c(1))])));
        let prod = g.multiply(&inv);
        assert!(prod.eq_to_precision(&LoopMatrix::identity(N, prod.entry(0, 0).precision())));
        let id = LoopMatrix::identity(N, P);
        assert!(id.inverse().unwrap().eq_to_precision(&id));
    }

    #[test]
    fn iwahori_membership_conditions() {
        // (1, 0; t, 1) is in I and in I^u
        let g = LoopMatrix::sl2([
            [series(&[(0, c(1))]), zero()],
            [series(&[(1, c(1))]), series(&[(0, c(1))])],
        ])
        .unwrap();
        assert!(g.in_iwahori().status.is_yes());
        assert!(g.in_iwahori_unipotent().status.is_yes());

        // (1, 0; 1, 1) fails: lower-left has a t^0 coefficient
        let h = LoopMatrix::sl2([
            [series(&[(0, c(1))]), zero()],
            [series(&[(0, c(1))]), series(&[(0, c(1))])],
        ])
        .unwrap();
        assert_eq!(
            h.in_iwahori().status,
            MemberStatus::No {
                row: 1,
                col: 0,
                power: 0
            }
        );

        // (a_0, 1; 0, 1/a_0): in I over a_0 != 0, not in I^u
        let q = LoopMatrix::sl2([
            [series(&[(0, a0())]), series(&[(0, c(1))])],
            [zero(), series(&[(0, a0().recip().unwrap())])],
        ])
        .unwrap();
        let v = q.in_iwahori();
        assert!(v.status.is_yes());
        assert_eq!(v.denominators.len(), 1);
        assert_eq!(v.denominators[0].render(&["a_-1", "a_0"]), "a_0");
        assert_eq!(
            q.in_iwahori_unipotent().status,
            MemberStatus::No {
                row: 0,
                col: 0,
                power: 0
            }
        );
    }

    #[test]
    fn coset_checks_match_hand_computations() {
        // reflexivity
        let g = upper_family();
        assert!(LoopMatrix::coset_equal(&g, &g, Subgroup::Iwahori)
            .unwrap()
            .status
            .is_yes());

        // (a_0, 1; -1, 0) and (1, 0; -1/a_0, 1) define the same I-coset
        let lhs = LoopMatrix::sl2([
            [series(&[(0, a0())]), series(&[(0, c(1))])],
            [series(&[(0, c(-1))]), zero()],
        ])
        .unwrap();
        let rhs = LoopMatrix::sl2([
            [series(&[(0, c(1))]), zero()],
            [
                series(&[(0, a0().recip().unwrap().neg())]),
                series(&[(0, c(1))]),
            ],
        ])
        .unwrap();
        let v = LoopMatrix::coset_equal(&lhs, &rhs, Subgroup::Iwahori).unwrap();
        assert!(v.status.is_yes());
        // the quotient rhs^-1 * lhs is the diagonal witness (a_0, 1; 0, 1/a_0)
        let q = rhs.inverse().unwrap().multiply(&lhs);
        assert!(q.entry(0, 0).eq_to_precision(&series(&[(0, a0())])));
        assert!(q.entry(0, 1).eq_to_precision(&series(&[(0, c(1))])));
        assert!(q.entry(1, 0).eq_to_precision(&zero()));
        assert!(q
            .entry(1, 1)
            .eq_to_precision(&series(&[(0, a0().recip().unwrap())])));
        // but they are different I^u-cosets
        assert!(
            LoopMatrix::coset_equal(&lhs, &rhs, Subgroup::IwahoriUnipotent)
                .unwrap()
                .status
                .is_no()
        );

        // the two one-parameter families with equal limits are distinct cosets
        let f1 = LoopMatrix::sl2([
            [series(&[(0, c(1))]), series(&[(-1, a1())])],
            [zero(), series(&[(0, c(1))])],
        ])
        .unwrap();
        let f2 = LoopMatrix::sl2([
            [series(&[(1, c(1))]), series(&[(-1, a1())])],
            [zero(), series(&[(-1, c(1))])],
        ])
        .unwrap();
        let v = LoopMatrix::coset_equal(&f1, &f2, Subgroup::Iwahori).unwrap();
        match v.status {
            MemberStatus::No { power, .. } => assert!(power < 0),
            other => panic!("expected a negative-power certificate, got {other:?}"),
        }
    }

    #[test]
    fn det_claim_is_verified() {
        let bad = LoopMatrix::sl2([
            [series(&[(0, c(2))]), zero()],
            [zero(), series(&[(0, c(1))])],
        ]);
        assert_eq!(bad, Err(LoopError::NonUnitDeterminant));
    }
}
