//! The built-in SL2 affine-flag model: a four-chart monomial atlas of the
//! two-dimensional Schubert surface compactifying a rank-two torus, together
//! with its fiber-torus twist cocycles, reference local system, and a
//! loop-group fixture set for the chart and section identities.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::atlas::{AtlasModel, AtlasModelData, Chart, FiberSpec, FiberTwist, TotalTransition};
use crate::loopgroup::{ExactLaurent, LoopFixture, RatFunc, Subgroup};
use crate::rat::rat_int;
use crate::symcore::{ExponentVector, LinearForm, MonomialMap, ParamSpace};

fn chart(id: &str, logpole: [bool; 2]) -> Chart {
    Chart {
        id: String::from(id),
        coords: vec![String::from("x"), String::from("y")],
        divisorial: vec![true, true],
        logpole: logpole.to_vec(),
    }
}

fn transition(
    target: &str,
    source: &str,
    base: &[&[i64]],
    a: &[i64],
    v: &[i64],
) -> TotalTransition {
    TotalTransition {
        source: String::from(source),
        target: String::from(target),
        base: MonomialMap::unit_from_i64(base),
        twists: vec![
            FiberTwist::from_i64(a, rat_int(1)),
            FiberTwist::from_i64(v, rat_int(1)),
        ],
    }
}

/// The built-in four-chart model. Parameters are `mu_-1`, `mu_0` (the base
/// torus monodromies) and `Lambda`, `kappa` (the fiber twists); the
/// reference chart carries exponents `(mu_-1, mu_0 | Lambda, kappa)`.
pub fn builtin_sl2() -> AtlasModel {
    let params = ParamSpace::new(["mu_-1", "mu_0", "Lambda", "kappa"]).expect("distinct names");
    let data = AtlasModelData {
        params,
        charts: vec![
            chart("1", [false, false]),
            chart("2", [true, false]),
            chart("3", [false, true]),
            chart("4", [true, true]),
        ],
        fiber: FiberSpec::new(["a", "v"]),
        reference: String::from("1"),
        transitions: vec![
            // (x,y,a,v) -> (1/x, y/x^2, a/x, v/x^3)
            transition("1", "2", &[&[-1, 0], &[-2, 1]], &[-1, 0], &[-3, 0]),
            // (x,y,a,v) -> (x, 1/y, a/y, v/y)
            transition("1", "3", &[&[1, 0], &[0, -1]], &[0, -1], &[0, -1]),
            // (x,y,a,v) -> (1/x, 1/(x^2*y), a/(x*y), v/(x^3*y))
            transition("1", "4", &[&[-1, 0], &[-2, -1]], &[-1, -1], &[-3, -1]),
        ],
        local_system: ExponentVector::new(
            vec![LinearForm::param(0), LinearForm::param(1)],
            vec![LinearForm::param(2), LinearForm::param(3)],
        ),
        central_cocycle: vec![
            (
                (String::from("1"), String::from("2")),
                MonomialMap::unit_from_i64(&[&[-3, 0]]),
            ),
            (
                (String::from("1"), String::from("3")),
                MonomialMap::unit_from_i64(&[&[0, -1]]),
            ),
            (
                (String::from("1"), String::from("4")),
                MonomialMap::unit_from_i64(&[&[-3, -1]]),
            ),
        ],
    };
    AtlasModel::new(data).expect("builtin model is valid")
}

/// Variable names of the builtin loop-group fixtures: the open-cell
/// coordinates `a_-1`, `a_0` and the chart coordinates `x`, `y`.
pub fn builtin_fixture_vars() -> Vec<String> {
    vec![
        String::from("a_-1"),
        String::from("a_0"),
        String::from("x"),
        String::from("y"),
    ]
}

const NV: usize = 4;
const A1: usize = 0;
const A0: usize = 1;
const X: usize = 2;
const Y: usize = 3;

fn c(n: i64) -> RatFunc {
    RatFunc::constant(NV, rat_int(n))
}

fn v(i: usize) -> RatFunc {
    RatFunc::var(NV, i)
}

fn inv(i: usize) -> RatFunc {
    v(i).recip().expect("variables are nonzero")
}

fn e(terms: &[(i64, RatFunc)]) -> ExactLaurent {
    ExactLaurent::new(terms.to_vec())
}

fn z() -> ExactLaurent {
    ExactLaurent::zero()
}

fn fixture(
    name: &str,
    subgroup: Subgroup,
    expect_equal: bool,
    lhs: [[ExactLaurent; 2]; 2],
    rhs: [[ExactLaurent; 2]; 2],
) -> LoopFixture {
    LoopFixture {
        name: String::from(name),
        subgroup,
        expect_equal,
        lhs,
        rhs,
    }
}

/// The open-cell family g = (t, a_-1 t^-1 + a_0; 0, t^-1).
fn open_cell() -> [[ExactLaurent; 2]; 2] {
    [
        [e(&[(1, c(1))]), e(&[(-1, v(A1)), (0, v(A0))])],
        [z(), e(&[(-1, c(1))])],
    ]
}

/// Bundled coset identities behind the chart and section data.
///
/// The `chartN-section` fixtures state that the section family `g * f_N`,
/// written in chart-N coordinates, agrees as a pro-unipotent coset with a
/// family that is manifestly regular at the chart boundary; they were found
/// by right-multiplication search and are validated, not assumed. The
/// `cell-limit-*` fixtures regularize the boundary limits of the open cell:
/// each left matrix equals the right family as an Iwahori coset on the locus
/// where the recorded denominators are invertible, and the right family
/// extends to the boundary value.
pub fn builtin_fixtures() -> Vec<LoopFixture> {
    // chart 1: f_1 = id, the section is the family itself
    let mut out = vec![fixture(
        "chart1-section-reflexive",
        Subgroup::IwahoriUnipotent,
        true,
        open_cell(),
        open_cell(),
    )];

    // chart 2: g*f_2 = (t/x, t^-1 + y/x; 0, x/t) with f_2 = diag(a_-1, 1/a_-1);
    // the right family (-1/y, t^-1; -x/y, x/t - y) is regular at x = 0
    out.push(fixture(
        "chart2-section",
        Subgroup::IwahoriUnipotent,
        true,
        [
            [e(&[(1, inv(X))]), e(&[(-1, c(1)), (0, v(Y).mul(&inv(X)))])],
            [z(), e(&[(-1, v(X))])],
        ],
        [
            [e(&[(0, inv(Y).neg())]), e(&[(-1, c(1))])],
            [
                e(&[(0, v(X).mul(&inv(Y)).neg())]),
                e(&[(-1, v(X)), (0, v(Y).neg())]),
            ],
        ],
    ));

    // chart 3: g*f_3 = (t/y, x*y*t^-1 + 1; 0, y/t) with f_3 = diag(a_0, 1/a_0);
    // the right family (-x, x*y*t^-1 + 1; -1, y/t) is regular at y = 0 where
    // it degenerates to the boundary value (-x, 1; -1, 0)
    out.push(fixture(
        "chart3-section",
        Subgroup::IwahoriUnipotent,
        true,
        [
            [e(&[(1, inv(Y))]), e(&[(-1, v(X).mul(&v(Y))), (0, c(1))])],
            [z(), e(&[(-1, v(Y))])],
        ],
        [
            [
                e(&[(0, v(X).neg())]),
                e(&[(-1, v(X).mul(&v(Y))), (0, c(1))]),
            ],
            [e(&[(0, c(-1))]), e(&[(-1, v(Y))])],
        ],
    ));

    // chart 4: g*f_4 = (t/(x*y), y*t^-1 + 1/x; 0, x*y/t) with
    // f_4 = diag(a_0/a_-1, a_-1/a_0); the right family
    // (-1, y*t^-1; -x, x*y*t^-1 - 1) is polynomial in both chart coordinates
    out.push(fixture(
        "chart4-section",
        Subgroup::IwahoriUnipotent,
        true,
        [
            [
                e(&[(1, inv(X).mul(&inv(Y)))]),
                e(&[(-1, v(Y)), (0, inv(X))]),
            ],
            [z(), e(&[(-1, v(X).mul(&v(Y)))])],
        ],
        [
            [e(&[(0, c(-1))]), e(&[(-1, v(Y))])],
            [
                e(&[(0, v(X).neg())]),
                e(&[(-1, v(X).mul(&v(Y))), (0, c(-1))]),
            ],
        ],
    ));

    // (1, a_-1 t^-1; 0, 1) ~ (0, t^-1; -t, 1/a_-1) over a_-1 != 0
    out.push(fixture(
        "cell-limit-row1",
        Subgroup::Iwahori,
        true,
        [[e(&[(0, c(1))]), e(&[(-1, v(A1))])], [z(), e(&[(0, c(1))])]],
        [
            [z(), e(&[(-1, c(1))])],
            [e(&[(1, c(-1))]), e(&[(0, inv(A1))])],
        ],
    ));

    // (t, a_-1 t^-1; 0, t^-1) ~ (0, t^-1; -t, t^-1/a_-1)
    out.push(fixture(
        "cell-limit-row2",
        Subgroup::Iwahori,
        true,
        [
            [e(&[(1, c(1))]), e(&[(-1, v(A1))])],
            [z(), e(&[(-1, c(1))])],
        ],
        [
            [z(), e(&[(-1, c(1))])],
            [e(&[(1, c(-1))]), e(&[(-1, inv(A1))])],
        ],
    ));

    // (t, a_0; 0, t^-1) ~ (0, 1; -1, t^-1/a_0)
    out.push(fixture(
        "cell-limit-row3",
        Subgroup::Iwahori,
        true,
        [[e(&[(1, c(1))]), e(&[(0, v(A0))])], [z(), e(&[(-1, c(1))])]],
        [
            [z(), e(&[(0, c(1))])],
            [e(&[(0, c(-1))]), e(&[(-1, inv(A0))])],
        ],
    ));

    // (a_0, 1; -1, 0) ~ (1, 0; -1/a_0, 1), the identity-coset limit
    out.push(fixture(
        "cell-limit-row4",
        Subgroup::Iwahori,
        true,
        [[e(&[(0, v(A0))]), e(&[(0, c(1))])], [e(&[(0, c(-1))]), z()]],
        [
            [e(&[(0, c(1))]), z()],
            [e(&[(0, inv(A0).neg())]), e(&[(0, c(1))])],
        ],
    ));

    // the full open cell against its a_0-regularized family
    out.push(fixture(
        "cell-limit-full",
        Subgroup::Iwahori,
        true,
        open_cell(),
        [
            [
                e(&[(0, v(A1).neg())]),
                e(&[(-1, v(A1).mul(&inv(A0))), (0, c(1))]),
            ],
            [e(&[(0, c(-1))]), e(&[(-1, inv(A0))])],
        ],
    ));

    // the two row families share a limit but are distinct cosets
    out.push(fixture(
        "distinct-cosets-equal-limits",
        Subgroup::Iwahori,
        false,
        [[e(&[(0, c(1))]), e(&[(-1, v(A1))])], [z(), e(&[(0, c(1))])]],
        [
            [e(&[(1, c(1))]), e(&[(-1, v(A1))])],
            [z(), e(&[(-1, c(1))])],
        ],
    ));

    // the row-4 pair differs by the diagonal torus factor, so it is not a
    // pro-unipotent coset identity
    out.push(fixture(
        "central-torus-defect",
        Subgroup::IwahoriUnipotent,
        false,
        [[e(&[(0, v(A0))]), e(&[(0, c(1))])], [e(&[(0, c(-1))]), z()]],
        [
            [e(&[(0, c(1))]), z()],
            [e(&[(0, inv(A0).neg())]), e(&[(0, c(1))])],
        ],
    ));

    out
}

/// Number of fixture variables; fixtures materialize over this many names.
pub fn builtin_fixture_nvars() -> usize {
    NV
}
