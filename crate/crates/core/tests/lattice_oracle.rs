//! The reachability oracle against the closed form it must reproduce, plus
//! agreement with the criterion engine on the builtin model.

use flagclean_core::builtin::builtin_sl2;
use flagclean_core::lattice::{
    grid_values, is_clean_oracle, is_simple, oracle_grid, oracle_vs_criterion, required_window,
    submodule_support, OracleError,
};
use flagclean_core::rat::{rat, rat_int, Rat};
use flagclean_core::symcore::Assignment;

use std::collections::BTreeSet;
use std::vec::Vec;

fn closed_form(mu: &[Rat]) -> bool {
    mu.iter().all(|m| !m.is_integer())
}

#[test]
fn oracle_reproduces_the_closed_form_on_small_grids() {
    let values = grid_values(5, 2);
    // one dimension, exhaustive
    for v in &values {
        let mu = [v.clone()];
        let b = required_window(&mu);
        assert_eq!(is_simple(&mu, b), Ok(closed_form(&mu)), "mu = {v}");
        assert_eq!(is_simple(&mu, 2 * b), Ok(closed_form(&mu)), "mu = {v}");
    }
    // two dimensions, exhaustive
    for v in &values {
        for w in &values {
            let mu = [v.clone(), w.clone()];
            let b = required_window(&mu);
            assert_eq!(is_simple(&mu, b), Ok(closed_form(&mu)), "mu = ({v},{w})");
        }
    }
    // three dimensions, deterministically strided
    let mut count = 0usize;
    for (i, v) in values.iter().enumerate() {
        for (j, w) in values.iter().enumerate() {
            for (k, u) in values.iter().enumerate() {
                if (i + 3 * j + 7 * k) % 41 != 0 {
                    continue;
                }
                count += 1;
                let mu = [v.clone(), w.clone(), u.clone()];
                let b = required_window(&mu);
                assert_eq!(is_simple(&mu, b), Ok(closed_form(&mu)));
            }
        }
    }
    assert!(count > 500, "sampled {count} triples");
}

#[test]
fn window_doubling_is_stable() {
    for mu in [
        vec![rat(1, 2), rat(1, 3)],
        vec![rat_int(2), rat(1, 2)],
        vec![rat(-5, 3)],
        vec![rat_int(0), rat_int(1), rat(3, 4)],
    ] {
        let b = required_window(&mu);
        assert_eq!(is_simple(&mu, b), is_simple(&mu, 2 * b), "mu = {mu:?}");
    }
}

#[test]
fn duality_symmetry() {
    let values = grid_values(4, 2);
    for v in &values {
        for w in &values {
            let mu = [v.clone(), w.clone()];
            let neg = [-v, -w];
            let b = required_window(&mu);
            assert_eq!(
                is_clean_oracle(&mu, b),
                is_clean_oracle(&neg, b),
                "mu = ({v},{w})"
            );
        }
    }
}

#[test]
fn edge_soundness_via_supports() {
    // a blocked descent is exactly a missing edge
    let sup = submodule_support(&[rat_int(0), rat(1, 2)], &[1, 0], 4).unwrap();
    assert!(sup.contains(&vec![1, -4]));
    assert!(sup.contains(&vec![4, 4]));
    assert!(
        !sup.contains(&vec![-1, 0]),
        "descent past the wall at w1 = 0"
    );

    // where no coefficient vanishes the support is the full window
    let sup = submodule_support(&[rat(1, 2), rat(1, 2)], &[0, 0], 3).unwrap();
    assert_eq!(sup.len(), 49);

    let err = submodule_support(&[rat(1, 2)], &[9], 4);
    assert_eq!(err, Err(OracleError::StartOutsideWindow));
}

#[test]
fn eigenvalue_tuples_are_pairwise_distinct() {
    let mu = [rat(1, 3), rat(-7, 2)];
    let bound = 3i64;
    let mut seen = BTreeSet::new();
    for w1 in -bound..=bound {
        for w2 in -bound..=bound {
            let tuple = vec![&mu[0] + rat_int(w1), &mu[1] + rat_int(w2)];
            assert!(seen.insert(tuple), "collision at ({w1},{w2})");
        }
    }
    assert_eq!(seen.len(), 49);
}

#[test]
fn agreement_on_hand_picked_assignments() {
    let m = builtin_sl2();

    let report = oracle_vs_criterion(
        &m,
        &Assignment::from_values(&[rat(1, 2), rat(1, 3), rat_int(0), rat_int(0)]),
        16,
    )
    .unwrap();
    assert!(report.agree());
    assert!(report.criterion_clean);
    assert!(report.charts.iter().all(|c| c.clean));

    // mu_-1 = mu_0 = Lambda = 1/2: charts 2, 3 and 4 all see an integer
    let report = oracle_vs_criterion(
        &m,
        &Assignment::from_values(&[rat(1, 2), rat(1, 2), rat(1, 2), rat_int(0)]),
        16,
    )
    .unwrap();
    assert!(report.agree());
    assert!(!report.criterion_clean);
    let clean_by_chart: Vec<bool> = report.charts.iter().map(|c| c.clean).collect();
    assert_eq!(clean_by_chart, [true, false, false, false]);
    // chart 3 exponents evaluate to (1/2, -3/2 - ... ) = (1/2, -3/2)? no:
    // (mu_-1, -mu_0-Lambda-kappa) = (1/2, -1)
    assert_eq!(report.charts[2].exponents, [rat(1, 2), rat_int(-1)]);
}

#[test]
fn small_grid_agrees_everywhere() {
    let m = builtin_sl2();
    let values = grid_values(2, 1);
    let outcome = oracle_grid(&m, &values, 8, 600).unwrap();
    assert!(outcome.cases > 0);
    assert!(
        outcome.all_agree(),
        "disagreements: {:?}",
        outcome.disagreements
    );
}

#[test]
fn large_transported_exponents_widen_the_window() {
    let m = builtin_sl2();
    // at the grid corner the chart-2 exponent is -21; a bare window of 16
    // would be unsound, so the per-chart window must have been widened
    let report = oracle_vs_criterion(
        &m,
        &Assignment::from_values(&[rat_int(3), rat_int(3), rat_int(3), rat_int(3)]),
        16,
    )
    .unwrap();
    assert!(report.agree());
    assert!(!report.criterion_clean);
    assert!(report.charts.iter().any(|c| c.window > 16));
}
