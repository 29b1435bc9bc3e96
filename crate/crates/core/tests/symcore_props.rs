//! Property tests for the monomial-map groupoid and form normalization.

use flagclean_core::rat::{rat, rat_int, Rat};
use flagclean_core::symcore::{Assignment, LinearForm, MonomialMap};

use num_traits::One;
use proptest::prelude::*;

/// Random unimodular monomial maps as words in elementary operations:
/// start from the identity exponent matrix and apply row additions, swaps,
/// and negations, so the determinant stays +-1 by construction. Coefficients
/// are small nonzero rationals.
fn unimodular_map(dim: usize) -> impl Strategy<Value = MonomialMap> {
    let ops = prop::collection::vec((0..3u8, 0..dim, 0..dim, -2i64..=2), 0..8);
    let coeffs = prop::collection::vec((prop_oneof![1i64..=3, -3i64..=-1], 1i64..=3), dim);
    (ops, coeffs).prop_map(move |(ops, coeffs)| {
        let mut rows: Vec<Vec<i64>> = (0..dim)
            .map(|i| (0..dim).map(|j| i64::from(i == j)).collect())
            .collect();
        for (kind, r, s, k) in ops {
            match kind {
                0 => {
                    if r != s {
                        let src = rows[s].clone();
                        rows[r].iter_mut().zip(&src).for_each(|(a, b)| *a += k * b);
                    }
                }
                1 => rows.swap(r, s),
                _ => {
                    for e in &mut rows[r] {
                        *e = -*e;
                    }
                }
            }
        }
        let coeffs: Vec<Rat> = coeffs.into_iter().map(|(n, d)| rat(n, d)).collect();
        let rows: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        let exps = MonomialMap::unit_from_i64(&rows);
        MonomialMap::new(dim, coeffs, exps.exponents().to_vec()).expect("nonzero coefficients")
    })
}

fn small_rat() -> impl Strategy<Value = Rat> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn linear_form() -> impl Strategy<Value = LinearForm> {
    (prop::collection::vec(small_rat(), 3), small_rat()).prop_map(|(coeffs, c)| {
        let mut f = LinearForm::constant(c);
        for (i, v) in coeffs.into_iter().enumerate() {
            f.set_coeff(i, v);
        }
        f
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn composition_is_associative(
        f in unimodular_map(3),
        g in unimodular_map(3),
        h in unimodular_map(3),
    ) {
        let left = f.compose(&g).unwrap().compose(&h).unwrap();
        let right = f.compose(&g.compose(&h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn identity_and_inverse_laws(f in unimodular_map(3)) {
        let id = MonomialMap::identity(3);
        prop_assert_eq!(f.compose(&id).unwrap(), f.clone());
        prop_assert_eq!(id.compose(&f).unwrap(), f.clone());
        let inv = f.inverse().unwrap();
        prop_assert_eq!(f.compose(&inv).unwrap(), MonomialMap::identity(3));
        prop_assert_eq!(inv.compose(&f).unwrap(), MonomialMap::identity(3));
    }

    #[test]
    fn pullback_is_contravariantly_functorial(
        f in unimodular_map(3),
        g in unimodular_map(3),
        forms in prop::collection::vec(linear_form(), 3),
    ) {
        let composed = f.compose(&g).unwrap().pullback(&forms).unwrap();
        let staged = g.pullback(&f.pullback(&forms).unwrap()).unwrap();
        prop_assert_eq!(composed, staged);
    }

    #[test]
    fn normalization_is_constant_on_sign_and_shift_orbits(
        f in linear_form(),
        shift in -5i64..=5,
        flip in any::<bool>(),
    ) {
        let mut g = if flip { -&f } else { f.clone() };
        g.set_constant(g.constant_term() + rat_int(shift));
        prop_assert_eq!(g.normalized(), f.normalized());
        // idempotence
        let n = f.normalized();
        prop_assert_eq!(n.normalized(), n);
    }

    #[test]
    fn normalization_preserves_integrality(
        f in linear_form(),
        values in prop::collection::vec(small_rat(), 3),
    ) {
        let a = Assignment::from_values(&values);
        prop_assert_eq!(
            f.is_integral_at(&a).unwrap(),
            f.normalized().is_integral_at(&a).unwrap()
        );
    }

    #[test]
    fn inverse_coefficients_are_exact(f in unimodular_map(2)) {
        let inv = f.inverse().unwrap();
        for c in inv.coeffs() {
            prop_assert!(!c.numer().is_one() || !c.denom().is_one() || c.is_one());
        }
        prop_assert_eq!(inv.inverse().unwrap(), f);
    }
}
