use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use polarize_core::exactalg::{char_poly, int, QMatrix, QPoly};
use polarize_core::nslattice::{
    example_ex1_report, intersect, is_ample, is_nef, pullback_action, quotient_image_selfintersection,
    ramification_budget, BudgetVerdict, DivisorClassVector, NsVerdict, QuotientImage, PICARD_NUMBER,
};
use polarize_core::{NsError, SymClass};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;

fn mat(a: i64, b: i64, c: i64, d: i64) -> QMatrix {
    QMatrix::from_ints(&[vec![a, b], vec![c, d]])
}

fn det2(a: &QMatrix) -> BigInt {
    a.det().unwrap().to_integer()
}

#[test]
fn example_report_golden() {
    let r = example_ex1_report().unwrap();
    assert_eq!(r.char_poly, QPoly::from_ints(&[-216, -12, 2, 1]));
    assert_eq!(r.rho, PICARD_NUMBER);
    assert_eq!(r.real_eigenvalues, 1);
    assert_eq!(r.spectral_radius, Some(int(6)));
    assert!(r.spectral_radius_squared.equals_rational(&int(36)));
    assert_eq!(r.deg_f, BigInt::from(36));
    match &r.verdict {
        NsVerdict::Polarized { q, witness, witness_ample } => {
            assert_eq!(q, &int(6));
            assert_eq!(witness, &SymClass::new(1, 0, 5));
            assert!(witness_ample);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn fibre_image_is_not_ample() {
    let QuotientImage::Derived { image_sq_sign, image_sq, ample_possible } =
        quotient_image_selfintersection(&BigInt::zero(), true)
    else {
        panic!()
    };
    assert_eq!(image_sq_sign, Ordering::Equal);
    assert_eq!(image_sq, Some(BigInt::zero()));
    assert!(!ample_possible);
    assert_eq!(quotient_image_selfintersection(&BigInt::zero(), false), QuotientImage::Unknown);
}

#[test]
fn ramification_budget_examples() {
    let k = DivisorClassVector(vec![int(-1), int(0)]);
    let d = DivisorClassVector(vec![int(1), int(0)]);
    let b = ramification_budget(&BigInt::from(4), &k, &d, 3, 2, 2).unwrap();
    assert_eq!(b.verdict, BudgetVerdict::CalabiYauCandidate);
    assert_eq!(b.ramification_class.0, vec![int(3), int(0)]);
    assert!(b.bound_ok);
    let short = DivisorClassVector(vec![int(1)]);
    assert!(matches!(ramification_budget(&BigInt::from(4), &k, &short, 3, 2, 2), Err(NsError::AmbientMismatch(_))));
}

#[test]
fn projection_formula_seeded() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut r = || rng.gen_range(-9i64..=9);
    for _ in 0..100 {
        let a = mat(r(), r(), r(), r());
        let h1 = SymClass::new(r(), r(), r());
        let h2 = SymClass::new(r(), r(), r());
        let d = det2(&a);
        assert_eq!(intersect(&h1.pullback(&a), &h2.pullback(&a)), &d * &d * intersect(&h1, &h2));
    }
}

#[test]
fn singular_and_non_integral_rejected() {
    assert_eq!(pullback_action(&mat(1, 2, 2, 4)).unwrap_err(), NsError::SingularEndomorphism);
    assert_eq!(pullback_action(&QMatrix::identity(3)).unwrap_err(), NsError::NotIntegral2x2);
}

fn class() -> impl Strategy<Value = SymClass> {
    (-6i64..=6, -6i64..=6, -6i64..=6).prop_map(|(a, b, c)| SymClass::new(a, b, c))
}

fn endo() -> impl Strategy<Value = QMatrix> {
    (-4i64..=4, -4i64..=4, -4i64..=4, -4i64..=4)
        .prop_map(|(a, b, c, d)| mat(a, b, c, d))
        .prop_filter("invertible", |m| !m.det().unwrap().is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn intersection_is_symmetric_bilinear(h1 in class(), h2 in class(), h3 in class(), s in -3i64..=3) {
        prop_assert_eq!(intersect(&h1, &h2), intersect(&h2, &h1));
        let sum = SymClass::new(&h1.a * s + &h3.a, &h1.b * s + &h3.b, &h1.c * s + &h3.c);
        prop_assert_eq!(intersect(&sum, &h2), intersect(&h1, &h2) * s + intersect(&h3, &h2));
        // self-intersection is twice the determinant
        prop_assert_eq!(intersect(&h1, &h1), h1.det() * 2);
    }

    #[test]
    fn ns_determinant_is_cube(a in endo()) {
        let act = pullback_action(&a).unwrap();
        let d = det2(&a);
        prop_assert_eq!(act.ns_matrix.det().unwrap().to_integer(), &d * &d * &d);
        prop_assert_eq!(char_poly(&act.ns_matrix).unwrap().degree(), Some(3));
    }

    #[test]
    fn pullback_preserves_nef_and_ample(a in endo(), h in class()) {
        let p = h.pullback(&a);
        prop_assert_eq!(is_nef(&h), is_nef(&p));
        prop_assert_eq!(is_ample(&h), is_ample(&p));
        prop_assert!(!is_ample(&h) || is_nef(&h));
    }

    #[test]
    fn ns_matrix_matches_pullback(a in endo(), h in class()) {
        let act = pullback_action(&a).unwrap();
        prop_assert_eq!(act.ns_matrix.mul_vec(&h.coords()), h.pullback(&a).coords());
        prop_assert!(h.pullback(&a).det().abs() == (h.det() * det2(&a) * det2(&a)).abs());
    }
}
