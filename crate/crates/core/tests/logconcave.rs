use qsep_core::logconcave::*;
use qsep_core::qcalc::{class_membership, QClass, QParam};
use qsep_core::realroots::isolate_real_roots;
use qsep_core::{rat, rint, Rat};

fn ints(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| rint(x)).collect()
}

#[test]
fn strict_log_concavity_examples() {
    assert!(is_strictly_log_concave(&ints(&[1, 2, 1])).holds);
    let v = is_strictly_log_concave(&ints(&[1, 1, 1]));
    assert_eq!((v.holds, v.failing_index), (false, Some(1)));
    assert_eq!(is_strictly_log_concave(&ints(&[1, 0, 1])).failing_index, Some(1));
    assert!(is_strictly_log_concave(&ints(&[1, 0, -1])).holds);
    // Zeros outside the support envelope are exempt.
    assert!(is_strictly_log_concave(&ints(&[0, 0, 1, 3, 1, 0])).holds);
    let halves = vec![rat(1, 2), rat(1, 3), rat(1, 2)];
    assert!(!is_strictly_log_concave(&halves).holds);
}

#[test]
fn plus_variant() {
    assert!(is_log_concave_plus(&ints(&[1, 2, 1])).holds);
    assert!(is_log_concave_plus(&ints(&[-1, -2, -1])).holds);
    let v = is_log_concave_plus(&ints(&[1, 2, -1]));
    assert!(!v.holds && v.mixed_signs);
}

fn certified(a: &[Rat]) -> QCertificate {
    match find_q_certificate(a, &default_floor(), DEFAULT_DEPTH).unwrap() {
        CertificateOutcome::Certified(c) => c,
        other => panic!("expected a certificate, got {other:?}"),
    }
}

#[test]
fn certificate_for_binomial_row() {
    // At q = 1 the polynomial is 1 + 4z + z^2 with simple negative zeros.
    let c = certified(&ints(&[1, 2, 1]));
    assert_eq!(c.cls, QClass::N);
    assert!(c.q.is_one());
    assert!(class_membership(&c.poly, 2, &c.q, QClass::N).member);
    // A sequence that is log-concave by a small margin needs a small q.
    let hard = ints(&[1, 8, 13, 21, 3]);
    let c = certified(&hard);
    assert!(c.q.get() < &rat(1, 256) && c.q.get() > &rat(1, 1024), "q = {}", c.q);
    assert!(class_membership(&c.poly, 4, &c.q, QClass::N).member);
}

#[test]
fn certificate_with_mixed_signs() {
    let c = certified(&ints(&[1, 0, -1]));
    assert_eq!(c.cls, QClass::R);
    assert!(c.q.is_one());
}

#[test]
fn certificate_scale_equivariance() {
    let a = ints(&[2, 7, 5, 1]);
    let b: Vec<Rat> = a.iter().map(|x| x * rat(-3, 2)).collect();
    let ca = certified(&a);
    let cb = certified(&b);
    assert_eq!(ca.q, cb.q);
    assert!(ca.poly.proportional(&cb.poly));
}

#[test]
fn rejection_and_degenerate_inputs() {
    assert!(matches!(
        find_q_certificate(&ints(&[1, 1, 1]), &default_floor(), DEFAULT_DEPTH).unwrap(),
        CertificateOutcome::NotLogConcave { index: 1 }
    ));
    let c = certified(&ints(&[0, 0, 0]));
    assert!(c.poly.is_zero());
    assert!(find_q_certificate(&ints(&[1, 2, 1]), &rint(1), 5).is_err());
}

#[test]
fn floor_is_reported_separately() {
    let a = ints(&[1, 8, 13, 21, 3]);
    match find_q_certificate(&a, &rat(1, 16), 10).unwrap() {
        CertificateOutcome::FloorReached(d) => assert!(!d.probes.is_empty()),
        other => panic!("expected floor outcome, got {other:?}"),
    }
}

#[test]
fn small_q_predictions() {
    let p = small_q_prediction(&ints(&[1, 2, 1]), &rat(1, 64));
    assert_eq!(p, vec![-0.5, -128.0]);
    let p = small_q_prediction(&ints(&[1, 0, -1]), &rat(1, 64));
    assert_eq!(p, vec![-8.0, 8.0]);
    let scaled = small_q_prediction(&ints(&[3, 6, 3]), &rat(1, 64));
    assert_eq!(scaled, vec![-0.5, -128.0]);
}

#[test]
fn predictions_track_true_roots() {
    let a = ints(&[2, 7, 5, 1]);
    let mut last_err = f64::INFINITY;
    for t in [6, 10, 14] {
        let q = rat(1, 1 << t);
        let pred = small_q_prediction(&a, &q);
        let poly = q_poly(&a, &QParam::new(q.clone()).unwrap());
        let mut iso = isolate_real_roots(&poly, None).unwrap();
        let mut roots = Vec::new();
        for i in 0..iso.roots.len() {
            iso.refine_root(i, &rat(1, 1 << 30));
            roots.push(num_traits::ToPrimitive::to_f64(&iso.roots[i].loc.midpoint()).unwrap());
        }
        roots.sort_by(|x, y| y.partial_cmp(x).unwrap());
        let mut err = 0.0f64;
        for (r, p) in roots.iter().zip(&pred) {
            assert!(r / p > 0.5 && r / p < 2.0);
            err = err.max((r / p - 1.0).abs());
        }
        assert!(err < last_err);
        last_err = err;
    }
}

#[test]
fn half_plane_companion() {
    assert_eq!(hermite_biehler_check(&ints(&[1, 1, 1]), &QParam::ratio(1, 2)), HalfPlaneVerdict::NotOneHalfPlane);
    // At q = 1 the companion is F(z)(1 + iz), whose zeros are real, so the
    // cross-check runs at q = 1/2 where membership persists.
    let a = ints(&[2, 7, 5, 1]);
    let c = certified(&a);
    assert!(c.q.is_one());
    assert_eq!(hermite_biehler_check(&a, &c.q), HalfPlaneVerdict::NotOneHalfPlane);
    let v = hermite_biehler_check(&a, &QParam::ratio(1, 2));
    assert!(matches!(v, HalfPlaneVerdict::OneHalfPlane { .. } | HalfPlaneVerdict::Indeterminate), "{v:?}");
    let v = hermite_biehler_check(&ints(&[1, 3]), &QParam::ratio(1, 2));
    assert!(matches!(v, HalfPlaneVerdict::OneHalfPlane { .. }));
    // Tiny q stretches the coefficients over hundreds of binary orders.
    let v = hermite_biehler_check(&ints(&[1, 4, 6, 4, 1, 1, 1, 1, 1, 1, 1]), &QParam::new(rat(1, 1 << 20)).unwrap());
    assert_ne!(v, HalfPlaneVerdict::NumericFailure);
    let hard = ints(&[1, 8, 13, 21, 3]);
    let c = certified(&hard);
    let v = hermite_biehler_check(&hard, &c.q);
    assert!(matches!(v, HalfPlaneVerdict::OneHalfPlane { .. } | HalfPlaneVerdict::Indeterminate), "{v:?}");
}
