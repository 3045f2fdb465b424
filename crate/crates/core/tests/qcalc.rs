use std::str::FromStr;

use qsep_core::qcalc::*;
use qsep_core::{rat, rint, CPoly, RPoly, Rat};

fn p(c: &[i64]) -> RPoly {
    RPoly::from_ints(c)
}

fn q(n: i64, d: i64) -> QParam {
    QParam::ratio(n, d)
}

fn rp(v: &[(i64, i64)]) -> RPoly {
    RPoly::new(v.iter().map(|&(a, b)| rat(a, b)).collect())
}

#[test]
fn q_binomial_frozen_values() {
    assert_eq!(q_binomial(3, 1, &q(1, 2)).unwrap(), rat(7, 4));
    assert_eq!(q_binomial(7, 3, &QParam::one()).unwrap(), rint(35));
    assert_eq!(q_binomial(5, 0, &q(1, 3)).unwrap(), rint(1));
    // Independent oracle (sympy) at q = 9/10.
    let c5 = Rat::from_str("53801047441604637178699313993514804224764061859/1000000000000000000000000000000000000000000000").unwrap();
    assert_eq!(q_binomial(12, 5, &q(9, 10)).unwrap(), c5);
    assert!(q_binomial(3, 4, &q(1, 2)).is_err());
}

#[test]
fn q_binomial_at_zero() {
    let zero = q(0, 1);
    let row: Vec<Rat> = (0..=4).map(|k| q_binomial(4, k, &zero).unwrap()).collect();
    assert_eq!(row, vec![rint(1), rint(1), rint(0), rint(0), rint(0)]);
    assert_eq!(r_poly(4, &zero), p(&[1, 1]));
}

#[test]
fn explicit_form_matches_product() {
    for qq in [q(1, 5), q(1, 3), q(1, 2), q(9, 10), QParam::one()] {
        for n in 0..=12usize {
            let r = r_poly(n, &qq);
            let row = q_binomial_row(n, &qq);
            for k in 0..=n {
                let c = q_binomial(n as i64, k as i64, &qq).unwrap();
                assert_eq!(r.coeff(k), c);
                assert_eq!(row[k], c);
            }
        }
    }
}

#[test]
fn r_poly_values() {
    assert_eq!(r_poly(3, &q(1, 2)), rp(&[(1, 1), (7, 4), (7, 8), (1, 8)]));
    assert_eq!(r_poly(3, &QParam::one()), p(&[1, 3, 3, 1]));
    assert_eq!(r_poly(0, &q(1, 2)), p(&[1]));
}

#[test]
fn difference_operators() {
    let half = q(1, 2);
    let f = &p(&[1, 1]) * &rp(&[(1, 1), (1, 4)]);
    assert_eq!(q_diff(&f, 2, &half).unwrap(), rp(&[(5, 6), (1, 2)]));
    for n in 1..=6 {
        for qq in [q(1, 3), q(3, 4), QParam::one()] {
            assert_eq!(q_diff(&r_poly(n, &qq), n, &qq).unwrap(), r_poly(n - 1, &qq));
            assert_eq!(q_diff_star(&r_poly(n, &qq), n, &qq).unwrap(), r_poly(n - 1, &qq));
        }
    }
    let g = p(&[3, -2, 0, 7]);
    assert_eq!(q_diff(&g, 3, &QParam::one()).unwrap(), g.derivative().scale(&rat(1, 3)));
    // sympy oracle at q = 1/3 for F = 3 - 2z + 5/7 z^2 + z^3.
    let f = rp(&[(3, 1), (-2, 1), (5, 7), (1, 1)]);
    assert_eq!(q_diff(&f, 3, &q(1, 3)).unwrap(), rp(&[(-18, 13), (180, 91), (9, 1)]));
    assert_eq!(q_diff_star(&f, 3, &q(1, 3)).unwrap(), rp(&[(3, 1), (-24, 13), (45, 91)]));
    assert!(q_diff(&f, 3, &q(0, 1)).is_err());
    assert!(q_diff(&f, 2, &half).is_err());
}

#[test]
fn reversal_identity() {
    let f = rp(&[(3, 1), (-2, 1), (5, 7), (1, 1)]);
    for qq in [q(1, 3), q(3, 4)] {
        let n = 3;
        let lhs = q_diff(&f, n, &qq).unwrap().reverse_n(n - 1).unwrap();
        let star = q_diff_star(&f.reverse_n(n).unwrap(), n, &qq).unwrap();
        let factor = -qsep_core::polycore::rat_pow(qq.get(), 1 - n as i64);
        let rhs = star.compose_scale(qq.get()).scale(&factor);
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn hadamard_identities() {
    let qq = q(2, 5);
    let f = p(&[2, -1, 4]);
    let h = p(&[1, 3, -2, 5]);
    assert_eq!(hadamard_q(&f, &r_poly(2, &qq), 2, &qq).unwrap(), f);
    let left = hadamard_q(&q_diff_star(&h, 3, &qq).unwrap(), &f, 2, &qq).unwrap();
    assert_eq!(left, hadamard_q(&h, &f, 3, &qq).unwrap());
    let zl = hadamard_q(&q_diff(&h, 3, &qq).unwrap(), &f, 2, &qq).unwrap().shift_up(1);
    assert_eq!(zl, hadamard_q(&h, &f.shift_up(1), 3, &qq).unwrap());
    assert!(hadamard_q(&f, &f, 2, &q(0, 1)).is_err());
}

#[test]
fn q_basis_roundtrip() {
    let qq = q(1, 3);
    let v = to_q_basis(&r_poly(5, &qq), 5, &qq).unwrap();
    assert!(v.a.iter().all(|a| *a == rint(1)));
    let f = p(&[4, 0, -3, 1]);
    assert_eq!(from_q_basis(&to_q_basis(&f, 5, &qq).unwrap()), f);
}

#[test]
fn separation_examples() {
    use qsep_core::realroots::isolate_real_roots;
    let half = q(1, 2);
    let iso = isolate_real_roots(&RPoly::from_roots(rint(1), &[rint(-1), rint(-3)]), None).unwrap();
    assert!(strict_q_separation(&iso, &half, true).is_ok());
    let iso = isolate_real_roots(&r_poly(3, &half), None).unwrap();
    assert!(strict_q_separation(&iso, &half, true).is_err());
    assert!(strict_q_separation(&iso, &half, false).is_ok());
    let iso = isolate_real_roots(&RPoly::from_roots(rint(1), &[rint(-1), rint(2)]), None).unwrap();
    assert!(strict_q_separation(&iso, &q(99, 100), true).is_ok());
    // Irrational zeros +-sqrt(2), +-sqrt(2)/2: equal ratio detected by the gcd test.
    let f = &p(&[-2, 0, 1]) * &p(&[-1, 0, 2]);
    let iso = isolate_real_roots(&f, None).unwrap();
    assert!(strict_q_separation(&iso, &half, true).is_err());
    assert!(strict_q_separation(&iso, &half, false).is_ok());
    assert!(strict_q_separation(&iso, &q(49, 100), false).is_err());
}

#[test]
fn membership_examples() {
    let half = q(1, 2);
    let r3 = r_poly(3, &half);
    let v = class_membership(&r3, 3, &half, QClass::ClosureN);
    assert!(v.member && v.route_agreement);
    let v = class_membership(&r3, 3, &half, QClass::N);
    assert!(!v.member && v.route_agreement);
    assert!(matches!(v.witness, Some(MembershipWitness::Ratio { equal: true, .. })));
    let f = &p(&[1, 1]) * &p(&[1, 3]);
    let v = class_membership(&f, 2, &half, QClass::N);
    assert!(v.member && v.route_agreement);
    for cls in QClass::ALL {
        assert!(class_membership(&RPoly::zero(), 4, &half, cls).member);
    }
    // The q = 0 classes are the monomials.
    let zero = q(0, 1);
    assert!(class_membership(&p(&[0, 0, 3]), 3, &zero, QClass::N).member);
    assert!(!class_membership(&p(&[1, 0, -1]), 3, &zero, QClass::ClosureR).member);
    // q = 1: closed class is every real-rooted polynomial.
    assert!(class_membership(&p(&[1, 2, 1]), 2, &QParam::one(), QClass::ClosureR).member);
    assert!(!class_membership(&p(&[1, 2, 1]), 2, &QParam::one(), QClass::R).member);
    assert!(class_membership(&p(&[0, 0, 1, 1]), 3, &QParam::one(), QClass::N).member);
    assert!(!class_membership(&p(&[1, 0, 1]), 2, &half, QClass::ClosureR).member);
    assert!(!class_membership(&p(&[-1, 1]), 2, &half, QClass::ClosureN).member);
}

#[test]
fn extremal_detection() {
    let half = q(1, 2);
    assert_eq!(is_extremal(&r_poly(4, &half), 4, &half, QClass::ClosureN), Some(rint(1)));
    let scaled = r_poly(3, &half).compose_scale(&rint(2)).scale(&rint(5));
    assert_eq!(is_extremal(&scaled, 3, &half, QClass::ClosureR), Some(rint(2)));
    let neg = r_poly(3, &half).compose_scale(&rint(-2));
    assert_eq!(is_extremal(&neg, 3, &half, QClass::ClosureR), Some(rint(-2)));
    assert_eq!(is_extremal(&neg, 3, &half, QClass::ClosureN), None);
    assert_eq!(is_extremal(&(&p(&[1, 1]) * &p(&[1, 3])), 2, &half, QClass::ClosureR), None);
}

#[test]
fn half_plane_class() {
    let one = QParam::one();
    let pc = CPoly::from_parts(&p(&[1, 1]), &p(&[1, 2]));
    assert!(u_class_membership(&pc, 1, &one).member);
    let f = p(&[1, 1]);
    assert!(!u_class_membership(&CPoly::from_parts(&f, &f), 1, &one).member);
    // Real P with F in sigma_n: the zero partner is allowed.
    assert!(u_class_membership(&CPoly::from_parts(&f, &RPoly::zero()), 1, &one).member);
    let sq = p(&[1, 2, 1]);
    assert!(!u_class_membership(&CPoly::from_parts(&sq, &RPoly::zero()), 2, &one).member);
}
