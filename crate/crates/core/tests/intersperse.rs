use qsep_core::intersperse::{
    mobius_psi, mobius_psi_inv, partial_fractions, relation, t_relation, veebar_by_alternation, wronskian, RelationKind,
};
use qsep_core::polycore::gauss;
use qsep_core::{rat, rint, CPoly, RPoly};

fn p(c: &[i64]) -> RPoly {
    RPoly::from_ints(c)
}

fn holds(f: &RPoly, g: &RPoly, k: RelationKind) -> bool {
    relation(f, g, k).unwrap().holds
}

#[test]
fn wronskian_of_linear_pair() {
    assert_eq!(wronskian(&p(&[2, 1]), &p(&[1, 1])), p(&[-1]));
}

#[test]
fn left_zeros_precede() {
    let f = p(&[2, 1]);
    let g = p(&[1, 1]);
    assert!(holds(&f, &g, RelationKind::Prec));
    assert!(!holds(&g, &f, RelationKind::Preceq));
    // Interlacing quadratics: zeros -4, -1 against -2, 0.
    let a = RPoly::from_roots(rint(1), &[rint(-4), rint(-1)]);
    let b = RPoly::from_roots(rint(1), &[rint(-2), rint(0)]);
    assert!(holds(&a, &b, RelationKind::Prec));
    assert!(!holds(&a, &a, RelationKind::Prec));
    assert!(holds(&a, &a, RelationKind::Preceq));
}

#[test]
fn zero_conventions() {
    let sq = p(&[1, 2, 1]);
    assert!(holds(&RPoly::zero(), &sq, RelationKind::Preceq));
    assert!(!holds(&RPoly::zero(), &sq, RelationKind::Prec));
    assert!(holds(&RPoly::zero(), &p(&[0, 0, 1]), RelationKind::Prec0));
    assert!(!holds(&RPoly::zero(), &sq, RelationKind::Prec0));
    assert!(!holds(&RPoly::zero(), &p(&[0, 0, 1]), RelationKind::Prec));
    assert!(holds(&RPoly::zero(), &p(&[0, 1]), RelationKind::Prec));
    // Constants against constants: W vanishes, so strict fails.
    assert!(!holds(&p(&[1]), &p(&[2]), RelationKind::Prec));
}

#[test]
fn common_zero_off_origin_breaks_prec0() {
    let f = RPoly::from_roots(rint(1), &[rint(-3), rint(-1)]);
    let g = RPoly::from_roots(rint(1), &[rint(-2), rint(-1)]);
    assert!(holds(&f, &g, RelationKind::Preceq));
    assert!(!holds(&f, &g, RelationKind::Prec0));
    let f0 = RPoly::from_roots(rint(1), &[rint(-3), rint(0)]);
    let g0 = RPoly::from_roots(rint(1), &[rint(-2), rint(0)]);
    assert!(holds(&f0, &g0, RelationKind::Prec0));
}

#[test]
fn veebar_examples() {
    // F = 1, G = -(z - a)(z - b) with a < 0 < b.
    let g = RPoly::from_roots(rint(-1), &[rint(-2), rint(3)]);
    assert!(veebar_by_alternation(&p(&[1]), &g).is_none());
    assert!(holds(&p(&[1]), &g, RelationKind::Veebar));
    assert!(!holds(&p(&[1]), &-&g, RelationKind::Veebar));
    // F(z) against F(z/q) for F = (1+z)(1+z/4) at q = 1/2.
    let f = p(&[4, 5, 1]);
    let fq = f.compose_scale(&rint(2));
    assert!(holds(&f, &fq, RelationKind::Vee));
    assert!(holds(&f, &fq, RelationKind::Lhd));
    // Zeros -1 and -4 are not separated by the factor 1/2 when q = 1/8.
    let fq8 = f.compose_scale(&rint(8));
    assert!(!holds(&f, &fq8, RelationKind::Veebar));
}

#[test]
fn non_real_rooted_is_an_error() {
    assert!(relation(&p(&[1, 0, 1]), &p(&[1]), RelationKind::Preceq).is_err());
}

#[test]
fn partial_fraction_roundtrip() {
    let f = RPoly::from_roots(rint(1), &[rint(-2), rat(-1, 3), rint(1)]);
    let g = RPoly::from_roots(rint(-2), &[rint(-1), rint(0), rint(2), rint(5)]);
    let d = partial_fractions(&f, &g).unwrap();
    assert_eq!(d.reconstruct(&f), g);
    assert_eq!(d.c_infinity, rint(2));
}

#[test]
fn psi_worked_values() {
    let c = |v: &[(i64, i64)]| CPoly::new(v.iter().map(|&(a, b)| gauss(rint(a), rint(b))).collect());
    assert_eq!(mobius_psi(&c(&[(1, 0), (1, 0)]), 1).unwrap(), p(&[0, 2]));
    assert_eq!(mobius_psi(&c(&[(1, 0), (0, 0), (1, 0)]), 2).unwrap(), p(&[-2, 0, 2]));
    let h = c(&[(0, 1), (0, 0), (0, -1)]);
    let ph = mobius_psi(&h, 2).unwrap();
    assert_eq!(ph, p(&[0, -4]));
    assert_eq!(mobius_psi_inv(&ph, 2).unwrap(), h);
}

#[test]
fn circle_relation_from_real_pair() {
    let a = RPoly::from_roots(rint(1), &[rint(-4), rint(-1)]);
    let b = RPoly::from_roots(rint(1), &[rint(-2), rint(1)]);
    assert!(holds(&a, &b, RelationKind::Prec));
    let f = mobius_psi_inv(&a, 2).unwrap();
    let g = mobius_psi_inv(&b, 2).unwrap();
    let v = t_relation(&f, &g, RelationKind::PrecT, 2).unwrap();
    assert!(v.holds);
    let v = t_relation(&g, &f, RelationKind::PreceqT, 2).unwrap();
    assert!(!v.holds);
}
