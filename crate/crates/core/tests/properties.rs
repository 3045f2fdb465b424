use proptest::prelude::*;
use qsep_core::intersperse::{mobius_psi, mobius_psi_inv, partial_fractions, relation, veebar_by_alternation, RelationKind};
use qsep_core::logconcave::is_strictly_log_concave;
use qsep_core::polycore::gauss;
use qsep_core::qcalc::{
    from_q_basis, q_diff_closed, q_diff_coeff, q_diff_star_closed, q_diff_star_coeff, to_q_basis, QParam,
};
use qsep_core::realroots::{isolate_real_roots, is_real_rooted, sturm_count, Bound, RootLoc};
use qsep_core::{rat, CPoly, RPoly, Rat};

fn small_rat() -> impl Strategy<Value = Rat> {
    (-40i64..=40, 1i64..=9).prop_map(|(a, b)| rat(a, b))
}

fn nonzero_rat() -> impl Strategy<Value = Rat> {
    small_rat().prop_filter("nonzero", |r| *r != rat(0, 1))
}

fn poly(max_deg: usize) -> impl Strategy<Value = RPoly> {
    prop::collection::vec(small_rat(), 0..=max_deg + 1).prop_map(RPoly::new)
}

/// Roots drawn from a small grid so repeats occur.
fn root_list(max_len: usize) -> impl Strategy<Value = Vec<Rat>> {
    prop::collection::vec((-12i64..=12, prop::sample::select(vec![1i64, 2, 3])).prop_map(|(a, b)| rat(a, b)), 1..=max_len)
}

fn q_param() -> impl Strategy<Value = QParam> {
    prop::sample::select(vec![(1, 5), (1, 3), (1, 2), (3, 4), (9, 10), (1, 1)]).prop_map(|(a, b)| QParam::ratio(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_operations_commute_with_evaluation(
        f in poly(6),
        g in poly(6),
        points in prop::collection::vec(small_rat(), 20),
    ) {
        let (sum, diff, prod) = (&f + &g, &f - &g, &f * &g);
        for x in &points {
            let (fx, gx) = (f.eval(x), g.eval(x));
            prop_assert_eq!(sum.eval(x), &fx + &gx);
            prop_assert_eq!(diff.eval(x), &fx - &gx);
            prop_assert_eq!(prod.eval(x), &fx * &gx);
        }
        if !g.is_zero() {
            let (quo, rem) = f.div_rem(&g).unwrap();
            prop_assert!(rem.degree() < g.degree());
            prop_assert_eq!(&(&quo * &g) + &rem, f.clone());
        }
    }

    #[test]
    fn reversal_squares_to_a_sign_and_maps_roots(roots in root_list(6), lead in nonzero_rat(), extra in 0usize..3) {
        let f = RPoly::from_roots(lead, &roots);
        let n = f.degree() as usize + extra;
        let r = f.reverse_n(n).unwrap();
        // Applying the map twice multiplies by (-1)^n.
        let back = r.reverse_n(n).unwrap();
        prop_assert_eq!(if n % 2 == 0 { back } else { -back }, f.clone());
        for y in roots.iter().filter(|y| **y != rat(0, 1)) {
            let image = -(rat(1, 1) / y);
            prop_assert_eq!(r.eval(&image), rat(0, 1));
            let mult = roots.iter().filter(|x| *x == y).count();
            let mut d = r.clone();
            for _ in 0..mult {
                prop_assert_eq!(d.eval(&image), rat(0, 1));
                d = d.derivative();
            }
            prop_assert!(d.eval(&image) != rat(0, 1));
        }
    }

    #[test]
    fn inversion_is_an_involution(coeffs in prop::collection::vec((small_rat(), small_rat()), 1..6), extra in 0usize..2) {
        let h = CPoly::new(coeffs.into_iter().map(|(a, b)| gauss(a, b)).collect());
        let n = h.degree().max(0) as usize + extra;
        prop_assert_eq!(h.n_inverse(n).unwrap().n_inverse(n).unwrap(), h);
    }

    #[test]
    fn isolation_recovers_linear_factors(roots in root_list(12), lead in nonzero_rat()) {
        let f = RPoly::from_roots(lead, &roots);
        let iso = isolate_real_roots(&f, None).unwrap();
        let mut distinct: Vec<Rat> = roots.clone();
        distinct.sort();
        distinct.dedup();
        prop_assert_eq!(iso.origin_order, roots.iter().filter(|y| **y == rat(0, 1)).count());
        prop_assert_eq!(iso.roots.len(), distinct.len());
        for (found, want) in iso.roots.iter().zip(&distinct) {
            prop_assert_eq!(&found.loc, &RootLoc::Exact(want.clone()));
            prop_assert_eq!(found.multiplicity, roots.iter().filter(|y| *y == want).count());
        }
        prop_assert_eq!(sturm_count(&f, &Bound::NegInf, &Bound::PosInf).unwrap(), distinct.len());
    }

    #[test]
    fn real_rootedness_of_products(a in root_list(5), b in root_list(5), c in 1i64..5) {
        let f = RPoly::from_roots(rat(1, 1), &a);
        let g = &RPoly::from_roots(rat(1, 1), &b) * &RPoly::from_ints(&[c, 0, 1]);
        prop_assert!(is_real_rooted(&f));
        prop_assert!(!is_real_rooted(&g));
        prop_assert!(!is_real_rooted(&(&f * &g)));
        prop_assert!(is_real_rooted(&(&f * &f)));
    }

    #[test]
    fn strict_precedence_is_antisymmetric(a in root_list(6), b in root_list(6)) {
        let f = RPoly::from_roots(rat(1, 1), &a);
        let g = RPoly::from_roots(rat(-1, 1), &b);
        let fg = relation(&f, &g, RelationKind::Prec).unwrap().holds;
        let gf = relation(&g, &f, RelationKind::Prec).unwrap().holds;
        prop_assert!(!(fg && gf));
    }

    #[test]
    fn veebar_routes_agree(a in root_list(6), b in root_list(6), flip in any::<bool>()) {
        let f = RPoly::from_roots(rat(1, 1), &a);
        let g = RPoly::from_roots(if flip { rat(-1, 1) } else { rat(1, 1) }, &b);
        let wronskian_route = relation(&f, &g, RelationKind::Veebar).unwrap().holds;
        prop_assert_eq!(wronskian_route, veebar_by_alternation(&f, &g).is_none());
    }

    #[test]
    fn residues_reconstruct(a in root_list(6), b in root_list(7), lead in nonzero_rat()) {
        let mut simple = a.clone();
        simple.sort();
        simple.dedup();
        let f = RPoly::from_roots(rat(1, 1), &simple);
        let g = RPoly::from_roots(lead, &b);
        prop_assume!(g.degree() <= f.degree() + 1);
        let d = partial_fractions(&f, &g).unwrap();
        prop_assert_eq!(d.reconstruct(&f), g.clone());
        prop_assert_eq!(d.c_infinity != rat(0, 1), g.degree() == f.degree() + 1);
        if relation(&f, &g, RelationKind::Preceq).unwrap().holds {
            prop_assert!(d.residues.iter().all(|(_, c)| *c <= rat(0, 1)));
        }
    }

    #[test]
    fn mobius_round_trip(coeffs in prop::collection::vec(small_rat(), 1..7), extra in 0usize..2) {
        let p = RPoly::new(coeffs);
        let n = p.degree().max(0) as usize + extra;
        let h = mobius_psi_inv(&p, n).unwrap();
        prop_assert!(h.is_self_inversive(n));
        prop_assert_eq!(mobius_psi(&h, n).unwrap(), p);
    }

    #[test]
    fn q_basis_and_difference_routes(f in poly(8), q in q_param(), extra in 0usize..3) {
        let n = f.degree().max(0) as usize + extra;
        let v = to_q_basis(&f, n, &q).unwrap();
        prop_assert_eq!(from_q_basis(&v), f.clone());
        prop_assert_eq!(q_diff_closed(&f, n, &q).unwrap(), q_diff_coeff(&f, n, &q).unwrap());
        prop_assert_eq!(q_diff_star_closed(&f, n, &q).unwrap(), q_diff_star_coeff(&f, n, &q).unwrap());
    }

    #[test]
    fn log_concavity_ignores_scale(seq in prop::collection::vec(small_rat(), 1..9), c in nonzero_rat()) {
        let scaled: Vec<Rat> = seq.iter().map(|x| x * &c).collect();
        prop_assert_eq!(is_strictly_log_concave(&seq), is_strictly_log_concave(&scaled));
    }
}
