use fresco_core::algebra::AbElement;
use fresco_core::alpha::{
    alpha_invariant, alpha_reduce_step_with, classify_rank2, is_semisimple, quotient_theme_class,
    rank3_alpha_formula, subtheme_class,
};
use fresco_core::fresco::monic_expansion;
use fresco_core::identities::exchange_identity;
use fresco_core::oracle::TruncatedRep;
use fresco_core::parse::{parse_presentation, parse_series};
use fresco_core::rat::{int, rat, Rat};
use fresco_core::sample;
use fresco_core::xi::{analyze_xi, XiExpansion};
use fresco_core::{solve_resonant_ode, OdeForm, Presentation, SeriesB};
use num_traits::{One, Zero};
use proptest::prelude::*;

const N: usize = 16;

fn small_rat() -> impl Strategy<Value = Rat> {
    (-6i64..=6, 1i64..=5).prop_map(|(n, d)| rat(n, d))
}

fn series(order: usize) -> impl Strategy<Value = SeriesB> {
    prop::collection::vec(small_rat(), 1..=6).prop_map(move |c| SeriesB::from_poly(&c, order))
}

fn unit(order: usize) -> impl Strategy<Value = SeriesB> {
    prop::collection::vec(small_rat(), 0..=5).prop_map(move |mut c| {
        c.insert(0, Rat::one());
        SeriesB::from_poly(&c, order)
    })
}

fn element(max_degree: usize) -> impl Strategy<Value = AbElement> {
    prop::collection::vec(series(12), 1..=max_degree + 1).prop_map(AbElement::new)
}

fn seeds() -> impl Strategy<Value = u64> {
    any::<u64>()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn unit_times_inverse_is_one(s in unit(N)) {
        let inv = s.invert().unwrap();
        prop_assert_eq!(&s * &inv, SeriesB::one(N));
    }

    #[test]
    fn product_rule(f in series(N), g in series(N)) {
        let lhs = (&f * &g).derive().unwrap();
        let rhs = &(&f.derive().unwrap() * &g) + &(&f * &g.derive().unwrap());
        prop_assert!(lhs.agrees(&rhs));
        prop_assert_eq!(lhs.order(), N - 1);
    }

    #[test]
    fn form_a_solution_satisfies_equation(c in 0usize..6, r in series(N)) {
        let mut coeffs = r.coeffs().to_vec();
        coeffs[c] = Rat::zero();
        let r = SeriesB::from_known(coeffs);
        let t = solve_resonant_ode(OdeForm::A, c, &r).unwrap();
        // b T' - c T
        let bt = t.derive().unwrap().shift(1);
        let lhs = &bt - &t.scale(&int(c as i64));
        prop_assert!(lhs.agrees_with(&r, N - 1));
        prop_assert!(t.coeffs()[c].is_zero());
    }

    #[test]
    fn form_b_solution_satisfies_equation(c in 0usize..6, r in series(N)) {
        let mut coeffs = r.coeffs().to_vec();
        coeffs[0] = Rat::zero();
        coeffs[c + 1] = Rat::zero();
        let r = SeriesB::from_known(coeffs);
        let x = solve_resonant_ode(OdeForm::B, c, &r).unwrap();
        let lhs = &x.b2_derive() - &x.shift(1).scale(&int(c as i64));
        prop_assert!(lhs.agrees_with(&r, x.order()));
    }

    #[test]
    fn rationals_are_canonical(n in -1000i64..1000, d in 1i64..1000) {
        let x = rat(n, d);
        let again = Rat::new(x.numer().clone(), x.denom().clone());
        prop_assert_eq!(&again, &x);
        prop_assert!(x.denom() > &0.into());
        prop_assert_eq!(fresco_core::rat::parse_rat(&x.to_string()), Some(x));
    }

    #[test]
    fn series_literal_round_trip(s in series(N)) {
        prop_assert_eq!(parse_series(&s.to_string(), N).unwrap(), s);
    }

    #[test]
    fn associativity(u in element(3), v in element(3), w in element(3)) {
        let lhs = u.mul(&v).mul(&w);
        let rhs = u.mul(&v.mul(&w));
        prop_assert!(lhs.agrees_to(&rhs, lhs.order().min(rhs.order())));
    }

    #[test]
    fn left_division_reconstructs(u in element(4), lambdas in prop::collection::vec(small_rat(), 1..=2)) {
        let mut p = AbElement::one(12);
        for l in &lambdas {
            p = p.mul(&AbElement::linear(l, 12));
        }
        let (q, r) = u.left_divide(&p).unwrap();
        prop_assert!(r.is_zero() || r.degree() < p.degree());
        let back = q.mul(&p).add(&r);
        prop_assert!(back.agrees_to(&u, back.order().min(u.order())));
    }

    #[test]
    fn exchange_identity_holds(l2 in small_rat(), l3 in small_rat()) {
        prop_assert!(exchange_identity(&l2, &l3, 10).holds);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bernstein_is_multiplicative(seed in seeds(), k in 2usize..=4) {
        let p = sample::presentation(&mut sample::rng(seed), k, N);
        let pe = p.bernstein().element.expand().unwrap();
        for i in 1..k {
            let f = p.sub_quotient(1, i).unwrap().bernstein();
            let g = p.sub_quotient(i + 1, k).unwrap().bernstein();
            let prod = f.element.expand().unwrap().mul(&g.element.expand().unwrap());
            prop_assert!(prod.agrees_to(&pe, N));
            prop_assert_eq!(&f.mu + &g.mu, p.bernstein().mu);
        }
    }

    #[test]
    fn regeneration_is_idempotent_on_the_generator(seed in seeds(), k in 1usize..=3) {
        let p = sample::presentation(&mut sample::rng(seed), k, N);
        let m = p.model().unwrap();
        let q = fresco_core::regenerate_presentation(&m, &m.generator()).unwrap();
        prop_assert_eq!(q, p);
    }

    #[test]
    fn regenerated_presentation_annihilates_generator(seed in seeds(), k in 1usize..=3) {
        let mut r = sample::rng(seed);
        let p = sample::presentation(&mut r, k, N);
        let m = p.model().unwrap();
        let (g, q) = sample::try_generator(&mut r, &m).unwrap();
        let rep = TruncatedRep::from_presentation(&p, 14).unwrap();
        let ann = rep.minimal_annihilator(&rep.vector(&g).unwrap()).unwrap();
        prop_assert!(ann.element.agrees_to(&monic_expansion(&q).unwrap(), ann.known_order));
    }

    #[test]
    fn twist_round_trip(seed in seeds(), delta in (0i64..=12, 1i64..=5).prop_map(|(n, d)| rat(n, d))) {
        let p = sample::presentation(&mut sample::rng(seed), 3, N);
        let shifted = Presentation::new(
            p.factors().iter().map(|(l, s)| (l + &delta, s.clone())).collect(),
        ).unwrap();
        let back = shifted.twist(&-delta.clone()).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn oracle_commutation(seed in seeds(), k in 1usize..=3) {
        let p = sample::presentation(&mut sample::rng(seed), k, N);
        let rep = TruncatedRep::from_presentation(&p, 10).unwrap();
        prop_assert!(rep.commutation_holds());
    }

    #[test]
    fn rank2_alpha_is_an_isomorphism_invariant(seed in seeds()) {
        let mut r = sample::rng(seed);
        let p = sample::presentation(&mut r, 2, N);
        let alpha = classify_rank2(&p).unwrap().alpha;
        let m = p.model().unwrap();
        for _ in 0..3 {
            let (_, q) = sample::try_generator(&mut r, &m).unwrap();
            prop_assert_eq!(&classify_rank2(&q).unwrap().alpha, &alpha);
        }
    }

    #[test]
    fn rank3_recursion_matches_formula(seed in seeds()) {
        let p = sample::f0_presentation(&mut sample::rng(seed), 3, 24);
        prop_assert_eq!(alpha_invariant(&p).unwrap(), rank3_alpha_formula(&p).unwrap());
    }

    #[test]
    fn semisimple_iff_alpha_vanishes(seed in seeds(), k in 2usize..=4) {
        let p = sample::f0_presentation(&mut sample::rng(seed), k, 24);
        prop_assert_eq!(is_semisimple(&p).unwrap(), alpha_invariant(&p).unwrap().is_zero());
    }

    #[test]
    fn alpha_is_invariant_under_integer_twists(seed in seeds(), k in 2usize..=4, m in 0i64..4) {
        let p = sample::f0_presentation(&mut sample::rng(seed), k, 24);
        let q = p.twist(&int(m)).unwrap();
        prop_assert_eq!(alpha_invariant(&q).unwrap(), alpha_invariant(&p).unwrap());
    }

    #[test]
    fn reduce_step_does_not_depend_on_tau(seed in seeds(), k in 3usize..=4, tau in small_rat()) {
        let p = sample::f0_presentation(&mut sample::rng(seed), k, 24);
        let base = alpha_invariant(&p).unwrap();
        let q = alpha_reduce_step_with(&p, &tau).unwrap();
        prop_assert_eq!(alpha_invariant(&q).unwrap(), base);
    }

    #[test]
    fn theme_gaps_match_their_invariants(seed in seeds(), k in 2usize..=4) {
        let p = sample::f0_presentation(&mut sample::rng(seed), k, 24);
        prop_assume!(!alpha_invariant(&p).unwrap().is_zero());
        for t in [subtheme_class(&p).unwrap(), quotient_theme_class(&p).unwrap()] {
            let q = t.presentation(24).unwrap();
            prop_assert_eq!(q.p_integers(), Some(vec![t.p]));
            prop_assert_eq!(classify_rank2(&q).unwrap().alpha, t.parameter);
        }
    }

    #[test]
    fn presentation_literal_round_trip(seed in seeds(), k in 1usize..=4) {
        let p = sample::presentation(&mut sample::rng(seed), k, N);
        prop_assert_eq!(parse_presentation(&p.to_string(), Some(N)).unwrap(), p);
    }
}

fn expansion(max_shift: usize, max_log: usize) -> impl Strategy<Value = XiExpansion> {
    let term = (1usize..=2, 0..=max_shift, 0..=max_log, small_rat());
    (
        prop::sample::select(vec![rat(1, 2), rat(1, 3), int(1)]),
        prop::collection::vec(term, 1..=3),
    )
        .prop_map(move |(lambda, terms)| XiExpansion::from_terms(lambda, 2, max_log, 24, &terms))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn xi_commutation(x in expansion(4, 2)) {
        let lhs = x.apply_b().apply_a().add(&x.apply_a().apply_b().scale(&int(-1)));
        prop_assert_eq!(lhs, x.apply_b().apply_b());
    }

    #[test]
    fn xi_b_is_injective(x in expansion(4, 2)) {
        prop_assume!(!x.is_zero());
        prop_assume!(x.valuation().unwrap() < x.shifts());
        prop_assert!(!x.apply_b().is_zero());
    }

    #[test]
    fn xi_model_matches_annihilator(x in expansion(2, 1)) {
        prop_assume!(!x.is_zero());
        let r = analyze_xi(&x).unwrap();
        let k = r.rank;
        let init = r.annihilator.element.initial_form(k).unwrap();
        let bern = r.presentation.bernstein().element.expand().unwrap();
        prop_assert!(init.agrees_to(&bern, k));
        prop_assert!(r.presentation.is_principal());
        prop_assert_eq!(r.depth == 1, is_semisimple(&r.presentation).unwrap());
    }
}
