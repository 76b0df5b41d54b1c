//! Small hand-checkable instances run through the public API.

use fresco_core::alpha::{
    alpha_invariant, alpha_reduce_step, beta_factor, classify_rank2, dual_twist_rank2,
    is_semisimple, quotient_theme_class, rank3_alpha_formula, subtheme_class, Rank2Case,
    ThemeClass,
};
use fresco_core::oracle::TruncatedRep;
use fresco_core::parse::{parse_presentation, parse_series};
use fresco_core::rat::{int, rat, Rat};
use fresco_core::xi::{analyze_xi, xi_apply, XiExpansion};
use fresco_core::{
    fundamental_invariants, regenerate_presentation, solve_resonant_ode, AbElement, Error,
    FactorForm, ModuleElement, OdeForm, Presentation, SeriesB,
};
use num_traits::Zero;

const N: usize = 24;

fn s(text: &str) -> SeriesB {
    parse_series(text, N).unwrap()
}

fn pres(text: &str) -> Presentation {
    parse_presentation(text, Some(N)).unwrap()
}

fn rank3() -> Presentation {
    pres("fresco: (3 | 1 + b^2) (3 | 1) (3 | 1)")
}

#[test]
fn series_arithmetic() {
    assert_eq!(&s("1 + b") * &s("1 - b"), s("1 - b^2"));
    let inv = s("1 + 3b^2").invert().unwrap();
    assert!(inv.agrees_with(&s("1 - 3b^2 + 9b^4 - 27b^6 + 81b^8"), 9));
    assert_eq!(s("1 + 3b^2").derive().unwrap().to_string(), "6b");
}

#[test]
fn resonant_equations() {
    let v = solve_resonant_ode(OdeForm::A, 1, &s("-1 - b^2")).unwrap();
    assert!(v.agrees_with(&s("1 - b^2"), N - 1));
    assert!(matches!(
        solve_resonant_ode(OdeForm::A, 1, &s("b")),
        Err(Error::ResonantObstruction { index: 1, .. })
    ));
    let x = solve_resonant_ode(OdeForm::B, 1, &s("-b^3")).unwrap();
    assert!(x.agrees_with(&s("-b^2"), x.order()));
}

#[test]
fn normal_ordering() {
    let p = AbElement::linear(&rat(5, 2), N).mul(&AbElement::linear(&rat(7, 2), N));
    assert_eq!(p.to_string(), "a^2 - 6 a b + 45/4 b^2");
    let ba = AbElement::b(N).mul(&AbElement::a(N));
    assert_eq!(ba.to_string(), "a b - b^2");
    let b3a = AbElement::monomial(int(1), 0, 3, N).mul(&AbElement::a(N));
    assert_eq!(b3a.to_string(), "a b^3 - 3 b^4");
}

#[test]
fn factor_forms() {
    let trivial = FactorForm::trivial(&[rat(5, 2), rat(7, 2)], N).unwrap();
    assert_eq!(
        trivial.expand().unwrap().to_string(),
        "a^2 - 6 a b + 45/4 b^2"
    );
    let p = pres("fresco: (5/2 | 1 + 3b^2) (7/2 | 1)");
    let e = p.expand().unwrap();
    assert_eq!(e.degree(), 2);
    assert!(e
        .initial_form(2)
        .unwrap()
        .agrees_to(&trivial.expand().unwrap(), N));
    let single = FactorForm::trivial(&[rat(1, 3)], N).unwrap();
    assert_eq!(single.expand().unwrap().to_string(), "a - 1/3 b");
}

#[test]
fn left_division() {
    let a2 = AbElement::a(N).pow(2);
    let lambda = rat(2, 3);
    let (q, r) = a2.left_divide(&AbElement::linear(&lambda, N)).unwrap();
    assert_eq!(q.to_string(), "a + 2/3 b");
    assert_eq!(r.to_string(), "10/9 b^2");
    let (_, r) = a2.left_divide(&AbElement::linear(&int(1), N)).unwrap();
    assert_eq!(r.to_string(), "2 b^2");
    let p = AbElement::linear(&lambda, N);
    let (q, r) = p.left_divide(&p).unwrap();
    assert!(r.is_zero());
    assert_eq!(q.to_string(), "1");
}

#[test]
fn validation() {
    let p = pres("fresco: (5/2 | 1 + 3b^2) (7/2 | 1)");
    assert!(p.is_geometric() && p.is_primitive() && p.is_principal());
    assert_eq!(p.p_integers(), Some(vec![2]));
    assert!(parse_presentation("fresco: (1/2 | 1)", None).is_ok());
    assert!(matches!(
        parse_presentation("fresco: (1/2 | 1) (1/2 | 1)", None),
        Err(Error::NotGeometric { .. })
    ));
    assert!(matches!(
        parse_presentation("fresco: (5/2 | 2 + b)", None),
        Err(Error::NonUnitSeries { .. })
    ));
}

#[test]
fn bernstein_and_invariants() {
    let b = pres("fresco: (5/2 | 1 - 4b + b^3) (7/2 | 1)").bernstein();
    assert_eq!(b.roots, vec![rat(-3, 2), rat(-7, 2)]);
    assert_eq!(b.mu, int(6));
    assert_eq!(
        fundamental_invariants(&[rat(7, 2), rat(3, 2)]).unwrap(),
        vec![rat(5, 2), rat(5, 2)]
    );
}

#[test]
fn twists_and_normalization() {
    let p = pres("fresco: (5/2 | 1 + b) (7/2 | 1)");
    assert_eq!(
        p.twist(&rat(1, 2)).unwrap(),
        pres("fresco: (3 | 1 + b) (4 | 1)")
    );
    assert_eq!(p.twist(&Rat::zero()).unwrap(), p);
    let q = pres("fresco: (5/2 | 1 + b) (7/2 | 1 + b^2)");
    assert_eq!(q.normalize_last_unit(), p);
}

#[test]
fn sub_quotients() {
    let p = pres("fresco: (3 | 1 + b^2) (3 | 1 - b) (3 | 1)");
    assert_eq!(p.sub_quotient(1, 3).unwrap(), p);
    assert_eq!(
        p.sub_quotient(1, 2).unwrap().lambdas(),
        vec![int(3), int(3)]
    );
    assert_eq!(p.sub_quotient(2, 3).unwrap().unit(1), p.unit(2));
}

#[test]
fn model_relations_and_regeneration() {
    let p = pres("fresco: (5/2 | 1) (7/2 | 1)");
    let m = p.model().unwrap();
    let ae2 = m.apply_linear(&rat(7, 2), &m.e(2));
    assert_eq!(ae2, m.e(1));
    assert_eq!(regenerate_presentation(&m, &m.generator()).unwrap(), p);
    let g = ModuleElement::new(vec![SeriesB::zero(N), s("1 + b")]);
    assert_eq!(
        regenerate_presentation(&m, &g).unwrap(),
        pres("fresco: (5/2 | 1) (7/2 | 1 + b)")
    );
    let g = ModuleElement::new(vec![SeriesB::zero(N), s("b")]);
    assert!(matches!(
        regenerate_presentation(&m, &g),
        Err(Error::NotAGenerator { .. })
    ));

    let q = pres("fresco: (5/2 | 1 + 3b^2) (7/2 | 1)").model().unwrap();
    let expected =
        &SeriesB::monomial(rat(5, 2), 1, N) + &(&s("6b^3") * &s("1 + 3b^2").invert().unwrap());
    assert!(q.diagonal(1).agrees_with(&expected, q.diagonal(1).order()));
}

#[test]
fn rank2_classification() {
    let c = classify_rank2(&pres("fresco: (5/2 | 1 + 3b^2) (7/2 | 1)")).unwrap();
    assert_eq!(
        (c.case, c.p1, c.alpha.clone()),
        (Rank2Case::Case2, 2, int(3))
    );
    assert!(c.is_theme && !c.is_semisimple);
    let c = classify_rank2(&pres("fresco: (7/2 | 1) (5/2 | 1)")).unwrap();
    assert_eq!((c.case, c.alpha.clone()), (Rank2Case::Case1, int(1)));
    assert!(c.is_theme);
    let c = classify_rank2(&pres("fresco: (5/2 | 1 + b) (7/2 | 1)")).unwrap();
    assert!(c.alpha.is_zero() && c.is_semisimple);
}

#[test]
fn rank3_alpha() {
    let p = rank3();
    let reduced = alpha_reduce_step(&p).unwrap();
    assert_eq!(
        reduced,
        pres("fresco: (3 | 1 + b^2) (4 | 1)").truncate(reduced.order())
    );
    assert_eq!(alpha_invariant(&p).unwrap(), int(1));
    assert_eq!(rank3_alpha_formula(&p).unwrap(), int(1));
    assert!(!is_semisimple(&p).unwrap());
    let trivial = pres("fresco: (3 | 1) (3 | 1) (3 | 1)");
    assert!(alpha_invariant(&trivial).unwrap().is_zero());
    assert!(is_semisimple(&trivial).unwrap());
    assert!(matches!(
        alpha_invariant(&pres("fresco: (3 | 1) (3 | 1 + b) (3 | 1)")),
        Err(Error::NotInF0(_))
    ));
    // S1 = 1: only the b^(p1+p2) coefficient of S2 survives, scaled by -p2/p1
    let q = pres("fresco: (3 | 1) (3 | 1 + 5b^3) (4 | 1)");
    assert_eq!(rank3_alpha_formula(&q).unwrap(), int(-10));
    assert_eq!(alpha_invariant(&q).unwrap(), int(-10));
}

#[test]
fn theme_classes() {
    let p = rank3();
    let sub = subtheme_class(&p).unwrap();
    assert_eq!(
        sub,
        ThemeClass {
            lambda_low: int(3),
            lambda_high: int(4),
            p: 2,
            parameter: int(1)
        }
    );
    assert_eq!(beta_factor(&p), int(-1));
    assert_eq!(quotient_theme_class(&p).unwrap().parameter, int(-1));
    let two = pres("fresco: (5/2 | 1 + 3b^2) (7/2 | 1)");
    assert_eq!(beta_factor(&two), int(1));
    assert_eq!(subtheme_class(&two).unwrap().presentation(N).unwrap(), two);
    assert!(matches!(
        subtheme_class(&pres("fresco: (3 | 1) (3 | 1) (3 | 1)")),
        Err(Error::AlphaZero)
    ));
    let t = ThemeClass {
        lambda_low: rat(5, 2),
        lambda_high: rat(7, 2),
        p: 2,
        parameter: int(3),
    };
    let d = dual_twist_rank2(&t, &int(6));
    assert_eq!(
        d,
        ThemeClass {
            lambda_low: rat(5, 2),
            lambda_high: rat(7, 2),
            p: 2,
            parameter: int(-3)
        }
    );
}

#[test]
fn expansion_operators() {
    let lambda = rat(3, 4);
    let x = XiExpansion::from_terms(lambda.clone(), 1, 1, 6, &[(1, 0, 1, int(1))]);
    let bx = xi_apply('b', &x).unwrap();
    assert_eq!(bx.get(1, 1, 1), &rat(4, 3));
    assert_eq!(bx.get(1, 1, 0), &rat(-16, 9));
    let pure = XiExpansion::from_terms(lambda, 1, 0, 6, &[(1, 0, 0, int(1))]);
    assert_eq!(xi_apply('a', &pure).unwrap().get(1, 1, 0), &int(1));
}

#[test]
fn expansion_modules() {
    let lambda = rat(1, 3);
    let single = XiExpansion::log_power(&lambda, 1, 24).unwrap();
    let r = analyze_xi(&single).unwrap();
    assert_eq!(r.rank, 2);
    assert_eq!(r.log_ranks, vec![1, 2]);
    assert_eq!(
        r.presentation,
        Presentation::trivial(&[rat(4, 3), rat(1, 3)], r.presentation.order()).unwrap()
    );

    let pure = XiExpansion::log_power(&lambda, 0, 24).unwrap();
    assert_eq!(
        analyze_xi(&pure).unwrap().presentation.lambdas(),
        vec![lambda.clone()]
    );

    let two = XiExpansion::from_terms(lambda, 2, 0, 24, &[(1, 0, 0, int(1)), (2, 1, 0, int(1))]);
    let r = analyze_xi(&two).unwrap();
    assert_eq!((r.rank, r.depth), (2, 1));
}

#[test]
fn oracle_examples() {
    let p = pres("fresco: (5/2 | 1) (7/2 | 1)");
    let rep = TruncatedRep::from_presentation(&p, 16).unwrap();
    assert_eq!(rep.dim(), 32);
    let e1 = rep.basis_vector(1, 0);
    let ann = rep.minimal_annihilator(&e1).unwrap();
    assert!(ann
        .element
        .agrees_to(&AbElement::linear(&rat(5, 2), N), ann.known_order));
    let be1 = rep.apply_b(&e1);
    let ann = rep.minimal_annihilator(&be1).unwrap();
    assert!(ann
        .element
        .agrees_to(&AbElement::linear(&rat(7, 2), N), ann.known_order));
    let e2 = rep.basis_vector(2, 0);
    let ann = rep.minimal_annihilator(&e2).unwrap();
    assert!(ann.element.agrees_to(&p.expand().unwrap(), ann.known_order));

    let bgens: Vec<_> = [1, 2]
        .iter()
        .map(|&j| rep.apply_b(&rep.basis_vector(j, 0)))
        .collect();
    assert_eq!(rep.submodule_analysis(&bgens).unwrap().codim, Some(2));
    let f = rep.submodule_analysis(&[rep.apply_b(&e2)]).unwrap();
    assert!(!f.normal);
    let f = rep.submodule_analysis(&[e1]).unwrap();
    assert!(f.normal);
    assert_eq!(f.rank, 1);
}
