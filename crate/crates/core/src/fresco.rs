//! Fresco presentations and the concrete adapted-basis model.
//!
//! A presentation `((lambda_1, S_1), ..., (lambda_k, S_k))` stands for the module
//! `E = A / A.P` with `P = (a - lambda_1 b) S_1^-1 ... (a - lambda_k b) S_k^-1`.
//! The adapted model realizes `E` as a free module on `e_1, ..., e_k` with
//!
//! ```text
//! a e_j = (lambda_j b + b^2 S_j'/S_j) e_j + S_j e_(j-1),   e_0 = 0
//! ```
//!
//! so that `e_(j-1) = (a - lambda_j b) S_j^-1 e_j` and `e_k` is annihilated by `P`.

use std::fmt;

use num_traits::Zero;

use crate::algebra::{AbElement, FactorForm};
use crate::error::{Error, Result};
use crate::rat::{int, same_class, to_i64, Rat};
use crate::series::{SeriesB, DEFAULT_ORDER};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Presentation {
    factors: FactorForm,
    primitive: bool,
    principal: bool,
}

/// Bernstein data: the trivial-unit factor list, its roots and `mu = sum lambda_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bernstein {
    pub element: FactorForm,
    pub roots: Vec<Rat>,
    pub mu: Rat,
}

/// Accepts a factor list when it is geometric: `lambda_j + j > k` for every `j`.
pub fn validate_presentation(f: FactorForm) -> Result<Presentation> {
    let f = FactorForm::new(f.factors().to_vec())?;
    let k = f.rank();
    let lambdas = f.lambdas();
    for (i, l) in lambdas.iter().enumerate() {
        let value = l + int(i as i64 + 1);
        if value <= int(k as i64) {
            return Err(Error::NotGeometric {
                index: i + 1,
                value,
                rank: k,
            });
        }
    }
    let primitive = lambdas.iter().all(|l| same_class(l, &lambdas[0]));
    let principal = lambdas.windows(2).all(|w| &w[1] + int(1) >= w[0]);
    Ok(Presentation {
        factors: f,
        primitive,
        principal,
    })
}

impl Presentation {
    pub fn new(factors: Vec<(Rat, SeriesB)>) -> Result<Self> {
        validate_presentation(FactorForm::new(factors)?)
    }

    /// Presentation with every unit equal to one.
    pub fn trivial(lambdas: &[Rat], order: usize) -> Result<Self> {
        validate_presentation(FactorForm::trivial(lambdas, order)?)
    }

    pub fn factor_form(&self) -> &FactorForm {
        &self.factors
    }

    pub fn factors(&self) -> &[(Rat, SeriesB)] {
        self.factors.factors()
    }

    pub fn rank(&self) -> usize {
        self.factors.rank()
    }

    pub fn lambdas(&self) -> Vec<Rat> {
        self.factors.lambdas()
    }

    pub fn lambda(&self, j: usize) -> &Rat {
        &self.factors()[j - 1].0
    }

    pub fn units(&self) -> Vec<SeriesB> {
        self.factors.units()
    }

    /// `S_j`, 1-based.
    pub fn unit(&self, j: usize) -> &SeriesB {
        &self.factors()[j - 1].1
    }

    pub fn order(&self) -> usize {
        self.factors.order()
    }

    pub fn is_geometric(&self) -> bool {
        true
    }

    pub fn is_primitive(&self) -> bool {
        self.primitive
    }

    pub fn is_principal(&self) -> bool {
        self.principal
    }

    /// `p_j = lambda_(j+1) - lambda_j + 1` for `j < k`.
    pub fn p_values(&self) -> Vec<Rat> {
        self.lambdas()
            .windows(2)
            .map(|w| &w[1] - &w[0] + int(1))
            .collect()
    }

    /// Integer gaps, available when the presentation is primitive.
    pub fn p_integers(&self) -> Option<Vec<i64>> {
        self.p_values().iter().map(to_i64).collect()
    }

    /// `p(E) = sum_(j<k) p_j` for primitive principal presentations.
    pub fn p_total(&self) -> Option<i64> {
        self.p_integers().map(|p| p.iter().sum())
    }

    /// Order needed to read every coefficient the invariant pipelines touch.
    pub fn required_order(&self) -> usize {
        let p: i64 = self
            .p_values()
            .iter()
            .map(|p| to_i64(&p.floor()).unwrap_or(0).max(0))
            .sum();
        p as usize + self.rank() + 1
    }

    /// Working order: `max(64, 2k + sum max(p_j, 1) + 8)`.
    pub fn default_order(&self) -> usize {
        let p: i64 = self
            .p_values()
            .iter()
            .map(|p| to_i64(&p.ceil()).unwrap_or(1).max(1))
            .sum();
        DEFAULT_ORDER.max(2 * self.rank() + p as usize + 8)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let factors = self
            .factors()
            .iter()
            .map(|(l, s)| (l.clone(), s.truncate(order)))
            .collect();
        Presentation {
            factors: FactorForm::new(factors).expect("truncation keeps units"),
            ..self.clone()
        }
    }

    pub fn expand(&self) -> Result<AbElement> {
        self.factors.expand()
    }

    pub fn bernstein(&self) -> Bernstein {
        bernstein(self)
    }

    /// Factors `i..=j` (1-based), i.e. the presentation of `F_j / F_(i-1)`.
    pub fn sub_quotient(&self, i: usize, j: usize) -> Result<Self> {
        sub_quotient(self, i, j)
    }

    pub fn twist(&self, delta: &Rat) -> Result<Self> {
        twist(self, delta)
    }

    pub fn normalize_last_unit(&self) -> Self {
        normalize_last_unit(self)
    }

    pub fn model(&self) -> Result<AdaptedModel> {
        build_adapted_model(self)
    }
}

impl fmt::Display for Presentation {
    /// DSL form `fresco: (5/2 | 1 + 3b^2) (7/2 | 1)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "fresco:")?;
        for (l, s) in self.factors() {
            write!(f, " ({l} | {s})")?;
        }
        Ok(())
    }
}

pub fn bernstein(p: &Presentation) -> Bernstein {
    let k = p.rank() as i64;
    let lambdas = p.lambdas();
    let roots = lambdas
        .iter()
        .enumerate()
        .map(|(i, l)| -(l + int(i as i64 + 1 - k)))
        .collect();
    let mu = lambdas.iter().fold(Rat::zero(), |acc, l| acc + l);
    Bernstein {
        element: FactorForm::trivial(&lambdas, p.order()).expect("nonempty"),
        roots,
        mu,
    }
}

/// Sorts `mu_i + i` and subtracts the position again, giving the principal invariants.
pub fn fundamental_invariants(jh_numbers: &[Rat]) -> Result<Vec<Rat>> {
    if let Some(first) = jh_numbers.first() {
        if !jh_numbers.iter().all(|x| same_class(x, first)) {
            return Err(Error::MixedPrimitiveClasses);
        }
    }
    let mut shifted: Vec<Rat> = jh_numbers
        .iter()
        .enumerate()
        .map(|(i, x)| x + int(i as i64 + 1))
        .collect();
    shifted.sort();
    Ok(shifted
        .into_iter()
        .enumerate()
        .map(|(i, x)| x - int(i as i64 + 1))
        .collect())
}

pub fn sub_quotient(p: &Presentation, i: usize, j: usize) -> Result<Presentation> {
    let k = p.rank();
    if i < 1 || i > j || j > k {
        return Err(Error::IndexOutOfRange { i, j, rank: k });
    }
    if !p.is_principal() {
        return Err(Error::NotPrincipal);
    }
    validate_presentation(FactorForm::new(p.factors()[i - 1..j].to_vec())?)
}

pub fn twist(p: &Presentation, delta: &Rat) -> Result<Presentation> {
    let factors = p
        .factors()
        .iter()
        .map(|(l, s)| (l + delta, s.clone()))
        .collect();
    Presentation::new(factors)
}

/// Replaces `S_k` by one (generator change `e -> S_k^-1 e`).
pub fn normalize_last_unit(p: &Presentation) -> Presentation {
    let mut factors = p.factors().to_vec();
    let last = factors.last_mut().expect("nonempty");
    last.1 = SeriesB::one(last.1.order());
    Presentation {
        factors: FactorForm::new(factors).expect("units stay normalized"),
        ..p.clone()
    }
}

/// Coordinates `G_1, ..., G_k` in the adapted basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModuleElement {
    coords: Vec<SeriesB>,
}

impl ModuleElement {
    pub fn new(coords: Vec<SeriesB>) -> Self {
        let order = coords.iter().map(SeriesB::order).min().unwrap_or(0);
        ModuleElement {
            coords: coords.into_iter().map(|c| c.truncate(order)).collect(),
        }
    }

    pub fn zero(rank: usize, order: usize) -> Self {
        ModuleElement {
            coords: vec![SeriesB::zero(order); rank],
        }
    }

    /// `c e_j`, 1-based.
    pub fn basis(rank: usize, j: usize, c: SeriesB) -> Self {
        let mut x = Self::zero(rank, c.order());
        x.coords[j - 1] = c;
        x
    }

    pub fn coords(&self) -> &[SeriesB] {
        &self.coords
    }

    /// Coordinate `G_j`, 1-based.
    pub fn coord(&self, j: usize) -> &SeriesB {
        &self.coords[j - 1]
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn order(&self) -> usize {
        self.coords.first().map_or(0, SeriesB::order)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(SeriesB::is_zero)
    }

    /// Index of the highest nonzero coordinate, 1-based.
    pub fn level(&self) -> usize {
        self.coords
            .iter()
            .rposition(|c| !c.is_zero())
            .map_or(0, |i| i + 1)
    }

    pub fn add(&self, other: &ModuleElement) -> Self {
        Self::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(x, y)| x + y)
                .collect(),
        )
    }

    pub fn sub(&self, other: &ModuleElement) -> Self {
        Self::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(x, y)| x - y)
                .collect(),
        )
    }

    pub fn scale(&self, s: &SeriesB) -> Self {
        Self::new(self.coords.iter().map(|c| c * s).collect())
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coords.iter().map(|c| c.truncate(order)).collect())
    }

    /// Keeps the first `m` coordinates (an element of `F_m`).
    pub fn restrict(&self, m: usize) -> Self {
        ModuleElement {
            coords: self.coords[..m].to_vec(),
        }
    }

    pub fn agrees_with(&self, other: &ModuleElement, order: usize) -> bool {
        self.rank() == other.rank()
            && self
                .coords
                .iter()
                .zip(&other.coords)
                .all(|(x, y)| x.agrees_with(y, order))
    }
}

/// Free rank-`k` model of a presentation at a fixed truncation order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdaptedModel {
    presentation: Presentation,
    lambdas: Vec<Rat>,
    units: Vec<SeriesB>,
    diagonal: Vec<SeriesB>,
    order: usize,
}

pub fn build_adapted_model(p: &Presentation) -> Result<AdaptedModel> {
    let order = p.order();
    let lambdas = p.lambdas();
    let units: Vec<SeriesB> = p.units().iter().map(|s| s.truncate(order)).collect();
    let mut diagonal = Vec::with_capacity(units.len());
    for (l, s) in lambdas.iter().zip(&units) {
        let log_der = (&s.b2_derive() * &s.invert()?).truncate(order);
        diagonal.push(&SeriesB::monomial(l.clone(), 1, order) + &log_der);
    }
    Ok(AdaptedModel {
        presentation: p.clone(),
        lambdas,
        units,
        diagonal,
        order,
    })
}

impl AdaptedModel {
    pub fn rank(&self) -> usize {
        self.lambdas.len()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn lambdas(&self) -> &[Rat] {
        &self.lambdas
    }

    pub fn units(&self) -> &[SeriesB] {
        &self.units
    }

    /// Diagonal part `lambda_j b + b^2 S_j'/S_j` of `a e_j`, 1-based.
    pub fn diagonal(&self, j: usize) -> &SeriesB {
        &self.diagonal[j - 1]
    }

    /// `e_j`, 1-based.
    pub fn e(&self, j: usize) -> ModuleElement {
        ModuleElement::basis(self.rank(), j, SeriesB::one(self.order))
    }

    /// The generator `e_k`.
    pub fn generator(&self) -> ModuleElement {
        self.e(self.rank())
    }

    /// Model of `F_m` (the first `m` factors).
    pub fn sub_model(&self, m: usize) -> Result<AdaptedModel> {
        let k = self.rank();
        if m < 1 || m > k {
            return Err(Error::IndexOutOfRange {
                i: 1,
                j: m,
                rank: k,
            });
        }
        let head = self.presentation.factors()[..m].to_vec();
        build_adapted_model(&validate_presentation(FactorForm::new(head)?)?)
    }

    pub fn apply_a(&self, x: &ModuleElement) -> ModuleElement {
        let k = self.rank();
        let order = x.order().min(self.order);
        let mut out = vec![SeriesB::zero(order); k];
        for j in 0..k {
            let c = x.coords[j].truncate(order);
            if c.is_zero() {
                continue;
            }
            let diag = &(&c * &self.diagonal[j]) + &c.b2_derive();
            out[j] = &out[j] + &diag;
            if j > 0 {
                out[j - 1] = &out[j - 1] + &(&c * &self.units[j]);
            }
        }
        ModuleElement::new(out)
    }

    /// Multiplication by `b`; the order stays fixed at the model order.
    pub fn apply_b(&self, x: &ModuleElement) -> ModuleElement {
        let order = x.order().min(self.order);
        ModuleElement::new(
            x.coords
                .iter()
                .map(|c| c.shift(1).truncate(order))
                .collect(),
        )
    }

    /// `(a - lambda b) x`.
    pub fn apply_linear(&self, lambda: &Rat, x: &ModuleElement) -> ModuleElement {
        let ax = self.apply_a(x);
        let bx = self.apply_b(x);
        ax.sub(&bx.scale(&SeriesB::constant(lambda.clone(), bx.order())))
    }

    /// `u x` for `u = sum_m a^m c_m(b)`.
    pub fn apply_element(&self, u: &AbElement, x: &ModuleElement) -> ModuleElement {
        let d = u.degree();
        let mut acc = x.scale(&u.coeff(d));
        for m in (0..d).rev() {
            acc = self.apply_a(&acc).add(&x.scale(&u.coeff(m)));
        }
        acc
    }
}

/// Presentation of the annihilator of `g`, obtained by peeling one factor per stage.
///
/// At stage `m` the current element lies in `F_m` with top coordinate `G_m`; with
/// `Sigma_m = S_m G_m / G_m(0)` the element `(a - lambda_m b) Sigma_m^-1 g` lies in `F_(m-1)`.
pub fn regenerate_presentation(m: &AdaptedModel, g: &ModuleElement) -> Result<Presentation> {
    let k = m.rank();
    let order = g.order().min(m.order());
    let mut g = g.truncate(order);
    let mut sigmas = vec![SeriesB::zero(order); k];
    for stage in (1..=k).rev() {
        let top = g.coord(stage).clone();
        let c0 = top.constant_term().clone();
        if c0.is_zero() {
            return Err(Error::NotAGenerator { stage });
        }
        let sigma = (&m.units[stage - 1] * &top).scale(&c0.recip());
        let next = g.scale(&sigma.invert()?);
        g = m.apply_linear(&m.lambdas[stage - 1], &next);
        debug_assert!(g.coord(stage).is_zero());
        sigmas[stage - 1] = sigma;
    }
    Presentation::new(m.lambdas.iter().cloned().zip(sigmas).collect())
}

/// Monic expansion used when comparing left ideals.
pub fn monic_expansion(p: &Presentation) -> Result<AbElement> {
    p.expand()?.make_monic()
}

/// Convenience: unit `1 + c b^e` known to `order`.
pub fn unit_one_plus(c: Rat, e: usize, order: usize) -> SeriesB {
    &SeriesB::one(order) + &SeriesB::monomial(c, e, order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::linear_pair;
    use crate::rat::rat;

    const N: usize = 16;

    fn rank2(s1: SeriesB) -> Presentation {
        Presentation::new(vec![(rat(5, 2), s1), (rat(7, 2), SeriesB::one(N))]).unwrap()
    }

    #[test]
    fn validation_examples() {
        let p = rank2(unit_one_plus(int(3), 2, N));
        assert!(p.is_primitive() && p.is_principal());
        assert_eq!(p.p_values(), vec![int(2)]);
        assert!(Presentation::trivial(&[rat(1, 2)], N).is_ok());
        let err = Presentation::trivial(&[rat(1, 2), rat(1, 2)], N).unwrap_err();
        assert_eq!(
            err,
            Error::NotGeometric {
                index: 1,
                value: rat(3, 2),
                rank: 2
            }
        );
    }

    #[test]
    fn bernstein_examples() {
        let p = rank2(unit_one_plus(int(1), 1, N));
        let b = p.bernstein();
        assert_eq!(b.roots, vec![rat(-3, 2), rat(-7, 2)]);
        assert_eq!(b.mu, int(6));
        let init = p.expand().unwrap().initial_form(2).unwrap();
        assert_eq!(init, b.element.expand().unwrap());
        let r1 = Presentation::trivial(&[rat(4, 3)], N).unwrap().bernstein();
        assert_eq!(r1.roots, vec![rat(-4, 3)]);
        assert_eq!(r1.mu, rat(4, 3));
    }

    #[test]
    fn fundamental_invariant_examples() {
        assert_eq!(
            fundamental_invariants(&[rat(7, 2), rat(3, 2)]).unwrap(),
            vec![rat(5, 2), rat(5, 2)]
        );
        let principal = vec![int(3), int(3), int(4)];
        assert_eq!(fundamental_invariants(&principal).unwrap(), principal);
        assert_eq!(
            fundamental_invariants(&[rat(1, 2), rat(1, 3)]).unwrap_err(),
            Error::MixedPrimitiveClasses
        );
    }

    #[test]
    fn model_action_examples() {
        let l = [rat(3, 2), rat(5, 2)];
        let m = Presentation::trivial(&l, N).unwrap().model().unwrap();
        let ae2 = m.apply_a(&m.e(2));
        assert_eq!(ae2.coord(2), &SeriesB::monomial(l[1].clone(), 1, N));
        assert_eq!(ae2.coord(1), &SeriesB::one(N));
        let ae1 = m.apply_a(&m.e(1));
        assert_eq!(ae1.coord(1), &SeriesB::monomial(l[0].clone(), 1, N));
        assert!(ae1.coord(2).is_zero());
        assert_eq!(
            m.apply_b(&m.e(2)).coord(2),
            &SeriesB::monomial(int(1), 1, N)
        );

        let s1 = unit_one_plus(int(3), 2, N);
        let p = Presentation::new(vec![
            (l[0].clone(), s1.clone()),
            (l[1].clone(), SeriesB::one(N)),
        ])
        .unwrap();
        let m = p.model().unwrap();
        let expected = &SeriesB::monomial(l[0].clone(), 1, N)
            + &(&SeriesB::monomial(int(6), 3, N) * &s1.invert().unwrap());
        assert_eq!(m.apply_a(&m.e(1)).coord(1), &expected);
    }

    #[test]
    fn generator_is_annihilated() {
        let p = Presentation::new(vec![
            (int(3), unit_one_plus(int(1), 2, N)),
            (int(3), unit_one_plus(rat(-2, 3), 1, N)),
            (int(4), unit_one_plus(int(5), 3, N)),
        ])
        .unwrap();
        let m = p.model().unwrap();
        let x = m.apply_element(&p.expand().unwrap(), &m.generator());
        assert!(x.is_zero());
        // e_(j-1) = (a - lambda_j b) S_j^-1 e_j
        let y = m.apply_linear(
            &int(4),
            &m.generator()
                .scale(&unit_one_plus(int(5), 3, N).invert().unwrap()),
        );
        assert_eq!(y, m.e(2));
    }

    #[test]
    fn regenerate_examples() {
        let p = rank2(unit_one_plus(int(3), 2, N));
        let m = p.model().unwrap();
        assert_eq!(regenerate_presentation(&m, &m.generator()).unwrap(), p);

        let t = Presentation::trivial(&[rat(5, 2), rat(7, 2)], N).unwrap();
        let m = t.model().unwrap();
        let g = m.generator().scale(&unit_one_plus(int(1), 1, N));
        let r = regenerate_presentation(&m, &g).unwrap();
        assert_eq!(r.unit(1), &SeriesB::one(N));
        assert_eq!(r.unit(2), &unit_one_plus(int(1), 1, N));

        let g = m.apply_b(&m.generator());
        assert_eq!(
            regenerate_presentation(&m, &g).unwrap_err(),
            Error::NotAGenerator { stage: 2 }
        );
    }

    #[test]
    fn sub_quotients_and_twists() {
        let p = Presentation::trivial(&[int(3), int(3), int(4)], N).unwrap();
        assert_eq!(p.sub_quotient(1, 3).unwrap(), p);
        assert_eq!(
            p.sub_quotient(1, 2).unwrap().lambdas(),
            vec![int(3), int(3)]
        );
        assert_eq!(
            p.sub_quotient(2, 3).unwrap().lambdas(),
            vec![int(3), int(4)]
        );
        assert_eq!(
            p.sub_quotient(2, 4).unwrap_err(),
            Error::IndexOutOfRange {
                i: 2,
                j: 4,
                rank: 3
            }
        );
        let s = unit_one_plus(int(3), 2, N);
        let q = rank2(s.clone());
        let t = q.twist(&rat(1, 2)).unwrap();
        assert_eq!(t.lambdas(), vec![int(3), int(4)]);
        assert_eq!(t.unit(1), &s);
        assert_eq!(t.twist(&rat(-1, 2)).unwrap(), q);
        assert_eq!(q.twist(&int(0)).unwrap(), q);
    }

    #[test]
    fn non_principal_sub_quotient_is_refused() {
        let p = Presentation::trivial(&[int(5), int(3)], N).unwrap();
        assert!(!p.is_principal());
        assert_eq!(p.sub_quotient(1, 1).unwrap_err(), Error::NotPrincipal);
    }

    #[test]
    fn normalize_last() {
        let p = Presentation::new(vec![
            (int(2), unit_one_plus(int(1), 1, N)),
            (int(3), unit_one_plus(int(7), 2, N)),
        ])
        .unwrap();
        let q = p.normalize_last_unit();
        assert_eq!(q.unit(1), p.unit(1));
        assert!(q.unit(2).is_one());
        assert_eq!(q.normalize_last_unit(), q);
    }

    #[test]
    fn display_round_trip_text() {
        let p = rank2(unit_one_plus(int(3), 2, N));
        assert_eq!(p.to_string(), "fresco: (5/2 | 1 + 3b^2) (7/2 | 1)");
        let e = linear_pair(&rat(5, 2), &rat(7, 2), N);
        assert_eq!(p.bernstein().element.expand().unwrap(), e);
    }
}
