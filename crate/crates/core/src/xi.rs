//! Formal asymptotic expansions `sum c s^(lambda+m-1) (Log s)^j (x) v`.
//!
//! `a` is multiplication by `s` and `b` is the primitive without constant:
//!
//! ```text
//! b(s^(mu-1) L^j) = s^mu sum_(i<=j) (-1)^(j-i) (j!/i!) L^i / mu^(j-i+1),   mu = lambda + m
//! ```
//!
//! Terms with shift above the truncation `M` are dropped. They form a submodule,
//! so every computation happens in an exact quotient.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::algebra::AbElement;
use crate::error::{Error, Result};
use crate::fresco::Presentation;
use crate::linalg::{is_zero_vec, Echelon, Vector};
use crate::oracle::{monic_relation, Annihilator, Relation};
use crate::rat::{class_representative, factorial, int, same_class, to_i64, Rat};
use crate::series::SeriesB;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XiExpansion {
    lambda: Rat,
    dim: usize,
    max_log: usize,
    shifts: usize,
    coeffs: Vector,
}

impl XiExpansion {
    /// Zero expansion with base exponent class `lambda` in `]0, 1]`.
    pub fn zero(lambda: Rat, dim: usize, max_log: usize, shifts: usize) -> Self {
        assert!(
            lambda > Rat::zero() && lambda <= Rat::one(),
            "lambda must lie in ]0, 1]"
        );
        let len = (shifts + 1) * dim * (max_log + 1);
        XiExpansion {
            lambda,
            dim,
            max_log,
            shifts,
            coeffs: vec![Rat::zero(); len],
        }
    }

    /// Builds an expansion from `(component, shift, log power, coefficient)` terms.
    /// Components are 1-based. Terms past the truncation are dropped.
    pub fn from_terms(
        lambda: Rat,
        dim: usize,
        max_log: usize,
        shifts: usize,
        terms: &[(usize, usize, usize, Rat)],
    ) -> Self {
        let mut x = Self::zero(lambda, dim, max_log, shifts);
        for (comp, shift, log, c) in terms {
            if *shift <= shifts {
                let i = x.index(*comp, *shift, *log);
                x.coeffs[i] += c;
            }
        }
        x
    }

    /// `s^(lambda-1) (Log s)^n`, with `lambda` an arbitrary positive rational.
    pub fn log_power(lambda: &Rat, n: usize, shifts: usize) -> Result<Self> {
        let (base, shift) = split_exponent(&(lambda - int(1)))?;
        Ok(Self::from_terms(
            base,
            1,
            n,
            shifts,
            &[(1, shift, n, Rat::one())],
        ))
    }

    pub fn lambda(&self) -> &Rat {
        &self.lambda
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_log(&self) -> usize {
        self.max_log
    }

    pub fn shifts(&self) -> usize {
        self.shifts
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    fn with_coeffs(&self, coeffs: Vector) -> Self {
        XiExpansion {
            coeffs,
            ..self.clone()
        }
    }

    fn block(&self) -> usize {
        self.dim * (self.max_log + 1)
    }

    pub fn index(&self, comp: usize, shift: usize, log: usize) -> usize {
        shift * self.block() + (comp - 1) * (self.max_log + 1) + log
    }

    /// `(component, shift, log power)` of a flat index.
    pub fn position(&self, index: usize) -> (usize, usize, usize) {
        let shift = index / self.block();
        let rest = index % self.block();
        (
            rest / (self.max_log + 1) + 1,
            shift,
            rest % (self.max_log + 1),
        )
    }

    pub fn get(&self, comp: usize, shift: usize, log: usize) -> &Rat {
        &self.coeffs[self.index(comp, shift, log)]
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.coeffs)
    }

    /// Lowest shift carrying a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .map(|i| i / self.block())
    }

    /// Nonzero terms as `(component, shift, log power, coefficient)`.
    pub fn terms(&self) -> Vec<(usize, usize, usize, Rat)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let (comp, shift, log) = self.position(i);
                (comp, shift, log, c.clone())
            })
            .collect()
    }

    pub fn add(&self, other: &XiExpansion) -> Self {
        self.with_coeffs(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(x, y)| x + y)
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rat) -> Self {
        self.with_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn apply_a(&self) -> Self {
        self.with_coeffs(apply_a_raw(self, &self.coeffs))
    }

    pub fn apply_b(&self) -> Self {
        self.with_coeffs(apply_b_raw(self, &self.coeffs))
    }

    /// Same data in a wider container (more components, logs or shifts).
    pub fn widen(&self, dim: usize, max_log: usize, shifts: usize) -> Self {
        let mut terms = self.terms();
        terms.retain(|t| t.1 <= shifts);
        Self::from_terms(self.lambda.clone(), dim, max_log, shifts, &terms)
    }
}

/// Splits an exponent `e > -1` as `lambda + m - 1` with `lambda` in `]0, 1]`.
pub fn split_exponent(e: &Rat) -> Result<(Rat, usize)> {
    let mu = e + int(1);
    if mu <= Rat::zero() {
        return Err(Error::OrderUnderflow(format!(
            "exponent {e} is not above -1"
        )));
    }
    let base = class_representative(&mu);
    let shift = to_i64(&(&mu - &base)).expect("integral difference");
    Ok((base, shift as usize))
}

fn apply_a_raw(x: &XiExpansion, v: &[Rat]) -> Vector {
    let block = x.block();
    let mut out = vec![Rat::zero(); v.len()];
    let keep = v.len() - block;
    out[block..].clone_from_slice(&v[..keep]);
    out
}

fn apply_b_raw(x: &XiExpansion, v: &[Rat]) -> Vector {
    let block = x.block();
    let logs = x.max_log + 1;
    let mut out = vec![Rat::zero(); v.len()];
    for shift in 0..x.shifts {
        let mu = &x.lambda + int(shift as i64);
        let mu_inv = mu.recip();
        for comp in 0..x.dim {
            let base = shift * block + comp * logs;
            for j in 0..logs {
                let c = &v[base + j];
                if c.is_zero() {
                    continue;
                }
                // s^mu sum_i (-1)^(j-i) (j!/i!) L^i / mu^(j-i+1)
                let mut w = c * &mu_inv;
                for i in (0..=j).rev() {
                    out[base + block + i] += &w;
                    if i > 0 {
                        w = -(w * int(i as i64)) * &mu_inv;
                    }
                }
            }
        }
    }
    out
}

/// Closure of `A.phi` inside the truncation, with its rank and a `b`-basis.
#[derive(Clone, Debug)]
pub struct XiModule {
    pub phi: XiExpansion,
    pub rank: usize,
    pub basis: Vec<XiExpansion>,
    span: Echelon,
}

pub fn xi_apply(op: char, x: &XiExpansion) -> Result<XiExpansion> {
    match op {
        'a' => Ok(x.apply_a()),
        'b' => Ok(x.apply_b()),
        _ => Err(Error::Syntax {
            line: 1,
            column: 1,
            message: format!("unknown operator {op}"),
        }),
    }
}

fn pivot_counts(x: &XiExpansion, pivots: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut counts = vec![0usize; x.shifts + 1];
    for p in pivots {
        counts[p / x.block()] += 1;
    }
    counts
}

pub fn xi_generate_module(phi: &XiExpansion) -> Result<XiModule> {
    if phi.is_zero() {
        return Err(Error::DegenerateTruncation("phi is zero".into()));
    }
    let mut span = Echelon::new();
    let mut queue = vec![phi.coeffs.clone()];
    while let Some(v) = queue.pop() {
        if let Some(r) = span.insert(&v) {
            queue.push(apply_a_raw(phi, &r));
            queue.push(apply_b_raw(phi, &r));
        }
    }
    let counts = pivot_counts(phi, span.pivots().into_iter());
    let m = phi.shifts;
    let rank = counts[m];
    if m == 0 || counts[m - 1] != rank {
        return Err(Error::TruncationTooSmall(format!(
            "closure not stabilized: {} pivots at shift {} but {} at shift {m}",
            counts[m.saturating_sub(1)],
            m.saturating_sub(1),
            rank
        )));
    }
    let mut image = Echelon::new();
    for v in span.vectors() {
        image.insert(&apply_b_raw(phi, v));
    }
    if span.dim() - image.dim() != rank {
        return Err(Error::TruncationTooSmall(format!(
            "quotient by b has dimension {} but rank is {rank}",
            span.dim() - image.dim()
        )));
    }
    let mut basis = vec![phi.clone()];
    while basis.len() < rank {
        let next = basis.last().expect("nonempty").apply_a();
        basis.push(next);
    }
    let mut check = image.clone();
    for x in &basis {
        if check.insert(&x.coeffs).is_none() {
            return Err(Error::NotMonogenicAtTruncation {
                degree: basis.len(),
                rank,
            });
        }
    }
    Ok(XiModule {
        phi: phi.clone(),
        rank,
        basis,
        span,
    })
}

/// Lowest shift whose pivot counts are still trustworthy for the log filtration.
fn safe_level(x: &XiExpansion) -> Result<usize> {
    let logs = x.max_log + 1;
    let need = 2 * logs + 1;
    if x.shifts < need + logs {
        return Err(Error::TruncationTooSmall(format!(
            "log filtration needs more than {} shifts",
            need + logs
        )));
    }
    Ok(x.shifts - need)
}

/// Ranks of `S_j = E cap (log power < j)` for `j = 1..=N+1`.
pub fn xi_log_filtration(module: &XiModule) -> Result<Vec<usize>> {
    let x = &module.phi;
    let level = safe_level(x)?;
    let logs = x.max_log + 1;
    let len = x.coeffs.len();
    let mut ranks = Vec::with_capacity(logs);
    for j in 1..=logs {
        // put the coordinates with log power >= j first
        let mut order: Vec<usize> = (0..len).collect();
        order.sort_by_key(|&i| {
            let (_, shift, log) = x.position(i);
            (log < j, shift, i)
        });
        let bad = order.iter().filter(|&&i| x.position(i).2 >= j).count();
        let mut span = Echelon::new();
        for v in module.span.vectors() {
            let permuted: Vector = order.iter().map(|&i| v[i].clone()).collect();
            span.insert(&permuted);
        }
        let rank = span
            .pivots()
            .into_iter()
            .filter(|&p| p >= bad && x.position(order[p]).1 == level)
            .count();
        ranks.push(rank);
    }
    Ok(ranks)
}

/// Smallest `j` with `S_j = E`.
pub fn semisimple_depth(ranks: &[usize], rank: usize) -> usize {
    ranks
        .iter()
        .position(|&r| r == rank)
        .map_or(ranks.len(), |i| i + 1)
}

/// Minimal monic annihilator of `phi` in the truncated expansion module.
pub fn xi_annihilator(module: &XiModule) -> Result<Annihilator> {
    let phi = &module.phi;
    let v = phi.valuation().expect("nonzero");
    let m = phi.shifts;
    let relation = monic_relation(
        &phi.coeffs,
        |w| apply_a_raw(phi, w),
        |w| apply_b_raw(phi, w),
        m + 1,
        module.rank,
        |d| (m > v + 2 * d + 1).then(|| m - v - 2 * d - 1),
    );
    match relation {
        Relation::Found(ann) if ann.element.degree() == module.rank => Ok(ann),
        Relation::Found(ann) => Err(Error::NotMonogenicAtTruncation {
            degree: ann.element.degree(),
            rank: module.rank,
        }),
        Relation::Exhausted(d) => Err(Error::TruncationTooSmall(format!(
            "{m} shifts leave no known coefficients for an annihilator of degree {d}"
        ))),
    }
}

/// `h(mu) = sum_m h_m (mu + k - m)(mu + k - m + 1)...(mu + k - 1)`: the value of the
/// homogeneous part on `s^(mu-1)`, up to the factor `mu (mu+1) ... (mu+k-1)`.
fn indicial_polynomial(initial: &AbElement, k: usize) -> Vec<Rat> {
    let mut poly = vec![Rat::zero(); k + 1];
    for m in 0..=initial.degree() {
        let h = initial.coeff(m).coeffs()[k - m].clone();
        if h.is_zero() {
            continue;
        }
        let mut term = vec![Rat::one()];
        for i in 0..m {
            let shift = int((k - m + i) as i64);
            let mut next = vec![Rat::zero(); term.len() + 1];
            for (d, c) in term.iter().enumerate() {
                next[d + 1] += c;
                next[d] += c * &shift;
            }
            term = next;
        }
        for (d, c) in term.into_iter().enumerate() {
            poly[d] += c * &h;
        }
    }
    poly
}

fn eval_poly(poly: &[Rat], x: &Rat) -> Rat {
    poly.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
}

/// Roots of `poly` in `base + Z`, with multiplicity.
fn roots_in_class(poly: &[Rat], base: &Rat) -> Vec<Rat> {
    let mut poly = poly.to_vec();
    while poly.last().is_some_and(Zero::is_zero) {
        poly.pop();
    }
    let lead = poly.last().cloned().unwrap_or_else(Rat::one);
    let bound = poly
        .iter()
        .map(|c| (c / &lead).abs())
        .fold(Rat::zero(), |acc, c| if c > acc { c } else { acc })
        + int(1);
    let reach = to_i64(&bound.ceil()).unwrap_or(0) + 1;
    let mut roots = Vec::new();
    for n in -reach..=reach {
        let r = base + int(n);
        while poly.len() > 1 && eval_poly(&poly, &r).is_zero() {
            // synthetic division by (x - r)
            let deg = poly.len() - 1;
            let mut q = vec![Rat::zero(); deg];
            let mut carry = Rat::zero();
            for d in (0..deg).rev() {
                carry = &poly[d + 1] + &carry * &r;
                q[d] = carry.clone();
            }
            poly = q;
            roots.push(r.clone());
        }
    }
    roots
}

/// Series `T` with `T(0) = 1` and `Q (T eps) = 0` in the rank-1 module `a eps = lambda b eps`.
fn rank1_solution(q: &AbElement, lambda: &Rat, indicial: &[Rat]) -> Result<SeriesB> {
    let order = q.order();
    let k = q.degree();
    if order < k {
        return Err(Error::TruncationTooSmall(
            "annihilator known below its own degree".into(),
        ));
    }
    let top = order - k;
    // image of b^n eps under Q, as a series in b
    let apply_a = |t: &SeriesB| -> SeriesB {
        let lam = SeriesB::monomial(lambda.clone(), 1, t.order());
        &(&lam * t) + &t.b2_derive().truncate(t.order())
    };
    let image = |n: usize| -> SeriesB {
        let eps = SeriesB::monomial(Rat::one(), n, order);
        let mut acc = &q.coeff(k) * &eps;
        for m in (0..k).rev() {
            acc = &apply_a(&acc) + &(&q.coeff(m) * &eps);
        }
        acc
    };
    let mut t = vec![Rat::zero(); top + 1];
    t[0] = Rat::one();
    let mut total = image(0);
    #[allow(clippy::needless_range_loop)]
    for n in 1..=top {
        let img = image(n);
        let lead = img.coeffs()[n + k].clone();
        let expected = eval_poly(indicial, &(lambda + int(n as i64)));
        debug_assert_eq!(lead, expected);
        if lead.is_zero() {
            return Err(Error::ResonantObstruction {
                index: n,
                value: total.coeffs()[n + k].clone(),
            });
        }
        let tn = -(total.coeffs()[n + k].clone()) / lead;
        total = &total + &img.scale(&tn);
        t[n] = tn;
    }
    Ok(SeriesB::from_known(t))
}

/// Peels factors `(a - lambda_m b) S_m^-1` off the right of a monic annihilator.
fn factor_annihilator(q: &AbElement, base: &Rat) -> Result<Vec<(Rat, SeriesB)>> {
    let mut q = q.clone();
    let mut factors = Vec::new();
    while q.degree() > 0 {
        let k = q.degree();
        let initial = q.initial_form(k)?;
        if initial.lowest_degree() != Some(k) || q.lowest_degree() != Some(k) {
            return Err(Error::NotMonogenicAtTruncation { degree: k, rank: k });
        }
        let indicial = indicial_polynomial(&initial, k);
        let roots = roots_in_class(&indicial, base);
        let Some(lambda) = roots.iter().max().cloned().filter(|_| roots.len() == k) else {
            return Err(Error::TruncationTooSmall(format!(
                "indicial polynomial of degree {k} has {} roots in the exponent class",
                roots.len()
            )));
        };
        let t = rank1_solution(&q, &lambda, &indicial)?;
        let inv = t.invert()?;
        let order = t.order();
        let divisor = AbElement::linear(&lambda, order).mul_series_right(&inv);
        let (quot, rem) = q.truncate(order).left_divide(&divisor)?;
        if !rem.is_zero() {
            return Err(Error::TruncationTooSmall(
                "factor does not divide the annihilator at this truncation".into(),
            ));
        }
        factors.push((lambda, t));
        q = quot.make_monic()?;
    }
    factors.reverse();
    let order = factors.iter().map(|(_, s)| s.order()).min().unwrap_or(0);
    Ok(factors
        .into_iter()
        .map(|(l, s)| (l, s.truncate(order)))
        .collect())
}

/// Presentation of `A.phi`.
pub fn model_from_xi(module: &XiModule) -> Result<Presentation> {
    let ann = xi_annihilator(module)?;
    let factors = factor_annihilator(&ann.element, module.phi.lambda())?;
    Presentation::new(factors)
}

/// Summary of the analysis of one expansion.
#[derive(Clone, Debug)]
pub struct XiReport {
    pub rank: usize,
    pub log_ranks: Vec<usize>,
    pub depth: usize,
    pub presentation: Presentation,
    pub annihilator: Annihilator,
}

pub fn analyze_xi(phi: &XiExpansion) -> Result<XiReport> {
    let module = xi_generate_module(phi)?;
    let log_ranks = xi_log_filtration(&module)?;
    let depth = semisimple_depth(&log_ranks, module.rank);
    let annihilator = xi_annihilator(&module)?;
    let factors = factor_annihilator(&annihilator.element, phi.lambda())?;
    Ok(XiReport {
        rank: module.rank,
        log_ranks,
        depth,
        presentation: Presentation::new(factors)?,
        annihilator,
    })
}

/// Collects terms given with explicit exponents into one expansion.
/// Each term is `(component, exponent of s, log power, coefficient)`.
pub fn expansion_from_exponents(
    terms: &[(usize, Rat, usize, Rat)],
    shifts: usize,
) -> Result<XiExpansion> {
    let Some(first) = terms.first() else {
        return Err(Error::DegenerateTruncation("empty expansion".into()));
    };
    if !terms.iter().all(|t| same_class(&t.1, &first.1)) {
        return Err(Error::MixedPrimitiveClasses);
    }
    let dim = terms.iter().map(|t| t.0).max().unwrap_or(1);
    let max_log = terms.iter().map(|t| t.2).max().unwrap_or(0);
    let mut merged: BTreeMap<(usize, usize, usize), Rat> = BTreeMap::new();
    let mut base = None;
    for (comp, e, log, c) in terms {
        let (b, shift) = split_exponent(e)?;
        base = Some(b);
        *merged.entry((*comp, shift, *log)).or_insert_with(Rat::zero) += c;
    }
    let flat: Vec<(usize, usize, usize, Rat)> = merged
        .into_iter()
        .map(|((comp, shift, log), c)| (comp, shift, log, c))
        .collect();
    Ok(XiExpansion::from_terms(
        base.expect("nonempty"),
        dim,
        max_log,
        shifts,
        &flat,
    ))
}

/// `j!` as a rational.
pub fn factorial_rat(j: usize) -> Rat {
    Rat::from_integer(factorial(j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FactorForm;
    use crate::rat::rat;

    const M: usize = 20;

    #[test]
    fn operators_on_pure_powers() {
        let lambda = rat(1, 3);
        let x = XiExpansion::from_terms(lambda.clone(), 1, 1, M, &[(1, 0, 0, int(1))]);
        assert_eq!(x.apply_a().terms(), vec![(1, 1, 0, int(1))]);
        assert_eq!(x.apply_b().terms(), vec![(1, 1, 0, rat(3, 1))]);
        let y = XiExpansion::from_terms(lambda.clone(), 1, 1, M, &[(1, 0, 1, int(1))]);
        // b(s^(l-1) L) = s^l L / l - s^l / l^2
        assert_eq!(
            y.apply_b().terms(),
            vec![(1, 1, 0, rat(-9, 1)), (1, 1, 1, int(3))]
        );
    }

    #[test]
    fn commutation_on_expansions() {
        let x = XiExpansion::from_terms(
            rat(2, 5),
            2,
            2,
            M,
            &[(1, 0, 2, int(1)), (2, 1, 1, rat(-3, 2)), (1, 3, 0, int(4))],
        );
        let lhs = x
            .apply_b()
            .apply_a()
            .add(&x.apply_a().apply_b().scale(&int(-1)));
        assert_eq!(lhs, x.apply_b().apply_b());
    }

    #[test]
    fn pure_power_module() {
        let phi = XiExpansion::log_power(&rat(1, 2), 0, M).unwrap();
        let module = xi_generate_module(&phi).unwrap();
        assert_eq!(module.rank, 1);
        assert_eq!(xi_log_filtration(&module).unwrap(), vec![1]);
        let p = model_from_xi(&module).unwrap();
        assert_eq!(p, Presentation::trivial(&[rat(1, 2)], p.order()).unwrap());
    }

    #[test]
    fn single_log_module() {
        let lambda = rat(2, 3);
        let phi = XiExpansion::log_power(&lambda, 1, M).unwrap();
        let r = analyze_xi(&phi).unwrap();
        assert_eq!(r.rank, 2);
        assert_eq!(r.log_ranks, vec![1, 2]);
        assert_eq!(r.depth, 2);
        let expected =
            Presentation::trivial(&[&lambda + int(1), lambda.clone()], r.presentation.order())
                .unwrap();
        assert_eq!(r.presentation, expected);
    }

    #[test]
    fn two_component_semisimple() {
        let phi =
            XiExpansion::from_terms(rat(1, 2), 2, 0, M, &[(1, 0, 0, int(1)), (2, 1, 0, int(1))]);
        let r = analyze_xi(&phi).unwrap();
        assert_eq!(r.rank, 2);
        assert_eq!(r.log_ranks, vec![2]);
        assert_eq!(r.depth, 1);
        let b = r.presentation.bernstein();
        let init = r.annihilator.element.initial_form(2).unwrap();
        assert!(init.agrees_to(&b.element.expand().unwrap(), 2));
    }

    #[test]
    fn log_power_theme() {
        let lambda = rat(7, 4);
        let n = 3;
        let phi = XiExpansion::log_power(&lambda, n, 26).unwrap();
        let r = analyze_xi(&phi).unwrap();
        assert_eq!(r.rank, n + 1);
        assert_eq!(r.log_ranks, vec![1, 2, 3, 4]);
        let lambdas: Vec<Rat> = (0..=n).rev().map(|i| &lambda + int(i as i64)).collect();
        let ff = FactorForm::trivial(&lambdas, r.presentation.order()).unwrap();
        assert_eq!(r.presentation.bernstein().element, ff);
    }

    #[test]
    fn exponent_splitting() {
        assert_eq!(split_exponent(&rat(3, 2)).unwrap(), (rat(1, 2), 2));
        assert_eq!(split_exponent(&int(0)).unwrap(), (int(1), 0));
        assert!(split_exponent(&int(-1)).is_err());
    }
}
