//! Normal-ordered arithmetic in the algebra generated by `a` and `b` with `ab - ba = b^2`.
//!
//! Elements are stored a-left: `u = sum_m a^m c_m(b)`. Moving a series past a
//! power of `a` uses
//!
//! ```text
//! c a^j = sum_t binom(j, t) (-1)^t a^(j-t) D^t(c),   D(c) = b^2 c'
//! ```
//!
//! which is the rule `a c = c a + b^2 c'` iterated.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{binomial, Rat};
use crate::series::SeriesB;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbElement {
    coeffs: Vec<SeriesB>,
}

impl AbElement {
    /// Builds `sum_m a^m coeffs[m]`. All coefficients are truncated to their common order.
    pub fn new(coeffs: Vec<SeriesB>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "an element needs at least one coefficient"
        );
        let order = coeffs.iter().map(SeriesB::order).min().unwrap_or(0);
        let mut out = AbElement {
            coeffs: coeffs.into_iter().map(|c| c.truncate(order)).collect(),
        };
        out.trim();
        out
    }

    pub fn zero(order: usize) -> Self {
        AbElement {
            coeffs: vec![SeriesB::zero(order)],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::from_series(SeriesB::one(order))
    }

    pub fn from_series(c: SeriesB) -> Self {
        AbElement { coeffs: vec![c] }
    }

    /// The generator `a`.
    pub fn a(order: usize) -> Self {
        AbElement {
            coeffs: vec![SeriesB::zero(order), SeriesB::one(order)],
        }
    }

    /// The generator `b`.
    pub fn b(order: usize) -> Self {
        Self::from_series(SeriesB::monomial(Rat::one(), 1, order))
    }

    /// `c a^m b^nu`.
    pub fn monomial(c: Rat, m: usize, nu: usize, order: usize) -> Self {
        let mut coeffs = vec![SeriesB::zero(order); m + 1];
        coeffs[m] = SeriesB::monomial(c, nu, order);
        Self::new(coeffs)
    }

    /// `a - lambda b`.
    pub fn linear(lambda: &Rat, order: usize) -> Self {
        AbElement::new(vec![
            SeriesB::monomial(-lambda.clone(), 1, order),
            SeriesB::one(order),
        ])
    }

    fn trim(&mut self) {
        while self.coeffs.len() > 1 && self.coeffs.last().is_some_and(SeriesB::is_zero) {
            self.coeffs.pop();
        }
    }

    /// Degree in `a`.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn order(&self) -> usize {
        self.coeffs[0].order()
    }

    pub fn coeffs(&self) -> &[SeriesB] {
        &self.coeffs
    }

    /// Coefficient of `a^m`, zero above the degree.
    pub fn coeff(&self, m: usize) -> SeriesB {
        self.coeffs
            .get(m)
            .cloned()
            .unwrap_or_else(|| SeriesB::zero(self.order()))
    }

    pub fn leading(&self) -> &SeriesB {
        self.coeffs.last().expect("nonempty")
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(SeriesB::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.truncate(order)).collect())
    }

    /// Same degree and equal coefficients of every `a^m b^nu` with `nu <= order`.
    pub fn agrees_to(&self, other: &AbElement, order: usize) -> bool {
        let deg = self.degree().max(other.degree());
        (0..=deg).all(|m| self.coeff(m).agrees_with(&other.coeff(m), order))
    }

    pub fn add(&self, other: &AbElement) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|m| &self.coeff(m) + &other.coeff(m)).collect())
    }

    pub fn sub(&self, other: &AbElement) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|m| &self.coeff(m) - &other.coeff(m)).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self::new(self.coeffs.iter().map(|s| s.scale(c)).collect())
    }

    /// Right multiplication by a series: `u * s`.
    pub fn mul_series_right(&self, s: &SeriesB) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Left multiplication by a series: `s * u`.
    pub fn mul_series_left(&self, s: &SeriesB) -> Self {
        self.series_element(s).mul(self)
    }

    fn series_element(&self, s: &SeriesB) -> Self {
        Self::from_series(s.truncate(self.order()))
    }

    /// Exact normal-ordered product `self * other`.
    pub fn mul(&self, other: &AbElement) -> Self {
        let order = self.order().min(other.order());
        let deg = self.degree() + other.degree();
        let mut out = vec![SeriesB::zero(order); deg + 1];
        for (m, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            // D^t(c) for t = 0..=deg(other), truncated back to the working order
            let mut derivs = Vec::with_capacity(other.coeffs.len());
            let mut d = c.truncate(order);
            for _ in 0..other.coeffs.len() {
                derivs.push(d.clone());
                d = d.b2_derive().truncate(order);
            }
            for (n, e) in other.coeffs.iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                for (t, dt) in derivs.iter().enumerate().take(n + 1) {
                    if dt.is_zero() {
                        continue;
                    }
                    let mut w = binomial(n, t);
                    if t % 2 == 1 {
                        w = -w;
                    }
                    let term = (dt * e).scale(&w);
                    let slot = &mut out[m + n - t];
                    *slot = &*slot + &term;
                }
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::one(self.order());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Lowest total degree `m + nu` among nonzero terms `a^m b^nu`.
    pub fn lowest_degree(&self) -> Option<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .filter_map(|(m, c)| c.valuation().map(|v| m + v))
            .min()
    }

    /// Homogeneous part of total degree `k`.
    pub fn initial_form(&self, k: usize) -> Result<Self> {
        let order = self.order();
        let mut out = vec![SeriesB::zero(order); self.coeffs.len().min(k + 1)];
        for (m, slot) in out.iter_mut().enumerate() {
            let nu = k - m;
            let c = self.coeffs[m].coeff_at(nu).map_err(|_| {
                Error::OrderUnderflow(format!(
                    "initial form of degree {k} needs b^{nu} of a^{m}, known only to order {order}"
                ))
            })?;
            *slot = SeriesB::monomial(c.clone(), nu, order);
        }
        Ok(Self::new(out))
    }

    /// Left multiplication by the inverse of the leading coefficient, making `a^d` the leading term.
    pub fn make_monic(&self) -> Result<Self> {
        let inv = self
            .leading()
            .invert()
            .map_err(|_| Error::NonMonicDivisor)?;
        let mut out = self.mul_series_left(&inv);
        let d = out.degree();
        out.coeffs[d] = SeriesB::one(out.order());
        Ok(out)
    }

    /// Left Euclidean division `self = q * p + r` with `deg r < deg p`.
    pub fn left_divide(&self, p: &AbElement) -> Result<(AbElement, AbElement)> {
        let lead = p.leading();
        if !lead.is_unit() {
            return Err(Error::NonMonicDivisor);
        }
        let order = self.order().min(p.order());
        let lead_inv = lead.truncate(order).invert()?;
        let d = p.degree();
        let mut r = self.truncate(order);
        let mut q = vec![SeriesB::zero(order); self.degree().saturating_sub(d) + 1];
        while r.degree() >= d && !r.is_zero() {
            let n = r.degree();
            let w = &r.coeffs[n] * &lead_inv;
            let mut term = vec![SeriesB::zero(order); n - d + 1];
            term[n - d] = w.clone();
            q[n - d] = &q[n - d] + &w;
            let mut next = r.sub(&AbElement::new(term).mul(p));
            if next.coeffs.len() > n {
                next.coeffs.truncate(n);
                next.trim();
            }
            r = next;
        }
        Ok((AbElement::new(q), r))
    }
}

/// Ordered product `(a - lambda_1 b) S_1^-1 ... (a - lambda_k b) S_k^-1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FactorForm {
    factors: Vec<(Rat, SeriesB)>,
}

impl FactorForm {
    pub fn new(factors: Vec<(Rat, SeriesB)>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::EmptyPresentation);
        }
        for (i, (_, s)) in factors.iter().enumerate() {
            if !s.constant_term().is_one() {
                return Err(Error::NonUnitSeries {
                    index: i + 1,
                    constant: s.constant_term().clone(),
                });
            }
        }
        Ok(FactorForm { factors })
    }

    /// Factors with every unit equal to one.
    pub fn trivial(lambdas: &[Rat], order: usize) -> Result<Self> {
        Self::new(
            lambdas
                .iter()
                .map(|l| (l.clone(), SeriesB::one(order)))
                .collect(),
        )
    }

    pub fn factors(&self) -> &[(Rat, SeriesB)] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn lambdas(&self) -> Vec<Rat> {
        self.factors.iter().map(|(l, _)| l.clone()).collect()
    }

    pub fn units(&self) -> Vec<SeriesB> {
        self.factors.iter().map(|(_, s)| s.clone()).collect()
    }

    pub fn order(&self) -> usize {
        self.factors
            .iter()
            .map(|(_, s)| s.order())
            .min()
            .unwrap_or(0)
    }

    /// Normal-ordered expansion.
    pub fn expand(&self) -> Result<AbElement> {
        let order = self.order();
        let mut acc = AbElement::one(order);
        for (lambda, s) in &self.factors {
            let inv = s.truncate(order).invert()?;
            let factor = AbElement::linear(lambda, order).mul_series_right(&inv);
            acc = acc.mul(&factor);
        }
        Ok(acc)
    }
}

fn write_signed_term(
    f: &mut fmt::Formatter<'_>,
    first: &mut bool,
    c: &Rat,
    body: &str,
) -> fmt::Result {
    let mag = c.abs();
    if *first {
        if c.is_negative() {
            write!(f, "-")?;
        }
    } else if c.is_negative() {
        write!(f, " - ")?;
    } else {
        write!(f, " + ")?;
    }
    *first = false;
    match (mag.is_one(), body.is_empty()) {
        (_, true) => write!(f, "{mag}"),
        (true, false) => write!(f, "{body}"),
        (false, false) => write!(f, "{mag} {body}"),
    }
}

fn power(sym: &str, e: usize) -> Option<String> {
    match e {
        0 => None,
        1 => Some(sym.to_string()),
        _ => Some(format!("{sym}^{e}")),
    }
}

impl fmt::Display for AbElement {
    /// `a^2 - 6 a b + 45/4 b^2`: decreasing a-degree, then increasing b-degree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for m in (0..self.coeffs.len()).rev() {
            for (nu, c) in self.coeffs[m].coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let body: Vec<String> = [power("a", m), power("b", nu)]
                    .into_iter()
                    .flatten()
                    .collect();
                write_signed_term(f, &mut first, c, &body.join(" "))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Display for FactorForm {
    /// `(a - 5/2 b) [1 + 3b^2]^-1 (a - 7/2 b)`; trivial units are omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (lambda, s)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if lambda.is_zero() {
                write!(f, "(a)")?;
            } else {
                let sign = if lambda.is_negative() { '+' } else { '-' };
                let mag = lambda.abs();
                if mag.is_one() {
                    write!(f, "(a {sign} b)")?;
                } else {
                    write!(f, "(a {sign} {mag} b)")?;
                }
            }
            if !s.is_one() {
                write!(f, " [{s}]^-1")?;
            }
        }
        Ok(())
    }
}

/// `(a - x b)(a - y b)` expanded to `order`.
pub fn linear_pair(x: &Rat, y: &Rat, order: usize) -> AbElement {
    AbElement::linear(x, order).mul(&AbElement::linear(y, order))
}

/// `a b^nu - b^nu a`, which equals `nu b^(nu+1)`.
pub fn commutator_with_b_power(nu: usize, order: usize) -> AbElement {
    let bnu = AbElement::from_series(SeriesB::monomial(Rat::one(), nu, order));
    let a = AbElement::a(order);
    a.mul(&bnu).sub(&bnu.mul(&a))
}
