//! Symbolic checks of factor exchange identities in the algebra.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::AbElement;
use crate::rat::{int, Rat};
use crate::series::SeriesB;

fn unit(c: &Rat, e: usize, order: usize) -> SeriesB {
    &SeriesB::one(order) + &SeriesB::monomial(c.clone(), e, order)
}

fn series_el(s: &SeriesB) -> AbElement {
    AbElement::from_series(s.clone())
}

/// Outcome of comparing two sides at a truncation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub holds: bool,
    pub order: usize,
    /// First differing monomial `a^m b^n` with the coefficient of `lhs - rhs`.
    pub first_difference: Option<(usize, usize, String)>,
}

fn compare(lhs: &AbElement, rhs: &AbElement) -> IdentityCheck {
    let diff = lhs.sub(rhs);
    let order = diff.order();
    let mut first: Option<(usize, usize, String)> = None;
    for n in 0..=order {
        for m in 0..=diff.degree() {
            let c = diff.coeff(m).coeffs()[n].clone();
            if !c.is_zero() && first.is_none() {
                first = Some((m, n, c.to_string()));
            }
        }
    }
    IdentityCheck {
        holds: first.is_none(),
        order,
        first_difference: first,
    }
}

/// `(a - l2 b)(a - l3 b) = (a - (l3+1) b)(a - (l2-1) b)`.
pub fn exchange_identity(l2: &Rat, l3: &Rat, order: usize) -> IdentityCheck {
    let lhs = AbElement::linear(l2, order).mul(&AbElement::linear(l3, order));
    let rhs =
        AbElement::linear(&(l3 + int(1)), order).mul(&AbElement::linear(&(l2 - int(1)), order));
    compare(&lhs, &rhs)
}

/// `(a - l1 b)(a - l2 b) = U^-1 (a - (l2+1) b) U^2 (a - (l1-1) b) U^-1`
/// with `l2 = l1 + p1 - 1` and `U = 1 + rho b^p1`.
pub fn unit_exchange_identity(l1: &Rat, p1: usize, rho: &Rat, order: usize) -> IdentityCheck {
    let l2 = l1 + int(p1 as i64 - 1);
    let u = unit(rho, p1, order);
    let u_inv = u.invert().expect("unit");
    let lhs = AbElement::linear(l1, order).mul(&AbElement::linear(&l2, order));
    let rhs = series_el(&u_inv)
        .mul(&AbElement::linear(&(&l2 + int(1)), order))
        .mul(&series_el(&(&u * &u)))
        .mul(&AbElement::linear(&(l1 - int(1)), order))
        .mul(&series_el(&u_inv));
    compare(&lhs, &rhs)
}

/// `(a - (l1-1) b) W^-1 (a - l3 b) = V^-1 (a - (l3+1) b) V^2 W^-1 (a - (l1-2) b) V^-1`
/// with `W = 1 + alpha b^p2`, `V = 1 + beta b^p2`, `beta = (1 + p2/p1) alpha`
/// and `l3 = l1 + p1 + p2 - 2`.
pub fn v_identity(l1: &Rat, p1: usize, p2: usize, alpha: &Rat, order: usize) -> IdentityCheck {
    let l3 = l1 + int((p1 + p2) as i64 - 2);
    let beta = alpha * (Rat::one() + Rat::new(p2.into(), p1.into()));
    let w_inv = unit(alpha, p2, order).invert().expect("unit");
    let v = unit(&beta, p2, order);
    let v_inv = v.invert().expect("unit");
    let lhs = AbElement::linear(&(l1 - int(1)), order)
        .mul(&series_el(&w_inv))
        .mul(&AbElement::linear(&l3, order));
    let rhs = series_el(&v_inv)
        .mul(&AbElement::linear(&(&l3 + int(1)), order))
        .mul(&series_el(&(&v * &v)))
        .mul(&series_el(&w_inv))
        .mul(&AbElement::linear(&(l1 - int(2)), order))
        .mul(&series_el(&v_inv));
    compare(&lhs, &rhs)
}
