//! Truncated formal power series in `b` with exact rational coefficients.
//!
//! A `SeriesB` of order `N` knows its coefficients at exponents `0..=N`;
//! everything above `N` is unknown (not zero). Each operation computes the
//! order of its result explicitly:
//!
//! - `add`, `sub`, `mul`: minimum of the operand orders
//! - `invert`: order of the operand
//! - `derive`: one less than the operand
//! - `shift(k)` (multiplication by `b^k`): `k` more than the operand
//! - `b2_derive` (`b^2 S'`): one more than the operand

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{int, Rat};

/// Global default truncation order.
pub const DEFAULT_ORDER: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SeriesB {
    coeffs: Vec<Rat>,
    order: usize,
}

impl SeriesB {
    pub fn zero(order: usize) -> Self {
        SeriesB {
            coeffs: vec![Rat::zero(); order + 1],
            order,
        }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rat::one(), order)
    }

    pub fn constant(c: Rat, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// `c * b^exp`, known to `order`.
    pub fn monomial(c: Rat, exp: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if exp <= order {
            s.coeffs[exp] = c;
        }
        s
    }

    /// Treats `coeffs` as an exact polynomial and truncates or zero-pads it to `order`.
    pub fn from_poly(coeffs: &[Rat], order: usize) -> Self {
        let mut s = Self::zero(order);
        for (n, c) in coeffs.iter().enumerate().take(order + 1) {
            s.coeffs[n] = c.clone();
        }
        s
    }

    /// Builds a series from exactly `order + 1` known coefficients.
    pub fn from_known(coeffs: Vec<Rat>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a series needs at least its constant term"
        );
        let order = coeffs.len() - 1;
        SeriesB { coeffs, order }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff_at(&self, index: usize) -> Result<&Rat> {
        self.coeffs.get(index).ok_or(Error::CoefficientBeyondOrder {
            index,
            order: self.order,
        })
    }

    pub fn constant_term(&self) -> &Rat {
        &self.coeffs[0]
    }

    pub fn is_unit(&self) -> bool {
        !self.coeffs[0].is_zero()
    }

    /// All known coefficients vanish.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// All known coefficients vanish except a constant term equal to one.
    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// Exponent of the first nonzero known coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Index of the last nonzero known coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    /// Forgets coefficients above `order`. Asking for more precision than is known is a no-op.
    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        SeriesB {
            coeffs: self.coeffs[..=order].to_vec(),
            order,
        }
    }

    /// Extends the known range by declaring the missing coefficients zero.
    /// Only valid for series that are known to be polynomials.
    pub fn extend_as_poly(&self, order: usize) -> Self {
        if order <= self.order {
            return self.truncate(order);
        }
        Self::from_poly(&self.coeffs, order)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        SeriesB {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
            order: self.order,
        }
    }

    /// Multiplication by `b^k`.
    pub fn shift(&self, k: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        SeriesB {
            coeffs,
            order: self.order + k,
        }
    }

    /// Division by `b^k`; the low coefficients must vanish.
    pub fn unshift(&self, k: usize) -> Result<Self> {
        if k > self.order {
            return Err(Error::OrderUnderflow(format!(
                "cannot divide a series of order {} by b^{k}",
                self.order
            )));
        }
        if let Some(n) = self.coeffs[..k].iter().position(|c| !c.is_zero()) {
            return Err(Error::OrderUnderflow(format!(
                "coefficient of b^{n} is nonzero, series is not divisible by b^{k}"
            )));
        }
        Ok(SeriesB {
            coeffs: self.coeffs[k..].to_vec(),
            order: self.order - k,
        })
    }

    pub fn invert(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::InversionOfNonUnit {
                constant: c0.clone(),
            });
        }
        let inv0 = c0.recip();
        let mut out: Vec<Rat> = Vec::with_capacity(self.order + 1);
        out.push(inv0.clone());
        for n in 1..=self.order {
            let mut acc = Rat::zero();
            for k in 1..=n {
                let a = &self.coeffs[k];
                if !a.is_zero() {
                    acc += a * &out[n - k];
                }
            }
            out.push(-(acc * &inv0));
        }
        Ok(SeriesB {
            coeffs: out,
            order: self.order,
        })
    }

    pub fn derive(&self) -> Result<Self> {
        if self.order == 0 {
            return Err(Error::OrderUnderflow(
                "derivative of a series known only to order 0".into(),
            ));
        }
        let coeffs = (1..=self.order)
            .map(|n| &self.coeffs[n] * int(n as i64))
            .collect();
        Ok(SeriesB {
            coeffs,
            order: self.order - 1,
        })
    }

    /// `b^2 * S'`, the correction produced by commuting a series past `a`.
    pub fn b2_derive(&self) -> Self {
        let mut coeffs = vec![Rat::zero(); self.order + 2];
        for n in 1..=self.order {
            coeffs[n + 1] = &self.coeffs[n] * int(n as i64);
        }
        SeriesB {
            coeffs,
            order: self.order + 1,
        }
    }

    /// Coefficients agree at every exponent `0..=up_to`.
    pub fn agrees_with(&self, other: &SeriesB, up_to: usize) -> bool {
        up_to <= self.order
            && up_to <= other.order
            && self.coeffs[..=up_to] == other.coeffs[..=up_to]
    }

    /// Coefficients agree on the common known range.
    pub fn agrees(&self, other: &SeriesB) -> bool {
        self.agrees_with(other, self.order.min(other.order))
    }

    fn zip_with(&self, other: &SeriesB, f: impl Fn(&Rat, &Rat) -> Rat) -> SeriesB {
        let order = self.order.min(other.order);
        let coeffs = (0..=order)
            .map(|n| f(&self.coeffs[n], &other.coeffs[n]))
            .collect();
        SeriesB { coeffs, order }
    }
}

impl Add for &SeriesB {
    type Output = SeriesB;
    fn add(self, rhs: &SeriesB) -> SeriesB {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &SeriesB {
    type Output = SeriesB;
    fn sub(self, rhs: &SeriesB) -> SeriesB {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &SeriesB {
    type Output = SeriesB;
    fn neg(self) -> SeriesB {
        SeriesB {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            order: self.order,
        }
    }
}

impl Mul for &SeriesB {
    type Output = SeriesB;
    fn mul(self, rhs: &SeriesB) -> SeriesB {
        let order = self.order.min(rhs.order);
        let mut coeffs = vec![Rat::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        SeriesB { coeffs, order }
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for SeriesB {
            type Output = SeriesB;
            fn $m(self, rhs: SeriesB) -> SeriesB {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&SeriesB> for SeriesB {
            type Output = SeriesB;
            fn $m(self, rhs: &SeriesB) -> SeriesB {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for SeriesB {
    type Output = SeriesB;
    fn neg(self) -> SeriesB {
        -&self
    }
}

/// Which first-order equation `solve_resonant_ode` solves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OdeForm {
    /// `b T' - c T = R`, solved by `(n - c) t_n = r_n`.
    A,
    /// `b^2 X' - c b X = R` with `R(0) = 0`, solved by `(n - c) x_n = r_{n+1}`.
    B,
}

/// Solves a first-order Euler-type equation coefficient-wise.
///
/// Both forms have a single resonant index `n = c`; the free coefficient there
/// is set to zero and the matching right-hand side coefficient must vanish.
pub fn solve_resonant_ode(form: OdeForm, c: usize, rhs: &SeriesB) -> Result<SeriesB> {
    match form {
        OdeForm::A => {
            let mut out = Vec::with_capacity(rhs.order + 1);
            for n in 0..=rhs.order {
                let r = &rhs.coeffs[n];
                if n == c {
                    if !r.is_zero() {
                        return Err(Error::ResonantObstruction {
                            index: n,
                            value: r.clone(),
                        });
                    }
                    out.push(Rat::zero());
                } else {
                    out.push(r / int(n as i64 - c as i64));
                }
            }
            Ok(SeriesB::from_known(out))
        }
        OdeForm::B => {
            if !rhs.coeffs[0].is_zero() {
                return Err(Error::ResonantObstruction {
                    index: 0,
                    value: rhs.coeffs[0].clone(),
                });
            }
            if rhs.order == 0 {
                return Err(Error::OrderUnderflow(
                    "form B needs a right-hand side known beyond its constant term".into(),
                ));
            }
            let mut out = Vec::with_capacity(rhs.order);
            for n in 0..rhs.order {
                let r = &rhs.coeffs[n + 1];
                if n == c {
                    if !r.is_zero() {
                        return Err(Error::ResonantObstruction {
                            index: n,
                            value: r.clone(),
                        });
                    }
                    out.push(Rat::zero());
                } else {
                    out.push(r / int(n as i64 - c as i64));
                }
            }
            Ok(SeriesB::from_known(out))
        }
    }
}

impl fmt::Display for SeriesB {
    /// Literal syntax: `1 + 3b^2 - 1/2b^5`. Only nonzero known terms are printed.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            match n {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}")?;
                    }
                    if n == 1 {
                        write!(f, "b")?;
                    } else {
                        write!(f, "b^{n}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
