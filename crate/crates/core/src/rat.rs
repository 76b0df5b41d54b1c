//! Exact rational scalars.
//!
//! `Rat` is an arbitrary-precision rational kept in canonical form
//! (reduced, positive denominator) by `num-rational`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rat = num_rational::BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn zero() -> Rat {
    Rat::zero()
}

pub fn one() -> Rat {
    Rat::one()
}

/// Parses `p/q`, `-p/q` or an integer. Whitespace around the slash is allowed.
pub fn parse_rat(text: &str) -> Option<Rat> {
    let text: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.parse::<BigInt>().ok()?, d.parse::<BigInt>().ok()?),
        None => (text.parse::<BigInt>().ok()?, BigInt::one()),
    };
    if den.is_zero() {
        return None;
    }
    Some(Rat::new(num, den))
}

pub fn is_integer(x: &Rat) -> bool {
    x.denom().is_one()
}

/// Integer value of `x` if it is an integer that fits in an `i64`.
pub fn to_i64(x: &Rat) -> Option<i64> {
    if is_integer(x) {
        x.numer().to_i64()
    } else {
        None
    }
}

pub fn to_usize(x: &Rat) -> Option<usize> {
    to_i64(x).and_then(|v| usize::try_from(v).ok())
}

/// `true` when the fractional parts of `x` and `y` agree.
pub fn same_class(x: &Rat, y: &Rat) -> bool {
    is_integer(&(x - y))
}

/// Representative of `x + Z` in the half-open interval `]0, 1]`.
pub fn class_representative(x: &Rat) -> Rat {
    let floor = x.numer().div_floor(x.denom());
    let frac = x - Rat::from_integer(floor);
    if frac.is_zero() {
        Rat::one()
    } else {
        frac
    }
}

pub fn binomial(n: usize, k: usize) -> Rat {
    if k > n {
        return Rat::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Rat::from_integer(acc)
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn abs(x: &Rat) -> Rat {
    x.abs()
}
