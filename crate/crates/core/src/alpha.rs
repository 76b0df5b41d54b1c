//! Rank-2 classification, the alpha-invariant recursion and semi-simplicity.
//!
//! The class `F0` consists of principal, primitive presentations with every gap
//! `p_j >= 1` whose sub-fresco `F_(k-1)` and quotient `E/F_1` are semi-simple.

use std::collections::HashMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fresco::{regenerate_presentation, ModuleElement, Presentation};
use crate::rat::{int, Rat};
use crate::series::{solve_resonant_ode, OdeForm, SeriesB};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rank2Case {
    /// `p_1 = 0`
    Case1,
    /// `p_1 >= 1`
    Case2,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rank2Class {
    pub case: Rank2Case,
    pub lambda1: Rat,
    pub lambda2: Rat,
    pub p1: i64,
    pub alpha: Rat,
    pub is_theme: bool,
    pub is_semisimple: bool,
}

/// Isomorphism class of a rank-2 theme `(a - low b)(1 + parameter b^p)^-1 (a - high b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThemeClass {
    pub lambda_low: Rat,
    pub lambda_high: Rat,
    pub p: i64,
    pub parameter: Rat,
}

impl ThemeClass {
    /// The normal-form presentation of the class, known to `order`.
    pub fn presentation(&self, order: usize) -> Result<Presentation> {
        let p = usize::try_from(self.p).map_err(|_| Error::PValueZero { index: 1 })?;
        let unit = &SeriesB::one(order) + &SeriesB::monomial(self.parameter.clone(), p, order);
        Presentation::new(vec![
            (self.lambda_low.clone(), unit),
            (self.lambda_high.clone(), SeriesB::one(order)),
        ])
    }
}

fn require_shape(p: &Presentation) -> Result<()> {
    if !p.is_primitive() {
        return Err(Error::NotPrimitive);
    }
    if !p.is_principal() {
        return Err(Error::NotPrincipal);
    }
    Ok(())
}

fn gaps(p: &Presentation) -> Vec<usize> {
    p.p_integers()
        .expect("primitive presentations have integral gaps")
        .into_iter()
        .map(|x| usize::try_from(x).expect("principal presentations have nonnegative gaps"))
        .collect()
}

fn require_positive_gaps(p: &Presentation) -> Result<Vec<usize>> {
    let g = gaps(p);
    match g.iter().position(|&x| x == 0) {
        Some(i) => Err(Error::PValueZero { index: i + 1 }),
        None => Ok(g),
    }
}

pub fn classify_rank2(p: &Presentation) -> Result<Rank2Class> {
    if p.rank() != 2 {
        return Err(Error::WrongRank {
            expected: 2,
            actual: p.rank(),
        });
    }
    require_shape(p)?;
    let p1 = gaps(p)[0];
    let (case, alpha) = if p1 == 0 {
        (Rank2Case::Case1, Rat::one())
    } else {
        (Rank2Case::Case2, rank2_parameter(p)?)
    };
    let is_theme = !alpha.is_zero();
    Ok(Rank2Class {
        case,
        lambda1: p.lambda(1).clone(),
        lambda2: p.lambda(2).clone(),
        p1: p1 as i64,
        alpha,
        is_theme,
        is_semisimple: case == Rank2Case::Case2 && !is_theme,
    })
}

/// Coefficient of `b^(p_1)` in `S_1` after normalizing `S_2 = 1`.
fn rank2_parameter(p: &Presentation) -> Result<Rat> {
    let q = p.normalize_last_unit();
    let p1 = gaps(&q)[0];
    Ok(q.unit(1).coeff_at(p1)?.clone())
}

/// One step of the recursion: a rank `k-1` presentation in `F0` with the same alpha.
pub fn alpha_reduce_step(p: &Presentation) -> Result<Presentation> {
    alpha_reduce_step_with(p, &Rat::zero())
}

/// The reduction step with the free resonant coefficient of `X` set to `tau`.
pub fn alpha_reduce_step_with(p: &Presentation, tau: &Rat) -> Result<Presentation> {
    let k = p.rank();
    if k < 3 {
        return Err(Error::WrongRank {
            expected: 3,
            actual: k,
        });
    }
    require_shape(p)?;
    let g = require_positive_gaps(p)?;
    let q = p.normalize_last_unit();
    let model = q.model()?;
    let order = model.order();
    let pk1 = g[k - 2];
    let s = q.unit(k - 1).truncate(order);

    // b^2 Z' - (p_(k-1) - 1) b Z = 1 - S_(k-1), without term in b^(p_(k-1) - 1)
    let rhs = &SeriesB::one(order) - &s;
    let z = solve_resonant_ode(OdeForm::B, pk1 - 1, &rhs).map_err(|e| match e {
        Error::ResonantObstruction { index, value } => Error::NotInF0(format!(
            "S_{} has coefficient {value} at b^{}",
            k - 1,
            index + 1
        )),
        other => other,
    })?;
    let z = &z + &SeriesB::monomial(tau.clone(), pk1 - 1, z.order());
    let w = &z * &s.truncate(z.order()).invert()?;

    let mut coords = vec![SeriesB::zero(w.order()); k];
    coords[k - 1] = SeriesB::one(w.order());
    coords[k - 2] = w;
    let e_tilde = ModuleElement::new(coords);
    let step = model.apply_linear(q.lambda(k), &e_tilde);
    let g = model.apply_linear(q.lambda(k - 1), &step);
    if !g.coord(k).is_zero() || !g.coord(k - 1).is_zero() {
        return Err(Error::NotInF0(
            "reduced element does not lie in F_(k-2)".into(),
        ));
    }
    let sub = model.sub_model(k - 2)?;
    let head = regenerate_presentation(&sub, &g.restrict(k - 2))?;
    let order = head.order();
    let mut factors = head.factors().to_vec();
    factors.push((q.lambda(k) + int(1), SeriesB::one(order)));
    Presentation::new(factors)
}

/// Recursion without the `F0` membership check.
fn alpha_raw(p: &Presentation) -> Result<Rat> {
    if p.rank() == 2 {
        return rank2_parameter(p);
    }
    alpha_raw(&alpha_reduce_step(p)?)
}

fn check_alpha_domain(p: &Presentation) -> Result<()> {
    require_shape(p)?;
    if p.rank() < 2 {
        return Err(Error::WrongRank {
            expected: 2,
            actual: p.rank(),
        });
    }
    require_positive_gaps(p)?;
    Ok(())
}

/// `true` when `p` lies in `F0`: `F_(k-1)` and `E/F_1` are semi-simple.
pub fn is_in_f0(p: &Presentation) -> Result<bool> {
    check_alpha_domain(p)?;
    let k = p.rank();
    if k == 2 {
        return Ok(true);
    }
    let mut ss = SemisimpleTable::new(p);
    Ok(ss.get(1, k - 1)? && ss.get(2, k)?)
}

pub fn alpha_invariant(p: &Presentation) -> Result<Rat> {
    if !is_in_f0(p)? {
        return Err(Error::NotInF0("F_(k-1) or E/F_1 is not semi-simple".into()));
    }
    alpha_raw(p)
}

/// Closed rank-3 formula: coefficient of `b^(p_1+p_2)` in `V S_1` where
/// `b V' - p_2 V = -p_2 S_2` without term in `b^(p_2)`.
pub fn rank3_alpha_formula(p: &Presentation) -> Result<Rat> {
    if p.rank() != 3 {
        return Err(Error::WrongRank {
            expected: 3,
            actual: p.rank(),
        });
    }
    require_shape(p)?;
    let g = require_positive_gaps(p)?;
    let q = p.normalize_last_unit();
    let (p1, p2) = (g[0], g[1]);
    let s1 = q.unit(1);
    let obstruction = s1.coeff_at(p1)?;
    if !obstruction.is_zero() {
        return Err(Error::ResonantObstruction {
            index: p1,
            value: obstruction.clone(),
        });
    }
    let c = int(p2 as i64);
    let rhs = q.unit(2).scale(&-c);
    let v = solve_resonant_ode(OdeForm::A, p2, &rhs)?;
    Ok((&v * s1).coeff_at(p1 + p2)?.clone())
}

/// Memoized semi-simplicity of every sub-quotient `F_j / F_(i-1)`.
struct SemisimpleTable<'a> {
    p: &'a Presentation,
    memo: HashMap<(usize, usize), bool>,
}

impl<'a> SemisimpleTable<'a> {
    fn new(p: &'a Presentation) -> Self {
        SemisimpleTable {
            p,
            memo: HashMap::new(),
        }
    }

    fn get(&mut self, i: usize, j: usize) -> Result<bool> {
        if j <= i {
            return Ok(true);
        }
        if let Some(&v) = self.memo.get(&(i, j)) {
            return Ok(v);
        }
        let v = self.get(i, j - 1)?
            && self.get(i + 1, j)?
            && alpha_raw(&self.p.sub_quotient(i, j)?)?.is_zero();
        self.memo.insert((i, j), v);
        Ok(v)
    }
}

pub fn is_semisimple(p: &Presentation) -> Result<bool> {
    require_shape(p)?;
    if p.rank() <= 1 {
        return Ok(true);
    }
    if gaps(p).contains(&0) {
        return Ok(false);
    }
    SemisimpleTable::new(p).get(1, p.rank())
}

fn f0_alpha_nonzero(p: &Presentation) -> Result<Rat> {
    let alpha = alpha_invariant(p)?;
    if alpha.is_zero() {
        return Err(Error::AlphaZero);
    }
    Ok(alpha)
}

/// Class of the normal rank-2 sub-theme: invariants `lambda_1, lambda_k + k - 2`.
pub fn subtheme_class(p: &Presentation) -> Result<ThemeClass> {
    let alpha = f0_alpha_nonzero(p)?;
    let k = p.rank();
    Ok(ThemeClass {
        lambda_low: p.lambda(1).clone(),
        lambda_high: p.lambda(k) + int(k as i64 - 2),
        p: p.p_total().expect("primitive"),
        parameter: alpha,
    })
}

/// `(-1)^k prod_(i<=k-2) (p_1+..+p_i) / prod_(i<=k-2) (p_(k-i)+..+p_(k-1))`.
pub fn beta_factor(p: &Presentation) -> Rat {
    let g: Vec<i64> = p.p_integers().expect("primitive");
    let k = p.rank();
    let mut num = Rat::one();
    let mut den = Rat::one();
    for i in 1..=k.saturating_sub(2) {
        num *= int(g[..i].iter().sum());
        den *= int(g[k - 1 - i..k - 1].iter().sum());
    }
    let sign = if k.is_multiple_of(2) { int(1) } else { int(-1) };
    sign * num / den
}

/// Class of the rank-2 quotient theme: invariants `lambda_1 - k + 2, lambda_k`, parameter beta.
pub fn quotient_theme_class(p: &Presentation) -> Result<ThemeClass> {
    let alpha = f0_alpha_nonzero(p)?;
    let k = p.rank();
    Ok(ThemeClass {
        lambda_low: p.lambda(1) - int(k as i64 - 2),
        lambda_high: p.lambda(k).clone(),
        p: p.p_total().expect("primitive"),
        parameter: beta_factor(p) * alpha,
    })
}

/// Class of `T* (x) E_delta` for a rank-2 theme `T`.
pub fn dual_twist_rank2(t: &ThemeClass, delta: &Rat) -> ThemeClass {
    ThemeClass {
        lambda_low: delta - &t.lambda_high,
        lambda_high: delta - &t.lambda_low,
        p: t.p,
        parameter: -t.parameter.clone(),
    }
}
