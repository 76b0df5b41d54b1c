//! Finite-dimensional truncation `E / b^M E` with exact matrices for `a` and `b`.
//!
//! The basis vector `b^m e_j` (`m < M`) sits at index `m k + (j - 1)`, so indices
//! grow with the power of `b`. Because `b^M E` is a submodule, the truncation is
//! an honest quotient module and `AB - BA = B^2` holds exactly on every column.

use std::fmt::Write as _;

use num_traits::{One, Zero};

use crate::algebra::AbElement;
use crate::error::{Error, Result};
use crate::fresco::{AdaptedModel, ModuleElement, Presentation};
use crate::linalg::{is_zero_vec, mat_vec_cols, nullspace, solve, Echelon, Vector};
use crate::rat::Rat;
use crate::series::SeriesB;

#[derive(Clone, Debug)]
pub struct TruncatedRep {
    presentation: Presentation,
    rank: usize,
    depth: usize,
    a_cols: Vec<Vector>,
    b_cols: Vec<Vector>,
}

/// Minimal monic annihilator found by the oracle; coefficients are reliable up to `known_order`.
#[derive(Clone, Debug)]
pub struct Annihilator {
    pub element: AbElement,
    pub known_order: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubmoduleData {
    pub rank: usize,
    pub dim: usize,
    pub normal: bool,
    /// `dim E/F` at infinite depth, reported when `F` has full rank.
    pub codim: Option<usize>,
}

pub fn truncate_rep(m: &AdaptedModel, depth: usize) -> Result<TruncatedRep> {
    if depth < 4 {
        return Err(Error::DegenerateTruncation(format!(
            "oracle depth {depth} is below 4"
        )));
    }
    if m.order() + 1 < depth {
        return Err(Error::TruncationTooSmall(format!(
            "model known to order {} cannot fill oracle depth {depth}",
            m.order()
        )));
    }
    let k = m.rank();
    let dim = k * depth;
    let idx = |j: usize, n: usize| n * k + (j - 1);
    let mut a_cols = vec![vec![Rat::zero(); dim]; dim];
    let mut b_cols = vec![vec![Rat::zero(); dim]; dim];
    for j in 1..=k {
        let diag = m.diagonal(j);
        let unit = &m.units()[j - 1];
        for mm in 0..depth {
            let col = &mut a_cols[idx(j, mm)];
            for n in 0..depth - mm {
                col[idx(j, mm + n)] += diag.coeffs()[n].clone();
                if j > 1 {
                    col[idx(j - 1, mm + n)] += unit.coeffs()[n].clone();
                }
            }
            if mm + 1 < depth {
                col[idx(j, mm + 1)] += Rat::from_integer((mm as i64).into());
                b_cols[idx(j, mm)][idx(j, mm + 1)] = Rat::one();
            }
        }
    }
    Ok(TruncatedRep {
        presentation: m.presentation().clone(),
        rank: k,
        depth,
        a_cols,
        b_cols,
    })
}

impl TruncatedRep {
    pub fn from_presentation(p: &Presentation, depth: usize) -> Result<Self> {
        truncate_rep(&p.model()?, depth)
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn dim(&self) -> usize {
        self.rank * self.depth
    }

    pub fn index(&self, j: usize, m: usize) -> usize {
        m * self.rank + (j - 1)
    }

    /// Power of `b` carried by a basis index.
    pub fn level(&self, index: usize) -> usize {
        index / self.rank
    }

    pub fn a_matrix(&self) -> &[Vector] {
        &self.a_cols
    }

    pub fn b_matrix(&self) -> &[Vector] {
        &self.b_cols
    }

    pub fn apply_a(&self, v: &[Rat]) -> Vector {
        mat_vec_cols(&self.a_cols, v)
    }

    pub fn apply_b(&self, v: &[Rat]) -> Vector {
        mat_vec_cols(&self.b_cols, v)
    }

    /// `sum_m A^m c_m(B) v`.
    pub fn eval(&self, u: &AbElement, v: &[Rat]) -> Vector {
        let series_at = |c: &SeriesB, v: &[Rat]| {
            let mut acc = vec![Rat::zero(); v.len()];
            let mut w = v.to_vec();
            for n in 0..self.depth.min(c.order() + 1) {
                let cn = &c.coeffs()[n];
                if !cn.is_zero() {
                    for (a, x) in acc.iter_mut().zip(&w) {
                        if !x.is_zero() {
                            *a += cn * x;
                        }
                    }
                }
                w = self.apply_b(&w);
            }
            acc
        };
        let d = u.degree();
        let mut acc = series_at(&u.coeff(d), v);
        for m in (0..d).rev() {
            let ax = self.apply_a(&acc);
            let cv = series_at(&u.coeff(m), v);
            acc = ax.iter().zip(&cv).map(|(x, y)| x + y).collect();
        }
        acc
    }

    pub fn vector(&self, x: &ModuleElement) -> Result<Vector> {
        if x.order() + 1 < self.depth {
            return Err(Error::TruncationTooSmall(format!(
                "element known to order {} cannot fill oracle depth {}",
                x.order(),
                self.depth
            )));
        }
        let mut v = vec![Rat::zero(); self.dim()];
        for j in 1..=self.rank {
            for m in 0..self.depth {
                v[self.index(j, m)] = x.coord(j).coeffs()[m].clone();
            }
        }
        Ok(v)
    }

    pub fn element(&self, v: &[Rat]) -> ModuleElement {
        ModuleElement::new(
            (1..=self.rank)
                .map(|j| {
                    SeriesB::from_known(
                        (0..self.depth)
                            .map(|m| v[self.index(j, m)].clone())
                            .collect(),
                    )
                })
                .collect(),
        )
    }

    /// `b^m e_j`.
    pub fn basis_vector(&self, j: usize, m: usize) -> Vector {
        let mut v = vec![Rat::zero(); self.dim()];
        v[self.index(j, m)] = Rat::one();
        v
    }

    pub fn valuation(&self, v: &[Rat]) -> Option<usize> {
        v.iter().position(|x| !x.is_zero()).map(|i| self.level(i))
    }

    /// Checks `AB - BA = B^2` column by column.
    pub fn commutation_holds(&self) -> bool {
        (0..self.dim()).all(|c| {
            let e = &self.b_cols[c];
            let ab = self.apply_a(e);
            let a = &self.a_cols[c];
            let ba = self.apply_b(a);
            let bb = self.apply_b(e);
            ab.iter().zip(&ba).zip(&bb).all(|((x, y), z)| &(x - y) == z)
        })
    }

    /// Monic operator of minimal `a`-degree annihilating `x`.
    pub fn minimal_annihilator(&self, x: &[Rat]) -> Result<Annihilator> {
        let val = self.valuation(x).ok_or_else(|| {
            Error::DegenerateTruncation("the zero vector has no annihilator".into())
        })?;
        let m = self.depth;
        let relation = monic_relation(
            x,
            |v| self.apply_a(v),
            |v| self.apply_b(v),
            m,
            self.dim(),
            |d| (m >= val + d + 2).then(|| m - 1 - val - d),
        );
        match relation {
            Relation::Found(ann) => Ok(ann),
            Relation::Exhausted(d) => Err(Error::DegenerateTruncation(format!(
                "depth {m} leaves no known coefficients for degree {d} at valuation {val}"
            ))),
        }
    }

    /// Span closure of `gens` under `A` and `B`, with rank and normality data.
    pub fn submodule_analysis(&self, gens: &[Vector]) -> Result<SubmoduleData> {
        if gens.is_empty() {
            return Err(Error::DegenerateTruncation("no generators given".into()));
        }
        let span = self.closure(gens);
        let m = self.depth;
        let mut per_level = vec![0usize; m];
        for p in span.pivots() {
            per_level[self.level(p)] += 1;
        }
        let rank = per_level[m - 1];
        if per_level[m - 2] != rank {
            return Err(Error::TruncationTooSmall(format!(
                "pivot counts {} and {} at the two deepest levels differ",
                per_level[m - 2],
                rank
            )));
        }
        let dim = span.dim();
        let mut image = Echelon::new();
        for v in span.vectors() {
            image.insert(&self.apply_b(v));
        }
        let normal = dim - per_level[0] == image.dim();
        let codim = (rank == self.rank).then(|| self.dim() - dim);
        Ok(SubmoduleData {
            rank,
            dim,
            normal,
            codim,
        })
    }

    fn closure(&self, gens: &[Vector]) -> Echelon {
        let mut span = Echelon::new();
        let mut queue: Vec<Vector> = gens.to_vec();
        while let Some(v) = queue.pop() {
            if let Some(r) = span.insert(&v) {
                queue.push(self.apply_a(&r));
                queue.push(self.apply_b(&r));
            }
        }
        span
    }

    /// Kernel of `A - lambda B`.
    pub fn kernel_of_linear(&self, lambda: &Rat) -> Vec<Vector> {
        let dim = self.dim();
        let rows: Vec<Vector> = (0..dim)
            .map(|r| {
                (0..dim)
                    .map(|c| &self.a_cols[c][r] - lambda * &self.b_cols[c][r])
                    .collect()
            })
            .collect();
        nullspace(&rows, dim)
    }

    /// Zeroes every coordinate at level `levels` or deeper.
    pub fn project(&self, v: &[Rat], levels: usize) -> Vector {
        v.iter()
            .enumerate()
            .map(|(i, x)| {
                if self.level(i) < levels {
                    x.clone()
                } else {
                    Rat::zero()
                }
            })
            .collect()
    }

    /// Row-major text dump of `A` and `B`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (name, cols) in [("A", &self.a_cols), ("B", &self.b_cols)] {
            let _ = writeln!(out, "{name} {}x{}", self.dim(), self.dim());
            for r in 0..self.dim() {
                let row: Vec<String> = cols.iter().map(|c| c[r].to_string()).collect();
                let _ = writeln!(out, "{}", row.join(" "));
            }
        }
        out
    }
}

pub(crate) enum Relation {
    Found(Annihilator),
    /// The known order ran out at this degree.
    Exhausted(usize),
}

/// Smallest `d` with `A^d x + sum_(i<d) A^i c_i(B) x = 0`, solved over the vectors
/// `A^i B^nu x` (`nu < b_steps`). `known(d)` gives the reliable order at degree `d`.
pub(crate) fn monic_relation(
    x: &[Rat],
    apply_a: impl Fn(&[Rat]) -> Vector,
    apply_b: impl Fn(&[Rat]) -> Vector,
    b_steps: usize,
    max_degree: usize,
    known: impl Fn(usize) -> Option<usize>,
) -> Relation {
    let mut b_shifts = vec![x.to_vec()];
    for _ in 1..b_steps {
        let next = apply_b(b_shifts.last().expect("nonempty"));
        if is_zero_vec(&next) {
            break;
        }
        b_shifts.push(next);
    }
    // powers[i][nu] = A^i B^nu x
    let mut powers: Vec<Vec<Vector>> = vec![b_shifts];
    for d in 1..=max_degree {
        let Some(known) = known(d) else {
            return Relation::Exhausted(d);
        };
        let next: Vec<Vector> = powers[d - 1].iter().map(|v| apply_a(v)).collect();
        powers.push(next);
        let target: Vector = powers[d][0].iter().map(|t| -t).collect();
        let mut labels = Vec::new();
        let mut cols = Vec::new();
        for (i, row) in powers.iter().enumerate().take(d) {
            for (nu, v) in row.iter().enumerate() {
                if !is_zero_vec(v) {
                    labels.push((i, nu));
                    cols.push(v.clone());
                }
            }
        }
        if let Some(sol) = solve(&cols, &target) {
            let mut coeffs = vec![vec![Rat::zero(); known + 1]; d + 1];
            for ((i, nu), c) in labels.into_iter().zip(sol) {
                if nu <= known {
                    coeffs[i][nu] = c;
                }
            }
            coeffs[d][0] = Rat::one();
            let element = AbElement::new(coeffs.into_iter().map(SeriesB::from_known).collect());
            return Relation::Found(Annihilator {
                element,
                known_order: known,
            });
        }
    }
    Relation::Exhausted(max_degree + 1)
}

/// Dimension of the span of the projected kernel of `A - lambda B` below `levels`.
pub fn projected_kernel(rep: &TruncatedRep, lambda: &Rat, levels: usize) -> Echelon {
    let mut span = Echelon::new();
    for v in rep.kernel_of_linear(lambda) {
        span.insert(&rep.project(&v, levels));
    }
    span
}

/// `true` when some `x` outside `bE` satisfies `(a - mu b) x = 0`, i.e. `E` has a
/// normal rank-1 submodule isomorphic to `E_mu`.
pub fn has_normal_line(rep: &TruncatedRep, mu: &Rat) -> bool {
    let k = rep.rank();
    rep.kernel_of_linear(mu)
        .iter()
        .any(|v| v[..k].iter().any(|x| !x.is_zero()))
}

/// Semi-simplicity read off the truncation: the numbers `lambda_j + j` are
/// distinct and `E` has a normal rank-1 submodule `E_(lambda_k + k - 1)`.
pub fn semisimple_by_oracle(rep: &TruncatedRep) -> bool {
    let p = rep.presentation();
    let k = p.rank();
    let mut shifted: Vec<Rat> = (1..=k)
        .map(|j| p.lambda(j) + Rat::from_integer(j.into()))
        .collect();
    shifted.sort();
    if shifted.windows(2).any(|w| w[0] == w[1]) {
        return false;
    }
    let top = p.lambda(k) + Rat::from_integer((k - 1).into());
    has_normal_line(rep, &top)
}
