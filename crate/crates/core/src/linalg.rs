//! Dense exact linear algebra over `Rat`: row reduction, kernels, solving and
//! incremental spans with lowest-index pivots.

use num_traits::{One, Zero};

use crate::rat::Rat;

pub type Vector = Vec<Rat>;

pub fn is_zero_vec(v: &[Rat]) -> bool {
    v.iter().all(Zero::is_zero)
}

fn first_nonzero(v: &[Rat]) -> Option<usize> {
    v.iter().position(|x| !x.is_zero())
}

/// `row -= factor * pivot_row`, touching only the nonzero support of the pivot row.
fn axpy(row: &mut [Rat], factor: &Rat, pivot_row: &[Rat], support: &[usize]) {
    for &c in support {
        let t = factor * &pivot_row[c];
        row[c] -= t;
    }
}

fn support(v: &[Rat]) -> Vec<usize> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, _)| i)
        .collect()
}

/// Reduces `rows` (each of length `ncols`) to reduced row echelon form in place.
/// Returns the pivot columns; rows past the rank are zero.
pub fn rref(rows: &mut [Vector], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let sup = support(&rows[r]);
        let (head, tail) = rows.split_at_mut(r);
        let (pivot_row, rest) = tail.split_first_mut().expect("row r exists");
        for row in head.iter_mut().chain(rest.iter_mut()) {
            if !row[c].is_zero() {
                let f = row[c].clone();
                axpy(row, &f, pivot_row, &sup);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of `{x : M x = 0}` for the `nrows x ncols` matrix `m` (row-major).
pub fn nullspace(m: &[Vector], ncols: usize) -> Vec<Vector> {
    let mut rows = m.to_vec();
    let pivots = rref(&mut rows, ncols);
    let mut basis = Vec::new();
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Rat::zero(); ncols];
        v[free] = Rat::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -rows[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Coefficients `c` with `sum_i c_i columns[i] = target`, free variables set to zero.
pub fn solve(columns: &[Vector], target: &[Rat]) -> Option<Vector> {
    let n = columns.len();
    let dim = target.len();
    let mut rows: Vec<Vector> = (0..dim)
        .map(|r| {
            let mut row: Vector = columns.iter().map(|col| col[r].clone()).collect();
            row.push(target[r].clone());
            row
        })
        .filter(|row| !is_zero_vec(row))
        .collect();
    let pivots = rref(&mut rows, n + 1);
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![Rat::zero(); n];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = rows[r][n].clone();
    }
    Some(x)
}

/// `M v` for a matrix stored by columns.
pub fn mat_vec_cols(cols: &[Vector], v: &[Rat]) -> Vector {
    let dim = cols.first().map_or(0, Vec::len);
    let mut out = vec![Rat::zero(); dim];
    for (col, x) in cols.iter().zip(v) {
        if x.is_zero() {
            continue;
        }
        for (o, c) in out.iter_mut().zip(col) {
            if !c.is_zero() {
                *o += c * x;
            }
        }
    }
    out
}

/// Incremental span kept in echelon form; each stored vector has a distinct
/// pivot equal to its lowest nonzero index. Rows are kept sorted by pivot.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<(usize, Vector)>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|(p, _)| *p).collect()
    }

    pub fn vectors(&self) -> impl Iterator<Item = &Vector> {
        self.rows.iter().map(|(_, v)| v)
    }

    /// Residual of `v` after eliminating every stored pivot.
    pub fn reduce(&self, v: &[Rat]) -> Vector {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if !v[*p].is_zero() {
                let f = v[*p].clone() / &row[*p];
                let sup = support(row);
                axpy(&mut v, &f, row, &sup);
            }
        }
        v
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        is_zero_vec(&self.reduce(v))
    }

    /// Adds `v` to the span; returns the reduced vector when it was new.
    pub fn insert(&mut self, v: &[Rat]) -> Option<Vector> {
        let r = self.reduce(v);
        let p = first_nonzero(&r)?;
        let at = self.rows.partition_point(|(q, _)| *q < p);
        self.rows.insert(at, (p, r.clone()));
        Some(r)
    }
}
