//! Seeded random inputs for verification runs.

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::AbElement;
use crate::alpha::is_in_f0;
use crate::error::{Error, Result};
use crate::fresco::{regenerate_presentation, AdaptedModel, ModuleElement, Presentation};
use crate::rat::{int, rat, Rat};
use crate::series::SeriesB;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small rational with numerator in `-5..=5` and denominator in `1..=4`.
pub fn small_rat(rng: &mut impl Rng) -> Rat {
    rat(rng.gen_range(-5..=5), rng.gen_range(1..=4))
}

pub fn nonzero_rat(rng: &mut impl Rng) -> Rat {
    loop {
        let r = small_rat(rng);
        if !r.is_zero() {
            return r;
        }
    }
}

/// Sparse series with at most `terms` nonzero coefficients of exponent `<= max_exp`.
pub fn sparse_series(rng: &mut impl Rng, terms: usize, max_exp: usize, order: usize) -> SeriesB {
    let mut coeffs = vec![Rat::zero(); order + 1];
    for _ in 0..terms {
        let e = rng.gen_range(0..=max_exp.min(order));
        coeffs[e] = small_rat(rng);
    }
    SeriesB::from_known(coeffs)
}

/// Unit with constant term 1 and a few sparse higher terms.
pub fn unit_series(rng: &mut impl Rng, max_exp: usize, order: usize) -> SeriesB {
    let terms = rng.gen_range(0..=3);
    let s = sparse_series(rng, terms, max_exp.max(1), order);
    let mut coeffs = s.coeffs().to_vec();
    coeffs[0] = Rat::one();
    SeriesB::from_known(coeffs)
}

/// Random element of a-degree `<= max_degree` with sparse coefficients.
pub fn ab_element(rng: &mut impl Rng, max_degree: usize, order: usize) -> AbElement {
    let degree = rng.gen_range(0..=max_degree);
    let coeffs = (0..=degree)
        .map(|_| {
            let terms = rng.gen_range(1..=3);
            sparse_series(rng, terms, 6, order)
        })
        .collect();
    AbElement::new(coeffs)
}

/// Fractional parts used for the base class of random presentations.
const CLASSES: [(i64, i64); 6] = [(1, 1), (1, 2), (1, 3), (2, 3), (1, 4), (3, 5)];

/// Random gaps `p_j` in `min_gap..=max_gap`.
pub fn gaps(rng: &mut impl Rng, rank: usize, min_gap: i64, max_gap: i64) -> Vec<i64> {
    (1..rank)
        .map(|_| rng.gen_range(min_gap..=max_gap))
        .collect()
}

/// Principal primitive geometric lambdas with the given gaps.
pub fn lambdas_for_gaps(rng: &mut impl Rng, gaps: &[i64]) -> Vec<Rat> {
    let k = gaps.len() + 1;
    let (n, d) = *CLASSES.choose(rng).expect("nonempty");
    let lift = rng.gen_range(0..=1);
    let mut lambda = int(k as i64 - 1 + lift) + rat(n, d);
    let mut out = vec![lambda.clone()];
    for p in gaps {
        lambda = &lambda + int(p - 1);
        out.push(lambda.clone());
    }
    out
}

/// Principal primitive presentation of the given rank with gaps in `0..=3`.
pub fn presentation(rng: &mut impl Rng, rank: usize, order: usize) -> Presentation {
    let g = gaps(rng, rank, 0, 3);
    presentation_with_gaps(rng, &g, order)
}

pub fn presentation_with_gaps(rng: &mut impl Rng, gaps: &[i64], order: usize) -> Presentation {
    let lambdas = lambdas_for_gaps(rng, gaps);
    let factors = lambdas
        .into_iter()
        .map(|l| (l, unit_series(rng, 6, order)))
        .collect();
    Presentation::new(factors).expect("sampled presentation is valid")
}

/// Presentation in the class `F0` with gaps in `1..=3`. From rank 3 on, the
/// obstruction coefficients of adjacent rank-2 sub-quotients are cleared, then
/// the sample is kept only if the whole class condition holds.
pub fn f0_presentation(rng: &mut impl Rng, rank: usize, order: usize) -> Presentation {
    loop {
        let g = gaps(rng, rank, 1, 3);
        let lambdas = lambdas_for_gaps(rng, &g);
        let mut factors = Vec::with_capacity(rank);
        for (j, l) in lambdas.into_iter().enumerate() {
            let mut s = unit_series(rng, 6, order);
            if rank >= 3 && j + 1 < rank {
                let mut coeffs = s.coeffs().to_vec();
                coeffs[g[j] as usize] = Rat::zero();
                s = SeriesB::from_known(coeffs);
            }
            factors.push((l, s));
        }
        let p = Presentation::new(factors).expect("sampled presentation is valid");
        if is_in_f0(&p).unwrap_or(false) {
            return p;
        }
    }
}

/// Random element with a nonzero constant term in the top coordinate.
pub fn module_element(rng: &mut impl Rng, rank: usize, order: usize) -> ModuleElement {
    let coords = (0..rank)
        .map(|j| {
            let terms = rng.gen_range(0..=3);
            let s = sparse_series(rng, terms, 5, order);
            if j + 1 == rank {
                let mut c = s.coeffs().to_vec();
                c[0] = nonzero_rat(rng);
                SeriesB::from_known(c)
            } else {
                s
            }
        })
        .collect();
    ModuleElement::new(coords)
}

/// Draws a seed when none is given.
pub fn fresh_seed() -> u64 {
    rand::random()
}

/// Random generator of the model, with the presentation it regenerates.
pub fn try_generator(
    rng: &mut impl Rng,
    model: &AdaptedModel,
) -> Result<(ModuleElement, Presentation)> {
    for _ in 0..64 {
        let g = module_element(rng, model.rank(), model.order());
        match regenerate_presentation(model, &g) {
            Ok(p) => return Ok((g, p)),
            Err(Error::NotAGenerator { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::NotAGenerator { stage: 0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alpha::alpha_invariant;

    #[test]
    fn deterministic_for_a_seed() {
        let a = presentation(&mut rng(7), 3, 16);
        let b = presentation(&mut rng(7), 3, 16);
        assert_eq!(a, b);
        assert!(a.is_principal() && a.is_primitive() && a.is_geometric());
    }

    #[test]
    fn f0_samples() {
        let mut r = rng(11);
        for k in 2..=4 {
            let p = f0_presentation(&mut r, k, 24);
            assert!(is_in_f0(&p).unwrap());
            assert!(alpha_invariant(&p).is_ok());
        }
    }

    #[test]
    fn generators_regenerate() {
        let mut r = rng(3);
        let p = presentation(&mut r, 3, 16);
        let m = p.model().unwrap();
        let (g, q) = try_generator(&mut r, &m).unwrap();
        assert_eq!(q.rank(), 3);
        assert!(!g.coord(3).constant_term().is_zero());
    }
}
