//! Randomized property suites used by the acceptance target and the `verify` command.
//!
//! Every suite draws from its own seeded stream, so results do not depend on
//! the order in which suites run.

use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::algebra::{commutator_with_b_power, AbElement};
use crate::alpha::{
    alpha_invariant, classify_rank2, is_semisimple, rank3_alpha_formula, subtheme_class,
};
use crate::error::Result;
use crate::fresco::{monic_expansion, unit_one_plus, Presentation};
use crate::identities::{exchange_identity, unit_exchange_identity, v_identity};
use crate::oracle::{projected_kernel, semisimple_by_oracle, TruncatedRep};
use crate::rat::{int, rat, Rat};
use crate::sample::{self, SampleRng};
use crate::series::SeriesB;
use crate::xi::{analyze_xi, XiExpansion};

pub const CRITERIA: [(usize, &str); 10] = [
    (1, "commutation"),
    (2, "bernstein"),
    (3, "exchange identities"),
    (4, "rank-2 alpha invariance"),
    (5, "rank-3 alpha agreement"),
    (6, "semi-simplicity"),
    (7, "oracle equivalence"),
    (8, "xi themes"),
    (9, "codimension"),
    (10, "rank-2 kernel line"),
];

#[derive(Clone, Debug)]
pub struct Plan {
    pub order: usize,
    pub depth: usize,
    pub seed: u64,
    /// Overrides every suite's sample count when set.
    pub samples: Option<usize>,
}

impl Plan {
    pub fn standard(seed: u64) -> Self {
        Plan {
            order: 32,
            depth: 32,
            seed,
            samples: None,
        }
    }

    fn count(&self, default: usize) -> usize {
        self.samples.unwrap_or(default)
    }

    fn rng(&self, id: usize) -> SampleRng {
        sample::rng(
            self.seed
                .wrapping_add((id as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)),
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub id: usize,
    pub name: String,
    pub passed: bool,
    pub checks: usize,
    pub failed: usize,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

const MAX_LISTED: usize = 8;

#[derive(Default)]
struct Tally {
    checks: usize,
    failed: usize,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < MAX_LISTED {
                self.failures.push(what());
            }
        }
    }

    /// Records an engine error as a failed check.
    fn ok<T>(&mut self, r: Result<T>, context: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(false, || format!("{}: {} ({e})", context(), e.name()));
                None
            }
        }
    }

    fn note(&mut self, text: String) {
        self.notes.push(text);
    }

    fn finish(self, id: usize) -> CriterionReport {
        CriterionReport {
            id,
            name: CRITERIA[id - 1].1.to_string(),
            passed: self.failed == 0 && self.checks > 0,
            checks: self.checks,
            failed: self.failed,
            failures: self.failures,
            notes: self.notes,
        }
    }
}

fn same(x: &AbElement, y: &AbElement) -> bool {
    x.agrees_to(y, x.order().min(y.order()))
}

pub fn run(id: usize, plan: &Plan) -> CriterionReport {
    let mut t = Tally::default();
    let mut rng = plan.rng(id);
    match id {
        1 => commutation(plan, &mut rng, &mut t),
        2 => bernstein_suite(plan, &mut rng, &mut t),
        3 => exchange(plan, &mut rng, &mut t),
        4 => rank2_invariance(plan, &mut rng, &mut t),
        5 => rank3_agreement(plan, &mut rng, &mut t),
        6 => semisimplicity(plan, &mut rng, &mut t),
        7 => oracle_equivalence(plan, &mut rng, &mut t),
        8 => xi_themes(plan, &mut t),
        9 => codimension(plan, &mut rng, &mut t),
        10 => kernel_line(plan, &mut rng, &mut t),
        _ => panic!("unknown criterion {id}"),
    }
    t.finish(id)
}

pub fn run_all(plan: &Plan) -> Vec<CriterionReport> {
    CRITERIA.iter().map(|(id, _)| run(*id, plan)).collect()
}

fn commutation(plan: &Plan, rng: &mut SampleRng, t: &mut Tally) {
    let n = plan.order;
    let a = AbElement::a(n);
    let b = AbElement::b(n);
    let b2 = b.mul(&b);
    t.check(same(&a.mul(&b).sub(&b.mul(&a)), &b2), || {
        "ab - ba != b^2".into()
    });
    for nu in 0..=8 {
        let bnu = AbElement::from_series(SeriesB::monomial(Rat::one(), nu, n));
        let expected = AbElement::from_series(SeriesB::monomial(int(nu as i64), nu + 1, n));
        t.check(same(&commutator_with_b_power(nu, n), &expected), || {
            format!("a b^{nu} - b^{nu} a != {nu} b^{}", nu + 1)
        });
        let rhs = bnu.mul(&a.add(&b.scale(&int(nu as i64))));
        t.check(same(&a.mul(&bnu), &rhs), || {
            format!("a b^{nu} != b^{nu}(a + {nu} b)")
        });
    }
    let witness = Presentation::trivial(&[rat(3, 2), rat(5, 2)], n).expect("valid");
    let rep = t.ok(
        TruncatedRep::from_presentation(&witness, plan.depth),
        || "oracle for the product check".into(),
    );
    for i in 0..plan.count(100) {
        let u = sample::ab_element(rng, 3, n);
        let v = sample::ab_element(rng, 3, n);
        let w = sample::ab_element(rng, 2, n);
        let lhs = a.mul(&b.mul(&u)).sub(&b.mul(&a.mul(&u)));
        t.check(same(&lhs, &b2.mul(&u)), || {
            format!("sample {i}: (ab - ba) u != b^2 u for u = {u}")
        });
        let rhs = u.mul(&a).mul(&b).sub(&u.mul(&b).mul(&a));
        t.check(same(&rhs, &u.mul(&b2)), || {
            format!("sample {i}: u (ab - ba) != u b^2")
        });
        t.check(same(&u.mul(&v).mul(&w), &u.mul(&v.mul(&w))), || {
            format!("sample {i}: product is not associative")
        });
        if let Some(rep) = &rep {
            let x = rep.basis_vector(2, 0);
            let direct = rep.eval(&u.mul(&v), &x);
            let nested = rep.eval(&u, &rep.eval(&v, &x));
            t.check(direct == nested, || {
                format!("sample {i}: matrices disagree with the product")
            });
        }
    }
}

fn bernstein_suite(plan: &Plan, rng: &mut SampleRng, t: &mut Tally) {
    for i in 0..plan.count(100) {
        let k = rng.gen_range(1..=4);
        let p = sample::presentation(rng, k, plan.order);
        let Some(expanded) = t.ok(p.expand(), || format!("expand {p}")) else {
            continue;
        };
        let Some(initial) = t.ok(expanded.initial_form(k), || format!("initial form of {p}"))
        else {
            continue;
        };
        let bern = p.bernstein();
        let Some(pe) = t.ok(bern.element.expand(), || {
            format!("Bernstein element of {p}")
        }) else {
            continue;
        };
        t.check(same(&initial, &pe), || {
            format!("sample {i}: initial form differs for {p}")
        });
        let roots: Vec<Rat> = (1..=k)
            .map(|j| -(p.lambda(j) + int(j as i64) - int(k as i64)))
            .collect();
        t.check(bern.roots == roots, || {
            format!("sample {i}: roots differ for {p}")
        });
        for split in 1..k {
            let f = p.sub_quotient(1, split).expect("in range");
            let g = p.sub_quotient(split + 1, k).expect("in range");
            let pf = f.bernstein().element.expand().expect("trivial units");
            let pg = g.bernstein().element.expand().expect("trivial units");
            t.check(same(&pe, &pf.mul(&pg)), || {
                format!("sample {i}: P_E != P_F P_G at split {split} for {p}")
            });
            t.check(bern.mu == &f.bernstein().mu + &g.bernstein().mu, || {
                format!("sample {i}: mu is not additive at split {split}")
            });
        }
    }
}

fn exchange(plan: &Plan, rng: &mut SampleRng, t: &mut Tally) {
    let n = plan.order;
    for _ in 0..plan.count(50) {
        let l2 = sample::small_rat(rng);
        let l3 = sample::small_rat(rng);
        let c = exchange_identity(&l2, &l3, n);
        t.check(c.holds, || {
            format!("exchange fails for ({l2}, {l3}): {:?}", c.first_difference)
        });
    }
    let trials = plan.count(20);
    let mut unit_held = 0;
    let mut v_held = 0;
    let mut first_miss = None;
    for _ in 0..trials {
        let l1 = int(3) + crate::rat::abs(&sample::small_rat(rng));
        let p1 = rng.gen_range(1..=4);
        let p2 = rng.gen_range(1..=4);
        let rho = sample::nonzero_rat(rng);
        let u = unit_exchange_identity(&l1, p1, &rho, n);
        if u.holds {
            unit_held += 1;
        } else if first_miss.is_none() {
            first_miss = Some(format!(
                "U with lambda_1={l1}, p_1={p1}, rho={rho}: {:?}",
                u.first_difference
            ));
        }
        let v = v_identity(&l1, p1, p2, &rho, n);
        if v.holds {
            v_held += 1;
        } else if first_miss.is_none() {
            first_miss = Some(format!(
                "V with lambda_1={l1}, p=({p1},{p2}), alpha={rho}: {:?}",
                v.first_difference
            ));
        }
    }
    t.note(format!(
        "unit-exchange identity (U = 1 + rho b^p1): held exactly in {unit_held}/{trials} samples"
    ));
    t.note(format!(
        "V identity (beta = (1 + p2/p1) alpha): held exactly in {v_held}/{trials} samples"
    ));
    if let Some(m) = first_miss {
        t.note(format!("first failure: {m}"));
    }
}

fn rank2_invariance(plan: &Plan, rng: &mut SampleRng, t: &mut Tally) {
    for i in 0..plan.count(50) {
        let p = sample::presentation(rng, 2, plan.order);
        let Some(class) = t.ok(classify_rank2(&p), || format!("classify {p}")) else {
            continue;
        };
        let Some(model) = t.ok(p.model(), || format!("model of {p}")) else {
            continue;
        };
        for _ in 0..10 {
            let Some((g, q)) = t.ok(sample::try_generator(rng, &model), || {
                format!("generator for {p}")
            }) else {
                continue;
            };
            let Some(other) = t.ok(classify_rank2(&q), || format!("classify {q}")) else {
                continue;
            };
            t.check(other.alpha == class.alpha, || {
                format!(
                    "sample {i}: alpha {} for {p} but {} after regenerating from {:?}",
                    class.alpha,
                    other.alpha,
                    g.coords()
                        .iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                )
            });
        }
    }
}

fn rank3_agreement(plan: &Plan, rng: &mut SampleRng, t: &mut Tally) {
    let n = plan.order;
    for i in 0..plan.count(50) {
        let p = sample::f0_presentation(rng, 3, n);
        let a = t.ok(alpha_invariant(&p), || format!("alpha of {p}"));
        let f = t.ok(rank3_alpha_formula(&p), || format!("formula for {p}"));
        if let (Some(a), Some(f)) = (a, f) {
            t.check(a == f, || {
                format!("sample {i}: recursion {a} != formula {f} for {p}")
            });
        }
    }
    for i in 0..plan.count(20) {
        let base = sample::f0_presentation(rng, 3, n);
        let mut factors = base.factors().to_vec();
        factors[1].1 = SeriesB::one(n);
        let p = Presentation::new(factors).expect("valid");
        let g = p.p_integers().expect("primitive");
        let expected = p.unit(1).coeffs()[(g[0] + g[1]) as usize].clone();
        let a = t.ok(alpha_invariant(&p), || format!("alpha of {p}"));
        let f = t.ok(rank3_alpha_formula(&p), || format!("formula for {p}"));
        if let (Some(a), Some(f)) = (a, f) {
            t.check(a == expected && f == expected, || {
                format!(
                    "S_2 = 1 sample {i}: expected {expected}, recursion {a}, formula {f} for {p}"
                )
            });
        }
    }
    let worked = Presentation::new(vec![
        (int(3), unit_one_plus(int(1), 2, n)),
        (int(3), SeriesB::one(n)),
        (int(3), SeriesB::one(n)),
    ])
    .expect("valid");
    if let Some(a) = t.ok(alpha_invariant(&worked), || "worked instance".into()) {
        t.check(a == int(1), || {
            format!("worked instance alpha {a}, expected 1")
        });
    }
    if let Some(c) = t.ok(subtheme_class(&worked), || "worked sub-theme".into()) {
        let ok =
            c.lambda_low == int(3) && c.lambda_high == int(4) && c.p == 2 && c.parameter == int(1);
        t.check(ok, || format!("worked sub-theme {c:?}"));
    }
}

fn oracle_semisimple(plan: &Plan, p: &Presentation, t: &mut Tally) -> Option<bool> {
    let rep = t.ok(TruncatedRep::from_presentation(p, plan.depth), || {
        format!("oracle for {p}")
    })?;
    Some(semisimple_by_oracle(&rep))
}

fn semisimplicity(plan: &Plan, rng: &mut SampleRng, t: &mut Tally) {
    let n = plan.order;
    for i in 0..plan.count(20) {
        let k = rng.gen_range(1..=4);
        let gaps = sample::gaps(rng, k, 1, 3);
        let lambdas = sample::lambdas_for_gaps(rng, &gaps);
        let p = Presentation::trivial(&lambdas, n).expect("valid");
        let ss = t.ok(is_semisimple(&p), || format!("ss of {p}"));
        let o = oracle_semisimple(plan, &p, t);
        t.check(ss == Some(true) && o == Some(true), || {
            format!("trivial units sample {i}: engine {ss:?}, oracle {o:?} for {p}")
        });
    }
    for i in 0..plan.count(20) {
        let k = rng.gen_range(2..=4);
        let mut gaps = sample::gaps(rng, k, 0, 3);
        let j = rng.gen_range(0..gaps.len());
        gaps[j] = 0;
        let p = sample::presentation_with_gaps(rng, &gaps, n);
        let ss = t.ok(is_semisimple(&p), || format!("ss of {p}"));
        let o = oracle_semisimple(plan, &p, t);
        t.check(ss == Some(false) && o == Some(false), || {
            format!("zero gap sample {i}: engine {ss:?}, oracle {o:?} for {p}")
        });
    }
    let mut nonzero = 0;
    let total = plan.count(50);
    for i in 0..total {
        let k = 2 + i % 3;
        let p = sample::f0_presentation(rng, k, n);
        let ss = t.ok(is_semisimple(&p), || format!("ss of {p}"));
        let a = t.ok(alpha_invariant(&p), || format!("alpha of {p}"));
        let o = oracle_semisimple(plan, &p, t);
        if let (Some(ss), Some(a), Some(o)) = (ss, a, o) {
            if !a.is_zero() {
                nonzero += 1;
            }
            t.check(ss == a.is_zero() && ss == o, || {
                format!("F0 sample {i}: semisimple {ss}, alpha {a}, oracle {o} for {p}")
            });
        }
    }
    t.note(format!("F0 samples with nonzero alpha: {nonzero}/{total}"));
}

fn oracle_equivalence(plan: &Plan, rng: &mut SampleRng, t: &mut Tally) {
    let m = plan.depth;
    for i in 0..plan.count(50) {
        let k = rng.gen_range(1..=3);
        let p = sample::presentation(rng, k, plan.order);
        let Some(rep) = t.ok(TruncatedRep::from_presentation(&p, m), || {
            format!("oracle for {p}")
        }) else {
            continue;
        };
        t.check(rep.commutation_holds(), || {
            format!("sample {i}: AB - BA != B^2 for {p}")
        });
        let Some(monic) = t.ok(monic_expansion(&p), || format!("expand {p}")) else {
            continue;
        };
        if let Some(ann) = t.ok(rep.minimal_annihilator(&rep.basis_vector(k, 0)), || {
            format!("annihilator of e_k in {p}")
        }) {
            t.check(
                ann.known_order + 1 == m - k && ann.element.agrees_to(&monic, ann.known_order),
                || format!("sample {i}: oracle annihilator of e_k differs from {p}"),
            );
        }
        let Some(model) = t.ok(p.model(), || format!("model of {p}")) else {
            continue;
        };
        for _ in 0..2 {
            let Some((g, q)) = t.ok(sample::try_generator(rng, &model), || {
                format!("generator for {p}")
            }) else {
                continue;
            };
            let Some(v) = t.ok(rep.vector(&g), || "generator vector".into()) else {
                continue;
            };
            let ann = t.ok(rep.minimal_annihilator(&v), || {
                format!("annihilator of a generator of {p}")
            });
            let expected = t.ok(monic_expansion(&q), || format!("expand {q}"));
            if let (Some(ann), Some(expected)) = (ann, expected) {
                t.check(ann.element.agrees_to(&expected, ann.known_order), || {
                    format!("sample {i}: generator annihilator differs from regenerated {q}")
                });
            }
        }
    }
}

fn xi_themes(plan: &Plan, t: &mut Tally) {
    let lambdas = [rat(1, 2), rat(1, 3), rat(7, 4), int(1), rat(5, 3)];
    for lambda in &lambdas {
        for n in 0..=3usize {
            let Some(phi) = t.ok(XiExpansion::log_power(lambda, n, plan.depth), || {
                "expansion".into()
            }) else {
                continue;
            };
            let Some(r) = t.ok(analyze_xi(&phi), || {
                format!("analysis of s^({lambda}-1) Log^{n}")
            }) else {
                continue;
            };
            let expected: Vec<Rat> = (0..=n).rev().map(|i| lambda + int(i as i64)).collect();
            let ranks: Vec<usize> = (1..=n + 1).collect();
            let bern = r.presentation.bernstein().element;
            t.check(r.rank == n + 1, || {
                format!("lambda {lambda}, N {n}: rank {}", r.rank)
            });
            t.check(
                bern.lambdas() == expected && bern.units().iter().all(SeriesB::is_one),
                || format!("lambda {lambda}, N {n}: Bernstein element {bern}"),
            );
            t.check(r.log_ranks == ranks, || {
                format!("lambda {lambda}, N {n}: log ranks {:?}", r.log_ranks)
            });
            t.check(r.log_ranks.first() == Some(&1), || {
                format!("lambda {lambda}, N {n}: S_1 rank is not 1")
            });
        }
    }
}

fn codimension(plan: &Plan, rng: &mut SampleRng, t: &mut Tally) {
    let m = plan.depth;
    for i in 0..plan.count(20) {
        let k = rng.gen_range(1..=4);
        let p = sample::presentation(rng, k, plan.order);
        let Some(rep) = t.ok(TruncatedRep::from_presentation(&p, m), || {
            format!("oracle for {p}")
        }) else {
            continue;
        };
        let gens: Vec<_> = (1..=k).map(|j| rep.basis_vector(j, 1)).collect();
        if let Some(d) = t.ok(rep.submodule_analysis(&gens), || format!("bE in {p}")) {
            t.check(d.codim == Some(k), || {
                format!("sample {i}: dim E/bE = {:?} for {p}", d.codim)
            });
        }
        let mu_of = |v: &[Rat], t: &mut Tally| -> Option<Rat> {
            let ann = t.ok(rep.minimal_annihilator(v), || format!("annihilator in {p}"))?;
            Some(-ann.element.coeff(k - 1).coeffs()[1].clone())
        };
        let mu_e = mu_of(&rep.basis_vector(k, 0), t);
        let mu_be = mu_of(&rep.basis_vector(k, 1), t);
        if let (Some(e), Some(be)) = (mu_e, mu_be) {
            t.check(e == p.bernstein().mu, || {
                format!("sample {i}: oracle mu(E) {e} vs {}", p.bernstein().mu)
            });
            t.check(&be - &e == int(k as i64), || {
                format!("sample {i}: mu(bE) - mu(E) = {} for {p}", &be - &e)
            });
        }
    }
}

fn kernel_line(plan: &Plan, rng: &mut SampleRng, t: &mut Tally) {
    let m = plan.depth;
    for i in 0..plan.count(20) {
        let trivial = i % 4 == 0;
        let gaps = sample::gaps(rng, 2, 1, 3);
        let p = if trivial {
            let lambdas = sample::lambdas_for_gaps(rng, &gaps);
            Presentation::trivial(&lambdas, plan.order).expect("valid")
        } else {
            sample::presentation_with_gaps(rng, &gaps, plan.order)
        };
        let Some(rep) = t.ok(TruncatedRep::from_presentation(&p, m), || {
            format!("oracle for {p}")
        }) else {
            continue;
        };
        let span = projected_kernel(&rep, p.lambda(1), m - 2);
        let Some(model) = t.ok(p.model(), || format!("model of {p}")) else {
            continue;
        };
        let Some(inv) = t.ok(p.unit(1).invert(), || "unit inverse".into()) else {
            continue;
        };
        let Some(line) = t.ok(rep.vector(&model.e(1).scale(&inv)), || {
            "kernel vector".into()
        }) else {
            continue;
        };
        t.check(
            span.dim() == 1 && span.contains(&rep.project(&line, m - 2)),
            || {
                format!(
                    "sample {i}: kernel of (a - lambda_1 b) has dimension {} for {p}",
                    span.dim()
                )
            },
        );
    }
}
