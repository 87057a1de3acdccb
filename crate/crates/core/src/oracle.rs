//! Brute-force equivalence suites: each check recomputes a quantity by an
//! independent route and compares.

use num_bigint::BigUint;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::budget::Budget;
use crate::catalog;
use crate::certify::classify::{classify_single_equation, EquationClass};
use crate::certify::gowers::{
    derive_alpha, form_of, gowers_twist, lemma_gowers_check, parametrize, quadratic_terms,
    trace_vanishes_identically, GowersSpec,
};
use crate::certify::psi::{
    psi_lambda_closed_form, psi_negativity_certificate, psi_nu, psi_table, PsiSpec,
};
use crate::density::{self, DensityEvaluator, FunctionTable};
use crate::error::{Error, Result};
use crate::fourier::{
    self, affine_quadratic_double_sum, affine_quadratic_sum, verify_fourier_bound, AffineSlice,
    QuadraticForm, DEFAULT_TOLERANCE,
};
use crate::gf::{Elem, FieldSpec};
use crate::linsys::{all_systems, index_vector, LinearSystem};
use crate::rational;

pub const SUITES: &[&str] = &[
    "structure",
    "solution-count",
    "phi-decomposition",
    "psi-closed-form",
    "fourier",
    "gowers",
    "classifier",
];

/// Tolerance for Parseval's identity.
pub const PARSEVAL_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleCheck {
    pub name: String,
    pub pass: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slack: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub pass: bool,
    pub checks: Vec<OracleCheck>,
}

#[derive(Default)]
struct Checks(Vec<OracleCheck>);

impl Checks {
    fn exact(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.0.push(OracleCheck {
            name: name.into(),
            pass,
            detail: detail.into(),
            slack: None,
            tolerance: None,
        });
    }

    fn bound(
        &mut self,
        name: impl Into<String>,
        slack: f64,
        tolerance: f64,
        detail: impl Into<String>,
    ) {
        self.0.push(OracleCheck {
            name: name.into(),
            pass: slack >= -tolerance,
            detail: detail.into(),
            slack: Some(slack),
            tolerance: Some(tolerance),
        });
    }

    fn finish(self, suite: &str) -> SuiteReport {
        SuiteReport {
            suite: suite.to_string(),
            pass: self.0.iter().all(|c| c.pass),
            checks: self.0,
        }
    }
}

/// Runs a named suite.
pub fn run_suite(name: &str, seed: u64, budget: Budget) -> Result<SuiteReport> {
    let checks = match name {
        "structure" => structure(budget)?,
        "solution-count" => solution_count(budget)?,
        "phi-decomposition" => phi_decomposition(seed, budget)?,
        "psi-closed-form" => psi_closed_form(budget)?,
        "fourier" => fourier_suite(seed, budget)?,
        "gowers" => gowers_suite(seed, budget)?,
        "classifier" => classifier()?,
        _ => {
            return Err(Error::usage(format!(
                "unknown oracle suite '{name}' (available: {})",
                SUITES.join(", ")
            )))
        }
    };
    Ok(checks.finish(name))
}

/// A random table with values a/b, b ≤ 8, in [−1/2, 1/2].
pub fn random_table(
    field: &FieldSpec,
    d: usize,
    rng: &mut impl Rng,
    budget: Budget,
) -> Result<FunctionTable> {
    let len = density::table_len(field, d, budget)?;
    let values = (0..len)
        .map(|_| {
            let den = rng.gen_range(1..=8i64);
            let num = rng.gen_range(-den..=den);
            rational::from_ints(num, 2 * den)
        })
        .collect();
    FunctionTable::new(field, d, values)
}

/// A random balanced table with values in [−1/2, 1/2].
pub fn random_balanced_table(
    field: &FieldSpec,
    d: usize,
    rng: &mut impl Rng,
    budget: Budget,
) -> Result<FunctionTable> {
    let f = random_table(field, d, rng, budget)?;
    let mean = f.mean();
    let centred = f.map(|v| v - &mean);
    let max = centred.max_abs().clone();
    let half = rational::from_ints(1, 2);
    Ok(if max > half {
        centred.scale(&(half / max))
    } else {
        centred
    })
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Solutions of L over F_q^n counted by testing all q^{nk} tuples.
pub fn brute_force_solution_count(l: &LinearSystem, n: usize, budget: Budget) -> Result<u64> {
    let field = l.field();
    let q = field.q() as u64;
    let total = budget.check_pow("tuples", q, (n * l.k()) as u64)?;
    let k = l.k();
    let count = (0..total)
        .into_par_iter()
        .filter(|&code| {
            let flat = index_vector(field, code as usize, n * k);
            l.rows().iter().all(|row| {
                (0..n).all(|c| {
                    (0..k).fold(Elem::ZERO, |acc, j| {
                        field.add(acc, field.mul(row[j], flat[j * n + c]))
                    }) == Elem::ZERO
                })
            })
        })
        .count();
    Ok(count as u64)
}

fn ap4_f5() -> LinearSystem {
    catalog::system("ap4-f5").expect("bundled")
}

fn structure(budget: Budget) -> Result<Checks> {
    let mut c = Checks::default();
    let l = ap4_f5();
    let field = l.field().clone();
    c.exact("rank", l.m() == 2, format!("m = {}", l.m()));
    c.exact("irredundant", !l.is_redundant(), "");
    // Independent scan of a·r1 + b·r2.
    let mut vectors = 0;
    let mut min_weight = usize::MAX;
    for a in field.elements() {
        for b in field.elements() {
            if a.is_zero() && b.is_zero() {
                continue;
            }
            let v: Vec<Elem> = (0..4)
                .map(|j| field.add(field.mul(a, l.rows()[0][j]), field.mul(b, l.rows()[1][j])))
                .collect();
            vectors += 1;
            min_weight = min_weight.min(v.iter().filter(|e| !e.is_zero()).count());
        }
    }
    let listed = l.row_space_vectors(budget)?.count();
    c.exact(
        "row-space-size",
        listed == 24 && vectors == 24,
        format!("{listed} listed, {vectors} scanned"),
    );
    let s = l.s(budget)?;
    c.exact(
        "s",
        s == 3 && min_weight == 3,
        format!("s = {s}, scanned minimum {min_weight}"),
    );
    let cl = l.c(budget)?;
    c.exact("c", cl == 4, format!("c = {cl}"));
    let crit = l.critical_sets(budget)?;
    let ok = crit.len() == 1
        && crit[0].set == vec![0, 1, 2, 3]
        && crit[0].m_b == 2
        && crit[0].system == l;
    c.exact("critical-sets", ok, format!("{} critical sets", crit.len()));
    Ok(c)
}

fn small_catalog() -> Vec<(&'static str, LinearSystem)> {
    catalog::entries()
        .filter_map(|e| e.system().ok().map(|l| (e.name, l)))
        .filter(|(_, l)| matches!(l.field().q(), 3 | 5))
        .collect()
}

fn solution_count(budget: Budget) -> Result<Checks> {
    let mut c = Checks::default();
    let cap = Budget(budget.0.min(2_000_000));
    for (name, l) in small_catalog() {
        for n in 1..=2 {
            let formula = l.solution_count(n);
            let enumerated = l.solutions(n, budget)?.count();
            let brute = brute_force_solution_count(&l, n, cap).ok();
            let pass = BigUint::from(enumerated) == formula
                && brute.is_none_or(|b| BigUint::from(b) == formula);
            c.exact(
                format!("{name}/n={n}"),
                pass,
                format!(
                    "formula {formula}, enumerated {enumerated}, brute force {}",
                    brute.map_or("skipped".into(), |b| b.to_string())
                ),
            );
        }
        if l.m() >= 2 {
            for record in l.critical_sets(budget)? {
                let (ok, detail) = extension_counts_match(&l, &record, budget)?;
                c.exact(format!("{name}/extensions{:?}", record.set), ok, detail);
            }
        }
    }
    Ok(c)
}

/// Every solution of L_B over F_q extends to the predicted number of
/// solutions of L.
fn extension_counts_match(
    l: &LinearSystem,
    record: &crate::linsys::CriticalSetRecord,
    budget: Budget,
) -> Result<(bool, String)> {
    let expected = l.extension_count(record, 1);
    let mut counts = std::collections::HashMap::<Vec<u32>, u64>::new();
    l.solutions(1, budget)?.for_each(|t: &[usize]| {
        let key: Vec<u32> = record.set.iter().map(|&i| t[i] as u32).collect();
        *counts.entry(key).or_default() += 1;
    });
    let restricted = record.system.solution_count(1);
    let all_match = counts.values().all(|&v| BigUint::from(v) == expected);
    let pass = all_match && BigUint::from(counts.len()) == restricted;
    Ok((
        pass,
        format!(
            "{} restricted solutions, each extending {expected} ways",
            counts.len()
        ),
    ))
}

fn is_self_critical(l: &LinearSystem, budget: Budget) -> Result<bool> {
    if l.m() == 1 {
        return Ok(l.k().is_multiple_of(2) && l.rows()[0].iter().all(|a| !a.is_zero()));
    }
    Ok(l.critical_sets(budget)?
        .iter()
        .any(|r| r.set.len() == l.k() && r.m_b == l.m()))
}

fn phi_decomposition(seed: u64, budget: Budget) -> Result<Checks> {
    let mut c = Checks::default();
    let systems = small_catalog();
    let results: Vec<Result<Vec<OracleCheck>>> = systems
        .par_iter()
        .enumerate()
        .map(|(idx, (name, l))| {
            let mut local = Checks::default();
            for d in 1..=2usize {
                if l.solution_count(d) > BigUint::from(200_000u32) {
                    continue;
                }
                let ev = DensityEvaluator::new(l, d, budget)?;
                let critical = if l.m() >= 2 {
                    l.critical_sets(budget)?
                } else {
                    Vec::new()
                };
                let crit_evs = critical
                    .iter()
                    .map(|r| DensityEvaluator::new(&r.system, d, budget))
                    .collect::<Result<Vec<_>>>()?;
                let self_critical = is_self_critical(l, budget)?;
                let mut rng = rng_for(seed, (idx * 2 + d) as u64);
                let (mut t_ok, mut p1_ok, mut p2_ok, mut cor_ok) = (true, true, true, true);
                for trial in 0..20 {
                    let f = if trial % 2 == 0 {
                        random_table(l.field(), d, &mut rng, budget)?
                    } else {
                        random_balanced_table(l.field(), d, &mut rng, budget)?
                    };
                    t_ok &= ev.delta(&f)? == ev.delta_by_subsets(&f)?;
                    let g = random_balanced_table(l.field(), d, &mut rng, budget)?;
                    let phis = ev.phi_all(&g)?;
                    // Φ(∅) = 1; the vanishing applies to nonempty B.
                    for (mask, phi) in phis.iter().enumerate().skip(1) {
                        let set: Vec<usize> = (0..l.k()).filter(|i| mask >> i & 1 == 1).collect();
                        if !density::is_rank_reducing(l, &set) {
                            p1_ok &= phi.is_zero();
                        }
                    }
                    for (r, cev) in critical.iter().zip(&crit_evs) {
                        let mask: usize = r.set.iter().map(|i| 1 << i).sum();
                        p2_ok &= phis[mask] == cev.lambda(&g)?;
                    }
                    if self_critical {
                        let expected =
                            density::benchmark(l.k()) + ev.lambda(&g)? * rational::from_ints(2, 1);
                        cor_ok &= ev.delta(&g)? == expected;
                    }
                }
                local.exact(format!("{name}/d={d}/delta-by-subsets"), t_ok, "20 tables");
                local.exact(
                    format!("{name}/d={d}/phi-vanishes-off-rank-reducing"),
                    p1_ok,
                    "20 balanced tables",
                );
                if !critical.is_empty() {
                    local.exact(
                        format!("{name}/d={d}/phi-equals-critical-density"),
                        p2_ok,
                        format!("{} critical sets", critical.len()),
                    );
                }
                if self_critical {
                    local.exact(
                        format!("{name}/d={d}/critical-delta"),
                        cor_ok,
                        "Δ = 2^(1-k) + 2Λ",
                    );
                }
            }
            Ok(local.0)
        })
        .collect();
    for r in results {
        c.0.extend(r?);
    }
    Ok(c)
}

/// (2×4)-systems with s = 3 over the field.
pub fn two_by_four_s3(field: &FieldSpec, budget: Budget) -> Result<Vec<LinearSystem>> {
    let mut out = Vec::new();
    for l in all_systems(field, 2, 4, budget)? {
        if l.s(budget)? == 3 {
            out.push(l);
        }
    }
    Ok(out)
}

fn psi_closed_form(budget: Budget) -> Result<Checks> {
    let mut c = Checks::default();
    let alpha = rational::from_ints(1, 4);
    for q in [5u32, 7] {
        let field = FieldSpec::prime(q)?;
        let systems = two_by_four_s3(&field, budget)?;
        // Every system over F_5; an evenly spaced sample over F_7.
        let step = if q == 5 {
            1
        } else {
            systems.len().div_ceil(12)
        };
        let chosen: Vec<&LinearSystem> = systems.iter().step_by(step).collect();
        for d in 1..=3usize {
            let psi = psi_table(&PsiSpec::new(&field, d, alpha.clone())?, budget)?;
            c.exact(
                format!("q={q}/d={d}/balanced"),
                psi.is_balanced(),
                format!("sum = {}", rational::format(&psi.sum())),
            );
            let closed = psi_lambda_closed_form(q as u64, d as u64, &alpha)?;
            let brute: Vec<Result<BigRational>> = chosen
                .par_iter()
                .map(|l| density::lambda(l, &psi, budget))
                .collect();
            let mut mismatches = 0;
            for b in brute {
                if b? != closed {
                    mismatches += 1;
                }
            }
            c.exact(
                format!("q={q}/d={d}/closed-form"),
                mismatches == 0,
                format!(
                    "closed form {} against {} systems, {mismatches} mismatches",
                    rational::format(&closed),
                    chosen.len()
                ),
            );
        }
    }
    let v = psi_lambda_closed_form(5, 1, &alpha)?;
    c.exact(
        "q=5/d=1/value",
        v == rational::from_ints(1, 32),
        rational::format(&v),
    );

    let (q, d) = (41u64, 1444u64);
    let lambda = psi_lambda_closed_form(q, d, &alpha)?;
    let nu = psi_nu(q, d, &alpha)?;
    c.exact(
        "q=41/d=1444/below-minus-nu",
        lambda < -nu.clone(),
        format!(
            "Λ has {} numerator bits and is negative: {}",
            lambda.numer().bits(),
            lambda.is_negative()
        ),
    );
    for q in [5u32, 41] {
        let report = psi_negativity_certificate(&FieldSpec::prime(q)?)?;
        c.exact(
            format!("q={q}/negativity-certificate"),
            report.certified,
            format!(
                "{:?} route at working order {}",
                report.route, report.working_q
            ),
        );
    }
    Ok(c)
}

fn fourier_suite(seed: u64, budget: Budget) -> Result<Checks> {
    let mut c = Checks::default();
    let mut stream = 0u64;
    let mut next_rng = || {
        stream += 1;
        rng_for(seed, stream)
    };

    for (q, n) in [
        (3u32, 1usize),
        (3, 4),
        (3, 6),
        (4, 3),
        (5, 2),
        (5, 4),
        (7, 3),
        (9, 2),
    ] {
        let field = FieldSpec::of_order(q as u64)?;
        let f = random_table(&field, n, &mut next_rng(), budget)?;
        let t = fourier::transform(&f, budget)?;
        let direct: f64 = f
            .values()
            .iter()
            .map(|v| rational::to_f64(v).powi(2))
            .sum::<f64>()
            / f.len() as f64;
        let err = (direct - t.energy()).abs();
        c.bound(
            format!("parseval/q={q}/n={n}"),
            PARSEVAL_TOLERANCE - err,
            0.0,
            format!("error {err:e}"),
        );
        let back = t.inverse();
        let worst = f
            .values()
            .iter()
            .zip(&back)
            .map(|(v, b)| (b - Complex64::new(rational::to_f64(v), 0.0)).norm())
            .fold(0.0, f64::max);
        c.bound(
            format!("inverse/q={q}/n={n}"),
            1e-10 - worst,
            0.0,
            format!("error {worst:e}"),
        );
    }

    let mut rng = next_rng();
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let q = [3u32, 4, 5, 7][rng.gen_range(0..4)];
        let field = FieldSpec::of_order(q as u64)?;
        let n = rng.gen_range(1..=2);
        let k = rng.gen_range(2..=4);
        let coeffs = (0..k)
            .map(|_| field.elem(rng.gen_range(1..q)))
            .collect::<Result<Vec<Elem>>>()?;
        let l = LinearSystem::new(&field, vec![coeffs.clone()])?;
        let f = random_table(&field, n, &mut rng, budget)?;
        let exact = rational::to_f64(&density::lambda(&l, &f, budget)?);
        let via = fourier::single_equation_lambda(&f, &coeffs, budget)?;
        worst = worst.max((via - Complex64::new(exact, 0.0)).norm());
    }
    c.bound(
        "single-equation-identity",
        DEFAULT_TOLERANCE - worst,
        0.0,
        format!("50 instances, worst error {worst:e}"),
    );

    for (q, ns) in [(3u32, vec![2usize, 3, 4]), (5, vec![2, 3])] {
        let field = FieldSpec::prime(q)?;
        for n in ns {
            let mut min_slack = f64::INFINITY;
            for _ in 0..10 {
                let mut rng = next_rng();
                let f = random_table(&field, 1, &mut rng, budget)?;
                let alpha = (0..4)
                    .map(|_| field.elem(rng.gen_range(1..q)))
                    .collect::<Result<Vec<Elem>>>()?;
                let g = gowers_twist(&GowersSpec::new(alpha, f, n)?, budget)?;
                min_slack = min_slack.min(verify_fourier_bound(&g, 1, budget)?.slack);
            }
            c.bound(
                format!("twist-coefficients/q={q}/d=1/n={n}"),
                min_slack,
                DEFAULT_TOLERANCE,
                "max |Ĝ(r)| ≤ q^(d-n/2), 10 random (f, α)",
            );
        }
    }

    for (q, n, d) in [(3u32, 3usize, 1usize), (5, 2, 1), (3, 3, 2)] {
        let field = FieldSpec::prime(q)?;
        let bound = (q as f64).powf(-(n as f64) / 2.0);
        let mut min_slack = f64::INFINITY;
        let mut zero_ok = true;
        let forms = all_forms(&field);
        for x1 in 0..(q as usize).pow(d as u32) {
            let slice = AffineSlice::new(index_vector(&field, x1, d), n)?;
            for form in &forms {
                for z in 0..(q as usize).pow(n as u32) {
                    let z = index_vector(&field, z, n);
                    let v = affine_quadratic_sum(&field, &slice, form, &z, budget)?.norm();
                    if form.is_zero() {
                        zero_ok &= (v - (q as f64).powi(-(d as i32))).abs() < DEFAULT_TOLERANCE;
                    } else if !form.alpha.is_zero() {
                        min_slack = min_slack.min(bound - v);
                    }
                }
            }
        }
        c.bound(
            format!("single-sum/q={q}/n={n}/d={d}"),
            min_slack,
            DEFAULT_TOLERANCE,
            "all α ≠ 0, β, γ, offsets and z",
        );
        c.exact(
            format!("single-sum-zero-form/q={q}/n={n}/d={d}"),
            zero_ok,
            "equals q^(-d)",
        );
    }

    for (q, n, d) in [(3u32, 2usize, 1usize), (5, 2, 1)] {
        let field = FieldSpec::prime(q)?;
        let bound = (q as f64).powf(-(n as f64) / 2.0);
        let mut min_slack = f64::INFINITY;
        let offsets = (q as usize).pow(d as u32);
        for form in all_forms(&field).iter().filter(|f| !f.is_zero()) {
            for x1 in 0..offsets {
                for x2 in 0..offsets {
                    let w1 = AffineSlice::new(index_vector(&field, x1, d), n)?;
                    let w2 = AffineSlice::new(index_vector(&field, x2, d), n)?;
                    let v = affine_quadratic_double_sum(&field, &w1, &w2, form, budget)?.norm();
                    min_slack = min_slack.min(bound - v);
                }
            }
        }
        c.bound(
            format!("double-sum/q={q}/n={n}/d={d}"),
            min_slack,
            DEFAULT_TOLERANCE,
            "all nonzero forms and offsets",
        );
    }
    Ok(c)
}

fn all_forms(field: &FieldSpec) -> Vec<QuadraticForm> {
    let els: Vec<Elem> = field.elements().collect();
    let mut out = Vec::new();
    for &a in &els {
        for &b in &els {
            for &g in &els {
                out.push(QuadraticForm::new(a, b, g));
            }
        }
    }
    out
}

fn gowers_suite(seed: u64, budget: Budget) -> Result<Checks> {
    let mut c = Checks::default();
    let l = ap4_f5();
    let field = l.field().clone();
    let alpha = derive_alpha(&l, budget)?;
    let param = parametrize(&l)?;
    let form = form_of(&field, &param, &alpha);
    c.exact(
        "ap4-f5/alpha",
        alpha.iter().all(|a| !a.is_zero()) && form.is_zero(),
        format!(
            "α = {:?}",
            alpha.iter().map(|a| a.code()).collect::<Vec<_>>()
        ),
    );
    // Q*(x, y) = Σ β_i |ℓ_i(x, y)|² evaluated pointwise on F_5^2 × F_5^2.
    let forms = param.linear_forms();
    let mut vanishes = true;
    for xi in 0..25 {
        for yi in 0..25 {
            let x = index_vector(&field, xi, 2);
            let y = index_vector(&field, yi, 2);
            let mut total = Elem::ZERO;
            for (j, &(u, v)) in forms.iter().enumerate() {
                let z: Vec<Elem> = (0..2)
                    .map(|i| field.add(field.mul(u, x[i]), field.mul(v, y[i])))
                    .collect();
                total = field.add(total, field.mul(alpha[j], field.dot(&z, &z)?));
            }
            vanishes &= total.is_zero();
        }
    }
    c.exact("ap4-f5/form-vanishes-n2", vanishes, "625 pairs");
    let terms = quadratic_terms(&l, &alpha)?;
    c.exact(
        "ap4-f5/k-l",
        terms.k_l >= 2 && terms.total_terms == 4096,
        format!("K = {} of {}", terms.k_l, terms.total_terms),
    );
    let neg: Vec<Elem> = alpha.iter().map(|&a| field.neg(a)).collect();
    c.exact(
        "ap4-f5/sign-flip",
        quadratic_terms(&l, &neg)?.k_l == terms.k_l,
        "K unchanged when every α_j is negated",
    );

    for q in [3u32, 5, 7] {
        let field = FieldSpec::prime(q)?;
        let mut ok = 0;
        let systems = two_by_four_s3(&field, budget)?;
        for s in &systems {
            let a = derive_alpha(s, budget)?;
            let p = parametrize(s)?;
            if a.iter().all(|x| !x.is_zero())
                && form_of(&field, &p, &a).is_zero()
                && quadratic_terms(s, &a)?.k_l >= 2
            {
                ok += 1;
            }
        }
        c.exact(
            format!("all-s3-systems/q={q}"),
            ok == systems.len(),
            format!("{ok} of {} systems", systems.len()),
        );
    }

    for q in [3u64, 5, 7, 9] {
        let field = FieldSpec::of_order(q)?;
        let mut agree = true;
        for form in all_forms(&field) {
            agree &= trace_vanishes_identically(&field, &form, 1, budget)? == form.is_zero();
        }
        c.exact(
            format!("trace-vanishing/q={q}/n=1"),
            agree,
            "Tr∘Q ≡ 0 exactly when Q ≡ 0",
        );
    }

    let mut min_slack = f64::INFINITY;
    for i in 0..5 {
        let f = random_table(&field, 1, &mut rng_for(seed, 1000 + i), budget)?;
        let report = lemma_gowers_check(&l, &f, &alpha, 4, budget)?;
        min_slack = min_slack.min(report.slack);
    }
    c.bound(
        "ap4-f5/twisted-density/d=1/n=4",
        min_slack,
        DEFAULT_TOLERANCE,
        "|Λ(G) − K Λ(f)/4096| ≤ 16 q^(2d−n/2), 5 random f",
    );
    Ok(c)
}

fn classifier() -> Result<Checks> {
    let mut c = Checks::default();
    let cases: &[(u64, &[i64], EquationClass)] = &[
        (5, &[1, 1, 1], EquationClass::Common),
        (5, &[1, -1, 1, -1], EquationClass::Common),
        (5, &[1, 1, 1, 1], EquationClass::Uncommon),
        (5, &[1, 1, -1, -1], EquationClass::Common),
        (3, &[1, 1, 1], EquationClass::Common),
        (7, &[1, 2], EquationClass::Uncommon),
        (7, &[3, -3], EquationClass::Common),
        (4, &[1, 1, 1, 1], EquationClass::Common),
    ];
    for (q, coeffs, expected) in cases {
        let field = FieldSpec::of_order(*q)?;
        let a: Vec<Elem> = coeffs.iter().map(|&x| field.from_int(x)).collect();
        let got = classify_single_equation(&field, &a)?;
        c.exact(
            format!("q={q}/{coeffs:?}"),
            got == *expected,
            format!("{got}"),
        );
    }
    Ok(c)
}
