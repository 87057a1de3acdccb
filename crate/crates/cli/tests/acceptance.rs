//! Acceptance suite. Prints one pass/fail line per criterion, each with its
//! runtime limit, and exits nonzero if any criterion fails.
//!
//! Every criterion compares library or CLI output against an oracle
//! written here: brute-force enumeration, direct summation or an
//! independent closed form.

mod common;

use std::f64::consts::TAU;
use std::panic::AssertUnwindSafe;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use lincommon::catalog;
use lincommon::certify::gowers::{
    derive_alpha, gowers_twist, lemma_gowers_check, parametrize, quadratic_terms, GowersSpec,
};
use lincommon::certify::psi::{psi_lambda_closed_form, psi_nu, psi_table, PsiSpec};
use lincommon::certify::{classify_single_equation, EquationClass};
use lincommon::density::{DensityEvaluator, FunctionTable};
use lincommon::fourier::{
    self, affine_quadratic_double_sum, affine_quadratic_sum, verify_fourier_bound, AffineSlice,
    QuadraticForm,
};
use lincommon::gf::{Elem, FieldSpec};
use lincommon::linsys::{all_systems, LinearSystem};
use lincommon::{rational, Budget};

use common::*;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn lib<T>(r: lincommon::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

const BUDGET: Budget = Budget(10_000_000);

/// Absolute tolerance for Parseval's identity.
const PARSEVAL_TOL: f64 = 1e-12;
/// Absolute tolerance for Fourier-side identities and bounds.
const FOURIER_TOL: f64 = 1e-9;
/// Agreement between two floating-point evaluations of the same sum.
const AGREE_TOL: f64 = 1e-12;

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn main() {
    let criteria = [
        Criterion {
            id: 1,
            name: "structure of the 4-AP over F_5",
            limit: Duration::from_secs(1),
            run: structure,
        },
        Criterion {
            id: 2,
            name: "solution and extension counts",
            limit: Duration::from_secs(120),
            run: counting,
        },
        Criterion {
            id: 3,
            name: "density identities",
            limit: Duration::from_secs(120),
            run: identities,
        },
        Criterion {
            id: 4,
            name: "psi balance, closed form, negativity",
            limit: Duration::from_secs(30),
            run: psi_suite,
        },
        Criterion {
            id: 5,
            name: "Fourier identities and bounds",
            limit: Duration::from_secs(300),
            run: fourier_suite,
        },
        Criterion {
            id: 6,
            name: "twist coefficients and K_L",
            limit: Duration::from_secs(600),
            run: gowers_suite,
        },
        Criterion {
            id: 7,
            name: "end-to-end certification",
            limit: Duration::from_secs(300),
            run: certification,
        },
        Criterion {
            id: 8,
            name: "single-equation classifier",
            limit: Duration::from_secs(60),
            run: classifier,
        },
        Criterion {
            id: 9,
            name: "determinism",
            limit: Duration::from_secs(300),
            run: determinism,
        },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let result = std::panic::catch_unwind(AssertUnwindSafe(c.run))
            .unwrap_or_else(|p| Err(format!("panicked: {}", panic_message(&p))));
        let elapsed = start.elapsed();
        let result = match result {
            Ok(detail) if elapsed > c.limit => Err(format!("{detail}; exceeded time limit")),
            r => r,
        };
        let timing = format!(
            "{:.2} s, limit {} s",
            elapsed.as_secs_f64(),
            c.limit.as_secs()
        );
        match result {
            Ok(detail) => println!("criterion {} PASS {}: {detail} [{timing}]", c.id, c.name),
            Err(detail) => {
                failed += 1;
                println!("criterion {} FAIL {}: {detail} [{timing}]", c.id, c.name);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

fn panic_message(p: &Box<dyn std::any::Any + Send>) -> String {
    p.downcast_ref::<String>()
        .cloned()
        .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_else(|| "unknown".into())
}

fn json(text: &str) -> Result<Value, String> {
    serde_json::from_str(text).map_err(|e| format!("bad JSON ({e}): {text}"))
}

fn small_catalog() -> Result<Vec<(String, LinearSystem)>, String> {
    let mut out = Vec::new();
    for e in catalog::entries() {
        let l = lib(e.system())?;
        if matches!(l.field().q(), 3 | 5) {
            out.push((e.name.to_string(), l));
        }
    }
    Ok(out)
}

fn prime_field(q: u32) -> Result<FieldSpec, String> {
    lib(FieldSpec::prime(q))
}

/// Random balanced integers in [−g, g].
fn balanced_ints(rng: &mut ChaCha8Rng, len: usize, g: i64) -> Vec<i64> {
    let mut a: Vec<i64> = (0..len).map(|_| rng.gen_range(-g..=g)).collect();
    loop {
        let s: i64 = a.iter().sum();
        if s == 0 {
            return a;
        }
        let i = rng.gen_range(0..len);
        if s > 0 && a[i] > -g {
            a[i] -= 1;
        } else if s < 0 && a[i] < g {
            a[i] += 1;
        }
    }
}

/// Random rationals n/(2m) in [−1/2, 1/2] with m ≤ 8.
fn random_values(rng: &mut ChaCha8Rng, len: usize) -> Vec<BigRational> {
    (0..len)
        .map(|_| {
            let m = rng.gen_range(1..=8i128);
            ratio(rng.gen_range(-m..=m), 2 * m)
        })
        .collect()
}

fn to_f64(v: &BigRational) -> f64 {
    rational::to_f64(v)
}

// ---------------------------------------------------------------- 1

fn structure() -> Outcome {
    let scratch = Scratch::new();
    let path = scratch.catalog("ap4-f5");
    let out = run(&["analyze", "--json", &path]);
    ensure!(
        code(&out) == 0,
        "analyze exited {}: {}",
        code(&out),
        stderr(&out)
    );
    let v = json(&stdout(&out))?;
    ensure!(
        v["rank"] == 2 && v["irredundant"] == true && v["s"] == 3 && v["c"] == 4,
        "analyze reported rank {}, irredundant {}, s {}, c {}",
        v["rank"],
        v["irredundant"],
        v["s"],
        v["c"]
    );
    let sets = v["critical_sets"].as_array().ok_or("no critical sets")?;
    ensure!(
        sets.len() == 1
            && sets[0]["variables"] == serde_json::json!([1, 2, 3, 4])
            && sets[0]["m_b"] == 2,
        "critical sets {sets:?}"
    );

    let l = lib(catalog::system("ap4-f5"))?;
    let rows = rows_of(&l);
    ensure!(rank(5, rows.clone()) == 2, "independent rank differs");
    let space = row_space(5, &rows);
    let distinct: std::collections::BTreeSet<_> = space.iter().cloned().collect();
    ensure!(
        space.len() == 24 && distinct.len() == 24,
        "row space has {} vectors",
        distinct.len()
    );
    let s = space.iter().map(|v| weight(v)).min().unwrap_or(0);
    ensure!(s == 3, "minimum weight {s}");
    let redundant = space.iter().any(|v| {
        let supp: Vec<usize> = (0..4).filter(|&i| v[i] != 0).collect();
        supp.len() == 2 && md(v[supp[0]] + v[supp[1]], 5) == 0
    });
    ensure!(!redundant, "scan found an induced x_i = x_j");
    let (_, c, crit) = critical_sets(5, &rows);
    ensure!(
        c == 4 && crit == vec![(vec![0, 1, 2, 3], 2)],
        "scan found critical sets {crit:?}"
    );
    Ok(
        "rank 2, irredundant, s = 3, c = 4, C(L) = {[4]}, m_B = 2; 24 row-space vectors scanned"
            .into(),
    )
}

// ---------------------------------------------------------------- 2

fn counting() -> Outcome {
    let systems = small_catalog()?;
    ensure!(
        systems.len() >= 10,
        "only {} catalog systems over q in {{3, 5}}",
        systems.len()
    );
    let mut extensions = 0;
    for (name, l) in &systems {
        let q = l.field().q() as i64;
        let (k, m) = (l.k(), l.m());
        let rows = rows_of(l);
        for n in 1..=2 {
            let brute = brute_force_count(q, &rows, k, n);
            let formula = (q as u64).pow((n * (k - m)) as u32);
            let reported: u64 = l
                .solution_count(n)
                .try_into()
                .map_err(|_| "count overflow")?;
            let enumerated = lib(l.solutions(n, BUDGET))?.count();
            ensure!(
                brute == formula && reported == formula && enumerated == formula,
                "{name}, n = {n}: brute force {brute}, q^(n(k-m)) {formula}, solution_count {reported}, enumerated {enumerated}"
            );
        }
        if m < 2 {
            continue;
        }
        let base = base_solutions(q, &rows, k);
        for rec in lib(l.critical_sets(BUDGET))? {
            let expected: u64 = l
                .extension_count(&rec, 1)
                .try_into()
                .map_err(|_| "count overflow")?;
            let sub = base_solutions(q, &rows_of(&rec.system), rec.set.len());
            for y in &sub {
                let ext = base
                    .iter()
                    .filter(|x| rec.set.iter().zip(y).all(|(&i, &v)| x[i] == v))
                    .count() as u64;
                ensure!(
                    ext == expected,
                    "{name}, B = {:?}: {ext} extensions, formula {expected}",
                    rec.set
                );
                extensions += 1;
            }
            let projected_ok = base.iter().all(|x| {
                let proj: Vec<i64> = rec.set.iter().map(|&i| x[i]).collect();
                sub.contains(&proj)
            });
            ensure!(
                projected_ok,
                "{name}: a solution does not restrict to a solution of L_B"
            );
        }
    }
    Ok(format!(
        "{} systems at n = 1, 2 match full enumeration exactly; {extensions} extension counts match",
        systems.len()
    ))
}

// ---------------------------------------------------------------- 3

fn identities() -> Outcome {
    const G: i64 = 4;
    const TABLES: usize = 20;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut self_critical = 0;
    let mut cases = 0;
    let mut systems = small_catalog()?;
    let s3 = s3_systems(5)?;
    let step = (s3.len() / 8).max(1);
    for (i, l) in s3.into_iter().step_by(step).enumerate() {
        systems.push((format!("s3-f5-{i}"), l));
    }
    for (name, l) in systems {
        let field = l.field().clone();
        let q = field.q() as i64;
        let (k, m) = (l.k(), l.m());
        let rows = rows_of(&l);
        let full = (1usize << k) - 1;
        if m < 2 {
            continue;
        }

        let crit = lib(l.critical_sets(BUDGET))?;
        let (_, _, mut scanned) = critical_sets(q, &rows);
        scanned.sort();
        let mut reported: Vec<(Vec<usize>, usize)> =
            crit.iter().map(|r| (r.set.clone(), r.m_b)).collect();
        reported.sort();
        ensure!(
            reported == scanned,
            "{name}: critical sets {reported:?}, scan {scanned:?}"
        );
        for r in &crit {
            // L_B spans exactly the row-space vectors supported in B.
            let in_b: std::collections::BTreeSet<Vec<i64>> = row_space(q, &rows)
                .into_iter()
                .filter(|v| (0..k).all(|i| v[i] == 0 || r.set.contains(&i)))
                .map(|v| r.set.iter().map(|&i| v[i]).collect())
                .collect();
            let spanned: std::collections::BTreeSet<Vec<i64>> =
                row_space(q, &rows_of(&r.system)).into_iter().collect();
            ensure!(
                in_b == spanned,
                "{name}: L_B on {:?} is not the maximal induced system",
                r.set
            );
        }
        let is_self_critical = scanned == vec![((0..k).collect(), m)];
        if is_self_critical {
            self_critical += 1;
        }
        let rank_reducing: Vec<bool> = (0..=full)
            .map(|mask| {
                let rest: Vec<Vec<i64>> = rows
                    .iter()
                    .map(|r| {
                        (0..k)
                            .filter(|i| mask & (1 << i) == 0)
                            .map(|i| r[i])
                            .collect()
                    })
                    .collect();
                rest[0].is_empty() || rank(q, rest) < m
            })
            .collect();

        for d in 1..=2 {
            let base = base_solutions(q, &rows, k);
            let count = base.len().pow(d as u32) as i128;
            let sub_bases: Vec<Vec<Vec<i64>>> = crit
                .iter()
                .map(|r| base_solutions(q, &rows_of(&r.system), r.set.len()))
                .collect();
            let ev = lib(DensityEvaluator::new(&l, d, BUDGET))?;
            let len = (q as usize).pow(d as u32);
            for _ in 0..TABLES {
                let a = balanced_ints(&mut rng, len, G);
                let f = lib(FunctionTable::new(
                    &field,
                    d,
                    a.iter().map(|&x| ratio(x as i128, 2 * G as i128)).collect(),
                ))?;

                let mut phi = vec![0i128; full + 1];
                let mut prod = vec![0i128; full + 1];
                let (mut plus, mut minus) = (0i128, 0i128);
                for_each_solution(q, &base, d, |t| {
                    prod[0] = 1;
                    for mask in 1..=full {
                        let low = mask.trailing_zeros() as usize;
                        prod[mask] = prod[mask & (mask - 1)] * a[t[low]] as i128;
                        phi[mask] += prod[mask];
                    }
                    plus += t.iter().map(|&i| (G + a[i]) as i128).product::<i128>();
                    minus += t.iter().map(|&i| (G - a[i]) as i128).product::<i128>();
                });
                phi[0] = count;
                let two_g = 2 * G as i128;

                // Δ = 2 Σ_{|B| even} 2^{|B|−k} Φ(B), scaled by |sol| (2G)^k.
                let expansion: i128 = 2
                    * (0..=full)
                        .filter(|mask| mask.count_ones() % 2 == 0)
                        .map(|mask| (G as i128).pow(k as u32 - mask.count_ones()) * phi[mask])
                        .sum::<i128>();
                ensure!(
                    plus + minus == expansion,
                    "{name}, d = {d}: Δ expansion fails"
                );
                let delta = ratio(plus + minus, count * two_g.pow(k as u32));
                ensure!(
                    lib(ev.delta(&f))? == delta,
                    "{name}, d = {d}: library Δ differs from enumeration"
                );
                let phis = lib(ev.phi_all(&f))?;
                for mask in 0..=full {
                    let expected = ratio(phi[mask], count * two_g.pow(mask.count_ones()));
                    ensure!(
                        phis[mask] == expected,
                        "{name}, d = {d}: library Φ differs for mask {mask:b}"
                    );
                    if mask != 0 && !rank_reducing[mask] {
                        ensure!(
                            phi[mask] == 0,
                            "{name}, d = {d}: Φ ≠ 0 on non-rank-reducing mask {mask:b}"
                        );
                    }
                }
                for (r, sub) in crit.iter().zip(&sub_bases) {
                    let mask: usize = r.set.iter().map(|i| 1 << i).sum();
                    let mut lam = 0i128;
                    for_each_solution(q, sub, d, |t| {
                        lam += t.iter().map(|&i| a[i] as i128).product::<i128>()
                    });
                    let sub_count = sub.len().pow(d as u32) as i128;
                    ensure!(
                        phi[mask] * sub_count == lam * count,
                        "{name}, d = {d}: Φ(B) ≠ Λ_(L_B) on {:?}",
                        r.set
                    );
                }
                if is_self_critical {
                    let lhs = plus + minus;
                    let rhs = 2 * count * (G as i128).pow(k as u32) + 2 * phi[full];
                    ensure!(
                        lhs == rhs,
                        "{name}, d = {d}: Δ ≠ 2^(1-k) + 2Λ for a self-critical system"
                    );
                }
                cases += 1;
            }
        }
    }
    ensure!(
        self_critical >= 4,
        "only {self_critical} self-critical systems exercised"
    );
    Ok(format!(
        "Φ expansion of Δ, Φ = 0 off rank-reducing sets, Φ(B) = Λ_(L_B) on critical sets and Δ = 2^(1-k) + 2Λ ({self_critical} self-critical systems): exact on {cases} balanced tables"
    ))
}

// ---------------------------------------------------------------- 4

fn gaussian_binomial_4_2(q: u64) -> u64 {
    (q.pow(4) - 1) * (q.pow(3) - 1) / ((q * q - 1) * (q - 1))
}

fn s3_systems(q: u32) -> Result<Vec<LinearSystem>, String> {
    let field = prime_field(q)?;
    let all = lib(all_systems(&field, 2, 4, BUDGET))?;
    ensure!(
        all.len() as u64 == gaussian_binomial_4_2(q as u64),
        "{} (2x4)-systems over F_{q}, expected {}",
        all.len(),
        gaussian_binomial_4_2(q as u64)
    );
    let mut out = Vec::new();
    for l in all {
        let s = row_space(q as i64, &rows_of(&l))
            .iter()
            .map(|v| weight(v))
            .min()
            .unwrap_or(0);
        ensure!(
            lib(l.s(BUDGET))? == s,
            "s(L) disagrees with the row-space scan"
        );
        if s == 3 {
            out.push(l);
        }
    }
    Ok(out)
}

fn psi_suite() -> Outcome {
    let quarter = ratio(1, 4);
    for q in [5u32, 7] {
        let field = prime_field(q)?;
        for d in 1..=3usize {
            let spec = lib(PsiSpec::new(&field, d, quarter.clone()))?;
            let table = lib(psi_table(&spec, BUDGET))?;
            ensure!(table.sum().is_zero(), "ψ not balanced at q = {q}, d = {d}");
            let beta = -&quarter * ratio((q - 1) as i128, d as i128);
            for (v, zeros) in table.values().iter().zip(zero_counts(q as i64, d)) {
                let expected = match zeros {
                    0 => quarter.clone(),
                    1 => beta.clone(),
                    _ => BigRational::zero(),
                };
                ensure!(*v == expected, "ψ value mismatch at q = {q}, d = {d}");
            }
        }
    }

    let mut compared = 0;
    for q in [5u32, 7] {
        let systems = s3_systems(q)?;
        if q == 5 {
            ensure!(!systems.is_empty(), "no s = 3 systems over F_5");
        }
        let bases: Vec<Vec<Vec<i64>>> = systems
            .iter()
            .map(|l| base_solutions(q as i64, &rows_of(l), 4))
            .collect();
        for d in 1..=3usize {
            let closed = lib(psi_lambda_closed_form(q as u64, d as u64, &quarter))?;
            // Numerators over D = 4d: α = d/D, β = −(q−1)/D.
            let vals: Vec<i128> = zero_counts(q as i64, d)
                .into_iter()
                .map(|z| match z {
                    0 => d as i128,
                    1 => -(q as i128 - 1),
                    _ => 0,
                })
                .collect();
            let den = (4 * d as i128).pow(4);
            for base in &bases {
                let mut num = 0i128;
                for_each_solution(q as i64, base, d, |t| {
                    num += t.iter().map(|&i| vals[i]).product::<i128>()
                });
                let count = base.len().pow(d as u32) as i128;
                ensure!(
                    ratio(num, count * den) == closed,
                    "closed form differs from enumeration at q = {q}, d = {d}"
                );
                compared += 1;
            }
            if q == 5 && d == 1 {
                ensure!(
                    closed == ratio(1, 32),
                    "Λ(ψ) at q = 5, d = 1 is {closed}, expected 1/32"
                );
            }
        }
    }

    let (q, d) = (41i64, 1444i64);
    let lambda = lib(psi_lambda_closed_form(q as u64, d as u64, &quarter))?;
    let nu = lib(psi_nu(q as u64, d as u64, &quarter))?;
    ensure!(lambda < -nu.clone(), "Λ(ψ) ≥ −ν at q = 41, d = 1444");
    // Λ = (m_4/q²)^d α^4 b with b computed from the factored expansion.
    let r = |n: i64, m: i64| ratio(n as i128, m as i128);
    let ratio_q = r(q - 1, q - 3);
    let mut b = r((q - 1).pow(3), (q - 3) * d.pow(3));
    let binom = [1, 4, 6, 4, 1];
    for (l, &c) in binom.iter().enumerate() {
        let falling: i64 = (0..l as i64).map(|i| d - i).product();
        let sign = if l % 2 == 0 { 1 } else { -1 };
        let term = r(sign * c * falling, 1) / num_traits::pow(r(d, 1), l)
            * num_traits::pow(ratio_q.clone(), l);
        b += term;
    }
    let m4_ratio = r((q - 1) * (q - 3), q * q);
    let factored = num_traits::pow(m4_ratio, d as usize) * num_traits::pow(quarter.clone(), 4) * &b;
    ensure!(
        factored == lambda,
        "closed form disagrees with the factored expansion at q = 41"
    );
    ensure!(
        b < -num_traits::pow(r(1, q - 3), 4),
        "bracket not below −1/(q−3)^4"
    );
    Ok(format!(
        "ψ balanced and matches its definition for q in {{5, 7}}, d in 1..3; closed form = enumeration on {compared} (system, d) pairs over F_5 and F_7 (1/32 at q = 5, d = 1); Λ < −ν at q = 41, d = 1444 ({} bit denominator)",
        lambda.denom().bits()
    ))
}

// ---------------------------------------------------------------- 5

/// f̂(r) = q^{−n} Σ_x f(x) e^{−2πi (r·x)/q} for prime q, by direct summation.
fn dft(q: i64, n: usize, values: &[f64]) -> Vec<(f64, f64)> {
    let vecs = all_vectors(q, n);
    let scale = (q as f64).powi(n as i32);
    vecs.iter()
        .map(|r| {
            let (mut re, mut im) = (0.0, 0.0);
            for (x, &v) in vecs.iter().zip(values) {
                let e = md(r.iter().zip(x).map(|(a, b)| a * b).sum(), q);
                let theta = -TAU * e as f64 / q as f64;
                re += v * theta.cos();
                im += v * theta.sin();
            }
            (re / scale, im / scale)
        })
        .collect()
}

fn norm((re, im): (f64, f64)) -> f64 {
    re.hypot(im)
}

/// G(x) = f(x_1) (1/t) Σ_j cos(2π α_j (x·x) / q) for prime q and d = 1.
fn twist(q: i64, n: usize, f: &[f64], alpha: &[i64]) -> Vec<f64> {
    all_vectors(q, n)
        .iter()
        .map(|x| {
            let xx = md(x.iter().map(|v| v * v).sum(), q);
            let s: f64 = alpha
                .iter()
                .map(|a| (TAU * md(a * xx, q) as f64 / q as f64).cos())
                .sum();
            f[x[0] as usize] * s / alpha.len() as f64
        })
        .collect()
}

fn elems(field: &FieldSpec, codes: &[i64]) -> Result<Vec<Elem>, String> {
    codes.iter().map(|&c| lib(field.elem(c as u32))).collect()
}

fn fourier_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);

    let mut parseval_worst = 0.0f64;
    for (q, n) in [
        (3u64, 1usize),
        (3, 4),
        (3, 8),
        (5, 2),
        (5, 5),
        (7, 4),
        (9, 2),
        (9, 4),
    ] {
        let field = lib(FieldSpec::of_order(q))?;
        let len = q.pow(n as u32) as usize;
        let f = lib(FunctionTable::new(&field, n, random_values(&mut rng, len)))?;
        let t = lib(fourier::transform(&f, Budget(100_000_000)))?;
        let mean_sq = f.values().iter().map(|v| to_f64(v).powi(2)).sum::<f64>() / len as f64;
        let err = (t.energy() - mean_sq).abs();
        parseval_worst = parseval_worst.max(err);
        ensure!(
            err <= PARSEVAL_TOL,
            "Parseval off by {err:e} at q = {q}, n = {n}"
        );
        if q % 2 == 1 && q != 9 && len <= 400 {
            let ours = dft(
                q as i64,
                n,
                &f.values().iter().map(to_f64).collect::<Vec<_>>(),
            );
            for (a, b) in ours.iter().zip(t.coefficients()) {
                ensure!(
                    (a.0 - b.re).hypot(a.1 - b.im) <= 1e-10,
                    "transform differs from direct DFT at q = {q}, n = {n}"
                );
            }
        }
    }

    let mut single_worst = 0.0f64;
    for _ in 0..50 {
        let q = [3i64, 5, 7][rng.gen_range(0..3)];
        let n = rng.gen_range(1..=2usize);
        let k = rng.gen_range(2..=4usize);
        let coeffs: Vec<i64> = (0..k).map(|_| rng.gen_range(1..q)).collect();
        let field = prime_field(q as u32)?;
        let len = (q as usize).pow(n as u32);
        let f = lib(FunctionTable::new(&field, n, random_values(&mut rng, len)))?;
        let via_fourier = lib(fourier::single_equation_lambda(
            &f,
            &elems(&field, &coeffs)?,
            BUDGET,
        ))?;
        let base = base_solutions(q, std::slice::from_ref(&coeffs), k);
        let vals: Vec<f64> = f.values().iter().map(to_f64).collect();
        let mut direct = 0.0;
        for_each_solution(q, &base, n, |t| {
            direct += t.iter().map(|&i| vals[i]).product::<f64>()
        });
        direct /= base.len().pow(n as u32) as f64;
        let err = (via_fourier.re - direct).abs().max(via_fourier.im.abs());
        single_worst = single_worst.max(err);
        ensure!(
            err <= FOURIER_TOL,
            "single-equation identity off by {err:e} for {coeffs:?} over F_{q}^{n}"
        );
    }

    let mut bound_slack = f64::INFINITY;
    for (q, ns) in [(3i64, vec![2usize, 3, 4]), (5, vec![2, 3])] {
        let field = prime_field(q as u32)?;
        for n in ns {
            for _ in 0..10 {
                let values = random_values(&mut rng, q as usize);
                let alpha: Vec<i64> = (0..4).map(|_| rng.gen_range(1..q)).collect();
                let f = lib(FunctionTable::new(&field, 1, values))?;
                let fv: Vec<f64> = f.values().iter().map(to_f64).collect();
                let ours = twist(q, n, &fv, &alpha);
                let spec = lib(GowersSpec::new(elems(&field, &alpha)?, f, n))?;
                let g = lib(gowers_twist(&spec, BUDGET))?;
                let diff = ours
                    .iter()
                    .zip(g.values())
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                ensure!(
                    diff <= AGREE_TOL,
                    "twist differs from direct evaluation by {diff:e}"
                );
                let max = dft(q, n, &ours).into_iter().map(norm).fold(0.0, f64::max);
                let bound = (q as f64).powf(1.0 - n as f64 / 2.0);
                ensure!(
                    max <= bound + FOURIER_TOL,
                    "max |ĝ| = {max} exceeds q^(d-n/2) = {bound} at q = {q}, n = {n}"
                );
                let report = lib(verify_fourier_bound(&g, 1, BUDGET))?;
                ensure!(
                    report.pass && (report.max_coeff - max).abs() <= FOURIER_TOL,
                    "library bound report disagrees"
                );
                bound_slack = bound_slack.min(bound - max);
            }
        }
    }

    // Single sums over W = (u, 0) + 0 × F_q^{n−1} with α ≠ 0.
    let mut sums = 0;
    for (q, n) in [(3i64, 3usize), (5, 2)] {
        let field = prime_field(q as u32)?;
        let vecs = all_vectors(q, n);
        let bound = (q as f64).powf(-(n as f64) / 2.0);
        for u in 0..q {
            let slice = lib(AffineSlice::new(elems(&field, &[u])?, n))?;
            for z in &vecs {
                let zz = md(z.iter().map(|v| v * v).sum(), q);
                for a in 1..q {
                    for b in 0..q {
                        for c in 0..q {
                            let (mut re, mut im) = (0.0, 0.0);
                            for x in vecs.iter().filter(|x| x[0] == u) {
                                let xx: i64 = x.iter().map(|v| v * v).sum();
                                let xz: i64 = x.iter().zip(z).map(|(p, r)| p * r).sum();
                                let e = md(a * xx + b * xz + c * zz, q);
                                re += (TAU * e as f64 / q as f64).cos();
                                im += (TAU * e as f64 / q as f64).sin();
                            }
                            let scale = (q as f64).powi(n as i32);
                            let ours = (re / scale, im / scale);
                            ensure!(
                                norm(ours) <= bound + FOURIER_TOL,
                                "single sum exceeds q^(-n/2) at q = {q}"
                            );
                            let form = QuadraticForm::new(
                                Elem::from_code(a as u32),
                                Elem::from_code(b as u32),
                                Elem::from_code(c as u32),
                            );
                            let theirs = lib(affine_quadratic_sum(
                                &field,
                                &slice,
                                &form,
                                &elems(&field, z)?,
                                BUDGET,
                            ))?;
                            ensure!(
                                (ours.0 - theirs.re).hypot(ours.1 - theirs.im) <= AGREE_TOL,
                                "library single sum disagrees"
                            );
                            sums += 1;
                        }
                    }
                }
            }
        }
    }
    // Double sums over W1 × W2 with Q ≢ 0.
    let (q, n) = (3i64, 2usize);
    let field = prime_field(3)?;
    let vecs = all_vectors(q, n);
    let bound = (q as f64).powf(-(n as f64) / 2.0);
    for u1 in 0..q {
        for u2 in 0..q {
            let w1 = lib(AffineSlice::new(elems(&field, &[u1])?, n))?;
            let w2 = lib(AffineSlice::new(elems(&field, &[u2])?, n))?;
            for code in 1..q.pow(3) {
                let (a, b, c) = (code % q, code / q % q, code / (q * q));
                let (mut re, mut im) = (0.0, 0.0);
                for x in vecs.iter().filter(|x| x[0] == u1) {
                    for y in vecs.iter().filter(|y| y[0] == u2) {
                        let dot =
                            |p: &[i64], r: &[i64]| p.iter().zip(r).map(|(s, t)| s * t).sum::<i64>();
                        let e = md(a * dot(x, x) + b * dot(x, y) + c * dot(y, y), q);
                        re += (TAU * e as f64 / q as f64).cos();
                        im += (TAU * e as f64 / q as f64).sin();
                    }
                }
                let scale = (q as f64).powi(2 * n as i32);
                let ours = (re / scale, im / scale);
                ensure!(
                    norm(ours) <= bound + FOURIER_TOL,
                    "double sum exceeds q^(-n/2)"
                );
                let form = QuadraticForm::new(
                    Elem::from_code(a as u32),
                    Elem::from_code(b as u32),
                    Elem::from_code(c as u32),
                );
                let theirs = lib(affine_quadratic_double_sum(&field, &w1, &w2, &form, BUDGET))?;
                ensure!(
                    (ours.0 - theirs.re).hypot(ours.1 - theirs.im) <= AGREE_TOL,
                    "library double sum disagrees"
                );
                sums += 1;
            }
        }
    }
    Ok(format!(
        "Parseval worst {parseval_worst:.1e} (tol {PARSEVAL_TOL:e}); single-equation identity worst {single_worst:.1e} on 50 instances (tol {FOURIER_TOL:e}); twisted coefficient bound min slack {bound_slack:.3e} on 50 (f, α); {sums} quadratic character sums within q^(-n/2)"
    ))
}

// ---------------------------------------------------------------- 6

/// Whether Σ_i β_i |x_{perm[i]}|² vanishes on every base solution.
fn form_vanishes(q: i64, base: &[Vec<i64>], perm: &[usize; 4], beta: &[i64; 4]) -> bool {
    base.iter()
        .all(|x| md((0..4).map(|i| beta[i] * x[perm[i]] * x[perm[i]]).sum(), q) == 0)
}

fn gowers_suite() -> Outcome {
    let l = lib(catalog::system("ap4-f5"))?;
    let field = l.field().clone();
    let alpha = lib(derive_alpha(&l, BUDGET))?;
    let codes: Vec<i64> = alpha.iter().map(|e| e.code() as i64).collect();
    ensure!(
        codes.iter().all(|&c| c != 0),
        "α has a zero entry: {codes:?}"
    );
    ensure!(
        codes == vec![4, 3, 2, 1],
        "α = {codes:?}, expected (4, 3, 2, 1)"
    );
    let perm = lib(parametrize(&l))?.perm;
    let rows = rows_of(&l);
    let base = base_solutions(5, &rows, 4);
    // Exhaustive at n = 2: Σ α_j |x_{perm[j]}|² = 0 on every solution.
    let mut checked = 0;
    let mut vanishes = true;
    let vecs = all_vectors(5, 2);
    for_each_solution(5, &base, 2, |t| {
        let s: i64 = (0..4)
            .map(|j| {
                let x = &vecs[t[perm[j]]];
                codes[j] * x.iter().map(|v| v * v).sum::<i64>()
            })
            .sum();
        vanishes &= md(s, 5) == 0;
        checked += 1;
    });
    ensure!(
        vanishes && checked == 625,
        "Q* does not vanish on all {checked} solutions over F_5^2"
    );

    // The same holds for every s = 3 system over F_5 and F_7.
    let mut systems = 0;
    for q in [5u32, 7] {
        for s in s3_systems(q)? {
            let a: Vec<i64> = lib(derive_alpha(&s, BUDGET))?
                .iter()
                .map(|e| e.code() as i64)
                .collect();
            let p = lib(parametrize(&s))?.perm;
            let b = base_solutions(q as i64, &rows_of(&s), 4);
            ensure!(
                a.iter().all(|&c| c != 0),
                "zero α for {:?} over F_{q}",
                s.row_codes()
            );
            ensure!(
                form_vanishes(q as i64, &b, &p, &[a[0], a[1], a[2], a[3]]),
                "Q* ≢ 0 for {:?} over F_{q}",
                s.row_codes()
            );
            systems += 1;
        }
    }

    let terms = quadratic_terms(&l, &alpha).map_err(|e| e.to_string())?;
    let choices: Vec<i64> = codes.iter().flat_map(|&a| [a, md(-a, 5)]).collect();
    let mut k_l = 0u64;
    for code in 0..4096usize {
        let beta = [
            choices[code % 8],
            choices[code / 8 % 8],
            choices[code / 64 % 8],
            choices[code / 512],
        ];
        if form_vanishes(5, &base, &perm, &beta) {
            k_l += 1;
        }
    }
    ensure!(
        terms.total_terms == 4096,
        "{} terms, expected 4096",
        terms.total_terms
    );
    ensure!(terms.k_l == k_l, "K_L = {}, direct count {k_l}", terms.k_l);
    ensure!(k_l >= 2, "K_L = {k_l} < 2");

    // |Λ(G) − 2^{−12} K_L Λ(f)| ≤ 16 q^{2d − n/2} at q = 5, d = 1, n = 4.
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let n = 4;
    let bound = 16.0 * 5f64.powf(2.0 - n as f64 / 2.0);
    let mut slack = f64::INFINITY;
    for _ in 0..5 {
        let values = random_values(&mut rng, 5);
        let f = lib(FunctionTable::new(&field, 1, values.clone()))?;
        let fv: Vec<f64> = values.iter().map(to_f64).collect();
        let g = twist(5, n, &fv, &codes);
        let mut lambda_g = 0.0;
        for_each_solution(5, &base, n, |t| {
            lambda_g += t.iter().map(|&i| g[i]).product::<f64>()
        });
        lambda_g /= base.len().pow(n as u32) as f64;
        let mut lambda_f = BigRational::zero();
        for x in &base {
            lambda_f += x
                .iter()
                .fold(BigRational::one(), |acc, &v| acc * &values[v as usize]);
        }
        lambda_f /= BigRational::from_integer(BigInt::from(base.len()));
        let diff = (lambda_g - k_l as f64 * to_f64(&lambda_f) / 4096.0).abs();
        ensure!(
            diff <= bound + FOURIER_TOL,
            "|Λ(G) − 2^-12 K Λ(f)| = {diff} exceeds {bound}"
        );
        let report = lib(lemma_gowers_check(&l, &f, &alpha, n, BUDGET))?;
        ensure!(
            report.pass
                && (report.lambda_twisted - lambda_g).abs() <= AGREE_TOL
                && rational::parse(&report.lambda_base).ok() == Some(lambda_f),
            "library check disagrees: {report:?}"
        );
        slack = slack.min(bound - diff);
    }
    Ok(format!(
        "α = (4, 3, 2, 1), Q* = 0 on all 625 solutions over F_5^2 and on {systems} s = 3 systems over F_5, F_7; K_L = {k_l} of 4096; twisted density within 16 q^(2d-n/2) on 5 tables (min slack {slack:.3})"
    ))
}

// ---------------------------------------------------------------- 7

fn certify(path: &str, extra: &[&str]) -> Result<(i32, String), String> {
    let mut args = vec!["certify", path];
    args.extend_from_slice(extra);
    let out = run(&args);
    let c = code(&out);
    ensure!(
        c == 0 || c == 4,
        "certify {path} {extra:?} exited {c}: {}",
        stderr(&out)
    );
    Ok((c, stdout(&out)))
}

fn rows_json(v: &Value) -> Vec<Vec<i64>> {
    v["system"]["rows"]
        .as_array()
        .map(|rows| {
            rows.iter()
                .map(|r| {
                    r.as_array()
                        .map(|c| c.iter().filter_map(Value::as_i64).collect())
                        .unwrap_or_default()
                })
                .collect()
        })
        .unwrap_or_default()
}

/// Recomputes Δ(αf) from the report by enumeration.
fn independent_delta(v: &Value) -> Result<(BigRational, usize), String> {
    let q = v["q"].as_i64().ok_or("no q")?;
    let d = v["d"].as_u64().ok_or("no d")? as usize;
    let rows = rows_json(v);
    let k = rows.first().map_or(0, Vec::len);
    let alpha = rat(v["alpha_scale"].as_str().ok_or("no alpha")?);
    let g: Vec<BigRational> = v["f"]
        .as_array()
        .ok_or("no f")?
        .iter()
        .map(|s| rat(s.as_str().unwrap_or("x")) * &alpha)
        .collect();
    let half = ratio(1, 2);
    ensure!(g.iter().all(|x| x.abs() <= half), "g leaves [-1/2, 1/2]");
    let base = base_solutions(q, &rows, k);
    let sols = solution_indices(q, &base, d);
    Ok((exact_delta(&sols, &g), k))
}

fn mutations(v: &Value) -> Vec<(&'static str, Value)> {
    let mut out = Vec::new();
    let mut m = v.clone();
    let delta = rat(v["delta"].as_str().unwrap_or("0"));
    m["delta"] = Value::String(rational::format(&(delta + ratio(1, 1_000_000))));
    out.push(("delta", m));

    let mut m = v.clone();
    let f0 = rat(v["f"][0].as_str().unwrap_or("0"));
    let shifted = if f0.is_positive() {
        f0 - ratio(1, 4)
    } else {
        f0 + ratio(1, 4)
    };
    m["f"][0] = Value::String(rational::format(&shifted));
    out.push(("f", m));

    let mut m = v.clone();
    let alpha = rat(v["alpha_scale"].as_str().unwrap_or("0"));
    let changed = if alpha > ratio(1, 2) {
        alpha / ratio(2, 1)
    } else {
        alpha * ratio(2, 1)
    };
    m["alpha_scale"] = Value::String(rational::format(&changed));
    out.push(("alpha_scale", m));

    let mut m = v.clone();
    m["verdict"] = Value::String("inconclusive".into());
    out.push(("verdict", m));

    let mut m = v.clone();
    m["benchmark"] = Value::String("1/2".into());
    out.push(("benchmark", m));

    let mut m = v.clone();
    let q = v["q"].as_i64().unwrap_or(2);
    let rows = rows_json(v);
    let last = rows[0].len() - 1;
    m["system"]["rows"][0][last] = Value::from(md(rows[0][last] + 1, q));
    out.push(("system", m));

    let mut m = v.clone();
    if let Some(f) = m["f"].as_array_mut() {
        f.pop();
    }
    out.push(("truncated f", m));

    if v["sum_critical"].is_string() {
        let mut m = v.clone();
        let s = rat(v["sum_critical"].as_str().unwrap_or("0"));
        m["sum_critical"] = Value::String(rational::format(&(s * ratio(2, 1))));
        out.push(("sum_critical", m));
    }
    out
}

/// Independent Δ, a passing `verify`, and a failing `verify` on every
/// mutation. Returns the number of mutations rejected.
fn check_certificate(scratch: &Scratch, label: &str, text: &str) -> Result<usize, String> {
    let v = json(text)?;
    ensure!(
        v["verdict"] == "certified-uncommon",
        "{label}: verdict {}",
        v["verdict"]
    );
    let (delta, k) = independent_delta(&v)?;
    ensure!(
        delta == rat(v["delta"].as_str().unwrap_or("")) && delta < benchmark(k),
        "{label}: enumerated Δ = {delta}, reported {}",
        v["delta"]
    );
    let path = scratch.file(&format!("{label}.json"), text);
    let out = run(&["verify", &path]);
    ensure!(
        code(&out) == 0,
        "{label}: verify exited {}: {}",
        code(&out),
        stdout(&out)
    );
    let mut rejected = 0;
    for (what, m) in mutations(&v) {
        let path = scratch.file(
            &format!("{label}-{}.json", what.replace(' ', "-")),
            &m.to_string(),
        );
        let out = run(&["verify", &path]);
        ensure!(
            matches!(code(&out), 1 | 2),
            "{label}: verify accepted a certificate with edited {what} (exit {})",
            code(&out)
        );
        rejected += 1;
    }
    Ok(rejected)
}

fn certification() -> Outcome {
    let scratch = Scratch::new();
    let mut rejected = 0;

    let zero = scratch.catalog("zero-3x5-f5");
    let (c, text) = certify(&zero, &[])?;
    let v = json(&text)?;
    ensure!(
        c == 0 && v["route"] == "s1",
        "s = 1 system: exit {c}, route {}",
        v["route"]
    );
    let l = lib(catalog::system("zero-3x5-f5"))?;
    ensure!(
        critical_sets(5, &rows_of(&l)).0 == 1,
        "zero-3x5-f5 does not have s = 1"
    );
    rejected += check_certificate(&scratch, "s1", &text)?;
    let s1_delta = v["delta"].as_str().unwrap_or("").to_string();

    let twos = scratch.catalog("twos-2x4-f5");
    let (c, text) = certify(&twos, &[])?;
    let v = json(&text)?;
    ensure!(
        c == 0 && v["route"] == "s2",
        "s = 2 system: exit {c}, route {}",
        v["route"]
    );
    let l = lib(catalog::system("twos-2x4-f5"))?;
    ensure!(
        critical_sets(5, &rows_of(&l)).0 == 2,
        "twos-2x4-f5 does not have s = 2"
    );
    rejected += check_certificate(&scratch, "s2", &text)?;

    let ap4 = scratch.catalog("ap4-f5");
    let mut emitted = Vec::new();
    let mut attempts = Vec::new();
    for sampler in ["grid", "fourier"] {
        for d in ["1", "2"] {
            let (c, text) = certify(
                &ap4,
                &[
                    "--route",
                    "search",
                    "--d",
                    d,
                    "--budget",
                    "100000",
                    "--sampler",
                    sampler,
                ],
            )?;
            attempts.push(format!("{sampler} d={d}: exit {c}"));
            let v = json(&text)?;
            if c == 0 {
                rejected += check_certificate(&scratch, &format!("ap4-{sampler}-{d}"), &text)?;
                emitted.push(format!(
                    "{sampler} d={d} Δ ≈ {:.6}",
                    to_f64(&rat(v["delta"].as_str().unwrap_or("")))
                ));
            } else {
                ensure!(
                    v["verdict"] == "inconclusive",
                    "exit 4 with verdict {}",
                    v["verdict"]
                );
            }
        }
        if !emitted.is_empty() {
            break;
        }
    }
    ensure!(
        !emitted.is_empty(),
        "no 4-AP certificate emitted: {attempts:?}"
    );
    Ok(format!(
        "s1 certificate Δ = {s1_delta} < 1/16; s2 certificate verified; 4-AP search runs [{}], certified by {}; every certificate re-verified by enumeration and `verify`; {rejected} mutated certificates rejected",
        attempts.join(", "),
        emitted.join(", ")
    ))
}

// ---------------------------------------------------------------- 8

/// Common iff odd length or a perfect matching into zero-sum pairs exists,
/// by trying every matching.
fn common_by_matching(q: i64, coeffs: &[i64]) -> bool {
    fn matchable(q: i64, rest: &[i64]) -> bool {
        if rest.is_empty() {
            return true;
        }
        (1..rest.len()).any(|j| {
            md(rest[0] + rest[j], q) == 0 && {
                let others: Vec<i64> = rest[1..]
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| i + 1 != j)
                    .map(|(_, &v)| v)
                    .collect();
                matchable(q, &others)
            }
        })
    }
    coeffs.len() % 2 == 1 || matchable(q, coeffs)
}

fn classifier() -> Outcome {
    let start = Instant::now();
    let cases: [(i64, &[i64], &str); 6] = [
        (3, &[1, 1, 1], "common"),
        (5, &[1, 1, 1], "common"),
        (7, &[1, 1, 1], "common"),
        (5, &[1, -1, 1, -1], "common"),
        (5, &[1, 1, 1, 1], "uncommon"),
        (5, &[1, 1, -1, -1], "common"),
    ];
    for (q, coeffs, expected) in cases {
        let oracle = if common_by_matching(q, coeffs) {
            "common"
        } else {
            "uncommon"
        };
        let field = prime_field(q as u32)?;
        let e: Vec<Elem> = coeffs.iter().map(|&c| field.from_int(c)).collect();
        let library = match lib(classify_single_equation(&field, &e))? {
            EquationClass::Common => "common",
            EquationClass::Uncommon => "uncommon",
        };
        let q_arg = q.to_string();
        let mut args = vec![
            "classify-eq".to_string(),
            "--json".into(),
            "--q".into(),
            q_arg,
        ];
        args.extend(coeffs.iter().map(|c| c.to_string()));
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = run(&args);
        let v = json(&stdout(&out))?;
        ensure!(
            code(&out) == 0 && oracle == expected && library == expected && v["class"] == expected,
            "{coeffs:?} over F_{q}: expected {expected}, matching oracle {oracle}, library {library}, CLI {}",
            v["class"]
        );
    }
    let elapsed = start.elapsed();
    ensure!(
        elapsed < Duration::from_secs(1),
        "classification took {elapsed:.2?}"
    );

    let scratch = Scratch::new();
    let path = scratch.file("sum4.sys", "q=5\n1 4\n1 1 1 1\n");
    let (c, text) = certify(&path, &[])?;
    let v = json(&text)?;
    ensure!(
        c == 0,
        "x1 + x2 + x3 + x4 = 0 over F_5 not certified (exit {c})"
    );
    let (delta, k) = independent_delta(&v)?;
    ensure!(
        delta < benchmark(k) && delta == rat(v["delta"].as_str().unwrap_or("")),
        "witness Δ = {delta}"
    );
    Ok(format!(
        "6 equations agree with the matching oracle, library and CLI in {:.0} ms; (1,1,1,1) over F_5 has a witness with Δ = {delta} < 1/8",
        elapsed.as_secs_f64() * 1000.0
    ))
}

// ---------------------------------------------------------------- 9

fn determinism() -> Outcome {
    let scratch = Scratch::new();
    let ap4 = scratch.catalog("ap4-f5");
    let twos = scratch.catalog("twos-2x4-f5");
    let runs: Vec<Vec<&str>> = vec![
        vec![
            "certify",
            &ap4,
            "--route",
            "search",
            "--d",
            "2",
            "--seed",
            "11",
            "--samples",
            "300",
        ],
        vec![
            "certify",
            &ap4,
            "--route",
            "search",
            "--d",
            "2",
            "--seed",
            "3",
            "--sampler",
            "fourier",
            "--samples",
            "300",
        ],
        vec!["certify", &twos],
        vec!["analyze", "--json", &ap4],
        vec!["oracle", "classifier", "--json"],
    ];
    for args in &runs {
        let a = run(args);
        let b = run(args);
        let c = run_env(args, &[("RAYON_NUM_THREADS", "1")]);
        ensure!(!a.stdout.is_empty(), "{args:?} printed nothing");
        ensure!(
            a.stdout == b.stdout
                && a.stdout == c.stdout
                && code(&a) == code(&b)
                && code(&a) == code(&c),
            "{args:?} is not reproducible"
        );
    }
    Ok(format!(
        "{} commands byte-identical across two runs and a single-threaded run",
        runs.len()
    ))
}
