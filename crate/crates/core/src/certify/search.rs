//! Randomized search for balanced witnesses f: F_q^d → [−1/2, 1/2].
//!
//! Sample i is drawn from a ChaCha8 stream keyed by (seed, i), so results do
//! not depend on how samples are scheduled across threads. The minimum is
//! taken over (exact objective, sample index).

use std::f64::consts::TAU;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::budget::Budget;
use crate::density::{table_len, DensityEvaluator, FunctionTable};
use crate::error::{Error, Result};
use crate::gf::FieldSpec;
use crate::linsys::{index_vector, LinearSystem};
use crate::rational;

use super::report::{CertificateReport, Route};
use super::theorem::{theorem_main_certify, CriticalEvaluator};

/// Integer resolution of the Fourier sampler before rebalancing.
const FOURIER_RESOLUTION: f64 = 4096.0;
/// Upper bound on the number of active frequencies per Fourier sample.
const FOURIER_MAX_TERMS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sampler {
    /// Uniform integers on [−G, G], mean-subtracted and rescaled.
    Grid,
    /// A few random characters with random amplitudes and phases, taken
    /// as real parts, rounded, mean-subtracted and rescaled.
    Fourier,
}

impl std::fmt::Display for Sampler {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Sampler::Grid => "grid",
            Sampler::Fourier => "fourier",
        })
    }
}

impl std::str::FromStr for Sampler {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "grid" => Ok(Sampler::Grid),
            "fourier" => Ok(Sampler::Fourier),
            _ => Err(Error::usage(format!(
                "unknown sampler '{s}' (expected grid or fourier)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Requested number of samples; capped by the budget.
    pub samples: u64,
    pub seed: u64,
    /// Half-width G of the integer grid.
    pub grid: u32,
    pub sampler: Sampler,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            samples: 2000,
            seed: 0,
            grid: 8,
            sampler: Sampler::Grid,
        }
    }
}

/// Best sample found by [`minimize`].
#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub best: FunctionTable,
    pub value: BigRational,
    pub index: u64,
    pub samples: u64,
    pub negative: u64,
}

impl SearchOutcome {
    fn diagnostics(&self, config: &SearchConfig, cost: u64) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("sampler".into(), json!(config.sampler.to_string()));
        m.insert("samples".into(), json!(self.samples));
        m.insert("negative_samples".into(), json!(self.negative));
        m.insert("best_sample".into(), json!(self.index));
        m.insert(
            "best_objective".into(),
            json!(rational::format(&self.value)),
        );
        m.insert("cost_per_sample".into(), json!(cost));
        m
    }
}

fn rebalance(field: &FieldSpec, d: usize, w: Vec<i64>) -> Result<FunctionTable> {
    let n = w.len() as i64;
    let total: i64 = w.iter().sum();
    let shifted: Vec<i64> = w.iter().map(|&x| n * x - total).collect();
    let max = shifted.iter().map(|x| x.abs()).max().unwrap_or(0);
    let values = if max == 0 {
        vec![BigRational::zero(); shifted.len()]
    } else {
        let den = BigInt::from(2 * max);
        shifted
            .into_iter()
            .map(|x| BigRational::new(BigInt::from(x), den.clone()))
            .collect()
    };
    FunctionTable::new(field, d, values)
}

/// The deterministic sample with the given index.
pub fn sample_function(
    field: &FieldSpec,
    d: usize,
    config: &SearchConfig,
    index: u64,
    budget: Budget,
) -> Result<FunctionTable> {
    let len = table_len(field, d, budget)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index);
    let w: Vec<i64> = match config.sampler {
        Sampler::Grid => {
            if config.grid == 0 {
                return Err(Error::usage("grid half-width must be positive"));
            }
            let g = config.grid as i64;
            (0..len).map(|_| rng.gen_range(-g..=g)).collect()
        }
        Sampler::Fourier => {
            let terms = 1 + rng.gen_range(0..FOURIER_MAX_TERMS.min(len - 1).max(1));
            let waves: Vec<(usize, f64, f64)> = (0..terms)
                .map(|_| {
                    (
                        rng.gen_range(1..len.max(2)),
                        rng.gen::<f64>(),
                        rng.gen::<f64>() * TAU,
                    )
                })
                .collect();
            let p = field.p() as f64;
            let mut v = vec![0.0f64; len];
            for (r, amp, phase) in waves {
                let r = index_vector(field, r % len, d);
                for (x, out) in v.iter_mut().enumerate() {
                    let t = field.trace_phase(field.dot(&r, &index_vector(field, x, d))?);
                    *out += amp * (TAU * t.value() as f64 / p + phase).cos();
                }
            }
            let max = v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
            if max == 0.0 {
                vec![0; len]
            } else {
                v.iter()
                    .map(|x| (x / max * FOURIER_RESOLUTION).round() as i64)
                    .collect()
            }
        }
    };
    rebalance(field, d, w)
}

/// Minimizes `objective` over `config.samples` samples, capped so that the
/// total enumeration cost stays within the budget.
pub fn minimize<F>(
    field: &FieldSpec,
    d: usize,
    config: &SearchConfig,
    cost: u64,
    budget: Budget,
    objective: F,
) -> Result<SearchOutcome>
where
    F: Fn(&FunctionTable) -> Result<BigRational> + Sync,
{
    let affordable = budget.0 / cost.max(1);
    if affordable == 0 {
        return Err(Error::Budget {
            what: "search samples".into(),
            required: cost.to_string(),
            budget: budget.0,
        });
    }
    let samples = config.samples.min(affordable).max(1);
    let values: Vec<(BigRational, u64)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let f = sample_function(field, d, config, i, budget)?;
            Ok((objective(&f)?, i))
        })
        .collect::<Result<_>>()?;
    let negative = values.iter().filter(|(v, _)| v.is_negative()).count() as u64;
    let (value, index) = values.into_iter().min().expect("at least one sample");
    Ok(SearchOutcome {
        best: sample_function(field, d, config, index, budget)?,
        value,
        index,
        samples,
        negative,
    })
}

/// Searches for f with Σ_B Λ_{L_B}(f) < 0 and certifies the best sample.
/// Systems without critical sets (m < 2 or m = k) yield an inconclusive
/// report for f ≡ 0.
pub fn random_balanced_search(
    l: &LinearSystem,
    d: usize,
    config: &SearchConfig,
    route: Route,
    budget: Budget,
) -> Result<CertificateReport> {
    if l.m() < 2 || l.m() >= l.k() {
        let f = FunctionTable::constant(l.field(), d, BigRational::zero(), budget)?;
        let mut diag = Map::new();
        diag.insert(
            "note".into(),
            json!("no critical sets are defined for this shape; nothing to search"),
        );
        return CertificateReport::assemble(
            l,
            &f,
            &BigRational::zero(),
            None,
            route,
            Some(config.seed),
            diag,
            budget,
        );
    }
    budget.check("solutions of L", &l.solution_count(d))?;
    let evaluator = CriticalEvaluator::new(l, d, budget)?;
    let outcome = minimize(l.field(), d, config, evaluator.cost(), budget, |f| {
        evaluator.sum(f)
    })?;
    let mut diag = outcome.diagnostics(config, evaluator.cost());
    diag.insert(
        "distinct_critical_systems".into(),
        json!(evaluator.distinct()),
    );
    theorem_main_certify(l, &outcome.best, route, Some(config.seed), diag, budget)
}

/// For a single equation with all coefficients nonzero, Δ_L(f) = 2^{1−k} +
/// 2Λ_L(f) when k is even and f is balanced, so any balanced f with
/// Λ_L(f) < 0 is a witness on its own.
pub fn equation_search(
    l: &LinearSystem,
    d: usize,
    config: &SearchConfig,
    budget: Budget,
) -> Result<CertificateReport> {
    if l.m() != 1 || l.rows()[0].iter().any(|a| a.is_zero()) {
        return Err(Error::usage(
            "equation search needs a single equation with all coefficients nonzero",
        ));
    }
    let evaluator = DensityEvaluator::new(l, d, budget)?;
    let cost = evaluator.solution_count();
    let outcome = minimize(l.field(), d, config, cost, budget, |f| evaluator.lambda(f))?;
    let diag = outcome.diagnostics(config, cost);
    let alpha = if outcome.value.is_negative() {
        BigRational::from_integer(1.into())
    } else {
        BigRational::zero()
    };
    CertificateReport::assemble(
        l,
        &outcome.best,
        &alpha,
        None,
        Route::Classifier,
        Some(config.seed),
        diag,
        budget,
    )
}
