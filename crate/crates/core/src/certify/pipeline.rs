//! Route selection: reduces a system to an irredundant one and dispatches on
//! m, k and s(L) to the cheapest route that can produce a verdict.

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::budget::Budget;
use crate::density::{FunctionTable, Verdict};
use crate::error::{Error, Result};
use crate::linsys::{CriticalSetRecord, LinearSystem};
use crate::rational;

use super::classify::{classify_single_equation, EquationClass};
use super::gowers::{
    derive_alpha, gowers_twist, psi_star, quadratic_terms, GowersSpec, DEFAULT_SNAP_BITS,
};
use super::psi::{least_negative_dimension, psi_table, PsiSpec};
use super::report::{CertificateReport, ClassificationReport, Route, SystemRecord};
use super::search::{equation_search, random_balanced_search, SearchConfig};
use super::theorem::theorem_main_certify;

/// Largest ψ dimension tried when looking for a negative Λ_L(ψ).
const MAX_PSI_DIMENSION: u64 = 64;

/// Route requested on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum RouteChoice {
    #[default]
    Auto,
    S1,
    S2,
    Gowers,
    Search,
}

impl std::str::FromStr for RouteChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(RouteChoice::Auto),
            "s1" => Ok(RouteChoice::S1),
            "s2" => Ok(RouteChoice::S2),
            "gowers" => Ok(RouteChoice::Gowers),
            "search" => Ok(RouteChoice::Search),
            _ => Err(Error::usage(format!(
                "unknown route '{s}' (expected auto, s1, s2, gowers or search)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineConfig {
    pub route: RouteChoice,
    pub search: SearchConfig,
    /// Fixes the witness dimension for search routes; otherwise d = 1, 2.
    pub d: Option<usize>,
    /// Target dimension for the twisted construction.
    pub n: Option<usize>,
    pub budget: Budget,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            route: RouteChoice::Auto,
            search: SearchConfig::default(),
            d: None,
            n: None,
            budget: Budget::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum PipelineOutcome {
    Certificate(CertificateReport),
    Classification(ClassificationReport),
}

impl PipelineOutcome {
    pub fn verdict(&self) -> Verdict {
        match self {
            PipelineOutcome::Certificate(r) => r.verdict,
            PipelineOutcome::Classification(r) => r.verdict,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    fn with_reduction(mut self, steps: &[Value]) -> Self {
        if steps.is_empty() {
            return self;
        }
        let diag = match &mut self {
            PipelineOutcome::Certificate(r) => &mut r.diagnostics,
            PipelineOutcome::Classification(r) => &mut r.diagnostics,
        };
        diag.insert(
            "reduced_by_identification".into(),
            Value::Array(steps.to_vec()),
        );
        self
    }
}

fn classification(
    l: &LinearSystem,
    verdict: Verdict,
    route: Route,
    reason: impl Into<String>,
) -> PipelineOutcome {
    PipelineOutcome::Classification(ClassificationReport {
        system: SystemRecord::of(l),
        verdict,
        route,
        reason: reason.into(),
        diagnostics: Map::new(),
    })
}

/// Decides commonness of `l` as far as the configured budget allows.
pub fn uncommonness_pipeline(l: &LinearSystem, config: &PipelineConfig) -> Result<PipelineOutcome> {
    let mut current = l.clone();
    let mut steps = Vec::new();
    while let Some((i, j)) = current.redundancy_witness() {
        steps.push(json!({
            "system": SystemRecord::of(&current),
            "identified": [i, j],
        }));
        match current.identify_variables(i, j)? {
            Some(next) => current = next,
            None => {
                let out = classification(
                    &current,
                    Verdict::Common,
                    Route::Unconstrained,
                    "no equation remains after identifying duplicated variables",
                );
                return Ok(out.with_reduction(&steps));
            }
        }
    }
    Ok(dispatch(&current, config)?.with_reduction(&steps))
}

fn dispatch(l: &LinearSystem, config: &PipelineConfig) -> Result<PipelineOutcome> {
    let budget = config.budget;
    if l.m() == l.k() {
        return Ok(classification(
            l,
            Verdict::Common,
            Route::FullRank,
            "m = k: the only solution is zero, which is monochromatic",
        ));
    }
    let s = l.s(budget)?;
    match config.route {
        RouteChoice::S1 => {
            if s != 1 {
                return Err(Error::usage(format!("route s1 needs s(L) = 1, got {s}")));
            }
            return s1_certify(l, budget).map(PipelineOutcome::Certificate);
        }
        RouteChoice::S2 => {
            if s != 2 {
                return Err(Error::usage(format!("route s2 needs s(L) = 2, got {s}")));
            }
            return search_routes(l, Route::S2, config);
        }
        RouteChoice::Gowers => {
            if !l.field().is_odd() {
                return Err(Error::domain("the twisted construction needs odd q"));
            }
            if s != 3 {
                return Err(Error::usage(format!(
                    "route gowers needs s(L) = 3, got {s}"
                )));
            }
            return gowers_route(l, config).map(PipelineOutcome::Certificate);
        }
        RouteChoice::Search => return search_routes(l, Route::Search, config),
        RouteChoice::Auto => {}
    }
    if s == 1 {
        return s1_certify(l, budget).map(PipelineOutcome::Certificate);
    }
    if l.m() == 1 {
        return single_equation(l, config);
    }
    match s {
        2 => search_routes(l, Route::S2, config),
        3 => {
            if !l.field().is_odd() {
                return Err(Error::domain("the s(L) = 3 construction needs odd q"));
            }
            match gowers_route(l, config) {
                Ok(r) if r.verdict == Verdict::CertifiedUncommon => {
                    Ok(PipelineOutcome::Certificate(r))
                }
                Ok(_) | Err(Error::Budget { .. }) | Err(Error::Usage(_)) => {
                    let mut out = search_routes(l, Route::Search, config)?;
                    if let PipelineOutcome::Certificate(r) = &mut out {
                        r.diagnostics.insert(
                            "fallback".into(),
                            json!("twisted construction out of budget or inconclusive"),
                        );
                    }
                    Ok(out)
                }
                Err(e) => Err(e),
            }
        }
        _ => search_routes(l, Route::Search, config),
    }
}

/// Witness f = 1_{0} − 1/2 on F_q^n for systems inducing x_i = 0: the only
/// monochromatic solution is the zero one, so Δ_L(f) = q^{−n(k−m)}.
pub fn s1_certify(l: &LinearSystem, budget: Budget) -> Result<CertificateReport> {
    let threshold = BigUint::from(1u8) << (l.k() - 1);
    let mut n = 1;
    while l.solution_count(n) <= threshold {
        n += 1;
    }
    let half = rational::from_ints(1, 2);
    let f = FunctionTable::from_fn(l.field(), n, budget, |x| {
        if x.iter().all(|e| e.is_zero()) {
            half.clone()
        } else {
            -half.clone()
        }
    })?;
    let mut diag = Map::new();
    diag.insert("n".into(), json!(n));
    CertificateReport::assemble(
        l,
        &f,
        &BigRational::from_integer(1.into()),
        None,
        Route::S1,
        None,
        diag,
        budget,
    )
}

fn dimensions(config: &PipelineConfig) -> Vec<usize> {
    match config.d {
        Some(d) => vec![d],
        None => vec![1, 2],
    }
}

/// Runs the search at each candidate dimension until a certificate appears.
/// A budget failure after the first dimension keeps the last report.
fn search_routes(
    l: &LinearSystem,
    route: Route,
    config: &PipelineConfig,
) -> Result<PipelineOutcome> {
    let mut last = None;
    for d in dimensions(config) {
        match random_balanced_search(l, d, &config.search, route, config.budget) {
            Ok(r) if r.verdict == Verdict::CertifiedUncommon => {
                return Ok(PipelineOutcome::Certificate(r))
            }
            Ok(r) => last = Some(r),
            Err(Error::Budget { .. }) if last.is_some() => break,
            Err(e) => return Err(e),
        }
    }
    Ok(PipelineOutcome::Certificate(
        last.expect("at least one dimension"),
    ))
}

fn single_equation(l: &LinearSystem, config: &PipelineConfig) -> Result<PipelineOutcome> {
    let coeffs = &l.rows()[0];
    if coeffs.iter().any(|a| a.is_zero()) {
        return Ok(classification(
            l,
            Verdict::Inconclusive,
            Route::Classifier,
            "the equation has a zero coefficient; the classifier does not apply",
        ));
    }
    match classify_single_equation(l.field(), coeffs)? {
        EquationClass::Common => Ok(classification(
            l,
            Verdict::Common,
            Route::Classifier,
            if l.k() % 2 == 1 {
                "odd number of variables"
            } else {
                "coefficients pair up with zero sums"
            },
        )),
        EquationClass::Uncommon => {
            let mut last = None;
            for d in dimensions(config) {
                match equation_search(l, d, &config.search, config.budget) {
                    Ok(r) if r.verdict == Verdict::CertifiedUncommon => {
                        return Ok(PipelineOutcome::Certificate(r))
                    }
                    Ok(r) => last = Some(r),
                    Err(Error::Budget { .. }) if last.is_some() => break,
                    Err(e) => return Err(e),
                }
            }
            let mut out = classification(
                l,
                Verdict::Inconclusive,
                Route::Classifier,
                "uncommon by the pairing criterion, but no witness with Λ < 0 was found",
            );
            if let (PipelineOutcome::Classification(c), Some(r)) = (&mut out, last) {
                c.diagnostics = r.diagnostics;
            }
            Ok(out)
        }
    }
}

/// An induced (2×4)-subsystem with s = 3, if any.
fn two_by_four_core(l: &LinearSystem, budget: Budget) -> Result<Option<CriticalSetRecord>> {
    for record in l.critical_sets(budget)? {
        if record.set.len() == 4 && record.m_b == 2 && record.system.s(budget)? == 3 {
            return Ok(Some(record));
        }
    }
    Ok(None)
}

fn gowers_route(l: &LinearSystem, config: &PipelineConfig) -> Result<CertificateReport> {
    let q = l.field().q() as u64;
    let d = least_negative_dimension(q, MAX_PSI_DIMENSION)?
        .ok_or_else(|| Error::usage(format!("Λ(ψ) is not negative for d ≤ {MAX_PSI_DIMENSION}")))?
        as usize;
    let n = config.n.unwrap_or(d).max(d);
    gowers_certify(l, d, n, config.budget)
}

/// The twisted construction: ψ on F_q^d, twisted along α derived from an
/// induced (2×4)-subsystem, lifted to F_q^n, rebalanced and certified.
pub fn gowers_certify(
    l: &LinearSystem,
    d: usize,
    n: usize,
    budget: Budget,
) -> Result<CertificateReport> {
    let core = two_by_four_core(l, budget)?
        .ok_or_else(|| Error::usage("L induces no (2×4)-subsystem with s = 3"))?;
    budget.check("solutions of L", &l.solution_count(n))?;
    let alpha = derive_alpha(&core.system, budget)?;
    let terms = quadratic_terms(&core.system, &alpha)?;
    // Keep both ψ values in [−1/4, 1/4]: |β| = α(q−1)/d.
    let q1 = l.field().q() as i64 - 1;
    let scale = if (d as i64) < q1 {
        rational::from_ints(d as i64, 4 * q1)
    } else {
        rational::from_ints(1, 4)
    };
    let psi = psi_table(&PsiSpec::new(l.field(), d, scale.clone())?, budget)?;
    let twisted = gowers_twist(&GowersSpec::new(alpha.to_vec(), psi, n)?, budget)?;
    let f = psi_star(&twisted, DEFAULT_SNAP_BITS)?;
    let q = l.field().q() as f64;
    let mut diag = Map::new();
    diag.insert("psi_dimension".into(), json!(d));
    diag.insert("psi_alpha".into(), json!(rational::format(&scale)));
    diag.insert("n".into(), json!(n));
    diag.insert("core_variables".into(), json!(core.set));
    diag.insert(
        "alpha".into(),
        json!(alpha.iter().map(|a| a.code()).collect::<Vec<_>>()),
    );
    diag.insert("k_l".into(), json!(terms.k_l));
    diag.insert("total_terms".into(), json!(terms.total_terms));
    diag.insert(
        "twist_error_bound".into(),
        json!(16.0 * q.powf(2.0 * d as f64 - n as f64 / 2.0)),
    );
    theorem_main_certify(l, &f, Route::Gowers, None, diag, budget)
}
