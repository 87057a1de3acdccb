//! Certificate reports and their independent re-verification.
//!
//! A report carries a witness table f on F_q^d and a scale α; the certified
//! claim is Δ_L(αf) < 2^{1−k}, checked in exact arithmetic.

use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::budget::Budget;
use crate::density::{self, DensityEvaluator, FunctionTable, Verdict};
use crate::error::{Error, Result};
use crate::gf::FieldSpec;
use crate::linsys::LinearSystem;
use crate::rational;

use super::theorem::critical_sum;

/// A system as it appears in reports: field config line, shape and
/// canonical rows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemRecord {
    pub field: String,
    pub m: usize,
    pub k: usize,
    pub rows: Vec<Vec<u32>>,
}

impl SystemRecord {
    pub fn of(l: &LinearSystem) -> Self {
        SystemRecord {
            field: l.field().config_line(),
            m: l.m(),
            k: l.k(),
            rows: l.row_codes(),
        }
    }

    /// Rebuilds the system, insisting that the stored rows are canonical.
    pub fn to_system(&self) -> Result<LinearSystem> {
        let field =
            FieldSpec::parse_config(&self.field).map_err(|e| Error::Invalid(e.to_string()))?;
        let refs: Vec<&[u32]> = self.rows.iter().map(|r| r.as_slice()).collect();
        let l = LinearSystem::from_codes(&field, &refs)?;
        if l.m() != self.m || l.k() != self.k {
            return Err(Error::Invalid(format!(
                "declared shape ({}×{}) does not match the rows ({}×{})",
                self.m,
                self.k,
                l.m(),
                l.k()
            )));
        }
        if l.row_codes() != self.rows {
            return Err(Error::Invalid("rows are not in canonical form".into()));
        }
        Ok(l)
    }
}

/// How a verdict was reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    /// L induces x_i = 0; witness 1_{0} − 1/2.
    S1,
    /// Critical equations of length 2, witness from search.
    S2,
    /// Twisted ψ for s(L) = 3.
    Gowers,
    /// Random balanced search over critical subsystems.
    Search,
    /// Single-equation classifier.
    Classifier,
    /// m = k: only the zero solution.
    FullRank,
    /// Nothing remains after identifying duplicated variables.
    Unconstrained,
}

impl std::fmt::Display for Route {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let v = serde_json::to_value(self).expect("serializable");
        f.write_str(v.as_str().expect("unit variant"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub system: SystemRecord,
    pub q: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
    pub d: usize,
    /// Witness table in lexicographic order of F_q^d.
    pub f: Vec<String>,
    /// The certified function is g = alpha_scale · f.
    pub alpha_scale: String,
    /// Σ_B Λ_{L_B}(f) over the critical sets, for theorem-based routes.
    #[serde(default)]
    pub sum_critical: Option<String>,
    /// Δ_L(g).
    pub delta: String,
    /// 2^{1−k}.
    pub benchmark: String,
    pub verdict: Verdict,
    pub route: Route,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub diagnostics: Map<String, Value>,
}

impl CertificateReport {
    pub fn witness(&self) -> Result<FunctionTable> {
        FunctionTable::from_file(&density::FunctionTableFile {
            q: self.q,
            modulus: self.modulus.clone(),
            d: self.d,
            values: self.f.clone(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("certificate report: {e}")))
    }

    /// Assembles a report for g = alpha·f, computing Δ_L(g) exactly.
    #[allow(clippy::too_many_arguments)]
    pub fn assemble(
        l: &LinearSystem,
        f: &FunctionTable,
        alpha: &BigRational,
        sum_critical: Option<&BigRational>,
        route: Route,
        seed: Option<u64>,
        diagnostics: Map<String, Value>,
        budget: Budget,
    ) -> Result<Self> {
        let g = f.scale(alpha);
        let delta = DensityEvaluator::new(l, f.d(), budget)?.delta(&g)?;
        let benchmark = density::benchmark(l.k());
        let verdict = if delta < benchmark {
            Verdict::CertifiedUncommon
        } else {
            Verdict::Inconclusive
        };
        let file = f.to_file();
        Ok(CertificateReport {
            system: SystemRecord::of(l),
            q: file.q,
            modulus: file.modulus,
            d: file.d,
            f: file.values,
            alpha_scale: rational::format(alpha),
            sum_critical: sum_critical.map(rational::format),
            delta: rational::format(&delta),
            benchmark: rational::format(&benchmark),
            verdict,
            route,
            seed,
            diagnostics,
        })
    }
}

/// A verdict reached without a witness table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub system: SystemRecord,
    pub verdict: Verdict,
    pub route: Route,
    pub reason: String,
    #[serde(default)]
    pub diagnostics: Map<String, Value>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyCheck {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyOutcome {
    pub pass: bool,
    pub checks: Vec<VerifyCheck>,
    pub recomputed_delta: Option<String>,
}

struct Checks(Vec<VerifyCheck>);

impl Checks {
    fn push(&mut self, name: &'static str, pass: bool, detail: impl Into<String>) -> bool {
        self.0.push(VerifyCheck {
            name,
            pass,
            detail: detail.into(),
        });
        pass
    }

    fn done(self, delta: Option<String>) -> VerifyOutcome {
        VerifyOutcome {
            pass: self.0.iter().all(|c| c.pass),
            checks: self.0,
            recomputed_delta: delta,
        }
    }
}

/// Recomputes every claim of a report from scratch. Budget exhaustion is an
/// error; everything else becomes a failed check.
pub fn verify_report(report: &CertificateReport, budget: Budget) -> Result<VerifyOutcome> {
    let mut c = Checks(Vec::new());
    let l = match report.system.to_system() {
        Ok(l) => {
            c.push("system", true, "canonical rows, shape matches");
            l
        }
        Err(e) => {
            c.push("system", false, e.to_string());
            return Ok(c.done(None));
        }
    };
    let expected_modulus = (l.field().kappa() > 1).then(|| l.field().modulus().to_vec());
    let field_ok = l.field().q() == report.q && report.modulus == expected_modulus;
    if !c.push(
        "field",
        field_ok,
        format!("system field {}", l.field().config_line()),
    ) {
        return Ok(c.done(None));
    }
    match l.redundancy_witness() {
        Some((i, j)) => {
            c.push(
                "irredundant",
                false,
                format!("system induces x{} = x{}", i + 1, j + 1),
            );
            return Ok(c.done(None));
        }
        None => c.push("irredundant", true, "no induced x_i = x_j"),
    };
    let f = match report.witness() {
        Ok(f) => {
            c.push(
                "witness",
                true,
                format!("{} values on F_{}^{}", f.len(), report.q, report.d),
            );
            f
        }
        Err(e) => {
            c.push("witness", false, e.to_string());
            return Ok(c.done(None));
        }
    };
    let alpha = match rational::parse(&report.alpha_scale) {
        Ok(a) => a,
        Err(e) => {
            c.push("alpha-scale", false, e.to_string());
            return Ok(c.done(None));
        }
    };
    let g = f.scale(&alpha);
    c.push(
        "range",
        f.in_witness_range()
            && g.in_witness_range()
            && alpha.is_positive()
            && alpha <= BigRational::one(),
        format!(
            "max |f| = {}, alpha = {}",
            rational::format(f.max_abs()),
            rational::format(&alpha)
        ),
    );
    if report.route != Route::S1 {
        c.push(
            "balanced",
            f.is_balanced(),
            format!("sum f = {}", rational::format(&f.sum())),
        );
    }
    // Single equations are certified through Δ alone; every other route
    // except s1 goes through the critical-set sum.
    if !matches!(report.route, Route::S1 | Route::Classifier) && f.is_balanced() {
        let s = critical_sum(&l, &f, budget)?;
        let claimed = report.sum_critical.as_deref().map(rational::parse);
        let matches = matches!(&claimed, Some(Ok(v)) if *v == s);
        c.push(
            "sum-critical",
            matches,
            format!("recomputed {}", rational::format(&s)),
        );
        let expected_alpha = -&s / rational::pow2(l.k() as i64 + 2);
        c.push(
            "alpha-consistency",
            s.is_negative() && expected_alpha == alpha,
            format!("expected alpha {}", rational::format(&expected_alpha)),
        );
    }
    let delta = DensityEvaluator::new(&l, f.d(), budget)?.delta(&g)?;
    let delta_s = rational::format(&delta);
    let claimed_delta = rational::parse(&report.delta).ok();
    c.push(
        "delta",
        claimed_delta.as_ref() == Some(&delta),
        format!("recomputed {delta_s}, reported {}", report.delta),
    );
    let benchmark = density::benchmark(l.k());
    c.push(
        "benchmark",
        rational::parse(&report.benchmark).ok().as_ref() == Some(&benchmark),
        format!("2^(1-k) = {}", rational::format(&benchmark)),
    );
    c.push(
        "strict-inequality",
        delta < benchmark,
        format!("{delta_s} < {}", rational::format(&benchmark)),
    );
    c.push(
        "verdict",
        report.verdict == Verdict::CertifiedUncommon,
        format!("reported {}", report.verdict),
    );
    Ok(c.done(Some(delta_s)))
}
