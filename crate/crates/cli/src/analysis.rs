//! Structural report for `lincommon analyze`.

use serde::Serialize;

use lincommon::certify::report::SystemRecord;
use lincommon::certify::{classify_single_equation, EquationClass};
use lincommon::io::format_system;
use lincommon::linsys::LinearSystem;
use lincommon::Budget;
use lincommon::Result;

/// Verdict predicted from the structure of L alone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Prediction {
    Common,
    Uncommon,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub verdict: Prediction,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriticalSetEntry {
    /// 1-based variable indices.
    pub variables: Vec<usize>,
    pub m_b: usize,
    pub system: SystemRecord,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BudgetUsage {
    pub limit: u64,
    pub row_space_vectors: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub system: SystemRecord,
    pub canonical: String,
    pub rank: usize,
    pub irredundant: bool,
    /// 1-based (i, j) with x_i = x_j induced, when redundant.
    pub redundancy_witness: Option<(usize, usize)>,
    pub s: usize,
    pub c: usize,
    pub critical_sets: Vec<CriticalSetEntry>,
    pub classification: Classification,
    pub budget: BudgetUsage,
}

pub fn analyze(l: &LinearSystem, budget: Budget) -> Result<AnalysisReport> {
    let s = l.s(budget)?;
    let c = l.c(budget)?;
    let records = if l.m() >= 2 {
        l.critical_sets(budget)?
    } else {
        Vec::new()
    };
    let witness = l.redundancy_witness().map(|(i, j)| (i + 1, j + 1));
    let classification = classify(l, s, &records, witness)?;
    let row_space_vectors = (l.field().q() as u64)
        .checked_pow(l.m() as u32)
        .map_or(u64::MAX, |v| v - 1);
    Ok(AnalysisReport {
        system: SystemRecord::of(l),
        canonical: format_system(l),
        rank: l.m(),
        irredundant: witness.is_none(),
        redundancy_witness: witness,
        s,
        c,
        critical_sets: records
            .iter()
            .map(|r| CriticalSetEntry {
                variables: r.set.iter().map(|i| i + 1).collect(),
                m_b: r.m_b,
                system: SystemRecord::of(&r.system),
            })
            .collect(),
        classification,
        budget: BudgetUsage {
            limit: budget.limit(),
            row_space_vectors,
        },
    })
}

fn verdict(verdict: Prediction, reason: impl Into<String>) -> Classification {
    Classification {
        verdict,
        reason: reason.into(),
    }
}

fn classify(
    l: &LinearSystem,
    s: usize,
    records: &[lincommon::linsys::CriticalSetRecord],
    witness: Option<(usize, usize)>,
) -> Result<Classification> {
    if let Some((i, j)) = witness {
        return Ok(verdict(
            Prediction::Unknown,
            format!("redundant: induces x{i} = x{j}; identify the variables first"),
        ));
    }
    if l.m() == l.k() {
        return Ok(verdict(
            Prediction::Common,
            "m = k: the only solution is zero",
        ));
    }
    if l.m() == 1 {
        let row = &l.rows()[0];
        if row.iter().all(|a| !a.is_zero()) {
            let class = classify_single_equation(l.field(), row)?;
            let v = match class {
                EquationClass::Common => Prediction::Common,
                EquationClass::Uncommon => Prediction::Uncommon,
            };
            let reason = if l.k() % 2 == 1 {
                "single equation of odd length".to_string()
            } else {
                format!(
                    "single equation of even length; coefficients {} pair into zero sums",
                    match class {
                        EquationClass::Common => "do",
                        EquationClass::Uncommon => "do not",
                    }
                )
            };
            return Ok(verdict(v, reason));
        }
        return Ok(verdict(
            Prediction::Unknown,
            "single equation with free variables",
        ));
    }
    if s == 1 {
        return Ok(verdict(Prediction::Uncommon, "induces x_i = 0"));
    }
    if s == 2 {
        return Ok(verdict(Prediction::Uncommon, "irredundant with s(L) = 2"));
    }
    if l.field().is_odd() && records.iter().any(|r| r.set.len() == 4 && r.m_b == 2) {
        return Ok(verdict(
            Prediction::Uncommon,
            "irredundant over odd q and induces a (2x4)-system",
        ));
    }
    Ok(verdict(
        Prediction::Unknown,
        "no structural criterion applies",
    ))
}
