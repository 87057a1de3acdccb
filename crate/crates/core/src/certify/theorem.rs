//! Certification through the critical subsystems: if a balanced f with
//! values in [−1/2, 1/2] has S = Σ_{B ∈ C(L)} Λ_{L_B}(f) < 0, then
//! g = αf with α = −S/2^{k+2} satisfies Δ_L(g) < 2^{1−k}.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde_json::{json, Map, Value};

use crate::budget::Budget;
use crate::density::{DensityEvaluator, FunctionTable, Verdict};
use crate::error::{Error, Result};
use crate::linsys::LinearSystem;
use crate::rational;

use super::report::{CertificateReport, Route};

/// Evaluates Σ_B Λ_{L_B}(f) for tables on F_q^d. Critical sets whose
/// induced systems coincide are evaluated once and weighted.
pub struct CriticalEvaluator {
    groups: Vec<(DensityEvaluator, u64)>,
    critical_sets: usize,
    cost: u64,
}

impl CriticalEvaluator {
    pub fn new(l: &LinearSystem, d: usize, budget: Budget) -> Result<Self> {
        let records = l.critical_sets(budget)?;
        let mut systems: Vec<(LinearSystem, u64)> = Vec::new();
        for r in &records {
            match systems.iter_mut().find(|(s, _)| *s == r.system) {
                Some((_, w)) => *w += 1,
                None => systems.push((r.system.clone(), 1)),
            }
        }
        let mut cost = BigUint::zero();
        for (s, _) in &systems {
            cost += s.solution_count(d);
        }
        let cost = budget.check("critical subsystem solutions", &cost)?;
        let groups = systems
            .into_iter()
            .map(|(s, w)| Ok((DensityEvaluator::new(&s, d, budget)?, w)))
            .collect::<Result<Vec<_>>>()?;
        Ok(CriticalEvaluator {
            groups,
            critical_sets: records.len(),
            cost,
        })
    }

    /// Number of critical sets.
    pub fn len(&self) -> usize {
        self.critical_sets
    }

    pub fn is_empty(&self) -> bool {
        self.critical_sets == 0
    }

    /// Distinct induced systems.
    pub fn distinct(&self) -> usize {
        self.groups.len()
    }

    /// Solutions enumerated per evaluation.
    pub fn cost(&self) -> u64 {
        self.cost
    }

    pub fn sum(&self, f: &FunctionTable) -> Result<BigRational> {
        let mut s = BigRational::zero();
        for (ev, w) in &self.groups {
            s += ev.lambda(f)? * BigRational::from_integer(BigInt::from(*w));
        }
        Ok(s)
    }
}

/// Σ_{B ∈ C(L)} Λ_{L_B}(f).
pub fn critical_sum(l: &LinearSystem, f: &FunctionTable, budget: Budget) -> Result<BigRational> {
    CriticalEvaluator::new(l, f.d(), budget)?.sum(f)
}

/// Checks the hypotheses on f and L and assembles the certificate.
/// Returns an inconclusive report (with α = 0) when S ≥ 0.
pub fn theorem_main_certify(
    l: &LinearSystem,
    f: &FunctionTable,
    route: Route,
    seed: Option<u64>,
    mut diagnostics: Map<String, Value>,
    budget: Budget,
) -> Result<CertificateReport> {
    if l.m() < 2 || l.m() >= l.k() {
        return Err(Error::usage(format!(
            "certification through critical sets needs 2 ≤ m < k, got m = {}, k = {}",
            l.m(),
            l.k()
        )));
    }
    if f.field() != l.field() {
        return Err(Error::usage("witness and system are over different fields"));
    }
    if !f.is_balanced() {
        return Err(Error::usage(format!(
            "witness must be balanced; sum is {}",
            rational::format(&f.sum())
        )));
    }
    if !f.in_witness_range() {
        return Err(Error::usage(format!(
            "witness values must lie in [-1/2, 1/2]; max |f| = {}",
            rational::format(f.max_abs())
        )));
    }
    // The final check enumerates sol(L; F_q^d); fail early if that is out
    // of reach.
    budget.check("solutions of L", &l.solution_count(f.d()))?;
    let evaluator = CriticalEvaluator::new(l, f.d(), budget)?;
    let s = evaluator.sum(f)?;
    diagnostics.insert("critical_sets".into(), json!(evaluator.len()));
    let alpha = if s.is_negative() {
        -&s / rational::pow2(l.k() as i64 + 2)
    } else {
        diagnostics.insert(
            "note".into(),
            json!("sum over critical subsystems is not negative"),
        );
        BigRational::zero()
    };
    let report =
        CertificateReport::assemble(l, f, &alpha, Some(&s), route, seed, diagnostics, budget)?;
    if s.is_negative() && report.verdict != Verdict::CertifiedUncommon {
        return Err(Error::Construction(format!(
            "negative critical sum {} did not yield Δ below the benchmark",
            rational::format(&s)
        )));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density;
    use crate::gf::FieldSpec;

    fn f5() -> FieldSpec {
        FieldSpec::prime(5).unwrap()
    }

    fn ap4() -> LinearSystem {
        LinearSystem::from_codes(&f5(), &[&[1, 3, 1, 0], &[0, 1, 3, 1]]).unwrap()
    }

    fn table(vals: &[(i64, i64)]) -> FunctionTable {
        let v = vals
            .iter()
            .map(|&(n, d)| rational::from_ints(n, d))
            .collect();
        FunctionTable::new(&f5(), 1, v).unwrap()
    }

    #[test]
    fn zero_witness_is_inconclusive() {
        let f = table(&[(0, 1); 5]);
        let r = theorem_main_certify(
            &ap4(),
            &f,
            Route::Search,
            None,
            Map::new(),
            Budget::default(),
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert_eq!(r.delta, r.benchmark);
    }

    #[test]
    fn unbalanced_witness_rejected() {
        let f = table(&[(1, 2), (0, 1), (0, 1), (0, 1), (0, 1)]);
        let err = theorem_main_certify(
            &ap4(),
            &f,
            Route::Search,
            None,
            Map::new(),
            Budget::default(),
        );
        assert!(matches!(err, Err(Error::Usage(_))));
    }

    #[test]
    fn four_ap_critical_sum_is_its_own_density() {
        // C(L) = {[4]} and L_[4] = L.
        let f = table(&[(1, 2), (-1, 2), (1, 4), (-1, 4), (0, 1)]);
        let s = critical_sum(&ap4(), &f, Budget::default()).unwrap();
        assert_eq!(s, density::lambda(&ap4(), &f, Budget::default()).unwrap());
    }

    #[test]
    fn negative_sum_certifies_with_scaled_alpha() {
        use crate::certify::search::{sample_function, SearchConfig};
        let config = SearchConfig::default();
        let (f, s) = (0..500)
            .map(|i| sample_function(&f5(), 2, &config, i, Budget::default()).unwrap())
            .map(|f| {
                let s = critical_sum(&ap4(), &f, Budget::default()).unwrap();
                (f, s)
            })
            .find(|(_, s)| s.is_negative())
            .expect("some sampled table has negative Λ at d = 2");
        let r = theorem_main_certify(
            &ap4(),
            &f,
            Route::Search,
            None,
            Map::new(),
            Budget::default(),
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::CertifiedUncommon);
        let alpha = rational::parse(&r.alpha_scale).unwrap();
        assert_eq!(alpha, -s / rational::pow2(6));
        let w =
            density::commonness_witness_check(&ap4(), &f.scale(&alpha), Budget::default()).unwrap();
        assert_eq!(w.verdict, Verdict::CertifiedUncommon);
    }

    #[test]
    fn single_equation_has_no_critical_route() {
        let l = LinearSystem::from_codes(&f5(), &[&[1, 1, 1]]).unwrap();
        let f = table(&[(0, 1); 5]);
        let err = theorem_main_certify(&l, &f, Route::Search, None, Map::new(), Budget::default());
        assert!(matches!(err, Err(Error::Usage(_))));
    }
}
