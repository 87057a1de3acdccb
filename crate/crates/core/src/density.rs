//! Exact densities over the solution set of a system:
//!
//! * Λ_L(f) = E_{x ∈ sol(L; F_q^d)} Π_i f(x_i)
//! * Φ_L(B, f) = E_{x ∈ sol(L; F_q^d)} Π_{i ∈ B} f(x_i)
//! * Δ_L(f) = Λ_L(1/2 + f) + Λ_L(1/2 − f), compared with 2^{1−k}.
//!
//! A table on F_q^d is always evaluated at n = d. Tables are scaled to
//! integer numerators over a common denominator, and the sums run in i128
//! whenever the worst-case magnitude fits, otherwise in big integers.

use std::fmt;
use std::ops::{AddAssign, MulAssign};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::budget::{pow_big, Budget};
use crate::error::{Error, Result};
use crate::gf::{Elem, FieldSpec};
use crate::linsys::{index_vector, LinearSystem, SolutionSpace};
use crate::rational;

pub type DensityValue = BigRational;

/// A rational-valued function on F_q^d, stored in lexicographic domain order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionTable {
    field: FieldSpec,
    d: usize,
    values: Vec<BigRational>,
    balanced: bool,
    max_abs: BigRational,
}

/// On-disk form of a [`FunctionTable`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionTableFile {
    pub q: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
    pub d: usize,
    pub values: Vec<String>,
}

/// Number of entries of a table on F_q^d, checked against the budget.
pub fn table_len(field: &FieldSpec, d: usize, budget: Budget) -> Result<usize> {
    if d == 0 {
        return Err(Error::usage("domain dimension must be at least 1"));
    }
    Ok(budget.check_pow("table entries", field.q() as u64, d as u64)? as usize)
}

impl FunctionTable {
    pub fn new(field: &FieldSpec, d: usize, values: Vec<BigRational>) -> Result<Self> {
        let expected = pow_big(field.q() as u64, d as u64);
        if d == 0 || BigUint::from(values.len()) != expected {
            return Err(Error::Invalid(format!(
                "a table on F_{}^{d} needs {expected} values, got {}",
                field.q(),
                values.len()
            )));
        }
        let sum: BigRational = values.iter().sum();
        let max_abs = values
            .iter()
            .map(|v| v.abs())
            .max()
            .unwrap_or_else(BigRational::zero);
        Ok(FunctionTable {
            field: field.clone(),
            d,
            balanced: sum.is_zero(),
            max_abs,
            values,
        })
    }

    pub fn constant(field: &FieldSpec, d: usize, c: BigRational, budget: Budget) -> Result<Self> {
        let len = table_len(field, d, budget)?;
        Self::new(field, d, vec![c; len])
    }

    /// Tabulates `f` over F_q^d in lexicographic order.
    pub fn from_fn(
        field: &FieldSpec,
        d: usize,
        budget: Budget,
        mut f: impl FnMut(&[Elem]) -> BigRational,
    ) -> Result<Self> {
        let len = table_len(field, d, budget)?;
        let values = (0..len).map(|i| f(&index_vector(field, i, d))).collect();
        Self::new(field, d, values)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn value(&self, index: usize) -> &BigRational {
        &self.values[index]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Σ values = 0 exactly.
    pub fn is_balanced(&self) -> bool {
        self.balanced
    }

    pub fn max_abs(&self) -> &BigRational {
        &self.max_abs
    }

    /// max |f| ≤ 1/2.
    pub fn in_witness_range(&self) -> bool {
        self.max_abs <= rational::from_ints(1, 2)
    }

    pub fn sum(&self) -> BigRational {
        self.values.iter().sum()
    }

    pub fn mean(&self) -> BigRational {
        self.sum() / BigRational::from_integer(BigInt::from(self.values.len()))
    }

    pub fn map(&self, f: impl Fn(&BigRational) -> BigRational) -> Self {
        Self::new(&self.field, self.d, self.values.iter().map(f).collect()).expect("same shape")
    }

    /// c·f.
    pub fn scale(&self, c: &BigRational) -> Self {
        self.map(|v| v * c)
    }

    /// c + f.
    pub fn offset(&self, c: &BigRational) -> Self {
        self.map(|v| v + c)
    }

    pub fn to_file(&self) -> FunctionTableFile {
        FunctionTableFile {
            q: self.field.q(),
            modulus: (self.field.kappa() > 1).then(|| self.field.modulus().to_vec()),
            d: self.d,
            values: self.values.iter().map(rational::format).collect(),
        }
    }

    pub fn from_file(file: &FunctionTableFile) -> Result<Self> {
        let field = FieldSpec::from_order(file.q as u64, file.modulus.as_deref())
            .map_err(|e| Error::Invalid(e.to_string()))?;
        let values = file
            .values
            .iter()
            .map(|s| rational::parse(s))
            .collect::<Result<Vec<_>>>()?;
        Self::new(&field, file.d, values)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: FunctionTableFile = serde_json::from_str(text)
            .map_err(|e| Error::Invalid(format!("function table: {e}")))?;
        Self::from_file(&file)
    }
}

/// Integer numerators over one common denominator.
struct Scaled {
    nums: Vec<BigInt>,
    den: BigInt,
    max_num: BigUint,
}

fn scaled(values: &[BigRational]) -> Scaled {
    let den = values
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let nums: Vec<BigInt> = values
        .iter()
        .map(|v| v.numer() * (&den / v.denom()))
        .collect();
    let max_num = nums
        .iter()
        .map(|n| n.magnitude().clone())
        .max()
        .unwrap_or_default();
    Scaled { nums, den, max_num }
}

trait Acc:
    Clone + Send + Sync + Zero + One + for<'a> MulAssign<&'a Self> + for<'a> AddAssign<&'a Self>
{
}
impl<T> Acc for T where
    T: Clone + Send + Sync + Zero + One + for<'a> MulAssign<&'a T> + for<'a> AddAssign<&'a T>
{
}

fn product_sums_in<T: Acc>(space: &SolutionSpace, nums: &[T], sets: &[Vec<usize>]) -> Vec<T> {
    space.fold(
        || vec![T::zero(); sets.len()],
        |acc, t| {
            for (a, set) in acc.iter_mut().zip(sets) {
                let mut p = T::one();
                for &i in set {
                    p *= &nums[t[i]];
                }
                *a += &p;
            }
        },
        |mut a, b| {
            for (x, y) in a.iter_mut().zip(&b) {
                *x += y;
            }
            a
        },
    )
}

/// Σ_{x ∈ sol} Π_{i ∈ set} N(x_i) for every set, exactly.
fn product_sums(space: &SolutionSpace, s: &Scaled, sets: &[Vec<usize>]) -> Vec<BigInt> {
    let deg = sets.iter().map(|b| b.len()).max().unwrap_or(0);
    let worst = num_traits::pow::pow(s.max_num.clone(), deg) * BigUint::from(space.count());
    if worst.bits() < 126 {
        let small: Vec<i128> = s
            .nums
            .iter()
            .map(|n| n.to_i128().expect("bounded"))
            .collect();
        product_sums_in(space, &small, sets)
            .into_iter()
            .map(BigInt::from)
            .collect()
    } else {
        product_sums_in(space, &s.nums, sets)
    }
}

/// Evaluates densities of one system over F_q^d, reusing the solution
/// enumeration across tables.
pub struct DensityEvaluator {
    system: LinearSystem,
    space: SolutionSpace,
    d: usize,
}

impl DensityEvaluator {
    pub fn new(system: &LinearSystem, d: usize, budget: Budget) -> Result<Self> {
        Ok(DensityEvaluator {
            space: system.solutions(d, budget)?,
            system: system.clone(),
            d,
        })
    }

    pub fn system(&self) -> &LinearSystem {
        &self.system
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn solution_count(&self) -> u64 {
        self.space.count()
    }

    fn check(&self, f: &FunctionTable) -> Result<()> {
        if f.field() != self.system.field() {
            return Err(Error::usage(format!(
                "table over {} used with a system over {}",
                f.field().config_line(),
                self.system.field().config_line()
            )));
        }
        if f.d() != self.d {
            return Err(Error::usage(format!(
                "table has domain dimension {}, evaluator expects {}",
                f.d(),
                self.d
            )));
        }
        Ok(())
    }

    /// Φ_L(B, f) for each B in `sets`.
    pub fn phi_many(&self, f: &FunctionTable, sets: &[Vec<usize>]) -> Result<Vec<DensityValue>> {
        self.check(f)?;
        let k = self.system.k();
        if let Some(bad) = sets.iter().flatten().find(|&&i| i >= k) {
            return Err(Error::usage(format!(
                "variable {bad} out of range for k = {k}"
            )));
        }
        let s = scaled(f.values());
        let sums = product_sums(&self.space, &s, sets);
        let count = BigInt::from(self.space.count());
        Ok(sums
            .into_iter()
            .zip(sets)
            .map(|(sum, set)| {
                let den = &count * num_traits::pow::pow(s.den.clone(), set.len());
                BigRational::new(sum, den)
            })
            .collect())
    }

    pub fn phi(&self, f: &FunctionTable, set: &[usize]) -> Result<DensityValue> {
        Ok(self.phi_many(f, &[set.to_vec()])?.remove(0))
    }

    pub fn lambda(&self, f: &FunctionTable) -> Result<DensityValue> {
        let all: Vec<usize> = (0..self.system.k()).collect();
        self.phi(f, &all)
    }

    /// Φ_L(B, f) for all 2^k subsets, indexed by bitmask (bit i = variable i).
    pub fn phi_all(&self, f: &FunctionTable) -> Result<Vec<DensityValue>> {
        let k = self.system.k();
        if k > 20 {
            return Err(Error::usage("subset expansion is limited to k ≤ 20"));
        }
        let sets: Vec<Vec<usize>> = (0u32..1 << k)
            .map(|mask| (0..k).filter(|i| mask >> i & 1 == 1).collect())
            .collect();
        self.phi_many(f, &sets)
    }

    /// Λ_L(1/2 + f) + Λ_L(1/2 − f).
    pub fn delta(&self, f: &FunctionTable) -> Result<DensityValue> {
        let half = rational::from_ints(1, 2);
        let plus = f.offset(&half);
        let minus = f.map(|v| &half - v);
        Ok(self.lambda(&plus)? + self.lambda(&minus)?)
    }

    /// 2 Σ_{|B| even} 2^{|B|−k} Φ_L(B, f).
    pub fn delta_by_subsets(&self, f: &FunctionTable) -> Result<DensityValue> {
        let k = self.system.k() as i64;
        let phis = self.phi_all(f)?;
        let mut total = BigRational::zero();
        for (mask, phi) in phis.iter().enumerate() {
            let size = mask.count_ones() as i64;
            if size % 2 == 0 {
                total += phi * rational::pow2(size - k);
            }
        }
        Ok(total * rational::pow2(1))
    }
}

pub fn lambda(system: &LinearSystem, f: &FunctionTable, budget: Budget) -> Result<DensityValue> {
    DensityEvaluator::new(system, f.d(), budget)?.lambda(f)
}

pub fn phi(
    system: &LinearSystem,
    set: &[usize],
    f: &FunctionTable,
    budget: Budget,
) -> Result<DensityValue> {
    DensityEvaluator::new(system, f.d(), budget)?.phi(f, set)
}

pub fn delta(system: &LinearSystem, f: &FunctionTable, budget: Budget) -> Result<DensityValue> {
    DensityEvaluator::new(system, f.d(), budget)?.delta(f)
}

/// 2^{1−k}, the value of Δ at f ≡ 0.
pub fn benchmark(k: usize) -> DensityValue {
    rational::pow2(1 - k as i64)
}

pub fn is_rank_reducing(system: &LinearSystem, set: &[usize]) -> bool {
    system.is_rank_reducing(set)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    CertifiedUncommon,
    Inconclusive,
    Common,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::CertifiedUncommon => "certified-uncommon",
            Verdict::Inconclusive => "inconclusive",
            Verdict::Common => "common",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessCheck {
    pub verdict: Verdict,
    pub delta: DensityValue,
    pub benchmark: DensityValue,
}

/// Certified uncommon iff Δ_L(f) < 2^{1−k} exactly, for an irredundant L
/// and f with values in [−1/2, 1/2].
pub fn commonness_witness_check(
    system: &LinearSystem,
    f: &FunctionTable,
    budget: Budget,
) -> Result<WitnessCheck> {
    if let Some((i, j)) = system.redundancy_witness() {
        return Err(Error::usage(format!(
            "system induces x{} = x{}; the benchmark 2^(1-k) does not apply to redundant systems",
            i + 1,
            j + 1
        )));
    }
    if !f.in_witness_range() {
        return Err(Error::usage(format!(
            "witness values must lie in [-1/2, 1/2]; max |f| = {}",
            rational::format(f.max_abs())
        )));
    }
    let delta = delta(system, f, budget)?;
    let benchmark = benchmark(system.k());
    let verdict = if delta < benchmark {
        Verdict::CertifiedUncommon
    } else {
        Verdict::Inconclusive
    };
    Ok(WitnessCheck {
        verdict,
        delta,
        benchmark,
    })
}
