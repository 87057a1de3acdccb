//! (m×k)-systems over F_q: canonical form, solution spaces, the induced
//! equations of minimal length, and critical sets.
//!
//! Variables are 0-based in this API. Reports and files shown to users
//! number them from 1.

pub mod matrix;
mod solutions;

use itertools::Itertools;
use num_bigint::BigUint;
use num_integer::binomial;

use crate::budget::{pow_big, Budget};
use crate::error::{Error, Result};
use crate::gf::{Elem, FieldSpec};

pub use solutions::{index_vector, vector_index, SolutionSpace};

/// A system of m linearly independent linear forms in k variables, stored
/// in reduced row echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem {
    field: FieldSpec,
    k: usize,
    rows: Vec<Vec<Elem>>,
    pivots: Vec<usize>,
}

/// A nonzero vector of the row space, i.e. an induced equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowSpaceVector {
    pub coeffs: Vec<Elem>,
    pub support: Vec<usize>,
    pub weight: usize,
}

impl RowSpaceVector {
    fn new(coeffs: Vec<Elem>) -> Self {
        let support: Vec<usize> = coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i)
            .collect();
        RowSpaceVector {
            weight: support.len(),
            support,
            coeffs,
        }
    }
}

/// A critical set B together with the maximal induced system on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalSetRecord {
    /// Sorted variable indices, |B| = c(L).
    pub set: Vec<usize>,
    /// Dimension of the row-space vectors supported inside B.
    pub m_b: usize,
    /// The induced system on the variables of B, in canonical form.
    pub system: LinearSystem,
}

impl LinearSystem {
    /// Validates and canonicalises a coefficient matrix. Rejects rows of
    /// unequal length, codes outside F_q and dependent rows.
    pub fn new(field: &FieldSpec, rows: Vec<Vec<Elem>>) -> Result<Self> {
        let Some(first) = rows.first() else {
            return Err(Error::RankDeficient { rows: 0, rank: 0 });
        };
        let k = first.len();
        if k == 0 {
            return Err(Error::usage("a system needs at least one variable"));
        }
        for (i, r) in rows.iter().enumerate() {
            if r.len() != k {
                return Err(Error::usage(format!(
                    "row {} has {} entries, expected {k}",
                    i + 1,
                    r.len()
                )));
            }
            if let Some(bad) = r.iter().find(|e| e.code() >= field.q()) {
                return Err(Error::domain(format!(
                    "entry {} out of range for F_{}",
                    bad.code(),
                    field.q()
                )));
            }
        }
        let (red, pivots) = matrix::rref(field, &rows);
        if red.len() < rows.len() {
            return Err(Error::RankDeficient {
                rows: rows.len(),
                rank: red.len(),
            });
        }
        Ok(LinearSystem {
            field: field.clone(),
            k,
            rows: red,
            pivots,
        })
    }

    /// Convenience constructor from element codes.
    pub fn from_codes(field: &FieldSpec, rows: &[&[u32]]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&c| field.elem(c)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(field, rows)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn m(&self) -> usize {
        self.rows.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Canonical rows (RREF).
    pub fn rows(&self) -> &[Vec<Elem>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn row_codes(&self) -> Vec<Vec<u32>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|e| e.code()).collect())
            .collect()
    }

    /// |sol(L; F_q^n)| = q^{n(k-m)}.
    pub fn solution_count(&self, n: usize) -> BigUint {
        pow_big(self.field.q() as u64, (n * (self.k - self.m())) as u64)
    }

    /// One generator of sol(L; F_q) per free column.
    pub fn solution_basis(&self) -> Vec<Vec<Elem>> {
        matrix::nullspace(&self.field, &self.rows, self.k)
    }

    /// sol(L; F_q), every element exactly once.
    pub fn base_solutions(&self, budget: Budget) -> Result<Vec<Vec<Elem>>> {
        let dim = self.k - self.m();
        let count = budget.check_pow("solutions over F_q", self.field.q() as u64, dim as u64)?;
        let basis = self.solution_basis();
        let q = self.field.q() as u64;
        let mut out = Vec::with_capacity(count as usize);
        for code in 0..count {
            let mut t = vec![Elem::ZERO; dim];
            let mut c = code;
            for j in (0..dim).rev() {
                t[j] = Elem::from_code((c % q) as u32);
                c /= q;
            }
            out.push(matrix::combine(&self.field, &t, &basis, self.k));
        }
        Ok(out)
    }

    /// sol(L; F_q^n) as a re-creatable enumeration.
    pub fn solutions(&self, n: usize, budget: Budget) -> Result<SolutionSpace> {
        if n == 0 {
            return Err(Error::usage("dimension n must be at least 1"));
        }
        budget.check("solutions over F_q^n", &self.solution_count(n))?;
        let base = self.base_solutions(budget)?;
        Ok(SolutionSpace::new(
            self.field.q() as usize,
            self.k,
            n,
            &base,
        ))
    }

    /// All q^m - 1 nonzero row-space vectors.
    pub fn row_space_vectors(
        &self,
        budget: Budget,
    ) -> Result<impl Iterator<Item = RowSpaceVector> + '_> {
        let m = self.m();
        let q = self.field.q() as u64;
        let total = budget.check("row-space vectors", &(pow_big(q, m as u64) - 1u32))?;
        Ok((1..=total).map(move |code| {
            let mut coeffs = vec![Elem::ZERO; m];
            let mut c = code;
            for j in (0..m).rev() {
                coeffs[j] = Elem::from_code((c % q) as u32);
                c /= q;
            }
            RowSpaceVector::new(matrix::combine(&self.field, &coeffs, &self.rows, self.k))
        }))
    }

    /// s(L): the minimum weight of a nonzero row-space vector.
    pub fn s(&self, budget: Budget) -> Result<usize> {
        Ok(self
            .row_space_vectors(budget)?
            .map(|v| v.weight)
            .min()
            .expect("row space is nonzero"))
    }

    /// c(L): s(L) rounded up to the next even number.
    pub fn c(&self, budget: Budget) -> Result<usize> {
        Ok(even_ceiling(self.s(budget)?))
    }

    /// The least pair (i, j), i < j, such that L induces x_i - x_j = 0.
    pub fn redundancy_witness(&self) -> Option<(usize, usize)> {
        (0..self.k).tuple_combinations().find(|&(i, j)| {
            let mut v = vec![Elem::ZERO; self.k];
            v[i] = Elem::ONE;
            v[j] = self.field.neg(Elem::ONE);
            self.contains(&v)
        })
    }

    pub fn is_redundant(&self) -> bool {
        self.redundancy_witness().is_some()
    }

    /// Whether `v` lies in the row space.
    pub fn contains(&self, v: &[Elem]) -> bool {
        let mut rows = self.rows.clone();
        rows.push(v.to_vec());
        matrix::rank(&self.field, &rows) == self.m()
    }

    /// Rank of the columns in `cols`.
    pub fn column_rank(&self, cols: &[usize]) -> usize {
        if cols.is_empty() {
            return 0;
        }
        matrix::rank(&self.field, &matrix::select_columns(&self.rows, cols))
    }

    fn complement(&self, set: &[usize]) -> Vec<usize> {
        (0..self.k).filter(|i| !set.contains(i)).collect()
    }

    /// Whether deleting the columns in `set` lowers the rank.
    pub fn is_rank_reducing(&self, set: &[usize]) -> bool {
        self.column_rank(&self.complement(set)) < self.m()
    }

    /// Basis of the row-space vectors supported inside `set`.
    pub fn supported_subspace(&self, set: &[usize]) -> Vec<Vec<Elem>> {
        let outside = self.complement(set);
        let m = self.m();
        if outside.is_empty() {
            return self.rows.clone();
        }
        // y with y^T R = 0 on the columns outside the set.
        let restricted = matrix::select_columns(&self.rows, &outside);
        let t = matrix::transpose(&restricted, outside.len());
        matrix::nullspace(&self.field, &t, m)
            .iter()
            .map(|y| matrix::combine(&self.field, y, &self.rows, self.k))
            .collect()
    }

    /// The maximal system induced on `set`, on |set| variables, or `None`
    /// when L induces nothing there.
    pub fn induced_on(&self, set: &[usize]) -> Result<Option<LinearSystem>> {
        let basis = self.supported_subspace(set);
        if basis.is_empty() {
            return Ok(None);
        }
        let rows = matrix::select_columns(&basis, set);
        Ok(Some(LinearSystem::new(&self.field, rows)?))
    }

    /// Every critical set with its rank m_B and induced system L_B.
    pub fn critical_sets(&self, budget: Budget) -> Result<Vec<CriticalSetRecord>> {
        if self.m() < 2 {
            return Err(Error::usage(
                "critical sets are defined for systems with at least two equations",
            ));
        }
        let c = self.c(budget)?;
        if c > self.k {
            return Ok(Vec::new());
        }
        budget.check(
            "candidate critical sets",
            &binomial(BigUint::from(self.k), BigUint::from(c)),
        )?;
        let mut out = Vec::new();
        for set in (0..self.k).combinations(c) {
            if let Some(system) = self.induced_on(&set)? {
                out.push(CriticalSetRecord {
                    m_b: system.m(),
                    set,
                    system,
                });
            }
        }
        Ok(out)
    }

    /// Number of solutions over F_q^n extending a fixed solution of L_B:
    /// q^{n(k - c(L) - m + m_B)}.
    pub fn extension_count(&self, record: &CriticalSetRecord, n: usize) -> BigUint {
        let e = self.k + record.m_b - record.set.len() - self.m();
        pow_big(self.field.q() as u64, (n * e) as u64)
    }

    /// Whether L induces `other` on the variables `set` (in that order).
    pub fn induces(&self, other: &LinearSystem, set: &[usize]) -> Result<bool> {
        if other.field != self.field {
            return Err(Error::usage("systems over different fields"));
        }
        if other.k != set.len() || !set.iter().all_unique() || set.iter().any(|&i| i >= self.k) {
            return Err(Error::usage(format!(
                "variable set {set:?} does not match a {}-variable system",
                other.k
            )));
        }
        Ok(other.rows.iter().all(|row| {
            let mut v = vec![Elem::ZERO; self.k];
            for (&i, &c) in set.iter().zip(row) {
                v[i] = c;
            }
            self.contains(&v)
        }))
    }

    /// Identical row spaces.
    pub fn equivalent(&self, other: &LinearSystem) -> bool {
        self == other
    }

    /// New system whose column c is old column `perm[c]`.
    pub fn permute_columns(&self, perm: &[usize]) -> Result<LinearSystem> {
        if perm.len() != self.k || !perm.iter().all_unique() || perm.iter().any(|&i| i >= self.k) {
            return Err(Error::usage(format!(
                "{perm:?} is not a permutation of the variables"
            )));
        }
        let rows = matrix::select_columns(&self.rows, perm);
        LinearSystem::new(&self.field, rows)
    }

    /// Substitutes x_j := x_i and drops x_j. Solutions of the result are in
    /// bijection with solutions of L whenever L induces x_i = x_j. Returns
    /// `None` if no equation survives.
    pub fn identify_variables(&self, i: usize, j: usize) -> Result<Option<LinearSystem>> {
        if i == j || i >= self.k || j >= self.k {
            return Err(Error::usage(format!(
                "cannot identify variables {i} and {j}"
            )));
        }
        let rows: Vec<Vec<Elem>> = self
            .rows
            .iter()
            .map(|r| {
                let mut r = r.clone();
                r[i] = self.field.add(r[i], r[j]);
                r.remove(j);
                r
            })
            .collect();
        let (red, _) = matrix::rref(&self.field, &rows);
        if red.is_empty() {
            return Ok(None);
        }
        Ok(Some(LinearSystem::new(&self.field, red)?))
    }
}

pub fn even_ceiling(s: usize) -> usize {
    if s.is_multiple_of(2) {
        s
    } else {
        s + 1
    }
}

/// Every (m×k)-system over the field, one per row space, in canonical form.
pub fn all_systems(
    field: &FieldSpec,
    m: usize,
    k: usize,
    budget: Budget,
) -> Result<Vec<LinearSystem>> {
    if m == 0 || m > k {
        return Err(Error::usage(format!("no ({m}×{k})-systems exist")));
    }
    let q = field.q() as u64;
    let mut out = Vec::new();
    for pivots in (0..k).combinations(m) {
        // Free entries: right of the row's pivot, outside pivot columns.
        let slots: Vec<(usize, usize)> = (0..m)
            .flat_map(|i| {
                let pivots = &pivots;
                (pivots[i] + 1..k)
                    .filter(move |j| !pivots.contains(j))
                    .map(move |j| (i, j))
            })
            .collect();
        let count = budget.check_pow("systems of this shape", q, slots.len() as u64)?;
        for code in 0..count {
            let mut rows = vec![vec![Elem::ZERO; k]; m];
            for (i, &p) in pivots.iter().enumerate() {
                rows[i][p] = Elem::ONE;
            }
            let mut c = code;
            for &(i, j) in &slots {
                rows[i][j] = field.elem((c % q) as u32)?;
                c /= q;
            }
            out.push(LinearSystem::new(field, rows)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {

    #[test]
    fn all_systems_are_distinct_and_counted() {
        // Gaussian binomial [4 choose 2]_3 = 130.
        let f3 = FieldSpec::prime(3).unwrap();
        let all = all_systems(&f3, 2, 4, Budget::default()).unwrap();
        assert_eq!(all.len(), 130);
        let mut rows: Vec<_> = all.iter().map(|l| l.row_codes()).collect();
        rows.sort();
        rows.dedup();
        assert_eq!(rows.len(), 130);
    }
    use super::*;

    fn f5() -> FieldSpec {
        FieldSpec::prime(5).unwrap()
    }

    fn ap4() -> LinearSystem {
        LinearSystem::from_codes(&f5(), &[&[1, 3, 1, 0], &[0, 1, 3, 1]]).unwrap()
    }

    #[test]
    fn construct_examples() {
        let l = ap4();
        assert_eq!((l.m(), l.k()), (2, 4));
        let err = LinearSystem::from_codes(&f5(), &[&[1, 1, 0], &[2, 2, 0]]).unwrap_err();
        assert_eq!(err, Error::RankDeficient { rows: 2, rank: 1 });
        let f3 = FieldSpec::prime(3).unwrap();
        assert_eq!(
            LinearSystem::from_codes(&f3, &[&[1, 2, 0, 0]]).unwrap().m(),
            1
        );
        assert!(LinearSystem::from_codes(&f5(), &[&[0, 0, 0]]).is_err());
    }

    #[test]
    fn counts() {
        let l = ap4();
        assert_eq!(l.solution_count(1), BigUint::from(25u32));
        assert_eq!(l.solution_count(2), BigUint::from(625u32));
        let square = LinearSystem::from_codes(&f5(), &[&[1, 2], &[0, 1]]).unwrap();
        assert_eq!(square.solution_count(3), BigUint::from(1u32));
    }

    #[test]
    fn four_ap_solutions_at_n1() {
        let l = ap4();
        let sols: Vec<Vec<u32>> = l
            .base_solutions(Budget::default())
            .unwrap()
            .iter()
            .map(|s| s.iter().map(|e| e.code()).collect())
            .collect();
        assert_eq!(sols.len(), 25);
        assert!(sols.contains(&vec![0, 0, 0, 0]));
        assert!(sols.contains(&vec![1, 2, 3, 4]));
        for s in &sols {
            assert_eq!((2 * s[1] + 5 - s[0]) % 5, s[2]);
            assert_eq!((2 * s[2] + 5 - s[1]) % 5, s[3]);
        }
    }

    #[test]
    fn two_variable_solutions() {
        let f3 = FieldSpec::prime(3).unwrap();
        let l = LinearSystem::from_codes(&f3, &[&[1, 1]]).unwrap();
        let mut sols: Vec<Vec<usize>> = l.solutions(1, Budget::default()).unwrap().collect();
        sols.sort();
        assert_eq!(sols, vec![vec![0, 0], vec![1, 2], vec![2, 1]]);
    }

    #[test]
    fn solution_space_over_n_matches_rows() {
        let l = ap4();
        let space = l.solutions(2, Budget::default()).unwrap();
        let all = space.collect();
        assert_eq!(all.len(), 625);
        let mut seen = std::collections::HashSet::new();
        for t in &all {
            assert!(seen.insert(t.clone()));
            for c in 0..2 {
                let row: Vec<Elem> = t
                    .iter()
                    .map(|&idx| index_vector(l.field(), idx, 2)[c])
                    .collect();
                for r in l.rows() {
                    assert!(l.field().dot(r, &row).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let l = ap4();
        let err = l.solutions(3, Budget::new(100)).unwrap_err();
        assert!(matches!(err, Error::Budget { .. }));
        assert!(l.row_space_vectors(Budget::new(10)).is_err());
    }

    #[test]
    fn row_space_examples() {
        let l = ap4();
        let vs: Vec<_> = l.row_space_vectors(Budget::default()).unwrap().collect();
        assert_eq!(vs.len(), 24);
        assert_eq!(vs.iter().map(|v| v.weight).min(), Some(3));
        let f3 = FieldSpec::prime(3).unwrap();
        let single = LinearSystem::from_codes(&f3, &[&[1, 1]]).unwrap();
        let vs: Vec<Vec<u32>> = single
            .row_space_vectors(Budget::default())
            .unwrap()
            .map(|v| v.coeffs.iter().map(|e| e.code()).collect())
            .collect();
        assert_eq!(vs, vec![vec![1, 1], vec![2, 2]]);
    }

    #[test]
    fn s_and_c() {
        let b = Budget::default();
        let l = ap4();
        assert_eq!((l.s(b).unwrap(), l.c(b).unwrap()), (3, 4));
        let l2 = LinearSystem::from_codes(&f5(), &[&[1, 4, 0, 0], &[0, 1, 2, 3]]).unwrap();
        assert_eq!((l2.s(b).unwrap(), l2.c(b).unwrap()), (2, 2));
        let single = LinearSystem::from_codes(&f5(), &[&[1, 2, 3, 4, 1]]).unwrap();
        assert_eq!(single.s(b).unwrap(), 5);
    }

    #[test]
    fn redundancy() {
        let l = LinearSystem::from_codes(&f5(), &[&[1, 4, 0], &[0, 0, 1]]).unwrap();
        assert_eq!(l.redundancy_witness(), Some((0, 1)));
        assert!(!ap4().is_redundant());
        let f3 = FieldSpec::prime(3).unwrap();
        assert!(!LinearSystem::from_codes(&f3, &[&[1, 1]])
            .unwrap()
            .is_redundant());
    }

    #[test]
    fn critical_sets_of_four_ap() {
        let l = ap4();
        let cs = l.critical_sets(Budget::default()).unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].set, vec![0, 1, 2, 3]);
        assert_eq!(cs[0].m_b, 2);
        assert!(cs[0].system.equivalent(&l));
        assert_eq!(l.extension_count(&cs[0], 1), BigUint::from(1u32));
    }

    #[test]
    fn critical_sets_two_by_five() {
        let l = LinearSystem::from_codes(&f5(), &[&[1, 4, 0, 0, 0], &[0, 1, 1, 1, 1]]).unwrap();
        let cs = l.critical_sets(Budget::default()).unwrap();
        assert!(cs.iter().any(|r| r.set == vec![0, 1] && r.m_b == 1));
        assert!(cs.iter().all(|r| r.m_b == 1));
    }

    #[test]
    fn critical_sets_need_two_rows() {
        let l = LinearSystem::from_codes(&f5(), &[&[1, 1, 1]]).unwrap();
        assert!(matches!(
            l.critical_sets(Budget::default()),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn induces_and_equivalence() {
        let l = ap4();
        let ap3 = LinearSystem::from_codes(&f5(), &[&[1, 3, 1]]).unwrap();
        assert!(l.induces(&ap3, &[0, 1, 2]).unwrap());
        let scrambled = LinearSystem::from_codes(&f5(), &[&[2, 2, 0, 1], &[1, 4, 4, 1]]).unwrap();
        assert!(l.equivalent(&scrambled));
        for (i, j) in (0..4).tuple_combinations() {
            for a in 1..5u32 {
                for b in 1..5u32 {
                    let eq = LinearSystem::from_codes(&f5(), &[&[a, b]]).unwrap();
                    assert!(!l.induces(&eq, &[i, j]).unwrap());
                }
            }
        }
    }

    #[test]
    fn rank_reducing() {
        let l = ap4();
        assert!(!l.is_rank_reducing(&[0]));
        assert!(l.is_rank_reducing(&[0, 1, 2, 3]));
        assert!(l.is_rank_reducing(&[0, 1, 2]));
    }

    #[test]
    fn identify_variables_strips_redundancy() {
        let l = LinearSystem::from_codes(&f5(), &[&[1, 4, 0, 0], &[0, 1, 1, 1]]).unwrap();
        let reduced = l.identify_variables(0, 1).unwrap().unwrap();
        assert_eq!((reduced.m(), reduced.k()), (1, 3));
        // x1 = x2 and x2 + x3 + x4 = 0 becomes x1 + x3 + x4 = 0.
        let expect = LinearSystem::from_codes(&f5(), &[&[1, 1, 1]]).unwrap();
        assert!(reduced.equivalent(&expect));
        let only = LinearSystem::from_codes(&f5(), &[&[1, 4]]).unwrap();
        assert!(only.identify_variables(0, 1).unwrap().is_none());
    }
}
