//! Enumeration of sol(L; F_q^n).
//!
//! A solution over F_q^n is an n×k array whose rows are solutions over F_q,
//! so the space is enumerated as n-tuples of base solutions. Vectors of
//! F_q^n are addressed by their lexicographic index
//! y ↦ Σ_c y_c q^{n-1-c} (first coordinate most significant).

use rayon::prelude::*;

use crate::gf::{Elem, FieldSpec};

/// Below this many solutions enumeration stays on the calling thread.
const PARALLEL_THRESHOLD: u64 = 1 << 14;

pub fn vector_index(field: &FieldSpec, v: &[Elem]) -> usize {
    let q = field.q() as usize;
    v.iter().fold(0usize, |acc, e| acc * q + e.code() as usize)
}

pub fn index_vector(field: &FieldSpec, mut idx: usize, n: usize) -> Vec<Elem> {
    let q = field.q() as usize;
    let mut v = vec![Elem::ZERO; n];
    for c in (0..n).rev() {
        v[c] = Elem::from_code((idx % q) as u32);
        idx /= q;
    }
    v
}

/// The solution space of a system over F_q^n.
#[derive(Clone, Debug)]
pub struct SolutionSpace {
    k: usize,
    n: usize,
    /// contrib[c][s][i]: contribution of base solution s placed in
    /// coordinate c to the index of variable i.
    contrib: Vec<Vec<Vec<usize>>>,
    base_len: usize,
    count: u64,
}

impl SolutionSpace {
    pub(crate) fn new(q: usize, k: usize, n: usize, base: &[Vec<Elem>]) -> Self {
        let contrib = (0..n)
            .map(|c| {
                let place = q.pow((n - 1 - c) as u32);
                base.iter()
                    .map(|s| s.iter().map(|e| e.code() as usize * place).collect())
                    .collect()
            })
            .collect();
        SolutionSpace {
            k,
            n,
            contrib,
            base_len: base.len(),
            count: (base.len() as u64).pow(n as u32),
        }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of parts in the partition by first coordinate row.
    pub fn parts(&self) -> usize {
        self.base_len
    }

    /// Visits every solution whose first coordinate row is base solution
    /// `first`, passing the k vector indices.
    pub fn for_each_in_part(&self, first: usize, f: &mut impl FnMut(&[usize])) {
        let n = self.n;
        let s = self.base_len;
        let mut idx: Vec<usize> = self.contrib[0][first].clone();
        let mut choice = vec![0usize; n];
        for c in 1..n {
            for (x, d) in idx.iter_mut().zip(&self.contrib[c][0]) {
                *x += d;
            }
        }
        loop {
            f(&idx);
            // Odometer over coordinates 1..n, last fastest.
            let mut c = n;
            loop {
                if c <= 1 {
                    return;
                }
                c -= 1;
                let old = choice[c];
                let new = if old + 1 == s { 0 } else { old + 1 };
                choice[c] = new;
                for ((x, o), nw) in idx
                    .iter_mut()
                    .zip(&self.contrib[c][old])
                    .zip(&self.contrib[c][new])
                {
                    *x = *x - o + nw;
                }
                if new != 0 {
                    break;
                }
            }
        }
    }

    /// Visits every solution exactly once.
    pub fn for_each(&self, mut f: impl FnMut(&[usize])) {
        for first in 0..self.base_len {
            self.for_each_in_part(first, &mut f);
        }
    }

    /// Parallel fold over all solutions; partitions by the first coordinate
    /// row. The result is independent of scheduling as long as `reduce` is
    /// associative and commutative.
    pub fn fold<A, I, F, R>(&self, identity: I, fold: F, reduce: R) -> A
    where
        A: Send,
        I: Fn() -> A + Sync + Send,
        F: Fn(&mut A, &[usize]) + Sync + Send,
        R: Fn(A, A) -> A + Sync + Send,
    {
        if self.count < PARALLEL_THRESHOLD {
            let mut acc = identity();
            self.for_each(|t| fold(&mut acc, t));
            return acc;
        }
        (0..self.base_len)
            .into_par_iter()
            .map(|first| {
                let mut acc = identity();
                self.for_each_in_part(first, &mut |t| fold(&mut acc, t));
                acc
            })
            .reduce(&identity, &reduce)
    }

    /// Collects every solution as a k-tuple of vector indices.
    pub fn collect(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::with_capacity(self.count as usize);
        self.for_each(|t| out.push(t.to_vec()));
        out
    }
}
