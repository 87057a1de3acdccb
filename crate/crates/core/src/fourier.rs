//! Discrete Fourier analysis on F_q^n with characters χ_r(x) = ω^{Tr(r·x)},
//! ω = exp(2πi/p), and the quadratic character sums used to bound the
//! transform of twisted functions.
//!
//! Transforms are direct O(q^{2n}) sums. Phases are reduced exactly mod p
//! before being turned into complex numbers, so equal phases give
//! bit-identical values.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::budget::{pow_big, Budget};
use crate::density::FunctionTable;
use crate::error::{Error, Result};
use crate::gf::{Elem, FieldSpec, PhaseExponent};
use crate::linsys::{index_vector, vector_index};
use crate::rational;

/// Default absolute tolerance for complex comparisons.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// A real-valued function on F_q^n held in floating point, e.g. a twisted
/// function whose values involve cosines.
#[derive(Clone, Debug, PartialEq)]
pub struct RealFunction {
    field: FieldSpec,
    n: usize,
    values: Vec<f64>,
}

impl RealFunction {
    pub fn new(field: &FieldSpec, n: usize, values: Vec<f64>) -> Result<Self> {
        if n == 0 || pow_big(field.q() as u64, n as u64) != values.len().into() {
            return Err(Error::Invalid(format!(
                "a function on F_{}^{n} needs q^n values, got {}",
                field.q(),
                values.len()
            )));
        }
        Ok(RealFunction {
            field: field.clone(),
            n,
            values,
        })
    }

    pub fn from_table(f: &FunctionTable) -> Self {
        RealFunction {
            field: f.field().clone(),
            n: f.d(),
            values: f.values().iter().map(rational::to_f64).collect(),
        }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }
}

/// Exact phase tables for one field.
struct Phases {
    p: u32,
    /// trace[a·q + b] = Tr(a·b) as an integer in [0, p).
    trace: Vec<u32>,
    roots: Vec<Complex64>,
    q: usize,
}

impl Phases {
    fn new(field: &FieldSpec) -> Self {
        let q = field.q() as usize;
        let p = field.p();
        let mut trace = vec![0u32; q * q];
        for a in 0..q {
            for b in 0..q {
                let prod = field.mul(Elem::from_code(a as u32), Elem::from_code(b as u32));
                trace[a * q + b] = field.trace_phase(prod).value();
            }
        }
        let roots = (0..p)
            .map(|j| PhaseExponent::new(j as u64, p).to_complex())
            .collect();
        Phases { p, trace, roots, q }
    }

    /// Tr(r·x) mod p for code vectors.
    fn dot(&self, r: &[u32], x: &[u32]) -> u32 {
        let s: u64 = r
            .iter()
            .zip(x)
            .map(|(&a, &b)| self.trace[a as usize * self.q + b as usize] as u64)
            .sum();
        (s % self.p as u64) as u32
    }

    fn root(&self, e: u32) -> Complex64 {
        self.roots[(e % self.p) as usize]
    }
}

fn code_vectors(field: &FieldSpec, n: usize, len: usize) -> Vec<Vec<u32>> {
    (0..len)
        .map(|i| index_vector(field, i, n).iter().map(|e| e.code()).collect())
        .collect()
}

/// The character χ_r(x) = ω^{Tr(r·x)}.
pub fn character(field: &FieldSpec, r: &[Elem], x: &[Elem]) -> Result<Complex64> {
    let t = field.dot(r, x)?;
    Ok(field.trace_phase(t).to_complex())
}

/// Fourier coefficients f̂(r) = E_x f(x) ω^{−Tr(r·x)} over F_q^n.
#[derive(Clone, Debug)]
pub struct FourierTable {
    field: FieldSpec,
    n: usize,
    coeffs: Vec<Complex64>,
    tolerance: f64,
}

impl FourierTable {
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coefficient(&self, r: &[Elem]) -> Complex64 {
        self.coeffs[vector_index(&self.field, r)]
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    /// f(x) = Σ_r f̂(r) ω^{Tr(r·x)}.
    pub fn inverse(&self) -> Vec<Complex64> {
        let phases = Phases::new(&self.field);
        let vecs = code_vectors(&self.field, self.n, self.coeffs.len());
        (0..self.coeffs.len())
            .into_par_iter()
            .map(|x| {
                self.coeffs
                    .iter()
                    .zip(&vecs)
                    .map(|(c, r)| c * phases.root(phases.dot(r, &vecs[x])))
                    .sum()
            })
            .collect()
    }

    /// Σ_r |f̂(r)|².
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Σ_r Π_i f̂(a_i r), which equals Λ for the equation Σ a_i x_i = 0.
    pub fn single_equation_lambda(&self, coeffs: &[Elem]) -> Result<Complex64> {
        if coeffs.is_empty() {
            return Err(Error::usage("an equation needs at least one coefficient"));
        }
        if coeffs.iter().any(|a| a.is_zero()) {
            return Err(Error::usage("all coefficients must be nonzero"));
        }
        if let Some(a) = coeffs.iter().find(|a| a.code() >= self.field.q()) {
            return Err(Error::domain(format!(
                "coefficient {} is not in F_{}",
                a.code(),
                self.field.q()
            )));
        }
        let f = &self.field;
        let total = (0..self.coeffs.len())
            .map(|ri| {
                let r = index_vector(f, ri, self.n);
                coeffs
                    .iter()
                    .map(|&a| {
                        let ar: Vec<Elem> = r.iter().map(|&c| f.mul(a, c)).collect();
                        self.coeffs[vector_index(f, &ar)]
                    })
                    .product::<Complex64>()
            })
            .sum();
        Ok(total)
    }
}

/// Transform of a real function, O(q^{2n}).
pub fn transform_real(g: &RealFunction, budget: Budget) -> Result<FourierTable> {
    let len = g.values.len();
    budget.check("Fourier transform terms", &pow_big(len as u64, 2))?;
    let phases = Phases::new(&g.field);
    let vecs = code_vectors(&g.field, g.n, len);
    let scale = 1.0 / len as f64;
    let coeffs = (0..len)
        .into_par_iter()
        .map(|r| {
            let s: Complex64 = g
                .values
                .iter()
                .zip(&vecs)
                .filter(|(v, _)| **v != 0.0)
                .map(|(v, x)| *v * phases.root(phases.p - phases.dot(&vecs[r], x)))
                .sum();
            s * scale
        })
        .collect();
    Ok(FourierTable {
        field: g.field.clone(),
        n: g.n,
        coeffs,
        tolerance: DEFAULT_TOLERANCE,
    })
}

/// Transform of an exact table. f̂(0) is the exact mean rounded once.
pub fn transform(f: &FunctionTable, budget: Budget) -> Result<FourierTable> {
    let mut t = transform_real(&RealFunction::from_table(f), budget)?;
    t.coeffs[0] = Complex64::new(rational::to_f64(&f.mean()), 0.0);
    Ok(t)
}

/// Λ of the equation Σ a_i x_i = 0 at f, through the Fourier identity.
pub fn single_equation_lambda(
    f: &FunctionTable,
    coeffs: &[Elem],
    budget: Budget,
) -> Result<Complex64> {
    if coeffs.iter().any(|a| a.is_zero()) {
        return Err(Error::usage("all coefficients must be nonzero"));
    }
    transform(f, budget)?.single_equation_lambda(coeffs)
}

/// Q(x, y) = α(x·x) + β(x·y) + γ(y·y).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadraticForm {
    pub alpha: Elem,
    pub beta: Elem,
    pub gamma: Elem,
}

impl QuadraticForm {
    pub fn new(alpha: Elem, beta: Elem, gamma: Elem) -> Self {
        QuadraticForm { alpha, beta, gamma }
    }

    pub fn is_zero(&self) -> bool {
        self.alpha.is_zero() && self.beta.is_zero() && self.gamma.is_zero()
    }

    pub fn eval(&self, field: &FieldSpec, x: &[Elem], y: &[Elem]) -> Result<Elem> {
        let xx = field.dot(x, x)?;
        let xy = field.dot(x, y)?;
        let yy = field.dot(y, y)?;
        Ok(field.add(
            field.add(field.mul(self.alpha, xx), field.mul(self.beta, xy)),
            field.mul(self.gamma, yy),
        ))
    }
}

/// The affine subspace (u, 0^{n−d}) + 0^d × F_q^{n−d} of F_q^n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSlice {
    offset: Vec<Elem>,
    n: usize,
}

impl AffineSlice {
    pub fn new(offset: Vec<Elem>, n: usize) -> Result<Self> {
        if offset.len() > n {
            return Err(Error::usage(format!(
                "offset of length {} does not fit in dimension {n}",
                offset.len()
            )));
        }
        Ok(AffineSlice { offset, n })
    }

    pub fn d(&self) -> usize {
        self.offset.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn contains(&self, x: &[Elem]) -> bool {
        x.len() == self.n && x[..self.d()] == self.offset[..]
    }

    /// All q^{n−d} points.
    fn points(&self, field: &FieldSpec, budget: Budget) -> Result<Vec<Vec<Elem>>> {
        let free = self.n - self.d();
        let count = budget.check_pow("affine slice points", field.q() as u64, free as u64)?;
        Ok((0..count as usize)
            .map(|i| {
                let mut x = self.offset.clone();
                if free > 0 {
                    x.extend(index_vector(field, i, free));
                }
                x
            })
            .collect())
    }
}

/// E_{x ∈ F_q^n} 1_W(x) ω^{Tr(Q(x, z))}.
pub fn affine_quadratic_sum(
    field: &FieldSpec,
    slice: &AffineSlice,
    form: &QuadraticForm,
    z: &[Elem],
    budget: Budget,
) -> Result<Complex64> {
    if z.len() != slice.n {
        return Err(Error::usage(format!(
            "z has length {}, expected {}",
            z.len(),
            slice.n
        )));
    }
    let mut s = Complex64::new(0.0, 0.0);
    for x in slice.points(field, budget)? {
        s += field.trace_phase(form.eval(field, &x, z)?).to_complex();
    }
    Ok(s / (field.q() as f64).powi(slice.n as i32))
}

/// E_{x, y ∈ F_q^n} 1_{W1}(x) 1_{W2}(y) ω^{Tr(Q(x, y))}.
pub fn affine_quadratic_double_sum(
    field: &FieldSpec,
    w1: &AffineSlice,
    w2: &AffineSlice,
    form: &QuadraticForm,
    budget: Budget,
) -> Result<Complex64> {
    if w1.n != w2.n {
        return Err(Error::usage("slices live in different dimensions"));
    }
    let free = (w1.n - w1.d() + w2.n - w2.d()) as u64;
    budget.check_pow("pairs of slice points", field.q() as u64, free)?;
    let xs = w1.points(field, budget)?;
    let ys = w2.points(field, budget)?;
    let mut s = Complex64::new(0.0, 0.0);
    for x in &xs {
        for y in &ys {
            s += field.trace_phase(form.eval(field, x, y)?).to_complex();
        }
    }
    Ok(s / (field.q() as f64).powi(2 * w1.n as i32))
}

/// Outcome of checking max_r |ĝ(r)| against q^{d − n/2}.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FourierBoundReport {
    pub max_coeff: f64,
    pub bound: f64,
    pub slack: f64,
    pub pass: bool,
    pub tolerance: f64,
}

/// Checks |ĝ(r)| ≤ q^{d − n/2} for a function on F_q^n built from one on
/// F_q^d.
pub fn verify_fourier_bound(
    g: &RealFunction,
    d: usize,
    budget: Budget,
) -> Result<FourierBoundReport> {
    if d > g.n {
        return Err(Error::usage(format!("d = {d} exceeds n = {}", g.n)));
    }
    let t = transform_real(g, budget)?;
    let q = g.field.q() as f64;
    let bound = q.powf(d as f64 - g.n as f64 / 2.0);
    let max_coeff = t.max_abs();
    let tolerance = DEFAULT_TOLERANCE;
    Ok(FourierBoundReport {
        max_coeff,
        bound,
        slack: bound - max_coeff,
        pass: max_coeff <= bound + tolerance,
        tolerance,
    })
}
