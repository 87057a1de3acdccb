//! The twist G(x) = (1/t) f†(x) Σ_j cos(2π Tr(α_j x·x)/p) of a function f on
//! F_q^d extended to F_q^n by f†(x) = f(x_1, …, x_d), together with the
//! quadratic-form bookkeeping that predicts Λ_L(G) for (2×4)-systems.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::budget::{pow_big, Budget};
use crate::density::{self, FunctionTable};
use crate::error::{Error, Result};
use crate::fourier::{QuadraticForm, RealFunction, DEFAULT_TOLERANCE};
use crate::gf::{Elem, FieldSpec};
use crate::linsys::{index_vector, matrix, LinearSystem};
use crate::rational;

/// Default snapping precision of ψ*: values are rounded to multiples of
/// 2^{−40}.
pub const DEFAULT_SNAP_BITS: u32 = 40;

/// Parameters of the twist.
#[derive(Clone, Debug)]
pub struct GowersSpec {
    pub alpha: Vec<Elem>,
    pub base: FunctionTable,
    pub n: usize,
}

impl GowersSpec {
    pub fn new(alpha: Vec<Elem>, base: FunctionTable, n: usize) -> Result<Self> {
        let field = base.field();
        if !field.is_odd() {
            return Err(Error::domain("the twist is defined for odd q only"));
        }
        if alpha.is_empty() || alpha.iter().any(|a| a.is_zero()) {
            return Err(Error::usage("twist parameters α_j must all be nonzero"));
        }
        if let Some(a) = alpha.iter().find(|a| a.code() >= field.q()) {
            return Err(Error::domain(format!(
                "α = {} is not in F_{}",
                a.code(),
                field.q()
            )));
        }
        if n < base.d() {
            return Err(Error::usage(format!("n = {n} is below d = {}", base.d())));
        }
        Ok(GowersSpec { alpha, base, n })
    }

    pub fn t(&self) -> usize {
        self.alpha.len()
    }
}

/// f† as an exact table on F_q^n.
pub fn extend(f: &FunctionTable, n: usize, budget: Budget) -> Result<FunctionTable> {
    if n < f.d() {
        return Err(Error::usage(format!("n = {n} is below d = {}", f.d())));
    }
    let len = density::table_len(f.field(), n, budget)?;
    let block = len / f.len();
    let values = (0..len).map(|i| f.value(i / block).clone()).collect();
    FunctionTable::new(f.field(), n, values)
}

/// G_n^α[f] on F_q^n.
pub fn gowers_twist(spec: &GowersSpec, budget: Budget) -> Result<RealFunction> {
    let field = spec.base.field();
    let len = density::table_len(field, spec.n, budget)?;
    let block = len / spec.base.len();
    let base: Vec<f64> = spec.base.values().iter().map(rational::to_f64).collect();
    let t = spec.t() as f64;
    let values = (0..len)
        .into_par_iter()
        .map(|i| {
            let fv = base[i / block];
            if fv == 0.0 {
                return 0.0;
            }
            let x = index_vector(field, i, spec.n);
            let xx = field.dot(&x, &x).expect("same length");
            let s: f64 = spec
                .alpha
                .iter()
                .map(|&a| field.trace_phase(field.mul(a, xx)).cos())
                .sum();
            fv * s / t
        })
        .collect();
    RealFunction::new(field, spec.n, values)
}

/// ψ* = G − mean(G), with G snapped to multiples of 2^{−bits} first so that
/// the result is an exactly balanced rational table.
pub fn psi_star(g: &RealFunction, bits: u32) -> Result<FunctionTable> {
    if bits > 60 {
        return Err(Error::usage("snap precision is limited to 60 bits"));
    }
    let scale = (1u64 << bits) as f64;
    let den = BigInt::from(1u64 << bits);
    let snapped: Vec<BigRational> = g
        .values()
        .iter()
        .map(|v| {
            let n = (v * scale).round().to_i64().unwrap_or(0);
            BigRational::new(BigInt::from(n), den.clone())
        })
        .collect();
    let snapped = FunctionTable::new(g.field(), g.n(), snapped)?;
    let mean = snapped.mean();
    Ok(snapped.map(|v| v - &mean))
}

/// x_u = a_1 x + a_2 y, x_v = b_1 x + b_2 y with x = x_{perm[0]},
/// y = x_{perm[1]}, u = perm[2], v = perm[3].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Parametrization {
    pub perm: [usize; 4],
    #[serde(serialize_with = "ser_pair")]
    pub a: (Elem, Elem),
    #[serde(serialize_with = "ser_pair")]
    pub b: (Elem, Elem),
}

fn ser_pair<S: serde::Serializer>(p: &(Elem, Elem), s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::Serialize;
    [p.0.code(), p.1.code()].serialize(s)
}

impl Parametrization {
    /// Coefficient pairs (u_i, v_i) with x_{perm[i]} = u_i x + v_i y.
    pub fn linear_forms(&self) -> [(Elem, Elem); 4] {
        [
            (Elem::ONE, Elem::ZERO),
            (Elem::ZERO, Elem::ONE),
            self.a,
            self.b,
        ]
    }
}

fn check_two_by_four(l: &LinearSystem) -> Result<()> {
    if l.m() != 2 || l.k() != 4 {
        return Err(Error::usage(format!(
            "expected a (2×4)-system, got ({}×{})",
            l.m(),
            l.k()
        )));
    }
    Ok(())
}

/// Writes sol(L) as {(x, y, a_1x + a_2y, b_1x + b_2y)} after the least
/// column permutation that makes this possible.
pub fn parametrize(l: &LinearSystem) -> Result<Parametrization> {
    check_two_by_four(l)?;
    let field = l.field();
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    for (i, j) in pairs {
        let rest: Vec<usize> = (0..4).filter(|&c| c != i && c != j).collect();
        let (u, v) = (rest[0], rest[1]);
        let m = matrix::select_columns(l.rows(), &[u, v]);
        let det = field.sub(field.mul(m[0][0], m[1][1]), field.mul(m[0][1], m[1][0]));
        if det.is_zero() {
            continue;
        }
        let inv = field.inv(det)?;
        // M_uv^{-1} = inv · [[m11, −m01], [−m10, m00]].
        let minv = [
            [field.mul(inv, m[1][1]), field.mul(inv, field.neg(m[0][1]))],
            [field.mul(inv, field.neg(m[1][0])), field.mul(inv, m[0][0])],
        ];
        let rows = l.rows();
        // [x_u; x_v] = −M_uv^{-1} M_ij [x; y].
        let coef = |r: usize, c: usize| {
            let col = [i, j][c];
            let s = field.add(
                field.mul(minv[r][0], rows[0][col]),
                field.mul(minv[r][1], rows[1][col]),
            );
            field.neg(s)
        };
        return Ok(Parametrization {
            perm: [i, j, u, v],
            a: (coef(0, 0), coef(0, 1)),
            b: (coef(1, 0), coef(1, 1)),
        });
    }
    unreachable!("a rank-2 system has two independent columns")
}

/// Coefficients (A, B, C) of Σ_i β_i |u_i x + v_i y|² as
/// A|x|² + B x·y + C|y|².
pub fn form_of(field: &FieldSpec, param: &Parametrization, betas: &[Elem; 4]) -> QuadraticForm {
    let mut a = Elem::ZERO;
    let mut b = Elem::ZERO;
    let mut c = Elem::ZERO;
    let two = field.from_int(2);
    for (&beta, (u, v)) in betas.iter().zip(param.linear_forms()) {
        a = field.add(a, field.mul(beta, field.mul(u, u)));
        b = field.add(b, field.mul(beta, field.mul(two, field.mul(u, v))));
        c = field.add(c, field.mul(beta, field.mul(v, v)));
    }
    QuadraticForm::new(a, b, c)
}

/// The α of the twist for a (2×4)-system L* with s(L*) = 3, in the
/// variable order of `parametrize(L*)`. Its quadratic form vanishes.
pub fn derive_alpha(l: &LinearSystem, budget: Budget) -> Result<[Elem; 4]> {
    check_two_by_four(l)?;
    let field = l.field();
    if !field.is_odd() {
        return Err(Error::domain("the twist is defined for odd q only"));
    }
    let s = l.s(budget)?;
    if s != 3 {
        return Err(Error::usage(format!(
            "derive_alpha needs s(L) = 3, got {s}"
        )));
    }
    let p = parametrize(l)?;
    let f = field;
    let ((a1, a2), (b1, b2)) = (p.a, p.b);
    let det = f.sub(f.mul(a1, b2), f.mul(a2, b1));
    // Solved from the |x|², x·y and |y|² coefficients of Q with α_4 = 1.
    let alpha1 = f.mul(f.mul(b1, f.inv(a2)?), det);
    let alpha2 = f.mul(f.mul(f.inv(a1)?, b2), f.neg(det));
    let alpha3 = f.neg(f.mul(f.mul(b1, b2), f.inv(f.mul(a1, a2))?));
    Ok([alpha1, alpha2, alpha3, Elem::ONE])
}

/// K_L and the number of terms in the expansion of Λ_L(G).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct QuadraticTermSummary {
    /// Terms whose quadratic form vanishes identically.
    pub k_l: u64,
    /// (2t)^4.
    pub total_terms: u64,
}

/// Counts the choices β ∈ {±α_1, …, ±α_t}^4 whose form vanishes.
pub fn quadratic_terms(l: &LinearSystem, alpha: &[Elem]) -> Result<QuadraticTermSummary> {
    check_two_by_four(l)?;
    if alpha.is_empty() {
        return Err(Error::usage("need at least one α"));
    }
    let field = l.field();
    let param = parametrize(l)?;
    let choices: Vec<Elem> = alpha.iter().flat_map(|&a| [a, field.neg(a)]).collect();
    let c = choices.len();
    let total = (c as u64).pow(4);
    let mut k_l = 0;
    for code in 0..total as usize {
        let betas = [
            choices[code % c],
            choices[code / c % c],
            choices[code / (c * c) % c],
            choices[code / (c * c * c)],
        ];
        if form_of(field, &param, &betas).is_zero() {
            k_l += 1;
        }
    }
    Ok(QuadraticTermSummary {
        k_l,
        total_terms: total,
    })
}

/// Whether Tr(Q(x, y)) = 0 for all x, y ∈ F_q^n (exhaustive).
pub fn trace_vanishes_identically(
    field: &FieldSpec,
    form: &QuadraticForm,
    n: usize,
    budget: Budget,
) -> Result<bool> {
    let len = density::table_len(field, n, budget)?;
    budget.check("pairs of vectors", &pow_big(len as u64, 2))?;
    let vecs: Vec<Vec<Elem>> = (0..len).map(|i| index_vector(field, i, n)).collect();
    for x in &vecs {
        for y in &vecs {
            if !field.trace(form.eval(field, x, y)?).is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Λ_L(g) in floating point, summed in a fixed order.
pub fn lambda_real(l: &LinearSystem, g: &RealFunction, budget: Budget) -> Result<f64> {
    if g.field() != l.field() {
        return Err(Error::usage(
            "function and system are over different fields",
        ));
    }
    let space = l.solutions(g.n(), budget)?;
    let values = g.values();
    let partial: Vec<f64> = (0..space.parts())
        .into_par_iter()
        .map(|part| {
            let mut s = 0.0;
            space.for_each_in_part(part, &mut |t| {
                s += t.iter().map(|&i| values[i]).product::<f64>();
            });
            s
        })
        .collect();
    Ok(partial.iter().sum::<f64>() / space.count() as f64)
}

/// Both sides of |Λ_L(G) − (2t)^{−4} K_L Λ_L(f)| ≤ 16 q^{2d − n/2}.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GowersCheckReport {
    pub lambda_twisted: f64,
    pub lambda_base: String,
    pub k_l: u64,
    pub total_terms: u64,
    pub predicted: f64,
    pub difference: f64,
    pub bound: f64,
    pub slack: f64,
    pub pass: bool,
    pub tolerance: f64,
}

pub fn lemma_gowers_check(
    l: &LinearSystem,
    f: &FunctionTable,
    alpha: &[Elem],
    n: usize,
    budget: Budget,
) -> Result<GowersCheckReport> {
    check_two_by_four(l)?;
    let spec = GowersSpec::new(alpha.to_vec(), f.clone(), n)?;
    let g = gowers_twist(&spec, budget)?;
    let lambda_twisted = lambda_real(l, &g, budget)?;
    let terms = quadratic_terms(l, alpha)?;
    let lambda_base = if f.values().iter().all(|v| v.is_zero()) {
        BigRational::zero()
    } else {
        density::lambda(l, f, budget)?
    };
    let predicted = terms.k_l as f64 * rational::to_f64(&lambda_base) / terms.total_terms as f64;
    let difference = (lambda_twisted - predicted).abs();
    let q = l.field().q() as f64;
    let bound = 16.0 * q.powf(2.0 * f.d() as f64 - n as f64 / 2.0);
    Ok(GowersCheckReport {
        lambda_twisted,
        lambda_base: rational::format(&lambda_base),
        k_l: terms.k_l,
        total_terms: terms.total_terms,
        predicted,
        difference,
        bound,
        slack: bound - difference,
        pass: difference <= bound + DEFAULT_TOLERANCE,
        tolerance: DEFAULT_TOLERANCE,
    })
}
