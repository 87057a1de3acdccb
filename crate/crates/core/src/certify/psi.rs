//! The three-valued function ψ on F_q^d and the exact value of Λ_L(ψ) for
//! (2×4)-systems with s(L) = 3.
//!
//! ψ(y) is 0 when y has at least two zero coordinates, α when it has none
//! and β = −α(q−1)/d when it has exactly one, which makes ψ balanced.

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::budget::Budget;
use crate::density::FunctionTable;
use crate::error::{Error, Result};
use crate::gf::{Elem, ExtensionField, FieldSpec};
use crate::rational;

/// Above this many bits for m_4^d the exact Λ is not expanded; negativity is
/// decided on the factored form instead, which is equivalent.
const EXACT_EXPANSION_BITS: u64 = 1 << 20;

/// Parameters of ψ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiSpec {
    field: FieldSpec,
    d: usize,
    alpha: BigRational,
    beta: BigRational,
}

impl PsiSpec {
    pub fn new(field: &FieldSpec, d: usize, alpha: BigRational) -> Result<Self> {
        if !field.is_odd() {
            return Err(Error::domain("ψ is defined for odd q only"));
        }
        if d == 0 {
            return Err(Error::usage("ψ needs d ≥ 1"));
        }
        if alpha.is_zero() || alpha.abs() > rational::from_ints(1, 4) {
            return Err(Error::usage("ψ needs 0 < |α| ≤ 1/4"));
        }
        let beta = beta_for(field.q() as u64, d as u64, &alpha);
        Ok(PsiSpec {
            field: field.clone(),
            d,
            alpha,
            beta,
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn alpha(&self) -> &BigRational {
        &self.alpha
    }

    pub fn beta(&self) -> &BigRational {
        &self.beta
    }

    /// Whether every value lies in [−1/4, 1/4]. Small d can violate this;
    /// the closed form does not depend on it.
    pub fn in_quarter_range(&self) -> bool {
        let quarter = rational::from_ints(1, 4);
        self.alpha.abs() <= quarter && self.beta.abs() <= quarter
    }

    pub fn value(&self, y: &[Elem]) -> BigRational {
        match y.iter().filter(|c| c.is_zero()).count() {
            0 => self.alpha.clone(),
            1 => self.beta.clone(),
            _ => BigRational::zero(),
        }
    }
}

fn beta_for(q: u64, d: u64, alpha: &BigRational) -> BigRational {
    -alpha * BigRational::new(BigInt::from(q - 1), BigInt::from(d))
}

pub fn psi_table(spec: &PsiSpec, budget: Budget) -> Result<FunctionTable> {
    FunctionTable::from_fn(&spec.field, spec.d, budget, |y| spec.value(y))
}

fn check_q(q: u64) -> Result<()> {
    if q.is_multiple_of(2) {
        return Err(Error::domain(format!("q = {q} is even")));
    }
    if q <= 3 {
        return Err(Error::domain(format!(
            "q = {q}: (q−1)(q−3) must be positive for the closed form"
        )));
    }
    Ok(())
}

fn big(n: u64) -> BigInt {
    BigInt::from(n)
}

fn falling(d: &BigInt, l: u32) -> BigInt {
    (0..l).fold(BigInt::one(), |acc, i| acc * (d - BigInt::from(i)))
}

/// Λ_L(ψ) for every (2×4)-system with s(L) = 3:
/// q^{−2d}(d m_4^{d−1} β^4 + Σ_ℓ C(4,ℓ) (d)_ℓ (q−1)^ℓ m_4^{d−ℓ} α^{4−ℓ} β^ℓ).
pub fn psi_lambda_closed_form(q: u64, d: u64, alpha: &BigRational) -> Result<BigRational> {
    check_q(q)?;
    if d == 0 {
        return Err(Error::usage("ψ needs d ≥ 1"));
    }
    let m4 = big((q - 1) * (q - 3));
    let beta = beta_for(q, d, alpha);
    let db = big(d);
    let pow_m4 = |e: u64| BigRational::from_integer(num_traits::pow(m4.clone(), e as usize));
    let mut total =
        BigRational::from_integer(db.clone()) * pow_m4(d - 1) * num_traits::pow(beta.clone(), 4);
    for l in 0..=4u32 {
        if l as u64 > d {
            break;
        }
        let coeff = binomial(big(4), big(l as u64))
            * falling(&db, l)
            * num_traits::pow(big(q - 1), l as usize);
        total += BigRational::from_integer(coeff)
            * pow_m4(d - l as u64)
            * num_traits::pow(alpha.clone(), 4 - l as usize)
            * num_traits::pow(beta.clone(), l as usize);
    }
    let q2d = num_traits::pow(big(q), 2 * d as usize);
    Ok(total / BigRational::from_integer(q2d))
}

/// ν = (m_4/q²)^d (α/(q−3))^4.
pub fn psi_nu(q: u64, d: u64, alpha: &BigRational) -> Result<BigRational> {
    check_q(q)?;
    let ratio = BigRational::new(big((q - 1) * (q - 3)), big(q * q));
    let a = alpha / BigRational::from_integer(big(q - 3));
    Ok(num_traits::pow(ratio, d as usize) * num_traits::pow(a, 4))
}

/// The bracket b(q, d) with Λ_L(ψ) = (m_4/q²)^d α^4 · b(q, d):
/// (q−1)^3/((q−3)d^3) + Σ_ℓ C(4,ℓ)(−1)^ℓ (d)_ℓ/d^ℓ ((q−1)/(q−3))^ℓ.
/// Works for arbitrarily large q and d.
pub fn psi_bracket(q: &BigInt, d: &BigInt) -> BigRational {
    let one = BigInt::one();
    let qm1 = q - &one;
    let qm3 = q - BigInt::from(3);
    let mut b = BigRational::new(
        num_traits::pow(qm1.clone(), 3),
        &qm3 * num_traits::pow(d.clone(), 3),
    );
    let ratio = BigRational::new(qm1, qm3);
    for l in 0..=4u32 {
        if BigInt::from(l) > *d {
            break;
        }
        let sign = if l % 2 == 0 {
            BigInt::one()
        } else {
            -BigInt::one()
        };
        let term = BigRational::new(
            sign * binomial(BigInt::from(4), BigInt::from(l)) * falling(d, l),
            num_traits::pow(d.clone(), l as usize),
        ) * num_traits::pow(ratio.clone(), l as usize);
        b += term;
    }
    b
}

/// How the negativity of Λ_L(ψ) was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PsiRoute {
    /// ψ over F_q itself (q ≥ 40).
    Direct,
    /// ψ over F_{q^6}, pulled back to F_q^{6d} along an F_q-linear
    /// isomorphism F_q^{6d} → (F_{q^6})^d.
    Lift,
}

/// Evidence that Λ_L(ψ) < −ν for every (2×4)-system over F_q with s = 3.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PsiNegativityReport {
    pub q: u64,
    pub route: PsiRoute,
    /// Order of the field ψ lives on.
    pub working_q: String,
    /// Dimension of ψ's domain over the working field, (q' − 3)².
    pub d: String,
    /// Dimension over F_q of the pulled-back witness.
    pub dimension_over_q: String,
    pub alpha: String,
    /// Factored form b with Λ = (m_4/q'²)^d α^4 b.
    pub bracket: String,
    /// −1/(q'−3)^4: Λ < −ν exactly when b is below this.
    pub threshold: String,
    /// Exact Λ and ν when small enough to expand.
    pub lambda: Option<String>,
    pub nu: Option<String>,
    /// Modulus c_0..c_6 of F_{q^6} over F_q (lift route).
    pub extension_modulus: Option<Vec<u32>>,
    pub certified: bool,
}

/// Certifies Λ_L(ψ) < −ν at d = (q'−3)² and α = 1/4, where q' = q for
/// q ≥ 40 and q' = q^6 otherwise.
pub fn psi_negativity_certificate(field: &FieldSpec) -> Result<PsiNegativityReport> {
    if !field.is_odd() {
        return Err(Error::domain(format!("q = {} is even", field.q())));
    }
    let q = field.q() as u64;
    let alpha = rational::from_ints(1, 4);
    let (route, working_q, extension_modulus) = if q >= 40 {
        (PsiRoute::Direct, BigInt::from(q), None)
    } else {
        let ext = ExtensionField::new(field, 6)?;
        let modulus = ext.modulus().iter().map(|e| e.code()).collect();
        (PsiRoute::Lift, BigInt::from(ext.order()), Some(modulus))
    };
    let qm3 = &working_q - BigInt::from(3);
    let d = &qm3 * &qm3;
    let bracket = psi_bracket(&working_q, &d);
    let threshold = -BigRational::new(BigInt::one(), num_traits::pow(qm3.clone(), 4));
    let certified = bracket < threshold;

    let mut lambda = None;
    let mut nu = None;
    if route == PsiRoute::Direct {
        let d64: u64 = d.clone().try_into().expect("d fits for 32-bit q");
        let m4_bits = BigUint::from((q - 1) * (q - 3)).bits();
        if d64.saturating_mul(m4_bits) <= EXACT_EXPANSION_BITS {
            let l = psi_lambda_closed_form(q, d64, &alpha)?;
            let v = psi_nu(q, d64, &alpha)?;
            debug_assert_eq!(l < -v.clone(), certified);
            lambda = Some(rational::format(&l));
            nu = Some(rational::format(&v));
        }
    }
    let dimension_over_q = match route {
        PsiRoute::Direct => d.clone(),
        PsiRoute::Lift => &d * BigInt::from(6),
    };
    Ok(PsiNegativityReport {
        q,
        route,
        working_q: working_q.to_string(),
        d: d.to_string(),
        dimension_over_q: dimension_over_q.to_string(),
        alpha: rational::format(&alpha),
        bracket: rational::format(&bracket),
        threshold: rational::format(&threshold),
        lambda,
        nu,
        extension_modulus,
        certified,
    })
}

/// Least d ≤ `max_d` at which Λ_L(ψ) is negative. The sign does not depend
/// on α.
pub fn least_negative_dimension(q: u64, max_d: u64) -> Result<Option<u64>> {
    check_q(q)?;
    for d in 1..=max_d {
        if psi_bracket(&BigInt::from(q), &BigInt::from(d)).is_negative() {
            return Ok(Some(d));
        }
    }
    Ok(None)
}
