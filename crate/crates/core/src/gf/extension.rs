//! F_{q^r} built as F_q[u]/(g(u)) over an existing field, together with the
//! F_q-linear identification h: F_q^{r·d} -> (F_{q^r})^d.

use super::{poly, Elem, FieldSpec};
use crate::error::{Error, Result};

/// Maximum number of candidate polynomials tried when searching for an
/// irreducible modulus.
const SEARCH_LIMIT: u64 = 1_000_000;

/// An element of F_{q^r}: r coordinates over F_q, low degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtElem(Vec<Elem>);

impl ExtElem {
    pub fn coords(&self) -> &[Elem] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }
}

#[derive(Clone, Debug)]
pub struct ExtensionField {
    base: FieldSpec,
    degree: usize,
    /// g_0..g_r, monic and irreducible over the base field.
    modulus: Vec<Elem>,
}

impl ExtensionField {
    /// Builds F_{q^r} over `base` with the least monic irreducible modulus of
    /// degree `r` (ordered by the base-q code of g_0..g_{r-1}).
    pub fn new(base: &FieldSpec, r: usize) -> Result<Self> {
        if r < 2 {
            return Err(Error::usage("extension degree must be at least 2"));
        }
        let q = base.q() as u64;
        let total = q.checked_pow(r as u32).unwrap_or(u64::MAX);
        for code in 0..total.min(SEARCH_LIMIT) {
            let mut c = code;
            let mut m = Vec::with_capacity(r + 1);
            for _ in 0..r {
                m.push(Elem::from_code((c % q) as u32));
                c /= q;
            }
            m.push(Elem::ONE);
            // A root in F_q rules the candidate out cheaply.
            if m[0].is_zero() {
                continue;
            }
            if poly::is_irreducible(base, &m) {
                return Ok(ExtensionField {
                    base: base.clone(),
                    degree: r,
                    modulus: m,
                });
            }
        }
        Err(Error::Construction(format!(
            "no irreducible polynomial of degree {r} over F_{q} within {SEARCH_LIMIT} candidates"
        )))
    }

    pub fn base(&self) -> &FieldSpec {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[Elem] {
        &self.modulus
    }

    /// q^r.
    pub fn order(&self) -> u128 {
        (self.base.q() as u128).pow(self.degree as u32)
    }

    pub fn zero(&self) -> ExtElem {
        ExtElem(vec![Elem::ZERO; self.degree])
    }

    pub fn one(&self) -> ExtElem {
        let mut v = vec![Elem::ZERO; self.degree];
        v[0] = Elem::ONE;
        ExtElem(v)
    }

    pub fn from_coords(&self, coords: &[Elem]) -> Result<ExtElem> {
        if coords.len() != self.degree {
            return Err(Error::usage(format!(
                "expected {} coordinates, got {}",
                self.degree,
                coords.len()
            )));
        }
        Ok(ExtElem(coords.to_vec()))
    }

    /// The element with base-q code `code`.
    pub fn from_code(&self, mut code: u128) -> ExtElem {
        let q = self.base.q() as u128;
        let mut v = Vec::with_capacity(self.degree);
        for _ in 0..self.degree {
            v.push(Elem::from_code((code % q) as u32));
            code /= q;
        }
        ExtElem(v)
    }

    pub fn code(&self, x: &ExtElem) -> u128 {
        let q = self.base.q() as u128;
        x.0.iter()
            .rev()
            .fold(0u128, |acc, c| acc * q + c.code() as u128)
    }

    pub fn add(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        ExtElem(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| self.base.add(x, y))
                .collect(),
        )
    }

    /// Multiplication by a base-field scalar.
    pub fn scale(&self, c: Elem, a: &ExtElem) -> ExtElem {
        ExtElem(a.0.iter().map(|&x| self.base.mul(c, x)).collect())
    }

    pub fn mul(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        let r = poly::mulmod(&self.base, &a.0, &b.0, &self.modulus);
        let mut v = r;
        v.resize(self.degree, Elem::ZERO);
        ExtElem(v)
    }

    /// h: F_q^{r·d} -> (F_{q^r})^d, grouping consecutive blocks of r
    /// coordinates into one extension element.
    pub fn lift(&self, x: &[Elem]) -> Result<Vec<ExtElem>> {
        if !x.len().is_multiple_of(self.degree) {
            return Err(Error::usage(format!(
                "vector length {} is not a multiple of {}",
                x.len(),
                self.degree
            )));
        }
        Ok(x.chunks(self.degree).map(|c| ExtElem(c.to_vec())).collect())
    }

    /// h^{-1}.
    pub fn lower(&self, y: &[ExtElem]) -> Vec<Elem> {
        y.iter().flat_map(|e| e.0.iter().copied()).collect()
    }
}
