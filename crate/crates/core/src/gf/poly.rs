//! Dense univariate polynomials over a [`FieldSpec`], coefficients stored
//! low degree first. Only what irreducibility testing and extension
//! arithmetic need.

use super::{Elem, FieldSpec};

pub(crate) fn trim(mut a: Vec<Elem>) -> Vec<Elem> {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

pub(crate) fn degree(a: &[Elem]) -> Option<usize> {
    a.iter().rposition(|c| !c.is_zero())
}

pub(crate) fn sub(f: &FieldSpec, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let len = a.len().max(b.len());
    let out = (0..len)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(Elem::ZERO);
            let y = b.get(i).copied().unwrap_or(Elem::ZERO);
            f.sub(x, y)
        })
        .collect();
    trim(out)
}

pub(crate) fn mul(f: &FieldSpec, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Elem::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(out)
}

/// Remainder of `a` modulo `m`; `m` must be nonzero.
pub(crate) fn rem(f: &FieldSpec, a: &[Elem], m: &[Elem]) -> Vec<Elem> {
    let dm = degree(m).expect("division by the zero polynomial");
    let lead_inv = f.inv(m[dm]).expect("nonzero leading coefficient");
    let mut r = trim(a.to_vec());
    while let Some(dr) = degree(&r) {
        if dr < dm {
            break;
        }
        let c = f.mul(r[dr], lead_inv);
        let shift = dr - dm;
        for (i, &mi) in m.iter().enumerate().take(dm + 1) {
            r[shift + i] = f.sub(r[shift + i], f.mul(c, mi));
        }
        r = trim(r);
    }
    r
}

pub(crate) fn mulmod(f: &FieldSpec, a: &[Elem], b: &[Elem], m: &[Elem]) -> Vec<Elem> {
    rem(f, &mul(f, a, b), m)
}

pub(crate) fn powmod(f: &FieldSpec, base: &[Elem], mut e: u64, m: &[Elem]) -> Vec<Elem> {
    let mut result = vec![Elem::ONE];
    let mut b = rem(f, base, m);
    while e > 0 {
        if e & 1 == 1 {
            result = mulmod(f, &result, &b, m);
        }
        e >>= 1;
        if e > 0 {
            b = mulmod(f, &b, &b, m);
        }
    }
    rem(f, &result, m)
}

pub(crate) fn gcd(f: &FieldSpec, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    x
}

/// Ben-Or irreducibility test: `m` of degree `r` is irreducible over F_q iff
/// gcd(x^{q^i} - x, m) = 1 for every 1 <= i <= r/2.
pub(crate) fn is_irreducible(f: &FieldSpec, m: &[Elem]) -> bool {
    let Some(r) = degree(m) else { return false };
    if r == 0 {
        return false;
    }
    if r == 1 {
        return true;
    }
    let x = vec![Elem::ZERO, Elem::ONE];
    let mut h = x.clone();
    for _ in 1..=r / 2 {
        h = powmod(f, &h, f.q() as u64, m);
        let g = gcd(f, &sub(f, &h, &x), m);
        if degree(&g) != Some(0) {
            return false;
        }
    }
    true
}
