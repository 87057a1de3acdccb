//! Exact arithmetic in F_q, q = p^κ.
//!
//! An element is encoded by the base-p integer of its polynomial
//! coefficients: c_0 + c_1 t + ... + c_{κ-1} t^{κ-1} has code
//! c_0 + c_1 p + ... + c_{κ-1} p^{κ-1}. For prime fields the code is the
//! residue. Elements of the prime subfield are exactly the codes below p.

mod extension;
pub(crate) mod poly;

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Neg};
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use extension::{ExtElem, ExtensionField};

/// Largest field order supported for κ > 1 (log/exp tables are dense).
pub const MAX_EXTENSION_ORDER: u32 = 1 << 20;

/// Largest prime supported for prime fields.
pub const MAX_PRIME: u32 = (1 << 31) - 1;

/// Built-in moduli: the least monic irreducible polynomial, ordering
/// candidates by the code of their non-leading coefficients.
const DEFAULT_MODULI: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (3, 2, &[1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (5, 2, &[2, 0, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (7, 2, &[1, 0, 1]),
];

/// A field element code. Arithmetic goes through the owning [`FieldSpec`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Elem(u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    /// Wraps a raw code. Range is not checked; use [`FieldSpec::elem`] for
    /// validated construction.
    pub const fn from_code(code: u32) -> Self {
        Elem(code)
    }

    pub const fn code(self) -> u32 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The exponent e of ω^e with ω = exp(2πi/p), kept exactly mod p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PhaseExponent {
    value: u32,
    p: u32,
}

impl PhaseExponent {
    pub fn new(value: u64, p: u32) -> Self {
        PhaseExponent {
            value: (value % p as u64) as u32,
            p,
        }
    }

    pub fn zero(p: u32) -> Self {
        PhaseExponent { value: 0, p }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.p
    }

    /// exp(2πi·e/p).
    pub fn to_complex(self) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * PI * self.value as f64 / self.p as f64)
    }

    /// cos(2π·e/p), the real part of [`Self::to_complex`].
    pub fn cos(self) -> f64 {
        (2.0 * PI * self.value as f64 / self.p as f64).cos()
    }
}

impl Add for PhaseExponent {
    type Output = PhaseExponent;

    fn add(self, rhs: Self) -> Self {
        debug_assert_eq!(self.p, rhs.p);
        PhaseExponent::new(self.value as u64 + rhs.value as u64, self.p)
    }
}

impl Neg for PhaseExponent {
    type Output = PhaseExponent;

    fn neg(self) -> Self {
        PhaseExponent::new((self.p - self.value) as u64, self.p)
    }
}

struct Inner {
    p: u32,
    kappa: u32,
    q: u32,
    /// c_0..c_κ, monic. `[0, 1]` for prime fields.
    modulus: Vec<u32>,
    /// Powers of a primitive element (κ > 1 only).
    exp: Vec<u32>,
    log: Vec<u32>,
    /// Tr(x) for every code x (κ > 1 only).
    trace: Vec<u32>,
}

/// The field F_q. Immutable and cheap to clone.
#[derive(Clone)]
pub struct FieldSpec(Arc<Inner>);

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p
                && self.0.kappa == other.0.kappa
                && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldSpec({})", self.config_line())
    }
}

impl FieldSpec {
    /// The prime field F_p.
    pub fn prime(p: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::domain(format!("{p} is not prime")));
        }
        if p > MAX_PRIME {
            return Err(Error::domain(format!(
                "prime {p} exceeds the supported width"
            )));
        }
        Ok(FieldSpec(Arc::new(Inner {
            p,
            kappa: 1,
            q: p,
            modulus: vec![0, 1],
            exp: Vec::new(),
            log: Vec::new(),
            trace: Vec::new(),
        })))
    }

    /// F_{p^κ} with the built-in modulus, or the least monic irreducible one
    /// when q is not in the table.
    pub fn new(p: u32, kappa: u32) -> Result<Self> {
        if kappa == 0 {
            return Err(Error::domain("κ must be positive"));
        }
        if kappa == 1 {
            return Self::prime(p);
        }
        if let Some((_, _, m)) = DEFAULT_MODULI
            .iter()
            .find(|(pp, kk, _)| *pp == p && *kk == kappa)
        {
            return Self::with_modulus(p, kappa, m);
        }
        let m = least_irreducible(p, kappa)?;
        Self::with_modulus(p, kappa, &m)
    }

    /// F_{p^κ} = F_p[t]/(modulus), with `modulus` given as c_0..c_κ.
    pub fn with_modulus(p: u32, kappa: u32, modulus: &[u32]) -> Result<Self> {
        if kappa == 1 && (modulus.is_empty() || modulus == [0, 1]) {
            return Self::prime(p);
        }
        let base = Self::prime(p)?;
        let q = (p as u64)
            .checked_pow(kappa)
            .filter(|&q| q <= MAX_EXTENSION_ORDER as u64)
            .ok_or_else(|| Error::domain(format!("{p}^{kappa} exceeds the supported width")))?
            as u32;
        if modulus.len() != kappa as usize + 1 {
            return Err(Error::domain(format!(
                "modulus must have {} coefficients, got {}",
                kappa + 1,
                modulus.len()
            )));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::domain("modulus coefficients must lie in [0, p)"));
        }
        if modulus[kappa as usize] != 1 {
            return Err(Error::domain("modulus must be monic"));
        }
        let m: Vec<Elem> = modulus.iter().map(|&c| Elem(c)).collect();
        if !poly::is_irreducible(&base, &m) {
            return Err(Error::domain(format!(
                "modulus {modulus:?} is reducible over F_{p}"
            )));
        }
        let mut inner = Inner {
            p,
            kappa,
            q,
            modulus: modulus.to_vec(),
            exp: Vec::new(),
            log: Vec::new(),
            trace: Vec::new(),
        };
        build_tables(&mut inner);
        Ok(FieldSpec(Arc::new(inner)))
    }

    /// Field for order `q`, which must be a prime power.
    pub fn of_order(q: u64) -> Result<Self> {
        let (p, kappa) =
            prime_power(q).ok_or_else(|| Error::domain(format!("{q} is not a prime power")))?;
        Self::new(p as u32, kappa)
    }

    /// Field of order `q`, optionally with an explicit modulus c_0..c_κ.
    pub fn from_order(q: u64, modulus: Option<&[u32]>) -> Result<Self> {
        let (p, kappa) =
            prime_power(q).ok_or_else(|| Error::domain(format!("{q} is not a prime power")))?;
        if p > MAX_PRIME as u64 {
            return Err(Error::domain(format!(
                "prime {p} exceeds the supported width"
            )));
        }
        match modulus {
            Some(m) => Self::with_modulus(p as u32, kappa, m),
            None => Self::new(p as u32, kappa),
        }
    }

    /// Parses `q=<p>^<kappa> [modulus=<c0,...,ck>]`; `q=<N>` is accepted for
    /// any prime power N.
    pub fn parse_config(line: &str) -> Result<Self> {
        let mut order: Option<(u64, u32)> = None;
        let mut modulus: Option<Vec<u32>> = None;
        for tok in line.split_whitespace() {
            let col = line.find(tok).unwrap_or(0) + 1;
            if let Some(v) = tok.strip_prefix("q=") {
                let parsed = if let Some((b, e)) = v.split_once('^') {
                    let b: u64 = b
                        .parse()
                        .map_err(|_| Error::parse(1, col, format!("bad prime `{b}`")))?;
                    let e: u32 = e
                        .parse()
                        .map_err(|_| Error::parse(1, col, format!("bad exponent `{e}`")))?;
                    if !is_prime(b) {
                        return Err(Error::parse(1, col, format!("{b} is not prime")));
                    }
                    (b, e)
                } else {
                    let n: u64 = v
                        .parse()
                        .map_err(|_| Error::parse(1, col, format!("bad field order `{v}`")))?;
                    prime_power(n)
                        .ok_or_else(|| Error::parse(1, col, format!("{n} is not a prime power")))?
                };
                order = Some(parsed);
            } else if let Some(v) = tok.strip_prefix("modulus=") {
                let coeffs = v
                    .split(',')
                    .map(|c| c.trim().parse::<u32>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| Error::parse(1, col, format!("bad modulus `{v}`")))?;
                modulus = Some(coeffs);
            } else {
                return Err(Error::parse(1, col, format!("unexpected token `{tok}`")));
            }
        }
        let (p, kappa) = order.ok_or_else(|| Error::parse(1, 1, "missing `q=` field config"))?;
        if kappa == 0 || p > MAX_PRIME as u64 {
            return Err(Error::parse(1, 1, "field order out of range"));
        }
        let built = match modulus {
            Some(m) => Self::with_modulus(p as u32, kappa, &m),
            None => Self::new(p as u32, kappa),
        };
        built.map_err(|e| match e {
            Error::Domain(msg) => Error::parse(1, 1, msg),
            other => other,
        })
    }

    /// Inverse of [`Self::parse_config`].
    pub fn config_line(&self) -> String {
        if self.0.kappa == 1 {
            format!("q={}^1", self.0.p)
        } else {
            let m: Vec<String> = self.0.modulus.iter().map(|c| c.to_string()).collect();
            format!("q={}^{} modulus={}", self.0.p, self.0.kappa, m.join(","))
        }
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn kappa(&self) -> u32 {
        self.0.kappa
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn is_odd(&self) -> bool {
        self.0.p != 2
    }

    /// Validated element from a code.
    pub fn elem(&self, code: u32) -> Result<Elem> {
        if code < self.0.q {
            Ok(Elem(code))
        } else {
            Err(Error::domain(format!(
                "code {code} out of range for F_{}",
                self.0.q
            )))
        }
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> Elem {
        Elem(v.rem_euclid(self.0.p as i64) as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.0.q).map(Elem)
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let p = self.0.p;
        if self.0.kappa == 1 {
            let s = a.0 as u64 + b.0 as u64;
            return Elem((s % p as u64) as u32);
        }
        if p == 2 {
            return Elem(a.0 ^ b.0);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.0.kappa {
            out += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place = place.wrapping_mul(p);
        }
        Elem(out)
    }

    pub fn neg(&self, a: Elem) -> Elem {
        let p = self.0.p;
        if self.0.kappa == 1 {
            return Elem((p - a.0) % p);
        }
        if p == 2 {
            return a;
        }
        let mut x = a.0;
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.0.kappa {
            out += ((p - x % p) % p) * place;
            x /= p;
            place = place.wrapping_mul(p);
        }
        Elem(out)
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if self.0.kappa == 1 {
            return Elem(((a.0 as u64 * b.0 as u64) % self.0.p as u64) as u32);
        }
        if a.is_zero() || b.is_zero() {
            return Elem::ZERO;
        }
        let order = self.0.q - 1;
        let e = (self.0.log[a.0 as usize] + self.0.log[b.0 as usize]) % order;
        Elem(self.0.exp[e as usize])
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::domain("inversion of zero"));
        }
        if self.0.kappa == 1 {
            return Ok(self.pow(a, self.0.p as u64 - 2));
        }
        let order = self.0.q - 1;
        let e = (order - self.0.log[a.0 as usize]) % order;
        Ok(Elem(self.0.exp[e as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut result = Elem::ONE;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(base, base);
            }
        }
        result
    }

    /// Tr(a) = Σ_{i<κ} a^{p^i}, an element of the prime subfield.
    pub fn trace(&self, a: Elem) -> Elem {
        if self.0.kappa == 1 {
            a
        } else {
            Elem(self.0.trace[a.0 as usize])
        }
    }

    /// ω^{Tr(a)} as an exact exponent.
    pub fn trace_phase(&self, a: Elem) -> PhaseExponent {
        PhaseExponent::new(self.trace(a).0 as u64, self.0.p)
    }

    /// Standard dot product on F_q^n.
    pub fn dot(&self, u: &[Elem], v: &[Elem]) -> Result<Elem> {
        if u.len() != v.len() {
            return Err(Error::usage(format!(
                "dot product of vectors with lengths {} and {}",
                u.len(),
                v.len()
            )));
        }
        Ok(u.iter()
            .zip(v)
            .fold(Elem::ZERO, |acc, (&a, &b)| self.add(acc, self.mul(a, b))))
    }

    /// Polynomial product modulo the field modulus, working on digits.
    #[cfg(test)]
    fn mul_slow(&self, a: Elem, b: Elem) -> Elem {
        Elem(mul_digits(&self.0, a.0, b.0))
    }
}

/// A spec-carrying element whose binary operations reject mixed fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElement {
    spec: FieldSpec,
    elem: Elem,
}

impl FieldElement {
    pub fn new(spec: &FieldSpec, code: u32) -> Result<Self> {
        Ok(FieldElement {
            elem: spec.elem(code)?,
            spec: spec.clone(),
        })
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn elem(&self) -> Elem {
        self.elem
    }

    pub fn code(&self) -> u32 {
        self.elem.0
    }

    fn same(&self, other: &Self) -> Result<()> {
        if self.spec == other.spec {
            Ok(())
        } else {
            Err(Error::usage(format!(
                "mixed fields: {} and {}",
                self.spec.config_line(),
                other.spec.config_line()
            )))
        }
    }

    fn wrap(&self, elem: Elem) -> Self {
        FieldElement {
            spec: self.spec.clone(),
            elem,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        Ok(self.wrap(self.spec.add(self.elem, other.elem)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        Ok(self.wrap(self.spec.sub(self.elem, other.elem)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        Ok(self.wrap(self.spec.mul(self.elem, other.elem)))
    }

    pub fn neg(&self) -> Self {
        self.wrap(self.spec.neg(self.elem))
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(self.wrap(self.spec.inv(self.elem)?))
    }

    pub fn pow(&self, e: u64) -> Self {
        self.wrap(self.spec.pow(self.elem, e))
    }

    pub fn trace(&self) -> Self {
        self.wrap(self.spec.trace(self.elem))
    }
}

fn mul_digits(inner: &Inner, a: u32, b: u32) -> u32 {
    let p = inner.p as u64;
    let k = inner.kappa as usize;
    let da = digits(a, inner.p, k);
    let db = digits(b, inner.p, k);
    let mut prod = vec![0u64; 2 * k - 1];
    for i in 0..k {
        for j in 0..k {
            prod[i + j] = (prod[i + j] + da[i] as u64 * db[j] as u64) % p;
        }
    }
    // Reduce with t^κ = -(c_0 + ... + c_{κ-1} t^{κ-1}).
    for deg in (k..prod.len()).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        prod[deg] = 0;
        for (i, &m) in inner.modulus.iter().enumerate().take(k) {
            let idx = deg - k + i;
            prod[idx] = (prod[idx] + (p - c) * m as u64) % p;
        }
    }
    let mut out = 0u64;
    for i in (0..k).rev() {
        out = out * p + prod[i];
    }
    out as u32
}

fn digits(mut x: u32, p: u32, k: usize) -> Vec<u32> {
    let mut d = Vec::with_capacity(k);
    for _ in 0..k {
        d.push(x % p);
        x /= p;
    }
    d
}

fn build_tables(inner: &mut Inner) {
    let q = inner.q;
    let order = q - 1;
    let mut exp = vec![0u32; order as usize];
    let mut log = vec![0u32; q as usize];
    'candidates: for g in 2..q {
        let mut x = 1u32;
        for i in 0..order {
            if i > 0 && x == 1 {
                continue 'candidates;
            }
            exp[i as usize] = x;
            x = mul_digits(inner, x, g);
        }
        if x != 1 {
            continue;
        }
        for (i, &v) in exp.iter().enumerate() {
            log[v as usize] = i as u32;
        }
        break;
    }
    inner.exp = exp;
    inner.log = log;

    // Tr(x) = x + x^p + ... + x^{p^{κ-1}}.
    let mut trace = vec![0u32; q as usize];
    for x in 1..q {
        let mut acc = 0u64;
        let lx = inner.log[x as usize] as u64;
        let mut pe = 1u64;
        for _ in 0..inner.kappa {
            let y = inner.exp[((lx * pe) % order as u64) as usize];
            // Each Frobenius image summed digit-wise; the total lies in F_p.
            acc = add_digits(acc as u32, y, inner.p, inner.kappa as usize) as u64;
            pe = (pe * inner.p as u64) % order as u64;
        }
        assert!(
            acc < inner.p as u64,
            "trace left the prime subfield; modulus is not irreducible"
        );
        trace[x as usize] = acc as u32;
    }
    inner.trace = trace;
}

fn add_digits(a: u32, b: u32, p: u32, k: usize) -> u32 {
    let (mut x, mut y) = (a, b);
    let mut out = 0u32;
    let mut place = 1u32;
    for _ in 0..k {
        out += ((x % p + y % p) % p) * place;
        x /= p;
        y /= p;
        place = place.wrapping_mul(p);
    }
    out
}

fn least_irreducible(p: u32, kappa: u32) -> Result<Vec<u32>> {
    let base = FieldSpec::prime(p)?;
    let count = (p as u64)
        .checked_pow(kappa)
        .filter(|&q| q <= MAX_EXTENSION_ORDER as u64)
        .ok_or_else(|| Error::domain(format!("{p}^{kappa} exceeds the supported width")))?;
    for code in 0..count {
        let mut c = code;
        let mut m = Vec::with_capacity(kappa as usize + 1);
        for _ in 0..kappa {
            m.push((c % p as u64) as u32);
            c /= p as u64;
        }
        m.push(1);
        let polyn: Vec<Elem> = m.iter().map(|&v| Elem(v)).collect();
        if poly::is_irreducible(&base, &polyn) {
            return Ok(m);
        }
    }
    Err(Error::Construction(format!(
        "no irreducible polynomial of degree {kappa} over F_{p}"
    )))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `n = p^κ` with p prime, if it is one.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= n && !n.is_multiple_of(p) {
        p += 1;
    }
    if !n.is_multiple_of(p) {
        p = n;
    }
    let mut m = n;
    let mut k = 0u32;
    while m.is_multiple_of(p) {
        m /= p;
        k += 1;
    }
    (m == 1).then_some((p, k))
}
