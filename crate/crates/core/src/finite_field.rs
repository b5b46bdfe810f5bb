//! Exact arithmetic in GF(p^m).
//!
//! An element is stored as its radix-p index: the residue
//! `c_0 + c_1 x + ... + c_{m-1} x^{m-1}` modulo the field's modulus is the
//! integer `c_0 + c_1 p + ... + c_{m-1} p^{m-1}`. That integer is also the
//! wire format. Multiplication runs through discrete log tables built once
//! when the field is constructed.
//!
//! The modulus is the monic irreducible polynomial of degree `m` whose lower
//! coefficients have the smallest radix-p encoding, and the generator is the
//! smallest-index element of multiplicative order `p^m - 1`. Both are fixed so
//! that point orders and share files reproduce bit for bit.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field order accepted by [`make_field`].
pub const DEFAULT_ORDER_CAP: u64 = 1 << 20;

#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The field GF(p^m) together with its arithmetic tables.
pub struct FieldSpec {
    p: u32,
    m: u32,
    order: u32,
    modulus: Vec<u32>,
    generator: FieldElement,
    // exp[k] = g^k for k in 0..2(order-1), doubled so products never wrap.
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// Serializable description of a field: enough to rebuild it and check it
/// matches.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSummary {
    pub p: u32,
    pub m: u32,
    pub modulus: Vec<u32>,
    pub generator: u32,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .field("generator", &self.generator)
            .finish()
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Writes `q = p^a` with `p` prime, if possible.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut rest = q;
    let mut a = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        a += 1;
    }
    (rest == 1).then_some((p, a))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn make_field(p: u64, m: u32) -> Result<FieldSpec> {
    make_field_with_cap(p, m, DEFAULT_ORDER_CAP)
}

pub fn make_field_with_cap(p: u64, m: u32, cap: u64) -> Result<FieldSpec> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if m == 0 {
        return Err(Error::InvalidCurve("field degree must be positive".into()));
    }
    let order = (p as u128).checked_pow(m).unwrap_or(u128::MAX);
    if order > cap as u128 {
        return Err(Error::FieldTooLarge { order, cap });
    }
    let p = p as u32;
    let order = order as u32;
    let modulus = canonical_modulus(p, m);
    let raw = RawField { p, m, modulus: &modulus };

    let group = (order - 1) as u64;
    let factors = prime_factors(group);
    let generator = (1..order)
        .find(|&g| factors.iter().all(|&r| raw.pow(g, group / r) != 1))
        .expect("a finite field has a primitive element");

    let mut exp = vec![0u32; 2 * (order as usize - 1)];
    let mut log = vec![0u32; order as usize];
    let mut acc = 1u32;
    for k in 0..(order - 1) {
        exp[k as usize] = acc;
        log[acc as usize] = k;
        acc = raw.mul(acc, generator);
    }
    for k in 0..(order as usize - 1) {
        exp[k + order as usize - 1] = exp[k];
    }

    Ok(FieldSpec {
        p,
        m,
        order,
        modulus,
        generator: FieldElement(generator),
        exp,
        log,
    })
}

/// Lowest monic irreducible of degree m, ordered by the radix-p encoding of
/// its lower coefficients.
fn canonical_modulus(p: u32, m: u32) -> Vec<u32> {
    let span = (p as u64).pow(m);
    for code in 0..span {
        let mut poly = digits(code, p, m);
        poly.push(1);
        if is_irreducible(&poly, p) {
            return poly;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn digits(mut value: u64, p: u32, len: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(len as usize + 1);
    for _ in 0..len {
        out.push((value % p as u64) as u32);
        value /= p as u64;
    }
    out
}

/// Remainder of `a` modulo the monic polynomial `b` over GF(p), padded to
/// `deg b` coefficients.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    if r.len() < db {
        r.resize(db, 0);
    }
    for top in (db..r.len()).rev() {
        let lead = r[top];
        if lead == 0 {
            continue;
        }
        let shift = top - db;
        for (k, &c) in b.iter().enumerate() {
            let t = (lead as u64 * c as u64 % p as u64) as u32;
            r[k + shift] = (r[k + shift] + p - t) % p;
        }
    }
    r.truncate(db);
    r
}

/// Trial division by every monic polynomial of degree at most deg/2.
fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() as u32 - 1;
    if deg <= 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        for code in 0..(p as u64).pow(d) {
            let mut divisor = digits(code, p, d);
            divisor.push(1);
            let r = poly_rem(poly, &divisor, p);
            if r.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Table-free arithmetic used while the tables are being built.
struct RawField<'a> {
    p: u32,
    m: u32,
    modulus: &'a [u32],
}

impl RawField<'_> {
    fn mul(&self, a: u32, b: u32) -> u32 {
        let (p, m) = (self.p, self.m);
        let da = digits(a as u64, p, m);
        let db = digits(b as u64, p, m);
        let mut prod = vec![0u32; 2 * m as usize];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
            }
        }
        let r = poly_rem(&prod, self.modulus, p);
        r.iter().rev().fold(0u32, |acc, &c| acc * p + c)
    }

    fn pow(&self, mut base: u32, mut e: u64) -> u32 {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

impl FieldSpec {
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Modulus coefficients from the constant term up to the leading 1.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator(&self) -> FieldElement {
        self.generator
    }

    pub fn summary(&self) -> FieldSummary {
        FieldSummary {
            p: self.p,
            m: self.m,
            modulus: self.modulus.clone(),
            generator: self.generator.0,
        }
    }

    pub fn element(&self, index: u64) -> Result<FieldElement> {
        if index >= self.order as u64 {
            return Err(Error::ElementOutOfRange {
                index,
                order: self.order as u64,
            });
        }
        Ok(FieldElement(index as u32))
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.order).map(FieldElement)
    }

    /// Coefficient vector of length m, constant term first.
    pub fn coefficients(&self, a: FieldElement) -> Vec<u32> {
        digits(a.0 as u64, self.p, self.m)
    }

    pub fn from_coefficients(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() != self.m as usize {
            return Err(Error::LengthMismatch {
                expected: self.m as usize,
                got: coeffs.len(),
            });
        }
        let mut idx = 0u64;
        for &c in coeffs.iter().rev() {
            if c >= self.p {
                return Err(Error::ElementOutOfRange {
                    index: c as u64,
                    order: self.p as u64,
                });
            }
            idx = idx * self.p as u64 + c as u64;
        }
        Ok(FieldElement(idx as u32))
    }

    /// Embeds an integer through the prime subfield.
    pub fn from_int(&self, k: u64) -> FieldElement {
        FieldElement((k % self.p as u64) as u32)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        let p = self.p;
        let (mut x, mut y) = (a.0, b.0);
        let (mut out, mut place) = (0u32, 1u32);
        while x != 0 || y != 0 {
            let d = (x % p + y % p) % p;
            out += d * place;
            place = place.wrapping_mul(p);
            x /= p;
            y /= p;
        }
        FieldElement(out)
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if self.p == 2 {
            return a;
        }
        let p = self.p;
        let mut x = a.0;
        let (mut out, mut place) = (0u32, 1u32);
        while x != 0 {
            let d = (p - x % p) % p;
            out += d * place;
            place = place.wrapping_mul(p);
            x /= p;
        }
        FieldElement(out)
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        let k = self.log[a.0 as usize] + self.log[b.0 as usize];
        FieldElement(self.exp[k as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Option<FieldElement> {
        if a.0 == 0 {
            return None;
        }
        let group = self.order - 1;
        let k = (group - self.log[a.0 as usize]) % group;
        Some(FieldElement(self.exp[k as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Option<FieldElement> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.0 == 0 {
            return FieldElement::ZERO;
        }
        let group = (self.order - 1) as u64;
        let k = (self.log[a.0 as usize] as u64 * (e % group)) % group;
        FieldElement(self.exp[k as usize])
    }

    /// Discrete logarithm to the generator; `None` for zero.
    pub fn log(&self, a: FieldElement) -> Option<u32> {
        (a.0 != 0).then(|| self.log[a.0 as usize])
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: FieldElement) -> Option<u64> {
        let k = self.log(a)? as u64;
        let group = (self.order - 1) as u64;
        Some(group / gcd(group, k))
    }

    /// Degree of GF(q) over the prime field, if GF(q) sits inside this field.
    pub fn subfield_degree(&self, q: u64) -> Result<u32> {
        match prime_power(q) {
            Some((p, a)) if p == self.p as u64 && self.m.is_multiple_of(a) => Ok(a),
            _ => Err(Error::NotSubfield {
                q,
                order: self.order as u64,
            }),
        }
    }

    pub fn is_in_subfield(&self, x: FieldElement, q: u64) -> Result<bool> {
        self.subfield_degree(q)?;
        Ok(self.pow(x, q) == x)
    }

    /// `x + x^q + ... + x^{q^{s-1}}` where `q^s` is the field order. The
    /// result lies in the copy of GF(q) inside this field.
    pub fn trace_to_subfield(&self, x: FieldElement, q: u64) -> Result<FieldElement> {
        let a = self.subfield_degree(q)?;
        let s = self.m / a;
        let mut acc = FieldElement::ZERO;
        let mut y = x;
        for _ in 0..s {
            acc = self.add(acc, y);
            y = self.pow(y, q);
        }
        Ok(acc)
    }

    /// `x^{(q^s-1)/(q-1)}`, the norm down to GF(q).
    pub fn norm_to_subfield(&self, x: FieldElement, q: u64) -> Result<FieldElement> {
        self.subfield_degree(q)?;
        let e = (self.order as u64 - 1) / (q - 1);
        Ok(self.pow(x, e))
    }

    /// The generator raised to `(order-1)/(q-1)`: a primitive element of the
    /// subfield GF(q).
    pub fn subfield_primitive(&self, q: u64) -> Result<FieldElement> {
        self.subfield_degree(q)?;
        Ok(self.pow(self.generator, (self.order as u64 - 1) / (q - 1)))
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}
