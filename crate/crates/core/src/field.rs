//! Exact arithmetic in GF(p^m).
//!
//! Elements are encoded by their index: the coefficient vector
//! `(c_0, ..., c_{m-1})` of the reducing polynomial representation read as
//! the base-`p` integer `sum c_i p^i`. Index 0 is zero and index 1 is one.
//! The modulus is always the lexicographically least monic irreducible
//! polynomial of degree `m` (coefficients compared from the constant term
//! upwards), so two builds of the same field agree bit for bit.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::Limits;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{m} exceeds the configured limit {limit}")]
    TooLarge { p: u32, m: u32, limit: u64 },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element index {index} out of range for GF({q})")]
    OutOfRange { index: u32, q: u32 },
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
}

/// Element of a [`Field`], identified by its base-`p` index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Builds an element from its index without range checking; see
    /// [`Field::element`] for the checked variant.
    pub const fn from_index(index: u32) -> Self {
        FieldElement(index)
    }

    pub const fn index(self) -> u32 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

/// Serialized form of a field, embedded in every output file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u32,
    pub m: u32,
    pub modulus: Vec<u32>,
}

struct Tables {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

/// The finite field GF(p^m) with precomputed operation tables.
///
/// Cloning is cheap; all clones share the same tables.
#[derive(Clone)]
pub struct Field {
    tables: Arc<Tables>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.tables.p == other.tables.p && self.tables.modulus == other.tables.modulus
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}", self.order())?;
        if self.degree() > 1 {
            write!(f, ", modulus {:?}", self.tables.modulus)?;
        }
        write!(f, ")")
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

/// Splits `q` into `(p, m)` with `q = p^m`, if `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while !q.is_multiple_of(p) {
        p += 1;
    }
    let mut rest = q;
    let mut m = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p as u32, m))
}

impl Field {
    /// GF(p^m) under the default [`Limits`].
    pub fn new(p: u32, m: u32) -> Result<Field, FieldError> {
        Self::with_limits(p, m, &Limits::default())
    }

    pub fn with_limits(p: u32, m: u32, limits: &Limits) -> Result<Field, FieldError> {
        let q = Self::check_order(p, m, limits)?;
        let modulus = if m == 1 {
            vec![0, 1]
        } else {
            let prime = Self::from_modulus_unchecked(p, 1, vec![0, 1], p);
            let poly = least_irreducible(&prime, m as usize, |_| true);
            poly.iter().map(|c| c.index()).collect()
        };
        Ok(Self::from_modulus_unchecked(p, m, modulus, q))
    }

    /// The field of order `q`, which must be a prime power.
    pub fn of_order(q: u64) -> Result<Field, FieldError> {
        let (p, m) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        Field::new(p, m)
    }

    /// Rebuilds a field from its serialized descriptor, validating the modulus.
    pub fn from_descriptor(desc: &FieldDescriptor) -> Result<Field, FieldError> {
        let q = Self::check_order(desc.p, desc.m, &Limits::default())?;
        let m = desc.m as usize;
        if desc.modulus.len() != m + 1 || desc.modulus[m] != 1 {
            return Err(FieldError::InvalidModulus(format!(
                "expected a monic polynomial of degree {m}"
            )));
        }
        if desc.modulus.iter().any(|&c| c >= desc.p) {
            return Err(FieldError::InvalidModulus(
                "coefficient out of range".into(),
            ));
        }
        if m > 1 {
            let prime = Self::from_modulus_unchecked(desc.p, 1, vec![0, 1], desc.p);
            let poly: Vec<FieldElement> = desc.modulus.iter().map(|&c| FieldElement(c)).collect();
            if !is_irreducible(&prime, &poly) {
                return Err(FieldError::InvalidModulus("polynomial is reducible".into()));
            }
        } else if desc.modulus != [0, 1] {
            return Err(FieldError::InvalidModulus(
                "prime fields use modulus x".into(),
            ));
        }
        Ok(Self::from_modulus_unchecked(
            desc.p,
            desc.m,
            desc.modulus.clone(),
            q,
        ))
    }

    fn check_order(p: u32, m: u32, limits: &Limits) -> Result<u32, FieldError> {
        if !is_prime(p as u64) {
            return Err(FieldError::NotPrime(p));
        }
        if m == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = (p as u64).checked_pow(m).filter(|&q| q <= limits.max_q);
        q.map(|q| q as u32).ok_or(FieldError::TooLarge {
            p,
            m,
            limit: limits.max_q,
        })
    }

    fn from_modulus_unchecked(p: u32, m: u32, modulus: Vec<u32>, q: u32) -> Field {
        let digits = |mut x: u32| {
            let mut out = vec![0u32; m as usize];
            for d in out.iter_mut() {
                *d = x % p;
                x /= p;
            }
            out
        };
        let undigits = |ds: &[u32]| ds.iter().rev().fold(0u32, |acc, &d| acc * p + d);
        let qs = q as usize;
        let coeffs: Vec<Vec<u32>> = (0..q).map(digits).collect();

        let mut add = vec![0u32; qs * qs];
        let mut mul = vec![0u32; qs * qs];
        for a in 0..qs {
            for b in 0..qs {
                let s: Vec<u32> = coeffs[a]
                    .iter()
                    .zip(&coeffs[b])
                    .map(|(x, y)| (x + y) % p)
                    .collect();
                add[a * qs + b] = undigits(&s);
                mul[a * qs + b] = undigits(&poly_mulmod_prime(&coeffs[a], &coeffs[b], &modulus, p));
            }
        }
        let mut neg = vec![0u32; qs];
        let mut inv = vec![0u32; qs];
        for a in 0..qs {
            neg[a] = (0..q).find(|&b| add[a * qs + b as usize] == 0).unwrap();
            if a != 0 {
                inv[a] = (1..q).find(|&b| mul[a * qs + b as usize] == 1).unwrap();
            }
        }
        Field {
            tables: Arc::new(Tables {
                p,
                m,
                q,
                modulus,
                add,
                mul,
                neg,
                inv,
            }),
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.tables.p
    }

    pub fn degree(&self) -> u32 {
        self.tables.m
    }

    pub fn order(&self) -> u32 {
        self.tables.q
    }

    /// Coefficients of the modulus, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.tables.modulus
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            p: self.tables.p,
            m: self.tables.m,
            modulus: self.tables.modulus.clone(),
        }
    }

    pub fn element(&self, index: u32) -> Result<FieldElement, FieldError> {
        if index < self.tables.q {
            Ok(FieldElement(index))
        } else {
            Err(FieldError::OutOfRange {
                index,
                q: self.tables.q,
            })
        }
    }

    /// All elements in index order; zero first, one second.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + Clone {
        (0..self.tables.q).map(FieldElement)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.tables.add[(a.0 * self.tables.q + b.0) as usize])
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.tables.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.tables.mul[(a.0 * self.tables.q + b.0) as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if a.is_zero() {
            Err(FieldError::DivisionByZero)
        } else {
            Ok(FieldElement(self.tables.inv[a.0 as usize]))
        }
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn arith(
        &self,
        a: FieldElement,
        b: FieldElement,
        op: Op,
    ) -> Result<FieldElement, FieldError> {
        match op {
            Op::Add => Ok(self.add(a, b)),
            Op::Sub => Ok(self.sub(a, b)),
            Op::Mul => Ok(self.mul(a, b)),
            Op::Div => self.div(a, b),
        }
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: FieldElement) -> Option<u32> {
        if a.is_zero() {
            return None;
        }
        let mut x = a;
        let mut k = 1;
        while x != FieldElement::ONE {
            x = self.mul(x, a);
            k += 1;
        }
        Some(k)
    }

    /// The least-index generator of the multiplicative group.
    pub fn primitive_element(&self) -> FieldElement {
        let target = self.tables.q - 1;
        self.elements()
            .skip(1)
            .find(|&a| self.multiplicative_order(a) == Some(target))
            .expect("the multiplicative group of a finite field is cyclic")
    }
}

fn poly_mulmod_prime(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let m = modulus.len() - 1;
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for deg in (m..prod.len()).rev() {
        let c = prod[deg];
        if c != 0 {
            for (k, &mc) in modulus.iter().enumerate() {
                let idx = deg - m + k;
                prod[idx] = (prod[idx] + (p - c) * mc % p) % p;
            }
        }
    }
    prod.truncate(m);
    prod.resize(m, 0);
    prod
}

// Polynomials over a `Field`, constant coefficient first, used for the
// modulus search and for extension fields.

fn trim(mut a: Vec<FieldElement>) -> Vec<FieldElement> {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

/// Remainder of `a` modulo the monic polynomial `b`.
pub(crate) fn poly_rem(field: &Field, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    let db = b.len() - 1;
    let mut r = trim(a.to_vec());
    while r.len() > db {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        for (k, &bc) in b.iter().enumerate() {
            r[shift + k] = field.sub(r[shift + k], field.mul(lead, bc));
        }
        r = trim(r);
    }
    r
}

fn monic_polys(field: &Field, deg: usize) -> impl Iterator<Item = Vec<FieldElement>> + '_ {
    let q = field.order() as u64;
    // constant term is the most significant digit of the counter
    (0..q.pow(deg as u32)).map(move |mut t| {
        let mut poly = vec![FieldElement::ZERO; deg + 1];
        for i in (0..deg).rev() {
            poly[i] = FieldElement((t % q) as u32);
            t /= q;
        }
        poly[deg] = FieldElement::ONE;
        poly
    })
}

/// Trial division by every monic polynomial of degree at most half.
pub(crate) fn is_irreducible(field: &Field, poly: &[FieldElement]) -> bool {
    let deg = poly.len() - 1;
    if deg == 0 {
        return false;
    }
    (1..=deg / 2).all(|d| monic_polys(field, d).all(|div| !poly_rem(field, poly, &div).is_empty()))
}

/// The lexicographically least monic irreducible polynomial of degree `deg`
/// accepted by `accept`.
pub(crate) fn least_irreducible(
    field: &Field,
    deg: usize,
    mut accept: impl FnMut(&[FieldElement]) -> bool,
) -> Vec<FieldElement> {
    monic_polys(field, deg)
        .find(|p| is_irreducible(field, p) && accept(p))
        .expect("irreducible polynomials exist in every degree")
}

/// GF(q^deg) realised as polynomials over a base [`Field`] modulo a monic
/// irreducible polynomial. Elements are coefficient vectors of length `deg`,
/// which makes the extension a `deg`-dimensional vector space over the base.
#[derive(Clone, Debug)]
pub struct ExtensionField {
    base: Field,
    modulus: Vec<FieldElement>,
}

impl ExtensionField {
    /// Extension by the least monic irreducible of the given degree.
    pub fn new(base: &Field, deg: usize) -> ExtensionField {
        let modulus = if deg == 1 {
            vec![FieldElement::ZERO, FieldElement::ONE]
        } else {
            least_irreducible(base, deg, |_| true)
        };
        ExtensionField {
            base: base.clone(),
            modulus,
        }
    }

    /// Extension by the least monic irreducible of the given degree whose
    /// root `x` generates the multiplicative group.
    pub fn primitive(base: &Field, deg: usize) -> ExtensionField {
        let order = (base.order() as u64).pow(deg as u32) - 1;
        let modulus = least_irreducible(base, deg, |poly| {
            let ext = ExtensionField {
                base: base.clone(),
                modulus: poly.to_vec(),
            };
            ext.multiplicative_order(&ext.generator()) == order
        });
        ExtensionField {
            base: base.clone(),
            modulus,
        }
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[FieldElement] {
        &self.modulus
    }

    pub fn one(&self) -> Vec<FieldElement> {
        let mut v = vec![FieldElement::ZERO; self.degree()];
        v[0] = FieldElement::ONE;
        v
    }

    /// The class of `x`.
    pub fn generator(&self) -> Vec<FieldElement> {
        if self.degree() == 1 {
            return vec![self.base.neg(self.modulus[0])];
        }
        let mut v = vec![FieldElement::ZERO; self.degree()];
        v[1] = FieldElement::ONE;
        v
    }

    pub fn mul(&self, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
        let f = &self.base;
        let mut prod = vec![FieldElement::ZERO; a.len() + b.len()];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = f.add(prod[i + j], f.mul(x, y));
            }
        }
        let mut r = poly_rem(f, &prod, &self.modulus);
        r.resize(self.degree(), FieldElement::ZERO);
        r
    }

    pub fn multiplicative_order(&self, a: &[FieldElement]) -> u64 {
        let one = self.one();
        let mut x = a.to_vec();
        let mut k = 1u64;
        while x != one {
            if x.iter().all(|c| c.is_zero()) {
                return 0;
            }
            x = self.mul(&x, a);
            k += 1;
        }
        k
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_uses_modulus_x() {
        let f = Field::new(2, 1).unwrap();
        assert_eq!(f.order(), 2);
        assert_eq!(f.modulus(), &[0, 1]);
    }

    #[test]
    fn gf4_modulus_is_x2_x_1() {
        assert_eq!(Field::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
    }

    #[test]
    fn gf9_modulus_is_x2_plus_1() {
        assert_eq!(Field::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
    }

    #[test]
    fn gf8_modulus_is_lex_least() {
        // coefficient vectors (c0, c1, c2): (1,0,0) and (1,1,1) have root 1,
        // (1,0,1) is x^3 + x^2 + 1
        assert_eq!(Field::new(2, 3).unwrap().modulus(), &[1, 0, 1, 1]);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(Field::new(4, 1), Err(FieldError::NotPrime(4)));
        assert_eq!(Field::new(2, 0), Err(FieldError::ZeroDegree));
        assert!(matches!(Field::new(2, 6), Err(FieldError::TooLarge { .. })));
        assert!(Field::with_limits(
            2,
            6,
            &Limits {
                max_q: 64,
                ..Limits::default()
            }
        )
        .is_ok());
    }

    #[test]
    fn gf5_inverse_of_two() {
        let f = Field::new(5, 1).unwrap();
        let two = FieldElement::from_index(2);
        let three = FieldElement::from_index(3);
        assert_eq!(f.mul(two, three), FieldElement::ONE);
        assert_eq!(f.inv(two).unwrap(), three);
    }

    #[test]
    fn gf4_x_squared() {
        let f = Field::new(2, 2).unwrap();
        let x = FieldElement::from_index(2);
        assert_eq!(f.mul(x, x), FieldElement::from_index(3));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let f = Field::new(3, 1).unwrap();
        assert_eq!(
            f.div(FieldElement::ONE, FieldElement::ZERO),
            Err(FieldError::DivisionByZero)
        );
        assert_eq!(f.inv(FieldElement::ZERO), Err(FieldError::DivisionByZero));
        assert_eq!(
            f.arith(FieldElement::ONE, FieldElement::ZERO, Op::Div),
            Err(FieldError::DivisionByZero)
        );
    }

    #[test]
    fn additive_inverses() {
        for q in [2, 3, 4, 5, 7, 8, 9, 16, 25, 27, 32] {
            let f = Field::of_order(q).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(a, f.neg(a)), FieldElement::ZERO);
            }
        }
    }

    #[test]
    fn descriptor_round_trip() {
        let f = Field::new(3, 3).unwrap();
        let g = Field::from_descriptor(&f.descriptor()).unwrap();
        assert_eq!(f, g);
        let bad = FieldDescriptor {
            p: 2,
            m: 2,
            modulus: vec![1, 0, 1],
        };
        assert!(Field::from_descriptor(&bad).is_err());
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(32), Some((2, 5)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn extension_field_is_primitive() {
        for q in [2, 3, 4, 5] {
            let f = Field::of_order(q).unwrap();
            let ext = ExtensionField::primitive(&f, 3);
            let order = q.pow(3) - 1;
            assert_eq!(ext.multiplicative_order(&ext.generator()), order);
        }
    }
}
