//! Finite fields GF(p^m) with p^m <= 2^16.
//!
//! Elements are stored by their integer encoding: the base-p digits of the
//! value are the coefficients of the polynomial-basis representation, lowest
//! degree first. The canonical enumeration is `alpha_1 = 0, alpha_2 = 1, ...`
//! in increasing integer order, so the canonical index of an element is its
//! value plus one.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u32 = 1 << 16;

/// A field element by integer encoding. Only meaningful together with the
/// [`Field`] it was produced by.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(pub u16);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn value(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Inner {
    p: u32,
    m: u32,
    q: u32,
    /// Monic modulus, coefficients low to high (length m + 1). For m = 1 this is `x`.
    modulus: Vec<u32>,
    generator: Elem,
    /// exp[i] = g^i for i in 0..2(q-1).
    exp: Vec<u16>,
    /// log[a] for nonzero a.
    log: Vec<u32>,
    /// Full multiplication table for q <= 256.
    mul_table: Option<Vec<u16>>,
    /// Addition table for odd characteristic extension fields with q <= 256.
    add_table: Option<Vec<u16>>,
}

/// A finite field handle. Cloning is cheap; the tables are shared.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.m)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.m == other.0.m && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
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

/// Moduli used for the common binary fields; all have `x` primitive.
fn fixed_modulus(p: u32, m: u32) -> Option<u32> {
    match (p, m) {
        (2, 2) => Some(0b111),
        (2, 3) => Some(0b1011),
        (2, 4) => Some(0b1_0011),
        (2, 5) => Some(0b10_0101),
        (2, 6) => Some(0b100_0011),
        (2, 7) => Some(0b1000_1001),
        (2, 8) => Some(0x11d),
        (2, 16) => Some(0x1_100b),
        _ => None,
    }
}

// --- small polynomial helpers over GF(p), used only during construction ---

fn digits(mut v: u32, p: u32, m: u32) -> Vec<u32> {
    let mut d = Vec::with_capacity(m as usize);
    for _ in 0..m {
        d.push(v % p);
        v /= p;
    }
    d
}

fn from_digits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

/// Remainder of `a` modulo the monic polynomial `b` over GF(p).
fn poly_rem_p(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap() % p;
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for (i, &bc) in b.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p * p - lead * bc % p) % p;
            }
        }
        r.pop();
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

fn irreducible_p(modulus: &[u32], p: u32) -> bool {
    let m = modulus.len() as u32 - 1;
    for d in 1..=m / 2 {
        let count = p.pow(d);
        for low in 0..count {
            let mut div = digits(low, p, d);
            div.push(1);
            if poly_rem_p(modulus, &div, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn slow_mul(a: u32, b: u32, p: u32, m: u32, modulus: &[u32]) -> u32 {
    if m == 1 {
        return (a as u64 * b as u64 % p as u64) as u32;
    }
    let da = digits(a, p, m);
    let db = digits(b, p, m);
    let mut prod = vec![0u32; 2 * m as usize - 1];
    for (i, &x) in da.iter().enumerate() {
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    let mut r = poly_rem_p(&prod, modulus, p);
    r.resize(m as usize, 0);
    from_digits(&r, p)
}

fn slow_pow(mut a: u32, mut e: u64, p: u32, m: u32, modulus: &[u32]) -> u32 {
    let mut acc = 1u32;
    while e > 0 {
        if e & 1 == 1 {
            acc = slow_mul(acc, a, p, m, modulus);
        }
        a = slow_mul(a, a, p, m, modulus);
        e >>= 1;
    }
    acc
}

impl Field {
    /// Builds GF(p^m) with its canonical modulus and generator.
    pub fn new(p: u32, m: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::InvalidParameter("extension degree must be positive".into()));
        }
        let q = (p as u64).checked_pow(m).filter(|&q| q <= MAX_ORDER as u64);
        let q = match q {
            Some(q) => q as u32,
            None => return Err(Error::OrderOverflow { p, m }),
        };

        let modulus: Vec<u32> = if m == 1 {
            vec![0, 1]
        } else if let Some(bits) = fixed_modulus(p, m) {
            digits(bits, 2, m + 1)
        } else {
            (0..q)
                .map(|low| {
                    let mut c = digits(low, p, m);
                    c.push(1);
                    c
                })
                .find(|c| irreducible_p(c, p))
                .expect("an irreducible polynomial of every degree exists")
        };
        if m > 1 && !irreducible_p(&modulus, p) {
            return Err(Error::InvalidParameter(format!("modulus for GF({p}^{m}) is reducible")));
        }

        let factors = prime_factors(q as u64 - 1);
        let generator = (1..q)
            .find(|&g| {
                g != 0
                    && slow_pow(g, q as u64 - 1, p, m, &modulus) == 1
                    && factors
                        .iter()
                        .all(|&r| slow_pow(g, (q as u64 - 1) / r, p, m, &modulus) != 1)
            })
            .expect("multiplicative group is cyclic");

        let n = (q - 1) as usize;
        let mut exp = vec![0u16; 2 * n.max(1)];
        let mut log = vec![0u32; q as usize];
        let mut cur = 1u32;
        for i in 0..n {
            exp[i] = cur as u16;
            log[cur as usize] = i as u32;
            cur = slow_mul(cur, generator, p, m, &modulus);
        }
        for i in n..2 * n {
            exp[i] = exp[i - n];
        }

        let add_table = if p != 2 && m > 1 && q <= 256 {
            let mut t = vec![0u16; (q * q) as usize];
            for a in 0..q {
                let da = digits(a, p, m);
                for b in 0..q {
                    let db = digits(b, p, m);
                    let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                    t[(a * q + b) as usize] = from_digits(&s, p) as u16;
                }
            }
            Some(t)
        } else {
            None
        };

        let mut inner = Inner {
            p,
            m,
            q,
            modulus,
            generator: Elem(generator as u16),
            exp,
            log,
            mul_table: None,
            add_table,
        };
        if q <= 256 {
            let mut t = vec![0u16; (q * q) as usize];
            for a in 1..q as usize {
                for b in 1..q as usize {
                    t[a * q as usize + b] = inner.exp[(inner.log[a] + inner.log[b]) as usize];
                }
            }
            inner.mul_table = Some(t);
        }
        Ok(Field(Arc::new(inner)))
    }

    /// Builds the field of order `q`, which must be a prime power.
    pub fn from_order(q: u32) -> Result<Field> {
        if !(2..=MAX_ORDER).contains(&q) {
            return Err(Error::InvalidParameter(format!("no supported field of order {q}")));
        }
        let p = prime_factors(q as u64)[0] as u32;
        let (mut rest, mut m) = (q, 0);
        while rest % p == 0 {
            rest /= p;
            m += 1;
        }
        if rest != 1 {
            return Err(Error::InvalidParameter(format!("{q} is not a prime power")));
        }
        Field::new(p, m)
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.m
    }

    pub fn order(&self) -> u32 {
        self.0.q
    }

    /// Modulus coefficients, lowest degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn generator(&self) -> Elem {
        self.0.generator
    }

    #[inline]
    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    #[inline]
    pub fn one(&self) -> Elem {
        Elem::ONE
    }

    /// The element `alpha_index`, 1-based canonical indexing.
    pub fn alpha(&self, index: usize) -> Result<Elem> {
        if index == 0 || index > self.0.q as usize {
            return Err(Error::InvalidParameter(format!(
                "canonical index {index} outside 1..={}",
                self.0.q
            )));
        }
        Ok(Elem((index - 1) as u16))
    }

    /// Canonical 1-based index of `e`.
    #[inline]
    pub fn index(&self, e: Elem) -> usize {
        e.value() + 1
    }

    pub fn contains(&self, e: Elem) -> bool {
        (e.0 as u32) < self.0.q
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.0.q).map(|v| Elem(v as u16))
    }

    /// Nonzero elements in canonical order.
    pub fn nonzero(&self) -> impl Iterator<Item = Elem> + '_ {
        (1..self.0.q).map(|v| Elem(v as u16))
    }

    /// Image of the integer `n` in the prime subfield.
    #[inline]
    pub fn from_int(&self, n: u64) -> Elem {
        Elem((n % self.0.p as u64) as u16)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let inner = &*self.0;
        if inner.p == 2 {
            Elem(a.0 ^ b.0)
        } else if inner.m == 1 {
            let s = a.0 as u32 + b.0 as u32;
            Elem(if s >= inner.p { s - inner.p } else { s } as u16)
        } else if let Some(t) = &inner.add_table {
            Elem(t[a.value() * inner.q as usize + b.value()])
        } else {
            let p = inner.p;
            let (mut x, mut y, mut out, mut place) = (a.0 as u32, b.0 as u32, 0u32, 1u32);
            for _ in 0..inner.m {
                out += ((x % p + y % p) % p) * place;
                x /= p;
                y /= p;
                place *= p;
            }
            Elem(out as u16)
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        let inner = &*self.0;
        if inner.p == 2 || a.0 == 0 {
            a
        } else if inner.m == 1 {
            Elem((inner.p - a.0 as u32) as u16)
        } else {
            let p = inner.p;
            let (mut x, mut out, mut place) = (a.0 as u32, 0u32, 1u32);
            for _ in 0..inner.m {
                out += ((p - x % p) % p) * place;
                x /= p;
                place *= p;
            }
            Elem(out as u16)
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        if self.0.p == 2 {
            Elem(a.0 ^ b.0)
        } else {
            self.add(a, self.neg(b))
        }
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        let inner = &*self.0;
        if let Some(t) = &inner.mul_table {
            return Elem(t[a.value() * inner.q as usize + b.value()]);
        }
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        Elem(inner.exp[(inner.log[a.value()] + inner.log[b.value()]) as usize])
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.0.q - 1;
        let l = self.0.log[a.value()];
        Ok(Elem(self.0.exp[((n - l) % n) as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` with the convention `0^0 = 1`; negative exponents need `a != 0`.
    pub fn pow(&self, a: Elem, e: i64) -> Result<Elem> {
        if e == 0 {
            return Ok(Elem::ONE);
        }
        if a.is_zero() {
            return if e > 0 { Ok(Elem::ZERO) } else { Err(Error::DivisionByZero) };
        }
        let n = (self.0.q - 1) as i64;
        let l = self.0.log[a.value()] as i64;
        let idx = (l * (e % n)).rem_euclid(n);
        Ok(Elem(self.0.exp[idx as usize]))
    }

    /// `a^e` for non-negative exponents; never fails.
    #[inline]
    pub fn powu(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.is_zero() {
            return Elem::ZERO;
        }
        let n = (self.0.q - 1) as u64;
        let l = self.0.log[a.value()] as u64;
        Elem(self.0.exp[((l * (e % n)) % n) as usize])
    }

    /// Borrowed row of the full multiplication table, available for q <= 256.
    #[inline]
    pub fn mul_table_row(&self, r: Elem) -> Option<&[u16]> {
        let q = self.0.q as usize;
        self.0.mul_table.as_ref().map(|t| &t[r.value() * q..(r.value() + 1) * q])
    }

    /// Row of the multiplication table for the constant `r`, indexed by value.
    pub fn mul_row(&self, r: Elem) -> Vec<u16> {
        self.elements().map(|x| self.mul(r, x).0).collect()
    }

    /// Wraps `e` in a checked handle.
    pub fn element(&self, e: Elem) -> Result<FieldElement> {
        if !self.contains(e) {
            return Err(Error::InvalidParameter(format!("{} is not an element of {:?}", e.0, self)));
        }
        Ok(FieldElement { field: self.clone(), value: e })
    }
}

/// Binary field operations available on [`FieldElement`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// An element bundled with its field, for callers that want mismatch checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    value: Elem,
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> Elem {
        self.value
    }

    /// Canonical 1-based index.
    pub fn index(&self) -> usize {
        self.field.index(self.value)
    }

    pub fn arith(&self, op: ArithOp, other: &FieldElement) -> Result<FieldElement> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        let (f, a, b) = (&self.field, self.value, other.value);
        let value = match op {
            ArithOp::Add => f.add(a, b),
            ArithOp::Sub => f.sub(a, b),
            ArithOp::Mul => f.mul(a, b),
            ArithOp::Div => f.div(a, b)?,
        };
        Ok(FieldElement { field: self.field.clone(), value })
    }

    pub fn inv(&self) -> Result<FieldElement> {
        Ok(FieldElement { field: self.field.clone(), value: self.field.inv(self.value)? })
    }

    pub fn pow(&self, e: i64) -> Result<FieldElement> {
        Ok(FieldElement { field: self.field.clone(), value: self.field.pow(self.value, e)? })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        let f = Field::new(2, 4).unwrap();
        assert_eq!(f.order(), 16);
        assert_eq!(Field::new(5, 1).unwrap().order(), 5);
        assert_eq!(Field::new(2, 8).unwrap().order(), 256);
        assert_eq!(Field::new(4, 1).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(Field::new(2, 17), Err(Error::OrderOverflow { .. })));
        assert!(matches!(Field::new(257, 2), Err(Error::OrderOverflow { .. })));
    }

    #[test]
    fn prime_field_add() {
        let f = Field::new(5, 1).unwrap();
        assert_eq!(f.add(Elem(3), Elem(4)), Elem(2));
        assert_eq!(f.sub(Elem(1), Elem(3)), Elem(3));
    }

    #[test]
    fn generator_order() {
        for (p, m) in [(2, 4), (3, 2), (5, 1), (2, 8), (7, 2), (3, 5)] {
            let f = Field::new(p, m).unwrap();
            let g = f.generator();
            let n = f.order() as u64 - 1;
            assert_eq!(f.powu(g, n), Elem::ONE);
            for r in prime_factors(n) {
                assert_ne!(f.powu(g, n / r), Elem::ONE);
            }
        }
    }

    #[test]
    fn inverses_gf16() {
        let f = Field::new(2, 4).unwrap();
        for a in f.nonzero() {
            assert_eq!(f.mul(f.inv(a).unwrap(), a), Elem::ONE);
        }
        assert_eq!(f.inv(Elem::ZERO), Err(Error::DivisionByZero));
    }

    #[test]
    fn zero_to_zero() {
        let f = Field::new(3, 2).unwrap();
        assert_eq!(f.pow(Elem::ZERO, 0).unwrap(), Elem::ONE);
        assert_eq!(f.pow(Elem::ZERO, 3).unwrap(), Elem::ZERO);
        assert!(f.pow(Elem::ZERO, -1).is_err());
        let a = Elem(5);
        assert_eq!(f.mul(f.pow(a, -2).unwrap(), f.pow(a, 2).unwrap()), Elem::ONE);
    }

    fn check_axioms_exhaustive(f: &Field) {
        let els: Vec<Elem> = f.elements().collect();
        for &a in &els {
            assert_eq!(f.add(a, f.neg(a)), Elem::ZERO);
            assert_eq!(f.mul(a, Elem::ONE), a);
            for &b in &els {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                assert_eq!(f.add(f.sub(a, b), b), a);
                for &c in &els {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn axioms_small_fields() {
        for (p, m) in [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (5, 1), (7, 1), (13, 1)] {
            check_axioms_exhaustive(&Field::new(p, m).unwrap());
        }
    }

    #[test]
    fn axioms_gf256_pairs_and_random_triples() {
        use rand::{Rng, SeedableRng};
        let f = Field::new(2, 8).unwrap();
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.mul(a, b), f.mul(b, a));
                if !b.is_zero() {
                    assert_eq!(f.mul(f.div(a, b).unwrap(), b), a);
                }
            }
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20_000 {
            let (a, b, c) = (Elem(rng.gen_range(0..256)), Elem(rng.gen_range(0..256)), Elem(rng.gen_range(0..256)));
            assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        }
    }

    #[test]
    fn enumeration_round_trips() {
        let f = Field::new(3, 3).unwrap();
        let els: Vec<Elem> = f.elements().collect();
        assert_eq!(els.len(), 27);
        assert_eq!(f.alpha(1).unwrap(), Elem::ZERO);
        for j in 1..=27 {
            assert_eq!(f.index(f.alpha(j).unwrap()), j);
        }
        assert!(f.alpha(0).is_err());
        assert!(f.alpha(28).is_err());
    }

    #[test]
    fn canonical_moduli() {
        assert_eq!(Field::new(2, 4).unwrap().modulus(), &[1, 1, 0, 0, 1]);
        assert_eq!(Field::new(2, 8).unwrap().modulus(), &[1, 0, 1, 1, 1, 0, 0, 0, 1]);
        // first monic irreducible of degree 2 over GF(3) in counting order: x^2 + 1
        assert_eq!(Field::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
        assert!(irreducible_p(Field::new(5, 3).unwrap().modulus(), 5));
    }

    #[test]
    fn field_element_mismatch() {
        let f = Field::new(2, 4).unwrap();
        let g = Field::new(2, 3).unwrap();
        let a = f.element(Elem(3)).unwrap();
        let b = g.element(Elem(3)).unwrap();
        assert_eq!(a.arith(ArithOp::Add, &b).unwrap_err(), Error::FieldMismatch);
        let c = f.element(Elem(0)).unwrap();
        assert_eq!(a.arith(ArithOp::Div, &c).unwrap_err(), Error::DivisionByZero);
        assert_eq!(a.arith(ArithOp::Mul, &a.inv().unwrap()).unwrap().value(), Elem::ONE);
        assert_eq!(f.element(f.generator()).unwrap().pow(15).unwrap().value(), Elem::ONE);
        assert!(f.element(Elem(16)).is_err());
    }
}
