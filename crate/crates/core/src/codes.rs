//! Reed-Solomon, twisted (GRS) and Parvaresh-Vardy encoders.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::poly::UniPoly;

/// Largest codebook that [`RsCode::codewords`] and [`PvCode::codewords`] will walk.
pub const ENUMERATION_GUARD: u128 = 1 << 20;

/// A codeword together with the message that produced it, if known.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Codeword {
    pub symbols: Vec<Elem>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<Vec<Elem>>,
}

impl Codeword {
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

/// Hamming distance between two equal-length words.
pub fn hamming(a: &[Elem], b: &[Elem]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Full-length RS code: evaluation of all polynomials of degree `< k` at the
/// `q - 1` nonzero field elements in canonical order.
#[derive(Clone, Debug)]
pub struct RsCode {
    field: Field,
    k: usize,
    points: Vec<Elem>,
}

impl RsCode {
    pub fn new(field: &Field, k: usize) -> Result<Self> {
        let n = field.order() as usize - 1;
        if k == 0 || k > n {
            return Err(Error::InvalidParameter(format!("dimension {k} outside 1..={n}")));
        }
        Ok(RsCode { field: field.clone(), k, points: field.nonzero().collect() })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n() as f64
    }

    /// Evaluation point of coordinate `j` (0-based), i.e. `alpha_{j+2}`.
    pub fn points(&self) -> &[Elem] {
        &self.points
    }

    pub fn message_poly(&self, message: &[Elem]) -> Result<UniPoly> {
        if message.len() != self.k {
            return Err(Error::LengthMismatch { expected: self.k, got: message.len() });
        }
        if let Some(bad) = message.iter().find(|e| !self.field.contains(**e)) {
            return Err(Error::InvalidParameter(format!("symbol {bad} is not in {:?}", self.field)));
        }
        Ok(UniPoly::new(message.to_vec()))
    }

    pub fn encode(&self, message: &[Elem]) -> Result<Codeword> {
        let f = self.message_poly(message)?;
        Ok(Codeword { symbols: self.evaluate(&f), message: Some(message.to_vec()) })
    }

    pub fn evaluate(&self, f: &UniPoly) -> Vec<Elem> {
        self.points.iter().map(|&x| f.eval(&self.field, x)).collect()
    }

    /// Message of index `idx` in canonical order: lexicographic in
    /// `(u_1, ..., u_k)` with `u_1` most significant.
    pub fn message_at(&self, idx: u64) -> Vec<Elem> {
        message_at(self.field.order(), self.k, idx)
    }

    /// Every codeword, in canonical message order.
    pub fn codewords(&self) -> Result<impl Iterator<Item = Codeword> + '_> {
        let count = guard(self.field.order(), self.k)?;
        Ok((0..count).map(move |i| self.encode(&self.message_at(i)).expect("valid message")))
    }
}

fn guard(q: u32, k: usize) -> Result<u64> {
    let count = (q as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if count > ENUMERATION_GUARD {
        return Err(Error::EnumerationGuard { count, guard: ENUMERATION_GUARD });
    }
    Ok(count as u64)
}

fn message_at(q: u32, k: usize, mut idx: u64) -> Vec<Elem> {
    let mut out = vec![Elem::ZERO; k];
    for slot in out.iter_mut().rev() {
        *slot = Elem((idx % q as u64) as u16);
        idx /= q as u64;
    }
    out
}

/// An RS code with coordinate `j` scaled by the nonzero constant `w[j]`.
#[derive(Clone, Debug)]
pub struct GrsTwist {
    code: RsCode,
    w: Vec<Elem>,
}

impl GrsTwist {
    pub fn new(code: &RsCode, w: Vec<Elem>) -> Result<Self> {
        if w.len() != code.n() {
            return Err(Error::LengthMismatch { expected: code.n(), got: w.len() });
        }
        if w.iter().any(|e| e.is_zero() || !code.field.contains(*e)) {
            return Err(Error::InvalidParameter("twist entries must be nonzero field elements".into()));
        }
        Ok(GrsTwist { code: code.clone(), w })
    }

    /// Uniformly random twist.
    pub fn random<R: rand::Rng + ?Sized>(code: &RsCode, rng: &mut R) -> Self {
        let q = code.field.order() as u16;
        let w = (0..code.n()).map(|_| Elem(rng.gen_range(1..q))).collect();
        GrsTwist { code: code.clone(), w }
    }

    pub fn code(&self) -> &RsCode {
        &self.code
    }

    pub fn twist(&self) -> &[Elem] {
        &self.w
    }

    pub fn encode(&self, message: &[Elem]) -> Result<Codeword> {
        let mut c = self.code.encode(message)?;
        self.apply(&mut c.symbols);
        Ok(c)
    }

    /// Scales an RS word into the twisted code.
    pub fn apply(&self, symbols: &mut [Elem]) {
        let f = &self.code.field;
        for (s, &w) in symbols.iter_mut().zip(&self.w) {
            *s = f.mul(*s, w);
        }
    }

    /// Undoes [`GrsTwist::apply`].
    pub fn unapply(&self, symbols: &mut [Elem]) {
        let f = &self.code.field;
        for (s, &w) in symbols.iter_mut().zip(&self.w) {
            *s = f.mul(*s, f.inv(w).expect("nonzero twist"));
        }
    }
}

/// Parvaresh-Vardy code over GF(q) with `vars` evaluated polynomials per
/// symbol. Symbols live in GF(q)^vars; the vector `(v_0, ..., v_{vars-1})` is
/// encoded as the integer `sum v_i q^i`, which is also the element encoding
/// of the additive group of GF(q^vars).
#[derive(Clone, Debug)]
pub struct PvCode {
    field: Field,
    symbol_field: Field,
    k: usize,
    powers: Vec<u64>,
    e: UniPoly,
    points: Vec<Elem>,
}

impl PvCode {
    /// Uses the first irreducible monic of degree `k` in counting order.
    pub fn new(field: &Field, k: usize, powers: Vec<u64>) -> Result<Self> {
        let e = first_irreducible(field, k)?;
        Self::with_modulus(field, k, powers, e)
    }

    pub fn with_modulus(field: &Field, k: usize, powers: Vec<u64>, e: UniPoly) -> Result<Self> {
        let n = field.order() as usize - 1;
        if k == 0 || k > n {
            return Err(Error::InvalidParameter(format!("dimension {k} outside 1..={n}")));
        }
        if powers.is_empty() || powers.iter().any(|&a| a < 2) {
            return Err(Error::InvalidParameter("PV powers must be at least 2 and non-empty".into()));
        }
        if e.degree() != Some(k) || !e.is_irreducible(field) {
            return Err(Error::InvalidParameter(format!("e(X) must be irreducible of degree {k}")));
        }
        let vars = powers.len() as u32 + 1;
        let symbol_field = Field::new(field.characteristic(), field.degree() * vars)
            .map_err(|_| Error::InvalidParameter(format!("symbol alphabet q^{vars} exceeds 65536")))?;
        Ok(PvCode { field: field.clone(), symbol_field, k, powers, e: e.monic(field), points: field.nonzero().collect() })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Field whose additive group is the symbol alphabet.
    pub fn symbol_field(&self) -> &Field {
        &self.symbol_field
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of evaluated polynomials per symbol (`M`).
    pub fn vars(&self) -> usize {
        self.powers.len() + 1
    }

    pub fn powers(&self) -> &[u64] {
        &self.powers
    }

    pub fn modulus(&self) -> &UniPoly {
        &self.e
    }

    pub fn points(&self) -> &[Elem] {
        &self.points
    }

    /// `k / (M n)` as a reduced-free pair and as a float.
    pub fn rate_parts(&self) -> (usize, usize) {
        (self.k, self.vars() * self.n())
    }

    pub fn rate(&self) -> f64 {
        let (a, b) = self.rate_parts();
        a as f64 / b as f64
    }

    /// `(f, f^{a_1} mod e, ...)`.
    pub fn polys(&self, message: &[Elem]) -> Result<Vec<UniPoly>> {
        if message.len() != self.k {
            return Err(Error::LengthMismatch { expected: self.k, got: message.len() });
        }
        let f = UniPoly::new(message.to_vec());
        let mut out = vec![f.clone()];
        for &a in &self.powers {
            out.push(f.pow_mod(&self.field, a, &self.e)?);
        }
        Ok(out)
    }

    pub fn compose(&self, parts: &[Elem]) -> Elem {
        let q = self.field.order();
        Elem(parts.iter().rev().fold(0u32, |acc, v| acc * q + v.0 as u32) as u16)
    }

    pub fn decompose(&self, s: Elem) -> Vec<Elem> {
        let q = self.field.order();
        let mut v = s.0 as u32;
        (0..self.vars())
            .map(|_| {
                let d = v % q;
                v /= q;
                Elem(d as u16)
            })
            .collect()
    }

    pub fn encode(&self, message: &[Elem]) -> Result<Codeword> {
        let polys = self.polys(message)?;
        let symbols = self
            .points
            .iter()
            .map(|&x| {
                let parts: Vec<Elem> = polys.iter().map(|g| g.eval(&self.field, x)).collect();
                self.compose(&parts)
            })
            .collect();
        Ok(Codeword { symbols, message: Some(message.to_vec()) })
    }

    pub fn codewords(&self) -> Result<impl Iterator<Item = Codeword> + '_> {
        let count = guard(self.field.order(), self.k)?;
        let q = self.field.order();
        Ok((0..count).map(move |i| self.encode(&message_at(q, self.k, i)).expect("valid message")))
    }
}

/// First irreducible monic polynomial of the given degree in counting order.
pub fn first_irreducible(field: &Field, degree: usize) -> Result<UniPoly> {
    let q = field.order() as u64;
    let count = q.checked_pow(degree as u32).ok_or(Error::Overflow("irreducible search"))?;
    (0..count)
        .map(|i| UniPoly::monic_from_index(field, degree, i))
        .find(|p| p.is_irreducible(field))
        .ok_or_else(|| Error::InvalidParameter(format!("no irreducible polynomial of degree {degree}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(v: &[u16]) -> Vec<Elem> {
        v.iter().map(|&x| Elem(x)).collect()
    }

    #[test]
    fn rs_example() {
        let f = Field::new(5, 1).unwrap();
        let code = RsCode::new(&f, 2).unwrap();
        assert_eq!(code.encode(&e(&[1, 2])).unwrap().symbols, e(&[3, 0, 2, 4]));
        assert_eq!(code.encode(&e(&[0, 0])).unwrap().symbols, e(&[0; 4]));
        assert_eq!(code.encode(&e(&[3, 0])).unwrap().symbols, e(&[3; 4]));
        assert!(matches!(code.encode(&e(&[1])), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn grs_example() {
        let f = Field::new(5, 1).unwrap();
        let code = RsCode::new(&f, 2).unwrap();
        let tw = GrsTwist::new(&code, e(&[2, 1, 1, 1])).unwrap();
        assert_eq!(tw.encode(&e(&[1, 2])).unwrap().symbols, e(&[1, 0, 2, 4]));
        let ones = GrsTwist::new(&code, e(&[1; 4])).unwrap();
        assert_eq!(ones.encode(&e(&[4, 1])).unwrap(), code.encode(&e(&[4, 1])).unwrap());
        assert!(GrsTwist::new(&code, e(&[0, 1, 1, 1])).is_err());
    }

    #[test]
    fn enumeration_counts_and_order() {
        let f = Field::new(5, 1).unwrap();
        let code = RsCode::new(&f, 2).unwrap();
        let all: Vec<_> = code.codewords().unwrap().collect();
        assert_eq!(all.len(), 25);
        assert_eq!(all[1].message.as_deref(), Some(&e(&[0, 1])[..]));
        assert_eq!(all[5].message.as_deref(), Some(&e(&[1, 0])[..]));
        let big = RsCode::new(&Field::new(2, 8).unwrap(), 3).unwrap();
        assert!(matches!(big.codewords().err(), Some(Error::EnumerationGuard { .. })));
    }

    #[test]
    fn default_pv_modulus_and_example() {
        let f = Field::new(2, 2).unwrap();
        let w = Elem(2);
        let pv = PvCode::new(&f, 2, vec![2]).unwrap();
        // X^2 + X + w
        assert_eq!(pv.modulus().coeffs(), &[w, Elem(1), Elem(1)]);
        let polys = pv.polys(&e(&[0, 1])).unwrap();
        assert_eq!(polys[1].coeffs(), &[w, Elem(1)]);
        let c = pv.encode(&e(&[0, 1])).unwrap();
        // x = 1 is coordinate 0
        assert_eq!(pv.decompose(c.symbols[0]), vec![Elem(1), f.add(Elem(1), w)]);
        assert_eq!(pv.rate_parts(), (2, 6));
    }
}
