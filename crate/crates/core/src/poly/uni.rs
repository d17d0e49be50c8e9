use crate::error::{Error, Result};
use crate::gf::{Elem, Field};

/// Univariate polynomial over GF(q), coefficients indexed by degree.
///
/// The zero polynomial has an empty coefficient list and no degree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct UniPoly {
    coeffs: Vec<Elem>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Elem) -> Self {
        Self::new(vec![c])
    }

    /// `X^d`.
    pub fn monomial(d: usize) -> Self {
        let mut coeffs = vec![Elem::ZERO; d + 1];
        coeffs[d] = Elem::ONE;
        UniPoly { coeffs }
    }

    pub fn new(mut coeffs: Vec<Elem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).copied().unwrap_or(Elem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Elem {
        self.coeffs.last().copied().unwrap_or(Elem::ZERO)
    }

    /// Horner evaluation.
    pub fn eval(&self, f: &Field, x: Elem) -> Elem {
        self.coeffs.iter().rev().fold(Elem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn add(&self, f: &Field, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new((0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn sub(&self, f: &Field, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new((0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn scale(&self, f: &Field, c: Elem) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, f: &Field, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Elem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        UniPoly::new(out)
    }

    /// Quotient and remainder.
    pub fn div_rem(&self, f: &Field, divisor: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = f.inv(divisor.leading())?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((UniPoly::zero(), self.clone()));
        }
        let mut quot = vec![Elem::ZERO; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = f.mul(rem[i], lead_inv);
            if c.is_zero() {
                continue;
            }
            quot[i - dd] = c;
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                rem[idx] = f.sub(rem[idx], f.mul(c, b));
            }
        }
        rem.truncate(dd);
        Ok((UniPoly::new(quot), UniPoly::new(rem)))
    }

    pub fn rem(&self, f: &Field, divisor: &UniPoly) -> Result<UniPoly> {
        Ok(self.div_rem(f, divisor)?.1)
    }

    pub fn monic(&self, f: &Field) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(f, f.inv(self.leading()).expect("nonzero leading coefficient"))
    }

    pub fn gcd(&self, f: &Field, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(f, &b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic(f)
    }

    /// `self^e mod modulus`.
    pub fn pow_mod(&self, f: &Field, mut e: u64, modulus: &UniPoly) -> Result<UniPoly> {
        let mut base = self.rem(f, modulus)?;
        let mut acc = UniPoly::constant(Elem::ONE).rem(f, modulus)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base).rem(f, modulus)?;
            }
            base = base.mul(f, &base).rem(f, modulus)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Rabin's irreducibility test over GF(q).
    pub fn is_irreducible(&self, f: &Field) -> bool {
        let d = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(d) => d,
        };
        let q = f.order() as u64;
        let x = UniPoly::monomial(1);
        // X^{q^i} mod self for i = 0..=d
        let mut frob = vec![x.rem(f, self).unwrap()];
        for _ in 0..d {
            let next = frob.last().unwrap().pow_mod(f, q, self).unwrap();
            frob.push(next);
        }
        if frob[d] != frob[0] {
            return false;
        }
        crate::gf::prime_factors(d as u64).into_iter().all(|r| {
            let h = frob[d / r as usize].sub(f, &x);
            self.gcd(f, &h).degree() == Some(0)
        })
    }

    /// Polynomial whose coefficients are the base-q digits of `index`, plus a
    /// leading `X^degree` term. Enumerating `index` in `0..q^degree` walks the
    /// monic polynomials of that degree in counting order.
    pub fn monic_from_index(f: &Field, degree: usize, mut index: u64) -> UniPoly {
        let q = f.order() as u64;
        let mut coeffs = Vec::with_capacity(degree + 1);
        for _ in 0..degree {
            coeffs.push(Elem((index % q) as u16));
            index /= q;
        }
        coeffs.push(Elem::ONE);
        UniPoly::new(coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_examples() {
        let f5 = Field::new(5, 1).unwrap();
        let p = UniPoly::new(vec![Elem(1), Elem(2)]);
        assert_eq!(p.eval(&f5, Elem(2)), Elem(0));
        assert_eq!(UniPoly::zero().eval(&f5, Elem(3)), Elem(0));
        let f16 = Field::new(2, 4).unwrap();
        let g = f16.generator();
        assert_eq!(UniPoly::monomial(3).eval(&f16, g), f16.powu(g, 3));
    }

    #[test]
    fn div_rem_reconstructs() {
        let f = Field::new(7, 1).unwrap();
        let a = UniPoly::new(vec![Elem(3), Elem(0), Elem(5), Elem(1), Elem(6)]);
        let b = UniPoly::new(vec![Elem(2), Elem(4), Elem(3)]);
        let (qt, r) = a.div_rem(&f, &b).unwrap();
        assert!(r.degree().unwrap_or(0) < 2);
        assert_eq!(qt.mul(&f, &b).add(&f, &r), a);
        assert!(a.div_rem(&f, &UniPoly::zero()).is_err());
    }

    #[test]
    fn rabin_matches_root_count_small() {
        let f = Field::new(2, 2).unwrap();
        // degree-2 monic polynomials are irreducible iff rootless
        for idx in 0..16 {
            let p = UniPoly::monic_from_index(&f, 2, idx);
            let rootless = f.elements().all(|x| !p.eval(&f, x).is_zero());
            assert_eq!(p.is_irreducible(&f), rootless, "{p:?}");
        }
        let f5 = Field::new(5, 1).unwrap();
        // X^4 + 2 is irreducible over GF(5); (X^2+2)(X^2+3) = X^4 + 1 is not
        assert!(UniPoly::new(vec![Elem(2), Elem(0), Elem(0), Elem(0), Elem(1)]).is_irreducible(&f5));
        assert!(!UniPoly::new(vec![Elem(1), Elem(0), Elem(0), Elem(0), Elem(1)]).is_irreducible(&f5));
    }
}
