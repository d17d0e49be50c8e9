use crate::codes::{hamming, Codeword, RsCode};
use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::poly::UniPoly;

/// Unique-decoding radius `floor((n - k) / 2)`.
pub fn bm_radius(code: &RsCode) -> usize {
    (code.n() - code.k()) / 2
}

/// `S_j = sum_x y_x x^j` for `j = 1..=n-k`; all zero iff `y` is a codeword.
pub fn syndromes(code: &RsCode, y: &[Elem]) -> Result<Vec<Elem>> {
    check_len(code, y)?;
    let f = code.field();
    Ok((1..=code.n() - code.k())
        .map(|j| {
            code.points()
                .iter()
                .zip(y)
                .fold(Elem::ZERO, |acc, (&x, &v)| f.add(acc, f.mul(v, f.powu(x, j as u64))))
        })
        .collect())
}

fn check_len(code: &RsCode, y: &[Elem]) -> Result<()> {
    if y.len() != code.n() {
        return Err(Error::LengthMismatch { expected: code.n(), got: y.len() });
    }
    if let Some(bad) = y.iter().find(|e| !code.field().contains(**e)) {
        return Err(Error::InvalidParameter(format!("symbol {bad} is not in {:?}", code.field())));
    }
    Ok(())
}

/// Message of a codeword: `u_i = -sum_x c_x x^{-i}`.
pub fn recover_message(code: &RsCode, c: &[Elem]) -> Vec<Elem> {
    let f = code.field();
    (0..code.k())
        .map(|i| {
            let s = code.points().iter().zip(c).fold(Elem::ZERO, |acc, (&x, &v)| {
                f.add(acc, f.mul(v, f.pow(x, -(i as i64)).expect("nonzero point")))
            });
            f.neg(s)
        })
        .collect()
}

/// Shortest LFSR generating `s`, as the connection polynomial `Lambda(z)`.
pub fn berlekamp_massey(f: &Field, s: &[Elem]) -> UniPoly {
    let mut lambda = vec![Elem::ONE];
    let mut prev = vec![Elem::ONE];
    let (mut len, mut shift, mut prev_d) = (0usize, 1usize, Elem::ONE);
    for r in 0..s.len() {
        let mut d = s[r];
        for i in 1..=len.min(lambda.len() - 1) {
            d = f.add(d, f.mul(lambda[i], s[r - i]));
        }
        if d.is_zero() {
            shift += 1;
            continue;
        }
        let coef = f.div(d, prev_d).expect("nonzero discrepancy");
        let mut next = lambda.clone();
        if next.len() < prev.len() + shift {
            next.resize(prev.len() + shift, Elem::ZERO);
        }
        for (i, &b) in prev.iter().enumerate() {
            next[i + shift] = f.sub(next[i + shift], f.mul(coef, b));
        }
        if 2 * len <= r {
            len = r + 1 - len;
            prev = lambda;
            prev_d = d;
            shift = 1;
        } else {
            shift += 1;
        }
        lambda = next;
    }
    UniPoly::new(lambda)
}

fn derivative(f: &Field, p: &UniPoly) -> UniPoly {
    UniPoly::new(p.coeffs().iter().enumerate().skip(1).map(|(i, &c)| f.mul(f.from_int(i as u64), c)).collect())
}

/// Syndrome decoding (Berlekamp-Massey, Chien search, Forney). Returns
/// `None` when no codeword lies within [`bm_radius`].
pub fn bm_decode(code: &RsCode, y: &[Elem]) -> Result<Option<Codeword>> {
    let s = syndromes(code, y)?;
    let f = code.field();
    let t = bm_radius(code);
    let finish = |c: Vec<Elem>| Codeword { message: Some(recover_message(code, &c)), symbols: c };
    if s.iter().all(|x| x.is_zero()) {
        return Ok(Some(finish(y.to_vec())));
    }
    let s = &s[..2 * t];
    let lambda = berlekamp_massey(f, s);
    let nu = lambda.degree().unwrap_or(0);
    if nu == 0 || nu > t {
        return Ok(None);
    }
    // Omega = S(z) Lambda(z) mod z^{2t}
    let sz = UniPoly::new(s.to_vec());
    let omega = UniPoly::new(sz.mul(f, &lambda).coeffs().iter().take(2 * t).copied().collect());
    let dl = derivative(f, &lambda);
    let mut c = y.to_vec();
    let mut roots = 0;
    for (j, &x) in code.points().iter().enumerate() {
        let xi = f.inv(x).expect("nonzero point");
        if !lambda.eval(f, xi).is_zero() {
            continue;
        }
        roots += 1;
        let den = dl.eval(f, xi);
        if den.is_zero() {
            return Ok(None);
        }
        let e = f.neg(f.div(omega.eval(f, xi), den)?);
        c[j] = f.sub(c[j], e);
    }
    if roots != nu || syndromes(code, &c)?.iter().any(|x| !x.is_zero()) || hamming(&c, y) > t {
        return Ok(None);
    }
    Ok(Some(finish(c)))
}

/// Unique nearest codeword within `radius`, by exhaustive search.
pub fn nearest_codeword(code: &RsCode, y: &[Elem], radius: usize) -> Result<Option<Codeword>> {
    check_len(code, y)?;
    let mut best: Option<(usize, Codeword)> = None;
    let mut tie = false;
    for c in code.codewords()? {
        let d = hamming(&c.symbols, y);
        if d > radius {
            continue;
        }
        match &best {
            Some((bd, _)) if d > *bd => {}
            Some((bd, _)) if d == *bd => tie = true,
            _ => {
                best = Some((d, c));
                tie = false;
            }
        }
    }
    Ok(if tie { None } else { best.map(|b| b.1) })
}
