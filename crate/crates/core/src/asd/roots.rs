use std::collections::BTreeSet;

use crate::gf::{Elem, Field};
use crate::poly::{BiPoly, UniPoly};

/// All `f` with `deg f < k` and `(Y - f(X)) | Q(X, Y)`, by the
/// Roth-Ruckenstein recursion. Each candidate is confirmed by substitution;
/// the result is sorted by coefficient vector and free of duplicates.
pub fn y_roots(f: &Field, q: &BiPoly, k: usize) -> Vec<UniPoly> {
    if q.is_zero() || k == 0 {
        return Vec::new();
    }
    let mut start = q.clone();
    start.normalize();
    start.strip_x_power();
    let mut found = BTreeSet::new();
    let mut prefix = Vec::with_capacity(k);
    recurse(f, &start, k, &mut prefix, &mut found);
    found
        .into_iter()
        .map(UniPoly::new)
        .filter(|g| q.substitute(f, g).is_zero())
        .collect()
}

fn recurse(f: &Field, q: &BiPoly, k: usize, prefix: &mut Vec<Elem>, found: &mut BTreeSet<Vec<Elem>>) {
    let at0 = q.at_x_zero();
    for gamma in roots_of(f, &at0) {
        prefix.push(gamma);
        if prefix.len() == k {
            found.insert(trimmed(prefix));
        } else {
            let next = q.ruckenstein_step(f, gamma);
            if next.rows.first().is_none_or(|r| r.iter().all(|c| c.is_zero())) {
                // Y divides the shifted polynomial: the remaining coefficients are zero
                found.insert(trimmed(prefix));
            }
            if !next.is_zero() {
                recurse(f, &next, k, prefix, found);
            }
        }
        prefix.pop();
    }
}

fn trimmed(v: &[Elem]) -> Vec<Elem> {
    let n = v.iter().rposition(|c| !c.is_zero()).map_or(0, |i| i + 1);
    v[..n].to_vec()
}

/// Roots in GF(q) of a univariate polynomial, by exhaustive evaluation.
pub fn roots_of(f: &Field, p: &UniPoly) -> Vec<Elem> {
    match p.degree() {
        None => f.elements().collect(),
        Some(0) => Vec::new(),
        Some(_) => f.elements().filter(|&x| p.eval(f, x).is_zero()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::WPoly;

    fn lin(f: &Field, g: &UniPoly) -> BiPoly {
        BiPoly::from_wpoly(&WPoly::y_minus(f, 2, g))
    }

    fn mul(f: &Field, a: &BiPoly, b: &BiPoly) -> BiPoly {
        BiPoly::from_wpoly(&a.to_wpoly(2).mul(f, &b.to_wpoly(2)))
    }

    #[test]
    fn constructed_factorization() {
        let f = Field::new(5, 1).unwrap();
        let g1 = UniPoly::new(vec![Elem(1), Elem(2)]);
        let g2 = UniPoly::new(vec![Elem(0), Elem(3)]);
        let q = mul(&f, &lin(&f, &g1), &lin(&f, &g2));
        let mut want = vec![g1, g2];
        want.sort_by(|a, b| a.coeffs().cmp(b.coeffs()));
        assert_eq!(y_roots(&f, &q, 2), want);
    }

    #[test]
    fn no_linear_factor() {
        let f = Field::new(5, 1).unwrap();
        // Y^2 - 2 has no root in GF(5)
        let q = BiPoly::from_rows(vec![vec![Elem(3)], vec![], vec![Elem(1)]]);
        assert!(y_roots(&f, &q, 2).is_empty());
        assert!(y_roots(&f, &q, 1).is_empty());
    }

    #[test]
    fn x_content_does_not_hide_roots() {
        let f = Field::new(5, 1).unwrap();
        let g = UniPoly::new(vec![Elem(4), Elem(1)]);
        let q = mul(&f, &lin(&f, &g), &BiPoly::from_rows(vec![vec![Elem(0), Elem(1)]]));
        assert_eq!(y_roots(&f, &q, 2), vec![g]);
    }

    #[test]
    fn zero_root_found() {
        let f = Field::new(2, 4).unwrap();
        let q = BiPoly::from_rows(vec![vec![], vec![Elem(1)]]);
        assert_eq!(y_roots(&f, &q, 3), vec![UniPoly::zero()]);
    }
}
