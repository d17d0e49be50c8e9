use crate::gf::{Elem, Field};
use crate::poly::{UniPoly, WPoly};

/// Dense bivariate polynomial `Q(X, Y) = sum_l rows[l](X) Y^l`.
///
/// Rows may carry trailing zeros; all queries ignore them.
#[derive(Clone, Debug, Default)]
pub struct BiPoly {
    pub rows: Vec<Vec<Elem>>,
}

impl PartialEq for BiPoly {
    fn eq(&self, other: &Self) -> bool {
        let n = self.rows.len().max(other.rows.len());
        (0..n).all(|l| {
            let a = self.rows.get(l).map(Vec::as_slice).unwrap_or(&[]);
            let b = other.rows.get(l).map(Vec::as_slice).unwrap_or(&[]);
            let len = a.len().max(b.len());
            (0..len).all(|i| a.get(i).copied().unwrap_or(Elem::ZERO) == b.get(i).copied().unwrap_or(Elem::ZERO))
        })
    }
}

fn trimmed_len(row: &[Elem]) -> usize {
    row.iter().rposition(|c| !c.is_zero()).map_or(0, |i| i + 1)
}

impl BiPoly {
    pub fn from_rows(rows: Vec<Vec<Elem>>) -> Self {
        let mut p = BiPoly { rows };
        p.normalize();
        p
    }

    /// Drops trailing zero coefficients and empty top rows.
    pub fn normalize(&mut self) {
        for r in &mut self.rows {
            let n = trimmed_len(r);
            r.truncate(n);
        }
        while self.rows.last().is_some_and(|r| r.is_empty()) {
            self.rows.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.iter().all(|c| c.is_zero()))
    }

    pub fn coeff(&self, i: usize, l: usize) -> Elem {
        self.rows.get(l).and_then(|r| r.get(i)).copied().unwrap_or(Elem::ZERO)
    }

    pub fn y_degree(&self) -> Option<usize> {
        self.rows.iter().rposition(|r| trimmed_len(r) > 0)
    }

    /// `(1, k-1)`-weighted degree; `None` for zero.
    pub fn wdeg(&self, k: usize) -> Option<u64> {
        let w = k.saturating_sub(1) as u64;
        self.rows
            .iter()
            .enumerate()
            .filter_map(|(l, r)| {
                let n = trimmed_len(r);
                (n > 0).then(|| (n - 1) as u64 + w * l as u64)
            })
            .max()
    }

    pub fn to_wpoly(&self, k: usize) -> WPoly {
        let mut terms = Vec::new();
        for (l, r) in self.rows.iter().enumerate() {
            for (i, &c) in r.iter().enumerate() {
                if !c.is_zero() {
                    terms.push((vec![i as u32, l as u32], c));
                }
            }
        }
        let mut p = WPoly::zero(1, k);
        for (e, c) in terms {
            p.insert_raw(e, c);
        }
        p
    }

    /// Dense copy of a single-Y-variable [`WPoly`].
    pub fn from_wpoly(q: &WPoly) -> Self {
        assert_eq!(q.vars(), 1, "bivariate polynomial expected");
        let mut rows: Vec<Vec<Elem>> = Vec::new();
        for (e, &c) in q.terms() {
            let (i, l) = (e[0] as usize, e[1] as usize);
            if rows.len() <= l {
                rows.resize(l + 1, Vec::new());
            }
            if rows[l].len() <= i {
                rows[l].resize(i + 1, Elem::ZERO);
            }
            rows[l][i] = c;
        }
        BiPoly::from_rows(rows)
    }

    /// `Q(X, g(X))`.
    pub fn substitute(&self, f: &Field, g: &UniPoly) -> UniPoly {
        // Horner in Y with polynomial coefficients
        let mut acc = UniPoly::zero();
        for r in self.rows.iter().rev() {
            acc = acc.mul(f, g).add(f, &UniPoly::new(r.clone()));
        }
        acc
    }

    /// `Q(0, Y)` as a univariate polynomial in `Y`.
    pub fn at_x_zero(&self) -> UniPoly {
        UniPoly::new(self.rows.iter().map(|r| r.first().copied().unwrap_or(Elem::ZERO)).collect())
    }

    /// Divides by the largest power of `X` dividing every row.
    pub fn strip_x_power(&mut self) {
        let s = self
            .rows
            .iter()
            .filter_map(|r| r.iter().position(|c| !c.is_zero()))
            .min()
            .unwrap_or(0);
        if s > 0 {
            for r in &mut self.rows {
                if r.len() >= s {
                    r.drain(..s);
                } else {
                    r.clear();
                }
            }
        }
    }

    /// `Q(X, X Y + gamma)` with the common power of `X` removed.
    pub fn ruckenstein_step(&self, f: &Field, gamma: Elem) -> BiPoly {
        // Taylor shift in Y: rows become coefficients of Q(X, Y + gamma)
        let mut rows: Vec<Vec<Elem>> = self.rows.clone();
        let n = rows.len();
        if !gamma.is_zero() {
            for i in 0..n {
                for j in (i..n.saturating_sub(1)).rev() {
                    let (lo, hi) = rows.split_at_mut(j + 1);
                    let (dst, src) = (&mut lo[j], &hi[0]);
                    if dst.len() < src.len() {
                        dst.resize(src.len(), Elem::ZERO);
                    }
                    for (d, &s) in dst.iter_mut().zip(src.iter()) {
                        *d = f.add(*d, f.mul(gamma, s));
                    }
                }
            }
        }
        // Y^b -> X^b Y^b
        for (b, r) in rows.iter_mut().enumerate() {
            if b > 0 && !r.is_empty() {
                r.splice(0..0, std::iter::repeat_n(Elem::ZERO, b));
            }
        }
        let mut out = BiPoly::from_rows(rows);
        out.strip_x_power();
        out.normalize();
        out
    }

    pub fn eval(&self, f: &Field, x: Elem, y: Elem) -> Elem {
        self.rows.iter().rev().fold(Elem::ZERO, |acc, r| {
            let rv = r.iter().rev().fold(Elem::ZERO, |a, &c| f.add(f.mul(a, x), c));
            f.add(f.mul(acc, y), rv)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wpoly_round_trip() {
        let f = Field::new(5, 1).unwrap();
        let q = WPoly::from_terms(1, 3, [(vec![4, 0], Elem(1)), (vec![1, 2], Elem(3))], &f);
        let d = BiPoly::from_wpoly(&q);
        assert_eq!(d.wdeg(3), Some(5));
        assert_eq!(d.to_wpoly(3), q);
    }

    #[test]
    fn ruckenstein_step_matches_definition() {
        let f = Field::new(7, 1).unwrap();
        let q = BiPoly::from_rows(vec![vec![Elem(1), Elem(2)], vec![Elem(3)], vec![Elem(0), Elem(5)]]);
        let gamma = Elem(4);
        let s = q.ruckenstein_step(&f, gamma);
        // Q(x, x*y + gamma) = x^s * S(x, y) for some s
        let found = (0..4u64).any(|s_pow| {
            (1..7).all(|x| {
                (0..7).all(|y| {
                    let (x, y) = (Elem(x), Elem(y));
                    let lhs = q.eval(&f, x, f.add(f.mul(x, y), gamma));
                    lhs == f.mul(f.powu(x, s_pow), s.eval(&f, x, y))
                })
            })
        });
        assert!(found);
    }
}
