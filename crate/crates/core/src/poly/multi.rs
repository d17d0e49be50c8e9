use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::poly::{binom_mod, UniPoly};

/// Exponent tuple `(i, j_1, ..., j_M)` of `X^i Y_1^{j_1} ... Y_M^{j_M}`.
pub type Exponents = Vec<u32>;

/// Weighted-degree monomial order with weights `(1, k-1, ..., k-1)`.
///
/// Ties are broken by the total Y-degree, then lexicographically on
/// `(j_1, ..., j_M, i)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MonomialOrder {
    pub y_weight: u32,
}

impl MonomialOrder {
    pub fn new(k: usize) -> Self {
        MonomialOrder { y_weight: k.saturating_sub(1) as u32 }
    }

    pub fn wdeg(&self, e: &[u32]) -> u64 {
        e[0] as u64 + self.y_weight as u64 * e[1..].iter().map(|&j| j as u64).sum::<u64>()
    }

    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        let ydeg = |e: &[u32]| e[1..].iter().map(|&j| j as u64).sum::<u64>();
        self.wdeg(a)
            .cmp(&self.wdeg(b))
            .then_with(|| ydeg(a).cmp(&ydeg(b)))
            .then_with(|| a[1..].cmp(&b[1..]))
            .then_with(|| a[0].cmp(&b[0]))
    }
}

/// Sparse polynomial in `X, Y_1, ..., Y_M` over GF(q).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WPoly {
    vars: usize,
    order: MonomialOrder,
    terms: BTreeMap<Exponents, Elem>,
}

impl WPoly {
    /// The zero polynomial in `vars` Y-variables for dimension `k`.
    pub fn zero(vars: usize, k: usize) -> Self {
        assert!(vars >= 1, "at least one Y variable");
        WPoly { vars, order: MonomialOrder::new(k), terms: BTreeMap::new() }
    }

    pub fn from_terms(vars: usize, k: usize, terms: impl IntoIterator<Item = (Exponents, Elem)>, f: &Field) -> Self {
        let mut p = WPoly::zero(vars, k);
        for (e, c) in terms {
            p.add_term(f, e, c);
        }
        p
    }

    /// `Y_1 - g(X)` style linear factor for `vars = 1`.
    pub fn y_minus(f: &Field, k: usize, g: &UniPoly) -> Self {
        let mut p = WPoly::zero(1, k);
        p.add_term(f, vec![0, 1], Elem::ONE);
        for (i, &c) in g.coeffs().iter().enumerate() {
            p.add_term(f, vec![i as u32, 0], f.neg(c));
        }
        p
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Elem)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[u32]) -> Elem {
        self.terms.get(e).copied().unwrap_or(Elem::ZERO)
    }

    pub fn add_term(&mut self, f: &Field, e: Exponents, c: Elem) {
        assert_eq!(e.len(), self.vars + 1, "exponent arity");
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert(Elem::ZERO);
        *slot = f.add(*slot, c);
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    /// Inserts a nonzero term at an exponent not yet present.
    pub(crate) fn insert_raw(&mut self, e: Exponents, c: Elem) {
        debug_assert!(!c.is_zero() && !self.terms.contains_key(&e));
        self.terms.insert(e, c);
    }

    /// Maximum weighted degree over the support.
    pub fn wdeg(&self) -> Result<u64> {
        self.terms.keys().map(|e| self.order.wdeg(e)).max().ok_or(Error::ZeroPolynomial)
    }

    /// Leading monomial under the fixed order.
    pub fn leading_monomial(&self) -> Option<&Exponents> {
        self.terms.keys().max_by(|a, b| self.order.cmp(a, b))
    }

    /// Total Y-degree.
    pub fn y_degree(&self) -> Option<u64> {
        self.terms.keys().map(|e| e[1..].iter().map(|&j| j as u64).sum()).max()
    }

    pub fn add(&self, f: &Field, other: &WPoly) -> WPoly {
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(f, e.clone(), c);
        }
        out
    }

    pub fn mul(&self, f: &Field, other: &WPoly) -> WPoly {
        assert_eq!(self.vars, other.vars);
        let mut out = WPoly::zero(self.vars, self.order.y_weight as usize + 1);
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(f, e, f.mul(ca, cb));
            }
        }
        out
    }

    pub fn pow(&self, f: &Field, e: u32) -> WPoly {
        let mut one = WPoly::zero(self.vars, self.order.y_weight as usize + 1);
        one.add_term(f, vec![0; self.vars + 1], Elem::ONE);
        (0..e).fold(one, |acc, _| acc.mul(f, self))
    }

    /// Evaluation at `point = (x, y_1, ..., y_M)`.
    pub fn eval(&self, f: &Field, point: &[Elem]) -> Elem {
        assert_eq!(point.len(), self.vars + 1);
        self.terms.iter().fold(Elem::ZERO, |acc, (e, &c)| {
            let mono = e.iter().zip(point).fold(c, |m, (&d, &v)| f.mul(m, f.powu(v, d as u64)));
            f.add(acc, mono)
        })
    }

    /// Coefficient of `X^a Y_1^{b_1} ... Y_M^{b_M}` in `Q(X + x, Y + y)`,
    /// i.e. the Hasse derivative of that order evaluated at the point.
    pub fn hasse_coeff(&self, f: &Field, orders: &[u32], point: &[Elem]) -> Elem {
        assert_eq!(orders.len(), self.vars + 1);
        assert_eq!(point.len(), self.vars + 1);
        let p = f.characteristic();
        let mut acc = Elem::ZERO;
        'terms: for (e, &c) in &self.terms {
            let mut t = c;
            for ((&d, &o), &v) in e.iter().zip(orders).zip(point) {
                if d < o {
                    continue 'terms;
                }
                let b = binom_mod(d as u64, o as u64, p);
                if b == 0 {
                    continue 'terms;
                }
                t = f.mul(t, f.mul(f.from_int(b as u64), f.powu(v, (d - o) as u64)));
            }
            acc = f.add(acc, t);
        }
        acc
    }

    /// True iff every Hasse derivative of total order below `m` vanishes at `point`.
    pub fn has_multiplicity(&self, f: &Field, point: &[Elem], m: u32) -> bool {
        if m == 0 {
            return true;
        }
        order_tuples(self.vars + 1, m).all(|o| self.hasse_coeff(f, &o, point).is_zero())
    }

    /// `Q(X, g_1(X), ..., g_M(X))`.
    pub fn substitute(&self, f: &Field, gs: &[UniPoly]) -> UniPoly {
        assert_eq!(gs.len(), self.vars);
        let mut acc = UniPoly::zero();
        for (e, &c) in &self.terms {
            let mut t = UniPoly::monomial(e[0] as usize).scale(f, c);
            for (&d, g) in e[1..].iter().zip(gs) {
                for _ in 0..d {
                    t = t.mul(f, g);
                }
            }
            acc = acc.add(f, &t);
        }
        acc
    }
}

/// All tuples of `len` non-negative integers with sum below `m`.
pub fn order_tuples(len: usize, m: u32) -> impl Iterator<Item = Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; len];
    fn rec(pos: usize, budget: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pos == cur.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..budget {
            cur[pos] = v;
            rec(pos + 1, budget - v, cur, out);
        }
        cur[pos] = 0;
    }
    if m > 0 {
        rec(0, m, &mut cur, &mut out);
    }
    out.into_iter()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn f5() -> Field {
        Field::new(5, 1).unwrap()
    }

    #[test]
    fn wdeg_examples() {
        let f = f5();
        let y = WPoly::from_terms(1, 3, [(vec![0, 1], Elem(1))], &f);
        assert_eq!(y.wdeg().unwrap(), 2);
        let q = WPoly::from_terms(1, 3, [(vec![4, 0], Elem(1)), (vec![1, 2], Elem(1))], &f);
        assert_eq!(q.wdeg().unwrap(), 5);
        let y1y2 = WPoly::from_terms(2, 2, [(vec![0, 1, 1], Elem(1))], &f);
        assert_eq!(y1y2.wdeg().unwrap(), 2);
        assert_eq!(WPoly::zero(1, 2).wdeg(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn order_tuple_count() {
        assert_eq!(order_tuples(2, 3).count(), 6);
        assert_eq!(order_tuples(3, 2).count(), 4);
        assert_eq!(order_tuples(2, 0).count(), 0);
    }

    #[test]
    fn hasse_examples() {
        let f = Field::new(2, 4).unwrap();
        let c = Elem(7);
        let y_minus_c = WPoly::from_terms(1, 2, [(vec![0, 1], Elem(1)), (vec![0, 0], c)], &f);
        let sq = y_minus_c.pow(&f, 2);
        let x0 = Elem(3);
        assert!(sq.hasse_coeff(&f, &[0, 1], &[x0, c]).is_zero());
        assert!(!sq.hasse_coeff(&f, &[0, 2], &[x0, c]).is_zero());

        let g = UniPoly::new(vec![Elem(2), Elem(5)]);
        let lin = WPoly::y_minus(&f, 2, &g);
        assert!(lin.hasse_coeff(&f, &[0, 0], &[x0, g.eval(&f, x0)]).is_zero());
    }

    #[test]
    fn multiplicity_examples() {
        let f = f5();
        let c = Elem(2);
        let cube = WPoly::from_terms(1, 2, [(vec![0, 1], Elem(1)), (vec![0, 0], f.neg(c))], &f).pow(&f, 3);
        assert!(cube.has_multiplicity(&f, &[Elem(4), c], 3));
        assert!(!cube.has_multiplicity(&f, &[Elem(4), c], 4));
        assert!(cube.has_multiplicity(&f, &[Elem(1), Elem(1)], 0));
        let xy = WPoly::from_terms(1, 2, [(vec![1, 1], Elem(1))], &f);
        assert!(xy.has_multiplicity(&f, &[Elem(0), Elem(0)], 2));
        assert!(!xy.has_multiplicity(&f, &[Elem(0), Elem(0)], 3));
    }

    fn random_poly(f: &Field, rng: &mut impl Rng, vars: usize, k: usize, terms: usize, maxdeg: u32) -> WPoly {
        let q = f.order();
        let mut p = WPoly::zero(vars, k);
        for _ in 0..terms {
            let e: Vec<u32> = (0..=vars).map(|_| rng.gen_range(0..=maxdeg)).collect();
            p.add_term(f, e, Elem(rng.gen_range(1..q) as u16));
        }
        p
    }

    #[test]
    fn zero_order_hasse_is_evaluation() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for (p, m) in [(2, 4), (5, 1), (3, 2)] {
            let f = Field::new(p, m).unwrap();
            for _ in 0..100 {
                let vars = rng.gen_range(1..=2);
                let q = random_poly(&f, &mut rng, vars, 3, 6, 5);
                let pt: Vec<Elem> = (0..=vars).map(|_| Elem(rng.gen_range(0..f.order()) as u16)).collect();
                assert_eq!(q.hasse_coeff(&f, &vec![0; vars + 1], &pt), q.eval(&f, &pt));
            }
        }
    }

    #[test]
    fn hasse_matches_shifted_expansion() {
        // Q(X + x, Y + y) expanded by brute force, compared coefficient-wise
        let f = Field::new(3, 2).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let q = random_poly(&f, &mut rng, 1, 2, 5, 4);
            let (x, y) = (Elem(rng.gen_range(0..9)), Elem(rng.gen_range(0..9)));
            let sx = WPoly::from_terms(1, 2, [(vec![1, 0], Elem(1)), (vec![0, 0], x)], &f);
            let sy = WPoly::from_terms(1, 2, [(vec![0, 1], Elem(1)), (vec![0, 0], y)], &f);
            let mut shifted = WPoly::zero(1, 2);
            for (e, &c) in q.terms() {
                let mut t = WPoly::from_terms(1, 2, [(vec![0, 0], c)], &f);
                t = t.mul(&f, &sx.pow(&f, e[0])).mul(&f, &sy.pow(&f, e[1]));
                shifted = shifted.add(&f, &t);
            }
            for a in 0..5 {
                for b in 0..5 {
                    assert_eq!(q.hasse_coeff(&f, &[a, b], &[x, y]), shifted.coeff(&[a, b]));
                }
            }
        }
    }

    #[test]
    fn product_multiplicities_add() {
        let f = Field::new(2, 4).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let pt = [Elem(rng.gen_range(0..16)), Elem(rng.gen_range(0..16))];
            // factors built as powers of lines through pt, times random junk
            let mq = rng.gen_range(0..3);
            let mr = rng.gen_range(0..3);
            let line = WPoly::from_terms(1, 2, [(vec![0, 1], Elem(1)), (vec![1, 0], Elem(rng.gen_range(0..16))),
                (vec![0, 0], Elem(0))], &f);
            let shift = {
                let c = line.eval(&f, &pt);
                WPoly::from_terms(1, 2, [(vec![0, 0], c)], &f)
            };
            let through = line.add(&f, &shift);
            assert!(through.has_multiplicity(&f, &pt, 1));
            let junk = random_poly(&f, &mut rng, 1, 2, 3, 2);
            let qf = through.pow(&f, mq).mul(&f, &junk);
            let rf = through.pow(&f, mr);
            if qf.is_zero() {
                continue;
            }
            let prod = qf.mul(&f, &rf);
            assert!(prod.has_multiplicity(&f, &pt, mq + mr));
            assert_eq!(prod.wdeg().unwrap(), qf.wdeg().unwrap() + rf.wdeg().unwrap());
        }
    }

    #[test]
    fn order_is_total_and_multiplicative() {
        let o = MonomialOrder::new(3);
        let a = [1u32, 2];
        let b = [5u32, 0];
        let c = [3u32, 1];
        // equal weighted degree 5, broken by Y-degree
        assert_eq!(o.cmp(&a, &b), Ordering::Greater);
        assert_eq!(o.cmp(&b, &a), Ordering::Less);
        let mul = |x: &[u32], y: &[u32]| -> Vec<u32> { x.iter().zip(y).map(|(p, q)| p + q).collect() };
        assert_eq!(o.cmp(&a, &b), o.cmp(&mul(&a, &c), &mul(&b, &c)));
        assert_eq!(o.cmp(&a, &a), Ordering::Equal);
    }

    #[test]
    fn substitute_root() {
        let f = f5();
        let g = UniPoly::new(vec![Elem(1), Elem(2)]);
        let q = WPoly::y_minus(&f, 2, &g).mul(&f, &WPoly::from_terms(1, 2, [(vec![1, 0], Elem(1))], &f));
        assert!(q.substitute(&f, &[g]).is_zero());
    }
}
