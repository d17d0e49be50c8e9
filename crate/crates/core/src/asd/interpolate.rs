use serde::{Deserialize, Serialize};

use crate::asd::multiplicity::{list_size_bound, MultiplicityMatrix};
use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::kernel::{self, Nibbles};
use crate::poly::{binom_mod, order_tuples, BiPoly, Exponents, MonomialOrder, WPoly};

/// Interpolation point with its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterpolationPoint {
    pub x: Elem,
    pub y: Elem,
    pub m: u32,
}

/// Output of [`interpolate`].
#[derive(Clone, Debug)]
pub struct Interpolation {
    pub poly: BiPoly,
    pub wdeg: u64,
    pub y_degree: usize,
    /// Linear constraints processed; equals the cost of the multiplicity matrix.
    pub constraints: u64,
    /// Number of candidate polynomials carried (Y-degree cap plus one).
    pub tracks: usize,
}

/// Points `(xs[j], symbol)` for every nonzero entry, with the symbol mapped
/// through `map` (identity for plain RS, untwisting for GRS).
pub fn matrix_points(
    m: &MultiplicityMatrix,
    xs: &[Elem],
    mut map: impl FnMut(usize, Elem) -> Elem,
) -> Result<Vec<InterpolationPoint>> {
    if xs.len() != m.n() {
        return Err(Error::LengthMismatch { expected: m.n(), got: xs.len() });
    }
    Ok(m.entries().map(|(j, s, mm)| InterpolationPoint { x: xs[j], y: map(j, s), m: mm }).collect())
}

/// Koetter interpolation over a matrix, with the Y-degree capped by the
/// list-size bound of its cost.
pub fn interpolate_matrix(f: &Field, m: &MultiplicityMatrix, xs: &[Elem], k: usize) -> Result<Interpolation> {
    let pts = matrix_points(m, xs, |_, s| s)?;
    let cap = list_size_bound(m.cost(), k.max(2))? as usize;
    interpolate(f, &pts, k, cap)
}

/// Minimal `(1, k-1)`-weighted-degree `Q(X, Y)` with `deg_Y Q <= max_y_degree`
/// vanishing with the given multiplicities, by Koetter's iterative algorithm.
///
/// Points must be distinct. Constraints are processed point by point, Hasse
/// orders `(a, b)` with `b` outer and `a` inner.
pub fn interpolate(f: &Field, points: &[InterpolationPoint], k: usize, max_y_degree: usize) -> Result<Interpolation> {
    if k < 2 {
        return Err(Error::InvalidParameter("interpolation needs k >= 2".into()));
    }
    let pts: Vec<InterpolationPoint> = points.iter().copied().filter(|p| p.m > 0).collect();
    if pts.is_empty() {
        return Err(Error::DegenerateMultiplicity);
    }
    {
        let mut keys: Vec<(Elem, Elem)> = pts.iter().map(|p| (p.x, p.y)).collect();
        keys.sort();
        if keys.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter("repeated interpolation point".into()));
        }
    }
    let cost: u64 = pts.iter().map(|p| p.m as u64 * (p.m as u64 + 1) / 2).sum();
    let tracks = max_y_degree + 1;
    let bound = degree_bound(k as u64 - 1, tracks as u64, cost);
    // typical optima sit well below the bound; low limits fail cheaply
    let mut eng = None;
    for limit in (2..=8).map(|i| bound * i / 8) {
        let mut e = Engine::new(f, k - 1, tracks, cost, limit);
        if pts.iter().all(|p| e.process_point(p.x, p.y, p.m as usize)) {
            eng = Some(e);
            break;
        }
    }
    let eng = eng.expect("a solution exists within the degree bound");
    let best = eng.best();
    let poly = eng.extract(best);
    let wdeg = poly.wdeg(k).expect("interpolation output is nonzero");
    debug_assert_eq!(wdeg, eng.key[best]);
    let y_degree = poly.y_degree().unwrap_or(0);
    Ok(Interpolation { poly, wdeg, y_degree, constraints: eng.consumed, tracks: eng.tracks })
}

/// Smallest `D` such that monomials of weighted degree at most `D` and
/// Y-degree below `tracks` outnumber `cost`; a solution always exists there.
fn degree_bound(k1: u64, tracks: u64, cost: u64) -> u64 {
    let count = |d: u64| -> u64 { (0..tracks.min(d / k1 + 1)).map(|j| d - j * k1 + 1).sum() };
    let (mut lo, mut hi) = (0u64, 1u64);
    while count(hi) <= cost {
        if hi > u64::MAX / 4 {
            return u64::MAX;
        }
        hi *= 2;
    }
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if count(mid) > cost {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

enum Mode {
    /// Characteristic 2, at most 256 elements: shuffle kernels per constant.
    Nibble(Vec<Nibbles>),
    Generic,
}

struct Kernel<'a> {
    f: &'a Field,
    mode: Mode,
}

impl<'a> Kernel<'a> {
    fn new(f: &'a Field) -> Self {
        let mode = if kernel::supported(f) {
            Mode::Nibble(f.elements().map(|r| Nibbles::new(f, r)).collect())
        } else {
            Mode::Generic
        };
        Kernel { f, mode }
    }

    /// `dst -= r * src`.
    #[inline]
    fn axpy(&self, dst: &mut [u16], src: &[u16], r: u16) {
        if r == 0 {
            return;
        }
        match &self.mode {
            Mode::Nibble(t) => kernel::xor_mul(dst, src, &t[r as usize]),
            Mode::Generic => {
                let f = self.f;
                for (d, &s) in dst.iter_mut().zip(src) {
                    *d = f.sub(Elem(*d), f.mul(Elem(r), Elem(s))).0;
                }
            }
        }
    }

    /// `dst += r * src`.
    #[inline]
    fn axpy_add(&self, dst: &mut [u16], src: &[u16], r: u16) {
        match &self.mode {
            Mode::Nibble(_) => self.axpy(dst, src, r),
            Mode::Generic => {
                let nr = self.f.neg(Elem(r)).0;
                self.axpy(dst, src, nr)
            }
        }
    }

    /// One synthetic-division pass by `(Z - z)` over `v[from..]`:
    /// `v[i] += z * v[i + 1]` from the top down.
    #[inline]
    fn horner_pass(&self, v: &mut [u16], from: usize, z: u16) {
        if v.len() < from + 2 || z == 0 {
            return;
        }
        match &self.mode {
            Mode::Nibble(t) => {
                let t = &t[z as usize];
                for i in (from..v.len() - 1).rev() {
                    v[i] ^= (t.lo[(v[i + 1] & 15) as usize] ^ t.hi[(v[i + 1] >> 4) as usize]) as u16;
                }
            }
            Mode::Generic => {
                let f = self.f;
                for i in (from..v.len() - 1).rev() {
                    v[i] = f.add(Elem(v[i]), f.mul(Elem(z), Elem(v[i + 1]))).0;
                }
            }
        }
    }

    /// `v <- (X - x0) v` where `v[len]` is free space.
    #[inline]
    fn times_linear(&self, v: &mut [u16], len: usize, x0: u16, tmp: &mut Vec<u16>) {
        v[len] = 0;
        match &self.mode {
            Mode::Nibble(t) => {
                tmp.clear();
                tmp.resize(len + 1, 0);
                kernel::mul_into(tmp, &v[..=len], &t[x0 as usize]);
                v.copy_within(0..len, 1);
                v[0] = 0;
                for (d, &s) in v[..=len].iter_mut().zip(tmp.iter()) {
                    *d ^= s;
                }
            }
            Mode::Generic => {
                let f = self.f;
                let nx0 = f.neg(Elem(x0));
                for i in (1..=len).rev() {
                    v[i] = f.add(Elem(v[i - 1]), f.mul(nx0, Elem(v[i]))).0;
                }
                v[0] = f.mul(nx0, Elem(v[0])).0;
            }
        }
    }
}

/// Koetter's elimination over `tracks` candidate polynomials. Tracks whose
/// leading weighted degree exceeds `limit` are dropped: they can only ever
/// be combined into other tracks above the limit, so the minimum below the
/// limit is unaffected.
struct Engine<'a> {
    kern: Kernel<'a>,
    f: &'a Field,
    k1: u64,
    tracks: usize,
    limit: u64,
    alive: Vec<usize>,
    /// Largest weighted degree the storage layout holds.
    cap: u64,
    /// Row `l` (coefficient of `Y^l`) of a track at `off[l]..off[l + 1]`.
    off: Vec<usize>,
    data: Vec<Vec<u16>>,
    /// Weighted degree of each track's leading monomial; its Y-degree is the track index.
    key: Vec<u64>,
    /// Hasse coefficients at the current point, packed in processing order.
    jets: Vec<Vec<u16>>,
    work: Vec<u16>,
    tmp: Vec<u16>,
    /// `[z, 1, z, z^2, ...]` for the current point's coordinates.
    xpow: Vec<u16>,
    ypow: Vec<u16>,
    consumed: u64,
}

fn layout(k1: u64, tracks: usize, cap: u64) -> Vec<usize> {
    let rows = ((cap / k1) as usize + 1).min(tracks);
    let mut off = vec![0usize; rows + 1];
    for l in 0..rows {
        off[l + 1] = off[l] + (cap - l as u64 * k1 + 2) as usize;
    }
    off
}

impl<'a> Engine<'a> {
    fn new(f: &'a Field, k1: usize, tracks: usize, cost: u64, limit: u64) -> Self {
        let k1 = k1 as u64;
        let top = (tracks as u64 - 1) * k1;
        let cap = limit.min(degree_bound(k1, tracks as u64, cost).max(top));
        let off = layout(k1, tracks, cap);
        let alive: Vec<usize> = (0..tracks).filter(|&j| j as u64 * k1 <= limit).collect();
        let mut data = vec![Vec::new(); tracks];
        for &j in &alive {
            data[j] = vec![0u16; off[off.len() - 1]];
            data[j][off[j]] = 1;
        }
        let key = (0..tracks).map(|j| j as u64 * k1).collect();
        Engine {
            kern: Kernel::new(f),
            f,
            k1,
            tracks,
            limit,
            alive,
            cap,
            off,
            data,
            key,
            jets: vec![Vec::new(); tracks],
            work: Vec::new(),
            tmp: Vec::new(),
            xpow: Vec::new(),
            ypow: Vec::new(),
            consumed: 0,
        }
    }

    fn row_len(&self, key: u64, l: usize) -> usize {
        let off = l as u64 * self.k1;
        if key >= off {
            (key - off + 1) as usize
        } else {
            0
        }
    }

    fn rows_in(&self, key: u64) -> usize {
        ((key / self.k1) as usize + 1).min(self.tracks)
    }

    fn grow(&mut self, cap: u64) {
        let off = layout(self.k1, self.tracks, cap);
        for &j in &self.alive {
            let d = &self.data[j];
            let mut nd = vec![0u16; off[off.len() - 1]];
            for l in 0..self.off.len() - 1 {
                let (a, b) = (self.off[l], self.off[l + 1]);
                nd[off[l]..off[l] + b - a].copy_from_slice(&d[a..b]);
            }
            self.data[j] = nd;
        }
        self.cap = cap;
        self.off = off;
    }

    /// Characteristic 2: by Lucas, the order-`a` Hasse coefficient of
    /// `sum_i v_i Z^i` at `z` is `z^-a sum_{i contains a} v_i z^i` (bitwise).
    fn compute_jets_char2(&mut self, j: usize, x0: u16, y0: u16, m: usize, offs: &[usize]) {
        let f = self.f;
        let key = self.key[j];
        let rows = self.rows_in(key);
        let mb = m.min(rows);
        let width = self.row_len(key, 0);
        for (pw, z, len) in [(&mut self.xpow, x0, width), (&mut self.ypow, y0, rows)] {
            if pw.first() != Some(&z) || pw.len() < len + 1 {
                pw.clear();
                let mut acc = Elem::ONE;
                for _ in 0..=len.max(m) {
                    pw.push(acc.0);
                    acc = f.mul(acc, Elem(z));
                }
                pw.insert(0, z);
            }
        }
        let mut work = std::mem::take(&mut self.work);
        work.clear();
        work.resize(mb * width, 0);
        let mut jets = std::mem::take(&mut self.jets[j]);
        jets.clear();
        jets.resize(offs[m], 0);
        for b in 0..mb {
            let lb = self.row_len(key, b);
            let dst = &mut work[b * width..b * width + lb];
            let mut l = b;
            while l < rows {
                let c = self.ypow[1 + l - b];
                let len = self.row_len(key, l);
                let o = self.off[l];
                self.kern.axpy_add(&mut dst[..len], &self.data[j][o..o + len], c);
                if y0 == 0 {
                    break;
                }
                l = (l + 1) | b;
            }
            let v = dst;
            if x0 == 0 {
                for a in 0..(m - b).min(lb) {
                    jets[offs[b] + a] = v[a];
                }
                continue;
            }
            for (i, e) in v.iter_mut().enumerate() {
                *e = f.mul(Elem(*e), Elem(self.xpow[1 + i])).0;
            }
            let xinv = f.inv(Elem(x0)).expect("nonzero");
            let mut scale = Elem::ONE;
            for a in 0..(m - b).min(lb) {
                let mut acc = 0u16;
                let mut i = a;
                while i < lb {
                    acc ^= v[i];
                    i = (i + 1) | a;
                }
                jets[offs[b] + a] = f.mul(Elem(acc), scale).0;
                scale = f.mul(scale, xinv);
            }
        }
        self.work = work;
        self.jets[j] = jets;
    }

    fn compute_jets(&mut self, j: usize, x0: u16, y0: u16, m: usize, offs: &[usize]) {
        if matches!(self.kern.mode, Mode::Nibble(_)) {
            return self.compute_jets_char2(j, x0, y0, m, offs);
        }
        let key = self.key[j];
        let rows = self.rows_in(key);
        let lens: Vec<usize> = (0..rows).map(|l| self.row_len(key, l)).collect();
        let width = lens[0];
        self.work.clear();
        self.work.resize(rows * width, 0);
        for l in 0..rows {
            let o = self.off[l];
            self.work[l * width..l * width + lens[l]].copy_from_slice(&self.data[j][o..o + lens[l]]);
        }
        let jets = &mut self.jets[j];
        jets.clear();
        jets.resize(offs[m], 0);
        // Taylor shift in Y, stopping once the first m rows are final
        if y0 != 0 {
            for b in 0..m.min(rows) {
                for l in (b..rows - 1).rev() {
                    let (lo, hi) = self.work.split_at_mut((l + 1) * width);
                    self.kern.axpy_add(&mut lo[l * width..l * width + lens[l]], &hi[..lens[l + 1]], y0);
                }
            }
        }
        // Taylor coefficients in X of each Y-jet row
        for b in 0..m.min(rows) {
            let v = &mut self.work[b * width..b * width + lens[b]];
            for a in 0..(m - b).min(v.len()) {
                self.kern.horner_pass(v, a, x0);
                jets[offs[b] + a] = v[a];
            }
        }
    }

    /// Processes all constraints of one point; `false` once every track is
    /// beyond the limit.
    fn process_point(&mut self, x: Elem, y: Elem, m: usize) -> bool {
        let (x0, y0) = (x.0, y.0);
        let offs: Vec<usize> = (0..=m).scan(0, |acc, b| {
            let o = *acc;
            *acc += m.saturating_sub(b);
            Some(o)
        }).collect();
        for i in 0..self.alive.len() {
            let j = self.alive[i];
            self.compute_jets(j, x0, y0, m, &offs);
        }
        let f = self.f;
        for b in 0..m {
            for a in 0..m - b {
                self.consumed += 1;
                let p = offs[b] + a;
                let mut star: Option<usize> = None;
                for &j in &self.alive {
                    if self.jets[j][p] != 0 && star.is_none_or(|s| self.key[j] < self.key[s]) {
                        star = Some(j);
                    }
                }
                let Some(s) = star else { continue };
                let dinv = f.inv(Elem(self.jets[s][p])).expect("nonzero discrepancy");
                let mut skey = self.key[s];
                if skey > self.cap {
                    self.grow(skey.max(self.cap * 2));
                }
                let srows = self.rows_in(skey);
                // rows past their length are zero, so one contiguous span covers the star
                let span = self.off[srows - 1] + self.row_len(skey, srows - 1);
                let star_data = std::mem::take(&mut self.data[s]);
                let star_jets = std::mem::take(&mut self.jets[s]);
                for &j in &self.alive {
                    if j == s || self.jets[j][p] == 0 {
                        continue;
                    }
                    let r = f.mul(Elem(self.jets[j][p]), dinv).0;
                    self.kern.axpy(&mut self.data[j][..span], &star_data[..span], r);
                    self.kern.axpy(&mut self.jets[j][p..], &star_jets[p..], r);
                }
                self.data[s] = star_data;
                self.jets[s] = star_jets;
                // Q* <- (X - x0) Q*
                for l in 0..srows {
                    let len = self.row_len(skey, l);
                    let (a, z) = (self.off[l], self.off[l + 1]);
                    self.kern.times_linear(&mut self.data[s][a..z], len, x0, &mut self.tmp);
                }
                skey += 1;
                self.key[s] = skey;
                let js = &mut self.jets[s];
                for bb in b..m {
                    let (o, len) = (offs[bb], m - bb);
                    js.copy_within(o..o + len - 1, o + 1);
                    js[o] = 0;
                }
                if self.key[s] > self.limit {
                    self.alive.retain(|&j| j != s);
                    self.data[s] = Vec::new();
                    if self.alive.is_empty() {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn best(&self) -> usize {
        *self.alive.iter().min_by_key(|&&j| (self.key[j], j)).expect("at least one track")
    }

    fn extract(&self, j: usize) -> BiPoly {
        let key = self.key[j];
        let rows = (0..self.rows_in(key))
            .map(|l| {
                let len = self.row_len(key, l);
                self.data[j][self.off[l]..self.off[l] + len].iter().map(|&v| Elem(v)).collect()
            })
            .collect();
        BiPoly::from_rows(rows)
    }
}

/// Multivariate interpolation point `(x, y_1, ..., y_M)` with multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoint {
    pub coords: Vec<Elem>,
    pub m: u32,
}

/// Minimal-order nonzero `Q(X, Y_1..Y_M)` meeting all multiplicity
/// constraints, by dense Gaussian elimination over the monomials of weighted
/// degree at most `max_wdeg`. Returns `None` if no such `Q` exists. Intended
/// for tiny instances only.
pub fn interpolate_dense(
    f: &Field,
    points: &[MultiPoint],
    k: usize,
    vars: usize,
    max_wdeg: u64,
) -> Result<Option<WPoly>> {
    if let Some(p) = points.iter().find(|p| p.coords.len() != vars + 1) {
        return Err(Error::LengthMismatch { expected: vars + 1, got: p.coords.len() });
    }
    let order = MonomialOrder::new(k);
    let mut monos = monomials_up_to(vars, k, max_wdeg);
    monos.sort_by(|a, b| order.cmp(a, b));
    // constraint functionals: (point, orders)
    let mut funcs: Vec<(&MultiPoint, Vec<u32>)> = Vec::new();
    for p in points {
        for o in order_tuples(vars + 1, p.m) {
            funcs.push((p, o));
        }
    }
    let hasse = |e: &Exponents, pt: &MultiPoint, o: &[u32]| -> Elem {
        let mut acc = Elem::ONE;
        for ((&ei, &oi), &c) in e.iter().zip(o).zip(&pt.coords) {
            if oi > ei {
                return Elem::ZERO;
            }
            let b = f.from_int(binom_mod(ei as u64, oi as u64, f.characteristic()) as u64);
            acc = f.mul(acc, f.mul(b, f.powu(c, (ei - oi) as u64)));
        }
        acc
    };
    // incremental elimination on columns; `basis` holds (pivot row, reduced column, combination)
    let mut basis: Vec<(usize, Vec<Elem>, Vec<Elem>)> = Vec::new();
    for (ci, e) in monos.iter().enumerate() {
        let mut col: Vec<Elem> = funcs.iter().map(|(p, o)| hasse(e, p, o)).collect();
        let mut comb = vec![Elem::ZERO; monos.len()];
        comb[ci] = Elem::ONE;
        for (piv, bcol, bcomb) in &basis {
            let c = col[*piv];
            if c.is_zero() {
                continue;
            }
            let r = f.div(c, bcol[*piv])?;
            for (x, &y) in col.iter_mut().zip(bcol) {
                *x = f.sub(*x, f.mul(r, y));
            }
            for (x, &y) in comb.iter_mut().zip(bcomb) {
                *x = f.sub(*x, f.mul(r, y));
            }
        }
        match col.iter().position(|c| !c.is_zero()) {
            Some(piv) => basis.push((piv, col, comb)),
            None => {
                let terms = monos.iter().cloned().zip(comb).filter(|t| !t.1.is_zero());
                return Ok(Some(WPoly::from_terms(vars, k, terms, f)));
            }
        }
    }
    Ok(None)
}

fn monomials_up_to(vars: usize, k: usize, max_wdeg: u64) -> Vec<Exponents> {
    let w = (k as u64).saturating_sub(1);
    let mut out = Vec::new();
    let mut cur = vec![0u32; vars + 1];
    fn rec(i: usize, budget: u64, w: u64, cur: &mut Vec<u32>, out: &mut Vec<Exponents>) {
        if i == cur.len() - 1 {
            for y in 0..=budget.checked_div(w).unwrap_or(0) {
                cur[i] = y as u32;
                // X exponent absorbs the remaining budget
                let rest = budget - y * w;
                for x in 0..=rest {
                    cur[0] = x as u32;
                    out.push(cur.clone());
                }
            }
            return;
        }
        let lim = budget.checked_div(w).unwrap_or(0);
        for y in 0..=lim {
            cur[i] = y as u32;
            rec(i + 1, budget - y * w, w, cur, out);
        }
    }
    if vars == 0 {
        return (0..=max_wdeg).map(|x| vec![x as u32]).collect();
    }
    rec(1, max_wdeg, w, &mut cur, &mut out);
    out
}
