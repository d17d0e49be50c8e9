use serde::{Deserialize, Serialize};

use crate::channel::PosteriorMatrix;
use crate::error::{Error, Result};
use crate::gf::Elem;

/// Column-sparse q x n matrix of interpolation multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityMatrix {
    q: usize,
    lambda: u32,
    cols: Vec<Vec<(Elem, u32)>>,
}

impl MultiplicityMatrix {
    /// Builds a matrix from per-column `(symbol, multiplicity)` lists; zero
    /// entries are dropped and columns sorted by symbol.
    pub fn from_columns(q: usize, lambda: u32, cols: Vec<Vec<(Elem, u32)>>) -> Result<Self> {
        let mut out = Vec::with_capacity(cols.len());
        for mut col in cols {
            col.retain(|e| e.1 > 0);
            col.sort_by_key(|e| e.0);
            if col.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(Error::InvalidParameter("repeated symbol in a multiplicity column".into()));
            }
            if col.iter().any(|e| e.0.value() >= q) {
                return Err(Error::InvalidParameter("multiplicity symbol outside the alphabet".into()));
            }
            out.push(col);
        }
        Ok(MultiplicityMatrix { q, lambda, cols: out })
    }

    /// Multiplicity `m` at the received symbol of every column.
    pub fn uniform(q: usize, y: &[Elem], m: u32) -> Self {
        let cols = y.iter().map(|&s| if m > 0 { vec![(s, m)] } else { Vec::new() }).collect();
        MultiplicityMatrix { q, lambda: m, cols }
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn n(&self) -> usize {
        self.cols.len()
    }

    pub fn lambda(&self) -> u32 {
        self.lambda
    }

    pub fn column(&self, j: usize) -> &[(Elem, u32)] {
        &self.cols[j]
    }

    pub fn get(&self, symbol: Elem, j: usize) -> u32 {
        self.cols[j].binary_search_by_key(&symbol, |e| e.0).map_or(0, |i| self.cols[j][i].1)
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    /// Nonzero entries as `(column, symbol, multiplicity)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, Elem, u32)> + '_ {
        self.cols.iter().enumerate().flat_map(|(j, c)| c.iter().map(move |&(s, m)| (j, s, m)))
    }

    /// `S(v) = sum_j m_{v_j, j}`.
    pub fn score(&self, v: &[Elem]) -> Result<u64> {
        if v.len() != self.n() {
            return Err(Error::LengthMismatch { expected: self.n(), got: v.len() });
        }
        Ok(v.iter().enumerate().map(|(j, &s)| self.get(s, j) as u64).sum())
    }

    /// `C = 1/2 sum m (m + 1)`, the number of interpolation constraints.
    pub fn cost(&self) -> u64 {
        self.entries().map(|(_, _, m)| m as u64 * (m as u64 + 1) / 2).sum()
    }

    pub fn max_entry(&self) -> u32 {
        self.entries().map(|e| e.2).max().unwrap_or(0)
    }
}

/// Slack absorbing representation error in `lambda * pi` before flooring.
pub const PMAS_SLACK: f64 = 1e-9;

/// `m_{i,j} = floor(lambda * pi_{i,j})`.
pub fn pmas(post: &PosteriorMatrix, lambda: u32) -> Result<MultiplicityMatrix> {
    if lambda < 1 {
        return Err(Error::InvalidParameter("lambda must be at least 1".into()));
    }
    let cols = (0..post.n())
        .map(|j| {
            post.column(j)
                .iter()
                .map(|&(s, p)| (s, (lambda as f64 * p + PMAS_SLACK).floor() as u32))
                .filter(|e| e.1 > 0)
                .collect()
        })
        .collect();
    Ok(MultiplicityMatrix { q: post.q(), lambda, cols })
}

/// Verdict of a threshold test. `margin` is `lhs - rhs` of the integer comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Threshold {
    pub ok: bool,
    pub margin: i128,
}

/// `S(c)^2 > 2 (k - 1) C`, exactly.
pub fn threshold_ok(m: &MultiplicityMatrix, c: &[Elem], k: usize) -> Result<Threshold> {
    let s = m.score(c)? as i128;
    let rhs = 2 * (k as i128 - 1) * m.cost() as i128;
    let margin = s * s - rhs;
    Ok(Threshold { ok: margin > 0, margin })
}

/// Combinatorial form of the multivariate threshold.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum PvForm {
    /// `sum prod_{l=0}^{M} (m + l)`.
    #[default]
    Product,
    /// `sum binom(m + M, m - 1)`.
    Binomial,
}

fn pv_term(m: u32, vars: u32, form: PvForm) -> Option<u128> {
    let mut prod: u128 = 1;
    for l in 0..=vars {
        prod = prod.checked_mul(m as u128 + l as u128)?;
    }
    match form {
        PvForm::Product => Some(prod),
        PvForm::Binomial => {
            let fact: u128 = (1..=vars as u128 + 1).try_fold(1u128, |a, b| a.checked_mul(b))?;
            Some(prod / fact)
        }
    }
}

/// `S(c)^{M+1} > (k - 1)^M sum term(m)` in exact integers.
pub fn pv_threshold_ok(m: &MultiplicityMatrix, c: &[Elem], k: usize, vars: u32, form: PvForm) -> Result<Threshold> {
    if vars < 1 {
        return Err(Error::InvalidParameter("at least one Y variable".into()));
    }
    let s = m.score(c)? as u128;
    let lhs = (0..=vars).try_fold(1u128, |a, _| a.checked_mul(s)).ok_or(Error::Overflow("score power"))?;
    let sum = m
        .entries()
        .try_fold(0u128, |acc, (_, _, mm)| acc.checked_add(pv_term(mm, vars, form)?))
        .ok_or(Error::Overflow("threshold sum"))?;
    let w = (0..vars).try_fold(1u128, |a, _| a.checked_mul(k as u128 - 1)).ok_or(Error::Overflow("weight"))?;
    let rhs = w.checked_mul(sum).ok_or(Error::Overflow("threshold right-hand side"))?;
    let margin = i128::try_from(lhs).ok().zip(i128::try_from(rhs).ok()).map(|(a, b)| a - b);
    let margin = margin.ok_or(Error::Overflow("threshold margin"))?;
    Ok(Threshold { ok: lhs > rhs, margin })
}

/// Largest `L` with `L <= sqrt(2C/(k-1) + a^2) - a`, `a = (k+1)/(2k-2)`.
pub fn list_size_bound(cost: u64, k: usize) -> Result<u64> {
    if k < 2 {
        return Err(Error::Domain("list-size bound needs k >= 2".into()));
    }
    let (a, b) = (k as u128 + 1, 2 * k as u128 - 2);
    // (b L + a)^2 <= 8 C (k - 1) + a^2
    let limit = 8 * cost as u128 * (k as u128 - 1) + a * a;
    let root = isqrt(limit);
    Ok(((root.saturating_sub(a)) / b) as u64)
}

pub(crate) fn isqrt(v: u128) -> u128 {
    if v < 2 {
        return v;
    }
    let mut x = (v as f64).sqrt() as u128;
    while x * x > v {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= v {
        x += 1;
    }
    x
}
