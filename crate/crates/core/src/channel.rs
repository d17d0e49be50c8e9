//! Additive discrete memoryless channels over GF(q).

use std::path::Path;

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};

const SUM_TOL: f64 = 1e-12;

/// RNG for trial `index` of a campaign seeded with `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ index)
}

/// `(p_max, p_min, gamma)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelStats {
    pub p_max: f64,
    pub p_min: f64,
    pub gamma: f64,
}

impl ChannelStats {
    /// Statistics of a probability vector. `p_min` is the smallest positive
    /// entry, or 0 when only one entry is positive.
    pub fn of(p: &[f64]) -> Result<Self> {
        validate(p)?;
        let positive: Vec<f64> = p.iter().copied().filter(|&x| x > 0.0).collect();
        let p_max = positive.iter().copied().fold(0.0, f64::max);
        let p_min = if positive.len() == 1 { 0.0 } else { positive.iter().copied().fold(f64::INFINITY, f64::min) };
        if p_max == p_min {
            return Err(Error::ZeroCapacity);
        }
        let gamma = p.iter().map(|x| x * x).sum();
        Ok(ChannelStats { p_max, p_min, gamma })
    }
}

fn validate(p: &[f64]) -> Result<()> {
    if p.is_empty() {
        return Err(Error::InvalidDistribution("empty vector".into()));
    }
    if let Some(bad) = p.iter().find(|x| !x.is_finite() || **x < 0.0) {
        return Err(Error::InvalidDistribution(format!("entry {bad} is not a probability")));
    }
    let s: f64 = p.iter().sum();
    if (s - 1.0).abs() > SUM_TOL {
        return Err(Error::InvalidDistribution(format!("entries sum to {s}")));
    }
    Ok(())
}

/// Additive channel `y = c + e` with `Pr(e = a) = p[a]`, indexed by element value.
#[derive(Clone, Debug)]
pub struct ChannelModel {
    field: Field,
    p: Vec<f64>,
    stats: ChannelStats,
}

impl ChannelModel {
    pub fn new(field: &Field, p: Vec<f64>) -> Result<Self> {
        if p.len() != field.order() as usize {
            return Err(Error::LengthMismatch { expected: field.order() as usize, got: p.len() });
        }
        let stats = ChannelStats::of(&p)?;
        Ok(ChannelModel { field: field.clone(), p, stats })
    }

    /// Correct with probability `p_correct`, otherwise the error is the field generator.
    pub fn typewriter(field: &Field, p_correct: f64) -> Result<Self> {
        let mut p = vec![0.0; field.order() as usize];
        p[0] = p_correct;
        p[field.generator().value()] += 1.0 - p_correct;
        Self::new(field, p)
    }

    /// Two equally likely errors: the generator and its square.
    pub fn two_error(field: &Field, p_correct: f64) -> Result<Self> {
        if field.order() < 3 {
            return Err(Error::InvalidParameter("two-error channel needs q >= 3".into()));
        }
        let g = field.generator();
        let mut p = vec![0.0; field.order() as usize];
        p[0] = p_correct;
        p[g.value()] = (1.0 - p_correct) / 2.0;
        p[field.mul(g, g).value()] = (1.0 - p_correct) / 2.0;
        Self::new(field, p)
    }

    /// q-ary symmetric channel.
    pub fn qsym(field: &Field, p_correct: f64) -> Result<Self> {
        let q = field.order() as usize;
        let mut p = vec![(1.0 - p_correct) / (q - 1) as f64; q];
        p[0] = p_correct;
        Self::new(field, p)
    }

    pub fn noiseless(field: &Field) -> Self {
        let mut p = vec![0.0; field.order() as usize];
        p[0] = 1.0;
        Self::new(field, p).expect("point mass is a valid channel")
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn probs(&self) -> &[f64] {
        &self.p
    }

    pub fn prob(&self, e: Elem) -> f64 {
        self.p[e.value()]
    }

    pub fn stats(&self) -> ChannelStats {
        self.stats
    }

    pub fn is_noiseless(&self) -> bool {
        self.p[0] == 1.0
    }

    fn error_dist(&self) -> WeightedIndex<f64> {
        WeightedIndex::new(&self.p).expect("validated distribution")
    }

    /// i.i.d. error vector.
    pub fn sample_error_rng<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<Elem> {
        let d = self.error_dist();
        (0..n).map(|_| Elem(d.sample(rng) as u16)).collect()
    }

    pub fn sample_error(&self, n: usize, seed: u64) -> Vec<Elem> {
        self.sample_error_rng(n, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    /// Error vector of weight exactly `t`: uniform support, values drawn from
    /// `p` restricted to nonzero symbols.
    pub fn sample_error_conditioned_rng<R: Rng + ?Sized>(&self, n: usize, t: usize, rng: &mut R) -> Result<Vec<Elem>> {
        if t > n {
            return Err(Error::InvalidParameter(format!("error weight {t} exceeds length {n}")));
        }
        let mut out = vec![Elem::ZERO; n];
        if t == 0 {
            return Ok(out);
        }
        let mut nz = self.p.clone();
        nz[0] = 0.0;
        let d = WeightedIndex::new(&nz)
            .map_err(|_| Error::InvalidParameter("channel has no nonzero error symbol".into()))?;
        for pos in sample(rng, n, t).into_vec() {
            out[pos] = Elem(d.sample(rng) as u16);
        }
        Ok(out)
    }

    pub fn sample_error_conditioned(&self, n: usize, t: usize, seed: u64) -> Result<Vec<Elem>> {
        self.sample_error_conditioned_rng(n, t, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    /// Posterior `pi_{i,j} = p(y_j - alpha_i)` under a uniform input.
    pub fn posterior(&self, y: &[Elem]) -> Result<PosteriorMatrix> {
        if let Some(bad) = y.iter().find(|e| !self.field.contains(**e)) {
            return Err(Error::InvalidParameter(format!("received symbol {bad} is not in {:?}", self.field)));
        }
        let support: Vec<(Elem, f64)> =
            self.p.iter().enumerate().filter(|(_, &x)| x > 0.0).map(|(a, &x)| (Elem(a as u16), x)).collect();
        let cols = y
            .iter()
            .map(|&yj| {
                let mut col: Vec<(Elem, f64)> = support.iter().map(|&(a, x)| (self.field.sub(yj, a), x)).collect();
                col.sort_by_key(|e| e.0);
                col
            })
            .collect();
        Ok(PosteriorMatrix { q: self.field.order() as usize, received: y.to_vec(), cols })
    }
}

/// Column-sparse q x n posterior matrix.
#[derive(Clone, Debug)]
pub struct PosteriorMatrix {
    q: usize,
    received: Vec<Elem>,
    cols: Vec<Vec<(Elem, f64)>>,
}

impl PosteriorMatrix {
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn n(&self) -> usize {
        self.cols.len()
    }

    pub fn received(&self) -> &[Elem] {
        &self.received
    }

    /// Nonzero entries of column `j`, sorted by symbol.
    pub fn column(&self, j: usize) -> &[(Elem, f64)] {
        &self.cols[j]
    }

    pub fn get(&self, symbol: Elem, j: usize) -> f64 {
        self.cols[j].binary_search_by_key(&symbol, |e| e.0).map_or(0.0, |i| self.cols[j][i].1)
    }

    /// `ln prod_j pi_{v_j, j}`; `-inf` if any factor vanishes.
    pub fn log_likelihood(&self, v: &[Elem]) -> f64 {
        v.iter().enumerate().map(|(j, &s)| self.get(s, j).ln()).sum()
    }
}

/// Channel description as read from a JSON config file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum ChannelConfig {
    Preset { preset: Preset, p_correct: f64, q: u32 },
    Vector { p: Vec<f64> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    Typewriter,
    TwoError,
    Qsym,
    Noiseless,
}

impl ChannelConfig {
    pub fn build(&self) -> Result<ChannelModel> {
        match self {
            ChannelConfig::Preset { preset, p_correct, q } => {
                let field = Field::from_order(*q)?;
                match preset {
                    Preset::Typewriter => ChannelModel::typewriter(&field, *p_correct),
                    Preset::TwoError => ChannelModel::two_error(&field, *p_correct),
                    Preset::Qsym => ChannelModel::qsym(&field, *p_correct),
                    Preset::Noiseless => Ok(ChannelModel::noiseless(&field)),
                }
            }
            ChannelConfig::Vector { p } => {
                let field = Field::from_order(p.len() as u32)?;
                ChannelModel::new(&field, p.clone())
            }
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: ChannelStats, b: (f64, f64, f64)) -> bool {
        (a.p_max - b.0).abs() < 1e-12 && (a.p_min - b.1).abs() < 1e-12 && (a.gamma - b.2).abs() < 1e-12
    }

    #[test]
    fn preset_statistics() {
        let f = Field::new(2, 4).unwrap();
        assert!(close(ChannelModel::typewriter(&f, 0.8).unwrap().stats(), (0.8, 0.2, 0.68)));
        assert!(close(ChannelModel::two_error(&f, 0.8).unwrap().stats(), (0.8, 0.1, 0.66)));
        let s = ChannelModel::qsym(&f, 0.805).unwrap().stats();
        assert!(close(s, (0.805, 0.013, 0.805 * 0.805 + 15.0 * 0.013 * 0.013)));
        assert!(close(ChannelModel::noiseless(&f).stats(), (1.0, 0.0, 1.0)));
    }

    #[test]
    fn rejects_bad_vectors() {
        let f = Field::new(3, 1).unwrap();
        assert!(matches!(ChannelModel::new(&f, vec![0.5, 0.5, 0.1]), Err(Error::InvalidDistribution(_))));
        assert!(matches!(ChannelModel::new(&f, vec![0.5, 0.5]), Err(Error::LengthMismatch { .. })));
        assert!(matches!(ChannelModel::new(&f, vec![0.5, 0.5, 0.0]), Err(Error::ZeroCapacity)));
        assert!(matches!(ChannelModel::new(&f, vec![1.2, -0.2, 0.0]), Err(Error::InvalidDistribution(_))));
    }

    #[test]
    fn posterior_columns() {
        let f = Field::new(2, 4).unwrap();
        let ch = ChannelModel::typewriter(&f, 0.8).unwrap();
        let y: Vec<Elem> = (0..15).map(|v| Elem(v as u16)).collect();
        let pm = ch.posterior(&y).unwrap();
        for j in 0..15 {
            let col = pm.column(j);
            assert_eq!(col.len(), 2);
            assert!((col.iter().map(|e| e.1).sum::<f64>() - 1.0).abs() < 1e-12);
            assert_eq!(pm.get(y[j], j), 0.8);
        }
        let quiet = ChannelModel::noiseless(&f).posterior(&y).unwrap();
        assert_eq!(quiet.column(3), &[(Elem(3), 1.0)]);
    }

    #[test]
    fn conditioned_errors() {
        let f = Field::new(2, 4).unwrap();
        let ch = ChannelModel::typewriter(&f, 0.8).unwrap();
        for seed in 0..50 {
            let e = ch.sample_error_conditioned(15, 3, seed).unwrap();
            assert_eq!(e.iter().filter(|x| !x.is_zero()).count(), 3);
            assert!(e.iter().all(|x| x.is_zero() || *x == f.generator()));
        }
        assert!(ch.sample_error_conditioned(15, 15, 1).unwrap().iter().all(|x| !x.is_zero()));
        assert!(ch.sample_error_conditioned(15, 16, 1).is_err());
        assert!(ChannelModel::noiseless(&f).sample_error_conditioned(15, 1, 1).is_err());
        assert_eq!(ch.sample_error(15, 9), ch.sample_error(15, 9));
    }

    #[test]
    fn config_parsing() {
        let c = ChannelConfig::from_json(r#"{"preset": "typewriter", "p_correct": 0.8, "q": 256}"#).unwrap();
        assert_eq!(c.build().unwrap().field().order(), 256);
        let v = ChannelConfig::from_json(r#"{"p": [0.7, 0.1, 0.1, 0.1]}"#).unwrap();
        assert_eq!(v.build().unwrap().stats().p_min, 0.1);
        assert!(ChannelConfig::from_json(r#"{"preset": "nope", "p_correct": 0.8, "q": 16}"#).is_err());
        assert!(ChannelConfig::from_json(r#"{"p": [0.7, 0.1, 0.1]}"#).unwrap().build().is_err());
    }
}
