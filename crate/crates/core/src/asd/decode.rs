use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::asd::interpolate::{interpolate, matrix_points, Interpolation};
use crate::asd::multiplicity::{list_size_bound, pmas, threshold_ok, MultiplicityMatrix};
use crate::asd::roots::y_roots;
use crate::channel::{ChannelModel, PosteriorMatrix};
use crate::codes::{Codeword, GrsTwist, RsCode};
use crate::error::{Error, Result};
use crate::gf::Elem;

/// Rule for picking one codeword off the list.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Selection {
    /// Largest score, then largest posterior, then canonical message order.
    #[default]
    Score,
    /// Largest posterior, then largest score, then canonical message order.
    Posterior,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub codeword: Codeword,
    pub score: u64,
    /// `ln prod_j pi_{c_j, j}`.
    pub log_posterior: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub cost: u64,
    pub list_bound: u64,
    pub wdeg: u64,
    pub y_degree: usize,
    pub constraints: u64,
    /// `S^2 - 2(k-1)C` of the selected codeword.
    pub selected_margin: Option<i128>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecodeResult {
    pub candidates: Vec<Candidate>,
    pub selected: Option<Codeword>,
    pub diagnostics: Diagnostics,
}

impl DecodeResult {
    pub fn contains(&self, symbols: &[Elem]) -> bool {
        self.candidates.iter().any(|c| c.codeword.symbols == symbols)
    }
}

/// Interpolation plus root finding on an arbitrary multiplicity matrix.
/// With a twist, matrix symbols refer to the twisted code.
pub fn list_decode(
    code: &RsCode,
    twist: Option<&GrsTwist>,
    m: &MultiplicityMatrix,
) -> Result<(Vec<Codeword>, Interpolation, u64)> {
    let f = code.field();
    let k = code.k();
    if k < 2 {
        return Err(Error::InvalidParameter("soft-decision list decoding needs k >= 2".into()));
    }
    if m.n() != code.n() {
        return Err(Error::LengthMismatch { expected: code.n(), got: m.n() });
    }
    if m.is_zero() {
        return Err(Error::DegenerateMultiplicity);
    }
    let winv: Option<Vec<Elem>> =
        twist.map(|t| t.twist().iter().map(|&w| f.inv(w).expect("nonzero twist")).collect());
    let pts = matrix_points(m, code.points(), |j, s| match &winv {
        Some(w) => f.mul(s, w[j]),
        None => s,
    })?;
    let bound = list_size_bound(m.cost(), k)?;
    let interp = interpolate(f, &pts, k, bound as usize)?;
    let mut words = Vec::new();
    for g in y_roots(f, &interp.poly, k) {
        let mut msg = g.coeffs().to_vec();
        msg.resize(k, Elem::ZERO);
        let mut c = code.encode(&msg)?;
        if let Some(t) = twist {
            t.apply(&mut c.symbols);
        }
        words.push(c);
    }
    Ok((words, interp, bound))
}

fn rank(sel: Selection, a: &Candidate, b: &Candidate) -> Ordering {
    let by_score = b.score.cmp(&a.score);
    let by_post = b.log_posterior.total_cmp(&a.log_posterior);
    let by_msg = a.codeword.message.cmp(&b.codeword.message);
    match sel {
        Selection::Score => by_score.then(by_post).then(by_msg),
        Selection::Posterior => by_post.then(by_score).then(by_msg),
    }
}

fn finish(
    code: &RsCode,
    words: Vec<Codeword>,
    interp: Interpolation,
    bound: u64,
    m: &MultiplicityMatrix,
    post: Option<&PosteriorMatrix>,
    sel: Selection,
) -> Result<DecodeResult> {
    let mut candidates = words
        .into_iter()
        .map(|c| {
            let score = m.score(&c.symbols)?;
            let log_posterior = post.map_or(0.0, |p| p.log_likelihood(&c.symbols));
            Ok(Candidate { codeword: c, score, log_posterior })
        })
        .collect::<Result<Vec<_>>>()?;
    candidates.sort_by(|a, b| rank(sel, a, b));
    let selected = candidates.first().map(|c| c.codeword.clone());
    let selected_margin = match &selected {
        Some(c) => Some(threshold_ok(m, &c.symbols, code.k())?.margin),
        None => None,
    };
    let diagnostics = Diagnostics {
        cost: m.cost(),
        list_bound: bound,
        wdeg: interp.wdeg,
        y_degree: interp.y_degree,
        constraints: interp.constraints,
        selected_margin,
    };
    Ok(DecodeResult { candidates, selected, diagnostics })
}

/// Soft-decision decoding with PMAS multiplicities `floor(lambda * pi)`.
pub fn asd_decode(
    code: &RsCode,
    ch: &ChannelModel,
    y: &[Elem],
    lambda: u32,
    sel: Selection,
) -> Result<DecodeResult> {
    asd_decode_twisted(code, None, ch, y, lambda, sel)
}

/// As [`asd_decode`], for the code twisted by `twist` when given.
pub fn asd_decode_twisted(
    code: &RsCode,
    twist: Option<&GrsTwist>,
    ch: &ChannelModel,
    y: &[Elem],
    lambda: u32,
    sel: Selection,
) -> Result<DecodeResult> {
    if ch.field() != code.field() {
        return Err(Error::FieldMismatch);
    }
    if y.len() != code.n() {
        return Err(Error::LengthMismatch { expected: code.n(), got: y.len() });
    }
    let post = ch.posterior(y)?;
    let m = pmas(&post, lambda)?;
    let (words, interp, bound) = list_decode(code, twist, &m)?;
    finish(code, words, interp, bound, &m, Some(&post), sel)
}

/// Hard-decision list decoding with multiplicity `m` at every received point.
pub fn gs_decode(code: &RsCode, y: &[Elem], m: u32) -> Result<DecodeResult> {
    if m < 1 {
        return Err(Error::InvalidParameter("multiplicity must be at least 1".into()));
    }
    if y.len() != code.n() {
        return Err(Error::LengthMismatch { expected: code.n(), got: y.len() });
    }
    if let Some(bad) = y.iter().find(|e| !code.field().contains(**e)) {
        return Err(Error::InvalidParameter(format!("symbol {bad} is not in {:?}", code.field())));
    }
    let mm = MultiplicityMatrix::uniform(code.field().order() as usize, y, m);
    let (words, interp, bound) = list_decode(code, None, &mm)?;
    finish(code, words, interp, bound, &mm, None, Selection::Score)
}

/// Documented finite-multiplicity radius `n - floor(sqrt(n k (1 + 1/m))) - 1`.
pub fn gs_radius(n: usize, k: usize, m: u32) -> usize {
    let v = n as f64 * k as f64 * (1.0 + 1.0 / m as f64);
    (n as i64 - v.sqrt().floor() as i64 - 1).max(0) as usize
}
