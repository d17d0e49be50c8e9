//! Monte Carlo campaigns and exhaustive oracles.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{exponent_a_opt, exponent_b_opt, radius_asd};
use crate::asd::{asd_decode_twisted, pmas, threshold_ok, MultiplicityMatrix, Selection};
use crate::channel::{trial_rng, ChannelConfig, ChannelModel};
use crate::codes::{hamming, Codeword, GrsTwist, RsCode};
use crate::error::{Error, Result};
use crate::gf::Elem;

/// Report schema version.
pub const REPORT_VERSION: u32 = 1;

/// How the error pattern of each trial is drawn.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "policy")]
pub enum ErrorPolicy {
    /// Straight from the channel.
    #[default]
    Channel,
    /// Exactly `t` channel errors at uniform positions.
    Fixed { t: usize },
    /// `t = floor(n tau)` with `tau` the clipped soft-decision radius.
    Radius,
    /// One condition per weight in `from..=to`, each with the full trial count.
    Sweep { from: usize, to: usize },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CampaignKind {
    #[default]
    Radius,
    ErrorProb,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrialSpec {
    #[serde(default)]
    pub campaign: CampaignKind,
    pub k: usize,
    pub channel: ChannelConfig,
    pub lambda: u32,
    pub trials: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub errors: ErrorPolicy,
    #[serde(default)]
    pub selection: Selection,
    /// Redraw a uniform GRS twist for every trial.
    #[serde(default)]
    pub random_twist: bool,
}

/// Empirical rate with its Wilson 95% interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rate {
    pub estimate: f64,
    pub low: f64,
    pub high: f64,
}

impl Rate {
    pub fn wilson(hits: u64, trials: u64) -> Self {
        if trials == 0 {
            return Rate { estimate: 0.0, low: 0.0, high: 1.0 };
        }
        let z = 1.959963984540054;
        let n = trials as f64;
        let p = hits as f64 / n;
        let den = 1.0 + z * z / n;
        let center = (p + z * z / (2.0 * n)) / den;
        let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / den;
        let low = if hits == 0 { 0.0 } else { (center - half).max(0.0) };
        Rate { estimate: p, low, high: (center + half).min(1.0) }
    }
}

/// A trial inside the guaranteed radius whose codeword was missed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub trial: u64,
    pub seed: u64,
    pub errors: usize,
    pub received: Vec<u16>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    /// Fixed error weight, or `None` for channel-drawn errors.
    pub errors: Option<usize>,
    pub trials: u64,
    pub on_list: u64,
    pub selected_correct: u64,
    pub list_min: usize,
    pub list_mean: f64,
    pub list_max: usize,
    pub threshold_ok: u64,
    /// Threshold met but codeword missing from the list.
    pub threshold_violations: u64,
    /// List longer than the list-size bound of its cost.
    pub list_bound_violations: u64,
    /// Codeword on the list although the threshold margin is not positive.
    pub on_list_below_threshold: u64,
    /// Trials whose error weight is within the guaranteed radius.
    pub within_radius: u64,
    pub counterexamples: Vec<Counterexample>,
    pub list_error: Rate,
    pub selection_error: Rate,
}

/// Chernoff bounds next to the observed error rates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorBounds {
    /// `None` when the exponent is infinite.
    pub exponent_a: Option<f64>,
    pub exponent_b: f64,
    pub bound_a: f64,
    pub bound_b: f64,
    pub slack_a: f64,
    pub slack_b: f64,
    pub within_a: bool,
    pub within_b: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub version: u32,
    pub kind: String,
    pub spec: TrialSpec,
    pub n: usize,
    pub rate: f64,
    /// Clipped soft-decision radius and its error count `floor(n tau)`.
    pub radius: f64,
    pub radius_errors: usize,
    pub conditions: Vec<ConditionReport>,
    pub bounds: Option<ErrorBounds>,
    pub passed: bool,
    /// Wall-clock seconds; the only field that varies between identical runs.
    pub elapsed_seconds: f64,
}

impl CampaignReport {
    /// JSON without the timing field.
    pub fn payload(&self) -> Result<String> {
        let mut v = serde_json::to_value(self)?;
        if let Some(o) = v.as_object_mut() {
            o.remove("elapsed_seconds");
        }
        Ok(serde_json::to_string_pretty(&v)?)
    }
}

#[derive(Clone, Debug)]
struct Outcome {
    errors: usize,
    on_list: bool,
    selected_correct: bool,
    list_size: usize,
    threshold_ok: bool,
    margin: i128,
    list_bound: u64,
    received: Vec<u16>,
}

struct Setup {
    code: RsCode,
    ch: ChannelModel,
    radius: f64,
    radius_errors: usize,
}

fn setup(spec: &TrialSpec) -> Result<Setup> {
    if spec.trials < 1 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    if spec.lambda < 1 {
        return Err(Error::Config("lambda must be at least 1".into()));
    }
    let ch = spec.channel.build()?;
    let code = RsCode::new(ch.field(), spec.k)?;
    if spec.k < 2 {
        return Err(Error::Config("soft-decision decoding needs k >= 2".into()));
    }
    let n = code.n();
    let radius = radius_asd(code.rate(), &ch.stats(), spec.lambda as f64)?.clipped;
    let radius_errors = ((n as f64 * radius) + 1e-9).floor() as usize;
    match spec.errors {
        ErrorPolicy::Fixed { t } if t > n => return Err(Error::Config(format!("t = {t} exceeds n = {n}"))),
        ErrorPolicy::Sweep { from, to } if from > to || to > n => {
            return Err(Error::Config(format!("bad sweep {from}..={to} for n = {n}")))
        }
        _ => {}
    }
    Ok(Setup { code, ch, radius, radius_errors })
}

fn trial(spec: &TrialSpec, s: &Setup, weight: Option<usize>, index: u64) -> Result<Outcome> {
    use rand::Rng;
    let f = s.code.field();
    let n = s.code.n();
    let mut rng = trial_rng(spec.seed, index);
    let twist = spec.random_twist.then(|| GrsTwist::random(&s.code, &mut rng));
    let msg: Vec<Elem> = (0..spec.k).map(|_| Elem(rng.gen_range(0..f.order()) as u16)).collect();
    let c = match &twist {
        Some(t) => t.encode(&msg)?,
        None => s.code.encode(&msg)?,
    };
    let e = match weight {
        Some(t) => s.ch.sample_error_conditioned_rng(n, t, &mut rng)?,
        None => s.ch.sample_error_rng(n, &mut rng),
    };
    let y: Vec<Elem> = c.symbols.iter().zip(&e).map(|(&a, &b)| f.add(a, b)).collect();
    let res = asd_decode_twisted(&s.code, twist.as_ref(), &s.ch, &y, spec.lambda, spec.selection)?;
    let m = pmas(&s.ch.posterior(&y)?, spec.lambda)?;
    let th = threshold_ok(&m, &c.symbols, spec.k)?;
    Ok(Outcome {
        errors: e.iter().filter(|x| !x.is_zero()).count(),
        on_list: res.contains(&c.symbols),
        selected_correct: res.selected.as_ref().is_some_and(|w| w.symbols == c.symbols),
        list_size: res.candidates.len(),
        threshold_ok: th.ok,
        margin: th.margin,
        list_bound: res.diagnostics.list_bound,
        received: y.iter().map(|v| v.0).collect(),
    })
}

fn run_condition(
    spec: &TrialSpec,
    s: &Setup,
    weight: Option<usize>,
    offset: u64,
    pool: &rayon::ThreadPool,
) -> Result<ConditionReport> {
    let outcomes: Vec<Outcome> = pool.install(|| {
        (0..spec.trials).into_par_iter().map(|i| trial(spec, s, weight, offset + i)).collect::<Result<Vec<_>>>()
    })?;
    let count = |p: &dyn Fn(&Outcome) -> bool| outcomes.iter().filter(|o| p(o)).count() as u64;
    let on_list = count(&|o| o.on_list);
    let selected_correct = count(&|o| o.selected_correct);
    let counterexamples = outcomes
        .iter()
        .enumerate()
        .filter(|(_, o)| o.errors <= s.radius_errors && !o.on_list)
        .map(|(i, o)| Counterexample {
            trial: offset + i as u64,
            seed: spec.seed,
            errors: o.errors,
            received: o.received.clone(),
        })
        .collect();
    Ok(ConditionReport {
        errors: weight,
        trials: spec.trials,
        on_list,
        selected_correct,
        list_min: outcomes.iter().map(|o| o.list_size).min().unwrap_or(0),
        list_mean: outcomes.iter().map(|o| o.list_size as f64).sum::<f64>() / outcomes.len() as f64,
        list_max: outcomes.iter().map(|o| o.list_size).max().unwrap_or(0),
        threshold_ok: count(&|o| o.threshold_ok),
        threshold_violations: count(&|o| o.threshold_ok && !o.on_list),
        list_bound_violations: count(&|o| o.list_size as u64 > o.list_bound),
        on_list_below_threshold: count(&|o| o.on_list && o.margin <= 0),
        within_radius: count(&|o| o.errors <= s.radius_errors),
        counterexamples,
        list_error: Rate::wilson(spec.trials - on_list, spec.trials),
        selection_error: Rate::wilson(spec.trials - selected_correct, spec.trials),
    })
}

fn pool(workers: Option<usize>) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| Error::Config(e.to_string()))
}

fn run(spec: &TrialSpec, workers: Option<usize>) -> Result<(Setup, Vec<ConditionReport>, Instant)> {
    let start = Instant::now();
    let s = setup(spec)?;
    let pool = pool(workers)?;
    let weights: Vec<Option<usize>> = match spec.errors {
        ErrorPolicy::Channel => vec![None],
        ErrorPolicy::Fixed { t } => vec![Some(t)],
        ErrorPolicy::Radius => vec![Some(s.radius_errors)],
        ErrorPolicy::Sweep { from, to } => (from..=to).map(Some).collect(),
    };
    let mut conditions = Vec::with_capacity(weights.len());
    for (ci, w) in weights.into_iter().enumerate() {
        conditions.push(run_condition(spec, &s, w, ci as u64 * spec.trials, &pool)?);
    }
    Ok((s, conditions, start))
}

/// Certifies the soft-decision radius: every trial with at most
/// `floor(n tau)` errors must list the transmitted codeword.
pub fn run_radius_campaign(spec: &TrialSpec, workers: Option<usize>) -> Result<CampaignReport> {
    let (s, conditions, start) = run(spec, workers)?;
    let passed = conditions.iter().all(|c| c.counterexamples.is_empty());
    Ok(CampaignReport {
        version: REPORT_VERSION,
        kind: "radius".into(),
        spec: spec.clone(),
        n: s.code.n(),
        rate: s.code.rate(),
        radius: s.radius,
        radius_errors: s.radius_errors,
        conditions,
        bounds: None,
        passed,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    })
}

/// Empirical list and selection error rates against their Chernoff bounds,
/// with a fresh GRS twist per trial. Each rate may exceed its bound by at
/// most three binomial standard deviations.
pub fn run_error_prob_campaign(spec: &TrialSpec, workers: Option<usize>) -> Result<CampaignReport> {
    let mut spec = spec.clone();
    spec.campaign = CampaignKind::ErrorProb;
    spec.random_twist = true;
    let (s, conditions, start) = run(&spec, workers)?;
    let n = s.code.n() as f64;
    let rate = s.code.rate();
    let probs = s.ch.probs();
    let lambda = spec.lambda as f64;
    let ea = exponent_a_opt(rate, probs, lambda)?;
    let eb = exponent_b_opt(rate, probs, lambda)?;
    let bound_a = if ea.infinite { 0.0 } else { (-n * ea.value).exp().min(1.0) };
    let bound_b = (-n * eb.value).exp().min(1.0);
    let trials: u64 = conditions.iter().map(|c| c.trials).sum();
    let miss_a: u64 = conditions.iter().map(|c| c.trials - c.on_list).sum();
    let miss_b: u64 = conditions.iter().map(|c| c.trials - c.selected_correct).sum();
    let sigma = |p: f64| (p * (1.0 - p) / trials as f64).sqrt();
    let slack_a = 3.0 * sigma(bound_a);
    let slack_b = 3.0 * sigma(bound_b);
    let within_a = miss_a as f64 / trials as f64 <= bound_a + slack_a;
    let within_b = miss_b as f64 / trials as f64 <= bound_b + slack_b;
    let bounds = ErrorBounds {
        exponent_a: (!ea.infinite).then_some(ea.value),
        exponent_b: eb.value,
        bound_a,
        bound_b,
        slack_a,
        slack_b,
        within_a,
        within_b,
    };
    Ok(CampaignReport {
        version: REPORT_VERSION,
        kind: "error_prob".into(),
        spec,
        n: s.code.n(),
        rate,
        radius: s.radius,
        radius_errors: s.radius_errors,
        conditions,
        bounds: Some(bounds),
        passed: within_a && within_b,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    })
}

/// Runs the campaign named in the spec.
pub fn run_campaign(spec: &TrialSpec, workers: Option<usize>) -> Result<CampaignReport> {
    match spec.campaign {
        CampaignKind::Radius => run_radius_campaign(spec, workers),
        CampaignKind::ErrorProb => run_error_prob_campaign(spec, workers),
    }
}

/// Filter applied by [`brute_force_list`].
#[derive(Clone, Copy, Debug)]
pub enum Criterion<'a> {
    /// Within Hamming distance `t` of the received word.
    Hamming(usize),
    /// Score at least `min` against the matrix.
    Score(&'a MultiplicityMatrix, u64),
    /// Meets the soft-decision list threshold.
    Threshold(&'a MultiplicityMatrix),
}

/// Every codeword meeting `criterion`, by exhaustive enumeration.
pub fn brute_force_list(code: &RsCode, y: &[Elem], criterion: Criterion) -> Result<Vec<Codeword>> {
    if y.len() != code.n() {
        return Err(Error::LengthMismatch { expected: code.n(), got: y.len() });
    }
    let mut out = Vec::new();
    for c in code.codewords()? {
        let keep = match criterion {
            Criterion::Hamming(t) => hamming(&c.symbols, y) <= t,
            Criterion::Score(m, min) => m.score(&c.symbols)? >= min,
            Criterion::Threshold(m) => threshold_ok(m, &c.symbols, code.k())?.ok,
        };
        if keep {
            out.push(c);
        }
    }
    Ok(out)
}
