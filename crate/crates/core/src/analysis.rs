//! Closed-form decoding radii, rate thresholds, list-size bounds and error
//! exponents.

use serde::{Deserialize, Serialize};

use crate::asd::PvForm;
use crate::channel::ChannelStats;
use crate::error::{Error, Result};

/// A radius as given by its formula and clipped to `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Radius {
    pub raw: f64,
    pub clipped: f64,
}

impl Radius {
    fn new(raw: f64) -> Self {
        Radius { raw, clipped: raw.clamp(0.0, 1.0) }
    }
}

fn check_rate(r: f64) -> Result<()> {
    if r > 0.0 && r < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("rate {r} is outside (0, 1)")))
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda >= 1.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("lambda {lambda} must be a finite value >= 1")))
    }
}

/// Berlekamp-Massey radius `(1 - R) / 2`.
pub fn radius_bm(r: f64) -> Result<f64> {
    check_rate(r)?;
    Ok((1.0 - r) / 2.0)
}

/// Guruswami-Sudan radius `1 - sqrt(R)`.
pub fn radius_gs(r: f64) -> Result<f64> {
    check_rate(r)?;
    Ok(1.0 - r.sqrt())
}

/// Soft-decision radius `(p_max - sqrt(R (gamma + 1/lambda)) - 1/lambda) / (p_max - p_min)`.
pub fn radius_asd(r: f64, stats: &ChannelStats, lambda: f64) -> Result<Radius> {
    check_rate(r)?;
    check_lambda(lambda)?;
    let spread = stats.p_max - stats.p_min;
    if spread <= 0.0 {
        return Err(Error::ZeroCapacity);
    }
    let il = 1.0 / lambda;
    Ok(Radius::new((stats.p_max - (r * (stats.gamma + il)).sqrt() - il) / spread))
}

fn check_pmin(stats: &ChannelStats, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    let excess = stats.p_min - 1.0 / lambda;
    if excess <= 0.0 {
        return Err(Error::Domain(format!("lambda {lambda} does not exceed 1/p_min = {}", 1.0 / stats.p_min)));
    }
    Ok(excess)
}

/// Rate below which the soft-decision radius exceeds the GS radius:
/// `((p_min - 1/lambda) / (sqrt(gamma + 1/lambda) - p_max + p_min))^2`.
pub fn gs_crossover_rate(stats: &ChannelStats, lambda: f64) -> Result<f64> {
    let num = check_pmin(stats, lambda)?;
    let den = (stats.gamma + 1.0 / lambda).sqrt() - stats.p_max + stats.p_min;
    if den <= 0.0 {
        return Err(Error::Domain("crossover denominator is not positive".into()));
    }
    Ok((num / den).powi(2))
}

/// Rate at or below which every error pattern leaves the codeword on the
/// list: `(p_min - 1/lambda)^2 / (gamma + 1/lambda)`.
pub fn always_on_list_rate(stats: &ChannelStats, lambda: f64) -> Result<f64> {
    let num = check_pmin(stats, lambda)?;
    Ok(num * num / (stats.gamma + 1.0 / lambda))
}

/// List-size bound with the cost replaced by its channel estimate
/// `2C <= n lambda^2 gamma + n lambda`.
pub fn list_size_bound_channel(n: usize, lambda: f64, gamma: f64, k: usize) -> Result<u64> {
    if k < 2 {
        return Err(Error::InvalidParameter("list-size bound needs k >= 2".into()));
    }
    check_lambda(lambda)?;
    let two_c = n as f64 * (lambda * lambda * gamma + lambda);
    let a = (k as f64 + 1.0) / (2.0 * k as f64 - 2.0);
    let v = (two_c / (k as f64 - 1.0) + a * a).sqrt() - a;
    Ok(v.floor().max(0.0) as u64)
}

/// One point of the rate/cost tradeoff for an additive cost function.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KoetterPoint {
    pub theta: f64,
    pub rho: f64,
    /// `(1 - eps) sum_a [rho - theta D(a)]_+^2`.
    pub rate_bound: f64,
    /// Per-symbol cost bound `sum_a D(a) [rho - theta D(a)]_+`.
    pub cost_bound: f64,
}

/// Solves `sum_a [rho - theta D(a)]_+ = 1` exactly and evaluates both bounds.
pub fn koetter_radius(costs: &[f64], theta: f64, eps: f64) -> Result<KoetterPoint> {
    if costs.is_empty() || costs.iter().any(|&c| !(c >= 0.0 && c.is_finite())) {
        return Err(Error::Domain("costs must be finite and non-negative".into()));
    }
    if !(theta > 0.0 && theta.is_finite()) || !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain(format!("need theta > 0 and 0 < eps < 1, got {theta}, {eps}")));
    }
    let mut v: Vec<f64> = costs.iter().map(|&c| theta * c).collect();
    v.sort_by(f64::total_cmp);
    let mut sum = 0.0;
    let mut rho = f64::NAN;
    for j in 0..v.len() {
        sum += v[j];
        let cand = (1.0 + sum) / (j + 1) as f64;
        if j + 1 == v.len() || cand <= v[j + 1] {
            rho = cand;
            break;
        }
    }
    if !rho.is_finite() {
        return Err(Error::Domain("normalization has no solution".into()));
    }
    let w: Vec<f64> = costs.iter().map(|&c| (rho - theta * c).max(0.0)).collect();
    Ok(KoetterPoint {
        theta,
        rho,
        rate_bound: (1.0 - eps) * w.iter().map(|x| x * x).sum::<f64>(),
        cost_bound: costs.iter().zip(&w).map(|(c, x)| c * x).sum(),
    })
}

/// Largest per-symbol cost admitted at rate `r`, found by bisection on
/// `theta` (the rate bound increases with `theta`).
pub fn koetter_cost_at_rate(r: f64, costs: &[f64], eps: f64) -> Result<KoetterPoint> {
    check_rate(r)?;
    let at = |t: f64| koetter_radius(costs, t.exp(), eps);
    let (mut lo, mut hi) = (-40.0f64, 40.0f64);
    if at(lo)?.rate_bound > r || at(hi)?.rate_bound < r {
        return Err(Error::Domain(format!("rate {r} is outside the attainable window")));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if at(mid)?.rate_bound < r {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    at(0.5 * (lo + hi))
}

/// Hamming-cost specialization over an alphabet of size `n + 1`:
/// `n/(n+1) - sqrt(n R / ((n+1)(1-eps)) - n/(n+1)^2)`, valid for
/// `(1-eps)/(n+1) <= R <= 1 - eps`.
pub fn koetter_hamming_radius(r: f64, n: usize, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) || n == 0 {
        return Err(Error::Domain(format!("need n >= 1 and 0 < eps < 1, got {n}, {eps}")));
    }
    let n1 = n as f64 + 1.0;
    if r < (1.0 - eps) / n1 || r > 1.0 - eps {
        return Err(Error::Domain(format!("rate {r} is outside [{}, {}]", (1.0 - eps) / n1, 1.0 - eps)));
    }
    let nf = n as f64;
    let arg = nf * r / (n1 * (1.0 - eps)) - nf / (n1 * n1);
    Ok(nf / n1 - arg.max(0.0).sqrt())
}

/// Optimized error exponent.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExponentResult {
    pub rate: f64,
    /// Optimizing Chernoff parameter; infinite when the exponent is.
    pub s: f64,
    /// Supremum over `s`, floored at zero; `f64::INFINITY` when unbounded.
    pub value: f64,
    /// Supremum before flooring.
    pub raw: f64,
    pub infinite: bool,
    pub bracket: (f64, f64),
    pub iterations: u32,
    /// Same optimization applied to the alternative closed form, when it
    /// differs from `raw` by more than `1e-9`.
    pub alternate: Option<f64>,
}

const GOLDEN_TOL: f64 = 1e-10;

/// Minimizer of a unimodal `f` on `[a, b]` by golden-section search.
fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64, u32) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut it = 0;
    while (b - a) > GOLDEN_TOL * (1.0 + c.abs()) && it < 500 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
        it += 1;
    }
    let s = 0.5 * (a + b);
    (s, f(s), it)
}

fn check_probs(p: &[f64]) -> Result<ChannelStats> {
    ChannelStats::of(p)
}

/// `g(s) = sum_i p_i exp(-s (p_i - sqrt(R (gamma + 1/lambda)) - 1/lambda))`.
fn g_a(r: f64, p: &[f64], gamma: f64, lambda: f64, s: f64) -> f64 {
    let shift = (r * (gamma + 1.0 / lambda)).sqrt() + 1.0 / lambda;
    p.iter().filter(|&&x| x > 0.0).map(|&x| x * (-s * (x - shift)).exp()).sum()
}

/// List-error exponent `-ln g(s)` at a fixed `s > 0`.
pub fn exponent_a(r: f64, p: &[f64], lambda: f64, s: f64) -> Result<f64> {
    check_rate(r)?;
    check_lambda(lambda)?;
    let st = check_probs(p)?;
    if s <= 0.0 {
        return Err(Error::Domain("s must be positive".into()));
    }
    Ok(-g_a(r, p, st.gamma, lambda, s).ln())
}

fn bracket(st: &ChannelStats) -> (f64, f64) {
    (0.0, 200.0 / st.p_max)
}

/// `sup_s` of [`exponent_a`]; infinite exactly when every shifted
/// probability is positive, i.e. below [`always_on_list_rate`].
pub fn exponent_a_opt(r: f64, p: &[f64], lambda: f64) -> Result<ExponentResult> {
    check_rate(r)?;
    check_lambda(lambda)?;
    let st = check_probs(p)?;
    let shift = (r * (st.gamma + 1.0 / lambda)).sqrt() + 1.0 / lambda;
    let br = bracket(&st);
    if st.p_min > 0.0 && st.p_min - shift > 0.0 {
        return Ok(ExponentResult {
            rate: r,
            s: f64::INFINITY,
            value: f64::INFINITY,
            raw: f64::INFINITY,
            infinite: true,
            bracket: br,
            iterations: 0,
            alternate: None,
        });
    }
    let (s, g, iterations) = golden_min(|s| g_a(r, p, st.gamma, lambda, s), br.0, br.1);
    let raw = -g.ln();
    Ok(ExponentResult { rate: r, s, value: raw.max(0.0), raw, infinite: false, bracket: br, iterations, alternate: None })
}

/// `s/lambda + ln((1/q) sum_j e^{s p_j}) + ln(sum_i p_i e^{-s p_i})` with `q = p.len()`.
fn h_b(p: &[f64], lambda: f64, s: f64) -> f64 {
    let q = p.len() as f64;
    let up: f64 = p.iter().map(|&x| (s * x).exp()).sum::<f64>() / q;
    let down: f64 = p.iter().map(|&x| x * (-s * x).exp()).sum();
    s / lambda + up.ln() + down.ln()
}

/// Displayed form: `ln[q^{R-1} (e^{s/lambda} + 2 sum_i sum_{j != i} p_i e^{-s(p_i - p_j - 1/lambda)})]`.
fn h_b_display(r: f64, p: &[f64], lambda: f64, s: f64) -> f64 {
    let q = p.len() as f64;
    let mut acc = (s / lambda).exp();
    for (i, &pi) in p.iter().enumerate() {
        if pi == 0.0 {
            continue;
        }
        for (j, &pj) in p.iter().enumerate() {
            if i != j {
                acc += 2.0 * pi * (-s * (pi - pj - 1.0 / lambda)).exp();
            }
        }
    }
    (r - 1.0) * q.ln() + acc.ln()
}

/// Selection-error exponent at fixed `s > 0`, from the final Chernoff
/// inequality: `-(R ln q + h(s))`. `p` lists all `q` transition
/// probabilities, zeros included.
pub fn exponent_b(r: f64, p: &[f64], lambda: f64, s: f64) -> Result<f64> {
    check_rate(r)?;
    check_lambda(lambda)?;
    check_probs(p)?;
    if s <= 0.0 {
        return Err(Error::Domain("s must be positive".into()));
    }
    Ok(-(r * (p.len() as f64).ln() + h_b(p, lambda, s)))
}

/// The displayed closed form of the selection-error exponent at fixed `s`.
pub fn exponent_b_display(r: f64, p: &[f64], lambda: f64, s: f64) -> Result<f64> {
    check_rate(r)?;
    check_lambda(lambda)?;
    check_probs(p)?;
    if s <= 0.0 {
        return Err(Error::Domain("s must be positive".into()));
    }
    Ok(-h_b_display(r, p, lambda, s))
}

/// `sup_s` of [`exponent_b`], with the displayed form's supremum attached
/// as `alternate` when the two disagree.
pub fn exponent_b_opt(r: f64, p: &[f64], lambda: f64) -> Result<ExponentResult> {
    check_rate(r)?;
    check_lambda(lambda)?;
    let st = check_probs(p)?;
    let br = bracket(&st);
    let lnq = (p.len() as f64).ln();
    let (s, h, iterations) = golden_min(|s| h_b(p, lambda, s), br.0, br.1);
    let raw = -(r * lnq + h);
    let (_, hd, _) = golden_min(|s| h_b_display(r, p, lambda, s), br.0, br.1);
    let alt = -hd;
    Ok(ExponentResult {
        rate: r,
        s,
        value: raw.max(0.0),
        raw,
        infinite: false,
        bracket: br,
        iterations,
        alternate: ((alt - raw).abs() > 1e-9).then_some(alt),
    })
}

/// Multivariate radius with `M` correlated polynomials:
/// `(p_max - (c_M R^M M^M sum_i prod_{l=0..M} (p_i + l/lambda))^{1/(M+1)} - 1/lambda) / (p_max - p_min)`,
/// where `c_M = 1/(M+1)!` for the binomial form and 1 for the product form.
pub fn radius_pv(r: f64, p: &[f64], lambda: f64, m: u32, form: PvForm) -> Result<Radius> {
    check_rate(r)?;
    check_lambda(lambda)?;
    if m == 0 {
        return Err(Error::InvalidParameter("M must be at least 1".into()));
    }
    let st = check_probs(p)?;
    let mf = m as f64;
    let sum: f64 = p.iter().map(|&x| (0..=m).map(|l| x + l as f64 / lambda).product::<f64>()).sum();
    let mut c = r.powi(m as i32) * mf.powi(m as i32) * sum;
    if form == PvForm::Binomial {
        c /= (1..=m + 1).map(f64::from).product::<f64>();
    }
    let il = 1.0 / lambda;
    Ok(Radius::new((st.p_max - c.powf(1.0 / (mf + 1.0)) - il) / (st.p_max - st.p_min)))
}

/// A bound that can be sampled over a rate grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundId {
    Bm,
    Gs,
    Asd,
    Pv,
    ExponentA,
    ExponentB,
    ExponentBDisplay,
    KoetterHamming,
}

impl std::str::FromStr for BoundId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "bm" => BoundId::Bm,
            "gs" => BoundId::Gs,
            "asd" => BoundId::Asd,
            "pv" => BoundId::Pv,
            "exponent_a" => BoundId::ExponentA,
            "exponent_b" => BoundId::ExponentB,
            "exponent_b_display" => BoundId::ExponentBDisplay,
            "koetter_hamming" => BoundId::KoetterHamming,
            _ => return Err(Error::UnknownBound(s.to_string())),
        })
    }
}

/// Parameters shared by all curve samples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveParams {
    /// Transition probabilities, one per alphabet symbol.
    pub probs: Vec<f64>,
    pub lambda: f64,
    /// Number of correlated polynomials for the multivariate radius.
    pub m: u32,
    pub form: PvForm,
    /// Code length for the Hamming-cost radius.
    pub n: usize,
    pub eps: f64,
}

impl CurveParams {
    pub fn new(probs: Vec<f64>, lambda: f64) -> Self {
        let n = probs.len().saturating_sub(1).max(1);
        CurveParams { probs, lambda, m: 1, form: PvForm::Product, n, eps: 1e-4 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub rate: f64,
    /// Clipped for radii; the supremum (possibly infinite) for exponents.
    pub value: f64,
    pub raw: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCurve {
    pub label: String,
    pub bound: BoundId,
    pub params: CurveParams,
    pub samples: Vec<Sample>,
}

/// Rates `start, start + step, ..., stop` (inclusive when on the lattice).
pub fn rate_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if step.is_nan() || step <= 0.0 || start.is_nan() || start <= 0.0 || stop.is_nan() || stop >= 1.0 || start > stop {
        return Err(Error::Domain(format!("bad rate grid {start}:{stop}:{step}")));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}

/// Parses `start:stop:step`.
pub fn parse_rate_grid(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, c] = parts.as_slice() else {
        return Err(Error::Config(format!("rate grid {s:?} is not start:stop:step")));
    };
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| Error::Config(format!("rate grid {s:?}: {e}")));
    rate_grid(num(a)?, num(b)?, num(c)?)
}

/// Evaluates `bound` at every rate of `grid`.
pub fn sample_curve(bound: BoundId, params: &CurveParams, grid: &[f64]) -> Result<BoundCurve> {
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("rate grid must be strictly increasing".into()));
    }
    let stats = ChannelStats::of(&params.probs)?;
    let samples = grid
        .iter()
        .map(|&r| {
            let radius = |x: Radius| Sample { rate: r, value: x.clipped, raw: x.raw };
            let plain = |v: f64| Sample { rate: r, value: v, raw: v };
            Ok(match bound {
                BoundId::Bm => plain(radius_bm(r)?),
                BoundId::Gs => plain(radius_gs(r)?),
                BoundId::Asd => radius(radius_asd(r, &stats, params.lambda)?),
                BoundId::Pv => radius(radius_pv(r, &params.probs, params.lambda, params.m, params.form)?),
                BoundId::ExponentA => {
                    let e = exponent_a_opt(r, &params.probs, params.lambda)?;
                    Sample { rate: r, value: e.value, raw: e.raw }
                }
                BoundId::ExponentB => {
                    let e = exponent_b_opt(r, &params.probs, params.lambda)?;
                    Sample { rate: r, value: e.value, raw: e.raw }
                }
                BoundId::ExponentBDisplay => {
                    let e = exponent_b_opt(r, &params.probs, params.lambda)?;
                    let alt = e.alternate.unwrap_or(e.raw);
                    Sample { rate: r, value: alt.max(0.0), raw: alt }
                }
                BoundId::KoetterHamming => plain(koetter_hamming_radius(r, params.n, params.eps)?),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let label = match bound {
        BoundId::Bm => "tau_bm".to_string(),
        BoundId::Gs => "tau_gs".to_string(),
        BoundId::Asd => "tau_asd".to_string(),
        BoundId::Pv => format!("tau_pv{}_{}", params.m, form_name(params.form)),
        BoundId::ExponentA => "e_a".to_string(),
        BoundId::ExponentB => "e_b".to_string(),
        BoundId::ExponentBDisplay => "e_b_display".to_string(),
        BoundId::KoetterHamming => "tau_koetter".to_string(),
    };
    Ok(BoundCurve { label, bound, params: params.clone(), samples })
}

pub fn form_name(form: PvForm) -> &'static str {
    match form {
        PvForm::Product => "product",
        PvForm::Binomial => "binomial",
    }
}

/// Rate at which a decreasing function crosses zero, by bisection on `[lo, hi]`.
pub fn zero_crossing(f: impl Fn(f64) -> Result<f64>, mut lo: f64, mut hi: f64) -> Result<f64> {
    let (flo, fhi) = (f(lo)?, f(hi)?);
    if !(flo > 0.0 && fhi <= 0.0) {
        return Err(Error::Domain(format!("no sign change on [{lo}, {hi}]")));
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if f(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
