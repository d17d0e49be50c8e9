//! Command-line front end.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analysis::{
    form_name, list_size_bound_channel, parse_rate_grid, sample_curve, BoundCurve, BoundId, CurveParams,
};
use crate::asd::{asd_decode, bm_decode, gs_decode, DecodeResult, PvForm, Selection};
use crate::channel::{ChannelConfig, ChannelModel, Preset};
use crate::codes::{Codeword, RsCode};
use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::simulate::{run_campaign, CampaignReport, TrialSpec};

#[derive(Parser, Debug)]
#[command(name = "softdec", version, about = "Soft-decision Reed-Solomon decoding and its bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample decoding bounds over a rate grid and write CSV.
    Curves(CurvesArgs),
    /// Run a Monte Carlo campaign from a JSON spec and write a JSON report.
    Simulate(SimulateArgs),
    /// Encode or decode a single word.
    Codec(CodecArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FigPreset {
    Fig1a,
    Fig1b,
    Fig1c,
    Fig2,
    Fig3,
    Fig4,
}

#[derive(Args, Debug)]
pub struct CurvesArgs {
    /// Figure bundle with fixed parameters.
    #[arg(long, value_enum)]
    pub preset: Option<FigPreset>,
    /// Channel as a JSON file or `name[:p_correct]` with name in
    /// typewriter, two_error, qsym, noiseless.
    #[arg(long)]
    pub channel: Option<String>,
    /// Alphabet size for named channels.
    #[arg(long, default_value_t = 256)]
    pub q: u32,
    #[arg(long)]
    pub lambda: Option<u32>,
    /// `start:stop:step`.
    #[arg(long)]
    pub rate_grid: Option<String>,
    /// Comma-separated bounds: bm, gs, asd, pv, exponent_a, exponent_b,
    /// exponent_b_display, koetter_hamming.
    #[arg(long, value_delimiter = ',')]
    pub bounds: Vec<String>,
    /// Number of correlated polynomials for `pv`.
    #[arg(long, default_value_t = 2)]
    pub m: u32,
    #[arg(long, value_enum, default_value_t = PvForm::Product)]
    pub form: PvForm,
    /// Output path; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Campaign spec (JSON).
    pub spec: PathBuf,
    /// Overrides the spec's seed.
    #[arg(long, env = "SOFTDEC_SEED")]
    pub seed: Option<u64>,
    /// Worker threads; all cores when absent.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Output path; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Decoder {
    Bm,
    Gs,
    Asd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CodecOp {
    Encode,
    Decode,
}

#[derive(Args, Debug)]
pub struct CodecArgs {
    #[arg(value_enum)]
    pub op: CodecOp,
    /// Field order.
    #[arg(long)]
    pub q: u32,
    /// Code dimension.
    #[arg(long)]
    pub k: usize,
    /// Whitespace-separated hex symbols; read from `--input` or standard input when absent.
    pub symbols: Option<String>,
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Decoder::Bm)]
    pub decoder: Decoder,
    /// GS multiplicity.
    #[arg(long, default_value_t = 1)]
    pub multiplicity: u32,
    /// Channel for ASD, as for `curves`; its alphabet must match `--q`.
    #[arg(long)]
    pub channel: Option<String>,
    #[arg(long, default_value_t = 10)]
    pub lambda: u32,
    #[arg(long, value_enum, default_value_t = Selection::Score)]
    pub selection: Selection,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Runs the command line; returns the process exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("softdec: {e}");
            2
        }
    }
}

/// Executes a parsed command; `Ok(1)` when a campaign fails its checks.
pub fn execute(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Curves(a) => {
            let csv = curves_csv(a)?;
            emit(a.out.as_deref(), &csv)?;
            Ok(0)
        }
        Command::Simulate(a) => {
            let report = simulate(a)?;
            emit(a.out.as_deref(), &(serde_json::to_string_pretty(&report)? + "\n"))?;
            Ok(if report.passed { 0 } else { 1 })
        }
        Command::Codec(a) => {
            let text = codec(a)?;
            emit(a.out.as_deref(), &text)?;
            Ok(0)
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Parses `name[:p_correct]` or loads a JSON channel file.
pub fn parse_channel(s: &str, q: u32) -> Result<ChannelConfig> {
    let (name, p) = match s.split_once(':') {
        Some((n, p)) => (n, Some(p)),
        None => (s, None),
    };
    let preset = match name {
        "typewriter" => Some(Preset::Typewriter),
        "two_error" => Some(Preset::TwoError),
        "qsym" => Some(Preset::Qsym),
        "noiseless" => Some(Preset::Noiseless),
        _ => None,
    };
    match preset {
        Some(preset) => {
            let p_correct = match p {
                Some(t) => t.parse::<f64>().map_err(|e| Error::Config(format!("channel {s:?}: {e}")))?,
                None if preset == Preset::Noiseless => 1.0,
                None => 0.8,
            };
            Ok(ChannelConfig::Preset { preset, p_correct, q })
        }
        None => ChannelConfig::load(Path::new(s)),
    }
}

/// Nine significant digits, `inf` for infinity.
pub fn fmt_sig(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = 8 - mag;
    if (0..=20).contains(&decimals) {
        let s = format!("{:.*}", decimals as usize, x);
        if s.parse::<f64>().map(|v| v.abs().log10().floor() as i32) == Ok(mag) {
            return s;
        }
    }
    format!("{x:.8e}")
}

struct Table {
    meta: Vec<String>,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn render(&self) -> String {
        let mut out = String::new();
        for m in &self.meta {
            out.push_str("# ");
            out.push_str(m);
            out.push('\n');
        }
        out.push_str(&self.header.join(","));
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        out
    }

    fn from_curves(meta: Vec<String>, curves: &[BoundCurve]) -> Self {
        let mut header = vec!["rate".to_string()];
        header.extend(curves.iter().map(|c| c.label.clone()));
        let rows = (0..curves.first().map_or(0, |c| c.samples.len()))
            .map(|i| {
                let mut row = vec![fmt_sig(curves[0].samples[i].rate)];
                row.extend(curves.iter().map(|c| fmt_sig(c.samples[i].value)));
                row
            })
            .collect();
        Table { meta, header, rows }
    }
}

fn channel_meta(cfg: &ChannelConfig, ch: &ChannelModel) -> Vec<String> {
    let st = ch.stats();
    let name = match cfg {
        ChannelConfig::Preset { preset, p_correct, q } => format!("{preset:?} p_correct={p_correct} q={q}").to_lowercase(),
        ChannelConfig::Vector { p } => format!("vector q={}", p.len()),
    };
    vec![
        format!("channel: {name}"),
        format!("p_max: {}, p_min: {}, gamma: {}", fmt_sig(st.p_max), fmt_sig(st.p_min), fmt_sig(st.gamma)),
    ]
}

struct CurveJob {
    name: &'static str,
    channel: ChannelConfig,
    lambda: u32,
    grid: String,
    bounds: Vec<(BoundId, u32, PvForm)>,
}

fn preset_job(p: FigPreset) -> CurveJob {
    let ch = |preset, p_correct, q| ChannelConfig::Preset { preset, p_correct, q };
    let full = "0.01:0.99:0.01".to_string();
    let radii = vec![(BoundId::Bm, 1, PvForm::Product), (BoundId::Gs, 1, PvForm::Product), (BoundId::Asd, 1, PvForm::Product)];
    match p {
        FigPreset::Fig1a => CurveJob { name: "fig1a", channel: ch(Preset::Typewriter, 0.8, 256), lambda: 100, grid: full, bounds: radii },
        FigPreset::Fig1b => CurveJob { name: "fig1b", channel: ch(Preset::TwoError, 0.8, 256), lambda: 100, grid: full, bounds: radii },
        FigPreset::Fig1c => CurveJob { name: "fig1c", channel: ch(Preset::Qsym, 0.805, 16), lambda: 100, grid: full, bounds: radii },
        FigPreset::Fig2 => CurveJob { name: "fig2", channel: ch(Preset::Typewriter, 0.8, 256), lambda: 100, grid: full, bounds: vec![] },
        FigPreset::Fig3 => CurveJob {
            name: "fig3",
            channel: ch(Preset::Typewriter, 0.8, 256),
            lambda: 100,
            grid: full,
            bounds: vec![
                (BoundId::ExponentA, 1, PvForm::Product),
                (BoundId::ExponentB, 1, PvForm::Product),
                (BoundId::ExponentBDisplay, 1, PvForm::Product),
            ],
        },
        FigPreset::Fig4 => CurveJob {
            name: "fig4",
            channel: ch(Preset::Typewriter, 0.8, 256),
            lambda: 100,
            grid: full,
            bounds: vec![
                (BoundId::Asd, 1, PvForm::Product),
                (BoundId::Pv, 2, PvForm::Product),
                (BoundId::Pv, 2, PvForm::Binomial),
            ],
        },
    }
}

/// CSV for `curves`; deterministic in its arguments.
pub fn curves_csv(a: &CurvesArgs) -> Result<String> {
    let mut job = match a.preset {
        Some(p) => preset_job(p),
        None => CurveJob {
            name: "custom",
            channel: parse_channel(a.channel.as_deref().unwrap_or("typewriter"), a.q)?,
            lambda: 100,
            grid: "0.01:0.99:0.01".into(),
            bounds: vec![],
        },
    };
    if a.preset.is_some() {
        if let Some(c) = &a.channel {
            job.channel = parse_channel(c, a.q)?;
        }
    }
    if let Some(l) = a.lambda {
        job.lambda = l;
    }
    if let Some(g) = &a.rate_grid {
        job.grid = g.clone();
    }
    if !a.bounds.is_empty() {
        job.bounds = a.bounds.iter().map(|b| Ok((b.parse::<BoundId>()?, a.m, a.form))).collect::<Result<_>>()?;
    } else if a.preset.is_none() {
        job.bounds = vec![(BoundId::Bm, 1, a.form), (BoundId::Gs, 1, a.form), (BoundId::Asd, 1, a.form)];
    }
    let ch = job.channel.build()?;
    let mut meta = vec![format!("softdec {}", env!("CARGO_PKG_VERSION")), format!("curves: {}", job.name)];
    meta.extend(channel_meta(&job.channel, &ch));
    meta.push(format!("lambda: {}", job.lambda));
    if a.preset == Some(FigPreset::Fig2) {
        let n = ch.field().order() as usize - 1;
        let gamma = ch.stats().gamma;
        meta.push(format!("list-size bound versus dimension, n = {n}"));
        let rows = (2..=n)
            .map(|k| Ok(vec![k.to_string(), list_size_bound_channel(n, job.lambda as f64, gamma, k)?.to_string()]))
            .collect::<Result<_>>()?;
        return Ok(Table { meta, header: vec!["k".into(), "list_bound".into()], rows }.render());
    }
    let grid = parse_rate_grid(&job.grid)?;
    meta.push(format!("rate grid: {}", job.grid));
    let mut curves = Vec::new();
    for (b, m, form) in &job.bounds {
        let mut params = CurveParams::new(ch.probs().to_vec(), job.lambda as f64);
        params.m = *m;
        params.form = *form;
        if *b == BoundId::Pv {
            meta.push(format!("tau_pv{m}_{0}: M = {m}, {0} form", form_name(*form)));
        }
        curves.push(sample_curve(*b, &params, &grid)?);
    }
    if curves.iter().any(|c| matches!(c.bound, BoundId::Asd | BoundId::Pv)) {
        meta.push("radii clipped to [0, 1]".into());
    }
    if curves.iter().any(|c| matches!(c.bound, BoundId::ExponentA | BoundId::ExponentB | BoundId::ExponentBDisplay)) {
        meta.push("exponents maximized over s and floored at 0".into());
    }
    Ok(Table::from_curves(meta, &curves).render())
}

/// Loads a spec, applies the seed override and runs it.
pub fn simulate(a: &SimulateArgs) -> Result<CampaignReport> {
    let text = std::fs::read_to_string(&a.spec)?;
    let mut spec: TrialSpec = serde_json::from_str(&text)?;
    if let Some(s) = a.seed {
        spec.seed = s;
    }
    run_campaign(&spec, a.workers)
}

/// Whitespace-separated hex element values.
pub fn parse_symbols(f: &Field, text: &str) -> Result<Vec<Elem>> {
    text.split_whitespace()
        .map(|t| {
            let v = u32::from_str_radix(t, 16).map_err(|_| Error::InvalidParameter(format!("bad symbol {t:?}")))?;
            if v >= f.order() {
                return Err(Error::InvalidParameter(format!("symbol {t} is not in GF({})", f.order())));
            }
            Ok(Elem(v as u16))
        })
        .collect()
}

pub fn format_symbols(s: &[Elem]) -> String {
    s.iter().map(|e| format!("{:x}", e.0)).collect::<Vec<_>>().join(" ")
}

#[derive(Serialize)]
struct CodecOutput<'a> {
    decoder: &'a str,
    received: String,
    selected: Option<String>,
    message: Option<String>,
    candidates: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    result: Option<DecodeResult>,
}

fn codec(a: &CodecArgs) -> Result<String> {
    let f = Field::from_order(a.q)?;
    let code = RsCode::new(&f, a.k)?;
    let text = match (&a.symbols, &a.input) {
        (Some(s), _) => s.clone(),
        (None, Some(p)) => std::fs::read_to_string(p)?,
        (None, None) => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            s
        }
    };
    let v = parse_symbols(&f, &text)?;
    match a.op {
        CodecOp::Encode => Ok(format_symbols(&code.encode(&v)?.symbols) + "\n"),
        CodecOp::Decode => {
            let msg = |c: &Codeword| c.message.as_ref().map(|m| format_symbols(m));
            let out = match a.decoder {
                Decoder::Bm => {
                    let c = bm_decode(&code, &v)?;
                    CodecOutput {
                        decoder: "bm",
                        received: format_symbols(&v),
                        selected: c.as_ref().map(|c| format_symbols(&c.symbols)),
                        message: c.as_ref().and_then(msg),
                        candidates: c.iter().map(|c| format_symbols(&c.symbols)).collect(),
                        result: None,
                    }
                }
                Decoder::Gs | Decoder::Asd => {
                    let (name, r) = if a.decoder == Decoder::Gs {
                        ("gs", gs_decode(&code, &v, a.multiplicity)?)
                    } else {
                        let cfg = parse_channel(a.channel.as_deref().unwrap_or("typewriter"), a.q)?;
                        let ch = cfg.build()?;
                        if ch.field() != &f {
                            return Err(Error::FieldMismatch);
                        }
                        ("asd", asd_decode(&code, &ch, &v, a.lambda, a.selection)?)
                    };
                    CodecOutput {
                        decoder: name,
                        received: format_symbols(&v),
                        selected: r.selected.as_ref().map(|c| format_symbols(&c.symbols)),
                        message: r.selected.as_ref().and_then(msg),
                        candidates: r.candidates.iter().map(|c| format_symbols(&c.codeword.symbols)).collect(),
                        result: Some(r),
                    }
                }
            };
            Ok(serde_json::to_string_pretty(&out)? + "\n")
        }
    }
}
