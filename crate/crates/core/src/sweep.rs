//! Parameter sweeps over transmittance, with CSV or JSON output.
//!
//! A sweep evaluates one row per (channel series, transmittance) pair.
//! Rows are computed in parallel and always written in grid order; the
//! worker count can be capped with the `CATSHIELD_THREADS` environment
//! variable.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{composite_channel, lossy_channel, CompositeSpec, LossyStage};
use crate::distance::hs_distance;
use crate::error::{Error, Result};
use crate::negativity::{central_negativity, is_feasible};
use crate::optimize::{optimize_composite, optimize_presqueeze_cn, optimize_stage_hs, SearchConfig};
use crate::oracle::{hs_distance_numeric, wigner_numeric, QuadratureSpec};
use crate::state::{CatState, PhasePoint};
use crate::units::{db_to_nats, nats_to_db};

/// Environment variable capping sweep parallelism.
pub const THREADS_ENV: &str = "CATSHIELD_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    /// Odd cat, V = 1, environment squeezing 0, 1, 3, 5, 6 dB.
    Fig2,
    /// Odd cat, V = 0.5, 1, 1.5, 2.
    Fig3,
    /// Two stages with equal transmittance, V = 1 then V' = 2.
    Fig4,
    /// Hilbert–Schmidt distance, V = 0.5, 1, 1.5, 2.
    Fig5,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    /// Central negativity of an odd cat.
    Cn,
    /// Hilbert–Schmidt distance between the parity pair.
    Hs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Environment of the second stage of a two-stage chain. Its transmittance
/// follows the first stage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecondStage {
    pub v: f64,
    /// Environment squeezing rate, nats.
    pub gamma_t: f64,
}

/// One curve of a sweep: an environment swept over the transmittance grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelSeries {
    pub v: f64,
    /// Environment squeezing rate, nats.
    pub gamma_t: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub second: Option<SecondStage>,
}

/// A complete sweep description; this is also the JSON config format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub scenario: Scenario,
    pub state: CatState,
    pub eta_grid: Vec<f64>,
    pub series: Vec<ChannelSeries>,
    pub objective: Objective,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<PathBuf>,
    pub format: Format,
    #[serde(default)]
    pub oracle_check: bool,
}

/// `steps` evenly spaced points from `from` to `to`, both included.
pub fn linspace(from: f64, to: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => vec![],
        1 => vec![from],
        n => (0..n)
            .map(|i| {
                if i == n - 1 {
                    to
                } else {
                    from + (to - from) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

fn series(vs: &[f64], gts_db: &[f64]) -> Vec<ChannelSeries> {
    vs.iter()
        .flat_map(|&v| {
            gts_db.iter().map(move |&db| ChannelSeries {
                v,
                gamma_t: db_to_nats(db),
                second: None,
            })
        })
        .collect()
}

impl SweepConfig {
    /// Preset parameters for a scenario, on the grid `0.5..=1` in 51 steps.
    /// `Custom` starts from a single vacuum environment.
    pub fn preset(scenario: Scenario) -> Self {
        let state = CatState::odd(3.0, 0.0).expect("valid preset state");
        let (series, objective) = match scenario {
            Scenario::Fig2 => (series(&[1.0], &[0.0, 1.0, 3.0, 5.0, 6.0]), Objective::Cn),
            Scenario::Fig3 => (series(&[0.5, 1.0, 1.5, 2.0], &[0.0]), Objective::Cn),
            Scenario::Fig4 => {
                let second = SecondStage {
                    v: 2.0,
                    gamma_t: db_to_nats(1.0),
                };
                let s = series(&[1.0], &[-2.0, -1.0, 1.0, 2.0])
                    .into_iter()
                    .map(|c| ChannelSeries {
                        second: Some(second),
                        ..c
                    })
                    .collect();
                (s, Objective::Cn)
            }
            Scenario::Fig5 => (series(&[0.5, 1.0, 1.5, 2.0], &[0.0]), Objective::Hs),
            Scenario::Custom => (series(&[0.5], &[0.0]), Objective::Cn),
        };
        SweepConfig {
            scenario,
            state,
            eta_grid: linspace(0.5, 1.0, 51),
            series,
            objective,
            output_path: None,
            format: Format::Csv,
            oracle_check: false,
        }
    }

    fn two_stage(&self) -> bool {
        self.series.iter().any(|s| s.second.is_some())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.eta_grid.is_empty() {
            return bad("empty transmittance grid".into());
        }
        if let Some(eta) = self.eta_grid.iter().find(|e| !(**e > 0.0 && **e <= 1.0)) {
            return bad(format!("transmittance {eta} outside (0, 1]"));
        }
        let up = self.eta_grid.windows(2).all(|w| w[0] < w[1]);
        let down = self.eta_grid.windows(2).all(|w| w[0] > w[1]);
        if !(up || down) {
            return bad("transmittance grid must be strictly monotone".into());
        }
        if self.series.is_empty() {
            return bad("no channel series".into());
        }
        for s in &self.series {
            LossyStage::new(1.0, 0.0, s.v, s.gamma_t)?;
            if let Some(t) = s.second {
                LossyStage::new(1.0, 0.0, t.v, t.gamma_t)?;
            }
        }
        if self.objective == Objective::Cn {
            if self.state.parity() != crate::state::Parity::Odd {
                return bad("the cn objective needs an odd cat".into());
            }
        } else if self.two_stage() {
            return bad("the hs objective supports single-stage channels only".into());
        }
        Ok(())
    }
}

/// One evaluated grid point. Empty optionals are blank CSV cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub eta: f64,
    pub v: f64,
    pub gamma_t_db: f64,
    pub v2: Option<f64>,
    pub gamma_t2_db: Option<f64>,
    pub feasible: bool,
    pub unprotected: Option<f64>,
    pub optimal: Option<f64>,
    pub gamma_opt_nats: Option<f64>,
    pub gamma_mid_opt_nats: Option<f64>,
    pub oracle: Option<f64>,
}

/// Rows in grid order: series-major, then transmittance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepOutput {
    pub objective: Objective,
    pub two_stage: bool,
    pub oracle_check: bool,
    pub rows: Vec<SweepRow>,
}

impl SweepOutput {
    pub fn feasible_count(&self) -> usize {
        self.rows.iter().filter(|r| r.feasible).count()
    }
}

fn finite(x: f64, what: &str) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::NonFinite(what.into()))
    }
}

fn cn_row(state: &CatState, eta: f64, s: &ChannelSeries, oracle: bool) -> Result<SweepRow> {
    let mut row = SweepRow {
        eta,
        v: s.v,
        gamma_t_db: nats_to_db(s.gamma_t),
        v2: s.second.map(|t| t.v),
        gamma_t2_db: s.second.map(|t| nats_to_db(t.gamma_t)),
        feasible: false,
        unprotected: None,
        optimal: None,
        gamma_opt_nats: None,
        gamma_mid_opt_nats: None,
        oracle: None,
    };
    let first = LossyStage::new(eta, 0.0, s.v, s.gamma_t)?;
    let (result, channel) = match s.second {
        None => {
            let ch = lossy_channel(&first)?;
            row.unprotected = Some(finite(central_negativity(state, &ch)?, "cn")?);
            match optimize_presqueeze_cn(state, eta, s.v, s.gamma_t) {
                Ok(r) => {
                    let ch = lossy_channel(&first.with_gamma(r.gamma_opt))?;
                    (r, ch)
                }
                Err(Error::NoProtectionPossible { .. }) => return Ok(row),
                Err(e) => return Err(e),
            }
        }
        Some(t) => {
            let second = LossyStage::new(eta, 0.0, t.v, t.gamma_t)?;
            let spec = CompositeSpec::two_stage(first, second, 0.0, 0.0)?;
            row.unprotected = Some(finite(central_negativity(state, &composite_channel(&spec)?)?, "cn")?);
            match optimize_composite(state, &spec) {
                Ok(r) => {
                    let mid = r.gamma_mid_opt.unwrap_or(0.0);
                    let ch = composite_channel(&CompositeSpec::two_stage(first, second, r.gamma_opt, mid)?)?;
                    (r, ch)
                }
                Err(Error::NoProtectionPossible { .. }) => return Ok(row),
                Err(e) => return Err(e),
            }
        }
    };
    row.feasible = true;
    row.optimal = Some(finite(result.objective, "optimal cn")?);
    row.gamma_opt_nats = Some(result.gamma_opt);
    row.gamma_mid_opt_nats = result.gamma_mid_opt;
    if oracle {
        let est = wigner_numeric(state, &channel, PhasePoint::ORIGIN, &QuadratureSpec::default())?;
        row.oracle = Some(est.value);
    }
    Ok(row)
}

fn hs_row(state: &CatState, eta: f64, s: &ChannelSeries, oracle: bool) -> Result<SweepRow> {
    let (x0, p0) = (state.x0(), state.p0());
    let stage = LossyStage::new(eta, 0.0, s.v, s.gamma_t)?;
    let r = optimize_stage_hs(x0, p0, &stage, &SearchConfig::default())?;
    let oracle = if oracle {
        let ch = lossy_channel(&stage.with_gamma(r.gamma_opt))?;
        Some(hs_distance_numeric(x0, p0, &ch, &QuadratureSpec::default())?.value)
    } else {
        None
    };
    let baseline = hs_distance(x0, p0, &lossy_channel(&stage)?).distance;
    Ok(SweepRow {
        eta,
        v: s.v,
        gamma_t_db: nats_to_db(s.gamma_t),
        v2: None,
        gamma_t2_db: None,
        feasible: is_feasible(eta, s.v),
        unprotected: Some(finite(baseline, "hs distance")?),
        optimal: Some(finite(r.objective, "optimal hs distance")?),
        gamma_opt_nats: Some(r.gamma_opt),
        gamma_mid_opt_nats: None,
        oracle,
    })
}

/// Worker pool honouring [`THREADS_ENV`].
pub fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var(THREADS_ENV) {
        let n: usize = raw
            .trim()
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("{THREADS_ENV}={raw} is not a thread count")))?;
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))
}

/// Evaluates every grid point of `config`.
pub fn evaluate(config: &SweepConfig) -> Result<SweepOutput> {
    config.validate()?;
    let points: Vec<(ChannelSeries, f64)> = config
        .series
        .iter()
        .flat_map(|s| config.eta_grid.iter().map(move |&eta| (*s, eta)))
        .collect();
    let pool = thread_pool()?;
    let rows = pool.install(|| {
        points
            .par_iter()
            .map(|(s, eta)| match config.objective {
                Objective::Cn => cn_row(&config.state, *eta, s, config.oracle_check),
                Objective::Hs => hs_row(&config.state, *eta, s, config.oracle_check),
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(SweepOutput {
        objective: config.objective,
        two_stage: config.two_stage(),
        oracle_check: config.oracle_check,
        rows,
    })
}

/// `x` with 12 significant digits, positional for moderate exponents.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let fixed = format!("{:.*}", (11 - exp) as usize, x);
        if fixed.contains('.') {
            fixed.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            fixed
        }
    } else {
        let mantissa = if mantissa.contains('.') {
            mantissa.trim_end_matches('0').trim_end_matches('.')
        } else {
            mantissa
        };
        format!("{mantissa}e{exp}")
    }
}

fn cell(x: Option<f64>) -> String {
    x.map(format_sig).unwrap_or_default()
}

fn header(out: &SweepOutput) -> Vec<&'static str> {
    let mut cols = vec!["eta", "v", "gamma_t_db"];
    if out.two_stage {
        cols.extend(["v2", "gamma_t2_db"]);
    }
    cols.push("feasible");
    match out.objective {
        Objective::Cn => {
            cols.extend(["cn_unprotected", "cn_optimal", "gamma_opt_nats", "gamma_opt_db"]);
            if out.two_stage {
                cols.extend(["gamma_mid_opt_nats", "gamma_mid_opt_db"]);
            }
            if out.oracle_check {
                cols.extend(["oracle_cn", "oracle_abs_err"]);
            }
        }
        Objective::Hs => {
            cols.extend(["hs_unprotected", "hs_optimal", "hs_gamma_opt_nats", "hs_gamma_opt_db"]);
            if out.oracle_check {
                cols.extend(["oracle_hs", "oracle_abs_err"]);
            }
        }
    }
    cols
}

fn record(out: &SweepOutput, r: &SweepRow) -> Vec<Option<f64>> {
    let mut vals = vec![Some(r.eta), Some(r.v), Some(r.gamma_t_db)];
    if out.two_stage {
        vals.extend([r.v2, r.gamma_t2_db]);
    }
    let mut tail = vec![r.unprotected, r.optimal, r.gamma_opt_nats, r.gamma_opt_nats.map(nats_to_db)];
    if out.two_stage && out.objective == Objective::Cn {
        tail.extend([r.gamma_mid_opt_nats, r.gamma_mid_opt_nats.map(nats_to_db)]);
    }
    if out.oracle_check {
        let err = match (r.oracle, r.optimal) {
            (Some(o), Some(v)) => Some((o - v).abs()),
            _ => None,
        };
        tail.extend([r.oracle, err]);
    }
    vals.push(None); // feasible placeholder
    vals.extend(tail);
    vals
}

/// CSV text: header row, LF line endings, blank cells for missing values.
pub fn to_csv(out: &SweepOutput) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header(out))?;
    for r in &out.rows {
        let feasible_at = if out.two_stage { 5 } else { 3 };
        let cells: Vec<String> = record(out, r)
            .into_iter()
            .enumerate()
            .map(|(i, v)| if i == feasible_at { r.feasible.to_string() } else { cell(v) })
            .collect();
        w.write_record(&cells)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("ascii csv"))
}

/// JSON array of row objects keyed by the CSV column names.
pub fn to_json(out: &SweepOutput) -> Result<String> {
    let names = header(out);
    let rows: Vec<serde_json::Map<String, serde_json::Value>> = out
        .rows
        .iter()
        .map(|r| {
            let feasible_at = if out.two_stage { 5 } else { 3 };
            names
                .iter()
                .zip(record(out, r))
                .enumerate()
                .map(|(i, (name, v))| {
                    let value = if i == feasible_at {
                        serde_json::Value::Bool(r.feasible)
                    } else {
                        serde_json::to_value(v).expect("number")
                    };
                    (name.to_string(), value)
                })
                .collect()
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&rows)?;
    s.push('\n');
    Ok(s)
}

pub fn render(out: &SweepOutput, format: Format) -> Result<String> {
    match format {
        Format::Csv => to_csv(out),
        Format::Json => to_json(out),
    }
}

/// One-line human summary of a finished sweep.
pub fn summary(out: &SweepOutput) -> String {
    let mut s = String::new();
    let _ = write!(s, "{} rows, {} feasible", out.rows.len(), out.feasible_count());
    if out.oracle_check {
        let worst = out
            .rows
            .iter()
            .filter_map(|r| Some((r.oracle? - r.optimal?).abs()))
            .fold(0.0f64, f64::max);
        let _ = write!(s, ", worst oracle disagreement {}", format_sig(worst));
    }
    s
}

/// Evaluates `config` and writes the rows to its output path, or to `sink`
/// when no path is set.
pub fn run_sweep(config: &SweepConfig, sink: &mut dyn Write) -> Result<SweepOutput> {
    let out = evaluate(config)?;
    let text = render(&out, config.format)?;
    match &config.output_path {
        Some(path) => std::fs::write(path, text)?,
        None => sink.write_all(text.as_bytes())?,
    }
    Ok(out)
}
