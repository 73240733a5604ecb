//! The `catshield` command line.
//!
//! Exit codes: 0 success, 2 usage error, 3 sweep with no feasible point,
//! 4 numeric failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::channel::{composite_channel, effective_single, lossy_channel, CompositeSpec, LossyStage};
use crate::distance::hs_distance;
use crate::error::{Error, Result};
use crate::negativity::{central_negativity, feasible_region, negativity_margin, negativity_possible};
use crate::optimize::{optimize_presqueeze_cn, optimize_stage_hs, SearchConfig};
use crate::oracle::{hs_distance_numeric, wigner_numeric, QuadratureSpec};
use crate::state::{CatState, Parity, PhasePoint};
use crate::sweep::{self, ChannelSeries, Format, Objective, Scenario, SecondStage, SweepConfig};
use crate::units::{db_to_nats, nats_to_db};
use crate::wigner::wigner_transformed;

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "catshield", version, about = "Cat-state negativity and distinguishability through lossy Gaussian channels")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sweep the transmittance and optimize the pre-squeezing at every point.
    Sweep(SweepArgs),
    /// Transmitted Wigner function at one phase-space point.
    Wigner(WignerArgs),
    /// Central value of a transmitted odd cat.
    Cn(CnArgs),
    /// Whether a channel can leave any Wigner negativity.
    Condition(ChannelArgs),
    /// Transmittance range that keeps negativity for a thermal variance.
    Feasible(FeasibleArgs),
    /// Single symmetric stage equivalent to two lossy stages.
    Effective(EffectiveArgs),
    /// Hilbert–Schmidt distance between the transmitted parity pair.
    Hs(HsArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ScenarioArg {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Custom,
}

impl From<ScenarioArg> for Scenario {
    fn from(s: ScenarioArg) -> Self {
        match s {
            ScenarioArg::Fig2 => Scenario::Fig2,
            ScenarioArg::Fig3 => Scenario::Fig3,
            ScenarioArg::Fig4 => Scenario::Fig4,
            ScenarioArg::Fig5 => Scenario::Fig5,
            ScenarioArg::Custom => Scenario::Custom,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ObjectiveArg {
    Cn,
    Hs,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ParityArg {
    Even,
    Odd,
}

impl From<ParityArg> for Parity {
    fn from(p: ParityArg) -> Self {
        match p {
            ParityArg::Even => Parity::Even,
            ParityArg::Odd => Parity::Odd,
        }
    }
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// JSON sweep config; flags given alongside override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "custom")]
    pub scenario: ScenarioArg,
    #[arg(long)]
    pub eta_from: Option<f64>,
    #[arg(long)]
    pub eta_to: Option<f64>,
    #[arg(long)]
    pub eta_steps: Option<usize>,
    /// Thermal variances, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub v: Vec<f64>,
    /// Environment squeezing rates, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub gamma_t_db: Vec<f64>,
    /// Thermal variance of a second stage with the same transmittance.
    #[arg(long)]
    pub v2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma_t2_db: Option<f64>,
    /// Read every squeezing rate in nats instead of dB.
    #[arg(long)]
    pub nats: bool,
    #[arg(long, allow_negative_numbers = true)]
    pub state_x0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub state_p0: Option<f64>,
    #[arg(long, value_enum)]
    pub parity: Option<ParityArg>,
    #[arg(long, value_enum)]
    pub objective: Option<ObjectiveArg>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// Append quadrature cross-check columns.
    #[arg(long)]
    pub oracle_check: bool,
}

#[derive(Args, Debug)]
pub struct StateArgs {
    #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
    pub x0: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub p0: f64,
    #[arg(long, value_enum, default_value = "odd")]
    pub parity: ParityArg,
}

#[derive(Args, Debug)]
pub struct ChannelArgs {
    #[arg(long, default_value_t = 1.0)]
    pub eta: f64,
    #[arg(long, default_value_t = 0.5)]
    pub v: f64,
    /// Pre-squeezing rate.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub gamma_db: f64,
    /// Environment squeezing rate.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub gamma_t_db: f64,
    /// Read squeezing rates in nats instead of dB.
    #[arg(long)]
    pub nats: bool,
}

impl ChannelArgs {
    fn rate(&self, x: f64) -> f64 {
        if self.nats {
            x
        } else {
            db_to_nats(x)
        }
    }

    fn stage(&self) -> Result<LossyStage> {
        LossyStage::new(self.eta, self.rate(self.gamma_db), self.v, self.rate(self.gamma_t_db))
    }
}

#[derive(Args, Debug)]
pub struct WignerArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub x: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub p: f64,
    /// Also evaluate the channel integral by quadrature.
    #[arg(long)]
    pub oracle_check: bool,
}

#[derive(Args, Debug)]
pub struct CnArgs {
    #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
    pub x0: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub p0: f64,
    #[command(flatten)]
    pub channel: ChannelArgs,
    /// Also find the best pre-squeezing.
    #[arg(long)]
    pub optimize: bool,
}

#[derive(Args, Debug)]
pub struct FeasibleArgs {
    #[arg(long)]
    pub v: f64,
}

#[derive(Args, Debug)]
pub struct EffectiveArgs {
    #[arg(long)]
    pub eta: f64,
    #[arg(long)]
    pub eta2: f64,
    #[arg(long)]
    pub v: f64,
    #[arg(long)]
    pub v2: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub gamma_t_db: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub gamma_t2_db: f64,
    #[arg(long)]
    pub nats: bool,
}

#[derive(Args, Debug)]
pub struct HsArgs {
    #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
    pub x0: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub p0: f64,
    #[command(flatten)]
    pub channel: ChannelArgs,
    /// Also find the distance-maximizing pre-squeezing.
    #[arg(long)]
    pub optimize: bool,
    /// Also integrate the distance by quadrature.
    #[arg(long)]
    pub oracle_check: bool,
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NonFinite(_)
        | Error::NotConverged { .. }
        | Error::QuadratureNotConverged { .. }
        | Error::DegenerateComposite
        | Error::Csv(_) => EXIT_NUMERIC,
        Error::NoProtectionPossible { .. } => EXIT_INFEASIBLE,
        _ => EXIT_USAGE,
    }
}

fn print_json(out: &mut dyn Write, value: &serde_json::Value) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string(value)?)?;
    Ok(())
}

fn sweep_config(args: &SweepArgs) -> Result<SweepConfig> {
    let mut cfg = match &args.config {
        Some(path) => serde_json::from_str(&std::fs::read_to_string(path)?)?,
        None => SweepConfig::preset(args.scenario.into()),
    };
    let rate = |x: f64| if args.nats { x } else { db_to_nats(x) };

    if args.eta_from.is_some() || args.eta_to.is_some() || args.eta_steps.is_some() {
        let from = args.eta_from.unwrap_or(cfg.eta_grid[0]);
        let to = args.eta_to.unwrap_or(*cfg.eta_grid.last().expect("preset grid"));
        let steps = args.eta_steps.unwrap_or(cfg.eta_grid.len());
        cfg.eta_grid = sweep::linspace(from, to, steps);
    }
    if !args.v.is_empty() || !args.gamma_t_db.is_empty() || args.v2.is_some() || args.gamma_t2_db.is_some() {
        let mut vs: Vec<f64> = cfg.series.iter().map(|s| s.v).collect();
        let mut gts: Vec<f64> = cfg.series.iter().map(|s| s.gamma_t).collect();
        vs.dedup();
        gts.sort_by(f64::total_cmp);
        gts.dedup();
        if !args.v.is_empty() {
            vs = args.v.clone();
        }
        if !args.gamma_t_db.is_empty() {
            gts = args.gamma_t_db.iter().map(|&g| rate(g)).collect();
        }
        let preset_second = cfg.series.iter().find_map(|s| s.second);
        let second = match (args.v2, args.gamma_t2_db, preset_second) {
            (None, None, prev) => prev,
            (v, g, prev) => Some(SecondStage {
                v: v.or(prev.map(|p| p.v)).unwrap_or(0.5),
                gamma_t: g.map(rate).or(prev.map(|p| p.gamma_t)).unwrap_or(0.0),
            }),
        };
        cfg.series = vs
            .iter()
            .flat_map(|&v| gts.iter().map(move |&gamma_t| ChannelSeries { v, gamma_t, second }))
            .collect();
    }
    if args.state_x0.is_some() || args.state_p0.is_some() || args.parity.is_some() {
        cfg.state = CatState::new(
            args.state_x0.unwrap_or(cfg.state.x0()),
            args.state_p0.unwrap_or(cfg.state.p0()),
            args.parity.map(Parity::from).unwrap_or(cfg.state.parity()),
        )?;
    }
    if let Some(o) = args.objective {
        cfg.objective = match o {
            ObjectiveArg::Cn => Objective::Cn,
            ObjectiveArg::Hs => Objective::Hs,
        };
    }
    if let Some(f) = args.format {
        cfg.format = match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        };
    }
    if args.out.is_some() {
        cfg.output_path = args.out.clone();
    }
    cfg.oracle_check |= args.oracle_check;
    Ok(cfg)
}

fn run_sweep(args: &SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let cfg = sweep_config(args)?;
    let result = sweep::run_sweep(&cfg, out)?;
    let summary = sweep::summary(&result);
    // keep standard output clean when it carries the data
    match &cfg.output_path {
        Some(path) => writeln!(out, "{summary}; wrote {}", path.display())?,
        None => writeln!(err, "{summary}")?,
    }
    if cfg.objective == Objective::Cn && result.feasible_count() == 0 {
        writeln!(err, "no grid point can keep negativity")?;
        return Ok(EXIT_INFEASIBLE);
    }
    Ok(0)
}

fn finite(x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::NonFinite("result".into()))
    }
}

/// Runs one parsed command, writing records to `out` and diagnostics to
/// `err`, and returns the exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Sweep(args) => return run_sweep(&args, out, err),
        Command::Wigner(a) => {
            let state = CatState::new(a.state.x0, a.state.p0, a.state.parity.into())?;
            let ch = lossy_channel(&a.channel.stage()?)?;
            let pt = PhasePoint::new(a.x, a.p);
            let w = finite(wigner_transformed(&state, &ch, pt))?;
            let mut rec = json!({ "x": a.x, "p": a.p, "w": w });
            if a.oracle_check {
                let est = wigner_numeric(&state, &ch, pt, &QuadratureSpec::default())?;
                rec["oracle_w"] = json!(est.value);
                rec["oracle_abs_err"] = json!((est.value - w).abs());
            }
            print_json(out, &rec)?;
        }
        Command::Cn(a) => {
            let state = CatState::odd(a.x0, a.p0)?;
            let stage = a.channel.stage()?;
            let ch = lossy_channel(&stage)?;
            let cn = finite(central_negativity(&state, &ch)?)?;
            let mut rec = json!({
                "cn": cn,
                "negativity_possible": negativity_possible(&ch),
            });
            if a.optimize {
                let r = optimize_presqueeze_cn(&state, stage.eta, stage.v, stage.gamma_t)?;
                rec["cn_optimal"] = json!(r.objective);
                rec["gamma_opt_nats"] = json!(r.gamma_opt);
                rec["gamma_opt_db"] = json!(nats_to_db(r.gamma_opt));
            }
            print_json(out, &rec)?;
        }
        Command::Condition(c) => {
            let ch = lossy_channel(&c.stage()?)?;
            let gain = (ch.f_x() * ch.f_p()).powi(2);
            let noise = ch.sigma_x() * ch.sigma_p();
            print_json(
                out,
                &json!({
                    "negativity_possible": negativity_possible(&ch),
                    "margin": negativity_margin(&ch),
                    "gain_product": gain,
                    "noise_product": noise,
                }),
            )?;
        }
        Command::Feasible(a) => {
            if !(a.v >= 0.5) {
                return Err(Error::InvalidStage(format!("thermal variance {} below 0.5", a.v)));
            }
            let r = feasible_region(a.v);
            print_json(out, &json!({ "eta_min": r.eta_min, "eta_max": r.eta_max }))?;
        }
        Command::Effective(a) => {
            let rate = |x: f64| if a.nats { x } else { db_to_nats(x) };
            let first = LossyStage::new(a.eta, 0.0, a.v, rate(a.gamma_t_db))?;
            let second = LossyStage::new(a.eta2, 0.0, a.v2, rate(a.gamma_t2_db))?;
            let spec = CompositeSpec::new(vec![first, second])?;
            let eff = effective_single(&spec)?;
            let composite = composite_channel(&spec)?;
            print_json(
                out,
                &json!({
                    "eta_e": eff.eta,
                    "v_e": eff.v,
                    "mid_squeeze_nats": eff.mid_squeeze,
                    "mid_squeeze_db": nats_to_db(eff.mid_squeeze),
                    "negativity_possible": negativity_possible(&composite),
                }),
            )?;
        }
        Command::Hs(a) => {
            let stage = a.channel.stage()?;
            let ch = lossy_channel(&stage)?;
            let b = hs_distance(a.x0, a.p0, &ch);
            finite(b.distance)?;
            let mut rec = serde_json::to_value(b)?;
            if a.optimize {
                let r = optimize_stage_hs(a.x0, a.p0, &stage, &SearchConfig::default())?;
                rec["hs_optimal"] = json!(r.objective);
                rec["gamma_opt_nats"] = json!(r.gamma_opt);
                rec["gamma_opt_db"] = json!(nats_to_db(r.gamma_opt));
            }
            if a.oracle_check {
                let est = hs_distance_numeric(a.x0, a.p0, &ch, &QuadratureSpec::default())?;
                rec["oracle_distance"] = json!(est.value);
                rec["oracle_abs_err"] = json!((est.value - b.distance).abs());
            }
            print_json(out, &rec)?;
        }
    }
    Ok(0)
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // help and version are not errors
            if e.exit_code() == 0 {
                let _ = write!(out, "{}", e.render());
                return 0;
            }
            let _ = write!(err, "{}", e.render());
            return EXIT_USAGE;
        }
    };
    match run(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
