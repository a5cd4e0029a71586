//! Command-line front end.
//!
//! ```text
//! lpgreeks <command> --config <path> [--strategy <s>] [--figure <id>]
//!          [--out <path>] [--seed <u64>] [--paths <n>]
//! ```
//!
//! Exit codes: 0 success, 1 verification failure (including a hedge that
//! does not cancel), 2 configuration or usage error, 3 domain error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::analytics::{decay_factors, Strategy};
use crate::config::Scenario;
use crate::error::{Error, Result};
use crate::figures::figure;
use crate::greeks::{greeks_table, hedge_report};
use crate::mc::McConfig;
use crate::replication::build_strike_grid;
use crate::report::{csv, fmt_f64};
use crate::verify::{closed_form_greeks, verify, ClosedForms};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

/// Gamma and vega sums beyond this fraction of the larger leg fail `hedge`.
pub const HEDGE_TOL: f64 = 1e-10;

const DEFAULT_PATHS: u64 = 1_000_000;
const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(name = "lpgreeks", version, about = "Prices, greeks and checks for AMM LP positions and Impermanent Gain")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, clap::Args)]
struct Common {
    /// Scenario file (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Also write the CSV record to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StrategyArg {
    #[value(name = "unlocked-lp")]
    UnlockedLp,
    #[value(name = "locked-lp")]
    LockedLp,
    #[value(name = "ig")]
    Ig,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::UnlockedLp => Strategy::UnlockedLp,
            StrategyArg::LockedLp => Strategy::LockedLp,
            StrategyArg::Ig => Strategy::ImpermanentGain,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Price one strategy.
    Price {
        #[command(flatten)]
        common: Common,
        /// Defaults to the position in the config (locked or unlocked).
        #[arg(long, value_enum)]
        strategy: Option<StrategyArg>,
    },
    /// Closed-form greeks of one strategy, raw and display-scaled.
    Greeks {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        strategy: Option<StrategyArg>,
    },
    /// Greeks of the locked LP, the IG, and their sum.
    Hedge {
        #[command(flatten)]
        common: Common,
    },
    /// The three-strategy greeks comparison table.
    Table {
        #[command(flatten)]
        common: Common,
    },
    /// One plotted curve as CSV.
    Figure {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        figure: String,
    },
    /// Replicating option strip of the IG as CSV.
    Grid {
        #[command(flatten)]
        common: Common,
    },
    /// Run the oracle suite.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        paths: Option<u64>,
    },
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::Precondition(_) | Error::Io(_) => EXIT_CONFIG,
        Error::Domain(_) | Error::StepCollapse(_) | Error::NonFinite { .. } => EXIT_DOMAIN,
    }
}

fn write_out(path: &Option<PathBuf>, text: &str) -> Result<()> {
    if let Some(p) = path {
        std::fs::write(p, text).map_err(|e| Error::Io(format!("cannot write {}: {e}", p.display())))?;
    }
    Ok(())
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes()).map_err(Error::from)
}

fn load(path: &Path) -> Result<Scenario> {
    Scenario::load(path)
}

fn record(fields: &[(&str, String)]) -> String {
    csv(&["field", "value"], fields.iter().map(|(k, v)| vec![k.to_string(), v.clone()]))
}

fn cmd_price(scenario: &Scenario, strategy: Strategy) -> Result<String> {
    let p = scenario.point(strategy);
    let price = strategy.price(&p)?;
    let f = decay_factors(&p.market, p.tau())?;
    let mut fields = vec![
        ("strategy", strategy.name().to_string()),
        ("price", fmt_f64(price)),
        ("beta", fmt_f64(f.beta)),
        ("gamma", fmt_f64(f.gamma_disc)),
        ("v0", fmt_f64(p.notional_v0)),
        ("s0", fmt_f64(p.entry_price_s0)),
    ];
    if strategy == Strategy::ImpermanentGain {
        fields.push(("k", fmt_f64(p.strike_k)));
    }
    fields.extend([
        ("spot", fmt_f64(p.spot)),
        ("t", fmt_f64(p.t)),
        ("maturity", fmt_f64(p.maturity)),
        ("tau", fmt_f64(p.tau())),
        ("r_x", fmt_f64(p.market.r_x)),
        ("r_y", fmt_f64(p.market.r_y)),
        ("r_f", fmt_f64(p.market.r_f())),
        ("sigma", fmt_f64(p.market.sigma)),
        ("phi", fmt_f64(p.market.phi)),
    ]);
    Ok(record(&fields))
}

fn cmd_greeks(scenario: &Scenario, strategy: Strategy) -> Result<String> {
    let g = closed_form_greeks(strategy, &scenario.point(strategy))?;
    Ok(csv(
        &["greek", "value", "display"],
        g.rows().iter().map(|(name, raw, shown)| vec![name.to_string(), fmt_f64(*raw), fmt_f64(*shown)]),
    ))
}

fn cmd_hedge(scenario: &Scenario) -> Result<(String, bool)> {
    if scenario.ig.is_none() {
        return Err(Error::Precondition("hedge needs an ig block".into()));
    }
    let lp = scenario.point(Strategy::LockedLp).lp_state(scenario.locked)?;
    let ig = scenario.point(Strategy::ImpermanentGain).ig_contract()?;
    let h = hedge_report(&lp, &ig)?;
    let pred = |name: &str| match name {
        "delta" => fmt_f64(h.delta_pred),
        "gamma" | "vega" => fmt_f64(0.0),
        "theta" => fmt_f64(h.theta_pred),
        "rho" => fmt_f64(h.rho_pred),
        _ => String::new(),
    };
    let rows = h
        .lp
        .rows()
        .iter()
        .zip(h.ig.rows().iter())
        .zip(h.total.rows().iter())
        .map(|((l, i), t)| vec![l.0.to_string(), fmt_f64(l.1), fmt_f64(i.1), fmt_f64(t.1), pred(l.0)])
        .collect::<Vec<_>>();
    let mut text = csv(&["greek", "locked_lp", "ig", "total", "predicted"], rows);
    text.push_str(&format!(
        "gamma_residual,,,{},\nvega_residual,,,{},\n",
        fmt_f64(h.gamma_residual()),
        fmt_f64(h.vega_residual())
    ));
    Ok((text, h.is_neutral(HEDGE_TOL)))
}

fn cmd_table(scenario: &Scenario) -> Result<(String, String)> {
    let unlocked = scenario.point(Strategy::UnlockedLp).lp_state(false)?;
    let locked = scenario.point(Strategy::LockedLp).lp_state(true)?;
    let ig = scenario.point(Strategy::ImpermanentGain).ig_contract()?;
    let t = greeks_table(&unlocked, &locked, &ig, &scenario.market, scenario.spot)?;
    Ok((t.to_text(), t.to_csv()))
}

fn cmd_grid(scenario: &Scenario) -> Result<String> {
    let p = scenario.point(Strategy::ImpermanentGain);
    Ok(build_strike_grid(p.strike_k, p.market.sigma, p.tau(), scenario.target_tol())?.to_csv())
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Price { common, strategy } => {
            let s = load(&common.config)?;
            let text = cmd_price(&s, strategy.map(Into::into).unwrap_or(s.lp_strategy()))?;
            write_out(&common.out, &text)?;
            emit(out, &text)?;
        }
        Command::Greeks { common, strategy } => {
            let s = load(&common.config)?;
            let text = cmd_greeks(&s, strategy.map(Into::into).unwrap_or(s.lp_strategy()))?;
            write_out(&common.out, &text)?;
            emit(out, &text)?;
        }
        Command::Hedge { common } => {
            let s = load(&common.config)?;
            let (text, neutral) = cmd_hedge(&s)?;
            write_out(&common.out, &text)?;
            emit(out, &text)?;
            if !neutral {
                emit(out, "gamma or vega did not cancel\n")?;
                return Ok(EXIT_VERIFY_FAILED);
            }
        }
        Command::Table { common } => {
            let s = load(&common.config)?;
            let (text, csv) = cmd_table(&s)?;
            write_out(&common.out, &csv)?;
            emit(out, &text)?;
        }
        Command::Figure { common, figure: id } => {
            let s = load(&common.config)?;
            let text = figure(&id, &s)?.to_csv();
            if common.out.is_some() {
                write_out(&common.out, &text)?;
            } else {
                emit(out, &text)?;
            }
        }
        Command::Grid { common } => {
            let s = load(&common.config)?;
            let text = cmd_grid(&s)?;
            if common.out.is_some() {
                write_out(&common.out, &text)?;
            } else {
                emit(out, &text)?;
            }
        }
        Command::Verify { common, seed, paths } => {
            let mut s = load(&common.config)?;
            if seed.is_some() || paths.is_some() {
                let base = s.mc.unwrap_or(McConfig::new(DEFAULT_PATHS, DEFAULT_SEED));
                let mc = McConfig {
                    seed: seed.unwrap_or(base.seed),
                    n_paths: paths.unwrap_or(base.n_paths),
                    ..base
                };
                mc.validate().map_err(|e| Error::Config(format!("--paths: {e}")))?;
                s.mc = Some(mc);
            }
            let report = verify(&s, &ClosedForms::default())?;
            let text = report.to_csv();
            emit(out, &report.summary())?;
            if common.out.is_some() {
                write_out(&common.out, &text)?;
            } else {
                emit(out, &text)?;
            }
            if !report.all_passed() {
                return Ok(EXIT_VERIFY_FAILED);
            }
        }
    }
    Ok(EXIT_OK)
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code; diagnostics go to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                EXIT_CONFIG
            } else {
                let _ = out.write_all(text.as_bytes());
                EXIT_OK
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "lpgreeks: {e}");
            exit_code(&e)
        }
    }
}
