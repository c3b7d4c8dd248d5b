use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use noma_core::analytic::{outage_o1, outage_o2, outage_oma, Scheme};
use noma_core::experiments::{
    compare, figure_preset, load_config, load_sweep_spec, run_invariant_suite, run_sweep, write_commented_csv,
    KernelChoice, ScenarioConfig, SchemeChoice,
};
use noma_core::montecarlo::estimate;
use noma_core::scenario::Destination;
use noma_core::Result;

/// Outage of cooperative NOMA relaying over mmWave links at a road
/// intersection.
#[derive(Parser)]
#[command(name = "noma-outage", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form outage for one configuration.
    Analytic(Common),
    /// Monte Carlo outage for one configuration.
    Simulate(Common),
    /// Closed forms against Monte Carlo, with z-scores.
    Compare(Common),
    /// A figure preset or a sweep file.
    Sweep(SweepArgs),
    /// Run the analytic self-checks.
    Validate,
}

#[derive(Args)]
struct Common {
    /// Scenario file (`key = value` lines); defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Monte Carlo trials [default: 100000].
    #[arg(long)]
    trials: Option<u64>,
    /// Master seed [default: 42].
    #[arg(long)]
    seed: Option<u64>,
    /// Closed-form kernel [default: exact].
    #[arg(long, value_enum)]
    kernel: Option<KernelArg>,
    #[arg(long, value_enum)]
    scheme: Option<SchemeArg>,
    /// Write CSV here instead of a table on stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Minimum simulated half-width of each road, meters.
    #[arg(long)]
    window: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..=5), conflicts_with = "spec")]
    figure: Option<u32>,
    /// Sweep file: sweep keys plus scenario keys.
    #[arg(long, required_unless_present = "figure")]
    spec: Option<PathBuf>,
    /// Skip the Monte Carlo columns.
    #[arg(long)]
    analytic_only: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum KernelArg {
    Paper,
    Exact,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Noma,
    Oma,
    Both,
}

impl Common {
    fn resolve(&self) -> Result<ScenarioConfig> {
        let mut cfg = match &self.config {
            Some(path) => load_config(path)?,
            None => ScenarioConfig::default(),
        };
        self.apply(&mut cfg);
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply(&self, cfg: &mut ScenarioConfig) {
        if let Some(t) = self.trials {
            cfg.trials = t;
        }
        if let Some(s) = self.seed {
            cfg.master_seed = s;
        }
        if let Some(k) = self.kernel {
            cfg.kernel = match k {
                KernelArg::Paper => KernelChoice::Paper,
                KernelArg::Exact => KernelChoice::Exact,
                KernelArg::Both => KernelChoice::Both,
            };
        }
        if let Some(s) = self.scheme {
            cfg.scheme = match s {
                SchemeArg::Noma => SchemeChoice::Noma,
                SchemeArg::Oma => SchemeChoice::Oma,
                SchemeArg::Both => SchemeChoice::Both,
            };
        }
        if let Some(w) = self.window {
            cfg.scenario.ppp.window = w;
        }
    }

    fn sink(&self) -> Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(path) => Box::new(BufWriter::new(File::create(path)?)),
            None => Box::new(io::stdout().lock()),
        })
    }
}

fn config_header(cfg: &ScenarioConfig) -> Vec<String> {
    let mut h: Vec<String> = cfg.render().lines().map(str::to_string).collect();
    h.extend(cfg.corrected_defaults.iter().map(|n| format!("corrected default: {n}")));
    h
}

fn analytic_pair(cfg: &ScenarioConfig, scheme: Scheme, kernel: noma_core::analytic::Kernel) -> Result<[f64; 2]> {
    let sc = &cfg.scenario;
    Ok(match scheme {
        Scheme::Noma => [outage_o1(sc, kernel)?, outage_o2(sc, kernel)?],
        Scheme::Oma => [outage_oma(sc, Destination::D1, kernel)?, outage_oma(sc, Destination::D2, kernel)?],
    })
}

const POINT_COLUMNS: [&str; 6] = ["scheme", "destination", "method", "outage", "std_err", "trials"];

fn run_analytic(args: &Common) -> Result<()> {
    let cfg = args.resolve()?;
    let mut rows = Vec::new();
    for scheme in cfg.scheme.schemes() {
        for kernel in cfg.kernel.kernels() {
            let pair = analytic_pair(&cfg, scheme, kernel)?;
            for (dest, v) in [Destination::D1, Destination::D2].into_iter().zip(pair) {
                let method = format!("analytic-{}", kernel.as_str());
                rows.push(vec![scheme.as_str().into(), dest.as_str().into(), method, v.to_string(), "0".into(), "0".into()]);
            }
        }
    }
    write_point(args, &cfg, rows)
}

fn run_simulate(args: &Common) -> Result<()> {
    let cfg = args.resolve()?;
    let mut rows = Vec::new();
    for scheme in cfg.scheme.schemes() {
        let rep = estimate(&cfg.scenario, scheme, cfg.trials, cfg.master_seed)?;
        for (dest, e) in [(Destination::D1, rep.o1), (Destination::D2, rep.o2)] {
            rows.push(vec![
                scheme.as_str().into(),
                dest.as_str().into(),
                e.provenance.as_str().into(),
                e.p_hat.to_string(),
                e.std_err.to_string(),
                e.trials.to_string(),
            ]);
        }
    }
    write_point(args, &cfg, rows)
}

fn write_point(args: &Common, cfg: &ScenarioConfig, rows: Vec<Vec<String>>) -> Result<()> {
    if args.out.is_some() {
        return write_commented_csv(args.sink()?, &config_header(cfg), &POINT_COLUMNS, rows);
    }
    let mut out = io::stdout().lock();
    for note in &cfg.corrected_defaults {
        writeln!(out, "note: corrected default {note}")?;
    }
    writeln!(out, "{:<6} {:<4} {:<15} {:>14} {:>12} {:>8}", "scheme", "dest", "method", "outage", "std_err", "trials")?;
    for r in rows {
        writeln!(out, "{:<6} {:<4} {:<15} {:>14.8} {:>12.3e} {:>8}", r[0], r[1], r[2], num(&r[3]), num(&r[4]), r[5])?;
    }
    Ok(())
}

fn num(s: &str) -> f64 {
    s.parse().unwrap_or(f64::NAN)
}

fn run_compare(args: &Common) -> Result<()> {
    let cfg = args.resolve()?;
    let recs = compare(&cfg, cfg.trials)?;
    if args.out.is_some() {
        let columns = [
            "scheme",
            "destination",
            "analytic_paper",
            "analytic_exact",
            "mc_p_hat",
            "mc_std_err",
            "trials",
            "z_score_exact",
            "gap_paper_exact",
        ];
        let rows = recs.iter().map(|r| {
            vec![
                r.scheme.as_str().to_string(),
                r.destination.as_str().to_string(),
                r.analytic_paper.to_string(),
                r.analytic_exact.to_string(),
                r.mc_p_hat.to_string(),
                r.mc_std_err.to_string(),
                r.trials.to_string(),
                r.z_score_exact.to_string(),
                r.gap_paper_exact.to_string(),
            ]
        });
        return write_commented_csv(args.sink()?, &config_header(&cfg), &columns, rows);
    }
    let mut out = io::stdout().lock();
    writeln!(
        out,
        "{:<6} {:<4} {:>12} {:>12} {:>12} {:>10} {:>7} {:>11}",
        "scheme", "dest", "paper", "exact", "mc", "std_err", "z", "paper-exact"
    )?;
    for r in recs {
        writeln!(
            out,
            "{:<6} {:<4} {:>12.8} {:>12.8} {:>12.8} {:>10.3e} {:>7.2} {:>11.3e}",
            r.scheme.as_str(),
            r.destination.as_str(),
            r.analytic_paper,
            r.analytic_exact,
            r.mc_p_hat,
            r.mc_std_err,
            r.z_score_exact,
            r.gap_paper_exact
        )?;
    }
    Ok(())
}

fn run_sweep_cmd(args: &SweepArgs) -> Result<()> {
    let c = &args.common;
    let mut spec = match (args.figure, &args.spec) {
        (Some(fig), _) => figure_preset(fig, &c.resolve()?, !args.analytic_only)?,
        (None, Some(path)) => load_sweep_spec(path)?,
        (None, None) => unreachable!("clap requires --figure or --spec"),
    };
    if args.spec.is_some() {
        // command-line flags win over the sweep file
        let mut cfg = ScenarioConfig { trials: spec.trials, master_seed: spec.seed, ..Default::default() };
        c.apply(&mut cfg);
        spec.trials = cfg.trials;
        spec.seed = cfg.master_seed;
        if let Some(w) = c.window {
            for s in &mut spec.series {
                s.base.ppp.window = w;
            }
        }
        if c.kernel.is_some() {
            spec.outputs.kernels = cfg.kernel.kernels();
        }
        if c.scheme.is_some() {
            spec.outputs.schemes = cfg.scheme.schemes();
        }
        if args.analytic_only {
            spec.outputs.monte_carlo = false;
        }
    }
    let table = run_sweep(&spec)?;
    table.write_csv(c.sink()?)
}

fn run_validate() -> Result<bool> {
    let mut all = true;
    for c in run_invariant_suite()? {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        all &= c.passed;
    }
    Ok(all)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Analytic(a) => run_analytic(a).map(|_| true),
        Command::Simulate(a) => run_simulate(a).map(|_| true),
        Command::Compare(a) => run_compare(a).map(|_| true),
        Command::Sweep(a) => run_sweep_cmd(a).map(|_| true),
        Command::Validate => run_validate(),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
