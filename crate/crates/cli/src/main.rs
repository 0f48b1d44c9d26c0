use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use relay_outage_cli::config::ConfigBuilder;
use relay_outage_cli::figures::{run_figure, Figure};
use relay_outage_cli::run::{run_optimize, run_point, run_sweep};
use relay_outage_cli::selftest::{run_all, SelftestOptions};
use relay_outage_cli::{CliError, CliResult, ExperimentConfig, Table};

#[derive(Parser, Debug)]
#[command(
    name = "relay-outage",
    version,
    about = "Outage of energy-harvesting relay links over log-normal fading"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Configuration file of `key = value` lines.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Monte Carlo trials per point.
    #[arg(long, global = true)]
    trials: Option<u64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file (stdout if absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    /// Skip the Monte Carlo column.
    #[arg(long, global = true)]
    no_mc: bool,
    /// Extra `key=value` assignment, applied after the file. Repeatable.
    #[arg(long = "override", global = true, value_name = "K=V")]
    overrides: Vec<String>,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate the configured scenario at one point.
    Point,
    /// Evaluate the scenario along `sweep.axis`.
    Sweep,
    /// Minimize outage over tau or rho.
    Optimize,
    /// Regenerate a reference figure dataset.
    Figure {
        #[arg(value_parser = parse_figure)]
        which: Figure,
    },
    /// Run the acceptance checks.
    Selftest,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

fn parse_figure(s: &str) -> Result<Figure, String> {
    s.parse()
}

fn load(cli: &Cli) -> CliResult<ExperimentConfig> {
    let mut b = ConfigBuilder::default();
    if let Some(path) = &cli.config {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        b.apply_text(&text)?;
    }
    for kv in &cli.overrides {
        b.apply_override(kv)?;
    }
    let origin = relay_outage_cli::config::Origin::Override;
    if let Some(n) = cli.trials {
        b.set("mc.trials", &n.to_string(), origin)?;
    }
    if let Some(s) = cli.seed {
        b.set("mc.seed", &s.to_string(), origin)?;
    }
    if cli.no_mc {
        b.set("mc.enabled", "false", origin)?;
    }
    if let Some(p) = &cli.out {
        b.set("output.path", &p.display().to_string(), origin)?;
    }
    if let Some(f) = cli.format {
        let name = match f {
            FormatArg::Csv => "csv",
            FormatArg::Json => "json",
        };
        b.set("output.format", name, origin)?;
    }
    Ok(b.build()?)
}

fn emit(table: &Table, cfg: &ExperimentConfig) -> CliResult<()> {
    let text = table.to_string(cfg.output.format);
    match &cfg.output.path {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io {
                    path: "stdout".into(),
                    source,
                })
        }
    }
}

fn selftest(cli: &Cli) -> CliResult<()> {
    let mut opts = SelftestOptions::default();
    if let Some(n) = cli.trials {
        opts.trials = n;
    }
    if let Some(s) = cli.seed {
        opts.seed = s;
    }
    let reports = run_all(&opts)?;
    let failed = reports.iter().filter(|r| !r.passed).count();
    for r in &reports {
        println!("{r}");
    }
    println!(
        "{} of {} criteria passed",
        reports.len() - failed,
        reports.len()
    );
    if failed > 0 {
        return Err(CliError::Selftest { failed });
    }
    Ok(())
}

fn run(cli: &Cli) -> CliResult<()> {
    if let Some(n) = cli.threads {
        // fails only if a pool already exists, which cannot happen here
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    if let Command::Selftest = cli.command {
        return selftest(cli);
    }
    let cfg = load(cli)?;
    let table = match &cli.command {
        Command::Point => {
            let t = run_point(&cfg)?;
            let r = &t.rows[0];
            match r.mc {
                Some(mc) => eprintln!(
                    "{}: analytic {} mc {} (stderr {}, delta {})",
                    r.scenario,
                    r.analytic,
                    mc.value,
                    mc.stderr.unwrap_or(0.0),
                    r.analytic - mc.value
                ),
                None => eprintln!("{}: analytic {}", r.scenario, r.analytic),
            }
            t
        }
        Command::Sweep => run_sweep(&cfg)?,
        Command::Optimize => run_optimize(&cfg)?,
        Command::Figure { which } => run_figure(*which, &cfg)?,
        Command::Selftest => unreachable!(),
    };
    emit(&table, &cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
