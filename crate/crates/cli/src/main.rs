use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use octoplane::verify::{emit_report, run_suite, SuiteConfig};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;

/// Seeded numerical verification of the octoplane library.
///
/// Options are applied in order: defaults, then the config file, then
/// flags. Tolerances are overridden with `--tol.<check id>=<value>`.
#[derive(Parser, Debug)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    /// Suite to run when no subcommand is given.
    #[arg(long, global = true)]
    suite: Option<String>,
    /// Config file of `key = value` lines using the long flag names.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Comma-separated spectral parameters.
    #[arg(long, global = true, allow_hyphen_values = true)]
    lambda: Option<String>,
    #[arg(long, global = true)]
    lmax: Option<String>,
    /// Comma-separated radii of the boundary grid.
    #[arg(long, global = true)]
    rgrid: Option<String>,
    /// Comma-separated geodesic radii for the inversion checks.
    #[arg(long, global = true)]
    tgrid: Option<String>,
    /// Base Monte Carlo budget; other budgets scale from it.
    #[arg(long, global = true)]
    nmc: Option<String>,
    #[arg(long, global = true)]
    ngauss: Option<String>,
    #[arg(long, global = true)]
    seed: Option<String>,
    /// Report path; standard output when absent.
    #[arg(long, global = true)]
    out: Option<String>,
    /// json or csv.
    #[arg(long, global = true)]
    format: Option<String>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    Algebra,
    Geometry,
    Special,
    Poisson,
    Cz,
    Invert,
    All,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Algebra => "algebra",
            Command::Geometry => "geometry",
            Command::Special => "special",
            Command::Poisson => "poisson",
            Command::Cz => "cz",
            Command::Invert => "invert",
            Command::All => "all",
        }
    }
}

/// Splits `--tol.<id>=<v>` and `--tol.<id> <v>` out of the argument list.
fn take_tolerances(args: Vec<String>) -> Result<(Vec<String>, Vec<(String, String)>), String> {
    let mut rest = Vec::with_capacity(args.len());
    let mut tols = Vec::new();
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        let Some(arg) = a.strip_prefix("--tol.") else {
            rest.push(a);
            continue;
        };
        match arg.split_once('=') {
            Some((id, v)) => tols.push((format!("tol.{id}"), v.to_string())),
            None => {
                let v = it.next().ok_or_else(|| format!("missing value for --tol.{arg}"))?;
                tols.push((format!("tol.{arg}"), v));
            }
        }
    }
    Ok((rest, tols))
}

fn build_config(cli: &Cli, tols: &[(String, String)]) -> Result<SuiteConfig, (u8, String)> {
    let usage = |e: octoplane::Error| (EXIT_USAGE, e.to_string());
    let mut config = SuiteConfig::default();
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path).map_err(|e| (EXIT_IO, format!("{}: {e}", path.display())))?;
        config.apply_file_text(&text).map_err(usage)?;
    }
    let flags = [
        ("suite", &cli.suite),
        ("lambda", &cli.lambda),
        ("lmax", &cli.lmax),
        ("rgrid", &cli.rgrid),
        ("tgrid", &cli.tgrid),
        ("nmc", &cli.nmc),
        ("ngauss", &cli.ngauss),
        ("seed", &cli.seed),
        ("out", &cli.out),
        ("format", &cli.format),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            config.set(key, v).map_err(usage)?;
        }
    }
    if let Some(cmd) = cli.command {
        config.set("suite", cmd.name()).map_err(usage)?;
    }
    for (k, v) in tols {
        config.set(k, v).map_err(usage)?;
    }
    if std::env::var_os("CI").is_some() && cli.seed.is_none() && !config_has_seed(cli) {
        return Err((EXIT_USAGE, "a seed is required when CI is set".into()));
    }
    config.validate().map_err(usage)?;
    Ok(config)
}

fn config_has_seed(cli: &Cli) -> bool {
    cli.config
        .as_ref()
        .and_then(|p| std::fs::read_to_string(p).ok())
        .is_some_and(|t| t.lines().any(|l| l.split_once('=').is_some_and(|(k, _)| k.trim() == "seed")))
}

fn main() -> ExitCode {
    let (args, tols) = match take_tolerances(std::env::args().collect()) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let config = match build_config(&cli, &tols) {
        Ok(c) => c,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(code);
        }
    };
    let report = match run_suite(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    if let Err(e) = emit_report(&report, config.format, config.out.as_deref()) {
        eprintln!("error: writing report: {e}");
        return ExitCode::from(EXIT_IO);
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}
