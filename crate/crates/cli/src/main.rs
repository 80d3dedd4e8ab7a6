mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use config::Settings;

#[derive(Parser)]
#[command(name = "bosegas", version, about = "Dilute Bose gas free-energy toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON file with default settings (flags take precedence)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// zero-energy scattering solution and scattering length
    Scatter,
    /// Neumann-basis matrix of the symmetrized kernel against its expected diagonal
    Kernel,
    /// Bogoliubov dispersion table on the mode lattice
    Spectrum,
    /// LHY free-energy density, parameter schedule and constraint report
    Freeenergy,
    /// truncated Fock-space spectrum
    Oracle,
    /// acceptance checks; exit 2 if any fails
    Verify,
    /// parameter sweep with a fitted log-log exponent
    Sweep,
}

#[derive(clap::Args, Default)]
struct Flags {
    /// barrier | file
    #[arg(long, global = true)]
    potential: Option<String>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    v0: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    range: Option<f64>,
    /// two-column (r, V) table
    #[arg(long, global = true)]
    potential_file: Option<PathBuf>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    rho: Option<f64>,
    /// scattering length override
    #[arg(long, global = true, allow_negative_numbers = true)]
    a: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    temp: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    ell: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    lambda: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    n: Option<f64>,
    /// mode cutoff |m|∞ for kernel and spectrum
    #[arg(long, global = true)]
    cutoff: Option<u32>,
    /// Fock truncation (total quanta) for the oracle
    #[arg(long, global = true)]
    n_max: Option<usize>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    tol: Option<f64>,
    /// oracle modes as a,b,c;a,b,c
    #[arg(long, global = true)]
    modes: Option<String>,
    /// bog | full
    #[arg(long, global = true)]
    hamiltonian: Option<String>,
    /// particle number for the full oracle Hamiltonian
    #[arg(long, global = true)]
    particles: Option<usize>,
    /// dispersion-lambda | ebog-lambda | ebog-density | riemann | lhy-residual
    #[arg(long, global = true)]
    sweep: Option<String>,
    /// comma-separated sweep values
    #[arg(long, global = true, value_delimiter = ',')]
    values: Option<Vec<f64>>,
    /// stiffness q for the riemann sweep
    #[arg(long, global = true, allow_negative_numbers = true)]
    q: Option<f64>,
    /// comma-separated criterion ids for verify (default all)
    #[arg(long, global = true, value_delimiter = ',')]
    criteria: Option<Vec<u8>>,
}

fn parse_modes(s: &str) -> Result<Vec<[u32; 3]>, String> {
    s.split(';')
        .map(|m| {
            let v: Vec<u32> = m
                .split(',')
                .map(|x| x.trim().parse::<u32>().map_err(|e| format!("bad mode '{m}': {e}")))
                .collect::<Result<_, _>>()?;
            <[u32; 3]>::try_from(v).map_err(|_| format!("mode '{m}' needs three indices"))
        })
        .collect()
}

fn apply(mut s: Settings, f: Flags) -> Result<Settings, String> {
    macro_rules! set {
        ($($field:ident),*) => { $( if let Some(v) = f.$field { s.$field = v; } )* };
    }
    set!(potential, v0, range, rho, temp, ell, lambda, n, cutoff, n_max, tol, hamiltonian, particles, sweep, values, q, criteria);
    if let Some(p) = f.potential_file {
        s.potential_file = Some(p);
        if s.potential == "barrier" {
            s.potential = "file".into();
        }
    }
    if f.a.is_some() {
        s.a = f.a;
    }
    if let Some(m) = f.modes {
        s.modes = parse_modes(&m)?;
    }
    Ok(s)
}

fn fail(kind: &str, reason: impl std::fmt::Display) -> ExitCode {
    let reason = reason.to_string().replace('\n', " ");
    eprintln!("error: kind={kind} reason={reason:?}");
    ExitCode::from(1)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(err) if !err.use_stderr() => {
            print!("{err}");
            return ExitCode::SUCCESS;
        }
        Err(err) => {
            let msg = err.to_string();
            return fail("usage", msg.lines().next().unwrap_or("").trim_start_matches("error: "));
        }
    };
    if let Ok(t) = std::env::var("BOSEGAS_THREADS") {
        match t.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => return fail("validation", format!("BOSEGAS_THREADS must be a positive integer, got '{t}'")),
        }
    }
    let settings = match config::load(cli.config.as_deref()).and_then(|s| apply(s, cli.flags)) {
        Ok(s) => s,
        Err(e) => return fail("validation", e),
    };
    if let Err(e) = settings.validate() {
        return fail("validation", e);
    }
    let outcome = match commands::run(cli.command, &settings) {
        Ok(o) => o,
        Err(e) => return fail("validation", e),
    };
    let format = cli.format.unwrap_or(match cli.command {
        Command::Scatter | Command::Freeenergy => Format::Json,
        _ => Format::Csv,
    });
    let config = serde_json::to_value(&settings).unwrap();
    let text = match format {
        Format::Csv => outcome.report.csv(&config),
        Format::Json => outcome.report.json(&config),
    };
    match &cli.out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, text) {
                return fail("io", format!("cannot write {}: {e}", p.display()));
            }
        }
        None => print!("{text}"),
    }
    match outcome.failed {
        Some(reason) => {
            eprintln!("verify: status=failed {reason}");
            ExitCode::from(2)
        }
        None => ExitCode::SUCCESS,
    }
}
