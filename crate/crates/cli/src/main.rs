use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lbsdc::experiment::{cmd_converge, cmd_energy_ref, cmd_relax, convergence_csv, ConfigMap, Experiment, RunConfig};
use lbsdc::Error;

const EXIT_CONFIG: u8 = 1;
const EXIT_NOT_CONVERGED: u8 = 2;

#[derive(Parser)]
#[command(name = "lbsdc", version, about = "Landau-Brazovskii relaxation with spectral deferred correction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Temporal convergence table on the manufactured solution.
    Converge(Overrides),
    /// Relax a phase seed to a stationary state.
    Relax(Overrides),
    /// Relax at N and 2N and compare the energies.
    EnergyRef(Overrides),
}

/// Flags override values from the config file.
#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct Overrides {
    /// Flat `key = value` config file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    phase: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    dt: Option<f64>,
    /// Node count and correction count, e.g. `4,2`.
    #[arg(long, value_name = "M,K", value_parser = parse_scheme)]
    scheme: Option<(usize, usize)>,
    /// `legendre` or `chebyshev`.
    #[arg(long)]
    nodes: Option<String>,
    /// Use the adaptive correction scheme.
    #[arg(long)]
    adaptive: bool,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    eref: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Any other config key, e.g. `--set max_iters=500`.
    #[arg(long = "set", value_name = "KEY=VALUE", value_parser = parse_pair)]
    extra: Vec<(String, String)>,
}

fn parse_scheme(s: &str) -> Result<(usize, usize), String> {
    let (m, k) = s.split_once(',').ok_or("expected M,K")?;
    let m = m.trim().parse().map_err(|e| format!("M: {e}"))?;
    let k = k.trim().parse().map_err(|e| format!("K: {e}"))?;
    Ok((m, k))
}

fn parse_pair(s: &str) -> Result<(String, String), String> {
    let (k, v) = s.split_once('=').ok_or("expected KEY=VALUE")?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}

impl Overrides {
    fn into_config(self, experiment: Experiment) -> lbsdc::Result<RunConfig> {
        let mut map = match &self.config {
            Some(path) => ConfigMap::load(path)?,
            None => ConfigMap::default(),
        };
        for (key, value) in self.extra {
            map.set(&key, value);
        }
        let mut set = |key: &str, value: Option<String>| {
            if let Some(v) = value {
                map.set(key, v);
            }
        };
        set("phase", self.phase);
        set("n", self.n.map(|v| v.to_string()));
        set("dt", self.dt.map(|v| v.to_string()));
        set("m", self.scheme.map(|s| s.0.to_string()));
        set("k", self.scheme.map(|s| s.1.to_string()));
        set("nodes", self.nodes);
        set("adaptive", self.adaptive.then(|| "true".to_string()));
        set("eps", self.eps.map(|v| v.to_string()));
        set("eref", self.eref.map(|v| v.to_string()));
        set("out", self.out.map(|p| p.to_string_lossy().into_owned()));
        RunConfig::from_map(experiment, &map)
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.4e}"))
}

fn run(command: Command) -> Result<bool, (u8, Error)> {
    let config = |o: Overrides, e| o.into_config(e).map_err(|err| (EXIT_CONFIG, err));
    let failed = |err: Error| match err {
        Error::NotConverged(_) | Error::NoConvergence { .. } => (EXIT_NOT_CONVERGED, err),
        other => (EXIT_CONFIG, other),
    };
    match command {
        Command::Converge(o) => {
            let cfg = config(o, Experiment::Converge)?;
            let rows = cmd_converge(&cfg).map_err(failed)?;
            print!("{}", convergence_csv(&rows));
            Ok(true)
        }
        Command::Relax(o) => {
            let cfg = config(o, Experiment::Relax)?;
            let outcome = cmd_relax(&cfg, |_| {}).map_err(failed)?;
            let s = outcome.log.summary();
            println!(
                "iterations={} corrections={:.2} energy={:.13} gap={} wall={:.2}s converged={}",
                s.iterations,
                s.mean_corrections,
                s.final_energy,
                fmt_opt(s.final_gap),
                s.wall_seconds,
                s.converged
            );
            Ok(s.converged)
        }
        Command::EnergyRef(o) => {
            let cfg = config(o, Experiment::EnergyRef)?;
            let r = cmd_energy_ref(&cfg).map_err(failed)?;
            println!(
                "N={} energy={:.13} 2N={} energy={:.13} difference={:.3e} digits={} converged={}",
                r.n,
                r.energy_coarse,
                2 * r.n,
                r.energy_fine,
                r.difference,
                r.digits,
                r.converged
            );
            Ok(r.converged)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_NOT_CONVERGED),
        Err((code, err)) => {
            eprintln!("error: {err}");
            ExitCode::from(code)
        }
    }
}
