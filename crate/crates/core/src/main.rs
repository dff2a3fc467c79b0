use clap::{Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use tsou::harness::{bench_accept, oracle_cf, path_csv, simulate, stationary, Bandwidth, KdeSpec};
use tsou::ou_transition::Strategy;
use tsou::ts_core::{parse_config, TsouParams};
use tsou::Error;

#[derive(Parser)]
#[command(name = "tsou", version, about = "Exact simulation of tempered stable OU processes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Simulate one path and write `step,time,value` rows.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = "auto")]
        strategy: Strategy,
        #[arg(long)]
        out: PathBuf,
    },
    /// Simulate a stationary path and compare its KDE with the exact pdf.
    Stationary {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        seed: u64,
        /// LO:HI:STEP
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        /// Positive number or `silverman`.
        #[arg(long, default_value = "silverman")]
        bandwidth: String,
        #[arg(long, default_value = "auto")]
        strategy: Strategy,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Measure the acceptance rate of a rejection sampler.
    BenchAccept {
        #[arg(long)]
        target: String,
        /// JSON object, inline or `@FILE`.
        #[arg(long)]
        params: String,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        seed: u64,
    },
    /// Compare the transition characteristic function with n simulated transitions.
    OracleCf {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        t: f64,
        #[arg(long, allow_hyphen_values = true)]
        y: f64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        z: Vec<f64>,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = "auto")]
        strategy: Strategy,
    },
}

fn load(path: &Path) -> Result<TsouParams, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

fn write(path: &Path, data: &str) -> Result<(), Error> {
    std::fs::write(path, data).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn parse_grid(s: &str, bandwidth: &str) -> Result<KdeSpec, Error> {
    let parts: Vec<&str> = s.split(':').collect();
    let nums: Vec<f64> = parts.iter().filter_map(|p| p.trim().parse().ok()).collect();
    if parts.len() != 3 || nums.len() != 3 {
        return Err(Error::Config(format!("grid must be LO:HI:STEP, got '{s}'")));
    }
    let bw = if bandwidth.eq_ignore_ascii_case("silverman") {
        Bandwidth::Silverman
    } else {
        Bandwidth::Fixed(bandwidth.parse().map_err(|_| Error::Config(format!("bad bandwidth '{bandwidth}'")))?)
    };
    KdeSpec::new(bw, nums[0], nums[1], nums[2]).map_err(|e| Error::Config(e.to_string()))
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize") + "\n"
}

fn run(cmd: Cmd) -> Result<(), Error> {
    match cmd {
        Cmd::Simulate { config, t, steps, seed, strategy, out } => {
            let params = load(&config)?;
            if !(t > 0.0) || steps == 0 {
                return Err(Error::Config("need t > 0 and steps >= 1".into()));
            }
            let path = simulate(&params, t, steps, seed, strategy)?;
            write(&out, &path_csv(&path, t))
        }
        Cmd::Stationary { config, t, steps, seed, grid, bandwidth, strategy, out, svg } => {
            let params = load(&config)?;
            let spec = parse_grid(&grid, &bandwidth)?;
            if !(t > 0.0) || steps == 0 {
                return Err(Error::Config("need t > 0 and steps >= 1".into()));
            }
            let report = stationary(&params, t, steps, seed, strategy, &spec)?;
            write(&out, &report.csv())?;
            if let Some(svg) = svg {
                let title = format!("stationary law: alpha = {}, {} steps of t = {}", params.alpha, steps, t);
                write(&svg, &report.svg(&title))?;
            }
            eprintln!("bandwidth {}, sup |kde - pdf| = {:.3e}", report.bandwidth, report.sup_gap());
            Ok(())
        }
        Cmd::BenchAccept { target, params, n, seed } => {
            let text = match params.strip_prefix('@') {
                Some(file) => std::fs::read_to_string(file).map_err(|e| Error::Config(format!("{file}: {e}")))?,
                None => params,
            };
            let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| Error::Config(e.to_string()))?;
            let report = bench_accept(&target, &value, n, seed)?;
            print!("{}", json(&report));
            Ok(())
        }
        Cmd::OracleCf { config, t, y, z, n, seed, strategy } => {
            let params = load(&config)?;
            if !(t > 0.0) || n == 0 || z.is_empty() {
                return Err(Error::Config("need t > 0, n >= 1 and at least one z".into()));
            }
            let report = oracle_cf(&params, t, y, &z, n, seed, strategy)?;
            print!("{}", json(&report));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tsou: {e}");
            match e {
                Error::Config(_) | Error::Domain(_) => ExitCode::from(2),
                Error::Numerical(_) | Error::Unsupported(_) => ExitCode::from(3),
            }
        }
    }
}
