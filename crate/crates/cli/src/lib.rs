//! Command-line front end for `dmimo-core`.
//!
//! Exit codes: 0 success, 1 usage/config/I-O error, 2 infeasible
//! constrained instance, 3 numeric or size-limit error.

pub mod config;
pub mod error;
pub mod output;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use dmimo_core::{
    build_rate_table, enumerate_partitions, optimal_partition, solve_overhead_constrained, sweep_aps,
    sweep_cct, sweep_mao, OverheadParams, SimConfig, DEFAULT_MAX_K,
};

pub use config::Settings;
pub use error::{exit, CliError};

#[derive(Debug, Parser)]
#[command(name = "dmimo", version, about = "Effective sum-rate and partitioning of distributed MIMO networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List every partition of the network into groups.
    Partitions(CommonArgs),
    /// Optimal partition without an overhead cap.
    Solve(CommonArgs),
    /// Optimal partition whose total overhead stays under --alpha-th.
    SolveConstrained(CommonArgs),
    /// Normalised rate with and without partitioning against frame length.
    SweepCct(CommonArgs),
    /// Ideal and effective normalised rate against network size.
    SweepAps(CommonArgs),
    /// Constrained/unconstrained rate ratio against the overhead cap.
    SweepMao(CommonArgs),
    /// Monte Carlo mean ZFBF sum-rate per group size and SNR.
    RateTable(CommonArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Network size (largest size for sweeps).
    #[arg(long)]
    pub k: Option<usize>,
    /// SNR in dB; comma-separated for sweeps.
    #[arg(long = "snr-db", value_delimiter = ',', allow_negative_numbers = true)]
    pub snr_db: Option<Vec<f64>>,
    /// Frame length T in symbols; comma-separated for sweeps.
    #[arg(long, value_delimiter = ',')]
    pub t: Option<Vec<u64>>,
    /// Overhead exponent.
    #[arg(long)]
    pub r: Option<f64>,
    /// Maximum allowed overhead fraction; comma-separated for sweeps.
    #[arg(long = "alpha-th", value_delimiter = ',')]
    pub alpha_th: Option<Vec<f64>>,
    /// Monte Carlo trials per group size and SNR point.
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Scenario file; flags take precedence over its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

impl CommonArgs {
    fn settings(&self) -> Result<Settings, CliError> {
        let file = match &self.config {
            Some(path) => Settings::load(path)?,
            None => Settings::default(),
        };
        Ok(file.overlay(Settings {
            k_max: self.k,
            snr_db: self.snr_db.clone(),
            t_values: self.t.clone(),
            r: self.r,
            trials: self.trials,
            base_seed: self.seed,
            alpha_th_values: self.alpha_th.clone(),
        }))
    }

    fn emit(
        &self,
        stdout: &mut dyn Write,
        body: impl FnOnce(&mut dyn Write) -> Result<(), CliError>,
    ) -> Result<(), CliError> {
        match &self.output {
            Some(path) => {
                let mut file = BufWriter::new(File::create(path)?);
                body(&mut file)?;
                file.flush()?;
                Ok(())
            }
            None => body(stdout),
        }
    }
}

/// Sweep configuration: unset fields fall back to [`SimConfig::default`].
pub fn sim_config(s: &Settings) -> SimConfig {
    let d = SimConfig::default();
    SimConfig {
        k_max: s.k_max.unwrap_or(d.k_max),
        snr_db: s.snr_db.clone().unwrap_or(d.snr_db),
        t_values: s.t_values.clone().unwrap_or(d.t_values),
        r: s.r.unwrap_or(d.r),
        trials: s.trials.unwrap_or(d.trials),
        base_seed: s.base_seed.unwrap_or(d.base_seed),
        alpha_th_values: s.alpha_th_values.clone().unwrap_or(d.alpha_th_values),
    }
}

fn required<T: Clone>(value: &Option<T>, name: &str) -> Result<T, CliError> {
    value.clone().ok_or_else(|| CliError::Usage(format!("missing required parameter {name}")))
}

fn single<T: Copy>(values: &Option<Vec<T>>, name: &str) -> Result<T, CliError> {
    match required(values, name)?.as_slice() {
        [v] => Ok(*v),
        other => Err(CliError::Usage(format!("{name} takes exactly one value here, got {}", other.len()))),
    }
}

/// Outcome of `solve` / `solve-constrained`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub k: usize,
    pub snr_db: f64,
    pub t: u64,
    pub r: f64,
    pub trials: usize,
    pub seed: u64,
    pub alpha_th: Option<f64>,
    pub feasible_count: Option<usize>,
    pub partition: String,
    pub effective_rate: f64,
    pub overhead: f64,
}

impl SolveReport {
    const CSV_HEADER: [&'static str; 11] = [
        "k", "snr_db", "t", "r", "trials", "seed", "alpha_th", "feasible_count", "best_partition",
        "effective_rate", "overhead",
    ];

    fn csv_record(&self) -> [String; 11] {
        let opt = |v: Option<String>| v.unwrap_or_default();
        [
            self.k.to_string(),
            self.snr_db.to_string(),
            self.t.to_string(),
            self.r.to_string(),
            self.trials.to_string(),
            self.seed.to_string(),
            opt(self.alpha_th.map(|a| a.to_string())),
            opt(self.feasible_count.map(|n| n.to_string())),
            self.partition.clone(),
            self.effective_rate.to_string(),
            self.overhead.to_string(),
        ]
    }

    fn write(&self, out: &mut dyn Write, format: Option<Format>) -> Result<(), CliError> {
        match format {
            Some(Format::Json) => {
                serde_json::to_writer_pretty(&mut *out, self)?;
                writeln!(out)?;
            }
            Some(Format::Csv) => {
                let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
                w.write_record(Self::CSV_HEADER)?;
                w.write_record(self.csv_record())?;
                w.flush()?;
            }
            None => {
                writeln!(out, "network: {k}x{k}", k = self.k)?;
                writeln!(out, "snr_db: {}", self.snr_db)?;
                writeln!(out, "frame_length: {}", self.t)?;
                writeln!(out, "overhead_exponent: {}", self.r)?;
                writeln!(out, "trials: {} (seed {})", self.trials, self.seed)?;
                if let (Some(a), Some(n)) = (self.alpha_th, self.feasible_count) {
                    writeln!(out, "alpha_th: {a}")?;
                    writeln!(out, "status: feasible")?;
                    writeln!(out, "feasible_candidates: {n}")?;
                }
                writeln!(out, "chosen: {}", self.partition)?;
                writeln!(out, "effective_sum_rate: {:.6} bits/s/Hz", self.effective_rate)?;
                writeln!(out, "overhead: {}", self.overhead)?;
            }
        }
        Ok(())
    }
}

fn cmd_partitions(args: &CommonArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let k = required(&args.settings()?.k_max, "--k")?;
    let partitions = enumerate_partitions(k)?;
    args.emit(stdout, |out| {
        match args.format {
            None => {
                let noun = if partitions.len() == 1 { "partition" } else { "partitions" };
                writeln!(out, "{} {noun}", partitions.len())?;
                for p in &partitions {
                    writeln!(out, "{}", p.sum_label())?;
                }
            }
            Some(Format::Csv) => {
                let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
                w.write_record(["index", "parts", "groups", "label"])?;
                for (i, p) in partitions.iter().enumerate() {
                    w.write_record([i.to_string(), p.sum_label(), p.d_total().to_string(), p.label()])?;
                }
                w.flush()?;
            }
            Some(Format::Json) => {
                #[derive(Serialize)]
                struct Entry {
                    parts: Vec<usize>,
                    label: String,
                }
                let entries: Vec<Entry> =
                    partitions.iter().map(|p| Entry { parts: p.parts(), label: p.label() }).collect();
                serde_json::to_writer_pretty(&mut *out, &entries)?;
                writeln!(out)?;
            }
        }
        Ok(())
    })
}

fn cmd_solve(args: &CommonArgs, constrained: bool, stdout: &mut dyn Write) -> Result<(), CliError> {
    let s = args.settings()?;
    let k = required(&s.k_max, "--k")?;
    if k > DEFAULT_MAX_K {
        return Err(dmimo_core::Error::SizeLimit { k, max: DEFAULT_MAX_K }.into());
    }
    let snr_db = single(&s.snr_db, "--snr-db")?;
    let t = single(&s.t_values, "--t")?;
    let alpha_th = if constrained { Some(single(&s.alpha_th_values, "--alpha-th")?) } else { None };
    let defaults = SimConfig::default();
    let cfg = SimConfig {
        k_max: k,
        snr_db: vec![snr_db],
        t_values: vec![t],
        r: s.r.unwrap_or(defaults.r),
        trials: s.trials.unwrap_or(defaults.trials),
        base_seed: s.base_seed.unwrap_or(defaults.base_seed),
        alpha_th_values: vec![alpha_th.unwrap_or(1.0)],
    };
    cfg.validate()?;
    let oh = OverheadParams::new(cfg.r, t)?;
    let table = build_rate_table(&cfg)?;
    let rates = table.rates(snr_db).expect("table built for this SNR");

    let (partition, effective_rate, overhead, feasible_count) = match alpha_th {
        None => {
            let (best, _) = optimal_partition(k, &rates, &oh)?;
            (best.partition.label(), best.effective_rate, best.total_overhead, None)
        }
        Some(a) => {
            let sol = solve_overhead_constrained(k, &rates, &oh, a)?;
            let chosen = sol.chosen.ok_or(CliError::Infeasible(a))?;
            (chosen.composition.label(), chosen.profit, chosen.weight, Some(sol.feasible_count))
        }
    };
    let report = SolveReport {
        k,
        snr_db,
        t,
        r: cfg.r,
        trials: cfg.trials,
        seed: cfg.base_seed,
        alpha_th,
        feasible_count,
        partition,
        effective_rate,
        overhead,
    };
    args.emit(stdout, |out| report.write(out, args.format))
}

fn json_lines<T: Serialize>(out: &mut dyn Write, rows: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, rows)?;
    writeln!(out)?;
    Ok(())
}

fn cmd_sweep(command: &Command, args: &CommonArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let cfg = sim_config(&args.settings()?);
    cfg.validate()?;
    let table = build_rate_table(&cfg)?;
    let json = args.format == Some(Format::Json);
    // Compute before touching the output path so failures leave no file.
    match command {
        Command::RateTable(_) => args.emit(stdout, |out| {
            if json {
                json_lines(out, &table.entries().collect::<Vec<_>>())
            } else {
                output::write_rate_table(out, &table)
            }
        }),
        Command::SweepCct(_) => {
            let rows = sweep_cct(&cfg, &table)?;
            args.emit(stdout, |out| if json { json_lines(out, &rows) } else { output::write_cct(out, &rows) })
        }
        Command::SweepAps(_) => {
            let rows = sweep_aps(&cfg, &table)?;
            args.emit(stdout, |out| if json { json_lines(out, &rows) } else { output::write_aps(out, &rows) })
        }
        Command::SweepMao(_) => {
            let rows = sweep_mao(&cfg, &table)?;
            args.emit(stdout, |out| if json { json_lines(out, &rows) } else { output::write_mao(out, &rows) })
        }
        _ => unreachable!("not a sweep command"),
    }
}

/// Runs one parsed command, writing regular output to `stdout` unless
/// `--output` redirects it.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Partitions(a) => cmd_partitions(a, stdout),
        Command::Solve(a) => cmd_solve(a, false, stdout),
        Command::SolveConstrained(a) => cmd_solve(a, true, stdout),
        c @ (Command::SweepCct(a) | Command::SweepAps(a) | Command::SweepMao(a) | Command::RateTable(a)) => {
            cmd_sweep(c, a, stdout)
        }
    }
}
