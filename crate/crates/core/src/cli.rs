//! The `pairnet` command line: `test`, `simulate` and `nulldist`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};

use crate::baselines::{run_ase_test, run_eig_test, AseConfig, EigConfig, ThresholdReading};
use crate::boottest::{run_test, Method, TestKind, TestResult};
use crate::error::{Error, Result};
use crate::harness::{
    histogram_csv, quantile_csv, quantile_report, run_experiment, sample_statistic_distribution,
    ExperimentConfig, ExperimentReport,
};
use crate::models::{Estimator, Family};
use crate::netcore::{read_edge_list, read_node_map, Graph, NodeMap};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "pairnet",
    version,
    about = "Equality and scaling tests for paired networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
#[allow(clippy::large_enum_variant)]
pub enum Command {
    /// Test two node-aligned edge lists.
    Test(TestArgs),
    /// Run a Monte Carlo rejection-rate experiment from a config file.
    Simulate(RunArgs),
    /// Sample a statistic's distribution from a config file.
    Nulldist(RunArgs),
}

#[derive(Debug, Args)]
pub struct TestArgs {
    #[arg(long, default_value = "equality", value_parser = ["equality", "scaling"])]
    pub kind: String,
    #[arg(long, default_value = "chung-lu", value_parser = ["chung-lu", "sbm", "dcbm", "rdpg", "pabm", "latent"])]
    pub model: String,
    #[arg(long, default_value = "boot", value_parser = ["boot", "ase", "eig"])]
    pub method: String,
    /// Number of communities (sbm, dcbm, pabm).
    #[arg(long)]
    pub k: Option<usize>,
    /// Embedding or latent dimension (rdpg, latent, ase).
    #[arg(long)]
    pub d: Option<usize>,
    /// Blocks of the spectral-norm test's blockmodel approximation.
    #[arg(long)]
    pub blocks: Option<usize>,
    /// Bootstrap replicates.
    #[arg(long, default_value_t = 200)]
    pub b: usize,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Master seed; drawn at random and printed when omitted.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub threads: Option<usize>,
    /// Write the key=value result record here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// One node id per line, fixing the node order of both inputs.
    #[arg(long)]
    pub node_map: Option<PathBuf>,
    /// Include bootstrap replicates in the record.
    #[arg(long)]
    pub verbose: bool,
    /// Tracy-Widom threshold lookup for the spectral-norm test.
    #[arg(long, default_value = "half-alpha", value_parser = ["half-alpha", "column-as-tail"])]
    pub threshold_reading: String,
    pub graph1: PathBuf,
    pub graph2: PathBuf,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    pub config: PathBuf,
    /// Output directory for CSV files.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Override the config's seed.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub verbose: bool,
}

fn exit_code(e: &Error) -> i32 {
    if e.is_degenerate_data() {
        EXIT_DEGENERATE
    } else {
        EXIT_USAGE
    }
}

/// Parse `args` (including the program name), run, and return the exit code.
/// Normal output goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let threads = match &cli.command {
        Command::Test(a) => a.threads,
        Command::Simulate(a) | Command::Nulldist(a) => a.threads,
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        if t == 0 {
            let _ = writeln!(err, "error: --threads must be at least 1");
            return EXIT_USAGE;
        }
        builder = builder.num_threads(t);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start worker pool: {e}");
            return EXIT_USAGE;
        }
    };
    // Terminal handles are not Send, so the command writes into a buffer.
    let mut buf: Vec<u8> = Vec::new();
    let result = pool.install(|| {
        let n = pool.current_num_threads();
        match cli.command {
            Command::Test(a) => cmd_test(&a, n, &mut buf),
            Command::Simulate(a) => cmd_simulate(&a, n, &mut buf),
            Command::Nulldist(a) => cmd_nulldist(&a, n, &mut buf),
        }
    });
    let _ = out.write_all(&buf);
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn banner(out: &mut dyn Write, seed: u64, threads: usize) -> Result<()> {
    let stamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs());
    writeln!(
        out,
        "pairnet {} seed={seed} threads={threads}",
        env!("CARGO_PKG_VERSION")
    )
    .and_then(|_| writeln!(out, "# started_unix={stamp}"))
    .map_err(|e| Error::io("<stdout>", e))
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| Error::io("<stdout>", e))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Put `g2` into `g1`'s node order, failing if the label sets differ.
pub fn align_graphs(g1: Graph, g2: Graph) -> Result<(Graph, Graph)> {
    let (Some(l1), Some(l2)) = (g1.labels().cloned(), g2.labels().cloned()) else {
        if g1.n() != g2.n() {
            return Err(Error::DimensionMismatch {
                left: g1.n(),
                right: g2.n(),
            });
        }
        return Ok((g1, g2));
    };
    let mut only: Vec<String> = l1
        .names()
        .iter()
        .filter(|n| l2.get(n).is_none())
        .chain(l2.names().iter().filter(|n| l1.get(n).is_none()))
        .cloned()
        .collect();
    if !only.is_empty() {
        only.sort();
        return Err(Error::Misaligned(only));
    }
    let perm: Vec<usize> = l2
        .names()
        .iter()
        .map(|n| l1.get(n).expect("same label sets"))
        .collect();
    let g2 = g2.permuted(&perm).with_labels(l1);
    Ok((g1, g2))
}

fn load_pair(a: &TestArgs) -> Result<(Graph, Graph)> {
    let map: Option<NodeMap> = a.node_map.as_ref().map(read_node_map).transpose()?;
    let mut graphs = Vec::with_capacity(2);
    for path in [&a.graph1, &a.graph2] {
        let read = read_edge_list(path, map.as_ref())?;
        if read.self_loops + read.duplicate_edges > 0 {
            log::info!(
                "{}: ignored {} self-loops and {} duplicate edges",
                path.display(),
                read.self_loops,
                read.duplicate_edges
            );
        }
        graphs.push(read.graph);
    }
    let g2 = graphs.pop().expect("two graphs");
    let g1 = graphs.pop().expect("two graphs");
    align_graphs(g1, g2)
}

fn run_selected_test(a: &TestArgs, g1: &Graph, g2: &Graph, seed: u64) -> Result<TestResult> {
    let kind: TestKind = a.kind.parse()?;
    match a.method.parse::<Method>()? {
        Method::Boot => {
            let est = Estimator::from_family(a.model.parse::<Family>()?, a.k, a.d)?;
            run_test(kind, &est, g1, g2, a.b, a.alpha, seed)
        }
        Method::Ase => {
            let d =
                a.d.ok_or_else(|| Error::InvalidParameter("--method ase requires --d".into()))?;
            run_ase_test(kind, g1, g2, AseConfig { d, b: a.b }, a.alpha, seed)
        }
        Method::Eig => {
            if kind != TestKind::Equality {
                return Err(Error::InvalidParameter(
                    "--method eig only tests equality".into(),
                ));
            }
            let blocks = a
                .blocks
                .ok_or_else(|| Error::InvalidParameter("--method eig requires --blocks".into()))?;
            let cfg = EigConfig {
                blocks,
                reading: a.threshold_reading.parse::<ThresholdReading>()?,
                seed,
                communities: None,
            };
            run_eig_test(g1, g2, &cfg, a.alpha)
        }
    }
}

fn cmd_test(a: &TestArgs, threads: usize, out: &mut dyn Write) -> Result<i32> {
    let seed = a.seed.unwrap_or_else(rand::random);
    banner(out, seed, threads)?;
    let (g1, g2) = load_pair(a)?;
    let r = run_selected_test(a, &g1, &g2, seed)?;
    let mut summary = format!(
        "{} test ({}, {}), n = {}\nstatistic = {:.6}\np-value = {:.3}\ndecision at alpha = {}: {}\n",
        r.kind,
        r.method,
        r.estimator,
        g1.n(),
        r.statistic,
        r.p_value,
        r.alpha,
        r.decision()
    );
    if let Some(reading) = r.detail("threshold_reading") {
        summary.push_str(&format!(
            "Tracy-Widom threshold = {} ({reading} reading)\n",
            r.detail("threshold").unwrap_or("?")
        ));
    }
    emit(out, &summary)?;
    let record = r.to_record(a.verbose);
    match &a.out {
        Some(path) => write_file(path, &record)?,
        None => emit(out, &record)?,
    }
    Ok(EXIT_OK)
}

fn load_config(a: &RunArgs) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::from_path(&a.config)?;
    if let Some(seed) = a.seed {
        cfg.run.seed = seed;
    }
    Ok(cfg)
}

fn prepare_out_dir(dir: &Option<PathBuf>) -> Result<()> {
    if let Some(d) = dir {
        fs::create_dir_all(d).map_err(|e| Error::io(d, e))?;
    }
    Ok(())
}

fn cmd_simulate(a: &RunArgs, threads: usize, out: &mut dyn Write) -> Result<i32> {
    let cfg = load_config(a)?;
    let spec = cfg.to_spec()?;
    banner(out, spec.seed, threads)?;
    let resolved = cfg.to_toml();
    emit(out, &format!("# resolved config\n{resolved}\n"))?;
    prepare_out_dir(&a.out)?;
    let report = run_experiment(&spec)?;
    let table = format!("{}\n{}\n", ExperimentReport::CSV_HEADER, report.csv_row());
    emit(out, &table)?;
    if a.verbose {
        emit(out, &report.runs_csv())?;
    }
    log::info!(
        "experiment finished in {:.1}s",
        report.wall_time.as_secs_f64()
    );
    if let Some(dir) = &a.out {
        write_file(&dir.join("report.csv"), &table)?;
        write_file(&dir.join("runs.csv"), &report.runs_csv())?;
        write_file(&dir.join("config.toml"), &resolved)?;
    }
    if !report.is_valid() {
        return Err(Error::Degenerate(format!(
            "{} of {} runs aborted; report is invalid",
            report.aborted(),
            report.runs.len()
        )));
    }
    Ok(EXIT_OK)
}

fn cmd_nulldist(a: &RunArgs, threads: usize, out: &mut dyn Write) -> Result<i32> {
    let cfg = load_config(a)?;
    let scenario = cfg.scenario()?;
    let test = cfg.test_spec()?;
    banner(out, cfg.run.seed, threads)?;
    let resolved = cfg.to_toml();
    emit(out, &format!("# resolved config\n{resolved}\n"))?;
    prepare_out_dir(&a.out)?;
    let samples = sample_statistic_distribution(&scenario, &test, cfg.run.mc_runs, cfg.run.seed)?;
    if !samples.aborted.is_empty() {
        return Err(Error::Degenerate(format!(
            "{} of {} runs aborted, first: run {} ({})",
            samples.aborted.len(),
            cfg.run.mc_runs,
            samples.aborted[0].0,
            samples.aborted[0].1
        )));
    }
    let quantiles = quantile_csv(&quantile_report(&samples.values, &cfg.quantiles())?);
    emit(
        out,
        &format!("samples={}\n{quantiles}", samples.values.len()),
    )?;
    if let Some(dir) = &a.out {
        let raw: String = std::iter::once("statistic".to_string())
            .chain(samples.values.iter().map(f64::to_string))
            .map(|l| l + "\n")
            .collect();
        write_file(&dir.join("samples.csv"), &raw)?;
        write_file(&dir.join("quantiles.csv"), &quantiles)?;
        write_file(&dir.join("histogram.csv"), &histogram_csv(&samples.values)?)?;
        write_file(&dir.join("config.toml"), &resolved)?;
    }
    Ok(EXIT_OK)
}
