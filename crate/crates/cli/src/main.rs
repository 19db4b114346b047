use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use plancherel::chains::{mixing_report_for, spectral_certificate_with, transition_matrix, THRESHOLD_CS};
use plancherel::characters::CharacterTable;
use plancherel::exact::format_rational;
use plancherel::plancherel::{sample_batch, Method};
use plancherel::stein::{clt_experiment, w_value};
use plancherel::suite::{self, Suite};
use plancherel::tensor::deviation_report;
use plancherel::{Assertion, ChainSpec, Error, ExperimentReport, SeededStream};
use serde_json::json;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "plancherel",
    version,
    about = "Plancherel measure, Young-lattice chains and Stein-method experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw Plancherel-distributed partitions and write them as CSV.
    Sample {
        #[arg(long, value_enum, default_value_t = MethodArg::Rsk)]
        method: MethodArg,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// CSV destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build an exact transition matrix and optionally certify its spectrum
    /// and mixing.
    Chain {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        k: u32,
        /// Write the matrix (index order plus "p/q" entries) here.
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long)]
        spectrum: bool,
        /// Compute exact distances to stationarity for r = 0..=MIX.
        #[arg(long)]
        mix: Option<u32>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Monte Carlo Kolmogorov distance of the character ratio to N(0,1).
    Clt {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 200_000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Exact multiplicities in tensor powers of the k-fold permutation
    /// representation.
    Tensor {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run exact identity suites up to the given size.
    Verify {
        #[arg(value_enum)]
        suite: Option<SuiteArg>,
        /// Largest n checked (alias: --n).
        #[arg(long, alias = "n", default_value_t = 7)]
        nmax: u32,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Growth,
    Rsk,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Updown,
    Downup,
    Kingman,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Partitions,
    Characters,
    Plancherel,
    Chains,
    Stein,
    Tensor,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Partitions => Suite::Partitions,
            SuiteArg::Characters => Suite::Characters,
            SuiteArg::Plancherel => Suite::Plancherel,
            SuiteArg::Chains => Suite::Chains,
            SuiteArg::Stein => Suite::Stein,
            SuiteArg::Tensor => Suite::Tensor,
        }
    }
}

/// Outcome of a command: either it ran (report with pass flags) or the
/// request itself was unusable.
enum Failure {
    Usage(String),
    Other(anyhow::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Argument(_) | Error::Parse(_) | Error::Resource { .. } => Failure::Usage(e.to_string()),
            other => Failure::Other(other.into()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Other(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<bool, Failure> {
    match command {
        Command::Sample { method, n, count, seed, out } => sample(method, n, count, seed, out),
        Command::Chain { kind, n, k, matrix, spectrum, mix, json } => chain(kind, n, k, matrix, spectrum, mix, json),
        Command::Clt { n, count, seed, json } => {
            let rep = clt_experiment(n, count, SeededStream::new(seed))?;
            let mut report = ExperimentReport::new("clt").param("n", n).param("count", count).seed(seed);
            report.assert(Assertion::new(
                "kolmogorov distance within 40.1 n^(-1/4)",
                rep.within_bound,
                format!("{} vs {}", rep.kolmogorov_distance, rep.bound),
            ));
            report.assert(Assertion::new(
                "|W* - W| <= min(2 sqrt2, (2 sqrt2 / n) max(lambda_1, lambda_1'))",
                rep.pathwise_violations == 0,
                format!("{} violations", rep.pathwise_violations),
            ));
            report = report.results(&rep);
            emit(report, json)
        }
        Command::Tensor { n, k, r, json } => {
            let rep = deviation_report(n, k, r, &THRESHOLD_CS)?;
            let mut report = ExperimentReport::new("tensor").param("n", n).param("k", k).param("r", r);
            report.assert(Assertion::new("weighted deviation <= n! beta^(2r)", rep.within_bound, ""));
            report.assert(Assertion::new("multiplicities are non-negative integers", rep.integral, ""));
            report.assert(Assertion::new("dimension conserved", rep.dimension_conserved, ""));
            if let Some(ok) = rep.recursion_agrees {
                report.assert(Assertion::new("lattice recursion agrees", ok, ""));
            }
            report.assert(Assertion::new("threshold guarantees", rep.passed, ""));
            report = report.results(&rep);
            emit(report, json)
        }
        Command::Verify { suite, nmax, json } => {
            let results = suite::run(suite.map(Suite::from), nmax)?;
            let mut report = ExperimentReport::new("verify").param("nmax", nmax);
            if let Some(s) = suite {
                report = report.param("suite", Suite::from(s).name());
            }
            let mut by_suite = serde_json::Map::new();
            for (s, assertions) in results {
                by_suite.insert(
                    s.name().to_string(),
                    json!({
                        "checked": assertions.len(),
                        "passed": assertions.iter().all(|a| a.passed),
                    }),
                );
                report.extend(assertions);
            }
            report = report.results(by_suite);
            emit(report, json)
        }
    }
}

fn sample(method: MethodArg, n: u32, count: usize, seed: u64, out: Option<PathBuf>) -> Result<bool, Failure> {
    let method = match method {
        MethodArg::Growth => Method::Growth,
        MethodArg::Rsk => Method::Rsk,
    };
    let draws = sample_batch(method, n, count, SeededStream::new(seed));
    let sink: Box<dyn Write> = match &out {
        Some(path) => Box::new(std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?),
        None => Box::new(std::io::stdout().lock()),
    };
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["index", "partition", "lambda1", "lambda1_conjugate", "w"]).context("writing CSV")?;
    for (i, lambda) in draws.iter().enumerate() {
        w.write_record([
            i.to_string(),
            lambda.to_string(),
            lambda.first_row().to_string(),
            lambda.first_column().to_string(),
            w_value(lambda).to_string(),
        ])
        .context("writing CSV")?;
    }
    w.flush().context("writing CSV")?;
    Ok(true)
}

fn chain(
    kind: KindArg,
    n: u32,
    k: u32,
    matrix_out: Option<PathBuf>,
    spectrum: bool,
    mix: Option<u32>,
    json_out: Option<PathBuf>,
) -> Result<bool, Failure> {
    let spec = match kind {
        KindArg::Updown => ChainSpec::updown(n, k)?,
        KindArg::Downup => ChainSpec::downup(n, k)?,
        KindArg::Kingman => ChainSpec::kingman(n)?,
    };
    let mut report = ExperimentReport::new("chain").param("spec", spec);
    let matrix = match transition_matrix(spec) {
        Ok(m) => m,
        Err(e @ (Error::InvariantViolation(_) | Error::InternalConsistency(_))) => {
            report.assert(Assertion::new("unit row sums and detailed balance", false, e.to_string()));
            return emit(report, json_out);
        }
        Err(e) => return Err(e.into()),
    };
    report.assert(Assertion::pass("unit row sums and detailed balance"));
    report.assert(Assertion::from_result("stationary law is invariant", matrix.check_stationary()));

    let mut results = serde_json::Map::new();
    results.insert("spec".into(), json!(spec));
    results.insert("states".into(), json!(matrix.states));
    results.insert("stationary".into(), json!(matrix.stationary.iter().map(format_rational).collect::<Vec<_>>()));

    if let Some(path) = matrix_out {
        let body = json!({
            "spec": spec,
            "index": matrix.states,
            "entries": matrix.entry_strings(),
        });
        let text = serde_json::to_string_pretty(&body).context("serializing matrix")?;
        std::fs::write(&path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    if spectrum {
        let table = CharacterTable::new(n)?;
        let cert = spectral_certificate_with(&matrix, &table)?;
        report.assert(Assertion::new(
            "J psi_C = theta(C) psi_C and psi_C orthonormal for every class",
            cert.valid,
            cert.failures.first().cloned().unwrap_or_default(),
        ));
        results.insert("spectrum".into(), json!(cert));
    }
    if let Some(r_max) = mix {
        report = report.param("mix", r_max);
        let rep = mixing_report_for(spec, r_max, &THRESHOLD_CS)?;
        report.assert(Assertion::new("2 TV <= L2 <= sqrt(n!) beta^r and threshold guarantees", rep.passed, ""));
        results.insert("mixing".into(), json!(rep));
    }
    report = report.results(results);
    emit(report, json_out)
}

/// Writes the report and names every failing invariant on stderr.
fn emit(report: ExperimentReport, json: Option<PathBuf>) -> Result<bool, Failure> {
    let text = report.to_json() + "\n";
    match json {
        Some(path) => std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    for a in report.failures() {
        if a.detail.is_empty() {
            eprintln!("FAILED: {}", a.name);
        } else {
            eprintln!("FAILED: {} ({})", a.name, a.detail);
        }
    }
    Ok(report.passed)
}
