//! Command-line front end: score single texts or directories against the
//! ranked word-frequency law, run simulations, and dump spectra.

use clap::{Parser, Subcommand, ValueEnum};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use zmgof::pipeline::{complete, ingest, RunConfig, SpectrumCache};
use zmgof::simulate::{ks_distance_uniform, null_pvalue_experiment, SimConfig, RNG_ALGORITHM};
use zmgof::smirnov::{cdf_w2, TestReport};
use zmgof::spectral::{KernelConfig, SpectralDecomposition};
use zmgof::tokenize::{Mode, Tokenizer};
use zmgof::zm::ZMParams;

#[derive(Parser)]
#[command(
    name = "zmgof",
    version,
    about = "Goodness-of-fit testing of texts against the Zipf-Mandelbrot word-frequency law"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// token unit: alphabetic words or Han ideographs
    #[arg(long, global = true, value_enum, default_value_t = TokenMode::Words)]
    mode: TokenMode,

    /// join letter-flanked hyphens instead of splitting on them
    #[arg(long, global = true)]
    keep_hyphens: bool,

    /// lower clamp for the tail-ratio estimate
    #[arg(long, global = true, default_value_t = 0.05)]
    theta_floor: f64,

    /// upper clamp for the tail-ratio estimate
    #[arg(long, global = true, default_value_t = 0.95)]
    theta_cap: f64,

    /// ranks kept exactly in expected-count sums
    #[arg(long, global = true, default_value_t = 1000)]
    m_trunc: usize,

    /// sine-basis size for the spectral step
    #[arg(long, global = true, default_value_t = 100)]
    basis_size: usize,

    /// report layout
    #[arg(long, global = true, value_enum, default_value_t = Format::Tsv)]
    format: Format,
}

#[derive(Copy, Clone, ValueEnum)]
enum TokenMode {
    Words,
    Han,
}

#[derive(Copy, Clone, PartialEq, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Score one text file
    Analyze {
        file: PathBuf,
        /// also write the bridge path as CSV to this file
        #[arg(long)]
        emit_path: Option<PathBuf>,
    },
    /// Score every file in a directory, one row per file
    Batch { dir: PathBuf },
    /// Sample synthetic texts from the law and score them
    Simulate {
        #[arg(long)]
        theta: f64,
        #[arg(long, default_value_t = 0.0)]
        q: f64,
        #[arg(long, default_value_t = 2000)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Dump the spectrum for a parameter value as CSV
    Kernel {
        #[arg(long)]
        theta: f64,
    },
    /// Evaluate the limiting CDF at a point
    Cdf {
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        x: f64,
    },
}

const TSV_HEADER: &str = "source\tn\tR_n\ttheta_hat\tq_hat\tomega2\tp_value\tnote";

fn report_note(report: &TestReport) -> String {
    let mut flags = Vec::new();
    if report.diagnostics.clamped {
        flags.push("clamped");
    }
    if report.diagnostics.cdf_warning {
        flags.push("cdf-warning");
    }
    flags.join(",")
}

fn tsv_row(report: &TestReport) -> String {
    format!(
        "{}\t{}\t{}\t{:.4}\t{:.3}\t{:.5}\t{:.4}\t{}",
        report.source_id,
        report.n,
        report.r_n,
        report.theta_hat,
        report.q_hat,
        report.omega2,
        report.p_value,
        report_note(report)
    )
}

/// row for a text whose fit stage failed: estimates kept, scores blank
fn tsv_partial_row(
    source: &str,
    n: u64,
    r_n: u64,
    theta_hat: f64,
    clamped: bool,
    reason: &str,
) -> String {
    let note = if clamped {
        format!("clamped; {reason}")
    } else {
        reason.to_string()
    };
    format!("{source}\t{n}\t{r_n}\t{theta_hat:.4}\t\t\t\t{note}")
}

fn json_report(report: &TestReport) -> serde_json::Value {
    serde_json::to_value(report).expect("report serializes")
}

fn json_partial(
    source: &str,
    n: u64,
    r_n: u64,
    theta_hat: f64,
    clamped: bool,
    reason: &str,
) -> serde_json::Value {
    serde_json::json!({
        "source_id": source,
        "n": n,
        "r_n": r_n,
        "theta_hat": theta_hat,
        "q_hat": null,
        "omega2": null,
        "p_value": null,
        "diagnostics": { "clamped": clamped },
        "error": reason,
    })
}

fn json_error(source: &str, reason: &str) -> serde_json::Value {
    serde_json::json!({ "source_id": source, "error": reason })
}

fn run_config(cli: &Cli) -> RunConfig {
    RunConfig {
        tokenizer: Tokenizer {
            mode: match cli.mode {
                TokenMode::Words => Mode::Words,
                TokenMode::Han => Mode::HanChars,
            },
            keep_hyphens: cli.keep_hyphens,
        },
        theta_floor: cli.theta_floor,
        theta_cap: cli.theta_cap,
        m_trunc: cli.m_trunc,
        basis_size: cli.basis_size,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = run_config(&cli);
    match &cli.command {
        Command::Analyze { file, emit_path } => cmd_analyze(&cli, &cfg, file, emit_path.as_deref()),
        Command::Batch { dir } => cmd_batch(&cli, &cfg, dir),
        Command::Simulate {
            theta,
            q,
            n,
            reps,
            seed,
        } => cmd_simulate(&cli, &cfg, *theta, *q, *n, *reps, *seed),
        Command::Kernel { theta } => cmd_kernel(&cli, *theta),
        Command::Cdf { theta, x } => cmd_cdf(&cli, *theta, *x),
    }
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(1)
}

fn cmd_analyze(cli: &Cli, cfg: &RunConfig, file: &Path, emit_path: Option<&Path>) -> ExitCode {
    let raw = match fs::read_to_string(file) {
        Ok(s) => s,
        Err(e) => return fail(format!("{}: {e}", file.display())),
    };
    let source = file
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| file.display().to_string());

    let ing = match ingest(&raw, &source, cfg) {
        Ok(i) => i,
        Err(e) => return fail(format!("{source}: {e}")),
    };
    let cache = SpectrumCache::new();
    match complete(&ing, cfg, &cache) {
        Ok(report) => {
            if let Some(path) = emit_path {
                if let Err(e) = write_bridge_csv(path, &ing, &report, cfg) {
                    return fail(format!("writing {}: {e}", path.display()));
                }
            }
            match cli.format {
                Format::Tsv => {
                    println!("{TSV_HEADER}");
                    println!("{}", tsv_row(&report));
                }
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&json_report(&report)).unwrap()
                ),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            // the text was readable and estimable; report what we have
            let (n, r_n) = (ing.traj.n as u64, ing.traj.r_n());
            match cli.format {
                Format::Tsv => {
                    println!("{TSV_HEADER}");
                    println!(
                        "{}",
                        tsv_partial_row(
                            &source,
                            n,
                            r_n,
                            ing.theta.value,
                            ing.theta.clamped,
                            &e.to_string()
                        )
                    );
                }
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&json_partial(
                        &source,
                        n,
                        r_n,
                        ing.theta.value,
                        ing.theta.clamped,
                        &e.to_string()
                    ))
                    .unwrap()
                ),
            }
            ExitCode::from(2)
        }
    }
}

fn write_bridge_csv(
    path: &Path,
    ing: &zmgof::pipeline::Ingest,
    report: &TestReport,
    cfg: &RunConfig,
) -> std::io::Result<()> {
    use std::io::Write;
    let params =
        ZMParams::new(report.theta_hat, report.q_hat).expect("fitted parameters are valid");
    let ztilde = zmgof::bridge::empirical_text_bridge_trunc(&ing.traj, &params, cfg.m_trunc)
        .expect("bridge existed during analysis");
    let zhat = zmgof::bridge::empirical_bridge(&ing.traj, report.theta_hat)
        .expect("bridge existed during analysis");
    let mut out = fs::File::create(path)?;
    writeln!(out, "t,z_fitted,z_scaled")?;
    let n = ztilde.n;
    for k in 0..=n {
        writeln!(
            out,
            "{},{},{}",
            k as f64 / n as f64,
            ztilde.values[k],
            zhat.values[k]
        )?;
    }
    Ok(())
}

fn cmd_batch(cli: &Cli, cfg: &RunConfig, dir: &Path) -> ExitCode {
    let entries = match fs::read_dir(dir) {
        Ok(it) => it,
        Err(e) => return fail(format!("{}: {e}", dir.display())),
    };
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.is_file())
        .collect();
    files.sort();
    if files.is_empty() {
        return fail(format!("{}: no files to analyze", dir.display()));
    }

    let cache = SpectrumCache::new();
    let mut successes = 0usize;
    let mut tsv_rows = Vec::new();
    let mut json_rows = Vec::new();
    for file in &files {
        let source = file
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| file.display().to_string());
        let raw = match fs::read_to_string(file) {
            Ok(s) => s,
            Err(e) => {
                tsv_rows.push(format!("{source}\t\t\t\t\t\t\t{e}"));
                json_rows.push(json_error(&source, &e.to_string()));
                continue;
            }
        };
        match ingest(&raw, &source, cfg) {
            Ok(ing) => match complete(&ing, cfg, &cache) {
                Ok(report) => {
                    successes += 1;
                    tsv_rows.push(tsv_row(&report));
                    json_rows.push(json_report(&report));
                }
                Err(e) => {
                    tsv_rows.push(tsv_partial_row(
                        &source,
                        ing.traj.n as u64,
                        ing.traj.r_n(),
                        ing.theta.value,
                        ing.theta.clamped,
                        &e.to_string(),
                    ));
                    json_rows.push(json_partial(
                        &source,
                        ing.traj.n as u64,
                        ing.traj.r_n(),
                        ing.theta.value,
                        ing.theta.clamped,
                        &e.to_string(),
                    ));
                }
            },
            Err(e) => {
                tsv_rows.push(format!("{source}\t\t\t\t\t\t\t{e}"));
                json_rows.push(json_error(&source, &e.to_string()));
            }
        }
    }

    match cli.format {
        Format::Tsv => {
            println!("{TSV_HEADER}");
            for row in tsv_rows {
                println!("{row}");
            }
        }
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&serde_json::Value::Array(json_rows)).unwrap()
        ),
    }
    if successes == 0 {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn cmd_simulate(
    cli: &Cli,
    cfg: &RunConfig,
    theta: f64,
    q: f64,
    n: usize,
    reps: usize,
    seed: u64,
) -> ExitCode {
    let params = match ZMParams::new(theta, q) {
        Ok(p) => p,
        Err(e) => return fail(e),
    };
    let sim = match SimConfig::new(params, n, reps, seed) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    let cache = SpectrumCache::new();
    let exp = match null_pvalue_experiment(&sim, cfg, &cache) {
        Ok(x) => x,
        Err(e) => return fail(e),
    };
    let mean = if exp.pvalues.is_empty() {
        f64::NAN
    } else {
        exp.pvalues.iter().sum::<f64>() / exp.pvalues.len() as f64
    };
    let ks = if exp.pvalues.is_empty() {
        f64::NAN
    } else {
        ks_distance_uniform(&exp.pvalues)
    };
    match cli.format {
        Format::Tsv => {
            println!("# rng\t{RNG_ALGORITHM}");
            println!("# theta\t{theta}");
            println!("# q\t{q}");
            println!("# n\t{n}");
            println!("# reps\t{reps}");
            println!("# seed\t{seed}");
            println!("# fit_failures\t{}", exp.fit_failures);
            println!("# mean_p\t{mean:.4}");
            println!("# median_p\t{:.4}", exp.median());
            println!("# ks_uniform\t{ks:.4}");
            println!("rep\tp_value");
            for (i, p) in exp.pvalues.iter().enumerate() {
                println!("{i}\t{p:.6}");
            }
        }
        Format::Json => {
            let doc = serde_json::json!({
                "rng": RNG_ALGORITHM,
                "theta": theta,
                "q": q,
                "n": n,
                "reps": reps,
                "seed": seed,
                "fit_failures": exp.fit_failures,
                "mean_p": mean,
                "median_p": exp.median(),
                "ks_uniform": ks,
                "pvalues": exp.pvalues,
            });
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
        }
    }
    ExitCode::SUCCESS
}

fn cmd_kernel(cli: &Cli, theta: f64) -> ExitCode {
    let config = match KernelConfig::with_basis(theta, cli.basis_size) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    let spec = match SpectralDecomposition::compute(&config) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    println!("nu,lambda");
    for (i, nu) in spec.nu.iter().enumerate() {
        if i < spec.lambda.len() {
            println!("{nu},{}", spec.lambda[i]);
        } else {
            println!("{nu},");
        }
    }
    ExitCode::SUCCESS
}

fn cmd_cdf(cli: &Cli, theta: f64, x: f64) -> ExitCode {
    let config = match KernelConfig::with_basis(theta, cli.basis_size) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    let spec = match SpectralDecomposition::compute(&config) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    match cdf_w2(&spec, x) {
        Ok(v) => {
            println!("{}", v.value);
            if v.pair_warning {
                eprintln!("warning: pair integrals were not monotonically decreasing");
            }
            ExitCode::SUCCESS
        }
        Err(e) => fail(e),
    }
}
