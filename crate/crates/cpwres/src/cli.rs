//! Command-line interface: `fit`, `power-sweep`, `temp-sweep`, `design`,
//! `synth`.
//!
//! Exit codes are stable: 0 success, 1 usage/config error, 2 data/parse
//! error, 3 fit non-convergence.

use crate::error::{Error, Result};
use crate::manifest::{load_design_config, load_manifest, load_synth_config};
use crate::report::{
    design_report_from_config, fit_trace_report, run_power_sweep, run_temperature_sweep,
    write_report_files, AnalysisReport,
};
use crate::synth::synth_dataset;
use clap::{Parser, Subcommand, ValueEnum};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(
    name = "cpwres",
    version,
    about = "Superconducting CPW resonator design and S21 characterization workbench"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit the notch model to a single trace (.s2p or .csv).
    Fit {
        trace: PathBuf,
        /// Write report files into this directory instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Fit every trace of a power-sweep manifest and extract TLS
    /// parameters from Q_i versus photon number.
    PowerSweep {
        manifest: PathBuf,
        #[arg(long, default_value = "cpwres_out")]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
        /// Worker threads for the per-trace fits (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
        /// Extra line loss added to the attenuation budget (dB).
        #[arg(long)]
        extra_line_loss_db: Option<f64>,
    },
    /// Fit every trace of a temperature-sweep manifest and decompose
    /// Q_i(T) into TLS and quasiparticle losses.
    TempSweep {
        manifest: PathBuf,
        #[arg(long, default_value = "cpwres_out")]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        extra_line_loss_db: Option<f64>,
    },
    /// Compute CPW line parameters, resonance frequencies, kinetic
    /// inductance and penetration depth from a design config.
    Design {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Generate a deterministic synthetic dataset (traces + manifest +
    /// ground truth).
    Synth {
        config: PathBuf,
        #[arg(long, default_value = "synth_out")]
        out: PathBuf,
        /// Override the seed in the config.
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// Entry point used by the binary.
pub fn run() -> ExitCode {
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .try_init();
    run_from(std::env::args_os())
}

/// Testable entry point.
pub fn run_from<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // help/version are successful exits
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Fit { trace, out, format } => {
            let (report, fit) = fit_trace_report(&trace)?;
            emit_analysis(&report, out.as_deref(), format)?;
            if !fit.quality.converged {
                eprintln!("warning: fit did not converge; parameters are best-effort");
                return Ok(ExitCode::from(3));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::PowerSweep {
            manifest,
            out,
            format,
            jobs,
            extra_line_loss_db,
        } => {
            let mut m = load_manifest(&manifest)?;
            if let Some(extra) = extra_line_loss_db {
                m.budget.extra_line_loss_db = extra;
            }
            let report = with_pool(jobs, || run_power_sweep(&m, &manifest))??;
            let files = write_report_files(&report, &out)?;
            announce(&files, &report);
            let converged = report.power_sweep.as_ref().is_some_and(|s| s.converged);
            emit_sweep_summary(&report, format);
            Ok(if converged {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            })
        }
        Command::TempSweep {
            manifest,
            out,
            format,
            jobs,
            extra_line_loss_db,
        } => {
            let mut m = load_manifest(&manifest)?;
            if let Some(extra) = extra_line_loss_db {
                m.budget.extra_line_loss_db = extra;
            }
            let report = with_pool(jobs, || run_temperature_sweep(&m, &manifest))??;
            let files = write_report_files(&report, &out)?;
            announce(&files, &report);
            let converged = report
                .temperature_sweep
                .as_ref()
                .is_some_and(|s| s.converged);
            emit_sweep_summary(&report, format);
            Ok(if converged {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            })
        }
        Command::Design {
            config,
            out,
            format,
        } => {
            let cfg = load_design_config(&config)?;
            let report = design_report_from_config(&cfg, &config)?;
            let body = match format {
                OutputFormat::Json => report.to_json()?,
                OutputFormat::Csv => report.to_csv(),
            };
            match out {
                Some(dir) => {
                    std::fs::create_dir_all(&dir)?;
                    let name = if format == OutputFormat::Json {
                        "design.json"
                    } else {
                        "design.csv"
                    };
                    let path = dir.join(name);
                    std::fs::write(&path, body)?;
                    println!("wrote {}", path.display());
                }
                None => println!("{body}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Synth { config, out, seed } => {
            let mut cfg = load_synth_config(&config)?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            let result = synth_dataset(&cfg, &out)?;
            println!(
                "wrote {} traces, {} and {}",
                result.trace_paths.len(),
                result.manifest_path.display(),
                result.ground_truth_path.display()
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn with_pool<F, R>(jobs: Option<usize>, f: F) -> Result<R>
where
    F: FnOnce() -> R + Send,
    R: Send,
{
    match jobs {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::Config(format!("cannot build worker pool: {e}")))?;
            Ok(pool.install(f))
        }
        None => Ok(f()),
    }
}

fn emit_analysis(report: &AnalysisReport, out: Option<&Path>, format: OutputFormat) -> Result<()> {
    let body = match format {
        OutputFormat::Json => report.to_json()?,
        OutputFormat::Csv => trace_table_csv(report),
    };
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            let name = if format == OutputFormat::Json {
                "fit.json"
            } else {
                "fit.csv"
            };
            let path = dir.join(name);
            std::fs::write(&path, body)?;
            println!("wrote {}", path.display());
        }
        None => println!("{body}"),
    }
    Ok(())
}

fn trace_table_csv(report: &AnalysisReport) -> String {
    let mut out = String::from(
        "source,f_r_hz,q_l,q_c_mag,phi_rad,amplitude,phase_rad,delay_s,q_i,residual_rms,converged\n",
    );
    for t in &report.traces {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            t.source,
            t.f_r_hz,
            t.q_l,
            t.q_c_mag,
            t.phi_rad,
            t.amplitude,
            t.phase_rad,
            t.delay_s,
            t.q_i.map(|q| q.to_string()).unwrap_or_default(),
            t.residual_rms,
            t.converged
        ));
    }
    out
}

fn emit_sweep_summary(report: &AnalysisReport, _format: OutputFormat) {
    if let Some(p) = &report.power_sweep {
        println!(
            "TLS fit: delta0_tls = {:.4e}, n_c = {:.4e}, beta = {:.4}, delta_other = {:.4e} \
             (chi2/dof = {:.3})",
            p.tls.delta0_tls, p.tls.n_c, p.tls.beta, p.tls.delta_other, p.chi2_reduced
        );
    }
    if let Some(t) = &report.temperature_sweep {
        println!(
            "temperature fit: delta0_tls = {:.4e}, delta_other = {:.4e}, kinetic_fraction = \
             {:.4e} (chi2/dof = {:.3})",
            t.tls.delta0_tls, t.tls.delta_other, t.kinetic_fraction, t.chi2_reduced
        );
    }
    if !report.failures.is_empty() {
        eprintln!("{} trace(s) failed:", report.failures.len());
        for f in &report.failures {
            eprintln!("  {}: {}", f.source, f.error);
        }
    }
}

fn announce(files: &[PathBuf], report: &AnalysisReport) {
    for f in files {
        println!("wrote {}", f.display());
    }
    println!(
        "{} trace(s) fitted, {} failed",
        report.traces.len(),
        report.failures.len()
    );
}
