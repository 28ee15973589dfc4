use anyhow::Result;
use clap::{Parser, Subcommand, ValueEnum};
use spikefp_cli::bench::run_linear_bench;
use spikefp_cli::export::unit_circuit;
use spikefp_cli::io::{atomic_write, csv_string, write_json, OutFormat};
use spikefp_cli::mlp::{run_mlp_demo, MlpOptions};
use spikefp_cli::verify::{run_verify_add, run_verify_mul, SweepReport, VerifyConfig};
use spikefp_cli::run_scan_config;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Toggle {
    On,
    Off,
}

#[derive(Parser, Debug)]
#[command(
    name = "spikefp",
    about = "Spiking FP8 datapath verification, robustness scans, benchmarks, and demos",
    version
)]
struct Cli {
    /// Campaign seed for all randomized work.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Membrane leak retention factor.
    #[arg(long, global = true, default_value_t = 1.0)]
    beta: f64,
    /// Gaussian input-current noise, standard deviation.
    #[arg(long, global = true, default_value_t = 0.0)]
    sigma: f64,
    /// Overflow policy: on = clamp to ±448, off = emit nan.
    #[arg(long, global = true, value_enum, default_value_t = Toggle::On)]
    saturate: Toggle,
    /// Substitute the numeric oracle for spiking circuits where allowed.
    #[arg(long, global = true)]
    fast_check: bool,
    /// Output directory for report files.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Report file format.
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Json)]
    format: OutFormat,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exhaustive multiplier sweep vs the software oracle.
    VerifyMul {
        /// Debug aid: drop the subnormal sticky correction to expose
        /// misrounding (campaign is expected to fail).
        #[arg(long)]
        disable_sticky_extra: bool,
    },
    /// Adder corner suite + seeded random trials + exhaustive sweep.
    VerifyAdd {
        /// Number of seeded random pair trials.
        #[arg(long, default_value_t = 100)]
        random_trials: usize,
    },
    /// Run a leak or noise scan from a JSON config file.
    Scan {
        #[arg(long)]
        config: PathBuf,
    },
    /// Tree vs sequential reduction latency for the given input widths.
    LinearBench {
        /// Comma-separated input widths.
        #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,16,32,64,256")]
        d_in: Vec<usize>,
    },
    /// Forward-only MLP demo with order-matched reference comparison.
    MlpDemo {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// IDX-format image file (falls back to synthetic data on error).
        #[arg(long)]
        images: Option<PathBuf>,
        /// Directory with mlp_w1.fp8t / mlp_w2.fp8t.
        #[arg(long)]
        weights_dir: Option<PathBuf>,
    },
    /// Export a unit netlist as JSON plus graph text.
    ExportNetlist {
        /// Unit name (and, or, not, xor, mux, half-adder, full-adder,
        /// mul, add, barrel-shifter, lzd).
        #[arg(long)]
        unit: String,
    },
}

fn emit_sweep(report: &SweepReport, out: &Path, format: OutFormat) -> Result<bool> {
    match format {
        OutFormat::Json => write_json(&out.join(format!("{}.json", report.campaign)), report)?,
        OutFormat::Csv => {
            atomic_write(&out.join(format!("{}.csv", report.campaign)), &report.to_csv()?)?
        }
    }
    println!(
        "{}: {}/{} pass ({:.6}), mean sparsity {:.3}, {} ms",
        report.campaign,
        report.passes,
        report.total,
        report.pass_rate,
        report.mean_sparsity,
        report.wall_ms
    );
    for f in report.failures.iter().take(5) {
        eprintln!(
            "  counterexample [{}]: {} x {} -> got {}, expected {}",
            f.class, f.a, f.b, f.got, f.expected
        );
    }
    Ok(report.all_pass())
}

fn run(cli: Cli) -> Result<bool> {
    let verify_cfg = |sticky_extra: bool, random_trials: usize| VerifyConfig {
        seed: cli.seed,
        beta: cli.beta,
        sigma: cli.sigma,
        saturate: cli.saturate == Toggle::On,
        sticky_extra,
        random_trials,
    };
    match &cli.command {
        Command::VerifyMul { disable_sticky_extra } => {
            let report = run_verify_mul(&verify_cfg(!disable_sticky_extra, 0));
            emit_sweep(&report, &cli.out, cli.format)
        }
        Command::VerifyAdd { random_trials } => {
            let report = run_verify_add(&verify_cfg(true, *random_trials));
            emit_sweep(&report, &cli.out, cli.format)
        }
        Command::Scan { config } => {
            let result = run_scan_config(config)?;
            let stem = match result.kind {
                spikefp::robustness::ScanKind::Beta => "scan-beta",
                spikefp::robustness::ScanKind::Sigma => "scan-sigma",
            };
            match cli.format {
                OutFormat::Json => write_json(&cli.out.join(format!("{stem}.json")), &result)?,
                OutFormat::Csv => {
                    atomic_write(&cli.out.join(format!("{stem}.csv")), &result.to_csv())?
                }
            }
            for p in &result.points {
                println!(
                    "{} {}={}: accuracy {:.6} ({}/{})",
                    p.target.label(),
                    stem,
                    p.param,
                    p.accuracy,
                    p.passes,
                    p.trials
                );
            }
            Ok(true)
        }
        Command::LinearBench { d_in } => {
            let report = run_linear_bench(d_in);
            match cli.format {
                OutFormat::Json => write_json(&cli.out.join("linear-bench.json"), &report)?,
                OutFormat::Csv => atomic_write(
                    &cli.out.join("linear-bench.csv"),
                    &csv_string(report.rows.iter().cloned())?,
                )?,
            }
            for r in &report.rows {
                println!(
                    "d_in={}: tree levels {}, units {} vs {}, circuit speedup {:.1}x",
                    r.d_in,
                    r.tree_add_levels,
                    r.tree_unit_total,
                    r.sequential_unit_total,
                    r.circuit_ratio
                );
            }
            Ok(true)
        }
        Command::MlpDemo { samples, images, weights_dir } => {
            let report = run_mlp_demo(&MlpOptions {
                samples: *samples,
                seed: cli.seed,
                fast_check: cli.fast_check,
                images: images.clone(),
                weights_dir: weights_dir.clone(),
            })?;
            write_json(&cli.out.join("mlp-demo.json"), &report)?;
            if let Some(w) = &report.warning {
                eprintln!("warning: {w}");
            }
            println!(
                "mlp-demo [{}, {}]: argmax agreement {:.4}, tree-vs-seq bitwise {:.4} over {} samples",
                report.mode,
                report.data_source,
                report.argmax_agreement,
                report.tree_vs_sequential_bitwise_match,
                report.samples
            );
            Ok(report.argmax_agreement == 1.0)
        }
        Command::ExportNetlist { unit } => {
            let circuit = unit_circuit(unit)?;
            atomic_write(
                &cli.out.join(format!("{unit}.netlist.json")),
                &spikefp::netlist::to_json(&circuit),
            )?;
            atomic_write(
                &cli.out.join(format!("{unit}.dot")),
                &spikefp::netlist::to_graph_text(&circuit),
            )?;
            let stats = circuit.stats();
            println!(
                "{unit}: {} neurons, {} synapses, depth {}",
                stats.neuron_count, stats.synapse_count, stats.logical_depth
            );
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
