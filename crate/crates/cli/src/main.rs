use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use morphodyn::experiment::{ensemble_seeds, run, run_trajectories, summarize};
use morphodyn_cli::csv_io::{read_summary_csv, write_ensemble_csv, write_trajectory_csv};
use morphodyn_cli::manifest::{write_manifest, ManifestSection};
use morphodyn_cli::plot::{render_plot, LabeledSummary, PlotOptions};
use morphodyn_cli::replicate::{replicate_fig2, ReplicateOptions, DEFAULT_RUNS, DEFAULT_SEED};
use morphodyn_cli::{parse_config, CliError, Result};

#[derive(Parser)]
#[command(name = "morphodyn", version, about = "Simulate the evolution of inflectional paradigms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one trajectory and write trajectory.csv and manifest.txt.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Override a configuration key (repeatable).
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run an ensemble and write ensemble.csv and manifest.txt.
    Ensemble {
        #[arg(long)]
        config: PathBuf,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_RUNS)]
        runs: usize,
        /// Base seed for per-run seeds; defaults to the config's `seed`.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Plot trajectory or ensemble CSVs into one SVG, one column per file.
    Plot {
        #[arg(long = "in", value_name = "CSV", required = true, num_args = 1..)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the attraction-only and attraction-repulsion ensembles at
    /// 100 x 8 x 6 and write both CSVs, the comparison SVG and a manifest.
    #[command(name = "replicate-fig2")]
    ReplicateFig2 {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_RUNS)]
        runs: usize,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(CliError::io(dir))
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Run { config, overrides, out } => {
            let spec = parse_config(&config, &overrides)?;
            create_dir(&out)?;
            let trajectory = run(&spec)?;
            write_trajectory_csv(&trajectory, &out.join("trajectory.csv"))?;
            let section = ManifestSection { name: String::new(), run_seeds: vec![spec.model.seed], base_seed: None, spec };
            write_manifest(&[section], &out.join("manifest.txt"))?;
            let last = trajectory.final_record();
            eprintln!(
                "cycle {}: {} classes, {:.4} bits{}",
                last.cycle,
                last.class_count,
                last.mean_cond_entropy,
                trajectory.absorbed_at.map(|c| format!(", absorbed at {c}")).unwrap_or_default()
            );
        }
        Command::Ensemble { config, overrides, runs, seed, threads, out } => {
            let spec = parse_config(&config, &overrides)?;
            let base_seed = seed.unwrap_or(spec.model.seed);
            create_dir(&out)?;
            let trajectories = run_trajectories(&spec, runs, base_seed, threads)?;
            let summary = summarize(&trajectories)?;
            write_ensemble_csv(&summary, &out.join("ensemble.csv"))?;
            let section = ManifestSection {
                name: String::new(),
                spec,
                base_seed: Some(base_seed),
                run_seeds: ensemble_seeds(base_seed, runs),
            };
            write_manifest(&[section], &out.join("manifest.txt"))?;
            eprintln!(
                "{runs} runs: final mean classes {:.3}{}",
                summary.final_class_count_mean,
                if summary.converged { "" } else { " (not converged)" }
            );
        }
        Command::Plot { inputs, out } => {
            let summaries = inputs
                .iter()
                .map(|path| {
                    let label = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                    Ok(LabeledSummary { label, summary: read_summary_csv(path)? })
                })
                .collect::<Result<Vec<_>>>()?;
            render_plot(&summaries, &PlotOptions::default(), &out)?;
        }
        Command::ReplicateFig2 { seed, runs, threads, out } => {
            replicate_fig2(&out, &ReplicateOptions { base_seed: seed, runs, threads })?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
