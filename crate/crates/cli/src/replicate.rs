//! Two-model comparison at 100 lexemes x 8 cells x 6 exponents: the
//! attraction-only dynamic against attraction-repulsion with 70% positive
//! and 30% negative evidence, 100 runs each.

use std::path::{Path, PathBuf};

use morphodyn::experiment::{ensemble_seeds, run_trajectories, summarize};
use morphodyn::{EnsembleSummary, ModelConfig, RunSpec, Trajectory};

use crate::csv_io::write_ensemble_csv;
use crate::error::{CliError, Result};
use crate::manifest::{write_manifest, ManifestSection};
use crate::plot::{render_plot, LabeledSummary, PlotOptions};

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_RUNS: usize = 100;
pub const SVG_NAME: &str = "fig2.svg";
pub const MANIFEST_NAME: &str = "manifest.txt";

/// Built-in models, in panel order.
pub fn fig2_specs() -> [(&'static str, RunSpec); 2] {
    [
        ("attraction_only", RunSpec::new(ModelConfig::attraction_only(100, 8, 6))),
        ("attraction_repulsion", RunSpec::new(ModelConfig::attraction_repulsion(100, 8, 6, 0.3))),
    ]
}

#[derive(Debug, Clone)]
pub struct ReplicateOptions {
    pub base_seed: u64,
    pub runs: usize,
    /// Worker threads; rayon's default when `None`.
    pub threads: Option<usize>,
}

impl Default for ReplicateOptions {
    fn default() -> Self {
        Self { base_seed: DEFAULT_SEED, runs: DEFAULT_RUNS, threads: None }
    }
}

#[derive(Debug)]
pub struct ModelOutcome {
    pub name: &'static str,
    pub trajectories: Vec<Trajectory>,
    pub summary: EnsembleSummary,
    pub csv: PathBuf,
}

/// Runs both models and writes their CSVs, the SVG and the manifest into
/// `out_dir`.
pub fn replicate_fig2(out_dir: &Path, options: &ReplicateOptions) -> Result<Vec<ModelOutcome>> {
    std::fs::create_dir_all(out_dir).map_err(CliError::io(out_dir))?;
    let mut outcomes = Vec::new();
    let mut sections = Vec::new();
    for (name, spec) in fig2_specs() {
        eprintln!("{name}: {} runs x {} cycles", options.runs, spec.max_cycles);
        let trajectories = run_trajectories(&spec, options.runs, options.base_seed, options.threads)?;
        let summary = summarize(&trajectories)?;
        eprintln!(
            "{name}: final mean classes {:.3}, mean entropy {:.4} bits{}",
            summary.final_class_count_mean,
            summary.mean_cond_entropy.mean.last().copied().unwrap_or(f64::NAN),
            if summary.converged { "" } else { " (not converged)" }
        );
        let csv = out_dir.join(format!("{name}.csv"));
        write_ensemble_csv(&summary, &csv)?;
        sections.push(ManifestSection {
            name: name.to_string(),
            spec: spec.clone(),
            base_seed: Some(options.base_seed),
            run_seeds: ensemble_seeds(options.base_seed, options.runs),
        });
        outcomes.push(ModelOutcome { name, trajectories, summary, csv });
    }
    let labeled: Vec<LabeledSummary> =
        outcomes.iter().map(|o| LabeledSummary { label: o.name.to_string(), summary: o.summary.clone() }).collect();
    render_plot(&labeled, &PlotOptions::default(), &out_dir.join(SVG_NAME))?;
    write_manifest(&sections, &out_dir.join(MANIFEST_NAME))?;
    Ok(outcomes)
}
