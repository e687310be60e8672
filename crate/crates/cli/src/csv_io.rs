//! CSV schemas for trajectories and ensemble summaries.
//!
//! Numbers other than the cycle index are written with six significant
//! digits in the style of C's `%g`.

use std::path::Path;

use morphodyn::experiment::MetricBand;
use morphodyn::{EnsembleSummary, Trajectory};

use crate::error::{CliError, Result};

pub const TRAJECTORY_COLUMNS: [&str; 5] =
    ["cycle", "mean_cond_entropy", "class_count", "shuffled_mean_cond_entropy", "shuffled_class_count"];

pub const ENSEMBLE_COLUMNS: [&str; 13] = [
    "cycle",
    "mean_cond_entropy_mean",
    "mean_cond_entropy_p05",
    "mean_cond_entropy_p95",
    "class_count_mean",
    "class_count_p05",
    "class_count_p95",
    "shuffled_mean_cond_entropy_mean",
    "shuffled_mean_cond_entropy_p05",
    "shuffled_mean_cond_entropy_p95",
    "shuffled_class_count_mean",
    "shuffled_class_count_p05",
    "shuffled_class_count_p95",
];

/// `%.6g`: six significant digits, trailing zeros dropped, exponent form
/// outside `[1e-4, 1e6)`.
pub fn format_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..6).contains(&exp) {
        let fixed = format!("{x:.prec$}", prec = (5 - exp) as usize);
        trim_zeros(&fixed).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    csv::Writer::from_path(path).map_err(CliError::csv(path))
}

pub fn write_trajectory_csv(trajectory: &Trajectory, path: &Path) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(TRAJECTORY_COLUMNS).map_err(CliError::csv(path))?;
    for r in &trajectory.records {
        w.write_record([
            r.cycle.to_string(),
            format_sig6(r.mean_cond_entropy),
            format_sig6(r.class_count as f64),
            format_sig6(r.shuffled_mean_cond_entropy),
            format_sig6(r.shuffled_class_count),
        ])
        .map_err(CliError::csv(path))?;
    }
    w.flush().map_err(CliError::io(path))
}

pub fn write_ensemble_csv(summary: &EnsembleSummary, path: &Path) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(ENSEMBLE_COLUMNS).map_err(CliError::csv(path))?;
    let bands = summary.bands();
    for (i, cycle) in summary.checkpoints.iter().enumerate() {
        let mut row = vec![cycle.to_string()];
        for (_, band) in &bands {
            row.extend([band.mean[i], band.p05[i], band.p95[i]].map(format_sig6));
        }
        w.write_record(&row).map_err(CliError::csv(path))?;
    }
    w.flush().map_err(CliError::io(path))
}

/// Reads an ensemble CSV, or a trajectory CSV as a one-run ensemble.
///
/// The run count is not part of either schema; trajectories report 1 and
/// ensembles 0.
pub fn read_summary_csv(path: &Path) -> Result<EnsembleSummary> {
    let mut reader = csv::Reader::from_path(path).map_err(CliError::csv(path))?;
    let header: Vec<String> = reader.headers().map_err(CliError::csv(path))?.iter().map(str::to_string).collect();
    let is_trajectory = header == TRAJECTORY_COLUMNS;
    if !is_trajectory && header != ENSEMBLE_COLUMNS {
        return Err(CliError::Parse {
            path: path.display().to_string(),
            line: 1,
            message: format!("unrecognized CSV header: {}", header.join(",")),
        });
    }
    let mut checkpoints = Vec::new();
    let mut bands: [MetricBand; 4] = Default::default();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(CliError::csv(path))?;
        let line = i + 2;
        let bad = |message: String| CliError::Parse { path: path.display().to_string(), line, message };
        let cycle: u64 = record[0].parse().map_err(|e| bad(format!("cycle: {e}")))?;
        let values: Vec<f64> = record
            .iter()
            .skip(1)
            .map(|v| v.parse::<f64>().map_err(|e| bad(format!("`{v}`: {e}"))))
            .collect::<Result<_>>()?;
        checkpoints.push(cycle);
        for (m, band) in bands.iter_mut().enumerate() {
            let (mean, p05, p95) =
                if is_trajectory { (values[m], values[m], values[m]) } else { (values[3 * m], values[3 * m + 1], values[3 * m + 2]) };
            band.mean.push(mean);
            band.p05.push(p05);
            band.p95.push(p95);
        }
    }
    Ok(EnsembleSummary::from_bands(usize::from(is_trajectory), checkpoints, bands))
}
