//! Flat `key = value` configuration files.
//!
//! One assignment per line; `#` starts a comment. Keys are the field names of
//! [`morphodyn::ModelConfig`] and [`RunSpec`]. Every key is optional and falls back to the
//! library defaults. Setting either evidence weight also sets the other to
//! its complement.
//!
//! ```text
//! lexemes = 100
//! cells = 8
//! exponents = 6
//! weight_positive = 0.7
//! seed = 1
//! ```

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use morphodyn::RunSpec;

use crate::error::{CliError, Result};

/// Recognized keys, in the order [`render_config`] writes them.
pub const KEYS: &[&str] = &[
    "lexemes",
    "cells",
    "exponents",
    "pivot_count",
    "evidence_limit",
    "weight_positive",
    "weight_negative",
    "zipf_exponent_lexemes",
    "zipf_exponent_cells",
    "focus_sampling",
    "pivot_sampling",
    "evidence_sampling",
    "tie_policy",
    "empty_evidence_policy",
    "seed",
    "max_cycles",
    "checkpoint_interval",
    "shuffle_replicates",
    "shuffle_scope",
    "stop_on_absorption",
];

/// Splits `key = value`, trimming both sides. `None` when there is no `=`.
pub fn split_assignment(text: &str) -> Option<(&str, &str)> {
    let (key, value) = text.split_once('=')?;
    Some((key.trim(), value.trim()))
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> std::result::Result<T, String>
where
    T::Err: std::fmt::Display,
{
    value.parse::<T>().map_err(|e| format!("bad value `{value}` for {key}: {e}"))
}

/// Applies one assignment. `Ok(false)` means the key is not recognized.
pub fn assign(spec: &mut RunSpec, key: &str, value: &str) -> std::result::Result<bool, String> {
    let m = &mut spec.model;
    match key {
        "lexemes" => m.lexemes = parse_value(key, value)?,
        "cells" => m.cells = parse_value(key, value)?,
        "exponents" => m.exponents = parse_value(key, value)?,
        "pivot_count" => m.pivot_count = parse_value(key, value)?,
        "evidence_limit" => {
            m.evidence_limit = match value {
                "none" | "" => None,
                v => Some(parse_value(key, v)?),
            }
        }
        "weight_positive" => {
            m.weight_positive = parse_value(key, value)?;
            m.weight_negative = 1.0 - m.weight_positive;
        }
        "weight_negative" => {
            m.weight_negative = parse_value(key, value)?;
            m.weight_positive = 1.0 - m.weight_negative;
        }
        "zipf_exponent_lexemes" => m.zipf_exponent_lexemes = parse_value(key, value)?,
        "zipf_exponent_cells" => m.zipf_exponent_cells = parse_value(key, value)?,
        "focus_sampling" => m.focus_sampling = parse_value(key, value)?,
        "pivot_sampling" => m.pivot_sampling = parse_value(key, value)?,
        "evidence_sampling" => m.evidence_sampling = parse_value(key, value)?,
        "tie_policy" => m.tie_policy = parse_value(key, value)?,
        "empty_evidence_policy" => m.empty_evidence_policy = parse_value(key, value)?,
        "seed" => m.seed = parse_value(key, value)?,
        "max_cycles" => spec.max_cycles = parse_value(key, value)?,
        "checkpoint_interval" => spec.checkpoint_interval = parse_value(key, value)?,
        "shuffle_replicates" => spec.shuffle_replicates = parse_value(key, value)?,
        "shuffle_scope" => spec.shuffle_scope = parse_value(key, value)?,
        "stop_on_absorption" => spec.stop_on_absorption = parse_value(key, value)?,
        _ => return Ok(false),
    }
    Ok(true)
}

/// Parses configuration text; `source` names it in error messages.
pub fn parse_config_str(text: &str, source: &str, overrides: &[String]) -> Result<RunSpec> {
    let mut spec = RunSpec::default();
    let mut seen: Vec<(&str, usize)> = Vec::new();
    let mut weights_in_file: Vec<(&str, f64)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let parse_err = |message: String| CliError::Parse { path: source.to_string(), line, message };
        let (key, value) =
            split_assignment(content).ok_or_else(|| parse_err(format!("expected `key = value`, got `{content}`")))?;
        if let Some((_, first)) = seen.iter().find(|(k, _)| *k == key) {
            return Err(parse_err(format!("`{key}` already set on line {first}")));
        }
        seen.push((key, line));
        if !assign(&mut spec, key, value).map_err(parse_err)? {
            return Err(CliError::UnknownKey { key: key.to_string(), line: Some(line) });
        }
        if key.starts_with("weight_") {
            weights_in_file.push((key, value.parse().unwrap_or(f64::NAN)));
        }
    }
    if let [(ka, a), (_, b)] = weights_in_file.as_slice() {
        if (a + b - 1.0).abs() > morphodyn::config::WEIGHT_SUM_TOLERANCE {
            return Err(CliError::Constraint(format!("weight_positive + weight_negative = 1 (got {a} + {b})")));
        }
        // Both given: keep them verbatim rather than re-deriving one.
        let (pos, neg) = if *ka == "weight_positive" { (*a, *b) } else { (*b, *a) };
        spec.model.weight_positive = pos;
        spec.model.weight_negative = neg;
    }
    apply_overrides(&mut spec, overrides)?;
    spec.validate()?;
    Ok(spec)
}

/// Applies `key=value` overrides in order, without validating.
pub fn apply_overrides(spec: &mut RunSpec, overrides: &[String]) -> Result<()> {
    for o in overrides {
        let (key, value) = split_assignment(o)
            .ok_or_else(|| CliError::Parse { path: "--set".into(), line: 0, message: format!("expected key=value, got `{o}`") })?;
        let known = assign(spec, key, value)
            .map_err(|message| CliError::Parse { path: "--set".into(), line: 0, message })?;
        if !known {
            return Err(CliError::UnknownKey { key: key.to_string(), line: None });
        }
    }
    Ok(())
}

pub fn parse_config(path: &Path, overrides: &[String]) -> Result<RunSpec> {
    let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
    parse_config_str(&text, &path.display().to_string(), overrides)
}

/// Every key with its resolved value, one `key=value` per line.
pub fn render_config(spec: &RunSpec) -> String {
    render_config_prefixed(spec, "")
}

pub(crate) fn render_config_prefixed(spec: &RunSpec, prefix: &str) -> String {
    let m = &spec.model;
    let values: [String; 20] = [
        m.lexemes.to_string(),
        m.cells.to_string(),
        m.exponents.to_string(),
        m.pivot_count.to_string(),
        m.evidence_limit.map_or_else(|| "none".to_string(), |v| v.to_string()),
        m.weight_positive.to_string(),
        m.weight_negative.to_string(),
        m.zipf_exponent_lexemes.to_string(),
        m.zipf_exponent_cells.to_string(),
        m.focus_sampling.to_string(),
        m.pivot_sampling.to_string(),
        m.evidence_sampling.to_string(),
        m.tie_policy.to_string(),
        m.empty_evidence_policy.to_string(),
        m.seed.to_string(),
        spec.max_cycles.to_string(),
        spec.checkpoint_interval.to_string(),
        spec.shuffle_replicates.to_string(),
        spec.shuffle_scope.to_string(),
        spec.stop_on_absorption.to_string(),
    ];
    let mut out = String::new();
    for (key, value) in KEYS.iter().zip(values) {
        let _ = writeln!(out, "{prefix}{key}={value}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use morphodyn::{EvidenceSampling, ShuffleScope};

    fn parse(text: &str, overrides: &[&str]) -> Result<RunSpec> {
        let overrides: Vec<String> = overrides.iter().map(|s| s.to_string()).collect();
        parse_config_str(text, "test.cfg", &overrides)
    }

    #[test]
    fn minimal_config_uses_defaults() {
        let spec = parse("lexemes=100\ncells=8\nexponents=6\nseed=1\n", &[]).unwrap();
        let mut expected = RunSpec::default();
        expected.model.seed = 1;
        assert_eq!(spec, expected);
    }

    #[test]
    fn weight_override_complements() {
        let spec = parse("weight_positive = 1.0\nweight_negative = 0.0", &["weight_positive=0.7"]).unwrap();
        assert_eq!(spec.model.weight_positive, 0.7);
        assert!((spec.model.weight_negative - 0.3).abs() < 1e-15);
    }

    #[test]
    fn pivot_count_constraint() {
        let err = parse("cells=8\npivot_count=8", &[]).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("pivot_count ≤ cells−1"), "{err}");
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse("# header\nlexemes=10\ncells 4\n", &[]).unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 3, .. }), "{err}");
        let err = parse("lexemes=10\n\nbogus=1\n", &[]).unwrap_err();
        assert!(matches!(err, CliError::UnknownKey { line: Some(3), .. }), "{err}");
        let err = parse("lexemes=ten\n", &[]).unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 1, .. }), "{err}");
        let err = parse("seed=1\nseed=2\n", &[]).unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn unknown_override_rejected() {
        assert!(matches!(parse("", &["nope=3"]), Err(CliError::UnknownKey { line: None, .. })));
    }

    #[test]
    fn inconsistent_weights_in_file_rejected() {
        assert!(matches!(parse("weight_positive=0.6\nweight_negative=0.3", &[]), Err(CliError::Constraint(_))));
    }

    #[test]
    fn comments_and_enums() {
        let spec = parse(
            "evidence_sampling = uniform_subsample # windowed\nevidence_limit = 12\nshuffle_scope = single_cell\n",
            &[],
        )
        .unwrap();
        assert_eq!(spec.model.evidence_sampling, EvidenceSampling::UniformSubsample);
        assert_eq!(spec.model.evidence_limit, Some(12));
        assert_eq!(spec.shuffle_scope, ShuffleScope::SingleCell);
        assert!(parse("tie_policy = sometimes", &[]).is_err());
    }

    #[test]
    fn rendered_config_lists_every_key_once() {
        let text = render_config(&RunSpec::default());
        let keys: Vec<&str> = text.lines().map(|l| split_assignment(l).unwrap().0).collect();
        assert_eq!(keys, KEYS);
    }
}
