//! Reproduction manifests: the resolved configuration of every model in an
//! output directory together with the seed of every run.
//!
//! ```text
//! # morphodyn manifest
//! sections=attraction_only,attraction_repulsion
//! attraction_only.lexemes=100
//! ...
//! attraction_only.runs=100
//! attraction_only.base_seed=1
//! attraction_only.run_seed.0=...
//! ```
//!
//! A single-model manifest has an empty `sections=` line and unprefixed keys.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use morphodyn::RunSpec;

use crate::config::{assign, render_config_prefixed, split_assignment};
use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestSection {
    /// Empty for a single-model manifest.
    pub name: String,
    pub spec: RunSpec,
    pub base_seed: Option<u64>,
    /// `run_seeds[i]` is the model seed of run `i`.
    pub run_seeds: Vec<u64>,
}

impl ManifestSection {
    /// Spec that reproduces run `index`.
    pub fn run_spec(&self, index: usize) -> Option<RunSpec> {
        let seed = *self.run_seeds.get(index)?;
        let mut spec = self.spec.clone();
        spec.model.seed = seed;
        Some(spec)
    }
}

pub fn render_manifest(sections: &[ManifestSection]) -> String {
    let named = sections.len() > 1 || sections.iter().any(|s| !s.name.is_empty());
    let mut out = String::from("# morphodyn manifest\n");
    let names: Vec<&str> = if named { sections.iter().map(|s| s.name.as_str()).collect() } else { Vec::new() };
    let _ = writeln!(out, "sections={}", names.join(","));
    for s in sections {
        let prefix = if named { format!("{}.", s.name) } else { String::new() };
        out.push_str(&render_config_prefixed(&s.spec, &prefix));
        let _ = writeln!(out, "{prefix}runs={}", s.run_seeds.len());
        if let Some(base) = s.base_seed {
            let _ = writeln!(out, "{prefix}base_seed={base}");
        }
        for (i, seed) in s.run_seeds.iter().enumerate() {
            let _ = writeln!(out, "{prefix}run_seed.{i}={seed}");
        }
    }
    out
}

pub fn write_manifest(sections: &[ManifestSection], path: &Path) -> Result<()> {
    std::fs::write(path, render_manifest(sections)).map_err(CliError::io(path))
}

pub fn parse_manifest(text: &str, source: &str) -> Result<Vec<ManifestSection>> {
    let mut names: Option<Vec<String>> = None;
    let mut sections: BTreeMap<String, (RunSpec, Option<u64>, Option<usize>, BTreeMap<usize, u64>)> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let bad = |message: String| CliError::Parse { path: source.to_string(), line, message };
        let (key, value) = split_assignment(content).ok_or_else(|| bad(format!("expected key=value, got `{content}`")))?;
        if key == "sections" {
            let list: Vec<String> = value.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect();
            if list.is_empty() {
                sections.insert(String::new(), Default::default());
            }
            for name in &list {
                sections.insert(name.clone(), Default::default());
            }
            names = Some(if list.is_empty() { vec![String::new()] } else { list });
            continue;
        }
        let names = names.as_ref().ok_or_else(|| bad("`sections=` must come first".into()))?;
        let (name, key) = if names.len() == 1 && names[0].is_empty() {
            (String::new(), key)
        } else {
            let (name, rest) = key.split_once('.').ok_or_else(|| bad(format!("key `{key}` lacks a section prefix")))?;
            (name.to_string(), rest)
        };
        let entry = sections.get_mut(&name).ok_or_else(|| bad(format!("unknown section `{name}`")))?;
        let parse_u64 = |v: &str| v.parse::<u64>().map_err(|e| bad(format!("`{v}`: {e}")));
        if key == "runs" {
            entry.2 = Some(parse_u64(value)? as usize);
        } else if key == "base_seed" {
            entry.1 = Some(parse_u64(value)?);
        } else if let Some(index) = key.strip_prefix("run_seed.") {
            let index = parse_u64(index)? as usize;
            entry.3.insert(index, parse_u64(value)?);
        } else if !assign(&mut entry.0, key, value).map_err(bad)? {
            return Err(CliError::UnknownKey { key: key.to_string(), line: Some(line) });
        }
    }
    let order = names.ok_or_else(|| CliError::Parse { path: source.into(), line: 0, message: "empty manifest".into() })?;
    order
        .into_iter()
        .map(|name| {
            let (spec, base_seed, runs, seeds) = sections.remove(&name).expect("declared section");
            spec.validate()?;
            let run_seeds: Vec<u64> = seeds.into_values().collect();
            if runs != Some(run_seeds.len()) {
                return Err(CliError::Parse {
                    path: source.into(),
                    line: 0,
                    message: format!("section `{name}` declares {runs:?} runs but lists {} seeds", run_seeds.len()),
                });
            }
            Ok(ManifestSection { name, spec, base_seed, run_seeds })
        })
        .collect()
}

pub fn read_manifest(path: &Path) -> Result<Vec<ManifestSection>> {
    let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
    parse_manifest(&text, &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use morphodyn::ModelConfig;

    #[test]
    fn single_and_named_sections_round_trip() {
        let single = vec![ManifestSection {
            name: String::new(),
            spec: RunSpec::new(ModelConfig::attraction_repulsion(30, 5, 4, 0.3).with_seed(9)),
            base_seed: None,
            run_seeds: vec![9],
        }];
        assert_eq!(parse_manifest(&render_manifest(&single), "m").unwrap(), single);

        let named = vec![
            ManifestSection {
                name: "attraction_only".into(),
                spec: RunSpec::new(ModelConfig::attraction_only(100, 8, 6)),
                base_seed: Some(1),
                run_seeds: vec![11, 12, 13],
            },
            ManifestSection {
                name: "attraction_repulsion".into(),
                spec: RunSpec::new(ModelConfig::attraction_repulsion(100, 8, 6, 0.3)),
                base_seed: Some(1),
                run_seeds: vec![11, 12, 13],
            },
        ];
        let text = render_manifest(&named);
        assert!(text.contains("attraction_repulsion.weight_negative=0.3\n"));
        assert_eq!(parse_manifest(&text, "m").unwrap(), named);
    }

    #[test]
    fn seed_count_must_match() {
        let text = "sections=\nruns=2\nrun_seed.0=5\n";
        assert!(parse_manifest(text, "m").is_err());
    }
}
