//! Parameters of one member of the model family.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::lexicon::MAX_EXPONENTS;

/// Tolerance on `weight_positive + weight_negative == 1`.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-12;

macro_rules! keyword_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $kw:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
        pub enum $name { $($variant),+ }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn keyword(self) -> &'static str {
                match self { $($name::$variant => $kw),+ }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.keyword())
            }
        }

        impl FromStr for $name {
            type Err = String;

            fn from_str(s: &str) -> std::result::Result<Self, String> {
                match s {
                    $($kw => Ok($name::$variant),)+
                    _ => Err(format!(
                        "expected one of {}, got `{s}`",
                        [$($kw),+].join(", ")
                    )),
                }
            }
        }
    };
}

keyword_enum!(
    /// How the focal lexeme is drawn.
    FocusSampling { Uniform => "uniform", InverseFrequency => "inverse_frequency" }
);
keyword_enum!(
    /// How pivot cells are drawn among the non-focal cells.
    PivotSampling { Uniform => "uniform", Frequency => "frequency" }
);
keyword_enum!(
    /// Which non-focal lexemes contribute evidence for each pivot.
    EvidenceSampling {
        All => "all",
        UniformSubsample => "uniform_subsample",
        FrequencySubsample => "frequency_subsample",
    }
);
keyword_enum!(
    /// Resolution of a tie between top-scoring exponents.
    TiePolicy { RandomUniform => "random_uniform", KeepCurrent => "keep_current" }
);
keyword_enum!(
    /// What to do when no lexeme contributed any evidence.
    EmptyEvidencePolicy { KeepCurrent => "keep_current", RandomExponent => "random_exponent" }
);

#[derive(Debug, Clone, PartialEq)]
pub struct ModelConfig {
    pub lexemes: usize,
    pub cells: usize,
    pub exponents: usize,
    pub pivot_count: usize,
    /// Lexemes sampled per pivot when subsampling evidence.
    pub evidence_limit: Option<usize>,
    pub weight_positive: f64,
    pub weight_negative: f64,
    pub zipf_exponent_lexemes: f64,
    pub zipf_exponent_cells: f64,
    pub focus_sampling: FocusSampling,
    pub pivot_sampling: PivotSampling,
    pub evidence_sampling: EvidenceSampling,
    pub tie_policy: TiePolicy,
    pub empty_evidence_policy: EmptyEvidencePolicy,
    pub seed: u64,
}

impl Default for ModelConfig {
    /// Attraction-only dynamic at 100 lexemes x 8 cells x 6 exponents.
    fn default() -> Self {
        Self {
            lexemes: 100,
            cells: 8,
            exponents: 6,
            pivot_count: 1,
            evidence_limit: None,
            weight_positive: 1.0,
            weight_negative: 0.0,
            zipf_exponent_lexemes: 1.0,
            zipf_exponent_cells: 1.0,
            focus_sampling: FocusSampling::Uniform,
            pivot_sampling: PivotSampling::Uniform,
            evidence_sampling: EvidenceSampling::All,
            tie_policy: TiePolicy::RandomUniform,
            empty_evidence_policy: EmptyEvidencePolicy::KeepCurrent,
            seed: 0,
        }
    }
}

impl ModelConfig {
    /// Single pivot, positive evidence only, uniform sampling, full evidence.
    pub fn attraction_only(lexemes: usize, cells: usize, exponents: usize) -> Self {
        Self { lexemes, cells, exponents, ..Self::default() }
    }

    /// Attraction-only with the given share of negative evidence.
    pub fn attraction_repulsion(lexemes: usize, cells: usize, exponents: usize, weight_negative: f64) -> Self {
        Self {
            weight_positive: 1.0 - weight_negative,
            weight_negative,
            ..Self::attraction_only(lexemes, cells, exponents)
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn is_attraction_only(&self) -> bool {
        self.pivot_count == 1
            && self.weight_negative == 0.0
            && self.focus_sampling == FocusSampling::Uniform
            && self.pivot_sampling == PivotSampling::Uniform
            && self.evidence_sampling == EvidenceSampling::All
    }

    /// Checks every field constraint; the message names the one broken.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.lexemes < 2 {
            return Err(Error::DimensionTooSmall(format!("lexemes ≥ 2 (got {})", self.lexemes)));
        }
        if self.cells < 2 {
            return Err(Error::DimensionTooSmall(format!("cells ≥ 2 (got {})", self.cells)));
        }
        if self.exponents < 1 || self.exponents > MAX_EXPONENTS {
            return bad(format!("1 ≤ exponents ≤ {MAX_EXPONENTS} (got {})", self.exponents));
        }
        if self.pivot_count < 1 || self.pivot_count > self.cells - 1 {
            return bad(format!(
                "pivot_count ≤ cells−1 and ≥ 1 (got pivot_count={} with cells={})",
                self.pivot_count, self.cells
            ));
        }
        if self.evidence_limit == Some(0) {
            return bad("evidence_limit must be positive".into());
        }
        if self.evidence_sampling != EvidenceSampling::All && self.evidence_limit.is_none() {
            return bad(format!(
                "evidence_sampling={} requires evidence_limit",
                self.evidence_sampling
            ));
        }
        for (name, w) in [("weight_positive", self.weight_positive), ("weight_negative", self.weight_negative)] {
            if !(0.0..=1.0).contains(&w) {
                return bad(format!("{name} in [0, 1] (got {w})"));
            }
        }
        if (self.weight_positive + self.weight_negative - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return bad(format!(
                "weight_positive + weight_negative = 1 (got {} + {})",
                self.weight_positive, self.weight_negative
            ));
        }
        for (name, s) in [
            ("zipf_exponent_lexemes", self.zipf_exponent_lexemes),
            ("zipf_exponent_cells", self.zipf_exponent_cells),
        ] {
            if !(s.is_finite() && s >= 0.0) {
                return bad(format!("{name} ≥ 0 (got {s})"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_attraction_only_and_valid() {
        let c = ModelConfig::default();
        assert!(c.is_attraction_only());
        c.validate().unwrap();
        assert!(!ModelConfig::attraction_repulsion(100, 8, 6, 0.3).is_attraction_only());
    }

    #[test]
    fn pivot_count_bound() {
        let c = ModelConfig { pivot_count: 8, ..ModelConfig::attraction_only(100, 8, 6) };
        let err = c.validate().unwrap_err().to_string();
        assert!(err.contains("pivot_count ≤ cells−1"), "{err}");
        ModelConfig { pivot_count: 7, ..c }.validate().unwrap();
    }

    #[test]
    fn weights_must_sum_to_one() {
        let c = ModelConfig { weight_positive: 0.6, weight_negative: 0.3, ..Default::default() };
        assert!(c.validate().is_err());
        ModelConfig::attraction_repulsion(10, 3, 3, 0.3).validate().unwrap();
    }

    #[test]
    fn subsampling_needs_limit() {
        let c = ModelConfig { evidence_sampling: EvidenceSampling::UniformSubsample, ..Default::default() };
        assert!(c.validate().is_err());
        ModelConfig { evidence_limit: Some(10), ..c }.validate().unwrap();
    }

    #[test]
    fn keywords_round_trip() {
        for &v in EvidenceSampling::ALL {
            assert_eq!(v.keyword().parse::<EvidenceSampling>().unwrap(), v);
        }
        assert!("sometimes".parse::<TiePolicy>().is_err());
    }
}
