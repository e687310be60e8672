//! One evolutionary cycle.
//!
//! A cycle picks a focus entry, draws pivot cells, collects the focal-cell
//! exponents of the other lexemes (positive evidence when they agree with the
//! focal lexeme at a pivot, negative when they disagree), scores every
//! exponent and writes the winner back into the focus. Evidence from several
//! pivots is pooled by summation. The focal lexeme never counts as evidence
//! about itself.

use crate::config::{EmptyEvidencePolicy, EvidenceSampling, FocusSampling, ModelConfig, PivotSampling, TiePolicy};
use crate::frequency::{uniform_partial_shuffle, weighted_partial_shuffle, weighted_sample, FrequencyProfile};
use crate::lexicon::{ExponentId, Lexicon};
use crate::rng::RandomSource;

/// Scores within this distance of the maximum count as tied.
pub const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FocusRef {
    pub lexeme: usize,
    pub cell: usize,
}

/// Exponent tallies in the focal cell, split by agreement at the pivots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvidenceCounts {
    pub positive: Vec<usize>,
    pub negative: Vec<usize>,
    pub positive_total: usize,
    pub negative_total: usize,
}

impl EvidenceCounts {
    pub fn new(exponents: usize) -> Self {
        Self { positive: vec![0; exponents], negative: vec![0; exponents], positive_total: 0, negative_total: 0 }
    }

    /// Builds counts from explicit vectors, deriving the totals.
    pub fn from_counts(positive: Vec<usize>, negative: Vec<usize>) -> Self {
        assert_eq!(positive.len(), negative.len());
        let positive_total = positive.iter().sum();
        let negative_total = negative.iter().sum();
        Self { positive, negative, positive_total, negative_total }
    }

    fn clear(&mut self, exponents: usize) {
        self.positive.clear();
        self.positive.resize(exponents, 0);
        self.negative.clear();
        self.negative.resize(exponents, 0);
        self.positive_total = 0;
        self.negative_total = 0;
    }

    pub fn is_empty(&self) -> bool {
        self.positive_total == 0 && self.negative_total == 0
    }

    pub fn exponents(&self) -> usize {
        self.positive.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExponentScores {
    pub score: Vec<f64>,
}

impl ExponentScores {
    /// Exponents whose score is within [`TIE_TOLERANCE`] of the maximum.
    pub fn argmax(&self) -> Vec<usize> {
        let mut out = Vec::new();
        argmax_into(&self.score, &mut out);
        out
    }
}

fn argmax_into(score: &[f64], out: &mut Vec<usize>) {
    out.clear();
    let best = score.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    out.extend((0..score.len()).filter(|&e| score[e] >= best - TIE_TOLERANCE));
}

pub fn select_focus(lexicon: &Lexicon, profile: &FrequencyProfile, config: &ModelConfig, rng: &mut RandomSource) -> FocusRef {
    let lexeme = match config.focus_sampling {
        FocusSampling::Uniform => rng.below(lexicon.rows()),
        FocusSampling::InverseFrequency => {
            weighted_sample(&profile.inverse_lexeme_weights, rng).expect("profile covers every lexeme")
        }
    };
    let cell = rng.below(lexicon.cols());
    FocusRef { lexeme, cell }
}

/// `pivot_count` distinct non-focal cells, in draw order.
pub fn select_pivots(focus: FocusRef, profile: &FrequencyProfile, config: &ModelConfig, rng: &mut RandomSource) -> Vec<usize> {
    let mut out = Vec::new();
    select_pivots_into(focus, config.cells, profile, config, rng, &mut out);
    out
}

fn select_pivots_into(
    focus: FocusRef,
    cells: usize,
    profile: &FrequencyProfile,
    config: &ModelConfig,
    rng: &mut RandomSource,
    out: &mut Vec<usize>,
) {
    out.clear();
    out.extend((0..cells).filter(|&c| c != focus.cell));
    let k = match config.pivot_sampling {
        PivotSampling::Uniform => uniform_partial_shuffle(out, config.pivot_count, rng),
        PivotSampling::Frequency => {
            weighted_partial_shuffle(out, config.pivot_count, |c| profile.cell_weights[c], rng)
        }
    };
    out.truncate(k);
}

pub fn gather_evidence(
    lexicon: &Lexicon,
    focus: FocusRef,
    pivots: &[usize],
    profile: &FrequencyProfile,
    config: &ModelConfig,
    rng: &mut RandomSource,
) -> EvidenceCounts {
    let mut evidence = EvidenceCounts::new(lexicon.exponents());
    let mut scratch = Vec::new();
    gather_evidence_into(lexicon, focus, pivots, profile, config, rng, &mut evidence, &mut scratch);
    evidence
}

#[allow(clippy::too_many_arguments)]
fn gather_evidence_into(
    lexicon: &Lexicon,
    focus: FocusRef,
    pivots: &[usize],
    profile: &FrequencyProfile,
    config: &ModelConfig,
    rng: &mut RandomSource,
    evidence: &mut EvidenceCounts,
    candidates: &mut Vec<usize>,
) {
    evidence.clear(lexicon.exponents());
    let mut tally = |l: usize, pivot: usize, pivot_value: u8| {
        let observed = lexicon.raw(l, focus.cell) as usize;
        if lexicon.raw(l, pivot) == pivot_value {
            evidence.positive[observed] += 1;
            evidence.positive_total += 1;
        } else {
            evidence.negative[observed] += 1;
            evidence.negative_total += 1;
        }
    };
    for &pivot in pivots {
        let pivot_value = lexicon.raw(focus.lexeme, pivot);
        match config.evidence_sampling {
            EvidenceSampling::All => {
                for l in (0..lexicon.rows()).filter(|&l| l != focus.lexeme) {
                    tally(l, pivot, pivot_value);
                }
            }
            sampling => {
                let limit = config.evidence_limit.expect("validated: subsampling has a limit");
                candidates.clear();
                candidates.extend((0..lexicon.rows()).filter(|&l| l != focus.lexeme));
                let k = if sampling == EvidenceSampling::UniformSubsample {
                    uniform_partial_shuffle(candidates, limit, rng)
                } else {
                    weighted_partial_shuffle(candidates, limit, |l| profile.lexeme_weights[l], rng)
                };
                for &l in &candidates[..k] {
                    tally(l, pivot, pivot_value);
                }
            }
        }
    }
}

/// `w+ * pos[e]/pos_total - w- * neg[e]/neg_total`, a channel with no
/// evidence contributing zero.
pub fn score_exponents(evidence: &EvidenceCounts, config: &ModelConfig) -> ExponentScores {
    let mut score = Vec::new();
    score_into(evidence, config, &mut score);
    ExponentScores { score }
}

fn score_into(evidence: &EvidenceCounts, config: &ModelConfig, score: &mut Vec<f64>) {
    let share = |count: usize, total: usize| if total == 0 { 0.0 } else { count as f64 / total as f64 };
    score.clear();
    score.extend((0..evidence.exponents()).map(|e| {
        config.weight_positive * share(evidence.positive[e], evidence.positive_total)
            - config.weight_negative * share(evidence.negative[e], evidence.negative_total)
    }));
}

pub fn select_replacement(
    scores: &ExponentScores,
    current: ExponentId,
    evidence: &EvidenceCounts,
    config: &ModelConfig,
    rng: &mut RandomSource,
) -> ExponentId {
    let mut tied = Vec::new();
    replacement_with(&scores.score, current, evidence, config, rng, &mut tied)
}

fn replacement_with(
    score: &[f64],
    current: ExponentId,
    evidence: &EvidenceCounts,
    config: &ModelConfig,
    rng: &mut RandomSource,
    tied: &mut Vec<usize>,
) -> ExponentId {
    if evidence.is_empty() {
        return match config.empty_evidence_policy {
            EmptyEvidencePolicy::KeepCurrent => current,
            EmptyEvidencePolicy::RandomExponent => ExponentId(rng.below(score.len()) as u8),
        };
    }
    argmax_into(score, tied);
    if tied.len() == 1 {
        return ExponentId(tied[0] as u8);
    }
    if config.tie_policy == TiePolicy::KeepCurrent && tied.contains(&current.index()) {
        return current;
    }
    ExponentId(tied[rng.below(tied.len())] as u8)
}

/// What a single cycle did.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepOutcome {
    pub focus: FocusRef,
    pub previous: ExponentId,
    pub replacement: ExponentId,
}

impl StepOutcome {
    pub fn changed(&self) -> bool {
        self.previous != self.replacement
    }
}

/// Runs cycles for one configuration, reusing its buffers between cycles.
#[derive(Debug, Clone)]
pub struct Stepper {
    config: ModelConfig,
    profile: FrequencyProfile,
    pivots: Vec<usize>,
    candidates: Vec<usize>,
    evidence: EvidenceCounts,
    score: Vec<f64>,
    tied: Vec<usize>,
}

impl Stepper {
    pub fn new(config: ModelConfig, profile: FrequencyProfile) -> Self {
        let evidence = EvidenceCounts::new(config.exponents);
        Self { config, profile, pivots: Vec::new(), candidates: Vec::new(), evidence, score: Vec::new(), tied: Vec::new() }
    }

    pub fn config(&self) -> &ModelConfig {
        &self.config
    }

    pub fn profile(&self) -> &FrequencyProfile {
        &self.profile
    }

    /// Evidence gathered in the most recent cycle.
    pub fn last_evidence(&self) -> &EvidenceCounts {
        &self.evidence
    }

    pub fn step(&mut self, lexicon: &mut Lexicon, rng: &mut RandomSource) -> StepOutcome {
        let focus = select_focus(lexicon, &self.profile, &self.config, rng);
        select_pivots_into(focus, lexicon.cols(), &self.profile, &self.config, rng, &mut self.pivots);
        gather_evidence_into(
            lexicon,
            focus,
            &self.pivots,
            &self.profile,
            &self.config,
            rng,
            &mut self.evidence,
            &mut self.candidates,
        );
        score_into(&self.evidence, &self.config, &mut self.score);
        let previous = lexicon.get(focus.lexeme, focus.cell);
        let replacement = replacement_with(&self.score, previous, &self.evidence, &self.config, rng, &mut self.tied);
        lexicon.set(focus.lexeme, focus.cell, replacement);
        StepOutcome { focus, previous, replacement }
    }
}

/// One cycle applied in place. Allocates; loops should hold a [`Stepper`].
pub fn step(lexicon: &mut Lexicon, profile: &FrequencyProfile, config: &ModelConfig, rng: &mut RandomSource) -> StepOutcome {
    Stepper::new(config.clone(), profile.clone()).step(lexicon, rng)
}
