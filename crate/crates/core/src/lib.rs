//! Iterated-learning dynamics over abstract inflectional paradigms.
//!
//! A [`Lexicon`] is an `L x C` grid of exponent indices. Each cycle of the
//! dynamic holds out one entry (the focus), looks at other lexemes through one
//! or more pivot cells, and rewrites the focus from the evidence it gathers.
//! With positive evidence only, the system drifts to a single inflection
//! class; adding negative evidence (repulsion) lets several stable classes
//! survive.
//!
//! Modules:
//! - [`rng`]: the pinned pseudo-random source and seed splitting.
//! - [`lexicon`], [`config`], [`frequency`]: state, parameters and Zipfian profiles.
//! - [`dynamics`]: one evolutionary cycle.
//! - [`metrics`]: conditional entropy, class counts and shuffled baselines.
//! - [`experiment`]: single runs, ensembles and their aggregation.

pub mod config;
pub mod dynamics;
pub mod error;
pub mod experiment;
pub mod frequency;
pub mod lexicon;
pub mod metrics;
pub mod rng;

pub use config::{
    EmptyEvidencePolicy, EvidenceSampling, FocusSampling, ModelConfig, PivotSampling, TiePolicy,
};
pub use dynamics::{EvidenceCounts, ExponentScores, FocusRef};
pub use error::{Error, Result};
pub use experiment::{EnsembleSummary, MetricBand, RunSpec, Trajectory};
pub use frequency::FrequencyProfile;
pub use lexicon::{ExponentId, Lexicon};
pub use metrics::{MetricsRecord, ShuffleScope};
pub use rng::RandomSource;
