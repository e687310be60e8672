//! Trajectories and ensembles.
//!
//! A run measures its lexicon at cycle 0, every `checkpoint_interval`
//! cycles and at `max_cycles`. The dynamics and the shuffle baselines draw
//! from separate streams of the run seed, so measurement settings never
//! perturb the trajectory itself.
//!
//! Run `i` of an ensemble is seeded with [`split_seed`]`(base_seed, i)`.
//! Results are collected in run order, so the summary does not depend on
//! how many threads executed the runs.

use rayon::prelude::*;

use crate::config::ModelConfig;
use crate::dynamics::Stepper;
use crate::error::{Error, Result};
use crate::frequency::FrequencyProfile;
use crate::lexicon::Lexicon;
use crate::metrics::{measure_with_scope, MetricsRecord, ShuffleScope};
use crate::rng::{split_seed, RandomSource};

/// Stream index reserved for shuffle baselines.
const MEASUREMENT_STREAM: u64 = u64::MAX;

/// Relative change in ensemble-mean class count tolerated between the last
/// two checkpoints of a converged ensemble.
pub const STABILITY_TOLERANCE: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub model: ModelConfig,
    pub max_cycles: u64,
    pub checkpoint_interval: u64,
    pub shuffle_replicates: usize,
    pub shuffle_scope: ShuffleScope,
    pub stop_on_absorption: bool,
}

impl Default for RunSpec {
    fn default() -> Self {
        Self::new(ModelConfig::default())
    }
}

impl RunSpec {
    /// Default budget: 200,000 cycles, checkpoints every 500, 10 shuffles.
    pub fn new(model: ModelConfig) -> Self {
        Self {
            model,
            max_cycles: 200_000,
            checkpoint_interval: 500,
            shuffle_replicates: 10,
            shuffle_scope: ShuffleScope::AllCells,
            stop_on_absorption: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.max_cycles == 0 {
            return bad("max_cycles must be positive".into());
        }
        if self.checkpoint_interval == 0 || self.checkpoint_interval > self.max_cycles {
            return bad(format!(
                "0 < checkpoint_interval ≤ max_cycles (got {} with max_cycles={})",
                self.checkpoint_interval, self.max_cycles
            ));
        }
        if self.shuffle_replicates == 0 {
            return bad("shuffle_replicates ≥ 1".into());
        }
        Ok(())
    }

    /// Cycles at which a run that never absorbs is measured.
    pub fn checkpoints(&self) -> Vec<u64> {
        let mut out: Vec<u64> = (0..=self.max_cycles).step_by(self.checkpoint_interval as usize).collect();
        if out.last() != Some(&self.max_cycles) {
            out.push(self.max_cycles);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub spec: RunSpec,
    pub records: Vec<MetricsRecord>,
    pub final_lexicon: Lexicon,
    /// First cycle at which every row was identical.
    pub absorbed_at: Option<u64>,
}

impl Trajectory {
    /// Metrics at checkpoint `cycle`. A run that stopped on absorption
    /// reports its absorbed record for every later cycle.
    pub fn record_at(&self, cycle: u64) -> Option<MetricsRecord> {
        if let Ok(i) = self.records.binary_search_by_key(&cycle, |r| r.cycle) {
            return Some(self.records[i].clone());
        }
        let last = self.records.last()?;
        match self.absorbed_at {
            Some(at) if at <= cycle && last.cycle == at => Some(MetricsRecord { cycle, ..last.clone() }),
            _ => None,
        }
    }

    pub fn final_record(&self) -> &MetricsRecord {
        self.records.last().expect("a trajectory always has its cycle-0 record")
    }
}

/// True iff all rows are identical.
pub fn detect_absorption(lexicon: &Lexicon) -> bool {
    lexicon.is_uniform()
}

/// Runs one trajectory from `spec.model.seed`.
pub fn run(spec: &RunSpec) -> Result<Trajectory> {
    spec.validate()?;
    let model = &spec.model;
    let mut rng = RandomSource::new(model.seed);
    let mut measure_rng = RandomSource::new(split_seed(model.seed, MEASUREMENT_STREAM));
    let mut lexicon = Lexicon::random(model.lexemes, model.cells, model.exponents, &mut rng)?;
    let mut stepper = Stepper::new(model.clone(), FrequencyProfile::for_config(model));
    let measure = |lex: &Lexicon, cycle: u64, rng: &mut RandomSource| {
        measure_with_scope(lex, cycle, spec.shuffle_replicates, spec.shuffle_scope, rng)
    };

    let mut records = vec![measure(&lexicon, 0, &mut measure_rng)];
    let mut absorbed_at = detect_absorption(&lexicon).then_some(0);
    if absorbed_at.is_some() && spec.stop_on_absorption {
        return Ok(Trajectory { spec: spec.clone(), records, final_lexicon: lexicon, absorbed_at });
    }

    for cycle in 1..=spec.max_cycles {
        // Absorption can only begin on a cycle that rewrote an entry.
        let changed = stepper.step(&mut lexicon, &mut rng).changed();
        let newly_absorbed = absorbed_at.is_none() && changed && detect_absorption(&lexicon);
        if newly_absorbed {
            absorbed_at = Some(cycle);
        }
        let stop = newly_absorbed && spec.stop_on_absorption;
        if stop || cycle % spec.checkpoint_interval == 0 || cycle == spec.max_cycles {
            records.push(measure(&lexicon, cycle, &mut measure_rng));
        }
        if stop {
            break;
        }
    }
    Ok(Trajectory { spec: spec.clone(), records, final_lexicon: lexicon, absorbed_at })
}

/// Per-run seeds of an ensemble.
pub fn ensemble_seeds(base_seed: u64, n_runs: usize) -> Vec<u64> {
    (0..n_runs as u64).map(|i| split_seed(base_seed, i)).collect()
}

/// Runs `n_runs` trajectories, on `threads` workers (rayon's global pool
/// when `None`). The result is in run order.
pub fn run_trajectories(spec: &RunSpec, n_runs: usize, base_seed: u64, threads: Option<usize>) -> Result<Vec<Trajectory>> {
    if n_runs == 0 {
        return Err(Error::InvalidConfig("n_runs ≥ 1".into()));
    }
    spec.validate()?;
    let specs: Vec<RunSpec> = ensemble_seeds(base_seed, n_runs)
        .into_iter()
        .map(|seed| RunSpec { model: spec.model.clone().with_seed(seed), ..spec.clone() })
        .collect();
    let go = || specs.par_iter().map(run).collect::<Result<Vec<_>>>();
    match threads {
        None => go(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?
            .install(go),
    }
}

/// Mean and 5th/95th percentiles of one metric, aligned to checkpoints.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MetricBand {
    pub mean: Vec<f64>,
    pub p05: Vec<f64>,
    pub p95: Vec<f64>,
}

impl MetricBand {
    fn push(&mut self, values: &mut [f64]) {
        self.mean.push(values.iter().sum::<f64>() / values.len() as f64);
        values.sort_by(f64::total_cmp);
        self.p05.push(percentile(values, 0.05));
        self.p95.push(percentile(values, 0.95));
    }

    pub fn len(&self) -> usize {
        self.mean.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mean.is_empty()
    }
}

/// Linearly interpolated percentile of sorted data (`q` in `[0, 1]`).
pub fn percentile(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty());
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSummary {
    pub runs: usize,
    pub checkpoints: Vec<u64>,
    pub mean_cond_entropy: MetricBand,
    pub class_count: MetricBand,
    pub shuffled_mean_cond_entropy: MetricBand,
    pub shuffled_class_count: MetricBand,
    pub final_class_count_mean: f64,
    /// Last two checkpoints' mean class counts within [`STABILITY_TOLERANCE`].
    pub converged: bool,
}

impl EnsembleSummary {
    /// Metric names in output order, paired with their bands.
    pub fn bands(&self) -> [(&'static str, &MetricBand); 4] {
        [
            ("mean_cond_entropy", &self.mean_cond_entropy),
            ("class_count", &self.class_count),
            ("shuffled_mean_cond_entropy", &self.shuffled_mean_cond_entropy),
            ("shuffled_class_count", &self.shuffled_class_count),
        ]
    }

    /// Builds a summary from already aggregated bands.
    pub fn from_bands(runs: usize, checkpoints: Vec<u64>, bands: [MetricBand; 4]) -> Self {
        let [mean_cond_entropy, class_count, shuffled_mean_cond_entropy, shuffled_class_count] = bands;
        let means = &class_count.mean;
        let final_class_count_mean = means.last().copied().unwrap_or(f64::NAN);
        let converged = match means.as_slice() {
            [.., prev, last] => (last - prev).abs() <= STABILITY_TOLERANCE * prev.abs().max(f64::MIN_POSITIVE),
            _ => false,
        };
        Self {
            runs,
            checkpoints,
            mean_cond_entropy,
            class_count,
            shuffled_mean_cond_entropy,
            shuffled_class_count,
            final_class_count_mean,
            converged,
        }
    }
}

/// Aggregates trajectories that share one spec over its checkpoint grid.
pub fn summarize(trajectories: &[Trajectory]) -> Result<EnsembleSummary> {
    let first = trajectories.first().ok_or_else(|| Error::InvalidConfig("no trajectories to summarize".into()))?;
    let checkpoints = first.spec.checkpoints();
    let mut bands: [MetricBand; 4] = Default::default();
    let mut columns = vec![Vec::with_capacity(trajectories.len()); 4];
    for &cycle in &checkpoints {
        columns.iter_mut().for_each(Vec::clear);
        for t in trajectories {
            let r = t.record_at(cycle).ok_or_else(|| {
                Error::InvalidConfig(format!("trajectory seeded {} has no record at cycle {cycle}", t.spec.model.seed))
            })?;
            columns[0].push(r.mean_cond_entropy);
            columns[1].push(r.class_count as f64);
            columns[2].push(r.shuffled_mean_cond_entropy);
            columns[3].push(r.shuffled_class_count);
        }
        for (band, values) in bands.iter_mut().zip(columns.iter_mut()) {
            band.push(values);
        }
    }
    Ok(EnsembleSummary::from_bands(trajectories.len(), checkpoints, bands))
}

pub fn run_ensemble(spec: &RunSpec, n_runs: usize, base_seed: u64) -> Result<EnsembleSummary> {
    summarize(&run_trajectories(spec, n_runs, base_seed, None)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(model: ModelConfig, max_cycles: u64, interval: u64) -> RunSpec {
        RunSpec { max_cycles, checkpoint_interval: interval, shuffle_replicates: 3, ..RunSpec::new(model) }
    }

    #[test]
    fn checkpoint_grid() {
        let spec = small(ModelConfig::default(), 1000, 300);
        assert_eq!(spec.checkpoints(), vec![0, 300, 600, 900, 1000]);
        assert_eq!(small(ModelConfig::default(), 1000, 500).checkpoints(), vec![0, 500, 1000]);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(small(ModelConfig::default(), 10, 20).validate().is_err());
        assert!(small(ModelConfig::default(), 10, 0).validate().is_err());
        assert!(RunSpec { shuffle_replicates: 0, ..RunSpec::default() }.validate().is_err());
    }

    #[test]
    fn single_exponent_is_absorbed_from_the_start() {
        let spec = RunSpec { stop_on_absorption: false, ..small(ModelConfig::attraction_only(10, 4, 1), 200, 50) };
        let t = run(&spec).unwrap();
        assert_eq!(t.absorbed_at, Some(0));
        assert_eq!(t.records.len(), 5);
        for r in &t.records {
            assert_eq!((r.class_count, r.mean_cond_entropy), (1, 0.0));
        }
    }

    #[test]
    fn same_seed_same_trajectory() {
        let spec = small(ModelConfig::attraction_repulsion(20, 4, 3, 0.3).with_seed(99), 2000, 100);
        assert_eq!(run(&spec).unwrap(), run(&spec).unwrap());
    }

    /// First seed whose small attraction-only run reaches the uniform state.
    fn absorbing_spec(stop_on_absorption: bool) -> RunSpec {
        (0..50)
            .map(|seed| RunSpec {
                stop_on_absorption,
                ..small(ModelConfig::attraction_only(12, 4, 3).with_seed(seed), 20_000, 100)
            })
            .find(|spec| run(spec).unwrap().absorbed_at.is_some())
            .expect("some seed absorbs")
    }

    #[test]
    fn records_strictly_increasing_and_absorption_persists() {
        let t = run(&absorbing_spec(false)).unwrap();
        assert!(t.records.windows(2).all(|w| w[0].cycle < w[1].cycle));
        assert_eq!(t.final_record().cycle, 20_000);
        let at = t.absorbed_at.unwrap();
        for r in t.records.iter().filter(|r| r.cycle >= at) {
            assert_eq!(r.class_count, 1);
        }
        assert!(t.final_lexicon.is_uniform());
    }

    #[test]
    fn stopped_run_fills_later_checkpoints() {
        let spec = absorbing_spec(true);
        let t = run(&spec).unwrap();
        let at = t.absorbed_at.unwrap();
        assert_eq!(t.final_record().cycle, at);
        let late = t.record_at(20_000).unwrap();
        assert_eq!((late.cycle, late.class_count), (20_000, 1));
        let continued = run(&RunSpec { stop_on_absorption: false, ..spec.clone() }).unwrap();
        assert_eq!(continued.absorbed_at, Some(at));
        assert_eq!(summarize(&[t]).unwrap(), summarize(&[continued]).unwrap());
    }

    #[test]
    fn disjoint_classes_are_frozen_under_attraction() {
        // Two classes of two lexemes differing in every cell: each focus sees
        // unanimous positive evidence for its own class.
        let lex = Lexicon::from_rows(&[[0u8, 0, 2, 1], [0, 0, 2, 1], [1, 2, 0, 0], [1, 2, 0, 0]], 3).unwrap();
        let config = ModelConfig::attraction_only(4, 4, 3);
        let mut stepper = Stepper::new(config, FrequencyProfile::uniform(4, 4));
        let mut evolved = lex.clone();
        let mut rng = RandomSource::new(0);
        for _ in 0..1000 {
            stepper.step(&mut evolved, &mut rng);
        }
        assert_eq!(evolved, lex);
        assert!(!detect_absorption(&evolved));
    }

    #[test]
    fn percentile_sandwich_can_fail_for_skewed_samples() {
        let mut values = vec![1.0; 97];
        values.extend([2.0; 3]);
        let mut band = MetricBand::default();
        band.push(&mut values);
        assert!(band.p05[0] <= band.p95[0]);
        assert!(band.mean[0] > band.p95[0]);
    }

    #[test]
    fn one_run_ensemble_collapses_band() {
        let spec = small(ModelConfig::attraction_repulsion(12, 3, 3, 0.3), 500, 100);
        let s = run_ensemble(&spec, 1, 5).unwrap();
        for (_, band) in s.bands() {
            assert_eq!(band.mean, band.p05);
            assert_eq!(band.mean, band.p95);
            assert_eq!(band.len(), s.checkpoints.len());
        }
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let spec = small(ModelConfig::attraction_repulsion(15, 4, 3, 0.3), 1000, 250);
        let one = summarize(&run_trajectories(&spec, 8, 77, Some(1)).unwrap()).unwrap();
        let four = summarize(&run_trajectories(&spec, 8, 77, Some(4)).unwrap()).unwrap();
        assert_eq!(one, four);
    }

    #[test]
    fn percentiles() {
        let v = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(percentile(&v, 0.0), 1.0);
        assert_eq!(percentile(&v, 0.5), 3.0);
        assert!((percentile(&v, 0.95) - 4.8).abs() < 1e-12);
        assert_eq!(percentile(&[7.0], 0.05), 7.0);
    }

    #[test]
    fn detect_absorption_examples() {
        assert!(detect_absorption(&Lexicon::from_rows(&[[0u8, 1], [0, 1]], 2).unwrap()));
        assert!(!detect_absorption(&Lexicon::from_rows(&[[0u8, 1], [1, 1]], 2).unwrap()));
        let random = Lexicon::random(100, 8, 6, &mut RandomSource::new(3)).unwrap();
        assert!(!detect_absorption(&random));
    }
}
