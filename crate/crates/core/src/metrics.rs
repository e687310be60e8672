//! Order measures over a lexicon.
//!
//! Probabilities are type frequencies: every lexeme counts once, whatever
//! the frequency profile used by the dynamics. Entropies are in bits.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::lexicon::Lexicon;
use crate::rng::RandomSource;

/// Measurements of one lexicon state.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRecord {
    pub cycle: u64,
    pub mean_cond_entropy: f64,
    pub class_count: usize,
    /// Mean over shuffle replicates.
    pub shuffled_mean_cond_entropy: f64,
    /// Mean over shuffle replicates.
    pub shuffled_class_count: f64,
}

/// Which columns a shuffle replicate permutes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ShuffleScope {
    /// Every column, each with its own permutation.
    #[default]
    AllCells,
    /// One column chosen uniformly per replicate.
    SingleCell,
}

impl ShuffleScope {
    pub fn keyword(self) -> &'static str {
        match self {
            ShuffleScope::AllCells => "all_cells",
            ShuffleScope::SingleCell => "single_cell",
        }
    }
}

impl fmt::Display for ShuffleScope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

impl FromStr for ShuffleScope {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "all_cells" => Ok(ShuffleScope::AllCells),
            "single_cell" => Ok(ShuffleScope::SingleCell),
            _ => Err(format!("expected one of all_cells, single_cell, got `{s}`")),
        }
    }
}

/// `H(to | from)` over the lexemes of `lexicon`.
pub fn pairwise_conditional_entropy(lexicon: &Lexicon, from_cell: usize, to_cell: usize) -> Result<f64> {
    if from_cell == to_cell {
        return Err(Error::SameCell(from_cell));
    }
    let mut joint = Vec::new();
    let mut marginal = Vec::new();
    Ok(conditional_entropy_with(lexicon, from_cell, to_cell, &mut joint, &mut marginal))
}

fn conditional_entropy_with(
    lexicon: &Lexicon,
    from_cell: usize,
    to_cell: usize,
    joint: &mut Vec<u32>,
    marginal: &mut Vec<u32>,
) -> f64 {
    let e = lexicon.exponents();
    joint.clear();
    joint.resize(e * e, 0);
    marginal.clear();
    marginal.resize(e, 0);
    for l in 0..lexicon.rows() {
        let a = lexicon.raw(l, from_cell) as usize;
        let b = lexicon.raw(l, to_cell) as usize;
        joint[a * e + b] += 1;
        marginal[a] += 1;
    }
    let n = lexicon.rows() as f64;
    let mut h = 0.0;
    for a in 0..e {
        let n_a = marginal[a];
        if n_a == 0 {
            continue;
        }
        for &n_ab in &joint[a * e..(a + 1) * e] {
            if n_ab > 0 && n_ab < n_a {
                h += n_ab as f64 * (n_a as f64 / n_ab as f64).log2();
            }
        }
    }
    h / n
}

/// Mean of `H(to | from)` over all ordered pairs of distinct cells.
pub fn mean_conditional_entropy(lexicon: &Lexicon) -> f64 {
    let cells = lexicon.cols();
    let (mut joint, mut marginal) = (Vec::new(), Vec::new());
    let mut total = 0.0;
    for from in 0..cells {
        for to in (0..cells).filter(|&to| to != from) {
            total += conditional_entropy_with(lexicon, from, to, &mut joint, &mut marginal);
        }
    }
    total / (cells * (cells - 1)) as f64
}

/// Number of distinct rows.
pub fn class_count(lexicon: &Lexicon) -> usize {
    (0..lexicon.rows()).map(|l| lexicon.row(l)).collect::<HashSet<_>>().len()
}

/// Permutes every column independently and uniformly.
pub fn shuffle_columns(lexicon: &Lexicon, rng: &mut RandomSource) -> Lexicon {
    let mut out = lexicon.clone();
    for cell in 0..lexicon.cols() {
        shuffle_column_in_place(&mut out, cell, rng);
    }
    out
}

/// Permutes the single column `cell`.
pub fn shuffle_column(lexicon: &Lexicon, cell: usize, rng: &mut RandomSource) -> Lexicon {
    let mut out = lexicon.clone();
    shuffle_column_in_place(&mut out, cell, rng);
    out
}

fn shuffle_column_in_place(lexicon: &mut Lexicon, cell: usize, rng: &mut RandomSource) {
    let mut column = lexicon.column(cell);
    rng.shuffle(&mut column);
    lexicon.set_column(cell, &column);
}

/// Live metrics plus their means over `shuffle_replicates` shuffled copies.
pub fn measure(lexicon: &Lexicon, cycle: u64, shuffle_replicates: usize, rng: &mut RandomSource) -> MetricsRecord {
    measure_with_scope(lexicon, cycle, shuffle_replicates, ShuffleScope::AllCells, rng)
}

pub fn measure_with_scope(
    lexicon: &Lexicon,
    cycle: u64,
    shuffle_replicates: usize,
    scope: ShuffleScope,
    rng: &mut RandomSource,
) -> MetricsRecord {
    assert!(shuffle_replicates >= 1, "measure needs at least one shuffle replicate");
    let mut entropy_sum = 0.0;
    let mut class_sum = 0usize;
    for _ in 0..shuffle_replicates {
        let shuffled = match scope {
            ShuffleScope::AllCells => shuffle_columns(lexicon, rng),
            ShuffleScope::SingleCell => {
                let cell = rng.below(lexicon.cols());
                shuffle_column(lexicon, cell, rng)
            }
        };
        entropy_sum += mean_conditional_entropy(&shuffled);
        class_sum += class_count(&shuffled);
    }
    MetricsRecord {
        cycle,
        mean_cond_entropy: mean_conditional_entropy(lexicon),
        class_count: class_count(lexicon),
        shuffled_mean_cond_entropy: entropy_sum / shuffle_replicates as f64,
        shuffled_class_count: class_sum as f64 / shuffle_replicates as f64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cols(columns: &[&[u8]], e: usize) -> Lexicon {
        Lexicon::from_columns(columns, e).unwrap()
    }

    #[test]
    fn pairwise_examples() {
        let uniform = cols(&[&[1, 1, 1, 1], &[0, 0, 0, 0]], 2);
        assert_eq!(pairwise_conditional_entropy(&uniform, 0, 1).unwrap(), 0.0);
        let independent = cols(&[&[0, 0, 1, 1], &[0, 1, 0, 1]], 2);
        assert!((pairwise_conditional_entropy(&independent, 0, 1).unwrap() - 1.0).abs() < 1e-15);
        let bijective = cols(&[&[0, 0, 1, 1], &[1, 1, 0, 0]], 2);
        assert_eq!(pairwise_conditional_entropy(&bijective, 0, 1).unwrap(), 0.0);
        assert_eq!(pairwise_conditional_entropy(&bijective, 1, 1), Err(Error::SameCell(1)));
    }

    #[test]
    fn conditional_entropy_is_asymmetric() {
        // Column 0 determines column 1 but not the reverse.
        let lex = cols(&[&[0, 1, 2, 3], &[0, 0, 1, 1]], 4);
        assert_eq!(pairwise_conditional_entropy(&lex, 0, 1).unwrap(), 0.0);
        assert!((pairwise_conditional_entropy(&lex, 1, 0).unwrap() - 1.0).abs() < 1e-15);
        assert!((mean_conditional_entropy(&lex) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn uniform_and_duplicated_lexicons_have_zero_entropy() {
        let lex = Lexicon::from_rows(&vec![[3u8, 1, 4, 1, 5]; 9], 6).unwrap();
        assert_eq!(mean_conditional_entropy(&lex), 0.0);
        assert_eq!(class_count(&lex), 1);
    }

    #[test]
    fn random_start_is_high_entropy() {
        let lex = Lexicon::random(100, 8, 6, &mut RandomSource::new(31)).unwrap();
        let h = mean_conditional_entropy(&lex);
        assert!(h > 1.8 && h <= 6f64.log2(), "{h}");
    }

    #[test]
    fn class_count_examples() {
        assert_eq!(class_count(&Lexicon::from_rows(&[[0u8, 1], [0, 1], [1, 0]], 2).unwrap()), 2);
    }

    #[test]
    fn random_lexicons_have_all_distinct_rows() {
        // Birthday bound: P(collision) <= 100^2 / (2 * 6^8) < 0.003 per seed.
        let collisions = (0..1000)
            .filter(|&seed| class_count(&Lexicon::random(100, 8, 6, &mut RandomSource::new(seed)).unwrap()) < 100)
            .count();
        assert!(collisions <= 10, "{collisions} collisions in 1000 seeds");
    }

    #[test]
    fn shuffle_keeps_constant_columns() {
        let lex = Lexicon::from_rows(&vec![[2u8, 0, 1]; 10], 3).unwrap();
        assert_eq!(shuffle_columns(&lex, &mut RandomSource::new(1)), lex);
    }

    #[test]
    fn shuffle_preserves_column_histograms() {
        let mut rng = RandomSource::new(2);
        let lex = Lexicon::random(50, 6, 4, &mut rng).unwrap();
        let shuffled = shuffle_columns(&lex, &mut rng);
        for c in 0..6 {
            assert_eq!(lex.column_histogram(c), shuffled.column_histogram(c));
        }
        let single = shuffle_column(&lex, 2, &mut rng);
        for c in [0, 1, 3, 4, 5] {
            assert_eq!(single.column(c), lex.column(c));
        }
    }

    #[test]
    fn shuffling_a_bijection_reaches_independence() {
        // Two columns in bijection with marginals 50/30/20 over L = 100. After
        // shuffling, the columns are (close to) independent, so H(to|from)
        // tends to H(to): 0.5 log2 2 + 0.3 log2(10/3) + 0.2 log2 5 ≈ 1.4855 bits,
        // minus the finite-sample bias of the plug-in estimator.
        let a: Vec<u8> = (0..100).map(|l| if l < 50 { 0 } else if l < 80 { 1 } else { 2 }).collect();
        let b: Vec<u8> = a.iter().map(|&x| 2 - x).collect();
        let lex = cols(&[&a, &b], 3);
        assert_eq!(mean_conditional_entropy(&lex), 0.0);
        let analytic = 0.5 * 2f64.log2() + 0.3 * (10.0f64 / 3.0).log2() + 0.2 * 5f64.log2();
        let mut rng = RandomSource::new(3);
        let mean = (0..100).map(|_| mean_conditional_entropy(&shuffle_columns(&lex, &mut rng))).sum::<f64>() / 100.0;
        assert!((mean - analytic).abs() < 0.1, "{mean} vs {analytic}");
    }

    #[test]
    fn measure_uniform_lexicon() {
        let lex = Lexicon::from_rows(&vec![[1u8, 1, 0]; 5], 2).unwrap();
        let r = measure(&lex, 7, 10, &mut RandomSource::new(0));
        assert_eq!(
            r,
            MetricsRecord {
                cycle: 7,
                mean_cond_entropy: 0.0,
                class_count: 1,
                shuffled_mean_cond_entropy: 0.0,
                shuffled_class_count: 1.0
            }
        );
    }

    #[test]
    fn measure_structured_lexicon() {
        // Four templates, 25 lexemes each, distinct in every cell: live
        // entropy is zero while shuffling scatters rows.
        let templates: [[u8; 8]; 4] = [
            [0, 0, 0, 0, 0, 0, 0, 0],
            [1, 1, 1, 1, 1, 1, 1, 1],
            [2, 2, 2, 2, 2, 2, 2, 2],
            [3, 3, 3, 3, 3, 3, 3, 3],
        ];
        let rows: Vec<[u8; 8]> = (0..100).map(|l| templates[l % 4]).collect();
        let lex = Lexicon::from_rows(&rows, 6).unwrap();
        let before = lex.clone();
        let r = measure(&lex, 0, 10, &mut RandomSource::new(4));
        assert_eq!(lex, before);
        assert_eq!(r.class_count, 4);
        assert_eq!(r.mean_cond_entropy, 0.0);
        assert!(r.shuffled_class_count > 40.0, "{r:?}");
        assert!(r.shuffled_mean_cond_entropy > r.mean_cond_entropy + 1.0, "{r:?}");
    }

    #[test]
    fn single_cell_scope_only_touches_one_column() {
        let templates: [[u8; 3]; 2] = [[0, 0, 0], [1, 1, 1]];
        let rows: Vec<[u8; 3]> = (0..40).map(|l| templates[l % 2]).collect();
        let lex = Lexicon::from_rows(&rows, 2).unwrap();
        let r = measure_with_scope(&lex, 0, 20, ShuffleScope::SingleCell, &mut RandomSource::new(5));
        // At most 4 row patterns once only one of three columns moves.
        assert!(r.shuffled_class_count <= 4.0 && r.shuffled_class_count > 2.0, "{r:?}");
    }
}
