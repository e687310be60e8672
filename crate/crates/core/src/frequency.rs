//! Zipfian frequency profiles and weighted draws.
//!
//! Index doubles as frequency rank: lexeme 0 and cell 0 are the most frequent.

use crate::config::ModelConfig;
use crate::error::{Error, Result};
use crate::rng::RandomSource;

/// `weight[r] = (r+1)^-s / sum_{q=1..n} q^-s`.
pub fn zipf_weights(n: usize, s: f64) -> Vec<f64> {
    assert!(n >= 1, "zipf_weights needs n >= 1");
    assert!(s >= 0.0 && s.is_finite(), "zipf exponent must be finite and >= 0, got {s}");
    let raw: Vec<f64> = (1..=n).map(|r| (r as f64).powf(-s)).collect();
    normalize(raw)
}

fn normalize(mut v: Vec<f64>) -> Vec<f64> {
    let total: f64 = v.iter().sum();
    v.iter_mut().for_each(|w| *w /= total);
    v
}

/// Draws index `i` with probability `weights[i]` by a linear scan.
///
/// Weights need not be normalized; only their ratios matter.
pub fn weighted_sample(weights: &[f64], rng: &mut RandomSource) -> Result<usize> {
    if weights.is_empty() {
        return Err(Error::EmptyWeights);
    }
    Ok(pick(weights, weights.iter().sum(), rng))
}

#[inline]
fn pick(weights: &[f64], total: f64, rng: &mut RandomSource) -> usize {
    let target = rng.next_f64() * total;
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w > 0.0 {
            acc += w;
            last_positive = i;
            if target < acc {
                return i;
            }
        }
    }
    // Rounding left the target at the very top of the range.
    last_positive
}

/// Draws `k` distinct positions of `items` (all of them if `k >= len`),
/// each step proportional to `weight_of` among those not yet drawn.
/// The chosen items are moved to the front of `items` in draw order.
pub(crate) fn weighted_partial_shuffle<T: Copy>(
    items: &mut [T],
    k: usize,
    weight_of: impl Fn(T) -> f64,
    rng: &mut RandomSource,
) -> usize {
    let k = k.min(items.len());
    for i in 0..k {
        let rest = &items[i..];
        let total: f64 = rest.iter().map(|&x| weight_of(x)).sum();
        let target = rng.next_f64() * total;
        let mut acc = 0.0;
        let mut chosen = rest.len() - 1;
        for (j, &x) in rest.iter().enumerate() {
            acc += weight_of(x);
            if target < acc {
                chosen = j;
                break;
            }
        }
        items.swap(i, i + chosen);
    }
    k
}

/// Uniform counterpart of [`weighted_partial_shuffle`].
pub(crate) fn uniform_partial_shuffle<T>(items: &mut [T], k: usize, rng: &mut RandomSource) -> usize {
    let k = k.min(items.len());
    for i in 0..k {
        let j = i + rng.below(items.len() - i);
        items.swap(i, j);
    }
    k
}

/// Zipfian weights over lexemes and cells.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyProfile {
    pub lexeme_weights: Vec<f64>,
    pub cell_weights: Vec<f64>,
    /// `1 / lexeme_weights`, renormalized; drives inverse-frequency foci.
    pub inverse_lexeme_weights: Vec<f64>,
}

impl FrequencyProfile {
    pub fn zipf(lexemes: usize, cells: usize, s_lexemes: f64, s_cells: f64) -> Self {
        Self::from_weights(zipf_weights(lexemes, s_lexemes), zipf_weights(cells, s_cells))
    }

    pub fn uniform(lexemes: usize, cells: usize) -> Self {
        Self::zipf(lexemes, cells, 0.0, 0.0)
    }

    pub fn for_config(config: &ModelConfig) -> Self {
        Self::zipf(config.lexemes, config.cells, config.zipf_exponent_lexemes, config.zipf_exponent_cells)
    }

    /// Arbitrary strictly positive weights; both vectors are normalized.
    pub fn from_weights(lexeme_weights: Vec<f64>, cell_weights: Vec<f64>) -> Self {
        assert!(
            lexeme_weights.iter().chain(&cell_weights).all(|&w| w > 0.0 && w.is_finite()),
            "profile weights must be strictly positive"
        );
        let lexeme_weights = normalize(lexeme_weights);
        let inverse_lexeme_weights = normalize(lexeme_weights.iter().map(|w| 1.0 / w).collect());
        Self { lexeme_weights, cell_weights: normalize(cell_weights), inverse_lexeme_weights }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
    }

    #[test]
    fn zipf_examples() {
        assert!(close(&zipf_weights(3, 0.0), &[1.0 / 3.0; 3]));
        assert!(close(&zipf_weights(2, 1.0), &[2.0 / 3.0, 1.0 / 3.0]));
        assert!(close(&zipf_weights(4, 1.0), &[0.48, 0.24, 0.16, 0.12]));
    }

    #[test]
    fn single_outcome() {
        let mut rng = RandomSource::new(0);
        assert_eq!(weighted_sample(&[1.0], &mut rng).unwrap(), 0);
        assert_eq!(weighted_sample(&[], &mut rng), Err(Error::EmptyWeights));
    }

    fn frequency_of_zero(weights: &[f64], seed: u64) -> f64 {
        let mut rng = RandomSource::new(seed);
        let n = 100_000;
        let hits = (0..n).filter(|_| weighted_sample(weights, &mut rng).unwrap() == 0).count();
        hits as f64 / n as f64
    }

    #[test]
    fn weighted_frequencies() {
        assert!((frequency_of_zero(&[0.5, 0.5], 1) - 0.5).abs() < 0.01);
        assert!((frequency_of_zero(&[2.0 / 3.0, 1.0 / 3.0], 2) - 2.0 / 3.0).abs() < 0.01);
    }

    #[test]
    fn zero_weights_never_drawn() {
        let mut rng = RandomSource::new(4);
        for _ in 0..10_000 {
            assert_eq!(weighted_sample(&[0.0, 1.0, 0.0], &mut rng).unwrap(), 1);
        }
    }

    #[test]
    fn inverse_weights() {
        let p = FrequencyProfile::from_weights(vec![2.0, 1.0], vec![1.0, 1.0]);
        assert!(close(&p.inverse_lexeme_weights, &[1.0 / 3.0, 2.0 / 3.0]));
        let u = FrequencyProfile::uniform(5, 3);
        assert!(close(&u.inverse_lexeme_weights, &u.lexeme_weights));
    }

    #[test]
    fn partial_shuffles_draw_distinct() {
        let mut rng = RandomSource::new(8);
        let mut items: Vec<usize> = (0..10).collect();
        let k = weighted_partial_shuffle(&mut items, 4, |x| (x + 1) as f64, &mut rng);
        assert_eq!(k, 4);
        let mut head = items[..4].to_vec();
        head.sort_unstable();
        head.dedup();
        assert_eq!(head.len(), 4);
        assert_eq!(uniform_partial_shuffle(&mut items, 20, &mut rng), 10);
    }
}
