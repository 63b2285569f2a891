//! Exponential-family primitives specialized to the multinomial family and
//! the unit-variance Gaussian location family.
//!
//! For a multinomial over `m` cells the relevant quantities are
//!
//! * the MLE `p̂_k = n_k / n`,
//! * the plug-in entropy `H(θ̂) = −Σ p̂_k log2 p̂_k`,
//! * the Fisher determinant `|I(p)| = 1 / Π_{k=1}^{m} p_k` (dimension `d = m − 1`),
//! * the Jeffreys-prior normalizing integral
//!   `∫_simplex Π p_k^{−1/2} dp = π^{m/2} / Γ(m/2)`.
//!
//! All code lengths are in bits (log base 2); natural-log intermediates are
//! converted once at the boundary.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

pub(crate) const LN_2: f64 = std::f64::consts::LN_2;

/// log2 Γ(x), via `libm`'s lgamma (relative error well under 1e-10).
pub(crate) fn log2_gamma(x: f64) -> f64 {
    libm::lgamma(x) / LN_2
}

/// x·log2(x) with the 0·log 0 = 0 convention.
pub(crate) fn xlog2x(x: f64) -> f64 {
    if x > 0.0 {
        x * x.log2()
    } else {
        0.0
    }
}

/// A word of a parsed sequence (bytes of the original symbols, or one
/// amino-acid letter for the translation model).
pub type Word = Vec<u8>;

/// A probability vector over dictionary cells.
///
/// Invariants: every entry in `[0, 1]`, entries sum to 1 within 1e-12,
/// at least one cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector(Vec<f64>);

impl ProbVector {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidProbVector {
                reason: "no cells".into(),
            });
        }
        if let Some(bad) = p.iter().find(|&&x| !(0.0..=1.0).contains(&x) || x.is_nan()) {
            return Err(Error::InvalidProbVector {
                reason: format!("entry {bad} outside [0, 1]"),
            });
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidProbVector {
                reason: format!("sum {sum} != 1"),
            });
        }
        Ok(Self(p))
    }

    pub fn uniform(m: usize) -> Self {
        Self(vec![1.0 / m as f64; m.max(1)])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Entropy of this distribution in bits.
    pub fn entropy_bits(&self) -> f64 {
        -self.0.iter().map(|&p| xlog2x(p)).sum::<f64>()
    }
}

/// Observed words with their counts.
///
/// `n` is the total number of words, `m` the number of distinct words; only
/// words that actually occurred are stored (every stored count is positive),
/// and iteration is in sorted-word order so downstream cell indexing is
/// stable.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WordCounts {
    counts: BTreeMap<Word, u64>,
    total: u64,
}

impl WordCounts {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_words<I, W>(words: I) -> Self
    where
        I: IntoIterator<Item = W>,
        W: Into<Word>,
    {
        let mut wc = Self::new();
        for w in words {
            wc.add(w.into());
        }
        wc
    }

    pub fn add(&mut self, word: Word) {
        *self.counts.entry(word).or_insert(0) += 1;
        self.total += 1;
    }

    /// Total word count n.
    pub fn n(&self) -> u64 {
        self.total
    }

    /// Distinct word count m.
    pub fn distinct(&self) -> u64 {
        self.counts.len() as u64
    }

    pub fn get(&self, word: &[u8]) -> u64 {
        self.counts.get(word).copied().unwrap_or(0)
    }

    /// (word, count) pairs in sorted-word order.
    pub fn iter(&self) -> impl Iterator<Item = (&Word, u64)> {
        self.counts.iter().map(|(w, &c)| (w, c))
    }

    /// Counts in sorted-word order.
    pub fn count_values(&self) -> Vec<u64> {
        self.counts.values().copied().collect()
    }
}

/// Maximum-likelihood estimate `p̂_k = n_k / n` in sorted-word cell order.
pub fn multinomial_mle(counts: &WordCounts) -> Result<ProbVector> {
    let n = counts.n();
    if n == 0 {
        return Err(Error::EmptySequence);
    }
    let p = counts
        .iter()
        .map(|(_, c)| c as f64 / n as f64)
        .collect::<Vec<_>>();
    ProbVector::new(p)
}

/// Plug-in entropy of the observed word distribution, bits per word.
///
/// Computed as `log2 n − (Σ n_k log2 n_k) / n`, which is exact for counts and
/// avoids forming each ratio.
pub fn empirical_entropy_bits(counts: &WordCounts) -> Result<f64> {
    let n = counts.n();
    if n == 0 {
        return Err(Error::EmptySequence);
    }
    let sum: f64 = counts.iter().map(|(_, c)| xlog2x(c as f64)).sum();
    Ok((n as f64).log2() - sum / n as f64)
}

/// Determinant of the multinomial Fisher information, `1 / Π p_k`.
pub fn fisher_det_multinomial(p: &ProbVector) -> Result<f64> {
    let mut log_det = 0.0;
    for (index, &pk) in p.as_slice().iter().enumerate() {
        if pk <= 0.0 {
            return Err(Error::BoundaryParameter { index });
        }
        log_det -= pk.ln();
    }
    Ok(log_det.exp())
}

/// log2 of the Jeffreys integral `∫_simplex |I(p)|^{1/2} dp` for an `m`-cell
/// multinomial: `(m/2)·log2 π − log2 Γ(m/2)`.
///
/// For m = 1 the simplex is a point and the integral is 1.
pub fn jeffreys_log_integral_multinomial(m: u64) -> f64 {
    debug_assert!(m >= 1);
    let mf = m as f64;
    (mf / 2.0) * std::f64::consts::PI.log2() - log2_gamma(mf / 2.0)
}

/// Unit-variance Gaussian location family with the natural parameter
/// restricted to `[a, b]`.  Fisher information is identically 1, so the
/// Jeffreys integral over the restriction is just `b − a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianLocationFamily {
    a: f64,
    b: f64,
}

impl GaussianLocationFamily {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(b > a) || !a.is_finite() || !b.is_finite() {
            return Err(Error::DegenerateInterval { a, b });
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn width(&self) -> f64 {
        self.b - self.a
    }

    /// log2 ∫_a^b |I(θ)|^{1/2} dθ = log2 (b − a).
    pub fn log2_fisher_integral(&self) -> f64 {
        self.width().log2()
    }
}

/// −log2 p(x^n; θ̂) for the unit-variance Gaussian location family, with the
/// unrestricted MLE θ̂ = x̄ (a description length, not a discrete code
/// length).
pub fn gaussian_location_max_loglik_bits(xs: &[f64]) -> Result<f64> {
    if xs.is_empty() {
        return Err(Error::EmptySequence);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let ss: f64 = xs.iter().map(|x| (x - mean) * (x - mean)).sum();
    Ok((n / 2.0) * (2.0 * std::f64::consts::PI).log2() + ss / (2.0 * LN_2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn counts_of(pairs: &[(&str, u64)]) -> WordCounts {
        let mut wc = WordCounts::new();
        for &(w, c) in pairs {
            for _ in 0..c {
                wc.add(w.as_bytes().to_vec());
            }
        }
        wc
    }

    #[test]
    fn mle_single_cell() {
        let wc = counts_of(&[("a", 1)]);
        let p = multinomial_mle(&wc).unwrap();
        assert_eq!(p.as_slice(), &[1.0]);
    }

    #[test]
    fn mle_symmetric() {
        let wc = counts_of(&[("a", 750), ("b", 750), ("c", 750), ("d", 750)]);
        let p = multinomial_mle(&wc).unwrap();
        assert_eq!(p.as_slice(), &[0.25, 0.25, 0.25, 0.25]);
    }

    #[test]
    fn mle_direct_ratio() {
        let wc = counts_of(&[("a", 3), ("b", 1)]);
        let p = multinomial_mle(&wc).unwrap();
        assert_eq!(p.as_slice(), &[0.75, 0.25]);
    }

    #[test]
    fn mle_empty_is_error() {
        assert!(matches!(
            multinomial_mle(&WordCounts::new()),
            Err(Error::EmptySequence)
        ));
    }

    #[test]
    fn entropy_uniform_four_cells() {
        let wc = counts_of(&[("a", 9), ("b", 9), ("c", 9), ("d", 9)]);
        assert_abs_diff_eq!(empirical_entropy_bits(&wc).unwrap(), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn entropy_three_one_split() {
        // −0.75·log2 0.75 − 0.25·log2 0.25 = 0.8112781244591328
        let wc = counts_of(&[("a", 3), ("b", 1)]);
        assert_abs_diff_eq!(
            empirical_entropy_bits(&wc).unwrap(),
            0.8112781244591328,
            epsilon = 1e-12
        );
    }

    #[test]
    fn fisher_det_values() {
        let p = ProbVector::new(vec![0.5, 0.5]).unwrap();
        assert_abs_diff_eq!(fisher_det_multinomial(&p).unwrap(), 4.0, epsilon = 1e-12);
        let p = ProbVector::new(vec![0.25; 4]).unwrap();
        assert_abs_diff_eq!(fisher_det_multinomial(&p).unwrap(), 256.0, epsilon = 1e-9);
        let p = ProbVector::new(vec![0.75, 0.25]).unwrap();
        assert_abs_diff_eq!(
            fisher_det_multinomial(&p).unwrap(),
            16.0 / 3.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn fisher_det_boundary_is_error() {
        let p = ProbVector::new(vec![1.0, 0.0]).unwrap();
        assert!(matches!(
            fisher_det_multinomial(&p),
            Err(Error::BoundaryParameter { index: 1 })
        ));
    }

    #[test]
    fn jeffreys_integral_known_values() {
        // m=2: log2 π; m=1: 0; m=4: 2·log2 π (Γ(2) = 1)
        let log2_pi = std::f64::consts::PI.log2();
        assert_abs_diff_eq!(
            jeffreys_log_integral_multinomial(2),
            log2_pi,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(jeffreys_log_integral_multinomial(1), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            jeffreys_log_integral_multinomial(4),
            2.0 * log2_pi,
            epsilon = 1e-12
        );
    }

    #[test]
    fn entropy_equals_max_loglik() {
        // n·H(θ̂) must equal −log2 p(x^(n); θ̂) for multinomial counts.
        let wc = counts_of(&[("a", 17), ("b", 5), ("c", 41), ("d", 1)]);
        let n = wc.n() as f64;
        let nh = n * empirical_entropy_bits(&wc).unwrap();
        let p = multinomial_mle(&wc).unwrap();
        let nll: f64 = wc
            .iter()
            .zip(p.as_slice())
            .map(|((_, c), &pk)| -(c as f64) * pk.log2())
            .sum();
        assert_abs_diff_eq!(nh, nll, epsilon = 1e-9);
    }

    proptest! {
        #[test]
        fn mle_dominates_any_distribution(
            counts in proptest::collection::vec(1u64..200, 1..6),
            raw_q in proptest::collection::vec(0.05f64..1.0, 6),
        ) {
            let mut wc = WordCounts::new();
            for (i, &c) in counts.iter().enumerate() {
                for _ in 0..c {
                    wc.add(vec![b'a' + i as u8]);
                }
            }
            let m = counts.len();
            let qsum: f64 = raw_q[..m].iter().sum();
            let nh = wc.n() as f64 * empirical_entropy_bits(&wc).unwrap();
            let cross: f64 = wc
                .iter()
                .enumerate()
                .map(|(i, (_, c))| -(c as f64) * (raw_q[i] / qsum).log2())
                .sum();
            prop_assert!(cross >= nh - 1e-9);
        }

        #[test]
        fn entropy_bounds(counts in proptest::collection::vec(1u64..500, 1..10)) {
            let mut wc = WordCounts::new();
            for (i, &c) in counts.iter().enumerate() {
                for _ in 0..c {
                    wc.add(vec![b'a' + i as u8]);
                }
            }
            let h = empirical_entropy_bits(&wc).unwrap();
            let m = wc.distinct() as f64;
            prop_assert!(h >= -1e-12);
            prop_assert!(h <= m.log2() + 1e-12);
        }
    }
}
