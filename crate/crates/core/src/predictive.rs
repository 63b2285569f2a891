//! Bayesian predictive (mixture) code lengths.
//!
//! Sequentially coding word `k` with the Dirichlet posterior predictive
//! `q_k(x) = (count_before(x) + α_x) / (k − 1 + Σα)` telescopes to the
//! Dirichlet-multinomial marginal of the whole sequence, so the sequential
//! and closed-form routes must agree to floating-point accuracy; tests pin
//! that identity.  With the Jeffreys prior (α = 1/2) this is the
//! Krichevsky-Trofimov code.
//!
//! All Γ products run through log-Γ; direct Γ would overflow for n in the
//! thousands.

use crate::error::{Error, Result};
use crate::expfam::{
    empirical_entropy_bits, fisher_det_multinomial, gaussian_location_max_loglik_bits,
    multinomial_mle, GaussianLocationFamily, Word, WordCounts, LN_2,
};

/// Dirichlet prior over a fixed cell list.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletPrior {
    alpha: Vec<f64>,
}

impl DirichletPrior {
    pub fn new(alpha: Vec<f64>) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::InvalidPrior {
                reason: "no concentration parameters".into(),
            });
        }
        if let Some(bad) = alpha.iter().find(|&&a| !(a > 0.0)) {
            return Err(Error::InvalidPrior {
                reason: format!("non-positive concentration {bad}"),
            });
        }
        Ok(Self { alpha })
    }

    /// Jeffreys prior: α_k = 1/2 for all cells.
    pub fn jeffreys(m: usize) -> Self {
        Self {
            alpha: vec![0.5; m.max(1)],
        }
    }

    /// Uniform (Laplace) prior: α_k = 1.
    pub fn uniform(m: usize) -> Self {
        Self {
            alpha: vec![1.0; m.max(1)],
        }
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    fn alpha_sum(&self) -> f64 {
        self.alpha.iter().sum()
    }

    /// log2 of the Dirichlet-multinomial marginal of a specific ordered
    /// sequence with per-cell counts `counts` (no multinomial coefficient).
    fn log2_marginal(&self, counts: &[u64]) -> f64 {
        let a0 = self.alpha_sum();
        let n: u64 = counts.iter().sum();
        let mut ln = libm::lgamma(a0) - libm::lgamma(n as f64 + a0);
        for (&c, &a) in counts.iter().zip(&self.alpha) {
            ln += libm::lgamma(c as f64 + a) - libm::lgamma(a);
        }
        ln / LN_2
    }

    /// log2 of the prior density at `p` (with respect to Lebesgue measure on
    /// the first d = m − 1 coordinates of the simplex).
    fn log2_density(&self, p: &[f64]) -> Result<f64> {
        let a0 = self.alpha_sum();
        let mut ln = libm::lgamma(a0);
        for (index, (&pk, &a)) in p.iter().zip(&self.alpha).enumerate() {
            if pk <= 0.0 {
                return Err(Error::BoundaryParameter { index });
            }
            ln += (a - 1.0) * pk.ln() - libm::lgamma(a);
        }
        Ok(ln / LN_2)
    }
}

/// Finite mixture of Dirichlet priors with positive weights summing to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct MixturePrior {
    components: Vec<(f64, DirichletPrior)>,
}

impl MixturePrior {
    pub fn new(components: Vec<(f64, DirichletPrior)>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidPrior {
                reason: "mixture needs at least one component".into(),
            });
        }
        let m = components[0].1.len();
        if components.iter().any(|(_, d)| d.len() != m) {
            return Err(Error::InvalidPrior {
                reason: "mixture components have differing cell counts".into(),
            });
        }
        if components.iter().any(|(w, _)| !(*w > 0.0)) {
            return Err(Error::InvalidPrior {
                reason: "mixture weights must be positive".into(),
            });
        }
        let sum: f64 = components.iter().map(|(w, _)| w).sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidPrior {
                reason: format!("mixture weights sum to {sum}, not 1"),
            });
        }
        Ok(Self { components })
    }

    pub fn single(prior: DirichletPrior) -> Self {
        Self {
            components: vec![(1.0, prior)],
        }
    }

    pub fn components(&self) -> &[(f64, DirichletPrior)] {
        &self.components
    }

    pub fn cell_count(&self) -> usize {
        self.components[0].1.len()
    }
}

fn cell_index(alphabet: &[Word]) -> std::collections::HashMap<&[u8], usize> {
    alphabet
        .iter()
        .enumerate()
        .map(|(i, w)| (w.as_slice(), i))
        .collect()
}

/// One-pass posterior-predictive code length
/// `−Σ_k log2 (count_before_k(x_k) + α_{x_k}) / (k − 1 + Σα)` in bits.
///
/// Neumaier-compensated summation keeps the telescoping identity with the
/// closed form tight even at n ~ 10^4.
pub fn sequential_predictive_codelength(
    words: &[Word],
    alphabet: &[Word],
    prior: &DirichletPrior,
) -> Result<f64> {
    if prior.len() != alphabet.len() {
        return Err(Error::InvalidPrior {
            reason: format!(
                "prior has {} cells, alphabet {}",
                prior.len(),
                alphabet.len()
            ),
        });
    }
    let index = cell_index(alphabet);
    let a0 = prior.alpha_sum();
    let mut seen = vec![0u64; alphabet.len()];
    let mut sum = 0.0f64;
    let mut comp = 0.0f64; // Neumaier compensation
    for (k, w) in words.iter().enumerate() {
        let &ix = index
            .get(w.as_slice())
            .ok_or_else(|| Error::WordOutsideAlphabet {
                word: String::from_utf8_lossy(w).into_owned(),
            })?;
        let q = (seen[ix] as f64 + prior.alpha()[ix]) / (k as f64 + a0);
        let term = -q.log2();
        let t = sum + term;
        comp += if sum.abs() >= term.abs() {
            (sum - t) + term
        } else {
            (term - t) + sum
        };
        sum = t;
        seen[ix] += 1;
    }
    Ok(sum + comp)
}

/// Closed-form mixture code length
/// `−log2 Σ_j λ_j Γ(Σα_j)/Γ(n+Σα_j) Π_x Γ(n_x+α_{j,x})/Γ(α_{j,x})`
/// — the Dirichlet-multinomial marginal of the specific ordered sequence.
pub fn mixture_codelength_closed_form(
    counts: &WordCounts,
    alphabet: &[Word],
    prior: &MixturePrior,
) -> Result<f64> {
    if prior.cell_count() != alphabet.len() {
        return Err(Error::InvalidPrior {
            reason: format!(
                "prior has {} cells, alphabet {}",
                prior.cell_count(),
                alphabet.len()
            ),
        });
    }
    let index = cell_index(alphabet);
    let mut cells = vec![0u64; alphabet.len()];
    for (w, c) in counts.iter() {
        let &ix = index
            .get(w.as_slice())
            .ok_or_else(|| Error::WordOutsideAlphabet {
                word: String::from_utf8_lossy(w).into_owned(),
            })?;
        cells[ix] = c;
    }
    // log-sum-exp over components
    let logs: Vec<f64> = prior
        .components()
        .iter()
        .map(|(w, d)| w.log2() + d.log2_marginal(&cells))
        .collect();
    let max = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = logs.iter().map(|l| (l - max).exp2()).sum();
    Ok(-(max + sum.log2()))
}

/// Plug-in predictive code length with additive smoothing ε:
/// `−Σ log2 (count_before + ε) / (k − 1 + mε)`.
///
/// The unsmoothed plug-in (ε = 0) assigns probability zero to every first
/// occurrence, so ε must be positive; ε = 1/2 coincides with the Jeffreys
/// sequential coder.
pub fn plugin_predictive_codelength(
    words: &[Word],
    alphabet: &[Word],
    epsilon: f64,
) -> Result<f64> {
    if !(epsilon > 0.0) {
        return Err(Error::NonPositiveEpsilon { epsilon });
    }
    let prior = DirichletPrior::new(vec![epsilon; alphabet.len()])?;
    sequential_predictive_codelength(words, alphabet, &prior)
}

/// The three terms of the mixture-code expansion:
/// `(n·H(θ̂), (d/2)·log2(n/2π), log2(|I(θ̂)|^{1/2} / w(θ̂)))`.
///
/// Cells are the observed words in sorted order; the prior must have one
/// concentration parameter per observed word.  With the Jeffreys prior the
/// third term reduces to the constant `log2 ∫ |I|^{1/2}` independent of θ̂.
pub fn mixture_expansion_terms(
    counts: &WordCounts,
    prior: &DirichletPrior,
) -> Result<(f64, f64, f64)> {
    let n = counts.n();
    if n == 0 {
        return Err(Error::EmptySequence);
    }
    let m = counts.distinct();
    if prior.len() as u64 != m {
        return Err(Error::InvalidPrior {
            reason: format!("prior has {} cells, observed words {m}", prior.len()),
        });
    }
    let theta_hat = multinomial_mle(counts)?;
    let entropy_term = n as f64 * empirical_entropy_bits(counts)?;
    let d = (m - 1) as f64;
    let dim_term = (d / 2.0) * (n as f64 / (2.0 * std::f64::consts::PI)).log2();
    let half_log_fisher = 0.5 * fisher_det_multinomial(&theta_hat)?.log2();
    let log_w = prior.log2_density(theta_hat.as_slice())?;
    Ok((entropy_term, dim_term, half_log_fisher - log_w))
}

/// Standard normal CDF via erf.
fn normal_cdf(z: f64) -> f64 {
    0.5 * (1.0 + libm::erf(z / std::f64::consts::SQRT_2))
}

/// Mixture description length of continuous data under the unit-variance
/// Gaussian location family with the Jeffreys (uniform) prior on `[a, b]`:
///
/// ```text
/// L = −log2 p(x^n; x̄) + (1/2)·log2(n/2π) + log2(b − a)
///     − log2[Φ(√n(b − x̄)) − Φ(√n(a − x̄))]
/// ```
///
/// The Φ term is the exact boundary-truncation correction; away from the
/// boundary (x̄ at least a few multiples of 1/√n inside) it vanishes and the
/// regret equals [`crate::nml::gaussian_location_regret`] exactly — for this
/// family the quadratic LAN term cancels the Gaussian integrand identically,
/// leaving no o(1) remainder.
pub fn gaussian_location_mixture_bits(xs: &[f64], family: &GaussianLocationFamily) -> Result<f64> {
    if xs.is_empty() {
        return Err(Error::EmptySequence);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let sqrt_n = n.sqrt();
    let mass = normal_cdf(sqrt_n * (family.b() - mean)) - normal_cdf(sqrt_n * (family.a() - mean));
    let nll = gaussian_location_max_loglik_bits(xs)?;
    Ok(nll + 0.5 * (n / (2.0 * std::f64::consts::PI)).log2() + family.log2_fisher_integral()
        - mass.log2())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn bytes(s: &str) -> Vec<Word> {
        s.bytes().map(|b| vec![b]).collect()
    }

    fn alphabet(s: &str) -> Vec<Word> {
        s.bytes().map(|b| vec![b]).collect()
    }

    #[test]
    fn kt_first_symbol_is_uniform() {
        let l = sequential_predictive_codelength(
            &bytes("0"),
            &alphabet("01"),
            &DirichletPrior::jeffreys(2),
        )
        .unwrap();
        assert_abs_diff_eq!(l, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn kt_hand_values() {
        let l = sequential_predictive_codelength(
            &bytes("01"),
            &alphabet("01"),
            &DirichletPrior::jeffreys(2),
        )
        .unwrap();
        assert_abs_diff_eq!(l, 3.0, epsilon = 1e-12);

        // "0011": 1/2 · 3/4 · 1/6 · 3/8 = 3/128
        let l = sequential_predictive_codelength(
            &bytes("0011"),
            &alphabet("01"),
            &DirichletPrior::jeffreys(2),
        )
        .unwrap();
        assert_abs_diff_eq!(l, 7.0 - 3.0f64.log2(), epsilon = 1e-12);
    }

    #[test]
    fn word_outside_alphabet_is_error() {
        let r = sequential_predictive_codelength(
            &bytes("02"),
            &alphabet("01"),
            &DirichletPrior::jeffreys(2),
        );
        assert!(matches!(r, Err(Error::WordOutsideAlphabet { .. })));
    }

    #[test]
    fn closed_form_matches_sequential_on_0011() {
        let counts = WordCounts::from_words(bytes("0011"));
        let l = mixture_codelength_closed_form(
            &counts,
            &alphabet("01"),
            &MixturePrior::single(DirichletPrior::jeffreys(2)),
        )
        .unwrap();
        assert_abs_diff_eq!(l, 7.0 - 3.0f64.log2(), epsilon = 1e-12);
    }

    #[test]
    fn uniform_prior_all_zeros_marginal() {
        // all-zeros of length n under Dirichlet(1,1): marginal 1/(n+1)
        for n in [1usize, 5, 100] {
            let counts = WordCounts::from_words(vec![vec![b'0']; n]);
            let l = mixture_codelength_closed_form(
                &counts,
                &alphabet("01"),
                &MixturePrior::single(DirichletPrior::uniform(2)),
            )
            .unwrap();
            assert_abs_diff_eq!(l, ((n + 1) as f64).log2(), epsilon = 1e-9);
        }
    }

    #[test]
    fn duplicate_components_degenerate_to_one() {
        let counts = WordCounts::from_words(bytes("0010111"));
        let single = mixture_codelength_closed_form(
            &counts,
            &alphabet("01"),
            &MixturePrior::single(DirichletPrior::jeffreys(2)),
        )
        .unwrap();
        let mixed = MixturePrior::new(vec![
            (0.3, DirichletPrior::jeffreys(2)),
            (0.7, DirichletPrior::jeffreys(2)),
        ])
        .unwrap();
        let two = mixture_codelength_closed_form(&counts, &alphabet("01"), &mixed).unwrap();
        assert_abs_diff_eq!(single, two, epsilon = 1e-12);
    }

    #[test]
    fn plugin_kt_coincidence_and_laplace() {
        let l = plugin_predictive_codelength(&bytes("0011"), &alphabet("01"), 0.5).unwrap();
        assert_abs_diff_eq!(l, 7.0 - 3.0f64.log2(), epsilon = 1e-12);

        let l = plugin_predictive_codelength(&bytes("01"), &alphabet("01"), 1.0).unwrap();
        assert_abs_diff_eq!(l, 6.0f64.log2(), epsilon = 1e-12);

        let l = plugin_predictive_codelength(&bytes("0000"), &alphabet("0"), 1.0).unwrap();
        assert_abs_diff_eq!(l, 0.0, epsilon = 1e-12);

        assert!(matches!(
            plugin_predictive_codelength(&bytes("0"), &alphabet("01"), 0.0),
            Err(Error::NonPositiveEpsilon { .. })
        ));
    }

    #[test]
    fn jeffreys_expansion_third_term_is_constant() {
        // third term must equal log2 ∫|I|^{1/2} for any interior θ̂
        for pairs in [[60u64, 40u64], [10, 90], [500, 500]] {
            let mut wc = WordCounts::new();
            for _ in 0..pairs[0] {
                wc.add(b"0".to_vec());
            }
            for _ in 0..pairs[1] {
                wc.add(b"1".to_vec());
            }
            let (_, _, third) = mixture_expansion_terms(&wc, &DirichletPrior::jeffreys(2)).unwrap();
            assert_abs_diff_eq!(
                third,
                crate::expfam::jeffreys_log_integral_multinomial(2),
                epsilon = 1e-9
            );
        }
    }

    #[test]
    fn expansion_approximates_closed_form_bernoulli() {
        // n = 10^4 balanced: |closed form − Σ terms| ≤ 0.05
        let n = 10_000usize;
        let mut wc = WordCounts::new();
        for _ in 0..n / 2 {
            wc.add(b"0".to_vec());
        }
        for _ in 0..n / 2 {
            wc.add(b"1".to_vec());
        }
        let closed = mixture_codelength_closed_form(
            &wc,
            &alphabet("01"),
            &MixturePrior::single(DirichletPrior::jeffreys(2)),
        )
        .unwrap();
        let (e, d, f) = mixture_expansion_terms(&wc, &DirichletPrior::jeffreys(2)).unwrap();
        assert!((closed - (e + d + f)).abs() <= 0.05);
    }

    #[test]
    fn gaussian_mixture_truncation_identity() {
        // deterministic grid data centred at 0 inside [-1, 1]
        let n = 100usize;
        let xs: Vec<f64> = (0..n).map(|i| ((i as f64) - 49.5) / 29.0).collect();
        let fam = GaussianLocationFamily::new(-1.0, 1.0).unwrap();
        let l = gaussian_location_mixture_bits(&xs, &fam).unwrap();
        let nll = gaussian_location_max_loglik_bits(&xs).unwrap();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let rn = (n as f64).sqrt();
        let correction =
            -(normal_cdf(rn * (1.0 - mean)) - normal_cdf(rn * (-1.0 - mean))).log2();
        let regret = crate::nml::gaussian_location_regret(n as u64, &fam);
        assert_abs_diff_eq!(l - nll, regret + correction, epsilon = 1e-9);
        // far from the boundary the correction itself is negligible
        assert!(correction.abs() < 1e-6);
    }

    proptest! {
        #[test]
        fn exchangeability(bits in proptest::collection::vec(0u8..3, 1..60), seed in 0u64..1000) {
            // mixture length depends on counts only, not order
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let words: Vec<Word> = bits.iter().map(|&b| vec![b + b'0']).collect();
            let mut shuffled = words.clone();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            shuffled.shuffle(&mut rng);
            let ab = alphabet("012");
            let prior = DirichletPrior::jeffreys(3);
            let l1 = sequential_predictive_codelength(&words, &ab, &prior).unwrap();
            let l2 = sequential_predictive_codelength(&shuffled, &ab, &prior).unwrap();
            prop_assert!((l1 - l2).abs() < 1e-9);
        }

        #[test]
        fn telescoping_identity(bits in proptest::collection::vec(0u8..4, 1..200)) {
            let words: Vec<Word> = bits.iter().map(|&b| vec![b + b'0']).collect();
            let ab = alphabet("0123");
            let prior = DirichletPrior::jeffreys(4);
            let seq = sequential_predictive_codelength(&words, &ab, &prior).unwrap();
            let counts = WordCounts::from_words(words);
            let closed = mixture_codelength_closed_form(
                &counts, &ab, &MixturePrior::single(prior)).unwrap();
            prop_assert!((seq - closed).abs() < 1e-9);
        }
    }
}
