//! Normalized-maximum-likelihood code lengths.
//!
//! The multinomial NML length over a dictionary of `m` observed words
//! (`d = m − 1`) is
//!
//! ```text
//! L = n·H(θ̂) + (d/2)·log2 n − d/2 − log2 Γ((d+1)/2) + (1/2)·log2 π
//! ```
//!
//! which is algebraically identical to the generic expansion
//! `n·H(θ̂) + (d/2)·log2(n/2π) + log2 ∫ |I|^{1/2}` with the multinomial
//! Jeffreys integral.  [`shtarkov_lognormalizer_exact`] provides the exact
//! (non-asymptotic) normalizer by brute-force enumeration of count
//! compositions and serves as the oracle the asymptotic formula is tested
//! against.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expfam::{
    empirical_entropy_bits, log2_gamma, GaussianLocationFamily, ProbVector, WordCounts, LN_2,
};

/// Per-model code-length breakdown.
///
/// `total_bits = entropy_term_bits + complexity_bits` and
/// `rate = total_bits / raw_bits`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeLengthReport {
    pub model_label: String,
    pub n_words: u64,
    pub dict_size_m: u64,
    pub entropy_bits_per_word: f64,
    pub entropy_term_bits: f64,
    pub complexity_bits: f64,
    pub total_bits: f64,
    pub raw_bits: f64,
    pub rate: f64,
    /// Set when the dictionary is large relative to the word count
    /// (m > n/5); the asymptotic formula is then a rough guide only.
    #[serde(default)]
    pub small_sample_warning: bool,
}

impl CodeLengthReport {
    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.model_label = label.into();
        self
    }
}

/// The non-entropy terms of the multinomial NML length:
/// `(d/2)·log2 n − d/2 − log2 Γ((d+1)/2) + (1/2)·log2 π` with `d = m − 1`.
///
/// Exactly zero for m = 1 (the Γ(1/2) term cancels the π term).
pub fn multinomial_complexity_bits(n: u64, m: u64) -> f64 {
    if m <= 1 {
        return 0.0;
    }
    let d = (m - 1) as f64;
    (d / 2.0) * (n as f64).log2() - d / 2.0 - log2_gamma((d + 1.0) / 2.0)
        + 0.5 * std::f64::consts::PI.log2()
}

/// Multinomial NML code length for observed word counts, reported against
/// `raw_bits` of raw sequence length.
pub fn nml_codelength_multinomial(counts: &WordCounts, raw_bits: f64) -> Result<CodeLengthReport> {
    let n = counts.n();
    if n == 0 {
        return Err(Error::EmptySequence);
    }
    let m = counts.distinct();
    let h = empirical_entropy_bits(counts)?;
    let entropy_term = n as f64 * h;
    let complexity = multinomial_complexity_bits(n, m);
    let total = entropy_term + complexity;
    Ok(CodeLengthReport {
        model_label: String::new(),
        n_words: n,
        dict_size_m: m,
        entropy_bits_per_word: h,
        entropy_term_bits: entropy_term,
        complexity_bits: complexity,
        total_bits: total,
        raw_bits,
        rate: total / raw_bits,
        small_sample_warning: (m as f64) > (n as f64) / 5.0,
    })
}

/// Generic asymptotic NML length:
/// `entropy_term + (d/2)·log2(n/2π) + log2 ∫ |I(θ)|^{1/2} dθ`.
pub fn nml_codelength_asymptotic(
    d: u64,
    n: u64,
    entropy_term_bits: f64,
    log_jeffreys_integral_bits: f64,
) -> f64 {
    entropy_term_bits
        + (d as f64 / 2.0) * (n as f64 / (2.0 * std::f64::consts::PI)).log2()
        + log_jeffreys_integral_bits
}

const COMPOSITION_GUARD: f64 = 1e8;

/// Exact Shtarkov log-normalizer
/// `log2 Σ_{x^n} p(x^n; θ̂(x^n))` for an `m`-ary alphabet of length `n`,
/// by enumerating count compositions weighted with multinomial coefficients
/// (reduces the m^n sequence sum to C(n+m−1, m−1) terms).  Streaming
/// log-sum-exp in a fixed enumeration order keeps the result deterministic.
pub fn shtarkov_lognormalizer_exact(m: u64, n: u64) -> Result<f64> {
    if m == 0 || n == 0 {
        return Err(Error::EmptySequence);
    }
    if m == 1 {
        return Ok(0.0);
    }
    let compositions = (libm::lgamma((n + m) as f64)
        - libm::lgamma((n + 1) as f64)
        - libm::lgamma(m as f64))
    .exp();
    if compositions > COMPOSITION_GUARD {
        return Err(Error::TooLargeForExact {
            compositions,
            guard: COMPOSITION_GUARD,
        });
    }

    let nf = n as f64;
    let lgfact = |x: u64| libm::lgamma(x as f64 + 1.0);
    let xlnx = |x: u64| {
        if x == 0 {
            0.0
        } else {
            x as f64 * (x as f64).ln()
        }
    };
    // ln term(c) = ln n! − Σ ln c_k! + Σ c_k ln c_k − n ln n
    let base = lgfact(n) - nf * nf.ln();

    let mut counts = vec![0u64; m as usize];
    counts[0] = n;
    // incremental Σ(−ln c_k! + c_k ln c_k); only cells 0, i, i+1 change per step
    let mut cell_sum = -lgfact(n) + xlnx(n);
    // streaming log-sum-exp
    let mut max_ln = f64::NEG_INFINITY;
    let mut sum_exp = 0.0f64;
    loop {
        let ln_term = base + cell_sum;
        if ln_term > max_ln {
            sum_exp = sum_exp * (max_ln - ln_term).exp() + 1.0;
            max_ln = ln_term;
        } else {
            sum_exp += (ln_term - max_ln).exp();
        }
        // next composition: move one unit from the first nonempty cell
        // (before the last) to its right, dumping the rest back into cell 0
        let mut i = 0usize;
        while i < m as usize - 1 && counts[i] == 0 {
            i += 1;
        }
        if i == m as usize - 1 {
            break;
        }
        let t = counts[i];
        cell_sum -= -lgfact(counts[i]) + xlnx(counts[i]);
        cell_sum -= -lgfact(counts[i + 1]) + xlnx(counts[i + 1]);
        counts[i] = 0;
        counts[i + 1] += 1;
        cell_sum += -lgfact(counts[i + 1]) + xlnx(counts[i + 1]);
        // cell 0 holds zero at this point (either i == 0 and it was just
        // emptied, or i was the first nonempty cell), so no contribution to
        // remove before refilling it
        counts[0] = t - 1;
        cell_sum += -lgfact(counts[0]) + xlnx(counts[0]);
    }
    Ok((max_ln + sum_exp.ln()) / LN_2)
}

/// Regret of the Gaussian location family restricted to `[a, b]`:
/// `(1/2)·log2(n/2π) + log2(b − a)`.
///
/// For this family the expansion is exact up to the boundary-truncation
/// correction `−log2[Φ(√n(b−x̄)) − Φ(√n(a−x̄))]`: the LAN quadratic around
/// the MLE cancels the Gaussian integrand identically, so no o(1) term
/// remains (see [`crate::predictive::gaussian_location_mixture_bits`]).
pub fn gaussian_location_regret(n: u64, family: &GaussianLocationFamily) -> f64 {
    0.5 * (n as f64 / (2.0 * std::f64::consts::PI)).log2() + family.log2_fisher_integral()
}

/// Redundancy diagnostics of the realized NML length against a hypothetical
/// source `θ0`.
#[derive(Debug, Clone, PartialEq)]
pub struct RedundancyReport {
    pub theta0: ProbVector,
    pub n: u64,
    /// n·H(θ̂), the maximized-likelihood term.
    pub nh_hat_bits: f64,
    /// −Σ n_k log2 θ0_k, the realized code length under θ0.
    pub nloglik_theta0_bits: f64,
    /// (nloglik_theta0 − n·H(θ̂)) / log2 log2 n.
    pub cn_realized: f64,
    /// Total NML bits − n·H(θ0).
    pub r_nml_bits: f64,
}

/// Compare the realized NML length against coding with a fixed `theta0`
/// (cells in sorted-word order, matching [`multinomial_mle`]).
pub fn redundancy_report(counts: &WordCounts, theta0: &ProbVector) -> Result<RedundancyReport> {
    let n = counts.n();
    if n < 3 {
        return Err(Error::TooFewWords { n, min: 3 });
    }
    let m = counts.distinct() as usize;
    if theta0.len() != m {
        return Err(Error::InvalidProbVector {
            reason: format!("theta0 has {} cells, observed words {}", theta0.len(), m),
        });
    }
    for (index, ((word, _), &p)) in counts.iter().zip(theta0.as_slice()).enumerate() {
        if p <= 0.0 {
            return Err(Error::MissingSupport {
                word: String::from_utf8_lossy(word).into_owned(),
                index,
            });
        }
    }
    let nh_hat = n as f64 * empirical_entropy_bits(counts)?;
    let nloglik: f64 = counts
        .iter()
        .zip(theta0.as_slice())
        .map(|((_, c), &p)| -(c as f64) * p.log2())
        .sum();
    let loglog = (n as f64).log2().log2();
    let total = nh_hat + multinomial_complexity_bits(n, m as u64);
    Ok(RedundancyReport {
        theta0: theta0.clone(),
        n,
        nh_hat_bits: nh_hat,
        nloglik_theta0_bits: nloglik,
        cn_realized: (nloglik - nh_hat) / loglog,
        r_nml_bits: total - n as f64 * theta0.entropy_bits(),
    })
}
