//! Dictionary-inducing parsers: fixed-length k-mers with phase, codon
//! translation, and word counting.
//!
//! Trailing partial words are discarded, never padded, so the word count of
//! a length-L sequence under (k, p) is exactly `floor((L − p) / k)`.

use crate::error::{Error, Result};
use crate::expfam::{Word, WordCounts};

pub const NUCLEOTIDES: &[u8; 4] = b"ACGT";

/// A finite-alphabet symbol sequence with its declared alphabet.
///
/// The alphabet may be wider than the observed symbols (declaring {A,C,G,T}
/// for a sequence missing one base keeps raw bits at 2/symbol).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolSequence {
    symbols: Vec<u8>,
    alphabet: Vec<u8>,
}

impl SymbolSequence {
    /// Sequence with an explicitly declared alphabet (sorted, deduplicated).
    pub fn with_alphabet(symbols: Vec<u8>, alphabet: &[u8]) -> Result<Self> {
        let mut ab = alphabet.to_vec();
        ab.sort_unstable();
        ab.dedup();
        if ab.is_empty() {
            return Err(Error::EmptySequence);
        }
        for (offset, &s) in symbols.iter().enumerate() {
            if !ab.contains(&s) {
                return Err(Error::SymbolOutsideAlphabet {
                    symbol: s as char,
                    offset,
                });
            }
        }
        Ok(Self {
            symbols,
            alphabet: ab,
        })
    }

    /// Sequence whose alphabet is the sorted distinct symbols observed.
    pub fn infer_alphabet(symbols: Vec<u8>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::EmptySequence);
        }
        let mut ab = symbols.clone();
        ab.sort_unstable();
        ab.dedup();
        Ok(Self {
            symbols,
            alphabet: ab,
        })
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn alphabet(&self) -> &[u8] {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn bits_per_symbol(&self) -> f64 {
        (self.alphabet.len() as f64).log2()
    }

    /// Raw length in bits: n symbols × log2 |alphabet|.
    pub fn raw_bits(&self) -> f64 {
        self.len() as f64 * self.bits_per_symbol()
    }

    pub fn is_nucleotide(&self) -> bool {
        self.alphabet.iter().all(|b| NUCLEOTIDES.contains(b))
    }
}

/// A rule mapping a symbol sequence to a word sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParsingModel {
    /// Symbol-by-symbol coding (label "1"); same parse as fixed k=1, p=0.
    Identity,
    /// Non-overlapping k-mers from offset `phase`.
    Fixed { k: usize, phase: usize },
    /// Codon-to-amino-acid translation in reading frame `phase`.
    AminoAcid { phase: usize },
}

impl ParsingModel {
    pub fn fixed(k: usize, phase: usize) -> Result<Self> {
        if k < 1 || phase >= k {
            return Err(Error::InvalidParsing {
                reason: format!("need k >= 1 and phase < k, got k={k} phase={phase}"),
            });
        }
        Ok(ParsingModel::Fixed { k, phase })
    }

    pub fn amino_acid(phase: usize) -> Result<Self> {
        if phase >= 3 {
            return Err(Error::InvalidParsing {
                reason: format!("amino-acid phase must be < 3, got {phase}"),
            });
        }
        Ok(ParsingModel::AminoAcid { phase })
    }

    /// Canonical label: "1", "k.p", or "a.a." (with phase suffix when
    /// nonzero).
    pub fn label(&self) -> String {
        match self {
            ParsingModel::Identity => "1".into(),
            ParsingModel::Fixed { k, phase } => {
                if *k == 1 {
                    "1".into()
                } else {
                    format!("{k}.{phase}")
                }
            }
            ParsingModel::AminoAcid { phase } => {
                if *phase == 0 {
                    "a.a.".into()
                } else {
                    format!("a.a.{phase}")
                }
            }
        }
    }

    /// Parse a model label.  Accepted forms: "1", "K.P" (e.g. "3.0"), bare
    /// "K" (phase 0), "aa", "a.a.", "a. a.", "aa.P".
    pub fn parse_label(label: &str) -> Result<Self> {
        let norm = label.trim();
        if norm == "1" {
            return Ok(ParsingModel::Identity);
        }
        let squashed: String = norm
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect::<String>()
            .to_ascii_lowercase();
        if squashed == "aa" || squashed == "a.a." || squashed == "a.a" {
            return ParsingModel::amino_acid(0);
        }
        for p in 0..3 {
            if squashed == format!("aa.{p}") || squashed == format!("a.a.{p}") {
                return ParsingModel::amino_acid(p);
            }
        }
        if let Some((ks, ps)) = norm.split_once('.') {
            if let (Ok(k), Ok(p)) = (ks.parse::<usize>(), ps.parse::<usize>()) {
                return ParsingModel::fixed(k, p);
            }
        } else if let Ok(k) = norm.parse::<usize>() {
            return ParsingModel::fixed(k, 0);
        }
        Err(Error::UnknownModel {
            label: label.to_string(),
        })
    }

    /// Apply the model to a sequence.
    pub fn words(&self, seq: &SymbolSequence) -> Result<Vec<Word>> {
        match *self {
            ParsingModel::Identity => parse_fixed(seq, 1, 0),
            ParsingModel::Fixed { k, phase } => parse_fixed(seq, k, phase),
            ParsingModel::AminoAcid { phase } => translate_codons(seq, phase),
        }
    }
}

impl std::fmt::Display for ParsingModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.label())
    }
}

/// Non-overlapping k-mers starting at offset `phase`; the trailing remainder
/// (fewer than k symbols) is discarded.  An empty word list is a valid
/// outcome, not an error.
pub fn parse_fixed(seq: &SymbolSequence, k: usize, phase: usize) -> Result<Vec<Word>> {
    if k < 1 || phase >= k {
        return Err(Error::InvalidParsing {
            reason: format!("need k >= 1 and phase < k, got k={k} phase={phase}"),
        });
    }
    let s = seq.symbols();
    if s.len() <= phase {
        return Ok(Vec::new());
    }
    Ok(s[phase..]
        .chunks_exact(k)
        .map(|w| w.to_vec())
        .collect())
}

/// The standard genetic code (NCBI translation table 1); stop codons map to
/// b'*' so a coding sequence can reach 21 distinct amino-acid words.
pub fn codon_to_amino(codon: &[u8]) -> Result<u8> {
    fn base_index(b: u8) -> Option<usize> {
        match b {
            b'T' => Some(0),
            b'C' => Some(1),
            b'A' => Some(2),
            b'G' => Some(3),
            _ => None,
        }
    }
    // indexed by TCAG digits, the conventional codon-table layout
    const TABLE: &[u8; 64] = b"FFLLSSSSYY**CC*WLLLLPPPPHHQQRRRRIIIMTTTTNNKKSSRRVVVVAAAADDEEGGGG";
    let (a, b, c) = (codon[0], codon[1], codon[2]);
    match (base_index(a), base_index(b), base_index(c)) {
        (Some(i), Some(j), Some(k)) => Ok(TABLE[16 * i + 4 * j + k]),
        _ => Err(Error::NotNucleotide),
    }
}

/// Translate in-frame codons to one-letter amino acids (stop = '*').
pub fn translate_codons(seq: &SymbolSequence, phase: usize) -> Result<Vec<Word>> {
    if !seq.is_nucleotide() {
        return Err(Error::NotNucleotide);
    }
    if phase >= 3 {
        return Err(Error::InvalidParsing {
            reason: format!("amino-acid phase must be < 3, got {phase}"),
        });
    }
    let s = seq.symbols();
    if s.len() <= phase {
        return Ok(Vec::new());
    }
    s[phase..]
        .chunks_exact(3)
        .map(|codon| codon_to_amino(codon).map(|aa| vec![aa]))
        .collect()
}

/// Count words; n = input length, m = distinct words.
pub fn count_words(words: &[Word]) -> WordCounts {
    WordCounts::from_words(words.iter().cloned())
}
