use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty sequence")]
    EmptySequence,

    #[error("need at least {min} words, got {n}")]
    TooFewWords { n: u64, min: u64 },

    #[error("boundary parameter: cell {index} has zero probability")]
    BoundaryParameter { index: usize },

    #[error("invalid probability vector: {reason}")]
    InvalidProbVector { reason: String },

    #[error("invalid prior: {reason}")]
    InvalidPrior { reason: String },

    #[error(
        "instance too large for exact oracle: ~{compositions:.3e} count \
         compositions exceeds the {guard:.1e} guard"
    )]
    TooLargeForExact { compositions: f64, guard: f64 },

    #[error("degenerate interval: [{a}, {b}]")]
    DegenerateInterval { a: f64, b: f64 },

    #[error("theta0 has no support for observed word {word:?} (cell {index})")]
    MissingSupport { word: String, index: usize },

    #[error("word {word:?} is not in the declared alphabet")]
    WordOutsideAlphabet { word: String },

    #[error("smoothing epsilon must be positive, got {epsilon}")]
    NonPositiveEpsilon { epsilon: f64 },

    #[error("symbol {symbol:?} at offset {offset} is not in the alphabet")]
    SymbolOutsideAlphabet { symbol: char, offset: usize },

    #[error("ambiguous nucleotide {symbol:?} at offset {offset}; rerun with --skip-ambiguous to drop such symbols")]
    AmbiguousSymbol { symbol: char, offset: usize },

    #[error("invalid parsing parameters: {reason}")]
    InvalidParsing { reason: String },

    #[error("amino-acid model requires the nucleotide alphabet {{A,C,G,T}}")]
    NotNucleotide,

    #[error("unknown model label {label:?}")]
    UnknownModel { label: String },

    #[error("alphabet/probability length mismatch: {alphabet} symbols vs {probs} probabilities")]
    LengthMismatch { alphabet: usize, probs: usize },

    #[error("FASTA parse error at line {line}: {reason}")]
    FastaParse { line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
