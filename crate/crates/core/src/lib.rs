//! Empirical lossless-compression bounds of individual symbol sequences.
//!
//! A parsing model turns a sequence into words; the observed word counts
//! yield a multinomial fit whose NML code length
//!
//! ```text
//! L = n·H(θ̂) + (d/2)·log2 n − d/2 − log2 Γ((d+1)/2) + (1/2)·log2 π
//! ```
//!
//! (d = distinct words − 1) is the sequence-specific compression bound under
//! that dictionary.  Comparing bounds across parsings is MDL model
//! selection; rates above 1 mark a sequence as incompressible under that
//! model.  The crate also provides the exact Shtarkov normalizer as a
//! brute-force oracle, sequential/closed-form Jeffreys-mixture (KT) code
//! lengths, an exactly solvable Gaussian location case, an LZ78 baseline
//! with address+symbol accounting, seeded simulation, and permutation-null
//! studies.

pub mod error;
pub mod expfam;
pub mod ingest;
pub mod lz78;
pub mod nml;
pub mod parsing;
pub mod predictive;
pub mod randomize;

pub use error::{Error, Result};
pub use expfam::{GaussianLocationFamily, ProbVector, Word, WordCounts};
pub use ingest::{FastaRecord, OutputFormat, ReportPayload};
pub use lz78::Lz78Parse;
pub use nml::{CodeLengthReport, RedundancyReport};
pub use parsing::{ParsingModel, SymbolSequence};
pub use predictive::{DirichletPrior, MixturePrior};
pub use randomize::{PermutationSummary, Statistic, SummaryCell};
