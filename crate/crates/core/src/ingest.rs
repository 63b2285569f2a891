//! Sequence input (FASTA, raw text) and machine-readable report output.
//!
//! Input is whitespace-stripped and uppercased before alphabet validation.
//! IUPAC ambiguity codes are a hard error by default; callers can opt into
//! dropping them (with a count of how many were dropped) — silent handling
//! would perturb every downstream count invisibly.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::nml::CodeLengthReport;
use crate::parsing::SymbolSequence;
use crate::randomize::{PermutationSummary, Statistic};

/// One FASTA record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FastaRecord {
    pub identifier: String,
    pub description: String,
    pub sequence: String,
}

/// Parse FASTA text: records start at '>' header lines, sequence lines may
/// wrap arbitrarily.
pub fn read_fasta(reader: impl BufRead) -> Result<Vec<FastaRecord>> {
    let mut records: Vec<FastaRecord> = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(header) = trimmed.strip_prefix('>') {
            if let Some(last) = records.last() {
                if last.sequence.is_empty() {
                    return Err(Error::FastaParse {
                        line: lineno + 1,
                        reason: format!("record {:?} has no sequence", last.identifier),
                    });
                }
            }
            let mut parts = header.splitn(2, char::is_whitespace);
            let identifier = parts.next().unwrap_or("").to_string();
            if identifier.is_empty() {
                return Err(Error::FastaParse {
                    line: lineno + 1,
                    reason: "empty record identifier".into(),
                });
            }
            records.push(FastaRecord {
                identifier,
                description: parts.next().unwrap_or("").trim().to_string(),
                sequence: String::new(),
            });
        } else {
            match records.last_mut() {
                Some(rec) => rec
                    .sequence
                    .push_str(&trimmed.split_whitespace().collect::<String>()),
                None => {
                    return Err(Error::FastaParse {
                        line: lineno + 1,
                        reason: "sequence data before any '>' header".into(),
                    })
                }
            }
        }
    }
    match records.last() {
        None => Err(Error::FastaParse {
            line: 0,
            reason: "no FASTA records found".into(),
        }),
        Some(last) if last.sequence.is_empty() => Err(Error::FastaParse {
            line: 0,
            reason: format!("record {:?} has no sequence", last.identifier),
        }),
        _ => Ok(records),
    }
}

/// Write one record back out (60-column wrapped).
pub fn write_fasta(record: &FastaRecord, mut w: impl Write) -> Result<()> {
    if record.description.is_empty() {
        writeln!(w, ">{}", record.identifier)?;
    } else {
        writeln!(w, ">{} {}", record.identifier, record.description)?;
    }
    for chunk in record.sequence.as_bytes().chunks(60) {
        w.write_all(chunk)?;
        writeln!(w)?;
    }
    Ok(())
}

const AMBIGUITY_CODES: &[u8] = b"NRYSWKMBDHV";

/// Turn raw symbol text into a [`SymbolSequence`]: strips whitespace,
/// uppercases, validates against the declared alphabet (or infers a sorted
/// one).  Returns the count of ambiguity codes dropped when
/// `skip_ambiguous` is set; otherwise the first ambiguity code among
/// nucleotide data is a hard error naming offset and symbol.
pub fn symbols_from_text(
    text: &str,
    declared_alphabet: Option<&[u8]>,
    skip_ambiguous: bool,
) -> Result<(SymbolSequence, usize)> {
    let mut symbols = Vec::with_capacity(text.len());
    let mut dropped = 0usize;
    let nucleotide_context = declared_alphabet.map_or(true, |a| {
        a.iter().all(|b| b"ACGT".contains(&b.to_ascii_uppercase()))
    });
    let mut offset = 0usize;
    for ch in text.chars() {
        if ch.is_whitespace() {
            continue;
        }
        let b = (ch as u8).to_ascii_uppercase();
        if nucleotide_context && AMBIGUITY_CODES.contains(&b) {
            if skip_ambiguous {
                dropped += 1;
                offset += 1;
                continue;
            }
            return Err(Error::AmbiguousSymbol {
                symbol: b as char,
                offset,
            });
        }
        symbols.push(b);
        offset += 1;
    }
    let seq = match declared_alphabet {
        Some(ab) => {
            let upper: Vec<u8> = ab.iter().map(|b| b.to_ascii_uppercase()).collect();
            SymbolSequence::with_alphabet(symbols, &upper)?
        }
        None => SymbolSequence::infer_alphabet(symbols)?,
    };
    Ok((seq, dropped))
}

/// Read a raw (non-FASTA) sequence file.
pub fn read_raw(
    mut reader: impl BufRead,
    declared_alphabet: Option<&[u8]>,
    skip_ambiguous: bool,
) -> Result<(SymbolSequence, usize)> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    symbols_from_text(&text, declared_alphabet, skip_ambiguous)
}

/// Output format for [`write_report`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Tsv,
    Json,
}

/// What to render.
pub enum ReportPayload<'a> {
    CodeLengths(&'a [CodeLengthReport]),
    Permutation(&'a PermutationSummary),
}

const TSV_COLUMNS: &str =
    "model\tn_words\tdict_size\tentropy_bits_per_word\tentropy_term_bits\tcomplexity_bits\ttotal_bits\traw_bits\trate";

/// Render reports.  TSV uses 4-decimal fixed formatting (matching table
/// precision); JSON carries full double precision.
pub fn write_report(
    payload: ReportPayload<'_>,
    format: OutputFormat,
    mut w: impl Write,
) -> Result<()> {
    match (payload, format) {
        (ReportPayload::CodeLengths(reports), OutputFormat::Tsv) => {
            writeln!(w, "{TSV_COLUMNS}")?;
            for r in reports {
                writeln!(
                    w,
                    "{}\t{}\t{}\t{:.4}\t{:.4}\t{:.4}\t{:.4}\t{:.4}\t{:.4}",
                    r.model_label,
                    r.n_words,
                    r.dict_size_m,
                    r.entropy_bits_per_word,
                    r.entropy_term_bits,
                    r.complexity_bits,
                    r.total_bits,
                    r.raw_bits,
                    r.rate
                )?;
            }
        }
        (ReportPayload::CodeLengths(reports), OutputFormat::Json) => {
            serde_json::to_writer_pretty(&mut w, reports).map_err(std::io::Error::from)?;
            writeln!(w)?;
        }
        (ReportPayload::Permutation(summary), OutputFormat::Tsv) => {
            write!(w, "statistic\tmeasure")?;
            for m in &summary.models {
                write!(w, "\t{m}")?;
            }
            writeln!(w)?;
            for stat in Statistic::ALL {
                for measure in ["mean", "sd", "lower_quantile", "upper_quantile"] {
                    write!(w, "{}\t{}", stat.label(), measure)?;
                    for m in &summary.models {
                        let cell = summary
                            .cell(m, stat)
                            .expect("summary has a cell per model/statistic");
                        let v = match measure {
                            "mean" => cell.mean,
                            "sd" => cell.sd,
                            "lower_quantile" => cell.lower_quantile,
                            _ => cell.upper_quantile,
                        };
                        write!(w, "\t{v:.6}")?;
                    }
                    writeln!(w)?;
                }
            }
        }
        (ReportPayload::Permutation(summary), OutputFormat::Json) => {
            serde_json::to_writer_pretty(&mut w, summary).map_err(std::io::Error::from)?;
            writeln!(w)?;
        }
    }
    Ok(())
}
