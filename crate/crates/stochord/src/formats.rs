//! Distribution, standard-pair, function and vector files.
//!
//! Distributions are JSON (`{"atoms": [[value, mass], ...]}` or
//! `{"samples": [v, ...]}`) or CSV (a `value,mass` table with header, or a
//! single column of samples). The format is taken from the file extension,
//! falling back to sniffing the first non-blank character.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use stochord_core::majorize::RealVector;
use stochord_core::{Continuity, DiscreteCdf, PiecewiseLinear, StandardPair, Tail, Tolerance};

use crate::error::{CliError, CliResult};

/// Serialization format of a file.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    /// JSON.
    Json,
    /// Comma-separated values.
    Csv,
}

impl Format {
    /// Format implied by the extension, or by the content when the
    /// extension is missing or unknown.
    pub fn detect(path: &Path, text: &str) -> Format {
        match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
            Some("json") => Format::Json,
            Some("csv") => Format::Csv,
            _ if matches!(text.trim_start().chars().next(), Some('{') | Some('[')) => Format::Json,
            _ => Format::Csv,
        }
    }
}

/// Contents of a distribution file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum DistributionFile {
    /// Explicit `(value, mass)` atoms.
    Atoms(Vec<(f64, f64)>),
    /// Raw samples, each with mass `1/n`.
    Samples(Vec<f64>),
}

impl DistributionFile {
    /// Parses `text` in the given format.
    pub fn parse(text: &str, format: Format) -> CliResult<Self> {
        match format {
            Format::Json => serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string())),
            Format::Csv => parse_distribution_csv(text),
        }
    }

    /// Serializes in the given format.
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string(self).expect("plain data serializes"),
            Format::Csv => {
                let mut out = String::new();
                match self {
                    DistributionFile::Atoms(atoms) => {
                        out.push_str("value,mass\n");
                        for (v, m) in atoms {
                            out.push_str(&format!("{v},{m}\n"));
                        }
                    }
                    DistributionFile::Samples(samples) => {
                        for v in samples {
                            out.push_str(&format!("{v}\n"));
                        }
                    }
                }
                out
            }
        }
    }

    /// The distribution it describes.
    pub fn to_cdf(&self) -> CliResult<DiscreteCdf> {
        Ok(match self {
            DistributionFile::Atoms(atoms) => DiscreteCdf::from_atoms(atoms.iter().copied())?,
            DistributionFile::Samples(samples) => DiscreteCdf::from_samples(samples)?,
        })
    }

    /// Atom form of a distribution.
    pub fn from_cdf(f: &DiscreteCdf) -> Self {
        DistributionFile::Atoms(f.atoms().iter().map(|a| (a.location, a.mass)).collect())
    }
}

fn number(field: &str, row: usize) -> CliResult<f64> {
    field
        .trim()
        .parse::<f64>()
        .map_err(|_| CliError::Parse(format!("row {row}: `{}` is not a number", field.trim())))
}

fn csv_rows(text: &str) -> CliResult<Vec<Vec<String>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| CliError::Parse(e.to_string()))?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        rows.push(rec.iter().map(str::to_owned).collect());
    }
    Ok(rows)
}

fn is_header(row: &[String]) -> bool {
    row.iter().any(|f| f.parse::<f64>().is_err())
}

fn parse_distribution_csv(text: &str) -> CliResult<DistributionFile> {
    let rows = csv_rows(text)?;
    let Some(first) = rows.first() else {
        return Err(CliError::Parse("empty file".into()));
    };
    let width = first.len();
    let body = if is_header(first) { &rows[1..] } else { &rows[..] };
    if rows.iter().any(|r| r.len() != width) {
        return Err(CliError::Parse("rows have different numbers of columns".into()));
    }
    match width {
        1 => Ok(DistributionFile::Samples(
            body.iter().enumerate().map(|(i, r)| number(&r[0], i + 1)).collect::<CliResult<_>>()?,
        )),
        2 => {
            if !is_header(first) {
                return Err(CliError::Parse("two-column files need a `value,mass` header".into()));
            }
            let atoms = body
                .iter()
                .enumerate()
                .map(|(i, r)| Ok((number(&r[0], i + 2)?, number(&r[1], i + 2)?)))
                .collect::<CliResult<_>>()?;
            Ok(DistributionFile::Atoms(atoms))
        }
        n => Err(CliError::Parse(format!("expected 1 or 2 columns, found {n}"))),
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Reads a distribution file.
pub fn read_distribution(path: &Path) -> CliResult<DiscreteCdf> {
    let text = read(path)?;
    DistributionFile::parse(&text, Format::detect(path, &text))?.to_cdf()
}

/// A piecewise-linear function with optional tails and continuity tag.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionSpec {
    /// Knots `(x, y)` with strictly increasing `x`.
    pub knots: Vec<(f64, f64)>,
    /// Left and right tails; flat when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tails: Option<(Tail, Tail)>,
    /// Declared continuity.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub continuity: Option<Continuity>,
}

impl FunctionSpec {
    /// The described function.
    pub fn to_pl(&self) -> CliResult<PiecewiseLinear> {
        let (l, r) = self.tails.unwrap_or((Tail::Flat, Tail::Flat));
        Ok(PiecewiseLinear::with_tails(self.knots.clone(), l, r)?)
    }

    fn check_continuity(&self, what: &str, allowed: Continuity) -> CliResult<()> {
        match self.continuity {
            Some(c) if c != allowed && c != Continuity::Continuous => {
                Err(CliError::Parse(format!("{what} must be {allowed:?}-continuous, found {c:?}")))
            }
            _ => Ok(()),
        }
    }
}

/// Contents of a standard-pair file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairFile {
    /// Base utility.
    pub u0: FunctionSpec,
    /// Base distortion on `[0, 1]`.
    pub v0: FunctionSpec,
}

impl PairFile {
    /// Validates the pair, snapping `v0` end values within `tol`.
    pub fn to_pair(&self, tol: Tolerance) -> CliResult<StandardPair> {
        self.u0.check_continuity("u0", Continuity::Left)?;
        self.v0.check_continuity("v0", Continuity::Right)?;
        Ok(stochord_core::distortion::make_standard_pair(self.u0.to_pl()?, self.v0.to_pl()?, tol)?)
    }
}

fn parse_json<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<T> {
    let text = read(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

/// Reads a standard-pair file.
pub fn read_pair(path: &Path, tol: Tolerance) -> CliResult<StandardPair> {
    parse_json::<PairFile>(path)?.to_pair(tol)
}

/// Reads a single function file.
pub fn read_function(path: &Path) -> CliResult<PiecewiseLinear> {
    parse_json::<FunctionSpec>(path)?.to_pl()
}

#[derive(Deserialize)]
#[serde(untagged)]
enum VectorJson {
    Bare(Vec<f64>),
    Wrapped { entries: Vec<f64> },
}

/// Parses a vector: a JSON array, `{"entries": [...]}`, or one CSV column.
pub fn parse_vector(text: &str, format: Format) -> CliResult<RealVector> {
    let entries = match format {
        Format::Json => match serde_json::from_str::<VectorJson>(text).map_err(|e| CliError::Parse(e.to_string()))? {
            VectorJson::Bare(v) | VectorJson::Wrapped { entries: v } => v,
        },
        Format::Csv => match parse_distribution_csv(text)? {
            DistributionFile::Samples(v) => v,
            DistributionFile::Atoms(_) => return Err(CliError::Parse("vector files have a single column".into())),
        },
    };
    Ok(RealVector::new(entries)?)
}

/// Reads a vector file.
pub fn read_vector(path: &Path) -> CliResult<RealVector> {
    let text = read(path)?;
    parse_vector(&text, Format::detect(path, &text))
}
