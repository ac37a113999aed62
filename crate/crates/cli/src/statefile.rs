//! JSON state files.
//!
//! ```json
//! {"kind": "pure", "dims": [2, 2], "labels": ["A", "B"],
//!  "data": [[0.7071067811865476, 0], [0, 0], [0, 0], [0.7071067811865476, 0]]}
//! ```
//!
//! `data` is a row-major matrix for `density`, an amplitude list for `pure`
//! and a list of `{weight, psi, phi}` objects for `decomposition`. Complex
//! entries are always `[re, im]`.

use num_complex::Complex64;
use qcorr::families::{FamilyError, SeparableDecomposition, SeparableTerm};
use qcorr::qstate::{default_labels, ComplexMatrix, ComplexVector, DensityMatrix, PureState, StateError};
use qcorr::report::to_json;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum StateFileError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("parse error at `{field}`: {message}")]
    Parse { field: String, message: String },
    #[error("validation error at `{field}`: {source}")]
    Validation { field: String, source: FamilyError },
}

impl StateFileError {
    fn parse(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Parse { field: field.into(), message: message.into() }
    }

    fn invalid(field: impl Into<String>, source: impl Into<FamilyError>) -> Self {
        Self::Validation { field: field.into(), source: source.into() }
    }

    /// Dotted path of the offending field.
    pub fn field(&self) -> Option<&str> {
        match self {
            Self::Io { .. } => None,
            Self::Parse { field, .. } | Self::Validation { field, .. } => Some(field),
        }
    }
}

pub type Result<T> = std::result::Result<T, StateFileError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Density,
    Pure,
    Decomposition,
}

pub type Entry = [f64; 2];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TermData {
    pub weight: f64,
    pub psi: Vec<Entry>,
    pub phi: Vec<Entry>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Data {
    Density(Vec<Vec<Entry>>),
    Pure(Vec<Entry>),
    Decomposition(Vec<TermData>),
}

/// Unvalidated contents of a state file.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateFile {
    pub kind: Kind,
    pub dims: Vec<usize>,
    pub labels: Vec<String>,
    pub data: Data,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    kind: Kind,
    dims: Vec<usize>,
    labels: Option<Vec<String>>,
    data: Value,
}

/// Validated domain object.
#[derive(Debug, Clone, PartialEq)]
pub enum Parsed {
    Density(DensityMatrix),
    Pure(PureState),
    Decomposition(SeparableDecomposition),
}

impl Parsed {
    /// The density matrix of a `density` or `pure` file.
    pub fn into_density(self) -> Option<DensityMatrix> {
        match self {
            Self::Density(rho) => Some(rho),
            Self::Pure(psi) => Some(psi.density()),
            Self::Decomposition(_) => None,
        }
    }

    pub fn into_decomposition(self) -> Option<SeparableDecomposition> {
        match self {
            Self::Decomposition(dec) => Some(dec),
            _ => None,
        }
    }
}

fn entry(v: &Value, field: &str) -> Result<Entry> {
    let pair = v.as_array().filter(|a| a.len() == 2);
    match pair.and_then(|a| Some([a[0].as_f64()?, a[1].as_f64()?])) {
        Some(e) if e.iter().all(|x| x.is_finite()) => Ok(e),
        _ => Err(StateFileError::parse(field, "expected a [re, im] pair of finite numbers")),
    }
}

fn entries(v: &Value, field: &str) -> Result<Vec<Entry>> {
    let items = v.as_array().ok_or_else(|| StateFileError::parse(field, "expected an array"))?;
    items.iter().enumerate().map(|(i, e)| entry(e, &format!("{field}[{i}]"))).collect()
}

fn complex(e: &Entry) -> Complex64 {
    Complex64::new(e[0], e[1])
}

fn split(z: &Complex64) -> Entry {
    [z.re, z.im]
}

fn vector(entries: &[Entry]) -> ComplexVector {
    ComplexVector::from_iterator(entries.len(), entries.iter().map(complex))
}

impl StateFile {
    pub fn from_density(rho: &DensityMatrix) -> Self {
        let m = rho.matrix();
        let rows = (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| split(&m[(r, c)])).collect()).collect();
        Self { kind: Kind::Density, dims: rho.dims().to_vec(), labels: rho.labels().to_vec(), data: Data::Density(rows) }
    }

    pub fn from_pure(psi: &PureState) -> Self {
        Self {
            kind: Kind::Pure,
            dims: psi.dims().to_vec(),
            labels: psi.labels().to_vec(),
            data: Data::Pure(psi.amplitudes().iter().map(split).collect()),
        }
    }

    pub fn from_decomposition(dec: &SeparableDecomposition, labels: [&str; 2]) -> Self {
        let terms = dec
            .terms()
            .iter()
            .map(|t| TermData {
                weight: t.weight,
                psi: t.psi.amplitudes().iter().map(split).collect(),
                phi: t.phi.amplitudes().iter().map(split).collect(),
            })
            .collect();
        Self {
            kind: Kind::Decomposition,
            dims: vec![dec.dim_first(), dec.dim_second()],
            labels: labels.iter().map(|s| s.to_string()).collect(),
            data: Data::Decomposition(terms),
        }
    }

    /// Reads the schema without validating the physics.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawFile = serde_json::from_str(text).map_err(|e| StateFileError::parse("$", e.to_string()))?;
        let labels = raw.labels.unwrap_or_else(|| default_labels(raw.dims.len()));
        let data = match raw.kind {
            Kind::Pure => Data::Pure(entries(&raw.data, "data")?),
            Kind::Density => {
                let rows = raw.data.as_array().ok_or_else(|| StateFileError::parse("data", "expected an array of rows"))?;
                Data::Density(
                    rows.iter().enumerate().map(|(i, r)| entries(r, &format!("data[{i}]"))).collect::<Result<_>>()?,
                )
            }
            Kind::Decomposition => {
                let terms =
                    raw.data.as_array().ok_or_else(|| StateFileError::parse("data", "expected an array of terms"))?;
                let parse_term = |(i, t): (usize, &Value)| -> Result<TermData> {
                    let field = format!("data[{i}]");
                    let obj = t.as_object().ok_or_else(|| StateFileError::parse(&field, "expected {weight, psi, phi}"))?;
                    if let Some(extra) = obj.keys().find(|k| !["weight", "psi", "phi"].contains(&k.as_str())) {
                        return Err(StateFileError::parse(format!("{field}.{extra}"), "unknown field"));
                    }
                    let get = |k: &str| {
                        obj.get(k).ok_or_else(|| StateFileError::parse(format!("{field}.{k}"), "missing field"))
                    };
                    let weight = get("weight")?
                        .as_f64()
                        .filter(|w| w.is_finite())
                        .ok_or_else(|| StateFileError::parse(format!("{field}.weight"), "expected a finite number"))?;
                    Ok(TermData {
                        weight,
                        psi: entries(get("psi")?, &format!("{field}.psi"))?,
                        phi: entries(get("phi")?, &format!("{field}.phi"))?,
                    })
                };
                Data::Decomposition(terms.iter().enumerate().map(parse_term).collect::<Result<_>>()?)
            }
        };
        Ok(Self { kind: raw.kind, dims: raw.dims, labels, data })
    }

    pub fn to_json(&self) -> String {
        to_json(self).expect("state files serialize")
    }

    /// Builds and validates the domain object.
    pub fn validate(&self) -> Result<Parsed> {
        let n: usize = self.dims.iter().product();
        match &self.data {
            Data::Pure(amps) => {
                if amps.len() != n {
                    return Err(StateFileError::invalid(
                        "data",
                        StateError::DimensionMismatch { expected: n, found: amps.len() },
                    ));
                }
                PureState::with_labels(vector(amps), &self.dims, self.labels.clone())
                    .map(Parsed::Pure)
                    .map_err(|e| StateFileError::invalid(field_for(&e), e))
            }
            Data::Density(rows) => {
                if rows.len() != n {
                    return Err(StateFileError::invalid(
                        "data",
                        StateError::DimensionMismatch { expected: n, found: rows.len() },
                    ));
                }
                if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
                    return Err(StateFileError::invalid(
                        format!("data[{i}]"),
                        StateError::DimensionMismatch { expected: n, found: r.len() },
                    ));
                }
                let m = ComplexMatrix::from_fn(n, n, |r, c| complex(&rows[r][c]));
                DensityMatrix::with_labels(m, &self.dims, self.labels.clone())
                    .map(Parsed::Density)
                    .map_err(|e| StateFileError::invalid(field_for(&e), e))
            }
            Data::Decomposition(terms) => {
                if self.dims.len() != 2 {
                    return Err(StateFileError::invalid(
                        "dims",
                        StateError::DimensionMismatch { expected: 2, found: self.dims.len() },
                    ));
                }
                if self.labels.len() != 2 || self.labels[0] == self.labels[1] {
                    return Err(StateFileError::invalid(
                        "labels",
                        StateError::BadLabels { labels: self.labels.clone(), count: 2 },
                    ));
                }
                let mut out = Vec::with_capacity(terms.len());
                for (i, t) in terms.iter().enumerate() {
                    let party = |amps: &[Entry], d: usize, label: &str, key: &str| {
                        let field = format!("data[{i}].{key}");
                        if amps.len() != d {
                            return Err(StateFileError::invalid(
                                field,
                                StateError::DimensionMismatch { expected: d, found: amps.len() },
                            ));
                        }
                        PureState::with_labels(vector(amps), &[d], vec![label.to_string()])
                            .map_err(|e| StateFileError::invalid(field, e))
                    };
                    out.push(SeparableTerm {
                        weight: t.weight,
                        psi: party(&t.psi, self.dims[0], &self.labels[0], "psi")?,
                        phi: party(&t.phi, self.dims[1], &self.labels[1], "phi")?,
                    });
                }
                SeparableDecomposition::new(out)
                    .map(Parsed::Decomposition)
                    .map_err(|e| StateFileError::invalid("data", e))
            }
        }
    }
}

fn field_for(e: &StateError) -> &'static str {
    match e {
        StateError::EmptyDims | StateError::ZeroDimension => "dims",
        StateError::BadLabels { .. } | StateError::DuplicateLabel(_) => "labels",
        _ => "data",
    }
}

pub fn parse_state_str(text: &str) -> Result<Parsed> {
    StateFile::from_json(text)?.validate()
}

pub fn parse_state_file(path: &Path) -> Result<Parsed> {
    let text =
        std::fs::read_to_string(path).map_err(|source| StateFileError::Io { path: path.to_path_buf(), source })?;
    parse_state_str(&text)
}
