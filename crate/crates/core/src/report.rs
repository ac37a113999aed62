//! JSON report envelopes with every float printed to 17 significant digits.

use crate::optimize::OptimizerConfig;
use num_complex::Complex64;
use serde::ser::SerializeTuple;
use serde::{Serialize, Serializer};
use std::io::{self, Write};
use std::path::Path;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// `[re, im]`.
pub fn serialize_complex<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&z.re)?;
    t.serialize_element(&z.im)?;
    t.end()
}

/// Decimal rendering with 17 significant digits, which round-trips `f64`.
pub fn format_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

/// JSON formatter that writes floats via [`format_f64`].
#[derive(Debug, Default, Clone, Copy)]
pub struct SignificantDigits;

impl serde_json::ser::Formatter for SignificantDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> serde_json::Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SignificantDigits);
    value.serialize(&mut ser)?;
    out.push(b'\n');
    Ok(String::from_utf8(out).expect("serde_json emits UTF-8"))
}

#[derive(Debug, Clone, Serialize)]
pub struct Tolerances {
    pub structural: f64,
    pub trace: f64,
    pub exact: f64,
    pub optimizer: f64,
    pub deficit: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct OptimizerMeta {
    pub grid: [usize; 2],
    pub refinements: Refinements,
}

#[derive(Debug, Clone, Serialize)]
pub struct Refinements {
    pub starts: usize,
    pub max_steps: usize,
    pub improvement_tol: f64,
}

impl From<&OptimizerConfig> for OptimizerMeta {
    fn from(cfg: &OptimizerConfig) -> Self {
        Self {
            grid: [cfg.grid_theta, cfg.grid_phi],
            refinements: Refinements {
                starts: cfg.starts,
                max_steps: cfg.max_refine_steps,
                improvement_tol: cfg.improvement_tol,
            },
        }
    }
}

/// Top-level report document.
#[derive(Debug, Clone, Serialize)]
pub struct Report<T: Serialize> {
    pub tool_version: String,
    pub command: String,
    pub seed: Option<u64>,
    pub tolerances: Tolerances,
    pub optimizer: OptimizerMeta,
    pub payload: T,
}

/// Writes `contents` to a temporary file beside `path`, then renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
