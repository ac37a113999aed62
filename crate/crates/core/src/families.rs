//! State families used by the monogamy analyses: the five-parameter pure
//! three-qubit form, extensions of separable states, and named anchors.

use crate::qstate::{
    default_labels, rng_from_seed, ComplexMatrix, ComplexVector, DensityMatrix, PureState, StateError,
};
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Largest register (in qubits-equivalent, `log2` of the total dimension)
/// that `symmetric_extension` will build.
pub const MAX_EXTENSION_LOG2_DIM: f64 = 12.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FamilyError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("decomposition has no terms")]
    EmptyDecomposition,
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("register too large: log2(dim) = {log2_dim:.2} exceeds {limit}")]
    TooLarge { log2_dim: f64, limit: f64 },
    #[error("unknown state name `{0}`")]
    UnknownName(String),
    #[error(transparent)]
    State(#[from] StateError),
}

pub type Result<T> = std::result::Result<T, FamilyError>;

/// Parameters `(p, a, f, g)` of a pure three-qubit state in the canonical
/// form below; `gamma = sqrt(1 - f^2 - |g|^2)` is derived.
///
/// `|psi> = sqrt(p)|0>(a|00> + sqrt(1-a^2)|11>)
///        + sqrt(1-p)|1>[gamma(sqrt(1-a^2)|00> - a|11>) + f|01> + g|10>]`
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BrunParams {
    pub p: f64,
    pub a: f64,
    pub f: f64,
    #[serde(serialize_with = "crate::report::serialize_complex")]
    pub g: Complex64,
    pub gamma: f64,
}

impl BrunParams {
    pub fn new(p: f64, a: f64, f: f64, g: Complex64) -> Result<Self> {
        for (name, v) in [("p", p), ("a", a), ("f", f)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(FamilyError::InvalidParams(format!("{name} = {v} outside [0, 1]")));
            }
        }
        if !g.re.is_finite() || !g.im.is_finite() {
            return Err(FamilyError::InvalidParams("g is not finite".into()));
        }
        let weight = f * f + g.norm_sqr();
        if weight > 1.0 + 1e-12 {
            return Err(FamilyError::InvalidParams(format!("f^2 + |g|^2 = {weight} exceeds 1")));
        }
        Ok(Self { p, a, f, g, gamma: (1.0 - weight).max(0.0).sqrt() })
    }

    /// Parameters with `f = g = 0`, so `gamma = 1`.
    pub fn with_gamma_one(p: f64, a: f64) -> Result<Self> {
        Self::new(p, a, 0.0, Complex64::new(0.0, 0.0))
    }

    /// Chooses `f`, `g` (real, nonnegative) so that `gamma` takes the given value.
    pub fn with_gamma(p: f64, a: f64, gamma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(FamilyError::InvalidParams(format!("gamma = {gamma} outside [0, 1]")));
        }
        let f = (1.0 - gamma * gamma).sqrt();
        let mut params = Self::new(p, a, f, Complex64::new(0.0, 0.0))?;
        params.gamma = gamma;
        Ok(params)
    }
}

/// Pure three-qubit state (labels A, B, C) of the canonical form.
pub fn brun_state(params: &BrunParams) -> Result<PureState> {
    let BrunParams { p, a, f, g, gamma } = *params;
    let b = (1.0 - a * a).max(0.0).sqrt();
    let (head, tail) = (p.sqrt(), (1.0 - p).max(0.0).sqrt());
    let re = |x: f64| Complex64::new(x, 0.0);
    let mut v = ComplexVector::zeros(8);
    v[0b000] = re(head * a);
    v[0b011] = re(head * b);
    v[0b100] = re(tail * gamma * b);
    v[0b111] = re(-tail * gamma * a);
    v[0b101] = re(tail * f);
    v[0b110] = g * tail;
    Ok(PureState::new(v, &[2, 2, 2])?)
}

/// `p, a, f` uniform on `[0, 1]`; `g` uniform on the disk of radius `sqrt(1 - f^2)`.
pub fn sample_brun(seed: u64) -> BrunParams {
    sample_brun_with(&mut rng_from_seed(seed))
}

pub fn sample_brun_with<R: Rng + ?Sized>(rng: &mut R) -> BrunParams {
    let p: f64 = rng.random();
    let a: f64 = rng.random();
    let f: f64 = rng.random();
    let radius_sq = (1.0 - f * f) * rng.random::<f64>();
    let phase = 2.0 * PI * rng.random::<f64>();
    let g = Complex64::from_polar(radius_sq.sqrt(), phase);
    BrunParams::new(p, a, f, g).expect("sampled parameters lie in the valid domain")
}

/// One product term of a separable ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparableTerm {
    pub weight: f64,
    pub psi: PureState,
    pub phi: PureState,
}

/// Explicit ensemble `{p_i, |psi_i>, |phi_i>}` of product states.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparableDecomposition {
    terms: Vec<SeparableTerm>,
}

impl SeparableDecomposition {
    pub fn new(terms: Vec<SeparableTerm>) -> Result<Self> {
        let first = terms.first().ok_or(FamilyError::EmptyDecomposition)?;
        let (dim_psi, dim_phi) = (first.psi.dim(), first.phi.dim());
        let mut total = 0.0;
        for (i, t) in terms.iter().enumerate() {
            if !(t.weight > 0.0 && t.weight <= 1.0) {
                return Err(FamilyError::InvalidDecomposition(format!(
                    "term {i}: weight {} outside (0, 1]",
                    t.weight
                )));
            }
            if t.psi.dim() != dim_psi || t.phi.dim() != dim_phi {
                return Err(FamilyError::InvalidDecomposition(format!("term {i}: inconsistent dimensions")));
            }
            total += t.weight;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(FamilyError::InvalidDecomposition(format!("weights sum to {total}")));
        }
        Ok(Self { terms })
    }

    pub fn terms(&self) -> &[SeparableTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn dim_first(&self) -> usize {
        self.terms[0].psi.dim()
    }

    pub fn dim_second(&self) -> usize {
        self.terms[0].phi.dim()
    }

    /// `sum_i p_i |psi_i><psi_i| (x) |phi_i><phi_i|` with the given labels.
    pub fn state(&self, labels: [&str; 2]) -> DensityMatrix {
        let (da, dc) = (self.dim_first(), self.dim_second());
        let mut m = ComplexMatrix::zeros(da * dc, da * dc);
        for t in &self.terms {
            m += t.psi.projector().kronecker(&t.phi.projector()).map(|z| z * t.weight);
        }
        DensityMatrix::from_parts(m, vec![da, dc], labels.iter().map(|s| s.to_string()).collect())
    }
}

fn ket(dim: usize, index: usize) -> ComplexVector {
    let mut v = ComplexVector::zeros(dim);
    v[index] = Complex64::new(1.0, 0.0);
    v
}

fn mixture(
    terms: &[SeparableTerm],
    dims: Vec<usize>,
    labels: Vec<String>,
    vector: impl Fn(usize, &SeparableTerm) -> ComplexVector,
) -> DensityMatrix {
    let n: usize = dims.iter().product();
    let mut m = ComplexMatrix::zeros(n, n);
    for (i, t) in terms.iter().enumerate() {
        let v = vector(i, t);
        m += (&v * v.adjoint()).map(|z| z * t.weight);
    }
    DensityMatrix::from_parts(m, dims, labels)
}

/// `rho_ABC = sum_i p_i |psi_i><psi_i|_A (x) |i><i|_B (x) |phi_i><phi_i|_C`
/// with `B` of dimension equal to the number of terms.
pub fn theorem1_extension(dec: &SeparableDecomposition) -> Result<DensityMatrix> {
    let k = dec.len();
    if k == 0 {
        return Err(FamilyError::EmptyDecomposition);
    }
    let dims = vec![dec.dim_first(), k, dec.dim_second()];
    Ok(mixture(dec.terms(), dims, default_labels(3), |i, t| {
        t.psi.amplitudes().kronecker(&ket(k, i)).kronecker(t.phi.amplitudes())
    }))
}

/// `sigma_ABC = sum_i p_i |psi_i><psi_i|_A (x) |i><i|_B (x) |0><0|_C`; related
/// to `theorem1_extension` by a unitary on `BC`.
pub fn sigma_extension(dec: &SeparableDecomposition) -> Result<DensityMatrix> {
    let k = dec.len();
    if k == 0 {
        return Err(FamilyError::EmptyDecomposition);
    }
    let dc = dec.dim_second();
    let dims = vec![dec.dim_first(), k, dc];
    Ok(mixture(dec.terms(), dims, default_labels(3), |i, t| {
        t.psi.amplitudes().kronecker(&ket(k, i)).kronecker(&ket(dc, 0))
    }))
}

/// `sum_i p_i |psi_i><psi_i|_A (x) (|phi_i><phi_i|)^{(x) n}` on `A, B1, ..., Bn`.
pub fn symmetric_extension(dec: &SeparableDecomposition, n: usize) -> Result<DensityMatrix> {
    if dec.is_empty() {
        return Err(FamilyError::EmptyDecomposition);
    }
    if n == 0 {
        return Err(FamilyError::InvalidParams("number of copies must be positive".into()));
    }
    let (da, db) = (dec.dim_first(), dec.dim_second());
    let log2_dim = (da as f64).log2() + n as f64 * (db as f64).log2();
    if log2_dim > MAX_EXTENSION_LOG2_DIM + 1e-9 {
        return Err(FamilyError::TooLarge { log2_dim, limit: MAX_EXTENSION_LOG2_DIM });
    }
    let mut dims = vec![da];
    dims.extend(std::iter::repeat_n(db, n));
    let mut labels = vec!["A".to_string()];
    labels.extend((1..=n).map(|j| format!("B{j}")));
    Ok(mixture(dec.terms(), dims, labels, |_, t| {
        let mut v = t.psi.amplitudes().clone();
        for _ in 0..n {
            v = v.kronecker(t.phi.amplitudes());
        }
        v
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NamedState {
    Ghz,
    W,
    Bell,
    SeparableDiscordant,
}

impl NamedState {
    pub const ALL: [NamedState; 4] = [Self::Ghz, Self::W, Self::Bell, Self::SeparableDiscordant];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Ghz => "ghz",
            Self::W => "w",
            Self::Bell => "bell",
            Self::SeparableDiscordant => "separable_discordant",
        }
    }
}

impl fmt::Display for NamedState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NamedState {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('-', "_");
        Self::ALL
            .into_iter()
            .find(|n| n.name() == key)
            .ok_or_else(|| FamilyError::UnknownName(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Named {
    Pure(PureState),
    Decomposition(SeparableDecomposition),
}

fn real_state(amps: &[f64], dims: &[usize]) -> PureState {
    let v = ComplexVector::from_iterator(amps.len(), amps.iter().map(|&x| Complex64::new(x, 0.0)));
    PureState::normalized(v, dims).expect("named states are normalizable")
}

pub fn named_state(name: NamedState) -> Named {
    let h = FRAC_1_SQRT_2;
    match name {
        NamedState::Ghz => Named::Pure(real_state(&[h, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, h], &[2, 2, 2])),
        NamedState::W => {
            let t = 1.0 / 3f64.sqrt();
            Named::Pure(real_state(&[0.0, t, t, 0.0, t, 0.0, 0.0, 0.0], &[2, 2, 2]))
        }
        NamedState::Bell => Named::Pure(real_state(&[h, 0.0, 0.0, h], &[2, 2])),
        NamedState::SeparableDiscordant => {
            let zero = real_state(&[1.0, 0.0], &[2]);
            let plus = real_state(&[h, h], &[2]);
            let terms = vec![
                SeparableTerm { weight: 0.5, psi: zero.clone(), phi: zero },
                SeparableTerm { weight: 0.5, psi: plus.clone(), phi: plus },
            ];
            Named::Decomposition(SeparableDecomposition::new(terms).expect("valid decomposition"))
        }
    }
}

/// Shorthand for the named pure states.
pub fn named_pure(name: NamedState) -> Option<PureState> {
    match named_state(name) {
        Named::Pure(p) => Some(p),
        Named::Decomposition(_) => None,
    }
}

pub fn separable_discordant() -> SeparableDecomposition {
    match named_state(NamedState::SeparableDiscordant) {
        Named::Decomposition(d) => d,
        Named::Pure(_) => unreachable!(),
    }
}
