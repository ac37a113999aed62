//! Dense complex linear algebra for small multipartite registers.
//!
//! Subsystems are ordered positionally: the first entry of `dims` is the most
//! significant digit of the flat index. Every operation names subsystems by
//! label and never reorders them implicitly.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::f64::consts::PI;
use thiserror::Error;

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

/// Hermiticity and positivity tolerance.
pub const STRUCTURAL_TOL: f64 = 1e-9;
/// Unit-trace tolerance.
pub const TRACE_TOL: f64 = 1e-7;
/// Tolerance for identities that hold exactly in exact arithmetic.
pub const EXACT_TOL: f64 = 1e-12;

const SPECTRAL_NOISE: f64 = 1e-14;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StateError {
    #[error("matrix is not Hermitian (max |M - M^dag| = {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("matrix trace is {trace} (|Tr - 1| = {deviation:e})")]
    NotUnitTrace { trace: f64, deviation: f64 },
    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("empty subsystem list")]
    EmptyDims,
    #[error("subsystem dimensions must be positive")]
    ZeroDimension,
    #[error("labels {labels:?} do not match {count} subsystems or are not unique")]
    BadLabels { labels: Vec<String>, count: usize },
    #[error("unknown subsystem label `{0}`")]
    UnknownLabel(String),
    #[error("duplicate subsystem label `{0}`")]
    DuplicateLabel(String),
    #[error("subsystem `{label}` has dimension {dim}, expected a qubit")]
    TargetNotQubit { label: String, dim: usize },
    #[error("Kraus operators are not complete (max |sum K^dag K - I| = {deviation:e})")]
    IncompleteChannel { deviation: f64 },
    #[error("state vector is not normalized (norm^2 = {norm_sq})")]
    NotNormalized { norm_sq: f64 },
}

pub type Result<T> = std::result::Result<T, StateError>;

/// Canonical labels `A`, `B`, `C`, ... for `n` subsystems.
pub fn default_labels(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            if i < 26 {
                char::from(b'A' + i as u8).to_string()
            } else {
                format!("S{i}")
            }
        })
        .collect()
}

fn check_dims(dims: &[usize], total: usize) -> Result<()> {
    if dims.is_empty() {
        return Err(StateError::EmptyDims);
    }
    if dims.contains(&0) {
        return Err(StateError::ZeroDimension);
    }
    let product: usize = dims.iter().product();
    if product != total {
        return Err(StateError::DimensionMismatch { expected: product, found: total });
    }
    Ok(())
}

fn check_labels(labels: &[String], count: usize) -> Result<()> {
    let unique = labels
        .iter()
        .enumerate()
        .all(|(i, l)| !l.is_empty() && !labels[..i].contains(l));
    if labels.len() != count || !unique {
        return Err(StateError::BadLabels { labels: labels.to_vec(), count });
    }
    Ok(())
}

/// Row-major strides: the last subsystem varies fastest.
pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

/// Flat-index contribution of every joint index over `positions`, enumerated
/// with the first listed position most significant.
pub(crate) fn subsystem_offsets(dims: &[usize], positions: &[usize]) -> Vec<usize> {
    let st = strides(dims);
    let mut offsets = vec![0usize];
    for &p in positions {
        let mut next = Vec::with_capacity(offsets.len() * dims[p]);
        for &o in &offsets {
            for digit in 0..dims[p] {
                next.push(o + digit * st[p]);
            }
        }
        offsets = next;
    }
    offsets
}

/// Largest entrywise modulus of `m - m^dag`.
pub fn hermiticity_deviation(m: &ComplexMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

fn hermitize(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()).map(|z| z * 0.5)
}

fn trace_re(m: &ComplexMatrix) -> f64 {
    (0..m.nrows()).map(|i| m[(i, i)].re).sum()
}

/// Spectral decomposition of a Hermitian matrix, eigenvalues descending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, aligned with `values`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> ComplexVector {
        self.vectors.column(k).into_owned()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.vectors.nrows();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lambda) in self.values.iter().enumerate() {
            let v = self.vectors.column(k);
            out += (v * v.adjoint()).map(|z| z * lambda);
        }
        out
    }
}

/// Eigen-decomposition of a Hermitian matrix. Ordering within degenerate
/// eigenspaces is unspecified.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<HermitianEigen> {
    if m.nrows() != m.ncols() {
        return Err(StateError::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
    }
    let deviation = hermiticity_deviation(m);
    if deviation > STRUCTURAL_TOL {
        return Err(StateError::NotHermitian { deviation });
    }
    Ok(eig_unchecked(m))
}

pub(crate) fn eig_unchecked(m: &ComplexMatrix) -> HermitianEigen {
    let eig = SymmetricEigen::new(hermitize(m));
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let n = m.nrows();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    HermitianEigen { values, vectors }
}

/// Eigenvalues only, descending.
pub(crate) fn eigenvalues_hermitian(m: &ComplexMatrix) -> Vec<f64> {
    match m.nrows() {
        1 => vec![m[(0, 0)].re],
        2 => {
            let (a, d) = (m[(0, 0)].re, m[(1, 1)].re);
            let mean = 0.5 * (a + d);
            let half_gap = (0.25 * (a - d) * (a - d) + m[(0, 1)].norm_sqr()).sqrt();
            vec![mean + half_gap, mean - half_gap]
        }
        _ => {
            let mut v: Vec<f64> = SymmetricEigen::new(hermitize(m)).eigenvalues.iter().copied().collect();
            v.sort_by(|a, b| b.total_cmp(a));
            v
        }
    }
}

/// Squared Hilbert–Schmidt distance `Tr[(a-b)^dag (a-b)]`.
pub fn hs_norm_sq(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(StateError::DimensionMismatch { expected: a.nrows(), found: b.nrows() });
    }
    Ok(a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm_sqr()).sum())
}

/// Hermitian, unit-trace, positive semidefinite operator on a labelled register.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    dims: Vec<usize>,
    labels: Vec<String>,
}

/// Checks the three validity invariants and returns a state with default
/// labels. Eigenvalues in `[-1e-9, 0)` are clipped and the spectrum renormalized.
pub fn validate_density(m: ComplexMatrix, dims: &[usize]) -> Result<DensityMatrix> {
    DensityMatrix::with_labels(m, dims, default_labels(dims.len()))
}

impl DensityMatrix {
    pub fn new(m: ComplexMatrix, dims: &[usize]) -> Result<Self> {
        validate_density(m, dims)
    }

    pub fn with_labels(m: ComplexMatrix, dims: &[usize], labels: Vec<String>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(StateError::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
        }
        check_dims(dims, m.nrows())?;
        check_labels(&labels, dims.len())?;
        let deviation = hermiticity_deviation(&m);
        if deviation > STRUCTURAL_TOL {
            return Err(StateError::NotHermitian { deviation });
        }
        let trace = trace_re(&m);
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(StateError::NotUnitTrace { trace, deviation: (trace - 1.0).abs() });
        }
        let eig = eig_unchecked(&m);
        let min_eigenvalue = *eig.values.last().unwrap();
        if min_eigenvalue < -STRUCTURAL_TOL {
            return Err(StateError::NotPositive { min_eigenvalue });
        }
        // eigen-solver noise on exact zeros stays below SPECTRAL_NOISE
        let matrix = if min_eigenvalue < -SPECTRAL_NOISE {
            let clipped: Vec<f64> = eig.values.iter().map(|&l| l.max(0.0)).collect();
            let total: f64 = clipped.iter().sum();
            HermitianEigen {
                values: clipped.iter().map(|l| l / total).collect(),
                vectors: eig.vectors,
            }
            .reconstruct()
        } else {
            hermitize(&m)
        };
        Ok(Self { matrix, dims: dims.to_vec(), labels })
    }

    /// For matrices that are valid by construction.
    pub(crate) fn from_parts(matrix: ComplexMatrix, dims: Vec<usize>, labels: Vec<String>) -> Self {
        debug_assert_eq!(matrix.nrows(), dims.iter().product::<usize>());
        debug_assert_eq!(dims.len(), labels.len());
        Self { matrix, dims, labels }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn relabel(mut self, labels: Vec<String>) -> Result<Self> {
        check_labels(&labels, self.dims.len())?;
        self.labels = labels;
        Ok(self)
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| StateError::UnknownLabel(label.to_string()))
    }

    pub fn subsystem_dim(&self, label: &str) -> Result<usize> {
        Ok(self.dims[self.position(label)?])
    }

    pub fn trace(&self) -> f64 {
        trace_re(&self.matrix)
    }

    /// `Tr rho^2`.
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        eigenvalues_hermitian(&self.matrix)
    }

    /// Re-runs the validity checks on the stored matrix.
    pub fn check(&self) -> Result<()> {
        Self::with_labels(self.matrix.clone(), &self.dims, self.labels.clone()).map(|_| ())
    }

    /// Number of eigenvalues above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.eigenvalues().iter().filter(|&&l| l > tol).count()
    }

    fn positions_of(&self, names: &[&str]) -> Result<Vec<usize>> {
        let mut positions = Vec::with_capacity(names.len());
        for name in names {
            let p = self.position(name)?;
            if positions.contains(&p) {
                return Err(StateError::DuplicateLabel(name.to_string()));
            }
            positions.push(p);
        }
        Ok(positions)
    }
}

/// Tensor product with concatenated subsystem lists.
pub fn kron(a: &DensityMatrix, b: &DensityMatrix) -> Result<DensityMatrix> {
    if let Some(l) = b.labels.iter().find(|l| a.labels.contains(l)) {
        return Err(StateError::DuplicateLabel(l.clone()));
    }
    let dims = [a.dims.as_slice(), b.dims.as_slice()].concat();
    let labels = [a.labels.as_slice(), b.labels.as_slice()].concat();
    Ok(DensityMatrix::from_parts(a.matrix.kronecker(&b.matrix), dims, labels))
}

pub(crate) fn partial_trace_positions(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> ComplexMatrix {
    let traced: Vec<usize> = (0..dims.len()).filter(|p| !keep.contains(p)).collect();
    let kept_off = subsystem_offsets(dims, keep);
    let traced_off = subsystem_offsets(dims, &traced);
    let n = kept_off.len();
    ComplexMatrix::from_fn(n, n, |i, j| {
        let (oi, oj) = (kept_off[i], kept_off[j]);
        traced_off.iter().map(|&t| m[(oi + t, oj + t)]).sum()
    })
}

/// Reduced state on the `keep` subsystems, which stay in their original order.
pub fn partial_trace(rho: &DensityMatrix, keep: &[&str]) -> Result<DensityMatrix> {
    if keep.is_empty() {
        return Err(StateError::EmptyDims);
    }
    let mut positions = rho.positions_of(keep)?;
    positions.sort_unstable();
    let matrix = partial_trace_positions(&rho.matrix, &rho.dims, &positions);
    let dims = positions.iter().map(|&p| rho.dims[p]).collect();
    let labels = positions.iter().map(|&p| rho.labels[p].clone()).collect();
    Ok(DensityMatrix::from_parts(matrix, dims, labels))
}

/// Orthonormal qubit basis `{|n>, |-n>}` for the Bloch direction `(theta, phi)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct QubitBasis {
    pub theta: f64,
    pub phi: f64,
}

impl QubitBasis {
    pub const COMPUTATIONAL: QubitBasis = QubitBasis { theta: 0.0, phi: 0.0 };

    /// Canonicalizes arbitrary angles to `theta in [0, pi]`, `phi in [0, 2pi)`.
    pub fn new(theta: f64, phi: f64) -> Self {
        let [x, y, z] = bloch(theta, phi);
        Self::from_bloch([x, y, z])
    }

    pub fn from_bloch(n: [f64; 3]) -> Self {
        let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        let theta = (n[2] / norm).clamp(-1.0, 1.0).acos();
        let mut phi = n[1].atan2(n[0]);
        if phi < 0.0 {
            phi += 2.0 * PI;
        }
        if phi >= 2.0 * PI {
            phi = 0.0;
        }
        Self { theta, phi }
    }

    pub fn bloch_vector(&self) -> [f64; 3] {
        bloch(self.theta, self.phi)
    }

    /// The two basis vectors, `|n>` first.
    pub fn vectors(&self) -> [[Complex64; 2]; 2] {
        let (c, s) = ((self.theta / 2.0).cos(), (self.theta / 2.0).sin());
        let e = Complex64::from_polar(1.0, self.phi);
        [[ONE * c, e * s], [-e.conj() * s, ONE * c]]
    }

    pub fn projectors(&self) -> [ComplexMatrix; 2] {
        self.vectors()
            .map(|v| ComplexMatrix::from_fn(2, 2, |i, j| v[i] * v[j].conj()))
    }
}

fn bloch(theta: f64, phi: f64) -> [f64; 3] {
    [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]
}

/// 2x2 blocks of `m` with respect to the qubit at `target`: `blocks[a][b]`
/// is the operator `<a| m |b>` on the remaining subsystems.
pub(crate) fn qubit_blocks(m: &ComplexMatrix, dims: &[usize], target: usize) -> [[ComplexMatrix; 2]; 2] {
    let rest: Vec<usize> = (0..dims.len()).filter(|&p| p != target).collect();
    let rest_off = subsystem_offsets(dims, &rest);
    let stride = strides(dims)[target];
    let r = rest_off.len();
    let block = |a: usize, b: usize| {
        ComplexMatrix::from_fn(r, r, |i, j| m[(a * stride + rest_off[i], b * stride + rest_off[j])])
    };
    [[block(0, 0), block(0, 1)], [block(1, 0), block(1, 1)]]
}

/// Applies the projective measurement channel `sum_i (P_i (x) I) rho (P_i (x) I)`
/// in `basis` on the qubit `target`. The output is classical-quantum with
/// respect to `target`.
pub fn dephase(rho: &DensityMatrix, basis: &QubitBasis, target: &str) -> Result<DensityMatrix> {
    let pos = rho.position(target)?;
    if rho.dims[pos] != 2 {
        return Err(StateError::TargetNotQubit { label: target.to_string(), dim: rho.dims[pos] });
    }
    let projectors = basis.projectors();
    // coefficient of rho[c][d] in out[a][b]
    let mut coeff = [[[[ZERO; 2]; 2]; 2]; 2];
    for p in &projectors {
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    for d in 0..2 {
                        coeff[a][b][c][d] += p[(a, c)] * p[(d, b)];
                    }
                }
            }
        }
    }
    let rest: Vec<usize> = (0..rho.dims.len()).filter(|&p| p != pos).collect();
    let rest_off = subsystem_offsets(&rho.dims, &rest);
    let stride = strides(&rho.dims)[pos];
    let m = &rho.matrix;
    let mut out = ComplexMatrix::zeros(rho.dim(), rho.dim());
    for &oi in &rest_off {
        for &oj in &rest_off {
            let block = [
                [m[(oi, oj)], m[(oi, stride + oj)]],
                [m[(stride + oi, oj)], m[(stride + oi, stride + oj)]],
            ];
            for a in 0..2 {
                for b in 0..2 {
                    let mut acc = ZERO;
                    for c in 0..2 {
                        for d in 0..2 {
                            acc += coeff[a][b][c][d] * block[c][d];
                        }
                    }
                    out[(a * stride + oi, b * stride + oj)] = acc;
                }
            }
        }
    }
    Ok(DensityMatrix::from_parts(out, rho.dims.clone(), rho.labels.clone()))
}

/// Normalized state vector on a labelled register.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: ComplexVector,
    dims: Vec<usize>,
    labels: Vec<String>,
}

impl PureState {
    pub fn new(amplitudes: ComplexVector, dims: &[usize]) -> Result<Self> {
        Self::with_labels(amplitudes, dims, default_labels(dims.len()))
    }

    pub fn with_labels(amplitudes: ComplexVector, dims: &[usize], labels: Vec<String>) -> Result<Self> {
        check_dims(dims, amplitudes.len())?;
        check_labels(&labels, dims.len())?;
        let norm_sq = amplitudes.norm_squared();
        if (norm_sq - 1.0).abs() > STRUCTURAL_TOL {
            return Err(StateError::NotNormalized { norm_sq });
        }
        Ok(Self { amplitudes, dims: dims.to_vec(), labels })
    }

    /// Normalizes `amplitudes` before validation.
    pub fn normalized(amplitudes: ComplexVector, dims: &[usize]) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(StateError::NotNormalized { norm_sq: norm * norm });
        }
        Self::new(amplitudes.map(|z| z / norm), dims)
    }

    /// Computational basis state `|index>` on `dims`.
    pub fn basis(dims: &[usize], index: usize) -> Result<Self> {
        let n: usize = dims.iter().product();
        if index >= n {
            return Err(StateError::DimensionMismatch { expected: n, found: index });
        }
        let mut v = ComplexVector::zeros(n);
        v[index] = ONE;
        Self::new(v, dims)
    }

    pub(crate) fn from_parts(amplitudes: ComplexVector, dims: Vec<usize>, labels: Vec<String>) -> Self {
        Self { amplitudes, dims, labels }
    }

    pub fn amplitudes(&self) -> &ComplexVector {
        &self.amplitudes
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn relabel(mut self, labels: Vec<String>) -> Result<Self> {
        check_labels(&labels, self.dims.len())?;
        self.labels = labels;
        Ok(self)
    }

    pub fn projector(&self) -> ComplexMatrix {
        &self.amplitudes * self.amplitudes.adjoint()
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_parts(self.projector(), self.dims.clone(), self.labels.clone())
    }

    /// Tensor product; labels must not collide.
    pub fn kron(&self, other: &PureState) -> Result<PureState> {
        if let Some(l) = other.labels.iter().find(|l| self.labels.contains(l)) {
            return Err(StateError::DuplicateLabel(l.clone()));
        }
        Ok(Self {
            amplitudes: self.amplitudes.kronecker(&other.amplitudes),
            dims: [self.dims.as_slice(), other.dims.as_slice()].concat(),
            labels: [self.labels.as_slice(), other.labels.as_slice()].concat(),
        })
    }
}

/// Canonical purification `sum_k sqrt(l_k) |e_k> (x) |k>` in descending
/// eigenvalue order. The ancilla is appended with label `R` (primed if taken).
/// Each eigenvector is phased so its largest-modulus entry is real positive.
pub fn purify(rho: &DensityMatrix) -> PureState {
    let d = rho.dim();
    let eig = eig_unchecked(&rho.matrix);
    let mut amplitudes = ComplexVector::zeros(d * d);
    for (k, &lambda) in eig.values.iter().enumerate() {
        let weight = lambda.max(0.0).sqrt();
        if weight == 0.0 {
            continue;
        }
        let v = eig.vectors.column(k);
        let lead = (0..d).fold(0, |best, i| if v[i].norm() > v[best].norm() + EXACT_TOL { i } else { best });
        let phase = v[lead].conj() / v[lead].norm();
        for i in 0..d {
            amplitudes[i * d + k] = v[i] * phase * weight;
        }
    }
    let norm = amplitudes.norm();
    amplitudes /= Complex64::from(norm);
    let mut ancilla = "R".to_string();
    while rho.labels.contains(&ancilla) {
        ancilla.push('\'');
    }
    let mut labels = rho.labels.clone();
    labels.push(ancilla);
    let mut dims = rho.dims.clone();
    dims.push(d);
    PureState::from_parts(amplitudes, dims, labels)
}

/// Completely positive trace-preserving map given by Kraus operators
/// (each `d_out x d_in`).
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    operators: Vec<ComplexMatrix>,
}

impl KrausChannel {
    pub fn new(operators: Vec<ComplexMatrix>) -> Result<Self> {
        let first = operators.first().ok_or(StateError::EmptyDims)?;
        let (d_out, d_in) = first.shape();
        if let Some(bad) = operators.iter().find(|k| k.shape() != (d_out, d_in)) {
            return Err(StateError::DimensionMismatch { expected: d_out, found: bad.nrows() });
        }
        let mut sum = ComplexMatrix::zeros(d_in, d_in);
        for k in &operators {
            sum += k.adjoint() * k;
        }
        let deviation = (sum - ComplexMatrix::identity(d_in, d_in))
            .iter()
            .fold(0.0f64, |m, z| m.max(z.norm()));
        if deviation > STRUCTURAL_TOL {
            return Err(StateError::IncompleteChannel { deviation });
        }
        Ok(Self { operators })
    }

    pub fn identity(d: usize) -> Self {
        Self { operators: vec![ComplexMatrix::identity(d, d)] }
    }

    /// Discards the input and prepares `state`.
    pub fn replace_with(state: &PureState, d_in: usize) -> Self {
        let psi = state.amplitudes();
        let operators = (0..d_in)
            .map(|i| ComplexMatrix::from_fn(psi.len(), d_in, |r, c| if c == i { psi[r] } else { ZERO }))
            .collect();
        Self { operators }
    }

    /// Complete dephasing in the computational basis.
    pub fn dephasing(d: usize) -> Self {
        let operators = (0..d)
            .map(|i| ComplexMatrix::from_fn(d, d, |r, c| if r == i && c == i { ONE } else { ZERO }))
            .collect();
        Self { operators }
    }

    /// Random channel from a Haar-like isometry `C^d_in -> C^d_out (x) C^n_kraus`.
    pub fn random<R: Rng + ?Sized>(d_in: usize, d_out: usize, n_kraus: usize, rng: &mut R) -> Self {
        let rows = d_out * n_kraus;
        assert!(rows >= d_in, "isometry needs d_out * n_kraus >= d_in");
        let g = ComplexMatrix::from_fn(rows, d_in, |_, _| gaussian_complex(rng));
        let q = g.qr().q();
        let operators = (0..n_kraus)
            .map(|k| q.view((k * d_out, 0), (d_out, d_in)).into_owned())
            .collect();
        Self { operators }
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn input_dim(&self) -> usize {
        self.operators[0].ncols()
    }

    pub fn output_dim(&self) -> usize {
        self.operators[0].nrows()
    }
}

/// `sum_k (I (x) K_k (x) I) rho (I (x) K_k (x) I)^dag` with `K_k` acting on `target`.
pub fn apply_local_channel(rho: &DensityMatrix, ch: &KrausChannel, target: &str) -> Result<DensityMatrix> {
    let pos = rho.position(target)?;
    if ch.input_dim() != rho.dims[pos] {
        return Err(StateError::DimensionMismatch { expected: rho.dims[pos], found: ch.input_dim() });
    }
    let pre: usize = rho.dims[..pos].iter().product();
    let post: usize = rho.dims[pos + 1..].iter().product();
    let id_pre = ComplexMatrix::identity(pre, pre);
    let id_post = ComplexMatrix::identity(post, post);
    let d_out = ch.output_dim() * pre * post;
    let mut out = ComplexMatrix::zeros(d_out, d_out);
    for k in ch.operators() {
        let lifted = id_pre.kronecker(k).kronecker(&id_post);
        out += &lifted * &rho.matrix * lifted.adjoint();
    }
    let mut dims = rho.dims.clone();
    dims[pos] = ch.output_dim();
    Ok(DensityMatrix::from_parts(out, dims, rho.labels.clone()))
}

/// Deterministic generator for a 64-bit seed.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent sub-seed for item `index` of a seeded batch (splitmix64).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-distributed pure state: a normalized vector of i.i.d. complex Gaussians.
pub fn random_haar_pure(dims: &[usize], seed: u64) -> Result<PureState> {
    random_haar_pure_with(dims, &mut rng_from_seed(seed))
}

pub fn random_haar_pure_with<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> Result<PureState> {
    let n: usize = dims.iter().product();
    check_dims(dims, n)?;
    let v = ComplexVector::from_fn(n, |_, _| gaussian_complex(rng));
    PureState::normalized(v, dims)
}

/// Marginal of a Haar pure state on `dims` plus an ancilla of `ancilla_dim`.
pub fn random_density(dims: &[usize], ancilla_dim: usize, seed: u64) -> Result<DensityMatrix> {
    random_density_with(dims, ancilla_dim, &mut rng_from_seed(seed))
}

pub fn random_density_with<R: Rng + ?Sized>(dims: &[usize], ancilla_dim: usize, rng: &mut R) -> Result<DensityMatrix> {
    if ancilla_dim == 0 {
        return Err(StateError::ZeroDimension);
    }
    let n: usize = dims.iter().product();
    check_dims(dims, n)?;
    let mut full_dims = dims.to_vec();
    full_dims.push(ancilla_dim);
    let psi = random_haar_pure_with(&full_dims, rng)?;
    let amps = psi.amplitudes();
    // rho = X X^dag with X the n x ancilla reshaping of psi
    let x = ComplexMatrix::from_fn(n, ancilla_dim, |i, k| amps[i * ancilla_dim + k]);
    let m = &x * x.adjoint();
    Ok(DensityMatrix::from_parts(m, dims.to_vec(), default_labels(dims.len())))
}

/// Haar-random unitary of size `d` (QR of a Ginibre matrix with phase fix).
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(d, d, |_, _| gaussian_complex(rng));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..d {
        let diag = r[(j, j)];
        if diag.norm() > 0.0 {
            let phase = diag / diag.norm();
            for i in 0..d {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}
