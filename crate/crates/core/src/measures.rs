//! Correlation measures with a qubit on the measured side: entropies, quantum
//! discord under projective measurements, geometric discord and the
//! two-qubit concurrence baseline.

use crate::optimize::{minimize_over_bases, OptimizerConfig};
use crate::qstate::{
    eig_unchecked, eigenvalues_hermitian, partial_trace, qubit_blocks, ComplexMatrix, DensityMatrix, PureState,
    QubitBasis, StateError,
};
use nalgebra::SVD;
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

/// Eigenvalues below this are treated as zero inside entropies.
pub const ENTROPY_CUTOFF: f64 = 1e-12;
/// Measure values within this distance below zero are clipped to zero.
pub const VALUE_FLOOR: f64 = 1e-9;
/// Spectral weight below which a component is dropped from low-rank factors.
const RANK_CUTOFF: f64 = 1e-13;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeasureError {
    #[error("measured subsystem `{label}` has dimension {dim}; only qubits are supported")]
    MeasuredNotQubit { label: String, dim: usize },
    #[error("bad bipartition: {0}")]
    BadSplit(String),
    #[error("wrong dimensions: {0}")]
    WrongDims(String),
    #[error(transparent)]
    State(#[from] StateError),
}

pub type Result<T> = std::result::Result<T, MeasureError>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasureResult {
    pub value: f64,
    pub argmin_basis: Option<QubitBasis>,
    pub optimizer_evals: usize,
    pub converged: bool,
}

impl MeasureResult {
    pub(crate) fn exact(value: f64) -> Self {
        Self { value, argmin_basis: None, optimizer_evals: 0, converged: true }
    }
}

fn clip(value: f64) -> f64 {
    if (-VALUE_FLOOR..0.0).contains(&value) {
        0.0
    } else {
        value
    }
}

/// `-sum l log2 l` over the given spectrum.
pub fn entropy_of_spectrum(values: &[f64]) -> f64 {
    values
        .iter()
        .filter(|&&l| l > ENTROPY_CUTOFF)
        .map(|&l| -l * l.log2())
        .sum::<f64>()
        .max(0.0)
}

/// Von Neumann entropy in bits.
pub fn vn_entropy(rho: &DensityMatrix) -> f64 {
    entropy_of_spectrum(&rho.eigenvalues())
}

/// `S(A) + S(B) - S(AB)`; the two label sets must partition the register.
pub fn mutual_information(rho: &DensityMatrix, a: &[&str], b: &[&str]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(MeasureError::BadSplit("both sides must be nonempty".into()));
    }
    let mut all: Vec<&str> = a.iter().chain(b).copied().collect();
    all.sort_unstable();
    all.dedup();
    if all.len() != a.len() + b.len() || all.len() != rho.labels().len() {
        return Err(MeasureError::BadSplit(format!("{a:?} | {b:?} does not partition {:?}", rho.labels())));
    }
    let s_a = vn_entropy(&partial_trace(rho, a)?);
    let s_b = vn_entropy(&partial_trace(rho, b)?);
    Ok(s_a + s_b - vn_entropy(rho))
}

fn measured_qubit(rho: &DensityMatrix, measured: &str) -> Result<usize> {
    let pos = rho.position(measured)?;
    let dim = rho.dims()[pos];
    if dim != 2 {
        return Err(MeasureError::MeasuredNotQubit { label: measured.to_string(), dim });
    }
    Ok(pos)
}

/// Conditional-entropy objective for a measurement on one qubit:
/// `sum_i q_i S(rest | i)` as a function of the basis.
struct ConditionalEntropy {
    /// `blocks[a][b]`, either the `<a|rho|b>` blocks on the rest (size r) or
    /// the Gram blocks `F_a^dag F_b` of a rank-R factor `rho = F F^dag` (size R).
    blocks: [[ComplexMatrix; 2]; 2],
    gram_form: bool,
}

impl ConditionalEntropy {
    fn new(rho: &DensityMatrix, target: usize) -> Self {
        let blocks = qubit_blocks(rho.matrix(), rho.dims(), target);
        let r = blocks[0][0].nrows();
        if r <= 2 {
            return Self { blocks, gram_form: false };
        }
        let eig = eig_unchecked(rho.matrix());
        let rank = eig.values.iter().filter(|&&l| l > RANK_CUTOFF).count().max(1);
        if rank >= r {
            return Self { blocks, gram_form: false };
        }
        let n = rho.dim();
        let factor = ComplexMatrix::from_fn(n, rank, |i, k| eig.vectors[(i, k)] * eig.values[k].max(0.0).sqrt());
        let halves = qubit_row_halves(&factor, rho.dims(), target);
        let gram = |a: usize, b: usize| halves[a].adjoint() * &halves[b];
        Self { blocks: [[gram(0, 0), gram(0, 1)], [gram(1, 0), gram(1, 1)]], gram_form: true }
    }

    fn eval(&self, basis: &QubitBasis) -> f64 {
        basis
            .vectors()
            .iter()
            .map(|u| {
                // rest-space form: M = sum conj(u_a) u_b rho_ab
                // Gram form: X^dag X = sum u_a conj(u_b) F_a^dag F_b
                let mut m = ComplexMatrix::zeros(self.blocks[0][0].nrows(), self.blocks[0][0].ncols());
                for a in 0..2 {
                    for b in 0..2 {
                        let w = if self.gram_form { u[a] * u[b].conj() } else { u[a].conj() * u[b] };
                        m += self.blocks[a][b].map(|z| z * w);
                    }
                }
                let values = eigenvalues_hermitian(&m);
                let q: f64 = values.iter().sum();
                if q <= ENTROPY_CUTOFF {
                    return 0.0;
                }
                let eta: f64 = values.iter().filter(|&&l| l > ENTROPY_CUTOFF).map(|&l| -l * l.log2()).sum();
                eta + q * q.log2()
            })
            .sum()
    }
}

/// Rows of `factor` split by the digit of the qubit at `target`, each half
/// ordered by the remaining subsystems.
fn qubit_row_halves(factor: &ComplexMatrix, dims: &[usize], target: usize) -> [ComplexMatrix; 2] {
    let rest: Vec<usize> = (0..dims.len()).filter(|&p| p != target).collect();
    let rest_off = crate::qstate::subsystem_offsets(dims, &rest);
    let stride = crate::qstate::strides(dims)[target];
    let half = |a: usize| ComplexMatrix::from_fn(rest_off.len(), factor.ncols(), |i, k| factor[(a * stride + rest_off[i], k)]);
    [half(0), half(1)]
}

/// Quantum discord with a rank-one projective measurement on the qubit
/// `measured`: `I(rho) - max_basis I(Pi(rho))` on `measured` plus `rest`.
pub fn discord(rho: &DensityMatrix, measured: &str, rest: &[&str]) -> Result<MeasureResult> {
    discord_with(rho, measured, rest, &OptimizerConfig::default())
}

pub fn discord_with(rho: &DensityMatrix, measured: &str, rest: &[&str], cfg: &OptimizerConfig) -> Result<MeasureResult> {
    if rest.is_empty() || rest.contains(&measured) {
        return Err(MeasureError::BadSplit(format!("{measured} | {rest:?}")));
    }
    let keep: Vec<&str> = std::iter::once(measured).chain(rest.iter().copied()).collect();
    let state = if keep.len() == rho.labels().len() { rho.clone() } else { partial_trace(rho, &keep)? };
    let target = measured_qubit(&state, measured)?;
    let s_head = vn_entropy(&partial_trace(&state, &[measured])?);
    let s_joint = vn_entropy(&state);
    let objective = ConditionalEntropy::new(&state, target);
    let opt = minimize_over_bases(|b| objective.eval(b), cfg);
    Ok(MeasureResult {
        value: clip(s_head - s_joint + opt.value),
        argmin_basis: Some(opt.basis),
        optimizer_evals: opt.evals,
        converged: opt.converged,
    })
}

/// `Tr Pi_n(rho)^2 = |X0|^2 / 2 + n^T G n / 2`, where `X_mu = Tr_q[(sigma_mu (x) 1) rho]`
/// and `G_kl = Tr(X_k X_l)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct DephasedPurity {
    pub purity: f64,
    pub x0_sq: f64,
    pub gram: [[f64; 3]; 3],
}

impl DephasedPurity {
    pub fn new(rho: &DensityMatrix, target: usize) -> Self {
        let [[r00, r01], [r10, r11]] = qubit_blocks(rho.matrix(), rho.dims(), target);
        let i = Complex64::new(0.0, 1.0);
        let x0 = &r00 + &r11;
        let xs = [&r01 + &r10, (&r01 - &r10).map(|z| z * i), &r00 - &r11];
        let inner = |a: &ComplexMatrix, b: &ComplexMatrix| -> f64 {
            a.iter().zip(b.iter()).map(|(x, y)| (x * y.conj()).re).sum()
        };
        let mut gram = [[0.0; 3]; 3];
        for k in 0..3 {
            for l in k..3 {
                gram[k][l] = inner(&xs[k], &xs[l]);
                gram[l][k] = gram[k][l];
            }
        }
        Self { purity: rho.purity(), x0_sq: inner(&x0, &x0), gram }
    }

    pub fn dephased_purity(&self, basis: &QubitBasis) -> f64 {
        let n = basis.bloch_vector();
        let mut quad = 0.0;
        for k in 0..3 {
            for l in 0..3 {
                quad += n[k] * self.gram[k][l] * n[l];
            }
        }
        0.5 * (self.x0_sq + quad)
    }
}

/// Minimal squared Hilbert–Schmidt distance to states that are
/// classical-quantum with respect to the qubit `measured`, computed as
/// `Tr rho^2 - max_basis Tr Pi(rho)^2`.
pub fn geometric_discord(rho: &DensityMatrix, measured: &str) -> Result<MeasureResult> {
    geometric_discord_with(rho, measured, &OptimizerConfig::default())
}

pub fn geometric_discord_with(rho: &DensityMatrix, measured: &str, cfg: &OptimizerConfig) -> Result<MeasureResult> {
    let target = measured_qubit(rho, measured)?;
    let objective = DephasedPurity::new(rho, target);
    let opt = minimize_over_bases(|b| objective.purity - objective.dephased_purity(b), cfg);
    Ok(MeasureResult {
        value: clip(opt.value),
        argmin_basis: Some(opt.basis),
        optimizer_evals: opt.evals,
        converged: opt.converged,
    })
}

/// `2 (1 - p) p` with `p` the larger eigenvalue of the measured qubit's marginal.
pub fn geometric_discord_pure(psi: &PureState, measured: &str) -> Result<f64> {
    let rho = psi.density();
    measured_qubit(&rho, measured)?;
    let head = partial_trace(&rho, &[measured])?;
    let p = head.eigenvalues()[0].clamp(0.5, 1.0);
    Ok(2.0 * (1.0 - p) * p)
}

fn spin_flip_2q() -> ComplexMatrix {
    // sigma_y (x) sigma_y
    let mut yy = ComplexMatrix::zeros(4, 4);
    let one = Complex64::new(1.0, 0.0);
    yy[(0, 3)] = -one;
    yy[(1, 2)] = one;
    yy[(2, 1)] = one;
    yy[(3, 0)] = -one;
    yy
}

/// Wootters concurrence `max(0, l1 - l2 - l3 - l4)`, with the `l_i` obtained
/// as singular values of `tau_ij = w_i^T (Y (x) Y) w_j` over the subnormalized
/// eigenvectors `w_i` of `rho`.
pub fn concurrence_2q(rho: &DensityMatrix) -> Result<f64> {
    if rho.dims() != [2, 2] {
        return Err(MeasureError::WrongDims(format!("expected two qubits, found dims {:?}", rho.dims())));
    }
    let eig = eig_unchecked(rho.matrix());
    let kept: Vec<usize> = (0..4).filter(|&k| eig.values[k] > RANK_CUTOFF).collect();
    if kept.is_empty() {
        return Ok(0.0);
    }
    let w = ComplexMatrix::from_fn(4, kept.len(), |i, k| eig.vectors[(i, kept[k])] * eig.values[kept[k]].sqrt());
    let tau = w.transpose() * spin_flip_2q() * &w;
    let mut s: Vec<f64> = SVD::new(tau, false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    let c = s[0] - s[1..].iter().sum::<f64>();
    Ok(c.clamp(0.0, 1.0))
}

/// Squared concurrence of the `head | rest` split of a three-qubit pure
/// state, `4 det rho_head`.
pub fn tangle_pure(psi: &PureState, head: &str) -> Result<f64> {
    if psi.dims() != [2, 2, 2] {
        return Err(MeasureError::WrongDims(format!("expected three qubits, found dims {:?}", psi.dims())));
    }
    let rho = partial_trace(&psi.density(), &[head])?;
    let m = rho.matrix();
    let det = m[(0, 0)].re * m[(1, 1)].re - m[(0, 1)].norm_sqr();
    Ok((4.0 * det).clamp(0.0, 1.0))
}
