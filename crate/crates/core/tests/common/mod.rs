//! Brute-force reference computations, written without the library's measure code.
#![allow(dead_code)]

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use qcorr::qstate::{ComplexMatrix, DensityMatrix, PureState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    let h = (m + m.adjoint()).map(|z| z * 0.5);
    SymmetricEigen::new(h).eigenvalues.iter().copied().collect()
}

pub fn entropy(m: &ComplexMatrix) -> f64 {
    hermitian_eigenvalues(m).iter().filter(|&&x| x > 1e-15).map(|&x| -x * x.log2()).sum()
}

/// `|v0>, |v1>` with `|v0>` at polar angle `theta`, azimuth `phi` on the Bloch sphere.
pub fn basis(theta: f64, phi: f64) -> [[Complex64; 2]; 2] {
    let (ct, st) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let e = Complex64::from_polar(1.0, phi);
    [[c(ct), e * st], [-e.conj() * st, c(ct)]]
}

/// `(<v| (x) I) rho (|v> (x) I)` for a qubit in the first slot.
pub fn conditional_block(rho: &ComplexMatrix, v: &[Complex64; 2]) -> ComplexMatrix {
    let d = rho.nrows() / 2;
    DMatrix::from_fn(d, d, |r, s| {
        let mut acc = c(0.0);
        for i in 0..2 {
            for j in 0..2 {
                acc += v[i].conj() * rho[(i * d + r, j * d + s)] * v[j];
            }
        }
        acc
    })
}

pub fn trace_out_first_qubit(rho: &ComplexMatrix) -> ComplexMatrix {
    let d = rho.nrows() / 2;
    DMatrix::from_fn(d, d, |r, s| rho[(r, s)] + rho[(d + r, d + s)])
}

pub fn first_qubit_marginal(rho: &ComplexMatrix) -> ComplexMatrix {
    let d = rho.nrows() / 2;
    DMatrix::from_fn(2, 2, |i, j| (0..d).map(|k| rho[(i * d + k, j * d + k)]).sum())
}

/// Discord with the first qubit measured: minimum over a fine (theta, phi)
/// grid followed by repeated local grid zooms.
pub fn discord_grid(rho: &ComplexMatrix) -> f64 {
    let s_a = entropy(&first_qubit_marginal(rho));
    let s_ab = entropy(rho);
    let objective = |theta: f64, phi: f64| {
        let mut total = 0.0;
        for v in basis(theta, phi) {
            let block = conditional_block(rho, &v);
            let p: f64 = block.trace().re;
            if p > 1e-15 {
                total += p * entropy(&block.map(|z| z / p));
            }
        }
        total
    };
    let best = zoom_minimize(objective, 64, 128, 10);
    s_a - s_ab + best
}

/// Grid search on the sphere followed by `zooms` rounds of 21x21 local grids.
pub fn zoom_minimize(f: impl Fn(f64, f64) -> f64, n_theta: usize, n_phi: usize, zooms: usize) -> f64 {
    let (mut dt, mut dp) = (PI / n_theta as f64, 2.0 * PI / n_phi as f64);
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..=n_theta {
        for j in 0..n_phi {
            let (t, p) = (i as f64 * dt, j as f64 * dp);
            let v = f(t, p);
            if v < best.0 {
                best = (v, t, p);
            }
        }
    }
    for _ in 0..zooms {
        let (_, t0, p0) = best;
        for i in -10..=10 {
            for j in -10..=10 {
                let (t, p) = (t0 + i as f64 * dt / 10.0, p0 + j as f64 * dp / 10.0);
                let v = f(t, p);
                if v < best.0 {
                    best = (v, t, p);
                }
            }
        }
        dt /= 5.0;
        dp /= 5.0;
    }
    best.0
}

fn project_to_simplex(values: &[f64]) -> Vec<f64> {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut shift = 0.0;
    for (k, &u) in sorted.iter().enumerate() {
        cumulative += u;
        let t = (cumulative - 1.0) / (k + 1) as f64;
        if u - t > 0.0 {
            shift = t;
        }
    }
    values.iter().map(|&v| (v - shift).max(0.0)).collect()
}

/// Projects block-diagonal `X_0 (+) X_1` onto positive matrices with unit total trace.
fn project_blocks(blocks: &[ComplexMatrix; 2]) -> [ComplexMatrix; 2] {
    let eig: Vec<SymmetricEigen<Complex64, nalgebra::Dyn>> =
        blocks.iter().map(|b| SymmetricEigen::new((b + b.adjoint()).map(|z| z * 0.5))).collect();
    let all: Vec<f64> = eig.iter().flat_map(|e| e.eigenvalues.iter().copied()).collect();
    let projected = project_to_simplex(&all);
    let d = blocks[0].nrows();
    let rebuild = |k: usize| {
        let e = &eig[k];
        let lam = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            d,
            projected[k * d..(k + 1) * d].iter().map(|&x| c(x)),
        ));
        &e.eigenvectors * lam * e.eigenvectors.adjoint()
    };
    [rebuild(0), rebuild(1)]
}

fn cq_state(v: &[[Complex64; 2]; 2], x: &[ComplexMatrix; 2]) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(2 * x[0].nrows(), 2 * x[0].nrows());
    for k in 0..2 {
        let proj = DMatrix::from_fn(2, 2, |i, j| v[k][i] * v[k][j].conj());
        out += proj.kronecker(&x[k]);
    }
    out
}

fn hs_distance_sq(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm_sqr()).sum()
}

/// Minimum of `|rho - chi|^2` over classical-quantum states
/// `chi = sum_k |k><k| (x) X_k` with the first qubit classical. For each
/// basis the blocks are found by projected gradient descent from a random
/// start; the basis is searched by zooming grids.
pub fn cq_distance_brute_force(rho: &ComplexMatrix, seed: u64) -> f64 {
    let d = rho.nrows() / 2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut random_block = || {
        let l = DMatrix::from_fn(d, d, |_, _| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
        &l * l.adjoint()
    };
    let start = project_blocks(&[random_block(), random_block()]);
    let inner = |theta: f64, phi: f64| {
        let v = basis(theta, phi);
        let mut x = start.clone();
        for _ in 0..40 {
            let chi = cq_state(&v, &x);
            let residual = rho - &chi;
            // gradient of |rho - chi|^2 with respect to X_k is -2 (<k| residual |k>)
            let step: [ComplexMatrix; 2] =
                std::array::from_fn(|k| &x[k] + conditional_block(&residual, &v[k]).map(|z| z * 0.6));
            x = project_blocks(&step);
        }
        hs_distance_sq(rho, &cq_state(&v, &x))
    };
    zoom_minimize(inner, 16, 32, 8)
}

/// Wootters concurrence from the spectrum of `sqrt(sqrt(rho) rho~ sqrt(rho))`.
pub fn concurrence_oracle(rho: &ComplexMatrix) -> f64 {
    let yy = {
        let y = DMatrix::from_row_slice(2, 2, &[c(0.0), -I, I, c(0.0)]);
        y.kronecker(&y)
    };
    let tilde = &yy * rho.map(|z| z.conj()) * &yy;
    let e = SymmetricEigen::new((rho + rho.adjoint()).map(|z| z * 0.5));
    let sqrt_rho = &e.eigenvectors
        * DMatrix::from_diagonal(&e.eigenvalues.map(|x| c(x.max(0.0).sqrt())))
        * e.eigenvectors.adjoint();
    let m = &sqrt_rho * tilde * &sqrt_rho;
    // roundoff-level eigenvalues would contribute their square roots
    let mut lam: Vec<f64> =
        hermitian_eigenvalues(&m).iter().map(|&x| if x > 1e-14 { x.sqrt() } else { 0.0 }).collect();
    lam.sort_by(|a, b| b.total_cmp(a));
    (lam[0] - lam[1] - lam[2] - lam[3]).max(0.0)
}

/// Smaller squared Schmidt coefficient across `first qubit | rest`.
pub fn schmidt_p(psi: &PureState) -> f64 {
    let amps = psi.amplitudes();
    let d = amps.len() / 2;
    let m = DMatrix::from_fn(2, d, |i, k| amps[i * d + k]);
    let s = m.svd(false, false).singular_values;
    s.iter().map(|x| x * x).fold(f64::INFINITY, f64::min)
}

/// `sum_{b,b'} |sum_c psi(0,b,c) psi*(1,b',c)|^2` plus the same with `b`, `c`
/// exchanged, times two: the squared distance of both two-party marginals
/// from their computational-basis dephasing on the first qubit.
pub fn marginal_coherence_sq(psi: &PureState) -> f64 {
    let a = psi.amplitudes();
    let amp = |x: usize, y: usize, z: usize| a[4 * x + 2 * y + z];
    let mut total = 0.0;
    for u in 0..2 {
        for w in 0..2 {
            let keep_b: Complex64 = (0..2).map(|k| amp(0, u, k) * amp(1, w, k).conj()).sum();
            let keep_c: Complex64 = (0..2).map(|k| amp(0, k, u) * amp(1, k, w).conj()).sum();
            total += keep_b.norm_sqr() + keep_c.norm_sqr();
        }
    }
    2.0 * total
}

pub fn matrix(rho: &DensityMatrix) -> ComplexMatrix {
    rho.matrix().clone()
}
