//! Two-stage minimization over single-qubit measurement bases: a coarse
//! `(theta, phi)` grid followed by Nelder–Mead refinement from the best grid
//! points.

use crate::qstate::QubitBasis;
use serde::Serialize;
use std::f64::consts::PI;

/// Accuracy attributed to a refined optimum when sizing downstream tolerances.
pub const OPTIMIZER_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimizerConfig {
    pub grid_theta: usize,
    pub grid_phi: usize,
    /// Number of best grid points refined locally.
    pub starts: usize,
    pub max_refine_steps: usize,
    /// Refinement stops once the simplex values agree to this spread.
    pub improvement_tol: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self { grid_theta: 64, grid_phi: 128, starts: 3, max_refine_steps: 200, improvement_tol: 1e-10 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Optimum {
    pub basis: QubitBasis,
    pub value: f64,
    pub evals: usize,
    pub converged: bool,
}

/// Minimizes `objective` over qubit bases.
pub fn minimize_over_bases<F>(objective: F, cfg: &OptimizerConfig) -> Optimum
where
    F: Fn(&QubitBasis) -> f64,
{
    let d_theta = PI / cfg.grid_theta as f64;
    let d_phi = 2.0 * PI / cfg.grid_phi as f64;
    let mut grid = Vec::with_capacity(cfg.grid_theta * cfg.grid_phi);
    for i in 0..cfg.grid_theta {
        let theta = (i as f64 + 0.5) * d_theta;
        for j in 0..cfg.grid_phi {
            let phi = j as f64 * d_phi;
            grid.push((objective(&QubitBasis { theta, phi }), theta, phi));
        }
    }
    let mut evals = grid.len();
    grid.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut best: Option<Optimum> = None;
    for &(value, theta, phi) in grid.iter().take(cfg.starts.max(1)) {
        // off-lattice step so the initial simplex is not mirror-symmetric about a pole
        let local = nelder_mead(&objective, (theta, phi, value), 0.7 * d_theta, cfg);
        evals += local.evals;
        let candidate = Optimum { evals: 0, ..local };
        if best.is_none_or(|b| candidate.value < b.value) {
            best = Some(candidate);
        }
    }
    let mut best = best.expect("grid is nonempty");
    best.evals = evals;
    best
}

/// Nelder–Mead in tangent-plane coordinates around the start direction, which
/// keeps the chart regular at the poles.
fn nelder_mead<F>(objective: &F, start: (f64, f64, f64), step: f64, cfg: &OptimizerConfig) -> Optimum
where
    F: Fn(&QubitBasis) -> f64,
{
    let (theta, phi) = (start.0, start.1);
    let n0 = QubitBasis { theta, phi }.bloch_vector();
    let e1 = [theta.cos() * phi.cos(), theta.cos() * phi.sin(), -theta.sin()];
    let e2 = [-phi.sin(), phi.cos(), 0.0];
    let chart = |p: [f64; 2]| {
        QubitBasis::from_bloch([
            n0[0] + p[0] * e1[0] + p[1] * e2[0],
            n0[1] + p[0] * e1[1] + p[1] * e2[1],
            n0[2] + p[0] * e1[2] + p[1] * e2[2],
        ])
    };
    let eval = |p: [f64; 2]| objective(&chart(p));
    let mut evals = 0usize;
    let mut simplex: Vec<([f64; 2], f64)> = vec![([0.0, 0.0], start.2)];
    for p in [[step, 0.0], [0.0, step]] {
        evals += 1;
        simplex.push((p, eval(p)));
    }

    let mut converged = false;
    for _ in 0..cfg.max_refine_steps {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        if simplex[2].1 - simplex[0].1 < cfg.improvement_tol {
            converged = true;
            break;
        }
        let centroid = [
            0.5 * (simplex[0].0[0] + simplex[1].0[0]),
            0.5 * (simplex[0].0[1] + simplex[1].0[1]),
        ];
        let worst = simplex[2];
        let along = |t: f64| {
            [centroid[0] + t * (worst.0[0] - centroid[0]), centroid[1] + t * (worst.0[1] - centroid[1])]
        };

        let reflected = along(-1.0);
        let f_r = eval(reflected);
        evals += 1;
        if f_r < simplex[0].1 {
            let expanded = along(-2.0);
            let f_e = eval(expanded);
            evals += 1;
            simplex[2] = if f_e < f_r { (expanded, f_e) } else { (reflected, f_r) };
        } else if f_r < simplex[1].1 {
            simplex[2] = (reflected, f_r);
        } else {
            let (contracted, f_c) = if f_r < worst.1 {
                let p = along(-0.5);
                (p, eval(p))
            } else {
                let p = along(0.5);
                (p, eval(p))
            };
            evals += 1;
            if f_c < worst.1.min(f_r) {
                simplex[2] = (contracted, f_c);
            } else {
                let best = simplex[0].0;
                for vertex in simplex.iter_mut().skip(1) {
                    let p = [0.5 * (best[0] + vertex.0[0]), 0.5 * (best[1] + vertex.0[1])];
                    *vertex = (p, eval(p));
                    evals += 1;
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (p, value) = simplex[0];
    Optimum { basis: chart(p), value, evals, converged }
}
