//! Minimization of `sum_i |n p_i - 1|^q` over the affine set of admissible
//! weight vectors, for finite `q > 1`.
//!
//! Feasible weights are parametrized as `p(z) = p_part + B z` with `B` an
//! orthonormal null-space basis of the constraint matrix, which turns the
//! problem into an unconstrained one in `z`. The descent is L-BFGS with an
//! Armijo backtracking line search.

use std::collections::VecDeque;
use std::sync::Arc;

use crate::error::DepthError;
use crate::linalg::{dot, norm2, HouseholderQr, Matrix};

/// Tuning knobs for [`minimize`].
#[derive(Debug, Clone, PartialEq)]
pub struct EngineConfig {
    /// Stop once `|grad| <= tolerance * (1 + f)`.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Line-search steps shorter than this (relative to `1 + |z|`) count as collapse.
    pub step_floor: f64,
    /// Number of stored curvature pairs.
    pub memory: usize,
    pub armijo: f64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            max_iterations: 10_000,
            step_floor: 1e-14,
            memory: 10,
            armijo: 1e-4,
        }
    }
}

/// Orthonormal basis of the null space, either explicit or as Householder
/// reflectors (`Q [0; z]`).
#[derive(Debug, Clone)]
pub enum NullBasis {
    Dense(Matrix),
    Householder(Arc<HouseholderQr>),
}

impl NullBasis {
    pub fn dim(&self) -> usize {
        match self {
            NullBasis::Dense(m) => m.cols(),
            NullBasis::Householder(qr) => qr.rows() - qr.rank_columns(),
        }
    }

    pub fn ambient(&self) -> usize {
        match self {
            NullBasis::Dense(m) => m.rows(),
            NullBasis::Householder(qr) => qr.rows(),
        }
    }

    /// `B z`.
    pub fn apply(&self, z: &[f64]) -> Vec<f64> {
        match self {
            NullBasis::Dense(m) => m.matvec(z).expect("basis width matches z"),
            NullBasis::Householder(qr) => qr.complement_apply(z),
        }
    }

    /// `B^T g`.
    pub fn apply_t(&self, g: &[f64]) -> Vec<f64> {
        match self {
            NullBasis::Dense(m) => (0..m.cols())
                .map(|j| (0..m.rows()).map(|i| m[(i, j)] * g[i]).sum())
                .collect(),
            NullBasis::Householder(qr) => qr.complement_apply_t(g),
        }
    }
}

/// The program `min_z sum_i |n p_i(z) - 1|^q` with `p(z) = p_part + B z`.
#[derive(Debug, Clone)]
pub struct NullspaceProgram {
    particular: Vec<f64>,
    basis: NullBasis,
    q: f64,
}

impl NullspaceProgram {
    pub fn new(particular: Vec<f64>, basis: NullBasis, q: f64) -> Result<Self, DepthError> {
        if !(q.is_finite() && q > 1.0) {
            return Err(DepthError::InvalidOrder(q.to_string()));
        }
        if basis.ambient() != particular.len() {
            return Err(DepthError::DimensionMismatch {
                expected: particular.len(),
                found: basis.ambient(),
            });
        }
        Ok(Self {
            particular,
            basis,
            q,
        })
    }

    pub fn n(&self) -> usize {
        self.particular.len()
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// Weight vector `p(z)`.
    pub fn weights(&self, z: &[f64]) -> Vec<f64> {
        let mut p = self.particular.clone();
        if !z.is_empty() {
            for (pi, bz) in p.iter_mut().zip(self.basis.apply(z)) {
                *pi += bz;
            }
        }
        p
    }

    /// `(1/n * f)^(1/q)`, the power-mean distance to uniform weights.
    pub fn discrepancy(&self, f: f64) -> f64 {
        (f / self.n() as f64).powf(1.0 / self.q)
    }
}

/// Objective `sum_i |n p_i(z) - 1|^q` and its gradient with respect to `z`.
pub fn objective_and_gradient(prog: &NullspaceProgram, z: &[f64]) -> (f64, Vec<f64>) {
    let p = prog.weights(z);
    let n = prog.n() as f64;
    let q = prog.q;
    let mut f = 0.0;
    let mut gp = Vec::with_capacity(p.len());
    for pi in &p {
        let r = n * pi - 1.0;
        let a = r.abs();
        f += a.powf(q);
        gp.push(q * n * r.signum() * a.powf(q - 1.0));
    }
    let g = if prog.dim() == 0 {
        Vec::new()
    } else {
        prog.basis.apply_t(&gp)
    };
    (f, g)
}

/// Result of a minimization: optimal weights, objective and discrepancy.
#[derive(Debug, Clone, PartialEq)]
pub struct Minimizer {
    pub weights: Vec<f64>,
    pub objective: f64,
    pub discrepancy: f64,
    pub iterations: usize,
}

fn axpy(a: f64, x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(xi, yi)| a * xi + yi).collect()
}

/// Two-loop recursion: returns `-H g`.
fn lbfgs_direction(g: &[f64], history: &VecDeque<(Vec<f64>, Vec<f64>, f64)>) -> Vec<f64> {
    let mut d: Vec<f64> = g.to_vec();
    let mut alphas = Vec::with_capacity(history.len());
    for (s, y, rho) in history.iter().rev() {
        let a = rho * dot(s, &d);
        for (di, yi) in d.iter_mut().zip(y) {
            *di -= a * yi;
        }
        alphas.push(a);
    }
    if let Some((s, y, _)) = history.back() {
        let gamma = dot(s, y) / dot(y, y);
        d.iter_mut().for_each(|v| *v *= gamma);
    } else {
        let gn = norm2(g);
        let scale = if gn > 1.0 { 1.0 / gn } else { 1.0 };
        d.iter_mut().for_each(|v| *v *= scale);
    }
    for ((s, y, rho), a) in history.iter().zip(alphas.iter().rev()) {
        let b = rho * dot(y, &d);
        for (di, si) in d.iter_mut().zip(s) {
            *di += (a - b) * si;
        }
    }
    d.iter_mut().for_each(|v| *v = -*v);
    d
}

/// Minimizes the program from `z = 0` (the particular solution).
pub fn minimize(prog: &NullspaceProgram, config: &EngineConfig) -> Result<Minimizer, DepthError> {
    let k = prog.dim();
    let mut z = vec![0.0; k];
    let (mut f, mut g) = objective_and_gradient(prog, &z);
    let finish = |z: &[f64], f: f64, iterations: usize| Minimizer {
        weights: prog.weights(z),
        objective: f,
        discrepancy: prog.discrepancy(f),
        iterations,
    };
    if k == 0 {
        return Ok(finish(&z, f, 0));
    }

    let mut history: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::with_capacity(config.memory);
    for iter in 0..config.max_iterations {
        if norm2(&g) <= config.tolerance * (1.0 + f) {
            return Ok(finish(&z, f, iter));
        }
        let mut d = lbfgs_direction(&g, &history);
        let mut slope = dot(&g, &d);
        if slope.is_nan() || slope >= 0.0 {
            history.clear();
            d = lbfgs_direction(&g, &history);
            slope = dot(&g, &d);
        }

        // Armijo backtracking; on collapse retry once along steepest descent.
        let mut accepted = None;
        for attempt in 0..2 {
            let d_norm = norm2(&d);
            let z_scale = 1.0 + norm2(&z);
            let mut step = 1.0;
            while step * d_norm > config.step_floor * z_scale {
                let trial = axpy(step, &d, &z);
                let (ft, gt) = objective_and_gradient(prog, &trial);
                // Below roundoff in f, accept on the directional derivative instead.
                let flat = ft <= f + 1e-14 * (1.0 + f.abs()) && dot(&gt, &d).abs() <= 0.9 * slope.abs();
                if ft <= f + config.armijo * step * slope || flat {
                    accepted = Some((trial, ft, gt, step));
                    break;
                }
                step *= 0.5;
            }
            if accepted.is_some() || attempt == 1 || history.is_empty() {
                break;
            }
            history.clear();
            d = lbfgs_direction(&g, &history);
            slope = dot(&g, &d);
        }
        let Some((z_new, f_new, g_new, step)) = accepted else {
            // Step size collapsed: no representable decrease remains.
            return Ok(finish(&z, f, iter));
        };

        let s: Vec<f64> = d.iter().map(|v| v * step).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 * norm2(&s) * norm2(&y) && sy > 0.0 {
            if history.len() == config.memory {
                history.pop_front();
            }
            history.push_back((s, y, 1.0 / sy));
        } else {
            history.clear();
        }
        z = z_new;
        f = f_new;
        g = g_new;
    }
    if norm2(&g) <= config.tolerance * (1.0 + f) {
        return Ok(finish(&z, f, config.max_iterations));
    }
    Err(DepthError::ConvergenceFailure {
        iterations: config.max_iterations,
        best: Box::new(finish(&z, f, config.max_iterations)),
    })
}
