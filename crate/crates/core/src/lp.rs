//! Dense two-phase simplex for small linear programs.
//!
//! Problems are `min c^T x` subject to `E x = f` with per-variable bounds.
//! A variable is either nonnegative (optionally with a finite upper bound) or
//! free. Free variables are split internally; finite upper bounds are handled
//! by bound flipping, so they cost no extra rows.

use crate::error::DepthError;
use crate::linalg::Matrix;

const PIVOT_TOL: f64 = 1e-9;
const FEASIBILITY_TOL: f64 = 1e-8;
const OPTIMALITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LowerBound {
    Zero,
    Free,
}

#[derive(Debug, Clone)]
pub struct LpProblem {
    pub objective: Vec<f64>,
    pub constraints: Matrix,
    pub rhs: Vec<f64>,
    pub lower: Vec<LowerBound>,
    pub upper: Vec<Option<f64>>,
}

impl LpProblem {
    /// All variables nonnegative, no upper bounds.
    pub fn new(objective: Vec<f64>, constraints: Matrix, rhs: Vec<f64>) -> Self {
        let m = objective.len();
        Self {
            objective,
            constraints,
            rhs,
            lower: vec![LowerBound::Zero; m],
            upper: vec![None; m],
        }
    }

    pub fn with_upper_bounds(mut self, upper: Vec<Option<f64>>) -> Self {
        self.upper = upper;
        self
    }

    pub fn with_free(mut self, var: usize) -> Self {
        self.lower[var] = LowerBound::Free;
        self
    }

    fn validate(&self) -> Result<(), DepthError> {
        let m = self.objective.len();
        if self.constraints.cols() != m {
            return Err(DepthError::DimensionMismatch {
                expected: m,
                found: self.constraints.cols(),
            });
        }
        if self.constraints.rows() != self.rhs.len() {
            return Err(DepthError::DimensionMismatch {
                expected: self.constraints.rows(),
                found: self.rhs.len(),
            });
        }
        if self.lower.len() != m || self.upper.len() != m {
            return Err(DepthError::InvalidProgram("bound vectors have wrong length".into()));
        }
        if self.objective.iter().chain(&self.rhs).any(|v| !v.is_finite()) {
            return Err(DepthError::NonFinite);
        }
        for (lo, up) in self.lower.iter().zip(&self.upper) {
            match (lo, up) {
                (LowerBound::Free, Some(_)) => {
                    return Err(DepthError::InvalidProgram(
                        "upper bounds on free variables are not supported".into(),
                    ))
                }
                (_, Some(u)) if u.is_nan() || *u < 0.0 => {
                    return Err(DepthError::InvalidProgram(format!("invalid upper bound {u}")))
                }
                _ => {}
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Optimum for `Optimal`, `+inf` for `Infeasible`, `-inf` for `Unbounded`.
    pub value: f64,
    /// Primal point for `Optimal`; empty otherwise.
    pub point: Vec<f64>,
}

enum Step {
    Optimal,
    Unbounded,
}

struct Tableau {
    rows: usize,
    /// Structural columns (after splitting free variables).
    structural: usize,
    width: usize,
    data: Vec<f64>,
    cost_row: Vec<f64>,
    cost_rhs: f64,
    basis: Vec<usize>,
    is_basic: Vec<bool>,
    upper: Vec<f64>,
    flipped: Vec<bool>,
    degenerate_limit: usize,
    iterations: usize,
    max_iterations: usize,
}

impl Tableau {
    fn rhs_col(&self) -> usize {
        self.width - 1
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.width + j]
    }

    fn rhs(&self, i: usize) -> f64 {
        self.data[i * self.width + self.width - 1]
    }

    /// Substitutes `x_j = u_j - x_j'` for the column `j`.
    fn flip(&mut self, j: usize) {
        let u = self.upper[j];
        let rc = self.rhs_col();
        for i in 0..self.rows {
            let idx = i * self.width;
            let a = self.data[idx + j];
            if a != 0.0 {
                self.data[idx + rc] -= a * u;
                self.data[idx + j] = -a;
            }
        }
        self.cost_rhs -= self.cost_row[j] * u;
        self.cost_row[j] = -self.cost_row[j];
        self.flipped[j] = !self.flipped[j];
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let w = self.width;
        let piv = self.data[r * w + j];
        for v in &mut self.data[r * w..(r + 1) * w] {
            *v /= piv;
        }
        let (before, rest) = self.data.split_at_mut(r * w);
        let (prow, after) = rest.split_at_mut(w);
        for row in before.chunks_mut(w).chain(after.chunks_mut(w)) {
            let factor = row[j];
            if factor != 0.0 {
                for (x, p) in row.iter_mut().zip(prow.iter()) {
                    *x -= factor * p;
                }
                row[j] = 0.0;
            }
        }
        let factor = self.cost_row[j];
        if factor != 0.0 {
            for (c, p) in self.cost_row.iter_mut().zip(prow.iter()) {
                *c -= factor * p;
            }
            self.cost_rhs -= factor * prow[w - 1];
            self.cost_row[j] = 0.0;
        }
        let leaving = self.basis[r];
        self.is_basic[leaving] = false;
        self.is_basic[j] = true;
        self.basis[r] = j;
    }

    /// Sets the cost row to the reduced costs of `costs` (indexed by column,
    /// in original orientation) under the current basis and flips.
    fn load_costs(&mut self, costs: &[f64]) {
        let cols = self.width - 1;
        let oriented: Vec<f64> = (0..cols)
            .map(|j| if self.flipped[j] { -costs[j] } else { costs[j] })
            .collect();
        self.cost_row = oriented.clone();
        self.cost_row.push(0.0);
        // Constant part from flipped variables: c_j u_j.
        self.cost_rhs = -(0..cols)
            .filter(|&j| self.flipped[j])
            .map(|j| costs[j] * self.upper[j])
            .sum::<f64>();
        for i in 0..self.rows {
            let cb = oriented[self.basis[i]];
            if cb == 0.0 {
                continue;
            }
            for j in 0..cols {
                self.cost_row[j] -= cb * self.at(i, j);
            }
            self.cost_rhs -= cb * self.rhs(i);
        }
        for &b in &self.basis {
            self.cost_row[b] = 0.0;
        }
    }

    fn run(&mut self, allowed: usize) -> Result<Step, DepthError> {
        let mut degenerate_run = 0usize;
        let mut bland = false;
        loop {
            self.iterations += 1;
            if self.iterations > self.max_iterations {
                return Err(DepthError::IterationLimit(self.max_iterations));
            }
            let entering = if bland {
                (0..allowed).find(|&j| !self.is_basic[j] && self.cost_row[j] < -OPTIMALITY_TOL)
            } else {
                let mut best = None;
                let mut best_val = -OPTIMALITY_TOL;
                for j in 0..allowed {
                    if !self.is_basic[j] && self.cost_row[j] < best_val {
                        best_val = self.cost_row[j];
                        best = Some(j);
                    }
                }
                best
            };
            let Some(j) = entering else {
                return Ok(Step::Optimal);
            };

            // Ratio test: (row, step, leaves at upper bound).
            let mut choice: Option<(usize, f64, bool)> = None;
            for i in 0..self.rows {
                let a = self.at(i, j);
                let b = self.basis[i];
                let cand = if a > PIVOT_TOL {
                    Some(((self.rhs(i) / a).max(0.0), false))
                } else if a < -PIVOT_TOL && self.upper[b].is_finite() {
                    Some((((self.upper[b] - self.rhs(i)) / -a).max(0.0), true))
                } else {
                    None
                };
                let Some((ratio, at_upper)) = cand else { continue };
                let better = match choice {
                    None => true,
                    Some((r, best, _)) => {
                        if ratio < best - 1e-12 * (1.0 + best) {
                            true
                        } else if ratio <= best + 1e-12 * (1.0 + best) {
                            if bland {
                                b < self.basis[r]
                            } else {
                                a.abs() > self.at(r, j).abs()
                            }
                        } else {
                            false
                        }
                    }
                };
                if better {
                    choice = Some((i, ratio, at_upper));
                }
            }

            let bound = self.upper[j];
            let step = match choice {
                Some((_, ratio, _)) if ratio < bound => ratio,
                _ if bound.is_finite() => {
                    self.flip(j);
                    degenerate_run = 0;
                    continue;
                }
                _ => return Ok(Step::Unbounded),
            };
            let (r, _, at_upper) = choice.expect("ratio test produced a row");
            let leaving = self.basis[r];
            self.pivot(r, j);
            if at_upper {
                self.flip(leaving);
            }
            if step <= 1e-12 {
                degenerate_run += 1;
                if degenerate_run > self.degenerate_limit {
                    bland = true;
                }
            } else {
                degenerate_run = 0;
            }
        }
    }
}

/// Solves the linear program with a dense two-phase simplex.
pub fn solve(problem: &LpProblem) -> Result<LpSolution, DepthError> {
    problem.validate()?;
    let m_vars = problem.objective.len();
    let rows = problem.rhs.len();

    // Column map: each original variable to (+column, optional -column).
    let mut columns: Vec<(usize, Option<usize>)> = Vec::with_capacity(m_vars);
    let mut structural = 0;
    for lo in &problem.lower {
        match lo {
            LowerBound::Zero => {
                columns.push((structural, None));
                structural += 1;
            }
            LowerBound::Free => {
                columns.push((structural, Some(structural + 1)));
                structural += 2;
            }
        }
    }

    let width = structural + rows + 1;
    let mut data = vec![0.0; rows * width];
    let mut upper = vec![f64::INFINITY; structural + rows];
    let mut costs = vec![0.0; structural + rows];
    for (v, &(pos, neg)) in columns.iter().enumerate() {
        costs[pos] = problem.objective[v];
        if let Some(u) = problem.upper[v] {
            upper[pos] = u;
        }
        if let Some(neg) = neg {
            costs[neg] = -problem.objective[v];
        }
    }
    for i in 0..rows {
        let sign = if problem.rhs[i] < 0.0 { -1.0 } else { 1.0 };
        let row = &mut data[i * width..(i + 1) * width];
        for (v, &(pos, neg)) in columns.iter().enumerate() {
            let a = problem.constraints[(i, v)] * sign;
            row[pos] = a;
            if let Some(neg) = neg {
                row[neg] = -a;
            }
        }
        row[structural + i] = 1.0;
        row[width - 1] = problem.rhs[i] * sign;
    }

    let mut is_basic = vec![false; structural + rows];
    for i in 0..rows {
        is_basic[structural + i] = true;
    }
    let mut tab = Tableau {
        rows,
        structural,
        width,
        data,
        cost_row: Vec::new(),
        cost_rhs: 0.0,
        basis: (structural..structural + rows).collect(),
        is_basic,
        upper,
        flipped: vec![false; structural + rows],
        degenerate_limit: 5 * m_vars.max(1),
        iterations: 0,
        max_iterations: 50 * (structural + rows) + 1000,
    };

    // Phase one: minimize the sum of artificials.
    let mut phase_one = vec![0.0; structural + rows];
    phase_one[structural..].iter_mut().for_each(|c| *c = 1.0);
    tab.load_costs(&phase_one);
    tab.run(structural)?;
    let infeasibility: f64 = (0..rows)
        .filter(|&i| tab.basis[i] >= structural)
        .map(|i| tab.rhs(i))
        .sum();
    let f_norm = problem.rhs.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if infeasibility > FEASIBILITY_TOL * (1.0 + f_norm) {
        return Ok(LpSolution {
            status: LpStatus::Infeasible,
            value: f64::INFINITY,
            point: Vec::new(),
        });
    }

    // Drive remaining artificials out of the basis where possible.
    for i in 0..rows {
        if tab.basis[i] < structural {
            continue;
        }
        let pick = (0..structural)
            .filter(|&j| !tab.is_basic[j])
            .max_by(|&a, &b| tab.at(i, a).abs().total_cmp(&tab.at(i, b).abs()));
        if let Some(j) = pick {
            if tab.at(i, j).abs() > PIVOT_TOL {
                let rc = tab.rhs_col();
                tab.data[i * width + rc] = 0.0;
                tab.pivot(i, j);
            }
        }
    }

    tab.load_costs(&costs);
    let status = match tab.run(structural)? {
        Step::Optimal => LpStatus::Optimal,
        Step::Unbounded => LpStatus::Unbounded,
    };
    if status == LpStatus::Unbounded {
        return Ok(LpSolution {
            status,
            value: f64::NEG_INFINITY,
            point: Vec::new(),
        });
    }

    let mut values = vec![0.0; structural];
    for i in 0..rows {
        let b = tab.basis[i];
        if b < structural {
            values[b] = tab.rhs(i);
        }
    }
    for (j, v) in values.iter_mut().enumerate() {
        if tab.flipped[j] {
            *v = tab.upper[j] - *v;
        }
        *v = v.clamp(0.0, tab.upper[j]);
    }
    let point: Vec<f64> = columns
        .iter()
        .map(|&(pos, neg)| values[pos] - neg.map_or(0.0, |n| values[n]))
        .collect();
    let value = point.iter().zip(&problem.objective).map(|(x, c)| x * c).sum();
    debug_assert_eq!(tab.structural, structural);
    Ok(LpSolution {
        status,
        value,
        point,
    })
}
