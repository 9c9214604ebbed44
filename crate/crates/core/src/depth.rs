//! Depth functions over a finite data cloud.
//!
//! For a query `x`, admissible weights are the vectors `p` with
//! `sum p_i = 1` and `sum p_i X_i = x`. The L_q-norm zonoid depth is
//! `1 / (1 + S_q)` where `S_q` is the smallest power-mean distance
//! `((1/n) sum |n p_i - 1|^q)^(1/q)` over admissible `p` (max for `q = inf`).
//! The classical zonoid depth restricts `p` to be nonnegative and is zero
//! outside the convex hull.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::convex::{self, EngineConfig, Minimizer, NullBasis, NullspaceProgram};
use crate::error::DepthError;
use crate::linalg::{self, HouseholderQr, Matrix, SpdFactor};
use crate::lp::{self, LpProblem, LpStatus};

/// Orders in `(1, 1 + NEAR_ONE)` are evaluated with the `q = 1` program.
pub const NEAR_ONE: f64 = 1e-6;

/// An immutable sample `X_1, ..., X_n` in `R^d` with cached moments.
#[derive(Debug, Clone)]
pub struct DataCloud {
    points: Matrix,
    mean: Vec<f64>,
    covariance: Matrix,
    factor: SpdFactor,
    constraints: Matrix,
    frame: Arc<HouseholderQr>,
}

impl DataCloud {
    /// Builds a cloud from an `n x d` matrix (one observation per row).
    ///
    /// Fails with `SingularCovariance` when `n <= d` or the sample
    /// covariance is not positive definite.
    pub fn new(points: Matrix) -> Result<Self, DepthError> {
        let (n, d) = (points.rows(), points.cols());
        if n == 0 {
            return Err(DepthError::EmptyCloud);
        }
        if d == 0 {
            return Err(DepthError::DimensionMismatch { expected: 1, found: 0 });
        }
        if n <= d {
            return Err(DepthError::SingularCovariance);
        }
        let mean = linalg::mean(&points)?;
        let covariance = linalg::covariance(&points)?;
        let factor = linalg::spd_factorize(&covariance)?;

        let mut constraints = Matrix::zeros(d + 1, n);
        let mut centered_t = Matrix::zeros(n, d + 1);
        for i in 0..n {
            for k in 0..d {
                constraints[(k, i)] = points[(i, k)];
                centered_t[(i, k)] = points[(i, k)] - mean[k];
            }
            constraints[(d, i)] = 1.0;
            centered_t[(i, d)] = 1.0;
        }
        // Same row space as [A_X; 1^T], better conditioned.
        if linalg::rank(&centered_t) < d + 1 {
            return Err(DepthError::SingularCovariance);
        }
        let frame = Arc::new(HouseholderQr::new(&centered_t)?);
        Ok(Self {
            points,
            mean,
            covariance,
            factor,
            constraints,
            frame,
        })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self, DepthError> {
        Self::new(Matrix::from_rows(rows)?)
    }

    pub fn n(&self) -> usize {
        self.points.rows()
    }

    pub fn dim(&self) -> usize {
        self.points.cols()
    }

    pub fn points(&self) -> &Matrix {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[f64] {
        self.points.row(i)
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn covariance(&self) -> &Matrix {
        &self.covariance
    }

    pub fn covariance_factor(&self) -> &SpdFactor {
        &self.factor
    }

    /// `[A_X; 1^T]`, the `(d+1) x n` constraint matrix of the weight hyperplane.
    pub fn constraint_matrix(&self) -> &Matrix {
        &self.constraints
    }

    /// Applies `x -> A x + b` to every observation.
    pub fn transformed(&self, a: &Matrix, b: &[f64]) -> Result<Self, DepthError> {
        let n = self.n();
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let mut y = a.matvec(self.point(i))?;
            for (yi, bi) in y.iter_mut().zip(b) {
                *yi += bi;
            }
            rows.push(y);
        }
        Self::from_rows(&rows)
    }

    fn check_dim(&self, x: &[f64]) -> Result<(), DepthError> {
        if x.len() != self.dim() {
            return Err(DepthError::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(DepthError::NonFinite);
        }
        Ok(())
    }

    fn offset(&self, x: &[f64]) -> Vec<f64> {
        x.iter().zip(&self.mean).map(|(a, m)| a - m).collect()
    }

    fn uniform_weights(&self) -> Vec<f64> {
        vec![1.0 / self.n() as f64; self.n()]
    }

    /// Minimum-norm admissible weights for the centered offset `delta`.
    fn particular_weights(&self, delta: &[f64]) -> Vec<f64> {
        let mut rhs = delta.to_vec();
        rhs.push(1.0);
        self.frame.min_norm_solve_transposed(&rhs)
    }

    /// The convex program over admissible weights for query `x`.
    pub fn nullspace_program(&self, x: &[f64], q: f64) -> Result<NullspaceProgram, DepthError> {
        self.check_dim(x)?;
        let p = self.particular_weights(&self.offset(x));
        NullspaceProgram::new(p, NullBasis::Householder(Arc::clone(&self.frame)), q)
    }
}

/// Exponent `q` of the L_q-norm zonoid depth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DepthOrder {
    Finite(f64),
    Infinity,
}

impl DepthOrder {
    pub fn new(q: f64) -> Result<Self, DepthError> {
        if q == f64::INFINITY {
            Ok(DepthOrder::Infinity)
        } else if q.is_finite() && q >= 1.0 {
            Ok(DepthOrder::Finite(q))
        } else {
            Err(DepthError::InvalidOrder(q.to_string()))
        }
    }

    pub fn value(&self) -> f64 {
        match self {
            DepthOrder::Finite(q) => *q,
            DepthOrder::Infinity => f64::INFINITY,
        }
    }
}

impl fmt::Display for DepthOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DepthOrder::Finite(q) => write!(f, "{q}"),
            DepthOrder::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for DepthOrder {
    type Err = DepthError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        match t.to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "+inf" | "∞" => Ok(DepthOrder::Infinity),
            _ => t
                .parse::<f64>()
                .map_err(|_| DepthError::InvalidOrder(t.to_string()))
                .and_then(DepthOrder::new),
        }
    }
}

/// How `q = 2` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Q2Route {
    /// Mahalanobis distance, exact.
    #[default]
    ClosedForm,
    /// The general convex engine, for cross-checks.
    ConvexEngine,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DepthConfig {
    pub q2: Q2Route,
    pub engine: EngineConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DepthResult {
    pub depth: f64,
    /// `S_q`; `None` only for the classical zonoid depth outside the hull.
    pub discrepancy: Option<f64>,
    pub weights: Option<Vec<f64>>,
}

impl DepthResult {
    fn from_discrepancy(s: f64, weights: Option<Vec<f64>>) -> Self {
        Self {
            depth: 1.0 / (1.0 + s),
            discrepancy: Some(s),
            weights,
        }
    }
}

/// `1 / (1 + sqrt((x - mean)^T Sigma^{-1} (x - mean)))` with the 1/n covariance.
pub fn mahalanobis_depth(cloud: &DataCloud, x: &[f64]) -> Result<DepthResult, DepthError> {
    cloud.check_dim(x)?;
    let delta = cloud.offset(x);
    let s = cloud.factor.inverse_norm(&delta);
    // Optimal q = 2 weights: v_i = Y_i^T Sigma^{-1} delta, p = (1 + v) / n.
    let w = cloud.factor.solve(&delta);
    let n = cloud.n() as f64;
    let weights = (0..cloud.n())
        .map(|i| {
            let v: f64 = cloud
                .point(i)
                .iter()
                .zip(&cloud.mean)
                .zip(&w)
                .map(|((xi, m), wi)| (xi - m) * wi)
                .sum();
            (1.0 + v) / n
        })
        .collect();
    Ok(DepthResult::from_discrepancy(s, Some(weights)))
}

/// True iff `x` is a convex combination of the observations (tolerance 1e-8).
pub fn in_convex_hull(cloud: &DataCloud, x: &[f64]) -> Result<bool, DepthError> {
    cloud.check_dim(x)?;
    let (n, d) = (cloud.n(), cloud.dim());
    let delta = cloud.offset(x);
    let mut a = Matrix::zeros(d + 1, n);
    for i in 0..n {
        for k in 0..d {
            a[(k, i)] = cloud.point(i)[k] - cloud.mean[k];
        }
        a[(d, i)] = 1.0;
    }
    let mut rhs = delta;
    rhs.push(1.0);
    let sol = lp::solve(&LpProblem::new(vec![0.0; n], a, rhs))?;
    Ok(sol.status == LpStatus::Optimal)
}

/// Classical zonoid depth: `1 / min max_i n p_i` over nonnegative admissible
/// weights inside the hull, exactly 0 outside.
pub fn zonoid_depth(cloud: &DataCloud, x: &[f64]) -> Result<DepthResult, DepthError> {
    cloud.check_dim(x)?;
    if x == cloud.mean() {
        return Ok(DepthResult::from_discrepancy(0.0, Some(cloud.uniform_weights())));
    }
    let outside = DepthResult {
        depth: 0.0,
        discrepancy: None,
        weights: None,
    };
    if !in_convex_hull(cloud, x)? {
        return Ok(outside);
    }
    // With u_i = n p_i / t in [0, 1] and s = 1/t: maximize s subject to
    // sum u_i = n s and sum u_i Y_i = n s delta.
    let (n, d) = (cloud.n(), cloud.dim());
    let delta = cloud.offset(x);
    let nf = n as f64;
    let mut a = Matrix::zeros(d + 1, n + 1);
    for i in 0..n {
        a[(0, i)] = 1.0;
        for k in 0..d {
            a[(k + 1, i)] = cloud.point(i)[k] - cloud.mean[k];
        }
    }
    a[(0, n)] = -nf;
    for k in 0..d {
        a[(k + 1, n)] = -nf * delta[k];
    }
    let mut objective = vec![0.0; n + 1];
    objective[n] = -1.0;
    let mut upper = vec![Some(1.0); n];
    upper.push(None);
    let sol = lp::solve(&LpProblem::new(objective, a, vec![0.0; d + 1]).with_upper_bounds(upper))?;
    if sol.status != LpStatus::Optimal {
        return Err(DepthError::InvalidProgram(format!(
            "zonoid program ended with status {:?}",
            sol.status
        )));
    }
    let s = sol.point[n].min(1.0);
    if s <= 0.0 {
        return Ok(outside);
    }
    let weights = sol.point[..n].iter().map(|u| u / (nf * s)).collect();
    Ok(DepthResult {
        depth: s,
        discrepancy: Some(1.0 / s - 1.0),
        weights: Some(weights),
    })
}

/// `S_1` by the linear program over `v+ , v- >= 0` with `n p - 1 = v+ - v-`.
fn l1_discrepancy(cloud: &DataCloud, x: &[f64]) -> Result<(f64, Vec<f64>), DepthError> {
    let (n, d) = (cloud.n(), cloud.dim());
    let nf = n as f64;
    let mut a = Matrix::zeros(d + 1, 2 * n);
    let mut rhs = vec![0.0; d + 1];
    for i in 0..n {
        a[(0, i)] = 1.0;
        a[(0, n + i)] = -1.0;
        for k in 0..d {
            let c = cloud.point(i)[k] - x[k];
            a[(k + 1, i)] = c;
            a[(k + 1, n + i)] = -c;
        }
    }
    for k in 0..d {
        rhs[k + 1] = nf * (x[k] - cloud.mean[k]);
    }
    let sol = lp::solve(&LpProblem::new(vec![1.0; 2 * n], a, rhs))?;
    match sol.status {
        LpStatus::Optimal => {
            let weights = (0..n)
                .map(|i| (1.0 + sol.point[i] - sol.point[n + i]) / nf)
                .collect();
            Ok((sol.value / nf, weights))
        }
        LpStatus::Infeasible => Err(DepthError::Infeasible),
        LpStatus::Unbounded => Err(DepthError::Unbounded),
    }
}

/// `S_inf` via the homogenized program: with `w = v / t` in `[-1, 1]`,
/// `u = (w + 1) / 2` and `s = 1 / t`, maximize `s` subject to
/// `sum u_i = n / 2` and `sum u_i Y_i = (n / 2) s delta`.
fn linf_discrepancy(cloud: &DataCloud, x: &[f64]) -> Result<(f64, Vec<f64>), DepthError> {
    let (n, d) = (cloud.n(), cloud.dim());
    let nf = n as f64;
    let delta = cloud.offset(x);
    let mut a = Matrix::zeros(d + 1, n + 1);
    let mut rhs = vec![0.0; d + 1];
    rhs[0] = nf / 2.0;
    for i in 0..n {
        a[(0, i)] = 1.0;
        for k in 0..d {
            a[(k + 1, i)] = cloud.point(i)[k] - cloud.mean[k];
        }
    }
    for k in 0..d {
        a[(k + 1, n)] = -nf / 2.0 * delta[k];
    }
    let mut objective = vec![0.0; n + 1];
    objective[n] = -1.0;
    let mut upper = vec![Some(1.0); n];
    upper.push(None);
    let sol = lp::solve(&LpProblem::new(objective, a, rhs).with_upper_bounds(upper))?;
    match sol.status {
        LpStatus::Unbounded => Ok((0.0, cloud.uniform_weights())),
        LpStatus::Infeasible => Err(DepthError::Infeasible),
        LpStatus::Optimal => {
            let s = sol.point[n];
            if s.is_nan() || s <= 0.0 {
                return Err(DepthError::InvalidProgram(
                    "L-infinity program returned a nonpositive scale".into(),
                ));
            }
            let t = 1.0 / s;
            let weights = sol.point[..n]
                .iter()
                .map(|u| (1.0 + t * (2.0 * u - 1.0)) / nf)
                .collect();
            Ok((t, weights))
        }
    }
}

/// `S_inf` via the direct formulation `min t` s.t. `t >= v+_i + v-_i`, with
/// one slack row per observation. Slower than the production route; kept
/// as an independent cross-check.
pub fn linf_discrepancy_direct(cloud: &DataCloud, x: &[f64]) -> Result<f64, DepthError> {
    cloud.check_dim(x)?;
    let (n, d) = (cloud.n(), cloud.dim());
    let nf = n as f64;
    // Columns: t, v+ (n), v- (n), slack (n).
    let cols = 1 + 3 * n;
    let mut a = Matrix::zeros(n + d + 1, cols);
    let mut rhs = vec![0.0; n + d + 1];
    for i in 0..n {
        a[(i, 0)] = 1.0;
        a[(i, 1 + i)] = -1.0;
        a[(i, 1 + n + i)] = -1.0;
        a[(i, 1 + 2 * n + i)] = -1.0;
        a[(n, 1 + i)] = 1.0;
        a[(n, 1 + n + i)] = -1.0;
        for k in 0..d {
            let c = cloud.point(i)[k] - x[k];
            a[(n + 1 + k, 1 + i)] = c;
            a[(n + 1 + k, 1 + n + i)] = -c;
        }
    }
    for k in 0..d {
        rhs[n + 1 + k] = nf * (x[k] - cloud.mean[k]);
    }
    let mut objective = vec![0.0; cols];
    objective[0] = 1.0;
    let sol = lp::solve(&LpProblem::new(objective, a, rhs))?;
    match sol.status {
        LpStatus::Optimal => Ok(sol.value),
        LpStatus::Infeasible => Err(DepthError::Infeasible),
        LpStatus::Unbounded => Err(DepthError::Unbounded),
    }
}

/// Classical zonoid depth via `min t` s.t. `t >= n p_i`, `p >= 0` admissible,
/// with one slack row per observation. Cross-check for [`zonoid_depth`].
pub fn zonoid_depth_direct(cloud: &DataCloud, x: &[f64]) -> Result<f64, DepthError> {
    cloud.check_dim(x)?;
    let (n, d) = (cloud.n(), cloud.dim());
    let nf = n as f64;
    // Columns: t, p (n), slack (n).
    let cols = 1 + 2 * n;
    let mut a = Matrix::zeros(n + d + 1, cols);
    let mut rhs = vec![0.0; n + d + 1];
    for i in 0..n {
        a[(i, 0)] = 1.0;
        a[(i, 1 + i)] = -nf;
        a[(i, 1 + n + i)] = -1.0;
        a[(n, 1 + i)] = 1.0;
        for k in 0..d {
            a[(n + 1 + k, 1 + i)] = cloud.point(i)[k];
        }
    }
    rhs[n] = 1.0;
    rhs[n + 1..].copy_from_slice(x);
    let mut objective = vec![0.0; cols];
    objective[0] = 1.0;
    let sol = lp::solve(&LpProblem::new(objective, a, rhs))?;
    match sol.status {
        LpStatus::Optimal => Ok(1.0 / sol.value),
        LpStatus::Infeasible => Ok(0.0),
        LpStatus::Unbounded => Err(DepthError::Unbounded),
    }
}

fn engine_discrepancy(
    cloud: &DataCloud,
    x: &[f64],
    q: f64,
    config: &EngineConfig,
) -> Result<(f64, Vec<f64>), DepthError> {
    // S_q is positively homogeneous in x - mean: solve at unit Mahalanobis
    // distance and rescale, so the engine always sees O(1) residuals.
    let delta = cloud.offset(x);
    let scale = cloud.factor.inverse_norm(&delta);
    let unit: Vec<f64> = cloud
        .mean
        .iter()
        .zip(&delta)
        .map(|(m, dv)| m + dv / scale)
        .collect();
    let prog = cloud.nullspace_program(&unit, q)?;
    let nf = cloud.n() as f64;
    let rescale = |m: Minimizer| -> Minimizer {
        let weights = m
            .weights
            .iter()
            .map(|p| (1.0 + scale * (nf * p - 1.0)) / nf)
            .collect();
        Minimizer {
            weights,
            objective: m.objective * scale.powf(q),
            discrepancy: m.discrepancy * scale,
            iterations: m.iterations,
        }
    };
    match convex::minimize(&prog, config) {
        Ok(m) => {
            let m = rescale(m);
            Ok((m.discrepancy, m.weights))
        }
        Err(DepthError::ConvergenceFailure { iterations, best }) => Err(DepthError::ConvergenceFailure {
            iterations,
            best: Box::new(rescale(*best)),
        }),
        Err(e) => Err(e),
    }
}

/// L_q-norm zonoid depth with the default configuration.
pub fn lq_depth(cloud: &DataCloud, x: &[f64], order: DepthOrder) -> Result<DepthResult, DepthError> {
    lq_depth_with(cloud, x, order, &DepthConfig::default())
}

/// L_q-norm zonoid depth `1 / (1 + S_q)`.
///
/// `q = 1` and `q = inf` are linear programs, `q = 2` is the Mahalanobis
/// distance (unless configured otherwise), every other order goes through
/// the convex engine.
pub fn lq_depth_with(
    cloud: &DataCloud,
    x: &[f64],
    order: DepthOrder,
    config: &DepthConfig,
) -> Result<DepthResult, DepthError> {
    cloud.check_dim(x)?;
    if let DepthOrder::Finite(q) = order {
        if !(q.is_finite() && q >= 1.0) {
            return Err(DepthError::InvalidOrder(q.to_string()));
        }
    }
    if x == cloud.mean() {
        return Ok(DepthResult::from_discrepancy(0.0, Some(cloud.uniform_weights())));
    }
    let (s, weights) = match order {
        DepthOrder::Infinity => linf_discrepancy(cloud, x)?,
        DepthOrder::Finite(q) if q < 1.0 + NEAR_ONE => l1_discrepancy(cloud, x)?,
        DepthOrder::Finite(q) if q == 2.0 && config.q2 == Q2Route::ClosedForm => {
            return mahalanobis_depth(cloud, x);
        }
        DepthOrder::Finite(q) => engine_discrepancy(cloud, x, q, &config.engine)?,
    };
    Ok(DepthResult::from_discrepancy(s, Some(weights)))
}

/// [`lq_depth`] over many query points, in input order.
pub fn batch_depth<P: AsRef<[f64]>>(
    cloud: &DataCloud,
    xs: &[P],
    order: DepthOrder,
) -> Result<Vec<DepthResult>, DepthError> {
    batch_depth_with(cloud, xs, order, &DepthConfig::default())
}

pub fn batch_depth_with<P: AsRef<[f64]>>(
    cloud: &DataCloud,
    xs: &[P],
    order: DepthOrder,
    config: &DepthConfig,
) -> Result<Vec<DepthResult>, DepthError> {
    xs.iter()
        .enumerate()
        .map(|(index, x)| {
            lq_depth_with(cloud, x.as_ref(), order, config).map_err(|e| DepthError::BatchPoint {
                index,
                source: Box::new(e),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(values: &[f64]) -> DataCloud {
        DataCloud::new(Matrix::new(values.len(), 1, values.to_vec()).unwrap()).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn construction_failures() {
        assert!(matches!(
            DataCloud::from_rows(&[[0.0, 0.0], [1.0, 1.0]]),
            Err(DepthError::SingularCovariance)
        ));
        assert!(matches!(
            DataCloud::from_rows(&[[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]),
            Err(DepthError::SingularCovariance)
        ));
        assert!(DataCloud::from_rows(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]).is_ok());
    }

    #[test]
    fn order_parsing() {
        assert_eq!("inf".parse::<DepthOrder>().unwrap(), DepthOrder::Infinity);
        assert_eq!("2".parse::<DepthOrder>().unwrap(), DepthOrder::Finite(2.0));
        assert!("0.5".parse::<DepthOrder>().is_err());
        assert!("abc".parse::<DepthOrder>().is_err());
        assert_eq!(DepthOrder::new(f64::INFINITY).unwrap().to_string(), "inf");
    }

    #[test]
    fn mahalanobis_examples() {
        let c = line(&[0.0, 1.0]);
        assert_eq!(mahalanobis_depth(&c, &[0.5]).unwrap().depth, 1.0);
        close(mahalanobis_depth(&c, &[2.0]).unwrap().depth, 0.25, 1e-15);
        let c = line(&[0.0, 1.0, 2.0]);
        close(mahalanobis_depth(&c, &[1.5]).unwrap().depth, 1.0 / (1.0 + 0.375_f64.sqrt()), 1e-15);
        assert!(matches!(
            mahalanobis_depth(&c, &[1.0, 2.0]),
            Err(DepthError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn zonoid_examples() {
        let c = line(&[0.0, 1.0, 2.0]);
        assert_eq!(zonoid_depth(&c, &[1.0]).unwrap().depth, 1.0);
        close(zonoid_depth(&c, &[1.5]).unwrap().depth, 2.0 / 3.0, 1e-9);
        let c = line(&[0.0, 1.0]);
        let r = zonoid_depth(&c, &[2.0]).unwrap();
        assert_eq!(r.depth, 0.0);
        assert!(r.discrepancy.is_none());
    }

    #[test]
    fn hull_examples() {
        let c = line(&[0.0, 1.0]);
        assert!(in_convex_hull(&c, &[0.5]).unwrap());
        assert!(!in_convex_hull(&c, &[2.0]).unwrap());
        let sq = DataCloud::from_rows(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]).unwrap();
        assert!(in_convex_hull(&sq, &[0.5, 0.5]).unwrap());
        assert!(in_convex_hull(&sq, &[1.0, 1.0]).unwrap());
        assert!(!in_convex_hull(&sq, &[1.0 + 1e-6, 0.5]).unwrap());
    }

    #[test]
    fn singleton_hyperplane_all_orders() {
        let c = line(&[0.0, 1.0]);
        for order in [
            DepthOrder::Finite(1.0),
            DepthOrder::Finite(2.0),
            DepthOrder::Finite(4.0),
            DepthOrder::Infinity,
        ] {
            let r = lq_depth(&c, &[2.0], order).unwrap();
            close(r.depth, 0.25, 1e-9);
            let p = r.weights.unwrap();
            close(p[0], -1.0, 1e-9);
            close(p[1], 2.0, 1e-9);
        }
    }

    #[test]
    fn three_point_orders() {
        let c = line(&[0.0, 1.0, 2.0]);
        close(lq_depth(&c, &[1.5], DepthOrder::Finite(1.0)).unwrap().depth, 2.0 / 3.0, 1e-9);
        close(lq_depth(&c, &[1.5], DepthOrder::Infinity).unwrap().depth, 4.0 / 7.0, 1e-9);
        let cfg = DepthConfig {
            q2: Q2Route::ConvexEngine,
            ..DepthConfig::default()
        };
        close(
            lq_depth_with(&c, &[1.5], DepthOrder::Finite(2.0), &cfg).unwrap().depth,
            1.0 / (1.0 + 0.375_f64.sqrt()),
            1e-9,
        );
    }

    #[test]
    fn near_one_uses_linear_program() {
        let c = line(&[0.0, 1.0, 2.0]);
        let a = lq_depth(&c, &[1.5], DepthOrder::Finite(1.0 + 1e-7)).unwrap();
        close(a.depth, 2.0 / 3.0, 1e-9);
    }

    #[test]
    fn mean_has_depth_one_exactly() {
        let c = DataCloud::from_rows(&[[0.3, 1.0], [2.0, -1.0], [0.5, 0.5], [4.0, 2.0]]).unwrap();
        let m = c.mean().to_vec();
        for q in [1.0, 1.5, 2.0, 4.0, 8.0] {
            assert_eq!(lq_depth(&c, &m, DepthOrder::Finite(q)).unwrap().depth, 1.0);
        }
        assert_eq!(lq_depth(&c, &m, DepthOrder::Infinity).unwrap().depth, 1.0);
        assert_eq!(zonoid_depth(&c, &m).unwrap().depth, 1.0);
    }

    #[test]
    fn batch_examples() {
        let c = line(&[0.0, 1.0, 2.0]);
        let empty: Vec<Vec<f64>> = Vec::new();
        assert!(batch_depth(&c, &empty, DepthOrder::Infinity).unwrap().is_empty());
        let r = batch_depth(&c, &[vec![1.0]], DepthOrder::Finite(3.0)).unwrap();
        assert_eq!(r[0].depth, 1.0);
        let r = batch_depth(&c, &[vec![1.7], vec![1.7]], DepthOrder::Finite(3.0)).unwrap();
        assert_eq!(r[0], r[1]);
        match batch_depth(&c, &[vec![1.0], vec![1.0, 2.0]], DepthOrder::Infinity) {
            Err(DepthError::BatchPoint { index, .. }) => assert_eq!(index, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn direct_formulations_agree() {
        let c = DataCloud::from_rows(&[
            [0.0, 0.0],
            [1.0, 0.2],
            [0.3, 1.1],
            [-0.7, 0.4],
            [0.2, -0.9],
            [1.5, 1.3],
        ])
        .unwrap();
        for x in [[0.1, 0.2], [0.9, 0.9], [3.0, -2.0]] {
            let s = lq_depth(&c, &x, DepthOrder::Infinity).unwrap().discrepancy.unwrap();
            close(s, linf_discrepancy_direct(&c, &x).unwrap(), 1e-9);
            close(zonoid_depth(&c, &x).unwrap().depth, zonoid_depth_direct(&c, &x).unwrap(), 1e-9);
        }
    }
}
