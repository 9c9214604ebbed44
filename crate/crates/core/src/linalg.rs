//! Small dense linear-algebra kernels.
//!
//! Everything here works on row-major `f64` storage and is sized for the
//! problems this crate solves: a handful of dimensions and up to a few
//! thousand observations. Factorizations are plain Cholesky, Householder QR
//! and a one-sided Jacobi SVD used for rank decisions.

use std::ops::{Index, IndexMut};

use crate::error::DepthError;

/// Singular values below this fraction of the largest one count as zero.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// Dense row-major matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, DepthError> {
        if data.len() != rows * cols {
            return Err(DepthError::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(DepthError::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Builds a matrix from equally long rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self, DepthError> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(DepthError::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Self::new(rows.len(), cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix, DepthError> {
        if self.cols != other.rows {
            return Err(DepthError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let src = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += a * s;
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>, DepthError> {
        if x.len() != self.cols {
            return Err(DepthError::DimensionMismatch {
                expected: self.cols,
                found: x.len(),
            });
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), x)).collect())
    }

    /// Largest absolute entry, 0 for an empty matrix.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Component-wise mean of the rows of `points` (one observation per row).
pub fn mean(points: &Matrix) -> Result<Vec<f64>, DepthError> {
    let n = points.rows();
    if n == 0 {
        return Err(DepthError::EmptyCloud);
    }
    let mut m = vec![0.0; points.cols()];
    for i in 0..n {
        for (acc, v) in m.iter_mut().zip(points.row(i)) {
            *acc += v;
        }
    }
    m.iter_mut().for_each(|v| *v /= n as f64);
    Ok(m)
}

/// Covariance with 1/n normalization (no Bessel correction).
pub fn covariance(points: &Matrix) -> Result<Matrix, DepthError> {
    let n = points.rows();
    if n < 2 {
        return Err(DepthError::TooFewPoints { found: n, needed: 2 });
    }
    let d = points.cols();
    let mu = mean(points)?;
    let mut cov = Matrix::zeros(d, d);
    let mut centered = vec![0.0; d];
    for i in 0..n {
        for ((c, x), m) in centered.iter_mut().zip(points.row(i)).zip(&mu) {
            *c = x - m;
        }
        for a in 0..d {
            for b in a..d {
                cov[(a, b)] += centered[a] * centered[b];
            }
        }
    }
    for a in 0..d {
        for b in a..d {
            let v = cov[(a, b)] / n as f64;
            cov[(a, b)] = v;
            cov[(b, a)] = v;
        }
    }
    Ok(cov)
}

/// Lower-triangular Cholesky factor `L` with `L L^T = m`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpdFactor {
    lower: Matrix,
}

impl SpdFactor {
    pub fn dimension(&self) -> usize {
        self.lower.rows()
    }

    pub fn lower(&self) -> &Matrix {
        &self.lower
    }

    /// Solves `L y = b` by forward substitution.
    pub fn solve_lower(&self, b: &[f64]) -> Vec<f64> {
        let l = &self.lower;
        let mut y = b.to_vec();
        for i in 0..y.len() {
            let s: f64 = (0..i).map(|k| l[(i, k)] * y[k]).sum();
            y[i] = (y[i] - s) / l[(i, i)];
        }
        y
    }

    /// Solves `L L^T x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let l = &self.lower;
        let mut x = self.solve_lower(b);
        for i in (0..x.len()).rev() {
            let s: f64 = (i + 1..x.len()).map(|k| l[(k, i)] * x[k]).sum();
            x[i] = (x[i] - s) / l[(i, i)];
        }
        x
    }

    /// `sqrt(b^T m^{-1} b)`, the Mahalanobis norm of `b`.
    pub fn inverse_norm(&self, b: &[f64]) -> f64 {
        norm2(&self.solve_lower(b))
    }
}

/// Cholesky factorization of a symmetric positive-definite matrix.
pub fn spd_factorize(m: &Matrix) -> Result<SpdFactor, DepthError> {
    let n = m.rows();
    if m.cols() != n {
        return Err(DepthError::DimensionMismatch {
            expected: n,
            found: m.cols(),
        });
    }
    let scale = (0..n).fold(0.0_f64, |s, i| s.max(m[(i, i)].abs()));
    let floor = scale * 1e-14;
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let s: f64 = (0..j).map(|k| l[(j, k)] * l[(j, k)]).sum();
        let pivot = m[(j, j)] - s;
        if pivot.is_nan() || pivot <= floor || pivot <= 0.0 {
            return Err(DepthError::SingularCovariance);
        }
        let diag = pivot.sqrt();
        l[(j, j)] = diag;
        for i in j + 1..n {
            let s: f64 = (0..j).map(|k| l[(i, k)] * l[(j, k)]).sum();
            l[(i, j)] = (m[(i, j)] - s) / diag;
        }
    }
    Ok(SpdFactor { lower: l })
}

/// Householder QR of a tall matrix `a` (rows >= cols), stored as reflectors.
///
/// `Q = H_0 H_1 ... H_{k-1}` where `H_j = I - beta_j v_j v_j^T` acts on
/// coordinates `j..m`. The first `k` columns of `Q` span the range of `a`,
/// the remaining `m - k` its orthogonal complement.
#[derive(Debug, Clone)]
pub struct HouseholderQr {
    m: usize,
    k: usize,
    reflectors: Vec<Vec<f64>>,
    betas: Vec<f64>,
    r: Matrix,
}

impl HouseholderQr {
    pub fn new(a: &Matrix) -> Result<Self, DepthError> {
        let (m, k) = (a.rows(), a.cols());
        if m < k {
            return Err(DepthError::RankDeficient);
        }
        let mut work = a.clone();
        let mut reflectors = Vec::with_capacity(k);
        let mut betas = Vec::with_capacity(k);
        for j in 0..k {
            let x: Vec<f64> = (j..m).map(|i| work[(i, j)]).collect();
            let norm = norm2(&x);
            let mut v = x;
            let beta = if norm == 0.0 {
                0.0
            } else {
                let alpha = if v[0] >= 0.0 { -norm } else { norm };
                v[0] -= alpha;
                let vv = dot(&v, &v);
                if vv == 0.0 {
                    0.0
                } else {
                    2.0 / vv
                }
            };
            if beta != 0.0 {
                for c in j..k {
                    let s: f64 = (j..m).map(|i| v[i - j] * work[(i, c)]).sum::<f64>() * beta;
                    for i in j..m {
                        work[(i, c)] -= s * v[i - j];
                    }
                }
            }
            reflectors.push(v);
            betas.push(beta);
        }
        let mut r = Matrix::zeros(k, k);
        for i in 0..k {
            for j in i..k {
                r[(i, j)] = work[(i, j)];
            }
        }
        Ok(Self {
            m,
            k,
            reflectors,
            betas,
            r,
        })
    }

    pub fn rows(&self) -> usize {
        self.m
    }

    /// Number of reflectors (columns of the factored matrix).
    pub fn rank_columns(&self) -> usize {
        self.k
    }

    pub fn r(&self) -> &Matrix {
        &self.r
    }

    fn reflect(&self, j: usize, y: &mut [f64]) {
        let beta = self.betas[j];
        if beta == 0.0 {
            return;
        }
        let v = &self.reflectors[j];
        let s = beta * dot(v, &y[j..]);
        for (yi, vi) in y[j..].iter_mut().zip(v) {
            *yi -= s * vi;
        }
    }

    /// `y <- Q y`.
    pub fn apply_q(&self, y: &mut [f64]) {
        for j in (0..self.k).rev() {
            self.reflect(j, y);
        }
    }

    /// `y <- Q^T y`.
    pub fn apply_qt(&self, y: &mut [f64]) {
        for j in 0..self.k {
            self.reflect(j, y);
        }
    }

    /// Maps complement coordinates `z` (length `m - k`) to `Q [0; z]`.
    pub fn complement_apply(&self, z: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.m];
        y[self.k..].copy_from_slice(z);
        self.apply_q(&mut y);
        y
    }

    /// The last `m - k` entries of `Q^T g`.
    pub fn complement_apply_t(&self, g: &[f64]) -> Vec<f64> {
        let mut y = g.to_vec();
        self.apply_qt(&mut y);
        y.split_off(self.k)
    }

    /// Solves `a^T p = rhs` with minimum norm, assuming `a` has full column rank.
    pub fn min_norm_solve_transposed(&self, rhs: &[f64]) -> Vec<f64> {
        // a = Q1 R, so a^T p = R^T Q1^T p; take p = Q1 w with R^T w = rhs.
        let r = &self.r;
        let mut w = vec![0.0; self.m];
        for i in 0..self.k {
            let s: f64 = (0..i).map(|t| r[(t, i)] * w[t]).sum();
            w[i] = (rhs[i] - s) / r[(i, i)];
        }
        self.apply_q(&mut w);
        w
    }
}

/// Thin SVD `a = U diag(s) V^T` by one-sided Jacobi rotations on the columns of `a`.
pub(crate) struct ThinSvd {
    pub u: Matrix,
    pub s: Vec<f64>,
    pub v: Matrix,
}

pub(crate) fn thin_svd(a: &Matrix) -> ThinSvd {
    let (m, k) = (a.rows(), a.cols());
    let mut w = a.clone();
    let mut v = Matrix::identity(k);
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..k {
            for q in p + 1..k {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                for i in 0..m {
                    let (x, y) = (w[(i, p)], w[(i, q)]);
                    alpha += x * x;
                    beta += y * y;
                    gamma += x * y;
                }
                if gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() || gamma == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let (x, y) = (w[(i, p)], w[(i, q)]);
                    w[(i, p)] = c * x - s * y;
                    w[(i, q)] = s * x + c * y;
                }
                for i in 0..k {
                    let (x, y) = (v[(i, p)], v[(i, q)]);
                    v[(i, p)] = c * x - s * y;
                    v[(i, q)] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let s: Vec<f64> = (0..k).map(|j| norm2(&w.column(j))).collect();
    let mut u = w;
    for (j, &sj) in s.iter().enumerate() {
        for i in 0..m {
            u[(i, j)] = if sj > 0.0 { u[(i, j)] / sj } else { 0.0 };
        }
    }
    ThinSvd { u, s, v }
}

/// Singular values of `a`, in no particular order.
pub fn singular_values(a: &Matrix) -> Vec<f64> {
    thin_svd(a).s
}

/// Numerical rank under [`RANK_TOLERANCE`].
pub fn rank(a: &Matrix) -> usize {
    let s = singular_values(a);
    let top = s.iter().fold(0.0_f64, |m, v| m.max(*v));
    if top == 0.0 {
        return 0;
    }
    s.iter().filter(|v| **v > RANK_TOLERANCE * top).count()
}

/// Orthonormal basis (as columns) of the null space of a full-row-rank `c`.
pub fn nullspace_basis(c: &Matrix) -> Result<Matrix, DepthError> {
    let (r, n) = (c.rows(), c.cols());
    if r > n || rank(c) < r {
        return Err(DepthError::RankDeficient);
    }
    let qr = HouseholderQr::new(&c.transpose())?;
    let k = n - r;
    let mut basis = Matrix::zeros(n, k);
    let mut e = vec![0.0; k];
    for j in 0..k {
        e.iter_mut().for_each(|v| *v = 0.0);
        e[j] = 1.0;
        let col = qr.complement_apply(&e);
        for i in 0..n {
            basis[(i, j)] = col[i];
        }
    }
    Ok(basis)
}

/// Minimum-norm solution of `c p = rhs`; `Infeasible` when no solution exists.
pub fn min_norm_solution(c: &Matrix, rhs: &[f64]) -> Result<Vec<f64>, DepthError> {
    if rhs.len() != c.rows() {
        return Err(DepthError::DimensionMismatch {
            expected: c.rows(),
            found: rhs.len(),
        });
    }
    // c^T = U S V^T, so c = V S U^T and p = U S^+ V^T rhs.
    let svd = thin_svd(&c.transpose());
    let top = svd.s.iter().fold(0.0_f64, |m, v| m.max(*v));
    let mut p = vec![0.0; c.cols()];
    for (j, &sj) in svd.s.iter().enumerate() {
        if top == 0.0 || sj <= RANK_TOLERANCE * top {
            continue;
        }
        let coef: f64 = (0..rhs.len()).map(|i| svd.v[(i, j)] * rhs[i]).sum::<f64>() / sj;
        for (i, pi) in p.iter_mut().enumerate() {
            *pi += coef * svd.u[(i, j)];
        }
    }
    let residual = c.matvec(&p)?;
    let rhs_norm = norm2(rhs);
    let err = norm2(
        &residual
            .iter()
            .zip(rhs)
            .map(|(a, b)| a - b)
            .collect::<Vec<_>>(),
    );
    if err > 1e-9 * (1.0 + rhs_norm) {
        return Err(DepthError::Infeasible);
    }
    Ok(p)
}
