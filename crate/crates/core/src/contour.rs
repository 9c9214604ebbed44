//! Boundaries of depth trimmed regions `{x : LD_q(x) >= alpha}` in the plane.
//!
//! Depth is non-increasing along every ray leaving the sample mean, so each
//! boundary point is a one-dimensional root find along a ray. Two searches are
//! available: doubling plus bisection, which only relies on monotonicity, and
//! a scaling search that uses the positive homogeneity of `S_q` in
//! `x - mean` to place the boundary point from a single evaluation.

use std::f64::consts::TAU;

use crate::depth::{lq_depth_with, DataCloud, DepthConfig, DepthOrder};
use crate::error::DepthError;

/// Upper limit on radius doublings before a ray is declared unbounded.
pub const MAX_DOUBLINGS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RaySearch {
    /// `S_q(mean + r u) = r S_q(mean + u)`: one evaluation per ray.
    #[default]
    Scaling,
    /// Doubling until the depth drops below the level, then bisection.
    Bisection,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContourConfig {
    pub rays: usize,
    pub search: RaySearch,
    pub depth: DepthConfig,
}

impl Default for ContourConfig {
    fn default() -> Self {
        Self {
            rays: 72,
            search: RaySearch::default(),
            depth: DepthConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContourPolyline {
    pub level: f64,
    pub order: DepthOrder,
    /// Boundary points in increasing ray angle; the polygon closes implicitly.
    pub vertices: Vec<[f64; 2]>,
}

fn check_plane(cloud: &DataCloud) -> Result<(), DepthError> {
    if cloud.dim() != 2 {
        return Err(DepthError::DimensionMismatch {
            expected: 2,
            found: cloud.dim(),
        });
    }
    Ok(())
}

fn check_level(level: f64) -> Result<(), DepthError> {
    if !(level > 0.0 && level <= 1.0) {
        return Err(DepthError::InvalidLevel(level));
    }
    Ok(())
}

/// Typical spread of the cloud, used as the initial radius.
fn spread(cloud: &DataCloud) -> f64 {
    let cov = cloud.covariance();
    let tr: f64 = (0..cloud.dim()).map(|i| cov[(i, i)]).sum();
    (tr / cloud.dim() as f64).sqrt()
}

fn along(mean: &[f64], u: [f64; 2], r: f64) -> [f64; 2] {
    [mean[0] + r * u[0], mean[1] + r * u[1]]
}

fn depth_at(cloud: &DataCloud, order: DepthOrder, x: &[f64], config: &DepthConfig) -> Result<f64, DepthError> {
    Ok(lq_depth_with(cloud, x, order, config)?.depth)
}

/// Discrepancy per unit radius along `u` (so that `S_q(mean + r u) = r * slope`).
fn unit_slope(
    cloud: &DataCloud,
    order: DepthOrder,
    u: [f64; 2],
    config: &DepthConfig,
) -> Result<f64, DepthError> {
    let h = spread(cloud);
    let x = along(cloud.mean(), u, h);
    let r = lq_depth_with(cloud, &x, order, config)?;
    let s = r.discrepancy.unwrap_or(f64::INFINITY);
    Ok(s / h)
}

fn bisect_radius(
    cloud: &DataCloud,
    order: DepthOrder,
    level: f64,
    u: [f64; 2],
    config: &DepthConfig,
) -> Result<f64, DepthError> {
    let mean = cloud.mean();
    let mut inside = 0.0;
    let mut outside = spread(cloud);
    let mut doublings = 0;
    while depth_at(cloud, order, &along(mean, u, outside), config)? >= level {
        inside = outside;
        outside *= 2.0;
        doublings += 1;
        if doublings > MAX_DOUBLINGS {
            return Err(DepthError::RayEscape {
                angle: u[1].atan2(u[0]),
                doublings,
            });
        }
    }
    while outside - inside > 1e-8 * (1.0 + outside) {
        let mid = 0.5 * (inside + outside);
        if depth_at(cloud, order, &along(mean, u, mid), config)? >= level {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    Ok(inside)
}

fn unit(u: [f64; 2]) -> Result<[f64; 2], DepthError> {
    let len = u[0].hypot(u[1]);
    if !(len.is_finite() && len > 0.0) {
        return Err(DepthError::NonFinite);
    }
    Ok([u[0] / len, u[1] / len])
}

/// Point where the ray `mean + r u` meets the `level` contour.
pub fn ray_boundary_point(
    cloud: &DataCloud,
    order: DepthOrder,
    level: f64,
    u: [f64; 2],
    config: &ContourConfig,
) -> Result<[f64; 2], DepthError> {
    check_plane(cloud)?;
    check_level(level)?;
    let mean = cloud.mean();
    if level == 1.0 {
        return Ok([mean[0], mean[1]]);
    }
    let u = unit(u)?;
    let r = match config.search {
        RaySearch::Scaling => {
            let slope = unit_slope(cloud, order, u, &config.depth)?;
            (1.0 / level - 1.0) / slope
        }
        RaySearch::Bisection => bisect_radius(cloud, order, level, u, &config.depth)?,
    };
    Ok(along(mean, u, r))
}

fn ray_directions(rays: usize) -> Vec<(f64, [f64; 2])> {
    (0..rays)
        .map(|j| {
            let theta = TAU * j as f64 / rays as f64;
            (theta, [theta.cos(), theta.sin()])
        })
        .collect()
}

fn with_angle(angle: f64, e: DepthError) -> DepthError {
    match e {
        DepthError::RayEscape { doublings, .. } => DepthError::RayEscape { angle, doublings },
        other => DepthError::InvalidContour(format!("ray at angle {angle:.6} rad: {other}")),
    }
}

/// Boundary of the `level` trimmed region sampled on `config.rays` equally spaced rays.
pub fn contour_polyline(
    cloud: &DataCloud,
    order: DepthOrder,
    level: f64,
    config: &ContourConfig,
) -> Result<ContourPolyline, DepthError> {
    Ok(contour_levels(cloud, order, &[level], config)?.remove(0))
}

/// Contours for several levels. With [`RaySearch::Scaling`] every level
/// reuses one depth evaluation per ray.
pub fn contour_levels(
    cloud: &DataCloud,
    order: DepthOrder,
    levels: &[f64],
    config: &ContourConfig,
) -> Result<Vec<ContourPolyline>, DepthError> {
    check_plane(cloud)?;
    for &l in levels {
        check_level(l)?;
    }
    if config.rays < 8 {
        return Err(DepthError::InvalidContour(format!(
            "at least 8 rays are required, got {}",
            config.rays
        )));
    }
    let mean = cloud.mean();
    let dirs = ray_directions(config.rays);
    let slopes = if config.search == RaySearch::Scaling && levels.iter().any(|&l| l < 1.0) {
        dirs.iter()
            .map(|&(theta, u)| unit_slope(cloud, order, u, &config.depth).map_err(|e| with_angle(theta, e)))
            .collect::<Result<Vec<_>, _>>()?
    } else {
        Vec::new()
    };

    levels
        .iter()
        .map(|&level| {
            let vertices = if level == 1.0 {
                vec![[mean[0], mean[1]]]
            } else {
                dirs.iter()
                    .enumerate()
                    .map(|(j, &(theta, u))| {
                        let r = match config.search {
                            RaySearch::Scaling => (1.0 / level - 1.0) / slopes[j],
                            RaySearch::Bisection => bisect_radius(cloud, order, level, u, &config.depth)
                                .map_err(|e| with_angle(theta, e))?,
                        };
                        Ok(along(mean, u, r))
                    })
                    .collect::<Result<Vec<_>, DepthError>>()?
            };
            Ok(ContourPolyline {
                level,
                order,
                vertices,
            })
        })
        .collect()
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn signed_area(poly: &[[f64; 2]]) -> f64 {
    let n = poly.len();
    (0..n)
        .map(|i| {
            let (a, b) = (poly[i], poly[(i + 1) % n]);
            a[0] * b[1] - a[1] * b[0]
        })
        .sum::<f64>()
        / 2.0
}

/// All turns of the closed polygon share one orientation (collinear allowed).
pub fn is_convex(poly: &[[f64; 2]]) -> bool {
    let n = poly.len();
    if n < 3 {
        return true;
    }
    let mut sign = 0.0;
    for i in 0..n {
        let (a, b, c) = (poly[i], poly[(i + 1) % n], poly[(i + 2) % n]);
        let e1 = (b[0] - a[0]).hypot(b[1] - a[1]);
        let e2 = (c[0] - b[0]).hypot(c[1] - b[1]);
        let z = cross(a, b, c);
        if z.abs() <= 1e-9 * e1 * e2 {
            continue;
        }
        if sign == 0.0 {
            sign = z.signum();
        } else if z.signum() != sign {
            return false;
        }
    }
    true
}

/// Whether `p` lies in the convex polygon, allowing `slack` distance outside.
pub fn contains(poly: &[[f64; 2]], p: [f64; 2], slack: f64) -> bool {
    let n = poly.len();
    match n {
        0 => return false,
        1 => return (p[0] - poly[0][0]).hypot(p[1] - poly[0][1]) <= slack,
        _ => {}
    }
    let orient = if signed_area(poly) >= 0.0 { 1.0 } else { -1.0 };
    (0..n).all(|i| {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        let len = (b[0] - a[0]).hypot(b[1] - a[1]);
        if len == 0.0 {
            return true;
        }
        orient * cross(a, b, p) / len >= -slack
    })
}

/// True iff every polyline is convex and each lies inside its predecessor.
/// Polylines must be ordered by strictly increasing level.
pub fn check_nested_convex(polylines: &[ContourPolyline]) -> Result<bool, DepthError> {
    if polylines.len() < 2 {
        return Err(DepthError::InvalidContour(
            "nesting needs at least two polylines".into(),
        ));
    }
    if polylines.windows(2).any(|w| w[0].level.partial_cmp(&w[1].level) != Some(std::cmp::Ordering::Less)) {
        return Err(DepthError::InvalidContour(
            "levels must be strictly increasing".into(),
        ));
    }
    if !polylines.iter().all(|p| is_convex(&p.vertices)) {
        return Ok(false);
    }
    Ok(polylines.windows(2).all(|w| {
        let outer = &w[0].vertices;
        let scale = outer
            .iter()
            .fold(1.0_f64, |m, v| m.max(v[0].abs()).max(v[1].abs()));
        w[1].vertices.iter().all(|&v| contains(outer, v, 1e-7 * scale))
    }))
}

/// Convex hull (counter-clockwise, no repeated endpoint) by the monotone chain.
pub fn convex_hull_2d(points: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<[f64; 2]> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &[f64; 2]>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}
