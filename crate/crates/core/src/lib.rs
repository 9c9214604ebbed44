//! Statistical depth for multivariate data clouds.
//!
//! Implements the classical zonoid depth, the Mahalanobis depth and the
//! family of L_q-norm zonoid depths for `q` in `[1, inf]`, which stay
//! positive outside the convex hull of the data. Also extracts depth
//! contours in the plane and generates the synthetic scenarios used to
//! illustrate them.
//!
//! ```
//! use zonoid_depth::{lq_depth, zonoid_depth, DataCloud, DepthOrder};
//!
//! let cloud = DataCloud::from_rows(&[[0.0], [1.0], [2.0]]).unwrap();
//! let inside = lq_depth(&cloud, &[1.5], DepthOrder::Finite(1.0)).unwrap();
//! assert!((inside.depth - 2.0 / 3.0).abs() < 1e-9);
//!
//! // Outside the hull the classical depth vanishes, the L_q depths do not.
//! assert_eq!(zonoid_depth(&cloud, &[5.0]).unwrap().depth, 0.0);
//! assert!(lq_depth(&cloud, &[5.0], DepthOrder::Infinity).unwrap().depth > 0.0);
//! ```

pub mod contour;
pub mod convex;
pub mod data;
pub mod depth;
pub mod error;
pub mod linalg;
pub mod lp;

pub use contour::{
    check_nested_convex, contour_levels, contour_polyline, convex_hull_2d, ray_boundary_point,
    ContourConfig, ContourPolyline, RaySearch,
};
pub use convex::{EngineConfig, Minimizer, NullspaceProgram};
pub use data::{generate, generate_points, load_csv, read_points, Scenario, ScenarioSpec};
pub use depth::{
    batch_depth, batch_depth_with, in_convex_hull, lq_depth, lq_depth_with, mahalanobis_depth,
    zonoid_depth, DataCloud, DepthConfig, DepthOrder, DepthResult, Q2Route,
};
pub use error::DepthError;
pub use linalg::Matrix;

/// Evenly spaced levels from `start` to 1 inclusive.
pub fn linspace_levels(start: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![1.0],
        _ => (0..count)
            .map(|i| {
                if i + 1 == count {
                    1.0
                } else {
                    start + (1.0 - start) * i as f64 / (count - 1) as f64
                }
            })
            .collect(),
    }
}
