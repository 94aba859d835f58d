//! Numerical laboratory for maximal spacelike graphs in a Lorentzian product
//! M² × ℝ₁, where M carries a conformal metric e^{2λ}(dx² + dy²) on a
//! rectangular chart.
//!
//! The pipeline: solve the maximal surface equation for a graph u, compute
//! its second-order Lorentzian geometry (Gauss map Θ, shape operator,
//! curvatures), build intrinsic geodesic discs by fast marching on a
//! triangulation of the induced metric, and verify the local integral
//! estimate 0 ≤ ∫_{D(p,r)} ‖A‖² dΣ ≤ c_r·L(r)/(r·log(R/r)) together with its
//! supporting identities, the pointwise inequality behind it, the log radius
//! bound, and the totally-geodesic rigidity classification.

pub mod chart;
pub mod config;
pub mod error;
pub mod estimate;
pub mod geodesic;
pub mod geometry;
pub mod harness;
pub mod scenario;
pub mod solver;

pub use chart::{validate_nonnegative_curvature, Chart, ConformalFactor, Grid, MetricSpec, TOL_CURV};
pub use config::ExperimentConfig;
pub use error::{Error, Result};
pub use estimate::{
    alpha_r, c_r, corollary2_bound, eq17_check, eq17_margin_field, lemma1_check, phi,
    rigidity_probe, theorem1_check, DiscCenter, EstimateReport, LemmaBound, RigidityClass,
    LHS_FLOOR, RIGIDITY_TOL, TOL_INEQ_REL,
};
pub use geodesic::{
    disc_extract, disc_integral, geodesic_distance, geodesic_distance_with_seed_radius,
    DistanceField, GeodesicDisc, TriMesh,
};
pub use geodesic::triangulate;
pub use geometry::{
    a_norm_sq, brioschi_curvature, gauss_curvature_sigma, gauss_map_theta, identity_checks,
    identity_residual_fields, induced_metric, laplace_beltrami, shape_operator,
    CurvatureComparison, IdentityFields, IdentityReport, SurfaceGeometry,
    DEFAULT_MAX_MEAN_CURVATURE,
};
pub use harness::{
    converge, march_from_center, radii_pairs, run, solve_scenario, sweep, sweep_csv, Assertion,
    ConvergenceTable, MarchedDiscs, RunReport, Solved,
};
pub use scenario::{by_name, BoundaryData, Scenario, SCENARIO_NAMES};
pub use solver::{
    mean_curvature_of_graph, pde_residual, pde_residual_field, solve_maximal_graph, GraphFunction,
    SolverSettings, SolverStats,
};
