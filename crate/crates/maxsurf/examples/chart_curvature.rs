//! Ambient metrics: conformal factors, their Gaussian curvature, and the
//! nonnegativity gate that every experiment must pass before solving.

use maxsurf::{validate_nonnegative_curvature, Chart, ConformalFactor, Grid, MetricSpec, TOL_CURV};

fn main() {
    let square = Chart::new(-1.0, 1.0, -1.0, 1.0);
    let specs = [
        MetricSpec::new("flat", square, ConformalFactor::Flat),
        MetricSpec::new("sphere", square, ConformalFactor::Sphere),
        MetricSpec::new("bump", square, ConformalFactor::Bump { a: 0.25 }),
        MetricSpec::new(
            "log-polar",
            Chart::new(0.5f64.ln(), 3.0f64.ln(), 0.0, 2.0 * std::f64::consts::PI),
            ConformalFactor::LogPolarFlat,
        ),
    ];

    println!("{:>10}  {:>12}  {:>12}  {:>12}", "metric", "e^2l(0,0)", "K(0,0)", "K(0.8,0.6)");
    for spec in &specs {
        let x1 = 0.8f64.min(spec.chart.x1);
        let y1 = 0.6f64.min(spec.chart.y1);
        println!(
            "{:>10}  {:>12.6}  {:>12.6}  {:>12.6}",
            spec.name,
            spec.conformal(0.0, 0.0),
            spec.gaussian_curvature(0.0, 0.0).unwrap() + 0.0,
            spec.gaussian_curvature(x1, y1).unwrap() + 0.0,
        );
    }

    // lambda = -a rho^2 gives K = 4a e^{2a rho^2}: positive for a > 0,
    // negative everywhere for a < 0, and the gate refuses the latter before
    // any solve happens
    for a in [0.25, -0.2] {
        let spec = MetricSpec::new("bump", square, ConformalFactor::Bump { a });
        let grid = Grid::new(square, 65, 65).unwrap();
        let (ok, min_k) = validate_nonnegative_curvature(&spec, &grid, TOL_CURV);
        println!("bump a = {a}: min K on grid = {min_k:.4}, admissible: {ok}");
    }
}
