//! Solves the maximal surface equation on the catenoid annulus and compares
//! against the closed form u = asinh(rho). The Lorentzian catenoid is the
//! canonical nonflat test: steep near the inner radius, known everywhere.

use maxsurf::{by_name, solve_maximal_graph, Grid, SolverSettings};

fn main() {
    let sc = by_name("catenoid-annulus").unwrap();
    let exact = sc.exact.unwrap();
    let settings = SolverSettings { residual_tol: 1e-8, ..Default::default() };

    let mut prev = f64::NAN;
    for nx in [65usize, 129, 257] {
        let ny = sc.ny_for(nx);
        let grid = Grid::new(sc.spec.chart, nx, ny).unwrap();
        let bdata = sc.boundary;
        let (g, stats) =
            solve_maximal_graph(&sc.spec, &grid, |x, y| bdata.eval(x, y), &settings).unwrap();
        assert!(!stats.stagnated_at_rounding_floor);

        let mut sup = 0.0f64;
        for j in 0..ny {
            for i in 0..nx {
                sup = sup.max((g.u[j * nx + i] - exact(grid.x(i), grid.y(j))).abs());
            }
        }
        let order = (prev / sup).ln() / 2f64.ln();
        println!(
            "nx = {nx:3}  sup error {sup:.3e}  order {:>5}  ({} Newton iters over {} stages, residual {:.2e}, margin {:.3})",
            if order.is_nan() { "-".into() } else { format!("{order:.2}") },
            stats.newton_iters,
            stats.continuation_stages,
            stats.final_residual,
            stats.spacelike_margin,
        );
        prev = sup;
    }
}
