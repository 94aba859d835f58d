//! Damped Newton solver for the maximal surface equation
//!
//!   Div(Du / √(1 − |Du|²)) = 0,   |Du|²_g = e^{−2λ}(u_x² + u_y²) < 1,
//!
//! posed as maximization of the discrete area functional. The iterate is kept
//! strictly spacelike by a line-search guard; boundary data whose harmonic
//! extension is not spacelike is reached by continuation: solve with scaled
//! boundary values b̄ + s(b − b̄) and warm-start each stage with the harmonic
//! increment of the boundary change.

mod multigrid;
mod stencil;

use crate::chart::{Grid, MetricSpec};
use crate::error::{Error, Result};
use multigrid::MgSolver;
use stencil::{apply_stencil_full, CellField};

/// Target spacelike margin for continuation warm starts; well above the
/// guard so every stage begins comfortably inside the spacelike set.
const CONTINUATION_MARGIN: f64 = 0.05;
const MIN_CONTINUATION_STEP: f64 = 1e-4;
const MIN_LINE_SEARCH: f64 = 1e-12;
/// Relative slack when enforcing area non-decrease; absorbs rounding in the
/// O(N)-term area sum near stationarity.
const AREA_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverSettings {
    pub max_newton_iters: usize,
    pub residual_tol: f64,
    /// Spacelike guard ε: every accepted iterate keeps 1 − |Du|²_g ≥ ε at
    /// cell centers and interior nodes.
    pub spacelike_guard: f64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings { max_newton_iters: 50, residual_tol: 1e-10, spacelike_guard: 1e-3 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SolverStats {
    pub newton_iters: usize,
    pub continuation_stages: usize,
    pub final_residual: f64,
    pub spacelike_margin: f64,
    pub area: f64,
    /// Residual stalled at the floating-point floor of the residual
    /// functional before reaching residual_tol; the iterate is a critical
    /// point to machine precision.
    pub stagnated_at_rounding_floor: bool,
}

/// Discrete spacelike graph with cached node gradients.
#[derive(Debug, Clone)]
pub struct GraphFunction {
    pub grid: Grid,
    pub u: Vec<f64>,
    /// Chart-coordinate Du per node: central differences inside, one-sided
    /// 3-point at the boundary (both second order).
    pub grad_u: Vec<[f64; 2]>,
    /// min over interior nodes of 1 − |Du|²_g.
    pub spacelike_margin: f64,
}

fn node_gradients(grid: &Grid, u: &[f64]) -> Vec<[f64; 2]> {
    let (nx, ny) = (grid.nx, grid.ny);
    let (hx, hy) = (grid.hx(), grid.hy());
    let mut g = vec![[0.0; 2]; nx * ny];
    for j in 0..ny {
        for i in 0..nx {
            let n = j * nx + i;
            let ux = if i == 0 {
                (-3.0 * u[n] + 4.0 * u[n + 1] - u[n + 2]) / (2.0 * hx)
            } else if i == nx - 1 {
                (3.0 * u[n] - 4.0 * u[n - 1] + u[n - 2]) / (2.0 * hx)
            } else {
                (u[n + 1] - u[n - 1]) / (2.0 * hx)
            };
            let uy = if j == 0 {
                (-3.0 * u[n] + 4.0 * u[n + nx] - u[n + 2 * nx]) / (2.0 * hy)
            } else if j == ny - 1 {
                (3.0 * u[n] - 4.0 * u[n - nx] + u[n - 2 * nx]) / (2.0 * hy)
            } else {
                (u[n + nx] - u[n - nx]) / (2.0 * hy)
            };
            g[n] = [ux, uy];
        }
    }
    g
}

impl GraphFunction {
    /// Wraps node values as a graph, validating the spacelike condition at
    /// interior nodes.
    pub fn new(grid: Grid, spec: &MetricSpec, u: Vec<f64>) -> Result<Self> {
        assert_eq!(u.len(), grid.node_count());
        let grad_u = node_gradients(&grid, &u);
        let mut margin = f64::INFINITY;
        let mut worst = 0;
        for j in 1..grid.ny - 1 {
            for i in 1..grid.nx - 1 {
                let n = grid.idx(i, j);
                let [ux, uy] = grad_u[n];
                let w2 = (-2.0 * spec.lambda(grid.x(i), grid.y(j))).exp();
                let m = 1.0 - w2 * (ux * ux + uy * uy);
                if m < margin {
                    margin = m;
                    worst = n;
                }
            }
        }
        if margin <= 0.0 {
            return Err(Error::NonSpacelike { index: worst, margin });
        }
        Ok(GraphFunction { grid, u, grad_u, spacelike_margin: margin })
    }

    /// |Du|²_g at a node.
    pub fn du_sq(&self, spec: &MetricSpec, i: usize, j: usize) -> f64 {
        let n = self.grid.idx(i, j);
        let [ux, uy] = self.grad_u[n];
        (-2.0 * spec.lambda(self.grid.x(i), self.grid.y(j))).exp() * (ux * ux + uy * uy)
    }
}

fn cell_field(spec: &MetricSpec, grid: &Grid) -> CellField {
    CellField::new(spec, &grid.chart, grid.nx, grid.ny)
}

/// e^{−2λ} at every node.
fn node_w2(spec: &MetricSpec, grid: &Grid) -> Vec<f64> {
    let mut w = Vec::with_capacity(grid.node_count());
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            w.push((-2.0 * spec.lambda(grid.x(i), grid.y(j))).exp());
        }
    }
    w
}

/// min over interior nodes of 1 − |Du|²_g using central differences.
fn interior_node_margin(grid: &Grid, w2n: &[f64], u: &[f64]) -> f64 {
    let (nx, ny) = (grid.nx, grid.ny);
    let (hx, hy) = (grid.hx(), grid.hy());
    let mut m = f64::INFINITY;
    for j in 1..ny - 1 {
        for i in 1..nx - 1 {
            let n = j * nx + i;
            let ux = (u[n + 1] - u[n - 1]) / (2.0 * hx);
            let uy = (u[n + nx] - u[n - nx]) / (2.0 * hy);
            m = m.min(1.0 - w2n[n] * (ux * ux + uy * uy));
        }
    }
    m
}

/// Residual field of the graph equation at interior nodes: the conformal
/// divergence e^{−2λ} div(∇u/√(1−q)) assembled exactly as the discrete area
/// gradient (scaled by the cell measure). Boundary entries are 0.
pub fn pde_residual_field(g: &GraphFunction, spec: &MetricSpec) -> Vec<f64> {
    let field = cell_field(spec, &g.grid);
    let mut r = field.area_gradient(&g.u);
    let inv_cell = 1.0 / (field.hx * field.hy);
    let w2n = node_w2(spec, &g.grid);
    for (n, e) in r.iter_mut().enumerate() {
        *e *= w2n[n] * inv_cell;
    }
    r
}

/// Sup-norm of the residual field over interior nodes.
pub fn pde_residual(g: &GraphFunction, spec: &MetricSpec) -> f64 {
    pde_residual_field(g, spec).iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Per-node mean curvature H = ½ Div(Du/√(1−|Du|²)) of the graph.
pub fn mean_curvature_of_graph(g: &GraphFunction, spec: &MetricSpec) -> Vec<f64> {
    pde_residual_field(g, spec).iter().map(|v| 0.5 * v).collect()
}

struct StageOutcome {
    iters: usize,
    residual: f64,
    stagnated: bool,
}

struct NewtonContext<'a> {
    spec: &'a MetricSpec,
    grid: &'a Grid,
    field: CellField,
    w2n: Vec<f64>,
    guard: f64,
    max_iters: usize,
}

impl NewtonContext<'_> {
    fn residual(&self, g: &[f64]) -> f64 {
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        let inv_cell = 1.0 / (self.field.hx * self.field.hy);
        let mut r: f64 = 0.0;
        for j in 1..ny - 1 {
            for i in 1..nx - 1 {
                let n = j * nx + i;
                r = r.max((g[n] * self.w2n[n] * inv_cell).abs());
            }
        }
        r
    }

    fn guard_ok(&self, u: &[f64]) -> bool {
        self.field.cell_margin(u) >= self.guard
            && interior_node_margin(self.grid, &self.w2n, u) >= self.guard
    }

    /// Rounding floor of the residual functional: differences of O(|u|)
    /// node values divided by h² and scaled by e^{−2λ}.
    fn residual_floor(&self, u: &[f64]) -> f64 {
        let umax = u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let wmax = self.w2n.iter().fold(0.0f64, |m, v| m.max(*v));
        let hmin = self.field.hx.min(self.field.hy);
        32.0 * f64::EPSILON * (1.0 + umax) * wmax / (hmin * hmin)
    }

    /// Damped Newton with fixed boundary values; u must satisfy the guard.
    fn newton_stage(&self, u: &mut Vec<f64>, tol: f64) -> Result<StageOutcome> {
        let n = u.len();
        let mut res0 = f64::NAN;
        let mut best = f64::INFINITY;
        let mut flat_iters = 0usize;
        for it in 0..=self.max_iters {
            let g = self.field.area_gradient(u);
            let res = self.residual(&g);
            if res < tol {
                return Ok(StageOutcome { iters: it, residual: res, stagnated: false });
            }
            // at the functional's rounding floor the steps shuffle noise;
            // stop once several iterations bring no real decrease
            if res < 0.9 * best {
                best = res;
                flat_iters = 0;
            } else {
                flat_iters += 1;
            }
            let at_floor = res <= tol.max(self.residual_floor(u));
            if at_floor && flat_iters >= 5 {
                return Ok(StageOutcome { iters: it, residual: res, stagnated: true });
            }
            if it == self.max_iters {
                if at_floor {
                    return Ok(StageOutcome { iters: it, residual: res, stagnated: true });
                }
                return Err(Error::SolverFailure { residual: res, iters: it });
            }
            if res0.is_nan() {
                res0 = res;
            }
            let mut mg = MgSolver::new(self.spec, self.grid, u);
            let forcing = (res / res0).clamp(1e-8, 0.1);
            let (delta, _, _) = mg.solve(&g, forcing, 200);
            let a0 = self.field.area(u);
            let mut t = 1.0;
            let mut accepted = false;
            while t >= MIN_LINE_SEARCH {
                let mut ut = u.clone();
                for k in 0..n {
                    ut[k] += t * delta[k];
                }
                if self.guard_ok(&ut) && self.field.area(&ut) >= a0 - AREA_SLACK * a0.abs() {
                    *u = ut;
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            if !accepted {
                if res <= tol.max(self.residual_floor(u)) {
                    return Ok(StageOutcome { iters: it, residual: res, stagnated: true });
                }
                let m = self.field.cell_margin(u).min(interior_node_margin(self.grid, &self.w2n, u));
                if m <= 2.0 * self.guard {
                    return Err(Error::SpacelikeBreakdown { margin: m, guard: self.guard });
                }
                return Err(Error::SolverFailure { residual: res, iters: it });
            }
        }
        unreachable!()
    }
}

/// Solves the Dirichlet problem for the maximal surface equation.
///
/// The initial iterate is the discrete harmonic extension of the boundary
/// data; if that extension is not safely spacelike the solver continues in
/// the boundary data itself, which realizes "scaled so the guard holds"
/// without ever presenting Newton with a near-null margin.
pub fn solve_maximal_graph(
    spec: &MetricSpec,
    grid: &Grid,
    boundary: impl Fn(f64, f64) -> f64,
    settings: &SolverSettings,
) -> Result<(GraphFunction, SolverStats)> {
    assert!(settings.residual_tol > 0.0);
    assert!(settings.spacelike_guard > 0.0 && settings.spacelike_guard < 1.0);
    let field = cell_field(spec, grid);
    let w2n = node_w2(spec, grid);
    let (nx, ny) = (grid.nx, grid.ny);
    let n = nx * ny;

    // boundary values and their mean
    let mut ub = vec![0.0; n];
    let mut bsum = 0.0;
    let mut bcount = 0usize;
    for j in 0..ny {
        for i in 0..nx {
            if grid.is_boundary(i, j) {
                let v = boundary(grid.x(i), grid.y(j));
                ub[grid.idx(i, j)] = v;
                bsum += v;
                bcount += 1;
            }
        }
    }
    let bbar = bsum / bcount as f64;

    // harmonic extension: the u = 0 operator is the bilinear FEM Laplacian
    let zero = vec![0.0; n];
    let st0 = field.assemble(&zero);
    let mut rhs = vec![0.0; n];
    apply_stencil_full(nx, ny, &st0, &ub, &mut rhs);
    for e in rhs.iter_mut() {
        *e = -*e;
    }
    let mut mg0 = MgSolver::new(spec, grid, &zero);
    let (delta, _, _) = mg0.solve(&rhs, 1e-12, 400);
    let mut harmonic = ub.clone();
    for k in 0..n {
        harmonic[k] += delta[k];
    }

    // continuation field: harmonic extension of b − b̄
    let d: Vec<f64> = harmonic.iter().map(|v| v - bbar).collect();

    let ctx = NewtonContext {
        spec,
        grid,
        field,
        w2n,
        guard: settings.spacelike_guard,
        max_iters: settings.max_newton_iters,
    };

    let margin_of = |u: &[f64]| ctx.field.cell_margin(u).min(interior_node_margin(grid, &ctx.w2n, u));

    let mut s;
    let mut u;
    if margin_of(&harmonic) >= CONTINUATION_MARGIN.max(settings.spacelike_guard) {
        s = 1.0;
        u = harmonic;
    } else {
        // q(b̄ + sD) = s²·q(D) exactly, so s₀ lands on margin 1/2
        let qmax = 1.0 - margin_of(&d.iter().map(|v| bbar + v).collect::<Vec<_>>()).min(1.0);
        let qd = qmax.max(f64::MIN_POSITIVE);
        s = (0.5 / qd).sqrt().min(1.0);
        u = d.iter().map(|v| bbar + s * v).collect();
    }

    let mut total_iters = 0;
    let mut stages = 0;
    let mut residual;
    let mut stagnated;
    let final_tol_floor = settings.residual_tol.max(1e-8);
    loop {
        let tol = if s >= 1.0 { settings.residual_tol } else { final_tol_floor };
        let out = ctx.newton_stage(&mut u, tol)?;
        total_iters += out.iters;
        stages += 1;
        residual = out.residual;
        stagnated = out.stagnated;
        if s >= 1.0 {
            break;
        }
        let mut ds = 1.0 - s;
        loop {
            let trial: Vec<f64> = u.iter().zip(&d).map(|(a, b)| a + ds * b).collect();
            if margin_of(&trial) >= CONTINUATION_MARGIN {
                u = trial;
                break;
            }
            ds *= 0.5;
            if ds < MIN_CONTINUATION_STEP {
                return Err(Error::SpacelikeBreakdown {
                    margin: margin_of(&u.iter().zip(&d).map(|(a, b)| a + ds * b).collect::<Vec<_>>()),
                    guard: settings.spacelike_guard,
                });
            }
        }
        s += ds;
        if s > 1.0 - 1e-15 {
            s = 1.0;
        }
    }

    let area = ctx.field.area(&u);
    let graph = GraphFunction::new(grid.clone(), spec, u)?;
    let stats = SolverStats {
        newton_iters: total_iters,
        continuation_stages: stages,
        final_residual: residual,
        spacelike_margin: graph.spacelike_margin,
        area,
        stagnated_at_rounding_floor: stagnated,
    };
    Ok((graph, stats))
}
