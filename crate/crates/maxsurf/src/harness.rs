//! Experiment runner: config → solve → geometry → geodesic discs →
//! estimates. Produces a machine-readable report, CSV sweeps, convergence
//! tables, and whitespace-separated plot data.
//!
//! Everything written to JSON/CSV is a pure function of the config, so two
//! runs of the same config produce byte-identical files. Wall-clock timings
//! stay out of the serialized report; they appear only in the text form.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::chart::{validate_nonnegative_curvature, Grid, TOL_CURV};
use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::estimate::{
    eq17_margin_field, lemma1_check, rigidity_probe, theorem1_check, DiscCenter, EstimateReport,
    RigidityClass, LHS_FLOOR, TOL_INEQ_REL,
};
use crate::geodesic::{
    disc_extract, geodesic_distance, geodesic_distance_with_seed_radius, triangulate,
    DistanceField, TriMesh,
};
use crate::geometry::{identity_checks, IdentityReport, SurfaceGeometry};
use crate::scenario::Scenario;
use crate::solver::{
    pde_residual, solve_maximal_graph, GraphFunction, SolverSettings, SolverStats,
};

/// Fraction of the distance to the nearest chart-boundary vertex treated as
/// usable disc radius; the rest is margin for the outer disc's interior
/// stencils.
pub const AVAILABLE_FRACTION: f64 = 0.85;
/// Inner radii of the standard sweep, as fractions of the available radius.
pub const SWEEP_R_FRACTIONS: [f64; 3] = [0.15, 0.25, 0.35];
/// Outer/inner radius ratios of the standard sweep.
pub const SWEEP_RATIOS: [f64; 3] = [1.5, 2.0, 3.0];
/// Mean-curvature ceiling accepted when certifying that a solve produced a
/// maximal surface.
pub const MAXIMALITY_TOL: f64 = 1e-6;

fn at_stage<T>(stage: &'static str, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::Stage { stage, source: Box::new(e) })
}

/// Output of the solve + geometry stages for one resolution.
pub struct Solved {
    pub scenario: Scenario,
    pub nx: usize,
    pub ny: usize,
    pub graph: GraphFunction,
    pub stats: SolverStats,
    pub geom: SurfaceGeometry,
    pub identity: IdentityReport,
    pub min_curvature: f64,
}

/// Solves the configured scenario at grid size `nx` and computes its
/// geometry and identity residuals.
pub fn solve_scenario(cfg: &ExperimentConfig, nx: usize) -> Result<Solved> {
    let scenario = at_stage("setup", cfg.scenario())?;
    let ny = scenario.ny_for(nx);
    let grid = at_stage("setup", Grid::new(scenario.spec.chart, nx, ny))?;
    let (curv_ok, min_k) = validate_nonnegative_curvature(&scenario.spec, &grid, TOL_CURV);
    if !curv_ok {
        return Err(Error::Stage {
            stage: "setup",
            source: Box::new(Error::Config(format!(
                "ambient curvature dips to {min_k:.3e}; the estimate requires K_M >= 0"
            ))),
        });
    }
    let settings =
        SolverSettings { residual_tol: cfg.residual_tol, ..SolverSettings::default() };
    let data = scenario.boundary;
    let (graph, stats) = at_stage(
        "solve",
        solve_maximal_graph(&scenario.spec, &grid, |x, y| data.eval(x, y), &settings),
    )?;
    let geom = at_stage("geometry", SurfaceGeometry::new(&graph, &scenario.spec))?;
    let identity = identity_checks(&geom);
    Ok(Solved { scenario, nx, ny, graph, stats, geom, identity, min_curvature: min_k })
}

/// Mesh, distance field and derived disc parameters around one center.
pub struct MarchedDiscs {
    pub mesh: TriMesh,
    pub field: DistanceField,
    pub center: DiscCenter,
    /// 0.85 × (distance to the nearest boundary vertex).
    pub r_available: f64,
    /// Pointwise tolerance for ψΔψ ≥ 0, tied to the measured Laplacian
    /// identity residual.
    pub tol_pt: f64,
}

pub fn march_from_center(solved: &Solved, cfg: &ExperimentConfig) -> Result<MarchedDiscs> {
    let mesh = at_stage("mesh", triangulate(&solved.graph, &solved.geom))?;
    let (cx, cy) = cfg.center.unwrap_or(solved.scenario.center);
    let source = solved.graph.grid.nearest_node(cx, cy);
    let field = geodesic_distance(&mesh, source);
    let mut dmin = f64::INFINITY;
    for v in 0..mesh.node_count() {
        if mesh.is_boundary_vertex(v) {
            dmin = dmin.min(field.d[v]);
        }
    }
    let center =
        DiscCenter { index: source, x: mesh.verts[source][0], y: mesh.verts[source][1] };
    Ok(MarchedDiscs {
        mesh,
        field,
        center,
        r_available: AVAILABLE_FRACTION * dmin,
        tol_pt: cfg.tol_pt_factor * solved.identity.laplacian,
    })
}

/// Radii pairs for a run: explicit pairs if the config lists any, otherwise
/// the standard 3×3 sweep grid or a single mid-sized pair.
pub fn radii_pairs(cfg: &ExperimentConfig, r_available: f64, sweep_grid: bool) -> Vec<(f64, f64)> {
    if !cfg.pairs.is_empty() {
        return cfg.pairs.clone();
    }
    if sweep_grid {
        let mut out = Vec::with_capacity(9);
        for fr in SWEEP_R_FRACTIONS {
            let r = fr * r_available;
            for ratio in SWEEP_RATIOS {
                out.push((r, ratio * r));
            }
        }
        out
    } else {
        vec![(0.25 * r_available, 0.5 * r_available)]
    }
}

/// One recorded check: what was asserted, whether it held, and the numbers
/// behind it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assertion {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn record(list: &mut Vec<Assertion>, name: String, pass: bool, detail: String) {
    list.push(Assertion { name, pass, detail });
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverRow {
    pub newton_iters: usize,
    pub continuation_stages: usize,
    pub final_residual: f64,
    pub spacelike_margin: f64,
    pub area: f64,
    pub stagnated_at_rounding_floor: bool,
}

impl From<&SolverStats> for SolverRow {
    fn from(s: &SolverStats) -> Self {
        SolverRow {
            newton_iters: s.newton_iters,
            continuation_stages: s.continuation_stages,
            final_residual: s.final_residual,
            spacelike_margin: s.spacelike_margin,
            area: s.area,
            stagnated_at_rounding_floor: s.stagnated_at_rounding_floor,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityRow {
    pub gradient: f64,
    pub gradient_norm: f64,
    pub laplacian: f64,
    pub t_top_norm: f64,
    pub ring: usize,
}

impl From<&IdentityReport> for IdentityRow {
    fn from(r: &IdentityReport) -> Self {
        IdentityRow {
            gradient: r.gradient,
            gradient_norm: r.gradient_norm,
            laplacian: r.laplacian,
            t_top_norm: r.t_top_norm,
            ring: r.ring,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub nx: usize,
    pub ny: usize,
    /// Sup-error of the solved height: against the closed form when the
    /// scenario has one, otherwise against the finest grid (absent there).
    pub solver_err: Option<f64>,
    /// Identity residual sups: gradient, gradient-norm, Laplacian, ‖∂_t^⊤‖².
    pub identity: [f64; 4],
    /// Sup-difference of the distance field against the finest grid, over
    /// shared nodes beyond the seed radius; absent on the finest row.
    pub distance_err: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderRow {
    pub nx_coarse: usize,
    pub nx_fine: usize,
    pub solver: Option<f64>,
    /// None when either sup sits at the rounding floor (exact scenarios).
    pub identity: [Option<f64>; 4],
    pub distance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
    /// Observed orders between consecutive rows: log(e_c/e_f)/log(h_c/h_f).
    pub orders: Vec<OrderRow>,
}

/// Everything one invocation produced. Serializes deterministically;
/// timings are text-report-only.
#[derive(Debug, Serialize, Deserialize)]
pub struct RunReport {
    pub mode: String,
    /// Canonical config text; parses back to the config that produced this.
    pub config: String,
    pub scenario: String,
    pub nx: usize,
    pub ny: usize,
    pub solver: SolverRow,
    pub identities: IdentityRow,
    pub rigidity: RigidityClass,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub center: Option<DiscCenter>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_available: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_pt: Option<f64>,
    pub estimates: Vec<EstimateReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convergence: Option<ConvergenceTable>,
    pub assertions: Vec<Assertion>,
    /// (stage, seconds); not serialized.
    #[serde(skip)]
    pub timings: Vec<(String, f64)>,
}

impl RunReport {
    pub fn failures(&self) -> usize {
        self.assertions.iter().filter(|a| !a.pass).count()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "== {} [{}] {}x{} ==", self.scenario, self.mode, self.nx, self.ny);
        let _ = writeln!(s, "\nconfig:");
        for line in self.config.lines() {
            let _ = writeln!(s, "    {line}");
        }
        let sv = &self.solver;
        let _ = writeln!(
            s,
            "solver: {} Newton iters, {} continuation stages, residual {:.3e}, spacelike margin {:.3e}, area {:.12e}",
            sv.newton_iters, sv.continuation_stages, sv.final_residual, sv.spacelike_margin, sv.area
        );
        let id = &self.identities;
        let _ = writeln!(
            s,
            "identities (sup, ring >= {}): gradient {:.3e}  gradient-norm {:.3e}  laplacian {:.3e}  t-top-norm {:.3e}",
            id.ring, id.gradient, id.gradient_norm, id.laplacian, id.t_top_norm
        );
        let _ = writeln!(s, "rigidity: {}", rigidity_name(self.rigidity));
        if let (Some(c), Some(ra)) = (&self.center, self.r_available) {
            let _ = writeln!(
                s,
                "discs: center node {} at ({:.6}, {:.6}), available radius {:.6}",
                c.index, c.x, c.y, ra
            );
        }
        if !self.estimates.is_empty() {
            let _ = writeln!(
                s,
                "\n{:>10} {:>10} {:>10} {:>13} {:>13} {:>13} {:>13} {:>10}",
                "r", "R", "alpha_r", "lhs", "rhs", "slack", "C_r", "R_max"
            );
            for e in &self.estimates {
                let cr = e.c_radius.map_or("-".to_string(), |v| format!("{v:.4e}"));
                let rm = e.r_max.map_or("-".to_string(), |v| format!("{v:.3e}"));
                let _ = writeln!(
                    s,
                    "{:>10.5} {:>10.5} {:>10.6} {:>13.5e} {:>13.5e} {:>13.5e} {:>13} {:>10}",
                    e.r, e.r_outer, e.alpha_r, e.lhs, e.rhs, e.slack, cr, rm
                );
            }
        }
        if let Some(t) = &self.convergence {
            let _ = writeln!(
                s,
                "\n{:>6} {:>6} {:>12} {:>12} {:>12} {:>12} {:>12} {:>12}",
                "nx", "ny", "solver", "ident-grad", "ident-gnorm", "ident-lap", "ident-ttop", "distance"
            );
            let opt = |v: Option<f64>| v.map_or("-".to_string(), |e| format!("{e:.4e}"));
            for row in &t.rows {
                let _ = writeln!(
                    s,
                    "{:>6} {:>6} {:>12} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e} {:>12}",
                    row.nx,
                    row.ny,
                    opt(row.solver_err),
                    row.identity[0],
                    row.identity[1],
                    row.identity[2],
                    row.identity[3],
                    opt(row.distance_err)
                );
            }
            let _ = writeln!(s, "observed orders:");
            let fmt2 = |v: Option<f64>| v.map_or("-".to_string(), |p| format!("{p:.2}"));
            for o in &t.orders {
                let _ = writeln!(
                    s,
                    "  {} -> {}: solver {}  identity [{}, {}, {}, {}]  distance {}",
                    o.nx_coarse,
                    o.nx_fine,
                    fmt2(o.solver),
                    fmt2(o.identity[0]),
                    fmt2(o.identity[1]),
                    fmt2(o.identity[2]),
                    fmt2(o.identity[3]),
                    fmt2(o.distance),
                );
            }
        }
        let _ = writeln!(s, "\nassertions:");
        for a in &self.assertions {
            let flag = if a.pass { "PASS" } else { "FAIL" };
            let _ = writeln!(s, "  [{flag}] {}: {}", a.name, a.detail);
        }
        let _ = writeln!(
            s,
            "result: {} of {} checks passed",
            self.assertions.len() - self.failures(),
            self.assertions.len()
        );
        if !self.timings.is_empty() {
            let _ = writeln!(s, "\ntimings:");
            for (stage, secs) in &self.timings {
                let _ = writeln!(s, "  {stage}: {secs:.2}s");
            }
        }
        s
    }
}

fn rigidity_name(c: RigidityClass) -> &'static str {
    match c {
        RigidityClass::TotallyGeodesicSlice => "totally-geodesic-slice",
        RigidityClass::TotallyGeodesicNonSlice => "totally-geodesic-nonslice",
        RigidityClass::NonTotallyGeodesic => "non-totally-geodesic",
    }
}

fn global_assertions(solved: &Solved, cfg: &ExperimentConfig, list: &mut Vec<Assertion>, tag: &str) {
    let st = &solved.stats;
    let converged = st.final_residual <= cfg.residual_tol || st.stagnated_at_rounding_floor;
    record(
        list,
        format!("solver-converged{tag}"),
        converged,
        format!(
            "residual {:.3e} (tol {:.1e}{})",
            st.final_residual,
            cfg.residual_tol,
            if st.stagnated_at_rounding_floor { ", at rounding floor" } else { "" }
        ),
    );
    record(
        list,
        format!("spacelike{tag}"),
        st.spacelike_margin > 0.0,
        format!("margin {:.3e}", st.spacelike_margin),
    );
    let sup_h = 0.5 * pde_residual(&solved.graph, &solved.scenario.spec);
    record(
        list,
        format!("maximal{tag}"),
        sup_h <= MAXIMALITY_TOL,
        format!("sup |H| = {:.3e} (tol {:.1e})", sup_h, MAXIMALITY_TOL),
    );
    record(
        list,
        format!("ambient-curvature{tag}"),
        true,
        format!("min K_M = {:.3e}", solved.min_curvature),
    );
}

fn run_estimates(
    solved: &Solved,
    discs: &MarchedDiscs,
    pairs: &[(f64, f64)],
    list: &mut Vec<Assertion>,
) -> Result<Vec<EstimateReport>> {
    let mut reports = Vec::with_capacity(pairs.len());
    for (k, &(r, rr)) in pairs.iter().enumerate() {
        let rep = at_stage(
            "estimate",
            theorem1_check(&solved.geom, &discs.mesh, &discs.field, r, rr, discs.tol_pt),
        )?;
        let lem = at_stage(
            "estimate",
            lemma1_check(&solved.geom, &discs.mesh, &discs.field, r, rr, discs.tol_pt),
        )?;
        record(
            list,
            format!("slack-nonneg-{k}"),
            rep.slack >= -TOL_INEQ_REL * rep.rhs,
            format!("r={r:.5} R={rr:.5}: slack {:.4e}, rhs {:.4e}", rep.slack, rep.rhs),
        );
        record(
            list,
            format!("lemma-bound-{k}"),
            lem.lemma_lhs <= lem.lemma_rhs * (1.0 + TOL_INEQ_REL),
            format!("lhs {:.4e} <= rhs {:.4e}", lem.lemma_lhs, lem.lemma_rhs),
        );
        record(
            list,
            format!("lemma-hypothesis-{k}"),
            lem.hypothesis_ok,
            format!("min psi*lap(psi) = {:.4e} (tol {:.2e})", lem.pointwise_min, discs.tol_pt),
        );
        record(
            list,
            format!("eq17-margin-{k}"),
            rep.eq17_min_margin >= 0.0,
            format!("min margin {:.4e}", rep.eq17_min_margin),
        );
        match rep.c_radius {
            Some(c) => {
                let used = (rr / r).ln();
                record(
                    list,
                    format!("radius-bound-{k}"),
                    used <= c + 1e-12,
                    format!("log(R/r) = {used:.4e} <= C_r = {c:.4e}"),
                );
            }
            None => record(
                list,
                format!("radius-bound-{k}"),
                rep.lhs <= LHS_FLOOR,
                format!("bound undefined: disc integral {:.3e} at floor", rep.lhs),
            ),
        }
        reports.push(rep);
    }
    Ok(reports)
}

fn execute(cfg: &ExperimentConfig, out: Option<&Path>, sweep_grid: bool) -> Result<RunReport> {
    at_stage("config", cfg.validate())?;
    let mut timings = Vec::new();
    let t = Instant::now();
    let solved = solve_scenario(cfg, cfg.resolution)?;
    timings.push(("solve+geometry".to_string(), t.elapsed().as_secs_f64()));

    let t = Instant::now();
    let discs = march_from_center(&solved, cfg)?;
    timings.push(("mesh+distance".to_string(), t.elapsed().as_secs_f64()));

    let mut assertions = Vec::new();
    global_assertions(&solved, cfg, &mut assertions, "");
    let pairs = radii_pairs(cfg, discs.r_available, sweep_grid);
    let t = Instant::now();
    let estimates = run_estimates(&solved, &discs, &pairs, &mut assertions)?;
    timings.push(("estimates".to_string(), t.elapsed().as_secs_f64()));

    let mut report = RunReport {
        mode: if sweep_grid { "sweep" } else { "run" }.to_string(),
        config: cfg.render(),
        scenario: solved.scenario.name.to_string(),
        nx: solved.nx,
        ny: solved.ny,
        solver: SolverRow::from(&solved.stats),
        identities: IdentityRow::from(&solved.identity),
        rigidity: rigidity_probe(&solved.geom),
        center: Some(discs.center),
        r_available: Some(discs.r_available),
        tol_pt: Some(discs.tol_pt),
        estimates,
        convergence: None,
        assertions,
        timings,
    };
    if let Some(dir) = out {
        let t = Instant::now();
        write_common(dir, &report)?;
        if sweep_grid {
            write_text(&dir.join("sweep.csv"), &sweep_csv(&report.estimates))?;
            write_text(&dir.join("slack_vs_R.dat"), &slack_plot(&report.estimates))?;
        } else {
            write_field_data(dir, &solved, &discs, &report.estimates)?;
        }
        report.timings.push(("write".to_string(), t.elapsed().as_secs_f64()));
    }
    Ok(report)
}

/// Full pipeline at the config's single resolution with its configured (or
/// default mid-sized) radii pairs.
pub fn run(cfg: &ExperimentConfig, out: Option<&Path>) -> Result<RunReport> {
    execute(cfg, out, false)
}

/// Like [`run`] but over the standard 9-pair radii grid, emitting one CSV
/// row per pair.
pub fn sweep(cfg: &ExperimentConfig, out: Option<&Path>) -> Result<RunReport> {
    execute(cfg, out, true)
}

/// Solves every configured resolution, comparing errors row to row. Grids
/// must be nested (each nx−1 divides the next) for the distance and
/// reference-based solver columns; rows are skipped otherwise.
pub fn converge(cfg: &ExperimentConfig, out: Option<&Path>) -> Result<RunReport> {
    at_stage("config", cfg.validate())?;
    let mut timings = Vec::new();
    let mut solves = Vec::with_capacity(cfg.resolutions.len());
    for &nx in &cfg.resolutions {
        let t = Instant::now();
        solves.push(solve_scenario(cfg, nx)?);
        timings.push((format!("solve-{nx}"), t.elapsed().as_secs_f64()));
    }
    let nested = cfg.resolutions.windows(2).all(|w| (w[1] - 1) % (w[0] - 1) == 0);

    // distance fields share one chart center (snapped on the coarsest grid,
    // hence a node of every finer nested grid) and one seed radius, so the
    // cross-resolution differences measure marching error alone
    let mut marched = Vec::new();
    if nested {
        let (cx, cy) = cfg.center.unwrap_or(solves[0].scenario.center);
        let coarse_src = solves[0].graph.grid.nearest_node(cx, cy);
        let snapped = (solves[0].graph.grid.x(coarse_src % solves[0].nx),
                       solves[0].graph.grid.y(coarse_src / solves[0].nx));
        let mut seed_radius = None;
        for s in &solves {
            let t = Instant::now();
            let mesh = at_stage("mesh", triangulate(&s.graph, &s.geom))?;
            let src = s.graph.grid.nearest_node(snapped.0, snapped.1);
            let radius = *seed_radius.get_or_insert(10.0 * mesh.hmax);
            let field = geodesic_distance_with_seed_radius(&mesh, src, radius);
            marched.push((field, radius));
            timings.push((format!("distance-{}", s.nx), t.elapsed().as_secs_f64()));
        }
    }

    let finest = solves.len() - 1;
    let mut rows = Vec::new();
    for (k, s) in solves.iter().enumerate() {
        let solver_err = match s.scenario.exact {
            Some(f) => {
                let grid = &s.graph.grid;
                let mut sup = 0.0f64;
                for j in 0..s.ny {
                    for i in 0..s.nx {
                        sup = sup.max((s.graph.u[grid.idx(i, j)] - f(grid.x(i), grid.y(j))).abs());
                    }
                }
                Some(sup)
            }
            None if nested && k < finest => Some(sup_vs_finest_field(
                s,
                &solves[finest],
                &s.graph.u,
                &solves[finest].graph.u,
                None,
            )),
            None => None,
        };
        let distance_err = if nested && k < finest {
            let (field, seed_r) = &marched[k];
            let (fine_field, _) = &marched[finest];
            Some(sup_vs_finest_field(
                s,
                &solves[finest],
                &field.d,
                &fine_field.d,
                Some(*seed_r),
            ))
        } else {
            None
        };
        rows.push(ConvergenceRow {
            nx: s.nx,
            ny: s.ny,
            solver_err,
            identity: [
                s.identity.gradient,
                s.identity.gradient_norm,
                s.identity.laplacian,
                s.identity.t_top_norm,
            ],
            distance_err,
        });
    }

    let mut orders = Vec::new();
    for w in 0..rows.len() - 1 {
        let (c, f) = (&rows[w], &rows[w + 1]);
        let lnh = (((f.nx - 1) as f64) / ((c.nx - 1) as f64)).ln();
        let ord = |ec: Option<f64>, ef: Option<f64>| -> Option<f64> {
            match (ec, ef) {
                // sups at the rounding floor carry no order information
                (Some(a), Some(b)) if a > 1e-14 && b > 1e-14 => Some((a / b).ln() / lnh),
                _ => None,
            }
        };
        let mut identity = [None; 4];
        for (i, slot) in identity.iter_mut().enumerate() {
            *slot = ord(Some(c.identity[i]), Some(f.identity[i]));
        }
        orders.push(OrderRow {
            nx_coarse: c.nx,
            nx_fine: f.nx,
            solver: ord(c.solver_err, f.solver_err),
            identity,
            distance: ord(c.distance_err, f.distance_err),
        });
    }

    let mut assertions = Vec::new();
    for s in &solves {
        global_assertions(s, cfg, &mut assertions, &format!("-{}", s.nx));
    }
    let last = &solves[finest];
    let report = RunReport {
        mode: "converge".to_string(),
        config: cfg.render(),
        scenario: last.scenario.name.to_string(),
        nx: last.nx,
        ny: last.ny,
        solver: SolverRow::from(&last.stats),
        identities: IdentityRow::from(&last.identity),
        rigidity: rigidity_probe(&last.geom),
        center: None,
        r_available: None,
        tol_pt: None,
        estimates: Vec::new(),
        convergence: Some(ConvergenceTable { rows, orders }),
        assertions,
        timings,
    };
    if let Some(dir) = out {
        write_common(dir, &report)?;
        let table = report.convergence.as_ref().unwrap();
        write_text(&dir.join("convergence.csv"), &convergence_csv(table))?;
    }
    Ok(report)
}

/// Sup |coarse − fine| over the coarse grid's nodes, using the nesting map
/// (i, j) → (i·s, j·s). Nodes where the fine value is below `skip_below`
/// are left out.
fn sup_vs_finest_field(
    coarse: &Solved,
    fine: &Solved,
    vc: &[f64],
    vf: &[f64],
    skip_below: Option<f64>,
) -> f64 {
    let s = (fine.nx - 1) / (coarse.nx - 1);
    let mut sup = 0.0f64;
    for j in 0..coarse.ny {
        for i in 0..coarse.nx {
            let a = vc[j * coarse.nx + i];
            let b = vf[j * s * fine.nx + i * s];
            if let Some(floor) = skip_below {
                if b <= floor {
                    continue;
                }
            }
            if a.is_finite() && b.is_finite() {
                sup = sup.max((a - b).abs());
            }
        }
    }
    sup
}

pub fn sweep_csv(reports: &[EstimateReport]) -> String {
    let mut s = String::from(EstimateReport::csv_header());
    s.push('\n');
    for r in reports {
        s.push_str(&r.csv_row());
        s.push('\n');
    }
    s
}

fn slack_plot(reports: &[EstimateReport]) -> String {
    let mut s = String::from("# r R slack\n");
    for r in reports {
        let _ = writeln!(s, "{:.10e} {:.10e} {:.10e}", r.r, r.r_outer, r.slack);
    }
    s
}

fn convergence_csv(table: &ConvergenceTable) -> String {
    let mut s = String::from(
        "nx,ny,solver_err,ident_gradient,ident_gradient_norm,ident_laplacian,ident_t_top_norm,distance_err\n",
    );
    let opt = |v: Option<f64>| v.map_or(String::new(), |e| format!("{e:.17e}"));
    for r in &table.rows {
        let _ = writeln!(
            s,
            "{},{},{},{:.17e},{:.17e},{:.17e},{:.17e},{}",
            r.nx,
            r.ny,
            opt(r.solver_err),
            r.identity[0],
            r.identity[1],
            r.identity[2],
            r.identity[3],
            opt(r.distance_err)
        );
    }
    s
}

fn write_text(path: &Path, content: &str) -> Result<()> {
    std::fs::write(path, content)?;
    Ok(())
}

fn write_common(dir: &Path, report: &RunReport) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    write_text(&dir.join("report.json"), &report.to_json())?;
    write_text(&dir.join("report.txt"), &report.render_text())?;
    Ok(())
}

/// Plot data for a single run: the distance field as gnuplot grid data, a
/// ‖A‖² profile along the center row, every node field as CSV, and the
/// extracted disc boundaries.
fn write_field_data(
    dir: &Path,
    solved: &Solved,
    discs: &MarchedDiscs,
    estimates: &[EstimateReport],
) -> Result<()> {
    let grid = &solved.graph.grid;
    let (nx, ny) = (solved.nx, solved.ny);
    let margin = eq17_margin_field(&solved.geom);

    let mut dat = String::from("# x y distance\n");
    for j in 0..ny {
        for i in 0..nx {
            let _ = writeln!(
                dat,
                "{:.10e} {:.10e} {:.10e}",
                grid.x(i),
                grid.y(j),
                discs.field.d[grid.idx(i, j)]
            );
        }
        dat.push('\n');
    }
    write_text(&dir.join("distance.dat"), &dat)?;

    let j = ny / 2;
    let mut prof = String::from("# x a_norm_sq (center row)\n");
    for i in 0..nx {
        let v = solved.geom.a_norm_sq[grid.idx(i, j)];
        if v.is_finite() {
            let _ = writeln!(prof, "{:.10e} {:.10e}", grid.x(i), v);
        }
    }
    write_text(&dir.join("anorm_profile.dat"), &prof)?;

    let mut csv = String::from("i,j,x,y,u,theta,psi,a_norm_sq,gauss_k,mean_h,kappa_m,eq17_margin,dist\n");
    for j in 0..ny {
        for i in 0..nx {
            let k = grid.idx(i, j);
            let g = &solved.geom;
            let _ = writeln!(
                csv,
                "{},{},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
                i,
                j,
                grid.x(i),
                grid.y(j),
                solved.graph.u[k],
                g.theta[k],
                g.psi[k],
                g.a_norm_sq[k],
                g.gauss_k[k],
                g.mean_h[k],
                g.kappa_m[k],
                margin[k],
                discs.field.d[k]
            );
        }
    }
    write_text(&dir.join("fields.csv"), &csv)?;

    let mut b = String::from("# disc boundary polylines (chart coordinates)\n");
    for e in estimates {
        let disc = disc_extract(&discs.mesh, &discs.field, e.r)?;
        let _ = writeln!(b, "# r = {:.10e}: {} component(s)", e.r, disc.components);
        for loop_pts in &disc.polyline {
            for p in loop_pts {
                let _ = writeln!(b, "{:.10e} {:.10e}", p[0], p[1]);
            }
            b.push('\n');
        }
    }
    write_text(&dir.join("disc_boundary.dat"), &b)?;
    Ok(())
}
