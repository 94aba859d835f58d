//! The acceptance gate: every advertised guarantee of the pipeline, checked
//! at its stated tolerance. Each test prints exactly one [PASS]/[FAIL] line
//! (visible with `--nocapture`); the assert carries the same detail.
//!
//! Heavy artifacts (catenoid solves up to nx = 513, the six scenario sweeps)
//! are shared between criteria through lazy fixtures, so the wall-clock cost
//! is paid once.

use maxsurf::*;
use once_cell::sync::Lazy;
use std::f64::consts::PI;
use std::time::Instant;

/// Independent quadrature values for the catenoid disc at center ρ = 1.5,
/// r = 0.2, R = 0.4: geodesic-polar shooting plus Jacobi-field quadrature,
/// no mesh, no fast marching, converged to all printed digits.
const CAT_LHS_ORACLE: f64 = 0.052502494899;
const CAT_LR_ORACLE: f64 = 1.254925929301;

fn verdict(n: usize, what: &str, ok: bool, detail: &str) {
    println!("[{}] criterion {n}: {what} ({detail})", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n}: {what}: {detail}");
}

fn order(coarse: f64, fine: f64) -> f64 {
    (coarse / fine).ln() / 2f64.ln()
}

fn exact_graph(name: &str, nx: usize) -> (Scenario, GraphFunction, SurfaceGeometry) {
    let sc = by_name(name).unwrap();
    let ny = sc.ny_for(nx);
    let grid = Grid::new(sc.spec.chart, nx, ny).unwrap();
    let f = sc.exact.expect("scenario has a closed-form height");
    let u: Vec<f64> = (0..nx * ny).map(|i| f(grid.x(i % nx), grid.y(i / nx))).collect();
    let g = GraphFunction::new(grid, &sc.spec, u).unwrap();
    let geom = SurfaceGeometry::new(&g, &sc.spec).unwrap();
    (sc, g, geom)
}

struct CatLevel {
    secs: f64,
    solved: Solved,
}

/// Solved catenoid at the three refinement levels, with solve wall-clock.
static CATENOID: Lazy<Vec<CatLevel>> = Lazy::new(|| {
    let cfg = ExperimentConfig {
        scenario: "catenoid-annulus".into(),
        residual_tol: 1e-8,
        ..Default::default()
    };
    [129usize, 257, 513]
        .into_iter()
        .map(|nx| {
            let t = Instant::now();
            let solved = solve_scenario(&cfg, nx).unwrap();
            CatLevel { secs: t.elapsed().as_secs_f64(), solved }
        })
        .collect()
});

/// Fast-marched catenoid at nx = 513 and the disc report at the oracle pair.
static CAT_DISC: Lazy<(MarchedDiscs, estimate::EstimateReport)> = Lazy::new(|| {
    let cfg = ExperimentConfig {
        scenario: "catenoid-annulus".into(),
        residual_tol: 1e-8,
        center: Some((1.5f64.ln(), PI)),
        ..Default::default()
    };
    let finest = &CATENOID.last().unwrap().solved;
    let m = march_from_center(finest, &cfg).unwrap();
    let rep = theorem1_check(&finest.geom, &m.mesh, &m.field, 0.2, 0.4, m.tol_pt).unwrap();
    (m, rep)
});

/// Exact-height catenoid graphs: the geometry pipeline measured without
/// solver error on top.
static EXACT_CAT: Lazy<Vec<(usize, Scenario, GraphFunction, SurfaceGeometry)>> =
    Lazy::new(|| {
        [129usize, 257, 513]
            .into_iter()
            .map(|nx| {
                let (sc, g, geom) = exact_graph("catenoid-annulus", nx);
                (nx, sc, g, geom)
            })
            .collect()
    });

struct SceneSweep {
    name: &'static str,
    solved: Solved,
    discs: MarchedDiscs,
    reports: Vec<estimate::EstimateReport>,
    lemmas: Vec<estimate::LemmaBound>,
}

/// Every catalog scenario at nx = 65 with the standard 9-pair radii sweep.
static SWEEPS: Lazy<Vec<SceneSweep>> = Lazy::new(|| {
    SCENARIO_NAMES
        .iter()
        .map(|&name| {
            let cfg = ExperimentConfig::named(name);
            let solved = solve_scenario(&cfg, 65).unwrap();
            let discs = march_from_center(&solved, &cfg).unwrap();
            let pairs = radii_pairs(&cfg, discs.r_available, true);
            let mut reports = Vec::new();
            let mut lemmas = Vec::new();
            for &(r, rr) in &pairs {
                reports.push(
                    theorem1_check(&solved.geom, &discs.mesh, &discs.field, r, rr, discs.tol_pt)
                        .unwrap(),
                );
                lemmas.push(
                    lemma1_check(&solved.geom, &discs.mesh, &discs.field, r, rr, discs.tol_pt)
                        .unwrap(),
                );
            }
            SceneSweep { name, solved, discs, reports, lemmas }
        })
        .collect()
});

/// Flat-metric scenarios and the sphere slice at nx = 129, marched from the
/// center: the distance-oracle fixtures.
static ORACLE_MARCH: Lazy<Vec<(&'static str, Solved, MarchedDiscs)>> = Lazy::new(|| {
    ["flat-plane", "tilted-plane", "sphere-slice"]
        .into_iter()
        .map(|name| {
            let cfg = ExperimentConfig { resolution: 129, ..ExperimentConfig::named(name) };
            let solved = solve_scenario(&cfg, 129).unwrap();
            let discs = march_from_center(&solved, &cfg).unwrap();
            (name, solved, discs)
        })
        .collect()
});

#[test]
fn catenoid_height_recovery() {
    let mut errs = Vec::new();
    let mut times = Vec::new();
    for lv in CATENOID.iter() {
        let g = &lv.solved.graph;
        let f = lv.solved.scenario.exact.unwrap();
        let mut sup = 0.0f64;
        for j in 0..lv.solved.ny {
            for i in 0..lv.solved.nx {
                let idx = j * lv.solved.nx + i;
                sup = sup.max((g.u[idx] - f(g.grid.x(i), g.grid.y(j))).abs());
            }
        }
        errs.push(sup);
        times.push(lv.secs);
    }
    let orders = [order(errs[0], errs[1]), order(errs[1], errs[2])];
    let ok = errs[1] <= 5e-4
        && orders.iter().all(|o| (1.8..=2.2).contains(o))
        && times.iter().all(|&t| t <= 60.0);
    verdict(
        1,
        "catenoid height recovery at stated error, order, and runtime",
        ok,
        &format!(
            "sup errors {:.3e}/{:.3e}/{:.3e}, orders {:.2}/{:.2}, solve secs {:.1}/{:.1}/{:.1}",
            errs[0], errs[1], errs[2], orders[0], orders[1], times[0], times[1], times[2]
        ),
    );
}

#[test]
fn identity_residual_suite() {
    let sups: Vec<[f64; 4]> = EXACT_CAT
        .iter()
        .map(|(_, _, _, geom)| {
            let r = identity_checks(geom);
            [r.gradient, r.gradient_norm, r.laplacian, r.t_top_norm]
        })
        .collect();
    let mut ok = true;
    let mut orders = Vec::new();
    for k in 0..3 {
        ok &= sups[1][k] <= 1e-2;
        let (o1, o2) = (order(sups[0][k], sups[1][k]), order(sups[1][k], sups[2][k]));
        ok &= o1 >= 1.8 && o2 >= 1.8;
        orders.push(format!("{o1:.2}/{o2:.2}"));
    }
    // the algebraic identity sits at the rounding floor at every level
    ok &= sups.iter().all(|s| s[3] <= 1e-12);

    let mut exact_worst = 0.0f64;
    for name in ["flat-plane", "tilted-plane", "sphere-slice"] {
        let (_, _, geom) = exact_graph(name, 65);
        let r = identity_checks(&geom);
        for v in [r.gradient, r.gradient_norm, r.laplacian, r.t_top_norm] {
            exact_worst = exact_worst.max(v);
        }
    }
    ok &= exact_worst <= 1e-10;
    verdict(
        2,
        "identity residuals small, second order, exact on flat cases",
        ok,
        &format!(
            "catenoid sups at 257 {:.2e}/{:.2e}/{:.2e}/{:.0e}, orders {}, exact-case worst {:.2e}",
            sups[1][0], sups[1][1], sups[1][2], sups[1][3], orders.join(" "), exact_worst
        ),
    );
}

#[test]
fn curvature_relation_cross_check() {
    let diffs: Vec<f64> = EXACT_CAT
        .iter()
        .map(|(_, sc, g, geom)| {
            // injected heights carry O(h²) variational mean curvature, so the
            // maximality gate takes an explicit allowance here
            gauss_curvature_sigma(geom, g, &sc.spec, 1.0).unwrap().sup_difference
        })
        .collect();
    let orders = [order(diffs[0], diffs[1]), order(diffs[1], diffs[2])];

    let slice = SWEEPS.iter().find(|s| s.name == "sphere-slice").unwrap();
    let c = gauss_curvature_sigma(
        &slice.solved.geom,
        &slice.solved.graph,
        &slice.solved.scenario.spec,
        1e-6,
    )
    .unwrap();
    let mut rel_dev = 0.0f64;
    let mut intr_dev = 0.0f64;
    for j in 0..slice.solved.ny {
        for i in 0..slice.solved.nx {
            if slice.solved.geom.ring(i, j) < 2 {
                continue;
            }
            let idx = slice.solved.geom.idx(i, j);
            rel_dev = rel_dev.max((c.from_relation[idx] - 1.0).abs());
            intr_dev = intr_dev.max((c.intrinsic[idx] - 1.0).abs());
        }
    }
    let ok = diffs[1] <= 2e-2
        && orders.iter().all(|&o| o >= 1.8)
        && rel_dev <= 1e-3
        && intr_dev <= 1e-3;
    verdict(
        3,
        "curvature relation matches intrinsic curvature",
        ok,
        &format!(
            "catenoid sup diff {:.3e} at 257, orders {:.2}/{:.2}; sphere slice dev {:.1e}/{:.1e}",
            diffs[1], orders[0], orders[1], rel_dev, intr_dev
        ),
    );
}

#[test]
fn disc_inequality_on_all_scenarios() {
    let mut min_slack = f64::INFINITY;
    let mut flat_lhs = 0.0f64;
    for sw in SWEEPS.iter() {
        for rep in &sw.reports {
            min_slack = min_slack.min(rep.slack);
            if matches!(sw.name, "flat-plane" | "tilted-plane" | "sphere-slice") {
                flat_lhs = flat_lhs.max(rep.lhs);
            }
        }
    }
    let lhs_rel = CAT_DISC.1.lhs / CAT_LHS_ORACLE - 1.0;
    let lr_rel = CAT_DISC.1.l_r / CAT_LR_ORACLE - 1.0;
    let ok = min_slack >= 0.0 && flat_lhs <= 1e-10 && lhs_rel.abs() <= 0.02;
    verdict(
        4,
        "disc inequality holds with quadrature-verified left side",
        ok,
        &format!(
            "min slack {:.3e} over 54 sweep rows, flat/slice lhs <= {:.1e}, catenoid lhs off oracle by {:+.2e} (L_r by {:+.2e})",
            min_slack, flat_lhs, lhs_rel, lr_rel
        ),
    );
}

#[test]
fn closed_form_constants() {
    let e1 = (c_r(1.0).unwrap() - 4.0 * PI).abs();
    let e2 = (phi(-1.0) - PI / 8.0).abs();
    let mut violations = 0usize;
    let mut prev = f64::NEG_INFINITY;
    for i in 0..1000 {
        let alpha = 1.0 + 20.0 * i as f64 / 999.0;
        let v = c_r(alpha).unwrap();
        if v <= prev {
            violations += 1;
        }
        prev = v;
    }
    prev = f64::NEG_INFINITY;
    for i in 0..1000 {
        let s = -21.0 + 20.0 * i as f64 / 999.0;
        let v = phi(s);
        if v <= prev {
            violations += 1;
        }
        prev = v;
    }
    let ok = e1 <= 1e-12 && e2 <= 1e-12 && violations == 0;
    verdict(
        5,
        "closed-form constants exact and monotone",
        ok,
        &format!("|c_r(1)-4pi| {e1:.1e}, |phi(-1)-pi/8| {e2:.1e}, {violations} monotonicity violations"),
    );
}

#[test]
fn pointwise_margin_sign() {
    let mut min_margin = f64::INFINITY;
    let mut worst_flat = 0.0f64;
    for sw in SWEEPS.iter() {
        let margins = eq17_margin_field(&sw.solved.geom);
        for (idx, &m) in margins.iter().enumerate() {
            if !m.is_finite() {
                continue;
            }
            min_margin = min_margin.min(m);
            if sw.solved.geom.kappa_m[idx] == 0.0 {
                worst_flat = worst_flat.max(m.abs());
            }
        }
    }
    let ok = min_margin >= 0.0 && worst_flat <= 1e-12;
    verdict(
        6,
        "pointwise margin nonnegative, zero on flat ambient metrics",
        ok,
        &format!("min margin {min_margin:.3e}, flat-ambient |margin| <= {worst_flat:.1e}"),
    );
}

#[test]
fn cutoff_lemma_bound() {
    let mut ok = true;
    let mut worst_gap = f64::NEG_INFINITY;
    let mut worst_pt = f64::INFINITY;
    for sw in SWEEPS.iter() {
        for (rep, lem) in sw.reports.iter().zip(&sw.lemmas) {
            worst_gap = worst_gap.max(rep.lemma_lhs - rep.lemma_rhs);
            worst_pt = worst_pt.min(lem.pointwise_min + sw.discs.tol_pt);
            ok &= rep.lemma_lhs <= rep.lemma_rhs && lem.hypothesis_ok;
        }
    }
    verdict(
        7,
        "integral bound on psi against its Laplacian",
        ok,
        &format!("max lhs-rhs gap {worst_gap:.3e}, min pointwise headroom {worst_pt:.3e}"),
    );
}

#[test]
fn log_radius_bound_consistency() {
    let cat = SWEEPS.iter().find(|s| s.name == "catenoid-annulus").unwrap();
    let mut ok = true;
    let mut max_excess = f64::NEG_INFINITY;
    for rep in &cat.reports {
        ok &= rep.lhs > LHS_FLOOR;
        // ln(R/r) <= C_r survives e^{C_r} overflowing to infinity
        let c = rep.c_radius.expect("positive disc integral defines the bound");
        let excess = (rep.r_outer / rep.r).ln() - c;
        max_excess = max_excess.max(excess);
        ok &= excess <= 1e-12;
    }
    verdict(
        8,
        "log radius bound covers every swept outer radius",
        ok,
        &format!("max ln(R/r) - C_r = {max_excess:.3e} over 9 catenoid rows"),
    );
}

#[test]
fn expanding_domain_asymptotics() {
    let base = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let mut worst_lhs = 0.0f64;
    let mut ok = true;
    for file in ["tilted-expand-2.ini", "tilted-expand-4.ini", "tilted-expand-8.ini"] {
        let cfg = ExperimentConfig::load(&base.join(file)).unwrap();
        let rep = run(&cfg, None).unwrap();
        ok &= rep.failures() == 0;
        for est in &rep.estimates {
            worst_lhs = worst_lhs.max(est.lhs);
        }
    }
    let cat = SWEEPS.iter().find(|s| s.name == "catenoid-annulus").unwrap();
    let mut max_spread = 0.0f64;
    for group in cat.reports.chunks(3) {
        let vals: Vec<f64> =
            group.iter().map(|r| r.rhs * (r.r_outer / r.r).ln()).collect();
        let (lo, hi) = vals.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| {
            (l.min(v), h.max(v))
        });
        max_spread = max_spread.max(hi / lo - 1.0);
    }
    ok &= worst_lhs <= 1e-10 && max_spread <= 0.10;
    verdict(
        9,
        "expanding flat domains stay trivial, catenoid bound scales as log",
        ok,
        &format!(
            "expanding-run lhs <= {worst_lhs:.1e}, catenoid rhs*ln(R/r) spread {max_spread:.2e} per fixed r"
        ),
    );
}

#[test]
fn geodesic_distance_oracles() {
    let mut worst_rel = 0.0f64;
    for (name, solved, m) in ORACLE_MARCH.iter() {
        let oracle: fn(f64, f64) -> f64 = match *name {
            "flat-plane" => |x, y| x.hypot(y),
            "tilted-plane" => |x, y| (0.64 * x * x + y * y).sqrt(),
            _ => |x, y| 2.0 * (0.5 * x.hypot(y)).atan(),
        };
        let cut = 10.0 * m.mesh.hmax;
        for (v, p) in m.mesh.verts.iter().enumerate() {
            let d_exact = oracle(p[0], p[1]);
            if d_exact >= cut {
                worst_rel = worst_rel.max((m.field.d[v] - d_exact).abs() / d_exact);
            }
        }
        let _ = solved;
    }
    let mut worst_circ = 0.0f64;
    for (name, _, m) in ORACLE_MARCH.iter() {
        if *name == "sphere-slice" {
            continue;
        }
        for frac in [0.5, 0.25, 0.125] {
            let r = frac * m.r_available;
            let disc = disc_extract(&m.mesh, &m.field, r).unwrap();
            worst_circ = worst_circ.max((disc.boundary_length / (2.0 * PI * r) - 1.0).abs());
        }
    }
    let ok = worst_rel <= 0.02 && worst_circ <= 0.02;
    verdict(
        10,
        "marched distances and disc circumferences match closed forms",
        ok,
        &format!("worst relative distance error {worst_rel:.3e}, worst |L/(2pi r) - 1| {worst_circ:.3e}"),
    );
}
