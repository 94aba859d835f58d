//! The local integral estimate and its satellites: the disc inequality
//! 0 <= ∫‖A‖² <= c_r·L(r)/(r·log(R/r)), the cutoff lemma it rests on, the
//! pointwise inequality ψΔψ >= φ(Θ)‖A‖², the radius bound R <= r·e^{C_r},
//! and the rigidity classification.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geodesic::{disc_extract, disc_integral, DistanceField, GeodesicDisc, TriMesh};
use crate::geometry::{laplace_beltrami, SurfaceGeometry};

/// Disc integrals below this are treated as zero: the radius bound C_r
/// divides by the integral, and values at this scale are pure rounding.
pub const LHS_FLOOR: f64 = 1e-10;

/// Relative slack tolerance for the integral inequality. The inequality
/// holds with wide margin on every catalog scenario, so the allowance only
/// absorbs first-order disc extraction error, never a true violation.
pub const TOL_INEQ_REL: f64 = 0.05;

/// sup thresholds for the rigidity classification
pub const RIGIDITY_TOL: f64 = 1e-8;

/// c_r(α) = π²(1+α²)²/(4α·arctan α), the constant of the disc inequality.
pub fn c_r(alpha: f64) -> Result<f64> {
    if alpha < 1.0 {
        return Err(Error::AlphaBelowOne(alpha));
    }
    let a2 = 1.0 + alpha * alpha;
    Ok(std::f64::consts::PI.powi(2) * a2 * a2 / (4.0 * alpha * alpha.atan()))
}

/// φ(s) = 2s·arctan s/(1+s²)², positive and strictly increasing on s <= −1.
pub fn phi(s: f64) -> f64 {
    let d = 1.0 + s * s;
    2.0 * s * s.atan() / (d * d)
}

/// sup of −Θ = cosh(tilt angle) over the disc, vertex values of clipped
/// triangles included. Always >= 1 for spacelike graphs.
pub fn alpha_r(disc: &GeodesicDisc, theta: &[f64]) -> f64 {
    disc.vertices
        .iter()
        .map(|&v| -theta[v])
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Per-node margin ψΔψ − φ(Θ)‖A‖² with ψΔψ in its analytic form
/// φ(Θ)‖A‖² + (Θ²−1)Θ·arctanΘ/(1+Θ²)·κ_M. Both sides share the φ(Θ)‖A‖²
/// term, so the margin is exactly zero wherever κ_M vanishes and
/// nonnegative wherever κ_M >= 0 (each factor of the curvature term has a
/// sign for Θ <= −1). NaN where ‖A‖² is undefined (outermost ring).
pub fn eq17_margin_field(geom: &SurfaceGeometry) -> Vec<f64> {
    let n = geom.theta.len();
    let mut out = vec![f64::NAN; n];
    for v in 0..n {
        let t = geom.theta[v];
        let a2 = geom.a_norm_sq[v];
        if !a2.is_finite() {
            continue;
        }
        let base = phi(t) * a2;
        let curv = (t * t - 1.0) * t * t.atan() / (1.0 + t * t) * geom.kappa_m[v];
        out[v] = (base + curv) - base;
    }
    out
}

/// Minimum of the pointwise margin over the disc vertices (NaN skipped).
pub fn eq17_check(geom: &SurfaceGeometry, disc: &GeodesicDisc) -> f64 {
    let margins = eq17_margin_field(geom);
    disc.vertices
        .iter()
        .map(|&v| margins[v])
        .filter(|m| m.is_finite())
        .fold(f64::INFINITY, f64::min)
}

/// Both sides of the cutoff lemma and the pointwise hypothesis check.
#[derive(Debug, Clone)]
pub struct LemmaBound {
    /// ∫_{D_r} ψΔψ with the discrete Laplace-Beltrami operator
    pub lemma_lhs: f64,
    /// 2L(r)/(r·log(R/r)) · sup_{D_R} ψ²
    pub lemma_rhs: f64,
    /// same bound with the a-priori sup ψ² <= π²/4 instead of the disc sup
    pub lemma_rhs_uniform: f64,
    /// min over D_R vertices of ψΔψ
    pub pointwise_min: f64,
    /// pointwise_min >= −tol_pt; false signals a too-coarse discretization
    pub hypothesis_ok: bool,
}

fn lemma_core(
    geom: &SurfaceGeometry,
    mesh: &TriMesh,
    disc_r: &GeodesicDisc,
    disc_big: &GeodesicDisc,
    r: f64,
    r_outer: f64,
    tol_pt: f64,
) -> LemmaBound {
    let lap = laplace_beltrami(geom, &geom.psi);
    let psi_dpsi: Vec<f64> = geom.psi.iter().zip(&lap).map(|(p, l)| p * l).collect();
    let lemma_lhs = disc_integral(mesh, disc_r, &psi_dpsi);
    let pointwise_min = disc_big
        .vertices
        .iter()
        .map(|&v| psi_dpsi[v])
        .filter(|m| m.is_finite())
        .fold(f64::INFINITY, f64::min);
    let sup_psi2 = disc_big
        .vertices
        .iter()
        .map(|&v| geom.psi[v] * geom.psi[v])
        .fold(0.0f64, f64::max);
    let scale = 2.0 * disc_r.boundary_length / (r * (r_outer / r).ln());
    LemmaBound {
        lemma_lhs,
        lemma_rhs: scale * sup_psi2,
        lemma_rhs_uniform: scale * std::f64::consts::PI.powi(2) / 4.0,
        pointwise_min,
        hypothesis_ok: pointwise_min >= -tol_pt,
    }
}

/// Integral bound on ψΔψ over D(p,r) in terms of data on D(p,R).
/// `tol_pt` is the allowance for the hypothesis ψΔψ >= 0; tie it to the
/// measured Laplacian identity residual (10× the interior sup).
pub fn lemma1_check(
    geom: &SurfaceGeometry,
    mesh: &TriMesh,
    field: &DistanceField,
    r: f64,
    r_outer: f64,
    tol_pt: f64,
) -> Result<LemmaBound> {
    let disc_r = disc_extract(mesh, field, r)?;
    let disc_big = disc_extract(mesh, field, r_outer)?;
    require_second_order_interior(mesh, field, r_outer)?;
    Ok(lemma_core(geom, mesh, &disc_r, &disc_big, r, r_outer, tol_pt))
}

/// Second-order fields are undefined on the two outermost grid rings; the
/// outer disc must clear them so every integrand stays finite. Treated as
/// a containment failure of the discrete surface.
fn require_second_order_interior(mesh: &TriMesh, field: &DistanceField, r_outer: f64) -> Result<()> {
    let mut min_d = f64::INFINITY;
    for v in 0..mesh.node_count() {
        let (i, j) = (v % mesh.nx, v / mesh.nx);
        let ring = i.min(j).min(mesh.nx - 1 - i).min(mesh.ny - 1 - j);
        if ring < 2 {
            min_d = min_d.min(field.d[v]);
        }
    }
    if min_d <= r_outer {
        return Err(Error::NotCompactlyContained {
            r: r_outer,
            boundary_dist: min_d,
        });
    }
    Ok(())
}

/// Disc center echoed in reports: vertex index plus its chart coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscCenter {
    pub index: usize,
    pub x: f64,
    pub y: f64,
}

/// One verified instance of the disc inequality with all its ingredients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub p: DiscCenter,
    pub r: f64,
    #[serde(rename = "R")]
    pub r_outer: f64,
    pub alpha_r: f64,
    pub c_r: f64,
    pub lhs: f64,
    #[serde(rename = "L_r")]
    pub l_r: f64,
    pub rhs: f64,
    pub slack: f64,
    #[serde(rename = "C_r", skip_serializing_if = "Option::is_none")]
    pub c_radius: Option<f64>,
    #[serde(rename = "R_max", skip_serializing_if = "Option::is_none")]
    pub r_max: Option<f64>,
    pub lemma_lhs: f64,
    pub lemma_rhs: f64,
    pub eq17_min_margin: f64,
}

impl EstimateReport {
    pub fn csv_header() -> &'static str {
        "p_index,p_x,p_y,r,R,alpha_r,c_r,lhs,L_r,rhs,slack,C_r,R_max,lemma_lhs,lemma_rhs,eq17_min_margin"
    }

    pub fn csv_row(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| format!("{x:.17e}")).unwrap_or_default();
        format!(
            "{},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{},{},{:.17e},{:.17e},{:.17e}",
            self.p.index,
            self.p.x,
            self.p.y,
            self.r,
            self.r_outer,
            self.alpha_r,
            self.c_r,
            self.lhs,
            self.l_r,
            self.rhs,
            self.slack,
            opt(self.c_radius),
            opt(self.r_max),
            self.lemma_lhs,
            self.lemma_rhs,
            self.eq17_min_margin,
        )
    }
}

/// Radius bound of the disc inequality: C_r = c_r·L(r)/(r·∫‖A‖²) and
/// R_max = r·e^{C_r}. Undefined when the disc integral vanishes (totally
/// geodesic disc). R_max overflows to +inf for near-geodesic discs; the
/// bound is then vacuous, which is the correct reading.
pub fn corollary2_bound(c_r: f64, l_r: f64, r: f64, lhs: f64) -> Result<(f64, f64)> {
    if lhs <= LHS_FLOOR {
        return Err(Error::UndefinedBound);
    }
    let c_radius = c_r * l_r / (r * lhs);
    Ok((c_radius, r * c_radius.exp()))
}

/// Assembles and checks the full disc inequality at one (r, R) pair.
/// The distance field's source is the disc center.
pub fn theorem1_check(
    geom: &SurfaceGeometry,
    mesh: &TriMesh,
    field: &DistanceField,
    r: f64,
    r_outer: f64,
    tol_pt: f64,
) -> Result<EstimateReport> {
    assert!(r > 0.0 && r < r_outer, "need 0 < r < R");
    let disc_r = disc_extract(mesh, field, r)?;
    let disc_big = disc_extract(mesh, field, r_outer)?;
    require_second_order_interior(mesh, field, r_outer)?;

    let alpha = alpha_r(&disc_r, &geom.theta);
    let cr = c_r(alpha)?;
    let lhs = disc_integral(mesh, &disc_r, &geom.a_norm_sq);
    let l_r = disc_r.boundary_length;
    let rhs = cr * l_r / (r * (r_outer / r).ln());
    let slack = rhs - lhs;

    let (c_radius, r_max) = match corollary2_bound(cr, l_r, r, lhs) {
        Ok((c, rm)) => (Some(c), Some(rm)),
        Err(Error::UndefinedBound) => (None, None),
        Err(e) => return Err(e),
    };

    let lemma = lemma_core(geom, mesh, &disc_r, &disc_big, r, r_outer, tol_pt);
    let eq17_min_margin = eq17_check(geom, &disc_r);

    let source = field.source;
    let report = EstimateReport {
        p: DiscCenter {
            index: source,
            x: mesh.verts[source][0],
            y: mesh.verts[source][1],
        },
        r,
        r_outer,
        alpha_r: alpha,
        c_r: cr,
        lhs,
        l_r,
        rhs,
        slack,
        c_radius,
        r_max,
        lemma_lhs: lemma.lemma_lhs,
        lemma_rhs: lemma.lemma_rhs,
        eq17_min_margin,
    };
    assert!(
        report.slack >= -TOL_INEQ_REL * report.rhs,
        "disc inequality violated beyond discretization tolerance: slack {} rhs {}",
        report.slack,
        report.rhs
    );
    Ok(report)
}

/// Rigidity classification of a computed surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RigidityClass {
    TotallyGeodesicSlice,
    TotallyGeodesicNonSlice,
    NonTotallyGeodesic,
}

/// Classifies by sup ‖A‖ and sup |Θ+1| over the interior (NaN skipped).
pub fn rigidity_probe(geom: &SurfaceGeometry) -> RigidityClass {
    let sup_a = geom
        .a_norm_sq
        .iter()
        .filter(|v| v.is_finite())
        .fold(0.0f64, |m, &v| m.max(v))
        .sqrt();
    let sup_tilt = geom
        .theta
        .iter()
        .fold(0.0f64, |m, &t| m.max((t + 1.0).abs()));
    if sup_a < RIGIDITY_TOL {
        if sup_tilt < RIGIDITY_TOL {
            RigidityClass::TotallyGeodesicSlice
        } else {
            RigidityClass::TotallyGeodesicNonSlice
        }
    } else {
        RigidityClass::NonTotallyGeodesic
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::{Chart, ConformalFactor, Grid, MetricSpec};
    use crate::geodesic::{geodesic_distance, triangulate};
    use crate::solver::GraphFunction;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn surface(
        factor: ConformalFactor,
        chart: Chart,
        nx: usize,
        ny: usize,
        f: impl Fn(f64, f64) -> f64,
    ) -> (Grid, SurfaceGeometry, TriMesh) {
        let spec = MetricSpec::new("m", chart, factor);
        let grid = Grid::new(chart, nx, ny).unwrap();
        let mut u = vec![0.0; grid.node_count()];
        for j in 0..grid.ny {
            for i in 0..grid.nx {
                u[grid.idx(i, j)] = f(grid.x(i), grid.y(j));
            }
        }
        let g = GraphFunction::new(grid.clone(), &spec, u).unwrap();
        let geom = SurfaceGeometry::new(&g, &spec).unwrap();
        let mesh = triangulate(&g, &geom).unwrap();
        (grid, geom, mesh)
    }

    #[test]
    fn constant_takes_its_two_pinned_values() {
        assert!((c_r(1.0).unwrap() - 4.0 * PI).abs() <= 1e-12);
        // 9π²/(4√2·arctan√2)
        let expected = 9.0 * PI * PI / (4.0 * 2.0f64.sqrt() * 2.0f64.sqrt().atan());
        assert!((c_r(2.0f64.sqrt()).unwrap() - expected).abs() <= 1e-12);
        assert!((expected - 16.436900762822212).abs() <= 1e-12);
        assert!(matches!(c_r(0.99), Err(Error::AlphaBelowOne(_))));
    }

    #[test]
    fn phi_takes_its_pinned_values_and_orders() {
        assert!((phi(-1.0) - PI / 8.0).abs() <= 1e-12);
        assert!((phi(-2.0) - 4.0 * 2.0f64.atan() / 25.0).abs() <= 1e-15);
        assert!(phi(-1.0) > phi(-1.5) && phi(-1.5) > phi(-2.0));
    }

    proptest! {
        #[test]
        fn c_r_is_strictly_increasing(a in 1.0f64..80.0, step in 1e-6f64..10.0) {
            prop_assert!(c_r(a + step).unwrap() > c_r(a).unwrap());
        }

        #[test]
        fn phi_is_strictly_increasing_below_minus_one(s in -80.0f64..-1.0, step in 1e-6f64..10.0) {
            // toward −1 from the left, i.e. increasing s
            let s2 = (s + step).min(-1.0);
            prop_assume!(s2 > s);
            prop_assert!(phi(s2) > phi(s));
        }

        #[test]
        fn corollary2_is_the_rearranged_inequality(
            cr in 10.0f64..100.0,
            l in 0.1f64..10.0,
            r in 0.05f64..1.0,
            lhs in 1e-6f64..10.0,
            ratio in 1.01f64..5.0,
        ) {
            // slack >= 0 at (r, R) forces R <= R_max
            let r_outer = r * ratio;
            let rhs = cr * l / (r * ratio.ln());
            prop_assume!(rhs >= lhs);
            let (c_radius, r_max) = corollary2_bound(cr, l, r, lhs).unwrap();
            prop_assert!(ratio.ln() <= c_radius * (1.0 + 1e-12));
            prop_assert!(r_outer <= r_max * (1.0 + 1e-12) || r_max.is_infinite());
        }
    }

    #[test]
    fn synthetic_unit_c_radius_gives_e_fold_bound() {
        let r = 0.3;
        let cr = 20.0;
        let l = 1.0;
        let lhs = cr * l / r;
        let (c_radius, r_max) = corollary2_bound(cr, l, r, lhs).unwrap();
        assert!((c_radius - 1.0).abs() <= 1e-12);
        assert!((r_max - r * 1.0f64.exp()).abs() <= 1e-12);
        assert!(matches!(corollary2_bound(cr, l, r, 0.0), Err(Error::UndefinedBound)));
    }

    #[test]
    fn slice_report_is_the_trivial_case() {
        let chart = Chart::new(-1.0, 1.0, -1.0, 1.0);
        let (grid, geom, mesh) = surface(ConformalFactor::Sphere, chart, 65, 65, |_, _| 0.7);
        let field = geodesic_distance(&mesh, grid.idx(32, 32));
        let rep = theorem1_check(&geom, &mesh, &field, 0.25, 0.5, 1e-8).unwrap();
        assert!(rep.lhs <= 1e-10, "lhs {}", rep.lhs);
        assert_eq!(rep.alpha_r, 1.0);
        assert!((rep.c_r - 4.0 * PI).abs() <= 1e-12);
        assert!(rep.rhs > 0.0 && rep.slack == rep.rhs - rep.lhs);
        assert!(rep.c_radius.is_none() && rep.r_max.is_none());
        assert!(rep.lemma_lhs.abs() <= 1e-12, "lemma lhs {}", rep.lemma_lhs);
        assert_eq!(rep.eq17_min_margin, 0.0);
        assert_eq!(rigidity_probe(&geom), RigidityClass::TotallyGeodesicSlice);
    }

    #[test]
    fn tilted_plane_report_is_totally_geodesic_but_tilted() {
        let chart = Chart::new(-1.0, 1.0, -1.0, 1.0);
        let (grid, geom, mesh) = surface(ConformalFactor::Flat, chart, 65, 65, |x, _| 0.6 * x);
        let field = geodesic_distance(&mesh, grid.idx(32, 32));
        let rep = theorem1_check(&geom, &mesh, &field, 0.25, 0.5, 1e-8).unwrap();
        assert!(rep.lhs <= 1e-10);
        assert!((rep.alpha_r - 1.25).abs() <= 1e-12);
        assert!(rep.slack > 0.0);
        assert_eq!(rep.eq17_min_margin, 0.0);
        assert_eq!(rigidity_probe(&geom), RigidityClass::TotallyGeodesicNonSlice);
    }

    fn catenoid_surface(nx: usize) -> (Grid, SurfaceGeometry, TriMesh) {
        let chart = Chart::new(0.5f64.ln(), 3.0f64.ln(), 0.0, 2.0 * PI);
        let ny = (nx - 1) * 7 / 2 + 1;
        surface(ConformalFactor::LogPolarFlat, chart, nx, ny, |x, _| {
            x.exp().asinh()
        })
    }

    #[test]
    fn catenoid_report_matches_frozen_oracle_quantities() {
        // shooting-oracle values for the disc of radius 0.2 at (ln 1.5, π);
        // the vertex center is offset ~h/2 in x, see the tolerance note in
        // the geodesic disc test
        let (grid, geom, mesh) = catenoid_surface(129);
        let p = grid.nearest_node(1.5f64.ln(), PI);
        let field = geodesic_distance(&mesh, p);
        let rep = theorem1_check(&geom, &mesh, &field, 0.2, 0.4, 1e-3).unwrap();

        assert!((rep.alpha_r / 1.279606744250 - 1.0).abs() <= 0.01, "alpha {}", rep.alpha_r);
        assert!((rep.lhs / 0.052502494899 - 1.0).abs() <= 0.05, "lhs {}", rep.lhs);
        assert!((rep.l_r / 1.254925929301 - 1.0).abs() <= 0.02, "L {}", rep.l_r);
        assert!(rep.slack > 0.0, "slack {}", rep.slack);
        // flat ambient metric: the pointwise inequality is an equality
        assert_eq!(rep.eq17_min_margin, 0.0);
        // the algebraic radius-bound consistency
        let c_radius = rep.c_radius.unwrap();
        assert!((rep.r_outer / rep.r).ln() <= c_radius);
        assert_eq!(rigidity_probe(&geom), RigidityClass::NonTotallyGeodesic);
    }

    #[test]
    fn catenoid_lemma_bound_holds_with_headroom() {
        let (grid, geom, mesh) = catenoid_surface(65);
        let p = grid.nearest_node(1.5f64.ln(), PI);
        let field = geodesic_distance(&mesh, p);
        let lemma = lemma1_check(&geom, &mesh, &field, 0.2, 0.4, 1e-2).unwrap();
        assert!(lemma.hypothesis_ok, "pointwise min {}", lemma.pointwise_min);
        assert!(lemma.lemma_lhs <= lemma.lemma_rhs, "{lemma:?}");
        assert!(lemma.lemma_rhs <= lemma.lemma_rhs_uniform, "disc sup exceeds π²/4");
        assert!(lemma.lemma_lhs > 0.0, "ψΔψ should integrate positive here");
    }

    #[test]
    fn analytic_and_discrete_psi_laplacians_agree_at_second_order() {
        // the analytic form underlying the pointwise margin vs the discrete
        // Laplace-Beltrami of ψ, sups on a fixed subdomain
        let sup_diff = |nx: usize| {
            let (grid, geom, _) = catenoid_surface(nx);
            let lap = laplace_beltrami(&geom, &geom.psi);
            let (x0, x1) = (0.5f64.ln() + 0.15, 3.0f64.ln() - 0.15);
            let mut sup = 0.0f64;
            for j in 0..grid.ny {
                for i in 0..grid.nx {
                    let v = grid.idx(i, j);
                    if grid.x(i) < x0 || grid.x(i) > x1 || !lap[v].is_finite() {
                        continue;
                    }
                    let t = geom.theta[v];
                    // ψΔψ in analytic form divided by ψ (< 0, never zero)
                    let exact_dpsi = (phi(t) * geom.a_norm_sq[v]
                        + (t * t - 1.0) * t * t.atan() / (1.0 + t * t) * geom.kappa_m[v])
                        / geom.psi[v];
                    sup = sup.max((lap[v] - exact_dpsi).abs());
                }
            }
            sup
        };
        let e1 = sup_diff(33);
        let e2 = sup_diff(65);
        let ratio = e1 / e2;
        assert!((3.0..=5.2).contains(&ratio), "ratio {ratio} ({e1} -> {e2})");
    }

    #[test]
    fn margin_is_positive_where_ambient_curvature_is() {
        // synthetic tilted graph on the sphere chart: Θ < −1 broadly and
        // κ_M > 0, so the curvature term of the margin must be active
        let chart = Chart::new(-1.0, 1.0, -1.0, 1.0);
        let (grid, geom, _) = surface(ConformalFactor::Sphere, chart, 33, 33, |x, y| {
            0.3 * x + 0.15 * x * y
        });
        let margins = eq17_margin_field(&geom);
        let mut strict = 0;
        for j in 2..grid.ny - 2 {
            for i in 2..grid.nx - 2 {
                let v = grid.idx(i, j);
                assert!(margins[v] >= 0.0, "negative margin at ({i},{j})");
                if geom.kappa_m[v] > 0.0 && geom.theta[v] < -1.0 - 1e-9 {
                    assert!(margins[v] > 0.0, "zero margin with curvature at ({i},{j})");
                    strict += 1;
                }
            }
        }
        assert!(strict > 100, "test exercised too few nodes: {strict}");
    }

    #[test]
    fn report_serializes_with_the_fixed_field_names() {
        let chart = Chart::new(-1.0, 1.0, -1.0, 1.0);
        let (grid, geom, mesh) = surface(ConformalFactor::Flat, chart, 33, 33, |x, _| 0.6 * x);
        let field = geodesic_distance(&mesh, grid.idx(16, 16));
        let rep = theorem1_check(&geom, &mesh, &field, 0.2, 0.4, 1e-8).unwrap();
        let json = serde_json::to_string(&rep).unwrap();
        for key in [
            "\"p\"", "\"r\"", "\"R\"", "\"alpha_r\"", "\"c_r\"", "\"lhs\"", "\"L_r\"",
            "\"rhs\"", "\"slack\"", "\"lemma_lhs\"", "\"lemma_rhs\"", "\"eq17_min_margin\"",
        ] {
            assert!(json.contains(key), "missing {key} in {json}");
        }
        // totally geodesic: the radius bound is absent
        assert!(!json.contains("C_r") && !json.contains("R_max"));
        let back: EstimateReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, rep);
        // CSV row has as many fields as the header
        let cols = EstimateReport::csv_header().split(',').count();
        assert_eq!(rep.csv_row().split(',').count(), cols);
    }
}
