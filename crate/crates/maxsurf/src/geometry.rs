//! Pointwise Lorentzian geometry of a solved graph: induced metric, tilt of
//! the future-pointing normal, shape operator, curvatures, and the identity
//! residuals that certify the discrete surface behaves like a maximal one.
//!
//! First-derivative fields (metric, Θ, ψ, ∂_t^⊤) exist at every node.
//! Anything involving second derivatives of u is computed with central
//! stencils and is therefore only defined on interior nodes; boundary
//! entries of those fields are NaN and `ring` tells callers how far a node
//! is from the boundary. Identity sup-norms are taken over nodes at least
//! two rings in, where every stencil involved is central.

use crate::chart::MetricSpec;
use crate::error::{Error, Result};
use crate::solver::{pde_residual, GraphFunction};

/// Default bound on the variational mean curvature when an operation
/// requires the surface to be maximal.
pub const DEFAULT_MAX_MEAN_CURVATURE: f64 = 1e-6;

pub struct SurfaceGeometry {
    pub nx: usize,
    pub ny: usize,
    pub hx: f64,
    pub hy: f64,
    /// Induced metric per node: [g_xx, g_xy, g_yy] = e^{2λ}δ − du⊗du.
    pub induced_g: Vec<[f64; 3]>,
    /// Θ = ⟨N, ∂_t⟩ = −1/√(1 − |Du|²_g) ≤ −1.
    pub theta: Vec<f64>,
    /// ψ = arctan Θ ∈ (−π/2, −π/4].
    pub psi: Vec<f64>,
    /// Surface components of ∂_t^⊤ in the graph frame e_k = ∂_k + u_k ∂_t.
    pub t_top: Vec<[f64; 2]>,
    /// ‖∂_t^⊤‖²; algebraically equal to Θ² − 1.
    pub t_top_norm_sq: Vec<f64>,
    /// Mixed shape operator [A^x_x, A^x_y, A^y_x, A^y_y]; NaN on the boundary.
    pub shape_op: Vec<[f64; 4]>,
    /// ‖A‖² = tr A²; NaN on the boundary.
    pub a_norm_sq: Vec<f64>,
    /// K from the curvature relation κ_M Θ² + ‖A‖²/2; NaN on the boundary.
    pub gauss_k: Vec<f64>,
    /// H = −(1/2) tr A from the same stencils; NaN on the boundary.
    pub mean_h: Vec<f64>,
    /// Ambient curvature κ_M at the node (closed form, all nodes).
    pub kappa_m: Vec<f64>,
    /// Node heights, kept for half-point metric reconstruction.
    pub u: Vec<f64>,
    /// Node gradient of u (central interior, one-sided boundary).
    pub grad_u: Vec<[f64; 2]>,
    /// e^{2λ} at (x_i + hx/2, y_j); entry idx is unused for i = nx−1.
    conformal_half_x: Vec<f64>,
    /// e^{2λ} at (x_i, y_j + hy/2); entry idx is unused for j = ny−1.
    conformal_half_y: Vec<f64>,
}

impl SurfaceGeometry {
    pub fn new(graph: &GraphFunction, spec: &MetricSpec) -> Result<Self> {
        let grid = &graph.grid;
        let (nx, ny) = (grid.nx, grid.ny);
        let (hx, hy) = (grid.hx(), grid.hy());
        let n = nx * ny;
        let u = &graph.u;

        let mut induced_g = vec![[0.0; 3]; n];
        let mut theta = vec![0.0; n];
        let mut psi = vec![0.0; n];
        let mut t_top = vec![[0.0; 2]; n];
        let mut t_top_norm_sq = vec![0.0; n];
        let mut shape_op = vec![[f64::NAN; 4]; n];
        let mut a_norm_sq = vec![f64::NAN; n];
        let mut gauss_k = vec![f64::NAN; n];
        let mut mean_h = vec![f64::NAN; n];
        let mut kappa_m = vec![0.0; n];
        let mut conformal_half_x = vec![0.0; n];
        let mut conformal_half_y = vec![0.0; n];

        for j in 0..ny {
            for i in 0..nx {
                let idx = grid.idx(i, j);
                let (x, y) = (grid.x(i), grid.y(j));
                let e2l = spec.conformal(x, y);
                conformal_half_x[idx] = spec.conformal(x + 0.5 * hx, y);
                conformal_half_y[idx] = spec.conformal(x, y + 0.5 * hy);
                let w2 = 1.0 / e2l;
                let [ux, uy] = graph.grad_u[idx];
                let q = w2 * (ux * ux + uy * uy);
                if q >= 1.0 {
                    return Err(Error::NonSpacelike { index: idx, margin: 1.0 - q });
                }
                induced_g[idx] = [e2l - ux * ux, -ux * uy, e2l - uy * uy];
                let th = -1.0 / (1.0 - q).sqrt();
                theta[idx] = th;
                psi[idx] = th.atan();
                let c0 = -w2 / (1.0 - q);
                let xi = [c0 * ux, c0 * uy];
                t_top[idx] = xi;
                let g = induced_g[idx];
                t_top_norm_sq[idx] =
                    g[0] * xi[0] * xi[0] + 2.0 * g[1] * xi[0] * xi[1] + g[2] * xi[1] * xi[1];
                kappa_m[idx] = spec.gaussian_curvature(x, y)?;
            }
        }

        for j in 1..ny - 1 {
            for i in 1..nx - 1 {
                let idx = grid.idx(i, j);
                let (x, y) = (grid.x(i), grid.y(j));
                let [ux, uy] = graph.grad_u[idx];
                let uxx = (u[idx + 1] - 2.0 * u[idx] + u[idx - 1]) / (hx * hx);
                let uyy = (u[idx + nx] - 2.0 * u[idx] + u[idx - nx]) / (hy * hy);
                let uxy = (u[idx + nx + 1] - u[idx + nx - 1] - u[idx - nx + 1] + u[idx - nx - 1])
                    / (4.0 * hx * hy);
                let (lx, ly) = spec.dlambda(x, y);
                // conformal Christoffel contractions Γ^m_{kj} u_m
                let cxx = lx * ux - ly * uy;
                let cxy = ly * ux + lx * uy;
                let cyy = -lx * ux + ly * uy;
                let nu = -1.0 / theta[idx]; // √(1−q)
                let h_xx = (cxx - uxx) / nu;
                let h_xy = (cxy - uxy) / nu;
                let h_yy = (cyy - uyy) / nu;
                let g = induced_g[idx];
                let det = g[0] * g[2] - g[1] * g[1];
                let (ixx, ixy, iyy) = (g[2] / det, -g[1] / det, g[0] / det);
                let a = [
                    ixx * h_xx + ixy * h_xy,
                    ixx * h_xy + ixy * h_yy,
                    ixy * h_xx + iyy * h_xy,
                    ixy * h_xy + iyy * h_yy,
                ];
                shape_op[idx] = a;
                let asq = a[0] * a[0] + 2.0 * a[1] * a[2] + a[3] * a[3];
                a_norm_sq[idx] = asq;
                mean_h[idx] = -0.5 * (a[0] + a[3]);
                gauss_k[idx] = kappa_m[idx] * theta[idx] * theta[idx] + 0.5 * asq;
            }
        }

        Ok(SurfaceGeometry {
            nx,
            ny,
            hx,
            hy,
            induced_g,
            theta,
            psi,
            t_top,
            t_top_norm_sq,
            shape_op,
            a_norm_sq,
            gauss_k,
            mean_h,
            kappa_m,
            u: u.clone(),
            grad_u: graph.grad_u.clone(),
            conformal_half_x,
            conformal_half_y,
        })
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    /// Distance of a node from the chart boundary in grid steps.
    #[inline]
    pub fn ring(&self, i: usize, j: usize) -> usize {
        i.min(j).min(self.nx - 1 - i).min(self.ny - 1 - j)
    }

    #[inline]
    fn inverse_g(&self, idx: usize) -> (f64, f64, f64) {
        let g = self.induced_g[idx];
        let det = g[0] * g[2] - g[1] * g[1];
        (g[2] / det, -g[1] / det, g[0] / det)
    }

    /// Chart-coordinate central gradient of a node field; callable at
    /// interior nodes.
    #[inline]
    fn central_grad(&self, f: &[f64], i: usize, j: usize) -> [f64; 2] {
        let idx = self.idx(i, j);
        [
            (f[idx + 1] - f[idx - 1]) / (2.0 * self.hx),
            (f[idx + self.nx] - f[idx - self.nx]) / (2.0 * self.hy),
        ]
    }
}

pub fn induced_metric(graph: &GraphFunction, spec: &MetricSpec) -> Result<Vec<[f64; 3]>> {
    Ok(SurfaceGeometry::new(graph, spec)?.induced_g)
}

pub fn gauss_map_theta(graph: &GraphFunction, spec: &MetricSpec) -> Result<Vec<f64>> {
    Ok(SurfaceGeometry::new(graph, spec)?.theta)
}

pub fn shape_operator(graph: &GraphFunction, spec: &MetricSpec) -> Result<Vec<[f64; 4]>> {
    Ok(SurfaceGeometry::new(graph, spec)?.shape_op)
}

pub fn a_norm_sq(geom: &SurfaceGeometry) -> &[f64] {
    &geom.a_norm_sq
}

/// W^{ij} = √det g · g^{ij} from a metric reconstructed at a flux half
/// point. Returned as (W^{xx}, W^{xy}, W^{yy}).
#[inline]
fn half_point_coeffs(e2l: f64, ux: f64, uy: f64) -> (f64, f64, f64) {
    let (gxx, gxy, gyy) = (e2l - ux * ux, -ux * uy, e2l - uy * uy);
    let sd = (gxx * gyy - gxy * gxy).sqrt();
    (gyy / sd, -gxy / sd, gxx / sd)
}

/// Discrete Laplace-Beltrami of a node field in divergence form,
/// (1/√det g) ∂_i(√det g g^{ij} ∂_j f). Fluxes live at staggered half
/// points whose metric is rebuilt there: exact conformal factor, compact
/// along-flux difference of u, averaged central cross derivative. The
/// compact difference is what keeps the coefficient error small; node
/// averaging of W would leak the full central-stencil error of Du into
/// the coefficients. NaN on the boundary; second order on smooth fields.
pub fn laplace_beltrami(geom: &SurfaceGeometry, f: &[f64]) -> Vec<f64> {
    let (nx, ny) = (geom.nx, geom.ny);
    assert_eq!(f.len(), nx * ny);
    let (hx, hy) = (geom.hx, geom.hy);
    let (u, gu) = (&geom.u, &geom.grad_u);
    let mut out = vec![f64::NAN; nx * ny];
    // cross derivatives of f at nodes next to an interior node keep that
    // node's cross index interior, so central differences stay valid
    let dy = |idx: usize| (f[idx + nx] - f[idx - nx]) / (2.0 * hy);
    let dx = |idx: usize| (f[idx + 1] - f[idx - 1]) / (2.0 * hx);
    for j in 1..ny - 1 {
        for i in 1..nx - 1 {
            let idx = geom.idx(i, j);
            let (e, w, n, s) = (idx + 1, idx - 1, idx + nx, idx - nx);
            let (wxx_e, wxy_e, _) = half_point_coeffs(
                geom.conformal_half_x[idx],
                (u[e] - u[idx]) / hx,
                0.5 * (gu[idx][1] + gu[e][1]),
            );
            let (wxx_w, wxy_w, _) = half_point_coeffs(
                geom.conformal_half_x[w],
                (u[idx] - u[w]) / hx,
                0.5 * (gu[w][1] + gu[idx][1]),
            );
            let (_, wxy_n, wyy_n) = half_point_coeffs(
                geom.conformal_half_y[idx],
                0.5 * (gu[idx][0] + gu[n][0]),
                (u[n] - u[idx]) / hy,
            );
            let (_, wxy_s, wyy_s) = half_point_coeffs(
                geom.conformal_half_y[s],
                0.5 * (gu[s][0] + gu[idx][0]),
                (u[idx] - u[s]) / hy,
            );
            let flux_e = wxx_e * (f[e] - f[idx]) / hx + wxy_e * 0.5 * (dy(idx) + dy(e));
            let flux_w = wxx_w * (f[idx] - f[w]) / hx + wxy_w * 0.5 * (dy(w) + dy(idx));
            let flux_n = wyy_n * (f[n] - f[idx]) / hy + wxy_n * 0.5 * (dx(idx) + dx(n));
            let flux_s = wyy_s * (f[idx] - f[s]) / hy + wxy_s * 0.5 * (dx(s) + dx(idx));
            let g = geom.induced_g[idx];
            let sd = (g[0] * g[2] - g[1] * g[1]).sqrt();
            out[idx] = ((flux_e - flux_w) / hx + (flux_n - flux_s) / hy) / sd;
        }
    }
    out
}

/// Intrinsic Gaussian curvature of the induced metric by the Brioschi
/// formula, with all metric derivatives by central differences. NaN on the
/// boundary.
pub fn brioschi_curvature(geom: &SurfaceGeometry) -> Vec<f64> {
    let (nx, ny) = (geom.nx, geom.ny);
    let n = nx * ny;
    let e: Vec<f64> = geom.induced_g.iter().map(|g| g[0]).collect();
    let f: Vec<f64> = geom.induced_g.iter().map(|g| g[1]).collect();
    let g: Vec<f64> = geom.induced_g.iter().map(|g| g[2]).collect();
    let (hx, hy) = (geom.hx, geom.hy);
    let mut out = vec![f64::NAN; n];
    for j in 1..ny - 1 {
        for i in 1..nx - 1 {
            let idx = geom.idx(i, j);
            let ex = (e[idx + 1] - e[idx - 1]) / (2.0 * hx);
            let ey = (e[idx + nx] - e[idx - nx]) / (2.0 * hy);
            let gx = (g[idx + 1] - g[idx - 1]) / (2.0 * hx);
            let gy = (g[idx + nx] - g[idx - nx]) / (2.0 * hy);
            let fx = (f[idx + 1] - f[idx - 1]) / (2.0 * hx);
            let fy = (f[idx + nx] - f[idx - nx]) / (2.0 * hy);
            let eyy = (e[idx + nx] - 2.0 * e[idx] + e[idx - nx]) / (hy * hy);
            let gxx = (g[idx + 1] - 2.0 * g[idx] + g[idx - 1]) / (hx * hx);
            let fxy = (f[idx + nx + 1] - f[idx + nx - 1] - f[idx - nx + 1] + f[idx - nx - 1])
                / (4.0 * hx * hy);
            let (ee, ff, gg) = (e[idx], f[idx], g[idx]);
            let m1 = [
                [-0.5 * eyy + fxy - 0.5 * gxx, 0.5 * ex, fx - 0.5 * ey],
                [fy - 0.5 * gx, ee, ff],
                [0.5 * gy, ff, gg],
            ];
            let m2 = [[0.0, 0.5 * ey, 0.5 * gx], [0.5 * ey, ee, ff], [0.5 * gx, ff, gg]];
            let det3 = |m: &[[f64; 3]; 3]| {
                m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                    - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                    + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
            };
            let den = ee * gg - ff * ff;
            out[idx] = (det3(&m1) - det3(&m2)) / (den * den);
        }
    }
    out
}

#[derive(Debug)]
pub struct CurvatureComparison {
    /// κ_M Θ² + ‖A‖²/2 per node (NaN on the boundary).
    pub from_relation: Vec<f64>,
    /// Brioschi curvature of the induced metric (NaN on the boundary).
    pub intrinsic: Vec<f64>,
    /// sup |difference| over nodes at least two rings in.
    pub sup_difference: f64,
}

/// Computes K both from the curvature relation and intrinsically, refusing
/// when the surface is not maximal: the relation presumes H = 0, so the
/// variational mean curvature (half the solver residual field) must stay
/// below `h_tol`.
pub fn gauss_curvature_sigma(
    geom: &SurfaceGeometry,
    graph: &GraphFunction,
    spec: &MetricSpec,
    h_tol: f64,
) -> Result<CurvatureComparison> {
    let sup_h = 0.5 * pde_residual(graph, spec);
    if sup_h > h_tol {
        return Err(Error::NotMaximal { sup_h, tol: h_tol });
    }
    let intrinsic = brioschi_curvature(geom);
    let from_relation = geom.gauss_k.clone();
    let mut sup = 0.0f64;
    for j in 2..geom.ny.saturating_sub(2) {
        for i in 2..geom.nx.saturating_sub(2) {
            let idx = geom.idx(i, j);
            sup = sup.max((from_relation[idx] - intrinsic[idx]).abs());
        }
    }
    Ok(CurvatureComparison { from_relation, intrinsic, sup_difference: sup })
}

/// Per-node residuals of the four maximal-surface identities; NaN where any
/// stencil involved would leave the grid (nodes fewer than two rings in).
pub struct IdentityFields {
    /// (i)  ‖∇Θ + A ∂_t^⊤‖_g
    pub gradient: Vec<f64>,
    /// (ii) |‖∇Θ‖² − (1/2)‖A‖²(Θ² − 1)|
    pub gradient_norm: Vec<f64>,
    /// (iii) |ΔΘ − Θ(κ_M(Θ² − 1) + ‖A‖²)|
    pub laplacian: Vec<f64>,
    /// (iv) |‖∂_t^⊤‖² − (Θ² − 1)|
    pub t_top_norm: Vec<f64>,
}

pub fn identity_residual_fields(geom: &SurfaceGeometry) -> IdentityFields {
    let (nx, ny) = (geom.nx, geom.ny);
    let n = nx * ny;
    let lap_theta = laplace_beltrami(geom, &geom.theta);
    let mut fields = IdentityFields {
        gradient: vec![f64::NAN; n],
        gradient_norm: vec![f64::NAN; n],
        laplacian: vec![f64::NAN; n],
        t_top_norm: vec![f64::NAN; n],
    };
    for j in 0..ny {
        for i in 0..nx {
            if geom.ring(i, j) < 2 {
                continue;
            }
            let idx = geom.idx(i, j);
            let th = geom.theta[idx];
            let g = geom.induced_g[idx];
            let (ixx, ixy, iyy) = geom.inverse_g(idx);
            let dth = geom.central_grad(&geom.theta, i, j);
            // raised gradient components
            let grad = [ixx * dth[0] + ixy * dth[1], ixy * dth[0] + iyy * dth[1]];
            let a = geom.shape_op[idx];
            let xi = geom.t_top[idx];
            let v = [
                grad[0] + a[0] * xi[0] + a[1] * xi[1],
                grad[1] + a[2] * xi[0] + a[3] * xi[1],
            ];
            let norm_sq = g[0] * v[0] * v[0] + 2.0 * g[1] * v[0] * v[1] + g[2] * v[1] * v[1];
            fields.gradient[idx] = norm_sq.max(0.0).sqrt();

            let grad_norm_sq = dth[0] * grad[0] + dth[1] * grad[1];
            let asq = geom.a_norm_sq[idx];
            fields.gradient_norm[idx] = (grad_norm_sq - 0.5 * asq * (th * th - 1.0)).abs();

            let rhs = th * (geom.kappa_m[idx] * (th * th - 1.0) + asq);
            fields.laplacian[idx] = (lap_theta[idx] - rhs).abs();

            fields.t_top_norm[idx] = (geom.t_top_norm_sq[idx] - (th * th - 1.0)).abs();
        }
    }
    fields
}

/// Sup-norms of the four identity residuals over nodes at least two rings
/// from the boundary.
pub struct IdentityReport {
    pub gradient: f64,
    pub gradient_norm: f64,
    pub laplacian: f64,
    pub t_top_norm: f64,
    /// ring used for the sups
    pub ring: usize,
}

pub fn identity_checks(geom: &SurfaceGeometry) -> IdentityReport {
    let f = identity_residual_fields(geom);
    let sup = |v: &[f64]| v.iter().filter(|x| !x.is_nan()).fold(0.0f64, |m, x| m.max(*x));
    IdentityReport {
        gradient: sup(&f.gradient),
        gradient_norm: sup(&f.gradient_norm),
        laplacian: sup(&f.laplacian),
        t_top_norm: sup(&f.t_top_norm),
        ring: 2,
    }
}
