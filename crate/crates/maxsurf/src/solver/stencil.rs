//! Exact gradient and Hessian of the discrete area functional
//!
//!   A(u) = Σ_cells ∫_cell √(1 − e^{−2λ} |∇u|²) · e^{2λ},
//!
//! with bilinear u per cell and 2×2 Gauss quadrature. One-point (cell-center)
//! quadrature is not usable here: its Hessian has zero coupling between a
//! node and its edge neighbors, which decouples the grid into two diagonal
//! sublattices and admits a checkerboard near-null mode. The 2×2 rule yields
//! the standard bilinear FEM stiffness structure; the negated Hessian is a
//! symmetric positive definite 9-point operator on spacelike iterates.
//!
//! The conformal factor cancels once against e^{−2λ} in |Du|²_g, so the
//! gradient of A is the plain chart-coordinate flux divergence.

use crate::chart::{Chart, MetricSpec};

/// Offset of the two Gauss abscissae from the cell center, in units of h.
const GAUSS_OFF: f64 = 0.28867513459481287; // 1/(2√3)

/// Per-level geometry and quadrature data needed to assemble the operator.
pub struct CellField {
    pub nx: usize,
    pub ny: usize,
    pub hx: f64,
    pub hy: f64,
    /// e^{−2λ} at the 4 Gauss points of each cell, row-major over cells,
    /// Gauss order (−,−), (+,−), (−,+), (+,+).
    pub w2: Vec<f64>,
}

/// Reference-cell shape data per Gauss point g and corner k (order 00,10,01,11):
/// u_x = Σ_k gx[g][k]·u_k / hx, u_y = Σ_k gy[g][k]·u_k / hy.
fn shape_tables() -> ([[f64; 4]; 4], [[f64; 4]; 4]) {
    let lo = 0.5 - GAUSS_OFF;
    let hi = 0.5 + GAUSS_OFF;
    let mut gx = [[0.0; 4]; 4];
    let mut gy = [[0.0; 4]; 4];
    for (g, &(xi, eta)) in [(lo, lo), (hi, lo), (lo, hi), (hi, hi)].iter().enumerate() {
        gx[g] = [-(1.0 - eta), 1.0 - eta, -eta, eta];
        gy[g] = [-(1.0 - xi), -xi, 1.0 - xi, xi];
    }
    (gx, gy)
}

impl CellField {
    pub fn new(spec: &MetricSpec, chart: &Chart, nx: usize, ny: usize) -> Self {
        let hx = (chart.x1 - chart.x0) / (nx - 1) as f64;
        let hy = (chart.y1 - chart.y0) / (ny - 1) as f64;
        let lo = 0.5 - GAUSS_OFF;
        let hi = 0.5 + GAUSS_OFF;
        let gp = [(lo, lo), (hi, lo), (lo, hi), (hi, hi)];
        let mut w2 = Vec::with_capacity(4 * (nx - 1) * (ny - 1));
        for cj in 0..ny - 1 {
            for ci in 0..nx - 1 {
                for &(gx, gy) in &gp {
                    let x = chart.x0 + (ci as f64 + gx) * hx;
                    let y = chart.y0 + (cj as f64 + gy) * hy;
                    w2.push((-2.0 * spec.lambda(x, y)).exp());
                }
            }
        }
        CellField { nx, ny, hx, hy, w2 }
    }

    pub fn cells_x(&self) -> usize {
        self.nx - 1
    }

    pub fn cells_y(&self) -> usize {
        self.ny - 1
    }

    #[inline]
    fn corners(&self, ci: usize, cj: usize) -> [usize; 4] {
        let n00 = cj * self.nx + ci;
        [n00, n00 + 1, n00 + self.nx, n00 + self.nx + 1]
    }

    /// min over all quadrature points of 1 − e^{−2λ}|∇u|².
    pub fn cell_margin(&self, u: &[f64]) -> f64 {
        let (gx, gy) = shape_tables();
        let mut m = f64::INFINITY;
        for cj in 0..self.cells_y() {
            for ci in 0..self.cells_x() {
                let c = cj * self.cells_x() + ci;
                let nodes = self.corners(ci, cj);
                let uv = [u[nodes[0]], u[nodes[1]], u[nodes[2]], u[nodes[3]]];
                for g in 0..4 {
                    let ux = (gx[g][0] * uv[0] + gx[g][1] * uv[1] + gx[g][2] * uv[2] + gx[g][3] * uv[3]) / self.hx;
                    let uy = (gy[g][0] * uv[0] + gy[g][1] * uv[1] + gy[g][2] * uv[2] + gy[g][3] * uv[3]) / self.hy;
                    let q = self.w2[4 * c + g] * (ux * ux + uy * uy);
                    m = m.min(1.0 - q);
                }
            }
        }
        m
    }

    /// Discrete area; requires a spacelike iterate (cell margin > 0).
    pub fn area(&self, u: &[f64]) -> f64 {
        let (gx, gy) = shape_tables();
        let wq = 0.25 * self.hx * self.hy;
        let mut a = 0.0;
        for cj in 0..self.cells_y() {
            for ci in 0..self.cells_x() {
                let c = cj * self.cells_x() + ci;
                let nodes = self.corners(ci, cj);
                let uv = [u[nodes[0]], u[nodes[1]], u[nodes[2]], u[nodes[3]]];
                for g in 0..4 {
                    let w2 = self.w2[4 * c + g];
                    let ux = (gx[g][0] * uv[0] + gx[g][1] * uv[1] + gx[g][2] * uv[2] + gx[g][3] * uv[3]) / self.hx;
                    let uy = (gy[g][0] * uv[0] + gy[g][1] * uv[1] + gy[g][2] * uv[2] + gy[g][3] * uv[3]) / self.hy;
                    let q = w2 * (ux * ux + uy * uy);
                    a += wq * (1.0 - q).sqrt() / w2;
                }
            }
        }
        a
    }

    /// Gradient of A at interior nodes (boundary entries left 0).
    pub fn area_gradient(&self, u: &[f64]) -> Vec<f64> {
        let (gx, gy) = shape_tables();
        let wq = 0.25 * self.hx * self.hy;
        let mut grad = vec![0.0; self.nx * self.ny];
        for cj in 0..self.cells_y() {
            for ci in 0..self.cells_x() {
                let c = cj * self.cells_x() + ci;
                let nodes = self.corners(ci, cj);
                let uv = [u[nodes[0]], u[nodes[1]], u[nodes[2]], u[nodes[3]]];
                for g in 0..4 {
                    let w2 = self.w2[4 * c + g];
                    let ux = (gx[g][0] * uv[0] + gx[g][1] * uv[1] + gx[g][2] * uv[2] + gx[g][3] * uv[3]) / self.hx;
                    let uy = (gy[g][0] * uv[0] + gy[g][1] * uv[1] + gy[g][2] * uv[2] + gy[g][3] * uv[3]) / self.hy;
                    let q = w2 * (ux * ux + uy * uy);
                    let s = (1.0 - q).sqrt();
                    let fx = wq * ux / s / self.hx;
                    let fy = wq * uy / s / self.hy;
                    for k in 0..4 {
                        grad[nodes[k]] -= fx * gx[g][k] + fy * gy[g][k];
                    }
                }
            }
        }
        for j in 0..self.ny {
            for i in 0..self.nx {
                if i == 0 || j == 0 || i == self.nx - 1 || j == self.ny - 1 {
                    grad[j * self.nx + i] = 0.0;
                }
            }
        }
        grad
    }

    /// 9-point stencil of S = −∇²A at the current iterate, all nodes
    /// (boundary rows are identity). Slot order: (dj+1)*3 + (di+1) for
    /// neighbor offsets di, dj ∈ {−1, 0, 1}.
    pub fn assemble(&self, u: &[f64]) -> Vec<[f64; 9]> {
        self.assemble_with_floor(u, 0.0)
    }

    /// Like `assemble`, with 1 − q clamped below by `floor`. Multigrid builds
    /// coarse operators from injected iterates, which need not stay strictly
    /// spacelike even when the fine iterate does; the clamp keeps those
    /// stencils finite and positive definite. A floor below the solver's
    /// spacelike guard leaves the fine-level operator untouched.
    pub fn assemble_with_floor(&self, u: &[f64], floor: f64) -> Vec<[f64; 9]> {
        let (gx, gy) = shape_tables();
        let wq = 0.25 * self.hx * self.hy;
        let n = self.nx * self.ny;
        let mut st = vec![[0.0; 9]; n];
        let off = [(0i64, 0i64), (1, 0), (0, 1), (1, 1)];
        for cj in 0..self.cells_y() {
            for ci in 0..self.cells_x() {
                let c = cj * self.cells_x() + ci;
                let nodes = self.corners(ci, cj);
                let uv = [u[nodes[0]], u[nodes[1]], u[nodes[2]], u[nodes[3]]];
                let mut block = [[0.0f64; 4]; 4];
                for g in 0..4 {
                    let w2 = self.w2[4 * c + g];
                    let ux = (gx[g][0] * uv[0] + gx[g][1] * uv[1] + gx[g][2] * uv[2] + gx[g][3] * uv[3]) / self.hx;
                    let uy = (gy[g][0] * uv[0] + gy[g][1] * uv[1] + gy[g][2] * uv[2] + gy[g][3] * uv[3]) / self.hy;
                    let q = w2 * (ux * ux + uy * uy);
                    let s = (1.0 - q).max(floor).sqrt();
                    let c1 = wq / s;
                    let c2 = wq * w2 / (s * s * s);
                    let mut ax = [0.0; 4];
                    let mut ay = [0.0; 4];
                    let mut pa = [0.0; 4];
                    for k in 0..4 {
                        ax[k] = gx[g][k] / self.hx;
                        ay[k] = gy[g][k] / self.hy;
                        pa[k] = ux * ax[k] + uy * ay[k];
                    }
                    for k in 0..4 {
                        for m in 0..4 {
                            block[k][m] += c1 * (ax[k] * ax[m] + ay[k] * ay[m]) + c2 * pa[k] * pa[m];
                        }
                    }
                }
                for k in 0..4 {
                    for m in 0..4 {
                        let di = off[m].0 - off[k].0;
                        let dj = off[m].1 - off[k].1;
                        st[nodes[k]][((dj + 1) * 3 + (di + 1)) as usize] += block[k][m];
                    }
                }
            }
        }
        for j in 0..self.ny {
            for i in 0..self.nx {
                if i == 0 || j == 0 || i == self.nx - 1 || j == self.ny - 1 {
                    let node = j * self.nx + i;
                    st[node] = [0.0; 9];
                    st[node][4] = 1.0;
                }
            }
        }
        st
    }
}

/// y = S x over interior rows with the boundary entries of x participating
/// (inhomogeneous Dirichlet right-hand-side assembly).
pub fn apply_stencil_full(nx: usize, ny: usize, st: &[[f64; 9]], x: &[f64], y: &mut [f64]) {
    for e in y.iter_mut() {
        *e = 0.0;
    }
    for j in 1..ny - 1 {
        for i in 1..nx - 1 {
            let n = j * nx + i;
            let s = &st[n];
            let mut acc = s[4] * x[n];
            acc += s[0] * x[n - nx - 1] + s[1] * x[n - nx] + s[2] * x[n - nx + 1];
            acc += s[3] * x[n - 1] + s[5] * x[n + 1];
            acc += s[6] * x[n + nx - 1] + s[7] * x[n + nx] + s[8] * x[n + nx + 1];
            y[n] = acc;
        }
    }
}

/// y = S x over interior nodes using the 9-point stencil; boundary entries of
/// x are treated as 0 (homogeneous Dirichlet for correction equations).
pub fn apply_stencil(nx: usize, ny: usize, st: &[[f64; 9]], x: &[f64], y: &mut [f64]) {
    for e in y.iter_mut() {
        *e = 0.0;
    }
    for j in 1..ny - 1 {
        for i in 1..nx - 1 {
            let n = j * nx + i;
            let s = &st[n];
            let mut acc = s[4] * x[n];
            acc += s[0] * x[n - nx - 1] + s[1] * x[n - nx] + s[2] * x[n - nx + 1];
            acc += s[3] * x[n - 1] + s[5] * x[n + 1];
            acc += s[6] * x[n + nx - 1] + s[7] * x[n + nx] + s[8] * x[n + nx + 1];
            y[n] = acc;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::{Chart, ConformalFactor, MetricSpec};

    fn flat_field(nx: usize, ny: usize) -> CellField {
        let chart = Chart::new(0.0, 1.0, 0.0, 1.0);
        let spec = MetricSpec::new("flat", chart, ConformalFactor::Flat);
        CellField::new(&spec, &chart, nx, ny)
    }

    #[test]
    fn flat_stencil_is_fem_laplacian() {
        let f = flat_field(9, 9);
        let st = f.assemble(&vec![0.0; 81]);
        let s = &st[4 * 9 + 4];
        // bilinear stiffness on square cells: center 8/3, all 8 neighbors −1/3
        assert!((s[4] - 8.0 / 3.0).abs() < 1e-12);
        for k in [0, 1, 2, 3, 5, 6, 7, 8] {
            assert!((s[k] + 1.0 / 3.0).abs() < 1e-12, "slot {k} = {}", s[k]);
        }
    }

    #[test]
    fn gradient_matches_area_differences() {
        let f = flat_field(9, 9);
        let mut u: Vec<f64> = (0..81)
            .map(|k| 0.3 * ((k % 9) as f64) * f.hx + 0.02 * ((k / 9) as f64 * f.hy).sin())
            .collect();
        let g = f.area_gradient(&u);
        let n = 4 * 9 + 5;
        let h = 1e-6;
        u[n] += h;
        let a_plus = f.area(&u);
        u[n] -= 2.0 * h;
        let a_minus = f.area(&u);
        let fd = (a_plus - a_minus) / (2.0 * h);
        assert!((g[n] - fd).abs() < 1e-8, "gradient {} vs fd {}", g[n], fd);
    }

    #[test]
    fn stencil_matches_gradient_differences() {
        let f = flat_field(9, 9);
        let mut u: Vec<f64> = (0..81).map(|k| 0.2 * ((k % 9) as f64) * f.hx + 0.1 * ((k / 9) as f64) * f.hy).collect();
        let st = f.assemble(&u);
        let n = 3 * 9 + 4;
        let m = 4 * 9 + 5; // offset (1,1) from n
        let h = 1e-6;
        let g_minus;
        let g_plus;
        u[m] += h;
        g_plus = f.area_gradient(&u)[n];
        u[m] -= 2.0 * h;
        g_minus = f.area_gradient(&u)[n];
        let fd = (g_plus - g_minus) / (2.0 * h); // H_nm
        let s_nm = st[n][(1 + 1) * 3 + (1 + 1)];
        assert!((s_nm + fd).abs() < 1e-7 * (1.0 + fd.abs()), "S {} vs -H {}", s_nm, -fd);
    }

    #[test]
    fn stencil_is_symmetric() {
        let chart = Chart::new(0.0, 1.0, 0.0, 1.2);
        let spec = MetricSpec::new("sphere", chart, ConformalFactor::Sphere);
        let f = CellField::new(&spec, &chart, 9, 11);
        let u: Vec<f64> = (0..99).map(|k| 0.25 * ((k % 9) as f64) * f.hx - 0.3 * ((k / 9) as f64) * f.hy).collect();
        let st = f.assemble(&u);
        for j in 1..10i64 {
            for i in 1..8i64 {
                let n = (j * 9 + i) as usize;
                for (slot, (di, dj)) in [(5usize, (1i64, 0i64)), (7, (0, 1)), (8, (1, 1)), (6, (-1, 1))] {
                    let mi = i + di;
                    let mj = j + dj;
                    if !(1..=7).contains(&mi) || !(1..=9).contains(&mj) {
                        continue;
                    }
                    let m = (mj * 9 + mi) as usize;
                    let mirrored = ((1 - dj) * 3 + (1 - di)) as usize;
                    let a = st[n][slot];
                    let b = st[m][mirrored];
                    assert!((a - b).abs() <= 1e-13 * (1.0 + a.abs()), "asymmetry {a} vs {b}");
                }
            }
        }
    }
}
