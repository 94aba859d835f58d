//! Geometric multigrid preconditioned conjugate gradients for the Newton
//! systems S δ = g, with S the (SPD) negated area Hessian.
//!
//! Coarse operators are rediscretized: the iterate u is injected onto each
//! coarser grid and the same cell-based assembly is run there. Transfers are
//! full weighting and bilinear interpolation; the smoother is weighted Jacobi.

use super::stencil::{apply_stencil, CellField};
use crate::chart::{Grid, MetricSpec};

const JACOBI_WEIGHT: f64 = 0.8;
const PRE_SWEEPS: usize = 2;
const POST_SWEEPS: usize = 2;
/// Floor for 1 − q when assembling injected coarse iterates; see
/// `CellField::assemble_with_floor`.
const COARSE_MARGIN_FLOOR: f64 = 1e-6;

struct Level {
    nx: usize,
    ny: usize,
    stencil: Vec<[f64; 9]>,
    inv_diag: Vec<f64>,
    // scratch buffers to avoid per-cycle allocation
    r: Vec<f64>,
    tmp: Vec<f64>,
    bc: Vec<f64>,
    xc: Vec<f64>,
}

pub struct MgSolver {
    levels: Vec<Level>,
}

/// Straight injection of node values onto the next coarser grid.
fn inject(nx: usize, u: &[f64], nxc: usize, nyc: usize) -> Vec<f64> {
    let mut uc = vec![0.0; nxc * nyc];
    for jc in 0..nyc {
        for ic in 0..nxc {
            uc[jc * nxc + ic] = u[(2 * jc) * nx + 2 * ic];
        }
    }
    uc
}

impl MgSolver {
    /// Builds the hierarchy for the operator linearized at `u`.
    pub fn new(spec: &MetricSpec, grid: &Grid, u: &[f64]) -> Self {
        let mut levels = Vec::new();
        let mut nx = grid.nx;
        let mut ny = grid.ny;
        let mut ul = u.to_vec();
        loop {
            let field = CellField::new(spec, &grid.chart, nx, ny);
            let stencil = field.assemble_with_floor(&ul, COARSE_MARGIN_FLOOR);
            let n = nx * ny;
            let inv_diag = stencil.iter().map(|s| 1.0 / s[4]).collect();
            levels.push(Level {
                nx,
                ny,
                stencil,
                inv_diag,
                r: vec![0.0; n],
                tmp: vec![0.0; n],
                bc: Vec::new(),
                xc: Vec::new(),
            });
            let can_coarsen = (nx - 1) % 2 == 0 && (ny - 1) % 2 == 0 && nx - 1 >= 4 && ny - 1 >= 4;
            if !can_coarsen {
                break;
            }
            let nxc = (nx - 1) / 2 + 1;
            let nyc = (ny - 1) / 2 + 1;
            ul = inject(nx, &ul, nxc, nyc);
            nx = nxc;
            ny = nyc;
        }
        // size coarse-transfer scratch now that the next level's size is known
        for l in 0..levels.len() - 1 {
            let nc = levels[l + 1].nx * levels[l + 1].ny;
            levels[l].bc = vec![0.0; nc];
            levels[l].xc = vec![0.0; nc];
        }
        MgSolver { levels }
    }

    fn jacobi(level: &mut Level, b: &[f64], x: &mut [f64], sweeps: usize) {
        let (nx, ny) = (level.nx, level.ny);
        for _ in 0..sweeps {
            apply_stencil(nx, ny, &level.stencil, x, &mut level.tmp);
            for j in 1..ny - 1 {
                for i in 1..nx - 1 {
                    let n = j * nx + i;
                    x[n] += JACOBI_WEIGHT * level.inv_diag[n] * (b[n] - level.tmp[n]);
                }
            }
        }
    }

    /// Unpreconditioned CG on the coarsest level; the grid there is tiny.
    fn coarse_solve(level: &mut Level, b: &[f64], x: &mut [f64]) {
        let (nx, ny) = (level.nx, level.ny);
        let n = nx * ny;
        for e in x.iter_mut() {
            *e = 0.0;
        }
        let mut r = b.to_vec();
        let mut p = r.clone();
        let mut ap = vec![0.0; n];
        let mut rr: f64 = r.iter().map(|v| v * v).sum();
        let b2: f64 = rr;
        if b2 == 0.0 {
            return;
        }
        for _ in 0..4 * n {
            apply_stencil(nx, ny, &level.stencil, &p, &mut ap);
            let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
            if pap <= 0.0 {
                break;
            }
            let alpha = rr / pap;
            for k in 0..n {
                x[k] += alpha * p[k];
                r[k] -= alpha * ap[k];
            }
            let rr_new: f64 = r.iter().map(|v| v * v).sum();
            if rr_new <= 1e-24 * b2 {
                break;
            }
            let beta = rr_new / rr;
            rr = rr_new;
            for k in 0..n {
                p[k] = r[k] + beta * p[k];
            }
        }
    }

    /// Transpose of bilinear interpolation (weights 1, 1/2, 1/4). The stencil
    /// is energy-scaled (no 1/h² division), so this pairing keeps the coarse
    /// equations Galerkin-consistent with the rediscretized operators;
    /// classical full weighting would shrink coarse corrections by 4.
    fn restrict(nxf: usize, rf: &[f64], nxc: usize, nyc: usize, rc: &mut [f64]) {
        for e in rc.iter_mut() {
            *e = 0.0;
        }
        for jc in 1..nyc - 1 {
            for ic in 1..nxc - 1 {
                let n = (2 * jc) * nxf + 2 * ic;
                let v = rf[n]
                    + 0.5 * (rf[n - 1] + rf[n + 1] + rf[n - nxf] + rf[n + nxf])
                    + 0.25 * (rf[n - nxf - 1] + rf[n - nxf + 1] + rf[n + nxf - 1] + rf[n + nxf + 1]);
                rc[jc * nxc + ic] = v;
            }
        }
    }

    fn prolong_add(nxf: usize, nyf: usize, xc: &[f64], nxc: usize, xf: &mut [f64]) {
        let at = |ic: usize, jc: usize| xc[jc * nxc + ic];
        for jf in 1..nyf - 1 {
            for if_ in 1..nxf - 1 {
                let ic = if_ / 2;
                let jc = jf / 2;
                let v = match (if_ % 2, jf % 2) {
                    (0, 0) => at(ic, jc),
                    (1, 0) => 0.5 * (at(ic, jc) + at(ic + 1, jc)),
                    (0, 1) => 0.5 * (at(ic, jc) + at(ic, jc + 1)),
                    _ => 0.25 * (at(ic, jc) + at(ic + 1, jc) + at(ic, jc + 1) + at(ic + 1, jc + 1)),
                };
                xf[jf * nxf + if_] += v;
            }
        }
    }

    fn v_cycle(&mut self, l: usize, b: &[f64], x: &mut [f64]) {
        if l == self.levels.len() - 1 {
            let level = &mut self.levels[l];
            Self::coarse_solve(level, b, x);
            return;
        }
        {
            let level = &mut self.levels[l];
            Self::jacobi(level, b, x, PRE_SWEEPS);
            let (nx, ny) = (level.nx, level.ny);
            apply_stencil(nx, ny, &level.stencil, x, &mut level.tmp);
            for n in 0..nx * ny {
                level.r[n] = b[n] - level.tmp[n];
            }
        }
        let (nxf, rf) = (self.levels[l].nx, std::mem::take(&mut self.levels[l].r));
        let (nxc, nyc) = (self.levels[l + 1].nx, self.levels[l + 1].ny);
        let mut bc = std::mem::take(&mut self.levels[l].bc);
        let mut xc = std::mem::take(&mut self.levels[l].xc);
        Self::restrict(nxf, &rf, nxc, nyc, &mut bc);
        for e in xc.iter_mut() {
            *e = 0.0;
        }
        self.v_cycle(l + 1, &bc, &mut xc);
        {
            let level = &mut self.levels[l];
            level.r = rf;
            Self::prolong_add(level.nx, level.ny, &xc, nxc, x);
            level.bc = bc;
            level.xc = xc;
            Self::jacobi(level, b, x, POST_SWEEPS);
        }
    }

    /// PCG with one V-cycle as preconditioner. Returns (solution, iterations,
    /// achieved relative residual).
    pub fn solve(&mut self, b: &[f64], rel_tol: f64, max_iter: usize) -> (Vec<f64>, usize, f64) {
        let (nx, ny) = (self.levels[0].nx, self.levels[0].ny);
        let n = nx * ny;
        let mut x = vec![0.0; n];
        let mut r = b.to_vec();
        let b_norm: f64 = b.iter().map(|v| v * v).sum::<f64>().sqrt();
        if b_norm == 0.0 {
            return (x, 0, 0.0);
        }
        let mut z = vec![0.0; n];
        self.v_cycle(0, &r, &mut z);
        let mut p = z.clone();
        let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let mut ap = vec![0.0; n];
        let mut iters = 0;
        let mut rel = 1.0;
        for it in 0..max_iter {
            apply_stencil(nx, ny, &self.levels[0].stencil, &p, &mut ap);
            let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
            if pap <= 0.0 {
                break;
            }
            let alpha = rz / pap;
            for k in 0..n {
                x[k] += alpha * p[k];
                r[k] -= alpha * ap[k];
            }
            iters = it + 1;
            rel = r.iter().map(|v| v * v).sum::<f64>().sqrt() / b_norm;
            if rel <= rel_tol {
                break;
            }
            for e in z.iter_mut() {
                *e = 0.0;
            }
            self.v_cycle(0, &r, &mut z);
            let rz_new: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
            let beta = rz_new / rz;
            rz = rz_new;
            for k in 0..n {
                p[k] = z[k] + beta * p[k];
            }
        }
        (x, iters, rel)
    }
}
