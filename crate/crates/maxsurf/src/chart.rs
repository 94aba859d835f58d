//! Conformal base metrics g = e^{2λ}(dx² + dy²) on a rectangular chart.
//!
//! λ comes from a fixed catalog with exact first and second derivatives, so
//! the Gaussian curvature K = −e^{−2λ}(λ_xx + λ_yy) carries no finite-difference
//! error. All discretization error lives in the solver and geometry modules.

use crate::error::{Error, Result};

/// Rounding allowance for the non-negative-curvature check: catalog entries
/// satisfy K >= 0 exactly or fail it by O(1).
pub const TOL_CURV: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chart {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Chart {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        assert!(x1 > x0 && y1 > y0, "empty chart rectangle");
        Chart { x0, x1, y0, y1 }
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        // closed rectangle; boundary points are chart points
        x >= self.x0 && x <= self.x1 && y >= self.y0 && y <= self.y1
    }
}

/// Catalog of conformal factors. Each entry supplies λ, ∇λ and the pure
/// second derivatives in closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConformalFactor {
    /// λ ≡ 0: the Euclidean plane.
    Flat,
    /// λ = −log(1 + (x²+y²)/4): stereographic chart of the unit round sphere, K ≡ 1.
    Sphere,
    /// λ = −a(x²+y²): Gaussian bump, K = 4a·e^{2a(x²+y²)}. a > 0 satisfies K > 0;
    /// negative a is admitted so the curvature validator has something to reject.
    Bump { a: f64 },
    /// λ = x: log-polar chart of the flat annulus (x = log ρ, y = θ), K ≡ 0.
    LogPolarFlat,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricSpec {
    pub name: String,
    pub chart: Chart,
    pub factor: ConformalFactor,
}

impl MetricSpec {
    pub fn new(name: &str, chart: Chart, factor: ConformalFactor) -> Self {
        MetricSpec { name: name.to_string(), chart, factor }
    }

    pub fn lambda(&self, x: f64, y: f64) -> f64 {
        match self.factor {
            ConformalFactor::Flat => 0.0,
            ConformalFactor::Sphere => -(1.0 + 0.25 * (x * x + y * y)).ln(),
            ConformalFactor::Bump { a } => -a * (x * x + y * y),
            ConformalFactor::LogPolarFlat => x,
        }
    }

    /// (λ_x, λ_y)
    pub fn dlambda(&self, x: f64, y: f64) -> (f64, f64) {
        match self.factor {
            ConformalFactor::Flat => (0.0, 0.0),
            ConformalFactor::Sphere => {
                let w = 1.0 + 0.25 * (x * x + y * y);
                (-0.5 * x / w, -0.5 * y / w)
            }
            ConformalFactor::Bump { a } => (-2.0 * a * x, -2.0 * a * y),
            ConformalFactor::LogPolarFlat => (1.0, 0.0),
        }
    }

    /// (λ_xx, λ_yy)
    pub fn d2lambda(&self, x: f64, y: f64) -> (f64, f64) {
        match self.factor {
            ConformalFactor::Flat => (0.0, 0.0),
            ConformalFactor::Sphere => {
                let w = 1.0 + 0.25 * (x * x + y * y);
                (-0.5 / w + 0.25 * x * x / (w * w), -0.5 / w + 0.25 * y * y / (w * w))
            }
            ConformalFactor::Bump { a } => (-2.0 * a, -2.0 * a),
            ConformalFactor::LogPolarFlat => (0.0, 0.0),
        }
    }

    /// e^{2λ} without the chart-domain check; hot path for assembly loops.
    pub fn conformal(&self, x: f64, y: f64) -> f64 {
        (2.0 * self.lambda(x, y)).exp()
    }

    /// Metric tensor (g11, g12, g22) at a chart point.
    pub fn metric_at(&self, x: f64, y: f64) -> Result<(f64, f64, f64)> {
        if !self.chart.contains(x, y) {
            return Err(Error::OutsideChart { x, y });
        }
        let e2l = self.conformal(x, y);
        Ok((e2l, 0.0, e2l))
    }

    /// Gaussian curvature K = −e^{−2λ}(λ_xx + λ_yy) from the closed-form derivatives.
    pub fn gaussian_curvature(&self, x: f64, y: f64) -> Result<f64> {
        if !self.chart.contains(x, y) {
            return Err(Error::OutsideChart { x, y });
        }
        let (lxx, lyy) = self.d2lambda(x, y);
        Ok(-(-2.0 * self.lambda(x, y)).exp() * (lxx + lyy))
    }
}

/// Uniform node grid over the chart rectangle.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub nx: usize,
    pub ny: usize,
    pub chart: Chart,
}

impl Grid {
    pub fn new(chart: Chart, nx: usize, ny: usize) -> Result<Self> {
        if nx < 9 || ny < 9 {
            return Err(Error::GridTooCoarse(format!("{}x{}", nx, ny)));
        }
        Ok(Grid { nx, ny, chart })
    }

    pub fn hx(&self) -> f64 {
        (self.chart.x1 - self.chart.x0) / (self.nx - 1) as f64
    }

    pub fn hy(&self) -> f64 {
        (self.chart.y1 - self.chart.y0) / (self.ny - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.chart.x0 + i as f64 * self.hx()
    }

    pub fn y(&self, j: usize) -> f64 {
        self.chart.y0 + j as f64 * self.hy()
    }

    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn node_count(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_boundary(&self, i: usize, j: usize) -> bool {
        i == 0 || j == 0 || i == self.nx - 1 || j == self.ny - 1
    }

    /// Number of rings separating (i, j) from the chart boundary; 0 on the boundary.
    pub fn ring(&self, i: usize, j: usize) -> usize {
        i.min(j).min(self.nx - 1 - i).min(self.ny - 1 - j)
    }

    /// Index of the grid node nearest to a chart point.
    pub fn nearest_node(&self, x: f64, y: f64) -> usize {
        let i = ((x - self.chart.x0) / self.hx()).round().clamp(0.0, (self.nx - 1) as f64) as usize;
        let j = ((y - self.chart.y0) / self.hy()).round().clamp(0.0, (self.ny - 1) as f64) as usize;
        self.idx(i, j)
    }
}

/// Checks K >= −tol at every grid node. Returns (all nodes pass, minimum K found).
pub fn validate_nonnegative_curvature(spec: &MetricSpec, grid: &Grid, tol: f64) -> (bool, f64) {
    let mut min_k = f64::INFINITY;
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            // grid nodes lie in the chart by construction
            let k = spec.gaussian_curvature(grid.x(i), grid.y(j)).expect("grid node in chart");
            if k < min_k {
                min_k = k;
            }
        }
    }
    (min_k >= -tol, min_k)
}
