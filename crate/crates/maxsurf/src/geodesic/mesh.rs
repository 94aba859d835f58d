//! Triangulated carrier of the induced metric. Each grid cell is split along
//! the lower-left to upper-right diagonal; edge lengths are measured in the
//! induced metric with the endpoint-averaged tensor, a midpoint-rule
//! approximation of ∫√(g(ė,ė)) along the chart segment.

use crate::error::{Error, Result};
use crate::geometry::SurfaceGeometry;
use crate::solver::GraphFunction;

#[derive(Debug, Clone)]
pub struct TriMesh {
    pub nx: usize,
    pub ny: usize,
    /// chart coordinates per vertex
    pub verts: Vec<[f64; 2]>,
    /// induced metric [g_xx, g_xy, g_yy] per vertex
    pub tensors: Vec<[f64; 3]>,
    /// vertex triples, counterclockwise in the chart
    pub tris: Vec<[usize; 3]>,
    /// per-triangle edge lengths (v0v1, v1v2, v2v0)
    pub tri_len: Vec<[f64; 3]>,
    /// intrinsic triangle area from edge lengths
    pub tri_area: Vec<f64>,
    /// vertex → (neighbor, edge length), fixed deterministic order
    pub adj: Vec<Vec<(usize, f64)>>,
    /// vertex → incident triangle ids
    pub vert_tris: Vec<Vec<usize>>,
    /// longest edge in the mesh
    pub hmax: f64,
    /// number of triangles violating the triangle inequality
    pub quality_violations: usize,
    hx: f64,
    hy: f64,
    x0: f64,
    y0: f64,
}

fn metric_len(ga: &[f64; 3], gb: &[f64; 3], dx: f64, dy: f64) -> f64 {
    let g = [
        0.5 * (ga[0] + gb[0]),
        0.5 * (ga[1] + gb[1]),
        0.5 * (ga[2] + gb[2]),
    ];
    (g[0] * dx * dx + 2.0 * g[1] * dx * dy + g[2] * dy * dy).sqrt()
}

fn heron(a: f64, b: f64, c: f64) -> f64 {
    let s = 0.5 * (a + b + c);
    (s * (s - a) * (s - b) * (s - c)).max(0.0).sqrt()
}

/// Builds the triangulation of the graph surface carrying the induced metric.
pub fn triangulate(graph: &GraphFunction, geom: &SurfaceGeometry) -> Result<TriMesh> {
    let grid = &graph.grid;
    let (nx, ny) = (grid.nx, grid.ny);
    let n = nx * ny;
    let mut verts = Vec::with_capacity(n);
    for j in 0..ny {
        for i in 0..nx {
            verts.push([grid.x(i), grid.y(j)]);
        }
    }
    let tensors = geom.induced_g.clone();

    let edge = |v0: usize, v1: usize| -> Result<f64> {
        let dx = verts[v1][0] - verts[v0][0];
        let dy = verts[v1][1] - verts[v0][1];
        let l = metric_len(&tensors[v0], &tensors[v1], dx, dy);
        if l < 1e-14 {
            return Err(Error::DegenerateEdge { v0, v1, len: l });
        }
        Ok(l)
    };

    let ncells = (nx - 1) * (ny - 1);
    let mut tris = Vec::with_capacity(2 * ncells);
    let mut tri_len = Vec::with_capacity(2 * ncells);
    let mut tri_area = Vec::with_capacity(2 * ncells);
    let mut quality_violations = 0usize;
    for cj in 0..ny - 1 {
        for ci in 0..nx - 1 {
            let n00 = cj * nx + ci;
            let (n10, n01, n11) = (n00 + 1, n00 + nx, n00 + nx + 1);
            for t in [[n00, n10, n11], [n00, n11, n01]] {
                let l = [edge(t[0], t[1])?, edge(t[1], t[2])?, edge(t[2], t[0])?];
                if l[0] + l[1] < l[2] || l[1] + l[2] < l[0] || l[2] + l[0] < l[1] {
                    quality_violations += 1;
                }
                tris.push(t);
                tri_area.push(heron(l[0], l[1], l[2]));
                tri_len.push(l);
            }
        }
    }

    let mut adj = vec![Vec::new(); n];
    let mut hmax = 0.0f64;
    for j in 0..ny {
        for i in 0..nx {
            let v = j * nx + i;
            // fixed order: E, W, N, S, NE diagonal, SW diagonal
            let mut neigh = Vec::new();
            if i + 1 < nx {
                neigh.push(v + 1);
            }
            if i > 0 {
                neigh.push(v - 1);
            }
            if j + 1 < ny {
                neigh.push(v + nx);
            }
            if j > 0 {
                neigh.push(v - nx);
            }
            if i + 1 < nx && j + 1 < ny {
                neigh.push(v + nx + 1);
            }
            if i > 0 && j > 0 {
                neigh.push(v - nx - 1);
            }
            for w in neigh {
                let l = edge(v, w)?;
                hmax = hmax.max(l);
                adj[v].push((w, l));
            }
        }
    }

    let mut vert_tris = vec![Vec::new(); n];
    for (t, tri) in tris.iter().enumerate() {
        for &v in tri {
            vert_tris[v].push(t);
        }
    }

    Ok(TriMesh {
        nx,
        ny,
        verts,
        tensors,
        tris,
        tri_len,
        tri_area,
        adj,
        vert_tris,
        hmax,
        quality_violations,
        hx: grid.hx(),
        hy: grid.hy(),
        x0: grid.chart.x0,
        y0: grid.chart.y0,
    })
}

impl TriMesh {
    pub fn node_count(&self) -> usize {
        self.verts.len()
    }

    pub fn is_boundary_vertex(&self, v: usize) -> bool {
        let (i, j) = (v % self.nx, v / self.nx);
        i == 0 || j == 0 || i == self.nx - 1 || j == self.ny - 1
    }

    /// Bilinear interpolation of the metric tensor at a chart point
    /// (clamped to the chart rectangle).
    pub fn tensor_at(&self, x: f64, y: f64) -> [f64; 3] {
        let fx = ((x - self.x0) / self.hx).clamp(0.0, (self.nx - 1) as f64 - 1e-12);
        let fy = ((y - self.y0) / self.hy).clamp(0.0, (self.ny - 1) as f64 - 1e-12);
        let (i, j) = (fx.floor() as usize, fy.floor() as usize);
        let (sx, sy) = (fx - i as f64, fy - j as f64);
        let n00 = j * self.nx + i;
        let (n10, n01, n11) = (n00 + 1, n00 + self.nx, n00 + self.nx + 1);
        let mut g = [0.0; 3];
        for k in 0..3 {
            g[k] = (1.0 - sx) * (1.0 - sy) * self.tensors[n00][k]
                + sx * (1.0 - sy) * self.tensors[n10][k]
                + (1.0 - sx) * sy * self.tensors[n01][k]
                + sx * sy * self.tensors[n11][k];
        }
        g
    }

    /// Metric length of a straight chart segment by composite Simpson
    /// quadrature of √(Δᵀ g Δ) with the interpolated tensor field.
    pub fn segment_length(&self, a: [f64; 2], b: [f64; 2]) -> f64 {
        const INTERVALS: usize = 16;
        let dx = b[0] - a[0];
        let dy = b[1] - a[1];
        let f = |t: f64| {
            let g = self.tensor_at(a[0] + t * dx, a[1] + t * dy);
            (g[0] * dx * dx + 2.0 * g[1] * dx * dy + g[2] * dy * dy).max(0.0).sqrt()
        };
        let h = 1.0 / INTERVALS as f64;
        let mut s = f(0.0) + f(1.0);
        for k in 1..INTERVALS {
            s += f(k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    /// Smallest metric eigenvalue over all vertices; gives a lower bound
    /// chart→metric length conversion used to prune searches.
    pub fn min_eigenvalue(&self) -> f64 {
        let mut m = f64::INFINITY;
        for g in &self.tensors {
            let tr = g[0] + g[2];
            let det = g[0] * g[2] - g[1] * g[1];
            let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
            m = m.min(0.5 * (tr - disc));
        }
        m
    }
}
