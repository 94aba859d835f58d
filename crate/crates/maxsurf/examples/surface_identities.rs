//! The four structural identities a maximal graph must satisfy, measured as
//! discrete residuals on the exact catenoid heights:
//!   (i)   grad Theta + A t^T = 0
//!   (ii)  |grad Theta|^2 = (1/2)|A|^2 (Theta^2 - 1)
//!   (iii) Lap Theta = Theta (k_M (Theta^2 - 1) + |A|^2)
//!   (iv)  |t^T|^2 = Theta^2 - 1
//! (i)-(iii) involve derivative assemblies and shrink at second order; (iv)
//! is algebraic and sits at the rounding floor from the start.

use maxsurf::{by_name, identity_checks, GraphFunction, Grid, SurfaceGeometry};

fn main() {
    let sc = by_name("catenoid-annulus").unwrap();
    let exact = sc.exact.unwrap();
    let mut prev: Option<[f64; 4]> = None;
    println!(
        "{:>5} {:>12} {:>12} {:>12} {:>12}   order",
        "nx", "(i)", "(ii)", "(iii)", "(iv)"
    );
    for nx in [65usize, 129, 257] {
        let ny = sc.ny_for(nx);
        let grid = Grid::new(sc.spec.chart, nx, ny).unwrap();
        let u: Vec<f64> =
            (0..nx * ny).map(|k| exact(grid.x(k % nx), grid.y(k / nx))).collect();
        let g = GraphFunction::new(grid, &sc.spec, u).unwrap();
        let geom = SurfaceGeometry::new(&g, &sc.spec).unwrap();
        let rep = identity_checks(&geom);
        let s = [rep.gradient, rep.gradient_norm, rep.laplacian, rep.t_top_norm];
        print!("{:>5} {:>12.3e} {:>12.3e} {:>12.3e} {:>12.3e}", nx, s[0], s[1], s[2], s[3]);
        if let Some(p) = prev {
            let o: Vec<String> =
                (0..3).map(|k| format!("{:.2}", (p[k] / s[k]).ln() / 2f64.ln())).collect();
            print!("   {}", o.join(" "));
        }
        println!();
        prev = Some(s);
    }
}
