//! Constants and the log radius bound. c_r(alpha) scales the disc estimate
//! by the worst tilt on the disc; rearranged, the estimate caps how far the
//! outer radius can grow: R <= r e^{C_r} with C_r = c_r L(r)/(r int |A|^2).

use maxsurf::{c_r, corollary2_bound, harness, phi, theorem1_check, ExperimentConfig};

fn main() {
    println!("c_r(1) = {:.12}  (4 pi = {:.12})", c_r(1.0).unwrap(), 4.0 * std::f64::consts::PI);
    println!("phi(-1) = {:.12}  (pi/8 = {:.12})", phi(-1.0), std::f64::consts::PI / 8.0);
    for alpha in [1.0, 1.5, 2.0, 4.0, 8.0] {
        println!("  c_r({alpha}) = {:.6}", c_r(alpha).unwrap());
    }

    let cfg = ExperimentConfig {
        resolution: 129,
        residual_tol: 1e-8,
        center: Some((1.5f64.ln(), std::f64::consts::PI)),
        ..ExperimentConfig::named("catenoid-annulus")
    };
    let solved = harness::solve_scenario(&cfg, cfg.resolution).unwrap();
    let discs = harness::march_from_center(&solved, &cfg).unwrap();
    let rep =
        theorem1_check(&solved.geom, &discs.mesh, &discs.field, 0.2, 0.4, discs.tol_pt).unwrap();

    let (c_radius, r_max) = corollary2_bound(rep.c_r, rep.l_r, rep.r, rep.lhs).unwrap();
    println!("\ncatenoid disc r = {}, R = {}:", rep.r, rep.r_outer);
    println!("  int |A|^2 = {:.6}, L(r) = {:.6}", rep.lhs, rep.l_r);
    println!("  C_r = {c_radius:.2}, so R could grow to r e^{{C_r}} = {r_max:.3e}");
    println!("  (e^{{C_r}} overflows to inf for near-geodesic discs: the bound is vacuous there,");
    println!("   which is the correct reading; ln(R/r) = {:.3} stays far below C_r)", (rep.r_outer / rep.r).ln());

    // a totally geodesic disc has int |A|^2 = 0 and no finite bound at all
    let flat = ExperimentConfig::named("tilted-plane");
    let fs = harness::solve_scenario(&flat, 65).unwrap();
    let fd = harness::march_from_center(&fs, &flat).unwrap();
    let fr = theorem1_check(&fs.geom, &fd.mesh, &fd.field, 0.2, 0.4, fd.tol_pt).unwrap();
    println!("\ntilted plane: lhs = {:.1e}, bound defined: {}", fr.lhs, fr.c_radius.is_some());
}
