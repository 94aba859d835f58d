//! Rigidity classification: a maximal graph with vanishing second
//! fundamental form is totally geodesic, and it is a slice exactly when
//! Theta = -1. The probe reads both sups off the computed geometry.

use maxsurf::{harness, rigidity_probe, ExperimentConfig, SCENARIO_NAMES};

fn main() {
    println!("{:>22}  {:>14}  {:>12}  class", "scenario", "sup |A|^2", "sup |Th+1|");
    for &name in &SCENARIO_NAMES {
        let cfg = ExperimentConfig::named(name);
        let solved = harness::solve_scenario(&cfg, 65).unwrap();
        let geom = &solved.geom;
        let sup_a = geom
            .a_norm_sq
            .iter()
            .filter(|v| v.is_finite())
            .fold(0.0f64, |m, &v| m.max(v));
        let sup_t = geom.theta.iter().fold(0.0f64, |m, &t| m.max((t + 1.0).abs()));
        println!("{:>22}  {:>14.3e}  {:>12.3e}  {:?}", name, sup_a, sup_t, rigidity_probe(geom));
    }
}
