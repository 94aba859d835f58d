//! The harness convergence pipeline end to end: nested solves, shared-source
//! distance fields, per-column observed orders, and the assertion summary.
//! Equivalent to `maxsurf converge --config <file>` without touching disk.

use maxsurf::{converge, ExperimentConfig};

fn main() {
    let cfg = ExperimentConfig {
        resolutions: vec![33, 65, 129],
        residual_tol: 1e-8,
        ..ExperimentConfig::named("catenoid-annulus")
    };
    let report = converge(&cfg, None).unwrap();
    print!("{}", report.render_text());
    assert_eq!(report.failures(), 0);
}
