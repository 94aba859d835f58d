//! A full experiment from config text to report, the library-side equivalent
//! of `maxsurf run --config <file> --out <dir>`. The same text format is
//! accepted on disk; parsing is strict and round-trips bit-exactly.

use maxsurf::{run, ExperimentConfig};

const CONFIG: &str = "
[scenario]
name = sphere-perturbed

[grid]
resolution = 65

# leaving [discs] out selects the default single pair
# r = 0.25 R_available, R = 0.5 R_available

[tolerances]
residual = 1e-10
tol_pt_factor = 10
";

fn main() {
    let cfg = ExperimentConfig::parse(CONFIG).unwrap();
    assert_eq!(ExperimentConfig::parse(&cfg.render()).unwrap(), cfg);

    let report = run(&cfg, None).unwrap();
    print!("{}", report.render_text());
    std::process::exit(if report.failures() == 0 { 0 } else { 1 });
}
