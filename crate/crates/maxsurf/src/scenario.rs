//! Named experiment setups: a metric chart paired with Dirichlet data, a
//! default disc center, and the exact solution when one is known.

use crate::chart::{Chart, ConformalFactor, MetricSpec};
use crate::error::{Error, Result};

/// Dirichlet data on the chart boundary, in a form that prints and parses
/// losslessly for config files.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryData {
    Constant(f64),
    /// ax·x + ay·y
    Affine { ax: f64, ay: f64 },
    /// asinh(e^x): the catenoid height over the log-polar annulus chart.
    RadialAsinh,
    /// cx·x + cy·y + cxy·xy + cx2·x² + cy2·y²
    Poly { cx: f64, cy: f64, cxy: f64, cx2: f64, cy2: f64 },
}

impl BoundaryData {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match *self {
            BoundaryData::Constant(c) => c,
            BoundaryData::Affine { ax, ay } => ax * x + ay * y,
            BoundaryData::RadialAsinh => x.exp().asinh(),
            BoundaryData::Poly { cx, cy, cxy, cx2, cy2 } => {
                cx * x + cy * y + cxy * x * y + cx2 * x * x + cy2 * y * y
            }
        }
    }

    pub fn render(&self) -> String {
        match *self {
            BoundaryData::Constant(c) => format!("constant {c}"),
            BoundaryData::Affine { ax, ay } => format!("affine {ax} {ay}"),
            BoundaryData::RadialAsinh => "radial-asinh".to_string(),
            BoundaryData::Poly { cx, cy, cxy, cx2, cy2 } => {
                format!("poly {cx} {cy} {cxy} {cx2} {cy2}")
            }
        }
    }

    pub fn parse(s: &str) -> Result<BoundaryData> {
        let mut it = s.split_whitespace();
        let kind = it.next().ok_or_else(|| Error::Config("empty boundary spec".into()))?;
        let mut num = |name: &str| -> Result<f64> {
            it.next()
                .ok_or_else(|| Error::Config(format!("boundary {kind}: missing {name}")))?
                .parse::<f64>()
                .map_err(|e| Error::Config(format!("boundary {kind}: {name}: {e}")))
        };
        let out = match kind {
            "constant" => BoundaryData::Constant(num("value")?),
            "affine" => BoundaryData::Affine { ax: num("ax")?, ay: num("ay")? },
            "radial-asinh" => BoundaryData::RadialAsinh,
            "poly" => BoundaryData::Poly {
                cx: num("cx")?,
                cy: num("cy")?,
                cxy: num("cxy")?,
                cx2: num("cx2")?,
                cy2: num("cy2")?,
            },
            other => return Err(Error::Config(format!("unknown boundary kind '{other}'"))),
        };
        if it.next().is_some() {
            return Err(Error::Config(format!("boundary {kind}: trailing tokens")));
        }
        Ok(out)
    }
}

/// A ready-to-solve experiment: metric, boundary data, where to center
/// geodesic discs, and the closed-form height if the scenario has one.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: &'static str,
    pub spec: MetricSpec,
    pub boundary: BoundaryData,
    /// Default disc center in chart coordinates (snapped to a node later).
    pub center: (f64, f64),
    /// Closed-form solution of the Dirichlet problem, when known.
    pub exact: Option<fn(f64, f64) -> f64>,
    /// Grid aspect ny−1 = (nx−1)·num/den; keeps cells near-square on
    /// anisotropic charts.
    pub aspect: (usize, usize),
}

pub const SCENARIO_NAMES: [&str; 6] = [
    "flat-plane",
    "tilted-plane",
    "catenoid-annulus",
    "sphere-slice",
    "sphere-perturbed",
    "bump-metric-perturbed",
];

fn exact_zero(_: f64, _: f64) -> f64 {
    0.0
}

fn exact_tilt(x: f64, _: f64) -> f64 {
    0.6 * x
}

fn exact_catenoid(x: f64, _: f64) -> f64 {
    x.exp().asinh()
}

fn exact_slice(_: f64, _: f64) -> f64 {
    0.7
}

/// Looks up a catalog scenario by name.
pub fn by_name(name: &str) -> Result<Scenario> {
    let square = Chart::new(-1.0, 1.0, -1.0, 1.0);
    // log-polar chart of the annulus 0.5 <= rho <= 3
    let annulus = Chart::new(0.5f64.ln(), 3.0f64.ln(), 0.0, 2.0 * std::f64::consts::PI);
    let s = match name {
        "flat-plane" => Scenario {
            name: "flat-plane",
            spec: MetricSpec::new("flat", square, ConformalFactor::Flat),
            boundary: BoundaryData::Constant(0.0),
            center: (0.0, 0.0),
            exact: Some(exact_zero),
            aspect: (1, 1),
        },
        "tilted-plane" => Scenario {
            name: "tilted-plane",
            spec: MetricSpec::new("flat", square, ConformalFactor::Flat),
            boundary: BoundaryData::Affine { ax: 0.6, ay: 0.0 },
            center: (0.0, 0.0),
            exact: Some(exact_tilt),
            aspect: (1, 1),
        },
        "catenoid-annulus" => Scenario {
            name: "catenoid-annulus",
            spec: MetricSpec::new("annulus", annulus, ConformalFactor::LogPolarFlat),
            boundary: BoundaryData::RadialAsinh,
            center: (1.5f64.ln(), std::f64::consts::PI),
            exact: Some(exact_catenoid),
            // chart is ~1.79 x 6.28; 7/2 keeps metric cells near-square
            aspect: (7, 2),
        },
        "sphere-slice" => Scenario {
            name: "sphere-slice",
            spec: MetricSpec::new("sphere", square, ConformalFactor::Sphere),
            boundary: BoundaryData::Constant(0.7),
            center: (0.0, 0.0),
            exact: Some(exact_slice),
            aspect: (1, 1),
        },
        "sphere-perturbed" => Scenario {
            name: "sphere-perturbed",
            spec: MetricSpec::new("sphere", square, ConformalFactor::Sphere),
            boundary: BoundaryData::Poly { cx: 0.0, cy: 0.0, cxy: 0.15, cx2: 0.0, cy2: 0.0 },
            center: (0.0, 0.0),
            exact: None,
            aspect: (1, 1),
        },
        "bump-metric-perturbed" => Scenario {
            name: "bump-metric-perturbed",
            spec: MetricSpec::new("bump", square, ConformalFactor::Bump { a: 0.25 }),
            boundary: BoundaryData::Poly { cx: 0.1, cy: 0.0, cxy: 0.0, cx2: 0.0, cy2: 0.05 },
            center: (0.0, 0.0),
            exact: None,
            aspect: (1, 1),
        },
        other => {
            return Err(Error::Config(format!(
                "unknown scenario '{other}' (catalog: {})",
                SCENARIO_NAMES.join(", ")
            )))
        }
    };
    Ok(s)
}

impl Scenario {
    /// ny for a requested nx under the scenario aspect ratio.
    pub fn ny_for(&self, nx: usize) -> usize {
        let (num, den) = self.aspect;
        (nx - 1) * num / den + 1
    }

    /// Replaces the chart rectangle, keeping the conformal factor. Expanding
    /// domains for the fixed-r asymptotics are expressed this way.
    pub fn with_chart(mut self, chart: Chart) -> Scenario {
        self.spec.chart = chart;
        self
    }

    pub fn with_boundary(mut self, b: BoundaryData) -> Scenario {
        self.boundary = b;
        // an override invalidates the catalog closed form unless it is the
        // same data again
        if self.exact.is_some() && b != by_name(self.name).unwrap().boundary {
            self.exact = None;
        }
        self
    }

    pub fn with_bump_amplitude(mut self, a: f64) -> Result<Scenario> {
        match self.spec.factor {
            ConformalFactor::Bump { .. } => {
                self.spec.factor = ConformalFactor::Bump { a };
                Ok(self)
            }
            _ => Err(Error::Config(format!(
                "scenario '{}' has no bump amplitude parameter",
                self.name
            ))),
        }
    }
}
