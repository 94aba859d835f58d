//! Flat key-value experiment configs. The canonical text form produced by
//! [`ExperimentConfig::render`] re-parses to an equal config, so a report can
//! echo its config verbatim.

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::scenario::{by_name, BoundaryData, Scenario};

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub scenario: String,
    /// Chart rectangle override: x0 x1 y0 y1.
    pub chart: Option<[f64; 4]>,
    /// Bump amplitude override; only legal for the bump scenario.
    pub bump_a: Option<f64>,
    pub boundary: Option<BoundaryData>,
    /// Grid size for `run` and `sweep`.
    pub resolution: usize,
    /// Grid sizes for `converge`, strictly increasing.
    pub resolutions: Vec<usize>,
    /// Disc center in chart coordinates; the harness snaps it to the
    /// nearest node. Defaults to the scenario center.
    pub center: Option<(f64, f64)>,
    /// Explicit (r, R) pairs; empty means derive a sweep grid from the
    /// available radius.
    pub pairs: Vec<(f64, f64)>,
    pub residual_tol: f64,
    /// Pointwise tolerance factor: tol_pt = factor · (Laplacian identity
    /// residual sup).
    pub tol_pt_factor: f64,
    pub out_dir: Option<String>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            scenario: "flat-plane".to_string(),
            chart: None,
            bump_a: None,
            boundary: None,
            resolution: 65,
            resolutions: vec![33, 65, 129],
            center: None,
            pairs: Vec::new(),
            residual_tol: 1e-10,
            tol_pt_factor: 10.0,
            out_dir: None,
        }
    }
}

impl ExperimentConfig {
    pub fn named(scenario: &str) -> Self {
        ExperimentConfig { scenario: scenario.to_string(), ..Default::default() }
    }

    /// Canonical text form. Every field is written, one `key = value` per
    /// line; floats print in shortest round-trip form.
    pub fn render(&self) -> String {
        let mut s = String::new();
        s.push_str("[scenario]\n");
        s.push_str(&format!("name = {}\n", self.scenario));
        if let Some(c) = self.chart {
            s.push_str(&format!("chart = {} {} {} {}\n", c[0], c[1], c[2], c[3]));
        }
        if let Some(a) = self.bump_a {
            s.push_str(&format!("bump_a = {a}\n"));
        }
        if let Some(b) = &self.boundary {
            s.push_str(&format!("boundary = {}\n", b.render()));
        }
        s.push_str("\n[grid]\n");
        s.push_str(&format!("resolution = {}\n", self.resolution));
        let rs: Vec<String> = self.resolutions.iter().map(|r| r.to_string()).collect();
        s.push_str(&format!("resolutions = {}\n", rs.join(" ")));
        s.push_str("\n[discs]\n");
        if let Some((x, y)) = self.center {
            s.push_str(&format!("center = {x} {y}\n"));
        }
        if !self.pairs.is_empty() {
            let ps: Vec<String> =
                self.pairs.iter().map(|(r, rr)| format!("{r} {rr}")).collect();
            s.push_str(&format!("pairs = {}\n", ps.join("  ")));
        }
        s.push_str("\n[tolerances]\n");
        s.push_str(&format!("residual = {}\n", self.residual_tol));
        s.push_str(&format!("tol_pt_factor = {}\n", self.tol_pt_factor));
        if let Some(d) = &self.out_dir {
            s.push_str("\n[output]\n");
            s.push_str(&format!("dir = {d}\n"));
        }
        s
    }

    pub fn parse(text: &str) -> Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::default();
        let mut saw_name = false;
        let mut section = String::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| Error::Config(format!("line {}: unclosed section", lineno + 1)))?;
                section = name.trim().to_string();
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
            let key = key.trim();
            let value = value.trim();
            let ctx = |e: String| Error::Config(format!("line {}: {key}: {e}", lineno + 1));
            match (section.as_str(), key) {
                ("scenario", "name") => {
                    cfg.scenario = value.to_string();
                    saw_name = true;
                }
                ("scenario", "chart") => {
                    let v = parse_floats(value).map_err(ctx)?;
                    if v.len() != 4 {
                        return Err(ctx(format!("need 4 numbers, got {}", v.len())));
                    }
                    cfg.chart = Some([v[0], v[1], v[2], v[3]]);
                }
                ("scenario", "bump_a") => {
                    cfg.bump_a = Some(value.parse().map_err(|e| ctx(format!("{e}")))?)
                }
                ("scenario", "boundary") => cfg.boundary = Some(BoundaryData::parse(value)?),
                ("grid", "resolution") => {
                    cfg.resolution = value.parse().map_err(|e| ctx(format!("{e}")))?
                }
                ("grid", "resolutions") => {
                    cfg.resolutions = value
                        .split_whitespace()
                        .map(|t| t.parse::<usize>().map_err(|e| ctx(format!("{e}"))))
                        .collect::<Result<_>>()?;
                }
                ("discs", "center") => {
                    let v = parse_floats(value).map_err(ctx)?;
                    if v.len() != 2 {
                        return Err(ctx(format!("need 2 numbers, got {}", v.len())));
                    }
                    cfg.center = Some((v[0], v[1]));
                }
                ("discs", "pairs") => {
                    let v = parse_floats(value).map_err(ctx)?;
                    if v.is_empty() || v.len() % 2 != 0 {
                        return Err(ctx("need an even, nonzero count of numbers".into()));
                    }
                    cfg.pairs = v.chunks(2).map(|c| (c[0], c[1])).collect();
                }
                ("tolerances", "residual") => {
                    cfg.residual_tol = value.parse().map_err(|e| ctx(format!("{e}")))?
                }
                ("tolerances", "tol_pt_factor") => {
                    cfg.tol_pt_factor = value.parse().map_err(|e| ctx(format!("{e}")))?
                }
                ("output", "dir") => cfg.out_dir = Some(value.to_string()),
                _ => {
                    return Err(Error::Config(format!(
                        "line {}: unknown key '{key}' in section [{section}]",
                        lineno + 1
                    )))
                }
            }
        }
        if !saw_name {
            return Err(Error::Config("missing [scenario] name".into()));
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<ExperimentConfig> {
        let text = std::fs::read_to_string(path)?;
        ExperimentConfig::parse(&text)
    }

    pub fn validate(&self) -> Result<()> {
        by_name(&self.scenario)?;
        if self.bump_a.is_some() && self.scenario != "bump-metric-perturbed" {
            return Err(Error::Config(format!(
                "bump_a set but scenario '{}' has no bump parameter",
                self.scenario
            )));
        }
        if let Some(c) = self.chart {
            if !(c[0] < c[1] && c[2] < c[3]) {
                return Err(Error::Config("chart extents must satisfy x0 < x1, y0 < y1".into()));
            }
        }
        if self.resolution < 9 {
            return Err(Error::Config(format!("resolution {} < 9", self.resolution)));
        }
        if self.resolutions.is_empty() {
            return Err(Error::Config("resolutions list is empty".into()));
        }
        if !self.resolutions.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Config("resolutions must be strictly increasing".into()));
        }
        if self.resolutions[0] < 9 {
            return Err(Error::Config(format!("resolution {} < 9", self.resolutions[0])));
        }
        for &(r, rr) in &self.pairs {
            if !(r > 0.0 && r < rr) {
                return Err(Error::Config(format!("radii pair ({r}, {rr}) needs 0 < r < R")));
            }
        }
        if !(self.residual_tol > 0.0) {
            return Err(Error::Config("residual tolerance must be positive".into()));
        }
        if !(self.tol_pt_factor > 0.0) {
            return Err(Error::Config("tol_pt_factor must be positive".into()));
        }
        Ok(())
    }

    /// Catalog scenario with the config's overrides applied.
    pub fn scenario(&self) -> Result<Scenario> {
        let mut s = by_name(&self.scenario)?;
        if let Some(a) = self.bump_a {
            s = s.with_bump_amplitude(a)?;
        }
        if let Some(c) = self.chart {
            s = s.with_chart(Chart::new(c[0], c[1], c[2], c[3]));
        }
        if let Some(b) = self.boundary {
            s = s.with_boundary(b);
        }
        Ok(s)
    }
}

fn parse_floats(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split_whitespace().map(|t| t.parse::<f64>().map_err(|e| format!("'{t}': {e}"))).collect()
}
