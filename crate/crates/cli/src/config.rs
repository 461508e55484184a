//! Experiment configuration files (TOML).

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use qbattery_core::{Boundary, ChainSpec, DriveParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    SweepFrequency,
    BandwidthScan,
    PowerScaling,
    MagnusCheck,
    StroboscopicTrace,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 5] = [
        ExperimentKind::SweepFrequency,
        ExperimentKind::BandwidthScan,
        ExperimentKind::PowerScaling,
        ExperimentKind::MagnusCheck,
        ExperimentKind::StroboscopicTrace,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::SweepFrequency => "sweep-frequency",
            ExperimentKind::BandwidthScan => "bandwidth-scan",
            ExperimentKind::PowerScaling => "power-scaling",
            ExperimentKind::MagnusCheck => "magnus-check",
            ExperimentKind::StroboscopicTrace => "stroboscopic-trace",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown experiment '{s}'"))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    Integrable,
    #[default]
    Ed,
    Both,
}

impl Engine {
    pub fn uses_integrable(self) -> bool {
        matches!(self, Engine::Integrable | Engine::Both)
    }

    pub fn uses_ed(self) -> bool {
        matches!(self, Engine::Ed | Engine::Both)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryName {
    Open,
    #[default]
    Periodic,
}

impl From<BoundaryName> for Boundary {
    fn from(b: BoundaryName) -> Self {
        match b {
            BoundaryName::Open => Boundary::Open,
            BoundaryName::Periodic => Boundary::Periodic,
        }
    }
}

/// Couplings shared by every grid point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    pub h_z: f64,
    pub j0: f64,
    #[serde(default)]
    pub h0: f64,
    /// Used when the experiment has no frequency grid.
    pub omega: Option<f64>,
    /// Used when the experiment has no site grid.
    pub num_sites: Option<usize>,
}

/// `ω` values, either listed or uniformly spaced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OmegaGrid {
    List(Vec<f64>),
    Range { min: f64, max: f64, count: usize },
}

impl OmegaGrid {
    pub fn values(&self) -> Vec<f64> {
        match *self {
            OmegaGrid::List(ref v) => v.clone(),
            OmegaGrid::Range { min, max, count } => match count {
                0 => Vec::new(),
                1 => vec![min],
                _ => {
                    let step = (max - min) / (count - 1) as f64;
                    (0..count).map(|i| min + step * i as f64).collect()
                }
            },
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub omega: Option<OmegaGrid>,
    pub sites: Option<Vec<usize>>,
    /// Drive periods for `magnus-check`.
    pub periods: Option<Vec<f64>>,
    /// Magnus orders for `magnus-check`; defaults to all four.
    pub orders: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default)]
    pub engine: Engine,
    #[serde(default)]
    pub boundary: BoundaryName,
    pub params: ParamsConfig,
    #[serde(default)]
    pub grid: GridConfig,
    /// Stroboscopic step for `sweep-frequency`.
    pub n: Option<u64>,
    /// Horizon for `power-scaling` and `stroboscopic-trace`.
    pub n_max: Option<u64>,
    /// `bandwidth-scan` fits only chains whose width stays below this
    /// fraction of `2π/T`.
    pub saturation_fraction: Option<f64>,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
}

pub const DEFAULT_N: u64 = 100;
pub const DEFAULT_SATURATION_FRACTION: f64 = 0.9;

#[derive(Debug)]
pub enum LoadError {
    Io(PathBuf, std::io::Error),
    Parse(String),
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoadError::Io(p, e) => write!(f, "cannot read {}: {e}", p.display()),
            LoadError::Parse(e) => write!(f, "invalid config: {e}"),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, LoadError> {
        toml::from_str(text).map_err(|e| LoadError::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, LoadError> {
        let text = std::fs::read_to_string(path).map_err(|e| LoadError::Io(path.to_path_buf(), e))?;
        Self::from_toml(&text)
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary.into()
    }

    pub fn omegas(&self) -> Vec<f64> {
        match (&self.grid.omega, self.params.omega) {
            (Some(g), _) => g.values(),
            (None, Some(w)) => vec![w],
            (None, None) => Vec::new(),
        }
    }

    pub fn sites(&self) -> Vec<usize> {
        match (&self.grid.sites, self.params.num_sites) {
            (Some(s), _) => s.clone(),
            (None, Some(n)) => vec![n],
            (None, None) => Vec::new(),
        }
    }

    pub fn orders(&self) -> Vec<usize> {
        self.grid.orders.clone().unwrap_or_else(|| vec![0, 1, 2, 3])
    }

    pub fn n(&self) -> u64 {
        self.n.unwrap_or(DEFAULT_N)
    }

    pub fn n_max(&self) -> u64 {
        self.n_max.unwrap_or(qbattery_core::floquet::DEFAULT_N_MAX)
    }

    pub fn saturation_fraction(&self) -> f64 {
        self.saturation_fraction.unwrap_or(DEFAULT_SATURATION_FRACTION)
    }

    pub fn chain(&self, num_sites: usize, omega: f64) -> ChainSpec {
        let p = &self.params;
        ChainSpec::new(DriveParams::new(p.h_z, p.j0, p.h0, omega, num_sites), self.boundary())
    }

    /// Every problem with the config, in a stable order.
    pub fn validate(&self) -> Vec<String> {
        let mut v = Vec::new();
        let p = &self.params;
        for (name, x) in [("h_z", p.h_z), ("j0", p.j0), ("h0", p.h0)] {
            if !x.is_finite() {
                v.push(format!("params.{name} must be finite"));
            }
        }
        if !(p.h_z > 0.0) {
            v.push("params.h_z must be positive".into());
        }
        if let Some(w) = p.omega {
            if !(w > 0.0 && w.is_finite()) {
                v.push("params.omega must be positive".into());
            }
        }
        if let Some(OmegaGrid::Range { min, max, count }) = self.grid.omega {
            if count == 0 {
                v.push("grid.omega is empty".into());
            }
            if !(min <= max) {
                v.push("grid.omega.min exceeds grid.omega.max".into());
            }
        }
        if let Some(w) = self.workers {
            if w == 0 {
                v.push("workers must be at least 1".into());
            }
        }
        if self.n == Some(0) {
            v.push("n must be at least 1".into());
        }
        if self.n_max == Some(0) {
            v.push("n_max must be at least 1".into());
        }

        let kind = self.experiment;
        let needs_omega = kind != ExperimentKind::MagnusCheck;
        let omegas = self.omegas();
        if needs_omega {
            if omegas.is_empty() {
                v.push("frequency grid is empty (set grid.omega or params.omega)".into());
            }
            if omegas.iter().any(|w| !(*w > 0.0 && w.is_finite())) {
                v.push("every omega must be positive".into());
            }
        }
        let sites = self.sites();
        if sites.is_empty() {
            v.push("site grid is empty (set grid.sites or params.num_sites)".into());
        }
        let min_sites = match self.boundary {
            BoundaryName::Open => 2,
            BoundaryName::Periodic => 3,
        };

        if self.engine.uses_integrable() {
            if !matches!(kind, ExperimentKind::SweepFrequency | ExperimentKind::StroboscopicTrace) {
                v.push(format!("engine 'integrable' is not available for {kind}"));
            }
            if p.h0 != 0.0 {
                v.push("engine 'integrable' requires h0 = 0".into());
            }
            if self.boundary == BoundaryName::Open {
                v.push("engine 'integrable' requires periodic boundary".into());
            }
            for &n in &sites {
                if n < 2 || n % 2 != 0 {
                    v.push(format!("engine 'integrable' requires an even site count >= 2, got {n}"));
                }
            }
        }
        if self.engine.uses_ed() {
            for &n in &sites {
                if n < min_sites {
                    v.push(format!("{} chain needs at least {min_sites} sites, got {n}", self.boundary()));
                }
            }
        }

        match kind {
            ExperimentKind::SweepFrequency => {}
            ExperimentKind::StroboscopicTrace => {}
            ExperimentKind::BandwidthScan => {
                let f = self.saturation_fraction();
                if !(f > 0.0 && f <= 1.0) {
                    v.push("saturation_fraction must lie in (0, 1]".into());
                }
            }
            ExperimentKind::PowerScaling => {
                if sites.len() < 3 {
                    v.push("power-scaling needs at least 3 site counts".into());
                }
                if sites.iter().any(|&n| n < 1) {
                    v.push("site counts must be positive".into());
                }
            }
            ExperimentKind::MagnusCheck => {
                match &self.grid.periods {
                    None => v.push("magnus-check needs grid.periods".into()),
                    Some(t) if t.is_empty() => v.push("grid.periods is empty".into()),
                    Some(t) => {
                        if t.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
                            v.push("every period must be positive".into());
                        }
                    }
                }
                let orders = self.orders();
                if orders.is_empty() {
                    v.push("grid.orders is empty".into());
                }
                if orders.iter().any(|&o| o > qbattery_core::magnus::MAX_ORDER) {
                    v.push("Magnus orders must lie in 0..=3".into());
                }
                if self.boundary == BoundaryName::Open && orders.iter().any(|&o| o >= 2) {
                    v.push("Magnus orders 2 and 3 require periodic boundary".into());
                }
            }
        }
        v
    }
}
