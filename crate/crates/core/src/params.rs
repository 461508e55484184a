//! Physical parameters of the driven chain.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Default largest chain handled densely (dimension 2¹⁴ = 16384).
pub const DEFAULT_MAX_SITES: usize = 14;

/// Environment variable overriding [`DEFAULT_MAX_SITES`].
pub const MAX_SITES_ENV: &str = "QBATTERY_MAX_N";

/// Couplings and drive of the square-pulse protocol.
///
/// `j0` and `h0` are the amplitudes of the Ising coupling and of the
/// longitudinal field; both flip sign at half period.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DriveParams {
    pub h_z: f64,
    pub j0: f64,
    pub h0: f64,
    pub omega: f64,
    pub num_sites: usize,
}

impl DriveParams {
    pub fn new(h_z: f64, j0: f64, h0: f64, omega: f64, num_sites: usize) -> Self {
        Self {
            h_z,
            j0,
            h0,
            omega,
            num_sites,
        }
    }

    /// Drive period `T = 2π/ω`.
    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega
    }

    pub fn with_omega(self, omega: f64) -> Self {
        Self { omega, ..self }
    }

    pub fn with_sites(self, num_sites: usize) -> Self {
        Self { num_sites, ..self }
    }

    /// Checks shared by every engine: finite couplings, `ω > 0`, `h_z > 0`.
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("h_z", self.h_z), ("j0", self.j0), ("h0", self.h0), ("omega", self.omega)] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be finite, got {v}")));
            }
        }
        if self.omega <= 0.0 {
            return Err(Error::InvalidParameter(format!("omega must be positive, got {}", self.omega)));
        }
        if self.h_z <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "h_z must be positive so that all-down is the battery ground state, got {}",
                self.h_z
            )));
        }
        if self.num_sites == 0 {
            return Err(Error::InvalidParameter("chain needs at least one site".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Boundary {
    Open,
    Periodic,
}

impl Boundary {
    pub fn as_str(self) -> &'static str {
        match self {
            Boundary::Open => "open",
            Boundary::Periodic => "periodic",
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "open" => Ok(Boundary::Open),
            "periodic" => Ok(Boundary::Periodic),
            other => Err(Error::InvalidParameter(format!("unknown boundary '{other}'"))),
        }
    }
}

/// A chain for the exact-diagonalization engine.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChainSpec {
    pub params: DriveParams,
    pub boundary: Boundary,
}

impl ChainSpec {
    pub fn new(params: DriveParams, boundary: Boundary) -> Self {
        Self { params, boundary }
    }

    pub fn num_sites(&self) -> usize {
        self.params.num_sites
    }

    pub fn with_sites(self, num_sites: usize) -> Self {
        Self {
            params: self.params.with_sites(num_sites),
            ..self
        }
    }

    pub fn with_omega(self, omega: f64) -> Self {
        Self {
            params: self.params.with_omega(omega),
            ..self
        }
    }

    /// Open chains need two sites, periodic ones three so that the
    /// wraparound bond is not a duplicate of the bulk bond.
    pub fn validate(&self, guard: SizeGuard) -> Result<()> {
        self.params.validate()?;
        let n = self.num_sites();
        let min = match self.boundary {
            Boundary::Open => 2,
            Boundary::Periodic => 3,
        };
        if n < min {
            return Err(Error::InvalidParameter(format!(
                "{} chain needs at least {min} sites, got {n}",
                self.boundary
            )));
        }
        guard.check(n)
    }
}

/// Upper limit on the number of sites materialized as dense `2^N` matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SizeGuard {
    pub max_sites: usize,
}

impl SizeGuard {
    pub fn new(max_sites: usize) -> Self {
        Self { max_sites }
    }

    /// Reads `QBATTERY_MAX_N`, falling back to [`DEFAULT_MAX_SITES`].
    pub fn from_env() -> Self {
        let max_sites = std::env::var(MAX_SITES_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_MAX_SITES);
        Self { max_sites }
    }

    pub fn check(&self, sites: usize) -> Result<()> {
        if sites > self.max_sites {
            Err(Error::SizeGuard {
                sites,
                max: self.max_sites,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for SizeGuard {
    fn default() -> Self {
        Self::from_env()
    }
}
