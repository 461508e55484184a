//! Momentum-space solver for the integrable (`h₀ = 0`) chain.
//!
//! After a Jordan–Wigner mapping the translation-invariant Ising drive
//! decouples into independent pseudo-spins, one per momentum pair `±k`.
//! Each evolves under
//!
//! ```text
//! H_{B,k} = 2h_z η_z
//! H_{c,k} = 2J sin k η_y + (2h_z − 2J cos k) η_z,   J = ±J₀
//! ```
//!
//! starting from `|↓⟩` (the fermionic vacuum, i.e. all spins down). One
//! period is an SU(2) rotation `U_k = exp(−i β·η)`, so every stroboscopic
//! observable has a closed form in `β` and `n`.
//!
//! The all-down state has even fermion parity, which on a periodic chain
//! selects antiperiodic fermions: `k = (2m − 1)π/N`, `m = 1..N/2`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::params::DriveParams;
use crate::record::StroboscopicRecord;
use crate::C64;

/// Rotation angles below this are treated as the identity; the axis is
/// numerically meaningless there.
pub const AXIS_EPS: f64 = 1e-9;

/// Sign of the square-pulse coupling during one half period.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PulseSign {
    /// `J = +J₀`, first half.
    Positive,
    /// `J = −J₀`, second half.
    Negative,
}

impl PulseSign {
    pub fn value(self) -> f64 {
        match self {
            PulseSign::Positive => 1.0,
            PulseSign::Negative => -1.0,
        }
    }
}

/// `k_m = (2m − 1)π/N` for `m = 1..N/2`.
pub fn mode_grid(num_sites: usize) -> Result<Vec<f64>> {
    if num_sites < 2 || num_sites % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "momentum grid needs an even number of sites >= 2, got {num_sites}"
        )));
    }
    let n = num_sites as f64;
    Ok((1..=num_sites / 2).map(|m| (2 * m - 1) as f64 * PI / n).collect())
}

/// Pseudo-spin coefficients `(a_y, a_z)` of `H_{c,k}` with `J = sign·J₀`.
pub fn half_pulse_hamiltonian(k: f64, params: &DriveParams, sign: PulseSign) -> (f64, f64) {
    let j = sign.value() * params.j0;
    (2.0 * j * k.sin(), 2.0 * params.h_z - 2.0 * j * k.cos())
}

/// An SU(2) element `w·1 − i (x η_x + y η_y + z η_z)` with
/// `w² + x² + y² + z² = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Su2 {
    pub w: f64,
    pub v: [f64; 3],
}

impl Su2 {
    pub const IDENTITY: Su2 = Su2 { w: 1.0, v: [0.0; 3] };

    /// `exp(−i t (a_y η_y + a_z η_z))`.
    pub fn exp_yz(a_y: f64, a_z: f64, t: f64) -> Su2 {
        let norm = a_y.hypot(a_z);
        if norm == 0.0 {
            return Su2::IDENTITY;
        }
        let phi = norm * t;
        let s = phi.sin() / norm;
        Su2 {
            w: phi.cos(),
            v: [0.0, s * a_y, s * a_z],
        }
    }

    /// `self · rhs` (rhs acts first).
    pub fn compose(&self, rhs: &Su2) -> Su2 {
        let [a1, a2, a3] = self.v;
        let [b1, b2, b3] = rhs.v;
        let dot = a1 * b1 + a2 * b2 + a3 * b3;
        let cross = [a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1];
        Su2 {
            w: self.w * rhs.w - dot,
            v: [
                self.w * b1 + rhs.w * a1 + cross[0],
                self.w * b2 + rhs.w * a2 + cross[1],
                self.w * b3 + rhs.w * a3 + cross[2],
            ],
        }
    }

    /// Row-major 2×2 matrix in the `(|↑⟩, |↓⟩)` basis.
    pub fn matrix(&self) -> [[C64; 2]; 2] {
        let [x, y, z] = self.v;
        [
            [C64::new(self.w, -z), C64::new(-y, -x)],
            [C64::new(y, -x), C64::new(self.w, z)],
        ]
    }

    /// Reads `w` and `v` back from a 2×2 SU(2) matrix via its trace and
    /// Pauli components.
    pub fn from_matrix(m: [[C64; 2]; 2]) -> Su2 {
        Su2 {
            w: 0.5 * (m[0][0] + m[1][1]).re,
            v: [
                -0.5 * (m[0][1] + m[1][0]).im,
                0.5 * (m[1][0] - m[0][1]).re,
                -0.5 * (m[0][0] - m[1][1]).im,
            ],
        }
    }
}

/// Axis-angle form `U = exp(−i β·η)` with `|β| ∈ [0, π]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochRotation {
    pub beta: [f64; 3],
}

impl BlochRotation {
    pub const IDENTITY: BlochRotation = BlochRotation { beta: [0.0; 3] };

    /// Canonical axis-angle of an SU(2) element. The angle comes from
    /// `atan2(|v|, w)`, which stays accurate near `0` and `π`. When `|v|`
    /// is below [`AXIS_EPS`] the rotation is `±1`: `+1` maps to `β = 0`
    /// and `−1` to `β = (0, 0, π)`, both of which store no energy.
    pub fn from_su2(u: &Su2) -> BlochRotation {
        let [x, y, z] = u.v;
        let s = (x * x + y * y + z * z).sqrt();
        if s < AXIS_EPS {
            return if u.w >= 0.0 {
                BlochRotation::IDENTITY
            } else {
                BlochRotation { beta: [0.0, 0.0, PI] }
            };
        }
        let theta = s.atan2(u.w);
        let f = theta / s;
        BlochRotation {
            beta: [f * x, f * y, f * z],
        }
    }

    pub fn angle(&self) -> f64 {
        let [x, y, z] = self.beta;
        (x * x + y * y + z * z).sqrt()
    }

    /// `β_z² / |β|²`; one for the identity.
    pub fn axial_fraction(&self) -> f64 {
        let a = self.angle();
        if a == 0.0 {
            1.0
        } else {
            (self.beta[2] / a).powi(2)
        }
    }

    pub fn to_su2(&self) -> Su2 {
        let a = self.angle();
        if a == 0.0 {
            return Su2::IDENTITY;
        }
        let s = a.sin() / a;
        Su2 {
            w: a.cos(),
            v: [s * self.beta[0], s * self.beta[1], s * self.beta[2]],
        }
    }

    /// `⟨η⟩` after `n` periods from `|↓⟩`: the Bloch vector `−ẑ` rotated
    /// by `2n|β|` about `β̂`.
    pub fn bloch_vector(&self, n: u64) -> [f64; 3] {
        let a = self.angle();
        if a == 0.0 {
            return [0.0, 0.0, -1.0];
        }
        let [nx, ny, nz] = self.beta.map(|b| b / a);
        let phi = n as f64 * a;
        let (s, c) = phi.sin_cos();
        let sin2 = 2.0 * s * c;
        let one_minus_cos2 = 2.0 * s * s;
        [
            -ny * sin2 - nx * nz * one_minus_cos2,
            nx * sin2 - ny * nz * one_minus_cos2,
            -(c * c - s * s) - nz * nz * one_minus_cos2,
        ]
    }
}

/// One-period rotation `U_k = U(second half) · U(first half)`, each half
/// lasting `T/2`.
pub fn compose_floquet_rotation(k: f64, params: &DriveParams) -> BlochRotation {
    BlochRotation::from_su2(&floquet_su2(k, params))
}

/// The same one-period operator before axis-angle extraction.
pub fn floquet_su2(k: f64, params: &DriveParams) -> Su2 {
    let half = 0.5 * params.period();
    let (y1, z1) = half_pulse_hamiltonian(k, params, PulseSign::Positive);
    let (y2, z2) = half_pulse_hamiltonian(k, params, PulseSign::Negative);
    let first = Su2::exp_yz(y1, z1, half);
    let second = Su2::exp_yz(y2, z2, half);
    second.compose(&first)
}

/// `E_k(n) = 4h_z sin²(n|β|)(1 − β_z²/|β|²)`.
pub fn mode_energy(rot: &BlochRotation, n: u64, h_z: f64) -> f64 {
    let a = rot.angle();
    if a == 0.0 {
        return 0.0;
    }
    let s = (n as f64 * a).sin();
    4.0 * h_z * s * s * (1.0 - rot.axial_fraction())
}

/// `(ΔH²_{B,k}, ΔH²_{c,k})` after `n` periods. The charging variance uses
/// the `J = +J₀` half-pulse Hamiltonian, the generator that acts right
/// after the stroboscopic instant.
pub fn mode_variances(rot: &BlochRotation, n: u64, k: f64, params: &DriveParams) -> (f64, f64) {
    let h_z = params.h_z;
    let a = rot.angle();
    let (s, c) = (n as f64 * a).sin_cos();
    let r = rot.axial_fraction();
    let var_b = 16.0 * h_z * h_z * s * s * (1.0 - r) * (c * c + s * s * r);

    let energy = mode_energy(rot, n, h_z);
    let (a_y, a_z) = half_pulse_hamiltonian(k, params, PulseSign::Positive);
    let transverse = if a == 0.0 {
        0.0
    } else {
        let [bx, by, bz] = rot.beta;
        4.0 * params.j0 / a * k.sin() * s * (bx * c - by * bz / a * s)
    };
    let mean = (1.0 - energy / (2.0 * h_z)) * (-a_z) + transverse;
    let var_c = a_y * a_y + a_z * a_z - mean * mean;
    (var_b, var_c)
}

/// `⟨i[H_{c,k}, H_{B,k}]⟩ = −4h_z a_y ⟨η_x⟩` for the `J = +J₀` half.
pub fn mode_power_commutator(rot: &BlochRotation, n: u64, k: f64, params: &DriveParams) -> f64 {
    let (a_y, _) = half_pulse_hamiltonian(k, params, PulseSign::Positive);
    -4.0 * params.h_z * a_y * rot.bloch_vector(n)[0]
}

/// Per-mode quantities at one stroboscopic step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModeObservables {
    pub k: f64,
    pub energy: f64,
    pub var_battery: f64,
    pub var_charging: f64,
    pub power_commutator: f64,
}

/// The momentum modes of a chain with their one-period rotations.
#[derive(Clone, Debug)]
pub struct ModeSet {
    params: DriveParams,
    modes: Vec<(f64, BlochRotation)>,
}

impl ModeSet {
    pub fn new(params: &DriveParams) -> Result<Self> {
        params.validate()?;
        if params.h0 != 0.0 {
            return Err(Error::InvalidParameter(format!(
                "the momentum-space solver requires h0 = 0, got {}",
                params.h0
            )));
        }
        let modes = mode_grid(params.num_sites)?
            .into_iter()
            .map(|k| (k, compose_floquet_rotation(k, params)))
            .collect();
        Ok(Self {
            params: *params,
            modes,
        })
    }

    pub fn params(&self) -> &DriveParams {
        &self.params
    }

    pub fn rotations(&self) -> &[(f64, BlochRotation)] {
        &self.modes
    }

    pub fn mode_observables(&self, n: u64) -> Vec<ModeObservables> {
        self.modes
            .iter()
            .map(|&(k, rot)| {
                let (var_battery, var_charging) = mode_variances(&rot, n, k, &self.params);
                ModeObservables {
                    k,
                    energy: mode_energy(&rot, n, self.params.h_z),
                    var_battery,
                    var_charging,
                    power_commutator: mode_power_commutator(&rot, n, k, &self.params),
                }
            })
            .collect()
    }

    /// Whole-chain record; modes are summed in ascending `k`.
    pub fn observables(&self, n: u64) -> Result<StroboscopicRecord> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "power is undefined at n = 0".into(),
            ));
        }
        let (mut e, mut vb, mut vc, mut comm) = (0.0, 0.0, 0.0, 0.0);
        for m in self.mode_observables(n) {
            e += m.energy;
            vb += m.var_battery;
            vc += m.var_charging;
            comm += m.power_commutator;
        }
        Ok(StroboscopicRecord::assemble(n, self.params.period(), e, vb, vc, comm))
    }
}

/// Summed observables of the chain after `n ≥ 1` periods.
pub fn chain_observables(params: &DriveParams, n: u64) -> Result<StroboscopicRecord> {
    ModeSet::new(params)?.observables(n)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepPoint {
    pub omega: f64,
    pub record: StroboscopicRecord,
}

/// One record per drive frequency, ordered by ascending `ω`.
pub fn frequency_sweep(params: &DriveParams, omegas: &[f64], n: u64) -> Result<Vec<SweepPoint>> {
    if omegas.is_empty() {
        return Err(Error::InvalidParameter("empty frequency grid".into()));
    }
    let mut sorted = omegas.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted
        .into_iter()
        .map(|omega| {
            let record = chain_observables(&params.with_omega(omega), n)?;
            Ok(SweepPoint { omega, record })
        })
        .collect()
}

/// Kind of degeneracy of the boundary modes `k = 0, π`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Resonance {
    /// `U_{k=0} = U_{k=π} = 1` at `ω = 2h_z/p`.
    Identity,
    /// `U_{k=0} = U_{k=π} = −1` at `ω = 4h_z/(2p + 1)`.
    MinusIdentity,
}

/// Resonant frequencies inside `[omega_min, omega_max]`, ascending.
pub fn resonance_frequencies(h_z: f64, omega_min: f64, omega_max: f64) -> Vec<(f64, Resonance)> {
    let mut out = Vec::new();
    if omega_min <= 0.0 || omega_max < omega_min {
        return out;
    }
    let p_max = (4.0 * h_z / omega_min).ceil() as u64 + 1;
    for p in 1..=p_max {
        let w = 2.0 * h_z / p as f64;
        if (omega_min..=omega_max).contains(&w) {
            out.push((w, Resonance::Identity));
        }
    }
    for p in 0..=p_max {
        let w = 4.0 * h_z / (2 * p + 1) as f64;
        if (omega_min..=omega_max).contains(&w) {
            out.push((w, Resonance::MinusIdentity));
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// `max |U_k − s·1|` over the matrix entries, `s = ±1`.
pub fn distance_from_scalar(u: &Su2, scalar: f64) -> f64 {
    let m = u.matrix();
    let mut d = 0.0f64;
    for (i, row) in m.iter().enumerate() {
        for (j, z) in row.iter().enumerate() {
            let target = if i == j { scalar } else { 0.0 };
            d = d.max((z - target).norm());
        }
    }
    d
}
