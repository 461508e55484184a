//! Exact diagonalization of the driven chain.

use std::f64::consts::PI;

use ndarray::{Array1, Array2};

use crate::dense::{diagonal_of, materialize, DenseOperator, StateVector};
use crate::error::{Error, Result};
use crate::fit::{power_law_fit, LinearFit};
use crate::linalg::{self, hermitian_eig, unitary_eig, HermitianEigen, UnitaryEigen};
use crate::params::{ChainSpec, SizeGuard};
use crate::pauli::{Pauli, PauliStringOperator};
use crate::record::StroboscopicRecord;
use crate::C64;

/// Default horizon for power maximization.
pub const DEFAULT_N_MAX: u64 = 200;

/// `H_B`, `H₁` and `H₂` of a chain, as Pauli sums.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainHamiltonians {
    pub battery: PauliStringOperator,
    pub first: PauliStringOperator,
    pub second: PauliStringOperator,
}

/// Bonds run over `j = 1..N−1` (open) or `j = 1..N` with wraparound
/// (periodic). `H₁ + H₂ = 2 H_B` holds term by term.
pub fn build_hamiltonians(spec: &ChainSpec) -> Result<ChainHamiltonians> {
    spec.params.validate()?;
    spec.validate(SizeGuard::new(usize::MAX))?;
    let n = spec.num_sites();
    let p = &spec.params;
    let mut battery = PauliStringOperator::new(n);
    battery.add_site_sum(p.h_z, &[Pauli::Z], spec.boundary)?;
    let mut drive = PauliStringOperator::new(n);
    drive.add_site_sum(p.j0, &[Pauli::X, Pauli::X], spec.boundary)?;
    drive.add_site_sum(p.h0, &[Pauli::X], spec.boundary)?;
    let mut first = battery.clone();
    first.add_scaled(1.0, &drive)?;
    let mut second = battery.clone();
    second.add_scaled(-1.0, &drive)?;
    Ok(ChainHamiltonians {
        battery,
        first,
        second,
    })
}

/// `Π = ⊗ⱼ σᶻⱼ` as a diagonal.
pub fn parity_diagonal(num_sites: usize) -> Vec<f64> {
    (0..1usize << num_sites)
        .map(|b| if b.count_ones() % 2 == 0 { 1.0 } else { -1.0 })
        .collect()
}

/// One-site cyclic shift `j → j + 1 (mod N)` as a permutation matrix.
pub fn translation_operator(num_sites: usize, guard: SizeGuard) -> Result<DenseOperator> {
    guard.check(num_sites)?;
    let dim = 1usize << num_sites;
    let mut m = Array2::<C64>::zeros((dim, dim));
    for b in 0..dim {
        let shifted = (b >> 1) | ((b & 1) << (num_sites - 1));
        m[[shifted, b]] = C64::new(1.0, 0.0);
    }
    DenseOperator::from_array(m)
}

/// Observables of a state against a fixed battery and charging Hamiltonian.
struct Observer<'a> {
    battery_diag: &'a [f64],
    charging: &'a DenseOperator,
    offset: f64,
}

impl Observer<'_> {
    fn record(&self, n: u64, period: f64, psi: &StateVector) -> StroboscopicRecord {
        let mut mean_b = 0.0;
        let mut sq_b = 0.0;
        for (z, &d) in psi.0.iter().zip(self.battery_diag) {
            let w = z.norm_sqr();
            mean_b += w * d;
            sq_b += w * d * d;
        }
        let h1_psi = self.charging.apply(psi);
        let mean_c = psi.inner(&h1_psi).re;
        let sq_c = h1_psi.norm().powi(2);
        // ⟨i[H₁, H_B]⟩ = −2 Im⟨H₁ψ|H_B ψ⟩
        let cross = h1_psi
            .0
            .iter()
            .zip(psi.0.iter().zip(self.battery_diag))
            .fold(C64::new(0.0, 0.0), |acc, (a, (b, &d))| acc + a.conj() * b * d);
        StroboscopicRecord::assemble(
            n,
            period,
            mean_b + self.offset,
            sq_b - mean_b * mean_b,
            sq_c - mean_c * mean_c,
            -2.0 * cross.im,
        )
    }
}

/// The one-period evolution of a chain together with its Floquet
/// Hamiltonian and eigensystem.
#[derive(Clone, Debug)]
pub struct FloquetSystem {
    pub spec: ChainSpec,
    pub h_b: DenseOperator,
    pub h1: DenseOperator,
    pub h2: DenseOperator,
    pub u_f: DenseOperator,
    pub h_f: DenseOperator,
    pub eig_uf: UnitaryEigen,
    pub psi0: StateVector,
    battery_diag: Vec<f64>,
}

impl FloquetSystem {
    /// `U_F = exp(−iH₂T/2) exp(−iH₁T/2)` and `H_F = (i/T) ln U_F`.
    pub fn new(spec: &ChainSpec) -> Result<Self> {
        Self::with_guard(spec, SizeGuard::from_env())
    }

    pub fn with_guard(spec: &ChainSpec, guard: SizeGuard) -> Result<Self> {
        spec.validate(guard)?;
        let hams = build_hamiltonians(spec)?;
        let h_b = materialize(&hams.battery, guard)?;
        let h1 = materialize(&hams.first, guard)?;
        let h2 = materialize(&hams.second, guard)?;
        let half = 0.5 * spec.params.period();
        let u1 = hermitian_eig(&h1)?.propagator(half);
        let u2 = hermitian_eig(&h2)?.propagator(half);
        let u_f = u2.matmul(&u1);
        let eig_uf = unitary_eig(&u_f)?;
        let h_f = linalg::log_from_eigen(&eig_uf, spec.params.period());
        Ok(Self {
            spec: *spec,
            battery_diag: diagonal_of(&hams.battery)?,
            psi0: StateVector::all_down(spec.num_sites()),
            h_b,
            h1,
            h2,
            u_f,
            h_f,
            eig_uf,
        })
    }

    pub fn period(&self) -> f64 {
        self.spec.params.period()
    }

    pub fn battery_diagonal(&self) -> &[f64] {
        &self.battery_diag
    }

    /// Quasi-energies in `(−π/T, π/T]`, Schur order.
    pub fn quasi_energies(&self) -> Vec<f64> {
        self.eig_uf.quasi_energies(self.period())
    }

    fn observer(&self) -> Observer<'_> {
        Observer {
            battery_diag: &self.battery_diag,
            charging: &self.h1,
            offset: self.spec.num_sites() as f64 * self.spec.params.h_z,
        }
    }

    /// `|ψ(n)⟩ = U_Fⁿ|ψ₀⟩` for `n = 0..=n_max`.
    pub fn states(&self, n_max: u64) -> Vec<StateVector> {
        let coords = self.eig_uf.coordinates(&self.psi0);
        let phases = self.eig_uf.eigenphases();
        (0..=n_max)
            .map(|n| self.eig_uf.power_apply(&coords, &phases, n))
            .collect()
    }

    /// Records for `n = 1..=n_max`.
    pub fn stroboscopic_series(&self, n_max: u64) -> Result<Vec<StroboscopicRecord>> {
        if n_max == 0 {
            return Err(Error::InvalidParameter("n_max must be at least 1".into()));
        }
        let coords = self.eig_uf.coordinates(&self.psi0);
        let phases = self.eig_uf.eigenphases();
        let obs = self.observer();
        let period = self.period();
        Ok((1..=n_max)
            .map(|n| obs.record(n, period, &self.eig_uf.power_apply(&coords, &phases, n)))
            .collect())
    }

    /// Spread of the quasi-energy spectrum.
    pub fn bandwidth(&self) -> f64 {
        let q = self.quasi_energies();
        let max = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = q.iter().copied().fold(f64::INFINITY, f64::min);
        max - min
    }

    /// `(n*, P*)` over `n = 1..=n_max`.
    pub fn max_power(&self, n_max: u64) -> Result<(u64, f64)> {
        let records = self.stroboscopic_series(n_max)?;
        Ok(argmax_power(records.iter().map(|r| (r.n, r.power))))
    }
}

/// Powers closer than this (relative) count as ties.
pub const POWER_TIE_TOL: f64 = 1e-12;

/// Ties resolve to the earliest step.
fn argmax_power(powers: impl Iterator<Item = (u64, f64)>) -> (u64, f64) {
    let mut best: Option<(u64, f64)> = None;
    for (n, p) in powers {
        match best {
            Some((_, b)) if p <= b + POWER_TIE_TOL * b.abs().max(1.0) => {}
            _ => best = Some((n, p)),
        }
    }
    best.unwrap_or((1, 0.0))
}

/// Half-period propagation for large chains. `H₁` and `H₂` do not depend
/// on `ω`, so one pair of eigensystems serves every drive frequency and
/// the Floquet operator itself is never diagonalized.
pub struct DrivenChain {
    spec: ChainSpec,
    first: HalfStep,
    second: HalfStep,
    battery_diag: Vec<f64>,
}

struct HalfStep {
    eigenvalues: Vec<f64>,
    vectors: Array2<C64>,
    adjoint: Array2<C64>,
}

impl HalfStep {
    fn new(eig: HermitianEigen) -> Self {
        let adjoint = eig.eigenvectors.t().mapv(|z| z.conj());
        Self {
            eigenvalues: eig.eigenvalues,
            vectors: eig.eigenvectors,
            adjoint,
        }
    }

    fn apply(&self, psi: &Array1<C64>, phases: &[C64]) -> Array1<C64> {
        let mut c = self.adjoint.dot(psi);
        for (z, p) in c.iter_mut().zip(phases) {
            *z *= p;
        }
        self.vectors.dot(&c)
    }

    fn phases(&self, t: f64) -> Vec<C64> {
        self.eigenvalues
            .iter()
            .map(|&l| C64::from_polar(1.0, -l * t))
            .collect()
    }
}

impl DrivenChain {
    /// The drive frequency in `spec` is ignored.
    pub fn new(spec: &ChainSpec) -> Result<Self> {
        let guard = SizeGuard::from_env();
        spec.validate(guard)?;
        let hams = build_hamiltonians(spec)?;
        let first = HalfStep::new(hermitian_eig(&materialize(&hams.first, guard)?)?);
        let second = HalfStep::new(hermitian_eig(&materialize(&hams.second, guard)?)?);
        Ok(Self {
            spec: *spec,
            first,
            second,
            battery_diag: diagonal_of(&hams.battery)?,
        })
    }

    /// Stored energy `E(n)` for `n = 1..=n_max` at drive frequency `omega`.
    pub fn energies(&self, omega: f64, n_max: u64) -> Result<Vec<f64>> {
        let spec = self.spec.with_omega(omega);
        spec.params.validate()?;
        let half = 0.5 * spec.params.period();
        let p1 = self.first.phases(half);
        let p2 = self.second.phases(half);
        let offset = spec.num_sites() as f64 * spec.params.h_z;
        let mut psi = StateVector::all_down(spec.num_sites()).0;
        let mut out = Vec::with_capacity(n_max as usize);
        for _ in 0..n_max {
            psi = self.second.apply(&self.first.apply(&psi, &p1), &p2);
            let e: f64 = psi
                .iter()
                .zip(&self.battery_diag)
                .map(|(z, d)| z.norm_sqr() * d)
                .sum();
            out.push(e + offset);
        }
        Ok(out)
    }

    pub fn max_power(&self, omega: f64, n_max: u64) -> Result<(u64, f64)> {
        if n_max == 0 {
            return Err(Error::InvalidParameter("n_max must be at least 1".into()));
        }
        let period = 2.0 * PI / omega;
        let e = self.energies(omega, n_max)?;
        Ok(argmax_power(
            e.into_iter()
                .enumerate()
                .map(|(i, e)| ((i + 1) as u64, e / ((i + 1) as f64 * period))),
        ))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalingRow {
    pub num_sites: usize,
    pub n_star: u64,
    pub p_star: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PowerScaling {
    pub omega: f64,
    pub rows: Vec<ScalingRow>,
    /// Log-log fit; `slope` is the exponent.
    pub fit: LinearFit,
}

/// Maximum power versus chain length at the template's drive frequency.
pub fn power_scaling(template: &ChainSpec, sizes: &[usize], n_max: u64) -> Result<PowerScaling> {
    let mut out = power_scaling_frequencies(template, sizes, &[template.params.omega], n_max)?;
    Ok(out.remove(0))
}

/// [`power_scaling`] for several frequencies, diagonalizing each chain
/// length once.
pub fn power_scaling_frequencies(
    template: &ChainSpec,
    sizes: &[usize],
    omegas: &[f64],
    n_max: u64,
) -> Result<Vec<PowerScaling>> {
    if sizes.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "power-law fit needs at least 3 chain lengths, got {}",
            sizes.len()
        )));
    }
    if omegas.is_empty() {
        return Err(Error::InvalidParameter("empty frequency list".into()));
    }
    let mut rows: Vec<Vec<ScalingRow>> = vec![Vec::new(); omegas.len()];
    for &n in sizes {
        let chain = DrivenChain::new(&template.with_sites(n))?;
        for (slot, &omega) in rows.iter_mut().zip(omegas) {
            let (n_star, p_star) = chain.max_power(omega, n_max)?;
            slot.push(ScalingRow {
                num_sites: n,
                n_star,
                p_star,
            });
        }
    }
    omegas
        .iter()
        .zip(rows)
        .map(|(&omega, rows)| {
            let x: Vec<f64> = rows.iter().map(|r| r.num_sites as f64).collect();
            let y: Vec<f64> = rows.iter().map(|r| r.p_star).collect();
            Ok(PowerScaling {
                omega,
                fit: power_law_fit(&x, &y)?,
                rows,
            })
        })
        .collect()
}
