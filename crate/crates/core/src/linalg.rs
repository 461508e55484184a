//! Eigendecompositions, unitary exponential and principal logarithm.
//!
//! Both directions go through a full eigendecomposition: `exp(−iHt)` from
//! the Hermitian eigensystem of `H`, and `(i/T) ln U` from the complex
//! Schur form of `U`, which is diagonal for normal matrices. The Schur
//! vectors are orthonormal even inside degenerate eigenspaces.

use std::f64::consts::PI;

use ndarray::{Array1, Array2, Axis};

use crate::dense::{DenseOperator, StateVector};
use crate::error::{Error, Result};
use crate::lapack;
use crate::C64;

/// Relative Hermiticity tolerance accepted by [`hermitian_eig`].
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Unitarity tolerance accepted by [`unitary_eig`] and [`principal_log`].
pub const UNITARY_TOL: f64 = 1e-10;

/// Eigenphases this close to `−π` are placed on the `+π` end of the branch.
pub const BRANCH_SNAP: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors as columns.
    pub eigenvectors: Array2<C64>,
}

impl HermitianEigen {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V f(Λ) V†`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> C64) -> DenseOperator {
        let weights: Vec<C64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        spectral_sum(&self.eigenvectors, &weights)
    }

    pub fn reconstruct(&self) -> DenseOperator {
        self.map_spectrum(|l| C64::new(l, 0.0))
    }

    /// `exp(−iHt)`.
    pub fn propagator(&self, t: f64) -> DenseOperator {
        self.map_spectrum(|l| C64::from_polar(1.0, -l * t))
    }

    /// `exp(−iHt)|ψ⟩` without forming the propagator.
    pub fn evolve(&self, psi: &StateVector, t: f64) -> StateVector {
        let v = &self.eigenvectors;
        let mut coeffs = v.t().mapv(|z| z.conj()).dot(&psi.0);
        for (c, &l) in coeffs.iter_mut().zip(&self.eigenvalues) {
            *c *= C64::from_polar(1.0, -l * t);
        }
        StateVector(v.dot(&coeffs))
    }

    /// `max |V†V − 1|`.
    pub fn orthonormality_deviation(&self) -> f64 {
        orthonormality_deviation(&self.eigenvectors)
    }
}

#[derive(Clone, Debug)]
pub struct UnitaryEigen {
    /// Unit-modulus eigenvalues in Schur order.
    pub eigenvalues: Vec<C64>,
    /// Orthonormal eigenvectors as columns.
    pub eigenvectors: Array2<C64>,
    /// Largest strictly-upper Schur entry; zero for an exactly normal input.
    pub schur_residual: f64,
}

impl UnitaryEigen {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `θⱼ ∈ (−π, π]` with `λⱼ = e^{−iθⱼ}`.
    pub fn eigenphases(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|&l| principal_phase(l)).collect()
    }

    /// Quasi-energies `θⱼ/T`, inside `(−π/T, π/T]`.
    pub fn quasi_energies(&self, period: f64) -> Vec<f64> {
        self.eigenphases().into_iter().map(|t| t / period).collect()
    }

    pub fn reconstruct(&self) -> DenseOperator {
        spectral_sum(&self.eigenvectors, &self.eigenvalues)
    }

    /// Coordinates of `ψ` in the eigenbasis, `V†ψ`.
    pub fn coordinates(&self, psi: &StateVector) -> Array1<C64> {
        self.eigenvectors.t().mapv(|z| z.conj()).dot(&psi.0)
    }

    /// `Uⁿψ` from eigenbasis coordinates. Phases are evaluated from the
    /// eigenphase directly so nothing accumulates with `n`.
    pub fn power_apply(&self, coords: &Array1<C64>, phases: &[f64], n: u64) -> StateVector {
        let nf = n as f64;
        let scaled: Array1<C64> = coords
            .iter()
            .zip(phases)
            .map(|(c, &theta)| c * C64::from_polar(1.0, -nf * theta))
            .collect();
        StateVector(self.eigenvectors.dot(&scaled))
    }

    pub fn orthonormality_deviation(&self) -> f64 {
        orthonormality_deviation(&self.eigenvectors)
    }
}

/// `θ ∈ (−π, π]` with `λ = |λ| e^{−iθ}`.
pub fn principal_phase(lambda: C64) -> f64 {
    let theta = -lambda.arg();
    if theta <= -PI + BRANCH_SNAP {
        PI
    } else {
        theta
    }
}

fn spectral_sum(v: &Array2<C64>, weights: &[C64]) -> DenseOperator {
    let mut scaled = v.clone();
    for (mut col, &w) in scaled.axis_iter_mut(Axis(1)).zip(weights) {
        col.mapv_inplace(|z| z * w);
    }
    let vh = v.t().mapv(|z| z.conj());
    DenseOperator::from_array_unchecked(scaled.dot(&vh))
}

fn orthonormality_deviation(v: &Array2<C64>) -> f64 {
    let g = v.t().mapv(|z| z.conj()).dot(v);
    let mut m = 0.0f64;
    for ((i, j), z) in g.indexed_iter() {
        let target = if i == j { 1.0 } else { 0.0 };
        m = m.max((z - target).norm());
    }
    m
}

pub fn hermitian_eig(a: &DenseOperator) -> Result<HermitianEigen> {
    let deviation = a.hermiticity_deviation();
    if deviation > HERMITIAN_TOL * a.max_norm().max(1.0) {
        return Err(Error::NotHermitian { deviation });
    }
    let (eigenvalues, eigenvectors) = lapack::zheevd(a.as_array())?;
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors,
    })
}

/// Unitary diagonalization through the Schur form. Unitarity is verified on
/// the Schur factors: unit-modulus diagonal and vanishing upper triangle.
pub fn unitary_eig(u: &DenseOperator) -> Result<UnitaryEigen> {
    let (diag, schur_residual, vectors) = lapack::zgees(u.as_array())?;
    let modulus_dev = diag.iter().fold(0.0f64, |m, l| m.max((l.norm() - 1.0).abs()));
    let deviation = modulus_dev.max(schur_residual);
    if deviation > UNITARY_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    let eigenvalues = diag.iter().map(|l| l / l.norm()).collect();
    Ok(UnitaryEigen {
        eigenvalues,
        eigenvectors: vectors,
        schur_residual,
    })
}

/// `exp(−iHt)`.
pub fn unitary_exp(h: &DenseOperator, t: f64) -> Result<DenseOperator> {
    Ok(hermitian_eig(h)?.propagator(t))
}

/// `(i/T) ln U` on the principal branch: each eigenvalue `e^{−iθ}` becomes
/// the quasi-energy `θ/T` with `θ ∈ (−π, π]`.
pub fn principal_log(u: &DenseOperator, period: f64) -> Result<DenseOperator> {
    if !(period > 0.0) || !period.is_finite() {
        return Err(Error::InvalidParameter(format!("period must be positive, got {period}")));
    }
    let eig = unitary_eig(u)?;
    Ok(log_from_eigen(&eig, period))
}

pub(crate) fn log_from_eigen(eig: &UnitaryEigen, period: f64) -> DenseOperator {
    let weights: Vec<C64> = eig
        .quasi_energies(period)
        .into_iter()
        .map(|e| C64::new(e, 0.0))
        .collect();
    spectral_sum(&eig.eigenvectors, &weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::materialize;
    use crate::params::{Boundary, SizeGuard};
    use crate::pauli::{Pauli, PauliStringOperator};

    fn op(n: usize, terms: &[(f64, &str)]) -> PauliStringOperator {
        let mut o = PauliStringOperator::new(n);
        for &(c, s) in terms {
            o.add_term(c, s.parse().unwrap()).unwrap();
        }
        o
    }

    fn dense(o: &PauliStringOperator) -> DenseOperator {
        materialize(o, SizeGuard::new(14)).unwrap()
    }

    #[test]
    fn diag_eigenvalues_ascend() {
        let e = hermitian_eig(&dense(&op(1, &[(2.0, "Z")]))).unwrap();
        assert_eq!(e.eigenvalues, vec![-2.0, 2.0]);
    }

    #[test]
    fn sigma_x_eigensystem() {
        let e = hermitian_eig(&dense(&op(1, &[(1.0, "X")]))).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-15);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        // up to a global phase per column
        let v0 = e.eigenvectors.column(0);
        let ratio = v0[1] / v0[0];
        assert!((ratio + 1.0).norm() < 1e-14);
        assert!((v0[0].norm() - s).abs() < 1e-14);
        let v1 = e.eigenvectors.column(1);
        assert!((v1[1] / v1[0] - 1.0).norm() < 1e-14);
    }

    #[test]
    fn battery_spectrum_has_binomial_degeneracies() {
        let mut hb = PauliStringOperator::new(4);
        hb.add_site_sum(2.0, &[Pauli::Z], Boundary::Open).unwrap();
        let e = hermitian_eig(&dense(&hb)).unwrap();
        let expected = [
            -8.0, -4.0, -4.0, -4.0, -4.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 4.0, 4.0, 4.0, 4.0, 8.0,
        ];
        for (a, b) in e.eigenvalues.iter().zip(expected) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = Array2::<C64>::zeros((2, 2));
        m[[0, 1]] = C64::new(1.0, 0.0);
        let a = DenseOperator::from_array(m).unwrap();
        assert!(matches!(hermitian_eig(&a), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn exp_at_zero_time_is_identity() {
        let h = dense(&op(2, &[(0.7, "XY"), (1.3, "ZI"), (-0.4, "YY")]));
        let u = unitary_exp(&h, 0.0).unwrap();
        assert!(u.max_abs_diff(&DenseOperator::identity(4)) < 1e-14);
    }

    #[test]
    fn half_turn_of_z_field_is_minus_identity() {
        let h = dense(&op(1, &[(2.0, "Z")]));
        let u = unitary_exp(&h, PI / 2.0).unwrap();
        let minus = DenseOperator::identity(2).scaled(C64::new(-1.0, 0.0));
        assert!(u.max_abs_diff(&minus) < 1e-15);
    }

    #[test]
    fn log_of_identity_is_zero() {
        let l = principal_log(&DenseOperator::identity(4), 1.0).unwrap();
        assert!(l.max_norm() < 1e-15);
    }

    #[test]
    fn log_of_minus_identity_sits_on_plus_pi() {
        let minus = DenseOperator::identity(4).scaled(C64::new(-1.0, 0.0));
        let l = principal_log(&minus, 1.0).unwrap();
        let expected = DenseOperator::identity(4).scaled(C64::new(PI, 0.0));
        assert!(l.max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn principal_phase_branch() {
        assert_eq!(principal_phase(C64::new(-1.0, 0.0)), PI);
        assert_eq!(principal_phase(C64::new(-1.0, -0.0)), PI);
        assert!((principal_phase(C64::from_polar(1.0, -0.3)) - 0.3).abs() < 1e-15);
        assert!((principal_phase(C64::from_polar(1.0, 3.0)) + 3.0).abs() < 1e-15);
    }

    #[test]
    fn log_recovers_battery_hamiltonian() {
        let mut hb = PauliStringOperator::new(2);
        hb.add_site_sum(2.0, &[Pauli::Z], Boundary::Open).unwrap();
        let h = dense(&hb);
        let t = 0.1;
        let u = unitary_exp(&h, t).unwrap();
        let back = principal_log(&u, t).unwrap();
        assert!(back.max_abs_diff(&h) < 1e-12);
    }

    #[test]
    fn rejects_non_unitary() {
        let a = DenseOperator::identity(2).scaled(C64::new(1.1, 0.0));
        assert!(matches!(principal_log(&a, 1.0), Err(Error::NotUnitary { .. })));
        assert!(principal_log(&DenseOperator::identity(2), 0.0).is_err());
    }

    #[test]
    fn evolve_matches_propagator() {
        let h = dense(&op(2, &[(0.7, "XY"), (1.3, "ZI"), (-0.4, "XX")]));
        let e = hermitian_eig(&h).unwrap();
        let psi = StateVector::all_down(2);
        let a = e.evolve(&psi, 0.37);
        let b = e.propagator(0.37).apply(&psi);
        for (x, y) in a.0.iter().zip(b.0.iter()) {
            assert!((x - y).norm() < 1e-14);
        }
    }
}
