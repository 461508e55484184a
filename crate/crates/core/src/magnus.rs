//! High-frequency (Magnus) expansion of the Floquet Hamiltonian.
//!
//! Through order `T³` the Floquet Hamiltonian of the square-pulse drive is
//!
//! ```text
//! H_F = h_z Σσᶻ
//!     + (T/2) h_z [J₀ Σ(σˣσʸ + σʸσˣ) + h₀ Σσʸ]
//!     − (T²/3) h_z [h₀J₀ Σ(σᶻσˣ + σˣσᶻ) + (J₀² + h₀²/2) Σσᶻ + J₀² Σσˣσᶻσˣ]
//!     − (T³/24) h_z [J₀(4J₀² + 3h₀² − 4h_z²) Σ(σˣσʸ + σʸσˣ)
//!                    + h₀(6J₀² + h₀² − h_z²) Σσʸ + 6h₀J₀² Σσˣσʸσˣ]
//! ```
//!
//! These terms are written out as Pauli strings in [`magnus_term`].
//! [`PiecewiseMagnus`] rebuilds each order from time-ordered nested
//! commutators of the dense `H₁`, `H₂`, so the two can be checked against
//! each other.
//!
//! The site sums are translation invariant. On an open chain the terms from
//! `T²` on pick up edge corrections that are not represented here, so those
//! orders are only offered for periodic chains.

use std::f64::consts::PI;

use crate::dense::{materialize, DenseOperator};
use crate::error::{Error, Result};
use crate::floquet::{build_hamiltonians, FloquetSystem};
use crate::params::{Boundary, ChainSpec, SizeGuard};
use crate::pauli::{Pauli, PauliStringOperator};
use crate::C64;

pub const MAX_ORDER: usize = 3;

/// Largest chain accepted by [`commutator_oracle`].
pub const ORACLE_MAX_SITES: usize = 8;

/// Largest chain accepted by [`magnus_error`].
pub const ERROR_MAX_SITES: usize = 10;

use Pauli::{X, Y, Z};

fn check_order(spec: &ChainSpec, order: usize) -> Result<()> {
    if order > MAX_ORDER {
        return Err(Error::InvalidParameter(format!(
            "Magnus order must be 0..={MAX_ORDER}, got {order}"
        )));
    }
    if order >= 2 && spec.boundary == Boundary::Open {
        return Err(Error::InvalidParameter(format!(
            "Magnus order {order} is only available for periodic chains"
        )));
    }
    Ok(())
}

/// The `T^order` contribution alone, prefactor included, for period `period`.
pub fn magnus_term(spec: &ChainSpec, order: usize, period: f64) -> Result<PauliStringOperator> {
    check_order(spec, order)?;
    spec.validate(SizeGuard::new(usize::MAX))?;
    let p = &spec.params;
    let (hz, j, h0) = (p.h_z, p.j0, p.h0);
    let b = spec.boundary;
    let mut op = PauliStringOperator::new(spec.num_sites());
    match order {
        0 => op.add_site_sum(hz, &[Z], b)?,
        1 => {
            let c = 0.5 * period * hz;
            op.add_site_sum(c * j, &[X, Y], b)?;
            op.add_site_sum(c * j, &[Y, X], b)?;
            op.add_site_sum(c * h0, &[Y], b)?;
        }
        2 => {
            let c = -period.powi(2) / 3.0 * hz;
            op.add_site_sum(c * h0 * j, &[Z, X], b)?;
            op.add_site_sum(c * h0 * j, &[X, Z], b)?;
            op.add_site_sum(c * (j * j + 0.5 * h0 * h0), &[Z], b)?;
            op.add_site_sum(c * j * j, &[X, Z, X], b)?;
        }
        _ => {
            let c = -period.powi(3) / 24.0 * hz;
            let pair = c * j * (4.0 * j * j + 3.0 * h0 * h0 - 4.0 * hz * hz);
            op.add_site_sum(pair, &[X, Y], b)?;
            op.add_site_sum(pair, &[Y, X], b)?;
            op.add_site_sum(c * h0 * (6.0 * j * j + h0 * h0 - hz * hz), &[Y], b)?;
            op.add_site_sum(c * 6.0 * h0 * j * j, &[X, Y, X], b)?;
        }
    }
    Ok(op)
}

/// All orders `T⁰..T³` at the spec's drive period.
#[derive(Clone, Debug)]
pub struct MagnusExpansion {
    pub spec: ChainSpec,
    pub orders: Vec<PauliStringOperator>,
}

impl MagnusExpansion {
    pub fn new(spec: &ChainSpec) -> Result<Self> {
        let top = match spec.boundary {
            Boundary::Periodic => MAX_ORDER,
            Boundary::Open => 1,
        };
        let period = spec.params.period();
        let orders = (0..=top)
            .map(|m| magnus_term(spec, m, period))
            .collect::<Result<_>>()?;
        Ok(Self {
            spec: *spec,
            orders,
        })
    }

    /// Sum of orders `0..=order`.
    pub fn truncated(&self, order: usize) -> Result<PauliStringOperator> {
        check_order(&self.spec, order)?;
        let mut out = PauliStringOperator::new(self.spec.num_sites());
        for term in &self.orders[..=order] {
            out.add_scaled(1.0, term)?;
        }
        Ok(out)
    }
}

/// Floquet Hamiltonian truncated after `T^order`.
pub fn magnus_floquet(spec: &ChainSpec, order: usize) -> Result<PauliStringOperator> {
    check_order(spec, order)?;
    MagnusExpansion::new(spec)?.truncated(order)
}

/// Dense `[A, B]`.
pub fn commutator_oracle(a: &PauliStringOperator, b: &PauliStringOperator) -> Result<DenseOperator> {
    if a.num_sites() != b.num_sites() {
        return Err(Error::SiteCountMismatch {
            expected: a.num_sites(),
            found: b.num_sites(),
        });
    }
    let guard = SizeGuard::new(ORACLE_MAX_SITES);
    Ok(materialize(a, guard)?.commutator(&materialize(b, guard)?))
}

/// Magnus terms of the square-pulse drive from time-ordered nested
/// commutators, evaluated with dense `H₁` and `H₂`.
#[derive(Clone, Debug)]
pub struct PiecewiseMagnus {
    pub h1: DenseOperator,
    pub h2: DenseOperator,
}

fn c(a: &DenseOperator, b: &DenseOperator) -> DenseOperator {
    a.commutator(b)
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

impl PiecewiseMagnus {
    pub fn new(spec: &ChainSpec) -> Result<Self> {
        let guard = SizeGuard::new(ORACLE_MAX_SITES);
        spec.validate(guard)?;
        let hams = build_hamiltonians(spec)?;
        Ok(Self {
            h1: materialize(&hams.first, guard)?,
            h2: materialize(&hams.second, guard)?,
        })
    }

    /// Integrand of the `k`-fold Magnus term, arguments ordered from the
    /// latest time to the earliest.
    fn integrand(k: usize, h: &[&DenseOperator]) -> DenseOperator {
        match k {
            1 => h[0].clone(),
            2 => c(h[0], h[1]),
            3 => c(h[0], &c(h[1], h[2])).add(&c(h[2], &c(h[1], h[0]))),
            _ => {
                let (a, b, cc, d) = (h[0], h[1], h[2], h[3]);
                c(&c(&c(a, b), cc), d)
                    .add(&c(a, &c(&c(b, cc), d)))
                    .add(&c(a, &c(b, &c(cc, d))))
                    .add(&c(b, &c(cc, &c(d, a))))
            }
        }
    }

    /// `T⁻ᵏ ∫_{T>t₁>…>t_k>0} f(H(t₁), …, H(t_k))`. With `m` of the times in
    /// the second half the integrand is constant, and that region of the
    /// simplex has volume `(T/2)ᵏ / (m! (k−m)!)`.
    pub fn simplex_integral(&self, k: usize) -> DenseOperator {
        let mut total = DenseOperator::zeros(self.h1.dim());
        for m in 0..=k {
            let args: Vec<&DenseOperator> = (0..k)
                .map(|i| if i < m { &self.h2 } else { &self.h1 })
                .collect();
            let vol = 0.5f64.powi(k as i32) / (factorial(m) * factorial(k - m));
            total = total.add(&Self::integrand(k, &args).scaled(C64::new(vol, 0.0)));
        }
        total
    }

    /// The `T^order` part of `H_F = (i/T) Ω`.
    pub fn term(&self, order: usize, period: f64) -> Result<DenseOperator> {
        if order > MAX_ORDER {
            return Err(Error::InvalidParameter(format!(
                "Magnus order must be 0..={MAX_ORDER}, got {order}"
            )));
        }
        let k = order + 1;
        // Ω_k carries (−i)^k / {1, 2, 6, 12}
        let weight = [1.0, 0.5, 1.0 / 6.0, 1.0 / 12.0][order];
        let phase = C64::new(0.0, 1.0) * C64::new(0.0, -1.0).powi(k as i32);
        let factor = phase * weight * period.powi(order as i32);
        Ok(self.simplex_integral(k).scaled(factor))
    }
}

/// Largest entry of `magnus_term − oracle term` for one order, at `T = 1`
/// so that the comparison is between the bare operator coefficients.
pub fn transcription_deviation(spec: &ChainSpec, order: usize) -> Result<f64> {
    let oracle = PiecewiseMagnus::new(spec)?.term(order, 1.0)?;
    let written = materialize(&magnus_term(spec, order, 1.0)?, SizeGuard::new(ORACLE_MAX_SITES))?;
    Ok(oracle.max_abs_diff(&written))
}

/// `‖H_F − H_F^{(order)}‖_max / ‖H_F‖_max`, with the exact `H_F` from the
/// principal logarithm of the Floquet operator.
///
/// Comparison is only meaningful when no quasi-energy wraps around the
/// branch; `Σ|weights of H₁|·T < π` guarantees that.
pub fn magnus_error(spec: &ChainSpec, order: usize) -> Result<f64> {
    check_order(spec, order)?;
    let guard = SizeGuard::new(ERROR_MAX_SITES.min(SizeGuard::from_env().max_sites));
    spec.validate(guard)?;
    let hams = build_hamiltonians(spec)?;
    let period = spec.params.period();
    let bound = hams.first.weight_norm() * period;
    if bound >= PI {
        return Err(Error::BranchViolation { bound, limit: PI });
    }
    let exact = FloquetSystem::with_guard(spec, guard)?.h_f;
    let approx = materialize(&magnus_floquet(spec, order)?, guard)?;
    Ok(exact.max_abs_diff(&approx) / exact.max_norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::DriveParams;
    use crate::pauli::PauliString;

    fn periodic(j0: f64, h0: f64, period: f64, n: usize) -> ChainSpec {
        ChainSpec::new(DriveParams::new(2.0, j0, h0, 2.0 * PI / period, n), Boundary::Periodic)
    }

    #[test]
    fn undriven_expansion_is_battery() {
        let s = periodic(0.0, 0.0, 0.3, 4);
        for order in 0..=3 {
            let op = magnus_floquet(&s, order).unwrap();
            assert_eq!(op.len(), 4);
            assert!(op.iter().all(|(p, c)| p.weight() == 1 && p.count(Z) == 1 && c == 2.0));
        }
    }

    #[test]
    fn no_longitudinal_field_term_structure() {
        let op = magnus_term(&periodic(0.5, 0.0, 0.1, 5), 2, 0.1).unwrap();
        assert!(op.iter().all(|(p, _)| !(p.weight() == 1 && p.count(Y) == 1)));
        assert!(op.iter().all(|(p, _)| !(p.count(Z) == 1 && p.count(X) == 1)));
        let xzx = PauliString::from_sites(5, &[(0, X), (1, Z), (2, X)]).unwrap();
        let expected = -0.01 / 3.0 * 0.25 * 2.0;
        assert!((op.coefficient(&xzx) - expected).abs() < 1e-16);
    }

    #[test]
    fn odd_powers_of_longitudinal_field_vanish() {
        let s = periodic(0.5, 0.0, 0.1, 6);
        for order in 0..=3 {
            let op = magnus_term(&s, order, 0.1).unwrap();
            // every surviving string has an even number of X and Y factors combined
            assert!(op.iter().all(|(p, _)| (p.count(X) + p.count(Y)) % 2 == 0));
        }
    }

    #[test]
    fn third_order_inventory() {
        let op = magnus_term(&periodic(0.5, 0.3, 0.1, 6), 3, 0.1).unwrap();
        assert_eq!(op.len(), 6 + 6 + 6 + 6);
        for (p, _) in op.iter() {
            let family = (p.weight(), p.count(X), p.count(Y));
            assert!([(2, 1, 1), (1, 0, 1), (3, 2, 1)].contains(&family), "{p}");
        }
    }

    #[test]
    fn commutator_of_battery_with_itself() {
        let h = build_hamiltonians(&periodic(0.5, 0.3, 0.1, 4)).unwrap();
        assert_eq!(commutator_oracle(&h.battery, &h.battery).unwrap().max_norm(), 0.0);
    }

    #[test]
    fn field_bond_commutator() {
        let mut z = PauliStringOperator::new(3);
        z.add_site_sum(1.0, &[Z], Boundary::Open).unwrap();
        let mut xx = PauliStringOperator::new(3);
        xx.add_site_sum(1.0, &[X, X], Boundary::Open).unwrap();
        let mut yx = PauliStringOperator::new(3);
        yx.add_site_sum(2.0, &[Y, X], Boundary::Open).unwrap();
        yx.add_site_sum(2.0, &[X, Y], Boundary::Open).unwrap();
        let lhs = commutator_oracle(&z, &xx).unwrap();
        let rhs = materialize(&yx, SizeGuard::new(8)).unwrap().scaled(C64::new(0.0, 1.0));
        assert!(lhs.max_abs_diff(&rhs) < 1e-14);
        assert!(z.bracket(&xx).unwrap().approx_eq(&yx, 1e-15));
    }

    #[test]
    fn oracle_size_guard() {
        let a = PauliStringOperator::new(9);
        assert!(matches!(
            commutator_oracle(&a, &a),
            Err(Error::SizeGuard { sites: 9, max: 8 })
        ));
    }

    #[test]
    fn zeroth_order_oracle_is_battery() {
        let s = periodic(0.5, 0.3, 0.1, 3);
        assert!(transcription_deviation(&s, 0).unwrap() < 1e-14);
    }

    #[test]
    fn open_chain_limited_to_first_order() {
        let s = ChainSpec::new(DriveParams::new(2.0, 0.5, 0.3, 50.0, 4), Boundary::Open);
        assert!(magnus_floquet(&s, 1).is_ok());
        assert!(magnus_floquet(&s, 2).is_err());
        assert!(magnus_floquet(&periodic(0.5, 0.3, 0.1, 4), 4).is_err());
    }

    #[test]
    fn branch_guard_trips_for_long_periods() {
        let err = magnus_error(&periodic(0.5, 0.3, 1.0, 4), 3).unwrap_err();
        assert!(err.is_numerical_guard());
    }

    #[test]
    fn undriven_error_vanishes() {
        let s = periodic(0.0, 0.0, 0.05, 4);
        for order in 0..=3 {
            assert!(magnus_error(&s, order).unwrap() < 1e-12);
        }
    }
}
