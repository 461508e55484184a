//! Numerical laboratory for periodically driven spin-chain quantum batteries.
//!
//! The battery is `N` spins in a uniform transverse field, `H_B = h_z Σ σᶻ`,
//! prepared in its ground state (all spins down). Charging is a square-pulse
//! drive of an Ising coupling and, optionally, a longitudinal field:
//!
//! ```text
//! H₁ = H_B + J₀ Σ σˣσˣ + h₀ Σ σˣ    for 0   < t < T/2
//! H₂ = H_B − J₀ Σ σˣσˣ − h₀ Σ σˣ    for T/2 < t < T
//! ```
//!
//! Three engines are provided:
//!
//! * [`integrable`]: closed-form stroboscopic observables of the `h₀ = 0`
//!   chain, decomposed into independent momentum pseudo-spins.
//! * [`floquet`]: dense exact diagonalization of the full chain, including
//!   the Floquet Hamiltonian from the principal logarithm of `U_F`.
//! * [`magnus`]: the high-frequency expansion of the Floquet Hamiltonian
//!   through order `T³` as explicit Pauli strings, with dense oracles that
//!   re-derive every order from nested commutators.
//!
//! [`pauli`], [`dense`] and [`linalg`] supply the operator algebra shared by
//! all of them.

// Links the system OpenBLAS that provides LAPACK.
extern crate openblas_src;

pub mod dense;
pub mod error;
pub mod fit;
pub mod floquet;
pub mod integrable;
pub mod linalg;
pub mod magnus;
pub mod params;
pub mod pauli;
pub mod record;

mod lapack;

pub use dense::{DenseOperator, StateVector};
pub use error::{Error, Result};
pub use params::{Boundary, ChainSpec, DriveParams, SizeGuard};
pub use pauli::{Pauli, PauliString, PauliStringOperator};
pub use record::StroboscopicRecord;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
