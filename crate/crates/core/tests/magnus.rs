use std::f64::consts::PI;

use num_complex::Complex64 as C;
use qbattery_core::dense::materialize;
use qbattery_core::magnus::{
    commutator_oracle, magnus_error, magnus_floquet, magnus_term, transcription_deviation, PiecewiseMagnus,
};
use qbattery_core::floquet::build_hamiltonians;
use qbattery_core::{Boundary, ChainSpec, DriveParams, Pauli, PauliStringOperator, SizeGuard};

fn periodic(n: usize, period: f64) -> ChainSpec {
    ChainSpec::new(DriveParams::new(2.0, 0.5, 0.3, 2.0 * PI / period, n), Boundary::Periodic)
}

#[test]
fn written_terms_match_nested_commutators() {
    for n in [3, 4, 5] {
        for order in 0..=3 {
            let d = transcription_deviation(&periodic(n, 0.1), order).unwrap();
            assert!(d < 1e-12, "N={n} order={order} deviation={d}");
        }
    }
}

#[test]
fn first_order_from_half_period_commutator() {
    // (1/T)∬[H(t₁), H(t₂)] = (T/4)[H₂, H₁] for the square pulse
    let s = periodic(4, 0.3);
    let h = build_hamiltonians(&s).unwrap();
    let lhs = commutator_oracle(&h.second, &h.first).unwrap().scaled(C::new(0.3 / 4.0, 0.0));
    let mut bracket = PauliStringOperator::new(4);
    bracket.add_site_sum(0.5, &[Pauli::X, Pauli::Y], Boundary::Periodic).unwrap();
    bracket.add_site_sum(0.5, &[Pauli::Y, Pauli::X], Boundary::Periodic).unwrap();
    bracket.add_site_sum(0.3, &[Pauli::Y], Boundary::Periodic).unwrap();
    let rhs = materialize(&bracket, SizeGuard::new(8)).unwrap().scaled(C::new(0.0, 0.3 * 2.0));
    assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    let oracle = PiecewiseMagnus::new(&s).unwrap().term(1, 0.3).unwrap();
    // H_F gains −(i/2T)∬[H(t₁), H(t₂)]
    assert!(oracle.max_abs_diff(&lhs.scaled(C::new(0.0, -0.5))) < 1e-12);
}

#[test]
fn every_order_is_hermitian() {
    let s = periodic(6, 0.05);
    for order in 0..=3 {
        let m = materialize(&magnus_term(&s, order, 0.05).unwrap(), SizeGuard::new(8)).unwrap();
        assert!(m.hermiticity_deviation() < 1e-14);
    }
}

#[test]
fn truncation_error_scaling() {
    let periods = [0.05, 0.025, 0.0125];
    for order in 0..=3 {
        let errs: Vec<f64> = periods.iter().map(|&t| magnus_error(&periodic(6, t), order).unwrap()).collect();
        let nominal = 2f64.powi(order as i32 + 1);
        for w in errs.windows(2) {
            let ratio = w[0] / w[1];
            assert!(ratio > nominal * 10.0 / 16.0 && ratio < nominal * 24.0 / 16.0, "order {order}: {errs:?}");
        }
    }
}

#[test]
fn higher_order_is_more_accurate() {
    let s = periodic(6, 0.05);
    let e0 = magnus_error(&s, 0).unwrap();
    let e3 = magnus_error(&s, 3).unwrap();
    assert!(e3 < e0);
}

#[test]
fn convergence_exponent_over_a_decade() {
    // slope of log(error) against log(T) for T from 0.005 to 0.05
    let periods = [0.005, 0.05];
    for order in 0..=3 {
        let e: Vec<f64> = periods.iter().map(|&t| magnus_error(&periodic(6, t), order).unwrap()).collect();
        let slope = (e[1] / e[0]).ln() / 10f64.ln();
        assert!((slope - (order as f64 + 1.0)).abs() < 0.3, "order {order}: slope {slope}");
    }
}

#[test]
fn rejects_large_chains() {
    assert!(magnus_error(&periodic(11, 0.01), 1).is_err());
    assert!(magnus_floquet(&periodic(11, 0.01), 3).is_ok());
}
