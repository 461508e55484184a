#![allow(dead_code)]

use ndarray::{array, Array2};
use num_complex::Complex64 as C;

pub fn pauli(label: char) -> Array2<C> {
    let z = C::new(0.0, 0.0);
    let o = C::new(1.0, 0.0);
    let i = C::new(0.0, 1.0);
    match label {
        'I' => array![[o, z], [z, o]],
        'X' => array![[z, o], [o, z]],
        'Y' => array![[z, -i], [i, z]],
        'Z' => array![[o, z], [z, -o]],
        _ => panic!("bad label {label}"),
    }
}

pub fn kron(a: &Array2<C>, b: &Array2<C>) -> Array2<C> {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let mut out = Array2::zeros((ar * br, ac * bc));
    for i in 0..ar {
        for j in 0..ac {
            for k in 0..br {
                for l in 0..bc {
                    out[[i * br + k, j * bc + l]] = a[[i, j]] * b[[k, l]];
                }
            }
        }
    }
    out
}

/// Product of single-site operators, leftmost site first.
pub fn chain_product(n: usize, ops: &[(usize, char)]) -> Array2<C> {
    let mut m = Array2::from_elem((1, 1), C::new(1.0, 0.0));
    for site in 0..n {
        let label = ops.iter().find(|(s, _)| *s == site).map_or('I', |(_, l)| *l);
        m = kron(&m, &pauli(label));
    }
    m
}

/// `H₁` (sign = +1) or `H₂` (sign = −1) of the driven chain from explicit
/// Kronecker products.
pub fn kron_hamiltonian(n: usize, hz: f64, j0: f64, h0: f64, sign: f64, periodic: bool) -> Array2<C> {
    let dim = 1 << n;
    let mut h = Array2::<C>::zeros((dim, dim));
    for j in 0..n {
        h = h + chain_product(n, &[(j, 'Z')]) * C::new(hz, 0.0);
        h = h + chain_product(n, &[(j, 'X')]) * C::new(sign * h0, 0.0);
    }
    let bonds = if periodic { n } else { n - 1 };
    for j in 0..bonds {
        h = h + chain_product(n, &[(j, 'X'), ((j + 1) % n, 'X')]) * C::new(sign * j0, 0.0);
    }
    h
}

/// `exp(−i H t)` by scaling and squaring of a truncated Taylor series.
pub fn expm_taylor(h: &Array2<C>, t: f64) -> Array2<C> {
    let n = h.nrows();
    let norm: f64 = h.iter().map(|z| z.norm()).sum::<f64>() * t.abs();
    let squarings = (norm.max(1.0).log2().ceil() as i32 + 4).max(0);
    let scale = t / 2f64.powi(squarings);
    let a = h.mapv(|z| z * C::new(0.0, -scale));
    let mut term = Array2::<C>::eye(n);
    let mut sum = Array2::<C>::eye(n);
    for k in 1..30 {
        term = term.dot(&a).mapv(|z| z / k as f64);
        sum = sum + &term;
    }
    for _ in 0..squarings {
        sum = sum.dot(&sum);
    }
    sum
}

pub fn max_diff(a: &Array2<C>, b: &Array2<C>) -> f64 {
    a.iter().zip(b.iter()).fold(0.0, |m, (x, y)| m.max((x - y).norm()))
}

/// Two-level evolution of `|↓⟩` and the resulting moments, for a mode with
/// one-period unitary `u`, `H_B = 2h_z η_z` and charging Hamiltonian `hc`.
pub struct SpinorMoments {
    pub energy: f64,
    pub var_b: f64,
    pub var_c: f64,
    pub commutator: f64,
}

pub fn spinor_moments(u: &Array2<C>, n: u64, hz: f64, hc: &Array2<C>) -> SpinorMoments {
    let mut psi = array![C::new(0.0, 0.0), C::new(1.0, 0.0)];
    for _ in 0..n {
        psi = u.dot(&psi);
    }
    let hb = pauli('Z') * C::new(2.0 * hz, 0.0);
    let ev = |a: &Array2<C>| psi.mapv(|z| z.conj()).dot(&a.dot(&psi)).re;
    let comm = (hc.dot(&hb) - hb.dot(hc)) * C::new(0.0, 1.0);
    SpinorMoments {
        energy: ev(&hb) + 2.0 * hz,
        var_b: ev(&hb.dot(&hb)) - ev(&hb).powi(2),
        var_c: ev(&hc.dot(hc)) - ev(hc).powi(2),
        commutator: ev(&comm),
    }
}

/// `a_y η_y + a_z η_z`.
pub fn mode_hamiltonian(a_y: f64, a_z: f64) -> Array2<C> {
    pauli('Y') * C::new(a_y, 0.0) + pauli('Z') * C::new(a_z, 0.0)
}
