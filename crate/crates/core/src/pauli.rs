//! Pauli strings and real-weighted sums of them.
//!
//! Site `j` of an `N`-site string is the `j`-th tensor factor counted from
//! the left, which in the computational basis is bit `N - 1 - j` of the
//! basis index. Bit value 0 is spin up (`σᶻ = +1`), bit value 1 is spin down.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::params::Boundary;
use crate::C64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    /// Single-site product `self · rhs = phase · result`.
    pub fn mul(self, rhs: Pauli) -> (Phase, Pauli) {
        use Pauli::*;
        match (self, rhs) {
            (I, p) | (p, I) => (Phase::ONE, p),
            (a, b) if a == b => (Phase::ONE, I),
            (X, Y) => (Phase::I, Z),
            (Y, Z) => (Phase::I, X),
            (Z, X) => (Phase::I, Y),
            (Y, X) => (Phase::MINUS_I, Z),
            (Z, Y) => (Phase::MINUS_I, X),
            (X, Z) => (Phase::MINUS_I, Y),
            _ => unreachable!(),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Pauli> {
        match c {
            'I' | 'i' => Some(Pauli::I),
            'X' | 'x' => Some(Pauli::X),
            'Y' | 'y' => Some(Pauli::Y),
            'Z' | 'z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// A power of `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn to_c64(self) -> C64 {
        match self.0 {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        }
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;

    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

/// Tensor product of single-site Pauli operators.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliString(Vec<Pauli>);

impl PauliString {
    pub fn identity(num_sites: usize) -> Self {
        Self(vec![Pauli::I; num_sites])
    }

    pub fn from_paulis(paulis: Vec<Pauli>) -> Self {
        Self(paulis)
    }

    /// Identity everywhere except the listed `(site, pauli)` pairs.
    pub fn from_sites(num_sites: usize, sites: &[(usize, Pauli)]) -> Result<Self> {
        let mut s = vec![Pauli::I; num_sites];
        for &(j, p) in sites {
            if j >= num_sites {
                return Err(Error::InvalidParameter(format!(
                    "site {j} out of range for {num_sites} sites"
                )));
            }
            s[j] = p;
        }
        Ok(Self(s))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn paulis(&self) -> &[Pauli] {
        &self.0
    }

    pub fn get(&self, site: usize) -> Pauli {
        self.0[site]
    }

    /// Number of non-identity factors.
    pub fn weight(&self) -> usize {
        self.0.iter().filter(|&&p| p != Pauli::I).count()
    }

    pub fn count(&self, pauli: Pauli) -> usize {
        self.0.iter().filter(|&&p| p == pauli).count()
    }

    /// `self · rhs = phase · result`.
    pub fn mul(&self, rhs: &PauliString) -> (Phase, PauliString) {
        assert_eq!(self.len(), rhs.len(), "pauli strings of different length");
        let mut phase = Phase::ONE;
        let out = self
            .0
            .iter()
            .zip(&rhs.0)
            .map(|(&a, &b)| {
                let (ph, p) = a.mul(b);
                phase = phase * ph;
                p
            })
            .collect();
        (phase, PauliString(out))
    }

    pub fn commutes_with(&self, rhs: &PauliString) -> bool {
        let anti = self
            .0
            .iter()
            .zip(&rhs.0)
            .filter(|(&a, &b)| a != Pauli::I && b != Pauli::I && a != b)
            .count();
        anti % 2 == 0
    }

    /// Bit masks describing the action on computational basis states:
    /// `P|b⟩ = i^{#Y} (−1)^{popcount(b & sign)} |b ⊕ flip⟩`.
    pub fn masks(&self) -> BasisAction {
        let n = self.len();
        let mut flip = 0usize;
        let mut sign = 0usize;
        let mut num_y = 0u8;
        for (j, &p) in self.0.iter().enumerate() {
            let bit = 1usize << (n - 1 - j);
            match p {
                Pauli::I => {}
                Pauli::X => flip |= bit,
                Pauli::Y => {
                    flip |= bit;
                    sign |= bit;
                    num_y = (num_y + 1) % 4;
                }
                Pauli::Z => sign |= bit,
            }
        }
        BasisAction {
            flip,
            sign,
            phase: Phase(num_y),
        }
    }
}

/// See [`PauliString::masks`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasisAction {
    pub flip: usize,
    pub sign: usize,
    pub phase: Phase,
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.0 {
            write!(f, "{}", p.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| {
                Pauli::from_char(c)
                    .ok_or_else(|| Error::InvalidParameter(format!("bad pauli label '{c}'")))
            })
            .collect::<Result<Vec<_>>>()
            .map(PauliString)
    }
}

/// `Σ cᵢ Pᵢ` with real weights, kept canonical: one entry per string and no
/// zero weights. Real weights make every such operator Hermitian.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliStringOperator {
    num_sites: usize,
    terms: BTreeMap<PauliString, f64>,
}

impl PauliStringOperator {
    pub fn new(num_sites: usize) -> Self {
        Self {
            num_sites,
            terms: BTreeMap::new(),
        }
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PauliString, f64)> {
        self.terms.iter().map(|(s, &c)| (s, c))
    }

    pub fn coefficient(&self, string: &PauliString) -> f64 {
        self.terms.get(string).copied().unwrap_or(0.0)
    }

    pub fn add_term(&mut self, coeff: f64, string: PauliString) -> Result<()> {
        if string.len() != self.num_sites {
            return Err(Error::SiteCountMismatch {
                expected: self.num_sites,
                found: string.len(),
            });
        }
        self.accumulate(coeff, string);
        Ok(())
    }

    fn accumulate(&mut self, coeff: f64, string: PauliString) {
        if coeff == 0.0 {
            return;
        }
        let entry = self.terms.entry(string);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let c = *o.get() + coeff;
                if c == 0.0 {
                    o.remove();
                } else {
                    *o.get_mut() = c;
                }
            }
        }
    }

    /// Adds `coeff · Σⱼ pattern[0]ⱼ pattern[1]ⱼ₊₁ …`, with `j` running over
    /// every placement that fits (open) or every site with wraparound
    /// (periodic).
    pub fn add_site_sum(&mut self, coeff: f64, pattern: &[Pauli], boundary: Boundary) -> Result<()> {
        let n = self.num_sites;
        let len = pattern.len();
        if len == 0 || len > n {
            return Err(Error::InvalidParameter(format!(
                "pattern of length {len} does not fit on {n} sites"
            )));
        }
        let starts = match boundary {
            Boundary::Open => n + 1 - len,
            Boundary::Periodic => n,
        };
        for j in 0..starts {
            let mut s = vec![Pauli::I; n];
            for (offset, &p) in pattern.iter().enumerate() {
                s[(j + offset) % n] = p;
            }
            self.accumulate(coeff, PauliString(s));
        }
        Ok(())
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = Self::new(self.num_sites);
        for (s, c) in self.iter() {
            out.accumulate(factor * c, s.clone());
        }
        out
    }

    /// `self + factor · other`.
    pub fn add_scaled(&mut self, factor: f64, other: &PauliStringOperator) -> Result<()> {
        if other.num_sites != self.num_sites {
            return Err(Error::SiteCountMismatch {
                expected: self.num_sites,
                found: other.num_sites,
            });
        }
        for (s, c) in other.iter() {
            self.accumulate(factor * c, s.clone());
        }
        Ok(())
    }

    /// Hermitian `C` with `[self, other] = i C`.
    ///
    /// Only anticommuting string pairs contribute; for those `PQ = ±i R`,
    /// so `[P, Q] = ±2i R` and `C` stays real-weighted.
    pub fn bracket(&self, other: &PauliStringOperator) -> Result<PauliStringOperator> {
        if other.num_sites != self.num_sites {
            return Err(Error::SiteCountMismatch {
                expected: self.num_sites,
                found: other.num_sites,
            });
        }
        let mut out = Self::new(self.num_sites);
        for (p, a) in self.iter() {
            for (q, b) in other.iter() {
                if p.commutes_with(q) {
                    continue;
                }
                let (phase, r) = p.mul(q);
                let sign = match phase {
                    Phase::I => 2.0,
                    Phase::MINUS_I => -2.0,
                    _ => unreachable!("anticommuting strings multiply to ±i"),
                };
                out.accumulate(sign * a * b, r);
            }
        }
        Ok(out)
    }

    /// Sum of absolute weights, an upper bound on the spectral norm.
    pub fn weight_norm(&self) -> f64 {
        self.terms.values().map(|c| c.abs()).sum()
    }

    /// True when every weight agrees with `other` to `tol` (absolute).
    pub fn approx_eq(&self, other: &PauliStringOperator, tol: f64) -> bool {
        if self.num_sites != other.num_sites {
            return false;
        }
        let mut diff = self.clone();
        diff.add_scaled(-1.0, other).expect("same size");
        diff.terms.values().all(|c| c.abs() <= tol)
    }
}

impl fmt::Display for PauliStringOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (s, c)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}·{s}")?;
        }
        Ok(())
    }
}
