//! Dense `2^N × 2^N` operators and state vectors.

use ndarray::{Array1, Array2, Zip};

use crate::error::{Error, Result};
use crate::params::SizeGuard;
use crate::pauli::PauliStringOperator;
use crate::C64;

#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    mat: Array2<C64>,
}

impl DenseOperator {
    pub fn from_array(mat: Array2<C64>) -> Result<Self> {
        let (r, c) = mat.dim();
        if r != c || !r.is_power_of_two() {
            return Err(Error::BadDimension(r.max(c)));
        }
        Ok(Self { mat })
    }

    pub(crate) fn from_array_unchecked(mat: Array2<C64>) -> Self {
        debug_assert!(mat.nrows() == mat.ncols() && mat.nrows().is_power_of_two());
        Self { mat }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_array_unchecked(Array2::zeros((dim, dim)))
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_array_unchecked(Array2::eye(dim))
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        let mut mat = Array2::zeros((diag.len(), diag.len()));
        for (i, &d) in diag.iter().enumerate() {
            mat[[i, i]] = C64::new(d, 0.0);
        }
        Self::from_array(mat)
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn num_sites(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn as_array(&self) -> &Array2<C64> {
        &self.mat
    }

    pub fn into_array(self) -> Array2<C64> {
        self.mat
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.mat[[row, col]]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_array_unchecked(self.mat.t().mapv(|z| z.conj()))
    }

    pub fn matmul(&self, rhs: &DenseOperator) -> Self {
        Self::from_array_unchecked(self.mat.dot(&rhs.mat))
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self::from_array_unchecked(&self.mat * factor)
    }

    pub fn add(&self, rhs: &DenseOperator) -> Self {
        Self::from_array_unchecked(&self.mat + &rhs.mat)
    }

    pub fn sub(&self, rhs: &DenseOperator) -> Self {
        Self::from_array_unchecked(&self.mat - &rhs.mat)
    }

    /// `[self, rhs] = self·rhs − rhs·self`.
    pub fn commutator(&self, rhs: &DenseOperator) -> Self {
        Self::from_array_unchecked(self.mat.dot(&rhs.mat) - rhs.mat.dot(&self.mat))
    }

    pub fn trace(&self) -> C64 {
        self.mat.diag().sum()
    }

    pub fn diagonal(&self) -> Array1<C64> {
        self.mat.diag().to_owned()
    }

    /// Largest entry modulus.
    pub fn max_norm(&self) -> f64 {
        self.mat.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn max_abs_diff(&self, rhs: &DenseOperator) -> f64 {
        let mut m = 0.0f64;
        Zip::from(&self.mat).and(&rhs.mat).for_each(|a, b| m = m.max((a - b).norm()));
        m
    }

    /// `max |A − A†|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let n = self.dim();
        let mut m = 0.0f64;
        for i in 0..n {
            for j in i..n {
                m = m.max((self.mat[[i, j]] - self.mat[[j, i]].conj()).norm());
            }
        }
        m
    }

    /// `max |U†U − 1|`.
    pub fn unitarity_deviation(&self) -> f64 {
        let prod = self.adjoint().matmul(self);
        prod.max_abs_diff(&DenseOperator::identity(self.dim()))
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() <= tol
    }

    pub fn apply(&self, psi: &StateVector) -> StateVector {
        StateVector(self.mat.dot(&psi.0))
    }

    /// `⟨ψ|A|ψ⟩`.
    pub fn expectation(&self, psi: &StateVector) -> C64 {
        psi.inner(&self.apply(psi))
    }
}

/// A `2^N` complex amplitude vector.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector(pub Array1<C64>);

impl StateVector {
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = Array1::zeros(dim);
        v[index] = C64::new(1.0, 0.0);
        Self(v)
    }

    /// Product state with every spin down (`σᶻ = −1` on all sites).
    pub fn all_down(num_sites: usize) -> Self {
        let dim = 1usize << num_sites;
        Self::basis(dim, dim - 1)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .fold(C64::new(0.0, 0.0), |acc, (a, b)| acc + a.conj() * b)
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨ψ|D|ψ⟩` for a real diagonal operator.
    pub fn diagonal_expectation(&self, diag: &[f64]) -> f64 {
        self.0.iter().zip(diag).map(|(z, d)| z.norm_sqr() * d).sum()
    }
}

/// `Σ cᵢ Pᵢ` as a dense matrix. Each term touches one entry per column.
pub fn materialize(op: &PauliStringOperator, guard: SizeGuard) -> Result<DenseOperator> {
    let n = op.num_sites();
    if n == 0 {
        return Err(Error::InvalidParameter("operator has no sites".into()));
    }
    guard.check(n)?;
    let dim = 1usize << n;
    let mut mat = Array2::<C64>::zeros((dim, dim));
    for (string, coeff) in op.iter() {
        let action = string.masks();
        let base = action.phase.to_c64() * coeff;
        for col in 0..dim {
            let odd = (col & action.sign).count_ones() & 1 == 1;
            let v = if odd { -base } else { base };
            mat[[col ^ action.flip, col]] += v;
        }
    }
    Ok(DenseOperator::from_array_unchecked(mat))
}

/// Diagonal of an operator built only from `I` and `Z` factors.
pub fn diagonal_of(op: &PauliStringOperator) -> Result<Vec<f64>> {
    let dim = 1usize << op.num_sites();
    let mut diag = vec![0.0; dim];
    for (string, coeff) in op.iter() {
        let action = string.masks();
        if action.flip != 0 {
            return Err(Error::InvalidParameter(format!("{string} is not diagonal")));
        }
        for (b, d) in diag.iter_mut().enumerate() {
            let odd = (b & action.sign).count_ones() & 1 == 1;
            *d += if odd { -coeff } else { coeff };
        }
    }
    Ok(diag)
}
