use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("pauli string has {found} sites, operator has {expected}")]
    SiteCountMismatch { expected: usize, found: usize },

    #[error("{sites} sites exceeds the dense size guard of {max} (set QBATTERY_MAX_N to override)")]
    SizeGuard { sites: usize, max: usize },

    #[error("matrix is not Hermitian (max |A - A†| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not unitary (max |U†U - 1| = {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("dimension {0} is not a power of two")]
    BadDimension(usize),

    #[error("quasi-energy branch violated: spectral bound {bound:.6} exceeds pi/T = {limit:.6}")]
    BranchViolation { bound: f64, limit: f64 },

    #[error("LAPACK {routine} failed with info = {info}")]
    Lapack { routine: &'static str, info: i32 },

    #[error("not enough data: {0}")]
    InsufficientData(String),
}

impl Error {
    /// Guards that protect against meaningless or oversized numerics, as
    /// opposed to malformed input.
    pub fn is_numerical_guard(&self) -> bool {
        matches!(self, Error::SizeGuard { .. } | Error::BranchViolation { .. })
    }
}
