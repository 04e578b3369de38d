use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A scalar argument fell outside its admissible range.
    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("dimension mismatch: {0}")]
    Dimension(&'static str),

    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("invalid qubit index set: {0}")]
    InvalidIndexSet(&'static str),

    #[error("vectors are not orthonormal (max residual {0:e})")]
    NotOrthonormal(f64),

    #[error("matrix is not unitary (max residual {0:e})")]
    NotUnitary(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(&'static str),

    #[error("invalid joint distribution: {0}")]
    InvalidDistribution(&'static str),

    /// The phase condition on the ancilla overlap cannot be met.
    #[error("infeasible attack parameters: reach {reach} < required overlap {target}")]
    Infeasible { reach: f64, target: f64 },

    /// Concurrence zero has no finite inverse for the ψ-state parameter.
    #[error("concurrence must be strictly positive to invert")]
    SingularConcurrence,

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
}

pub(crate) fn check_range(
    name: &'static str,
    value: f64,
    lo: f64,
    hi: f64,
    range: &'static str,
) -> Result<()> {
    if value.is_finite() && value >= lo && value <= hi {
        Ok(())
    } else {
        Err(Error::OutOfRange { name, value, range })
    }
}
