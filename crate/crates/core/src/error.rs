use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("basis is singular (determinant 0)")]
    SingularBasis,

    #[error("lattice is not contained in the ambient lattice")]
    NotSublattice,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("bad discriminant d = {d}: {reason}")]
    BadDiscriminant { d: i64, reason: &'static str },

    #[error("elements belong to different pair descriptors")]
    DescriptorMismatch,

    #[error("matrix {0} is not in the group Q of this pair")]
    NotInQ(String),

    #[error("vector {0} is not in the group N of this pair")]
    NotInN(String),

    #[error("conductor {needed} exceeds the configured bound {bound}")]
    ConductorOverflow { needed: u64, bound: u64 },

    #[error("enumeration exceeded the bound of {bound} cosets")]
    EnumerationBound { bound: usize },

    #[error("family condition ({condition}) violated: {detail}")]
    FamilyConditionViolated { condition: u8, detail: String },

    #[error("induced action is not well defined: {0}")]
    ActionNotWellDefined(String),

    #[error("stages are not comparable: {0}")]
    NotComparable(String),

    #[error("determinant {0} is not of the form ±p^k")]
    DetNotAllowed(String),

    #[error("size {size} exceeds the cap {cap}")]
    SizeCap { size: u128, cap: u128 },

    #[error("residue data for prime {0} is required but missing")]
    InsufficientData(u64),

    #[error("invalid configuration field `{field}`: {message}")]
    ConfigInvalid { field: String, message: String },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::ConfigInvalid {
            field: field.into(),
            message: message.into(),
        }
    }
}
