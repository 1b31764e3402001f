use std::fmt;

/// Error type shared by all fallible operations in this crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Domain too small for the requested quantity (e.g. chunk size of a
    /// single-point domain).
    DegenerateDomain(String),
    /// Construction or enumeration would exceed a configured cap; carries the
    /// size estimate.
    ScaleCap { what: String, estimate: u128, cap: u128 },
    /// Input failed a structural precondition.
    InvalidInput(String),
    /// Operation is not defined for this domain kind.
    Unsupported(String),
    /// A search budget ran out before producing an exact answer.
    BudgetExhausted(String),
    /// Ball reconstruction could not gather enough closer points; names the
    /// offending point.
    ReconstructionFailure { point: String, needed: usize, found: usize },
    /// Linear program was infeasible where a solution was required.
    Infeasible(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DegenerateDomain(s) => write!(f, "degenerate domain: {s}"),
            Error::ScaleCap { what, estimate, cap } => {
                write!(f, "{what} would need ~{estimate} items (cap {cap})")
            }
            Error::InvalidInput(s) => write!(f, "invalid input: {s}"),
            Error::Unsupported(s) => write!(f, "unsupported: {s}"),
            Error::BudgetExhausted(s) => write!(f, "budget exhausted: {s}"),
            Error::ReconstructionFailure { point, needed, found } => write!(
                f,
                "reconstruction failed at {point}: needed {needed} closer points, found {found}"
            ),
            Error::Infeasible(s) => write!(f, "infeasible: {s}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
