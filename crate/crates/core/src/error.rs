use alloc::vec::Vec;
use core::fmt;

/// Errors raised by the analysis pipeline.
///
/// Indices stored in variants are zero-based. The `Display` output numbers
/// rows and agents from 1 so messages line up with how matrices are usually
/// written down.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    EmptyMatrix,
    RaggedRows { row: usize, expected: usize, found: usize },
    NonFinite { row: usize, col: usize },
    NotSquare { rows: usize, cols: usize },
    NegativeEntry { row: usize, col: usize, value: f64 },
    RowSumViolation { row: usize, sum: f64 },
    DimensionMismatch { expected: usize, found: usize },
    InvalidTolerance,
    IndexOutOfRange { index: usize, len: usize },
    Singular,
    RankDeficient { rank: usize, cols: usize },
    NotStronglyConnected,
    ZeroTrace { step: usize },
    ResidualTooLarge { residual: f64 },
    NoConvergence { iterations: usize },
    RankAssertionFailed { rank: usize, expected: usize },
    SingularZ,
    ZeroXi,
    /// A final class is periodic, so `P^k` has no limit.
    ImproperMatrix { class: Vec<usize>, period: usize },
    TooLarge { size: usize, cap: usize },
    CrossCheckFailed { check: &'static str, deviation: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyMatrix => write!(f, "matrix has no entries"),
            Error::RaggedRows { row, expected, found } => write!(
                f,
                "row {} has {} entries, expected {}",
                row + 1,
                found,
                expected
            ),
            Error::NonFinite { row, col } => {
                write!(f, "entry ({}, {}) is not finite", row + 1, col + 1)
            }
            Error::NotSquare { rows, cols } => {
                write!(f, "matrix is {}x{}, expected a square matrix", rows, cols)
            }
            Error::NegativeEntry { row, col, value } => write!(
                f,
                "entry ({}, {}) is negative ({})",
                row + 1,
                col + 1,
                value
            ),
            Error::RowSumViolation { row, sum } => {
                write!(f, "row {} sums to {}, expected 1", row + 1, sum)
            }
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {}, found {}", expected, found)
            }
            Error::InvalidTolerance => write!(f, "tolerances must be strictly positive"),
            Error::IndexOutOfRange { index, len } => {
                write!(f, "index {} out of range for size {}", index + 1, len)
            }
            Error::Singular => write!(f, "matrix is singular"),
            Error::RankDeficient { rank, cols } => write!(
                f,
                "matrix has rank {} but {} columns; full column rank required",
                rank, cols
            ),
            Error::NotStronglyConnected => write!(f, "vertex set is not strongly connected"),
            Error::ZeroTrace { step } => write!(
                f,
                "trace vanished at step {} of the out-forest recursion",
                step
            ),
            Error::ResidualTooLarge { residual } => {
                write!(f, "limit residual |L J| = {:e} exceeds tolerance", residual)
            }
            Error::NoConvergence { iterations } => {
                write!(f, "no convergence after {} iterations", iterations)
            }
            Error::RankAssertionFailed { rank, expected } => write!(
                f,
                "basis of the consensus region has rank {}, expected {}",
                rank, expected
            ),
            Error::SingularZ => write!(f, "matrix Z is numerically singular"),
            Error::ZeroXi => write!(f, "shift xi must be nonzero"),
            Error::ImproperMatrix { class, period } => {
                write!(f, "matrix is not proper: final class {{")?;
                for (k, v) in class.iter().enumerate() {
                    if k > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{}", v + 1)?;
                }
                write!(
                    f,
                    "}} has period {}; powers of P do not converge",
                    period
                )
            }
            Error::TooLarge { size, cap } => {
                write!(f, "size {} exceeds the enumeration cap {}", size, cap)
            }
            Error::CrossCheckFailed { check, deviation } => {
                write!(f, "cross-check `{}` failed (deviation {:e})", check, deviation)
            }
        }
    }
}

impl core::error::Error for Error {}
