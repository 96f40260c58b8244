use core::fmt;

/// Errors raised by the exact arithmetic and the construction pipeline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// A checked integer operation left the 128-bit range.
    Overflow,
    /// Division by the zero element of ℤ[√k].
    DivisionByZero,
    /// The radicand is a perfect square or smaller than 2.
    InvalidRadicand(i64),
    /// A construction parameter failed validation.
    InvalidParameter(&'static str),
    /// The slope magnitude interval `{lo, …, hi}` is empty.
    EmptyMagnitudeInterval { lo: i64, hi: i64 },
    /// Lattice projection slopes must be given in lowest terms.
    NotCoprime { p: i64, q: i64 },
    /// An operation that needs at least one line received none.
    EmptyLineSet,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Overflow => f.write_str("integer overflow in exact arithmetic"),
            Error::DivisionByZero => f.write_str("division by zero"),
            Error::InvalidRadicand(k) if *k < 2 => {
                write!(f, "k must be at least 2 (got {k})")
            }
            Error::InvalidRadicand(k) => write!(f, "k must be non-square (got {k})"),
            Error::InvalidParameter(msg) => f.write_str(msg),
            Error::EmptyMagnitudeInterval { lo, hi } => write!(
                f,
                "slope magnitude interval {{{lo}, …, {hi}}} is empty; lower c or raise M"
            ),
            Error::NotCoprime { p, q } => {
                write!(f, "projection slope {p}/{q} is not in lowest terms")
            }
            Error::EmptyLineSet => f.write_str("line set is empty"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
