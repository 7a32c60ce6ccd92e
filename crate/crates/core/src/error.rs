use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Everything that can go wrong. Theory violations found while checking
/// are not errors; they travel inside the report types.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    NotPrime(u64),
    ZeroPrecision,
    DescriptorMismatch,
    /// The element was required to be a unit; carries its valuation.
    NonUnit { valuation: u32 },
    /// Extension polynomial not irreducible modulo p.
    Reducible,
    /// f(0) is divisible by p.
    ZeroRoot,
    /// Newton lifting was asked to lift a root where f' vanishes mod p.
    MultipleRoot,
    /// Polynomial gcd requested over a ring that is not a field.
    UnsupportedRing,
    BoundExhausted { bound: u128 },
    /// A problem size exceeds a configured limit.
    Capacity { what: &'static str, required: u128, limit: u128 },
    /// Inputs violate a hypothesis the theory needs.
    OutOfTheory(String),
    /// The parameter table is only stated for p > 3.
    OutOfTable { p: u64 },
    /// f_k search hit its cap without an integer certificate.
    Undecided { cap: u32 },
    Overflow,
    Parse(String),
    /// Internal consistency check tripped. Signals a bug.
    Internal(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotPrime(p) => write!(f, "{p} is not prime"),
            Error::ZeroPrecision => f.write_str("precision k must be at least 1"),
            Error::DescriptorMismatch => f.write_str("operands live in different rings"),
            Error::NonUnit { valuation } => write!(f, "element is not a unit (valuation {valuation})"),
            Error::Reducible => f.write_str("extension polynomial is reducible mod p"),
            Error::ZeroRoot => f.write_str("constant term is divisible by p (zero root)"),
            Error::MultipleRoot => f.write_str("root is multiple: derivative vanishes mod p"),
            Error::UnsupportedRing => f.write_str("gcd needs a field (k = 1)"),
            Error::BoundExhausted { bound } => write!(f, "no order found up to bound {bound}"),
            Error::Capacity { what, required, limit } => {
                write!(f, "{what}: need {required}, limit is {limit}")
            }
            Error::OutOfTheory(why) => write!(f, "outside the theory's hypotheses: {why}"),
            Error::OutOfTable { p } => write!(f, "the parameter table is stated for p > 3, got p = {p}"),
            Error::Undecided { cap } => write!(f, "threshold undecided at search cap {cap}"),
            Error::Overflow => f.write_str("integer overflow"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
            Error::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
