use alloc::string::String;

/// Errors raised by the library. Every variant is a domain error: the inputs
/// were well formed but the requested operation is undefined for them.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("the zero of the value group has no additive exponent")]
    ZeroHasNoExponent,
    #[error("{0} is not prime")]
    NotPrime(String),
    #[error("absolute-value base must exceed 1, got {0}")]
    BadBase(String),
    #[error("valuation kind {kind} is not defined at place {place}")]
    KindPlaceMismatch { kind: &'static str, place: String },
    #[error("{0} is not squarefree")]
    NotSquarefree(String),
    #[error("d = {0} does not define a quadratic field")]
    DegenerateD(String),
    #[error("element is not in the ring of integers")]
    NotIntegral,
    #[error("precision {prec} does not exceed the valuation {val}")]
    PrecisionTooLow { val: i64, prec: i64 },
    #[error("malformed place: {0}")]
    BadPlace(String),
    #[error("operands live at different places")]
    PlaceMismatch,
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("cannot invert {}", if *.exact { "an exact zero" } else { "an element that is zero to its precision" })]
    CannotInvert { exact: bool },
    #[error("valuation is indeterminate: every known digit is zero")]
    IndeterminateValuation,
    #[error("need {needed} digits of precision, have {available}")]
    InsufficientPrecision { needed: i64, available: i64 },
    #[error("element is not a uniformizer")]
    NotUniformizer,
    #[error("adele is not integral outside the given place set")]
    NotSAdele,
    #[error("ball radius must be nonzero")]
    ZeroRadius,
    #[error("enumeration of {0} classes exceeds the budget")]
    BudgetExceeded(String),
    #[error("adele does not lie in the open set")]
    NotInOpen,
    #[error("exponent does not fit a machine integer")]
    ExponentOverflow,
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ZeroHasNoExponent => "ZeroHasNoExponent",
            Error::NotPrime(_) => "NotPrime",
            Error::BadBase(_) => "BadBase",
            Error::KindPlaceMismatch { .. } => "KindPlaceMismatch",
            Error::NotSquarefree(_) => "NotSquarefree",
            Error::DegenerateD(_) => "DegenerateD",
            Error::NotIntegral => "NotIntegral",
            Error::PrecisionTooLow { .. } => "PrecisionTooLow",
            Error::BadPlace(_) => "BadPlace",
            Error::PlaceMismatch => "PlaceMismatch",
            Error::FieldMismatch => "FieldMismatch",
            Error::CannotInvert { .. } => "CannotInvert",
            Error::IndeterminateValuation => "IndeterminateValuation",
            Error::InsufficientPrecision { .. } => "InsufficientPrecision",
            Error::NotUniformizer => "NotUniformizer",
            Error::NotSAdele => "NotSAdele",
            Error::ZeroRadius => "ZeroRadius",
            Error::BudgetExceeded(_) => "BudgetExceeded",
            Error::NotInOpen => "NotInOpen",
            Error::ExponentOverflow => "ExponentOverflow",
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
