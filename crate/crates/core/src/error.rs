use thiserror::Error;

/// Errors raised by the exact kernels.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} does not divide the field order {1}")]
    NotADivisor(u32, u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: Q(zeta_{0}) vs Q(zeta_{1})")]
    FieldMismatch(u32, u32),
    #[error("variable set mismatch")]
    VarSetMismatch,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("coefficient requested at degree {degree} but the series is only known below {precision}")]
    AbovePrecision { degree: String, precision: String },
    #[error("series has no finite precision; truncate it first")]
    ExactSeries,
    #[error("leading part is not a unit monomial: {0}")]
    NotAUnit(String),
    #[error("exp/log argument must have strictly positive degree terms only")]
    NonzeroConstantTerm,
    #[error("substitution would lose track of precision: {0}")]
    PrecisionLoss(String),
    #[error("exponent {0} is not on the exponent lattice 1/{1}")]
    OffLattice(String, i64),
    #[error("root of unity e^(2 pi i * {0}) is not in Q(zeta_{1})")]
    RootNotInField(String, u32),
    #[error("diagram is not balanced for n = {0}")]
    Unbalanced(u32),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(u32, u32),
    #[error("framing {0} is not in (1/{1})Z")]
    FramingNotIntegral(String, u32),
    #[error("invalid gerbe: b = {b} is not in Z - {k}/{n}")]
    InvalidGerbe { n: u32, k: u32, b: String },
    #[error("k(eta) undefined: {0}")]
    Appendix(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
