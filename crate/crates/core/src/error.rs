use thiserror::Error;

/// Errors raised by the exact-arithmetic layer and the modules built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arithmetic overflow in 128-bit integer computation")]
    Overflow,
    #[error("result is not integral: {0}")]
    NonIntegral(&'static str),
    #[error("degenerate input: {0}")]
    Degenerate(&'static str),
    #[error("form is not in family {0}")]
    NotInFamily(u8),
    #[error("form is not fixed by the given J")]
    NotFixed,
    #[error("leading coefficient a4 is zero")]
    ZeroLeading,
    #[error("invalid family index {0}")]
    BadFamily(i64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("bound {0} is outside the supported range")]
    BoundTooLarge(String),
    #[error("internal error: {0}")]
    Internal(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
