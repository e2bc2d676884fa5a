//! Exact arithmetic on finite sets of rationals.

mod ops;
pub(crate) mod scaled;
mod scalar;
mod set;

pub use ops::{
    difference_set, dilate, dyadic_profile, floor_rational_power, k_fold_product, k_fold_product_capped,
    k_fold_sum, k_fold_sum_capped, normalize_positive, productset, ratio_set, signed_combination,
    signed_combination_capped, sumset, Caps, DyadicProfile, DEFAULT_ELEMENT_CAP,
};
pub use scalar::{common_denominator, ParseScalarError, Scalar};
pub use set::FiniteSet;

#[derive(Debug, thiserror::Error)]
pub enum SetError {
    #[error("no nonzero elements")]
    NoNonzero,
    #[error("sumset blowup: result exceeds {cap} elements or {cap} x 64 pair additions")]
    /// Raised once the result outgrows `cap`, or a capped sum would need
    /// more than `64 cap` pair additions.
    Blowup { cap: usize },
    #[error("ratio set undefined: set contains zero")]
    ZeroElement,
    #[error("dilation by zero")]
    ZeroDilation,
    #[error("{op} requires a positive set")]
    NotPositive { op: &'static str },
    #[error("{0}")]
    InvalidArgument(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
