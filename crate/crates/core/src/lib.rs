#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod analytic;
pub mod arith;
pub mod correlations;
pub mod error;
pub mod eulerprod;
pub mod gl2;
pub mod lrep;
pub mod numfield;
pub mod par;
pub mod quad;
pub mod series;
pub mod sieve;
pub mod symfunc;
pub mod zeta;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/number-fields.md")]
    mod number_fields {}
    #[doc = include_str!("../../../book/src/coefficients.md")]
    mod coefficients {}
    #[doc = include_str!("../../../book/src/power-sieve.md")]
    mod power_sieve {}
    #[doc = include_str!("../../../book/src/euler-products.md")]
    mod euler_products {}
    #[doc = include_str!("../../../book/src/smoothed-sums.md")]
    mod smoothed_sums {}
    #[doc = include_str!("../../../book/src/zero-correlations.md")]
    mod zero_correlations {}
    #[doc = include_str!("../../../book/src/command-line.md")]
    mod command_line {}
}
