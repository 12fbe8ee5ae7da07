pub mod arith;
pub mod error;
pub mod expr;
pub mod iwasawa;
pub mod linalg;
pub mod padic;
pub mod pbw;
pub mod quotient;
pub mod rep;
pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/overview.md")]
    mod overview {}
    #[doc = include_str!("../../../book/src/algebra.md")]
    mod algebra {}
    #[doc = include_str!("../../../book/src/quotients.md")]
    mod quotients {}
    #[doc = include_str!("../../../book/src/representations.md")]
    mod representations {}
    #[doc = include_str!("../../../book/src/padic.md")]
    mod padic {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
