pub mod arith;
pub mod cardinal;
pub mod error;
pub mod identity;
pub mod quadform;
pub mod spectral;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/overview.md")]
    mod overview {}
    #[doc = include_str!("../../../book/src/arith.md")]
    mod arith {}
    #[doc = include_str!("../../../book/src/identities.md")]
    mod identities {}
    #[doc = include_str!("../../../book/src/spectral.md")]
    mod spectral {}
    #[doc = include_str!("../../../book/src/cardinal.md")]
    mod cardinal {}
    #[doc = include_str!("../../../book/src/quadform.md")]
    mod quadform {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
