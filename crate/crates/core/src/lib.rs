//! Flat chains mod p on finite cell complexes.

pub mod chain;
pub mod cli;
pub mod cone;
pub mod cubical;
pub mod flatnorm;
pub mod gen;
pub mod io;
pub mod onedim;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/chains.md")]
    mod chains {}
    #[doc = include_str!("../../../book/src/flat_norms.md")]
    mod flat_norms {}
    #[doc = include_str!("../../../book/src/slicing.md")]
    mod slicing {}
    #[doc = include_str!("../../../book/src/deformation.md")]
    mod deformation {}
    #[doc = include_str!("../../../book/src/curves.md")]
    mod curves {}
    #[doc = include_str!("../../../book/src/cones.md")]
    mod cones {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
