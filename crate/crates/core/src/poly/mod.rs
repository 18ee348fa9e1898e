//! Exact polynomial arithmetic: bihomogeneous forms on P2 x P2, binary
//! forms, dual-number forms, and the small amount of elimination theory the
//! checks need.

mod binform;
mod biform;
mod dual;
pub mod roots;
pub mod text;
mod univariate;
pub mod zeros;

use thiserror::Error;

pub use biform::{bidegree_of, monomial_vanishes_on_fibre, monomials, BiForm, Exponent, Var};
pub use binform::BinForm;
pub use dual::DualBinForm;
pub use univariate::UniPoly;
pub use zeros::{common_zeros_p2, CommonZeros, ProjPoint, ZerosError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("bidegree mismatch: {left:?} vs {right:?}")]
    BidegreeMismatch { left: (u32, u32), right: (u32, u32) },
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: u32, right: u32 },
    #[error("term of bidegree {found:?} in a form of bidegree {expected:?}")]
    NotBihomogeneous { expected: (u32, u32), found: (u32, u32) },
    #[error("expected a ternary form, got bidegree {bidegree:?}")]
    NotTernary { bidegree: (u32, u32) },
    #[error("all input forms are zero")]
    AllZero,
}
