//! Exact verification toolkit for an obstructed, slope-stable rank-2 bundle
//! on a smooth (3,3) hypersurface `X` in `P2 x P2`.
//!
//! The algebra is generic over [`scalar::Ring`] / [`scalar::Field`]; the
//! aliases below fix the scalar to arbitrary-precision rationals, which is
//! what every check uses.

pub mod chern;
pub mod cohom;
pub mod construct;
pub mod deform;
pub mod linalg;
pub mod poly;
pub mod report;
pub mod scalar;
pub mod split;
pub mod stability;

/// Arbitrary-precision rational numbers.
pub type Rational = num_rational::BigRational;

pub type BiFormQ = poly::BiForm<Rational>;
pub type BinFormQ = poly::BinForm<Rational>;
pub type DualBinFormQ = poly::DualBinForm<Rational>;
pub type UniPolyQ = poly::UniPoly<Rational>;
pub type MatrixQ = linalg::Matrix<Rational>;
pub type H2ClassQ = chern::H2Class<Rational>;
pub type H4ClassQ = chern::H4Class<Rational>;
