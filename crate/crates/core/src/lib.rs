//! Numerical toolkit for Siegel cusp forms obtained as Poincare series of
//! holomorphic discrete series matrix coefficients on `Sp(2n, R)`.

pub mod discrete_series;
pub mod error;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod nonvanishing;
pub mod petersson;
pub mod poincare;
pub mod polynomial;
pub mod quadrature;
pub mod sampling;
pub mod special;
pub mod symplectic;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use quadrature::IntegralResult;
