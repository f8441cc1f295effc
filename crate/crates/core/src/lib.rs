//! Exact certificates and numerical scans for Gabor systems whose window is a
//! centered B-spline.

pub mod bspline;
pub mod cli;
pub mod error;
pub mod exact;
pub mod gabor;
pub mod obstruction;
pub mod scanner;

pub use error::{Error, Result};
