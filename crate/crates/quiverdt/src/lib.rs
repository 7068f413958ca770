//! Quantized Donaldson-Thomas invariants of quivers, computed three ways and
//! cross-checked: the Harder-Narasimhan wall-crossing recursion with plethystic
//! logarithm, the cohomological Hall algebra shuffle presentation of the
//! semistable and stable parts, and brute-force point counts over small prime
//! fields.
//!
//! All arithmetic is exact. Series coefficients live in Q(v) with v standing
//! for q^(1/2); the only truncation anywhere is the dimension-vector box.

pub mod coha;
pub mod dt;
pub mod error;
pub mod linalg;
mod mpoly;
pub mod oracle;
mod par;
pub mod quiver;
pub mod ratfunc;
pub mod sample;
pub mod series;

pub use error::{Error, Result};
pub use quiver::{DimVector, Quiver, Slope, Stability};
pub use ratfunc::RatFunc;
pub use series::TwistedSeries;
