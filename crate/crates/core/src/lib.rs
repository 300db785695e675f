//! Kneading theory toolkit for one-parameter unimodal families `x -> mu * f(x)`.
//!
//! The crate computes kneading sequences, orders them by the parity-lexicographic
//! order, locates superstable parameters for admissible finite words, counts
//! admissible words by period and estimates topological entropy. The `sweep`
//! module checks, on a parameter grid, that the kneading sequence and the entropy
//! are monotone in the parameter.

pub mod entropy;
pub mod enumeration;
pub mod error;
pub mod family;
pub mod inverse;
pub mod kneading;
pub mod schwarzian;
pub mod solver;
pub mod sweep;
pub mod symbolic;

pub use error::{KneadError, Result};
pub use family::{iterate, iterate_derivative, BuiltinFamily, OrbitPoint, UnimodalFamily};
pub use kneading::{itinerary, kneading_sequence, KneadingResult, Termination};
pub use symbolic::{Symbol, Word, WordKind};
