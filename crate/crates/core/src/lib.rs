//! Exact finite-depth harmonic analysis on bounded Vilenkin groups.
//!
//! Everything is computed on the group truncated at a depth `K`: functions
//! are step functions on level-`N` cylinders, and every kernel, mean and
//! maximal operator used here is evaluated exactly (up to floating point)
//! for indices below `M_K`.

pub mod counterexample;
pub mod error;
pub mod function;
pub mod group;
pub mod hardy;
pub mod kernels;
pub mod lemmas;
pub mod maximal;
pub mod par;
pub mod transform;
pub mod verify;

pub use error::{Error, Result};
pub use function::LevelFunction;
pub use group::{CosetClass, Cylinder, GroupPoint, NatExpansion, VilenkinBase};
pub use kernels::{FejerConvention, HarmonicSums, MeanStream};
pub use maximal::{MaximalOp, Trend, WeightSpec};
pub use num_complex::Complex64;
pub use par::Execution;
pub use transform::Spectrum;
