//! Weighted sum-of-translates functions `F(x, t) = J(t) + Σ ν_j K(t - x_j)`
//! on `[0, 1]`: exact interval maxima, minimax / maximin / equioscillation
//! solvers with brute-force oracles, and a randomized verification battery
//! for the structural theorems about them.

// `!(a >= b)` is used on purpose so that NaN lands on the failing side.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod ext;
pub mod fields;
pub mod formula;
pub mod golden;
pub mod interval;
pub mod kernels;
pub mod nodes;
pub mod rng;
pub mod schema;
pub mod solvers;
pub mod sumtrans;
pub mod verify;

pub use error::{Error, Result};
pub use ext::{ext_sum, ExtReal};
pub use fields::{Field, Piece};
pub use formula::Formula;
pub use interval::{Interval, PointSet};
pub use kernels::{Kernel, KernelFlags, KernelRegistry};
pub use nodes::{classify_simplex, NodeSystem, SimplexRegion};
pub use schema::ProblemDescriptor;
pub use solvers::{SolveOptions, SolveReport, SolveStatus};
pub use sumtrans::{MaximaVector, Problem, SupMode};
pub use verify::{CheckRegistry, CheckReport};
