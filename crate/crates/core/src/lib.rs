//! Modular units from Siegel functions: high-precision evaluation of
//! η, φ, Δ, j and g_r, Siegel-product bookkeeping, Shimura reciprocity
//! conjugates and exact certification of the resulting algebraic numbers.

pub mod classfield;
pub mod error;
pub mod identities;
pub mod numerics;
pub mod pipeline;
pub mod qseries;
pub mod recognition;
pub mod siegel;

pub use error::{Error, Result};
pub use numerics::{EvalContext, QuadraticPoint, TauSpec};
