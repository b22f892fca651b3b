//! Exact low-degree Eilenberg-Mac Lane cohomology of finite abelian groups,
//! quadratic-form traces, a formal Laurent expansion calculus, and a small
//! graded-algebra testbed that derives and trivializes extension obstructions.

pub mod calculus;
pub mod cli;
pub mod cohomology;
pub mod error;
pub mod group;
pub mod io;
pub mod linalg;
pub mod quadratic;
pub mod scalar;
pub mod testbed;

pub use error::{Error, Result};
pub use group::FiniteAbelianGroup;
pub use scalar::{Rat, Scalar};
