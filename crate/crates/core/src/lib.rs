//! A workbench for Boolean-function query complexity.
//!
//! * [`boolfn`]: truth tables, block flips, composition and the built-in functions.
//! * [`measures`]: degree, approximate degree, sensitivity, block sensitivity,
//!   certificate complexity and decision-tree depth.
//! * [`adversary`]: weight schemes, their verification, loads and bounds.
//! * [`compose`]: the product construction of weight schemes for iterated functions.
//! * [`matchings`]: perfect-matching relations for the unweighted adversary bound.
//! * [`qsim`]: a state-vector simulator of the query model and progress-measure checks.

pub mod adversary;
pub mod boolfn;
pub mod cli;
pub mod compose;
pub mod error;
pub mod lp;
pub mod matchings;
pub mod measures;
pub mod qsim;
pub mod weight;

pub use boolfn::{Assignment, BooleanFunction};
pub use error::{Error, Result};
pub use weight::{ExactWeight, RadicalSum, Weight};
