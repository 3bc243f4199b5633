//! Weight schemes for the quantum adversary bound.
//!
//! A scheme relates 0-inputs `A` to 1-inputs `B` with pair weights
//! `w(x, y)` and directional weights `w'(x, y, i)`, `w'(y, x, i)` on every
//! differing index, subject to `w'(x, y, i) w'(y, x, i) >= w(x, y)^2`.

pub mod builtin;
pub mod file;
pub mod loads;
pub mod relation;
pub mod scheme;

pub use builtin::{
    builtin_scheme, kushilevitz_cover_counts, scheme_f, scheme_g, scheme_h, BUILTIN_SCHEMES,
};
pub use file::{read_scheme, write_scheme, SchemeFile};
pub use loads::{balance, loads, ElementLoad, LoadReport};
pub use relation::{relation_bound, sensitive_partition, unit_scheme, RelationBound};
pub use scheme::{Pair, PairSpec, Side, Violation, VerifyReport, WeightScheme, MAX_VIOLATIONS};
