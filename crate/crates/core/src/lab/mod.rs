//! Instance streams, theorem verification and counterexample search.

pub mod expr;
pub mod search;
pub mod streams;
pub mod theorems;

pub use expr::{Expr, Subject};
pub use search::{search_counterexample, Counterexample, SearchBounds};
pub use streams::{
    enumerate_abelian_groups, enumerate_modules_over_zn, module_of_type, InstanceStream,
};
pub use theorems::{verify_theorem, StreamParams, VerificationResult, Violation, THEOREM_IDS};
