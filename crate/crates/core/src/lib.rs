//! Probabilities of tree properties on Poisson(λ) Galton–Watson trees.
//!
//! A tree is encoded by its seed, the sequence of child counts in
//! breadth-first order. Properties are finite-state observers of that
//! sequence ([`property`]); truncating them at a horizon `k` yields events
//! decided by the first `k` counts, whose probabilities are computed
//! exactly with error intervals ([`exact`]), expanded as power series and
//! continued to complex `λ` ([`exact::series`], [`exact::disc`]), or
//! estimated by sampling ([`montecarlo`]).

pub mod analytic;
pub mod cli;
pub mod error;
pub mod exact;
pub mod fit;
pub mod montecarlo;
pub mod property;
pub mod seed;

pub use error::{Error, Result};
pub use exact::{exact_prob, ProbInterval};
pub use montecarlo::{Execution, MCEstimate};
pub use property::{parse_property, Property, TautProperty, Truncation, Verdict};
pub use seed::SeedPrefix;
