//! Subset combinatorics of groups, made computational.
//!
//! The library classifies subsets of finitely generated group models into
//! the combinatorial size classes (thin, n-thin, sparse, thick, large,
//! prethick, small, and the disparse proxy), constructs the explicit witness
//! sets separating them, and estimates overlap densities. Every verdict
//! carries a replayable certificate: exact residue proofs where the
//! expression lives in the Periodic/Explicit algebra over the integers,
//! windowed evidence everywhere else.

pub mod cert;
pub mod classify;
pub mod construct;
pub mod corpus;
pub mod density;
pub mod error;
pub mod groups;
pub mod sets;

pub use error::{Error, Result};

/// Environment variable overriding the element budget for enumerations.
pub const BUDGET_ENV: &str = "SUBSETCOMB_ELEMENT_BUDGET";

/// Default cap on elements any single enumeration may produce.
pub const DEFAULT_BUDGET: u64 = 1 << 22;

/// Element budget: the environment override when set, the default otherwise.
pub fn element_budget() -> u64 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}
