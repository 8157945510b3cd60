//! Combinatorial machinery for density thresholds in random discrete structures.
//!
//! The crate builds "configuration hypergraphs" whose edges are the forbidden
//! patterns of a density statement (arithmetic progressions, homothetic copies
//! of a point set, solutions of a linear system, copies of a fixed graph), and
//! provides the quantities that control when a sparse random subset inherits
//! the dense statement:
//!
//! * exact threshold exponents from matrix and hypergraph densities
//!   ([`matrix`], [`density`]),
//! * second-moment boundedness diagnostics with an exact closed form for the
//!   expected squared degree sum ([`boundedness`]),
//! * an exact maximum configuration-free-subset solver with certified bounds
//!   under truncation ([`solver`]),
//! * a seeded, schedule-independent Monte-Carlo harness that estimates where
//!   the success probability of the density statement crosses 1/2
//!   ([`harness`]).
//!
//! All randomness flows through a documented counter-based generator
//! ([`seeds`]), so every experiment is reproducible bit for bit.

pub mod boundedness;
pub mod density;
pub mod error;
pub mod generators;
pub mod harness;
pub mod hypergraph;
pub mod matrix;
pub mod seeds;
pub mod solver;
pub mod subset;

pub use error::Error;

/// Crate result alias.
pub type Result<T> = std::result::Result<T, Error>;
