//! Exact character theory of S_n and S_n wr Z_2, and simulation and exact
//! scoring of Clebsch-Gordan sieves for the hidden subgroup problem that
//! arises from Graph Isomorphism.
//!
//! Module map:
//! - [`partitions`]: partitions, hook lengths, class sizes, cycle statistics.
//! - [`characters`]: Murnaghan-Nakayama characters, Kronecker multiplicities,
//!   Plancherel / natural distributions, smoothness, dimension thresholds.
//! - [`wreath`]: irreps, classes and distributions of S_n wr Z_2.
//! - [`sieve`]: labeled forests, policies, simulation, exact transcript
//!   probabilities.
//! - [`oracle`]: brute-force dense-operator verification on tiny groups.
//! - [`analysis`]: finite-n scans of the character bounds.

pub mod analysis;
pub mod characters;
pub mod error;
pub mod exact;
pub mod limits;
pub mod oracle;
pub mod partitions;
pub mod report;
pub mod sieve;
pub mod stats;
pub mod wreath;

pub use error::{Error, Result};
pub use exact::ExactProb;
pub use limits::Limits;
pub use partitions::{CycleType, Irrep, Partition};
