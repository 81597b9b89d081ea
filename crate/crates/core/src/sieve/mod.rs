//! The Clebsch-Gordan sieve: labeled forests, selection policies,
//! simulation under either hypothesis, and exact transcript probabilities.

pub mod dp;
pub mod policy;
pub mod simulate;
pub mod topology;
pub mod transcript;

pub use crate::wreath::SubgroupSpec;
pub use dp::{ExactEngine, Score, Target, TvReport};
pub use policy::{builtin_policies, Decision, PolicySpec, SelectionPolicy};
pub use simulate::{derive_seed, Simulator};
pub use topology::{enumerate_topologies, Topology};
pub use transcript::{Event, Forest, ForestNode, Transcript};
