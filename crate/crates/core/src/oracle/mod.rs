//! Brute-force verification on explicit small groups: regular
//! representations, isotypic projectors and transcript probabilities as
//! traces of operator products, all in double precision.

pub mod group;
pub mod operator;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::sieve::Topology;

pub use group::GroupTable;
pub use operator::{node_projector, projector_h, regular_rep, trace_of_product, DenseOperator, RegisterSum, Registers};

/// Hidden subgroup for the oracle: trivial, or {1, m} for an involution m.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleSubgroup {
    Trivial,
    Involution(u32),
}

/// Node projectors of a labeled topology, registers numbered by leaf order.
pub fn transcript_projectors(group: &GroupTable, topology: &Topology, labels: &[usize]) -> Result<Vec<RegisterSum>> {
    if labels.len() != topology.len() {
        return Err(Error::InvalidArgument(format!("{} labels for {} nodes", labels.len(), topology.len())));
    }
    if let Some(&bad) = labels.iter().find(|&&s| s >= group.irreps()) {
        return Err(Error::InvalidArgument(format!("irrep index {bad} out of range")));
    }
    Ok(topology
        .leaf_sets()
        .into_iter()
        .zip(labels)
        .map(|(set, &s)| RegisterSum::node(group, s, set.into_iter().collect()))
        .collect())
}

/// Probability of a labeled forest: `tr(Pi^T) / |G|^l` for the trivial
/// subgroup and `tr(Pi^T Pi_H) / tr(Pi_H)` for H = {1, m}.
pub fn oracle_transcript_probability(
    group: &GroupTable,
    topology: &Topology,
    labels: &[usize],
    subgroup: OracleSubgroup,
    limits: &Limits,
) -> Result<f64> {
    let ell = topology.leaf_count();
    let nodes = transcript_projectors(group, topology, labels)?;
    let side = (group.order() as f64).powi(ell as i32);
    match subgroup {
        OracleSubgroup::Trivial => Ok(trace_of_product(group, ell, &nodes, limits)? / side),
        OracleSubgroup::Involution(m) => {
            if m == group.identity() || group.mul(m, m) != group.identity() {
                return Err(Error::InvalidArgument("m must be an involution".into()));
            }
            let mut factors: Vec<RegisterSum> = (0..ell).map(|j| RegisterSum::half_sum(group, m, j)).collect();
            factors.extend(nodes);
            let index = (group.order() as f64 / 2.0).powi(ell as i32);
            Ok(trace_of_product(group, ell, &factors, limits)? / index)
        }
    }
}
