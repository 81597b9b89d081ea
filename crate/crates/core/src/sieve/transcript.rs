//! Labeled forests and transcripts.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sieve::topology::Topology;
use crate::wreath::{SubgroupSpec, WreathIrrep};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestNode {
    pub id: usize,
    pub label: WreathIrrep,
    pub children: Vec<usize>,
    #[serde(skip)]
    pub leaf_set: BTreeSet<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Event {
    pub pair: [usize; 2],
    pub label: WreathIrrep,
}

/// The labeled forest a selection policy is allowed to see.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Forest {
    n: usize,
    nodes: Vec<ForestNode>,
    events: Vec<Event>,
    is_root: Vec<bool>,
}

impl Forest {
    pub fn from_leaves(n: usize, labels: Vec<WreathIrrep>) -> Result<Self> {
        let mut nodes = Vec::with_capacity(labels.len());
        for (id, label) in labels.into_iter().enumerate() {
            check_n(n, &label)?;
            nodes.push(ForestNode { id, label, children: Vec::new(), leaf_set: BTreeSet::from([id]) });
        }
        let is_root = vec![true; nodes.len()];
        Ok(Forest { n, nodes, events: Vec::new(), is_root })
    }

    /// Rebuilds a forest by replaying `events` over the given leaves.
    pub fn replay(n: usize, leaves: Vec<WreathIrrep>, events: &[Event]) -> Result<Self> {
        let mut forest = Forest::from_leaves(n, leaves)?;
        for e in events {
            forest.combine(e.pair[0], e.pair[1], e.label.clone())?;
        }
        Ok(forest)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> &[ForestNode] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> &ForestNode {
        &self.nodes[id]
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes.len() - self.events.len()
    }

    pub fn roots(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| self.is_root[i]).collect()
    }

    pub fn is_root(&self, id: usize) -> bool {
        self.is_root.get(id).copied().unwrap_or(false)
    }

    /// Merges roots `a` and `b` under a new node labeled `label`; returns its id.
    pub fn combine(&mut self, a: usize, b: usize, label: WreathIrrep) -> Result<usize> {
        if a == b || !self.is_root(a) || !self.is_root(b) {
            return Err(Error::MalformedTranscript(format!("cannot combine {a} and {b}: need two distinct roots")));
        }
        check_n(self.n, &label)?;
        let id = self.nodes.len();
        let leaf_set = self.nodes[a].leaf_set.union(&self.nodes[b].leaf_set).copied().collect();
        self.nodes.push(ForestNode { id, label: label.clone(), children: vec![a, b], leaf_set });
        self.is_root[a] = false;
        self.is_root[b] = false;
        self.is_root.push(true);
        self.events.push(Event { pair: [a, b], label });
        Ok(id)
    }

    pub fn topology(&self) -> Topology {
        Topology::new(
            self.nodes
                .iter()
                .map(|n| match n.children[..] {
                    [a, b] => Some((a, b)),
                    _ => None,
                })
                .collect(),
        )
        .expect("forests built by combine are valid")
    }

    pub fn labels(&self) -> Vec<WreathIrrep> {
        self.nodes.iter().map(|n| n.label.clone()).collect()
    }
}

fn check_n(n: usize, label: &WreathIrrep) -> Result<()> {
    if label.n() != n {
        return Err(Error::SizeMismatch { left: n, right: label.n() });
    }
    Ok(())
}

/// A completed sieve run: the forest plus the hypothesis it was sampled
/// under and the seed that reproduces it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub subgroup: SubgroupSpec,
    pub seed: u64,
    pub forest: Forest,
}

#[derive(Serialize, Deserialize)]
struct TranscriptJson {
    n: usize,
    subgroup: SubgroupSpec,
    seed: u64,
    nodes: Vec<ForestNode>,
    events: Vec<Event>,
}

impl Serialize for Transcript {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        TranscriptJson {
            n: self.forest.n,
            subgroup: self.subgroup,
            seed: self.seed,
            nodes: self.forest.nodes.clone(),
            events: self.forest.events.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Transcript {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = TranscriptJson::deserialize(deserializer)?;
        Transcript::from_json_parts(raw).map_err(serde::de::Error::custom)
    }
}

impl Transcript {
    fn from_json_parts(raw: TranscriptJson) -> Result<Self> {
        let leaf_count = raw
            .nodes
            .len()
            .checked_sub(raw.events.len())
            .ok_or_else(|| Error::MalformedTranscript("more events than nodes".into()))?;
        let mut leaves = Vec::with_capacity(leaf_count);
        for (i, node) in raw.nodes.iter().enumerate() {
            if node.id != i {
                return Err(Error::MalformedTranscript(format!("node at position {i} has id {}", node.id)));
            }
            if i < leaf_count {
                if !node.children.is_empty() {
                    return Err(Error::MalformedTranscript(format!("node {i} should be a leaf")));
                }
                leaves.push(node.label.clone());
            }
        }
        let forest = Forest::replay(raw.n, leaves, &raw.events)?;
        for (given, rebuilt) in raw.nodes.iter().zip(&forest.nodes) {
            if given.label != rebuilt.label || given.children != rebuilt.children {
                return Err(Error::MalformedTranscript(format!(
                    "node {} disagrees with the event log",
                    given.id
                )));
            }
        }
        Ok(Transcript { subgroup: raw.subgroup, seed: raw.seed, forest })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: TranscriptJson = serde_json::from_str(s)?;
        Transcript::from_json_parts(raw)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("transcripts serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::Partition;
    use crate::wreath::Sign;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn sample() -> Transcript {
        let inh = WreathIrrep::inhomogeneous(p("2"), p("1+1")).unwrap();
        let hom = WreathIrrep::homogeneous(p("2"), Sign::Minus);
        let mut f = Forest::from_leaves(2, vec![inh.clone(), inh.clone(), hom.clone()]).unwrap();
        let x = f.combine(0, 1, hom.clone()).unwrap();
        f.combine(x, 2, WreathIrrep::trivial(2)).unwrap();
        Transcript { subgroup: SubgroupSpec::OrderTwo, seed: 7, forest: f }
    }

    #[test]
    fn combine_rules() {
        let t = sample();
        assert_eq!(t.forest.roots(), vec![4]);
        assert_eq!(t.forest.node(4).leaf_set, BTreeSet::from([0, 1, 2]));
        let mut f = t.forest.clone();
        assert!(f.combine(0, 4, WreathIrrep::trivial(2)).is_err());
        assert!(f.combine(4, 4, WreathIrrep::trivial(2)).is_err());
        assert!(f.topology().is_laminar());
    }

    #[test]
    fn json_round_trip_and_replay() {
        let t = sample();
        let s = t.to_json();
        assert!(s.starts_with(r#"{"n":2,"subgroup":"order2","seed":7,"nodes":[{"id":0,"label":{"kind":"inhom","a":"2","b":"1+1"},"children":[]}"#));
        let back = Transcript::from_json(&s).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn rejects_inconsistent_logs() {
        let t = sample();
        let mut v: serde_json::Value = serde_json::from_str(&t.to_json()).unwrap();
        v["nodes"][3]["label"] = serde_json::json!({"kind":"hom","a":"2","sign":"+"});
        assert!(Transcript::from_json(&v.to_string()).is_err());
        let mut v: serde_json::Value = serde_json::from_str(&t.to_json()).unwrap();
        v["events"][1]["pair"] = serde_json::json!([0, 2]);
        assert!(Transcript::from_json(&v.to_string()).is_err());
        let mut v: serde_json::Value = serde_json::from_str(&t.to_json()).unwrap();
        v["n"] = serde_json::json!(3);
        assert!(Transcript::from_json(&v.to_string()).is_err());
    }
}
