//! Unlabeled forest shapes.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shape of a sieve forest. Node `i` is a leaf (`None`) or has two children
/// with smaller ids. Every node has at most one parent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Option<(usize, usize)>>", into = "Vec<Option<(usize, usize)>>")]
pub struct Topology {
    children: Vec<Option<(usize, usize)>>,
    parent: Vec<Option<usize>>,
}

impl Topology {
    pub fn new(children: Vec<Option<(usize, usize)>>) -> Result<Self> {
        let mut parent = vec![None; children.len()];
        for (id, ch) in children.iter().enumerate() {
            if let Some((a, b)) = *ch {
                if a == b || a >= id || b >= id {
                    return Err(Error::InvalidTopology(format!(
                        "node {id} has children ({a},{b}); children must be distinct and older"
                    )));
                }
                for c in [a, b] {
                    if let Some(p) = parent[c] {
                        return Err(Error::InvalidTopology(format!("node {c} has parents {p} and {id}")));
                    }
                    parent[c] = Some(id);
                }
            }
        }
        Ok(Topology { children, parent })
    }

    /// `count` isolated leaves.
    pub fn isolated(count: usize) -> Self {
        Topology::new(vec![None; count]).expect("leaves only")
    }

    /// Two leaves and their parent.
    pub fn cherry() -> Self {
        Topology::new(vec![None, None, Some((0, 1))]).expect("valid cherry")
    }

    pub fn len(&self) -> usize {
        self.children.len()
    }

    pub fn is_empty(&self) -> bool {
        self.children.is_empty()
    }

    pub fn children(&self, id: usize) -> Option<(usize, usize)> {
        self.children[id]
    }

    pub fn parent(&self, id: usize) -> Option<usize> {
        self.parent[id]
    }

    pub fn is_leaf(&self, id: usize) -> bool {
        self.children[id].is_none()
    }

    pub fn leaf_count(&self) -> usize {
        self.children.iter().filter(|c| c.is_none()).count()
    }

    pub fn roots(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.parent[i].is_none()).collect()
    }

    /// Node ids of the subtree at `root`, children before parents.
    pub fn subtree(&self, root: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![(root, false)];
        while let Some((id, expanded)) = stack.pop() {
            match (self.children[id], expanded) {
                (Some((a, b)), false) => {
                    stack.push((id, true));
                    stack.push((b, false));
                    stack.push((a, false));
                }
                _ => out.push(id),
            }
        }
        out
    }

    /// Leaf sets I_i, with leaves numbered by their order among node ids.
    pub fn leaf_sets(&self) -> Vec<BTreeSet<usize>> {
        let mut ordinal = vec![usize::MAX; self.len()];
        let mut next = 0;
        for id in 0..self.len() {
            if self.is_leaf(id) {
                ordinal[id] = next;
                next += 1;
            }
        }
        let mut sets: Vec<BTreeSet<usize>> = Vec::with_capacity(self.len());
        for id in 0..self.len() {
            let set = match self.children[id] {
                None => BTreeSet::from([ordinal[id]]),
                Some((a, b)) => sets[a].union(&sets[b]).copied().collect(),
            };
            sets.push(set);
        }
        sets
    }

    /// Any two leaf sets are disjoint or nested.
    pub fn is_laminar(&self) -> bool {
        let sets = self.leaf_sets();
        sets.iter().enumerate().all(|(i, x)| {
            sets[i + 1..]
                .iter()
                .all(|y| x.is_disjoint(y) || x.is_subset(y) || y.is_subset(x))
        })
    }
}

impl TryFrom<Vec<Option<(usize, usize)>>> for Topology {
    type Error = Error;
    fn try_from(children: Vec<Option<(usize, usize)>>) -> Result<Self> {
        Topology::new(children)
    }
}

impl From<Topology> for Vec<Option<(usize, usize)>> {
    fn from(t: Topology) -> Self {
        t.children
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(t: &Topology, id: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match t.children[id] {
                None => write!(f, "*"),
                Some((a, b)) => {
                    write!(f, "(")?;
                    go(t, a, f)?;
                    write!(f, " ")?;
                    go(t, b, f)?;
                    write!(f, ")")
                }
            }
        }
        for (k, r) in self.roots().into_iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            go(self, r, f)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Shape {
    Leaf,
    Node(Box<Shape>, Box<Shape>),
}

impl Shape {
    fn nodes(&self) -> usize {
        match self {
            Shape::Leaf => 1,
            Shape::Node(a, b) => 1 + a.nodes() + b.nodes(),
        }
    }
}

/// Binary tree shapes with exactly `leaves` leaves, children ordered.
fn shapes(leaves: usize) -> Vec<Shape> {
    if leaves == 1 {
        return vec![Shape::Leaf];
    }
    let mut out = Vec::new();
    for left in 1..=leaves / 2 {
        let right = leaves - left;
        for a in shapes(left) {
            for b in shapes(right) {
                if left == right && a > b {
                    continue;
                }
                out.push(Shape::Node(Box::new(a.clone()), Box::new(b)));
            }
        }
    }
    out
}

fn build(trees: &[Shape]) -> Topology {
    fn count_leaves(s: &Shape) -> usize {
        match s {
            Shape::Leaf => 1,
            Shape::Node(a, b) => count_leaves(a) + count_leaves(b),
        }
    }
    fn place(s: &Shape, next_leaf: &mut usize, children: &mut Vec<Option<(usize, usize)>>) -> usize {
        match s {
            Shape::Leaf => {
                let id = *next_leaf;
                *next_leaf += 1;
                id
            }
            Shape::Node(a, b) => {
                let x = place(a, next_leaf, children);
                let y = place(b, next_leaf, children);
                children.push(Some((x, y)));
                children.len() - 1
            }
        }
    }
    let leaves: usize = trees.iter().map(count_leaves).sum();
    let mut children = vec![None; leaves];
    let mut next_leaf = 0;
    for t in trees {
        place(t, &mut next_leaf, &mut children);
    }
    Topology::new(children).expect("constructed shapes are valid")
}

/// All forest shapes with between 1 and `max_nodes` nodes, one per
/// isomorphism class.
pub fn enumerate_topologies(max_nodes: usize) -> Vec<Topology> {
    let trees: Vec<Shape> = (1..=max_nodes.div_ceil(2)).flat_map(shapes).filter(|s| s.nodes() <= max_nodes).collect();
    let mut out = Vec::new();
    // multisets of trees, as non-decreasing index sequences
    fn rec(trees: &[Shape], start: usize, budget: usize, cur: &mut Vec<Shape>, out: &mut Vec<Topology>) {
        if !cur.is_empty() {
            out.push(build(cur));
        }
        for i in start..trees.len() {
            let k = trees[i].nodes();
            if k <= budget {
                cur.push(trees[i].clone());
                rec(trees, i, budget - k, cur, out);
                cur.pop();
            }
        }
    }
    rec(&trees, 0, max_nodes, &mut Vec::new(), &mut out);
    out
}
