//! Integer partitions, Young-diagram geometry and cycle-type statistics.
//!
//! A [`Partition`] names both an irrep of S_n (a Young diagram) and a
//! conjugacy class (a cycle type, fixed points stored as parts of size 1).
//! The aliases [`Irrep`] and [`CycleType`] keep the two roles apart in
//! signatures.
//!
//! Partitions are totally ordered first by size and then in
//! reverse-lexicographic order, so `(3) < (2,1) < (1,1,1)`. That is the
//! canonical order used for enumeration, map keys and all emitted output.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::factorial;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<usize>,
}

/// A partition in its role as an irrep label.
pub type Irrep = Partition;
/// A partition in its role as a cycle type (conjugacy class of S_n).
pub type CycleType = Partition;

impl Partition {
    /// Validates and wraps a list of parts.
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::InvalidPartition(format!("{parts:?} has a zero part")));
        }
        if !parts.windows(2).all(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPartition(format!("{parts:?} is not non-increasing")));
        }
        Ok(Partition { parts })
    }

    /// Sorts arbitrary positive parts into a partition.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Result<Self> {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition::new(parts)
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// The one-row partition `(n)`: trivial irrep, or the class of n-cycles.
    pub fn row(n: usize) -> Self {
        if n == 0 {
            Partition::empty()
        } else {
            Partition { parts: vec![n] }
        }
    }

    /// The one-column partition `(1^n)`: sign irrep, or the identity class.
    pub fn column(n: usize) -> Self {
        Partition { parts: vec![1; n] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// True for the cycle type of the identity permutation.
    pub fn is_identity_type(&self) -> bool {
        self.parts.iter().all(|&p| p == 1)
    }

    pub fn conjugate(&self) -> Partition {
        let width = self.parts.first().copied().unwrap_or(0);
        let parts = (0..width)
            .map(|j| self.parts.iter().take_while(|&&p| p > j).count())
            .collect();
        Partition { parts }
    }

    /// Hook length of cell `(row, col)`; the cell must lie in the diagram.
    pub fn hook_length(&self, row: usize, col: usize) -> usize {
        let arm = self.parts[row] - col - 1;
        let leg = self.parts[row + 1..].iter().take_while(|&&p| p > col).count();
        arm + leg + 1
    }

    fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| (0..p).map(move |j| (i, j)))
    }

    /// Multiplicities `m_k` of each part size `k`, indexed by `k`.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut m = vec![0; self.parts.first().copied().unwrap_or(0) + 1];
        for &p in &self.parts {
            m[p] += 1;
        }
        m
    }

    /// "3+2+1" form used in maps, file formats and on the command line.
    pub fn to_plus_string(&self) -> String {
        self.parts
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join("+")
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size()
            .cmp(&other.size())
            .then_with(|| other.parts.cmp(&self.parts))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_plus_string())
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition{:?}", self.parts)
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Accepts "3+2+1"; the empty string is the empty partition.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = s
            .split('+')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidPartition(format!("cannot parse {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.parts.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<usize>::deserialize(deserializer)?;
        Partition::new(parts).map_err(serde::de::Error::custom)
    }
}

/// Support, nontrivial cycle count and transposition length of a permutation
/// with the given cycle type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermStats {
    pub support: usize,
    pub nontrivial_cycles: usize,
    pub transposition_length: usize,
}

/// All partitions of `n` in reverse-lexicographic order.
pub fn enumerate_partitions(n: usize) -> Vec<Partition> {
    fn rec(remaining: usize, max_part: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition { parts: prefix.clone() });
            return;
        }
        for first in (1..=remaining.min(max_part)).rev() {
            prefix.push(first);
            rec(remaining - first, first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Dimension of the irrep `lambda`, by the hook-length formula.
pub fn dimension(lambda: &Irrep) -> BigUint {
    let hooks = lambda
        .cells()
        .fold(BigUint::from(1u32), |acc, (i, j)| acc * lambda.hook_length(i, j));
    factorial(lambda.size()) / hooks
}

/// Size of the conjugacy class with the given cycle type: n!/prod k^m_k m_k!.
pub fn class_size(cycle_type: &CycleType) -> BigUint {
    let mut centralizer = BigUint::from(1u32);
    for (k, &m) in cycle_type.multiplicities().iter().enumerate().skip(1) {
        if m > 0 {
            centralizer *= BigUint::from(k).pow(m as u32) * factorial(m);
        }
    }
    factorial(cycle_type.size()) / centralizer
}

pub fn perm_stats(cycle_type: &CycleType) -> PermStats {
    let nontrivial: Vec<usize> = cycle_type.parts().iter().copied().filter(|&p| p >= 2).collect();
    let support: usize = nontrivial.iter().sum();
    PermStats {
        support,
        nontrivial_cycles: nontrivial.len(),
        transposition_length: support - nontrivial.len(),
    }
}

/// Number of length-`k` ribbon tiles (rim hooks) removable from `lambda`.
///
/// Removable k-rim hooks are in bijection with cells of hook length k.
pub fn count_ribbon_locations(lambda: &Partition, k: usize) -> usize {
    lambda.cells().filter(|&(i, j)| lambda.hook_length(i, j) == k).count()
}

/// `(width, height)` of the Young diagram: first part and number of parts.
pub fn width_height(lambda: &Partition) -> (usize, usize) {
    (lambda.parts().first().copied().unwrap_or(0), lambda.len())
}

/// Cycle type of a permutation given in one-line notation (`perm[i]` is the
/// image of `i`).
pub fn cycle_type_of(perm: &[usize]) -> CycleType {
    let mut seen = vec![false; perm.len()];
    let mut lens = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        lens.push(len);
    }
    Partition::from_unsorted(lens).expect("cycle lengths are positive")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(enumerate_partitions(0), vec![Partition::empty()]);
        assert_eq!(enumerate_partitions(4).len(), 5);
        assert_eq!(
            enumerate_partitions(3),
            vec![p(&[3]), p(&[2, 1]), p(&[1, 1, 1])]
        );
        let ps = enumerate_partitions(20);
        assert_eq!(ps.len(), 627);
        let delta = (2.0f64 / 3.0).sqrt() * std::f64::consts::PI;
        assert!((627.0f64) < (delta * 20f64.sqrt()).exp());
    }

    #[test]
    fn enumeration_is_sorted_in_canonical_order() {
        for n in 0..10 {
            let ps = enumerate_partitions(n);
            assert!(ps.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn rejects_bad_parts() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
        assert!("3+x".parse::<Partition>().is_err());
        assert_eq!("3+2+1".parse::<Partition>().unwrap(), p(&[3, 2, 1]));
        assert_eq!(p(&[3, 2, 1]).to_string(), "3+2+1");
    }

    #[test]
    fn dimensions() {
        assert_eq!(dimension(&p(&[4])), BigUint::from(1u32));
        assert_eq!(dimension(&p(&[2, 1])), BigUint::from(2u32));
        assert_eq!(dimension(&p(&[3, 2])), BigUint::from(5u32));
        assert_eq!(dimension(&p(&[3, 2, 1])), BigUint::from(16u32));
        assert_eq!(dimension(&Partition::empty()), BigUint::from(1u32));
    }

    #[test]
    fn class_sizes() {
        assert_eq!(class_size(&p(&[1, 1, 1])), BigUint::from(1u32));
        assert_eq!(class_size(&p(&[2, 1])), BigUint::from(3u32));
        assert_eq!(class_size(&p(&[3])), BigUint::from(2u32));
        assert_eq!(class_size(&p(&[2, 2])), BigUint::from(3u32));
    }

    #[test]
    fn stats() {
        let id = perm_stats(&p(&[1, 1, 1, 1]));
        assert_eq!((id.support, id.nontrivial_cycles, id.transposition_length), (0, 0, 0));
        assert_eq!(perm_stats(&p(&[5, 1])).transposition_length, 4);
        let s = perm_stats(&p(&[2, 2]));
        assert_eq!((s.support, s.nontrivial_cycles, s.transposition_length), (4, 2, 2));
    }

    #[test]
    fn ribbons_and_shape() {
        assert_eq!(count_ribbon_locations(&p(&[1]), 1), 1);
        assert_eq!(count_ribbon_locations(&p(&[2, 1]), 3), 1);
        assert_eq!(count_ribbon_locations(&p(&[2, 1]), 2), 0);
        assert_eq!(count_ribbon_locations(&p(&[2, 2]), 2), 2);
        assert_eq!(width_height(&p(&[5])), (5, 1));
        assert_eq!(width_height(&p(&[2, 2])), (2, 2));
        assert_eq!(width_height(&p(&[3, 2, 1])), (3, 3));
    }

    #[test]
    fn conjugates() {
        assert_eq!(p(&[3, 1]).conjugate(), p(&[2, 1, 1]));
        assert_eq!(p(&[3, 2, 1]).conjugate(), p(&[3, 2, 1]));
        assert_eq!(Partition::empty().conjugate(), Partition::empty());
    }

    #[test]
    fn cycle_types_of_permutations() {
        assert_eq!(cycle_type_of(&[1, 2, 0, 3]), p(&[3, 1]));
        assert_eq!(cycle_type_of(&[0, 1]), p(&[1, 1]));
    }

    #[test]
    fn serde_as_arrays() {
        let json = serde_json::to_string(&p(&[3, 2, 1])).unwrap();
        assert_eq!(json, "[3,2,1]");
        assert!(serde_json::from_str::<Partition>("[1,2]").is_err());
    }
}
