//! Adaptive selection policies.
//!
//! A policy sees the labeled forest and the public wreath table only; it
//! never learns the hidden subgroup or the sampler's random state.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sieve::transcript::Forest;
use crate::wreath::WreathTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Stop,
    Combine(usize, usize),
}

pub trait SelectionPolicy: Send {
    fn name(&self) -> String;
    fn select(&mut self, forest: &Forest, table: &WreathTable) -> Result<Decision>;
}

fn budget_left(forest: &Forest, max_combines: Option<usize>) -> bool {
    forest.roots().len() >= 2 && max_combines.is_none_or(|m| forest.events().len() < m)
}

/// Combines a uniformly random pair of roots.
pub struct RandomPair {
    rng: ChaCha8Rng,
    max_combines: Option<usize>,
}

impl RandomPair {
    pub fn new(seed: u64, max_combines: Option<usize>) -> Self {
        RandomPair { rng: ChaCha8Rng::seed_from_u64(seed), max_combines }
    }
}

impl SelectionPolicy for RandomPair {
    fn name(&self) -> String {
        "random".into()
    }

    fn select(&mut self, forest: &Forest, _table: &WreathTable) -> Result<Decision> {
        if !budget_left(forest, self.max_combines) {
            return Ok(Decision::Stop);
        }
        let roots = forest.roots();
        let i = self.rng.random_range(0..roots.len());
        let mut j = self.rng.random_range(0..roots.len() - 1);
        if j >= i {
            j += 1;
        }
        let (a, b) = (roots[i.min(j)], roots[i.max(j)]);
        Ok(Decision::Combine(a, b))
    }
}

/// Combines the root pair whose natural distribution puts the most mass on
/// homogeneous irreps; ties go to the lexicographically smallest pair.
pub struct GreedyHomogeneous {
    max_combines: Option<usize>,
}

impl GreedyHomogeneous {
    pub fn new(max_combines: Option<usize>) -> Self {
        GreedyHomogeneous { max_combines }
    }
}

impl SelectionPolicy for GreedyHomogeneous {
    fn name(&self) -> String {
        "greedy".into()
    }

    fn select(&mut self, forest: &Forest, table: &WreathTable) -> Result<Decision> {
        if !budget_left(forest, self.max_combines) {
            return Ok(Decision::Stop);
        }
        let roots = forest.roots();
        let mut best: Option<(BigRational, usize, usize)> = None;
        for (k, &a) in roots.iter().enumerate() {
            let ia = table.irrep_index(&forest.node(a).label)?;
            for &b in &roots[k + 1..] {
                let ib = table.irrep_index(&forest.node(b).label)?;
                let mass = table.homogeneous_mass_by_index(ia, ib)?;
                if best.as_ref().is_none_or(|(m, _, _)| mass > *m) {
                    best = Some((mass, a, b));
                }
            }
        }
        let (_, a, b) = best.expect("at least two roots");
        Ok(Decision::Combine(a, b))
    }
}

/// Replays a fixed list of node-id pairs, then stops.
pub struct FixedSchedule {
    script: Vec<(usize, usize)>,
    pos: usize,
}

impl FixedSchedule {
    pub fn new(script: Vec<(usize, usize)>) -> Self {
        FixedSchedule { script, pos: 0 }
    }
}

impl SelectionPolicy for FixedSchedule {
    fn name(&self) -> String {
        "fixed".into()
    }

    fn select(&mut self, forest: &Forest, _table: &WreathTable) -> Result<Decision> {
        let Some(&(a, b)) = self.script.get(self.pos) else {
            return Ok(Decision::Stop);
        };
        if a == b || !forest.is_root(a) || !forest.is_root(b) {
            return Err(Error::InvalidArgument(format!(
                "schedule step {} combines ({a},{b}), which are not two distinct roots",
                self.pos
            )));
        }
        self.pos += 1;
        Ok(Decision::Combine(a, b))
    }
}

/// Serializable description of a policy.
///
/// Text forms: `random`, `random:K`, `greedy`, `greedy:K` (at most K
/// combines) and `fixed:0-1,3-2` (a schedule of node-id pairs).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum PolicySpec {
    RandomPair { max_combines: Option<usize> },
    GreedyHomogeneous { max_combines: Option<usize> },
    FixedSchedule { script: Vec<(usize, usize)> },
}

impl PolicySpec {
    pub fn build(&self, seed: u64) -> Box<dyn SelectionPolicy> {
        match self {
            PolicySpec::RandomPair { max_combines } => Box::new(RandomPair::new(seed, *max_combines)),
            PolicySpec::GreedyHomogeneous { max_combines } => Box::new(GreedyHomogeneous::new(*max_combines)),
            PolicySpec::FixedSchedule { script } => Box::new(FixedSchedule::new(script.clone())),
        }
    }
}

pub fn builtin_policies() -> Vec<PolicySpec> {
    vec![
        PolicySpec::RandomPair { max_combines: None },
        PolicySpec::GreedyHomogeneous { max_combines: None },
        PolicySpec::FixedSchedule { script: Vec::new() },
    ]
}

impl fmt::Display for PolicySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (name, max) = match self {
            PolicySpec::RandomPair { max_combines } => ("random", max_combines),
            PolicySpec::GreedyHomogeneous { max_combines } => ("greedy", max_combines),
            PolicySpec::FixedSchedule { script } => {
                let steps: Vec<String> = script.iter().map(|(a, b)| format!("{a}-{b}")).collect();
                return write!(f, "fixed:{}", steps.join(","));
            }
        };
        match max {
            Some(k) => write!(f, "{name}:{k}"),
            None => write!(f, "{name}"),
        }
    }
}

impl FromStr for PolicySpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("cannot parse policy {s:?}"));
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let max = |arg: Option<&str>| -> Result<Option<usize>> {
            arg.map(|a| a.trim().parse().map_err(|_| bad())).transpose()
        };
        match name.trim() {
            "random" => Ok(PolicySpec::RandomPair { max_combines: max(arg)? }),
            "greedy" => Ok(PolicySpec::GreedyHomogeneous { max_combines: max(arg)? }),
            "fixed" => {
                let script = arg
                    .unwrap_or("")
                    .split(',')
                    .filter(|t| !t.trim().is_empty())
                    .map(|t| {
                        let (a, b) = t.split_once('-').ok_or_else(bad)?;
                        Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
                    })
                    .collect::<Result<_>>()?;
                Ok(PolicySpec::FixedSchedule { script })
            }
            _ => Err(bad()),
        }
    }
}

impl TryFrom<String> for PolicySpec {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<PolicySpec> for String {
    fn from(p: PolicySpec) -> String {
        p.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::CharacterTable;
    use crate::partitions::Partition;
    use crate::wreath::WreathIrrep;
    use std::sync::Arc;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn table(n: usize) -> WreathTable {
        WreathTable::new(Arc::new(CharacterTable::compute(n))).unwrap()
    }

    #[test]
    fn random_stops_with_one_root() {
        let t = table(2);
        let f = Forest::from_leaves(2, vec![WreathIrrep::trivial(2)]).unwrap();
        assert_eq!(RandomPair::new(1, None).select(&f, &t).unwrap(), Decision::Stop);
        let f = Forest::from_leaves(2, vec![WreathIrrep::trivial(2); 4]).unwrap();
        let mut pol = RandomPair::new(1, Some(0));
        assert_eq!(pol.select(&f, &t).unwrap(), Decision::Stop);
        let mut pol = RandomPair::new(1, None);
        for _ in 0..50 {
            let Decision::Combine(a, b) = pol.select(&f, &t).unwrap() else { panic!() };
            assert!(a < b && b < 4);
        }
    }

    #[test]
    fn greedy_picks_larger_homogeneous_mass() {
        let t = table(3);
        let x = WreathIrrep::inhomogeneous(p("3"), p("2+1")).unwrap();
        let y = WreathIrrep::inhomogeneous(p("3"), p("1+1+1")).unwrap();
        let f = Forest::from_leaves(3, vec![x.clone(), x.clone(), y.clone()]).unwrap();
        let xx = t.homogeneous_mass(&x, &x).unwrap();
        let xy = t.homogeneous_mass(&x, &y).unwrap();
        let expected = if xy > xx { Decision::Combine(0, 2) } else { Decision::Combine(0, 1) };
        assert_ne!(xx, xy);
        assert_eq!(GreedyHomogeneous::new(None).select(&f, &t).unwrap(), expected);
    }

    #[test]
    fn fixed_schedule_replays() {
        let t = table(2);
        let mut f = Forest::from_leaves(2, vec![WreathIrrep::trivial(2); 3]).unwrap();
        let mut pol = FixedSchedule::new(vec![(2, 0), (3, 1)]);
        assert_eq!(pol.select(&f, &t).unwrap(), Decision::Combine(2, 0));
        f.combine(2, 0, WreathIrrep::trivial(2)).unwrap();
        assert_eq!(pol.select(&f, &t).unwrap(), Decision::Combine(3, 1));
        f.combine(3, 1, WreathIrrep::trivial(2)).unwrap();
        assert_eq!(pol.select(&f, &t).unwrap(), Decision::Stop);
        let mut bad = FixedSchedule::new(vec![(0, 0)]);
        assert!(bad.select(&f, &t).is_err());
    }

    #[test]
    fn spec_strings() {
        for s in ["random", "random:3", "greedy", "greedy:1", "fixed:0-1,2-3", "fixed:"] {
            let spec: PolicySpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!("fixed:0+1".parse::<PolicySpec>().is_err());
        assert!("smart".parse::<PolicySpec>().is_err());
        assert_eq!(builtin_policies().len(), 3);
    }
}
