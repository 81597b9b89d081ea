//! Combine-and-measure simulation.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::rational_to_f64;
use crate::sieve::dp::{DpVec, ExactEngine, Kernel};
use crate::sieve::policy::{Decision, PolicySpec, SelectionPolicy};
use crate::sieve::transcript::{Forest, Transcript};
use crate::wreath::{SubgroupSpec, WreathTable};

/// splitmix64 step; used to derive independent run and policy seeds.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

const POLICY_STREAM: u64 = 0x706f_6c69_6379;

struct Sampler {
    outcomes: Vec<usize>,
    dist: WeightedIndex<f64>,
}

impl Sampler {
    fn new(entries: &[(usize, BigRational)]) -> Result<Self> {
        let outcomes = entries.iter().map(|(i, _)| *i).collect();
        let weights: Vec<f64> = entries.iter().map(|(_, p)| rational_to_f64(p)).collect();
        let dist = WeightedIndex::new(weights)
            .map_err(|e| Error::InvalidArgument(format!("cannot sample distribution: {e}")))?;
        Ok(Sampler { outcomes, dist })
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> usize {
        self.outcomes[self.dist.sample(rng)]
    }
}

/// Runs the sieve against a hidden subgroup. Samplers are cached and shared
/// between runs.
pub struct Simulator {
    engine: Arc<ExactEngine>,
    leaf: [OnceLock<Arc<Sampler>>; 2],
    natural: RwLock<HashMap<(usize, usize), Arc<Sampler>>>,
}

impl Simulator {
    pub fn new(engine: Arc<ExactEngine>) -> Self {
        Simulator { engine, leaf: [OnceLock::new(), OnceLock::new()], natural: RwLock::new(HashMap::new()) }
    }

    pub fn table(&self) -> &Arc<WreathTable> {
        self.engine.table()
    }

    pub fn engine(&self) -> &Arc<ExactEngine> {
        &self.engine
    }

    fn leaf_sampler(&self, subgroup: SubgroupSpec) -> Result<Arc<Sampler>> {
        let slot = &self.leaf[subgroup as usize];
        if let Some(s) = slot.get() {
            return Ok(Arc::clone(s));
        }
        let table = self.table();
        let entries: Vec<(usize, BigRational)> = (0..table.irreps().len())
            .map(|i| (i, table.leaf_mass(i, subgroup)))
            .filter(|(_, p)| !p.is_zero())
            .collect();
        let s = Arc::new(Sampler::new(&entries)?);
        Ok(Arc::clone(slot.get_or_init(|| s)))
    }

    fn natural_sampler(&self, a: usize, b: usize) -> Result<Arc<Sampler>> {
        let key = (a.min(b), a.max(b));
        if let Some(s) = self.natural.read().expect("sampler lock poisoned").get(&key) {
            return Ok(Arc::clone(s));
        }
        let s = Arc::new(Sampler::new(&self.table().natural_by_index(a, b)?)?);
        self.natural.write().expect("sampler lock poisoned").insert(key, Arc::clone(&s));
        Ok(s)
    }

    /// One run. Leaves are i.i.d. from the leaf distribution; each combine
    /// draws the new label from its exact conditional given the forest.
    pub fn simulate(
        &self,
        policy: &mut dyn SelectionPolicy,
        leaf_count: usize,
        subgroup: SubgroupSpec,
        seed: u64,
    ) -> Result<Transcript> {
        if leaf_count == 0 {
            return Err(Error::InvalidArgument("leaf_count must be at least 1".into()));
        }
        let table = Arc::clone(self.table());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let kernel = match subgroup {
            SubgroupSpec::Trivial => None,
            SubgroupSpec::OrderTwo => Some(self.engine.relative_kernel()?),
        };
        let leaf = self.leaf_sampler(subgroup)?;
        let labels: Vec<usize> = (0..leaf_count).map(|_| leaf.sample(&mut rng)).collect();
        let mut vectors: Vec<Option<DpVec>> = match &kernel {
            Some(k) => labels.iter().map(|&s| Some(DpVec::Small(k.leaf(s).to_vec()))).collect(),
            None => Vec::new(),
        };
        let mut forest = Forest::from_leaves(table.n(), labels.iter().map(|&s| table.irreps()[s].clone()).collect())?;
        let mut idx = labels;

        loop {
            let (a, b) = match policy.select(&forest, &table)? {
                Decision::Stop => break,
                Decision::Combine(a, b) => (a, b),
            };
            if a == b || !forest.is_root(a) || !forest.is_root(b) {
                return Err(Error::InvalidArgument(format!("policy chose ({a},{b}), not two distinct roots")));
            }
            let tau = match &kernel {
                None => self.natural_sampler(idx[a], idx[b])?.sample(&mut rng),
                Some(k) => {
                    let u = vectors[a].take().expect("root vector").hadamard(vectors[b].as_ref().expect("root vector"));
                    vectors[b] = None;
                    let tau = sample_conditional(k.as_ref(), &table, &u, &mut rng)?;
                    vectors.push(Some(DpVec::apply(k.matrix(tau), &u)));
                    tau
                }
            };
            forest.combine(a, b, table.irreps()[tau].clone())?;
            idx.push(tau);
        }
        Ok(Transcript { subgroup, seed, forest })
    }

    /// `runs` independent runs with seeds derived from `master_seed`, in
    /// parallel on the current rayon pool. Output order follows run index.
    pub fn simulate_batch(
        &self,
        policy: &PolicySpec,
        leaf_count: usize,
        subgroup: SubgroupSpec,
        master_seed: u64,
        runs: usize,
    ) -> Result<Vec<Transcript>> {
        (0..runs as u64)
            .into_par_iter()
            .map(|i| {
                let seed = derive_seed(master_seed, i);
                let mut pol = policy.build(derive_seed(seed, POLICY_STREAM));
                self.simulate(pol.as_mut(), leaf_count, subgroup, seed)
            })
            .collect()
    }

    /// Re-runs the single run behind `seed`.
    pub fn replay_seed(&self, policy: &PolicySpec, leaf_count: usize, subgroup: SubgroupSpec, seed: u64) -> Result<Transcript> {
        let mut pol = policy.build(derive_seed(seed, POLICY_STREAM));
        self.simulate(pol.as_mut(), leaf_count, subgroup, seed)
    }
}

/// Draws tau with probability proportional to `(M_tau u)[root]`. Those
/// weights sum to `|G| u[root]`.
fn sample_conditional(kernel: &dyn Kernel, table: &WreathTable, u: &DpVec, rng: &mut ChaCha8Rng) -> Result<usize> {
    let root = kernel.root_state();
    let weights: Vec<BigInt> = (0..table.irreps().len())
        .map(|t| DpVec::dot_row(kernel.matrix(t), root, u))
        .collect();
    let total: BigInt = weights.iter().sum();
    if !total.is_positive() || weights.iter().any(|w| w.is_negative()) {
        return Err(Error::InvalidArgument("conditional weights are not a distribution".into()));
    }
    let entries: Vec<(usize, BigRational)> = weights
        .into_iter()
        .enumerate()
        .filter(|(_, w)| !w.is_zero())
        .map(|(t, w)| (t, BigRational::new(w, total.clone())))
        .collect();
    Ok(Sampler::new(&entries)?.sample(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::CharacterTable;
    use crate::limits::Limits;

    fn sim(n: usize) -> Simulator {
        let t = Arc::new(WreathTable::new(Arc::new(CharacterTable::compute(n))).unwrap());
        Simulator::new(Arc::new(ExactEngine::new(t, Limits::default())))
    }

    #[test]
    fn seeds_differ() {
        let s: std::collections::HashSet<u64> = (0..1000).map(|i| derive_seed(42, i)).collect();
        assert_eq!(s.len(), 1000);
        assert_ne!(derive_seed(1, 0), derive_seed(2, 0));
    }

    #[test]
    fn deterministic_given_seed() {
        let s = sim(3);
        for sub in [SubgroupSpec::Trivial, SubgroupSpec::OrderTwo] {
            let spec: PolicySpec = "random".parse().unwrap();
            let a = s.simulate_batch(&spec, 6, sub, 9, 20).unwrap();
            let b = s.simulate_batch(&spec, 6, sub, 9, 20).unwrap();
            assert_eq!(a, b);
            assert_eq!(s.replay_seed(&spec, 6, sub, a[3].seed).unwrap(), a[3]);
            for t in &a {
                assert_eq!(t.forest.roots().len(), 1);
                assert!(t.forest.topology().is_laminar());
            }
        }
    }

    #[test]
    fn conditional_weights_sum() {
        let s = sim(2);
        let k = s.engine().relative_kernel().unwrap();
        let t = s.table();
        let g = BigInt::from(t.order().clone());
        for x in 0..t.irreps().len() {
            for y in 0..t.irreps().len() {
                let u = DpVec::Small(k.leaf(x).to_vec()).hadamard(&DpVec::Small(k.leaf(y).to_vec()));
                let total: BigInt = (0..t.irreps().len()).map(|tau| DpVec::dot_row(k.matrix(tau), k.root_state(), &u)).sum();
                assert_eq!(total, &g * u.get(k.root_state()));
            }
        }
    }

    #[test]
    fn order_two_beyond_budget_fails() {
        let s = sim(4);
        let mut pol = PolicySpec::GreedyHomogeneous { max_combines: None }.build(0);
        assert!(matches!(s.simulate(pol.as_mut(), 2, SubgroupSpec::OrderTwo, 1), Err(Error::Budget(_))));
        assert!(s.simulate(pol.as_mut(), 2, SubgroupSpec::Trivial, 1).is_ok());
    }
}
