//! Empirical rate of homogeneous labels under the trivial hidden subgroup.

use std::collections::BTreeSet;
use std::ops::RangeInclusive;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::characters::{max_dimension, CharacterCache};
use crate::error::{Error, Result};
use crate::exact::rational_to_f64;
use crate::report::Table;
use crate::sieve::{derive_seed, ExactEngine, PolicySpec, Simulator, SubgroupSpec};
use crate::stats::binomial_z;
use crate::wreath::{collision_probability, WreathIrrep, WreathTable};

#[derive(Debug, Clone, Serialize)]
pub struct RateRow {
    pub n: usize,
    pub runs: usize,
    pub leaves_per_run: usize,
    /// fraction of runs with at least one homogeneous label anywhere
    pub run_rate: f64,
    /// fraction of leaves with a homogeneous label
    pub leaf_rate: f64,
    /// sum over lambda of P(lambda)^2
    #[serde(serialize_with = "crate::report::ser_display")]
    pub leaf_exact: BigRational,
    pub leaf_z: f64,
    /// largest P_coll over pairs of inhomogeneous labels that were combined
    pub max_observed_collision: f64,
    pub c_emp: f64,
    /// e^(-c_emp sqrt n)
    pub decay: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RateReport {
    pub policy: String,
    pub seed: u64,
    pub rows: Vec<RateRow>,
}

impl RateReport {
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(["n", "runs", "run rate", "leaf rate", "leaf exact", "leaf z", "max P_coll", "e^(-c sqrt n)"]);
        for r in &self.rows {
            t.push([
                r.n.to_string(),
                r.runs.to_string(),
                format!("{:.6}", r.run_rate),
                format!("{:.6}", r.leaf_rate),
                r.leaf_exact.to_string(),
                format!("{:.3}", r.leaf_z),
                format!("{:.6}", r.max_observed_collision),
                format!("{:.6}", r.decay),
            ]);
        }
        t
    }
}

pub fn homogeneous_rate_experiment(
    cache: &CharacterCache,
    n_range: RangeInclusive<usize>,
    leaf_count: usize,
    policy: &PolicySpec,
    runs: usize,
    seed: u64,
) -> Result<RateReport> {
    if runs == 0 || leaf_count == 0 {
        return Err(Error::InvalidArgument("runs and leaf_count must be positive".into()));
    }
    let mut rows = Vec::new();
    for n in n_range {
        let sym = cache.table(n)?;
        let table = Arc::new(WreathTable::new(Arc::clone(&sym))?);
        let sim = Simulator::new(Arc::new(ExactEngine::new(Arc::clone(&table), cache.limits().clone())));
        let transcripts = sim.simulate_batch(policy, leaf_count, SubgroupSpec::Trivial, derive_seed(seed, n as u64), runs)?;

        let order = BigRational::from_integer(sym.order().clone().into());
        let leaf_exact = (0..sym.len()).fold(BigRational::zero(), |acc, i| {
            let p = BigRational::from_integer((sym.dim(i) * sym.dim(i)).into()) / &order;
            acc + &p * &p
        });

        let mut hit_runs = 0u64;
        let mut hom_leaves = 0u64;
        let mut pairs = BTreeSet::new();
        for t in &transcripts {
            let nodes = t.forest.nodes();
            if nodes.iter().any(|x| x.label.is_homogeneous()) {
                hit_runs += 1;
            }
            hom_leaves += nodes[..t.forest.leaf_count()].iter().filter(|x| x.label.is_homogeneous()).count() as u64;
            for e in t.forest.events() {
                if let (WreathIrrep::Inhomogeneous { a, b }, WreathIrrep::Inhomogeneous { a: c, b: d }) =
                    (&nodes[e.pair[0]].label, &nodes[e.pair[1]].label)
                {
                    let key = if (a, b) <= (c, d) { (a, b, c, d) } else { (c, d, a, b) };
                    pairs.insert(key);
                }
            }
        }
        let mut max_coll = 0.0f64;
        for (a, b, c, d) in pairs {
            max_coll = max_coll.max(rational_to_f64(&collision_probability(&sym, a, b, c, d)?));
        }
        let trials = (runs * leaf_count) as u64;
        let c_emp = max_dimension(n)?.c_emp;
        rows.push(RateRow {
            n,
            runs,
            leaves_per_run: leaf_count,
            run_rate: hit_runs as f64 / runs as f64,
            leaf_rate: hom_leaves as f64 / trials as f64,
            leaf_z: binomial_z(hom_leaves, trials, rational_to_f64(&leaf_exact)),
            leaf_exact,
            max_observed_collision: max_coll,
            c_emp,
            decay: (-c_emp * (n as f64).sqrt()).exp(),
        });
    }
    Ok(RateReport { policy: policy.to_string(), seed, rows })
}
