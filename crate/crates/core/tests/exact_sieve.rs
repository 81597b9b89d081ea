use std::sync::Arc;

use num_rational::BigRational;
use num_traits::One;

use cgsieve::characters::CharacterTable;
use cgsieve::exact::rational_to_f64;
use cgsieve::oracle::{oracle_transcript_probability, GroupTable, OracleSubgroup};
use cgsieve::sieve::{enumerate_topologies, ExactEngine, PolicySpec, Simulator, SubgroupSpec, Topology};
use cgsieve::wreath::WreathTable;
use cgsieve::Limits;

fn engine(n: usize) -> ExactEngine {
    let t = Arc::new(WreathTable::new(Arc::new(CharacterTable::compute(n))).unwrap());
    ExactEngine::new(t, Limits::default())
}

fn r(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

#[test]
fn single_leaf_total_variation() {
    assert_eq!(engine(2).tv_distance(&Topology::isolated(1)).unwrap().tv, r(1, 4));
    assert_eq!(engine(3).tv_distance(&Topology::isolated(1)).unwrap().tv, r(5, 36));
}

#[test]
fn tv_comes_from_homogeneous_labels_only() {
    for n in [2, 3] {
        let e = engine(n);
        for topo in enumerate_topologies(3) {
            let tv = e.tv_distance(&topo).unwrap();
            assert!(tv.total_trivial.is_one() && tv.total_order2.is_one());
            assert_eq!(tv.inhomogeneous_contribution, BigRational::from_integer(0.into()), "n={n} {topo}");
        }
    }
}

#[test]
fn three_leaf_oracle_agreement() {
    let e = engine(2);
    let g = GroupTable::wreath(e.table()).unwrap();
    let m = g.involution().unwrap();
    let topo = Topology::new(vec![None, None, None, Some((0, 1)), Some((3, 2))]).unwrap();
    let dist = e.labeling_distribution(&topo, SubgroupSpec::OrderTwo).unwrap();
    for (labels, p) in dist.iter().step_by(7) {
        let idx: Vec<usize> = labels.iter().map(|s| e.table().irrep_index(s).unwrap()).collect();
        let o = oracle_transcript_probability(&g, &topo, &idx, OracleSubgroup::Involution(m), &Limits::default()).unwrap();
        assert!((o - rational_to_f64(p)).abs() < 1e-9);
        let t = e.transcript_probability(&topo, labels, SubgroupSpec::Trivial).unwrap();
        let ot = oracle_transcript_probability(&g, &topo, &idx, OracleSubgroup::Trivial, &Limits::default()).unwrap();
        assert!((ot - rational_to_f64(&t)).abs() < 1e-9);
    }
}

#[test]
fn trivial_dp_matches_compositional_form() {
    let e = engine(3);
    for topo in enumerate_topologies(4) {
        for (labels, p) in e.labeling_distribution(&topo, SubgroupSpec::Trivial).unwrap().iter().step_by(11) {
            assert_eq!(&e.compositional_trivial(&topo, labels).unwrap(), p);
        }
    }
}

#[test]
fn scores_of_simulated_runs() {
    let e = Arc::new(engine(3));
    let sim = Simulator::new(Arc::clone(&e));
    let policy: PolicySpec = "greedy:3".parse().unwrap();
    for t in sim.simulate_batch(&policy, 4, SubgroupSpec::OrderTwo, 3, 30).unwrap() {
        let s = e.score(&t).unwrap();
        let topo = t.forest.topology();
        let labels = t.forest.labels();
        assert_eq!(s.order2, e.transcript_probability(&topo, &labels, SubgroupSpec::OrderTwo).unwrap());
        if let Some(lr) = s.likelihood_ratio {
            assert_eq!(lr * &s.trivial, s.order2);
        }
    }
}

#[test]
fn exact_budget_is_enforced() {
    let e = engine(4);
    assert!(matches!(
        e.labeling_distribution(&Topology::cherry(), SubgroupSpec::OrderTwo),
        Err(cgsieve::Error::Budget(_))
    ));
    assert!(e.transcript_probability(&Topology::isolated(1), &[e.table().irreps()[0].clone()], SubgroupSpec::Trivial).is_ok());
}
