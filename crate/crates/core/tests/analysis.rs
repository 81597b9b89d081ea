use num_rational::BigRational;
use num_traits::{One, Zero};

use cgsieve::analysis::*;
use cgsieve::characters::CharacterTable;

#[test]
fn qn_envelope_examples() {
    let r = qn_bound_check(5, &BigRational::new(1.into(), 25.into())).unwrap();
    assert!(r.ratio < 2.0);
    let r = qn_bound_check(7, &z_three_halves(7)).unwrap();
    assert!(r.ratio < 2.0);
    // near z = 0 the envelope tends to sqrt(2 pi n) and q_n to 1
    let tiny = BigRational::new(1.into(), 1_000_000_000.into());
    let r = qn_bound_check(6, &tiny).unwrap();
    assert!(r.envelope >= 1.0 && (r.qn - 1.0).abs() < 1e-6);
    assert!(qn_polynomial(6).unwrap().eval(&BigRational::zero()).is_one());
}

#[test]
fn conjecture_scan_eight_and_range() {
    let r = conjecture_scan(&CharacterTable::compute(8)).unwrap();
    assert!(r.a_emp < 10.0);
    assert!(r.classes.iter().all(|c| c.t >= 1));
    for n in 2..=12 {
        let r = conjecture_scan(&CharacterTable::compute(n)).unwrap();
        assert!(r.is_finite());
        assert!(r.big_cycles.violations.is_empty());
        assert!(r.ribbon_locations.passes, "n={n}");
    }
}

#[test]
fn smoothness_examples() {
    let r = smoothness_scan(&CharacterTable::compute(3), None).unwrap();
    let max = r.rows.iter().filter(|x| x.big).map(|x| x.smoothness.clone()).max().unwrap();
    assert_eq!(max, BigRational::from_integer(6.into()));
    let r10 = smoothness_scan(&CharacterTable::compute(10), None).unwrap();
    assert!(r10.max_dimension_smoothness < 10.0 * 10f64.sqrt());
    assert!(r10.rows.iter().all(|x| x.smoothness >= BigRational::one()));
}

#[test]
fn closure_examples() {
    assert!(really_big_closure_check(&CharacterTable::compute(3)).unwrap().max_escaping.is_zero());
    let r = really_big_closure_check(&CharacterTable::compute(10)).unwrap();
    assert!(r.max_escaping_f64 >= 0.0 && r.max_escaping_f64 < 0.05, "{}", r.max_escaping_f64);
}

#[test]
fn width_examples() {
    for n in 3..=15 {
        let r = width_check(&CharacterTable::compute(n)).unwrap();
        assert!(r.passes, "n={n}");
    }
    let t = CharacterTable::compute(15);
    let sets = big_sets(&t).unwrap();
    let row = t.index_of(&cgsieve::Partition::row(15)).unwrap();
    assert!(!sets.big.contains(&row));
    assert!(width_check(&t).unwrap().max_width < 15);
}

#[test]
fn collision_bound_up_to_seven() {
    for n in 2..=7 {
        assert!(collision_bound_check(&CharacterTable::compute(n)).unwrap().passes);
    }
}
