//! Finite-n scans of the character bounds for big irreps of S_n.
//!
//! Every scan also reports a "restricted" variant over irreps with
//! d^2 >= sqrt(n!). At small n every irrep is big, so the restricted set is
//! a convention of this toolkit for keeping the numbers informative.

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::qn::qn_polynomial;
use crate::characters::{is_big, is_really_big, max_dimension, CharacterTable, THRESHOLD_GUARD};
use crate::error::Result;
use crate::exact::{factorial, ln_biguint, ln_factorial, rational_to_f64};
use crate::partitions::{count_ribbon_locations, perm_stats, width_height, Partition};
use crate::report::Table;

/// Irrep indices of a table split by dimension threshold.
#[derive(Debug, Clone, Serialize)]
pub struct BigSets {
    pub big: Vec<usize>,
    pub really_big: Vec<usize>,
    /// d^4 >= n!
    pub restricted: Vec<usize>,
}

pub fn big_sets(table: &CharacterTable) -> Result<BigSets> {
    let fact = factorial(table.n());
    let mut sets = BigSets { big: Vec::new(), really_big: Vec::new(), restricted: Vec::new() };
    for (i, lambda) in table.partitions().iter().enumerate() {
        if is_big(lambda)? {
            sets.big.push(i);
        }
        if is_really_big(lambda)? {
            sets.really_big.push(i);
        }
        let d = table.dim(i);
        if d * d * d * d >= fact {
            sets.restricted.push(i);
        }
    }
    Ok(sets)
}

fn ln_abs(v: i128) -> f64 {
    (v.unsigned_abs() as f64).ln()
}

/// Which proven case, if any, covers a conjugacy class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// t > sqrt(n) ln n
    LargeSupport,
    /// a cycle of length >= 8 sqrt(n) ln n
    BigCycle,
    /// support < ln n
    ConstantSupport,
    Uncovered,
}

impl Regime {
    fn of(n: usize, support: usize, t: usize, longest: usize) -> Regime {
        let nf = n as f64;
        let scale = nf.sqrt() * nf.ln();
        if t as f64 > scale {
            Regime::LargeSupport
        } else if longest as f64 >= 8.0 * scale {
            Regime::BigCycle
        } else if (support as f64) < nf.ln() {
            Regime::ConstantSupport
        } else {
            Regime::Uncovered
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Regime::LargeSupport => "large-support",
            Regime::BigCycle => "big-cycle",
            Regime::ConstantSupport => "constant-support",
            Regime::Uncovered => "uncovered",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassRow {
    pub class: String,
    pub t: usize,
    pub support: usize,
    pub longest_cycle: usize,
    pub regime: Regime,
    /// big irrep maximizing |chi/d| n^(t/2); absent when chi vanishes on
    /// every big irrep
    pub worst_irrep: Option<String>,
    /// |chi/d| n^(t/2) at the worst irrep
    pub worst_ratio: f64,
    /// worst_ratio^(1/t)
    pub worst_root: f64,
    /// same over the restricted set
    pub worst_root_restricted: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtremalPair {
    pub irrep: String,
    pub class: String,
    pub t: usize,
    pub root: f64,
}

/// Character zeros forced by long cycles: a ribbon is at most w + h - 1
/// cells long, so chi vanishes on classes with a cycle of length >= w + h.
#[derive(Debug, Clone, Serialize)]
pub struct BigCyclesCheck {
    pub checked: usize,
    pub violations: Vec<(String, String)>,
    /// pairs whose longest cycle is exactly w + h - 1 and chi != 0
    pub boundary_nonzero: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RibbonCheck {
    pub max_locations: usize,
    pub bound: f64,
    pub passes: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjectureReport {
    pub n: usize,
    pub big_count: usize,
    pub restricted_count: usize,
    /// max over big irreps and classes with t >= 1 of (|chi/d| n^(t/2))^(1/t)
    pub a_emp: f64,
    pub a_emp_restricted: f64,
    pub extremal: Vec<ExtremalPair>,
    pub classes: Vec<ClassRow>,
    pub uncovered: Vec<ClassRow>,
    pub big_cycles: BigCyclesCheck,
    pub ribbon_locations: RibbonCheck,
}

impl ConjectureReport {
    pub fn is_finite(&self) -> bool {
        self.a_emp.is_finite() && self.a_emp_restricted.is_finite()
    }

    pub fn class_table(&self, rows: &[ClassRow]) -> Table {
        let mut t = Table::new(["class", "t", "support", "regime", "worst irrep", "ratio", "root", "root (restricted)"]);
        for r in rows {
            t.push([
                r.class.clone(),
                r.t.to_string(),
                r.support.to_string(),
                r.regime.name().to_string(),
                r.worst_irrep.clone().unwrap_or_else(|| "-".into()),
                format!("{:.6}", r.worst_ratio),
                format!("{:.6}", r.worst_root),
                format!("{:.6}", r.worst_root_restricted),
            ]);
        }
        t
    }
}

/// How many of the most extreme (irrep, class) pairs to list.
const EXTREMAL_LISTED: usize = 5;

pub fn conjecture_scan(table: &CharacterTable) -> Result<ConjectureReport> {
    let n = table.n();
    let sets = big_sets(table)?;
    let ln_n = (n as f64).ln();
    let parts = table.partitions();
    let ln_d: Vec<f64> = (0..table.len()).map(|i| ln_biguint(table.dim(i))).collect();

    let mut classes = Vec::new();
    let mut pairs: Vec<ExtremalPair> = Vec::new();
    for (c, ct) in parts.iter().enumerate() {
        let stats = perm_stats(ct);
        let t = stats.transposition_length;
        if t == 0 {
            continue;
        }
        let longest = ct.parts().first().copied().unwrap_or(0);
        let mut worst: Option<(usize, f64)> = None;
        let mut worst_restricted = f64::NEG_INFINITY;
        for &l in &sets.big {
            let v = table.value(l, c);
            if v == 0 {
                continue;
            }
            let ln_ratio = ln_abs(v) - ln_d[l] + 0.5 * t as f64 * ln_n;
            let root = ln_ratio / t as f64;
            pairs.push(ExtremalPair { irrep: parts[l].to_string(), class: ct.to_string(), t, root: root.exp() });
            if worst.is_none_or(|(_, w)| ln_ratio > w) {
                worst = Some((l, ln_ratio));
            }
            if sets.restricted.contains(&l) {
                worst_restricted = worst_restricted.max(root);
            }
        }
        classes.push(ClassRow {
            class: ct.to_string(),
            t,
            support: stats.support,
            longest_cycle: longest,
            regime: Regime::of(n, stats.support, t, longest),
            worst_irrep: worst.map(|(l, _)| parts[l].to_string()),
            worst_ratio: worst.map_or(0.0, |(_, w)| w.exp()),
            worst_root: worst.map_or(0.0, |(_, w)| (w / t as f64).exp()),
            worst_root_restricted: worst_restricted.exp(),
        });
    }
    pairs.sort_by(|a, b| b.root.total_cmp(&a.root).then_with(|| a.irrep.cmp(&b.irrep)).then_with(|| a.class.cmp(&b.class)));
    pairs.truncate(EXTREMAL_LISTED);
    let a_emp = classes.iter().map(|r| r.worst_root).fold(0.0, f64::max);
    let a_emp_restricted = classes.iter().map(|r| r.worst_root_restricted).fold(0.0, f64::max);
    let uncovered = classes.iter().filter(|r| r.regime == Regime::Uncovered).cloned().collect();

    let mut big_cycles = BigCyclesCheck { checked: 0, violations: Vec::new(), boundary_nonzero: 0 };
    let mut max_locations = 0;
    for &l in &sets.big {
        let (w, h) = width_height(&parts[l]);
        for (c, ct) in parts.iter().enumerate() {
            let longest = ct.parts()[0];
            let v = table.value(l, c);
            if longest >= w + h {
                big_cycles.checked += 1;
                if v != 0 {
                    big_cycles.violations.push((parts[l].to_string(), ct.to_string()));
                }
            } else if longest + 1 == w + h && v != 0 {
                big_cycles.boundary_nonzero += 1;
            }
        }
    }
    for lambda in parts {
        for k in 1..=n {
            max_locations = max_locations.max(count_ribbon_locations(lambda, k));
        }
    }
    let bound = (2.0 * n as f64).sqrt();
    Ok(ConjectureReport {
        n,
        big_count: sets.big.len(),
        restricted_count: sets.restricted.len(),
        a_emp,
        a_emp_restricted,
        extremal: pairs,
        classes,
        uncovered,
        big_cycles,
        ribbon_locations: RibbonCheck { max_locations, bound, passes: (max_locations as f64) < bound },
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SmoothnessRow {
    pub irrep: String,
    pub big: bool,
    pub restricted: bool,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub smoothness: BigRational,
    pub over_sqrt_n: f64,
}

/// Termwise bound sum |chi/d|^4 <= q_n(A^4 / n^2) at a given A.
#[derive(Debug, Clone, Serialize)]
pub struct FqnCheck {
    pub a: f64,
    pub qn_bound: f64,
    pub max_smoothness: f64,
    pub passes: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SmoothnessReport {
    pub n: usize,
    pub rows: Vec<SmoothnessRow>,
    /// max over big irreps of smoothness / sqrt(n)
    pub max_over_sqrt_n: f64,
    pub argmax: String,
    pub max_over_sqrt_n_restricted: f64,
    /// smoothness of the maximal-dimension irrep
    pub max_dimension_irrep: String,
    pub max_dimension_smoothness: f64,
    pub fqn: Option<FqnCheck>,
}

impl SmoothnessReport {
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(["irrep", "big", "restricted", "smoothness", "smoothness/sqrt(n)"]);
        for r in &self.rows {
            t.push([
                r.irrep.clone(),
                r.big.to_string(),
                r.restricted.to_string(),
                r.smoothness.to_string(),
                format!("{:.6}", r.over_sqrt_n),
            ]);
        }
        t
    }
}

pub fn smoothness_scan(table: &CharacterTable, a_emp: Option<f64>) -> Result<SmoothnessReport> {
    let n = table.n();
    let sets = big_sets(table)?;
    let sqrt_n = (n as f64).sqrt();
    let rows: Vec<SmoothnessRow> = table
        .partitions()
        .par_iter()
        .enumerate()
        .map(|(i, lambda)| {
            let s = table.smoothness(lambda)?;
            Ok(SmoothnessRow {
                irrep: lambda.to_string(),
                big: sets.big.contains(&i),
                restricted: sets.restricted.contains(&i),
                over_sqrt_n: rational_to_f64(&s) / sqrt_n,
                smoothness: s,
            })
        })
        .collect::<Result<_>>()?;
    let best = |filter: &dyn Fn(&SmoothnessRow) -> bool| {
        rows.iter().filter(|r| filter(r)).fold(None::<&SmoothnessRow>, |b, r| match b {
            Some(b) if b.over_sqrt_n >= r.over_sqrt_n => Some(b),
            _ => Some(r),
        })
    };
    let top = best(&|r| r.big);
    let top_restricted = best(&|r| r.restricted);
    let maxd = max_dimension(n)?;
    let maxd_row = rows.iter().find(|r| r.irrep == maxd.argmax.to_string()).expect("argmax is a partition");
    let max_big_smoothness = rows.iter().filter(|r| r.big).map(|r| rational_to_f64(&r.smoothness)).fold(0.0, f64::max);
    let fqn = a_emp.map(|a| {
        let q = qn_polynomial(n).expect("n >= 1");
        let bound = q.eval_f64(a.powi(4) / (n * n) as f64);
        FqnCheck { a, qn_bound: bound, max_smoothness: max_big_smoothness, passes: max_big_smoothness <= bound * (1.0 + THRESHOLD_GUARD) }
    });
    Ok(SmoothnessReport {
        n,
        max_over_sqrt_n: top.map_or(0.0, |r| r.over_sqrt_n),
        argmax: top.map_or_else(String::new, |r| r.irrep.clone()),
        max_over_sqrt_n_restricted: top_restricted.map_or(0.0, |r| r.over_sqrt_n),
        max_dimension_irrep: maxd_row.irrep.clone(),
        max_dimension_smoothness: rational_to_f64(&maxd_row.smoothness),
        fqn,
        rows,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ClosureReport {
    pub n: usize,
    pub really_big_count: usize,
    pub pairs: usize,
    /// max over really-big pairs of the natural-distribution mass on
    /// irreps that are not really big
    #[serde(serialize_with = "crate::report::ser_display")]
    pub max_escaping: BigRational,
    pub max_escaping_f64: f64,
    pub argmax: Option<(String, String)>,
    /// same with the restricted set in both roles
    pub max_escaping_restricted: f64,
}

fn escaping_mass(table: &CharacterTable, set: &[usize]) -> Result<(usize, BigRational, Option<(usize, usize)>)> {
    let parts = table.partitions();
    let mut pairs = Vec::new();
    for (k, &a) in set.iter().enumerate() {
        for &b in &set[k..] {
            pairs.push((a, b));
        }
    }
    let masses: Vec<BigRational> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let d = table.natural_distribution(&parts[a], &parts[b])?;
            Ok(d.probs
                .iter()
                .filter(|(tau, _)| !set.contains(&table.index_of(tau).expect("partition of n")))
                .fold(BigRational::zero(), |acc, (_, p)| acc + p))
        })
        .collect::<Result<_>>()?;
    let mut best: Option<(BigRational, (usize, usize))> = None;
    for (m, pair) in masses.into_iter().zip(&pairs) {
        if best.as_ref().is_none_or(|(b, _)| m > *b) {
            best = Some((m, *pair));
        }
    }
    Ok(match best {
        Some((m, p)) => (pairs.len(), m, Some(p)),
        None => (0, BigRational::zero(), None),
    })
}

pub fn really_big_closure_check(table: &CharacterTable) -> Result<ClosureReport> {
    let sets = big_sets(table)?;
    let parts = table.partitions();
    let (pairs, m, arg) = escaping_mass(table, &sets.really_big)?;
    let (_, mr, _) = escaping_mass(table, &sets.restricted)?;
    Ok(ClosureReport {
        n: table.n(),
        really_big_count: sets.really_big.len(),
        pairs,
        max_escaping_f64: rational_to_f64(&m),
        max_escaping: m,
        argmax: arg.map(|(a, b)| (parts[a].to_string(), parts[b].to_string())),
        max_escaping_restricted: rational_to_f64(&mr),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct WidthReport {
    pub n: usize,
    /// 4 sqrt(n) ln n
    pub bound: f64,
    pub max_width: usize,
    pub max_height: usize,
    pub widest: String,
    pub tallest: String,
    pub max_width_restricted: usize,
    pub max_height_restricted: usize,
    /// the bound is only claimed for n >= 3
    pub passes: bool,
}

pub fn width_check(table: &CharacterTable) -> Result<WidthReport> {
    let n = table.n();
    let sets = big_sets(table)?;
    let parts = table.partitions();
    let extreme = |set: &[usize]| {
        let mut w = (0usize, Partition::empty());
        let mut h = (0usize, Partition::empty());
        for &i in set {
            let (wi, hi) = width_height(&parts[i]);
            if wi > w.0 {
                w = (wi, parts[i].clone());
            }
            if hi > h.0 {
                h = (hi, parts[i].clone());
            }
        }
        (w, h)
    };
    let ((mw, widest), (mh, tallest)) = extreme(&sets.big);
    let ((mwr, _), (mhr, _)) = extreme(&sets.restricted);
    let nf = n as f64;
    let bound = 4.0 * nf.sqrt() * nf.ln();
    Ok(WidthReport {
        n,
        bound,
        max_width: mw,
        max_height: mh,
        widest: widest.to_string(),
        tallest: tallest.to_string(),
        max_width_restricted: mwr,
        max_height_restricted: mhr,
        passes: n < 3 || ((mw as f64) < bound && (mh as f64) < bound),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CollisionBoundReport {
    pub n: usize,
    pub big_count: usize,
    pub checks: usize,
    /// max_tau d_tau / sqrt(n!)
    pub dimension_ratio: f64,
    /// max over checks of P_coll / bound
    pub worst_slack: f64,
    pub worst: Option<[String; 4]>,
    /// same with (S_l S_m)^(1/4) in place of sqrt(max(S_l, S_m))
    pub worst_slack_fourth_root: f64,
    pub passes: bool,
}

/// P_coll(l (x) m, l' (x) m') <= (max d / sqrt(n!)) sqrt(f) where f is the
/// smaller of max(S_l, S_m) and max(S_l', S_m'), over all big quadruples.
pub fn collision_bound_check(table: &CharacterTable) -> Result<CollisionBoundReport> {
    let n = table.n();
    let sets = big_sets(table)?;
    let parts = table.partitions();
    let maxd = max_dimension(n)?;
    let ln_ratio = ln_biguint(&maxd.dimension) - 0.5 * ln_factorial(n);
    let ratio = ln_ratio.exp();
    let smooth: Vec<f64> = sets
        .big
        .iter()
        .map(|&i| table.smoothness(&parts[i]).map(|s| rational_to_f64(&s)))
        .collect::<Result<_>>()?;
    let mut pairs = Vec::new();
    for a in 0..sets.big.len() {
        for b in a..sets.big.len() {
            pairs.push((a, b));
        }
    }
    let dists = pairs
        .par_iter()
        .map(|&(a, b)| table.natural_distribution(&parts[sets.big[a]], &parts[sets.big[b]]))
        .collect::<Result<Vec<_>>>()?;
    let results: Vec<(f64, f64, usize, usize)> = (0..pairs.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let dists = &dists;
            let pairs = &pairs;
            let smooth = &smooth;
            (i..pairs.len()).map(move |j| {
                let coll = rational_to_f64(&dists[i].collision(&dists[j]));
                let (a, b) = pairs[i];
                let (c, d) = pairs[j];
                let f = smooth[a].max(smooth[b]).min(smooth[c].max(smooth[d]));
                let g = (smooth[a] * smooth[b]).sqrt().min((smooth[c] * smooth[d]).sqrt());
                (coll / (ratio * f.sqrt()), coll / (ratio * g.sqrt()), i, j)
            })
        })
        .collect();
    let checks = results.len();
    let mut worst: Option<(f64, usize, usize)> = None;
    let mut worst4 = 0.0f64;
    for &(s, s4, i, j) in &results {
        if worst.is_none_or(|(w, _, _)| s > w) {
            worst = Some((s, i, j));
        }
        worst4 = worst4.max(s4);
    }
    let name = |k: usize| parts[sets.big[k]].to_string();
    Ok(CollisionBoundReport {
        n,
        big_count: sets.big.len(),
        checks,
        dimension_ratio: ratio,
        worst_slack: worst.map_or(0.0, |w| w.0),
        worst: worst.map(|(_, i, j)| [name(pairs[i].0), name(pairs[i].1), name(pairs[j].0), name(pairs[j].1)]),
        worst_slack_fourth_root: worst4,
        passes: worst.is_none_or(|w| w.0 <= 1.0 + THRESHOLD_GUARD) && worst4 <= 1.0 + THRESHOLD_GUARD,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(n: usize) -> CharacterTable {
        CharacterTable::compute(n)
    }

    #[test]
    fn tiny_n_everything_is_big() {
        let s = big_sets(&table(3)).unwrap();
        assert_eq!(s.big, vec![0, 1, 2]);
        assert_eq!(s.really_big, vec![0, 1, 2]);
        // d^4 >= 6 only for the standard irrep
        assert_eq!(s.restricted, vec![1]);
    }

    #[test]
    fn conjecture_scan_small() {
        let r = conjecture_scan(&table(3)).unwrap();
        assert!(r.is_finite());
        assert!(r.classes.iter().all(|c| c.t >= 1));
        assert_eq!(r.classes.len(), 2);
        // transposition: |chi/d| = 1 for trivial, ratio sqrt(3)
        let transp = r.classes.iter().find(|c| c.class == "2+1").unwrap();
        assert!((transp.worst_ratio - 3f64.sqrt()).abs() < 1e-12);
        assert!((r.a_emp - r.extremal[0].root).abs() < 1e-12);
        assert!(r.big_cycles.violations.is_empty());
        // chi_(2,1) at a 3-cycle is -1 although 3 = w + h - 1
        assert!(r.big_cycles.boundary_nonzero >= 1);
        assert!(r.ribbon_locations.passes);
    }

    #[test]
    fn conjecture_scan_eight() {
        let r = conjecture_scan(&table(8)).unwrap();
        assert!(r.a_emp < 10.0);
        assert!(r.big_cycles.violations.is_empty());
    }

    #[test]
    fn smoothness_small() {
        let r = smoothness_scan(&table(3), None).unwrap();
        let trivial = r.rows.iter().find(|x| x.irrep == "3").unwrap();
        assert_eq!(trivial.smoothness, BigRational::from_integer(6.into()));
        assert!((r.max_over_sqrt_n - 6.0 / 3f64.sqrt()).abs() < 1e-12);
        assert!(r.rows.iter().all(|x| x.smoothness >= BigRational::from_integer(1.into())));
        let a = conjecture_scan(&table(5)).unwrap().a_emp;
        let r5 = smoothness_scan(&table(5), Some(a)).unwrap();
        assert!(r5.fqn.unwrap().passes);
    }

    #[test]
    fn closure_small() {
        let r = really_big_closure_check(&table(3)).unwrap();
        assert!(r.max_escaping.is_zero());
    }

    #[test]
    fn widths() {
        for n in 3..=9 {
            assert!(width_check(&table(n)).unwrap().passes);
        }
        let r = width_check(&table(4)).unwrap();
        assert_eq!(r.max_width, 4);
    }

    #[test]
    fn collision_bound_small() {
        // d = 1 equals the threshold at n = 1
        assert!(matches!(collision_bound_check(&table(1)), Err(crate::error::Error::NearThreshold(_))));
        for n in 2..=5 {
            let r = collision_bound_check(&table(n)).unwrap();
            assert!(r.passes, "n={n} slack {}", r.worst_slack);
        }
    }
}
