//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Runs without the libtest harness so the lines always print.

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

use cgsieve::analysis::{
    conjecture_scan, cycle_count_recurrence, collision_bound_check, qn_bound_check, qn_polynomial, z_squared, z_three_halves,
};
use cgsieve::characters::CharacterTable;
use cgsieve::exact::{factorial, rational_to_f64};
use cgsieve::oracle::{oracle_transcript_probability, GroupTable, OracleSubgroup};
use cgsieve::sieve::{enumerate_topologies, ExactEngine, PolicySpec, Simulator, SubgroupSpec, Topology};
use cgsieve::stats::chi_square;
use cgsieve::wreath::{WreathIrrep, WreathTable};
use cgsieve::Limits;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn engine(n: usize) -> Arc<ExactEngine> {
    let t = Arc::new(WreathTable::new(Arc::new(CharacterTable::compute(n))).expect("wreath table"));
    Arc::new(ExactEngine::new(t, Limits::default()))
}

fn characters() -> Outcome {
    for n in 1..=8 {
        let t = CharacterTable::compute(n);
        check(t.check_row_orthogonality() && t.check_column_orthogonality(), || format!("orthogonality fails at n={n}"))?;
    }
    for n in 1..=10 {
        let t = CharacterTable::compute(n);
        let s: BigUint = (0..t.len()).map(|i| t.dim(i) * t.dim(i)).sum();
        check(s == factorial(n), || format!("sum of d^2 != n! at n={n}"))?;
    }
    Ok("orthogonality exact for n<=8, sum d^2 = n! for n<=10".into())
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else { return false };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn cycles(p: &[usize]) -> usize {
    let mut seen = vec![false; p.len()];
    let mut c = 0;
    for s in 0..p.len() {
        if !seen[s] {
            c += 1;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = p[x];
            }
        }
    }
    c
}

fn qn() -> Outcome {
    for n in 1..=7 {
        let mut brute = vec![BigUint::zero(); n];
        let mut p: Vec<usize> = (0..n).collect();
        loop {
            brute[n - cycles(&p)] += 1u32;
            if !next_permutation(&mut p) {
                break;
            }
        }
        check(qn_polynomial(n).unwrap().coefficients == brute, || format!("brute force mismatch at n={n}"))?;
    }
    for n in 1..=10 {
        let q = qn_polynomial(n).unwrap();
        let c = cycle_count_recurrence(n);
        check((0..n).all(|j| q.coefficients[j] == c[n - j]), || format!("recurrence mismatch at n={n}"))?;
    }
    let mut worst: f64 = 0.0;
    for n in 3..=12 {
        for z in [z_squared(n), z_three_halves(n)] {
            let r = qn_bound_check(n, &z).unwrap();
            worst = worst.max(r.ratio);
            check(r.passes, || format!("envelope fails at n={n}, z={}: ratio {}", r.z, r.ratio))?;
        }
    }
    Ok(format!("brute force n<=7, recurrence n<=10, envelope n in [3,12] (max ratio {worst:.4} <= 1.1)"))
}

fn small_topologies() -> Vec<Topology> {
    enumerate_topologies(5).into_iter().filter(|t| t.leaf_count() <= 3).collect()
}

/// Every labeling of `topo` drawn from `choices`.
fn labelings(choices: &[WreathIrrep], len: usize) -> Vec<Vec<WreathIrrep>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                choices.iter().map(move |c| {
                    let mut v = prefix.clone();
                    v.push(c.clone());
                    v
                })
            })
            .collect();
    }
    out
}

fn central_identity() -> Outcome {
    let mut checked = 0;
    for n in [2, 3] {
        let e = engine(n);
        let inhom: Vec<WreathIrrep> = e.table().irreps().iter().filter(|s| !s.is_homogeneous()).cloned().collect();
        for topo in small_topologies() {
            for labels in labelings(&inhom, topo.len()) {
                let p1 = e.transcript_probability(&topo, &labels, SubgroupSpec::Trivial).unwrap();
                let ph = e.transcript_probability(&topo, &labels, SubgroupSpec::OrderTwo).unwrap();
                check(p1 == ph, || format!("n={n} {topo}: P^1 = {p1}, P^H = {ph}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} all-inhomogeneous labelings, exact equality"))
}

fn oracle_equivalence() -> Outcome {
    let limits = Limits::default();
    let e = engine(2);
    let g = GroupTable::wreath(e.table()).unwrap();
    let m = g.involution().unwrap();
    let irreps = e.table().irreps().to_vec();
    let topologies = [Topology::isolated(1), Topology::isolated(2), Topology::cherry()];
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for topo in &topologies {
        for labels in labelings(&irreps, topo.len()) {
            let idx: Vec<usize> = labels.iter().map(|s| e.table().irrep_index(s).unwrap()).collect();
            for (sub, osub) in [(SubgroupSpec::Trivial, OracleSubgroup::Trivial), (SubgroupSpec::OrderTwo, OracleSubgroup::Involution(m))] {
                let exact = rational_to_f64(&e.transcript_probability(topo, &labels, sub).unwrap());
                let oracle = oracle_transcript_probability(&g, topo, &idx, osub, &limits).unwrap();
                worst = worst.max((exact - oracle).abs());
                checked += 1;
            }
        }
    }
    check(worst <= 1e-9, || format!("n=2 max deviation {worst:e}"))?;

    let e3 = engine(3);
    let g3 = GroupTable::wreath(e3.table()).unwrap();
    let m3 = g3.involution().unwrap();
    let t3 = e3.table();
    let cherry = Topology::cherry();
    // standard (x) sign leaves fused to the homogeneous standard irrep
    let std: cgsieve::Partition = "2+1".parse().unwrap();
    let leaf = WreathIrrep::inhomogeneous("2+1".parse().unwrap(), "1+1+1".parse().unwrap()).unwrap();
    let labels = vec![leaf.clone(), leaf, WreathIrrep::homogeneous(std, cgsieve::wreath::Sign::Plus)];
    let idx: Vec<usize> = labels.iter().map(|s| t3.irrep_index(s).unwrap()).collect();
    let mut worst3: f64 = 0.0;
    for (sub, osub) in [(SubgroupSpec::Trivial, OracleSubgroup::Trivial), (SubgroupSpec::OrderTwo, OracleSubgroup::Involution(m3))] {
        let exact = rational_to_f64(&e3.transcript_probability(&cherry, &labels, sub).unwrap());
        let oracle = oracle_transcript_probability(&g3, &cherry, &idx, osub, &limits).unwrap();
        check(exact > 0.0, || "spot-check labeling has probability 0".into())?;
        worst3 = worst3.max((exact - oracle).abs());
    }
    check(worst3 <= 1e-6, || format!("n=3 spot check deviation {worst3:e}"))?;
    Ok(format!("n=2: {checked} cases, max dev {worst:.1e}; n=3 cherry spot check dev {worst3:.1e}"))
}

fn normalization() -> Outcome {
    let mut checked = 0;
    for n in 1..=3 {
        let e = engine(n);
        for topo in enumerate_topologies(5) {
            for sub in [SubgroupSpec::Trivial, SubgroupSpec::OrderTwo] {
                let total: BigRational = e.labeling_distribution(&topo, sub).unwrap().into_iter().map(|(_, p)| p).sum();
                check(total.is_one(), || format!("n={n} {topo} {sub:?}: total {total}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (n, topology, subgroup) cases sum to 1 exactly"))
}

fn leaf_numbers() -> Outcome {
    let t3 = engine(3);
    let hom = t3.table().leaf_distribution(SubgroupSpec::Trivial).homogeneous_mass();
    check(hom == BigRational::new(1.into(), 2.into()), || format!("n=3 homogeneous leaf mass {hom}"))?;
    for n in 1..=5 {
        let t = WreathTable::new(Arc::new(CharacterTable::compute(n))).unwrap();
        for i in 0..t.irreps().len() {
            if !t.is_homogeneous(i) {
                check(t.leaf_mass(i, SubgroupSpec::OrderTwo) == t.plancherel_mass(i), || format!("n={n} {}", t.irreps()[i]))?;
            }
        }
        check(t.leaf_distribution(SubgroupSpec::OrderTwo).is_normalized(), || format!("n={n} D_H not normalized"))?;
    }
    Ok("homogeneous leaf mass 1/2 at n=3; D_H = Plancherel on inhomogeneous irreps for n<=5".into())
}

fn collision_bound() -> Outcome {
    // n = 1 lies exactly on the big threshold; its single pair is checked by hand
    let t1 = CharacterTable::compute(1);
    let d = t1.natural_distribution(&t1.partitions()[0], &t1.partitions()[0]).unwrap();
    check(d.collision(&d).is_one() && t1.smoothness(&t1.partitions()[0]).unwrap().is_one(), || "n=1".into())?;
    let mut checks = 0;
    let mut worst: f64 = 0.0;
    for n in 2..=7 {
        let r = collision_bound_check(&CharacterTable::compute(n)).unwrap();
        check(r.passes, || format!("n={n}: slack {} at {:?}", r.worst_slack, r.worst))?;
        checks += r.checks;
        worst = worst.max(r.worst_slack);
    }
    Ok(format!("{checks} quadruples for n<=7, max P_coll/bound {worst:.4}"))
}

fn conjecture() -> Outcome {
    let mut lines = Vec::new();
    for n in 2..=12 {
        let r = conjecture_scan(&CharacterTable::compute(n)).unwrap();
        check(r.is_finite(), || format!("A_emp not finite at n={n}"))?;
        check(r.extremal.first().is_some_and(|p| (p.root - r.a_emp).abs() <= 1e-12 * r.a_emp), || {
            format!("A_emp not attained by a listed pair at n={n}")
        })?;
        check(r.big_cycles.violations.is_empty(), || format!("big-cycle zero violated at n={n}"))?;
        lines.push(format!("    n={n:>2} A_emp={:.4} (restricted {:.4}) uncovered classes={}", r.a_emp, r.a_emp_restricted, r.uncovered.len()));
        if n == 12 {
            lines.push("    uncovered-regime table at n=12:".into());
            for l in r.class_table(&r.uncovered).to_text().lines() {
                lines.push(format!("      {l}"));
            }
        }
    }
    Ok(format!("A_emp finite for n in [2,12]\n{}", lines.join("\n")))
}

const SIM_RUNS: usize = 100_000;

fn simulation() -> Outcome {
    let cherry = Topology::cherry();
    let policy: PolicySpec = "random:1".parse().unwrap();
    let mut worst = 1.0f64;
    for n in [2, 3] {
        let e = engine(n);
        let sim = Simulator::new(Arc::clone(&e));
        for sub in [SubgroupSpec::Trivial, SubgroupSpec::OrderTwo] {
            let exact = e.labeling_distribution(&cherry, sub).unwrap();
            let index: HashMap<&[WreathIrrep], usize> = exact.iter().enumerate().map(|(i, (l, _))| (l.as_slice(), i)).collect();
            let mut counts = vec![0u64; exact.len()];
            for t in sim.simulate_batch(&policy, 2, sub, 20_240 + n as u64, SIM_RUNS).unwrap() {
                let labels = t.forest.labels();
                let i = *index.get(labels.as_slice()).ok_or_else(|| format!("n={n} {sub:?}: unexpected labeling"))?;
                counts[i] += 1;
            }
            let probs: Vec<f64> = exact.iter().map(|(_, p)| rational_to_f64(p)).collect();
            let chi = chi_square(&counts, &probs, 5.0);
            check(chi.p_value > 1e-3, || format!("n={n} {sub:?}: chi2 {} dof {} p {}", chi.statistic, chi.dof, chi.p_value))?;
            worst = worst.min(chi.p_value);
        }
    }
    Ok(format!("{SIM_RUNS} runs per case, n in {{2,3}}, both subgroups, min p-value {worst:.4}"))
}

fn determinism() -> Outcome {
    let dir = std::path::PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let sim = Simulator::new(engine(3));
    let policy: PolicySpec = "random".parse().unwrap();
    let mut files = Vec::new();
    for attempt in 0..2 {
        let mut text = String::new();
        for sub in [SubgroupSpec::Trivial, SubgroupSpec::OrderTwo] {
            for t in sim.simulate_batch(&policy, 5, sub, 77, 200).unwrap() {
                text.push_str(&t.to_json());
                text.push('\n');
            }
        }
        let path = dir.join(format!("acceptance-determinism-{attempt}.jsonl"));
        std::fs::write(&path, text).map_err(|e| e.to_string())?;
        files.push(std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    check(files[0] == files[1], || "transcript files differ".into())?;
    Ok(format!("two runs wrote identical {}-byte transcript files", files[0].len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("character correctness", characters),
        ("q_n polynomial and envelope", qn),
        ("central identity", central_identity),
        ("oracle equivalence", oracle_equivalence),
        ("normalization", normalization),
        ("leaf-level numbers", leaf_numbers),
        ("collision bound", collision_bound),
        ("conjecture scan", conjecture),
        ("simulation consistency", simulation),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS [{:>2}] {name} ({secs:.1}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{:>2}] {name} ({secs:.1}s): {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
