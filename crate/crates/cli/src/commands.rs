//! Command implementations. Each returns an [`Output`] or a [`CliError`].

use std::collections::BTreeMap;
use std::ops::RangeInclusive;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use cgsieve::analysis::{
    conjecture_scan, cycle_count_recurrence, homogeneous_rate_experiment, collision_bound_check, qn_bound_check, qn_polynomial,
    really_big_closure_check, smoothness_scan, width_check, z_squared, z_three_halves,
};
use cgsieve::characters::{max_dimension, CharacterCache, CharacterTable};
use cgsieve::exact::rational_to_f64;
use cgsieve::oracle::{oracle_transcript_probability, GroupTable, OracleSubgroup};
use cgsieve::report::Table;
use cgsieve::sieve::{enumerate_topologies, ExactEngine, Simulator, SubgroupSpec, Topology, Transcript};
use cgsieve::wreath::{WreathIrrep, WreathTable};
use cgsieve::ExactProb;

use crate::config::RunConfig;
use crate::output::Output;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Assertion(String),
    Core(cgsieve::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use cgsieve::Error as E;
        match self {
            CliError::Assertion(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Core(E::Budget(_)) => 3,
            CliError::Core(E::InexactDivision(_) | E::NearThreshold(_)) => 1,
            CliError::Core(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Assertion(m) => write!(f, "check failed: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<cgsieve::Error> for CliError {
    fn from(e: cgsieve::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<String> for CliError {
    fn from(m: String) -> Self {
        CliError::Usage(m)
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub struct Context {
    pub config: RunConfig,
    pub cache: CharacterCache,
}

impl Context {
    pub fn new(config: RunConfig) -> Self {
        let cache = CharacterCache::new(config.cache_dir.clone(), config.limits);
        Context { config, cache }
    }

    fn engine(&self, n: usize) -> CliResult<Arc<ExactEngine>> {
        let table = Arc::new(WreathTable::new(self.cache.table(n)?)?);
        Ok(Arc::new(ExactEngine::new(table, self.config.limits)))
    }

    /// Fraction string, or a float under `--float`.
    fn frac(&self, r: &ExactProb) -> Value {
        if self.config.float {
            json!(rational_to_f64(r))
        } else {
            json!(r.to_string())
        }
    }

    fn frac_text(&self, r: &ExactProb) -> String {
        if self.config.float {
            format!("{:.12}", rational_to_f64(r))
        } else {
            r.to_string()
        }
    }
}

/// JSON layout of `chartable`; parses back losslessly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartableJson {
    pub n: usize,
    pub partitions: Vec<String>,
    pub class_sizes: Vec<String>,
    pub dimensions: Vec<String>,
    /// values[irrep][class], exact integers as strings
    pub values: Vec<Vec<String>>,
}

impl ChartableJson {
    pub fn from_table(t: &CharacterTable) -> Self {
        ChartableJson {
            n: t.n(),
            partitions: t.partitions().iter().map(|p| p.to_string()).collect(),
            class_sizes: t.class_sizes().iter().map(|c| c.to_string()).collect(),
            dimensions: (0..t.len()).map(|i| t.dim(i).to_string()).collect(),
            values: (0..t.len()).map(|i| t.row(i).iter().map(|v| v.to_string()).collect()).collect(),
        }
    }
}

pub fn chartable(ctx: &Context) -> CliResult<Output> {
    let n = ctx.config.require_n()?;
    let t = ctx.cache.table(n)?;
    let j = ChartableJson::from_table(&t);
    let mut header = vec!["irrep \\ class".to_string(), "dim".to_string()];
    header.extend(j.partitions.iter().cloned());
    let mut table = Table::new(header);
    let mut sizes = vec!["class size".to_string(), String::new()];
    sizes.extend(j.class_sizes.iter().cloned());
    table.push(sizes);
    for (i, row) in j.values.iter().enumerate() {
        let mut r = vec![j.partitions[i].clone(), j.dimensions[i].clone()];
        r.extend(row.iter().cloned());
        table.push(r);
    }
    Ok(Output::new(serde_json::to_value(&j).expect("serializable"), table))
}

/// Transcripts as JSON lines, one per run.
pub fn transcripts_text(ts: &[Transcript]) -> String {
    let mut s = String::new();
    for t in ts {
        s.push_str(&t.to_json());
        s.push('\n');
    }
    s
}

pub fn run(ctx: &Context) -> CliResult<(Vec<Transcript>, Output)> {
    let c = &ctx.config;
    let n = c.require_n()?;
    let seed = c.require_seed()?;
    let engine = ctx.engine(n)?;
    if c.subgroup == SubgroupSpec::OrderTwo {
        c.limits.check_exact(n)?;
    }
    let sim = Simulator::new(engine);
    let ts = sim.simulate_batch(&c.policy, c.leaves, c.subgroup, seed, c.runs)?;
    let mut labels: BTreeMap<WreathIrrep, u64> = BTreeMap::new();
    let mut leaves: BTreeMap<WreathIrrep, u64> = BTreeMap::new();
    let mut hom_runs = 0u64;
    let mut hom_leaves = 0u64;
    for t in &ts {
        let nodes = t.forest.nodes();
        for (i, node) in nodes.iter().enumerate() {
            *labels.entry(node.label.clone()).or_default() += 1;
            if i < t.forest.leaf_count() {
                *leaves.entry(node.label.clone()).or_default() += 1;
                hom_leaves += node.label.is_homogeneous() as u64;
            }
        }
        hom_runs += nodes.iter().any(|x| x.label.is_homogeneous()) as u64;
    }
    let total_leaves = (ts.len() * c.leaves) as f64;
    let hist = |m: &BTreeMap<WreathIrrep, u64>| -> Vec<Value> {
        m.iter().map(|(k, v)| json!({"irrep": k.to_string(), "count": v})).collect()
    };
    let json = json!({
        "n": n,
        "subgroup": c.subgroup.name(),
        "policy": c.policy.to_string(),
        "seed": seed,
        "runs": ts.len(),
        "leaves": c.leaves,
        "homogeneous_observed": hom_runs > 0,
        "runs_with_homogeneous": hom_runs,
        "homogeneous_leaf_rate": hom_leaves as f64 / total_leaves,
        "label_histogram": hist(&labels),
        "leaf_histogram": hist(&leaves),
    });
    let mut table = Table::new(["irrep", "homogeneous", "leaf count", "label count"]);
    for (k, v) in &labels {
        table.push([k.to_string(), k.is_homogeneous().to_string(), leaves.get(k).copied().unwrap_or(0).to_string(), v.to_string()]);
    }
    let mut summary = Table::new(["runs", "runs with homogeneous label", "homogeneous leaf rate"]);
    summary.push([ts.len().to_string(), hom_runs.to_string(), format!("{:.6}", hom_leaves as f64 / total_leaves)]);
    Ok((ts, Output::new(json, summary).with_section("label histogram", table)))
}

pub fn parse_transcripts(text: &str) -> CliResult<Vec<Transcript>> {
    if let Ok(t) = Transcript::from_json(text.trim()) {
        return Ok(vec![t]);
    }
    let ts = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(Transcript::from_json)
        .collect::<Result<Vec<_>, _>>()?;
    if ts.is_empty() {
        return Err(CliError::Core(cgsieve::Error::MalformedTranscript("no transcripts in input".into())));
    }
    Ok(ts)
}

pub fn score(ctx: &Context, text: &str, only: Option<SubgroupSpec>) -> CliResult<Output> {
    let ts = parse_transcripts(text)?;
    let mut engines: BTreeMap<usize, Arc<ExactEngine>> = BTreeMap::new();
    let mut rows = Vec::new();
    let mut table = Table::new(["seed", "generated under", "P trivial", "P order2", "likelihood ratio"]);
    for t in &ts {
        let n = t.forest.n();
        if !engines.contains_key(&n) {
            engines.insert(n, ctx.engine(n)?);
        }
        let e = &engines[&n];
        let topo = t.forest.topology();
        let labels = t.forest.labels();
        let mut row = serde_json::Map::new();
        row.insert("seed".into(), json!(t.seed));
        row.insert("n".into(), json!(n));
        row.insert("generated_under".into(), json!(t.subgroup.name()));
        let (mut pt, mut ph) = (String::from("-"), String::from("-"));
        match only {
            Some(sub) => {
                let p = e.transcript_probability(&topo, &labels, sub)?;
                row.insert(sub.name().into(), ctx.frac(&p));
                if sub == SubgroupSpec::Trivial {
                    pt = ctx.frac_text(&p);
                } else {
                    ph = ctx.frac_text(&p);
                }
                table.push([t.seed.to_string(), t.subgroup.name().into(), pt, ph, "-".into()]);
            }
            None => {
                let s = e.score(t)?;
                row.insert("trivial".into(), ctx.frac(&s.trivial));
                row.insert("order2".into(), ctx.frac(&s.order2));
                row.insert("likelihood_ratio".into(), s.likelihood_ratio.as_ref().map_or(Value::Null, |r| ctx.frac(r)));
                table.push([
                    t.seed.to_string(),
                    t.subgroup.name().into(),
                    ctx.frac_text(&s.trivial),
                    ctx.frac_text(&s.order2),
                    s.likelihood_ratio.as_ref().map_or_else(|| "-".into(), |r| ctx.frac_text(r)),
                ]);
            }
        }
        rows.push(Value::Object(row));
    }
    let json = if rows.len() == 1 { rows.pop().expect("one row") } else { Value::Array(rows) };
    Ok(Output::new(json, table))
}

#[derive(Debug, Clone, Serialize)]
struct Check {
    name: String,
    n: Option<usize>,
    passed: bool,
    detail: String,
}

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn add(&mut self, name: &str, n: Option<usize>, passed: bool, detail: impl Into<String>) {
        self.0.push(Check { name: name.into(), n, passed, detail: detail.into() });
    }

    fn finish(self, suite: &str, extra: Vec<(String, Table)>) -> CliResult<Output> {
        let passed = self.0.iter().all(|c| c.passed);
        let mut table = Table::new(["check", "n", "result", "detail"]);
        for c in &self.0 {
            table.push([
                c.name.clone(),
                c.n.map_or_else(|| "-".into(), |n| n.to_string()),
                if c.passed { "pass".into() } else { "FAIL".into() },
                c.detail.clone(),
            ]);
        }
        let mut out = Output::new(json!({"suite": suite, "passed": passed, "checks": self.0}), table);
        for (title, t) in extra {
            out = out.with_section(&title, t);
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Oracle,
    Identities,
    Conjecture,
    Qn,
}

impl Suite {
    pub fn default_range(self) -> RangeInclusive<usize> {
        match self {
            Suite::Oracle => 2..=2,
            Suite::Identities => 1..=8,
            Suite::Conjecture => 2..=12,
            Suite::Qn => 3..=12,
        }
    }
}

/// Runs a verification suite. The output carries `passed`; the caller maps a
/// failed suite to exit code 1.
pub fn verify(ctx: &Context, suite: Suite, range: RangeInclusive<usize>) -> CliResult<(bool, Output)> {
    let mut checks = Checks::default();
    let mut extra = Vec::new();
    match suite {
        Suite::Oracle => {
            for n in range {
                verify_oracle(ctx, n, &mut checks)?;
            }
        }
        Suite::Identities => {
            for n in range {
                let t = ctx.cache.table(n)?;
                checks.add("row orthogonality", Some(n), t.check_row_orthogonality(), "exact");
                checks.add("column orthogonality", Some(n), t.check_column_orthogonality(), "exact");
                let sum = (0..t.len()).fold(t.order() * 0u32, |acc, i| acc + t.dim(i) * t.dim(i));
                checks.add("sum of squared dimensions", Some(n), sum == *t.order(), format!("{sum}"));
                if n <= ctx.config.limits.max_exact_n {
                    let e = ctx.engine(n)?;
                    checks.add("wreath orthogonality", Some(n), e.table().check_orthogonality(), "exact");
                    let mut ok = true;
                    let mut count = 0;
                    for topo in enumerate_topologies(ctx.config.limits.max_enum_nodes.min(4)) {
                        for sub in [SubgroupSpec::Trivial, SubgroupSpec::OrderTwo] {
                            let total: ExactProb = e.labeling_distribution(&topo, sub)?.into_iter().map(|(_, p)| p).sum();
                            ok &= total == ExactProb::from_integer(1.into());
                            count += 1;
                        }
                    }
                    checks.add("normalization", Some(n), ok, format!("{count} (topology, subgroup) cases"));
                    let (ok, count) = central_identity(&e)?;
                    checks.add("central identity", Some(n), ok, format!("{count} all-inhomogeneous labelings"));
                }
            }
        }
        Suite::Conjecture => {
            let mut summary = Table::new(["n", "big irreps", "A_emp", "A_emp (restricted)", "uncovered classes", "extremal pair"]);
            let mut last = None;
            for n in range {
                let t = ctx.cache.table(n)?;
                let r = conjecture_scan(&t)?;
                checks.add("A_emp finite", Some(n), r.is_finite(), format!("{:.6}", r.a_emp));
                checks.add(
                    "big-cycle zeros",
                    Some(n),
                    r.big_cycles.violations.is_empty(),
                    format!("{} pairs checked", r.big_cycles.checked),
                );
                checks.add(
                    "ribbon locations",
                    Some(n),
                    r.ribbon_locations.passes,
                    format!("max {} < {:.3}", r.ribbon_locations.max_locations, r.ribbon_locations.bound),
                );
                summary.push([
                    n.to_string(),
                    r.big_count.to_string(),
                    format!("{:.6}", r.a_emp),
                    format!("{:.6}", r.a_emp_restricted),
                    r.uncovered.len().to_string(),
                    r.extremal.first().map_or_else(|| "-".into(), |p| format!("{} at {}", p.irrep, p.class)),
                ]);
                last = Some(r);
            }
            extra.push(("A_emp by n".into(), summary));
            if let Some(r) = last {
                extra.push((format!("uncovered classes at n={}", r.n), r.class_table(&r.uncovered)));
            }
        }
        Suite::Qn => {
            for n in range {
                let q = qn_polynomial(n)?;
                let c = cycle_count_recurrence(n);
                let ok = (0..n).all(|j| q.coefficients[j] == c[n - j]);
                checks.add("cycle-count recurrence", Some(n), ok, q.to_string_poly());
                for (label, z) in [("envelope z=1/n^2", z_squared(n)), ("envelope z=n^-3/2", z_three_halves(n))] {
                    if n < 2 {
                        continue;
                    }
                    let r = qn_bound_check(n, &z)?;
                    checks.add(label, Some(n), r.passes, format!("ratio {:.6} (guard {})", r.ratio, r.guard));
                }
            }
        }
    }
    let out = checks.finish(
        match suite {
            Suite::Oracle => "oracle",
            Suite::Identities => "identities",
            Suite::Conjecture => "conjecture",
            Suite::Qn => "qn",
        },
        extra,
    )?;
    let passed = out.json["passed"].as_bool().unwrap_or(false);
    Ok((passed, out))
}

fn central_identity(e: &ExactEngine) -> CliResult<(bool, usize)> {
    let inhom: Vec<WreathIrrep> = e.table().irreps().iter().filter(|s| !s.is_homogeneous()).cloned().collect();
    let mut count = 0;
    for topo in enumerate_topologies(e.limits().max_enum_nodes.min(5)) {
        if topo.leaf_count() > 3 {
            continue;
        }
        let mut stack: Vec<Vec<WreathIrrep>> = vec![Vec::new()];
        while let Some(prefix) = stack.pop() {
            if prefix.len() == topo.len() {
                let p1 = e.transcript_probability(&topo, &prefix, SubgroupSpec::Trivial)?;
                let ph = e.transcript_probability(&topo, &prefix, SubgroupSpec::OrderTwo)?;
                if p1 != ph {
                    return Ok((false, count));
                }
                count += 1;
                continue;
            }
            for s in &inhom {
                let mut next = prefix.clone();
                next.push(s.clone());
                stack.push(next);
            }
        }
    }
    Ok((true, count))
}

fn verify_oracle(ctx: &Context, n: usize, checks: &mut Checks) -> CliResult<()> {
    let e = ctx.engine(n)?;
    ctx.config.limits.check_exact(n)?;
    let g = GroupTable::wreath(e.table())?;
    let m = g.involution().expect("wreath group has the block swap");
    let irreps = e.table().irreps().to_vec();
    let tol = if n <= 2 { 1e-9 } else { 1e-6 };
    let max_leaves = if n <= 2 { 2 } else { 1 };
    let mut topologies: Vec<Topology> = (1..=max_leaves).map(Topology::isolated).collect();
    if max_leaves >= 2 {
        topologies.push(Topology::cherry());
    }
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for topo in &topologies {
        let mut idx = vec![0usize; topo.len()];
        loop {
            let labels: Vec<WreathIrrep> = idx.iter().map(|&i| irreps[i].clone()).collect();
            for (sub, osub) in [(SubgroupSpec::Trivial, OracleSubgroup::Trivial), (SubgroupSpec::OrderTwo, OracleSubgroup::Involution(m))] {
                let exact = rational_to_f64(&e.transcript_probability(topo, &labels, sub)?);
                let oracle = oracle_transcript_probability(&g, topo, &idx, osub, &ctx.config.limits)?;
                worst = worst.max((exact - oracle).abs());
                cases += 1;
            }
            let Some(pos) = idx.iter().rposition(|&i| i + 1 < irreps.len()) else { break };
            idx[pos] += 1;
            idx[pos + 1..].iter_mut().for_each(|i| *i = 0);
        }
    }
    checks.add("oracle agreement", Some(n), worst <= tol, format!("{cases} cases, max deviation {worst:.2e} (tolerance {tol:e})"));
    if n == 3 {
        // one two-leaf spot check on the 5184-dimensional space
        let leaf = WreathIrrep::inhomogeneous("2+1".parse()?, "1+1+1".parse()?)?;
        let root = WreathIrrep::homogeneous("2+1".parse()?, cgsieve::wreath::Sign::Plus);
        let labels = vec![leaf.clone(), leaf, root];
        let idx: Vec<usize> = labels.iter().map(|s| e.table().irrep_index(s)).collect::<Result<_, _>>()?;
        let cherry = Topology::cherry();
        let mut dev: f64 = 0.0;
        for (sub, osub) in [(SubgroupSpec::Trivial, OracleSubgroup::Trivial), (SubgroupSpec::OrderTwo, OracleSubgroup::Involution(m))] {
            let exact = rational_to_f64(&e.transcript_probability(&cherry, &labels, sub)?);
            let oracle = oracle_transcript_probability(&g, &cherry, &idx, osub, &ctx.config.limits)?;
            dev = dev.max((exact - oracle).abs());
        }
        checks.add("cherry spot check", Some(n), dev <= 1e-6, format!("max deviation {dev:.2e}"));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ScanKind {
    Conjecture,
    Smoothness,
    Closure,
    Width,
    CollisionBound,
    Maxdim,
    Tv,
    Rates,
}

pub fn scan(ctx: &Context, kind: ScanKind, range: RangeInclusive<usize>) -> CliResult<Output> {
    let mut reports = Vec::new();
    let mut out_tables: Vec<(String, Table)> = Vec::new();
    let mut summary;
    match kind {
        ScanKind::Conjecture => {
            summary = Table::new(["n", "big", "A_emp", "A_emp (restricted)", "uncovered"]);
            for n in range {
                let r = conjecture_scan(&*ctx.cache.table(n)?)?;
                summary.push([n.to_string(), r.big_count.to_string(), format!("{:.6}", r.a_emp), format!("{:.6}", r.a_emp_restricted), r.uncovered.len().to_string()]);
                out_tables.push((format!("classes at n={n}"), r.class_table(&r.classes)));
                reports.push(serde_json::to_value(&r).expect("serializable"));
            }
        }
        ScanKind::Smoothness => {
            summary = Table::new(["n", "max S/sqrt(n)", "argmax", "max S/sqrt(n) (restricted)", "S of max-dim irrep", "q_n chain"]);
            for n in range {
                let t = ctx.cache.table(n)?;
                let a = conjecture_scan(&t)?.a_emp;
                let r = smoothness_scan(&t, Some(a))?;
                summary.push([
                    n.to_string(),
                    format!("{:.6}", r.max_over_sqrt_n),
                    r.argmax.clone(),
                    format!("{:.6}", r.max_over_sqrt_n_restricted),
                    format!("{:.6}", r.max_dimension_smoothness),
                    r.fqn.as_ref().map_or_else(|| "-".into(), |f| if f.passes { "holds".into() } else { "fails".into() }),
                ]);
                out_tables.push((format!("irreps at n={n}"), r.to_table()));
                reports.push(serde_json::to_value(&r).expect("serializable"));
            }
        }
        ScanKind::Closure => {
            summary = Table::new(["n", "really big", "pairs", "max escaping mass", "argmax", "restricted"]);
            for n in range {
                let r = really_big_closure_check(&*ctx.cache.table(n)?)?;
                summary.push([
                    n.to_string(),
                    r.really_big_count.to_string(),
                    r.pairs.to_string(),
                    format!("{:.6}", r.max_escaping_f64),
                    r.argmax.as_ref().map_or_else(|| "-".into(), |(a, b)| format!("{a} x {b}")),
                    format!("{:.6}", r.max_escaping_restricted),
                ]);
                reports.push(serde_json::to_value(&r).expect("serializable"));
            }
        }
        ScanKind::Width => {
            summary = Table::new(["n", "bound", "max width", "max height", "widest", "tallest", "passes"]);
            for n in range {
                let r = width_check(&*ctx.cache.table(n)?)?;
                summary.push([
                    n.to_string(),
                    format!("{:.3}", r.bound),
                    r.max_width.to_string(),
                    r.max_height.to_string(),
                    r.widest.clone(),
                    r.tallest.clone(),
                    r.passes.to_string(),
                ]);
                reports.push(serde_json::to_value(&r).expect("serializable"));
            }
        }
        ScanKind::CollisionBound => {
            summary = Table::new(["n", "big", "checks", "max d/sqrt(n!)", "worst P_coll/bound", "passes"]);
            for n in range {
                let r = collision_bound_check(&*ctx.cache.table(n)?)?;
                summary.push([
                    n.to_string(),
                    r.big_count.to_string(),
                    r.checks.to_string(),
                    format!("{:.6}", r.dimension_ratio),
                    format!("{:.6}", r.worst_slack),
                    r.passes.to_string(),
                ]);
                reports.push(serde_json::to_value(&r).expect("serializable"));
            }
        }
        ScanKind::Maxdim => {
            summary = Table::new(["n", "argmax", "dimension", "c_emp"]);
            for n in range {
                let r = max_dimension(n)?;
                summary.push([n.to_string(), r.argmax.to_string(), r.dimension.to_string(), format!("{:.6}", r.c_emp)]);
                reports.push(serde_json::to_value(&r).expect("serializable"));
            }
        }
        ScanKind::Tv => {
            summary = Table::new(["n", "topology", "labelings", "TV", "homogeneous mass (trivial)", "homogeneous mass (order2)"]);
            for n in range {
                let e = ctx.engine(n)?;
                for topo in enumerate_topologies(ctx.config.limits.max_enum_nodes) {
                    if topo.leaf_count() > ctx.config.leaves {
                        continue;
                    }
                    let r = e.tv_distance(&topo)?;
                    summary.push([
                        n.to_string(),
                        r.topology.clone(),
                        r.labelings.to_string(),
                        ctx.frac_text(&r.tv),
                        ctx.frac_text(&r.homogeneous_trivial),
                        ctx.frac_text(&r.homogeneous_order2),
                    ]);
                    reports.push(json!({
                        "n": n,
                        "topology": r.topology,
                        "labelings": r.labelings,
                        "tv": ctx.frac(&r.tv),
                        "homogeneous_trivial": ctx.frac(&r.homogeneous_trivial),
                        "homogeneous_order2": ctx.frac(&r.homogeneous_order2),
                        "inhomogeneous_contribution": ctx.frac(&r.inhomogeneous_contribution),
                    }));
                }
            }
        }
        ScanKind::Rates => {
            let c = &ctx.config;
            let r = homogeneous_rate_experiment(&ctx.cache, range, c.leaves, &c.policy, c.runs, c.require_seed()?)?;
            summary = r.to_table();
            reports.push(serde_json::to_value(&r).expect("serializable"));
        }
    }
    let json = if reports.len() == 1 { reports.pop().expect("one report") } else { Value::Array(reports) };
    let mut out = Output::new(json, summary);
    for (title, t) in out_tables {
        out = out.with_section(&title, t);
    }
    Ok(out)
}
