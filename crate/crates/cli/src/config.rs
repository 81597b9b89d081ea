//! Run configuration: a flat `key = value` file, overridden by flags and
//! `CGSIEVE_*` environment variables.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use cgsieve::sieve::PolicySpec;
use cgsieve::wreath::SubgroupSpec;
use cgsieve::Limits;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Table,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Table => "table",
        }
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "table" => Ok(Format::Table),
            _ => Err(format!("unknown format {s:?} (json, csv, table)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub n: Option<usize>,
    pub leaves: usize,
    pub policy: PolicySpec,
    pub subgroup: SubgroupSpec,
    pub seed: Option<u64>,
    pub runs: usize,
    pub format: Format,
    pub cache_dir: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub float: bool,
    pub limits: Limits,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n: None,
            leaves: 4,
            policy: PolicySpec::RandomPair { max_combines: None },
            subgroup: SubgroupSpec::Trivial,
            seed: None,
            runs: 1,
            format: Format::Json,
            cache_dir: None,
            jobs: None,
            float: false,
            limits: Limits::default(),
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e| format!("{key}: {e}"))
}

fn positive(key: &str, value: &str) -> Result<usize, String> {
    match parse::<usize>(key, value)? {
        0 => Err(format!("{key} must be positive")),
        v => Ok(v),
    }
}

impl RunConfig {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "n" => self.n = Some(positive(key, value)?),
            "leaves" => self.leaves = positive(key, value)?,
            "policy" => self.policy = parse(key, value)?,
            "subgroup" => self.subgroup = parse(key, value)?,
            "seed" => self.seed = Some(parse(key, value)?),
            "runs" => self.runs = positive(key, value)?,
            "format" => self.format = parse(key, value)?,
            "cache_dir" => self.cache_dir = Some(PathBuf::from(value)),
            "jobs" => self.jobs = Some(positive(key, value)?),
            "float" => self.float = parse(key, value)?,
            "budget_table_n" => self.limits.max_table_n = positive(key, value)?,
            "budget_exact_n" => self.limits.max_exact_n = positive(key, value)?,
            "budget_class_dp_n" => self.limits.max_class_dp_n = positive(key, value)?,
            "budget_enum_nodes" => self.limits.max_enum_nodes = positive(key, value)?,
            "budget_dense_side" => self.limits.max_dense_side = positive(key, value)?,
            _ => return Err(format!("unknown config key {key:?}")),
        }
        Ok(())
    }

    pub fn from_kv(text: &str) -> Result<RunConfig, String> {
        let mut cfg = RunConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| format!("line {}: expected key = value", i + 1))?;
            cfg.set(k.trim(), v.trim()).map_err(|e| format!("line {}: {e}", i + 1))?;
        }
        Ok(cfg)
    }

    pub fn to_kv(&self) -> String {
        let mut s = String::new();
        if let Some(n) = self.n {
            let _ = writeln!(s, "n = {n}");
        }
        let _ = writeln!(s, "leaves = {}", self.leaves);
        let _ = writeln!(s, "policy = {}", self.policy);
        let _ = writeln!(s, "subgroup = {}", self.subgroup.name());
        if let Some(seed) = self.seed {
            let _ = writeln!(s, "seed = {seed}");
        }
        let _ = writeln!(s, "runs = {}", self.runs);
        let _ = writeln!(s, "format = {}", self.format.name());
        if let Some(dir) = &self.cache_dir {
            let _ = writeln!(s, "cache_dir = {}", dir.display());
        }
        if let Some(j) = self.jobs {
            let _ = writeln!(s, "jobs = {j}");
        }
        let _ = writeln!(s, "float = {}", self.float);
        let l = &self.limits;
        let _ = writeln!(s, "budget_table_n = {}", l.max_table_n);
        let _ = writeln!(s, "budget_exact_n = {}", l.max_exact_n);
        let _ = writeln!(s, "budget_class_dp_n = {}", l.max_class_dp_n);
        let _ = writeln!(s, "budget_enum_nodes = {}", l.max_enum_nodes);
        let _ = writeln!(s, "budget_dense_side = {}", l.max_dense_side);
        s
    }

    pub fn require_n(&self) -> Result<usize, String> {
        self.n.ok_or_else(|| "--n is required".into())
    }

    pub fn require_seed(&self) -> Result<u64, String> {
        self.seed.ok_or_else(|| "--seed is required for stochastic commands".into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut c = RunConfig::default();
        assert_eq!(RunConfig::from_kv(&c.to_kv()).unwrap(), c);
        c.n = Some(3);
        c.seed = Some(u64::MAX);
        c.policy = "fixed:0-1,2-3".parse().unwrap();
        c.subgroup = SubgroupSpec::OrderTwo;
        c.format = Format::Csv;
        c.cache_dir = Some("/tmp/cg cache".into());
        c.jobs = Some(2);
        c.float = true;
        c.limits.max_dense_side = 77;
        assert_eq!(RunConfig::from_kv(&c.to_kv()).unwrap(), c);
        c.policy = "greedy:2".parse().unwrap();
        assert_eq!(RunConfig::from_kv(&c.to_kv()).unwrap(), c);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(RunConfig::from_kv("nope = 1").is_err());
        assert!(RunConfig::from_kv("n 3").is_err());
        assert!(RunConfig::from_kv("runs = 0").is_err());
        assert!(RunConfig::from_kv("subgroup = order3").is_err());
        let c = RunConfig::from_kv("# comment\n\n n = 5 \n").unwrap();
        assert_eq!(c.n, Some(5));
    }
}
