//! Exact characters of S_n and the distributions built from them.
//!
//! Characters are evaluated with the Murnaghan-Nakayama rule on beta-sets:
//! removing a k-rim hook from a Young diagram is moving one bead k places
//! down on its abacus, with sign given by the number of beads jumped over.
//! The largest cycle is stripped first.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, RwLock};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{exact_div, factorial, ln_biguint, ln_factorial, Acc};
use crate::limits::Limits;
use crate::partitions::{class_size, dimension, enumerate_partitions, CycleType, Irrep, Partition};

/// Relative guard band for the big / really-big dimension thresholds.
pub const THRESHOLD_GUARD: f64 = 1e-9;

/// Version tag of the on-disk character-table cache.
pub const CACHE_VERSION: u32 = 1;

type Memo = HashMap<(Vec<usize>, Vec<usize>), i128>;

fn to_beta(lambda: &[usize]) -> Vec<usize> {
    let len = lambda.len();
    lambda.iter().enumerate().map(|(i, &p)| p + len - 1 - i).collect()
}

fn from_beta(beta: &mut [usize]) -> Vec<usize> {
    beta.sort_unstable_by(|a, b| b.cmp(a));
    let len = beta.len();
    beta.iter()
        .enumerate()
        .map(|(i, &b)| b - (len - 1 - i))
        .filter(|&p| p > 0)
        .collect()
}

/// All ways to strip a k-rim hook: (remaining shape, sign).
fn strip_rim_hooks(lambda: &[usize], k: usize) -> Vec<(Vec<usize>, i128)> {
    let beta = to_beta(lambda);
    let mut out = Vec::new();
    for (idx, &b) in beta.iter().enumerate() {
        if b < k || beta.contains(&(b - k)) {
            continue;
        }
        let jumped = beta.iter().filter(|&&x| x > b - k && x < b).count();
        let mut next = beta.clone();
        next[idx] = b - k;
        let sign = if jumped % 2 == 0 { 1 } else { -1 };
        out.push((from_beta(&mut next), sign));
    }
    out
}

fn mn_recurse(lambda: &[usize], cycles: &[usize], memo: &mut Memo) -> i128 {
    if cycles.is_empty() {
        return if lambda.is_empty() { 1 } else { 0 };
    }
    if cycles[0] == 1 {
        // only fixed points left: count standard tableaux
        let shape = Partition::new(lambda.to_vec()).expect("beta moves keep shapes valid");
        return dimension(&shape).to_i128().expect("dimension fits in i128 within budget");
    }
    let key = (lambda.to_vec(), cycles.to_vec());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let value = strip_rim_hooks(lambda, cycles[0])
        .into_iter()
        .map(|(rest, sign)| sign * mn_recurse(&rest, &cycles[1..], memo))
        .sum();
    memo.insert(key, value);
    value
}

/// chi_lambda at the class `cycle_type`, by Murnaghan-Nakayama.
pub fn character(lambda: &Irrep, cycle_type: &CycleType) -> Result<BigInt> {
    if lambda.size() != cycle_type.size() {
        return Err(Error::SizeMismatch { left: lambda.size(), right: cycle_type.size() });
    }
    let mut memo = Memo::new();
    Ok(BigInt::from(mn_recurse(lambda.parts(), cycle_type.parts(), &mut memo)))
}

/// Full character table of S_n with class sizes.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    n: usize,
    partitions: Vec<Partition>,
    index: HashMap<Partition, usize>,
    class_sizes: Vec<BigUint>,
    class_sizes_small: Vec<Option<i128>>,
    dims: Vec<BigUint>,
    /// values[irrep * p + class]
    values: Vec<i128>,
    order: BigUint,
}

impl CharacterTable {
    pub fn compute(n: usize) -> CharacterTable {
        let partitions = enumerate_partitions(n);
        let columns: Vec<Vec<i128>> = partitions
            .par_iter()
            .map_init(Memo::new, |memo, ct| {
                partitions
                    .iter()
                    .map(|lambda| mn_recurse(lambda.parts(), ct.parts(), memo))
                    .collect()
            })
            .collect();
        let p = partitions.len();
        let mut values = vec![0i128; p * p];
        for (c, col) in columns.iter().enumerate() {
            for (r, &v) in col.iter().enumerate() {
                values[r * p + c] = v;
            }
        }
        CharacterTable::assemble(n, partitions, values)
    }

    fn assemble(n: usize, partitions: Vec<Partition>, values: Vec<i128>) -> CharacterTable {
        let index = partitions.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let class_sizes: Vec<BigUint> = partitions.iter().map(class_size).collect();
        let class_sizes_small = class_sizes.iter().map(|s| s.to_i128()).collect();
        let dims = partitions.iter().map(dimension).collect();
        CharacterTable {
            n,
            partitions,
            index,
            class_sizes,
            class_sizes_small,
            dims,
            values,
            order: factorial(n),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Irreps and cycle types share this list, in canonical order.
    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn len(&self) -> usize {
        self.partitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partitions.is_empty()
    }

    pub fn index_of(&self, p: &Partition) -> Result<usize> {
        self.index.get(p).copied().ok_or_else(|| {
            if p.size() != self.n {
                Error::SizeMismatch { left: p.size(), right: self.n }
            } else {
                Error::InvalidPartition(format!("{p} not found"))
            }
        })
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn class_size(&self, class: usize) -> &BigUint {
        &self.class_sizes[class]
    }

    pub fn class_sizes(&self) -> &[BigUint] {
        &self.class_sizes
    }

    pub fn dim(&self, irrep: usize) -> &BigUint {
        &self.dims[irrep]
    }

    /// Value by indices; fits in i128 for every n within the table budget.
    pub fn value(&self, irrep: usize, class: usize) -> i128 {
        self.values[irrep * self.partitions.len() + class]
    }

    pub fn row(&self, irrep: usize) -> &[i128] {
        let p = self.partitions.len();
        &self.values[irrep * p..(irrep + 1) * p]
    }

    pub fn character(&self, lambda: &Irrep, cycle_type: &CycleType) -> Result<BigInt> {
        Ok(BigInt::from(self.value(self.index_of(lambda)?, self.index_of(cycle_type)?)))
    }

    /// sum over classes of |class| * prod of the given rows.
    pub fn class_sum(&self, rows: &[usize]) -> BigInt {
        let mut acc = Acc::default();
        let mut factors = vec![0i128; rows.len()];
        for c in 0..self.partitions.len() {
            for (f, &r) in factors.iter_mut().zip(rows) {
                *f = self.value(r, c);
            }
            acc.add_weighted(&self.class_sizes[c], self.class_sizes_small[c], &factors);
        }
        acc.into_bigint()
    }

    /// Multiplicity of tau in lambda (x) mu, i.e. <chi_tau, chi_lambda chi_mu>.
    pub fn kron_multiplicity(&self, tau: &Irrep, lambda: &Irrep, mu: &Irrep) -> Result<BigUint> {
        self.kron_by_index(self.index_of(tau)?, self.index_of(lambda)?, self.index_of(mu)?)
    }

    pub fn kron_by_index(&self, tau: usize, lambda: usize, mu: usize) -> Result<BigUint> {
        let sum = self.class_sum(&[tau, lambda, mu]);
        let q = exact_div(&sum, &BigInt::from(self.order.clone()), "Kronecker multiplicity")?;
        q.to_biguint().ok_or(Error::InexactDivision("Kronecker multiplicity (negative)"))
    }

    /// Natural distribution of lambda (x) mu: P(tau) = d_tau mult / (d_lambda d_mu).
    pub fn natural_distribution(&self, lambda: &Irrep, mu: &Irrep) -> Result<IrrepDistribution> {
        let (l, m) = (self.index_of(lambda)?, self.index_of(mu)?);
        let denom = BigInt::from(&self.dims[l] * &self.dims[m]);
        let mut probs = BTreeMap::new();
        for t in 0..self.len() {
            let mult = self.kron_by_index(t, l, m)?;
            if mult.is_zero() {
                continue;
            }
            let num = BigInt::from(mult * &self.dims[t]);
            probs.insert(self.partitions[t].clone(), BigRational::new(num, denom.clone()));
        }
        Ok(IrrepDistribution { n: self.n, probs })
    }

    /// Plancherel distribution d^2 / n!.
    pub fn plancherel(&self) -> IrrepDistribution {
        let order = BigInt::from(self.order.clone());
        let probs = self
            .partitions
            .iter()
            .zip(&self.dims)
            .map(|(p, d)| (p.clone(), BigRational::new(BigInt::from(d * d), order.clone())))
            .collect();
        IrrepDistribution { n: self.n, probs }
    }

    /// sum over g in S_n of |chi(g)/d|^4.
    pub fn smoothness(&self, lambda: &Irrep) -> Result<BigRational> {
        let l = self.index_of(lambda)?;
        let sum = self.class_sum(&[l, l, l, l]);
        let d = BigInt::from(self.dims[l].clone());
        Ok(BigRational::new(sum, d.pow(4)))
    }

    fn to_cache(&self) -> CachedTable {
        CachedTable {
            version: CACHE_VERSION,
            n: self.n,
            partitions: self.partitions.iter().map(|p| p.to_plus_string()).collect(),
            values: self.partitions.iter().enumerate().map(|(i, _)| self.row(i).to_vec()).collect(),
        }
    }

    fn from_cache(cached: CachedTable, n: usize) -> std::result::Result<CharacterTable, String> {
        if cached.version != CACHE_VERSION {
            return Err(format!("version {} (expected {CACHE_VERSION})", cached.version));
        }
        if cached.n != n {
            return Err(format!("holds n = {} (expected {n})", cached.n));
        }
        let partitions = enumerate_partitions(n);
        let stored: Vec<String> = partitions.iter().map(|p| p.to_plus_string()).collect();
        if stored != cached.partitions {
            return Err("partition list does not match canonical order".into());
        }
        let p = partitions.len();
        if cached.values.len() != p || cached.values.iter().any(|r| r.len() != p) {
            return Err("table has the wrong shape".into());
        }
        let values = cached.values.into_iter().flatten().collect();
        Ok(CharacterTable::assemble(n, partitions, values))
    }

    /// Row orthogonality: (1/n!) sum |c| chi_s chi_t == [s == t].
    pub fn check_row_orthogonality(&self) -> bool {
        let order = BigInt::from(self.order.clone());
        (0..self.len()).all(|s| {
            (s..self.len()).all(|t| {
                let sum = self.class_sum(&[s, t]);
                if s == t {
                    sum == order
                } else {
                    sum.is_zero()
                }
            })
        })
    }

    /// Column orthogonality: sum_lambda chi(c) chi(c') |c| == n! [c == c'].
    pub fn check_column_orthogonality(&self) -> bool {
        let order = BigInt::from(self.order.clone());
        (0..self.len()).all(|c| {
            (c..self.len()).all(|c2| {
                let s: BigInt = (0..self.len())
                    .map(|l| BigInt::from(self.value(l, c)) * self.value(l, c2))
                    .sum();
                if c == c2 {
                    s * BigInt::from(self.class_sizes[c].clone()) == order
                } else {
                    s.is_zero()
                }
            })
        })
    }
}

#[derive(Serialize, Deserialize)]
struct CachedTable {
    version: u32,
    n: usize,
    partitions: Vec<String>,
    values: Vec<Vec<i128>>,
}

/// Shared, lock-protected store of character tables, optionally backed by a
/// directory of JSON cache files (`chartable-n{n}.json`).
#[derive(Debug)]
pub struct CharacterCache {
    dir: Option<PathBuf>,
    limits: Limits,
    tables: RwLock<HashMap<usize, Arc<CharacterTable>>>,
}

impl Default for CharacterCache {
    fn default() -> Self {
        CharacterCache::new(None, Limits::default())
    }
}

impl CharacterCache {
    pub fn new(dir: Option<PathBuf>, limits: Limits) -> Self {
        CharacterCache { dir, limits, tables: RwLock::new(HashMap::new()) }
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    pub fn cache_path(dir: &Path, n: usize) -> PathBuf {
        dir.join(format!("chartable-n{n}.json"))
    }

    pub fn table(&self, n: usize) -> Result<Arc<CharacterTable>> {
        self.limits.check_table(n)?;
        if let Some(t) = self.tables.read().expect("cache lock poisoned").get(&n) {
            return Ok(Arc::clone(t));
        }
        let table = Arc::new(self.load_or_compute(n)?);
        let mut guard = self.tables.write().expect("cache lock poisoned");
        Ok(Arc::clone(guard.entry(n).or_insert(table)))
    }

    fn load_or_compute(&self, n: usize) -> Result<CharacterTable> {
        let Some(dir) = &self.dir else {
            return Ok(CharacterTable::compute(n));
        };
        let path = Self::cache_path(dir, n);
        if path.exists() {
            let cache_err = |reason: String| Error::Cache { path: path.display().to_string(), reason };
            let text = fs::read_to_string(&path)?;
            let cached: CachedTable = serde_json::from_str(&text).map_err(|e| cache_err(e.to_string()))?;
            return CharacterTable::from_cache(cached, n).map_err(cache_err);
        }
        let table = CharacterTable::compute(n);
        fs::create_dir_all(dir)?;
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, serde_json::to_string(&table.to_cache())?)?;
        fs::rename(&tmp, &path)?;
        Ok(table)
    }
}

/// Exact probability distribution over irreps of S_n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IrrepDistribution {
    pub n: usize,
    pub probs: BTreeMap<Partition, BigRational>,
}

impl IrrepDistribution {
    pub fn get(&self, lambda: &Partition) -> BigRational {
        self.probs.get(lambda).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn total(&self) -> BigRational {
        self.probs.values().fold(BigRational::zero(), |a, b| a + b)
    }

    pub fn is_normalized(&self) -> bool {
        self.total().is_one() && self.probs.values().all(|p| !p.is_negative())
    }

    /// sum_tau P(tau) Q(tau).
    pub fn collision(&self, other: &IrrepDistribution) -> BigRational {
        self.probs
            .iter()
            .filter_map(|(k, p)| other.probs.get(k).map(|q| p * q))
            .fold(BigRational::zero(), |a, b| a + b)
    }
}

impl Serialize for IrrepDistribution {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.probs.len()))?;
        for (k, v) in &self.probs {
            map.serialize_entry(&k.to_plus_string(), &v.to_string())?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for IrrepDistribution {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = IrrepDistribution;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a map from partition strings to fraction strings")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> std::result::Result<Self::Value, A::Error> {
                use serde::de::Error as _;
                let mut probs = BTreeMap::new();
                while let Some((k, v)) = access.next_entry::<String, String>()? {
                    let p: Partition = k.parse().map_err(A::Error::custom)?;
                    let r = crate::exact::parse_fraction(&v).map_err(A::Error::custom)?;
                    probs.insert(p, r);
                }
                let n = probs.keys().next().map(|p| p.size()).unwrap_or(0);
                Ok(IrrepDistribution { n, probs })
            }
        }
        deserializer.deserialize_map(V)
    }
}

/// Which dimension threshold to test against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Threshold {
    /// d > exp(-sqrt(n) ln n) sqrt(n!)
    Big,
    /// d > exp(-(1/2) sqrt(n) ln n) sqrt(n!)
    ReallyBig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdSide {
    Above,
    Below,
    /// Too close to call at the configured guard band.
    WithinGuard,
}

/// ln of the threshold; "log n" is the natural logarithm.
pub fn threshold_ln(n: usize, kind: Threshold) -> f64 {
    let coeff = match kind {
        Threshold::Big => 1.0,
        Threshold::ReallyBig => 0.5,
    };
    let nf = n as f64;
    -coeff * nf.sqrt() * nf.ln() + 0.5 * ln_factorial(n)
}

pub fn classify(lambda: &Irrep, kind: Threshold) -> ThresholdSide {
    let n = lambda.size();
    let ln_d = ln_biguint(&dimension(lambda));
    let ln_t = threshold_ln(n, kind);
    let gap = ln_d - ln_t;
    if gap.abs() <= THRESHOLD_GUARD * ln_t.abs().max(1.0) {
        ThresholdSide::WithinGuard
    } else if gap > 0.0 {
        ThresholdSide::Above
    } else {
        ThresholdSide::Below
    }
}

fn decide(lambda: &Irrep, kind: Threshold) -> Result<bool> {
    match classify(lambda, kind) {
        ThresholdSide::Above => Ok(true),
        ThresholdSide::Below => Ok(false),
        ThresholdSide::WithinGuard => Err(Error::NearThreshold(lambda.to_string())),
    }
}

pub fn is_big(lambda: &Irrep) -> Result<bool> {
    decide(lambda, Threshold::Big)
}

pub fn is_really_big(lambda: &Irrep) -> Result<bool> {
    decide(lambda, Threshold::ReallyBig)
}

/// Largest irrep dimension of S_n and the empirical constant
/// c_emp(n) = -(2/sqrt n) ln(max d / sqrt(n!)).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaxDimension {
    pub argmax: Partition,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub dimension: BigUint,
    pub c_emp: f64,
}

pub fn max_dimension(n: usize) -> Result<MaxDimension> {
    if n == 0 {
        return Err(Error::InvalidArgument("max_dimension needs n >= 1".into()));
    }
    let (argmax, dim) = enumerate_partitions(n)
        .into_iter()
        .map(|p| {
            let d = dimension(&p);
            (p, d)
        })
        .fold(None::<(Partition, BigUint)>, |best, (p, d)| match best {
            Some((bp, bd)) if bd >= d => Some((bp, bd)),
            _ => Some((p, d)),
        })
        .expect("at least one partition");
    let c_emp = -(2.0 / (n as f64).sqrt()) * (ln_biguint(&dim) - 0.5 * ln_factorial(n));
    Ok(MaxDimension { argmax, dimension: dim, c_emp })
}
