//! Irreps, conjugacy classes, characters and distributions of S_n wr Z_2,
//! all assembled from the character table of S_n.
//!
//! Conjugacy classes are enumerated structurally: a non-flip ((a,b),0) is
//! classified by the unordered pair of cycle types of a and b, a flip
//! ((a,b),1) by the cycle type of ab. Class sizes are 2|A||B| (A != B),
//! |A|^2 (A == B) and n!|C| respectively.

pub mod elements;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::characters::CharacterTable;
use crate::error::{Error, Result};
use crate::exact::{exact_div, Acc};
use crate::partitions::{CycleType, Irrep, Partition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> i128 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

/// Label of an irrep of S_n wr Z_2.
///
/// Inhomogeneous pairs are unordered; `a` always precedes `b` in the
/// canonical partition order. Build them with [`WreathIrrep::inhomogeneous`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WreathIrrep {
    Inhomogeneous { a: Irrep, b: Irrep },
    Homogeneous { lambda: Irrep, sign: Sign },
}

impl WreathIrrep {
    pub fn inhomogeneous(x: Irrep, y: Irrep) -> Result<Self> {
        if x == y {
            return Err(Error::InvalidArgument(format!(
                "inhomogeneous irrep needs distinct partitions, got {x} twice"
            )));
        }
        if x.size() != y.size() {
            return Err(Error::SizeMismatch { left: x.size(), right: y.size() });
        }
        let (a, b) = if x < y { (x, y) } else { (y, x) };
        Ok(WreathIrrep::Inhomogeneous { a, b })
    }

    pub fn homogeneous(lambda: Irrep, sign: Sign) -> Self {
        WreathIrrep::Homogeneous { lambda, sign }
    }

    /// The trivial irrep ((n), +).
    pub fn trivial(n: usize) -> Self {
        WreathIrrep::Homogeneous { lambda: Partition::row(n), sign: Sign::Plus }
    }

    pub fn is_homogeneous(&self) -> bool {
        matches!(self, WreathIrrep::Homogeneous { .. })
    }

    pub fn n(&self) -> usize {
        match self {
            WreathIrrep::Inhomogeneous { a, .. } => a.size(),
            WreathIrrep::Homogeneous { lambda, .. } => lambda.size(),
        }
    }
}

impl fmt::Display for WreathIrrep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WreathIrrep::Inhomogeneous { a, b } => write!(f, "{{{a},{b}}}"),
            WreathIrrep::Homogeneous { lambda, sign } => write!(f, "({lambda}){}", sign.symbol()),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct IrrepJson {
    kind: String,
    a: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    b: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    sign: Option<String>,
}

impl Serialize for WreathIrrep {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let json = match self {
            WreathIrrep::Inhomogeneous { a, b } => IrrepJson {
                kind: "inhom".into(),
                a: a.to_plus_string(),
                b: Some(b.to_plus_string()),
                sign: None,
            },
            WreathIrrep::Homogeneous { lambda, sign } => IrrepJson {
                kind: "hom".into(),
                a: lambda.to_plus_string(),
                b: None,
                sign: Some(sign.symbol().into()),
            },
        };
        json.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for WreathIrrep {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let json = IrrepJson::deserialize(deserializer)?;
        let a: Partition = json.a.parse().map_err(D::Error::custom)?;
        match json.kind.as_str() {
            "inhom" => {
                let b: Partition = json
                    .b
                    .ok_or_else(|| D::Error::missing_field("b"))?
                    .parse()
                    .map_err(D::Error::custom)?;
                WreathIrrep::inhomogeneous(a, b).map_err(D::Error::custom)
            }
            "hom" => {
                let sign = match json.sign.as_deref() {
                    Some("+") => Sign::Plus,
                    Some("-") => Sign::Minus,
                    other => return Err(D::Error::custom(format!("bad sign {other:?}"))),
                };
                Ok(WreathIrrep::Homogeneous { lambda: a, sign })
            }
            other => Err(D::Error::custom(format!("unknown irrep kind {other:?}"))),
        }
    }
}

/// Conjugacy class of S_n wr Z_2.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WreathClass {
    /// ((alpha, beta), 0), unordered pair of cycle types with `a <= b`.
    NonFlip { a: CycleType, b: CycleType },
    /// ((alpha, beta), 1), indexed by the cycle type of alpha*beta.
    Flip { c: CycleType },
}

impl WreathClass {
    pub fn non_flip(x: CycleType, y: CycleType) -> Self {
        let (a, b) = if x <= y { (x, y) } else { (y, x) };
        WreathClass::NonFlip { a, b }
    }

    pub fn identity(n: usize) -> Self {
        WreathClass::NonFlip { a: Partition::column(n), b: Partition::column(n) }
    }

    /// Class of the involutions ((alpha, alpha^-1), 1).
    pub fn involution(n: usize) -> Self {
        WreathClass::Flip { c: Partition::column(n) }
    }
}

impl fmt::Display for WreathClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WreathClass::NonFlip { a, b } => write!(f, "nonflip({a};{b})"),
            WreathClass::Flip { c } => write!(f, "flip({c})"),
        }
    }
}

/// Hidden subgroup hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SubgroupSpec {
    #[serde(rename = "trivial")]
    Trivial,
    /// H = {1, m} with m the canonical flip involution ((1,1),1).
    #[serde(rename = "order2")]
    OrderTwo,
}

impl SubgroupSpec {
    pub fn name(self) -> &'static str {
        match self {
            SubgroupSpec::Trivial => "trivial",
            SubgroupSpec::OrderTwo => "order2",
        }
    }
}

impl std::str::FromStr for SubgroupSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trivial" => Ok(SubgroupSpec::Trivial),
            "order2" => Ok(SubgroupSpec::OrderTwo),
            other => Err(Error::InvalidArgument(format!("unknown subgroup {other:?}"))),
        }
    }
}

type Natural = Arc<Vec<(usize, BigRational)>>;

/// Character table of S_n wr Z_2 with cached natural distributions.
#[derive(Debug)]
pub struct WreathTable {
    sym: Arc<CharacterTable>,
    irreps: Vec<WreathIrrep>,
    irrep_index: HashMap<WreathIrrep, usize>,
    classes: Vec<WreathClass>,
    class_index: HashMap<WreathClass, usize>,
    class_sizes: Vec<BigUint>,
    class_sizes_small: Vec<Option<i128>>,
    dims: Vec<BigUint>,
    /// values[irrep * classes + class]
    values: Vec<i128>,
    order: BigUint,
    natural_cache: RwLock<HashMap<(usize, usize), Natural>>,
}

impl WreathTable {
    pub fn new(sym: Arc<CharacterTable>) -> Result<WreathTable> {
        let n = sym.n();
        if n == 0 {
            return Err(Error::InvalidArgument("wreath product needs n >= 1".into()));
        }
        let p = sym.len();
        let parts = sym.partitions();

        let mut classes = Vec::new();
        let mut class_sizes = Vec::new();
        let mut class_pairs = Vec::new();
        for i in 0..p {
            for j in i..p {
                classes.push(WreathClass::NonFlip { a: parts[i].clone(), b: parts[j].clone() });
                let prod = sym.class_size(i) * sym.class_size(j);
                class_sizes.push(if i == j { prod } else { prod * 2u32 });
                class_pairs.push((i, Some(j)));
            }
        }
        for c in 0..p {
            classes.push(WreathClass::Flip { c: parts[c].clone() });
            class_sizes.push(sym.order() * sym.class_size(c));
            class_pairs.push((c, None));
        }

        let mut irreps = Vec::new();
        for i in 0..p {
            for j in i + 1..p {
                irreps.push(WreathIrrep::Inhomogeneous { a: parts[i].clone(), b: parts[j].clone() });
            }
        }
        for lambda in parts {
            for sign in [Sign::Plus, Sign::Minus] {
                irreps.push(WreathIrrep::Homogeneous { lambda: lambda.clone(), sign });
            }
        }

        let irrep_rows: Vec<(usize, Option<usize>, i128)> = irreps
            .iter()
            .map(|irr| match irr {
                WreathIrrep::Inhomogeneous { a, b } => {
                    (sym.index_of(a).unwrap(), sym.index_of(b).ok(), 0)
                }
                WreathIrrep::Homogeneous { lambda, sign } => {
                    (sym.index_of(lambda).unwrap(), None, sign.factor())
                }
            })
            .collect();

        let nc = classes.len();
        let mut values = vec![0i128; irreps.len() * nc];
        for (r, &(l, m, sign)) in irrep_rows.iter().enumerate() {
            for (c, &(x, y)) in class_pairs.iter().enumerate() {
                let v = match (m, y) {
                    (Some(m), Some(y)) => sym.value(l, x) * sym.value(m, y) + sym.value(m, x) * sym.value(l, y),
                    (Some(_), None) => 0,
                    (None, Some(y)) => sym.value(l, x) * sym.value(l, y),
                    (None, None) => sign * sym.value(l, x),
                };
                values[r * nc + c] = v;
            }
        }

        let dims = irrep_rows
            .iter()
            .map(|&(l, m, _)| match m {
                Some(m) => sym.dim(l) * sym.dim(m) * 2u32,
                None => sym.dim(l) * sym.dim(l),
            })
            .collect();
        let order = sym.order() * sym.order() * 2u32;
        Ok(WreathTable {
            irrep_index: irreps.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect(),
            class_index: classes.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect(),
            class_sizes_small: class_sizes.iter().map(|s| s.to_i128()).collect(),
            sym,
            irreps,
            classes,
            class_sizes,
            dims,
            values,
            order,
            natural_cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn n(&self) -> usize {
        self.sym.n()
    }

    pub fn sym(&self) -> &Arc<CharacterTable> {
        &self.sym
    }

    pub fn irreps(&self) -> &[WreathIrrep] {
        &self.irreps
    }

    pub fn classes(&self) -> &[WreathClass] {
        &self.classes
    }

    pub fn irrep_index(&self, sigma: &WreathIrrep) -> Result<usize> {
        self.irrep_index
            .get(sigma)
            .copied()
            .ok_or_else(|| Error::InvalidArgument(format!("{sigma} is not an irrep of S_{} wr Z_2", self.n())))
    }

    pub fn class_index(&self, cls: &WreathClass) -> Result<usize> {
        self.class_index
            .get(cls)
            .copied()
            .ok_or_else(|| Error::InvalidArgument(format!("{cls} is not a class of S_{} wr Z_2", self.n())))
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn class_size(&self, class: usize) -> &BigUint {
        &self.class_sizes[class]
    }

    pub fn dim(&self, irrep: usize) -> &BigUint {
        &self.dims[irrep]
    }

    pub fn value(&self, irrep: usize, class: usize) -> i128 {
        self.values[irrep * self.classes.len() + class]
    }

    pub fn is_homogeneous(&self, irrep: usize) -> bool {
        self.irreps[irrep].is_homogeneous()
    }

    pub fn character(&self, sigma: &WreathIrrep, cls: &WreathClass) -> Result<BigInt> {
        Ok(BigInt::from(self.value(self.irrep_index(sigma)?, self.class_index(cls)?)))
    }

    fn class_sum(&self, rows: &[usize]) -> BigInt {
        let mut acc = Acc::default();
        let mut factors = vec![0i128; rows.len()];
        for c in 0..self.classes.len() {
            for (f, &r) in factors.iter_mut().zip(rows) {
                *f = self.value(r, c);
            }
            acc.add_weighted(&self.class_sizes[c], self.class_sizes_small[c], &factors);
        }
        acc.into_bigint()
    }

    /// Row orthogonality over classes weighted by class size.
    pub fn check_orthogonality(&self) -> bool {
        let order = BigInt::from(self.order.clone());
        (0..self.irreps.len()).all(|s| {
            (s..self.irreps.len()).all(|t| {
                let sum = self.class_sum(&[s, t]);
                if s == t {
                    sum == order
                } else {
                    sum.is_zero()
                }
            })
        })
    }

    fn distribution_from<I: IntoIterator<Item = (usize, BigRational)>>(&self, it: I) -> WreathDistribution {
        WreathDistribution {
            n: self.n(),
            probs: it.into_iter().map(|(i, p)| (self.irreps[i].clone(), p)).collect(),
        }
    }

    /// Plancherel mass d^2 / (2 (n!)^2) of the irrep with the given index.
    pub fn plancherel_mass(&self, irrep: usize) -> BigRational {
        let d = BigInt::from(self.dims[irrep].clone());
        BigRational::new(&d * &d, BigInt::from(self.order.clone()))
    }

    pub fn plancherel(&self) -> WreathDistribution {
        self.distribution_from((0..self.irreps.len()).map(|i| (i, self.plancherel_mass(i))))
    }

    /// D_H(sigma) = d |H| rk(sum_h sigma(h)) / |G|; for H = {1, m} the rank is
    /// (d + chi(m)) / 2.
    pub fn leaf_mass(&self, irrep: usize, subgroup: SubgroupSpec) -> BigRational {
        match subgroup {
            SubgroupSpec::Trivial => self.plancherel_mass(irrep),
            SubgroupSpec::OrderTwo => {
                let m = self.class_index[&WreathClass::involution(self.n())];
                let d = BigInt::from(self.dims[irrep].clone());
                let chi_m = BigInt::from(self.value(irrep, m));
                BigRational::new(&d * (&d + chi_m), BigInt::from(self.order.clone()))
            }
        }
    }

    pub fn leaf_distribution(&self, subgroup: SubgroupSpec) -> WreathDistribution {
        self.distribution_from(
            (0..self.irreps.len())
                .map(|i| (i, self.leaf_mass(i, subgroup)))
                .filter(|(_, p)| !p.is_zero()),
        )
    }

    /// Natural distribution of irreps `s1 (x) s2`, as (irrep index, mass)
    /// with zero masses omitted. Cached per unordered pair.
    pub fn natural_by_index(&self, s1: usize, s2: usize) -> Result<Natural> {
        let key = (s1.min(s2), s1.max(s2));
        if let Some(hit) = self.natural_cache.read().expect("cache lock poisoned").get(&key) {
            return Ok(Arc::clone(hit));
        }
        let nc = self.classes.len();
        let pair: Vec<i128> = (0..nc).map(|c| self.value(s1, c) * self.value(s2, c)).collect();
        let order = BigInt::from(self.order.clone());
        let denom = BigInt::from(&self.dims[s1] * &self.dims[s2]);
        let mut out = Vec::new();
        for t in 0..self.irreps.len() {
            let mut acc = Acc::default();
            for (c, &w) in pair.iter().enumerate() {
                acc.add_weighted(&self.class_sizes[c], self.class_sizes_small[c], &[self.value(t, c), w]);
            }
            let mult = exact_div(&acc.into_bigint(), &order, "wreath multiplicity")?;
            if mult.is_negative() {
                return Err(Error::InexactDivision("wreath multiplicity (negative)"));
            }
            if !mult.is_zero() {
                let num = mult * BigInt::from(self.dims[t].clone());
                out.push((t, BigRational::new(num, denom.clone())));
            }
        }
        let value = Arc::new(out);
        self.natural_cache
            .write()
            .expect("cache lock poisoned")
            .insert(key, Arc::clone(&value));
        Ok(value)
    }

    pub fn natural_distribution(&self, s1: &WreathIrrep, s2: &WreathIrrep) -> Result<WreathDistribution> {
        let nat = self.natural_by_index(self.irrep_index(s1)?, self.irrep_index(s2)?)?;
        Ok(self.distribution_from(nat.iter().cloned()))
    }

    /// Total mass on homogeneous irreps in the natural distribution of s1 (x) s2.
    pub fn homogeneous_mass_by_index(&self, s1: usize, s2: usize) -> Result<BigRational> {
        Ok(self
            .natural_by_index(s1, s2)?
            .iter()
            .filter(|(t, _)| self.is_homogeneous(*t))
            .fold(BigRational::zero(), |acc, (_, p)| acc + p))
    }

    pub fn homogeneous_mass(&self, s1: &WreathIrrep, s2: &WreathIrrep) -> Result<BigRational> {
        self.homogeneous_mass_by_index(self.irrep_index(s1)?, self.irrep_index(s2)?)
    }
}

/// Exact distribution over irreps of S_n wr Z_2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WreathDistribution {
    pub n: usize,
    pub probs: BTreeMap<WreathIrrep, BigRational>,
}

impl WreathDistribution {
    pub fn get(&self, sigma: &WreathIrrep) -> BigRational {
        self.probs.get(sigma).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn total(&self) -> BigRational {
        self.probs.values().fold(BigRational::zero(), |a, b| a + b)
    }

    pub fn is_normalized(&self) -> bool {
        self.total().is_one() && self.probs.values().all(|p| !p.is_negative())
    }

    pub fn homogeneous_mass(&self) -> BigRational {
        self.probs
            .iter()
            .filter(|(k, _)| k.is_homogeneous())
            .fold(BigRational::zero(), |a, (_, p)| a + p)
    }
}

impl Serialize for WreathDistribution {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry<'a> {
            irrep: &'a WreathIrrep,
            p: String,
        }
        serializer.collect_seq(self.probs.iter().map(|(k, v)| Entry { irrep: k, p: v.to_string() }))
    }
}

/// P_coll of the natural distributions in lambda (x) mu and lambda2 (x) mu2.
pub fn collision_probability(
    sym: &CharacterTable,
    lambda: &Irrep,
    mu: &Irrep,
    lambda2: &Irrep,
    mu2: &Irrep,
) -> Result<BigRational> {
    let p = sym.natural_distribution(lambda, mu)?;
    let q = sym.natural_distribution(lambda2, mu2)?;
    Ok(p.collision(&q))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(n: usize) -> WreathTable {
        WreathTable::new(Arc::new(CharacterTable::compute(n))).unwrap()
    }

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn irrep_counts_and_dimensions() {
        let t1 = table(1);
        assert_eq!(t1.irreps().len(), 2);
        assert!(t1.irreps().iter().all(|s| s.is_homogeneous()));
        let t2 = table(2);
        let inhom = t2.irreps().iter().filter(|s| !s.is_homogeneous()).count();
        assert_eq!((inhom, t2.irreps().len() - inhom), (1, 4));
        let t3 = table(3);
        let inhom = t3.irreps().iter().filter(|s| !s.is_homogeneous()).count();
        assert_eq!((inhom, t3.irreps().len() - inhom), (3, 6));
        for n in 1..=6 {
            let t = table(n);
            let sum: BigUint = (0..t.irreps().len()).map(|i| t.dim(i) * t.dim(i)).sum();
            assert_eq!(&sum, t.order());
            let classes: BigUint = t.class_sizes.iter().sum();
            assert_eq!(&classes, t.order());
        }
    }

    #[test]
    fn characters_at_special_classes() {
        let t = table(3);
        let flip_m = WreathClass::involution(3);
        let id = WreathClass::identity(3);
        for sigma in t.irreps() {
            let v = t.character(sigma, &flip_m).unwrap();
            match sigma {
                WreathIrrep::Inhomogeneous { .. } => assert!(v.is_zero()),
                WreathIrrep::Homogeneous { lambda, sign } => {
                    let d = BigInt::from(crate::partitions::dimension(lambda));
                    assert_eq!(v, d.clone() * sign.factor());
                    assert_eq!(t.character(sigma, &id).unwrap(), &d * &d);
                }
            }
            assert!(t.character(sigma, &WreathClass::Flip { c: p("3") }).is_ok());
        }
    }

    #[test]
    fn orthogonality() {
        for n in 1..=4 {
            assert!(table(n).check_orthogonality(), "n={n}");
        }
    }

    #[test]
    fn plancherel_masses() {
        assert_eq!(table(3).plancherel().homogeneous_mass(), r(1, 2));
        let t1 = table(1);
        for (_, m) in t1.plancherel().probs {
            assert_eq!(m, r(1, 2));
        }
        for n in 1..=5 {
            let t = table(n);
            let pl = t.plancherel();
            assert!(pl.is_normalized());
            let sym = t.sym().plancherel();
            for (sigma, mass) in &pl.probs {
                let expected = match sigma {
                    WreathIrrep::Inhomogeneous { a, b } => sym.get(a) * sym.get(b) * r(2, 1),
                    WreathIrrep::Homogeneous { lambda, .. } => sym.get(lambda) * sym.get(lambda) / r(2, 1),
                };
                assert_eq!(mass, &expected);
            }
        }
    }

    #[test]
    fn leaf_distributions() {
        for n in 1..=5 {
            let t = table(n);
            let d = t.leaf_distribution(SubgroupSpec::OrderTwo);
            assert!(d.is_normalized(), "n={n}");
            for (i, sigma) in t.irreps().iter().enumerate() {
                let mass = t.leaf_mass(i, SubgroupSpec::OrderTwo);
                match sigma {
                    WreathIrrep::Inhomogeneous { .. } => assert_eq!(mass, t.plancherel_mass(i)),
                    WreathIrrep::Homogeneous { lambda, sign } => {
                        let dl = BigInt::from(crate::partitions::dimension(lambda));
                        let d2 = &dl * &dl;
                        let expected = BigRational::new(
                            &d2 * (&d2 + dl * sign.factor()),
                            BigInt::from(t.order().clone()),
                        );
                        assert_eq!(mass, expected);
                    }
                }
            }
            assert_eq!(t.leaf_distribution(SubgroupSpec::Trivial), t.plancherel());
        }
    }

    #[test]
    fn natural_with_trivial_is_point_mass() {
        let t = table(3);
        for sigma in t.irreps() {
            let d = t.natural_distribution(sigma, &WreathIrrep::trivial(3)).unwrap();
            assert_eq!(d.probs.len(), 1);
            assert_eq!(d.get(sigma), r(1, 1));
        }
    }

    #[test]
    fn natural_normalized_and_sign_symmetric() {
        let t = table(3);
        for s1 in t.irreps() {
            for s2 in t.irreps() {
                let d = t.natural_distribution(s1, s2).unwrap();
                assert!(d.is_normalized());
                if !s1.is_homogeneous() && !s2.is_homogeneous() {
                    for lambda in t.sym().partitions() {
                        let plus = d.get(&WreathIrrep::homogeneous(lambda.clone(), Sign::Plus));
                        let minus = d.get(&WreathIrrep::homogeneous(lambda.clone(), Sign::Minus));
                        assert_eq!(plus, minus);
                    }
                }
            }
        }
    }

    #[test]
    fn n2_inhom_square_splits_into_four() {
        let t = table(2);
        let s = WreathIrrep::inhomogeneous(p("2"), p("1+1")).unwrap();
        let d = t.natural_distribution(&s, &s).unwrap();
        assert_eq!(d.probs.len(), 4);
        assert!(d.probs.values().all(|v| *v == r(1, 4)));
    }

    #[test]
    fn collision_examples() {
        let sym = CharacterTable::compute(3);
        let (triv, std) = (p("3"), p("2+1"));
        assert_eq!(collision_probability(&sym, &std, &triv, &std, &triv).unwrap(), r(1, 1));
        assert_eq!(collision_probability(&sym, &std, &triv, &p("1+1+1"), &triv).unwrap(), r(0, 1));
        assert_eq!(collision_probability(&sym, &std, &std, &std, &std).unwrap(), r(3, 8));
    }

    #[test]
    fn homogeneous_mass_factorizes() {
        for n in 2..=4 {
            let t = table(n);
            let sym = t.sym();
            for s1 in t.irreps().iter().filter(|s| !s.is_homogeneous()) {
                for s2 in t.irreps().iter().filter(|s| !s.is_homogeneous()) {
                    let (WreathIrrep::Inhomogeneous { a: l, b: l2 }, WreathIrrep::Inhomogeneous { a: m, b: m2 }) = (s1, s2) else {
                        unreachable!()
                    };
                    let c1 = collision_probability(sym, l, m, l2, m2).unwrap();
                    let c2 = collision_probability(sym, l, m2, l2, m).unwrap();
                    let hom = t.homogeneous_mass(s1, s2).unwrap();
                    assert_eq!(hom, (&c1 + &c2) / r(2, 1));
                    assert!(hom <= c1.max(c2));
                }
            }
        }
    }

    #[test]
    fn json_forms() {
        let s = WreathIrrep::inhomogeneous(p("2+2"), p("3+1")).unwrap();
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"{"kind":"inhom","a":"3+1","b":"2+2"}"#);
        let h = WreathIrrep::homogeneous(p("2+2"), Sign::Plus);
        assert_eq!(serde_json::to_string(&h).unwrap(), r#"{"kind":"hom","a":"2+2","sign":"+"}"#);
        let back: WreathIrrep = serde_json::from_str(r#"{"kind":"inhom","a":"2+2","b":"3+1"}"#).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<WreathIrrep>(r#"{"kind":"inhom","a":"2","b":"2"}"#).is_err());
        assert!(serde_json::from_str::<WreathIrrep>(r#"{"kind":"hom","a":"2","sign":"*"}"#).is_err());
    }
}
