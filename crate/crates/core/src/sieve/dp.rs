//! Exact transcript probabilities.
//!
//! For a tree with node labels sigma_i the probability of the labeling is
//! `|G|^-k * sum_a prod_i d_i chi_i(a_i)` over assignments a whose
//! root-to-leaf products all land in the target set. Walking the tree from
//! the root, the sum only depends on the prefix product p through a
//! conjugation orbit, so each node becomes a matrix acting on orbit-indexed
//! vectors:
//!
//! `F_i(p) = sum_a e_i(a) prod_c F_c(p a)`, with `e_i = d_i chi_i`.
//!
//! Target {1}: orbits are the conjugacy classes of G and the matrix entries
//! come from class multiplication coefficients.
//!
//! Target {1, m}: F is only invariant under conjugation by the centralizer
//! Z of m, so the state is the Z-orbit of the prefix. The transition counts
//! are tabulated from explicit group elements.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::sieve::topology::Topology;
use crate::sieve::transcript::Transcript;
use crate::wreath::elements::WreathElements;
use crate::wreath::{SubgroupSpec, WreathClass, WreathIrrep, WreathTable};

/// Set that every root-to-leaf product must land in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Identity,
    IdentityOrInvolution,
}

impl From<SubgroupSpec> for Target {
    fn from(s: SubgroupSpec) -> Self {
        match s {
            SubgroupSpec::Trivial => Target::Identity,
            SubgroupSpec::OrderTwo => Target::IdentityOrInvolution,
        }
    }
}

/// Vector of exact integers, kept in i128 until something overflows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DpVec {
    Small(Vec<i128>),
    Big(Vec<BigInt>),
}

impl DpVec {
    pub fn len(&self) -> usize {
        match self {
            DpVec::Small(v) => v.len(),
            DpVec::Big(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, i: usize) -> BigInt {
        match self {
            DpVec::Small(v) => BigInt::from(v[i]),
            DpVec::Big(v) => v[i].clone(),
        }
    }

    pub fn to_big(&self) -> Vec<BigInt> {
        match self {
            DpVec::Small(v) => v.iter().map(|&x| BigInt::from(x)).collect(),
            DpVec::Big(v) => v.clone(),
        }
    }

    /// Pointwise product.
    pub fn hadamard(&self, other: &DpVec) -> DpVec {
        if let (DpVec::Small(a), DpVec::Small(b)) = (self, other) {
            let small: Option<Vec<i128>> = a.iter().zip(b).map(|(x, y)| x.checked_mul(*y)).collect();
            if let Some(v) = small {
                return DpVec::Small(v);
            }
        }
        DpVec::Big(self.to_big().into_iter().zip(other.to_big()).map(|(x, y)| x * y).collect())
    }

    /// `(M u)[row]` for a row-major square matrix.
    pub fn dot_row(m: &[i128], row: usize, u: &DpVec) -> BigInt {
        let s = u.len();
        let r = &m[row * s..(row + 1) * s];
        if let DpVec::Small(v) = u {
            let mut acc: i128 = 0;
            let ok = r.iter().zip(v).try_for_each(|(a, b)| {
                acc = acc.checked_add(a.checked_mul(*b)?)?;
                Some(())
            });
            if ok.is_some() {
                return BigInt::from(acc);
            }
        }
        let big = u.to_big();
        r.iter()
            .zip(&big)
            .filter(|(a, _)| **a != 0)
            .fold(BigInt::zero(), |acc, (a, b)| acc + b * *a)
    }

    pub fn apply(m: &[i128], u: &DpVec) -> DpVec {
        let s = u.len();
        if let DpVec::Small(v) = u {
            let small: Option<Vec<i128>> = (0..s)
                .map(|row| {
                    m[row * s..(row + 1) * s]
                        .iter()
                        .zip(v)
                        .try_fold(0i128, |acc, (a, b)| acc.checked_add(a.checked_mul(*b)?))
                })
                .collect();
            if let Some(v) = small {
                return DpVec::Small(v);
            }
        }
        DpVec::Big((0..s).map(|row| DpVec::dot_row(m, row, u)).collect())
    }
}

/// Orbit-indexed transfer data for one target set.
pub trait Kernel: Send + Sync {
    fn states(&self) -> usize;
    /// State of the empty prefix (the identity).
    fn root_state(&self) -> usize;
    /// F of a leaf labeled `sigma`.
    fn leaf(&self, sigma: usize) -> &[i128];
    /// Row-major `states x states` transfer matrix of an internal node.
    fn matrix(&self, sigma: usize) -> &[i128];
}

fn weights(table: &WreathTable, sigma: usize) -> Vec<i128> {
    let d = table.dim(sigma);
    let d: i128 = i128::try_from(d).expect("wreath dimension fits i128");
    (0..table.classes().len()).map(|c| d * table.value(sigma, c)).collect()
}

/// Class-level kernel for target {1}.
pub struct ClassDp {
    table: Arc<WreathTable>,
    root: usize,
    /// coeff[(p * nc + a) * nc + c] = #{x in class a : p x in class c}
    /// for a fixed p in class p.
    coeff: Vec<i128>,
    leaves: Vec<OnceLock<Vec<i128>>>,
    matrices: Vec<OnceLock<Vec<i128>>>,
}

impl ClassDp {
    pub fn new(table: Arc<WreathTable>, limits: &Limits) -> Result<Self> {
        limits.check_class_dp(table.n())?;
        let nc = table.classes().len();
        let ni = table.irreps().len();
        let overflow = || Error::Budget(format!("class coefficients overflow at n={}", table.n()));
        let small = |x: &num_bigint::BigUint| i128::try_from(x).map_err(|_| overflow());
        let dims: Vec<i128> = (0..ni).map(|s| small(table.dim(s))).collect::<Result<_>>()?;
        let sizes: Vec<i128> = (0..nc).map(|c| small(table.class_size(c))).collect::<Result<_>>()?;
        let order = small(table.order())?;
        let lcm = dims.iter().fold(1i128, |l, &d| l.lcm(&d));
        let scale: Vec<i128> = dims.iter().map(|&d| lcm / d).collect();
        // count = |A||C| / (|G| lcm) * sum_s chi_s(A) chi_s(C) chi_s(P) lcm / d_s
        let mut coeff = vec![0i128; nc * nc * nc];
        for p in 0..nc {
            for a in 0..nc {
                for c in 0..nc {
                    let mut sum: i128 = 0;
                    for s in 0..ni {
                        let term = table
                            .value(s, a)
                            .checked_mul(table.value(s, c))
                            .and_then(|x| x.checked_mul(table.value(s, p)))
                            .and_then(|x| x.checked_mul(scale[s]))
                            .ok_or_else(overflow)?;
                        sum = sum.checked_add(term).ok_or_else(overflow)?;
                    }
                    let num = sum
                        .checked_mul(sizes[a])
                        .and_then(|x| x.checked_mul(sizes[c]))
                        .ok_or_else(overflow)?;
                    let den = order * lcm;
                    if num % den != 0 {
                        return Err(Error::InexactDivision("class multiplication coefficient"));
                    }
                    coeff[(p * nc + a) * nc + c] = num / den;
                }
            }
        }
        let root = table.class_index(&WreathClass::identity(table.n()))?;
        Ok(ClassDp {
            root,
            coeff,
            leaves: (0..ni).map(|_| OnceLock::new()).collect(),
            matrices: (0..ni).map(|_| OnceLock::new()).collect(),
            table,
        })
    }

    /// Class multiplication coefficient for prefix class `p`, step class `a`
    /// and result class `c`.
    pub fn coefficient(&self, p: usize, a: usize, c: usize) -> i128 {
        let nc = self.table.classes().len();
        self.coeff[(p * nc + a) * nc + c]
    }
}

impl Kernel for ClassDp {
    fn states(&self) -> usize {
        self.table.classes().len()
    }

    fn root_state(&self) -> usize {
        self.root
    }

    fn leaf(&self, sigma: usize) -> &[i128] {
        // every class of S_n wr Z_2 is closed under inversion
        self.leaves[sigma].get_or_init(|| weights(&self.table, sigma))
    }

    fn matrix(&self, sigma: usize) -> &[i128] {
        self.matrices[sigma].get_or_init(|| {
            let nc = self.states();
            let e = weights(&self.table, sigma);
            let mut m = vec![0i128; nc * nc];
            for p in 0..nc {
                for a in 0..nc {
                    if e[a] == 0 {
                        continue;
                    }
                    for c in 0..nc {
                        m[p * nc + c] += e[a] * self.coeff[(p * nc + a) * nc + c];
                    }
                }
            }
            m
        })
    }
}

/// Kernel for target {1, m} over orbits of G under conjugation by C_G(m).
pub struct RelativeClassDp {
    table: Arc<WreathTable>,
    states: usize,
    root: usize,
    /// counts[(p * states + o) * nc + a] = #{y in orbit o : p^-1 y in class a}
    counts: Vec<u32>,
    /// classes of p^-1 and p^-1 m for each orbit representative p
    leaf_classes: Vec<[usize; 2]>,
    orbit_sizes: Vec<usize>,
    leaves: Vec<OnceLock<Vec<i128>>>,
    matrices: Vec<OnceLock<Vec<i128>>>,
}

impl RelativeClassDp {
    pub fn new(table: Arc<WreathTable>, limits: &Limits) -> Result<Self> {
        limits.check_exact(table.n())?;
        let g = WreathElements::new(&table)?;
        let sym = g.sym();
        let centralizer: Vec<u32> = (0..sym.len() as u32)
            .flat_map(|c| [g.encode(c, c, 0), g.encode(c, c, 1)])
            .collect();
        let m = g.involution();
        debug_assert!(centralizer.iter().all(|&z| g.mul(z, m) == g.mul(m, z)));

        let size = g.len();
        let mut orbit = vec![u32::MAX; size];
        let mut reps = Vec::new();
        let mut orbit_sizes = Vec::new();
        for x in 0..size as u32 {
            if orbit[x as usize] != u32::MAX {
                continue;
            }
            let id = reps.len() as u32;
            reps.push(x);
            let mut count = 0;
            for &z in &centralizer {
                let y = g.mul(g.mul(z, x), g.inv(z));
                if orbit[y as usize] == u32::MAX {
                    orbit[y as usize] = id;
                    count += 1;
                }
            }
            orbit_sizes.push(count);
        }
        let states = reps.len();
        let nc = table.classes().len();
        let mut counts = vec![0u32; states * states * nc];
        let mut leaf_classes = Vec::with_capacity(states);
        for (pi, &p) in reps.iter().enumerate() {
            let pinv = g.inv(p);
            for y in 0..size as u32 {
                let o = orbit[y as usize] as usize;
                let a = g.class_of(g.mul(pinv, y));
                counts[(pi * states + o) * nc + a] += 1;
            }
            leaf_classes.push([g.class_of(pinv), g.class_of(g.mul(pinv, m))]);
        }
        let root = orbit[g.identity() as usize] as usize;
        let ni = table.irreps().len();
        Ok(RelativeClassDp {
            table,
            states,
            root,
            counts,
            leaf_classes,
            orbit_sizes,
            leaves: (0..ni).map(|_| OnceLock::new()).collect(),
            matrices: (0..ni).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn orbit_sizes(&self) -> &[usize] {
        &self.orbit_sizes
    }
}

impl Kernel for RelativeClassDp {
    fn states(&self) -> usize {
        self.states
    }

    fn root_state(&self) -> usize {
        self.root
    }

    fn leaf(&self, sigma: usize) -> &[i128] {
        self.leaves[sigma].get_or_init(|| {
            let e = weights(&self.table, sigma);
            self.leaf_classes.iter().map(|[a, b]| e[*a] + e[*b]).collect()
        })
    }

    fn matrix(&self, sigma: usize) -> &[i128] {
        self.matrices[sigma].get_or_init(|| {
            let s = self.states;
            let nc = self.table.classes().len();
            let e = weights(&self.table, sigma);
            let mut m = vec![0i128; s * s];
            for (po, entry) in m.iter_mut().enumerate() {
                let row = &self.counts[po * nc..(po + 1) * nc];
                *entry = row.iter().zip(&e).map(|(&k, &w)| k as i128 * w).sum();
            }
            m
        })
    }
}

/// Exact-probability engine over one wreath table; kernels are built on
/// first use and shared.
pub struct ExactEngine {
    table: Arc<WreathTable>,
    limits: Limits,
    class_dp: OnceLock<Arc<ClassDp>>,
    relative: OnceLock<Arc<RelativeClassDp>>,
}

/// Exact probabilities of one labeled forest under both hypotheses.
#[derive(Debug, Clone, Serialize)]
pub struct Score {
    #[serde(serialize_with = "crate::report::ser_display")]
    pub trivial: BigRational,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub order2: BigRational,
    /// order2 / trivial, absent when the trivial probability is zero.
    #[serde(serialize_with = "crate::report::ser_display_opt")]
    pub likelihood_ratio: Option<BigRational>,
}

/// Total variation between the two transcript distributions of one
/// topology.
#[derive(Debug, Clone, Serialize)]
pub struct TvReport {
    pub n: usize,
    pub topology: String,
    pub labelings: usize,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub tv: BigRational,
    /// Pr[some label is homogeneous] under the trivial subgroup.
    #[serde(serialize_with = "crate::report::ser_display")]
    pub homogeneous_trivial: BigRational,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub homogeneous_order2: BigRational,
    /// Pr[tv-contributing labeling has only inhomogeneous labels]; always 0.
    #[serde(serialize_with = "crate::report::ser_display")]
    pub inhomogeneous_contribution: BigRational,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub total_trivial: BigRational,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub total_order2: BigRational,
}

struct Labeled {
    labels: Vec<(usize, usize)>,
    value: DpVec,
    homogeneous: bool,
}

impl ExactEngine {
    pub fn new(table: Arc<WreathTable>, limits: Limits) -> Self {
        ExactEngine { table, limits, class_dp: OnceLock::new(), relative: OnceLock::new() }
    }

    pub fn table(&self) -> &Arc<WreathTable> {
        &self.table
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    pub fn class_kernel(&self) -> Result<Arc<ClassDp>> {
        if let Some(k) = self.class_dp.get() {
            return Ok(Arc::clone(k));
        }
        let k = Arc::new(ClassDp::new(Arc::clone(&self.table), &self.limits)?);
        Ok(Arc::clone(self.class_dp.get_or_init(|| k)))
    }

    pub fn relative_kernel(&self) -> Result<Arc<RelativeClassDp>> {
        if let Some(k) = self.relative.get() {
            return Ok(Arc::clone(k));
        }
        let k = Arc::new(RelativeClassDp::new(Arc::clone(&self.table), &self.limits)?);
        Ok(Arc::clone(self.relative.get_or_init(|| k)))
    }

    pub fn kernel(&self, target: Target) -> Result<Arc<dyn Kernel>> {
        Ok(match target {
            Target::Identity => self.class_kernel()?,
            Target::IdentityOrInvolution => self.relative_kernel()?,
        })
    }

    fn indices(&self, topology: &Topology, labels: &[WreathIrrep]) -> Result<Vec<usize>> {
        if labels.len() != topology.len() {
            return Err(Error::InvalidArgument(format!(
                "{} labels for {} nodes",
                labels.len(),
                topology.len()
            )));
        }
        labels.iter().map(|l| self.table.irrep_index(l)).collect()
    }

    /// F vector at `node`, given per-node irrep indices.
    pub fn subtree_vector(kernel: &dyn Kernel, topology: &Topology, labels: &[usize], node: usize) -> DpVec {
        let mut f: Vec<Option<DpVec>> = vec![None; topology.len()];
        for id in topology.subtree(node) {
            let v = match topology.children(id) {
                None => DpVec::Small(kernel.leaf(labels[id]).to_vec()),
                Some((a, b)) => {
                    let u = f[a].take().expect("child first").hadamard(f[b].as_ref().expect("child first"));
                    DpVec::apply(kernel.matrix(labels[id]), &u)
                }
            };
            f[id] = Some(v);
        }
        f[node].take().expect("root computed")
    }

    /// Unnormalized tree value: `|G|^k` times the tree's probability.
    fn tree_value(kernel: &dyn Kernel, topology: &Topology, labels: &[usize], root: usize) -> BigInt {
        match topology.children(root) {
            None => BigInt::from(kernel.leaf(labels[root])[kernel.root_state()]),
            Some((a, b)) => {
                let u = Self::subtree_vector(kernel, topology, labels, a)
                    .hadamard(&Self::subtree_vector(kernel, topology, labels, b));
                DpVec::dot_row(kernel.matrix(labels[root]), kernel.root_state(), &u)
            }
        }
    }

    fn normalize(&self, value: BigInt, nodes: usize) -> BigRational {
        let order = BigInt::from(self.table.order().clone());
        BigRational::new(value, num_traits::pow(order, nodes))
    }

    /// `|G|^-k` times the signed sum over assignments with every root-to-leaf
    /// product in `target`, multiplied over the trees of the forest.
    pub fn legal_assignment_sum(&self, topology: &Topology, labels: &[WreathIrrep], target: Target) -> Result<BigRational> {
        let idx = self.indices(topology, labels)?;
        let kernel = self.kernel(target)?;
        let value = topology
            .roots()
            .into_iter()
            .fold(BigInt::one(), |acc, r| acc * Self::tree_value(kernel.as_ref(), topology, &idx, r));
        Ok(self.normalize(value, topology.len()))
    }

    pub fn transcript_probability(&self, topology: &Topology, labels: &[WreathIrrep], subgroup: SubgroupSpec) -> Result<BigRational> {
        self.legal_assignment_sum(topology, labels, subgroup.into())
    }

    /// Trivial-subgroup probability from leaf Plancherel masses and natural
    /// distribution conditionals.
    pub fn compositional_trivial(&self, topology: &Topology, labels: &[WreathIrrep]) -> Result<BigRational> {
        let idx = self.indices(topology, labels)?;
        let mut p = BigRational::one();
        for id in 0..topology.len() {
            match topology.children(id) {
                None => p *= self.table.plancherel_mass(idx[id]),
                Some((a, b)) => {
                    let nat = self.table.natural_by_index(idx[a], idx[b])?;
                    match nat.iter().find(|(t, _)| *t == idx[id]) {
                        Some((_, q)) => p *= q,
                        None => return Ok(BigRational::zero()),
                    }
                }
            }
        }
        Ok(p)
    }

    pub fn score(&self, transcript: &Transcript) -> Result<Score> {
        let topology = transcript.forest.topology();
        let labels = transcript.forest.labels();
        let trivial = self.transcript_probability(&topology, &labels, SubgroupSpec::Trivial)?;
        let order2 = self.transcript_probability(&topology, &labels, SubgroupSpec::OrderTwo)?;
        let likelihood_ratio = (!trivial.is_zero()).then(|| &order2 / &trivial);
        Ok(Score { trivial, order2, likelihood_ratio })
    }

    /// Every labeling of the subtree at `node`, with its F vector. At a tree
    /// root only the root-state entry is kept.
    fn enumerate_subtree(&self, kernel: &dyn Kernel, topology: &Topology, node: usize, is_root: bool) -> Vec<Labeled> {
        let ni = self.table.irreps().len();
        let rs = kernel.root_state();
        match topology.children(node) {
            None => (0..ni)
                .map(|s| {
                    let leaf = kernel.leaf(s);
                    Labeled {
                        labels: vec![(node, s)],
                        value: if is_root { DpVec::Small(vec![leaf[rs]]) } else { DpVec::Small(leaf.to_vec()) },
                        homogeneous: self.table.is_homogeneous(s),
                    }
                })
                .collect(),
            Some((a, b)) => {
                let left = self.enumerate_subtree(kernel, topology, a, false);
                let right = self.enumerate_subtree(kernel, topology, b, false);
                let mut out = Vec::with_capacity(left.len() * right.len() * ni);
                for l in &left {
                    for r in &right {
                        let u = l.value.hadamard(&r.value);
                        for s in 0..ni {
                            let m = kernel.matrix(s);
                            let value = if is_root {
                                DpVec::Big(vec![DpVec::dot_row(m, rs, &u)])
                            } else {
                                DpVec::apply(m, &u)
                            };
                            let mut labels = l.labels.clone();
                            labels.extend_from_slice(&r.labels);
                            labels.push((node, s));
                            out.push(Labeled {
                                labels,
                                value,
                                homogeneous: l.homogeneous || r.homogeneous || self.table.is_homogeneous(s),
                            });
                        }
                    }
                }
                out
            }
        }
    }

    /// All labelings of `topology` with their unnormalized values under
    /// `target`, keyed by per-node irrep indices.
    fn enumerate_forest(&self, topology: &Topology, target: Target) -> Result<Vec<(Vec<usize>, BigInt, bool)>> {
        self.limits.check_enum_nodes(topology.len())?;
        let kernel = self.kernel(target)?;
        let mut acc: Vec<(Vec<usize>, BigInt, bool)> = vec![(vec![0; topology.len()], BigInt::one(), false)];
        for root in topology.roots() {
            let tree = self.enumerate_subtree(kernel.as_ref(), topology, root, true);
            let mut next = Vec::with_capacity(acc.len() * tree.len());
            for (labels, v, h) in &acc {
                for t in &tree {
                    let mut labels = labels.clone();
                    for &(node, s) in &t.labels {
                        labels[node] = s;
                    }
                    next.push((labels, v * t.value.get(0), *h || t.homogeneous));
                }
            }
            acc = next;
        }
        Ok(acc)
    }

    /// Exact distribution over complete labelings of a topology.
    pub fn labeling_distribution(&self, topology: &Topology, subgroup: SubgroupSpec) -> Result<Vec<(Vec<WreathIrrep>, BigRational)>> {
        let k = topology.len();
        Ok(self
            .enumerate_forest(topology, subgroup.into())?
            .into_iter()
            .map(|(labels, v, _)| {
                let irreps = labels.iter().map(|&s| self.table.irreps()[s].clone()).collect();
                (irreps, self.normalize(v, k))
            })
            .collect())
    }

    pub fn tv_distance(&self, topology: &Topology) -> Result<TvReport> {
        let k = topology.len();
        let trivial = self.enumerate_forest(topology, Target::Identity)?;
        let order2 = self.enumerate_forest(topology, Target::IdentityOrInvolution)?;
        let mut diff = BigInt::zero();
        let mut hom_t = BigInt::zero();
        let mut hom_h = BigInt::zero();
        let mut inhom = BigInt::zero();
        let mut tot_t = BigInt::zero();
        let mut tot_h = BigInt::zero();
        let mut lookup: HashMap<&[usize], &BigInt> = HashMap::with_capacity(order2.len());
        for (labels, v, _) in &order2 {
            lookup.insert(labels.as_slice(), v);
        }
        for (labels, vt, hom) in &trivial {
            let vh = lookup[labels.as_slice()];
            let d = (vh - vt).abs();
            if *hom {
                hom_t += vt;
                hom_h += vh;
            } else {
                inhom += &d;
            }
            diff += d;
            tot_t += vt;
            tot_h += vh;
        }
        let norm = |v: BigInt| self.normalize(v, k);
        Ok(TvReport {
            n: self.table.n(),
            topology: topology.to_string(),
            labelings: trivial.len(),
            tv: norm(diff) / BigInt::from(2),
            homogeneous_trivial: norm(hom_t),
            homogeneous_order2: norm(hom_h),
            inhomogeneous_contribution: norm(inhom),
            total_trivial: norm(tot_t),
            total_order2: norm(tot_h),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::CharacterTable;
    use crate::exact::factorial;
    use crate::sieve::topology::enumerate_topologies;

    fn engine(n: usize) -> ExactEngine {
        let t = Arc::new(WreathTable::new(Arc::new(CharacterTable::compute(n))).unwrap());
        ExactEngine::new(t, Limits::default())
    }

    #[test]
    fn class_matrix_is_rank_one() {
        // sum_a e(a) f(pa) over G projects a class function onto chi_sigma
        for n in 1..=3 {
            let e = engine(n);
            let k = e.class_kernel().unwrap();
            let t = e.table();
            let nc = t.classes().len();
            for s in 0..t.irreps().len() {
                let m = k.matrix(s);
                for p in 0..nc {
                    for c in 0..nc {
                        let size = i128::try_from(t.class_size(c)).unwrap();
                        assert_eq!(m[p * nc + c], size * t.value(s, c) * t.value(s, p));
                    }
                }
            }
        }
    }

    #[test]
    fn coefficients_count_class_elements() {
        let e = engine(3);
        let k = e.class_kernel().unwrap();
        let t = e.table();
        let nc = t.classes().len();
        for p in 0..nc {
            for a in 0..nc {
                let total: i128 = (0..nc).map(|c| k.coefficient(p, a, c)).sum();
                assert_eq!(total, i128::try_from(t.class_size(a)).unwrap());
            }
        }
    }

    #[test]
    fn orbit_sizes_cover_group() {
        let e = engine(3);
        let k = e.relative_kernel().unwrap();
        assert_eq!(k.orbit_sizes().iter().sum::<usize>(), 72);
        assert_eq!(k.orbit_sizes()[k.root_state()], 1);
    }

    #[test]
    fn single_node_values() {
        for n in 1..=3 {
            let e = engine(n);
            let t = Arc::clone(e.table());
            let topo = Topology::isolated(1);
            for (i, s) in t.irreps().iter().enumerate() {
                let one = std::slice::from_ref(s);
                assert_eq!(e.legal_assignment_sum(&topo, one, Target::Identity).unwrap(), t.plancherel_mass(i));
                assert_eq!(
                    e.transcript_probability(&topo, one, SubgroupSpec::OrderTwo).unwrap(),
                    t.leaf_mass(i, SubgroupSpec::OrderTwo)
                );
            }
        }
    }

    #[test]
    fn normalization_over_small_topologies() {
        for n in 1..=2 {
            let e = engine(n);
            for topo in enumerate_topologies(4) {
                for sub in [SubgroupSpec::Trivial, SubgroupSpec::OrderTwo] {
                    let total: BigRational = e
                        .labeling_distribution(&topo, sub)
                        .unwrap()
                        .into_iter()
                        .map(|(_, p)| p)
                        .sum();
                    assert!(total.is_one(), "n={n} {topo} {sub:?}");
                }
            }
        }
    }

    #[test]
    fn trivial_matches_compositional() {
        let e = engine(3);
        let topo = Topology::new(vec![None, None, None, Some((0, 1)), Some((2, 3))]).unwrap();
        for (labels, p) in e.labeling_distribution(&topo, SubgroupSpec::Trivial).unwrap().iter().step_by(17) {
            assert_eq!(&e.compositional_trivial(&topo, labels).unwrap(), p);
        }
    }

    #[test]
    fn single_leaf_tv() {
        for (n, num, den) in [(2usize, 1i64, 4i64), (3, 5, 36)] {
            let e = engine(n);
            let r = e.tv_distance(&Topology::isolated(1)).unwrap();
            assert_eq!(r.tv, BigRational::new(num.into(), den.into()));
            assert!(r.inhomogeneous_contribution.is_zero());
            assert!(r.total_trivial.is_one() && r.total_order2.is_one());
            let fact = BigInt::from(factorial(n));
            let cube: BigInt = crate::partitions::enumerate_partitions(n)
                .iter()
                .map(|l| num_traits::pow(BigInt::from(crate::partitions::dimension(l)), 3))
                .sum();
            assert_eq!(r.tv, BigRational::new(cube, &fact * &fact * 2));
        }
    }

    #[test]
    fn budgets_enforced() {
        let e = engine(3);
        assert!(matches!(e.tv_distance(&Topology::isolated(6)), Err(Error::Budget(_))));
        let e4 = engine(4);
        let s = e4.table().irreps()[0].clone();
        assert!(matches!(
            e4.transcript_probability(&Topology::isolated(1), &[s], SubgroupSpec::OrderTwo),
            Err(Error::Budget(_))
        ));
    }

    #[test]
    fn dpvec_promotes() {
        let big = DpVec::Small(vec![i128::MAX / 2, 3]);
        let sq = big.hadamard(&big);
        assert!(matches!(sq, DpVec::Big(_)));
        assert_eq!(sq.get(1), BigInt::from(9));
        let m = vec![1i128, 1, 0, 1];
        let v = DpVec::apply(&m, &DpVec::Small(vec![i128::MAX, i128::MAX]));
        assert_eq!(v.get(0), BigInt::from(i128::MAX) * 2);
    }
}
