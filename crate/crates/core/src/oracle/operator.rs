//! Operators on C[G^l] built from the right regular representation.
//!
//! Basis vectors e_x of C[G^l] are indexed by `x = sum_j x_j |G|^j`, one
//! digit per register. `reg(g)^I` right-multiplies every register in I by g.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::oracle::group::GroupTable;

/// Largest side for which a full matrix is materialized.
pub const MATERIALIZE_MAX_SIDE: usize = 1024;

/// Dense complex matrix acting on l registers.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    side: usize,
    registers: usize,
    /// row-major
    data: Vec<Complex64>,
}

impl DenseOperator {
    pub fn identity(side: usize, registers: usize) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); side * side];
        for i in 0..side {
            data[i * side + i] = Complex64::new(1.0, 0.0);
        }
        DenseOperator { side, registers, data }
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn registers(&self) -> usize {
        self.registers
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.side + col]
    }

    pub fn mul(&self, other: &DenseOperator) -> DenseOperator {
        let n = self.side;
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                for (out, b) in data[i * n..(i + 1) * n].iter_mut().zip(row) {
                    *out += a * b;
                }
            }
        }
        DenseOperator { side: n, registers: self.registers, data }
    }

    pub fn add(&self, other: &DenseOperator) -> DenseOperator {
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        DenseOperator { side: self.side, registers: self.registers, data }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.side).map(|i| self.data[i * self.side + i]).sum()
    }

    pub fn max_diff(&self, other: &DenseOperator) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn adjoint(&self) -> DenseOperator {
        let n = self.side;
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        DenseOperator { side: n, registers: self.registers, data }
    }

    pub fn is_idempotent(&self, tol: f64) -> bool {
        self.mul(self).max_diff(self) < tol
    }

    pub fn is_self_adjoint(&self, tol: f64) -> bool {
        self.adjoint().max_diff(self) < tol
    }

    pub fn commutes_with(&self, other: &DenseOperator, tol: f64) -> bool {
        self.mul(other).max_diff(&other.mul(self)) < tol
    }
}

/// `sum_g coeffs[g] reg(g)^I`, kept as coefficients until applied.
#[derive(Debug, Clone)]
pub struct RegisterSum {
    pub registers: Vec<usize>,
    pub coeffs: Vec<(u32, Complex64)>,
}

impl RegisterSum {
    pub fn single(registers: Vec<usize>, g: u32) -> Self {
        RegisterSum { registers, coeffs: vec![(g, Complex64::new(1.0, 0.0))] }
    }

    /// `(d/|G|) sum_g conj(chi(g)) reg(g)^I`.
    pub fn node(group: &GroupTable, irrep: usize, registers: Vec<usize>) -> Self {
        let scale = group.dim(irrep) / group.order() as f64;
        let coeffs = (0..group.order() as u32)
            .map(|g| (g, group.character(irrep, g).conj() * scale))
            .filter(|(_, c)| c.norm_sqr() > 0.0)
            .collect();
        RegisterSum { registers, coeffs }
    }

    /// `(1 + reg(m)) / 2` on one register.
    pub fn half_sum(group: &GroupTable, m: u32, register: usize) -> Self {
        let half = Complex64::new(0.5, 0.0);
        RegisterSum { registers: vec![register], coeffs: vec![(group.identity(), half), (m, half)] }
    }
}

/// Index arithmetic on C[G^l].
#[derive(Debug, Clone, Copy)]
pub struct Registers<'a> {
    group: &'a GroupTable,
    count: usize,
    side: usize,
}

impl<'a> Registers<'a> {
    pub fn new(group: &'a GroupTable, count: usize) -> Result<Self> {
        let side = group
            .order()
            .checked_pow(count as u32)
            .ok_or_else(|| Error::Budget(format!("|G|^{count} overflows")))?;
        Ok(Registers { group, count, side })
    }

    pub fn side(&self) -> usize {
        self.side
    }

    /// Index of the basis vector reached from `x` by right-multiplying the
    /// registers in `regs` by `g`.
    pub fn act(&self, x: usize, regs: &[usize], g: u32) -> usize {
        let q = self.group.order();
        let mut y = x;
        for &j in regs {
            let p = q.pow(j as u32);
            let d = (x / p) % q;
            let e = self.group.mul(d as u32, g) as usize;
            y = y - d * p + e * p;
        }
        y
    }

    pub fn materialize(&self, op: &RegisterSum) -> Result<DenseOperator> {
        if self.side > MATERIALIZE_MAX_SIDE {
            return Err(Error::Budget(format!(
                "dense operator of side {} exceeds {MATERIALIZE_MAX_SIDE}",
                self.side
            )));
        }
        let mut data = vec![Complex64::new(0.0, 0.0); self.side * self.side];
        for x in 0..self.side {
            for &(g, c) in &op.coeffs {
                let y = self.act(x, &op.registers, g);
                data[y * self.side + x] += c;
            }
        }
        Ok(DenseOperator { side: self.side, registers: self.count, data })
    }
}

/// `reg(g)` on a single register.
pub fn regular_rep(group: &GroupTable, g: u32) -> Result<DenseOperator> {
    Registers::new(group, 1)?.materialize(&RegisterSum::single(vec![0], g))
}

/// `prod_j (1 + reg(m)^{j}) / 2` over `count` registers.
pub fn projector_h(group: &GroupTable, m: u32, count: usize) -> Result<DenseOperator> {
    if m == group.identity() || group.mul(m, m) != group.identity() {
        return Err(Error::InvalidArgument("m must be an involution".into()));
    }
    let regs = Registers::new(group, count)?;
    let mut out = DenseOperator::identity(regs.side(), count);
    for j in 0..count {
        out = out.mul(&regs.materialize(&RegisterSum::half_sum(group, m, j))?);
    }
    Ok(out)
}

pub fn node_projector(group: &GroupTable, irrep: usize, registers: &[usize], count: usize) -> Result<DenseOperator> {
    if irrep >= group.irreps() || registers.iter().any(|&j| j >= count) {
        return Err(Error::InvalidArgument("irrep or register out of range".into()));
    }
    Registers::new(group, count)?.materialize(&RegisterSum::node(group, irrep, registers.to_vec()))
}

/// `tr(F_k ... F_1)` for register-sum factors, one column at a time without
/// storing any matrix. The last factor is evaluated only on the diagonal.
pub fn trace_of_product(group: &GroupTable, count: usize, factors: &[RegisterSum], limits: &Limits) -> Result<f64> {
    let regs = Registers::new(group, count)?;
    let side = regs.side();
    limits.check_dense_side(side)?;
    let Some((last, rest)) = factors.split_last() else {
        return Ok(side as f64);
    };
    let inverse_last: Vec<(u32, Complex64)> = last.coeffs.iter().map(|&(g, c)| (group.inv(g), c)).collect();
    let zero = Complex64::new(0.0, 0.0);
    let mut scratch = vec![zero; side];
    let mut touched: Vec<usize> = Vec::new();
    let mut total = zero;
    for x in 0..side {
        let mut v: Vec<(usize, Complex64)> = vec![(x, Complex64::new(1.0, 0.0))];
        for f in rest {
            for &(y, a) in &v {
                for &(g, c) in &f.coeffs {
                    let z = regs.act(y, &f.registers, g);
                    if scratch[z] == zero {
                        touched.push(z);
                    }
                    scratch[z] += a * c;
                }
            }
            v.clear();
            for z in touched.drain(..) {
                let a = std::mem::replace(&mut scratch[z], zero);
                if a.norm() > 1e-15 {
                    v.push((z, a));
                }
            }
            v.sort_unstable_by_key(|e| e.0);
            v.dedup_by(|b, a| {
                if a.0 == b.0 {
                    a.1 += b.1;
                    true
                } else {
                    false
                }
            });
        }
        // (F w)_x = sum_g c_g w_{x g^-1}
        for &(y, a) in &v {
            scratch[y] = a;
        }
        for &(ginv, c) in &inverse_last {
            total += c * scratch[regs.act(x, &last.registers, ginv)];
        }
        for &(y, _) in &v {
            scratch[y] = zero;
        }
    }
    Ok(total.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::CharacterTable;
    use crate::wreath::WreathTable;
    use std::sync::Arc;

    fn w2() -> GroupTable {
        let t = WreathTable::new(Arc::new(CharacterTable::compute(2))).unwrap();
        GroupTable::wreath(&t).unwrap()
    }

    #[test]
    fn regular_traces() {
        let g = w2();
        for x in 0..g.order() as u32 {
            let r = regular_rep(&g, x).unwrap();
            let expected = if x == g.identity() { 8.0 } else { 0.0 };
            assert!((r.trace().re - expected).abs() < 1e-12);
        }
        assert_eq!(regular_rep(&g, g.identity()).unwrap(), DenseOperator::identity(8, 1));
    }

    #[test]
    fn reg_is_an_anti_homomorphism() {
        let s3 = GroupTable::symmetric(&CharacterTable::compute(3)).unwrap();
        for x in 0..6 {
            for y in 0..6 {
                let lhs = regular_rep(&s3, x).unwrap().mul(&regular_rep(&s3, y).unwrap());
                let rhs = regular_rep(&s3, s3.mul(y, x)).unwrap();
                assert!(lhs.max_diff(&rhs) < 1e-12);
            }
        }
    }

    #[test]
    fn projector_h_properties() {
        let g = w2();
        let m = g.involution().unwrap();
        let p1 = projector_h(&g, m, 1).unwrap();
        assert!((p1.trace().re - 4.0).abs() < 1e-12);
        for l in 1..=2 {
            let p = projector_h(&g, m, l).unwrap();
            assert!(p.is_idempotent(1e-9) && p.is_self_adjoint(1e-9));
            assert!((p.trace().re - 4f64.powi(l as i32)).abs() < 1e-9);
        }
        assert!(projector_h(&g, g.identity(), 1).is_err());
    }

    #[test]
    fn node_projectors_decompose_identity() {
        for g in [w2(), GroupTable::symmetric(&CharacterTable::compute(4)).unwrap(), GroupTable::cyclic(3).unwrap()] {
            let mut total: Option<DenseOperator> = None;
            for s in 0..g.irreps() {
                let p = node_projector(&g, s, &[0], 1).unwrap();
                assert!(p.is_idempotent(1e-9) && p.is_self_adjoint(1e-9));
                assert!((p.trace().re - g.dim(s).powi(2)).abs() < 1e-9);
                total = Some(match total {
                    None => p,
                    Some(t) => t.add(&p),
                });
            }
            assert!(total.unwrap().max_diff(&DenseOperator::identity(g.order(), 1)) < 1e-9);
        }
    }

    #[test]
    fn nested_projectors_commute() {
        let g = w2();
        let m = g.involution().unwrap();
        let ph = projector_h(&g, m, 2).unwrap();
        for s in 0..g.irreps() {
            let leaf = node_projector(&g, s, &[0], 2).unwrap();
            for t in 0..g.irreps() {
                let root = node_projector(&g, t, &[0, 1], 2).unwrap();
                let other = node_projector(&g, t, &[1], 2).unwrap();
                assert!(leaf.commutes_with(&root, 1e-9));
                assert!(leaf.commutes_with(&other, 1e-9));
                assert!(root.is_idempotent(1e-9));
                // H acting on all registers at once is a symmetry of every node
                let diag = Registers::new(&g, 2).unwrap().materialize(&RegisterSum::single(vec![0, 1], m)).unwrap();
                assert!(root.commutes_with(&diag, 1e-9));
            }
            assert!(leaf.commutes_with(&ph, 1e-9));
        }
    }

    #[test]
    fn column_trace_matches_dense_trace() {
        let g = w2();
        let m = g.involution().unwrap();
        let regs = Registers::new(&g, 2).unwrap();
        let factors = vec![
            RegisterSum::half_sum(&g, m, 0),
            RegisterSum::half_sum(&g, m, 1),
            RegisterSum::node(&g, 0, vec![0]),
            RegisterSum::node(&g, 2, vec![1]),
            RegisterSum::node(&g, 4, vec![0, 1]),
        ];
        let mut dense = DenseOperator::identity(64, 2);
        for f in &factors {
            dense = regs.materialize(f).unwrap().mul(&dense);
        }
        let fast = trace_of_product(&g, 2, &factors, &Limits::default()).unwrap();
        assert!((dense.trace().re - fast).abs() < 1e-9);
    }
}
