//! Explicit elements of S_n and S_n wr Z_2.
//!
//! A wreath element ((a, b), t) is encoded as `(a * n! + b) * 2 + t` where
//! `a` and `b` index permutations of S_n.

use std::collections::HashMap;

use crate::error::Result;
use crate::partitions::cycle_type_of;
use crate::wreath::{WreathClass, WreathTable};

/// All permutations of {0..n-1} with a full multiplication table.
#[derive(Debug, Clone)]
pub struct SymmetricElements {
    n: usize,
    perms: Vec<Vec<usize>>,
    /// mult[x * len + y] = x o y, i.e. (x o y)(i) = x(y(i)).
    mult: Vec<u32>,
    inv: Vec<u32>,
    identity: u32,
}

impl SymmetricElements {
    pub fn new(n: usize) -> Self {
        let mut perms = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        permute(&mut cur, 0, &mut perms);
        perms.sort();
        let index: HashMap<Vec<usize>, u32> =
            perms.iter().enumerate().map(|(i, p)| (p.clone(), i as u32)).collect();
        let len = perms.len();
        let mut mult = vec![0u32; len * len];
        let mut buf = vec![0usize; n];
        for (x, px) in perms.iter().enumerate() {
            for (y, py) in perms.iter().enumerate() {
                for i in 0..n {
                    buf[i] = px[py[i]];
                }
                mult[x * len + y] = index[&buf];
            }
        }
        let inv = perms
            .iter()
            .map(|p| {
                let mut q = vec![0usize; n];
                for (i, &v) in p.iter().enumerate() {
                    q[v] = i;
                }
                index[&q]
            })
            .collect();
        let identity = index[&(0..n).collect::<Vec<_>>()];
        SymmetricElements { n, perms, mult, inv, identity }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.perms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perms.is_empty()
    }

    pub fn perm(&self, x: u32) -> &[usize] {
        &self.perms[x as usize]
    }

    pub fn mul(&self, x: u32, y: u32) -> u32 {
        self.mult[x as usize * self.perms.len() + y as usize]
    }

    pub fn inv(&self, x: u32) -> u32 {
        self.inv[x as usize]
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }
}

fn permute(cur: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == cur.len() {
        out.push(cur.clone());
        return;
    }
    for i in k..cur.len() {
        cur.swap(k, i);
        permute(cur, k + 1, out);
        cur.swap(k, i);
    }
}

/// Elements of S_n wr Z_2 with their conjugacy class indices in a
/// [`WreathTable`].
#[derive(Debug, Clone)]
pub struct WreathElements {
    sym: SymmetricElements,
    class_of: Vec<u32>,
}

impl WreathElements {
    pub fn new(table: &WreathTable) -> Result<Self> {
        let sym = SymmetricElements::new(table.n());
        let sym_classes: Vec<_> = (0..sym.len() as u32).map(|x| cycle_type_of(sym.perm(x))).collect();
        let nf = sym.len();
        let mut class_of = vec![0u32; 2 * nf * nf];
        for a in 0..nf {
            for b in 0..nf {
                let base = (a * nf + b) * 2;
                let nonflip = WreathClass::non_flip(sym_classes[a].clone(), sym_classes[b].clone());
                class_of[base] = table.class_index(&nonflip)? as u32;
                let ab = sym.mul(a as u32, b as u32) as usize;
                let flip = WreathClass::Flip { c: sym_classes[ab].clone() };
                class_of[base + 1] = table.class_index(&flip)? as u32;
            }
        }
        Ok(WreathElements { sym, class_of })
    }

    pub fn sym(&self) -> &SymmetricElements {
        &self.sym
    }

    pub fn len(&self) -> usize {
        self.class_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class_of.is_empty()
    }

    pub fn encode(&self, a: u32, b: u32, t: u32) -> u32 {
        (a * self.sym.len() as u32 + b) * 2 + t
    }

    pub fn decode(&self, x: u32) -> (u32, u32, u32) {
        let nf = self.sym.len() as u32;
        let t = x & 1;
        let ab = x >> 1;
        (ab / nf, ab % nf, t)
    }

    pub fn identity(&self) -> u32 {
        let e = self.sym.identity();
        self.encode(e, e, 0)
    }

    /// The canonical involution m = ((1, 1), 1).
    pub fn involution(&self) -> u32 {
        let e = self.sym.identity();
        self.encode(e, e, 1)
    }

    /// ((a,b),s)((c,d),t) = ((a c', b d'), s + t) with (c', d') = (c, d) if
    /// s = 0 and (d, c) otherwise.
    pub fn mul(&self, x: u32, y: u32) -> u32 {
        let (a, b, s) = self.decode(x);
        let (c, d, t) = self.decode(y);
        let (c, d) = if s == 0 { (c, d) } else { (d, c) };
        self.encode(self.sym.mul(a, c), self.sym.mul(b, d), s ^ t)
    }

    pub fn inv(&self, x: u32) -> u32 {
        let (a, b, t) = self.decode(x);
        if t == 0 {
            self.encode(self.sym.inv(a), self.sym.inv(b), 0)
        } else {
            self.encode(self.sym.inv(b), self.sym.inv(a), 1)
        }
    }

    pub fn class_of(&self, x: u32) -> usize {
        self.class_of[x as usize] as usize
    }
}
