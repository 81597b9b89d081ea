//! Explicit finite groups with multiplication tables and character tables.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::characters::CharacterTable;
use crate::error::{Error, Result};
use crate::partitions::cycle_type_of;
use crate::wreath::{WreathClass, WreathTable};

/// A finite group given by its full multiplication table.
#[derive(Debug, Clone)]
pub struct GroupTable {
    order: usize,
    /// mult[x * order + y] = x y
    mult: Vec<u32>,
    inv: Vec<u32>,
    identity: u32,
    class_of: Vec<usize>,
    class_count: usize,
    /// chars[irrep][element]
    chars: Vec<Vec<Complex64>>,
    irrep_names: Vec<String>,
    /// Distinguished involution, when the constructor provides one.
    involution: Option<u32>,
}

impl GroupTable {
    /// Builds a group from a multiplication table and per-element character
    /// rows. Classes are computed by brute-force conjugation.
    pub fn from_table(order: usize, mult: Vec<u32>, chars: Vec<Vec<Complex64>>, irrep_names: Vec<String>) -> Result<Self> {
        if mult.len() != order * order || mult.iter().any(|&x| x as usize >= order) {
            return Err(Error::InvalidArgument("multiplication table has the wrong shape".into()));
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| mult[e * order + x] as usize == x && mult[x * order + e] as usize == x))
            .ok_or_else(|| Error::InvalidArgument("no identity element".into()))? as u32;
        let mut inv = vec![u32::MAX; order];
        for x in 0..order {
            for y in 0..order {
                if mult[x * order + y] == identity {
                    inv[x] = y as u32;
                    break;
                }
            }
            if inv[x] == u32::MAX {
                return Err(Error::InvalidArgument(format!("element {x} has no inverse")));
            }
        }
        let mut class_of = vec![usize::MAX; order];
        let mut class_count = 0;
        for x in 0..order {
            if class_of[x] != usize::MAX {
                continue;
            }
            for g in 0..order {
                let y = mult[mult[g * order + x] as usize * order + inv[g] as usize] as usize;
                class_of[y] = class_count;
            }
            class_count += 1;
        }
        if chars.len() != class_count || chars.iter().any(|row| row.len() != order) || irrep_names.len() != chars.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {class_count} character rows of length {order}"
            )));
        }
        Ok(GroupTable { order, mult, inv, identity, class_of, class_count, chars, irrep_names, involution: None })
    }

    /// Closure of a set of permutations of {0..k-1} under composition.
    /// `character` maps a permutation to its row of character values.
    fn from_permutations<F>(generators: &[Vec<usize>], irrep_names: Vec<String>, character: F) -> Result<(Self, Vec<Vec<usize>>)>
    where
        F: Fn(&[usize]) -> Result<Vec<f64>>,
    {
        let k = generators.first().map_or(0, |g| g.len());
        let id: Vec<usize> = (0..k).collect();
        let mut elements = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, u32> = HashMap::from([(id, 0)]);
        let mut frontier = 0;
        while frontier < elements.len() {
            let x = elements[frontier].clone();
            frontier += 1;
            for g in generators {
                let y: Vec<usize> = (0..k).map(|i| x[g[i]]).collect();
                if !index.contains_key(&y) {
                    index.insert(y.clone(), elements.len() as u32);
                    elements.push(y);
                }
            }
        }
        let order = elements.len();
        let mut mult = vec![0u32; order * order];
        for (a, x) in elements.iter().enumerate() {
            for (b, y) in elements.iter().enumerate() {
                // (x y)(i) = x(y(i))
                let z: Vec<usize> = (0..k).map(|i| x[y[i]]).collect();
                mult[a * order + b] = index[&z];
            }
        }
        let mut rows = vec![Vec::with_capacity(order); irrep_names.len()];
        for x in &elements {
            let vals = character(x)?;
            for (row, v) in rows.iter_mut().zip(vals) {
                row.push(Complex64::new(v, 0.0));
            }
        }
        Ok((GroupTable::from_table(order, mult, rows, irrep_names)?, elements))
    }

    /// S_n realized on {0..n-1}, with Murnaghan-Nakayama characters.
    pub fn symmetric(sym: &CharacterTable) -> Result<Self> {
        let n = sym.n();
        let gens = adjacent_transpositions(n, 0, n);
        let names = sym.partitions().iter().map(|p| p.to_string()).collect();
        let (g, _) = GroupTable::from_permutations(&gens, names, |perm| {
            let c = sym.index_of(&cycle_type_of(perm))?;
            Ok((0..sym.len()).map(|i| sym.value(i, c) as f64).collect())
        })?;
        Ok(g)
    }

    /// S_n wr Z_2 realized inside S_2n: S_n on each block {0..n-1},
    /// {n..2n-1}, plus the block swap i <-> i+n, which is the distinguished
    /// involution. Irreps follow the order of `table`.
    pub fn wreath(table: &WreathTable) -> Result<Self> {
        let n = table.n();
        let mut gens = adjacent_transpositions(2 * n, 0, n);
        gens.extend(adjacent_transpositions(2 * n, n, n));
        let swap: Vec<usize> = (0..2 * n).map(|i| (i + n) % (2 * n)).collect();
        gens.push(swap.clone());
        let names = table.irreps().iter().map(|s| s.to_string()).collect();
        let (mut g, elements) = GroupTable::from_permutations(&gens, names, |perm| {
            let cls = table.class_index(&wreath_class_of(perm, n)?)?;
            Ok((0..table.irreps().len()).map(|i| table.value(i, cls) as f64).collect())
        })?;
        g.involution = elements.iter().position(|e| *e == swap).map(|i| i as u32);
        Ok(g)
    }

    /// Z_k with characters x -> w^(jx), w = exp(2 pi i / k).
    pub fn cyclic(k: usize) -> Result<Self> {
        let mult = (0..k * k).map(|i| ((i / k + i % k) % k) as u32).collect();
        let chars = (0..k)
            .map(|j| {
                (0..k)
                    .map(|x| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (j * x) as f64 / k as f64))
                    .collect()
            })
            .collect();
        GroupTable::from_table(k, mult, chars, (0..k).map(|j| format!("w^{j}")).collect())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, x: u32, y: u32) -> u32 {
        self.mult[x as usize * self.order + y as usize]
    }

    pub fn inv(&self, x: u32) -> u32 {
        self.inv[x as usize]
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    pub fn involution(&self) -> Option<u32> {
        self.involution
    }

    pub fn class_of(&self, x: u32) -> usize {
        self.class_of[x as usize]
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn irreps(&self) -> usize {
        self.chars.len()
    }

    pub fn irrep_name(&self, i: usize) -> &str {
        &self.irrep_names[i]
    }

    pub fn character(&self, irrep: usize, x: u32) -> Complex64 {
        self.chars[irrep][x as usize]
    }

    pub fn dim(&self, irrep: usize) -> f64 {
        self.chars[irrep][self.identity as usize].re
    }

    pub fn is_associative(&self) -> bool {
        let n = self.order as u32;
        (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| self.mul(self.mul(x, y), z) == self.mul(x, self.mul(y, z)))))
    }

    /// Character rows are orthonormal under (1/|G|) sum_g chi(g) conj(psi(g)).
    pub fn characters_orthonormal(&self, tol: f64) -> bool {
        (0..self.irreps()).all(|i| {
            (0..self.irreps()).all(|j| {
                let s: Complex64 = self.chars[i].iter().zip(&self.chars[j]).map(|(a, b)| a * b.conj()).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                (s / self.order as f64 - target).norm() < tol
            })
        })
    }
}

fn adjacent_transpositions(size: usize, start: usize, len: usize) -> Vec<Vec<usize>> {
    (start..start + len.saturating_sub(1))
        .map(|i| {
            let mut p: Vec<usize> = (0..size).collect();
            p.swap(i, i + 1);
            p
        })
        .collect()
}

/// Wreath class of a block-preserving or block-swapping permutation of
/// {0..2n-1}.
fn wreath_class_of(perm: &[usize], n: usize) -> Result<WreathClass> {
    let stays = perm[..n].iter().all(|&x| x < n);
    let swaps = perm[..n].iter().all(|&x| x >= n);
    if stays {
        let a: Vec<usize> = perm[..n].to_vec();
        let b: Vec<usize> = perm[n..].iter().map(|&x| x - n).collect();
        Ok(WreathClass::non_flip(cycle_type_of(&a), cycle_type_of(&b)))
    } else if swaps {
        // perm^2 preserves blocks; its block-1 part is conjugate to ab
        let sq: Vec<usize> = (0..n).map(|i| perm[perm[i]]).collect();
        Ok(WreathClass::Flip { c: cycle_type_of(&sq) })
    } else {
        Err(Error::InvalidArgument("permutation does not respect the block system".into()))
    }
}
