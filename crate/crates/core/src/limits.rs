//! Hard runtime boundaries. Every exact or enumerative computation checks
//! one of these before starting and refuses with [`Error::Budget`] instead of
//! degrading to floating point.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Largest n for which full S_n character tables are built.
    pub max_table_n: usize,
    /// Largest n for exact work under the order-two hidden subgroup
    /// (explicit wreath elements are enumerated).
    pub max_exact_n: usize,
    /// Largest n for the class-multiplication DP under the trivial subgroup.
    pub max_class_dp_n: usize,
    /// Largest forest (node count) whose labelings are enumerated.
    pub max_enum_nodes: usize,
    /// Largest side length |G|^l of an explicit oracle operator.
    pub max_dense_side: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_table_n: 20,
            max_exact_n: 3,
            max_class_dp_n: 6,
            max_enum_nodes: 5,
            max_dense_side: 10_000,
        }
    }
}

impl Limits {
    pub fn check_table(&self, n: usize) -> Result<()> {
        if n > self.max_table_n {
            return Err(Error::Budget(format!(
                "character table for n = {n} exceeds max_table_n = {}",
                self.max_table_n
            )));
        }
        Ok(())
    }

    pub fn check_exact(&self, n: usize) -> Result<()> {
        if n > self.max_exact_n {
            return Err(Error::Budget(format!(
                "order-two exact computation at n = {n} exceeds max_exact_n = {}",
                self.max_exact_n
            )));
        }
        Ok(())
    }

    pub fn check_class_dp(&self, n: usize) -> Result<()> {
        if n > self.max_class_dp_n {
            return Err(Error::Budget(format!(
                "class-multiplication DP at n = {n} exceeds max_class_dp_n = {}",
                self.max_class_dp_n
            )));
        }
        Ok(())
    }

    pub fn check_enum_nodes(&self, nodes: usize) -> Result<()> {
        if nodes > self.max_enum_nodes {
            return Err(Error::Budget(format!(
                "labeling enumeration over {nodes} nodes exceeds max_enum_nodes = {}",
                self.max_enum_nodes
            )));
        }
        Ok(())
    }

    pub fn check_dense_side(&self, side: usize) -> Result<()> {
        if side > self.max_dense_side {
            return Err(Error::Budget(format!(
                "operator side {side} exceeds max_dense_side = {}",
                self.max_dense_side
            )));
        }
        Ok(())
    }
}
