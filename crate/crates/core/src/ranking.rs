//! Orderings of gates with ties ("hierarchies").

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::Gate;

/// Gates grouped into tie-groups, earliest group simplest.
///
/// Serializes as a list of gate-name arrays, e.g.
/// `[["OR","NOR"],["AND"],["NOT"],["NAND"],["XOR"]]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Ranking {
    groups: Vec<Vec<Gate>>,
}

impl Ranking {
    pub fn new(groups: Vec<Vec<Gate>>) -> Result<Self> {
        let mut seen = HashSet::new();
        for group in &groups {
            if group.is_empty() {
                return Err(Error::InvalidRanking("empty tie-group".into()));
            }
            for g in group {
                if !seen.insert(*g) {
                    return Err(Error::InvalidRanking(format!("{g} appears twice")));
                }
            }
        }
        Ok(Self { groups })
    }

    /// Strict chain without ties.
    pub fn chain(gates: &[Gate]) -> Result<Self> {
        Self::new(gates.iter().map(|&g| vec![g]).collect())
    }

    /// Sorts `items` ascending by `cmp` (stable, so tie-group members keep
    /// their input order) and merges neighbours for which `tied` holds.
    pub fn from_keys<K>(
        mut items: Vec<(Gate, K)>,
        cmp: impl Fn(&K, &K) -> Ordering,
        tied: impl Fn(&K, &K) -> bool,
    ) -> Result<Self> {
        items.sort_by(|a, b| cmp(&a.1, &b.1));
        let mut groups: Vec<Vec<Gate>> = Vec::new();
        let mut prev: Option<&K> = None;
        for (gate, key) in &items {
            match prev {
                Some(p) if tied(p, key) => groups.last_mut().unwrap().push(*gate),
                _ => groups.push(vec![*gate]),
            }
            prev = Some(key);
        }
        Self::new(groups)
    }

    pub fn groups(&self) -> &[Vec<Gate>] {
        &self.groups
    }

    pub fn gates(&self) -> impl Iterator<Item = Gate> + '_ {
        self.groups.iter().flatten().copied()
    }

    pub fn len(&self) -> usize {
        self.groups.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// Index of the tie-group holding `gate`.
    pub fn level(&self, gate: Gate) -> Option<usize> {
        self.groups.iter().position(|g| g.contains(&gate))
    }

    /// The same ranking restricted to `keep`, with emptied groups dropped.
    pub fn restrict(&self, keep: &[Gate]) -> Ranking {
        let groups = self
            .groups
            .iter()
            .map(|g| g.iter().copied().filter(|x| keep.contains(x)).collect::<Vec<_>>())
            .filter(|g| !g.is_empty())
            .collect();
        Ranking { groups }
    }

    pub fn reversed(&self) -> Ranking {
        Ranking {
            groups: self.groups.iter().rev().cloned().collect(),
        }
    }

    /// Gates present in both rankings, in `self`'s order.
    pub fn common_gates(&self, other: &Ranking) -> Vec<Gate> {
        self.gates().filter(|g| other.level(*g).is_some()).collect()
    }
}

impl fmt::Display for Ranking {
    /// Renders as `{OR, NOR} ◀ AND ◀ XOR`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, group) in self.groups.iter().enumerate() {
            if i > 0 {
                f.write_str(" ◀ ")?;
            }
            if group.len() == 1 {
                write!(f, "{}", group[0])?;
            } else {
                let names: Vec<&str> = group.iter().map(|g| g.name()).collect();
                write!(f, "{{{}}}", names.join(", "))?;
            }
        }
        Ok(())
    }
}
