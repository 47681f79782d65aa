//! Boolean gates and their reading as elementary cellular-automaton rules.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A named Boolean gate given by its truth table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Gate {
    And,
    Or,
    Xor,
    Nand,
    Nor,
    Not,
}

impl Gate {
    pub const ALL: [Gate; 6] = [Gate::And, Gate::Or, Gate::Xor, Gate::Nand, Gate::Nor, Gate::Not];

    /// The five binary gates that have a cellular-automaton interpretation.
    pub const BINARY: [Gate; 5] = [Gate::And, Gate::Or, Gate::Xor, Gate::Nand, Gate::Nor];

    pub fn arity(self) -> usize {
        match self {
            Gate::Not => 1,
            _ => 2,
        }
    }

    pub fn is_binary(self) -> bool {
        self.arity() == 2
    }

    /// Truth table indexed by the inputs read as a big-endian binary number.
    pub fn table(self) -> &'static [bool] {
        match self {
            Gate::And => &[false, false, false, true],
            Gate::Or => &[false, true, true, true],
            Gate::Xor => &[false, true, true, false],
            Gate::Nand => &[true, true, true, false],
            Gate::Nor => &[true, false, false, false],
            Gate::Not => &[true, false],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Gate::And => "AND",
            Gate::Or => "OR",
            Gate::Xor => "XOR",
            Gate::Nand => "NAND",
            Gate::Nor => "NOR",
            Gate::Not => "NOT",
        }
    }

    /// Looks up the truth-table entry for `inputs`.
    pub fn apply(self, inputs: &[bool]) -> Result<bool> {
        if inputs.len() != self.arity() {
            return Err(Error::ArityMismatch {
                gate: self,
                expected: self.arity(),
                got: inputs.len(),
            });
        }
        let index = inputs.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
        Ok(self.table()[index])
    }

    /// Binary lookup without the slice round trip. Panics for `NOT`.
    #[inline]
    pub(crate) fn apply2(self, left: bool, right: bool) -> bool {
        debug_assert!(self.is_binary());
        self.table()[((left as usize) << 1) | right as usize]
    }

    /// Elementary-CA rule number of `x[i] <- gate(x[i-1], x[i+1])`.
    ///
    /// Bit `4l + 2c + r` of the result is the new centre state for the
    /// neighbourhood `(l, c, r)`; the centre cell never influences it.
    pub fn eca_rule_number(self) -> Result<u8> {
        if !self.is_binary() {
            return Err(Error::UnaryGate(self));
        }
        let mut rule = 0u8;
        for triple in 0..8u8 {
            let left = triple & 0b100 != 0;
            let right = triple & 0b001 != 0;
            if self.apply2(left, right) {
                rule |= 1 << triple;
            }
        }
        Ok(rule)
    }

    /// Output-complemented gate, where one exists in the gate set.
    pub fn complement(self) -> Option<Gate> {
        match self {
            Gate::And => Some(Gate::Nand),
            Gate::Nand => Some(Gate::And),
            Gate::Or => Some(Gate::Nor),
            Gate::Nor => Some(Gate::Or),
            Gate::Xor | Gate::Not => None,
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Gate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Gate::ALL
            .into_iter()
            .find(|g| g.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownGate(s.to_string()))
    }
}
