//! Behavioural and evolutionary complexity of Boolean gates.
//!
//! Gates are read as one-dimensional cellular-automaton rules
//! (`x[i] <- gate(x[i-1], x[i+1])`) to measure how complex their dynamics
//! are, and are evolved on two simulated substrates to measure how hard they
//! are to find. The [`hierarchy`] module orders gates under both views and
//! compares the orderings.

pub mod ca;
pub mod error;
pub mod evolution;
pub mod fixtures;
pub mod gates;
pub mod hierarchy;
pub mod measures;
pub mod pbm;
pub mod ranking;
pub mod substrates;

pub use error::{Error, Result};
pub use gates::Gate;
pub use ranking::Ranking;
