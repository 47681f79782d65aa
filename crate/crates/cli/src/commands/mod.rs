pub mod ca;
pub mod evolve;
pub mod hierarchy;
pub mod report;
