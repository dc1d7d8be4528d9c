pub mod cli;
pub mod formula;
pub mod frames;
pub mod gadgets;
pub mod random;
pub mod semantics;
pub mod solver;
pub mod transform;
