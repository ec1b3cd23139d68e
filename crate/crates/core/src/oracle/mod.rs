//! Independent ground truth: exhaustive graph enumeration at small orders and
//! Monte Carlo sampling of hafnian moments.

pub mod graph;
pub mod hafnian;
pub mod montecarlo;

pub use graph::{enumerate_classes, enumerate_same_row, enumerate_same_row_up_to, MomentGraph, SAME_ROW_MAX_ORDER};
pub use hafnian::{naive_hafnian, naive_permanent, ComplexMatrix};
pub use montecarlo::{mc_moment, McEstimate};
