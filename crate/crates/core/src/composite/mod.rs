//! Composite knot types: symmetry bookkeeping, labels, enumeration, and
//! construction of connect-sum start configurations.

mod census;
mod label;
mod splice;

pub use census::{compose_symmetry, enumerate_composites, ropelength_classes};
pub use label::{
    parse_prime_table, read_prime_table, KnotLabel, PrimeKnot, PrimeTable, Summand, SymmetryType,
    Variant,
};
pub use splice::{
    generate_start_ensemble, hull_arcs, smooth, splice, splice_with, SpliceOptions, ENSEMBLE_THICKNESS,
    MIN_SPLICE_THICKNESS,
};
