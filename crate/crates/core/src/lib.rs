//! Exact computations around Veronese toric varieties: integer lattices,
//! polynomial ideals over prime fields, the toric ideal and its quadratic
//! generators, p-gluing of the exponent semigroup, the binomial
//! complete-intersection certificate, and supporting geometric and
//! cohomological checks.

pub mod cohomology;
pub mod geometry;
pub mod gluing;
pub mod lattice;
pub mod poly;
pub mod reproduce;
pub mod sci;
pub mod toric;
pub mod veronese;

/// Version tag carried by every JSON report.
pub const SCHEMA_VERSION: u32 = 1;
