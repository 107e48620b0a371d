//! Lattice computations on generalized Kummer surfaces of order 3.
//!
//! The Néron–Severi lattice of a generic generalized Kummer surface is
//! modelled in the ℚ-basis `(L, A₁, B₁, …, A₉, B₉)`; on top of it sit the
//! Pell–Fermat construction of a second 9A₂ configuration, the modular
//! criterion deciding whether the two configurations are inequivalent, and
//! an exhaustive isometry search that checks the criterion independently.

pub mod exact_linalg;
pub mod fm_lattices;
pub mod isometry_search;
pub mod kummer_structures;
pub mod ns_lattice;
pub mod pell;

mod serde_big;
