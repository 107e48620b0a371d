//! The Néron–Severi lattice in the ℚ-basis `(L, A₁, B₁, …, A₉, B₉)`.
//!
//! Classes are stored by numerators over the common denominator 3. Every
//! lattice here sits between `3ℤ¹⁹` and `ℤ¹⁹` in those coordinates, so
//! membership reduces to a parity check over 𝔽₃.

mod class;
mod config;
mod divisible;
pub(crate) mod f3;
mod k3;
mod model;
mod roots;

use thiserror::Error;

pub use class::{index, Curve, DivisorClass, RANK};
pub use config::Configuration;
pub use divisible::{support_histogram, three_divisible_classes, uv_decompose, ThreeDivisibleClass, UvDecomposition};
pub use k3::{build_k3, gram_of, k3_generators, rational_gram, t1, t2, t3, w1, w2, w3, K3Lattice};
pub use model::{build_ns, Case, DiscGenerator, DiscriminantGroup, NSModel};
pub use roots::{
    ample_test_class, is_chamber_ample, min_ample_u, orthogonal_lattice, root_system_of_orthogonal, AdeType,
    OrthogonalLattice, RootComponent, RootSystem,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NsError {
    #[error("L^2 = {0} is not a supported polarization (need L^2 >= 2 and L^2 = 0 or 2 mod 6)")]
    InvalidPolarization(u64),
    #[error("class is not in the Neron-Severi lattice")]
    NotInLattice,
    #[error("class has a non-integral intersection with some curve")]
    NotRepresentable,
    #[error("class must have positive square")]
    NotPositive,
}
