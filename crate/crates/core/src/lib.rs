//! Exact vector lattices, order bounded operators and certificate-producing
//! checkers for statistical order convergence of operator sequences.
//!
//! Everything is computed over exact rationals. Sequences are symbolic
//! combinator trees ([`OperatorSequence`]), so a verdict about the infinite
//! tail can be backed by a finite certificate ([`Certificate`]) that
//! [`convergence::reverify`] re-checks independently.

pub mod convergence;
pub mod density;
pub mod error;
pub mod form;
pub mod lattice;
pub mod operator;
pub mod opseq;
pub mod ratfn;
pub mod scalar;
pub mod syntax;
pub mod verdict;

pub use density::{count_upto, density_exact, empirical_density, stat_converges_real, Density, IndexSet, RealSequence};
pub use error::{Error, Result};
pub use lattice::{sup_list, LatticeVector, SequenceFlavor, SpaceDescriptor};
pub use operator::{band_contains, band_projection, rk_reference, BandPattern, OrderBoundedOperator, RkKind};
pub use opseq::OperatorSequence;
pub use ratfn::{coeff_limit, is_eventually_decreasing, Limit, Polynomial, RationalFunction};
pub use scalar::Scalar;
pub use verdict::{Certificate, CheckConfig, Status, Verdict};
