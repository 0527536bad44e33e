//! Consensus analysis for the DeGroot model `s(k) = P s(k-1)` when the
//! influence matrix `P` is proper but not necessarily regular.
//!
//! Given a row-stochastic `P` the crate computes the bicomponent structure of
//! its communication digraph, the power limit `P∞`, the orthogonal projector
//! `S` onto the subspace of initial opinions that the DeGroot iteration drives
//! to consensus, and the regularized power limit `P∞ S = 1 αᵀ`. Preequalizing
//! `s(0)` with `S` and then iterating `P` reaches the consensus `αᵀ s(0)` for
//! every starting vector.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod checks;
pub mod digraph;
pub mod error;
pub mod fixtures;
pub mod limits;
pub mod matrix;
pub mod oracle;
pub mod projection;
pub mod region;

pub use digraph::{
    BicomponentDecomposition, CommunicationDigraph, KirchhoffMatrix, SpectralClass, SpectralKind,
};
pub use error::{Error, Result};
pub use limits::{LimitMethod, PowerLimit};
pub use matrix::{validate_stochastic, DenseMatrix, StochasticMatrix, ToleranceConfig};
pub use oracle::{ForestMatrix, TreeWeights};
pub use projection::{analyze, ConsensusAnalysis, OpinionTrajectory, PreequalizationMode};
pub use region::{OrthogonalProjector, RegionBasis, ZConstruction};
