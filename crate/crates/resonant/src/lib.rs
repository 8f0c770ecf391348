//! Block diagonalization and spectral statistics for quantum resonant
//! systems: two-body bosonic Hamiltonians restricted to mode quartets with
//! n+m = k+l. The Hamiltonian is block-diagonal in the Fock basis, with the
//! (N,M)-block of dimension p_N(M) (partitions of M into at most N parts).
//!
//! The crate builds these finite blocks for several interaction-coefficient
//! families, diagonalizes them, and runs the spectral analyses: closed-form
//! two-particle checks, maximal-eigenvalue formulas, eigenvalue-distribution
//! histograms with Gumbel fits, and unfolded level-spacing statistics that
//! separate Poisson-like from Wigner-like systems.

pub mod couplings;
pub mod error;
pub mod hamiltonian;
pub mod oracles;
pub mod partitions;
pub mod pipeline;
pub mod spectra;
pub mod statistics;

pub use couplings::{CouplingProvider, Family, Quartet};
pub use error::{Error, Result};
pub use hamiltonian::{apply_quartet, assemble_block, BlockMatrix};
pub use partitions::{count_partitions, enumerate_basis, BasisIndex, BlockLabel, FockState};
pub use spectra::{diagonalize, SpectrumRecord};
