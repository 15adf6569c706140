//! Truncated spectral measures for the quantum permutation groups attached
//! to complex Hadamard matrices.
//!
//! A complex Hadamard matrix `H` gives a magic grid of rank-one projections
//! `P_ij = Proj(H_i / H_j)`. The law `μ` of the main character of the
//! associated quantum group is the Cesàro limit of truncated laws `μ^r`, and
//! `μ^r` is the normalized spectral law of an explicit `N^r x N^r` Gram
//! matrix `X`. This crate builds those objects, computes the moments
//! `c_p^r` two independent ways, and checks the duality identities relating
//! `H` and its transpose, with a fast structured path for Diță deformations
//! of Fourier matrices.

pub mod config;
pub mod dita;
pub mod duality;
mod error;
pub mod hadamard;
pub mod io;
pub mod magic;
pub mod matrix;
pub mod phases;
pub mod selftest;
pub mod spec;
pub mod spectra;

pub use config::Config;
pub use error::{Error, Result};
pub use hadamard::{
    dita as dita_matrix, equivalence_fingerprint, fourier, fourier_group, tensor, validate, validate_with,
    Fingerprint, HadamardMatrix, Provenance, ValidationReport,
};
pub use matrix::{ComplexMatrix, C64};
pub use phases::{PhaseParameterMatrix, PhaseSource, SplitMix64};
pub use spec::{parse_matrix_spec, MatrixSpec, PhaseSpec};
pub use dita::{bench_structured_vs_dense, structured_moments, BenchReport, DitaKernel};
pub use duality::{
    dita_selfduality_residual, duality_residual, fourier_finite_check, top_mass_duality, DualityReport,
    FourierFiniteReport, TopMassReport,
};
