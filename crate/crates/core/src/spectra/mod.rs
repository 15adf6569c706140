//! Profile tensors, Gram matrices, truncated spectral measures and their
//! moments.

mod cesaro;
mod gram;
mod measure;
mod moments;
mod profile;

pub use cesaro::{cesaro_moments, haar_moment_estimate, CesaroSequence, HaarEstimate};
pub use gram::{gram_matrix, GramMatrix, GramReport, GramRoute};
pub use measure::{measure_top_mass, truncated_law, Atom, SpectralMeasure};
pub use moments::{
    moment_table, moments_via_t, moments_via_x, t_route_moments, x_route_moments, MomentTable,
};
pub use profile::{profile, ProfileTensor};
