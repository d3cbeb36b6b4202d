//! Wave-function parametrization of discrete probability distributions.
//!
//! Every distribution on `N` outcomes is the Born decode of a unit vector on
//! the `(N−1)`-sphere. Measurement collapse is diagonal extraction of the
//! density matrix, and physical transformations are orthogonal (or unitary,
//! or quaternionic-unitary) maps of the sphere.
//!
//! ```
//! use psiparam::{angles_to_wavefunction, born_decode, encode, ProbDist};
//!
//! let p = ProbDist::new(vec![0.2, 0.3, 0.5]).unwrap();
//! let psi = angles_to_wavefunction(&encode(&p));
//! assert!(born_decode(&psi).unwrap().max_abs_diff(&p) < 1e-12);
//! ```

pub mod algebra;
pub mod cli;
pub mod density;
pub mod error;
pub mod functional;
pub mod linalg;
pub mod paths;
pub mod simplex;
pub mod sphere;
pub mod transform;

/// Default numeric tolerance for invariants and round trips.
pub const TOLERANCE: f64 = 1e-12;

/// Normalization deviations above [`TOLERANCE`] but within this bound are
/// rescaled away on construction; larger ones are rejected.
pub const RENORMALIZE_TOLERANCE: f64 = 1e-9;

/// Tolerance for deciding two wave-functions differ by a global phase.
pub const GAUGE_TOLERANCE: f64 = 1e-10;

pub use algebra::{
    collapse_diagonalizes, embed_real, marginal_born, marginalize_blocks, BlockEmbedding, Quaternion, ScalarAlgebra,
};
pub use density::{
    collapse, euler_decompose_2d, pure_density, recursion_levels, recursive_collapse, DensityMatrix,
    EulerDecomposition, ImaginaryUnitOperator, RecursionLevel,
};
pub use error::{Error, Result};
pub use functional::{gleason_mixed_witness, gleason_pure_search, ExpectationFunctional, GleasonReport};
pub use linalg::ScalarMatrix;
pub use paths::{enumerate_paths, marginal_at, path_wavefunction, PathDistribution, PositionMarginal, WalkSpec};
pub use simplex::{event_projection, prob_of_event, Event, ProbDist, Projection};
pub use sphere::{angles_to_wavefunction, born_decode, conditional_chain, encode, sqrt_encode, EulerAngles, WaveFunction};
pub use transform::{
    apply_to_wavefunction, classical_map, clock_rotation, event_commutator, gauge_equivalent, is_deterministic,
    map_onto_certainty, Determinism, OrthogonalTransform, StochasticMatrix,
};
