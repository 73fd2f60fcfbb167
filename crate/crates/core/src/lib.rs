//! PT-symmetric Hamiltonians built from Euclidean-algebra generators.
//!
//! * [`algebra`]: the E2 enveloping algebra up to degree two and its five antilinear symmetries.
//! * [`dyson`]: Dyson maps, hermitization constraints and the PT5 three-parameter family.
//! * [`spectral`]: Fourier eigenproblems on the circle, sweeps, exceptional points, intensities.
//! * [`mathieu`]: characteristic values and periodic Mathieu functions for complex q.
//! * [`e3`]: the E3 algebra, its Dyson adjoint action and a 4×4 matrix oracle.
//! * [`cli`]: configuration and command runners used by the `euclid-pt` binary.

pub mod algebra;
pub mod cli;
pub mod dyson;
pub mod e3;
pub mod error;
pub mod mathieu;
pub mod spectral;

pub use algebra::{apply_pt, build_hamiltonian, E2Element, Monomial, PtSymmetryE2};
pub use dyson::{hermitize, similarity_transform, DysonParamsE2, HermitizationResult};
pub use error::{Error, Result};
