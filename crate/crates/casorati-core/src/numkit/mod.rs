//! Automatic differentiation, dense linear algebra and small optimizers.

pub mod jet;
pub mod linalg;
pub mod sphere;
pub mod tripathi;

pub use jet::{Jet1, Jet2, Scalar};
pub use linalg::{gram_schmidt, symmetric_eigenvalues, Mat, SymMatrix};
pub use sphere::{sphere_extremize, Mode, SphereObjective, SphereOptions, SphereResult};
pub use tripathi::{tripathi_minimum, QuadraticExtremumProblem, TripathiSolution};
