//! Exact graded linear algebra over ℚ: matrices, graded spaces and maps,
//! chain complexes and their homology.

pub mod complex;
pub mod graded;
pub mod matrix;
pub mod rational;

pub use complex::{ChainComplex, ChainMap, Homology, HomologyDegree, QuasiIsoReport};
pub use graded::{GradedLinearMap, GradedVectorSpace};
pub use matrix::{Matrix, Reduction};
pub use rational::Rational;
