//! Exact toolkit for homogeneous toric deformations and their simultaneous
//! terminalizations.
//!
//! The crate is organised bottom-up:
//!
//! - [`lattice`]: integer vectors and matrices, Smith and Hermite normal forms,
//!   integral solving and saturated span lattices.
//! - [`polyhedra`]: cones, lattice polytopes, Minkowski sums and decompositions,
//!   the Cayley construction.
//! - [`toric`]: singularity classification of affine toric charts and cyclic
//!   quotients (Reid–Tai ages), weighted projective recognition of stars.
//! - [`deformation`]: homogeneous toric deformations, central fibres and the
//!   per-chart fibre presentations `F_i - F_0`.
//! - [`terminalize`]: crepant triangulations, circuit flips, terminalization
//!   reports and the four-dimensional flop family `P(1,a,b)`.
//! - [`cli`]: the command-line front end and named corpora.
//!
//! All arithmetic is exact; there is no floating point anywhere.

pub mod error;
pub mod json;
pub mod lattice;
pub mod polyhedra;
pub mod terminalize;
pub mod toric;
pub mod cli;
pub mod deformation;

pub use error::{Error, Result};
pub use lattice::{LatticeMatrix, LatticeVector};
pub use polyhedra::{ConeDesc, PolytopeDesc};
