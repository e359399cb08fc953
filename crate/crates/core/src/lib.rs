//! Forward and inverse spectral computations for equilateral quantum trees.
//!
//! The forward direction turns a rooted tree into its characteristic
//! polynomials (`psi`, `psi_tilde`, `psi_hat`), the reduced ratio
//! `R = psi / psi_hat`, and zero-potential Neumann and Dirichlet spectra. The
//! inverse direction recovers every tree shape consistent with `R` (or with
//! the two spectra plus the root degree) by expanding `R` into a branched
//! continued fraction.

pub mod census;
pub mod charpoly;
pub mod error;
pub mod invert;
pub mod parse;
pub mod poly;
pub mod ratfunc;
pub mod roots;
pub mod spectra;
pub mod tree;

pub use charpoly::{
    compute_bundle, compute_psi, compute_psi_hat, compute_psi_tilde, compute_ratio,
    evaluate_branched_fraction, CharPolyBundle,
};
pub use error::{Error, ErrorKind, Result};
pub use invert::{
    invert_ratio, invert_ratio_exhaustive, invert_snowflake, CandidateShape, ExpansionTrace,
    InvertOptions, SnowflakeInversion,
};
pub use poly::Poly;
pub use ratfunc::RationalFunction;
pub use tree::{
    canonical_code, enumerate_trees, make_snowflake, principal_subforest, CodeMode,
    EnumerationMode, RootedTree, ShapeCode,
};
