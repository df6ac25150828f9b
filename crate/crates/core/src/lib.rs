//! Spectral analysis of directed graphs through the eigenstructure of their
//! random-walk transition matrix.
//!
//! The pipeline is: [`graph`] builds or parses a digraph, [`markov`] turns it
//! into a row-stochastic transition matrix and derives its spectral profile
//! (stationary distribution, second eigenvalue modulus, eigenbasis
//! conditioning) using the solvers in [`linalg`]; [`mixing`] evaluates the
//! directed expander mixing bounds over vertex subset pairs and [`toughness`]
//! compares exact directed toughness with its spectral lower bound.

pub mod cli;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod markov;
pub mod mixing;
pub mod report;
pub mod toughness;

pub use error::{Error, ErrorClass, Result};
pub use graph::{DirectedGraph, Family};
pub use markov::{
    build_transition_matrix, spectral_profile, SpectralConfig, SpectralProfile, TransitionMatrix,
};
