//! Continuous-time walks on graphs, classical and quantum, and the
//! correspondence between them.
//!
//! A classical random walk on an undirected simple graph is generated
//! by the graph Laplacian through the bi-stochastic semigroup
//! `P(t) = e^{-tL}`. The quantum walks compatible with the same graph
//! form a much larger family: any Hermitian matrix with the graph's
//! support pattern, with free phases on the edges and free on-site
//! energies. This crate implements both sides and the map that connects
//! them:
//!
//! - [`graph`]: graphs, Laplacians, validation and round trips.
//! - [`linalg`]: Hermitian/symmetric eigendecompositions and the
//!   spectral propagators `e^{-iHt}`, `e^{-tL}`.
//! - [`classical`]: probability evolution and semigroup checks.
//! - [`quantum`]: chiral walk Hamiltonians, Born-rule transition
//!   probabilities, gauge transformations, time-reversal asymmetry, and
//!   the demonstration that Born probabilities never form a semigroup.
//! - [`correspondence`]: the quantum-to-classical generator map, the
//!   postulates that pin it down, family sampling, spanning-tree gauge
//!   fixing, and parameter counting.
//! - [`decoherence`]: the intrinsic-decoherence master equation in
//!   closed form and generator extraction from short-time populations.
//! - [`lattice`]: chains and square lattices with link phases, Peierls
//!   substitution, Hofstadter spectra, and continuum-limit convergence.
//! - [`io`]: reproducible CSV/JSON serialization.

pub mod classical;
pub mod correspondence;
pub mod decoherence;
pub mod error;
pub mod graph;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod quantum;

pub use error::{Error, Result};
