//! Mixed-trajectory lattices: enumerate discrete phase-space paths, evaluate
//! classical actions on every pairing, extremize the bilinear form
//! `alpha^T S beta` over weight vectors, turn the optimal pair into complex
//! per-path amplitudes, and sum or compose them into propagators that can be
//! checked against closed forms.
//!
//! Module map:
//!
//! - [`lattice`]: space-time grid, admissible position paths, paired
//!   momentum paths, forward/backward classes.
//! - [`action`]: the actions `S = sum (p qdot - H) dt` and
//!   `R = sum (-q pdot - H) dt` on path pairs; the action matrix `S_jk`.
//! - [`game`]: mixed-path pairs, normalization modes, the equal-component /
//!   stationary / minimax solvers, stationarity residuals.
//! - [`amplitude`]: the balancing rotation, complex amplitudes
//!   `phi_j = |a| exp(i theta_j)`, propagator summation and grid
//!   composition.
//! - [`grassmann`]: exact anticommuting algebra for the fermionic rules.
//! - [`reference`]: closed-form propagators and the brute-force time-sliced
//!   oracle.
//! - [`pipeline`]: end-to-end drivers and side-by-side comparisons.
//! - [`cli`]: the `mixedpath` command-line front end.
//!
//! The runnable examples under `examples/` walk through each capability;
//! start with `enumerate_fig2`.

pub mod action;
pub mod amplitude;
pub mod cli;
pub mod error;
pub mod game;
pub mod grassmann;
pub mod lattice;
pub mod pipeline;
pub mod reference;

pub use error::{Error, Result};
