//! Laboratory for a continuous-time self-repelling random walk: the walk
//! itself, its stopped local-time profiles built by two independent routes,
//! the continuum objects they converge to, and a statistical harness that
//! checks the two sides against each other.
//!
//! - [`weights`] — jump-weight models and the stationary gap law.
//! - [`walk`] — event-driven simulation of the walk and its edge processes.
//! - [`eta`] — the environment seen from an edge: evolution, hitting times,
//!   convergence probes.
//! - [`ray_knight`] — stopped profiles built by outward recursion over
//!   independent environment lines.
//! - [`continuum`] — reflected Brownian paths, absorbed-height laws, and the
//!   Laplace-transformed area density estimators.
//! - [`stats`] — Kolmogorov–Smirnov machinery, histograms, tail fits.
//! - [`rng`] — splittable deterministic random streams.
//! - [`harness`] — named experiments, configs, reports, and the acceptance
//!   battery behind the `tsaw` binary.

pub mod continuum;
pub mod eta;
pub mod harness;
pub mod ray_knight;
pub mod rng;
pub mod stats;
pub mod walk;
pub mod weights;
