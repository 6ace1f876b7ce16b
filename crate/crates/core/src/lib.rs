//! Semiclassical scattering across avoided eigenvalue crossings.
//!
//! A time-dependent Hermitian family `A_mu(t)` drives the adiabatic equation
//! `(h/i) X'(t) = A_mu(t) X(t)`. When eigenvalue branches of the unperturbed
//! family cross transversally and a small parameter `mu` opens gaps at the
//! crossings, the global scattering matrix in the instantaneous eigenbasis
//! factorizes, to leading order in `h`, into
//!
//! * local 2x2 transition matrices at each avoided crossing, controlled by
//!   the adiabaticity ratio `delta = gamma0/h` with
//!   `gamma0 = gap^2 / (4 |slope difference|)`, and
//! * semiclassical phases along the branch arcs: dynamical actions,
//!   geometric (Berry) phases, and quarter-pi corrections that combine with
//!   the `gamma0 (ln gamma0 - 1)` counter-terms into regularized cycle
//!   holonomies.
//!
//! The crate assembles that prediction on the crossing graph of a family and
//! validates it against a brute-force unitary propagator. Modules:
//!
//! * [`numeric`] -- matrices, eigensolver, log-gamma, unitarity defects;
//! * [`model`] -- polynomial Hermitian families and the built-in examples;
//! * [`oracle`] -- the exponential-midpoint propagator and channel framing;
//! * [`spectral`] -- crossing location, gap minimization, `gamma0`;
//! * [`landau_zener`] -- the exact local transition matrix;
//! * [`phase`] -- actions, Berry transport, regularized cycle data;
//! * [`graph`] -- the scattering graph, feed-forward assembly, and the
//!   independent linear-system solver;
//! * [`harness`] -- run configs, validation sweeps, CSV/JSON reports, and
//!   convergence fits.

pub mod error;
pub mod graph;
pub mod harness;
pub mod landau_zener;
pub mod model;
pub mod numeric;
pub mod oracle;
pub mod phase;
pub mod spectral;

pub use error::{Error, Result};

/// Complex scalar used throughout the engine.
pub type ComplexScalar = num_complex::Complex64;
