//! Core library for simulating minimal distances between random orbits.
//!
//! A random dynamical system is a skew product `S(ω, x) = (θω, T_ω x)`: an
//! environment path ω drives which fiber map is applied at each step.  This
//! crate provides the pieces needed to measure how close two orbit segments
//! of length `n` come to each other, and to compare the observed decay rate
//! of that minimal distance against correlation-dimension predictions:
//!
//! * [`space`], [`env`], [`orbit`] — metric spaces (full shifts and the unit
//!   circle with exact arithmetic), reproducible environment paths, orbit
//!   generation and the gap function `α(n) = (ln n)^C`.
//! * [`bernoulli`] — an exactly solvable random Bernoulli shift: closed-form
//!   annealed/quenched Rényi entropies, the limit exponent
//!   `max(2/H₂ᵃⁿ, 1/H₂ᑫᵘ)`, its phase diagram and boundary.
//! * [`matching`] — constrained match statistics (longest common substrings
//!   for shift spaces, nearest pairs for circle orbits) over the index sets
//!   `i=j`, `|i−j| ≤ α`, `|i−j| > α`, far thirds, and all pairs.
//! * [`dimension`] — correlation-sum estimators, log-log slope fits and
//!   Rényi entropies from cylinder counts (exact and plug-in).
//! * [`transfer`] — transfer operators for finite families of expanding
//!   circle maps, fiber measures via normalized operator quotients, and
//!   fiberwise mixing diagnostics.
//!
//! The crate is `no_std` (with `alloc`); all operations are pure and all
//! values immutable after construction, so everything can be shared freely
//! across worker threads.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bernoulli;
pub mod dimension;
pub mod env;
pub mod matching;
pub mod orbit;
pub mod rng;
pub mod space;
pub mod transfer;

pub use bernoulli::{BernoulliParams, PhasePoint, Regime};
pub use env::{EnvModel, EnvPath};
pub use matching::{lcs_match, min_dist_match, MatchConstraint, MatchResult};
pub use orbit::{gap_alpha, iterate_orbit, OrbitWindow, RandomSystem};
pub use space::{CirclePoint, CircleSpace, SymbolicSpace};
pub use transfer::{CircleMapFamily, GridFunction};
