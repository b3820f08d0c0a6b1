//! Numerical laboratory for continuous-state branching mechanisms and the
//! random real trees they generate.
//!
//! The crate is organized in layers:
//!
//! - [`num`] — numerical plumbing: log-domain special functions, compensated
//!   summation, bracketing root finders, adaptive quadrature, an embedded
//!   Runge–Kutta integrator, and counter-based splittable RNG streams.
//! - [`mechanism`] — branching mechanisms ψ(λ) = αλ + βλ² + ∫(e^{−λr}−1+λr)π(dr),
//!   their inverses and derived objects (φ = ψ′∘ψ⁻¹, the gauge function g),
//!   scaling-exponent estimators, and the atom-series mechanisms whose gauge
//!   fails the doubling condition.
//! - [`kernels`] — the level-κ Laplace kernels: the ODE ∂κ/∂a = λ − ψ(κ),
//!   the ball-mass Laplace functional 𝓛_r(λ) by two independent routes, and
//!   the quantitative density bound built from them.
//! - [`realtree`] — deterministic geometry of trees coded by excursion paths:
//!   distances, ball masses, level local-time estimates, leaf detection and
//!   the four-points inequality.
//! - [`samplers`] — random generators: Galton–Watson walks and their height
//!   and contour codings, one-sided stable subordinators, and the decorated
//!   spine realizing the ball-mass process M*_r.
//! - [`packing`] — packing pre-measure optimization (exact branch-and-bound
//!   and greedy), mass-density profiles, and packing-vs-mass constancy probes.
//!
//! Everything is deterministic given explicit seeds; no operation reads the
//! clock or global state.

pub mod error;
pub mod kernels;
pub mod mechanism;
pub mod num;
pub mod packing;
pub mod realtree;
pub mod samplers;

pub use error::LabError;
