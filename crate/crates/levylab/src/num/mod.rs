//! Numerical plumbing: log-domain special functions, compensated summation,
//! bracketing root finders, adaptive quadrature, an embedded Runge–Kutta
//! pair, and counter-based splittable RNG streams.

pub mod kahan;
pub mod logops;
pub mod ode;
pub mod quad;
pub mod rng;
pub mod roots;

pub use kahan::KahanSum;
pub use logops::{log1mexp_of_log, logh_of_log, loglog_from_log, logsumexp};
pub use ode::integrate_ode;
pub use quad::{integrate, integrate_tail};
pub use rng::{splitmix64, stream, CoinPool};
pub use roots::solve_increasing;
