//! Packing pre-measure machinery on sampled trees.
//!
//! An ε-packing of a finite metric sample is a family of closed balls
//! with centers in the sample, radii from a fixed grid inside (0, ε], and
//! pairwise strict disjointness d(xᵢ, xⱼ) > rᵢ + rⱼ. Its score is
//! Σ g(rᵢ) for a gauge g, and the packing value of an instance is the
//! supremum over admissible families. Three layers:
//!
//! * [`instance`] — the finite problem statement ([`PackingInstance`])
//!   plus the post-hoc certificate check [`validate_packing`];
//! * [`optimize`] — an exact branch-and-bound for small instances, a
//!   greedy lower bound for large ones, the ε-sweep
//!   [`pre_measure_estimate`], and the interval proportionality probe
//!   [`packing_vs_mass`];
//! * [`density`] — the ball-mass/gauge ratio profile whose lower
//!   envelope controls the packing measure.

pub mod density;
pub mod instance;
pub mod optimize;

pub use density::{density_profile, DensityProfile};
pub use instance::{
    validate_packing, PackingEstimate, PackingGauge, PackingInstance, PackingMethod,
};
pub use optimize::{
    dyadic_radii, packing_value_auto, packing_value_exact, packing_value_greedy,
    packing_vs_mass, packing_vs_mass_with, pre_measure_estimate, IntervalRatio, RatioTable,
    EXACT_PAIR_CAP,
};
