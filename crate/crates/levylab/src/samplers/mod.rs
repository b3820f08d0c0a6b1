//! Monte Carlo side of the laboratory.
//!
//! Everything analytic lives in `mechanism` and `kernels`; this module
//! draws the random objects those formulas describe and hands back samples
//! whose statistics the analytic routes must reproduce:
//!
//! * [`height`] — discrete height processes from downward-skip-free walks,
//!   and the offspring laws whose generating functions mirror the stable
//!   mechanisms.
//! * [`walk`] — rejection-sampled long walk excursions, fixed-length
//!   contour excursions via cycle rotation, and the Kolmogorov–Smirnov
//!   reference law for the excursion maximum.
//! * [`subord`] — positive stable variates, subordinator paths for the
//!   ball-mass lower bound, the truncated jump measure of the spine
//!   subordinator, and liminf-ratio profiles against a gauge.
//! * [`spine`] — decorated spines: subtrees grafted along an ancestral
//!   line, their windowed ball mass M*, and the Laplace-transform
//!   cross-checks at finite approximation scale.

pub mod height;
pub mod spine;
pub mod subord;
pub mod walk;

pub use height::{discrete_height, OffspringLaw};
pub use spine::{
    sample_spine, spine_laplace_row, spine_mass_laplace_oracle, SpineDecoration, SpineLaplaceRow,
    SpineSample,
};
pub use subord::{
    liminf_ratio, sample_height_jump_process, sample_positive_stable, sample_subordinator,
    HeightJumps, JumpRecord, SubordinatorPath,
};
pub use walk::{
    kennedy_max_cdf, sample_contour_excursion, sample_walk_excursion, sample_walk_excursion_with,
    WalkExcursion,
};
