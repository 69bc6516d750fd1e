//! Exact-arithmetic toolkit for inhomogeneous approximation sets on the
//! circle: continued fractions, three-distance orbit geometry, nested arc
//! constructions at q^(-K) scales, decreasing rate functions, and dimension
//! formula / box-counting reports.

pub mod cf;
pub mod dimension;
pub mod error;
pub mod interval;
pub mod numeric;
pub mod phi;
pub mod rotation;
pub mod schedule;
pub mod sets;

pub use cf::{ContinuedFraction, GrowthExpr, GrowthSpec, Provenance, TypeEstimate};
pub use dimension::{
    box_count_exact, box_count_predicted, case_fact, cover_sum_ln, landscape_min,
    log_convexity_check, s_formula, s_piecewise, slope_fit, theorem2_both_forms,
    theorem2_lower_bound, BoxCountReport,
};
pub use error::{Error, Result};
pub use interval::IntervalSet;
pub use numeric::{parse_ratio, rat, rationalize_f64, Bounds, Rat};
pub use phi::{ErrorFunction, ExponentEstimate, PhiVal, SampleStrategy};
pub use rotation::{
    gap_spectrum_bruteforce, group_structure, spectrum_matches_groups, GapClass, GapSpectrum,
    GroupStructure,
};
pub use schedule::{
    admissible_counts, auto_k, simplest_within, Schedule, ScheduleLevel, DEFAULT_GROWTH_EXP,
    REFERENCE_GROWTH_EXP,
};
pub use sets::{
    build_level, intersect_levels, ln_box_count, membership_check, predict_levels,
    LevelGeometry, MassDistribution, MembershipReport, PredictedLevel, RationalizationPolicy,
    EXACT_ARC_CAP,
};
