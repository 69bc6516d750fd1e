//! Shared fixtures for the kernel benchmarks.

use dlab_core::{ContinuedFraction, Schedule};
use num::bigint::BigInt;

/// Golden-ratio fixture deep enough for every benchmark.
pub fn golden() -> ContinuedFraction {
    ContinuedFraction::golden()
}

/// A moderate three-level schedule on the golden ratio (all levels exactly
/// materializable).
pub fn golden_schedule(cf: &mut ContinuedFraction) -> Schedule {
    Schedule::explicit(
        cf,
        &[
            (5, BigInt::from(13)),
            (10, BigInt::from(144)),
            (15, BigInt::from(1597)),
        ],
    )
    .unwrap()
}
