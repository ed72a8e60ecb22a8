//! Shared inputs for the benchmarks.

use girthforge::{smc_expand, ExponentMatrix, SmcSpec};

/// The (3, 6) girth-12 matrix at N = 271 from base column (0, 1, 29) and
/// multipliers (3, 7, 67, 144).
pub fn girth12_matrix() -> ExponentMatrix {
    smc_expand(&SmcSpec::new(vec![0, 1, 29], vec![3, 7, 67, 144], 271).expect("valid spec"))
}
