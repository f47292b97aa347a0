//! Runtime-budget caps as named configuration constants.
//!
//! Each cap keeps a single solver or census call under roughly a second on
//! commodity hardware; the long-run census is the one deliberate exception.

/// Largest vertex count accepted by the exact treewidth solver.
pub const TREEWIDTH_MAX_N: usize = 13;

/// Largest vertex count accepted by the exact pathwidth solver.
pub const PATHWIDTH_MAX_N: usize = 13;

/// Largest vertex count accepted by the exact proper-pathwidth solver
/// (harsher budget; its search space grows much faster).
pub const PROPER_PATHWIDTH_MAX_N: usize = 8;

/// Largest vertex count swept by default censuses (2^21 graphs).
pub const CENSUS_MAX_N: usize = 7;

/// Vertex count allowed behind the explicit long-run flag (2^28 graphs,
/// hours-scale; checkpointed).
pub const CENSUS_LONG_RUN_MAX_N: usize = 8;

/// Triple enumeration refuses when the product of per-step choice-count
/// upper bounds exceeds this cap.
pub const ENUMERATION_BUDGET: u128 = 100_000_000;

/// Default bit precision for interval endpoints.
pub const INTERVAL_PRECISION_BITS: u32 = 128;

/// Graph codes are scanned in fixed-size chunks so results are independent
/// of the worker count.
pub const CENSUS_CHUNK: u128 = 1 << 14;
