//! Exact width solvers (treewidth, pathwidth, proper-pathwidth) at desk
//! scale, plus the proper-path-decomposition certificate checker.
//!
//! These are the independent oracles the construction is verified against,
//! so they stay deliberately simple: subset dynamic programming for
//! treewidth and pathwidth, a normalized depth-first search for
//! proper-pathwidth. All solvers are pure functions with per-call state.

mod pathwidth;
mod proper;
mod treewidth;

pub use pathwidth::pathwidth_exact;
pub use proper::{check_ppd, proper_pathwidth_exact, PpdViolation, ProperPathDecomposition};
pub use treewidth::{embeds_in_ktree, is_partial_ktree, treewidth_exact};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::LabeledGraph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WidthError {
    #[error("graph on {n} vertices exceeds the {solver} cap of {max_n}")]
    CapacityExceeded { solver: &'static str, n: usize, max_n: usize },
    #[error("width parameter k={k} out of range 1..={n}")]
    BadK { k: usize, n: usize },
}

/// The three exact widths of one graph; `ppw >= pw >= tw` always.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WidthReport {
    pub tw: usize,
    pub pw: usize,
    pub ppw: usize,
}

/// Computes all three widths (subject to the per-solver caps).
pub fn width_report(g: &LabeledGraph) -> Result<WidthReport, WidthError> {
    Ok(WidthReport {
        tw: treewidth_exact(g)?,
        pw: pathwidth_exact(g)?,
        ppw: proper_pathwidth_exact(g)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_orders_widths() {
        let r = width_report(&LabeledGraph::cycle(5).unwrap()).unwrap();
        assert!(r.ppw >= r.pw && r.pw >= r.tw);
        assert_eq!(r.tw, 2);
    }
}
