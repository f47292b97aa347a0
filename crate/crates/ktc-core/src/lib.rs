//! Exact enumeration and bound verification for labeled partial k-trees.
//!
//! The crate has five layers:
//!
//! * [`graph`] — the canonical labeled-graph representation (edge bitsets,
//!   graph indices, graph6 serialization);
//! * [`width`] — exact treewidth / pathwidth / proper-pathwidth solvers and
//!   the proper-path-decomposition certificate checker;
//! * [`construction`] — constructible triples: validation, graph building,
//!   decomposition witnesses, exhaustive enumeration, and preimage analysis;
//! * [`census`] — brute-force exact counts over all labeled graphs at small
//!   n (partial k-trees, k-trees, proper linear k-trees, apex-over-forest);
//! * [`bounds`] — arbitrary-precision evaluation of the count bounds, with
//!   exact rationals where possible and certified intervals elsewhere.
//!
//! [`acceptance`] ties the layers together into the verification suite the
//! `ktc` command-line tool and the integration tests both run.

pub mod acceptance;
pub mod bignum;
pub mod bounds;
pub mod census;
pub mod construction;
pub mod graph;
pub mod limits;
pub mod width;

pub use graph::{Graph6Error, GraphError, LabeledGraph};
pub use width::{check_ppd, ProperPathDecomposition, WidthReport};
