//! Canonical labeled-graph representation shared by every other module.
//!
//! A [`LabeledGraph`] is a simple undirected graph on vertices `1..=n` with
//! `n <= 16`. Edges live in a single `u128` bitset indexed by the C(n,2)
//! unordered pairs `{i,j}`, `1 <= i < j <= n`, in lexicographic pair order
//! `(1,2),(1,3),...,(1,n),(2,3),...`. Equality is labeled equality: two
//! graphs are equal iff they have the same vertex count and the same edge
//! bitset. No isomorphism anywhere.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Hard cap on the vertex count so an edge bitset fits in a `u128`.
pub const MAX_VERTICES: usize = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex count {0} out of range 1..={MAX_VERTICES}")]
    BadVertexCount(usize),
    #[error("vertex {v} out of range 1..={n}")]
    BadVertex { v: usize, n: usize },
    #[error("graph code {code} out of range for n={n} (must be < 2^{bits})")]
    CodeOutOfRange { code: u128, n: usize, bits: u32 },
}

/// graph6 parse failures carry the byte offset of the offending byte.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum Graph6Error {
    #[error("empty graph6 string")]
    Empty,
    #[error("byte {byte:#04x} at offset {offset} outside graph6 range 63..=126")]
    BadByte { offset: usize, byte: u8 },
    #[error("long-form vertex count at offset {offset} exceeds the supported maximum of {MAX_VERTICES}")]
    Unsupported { offset: usize },
    #[error("vertex count {n} exceeds the supported maximum of {MAX_VERTICES}")]
    TooManyVertices { n: usize },
    #[error("expected {expected} data bytes after the header, found {found}")]
    BadLength { expected: usize, found: usize },
    #[error("nonzero padding bit in final byte at offset {offset}")]
    BadPadding { offset: usize },
}

/// Number of unordered vertex pairs, C(n,2).
pub const fn pair_count(n: usize) -> usize {
    n * (n - 1) / 2
}

/// Bit position of pair `{i,j}` (`1 <= i < j <= n`) in lexicographic order.
#[inline]
fn pair_bit(i: usize, j: usize, n: usize) -> u32 {
    debug_assert!(1 <= i && i < j && j <= n);
    ((i - 1) * n - i * (i - 1) / 2 + (j - i - 1)) as u32
}

/// Simple undirected graph on labeled vertices `1..=n`, `n <= 16`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LabeledGraph {
    n: u8,
    edges: u128,
}

impl LabeledGraph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n == 0 || n > MAX_VERTICES {
            return Err(GraphError::BadVertexCount(n));
        }
        Ok(Self { n: n as u8, edges: 0 })
    }

    /// Decode a graph index: bit `b` of `code` sets the `b`-th lexicographic
    /// pair as an edge. Inverse of [`LabeledGraph::index`].
    pub fn from_index(n: usize, code: u128) -> Result<Self, GraphError> {
        let mut g = Self::empty(n)?;
        let bits = pair_count(n) as u32;
        if bits < 128 && code >> bits != 0 {
            return Err(GraphError::CodeOutOfRange { code, n, bits });
        }
        g.edges = code;
        Ok(g)
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Self::empty(n)?;
        for &(u, v) in edges {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            g.add_edge(u, v);
        }
        Ok(g)
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v == 0 || v > self.n() {
            return Err(GraphError::BadVertex { v, n: self.n() });
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    /// The integer in `[0, 2^C(n,2))` whose binary expansion is the edge bitset.
    pub fn index(&self) -> u128 {
        self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.count_ones() as usize
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        debug_assert!(u != v && u >= 1 && v >= 1 && u <= self.n() && v <= self.n());
        let (i, j) = if u < v { (u, v) } else { (v, u) };
        self.edges >> pair_bit(i, j, self.n()) & 1 == 1
    }

    /// Adds edge `{u,v}`. Self-loops are not representable; `u == v` panics.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v, "self-loops are not representable");
        let (i, j) = if u < v { (u, v) } else { (v, u) };
        self.edges |= 1 << pair_bit(i, j, self.n());
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        let (i, j) = if u < v { (u, v) } else { (v, u) };
        self.edges &= !(1 << pair_bit(i, j, self.n()));
    }

    /// Sorted set of neighbors of `v`.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        (1..=self.n()).filter(|&u| u != v && self.has_edge(u, v)).collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        (1..=self.n()).filter(|&u| u != v && self.has_edge(u, v)).count()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for i in 1..=self.n() {
            for j in i + 1..=self.n() {
                if self.has_edge(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Per-vertex adjacency bitmasks over `0..n` (vertex `v` maps to bit `v-1`);
    /// the form the width solvers consume.
    pub fn adjacency_masks(&self) -> Vec<u16> {
        let n = self.n();
        let mut adj = vec![0u16; n];
        for i in 1..=n {
            for j in i + 1..=n {
                if self.has_edge(i, j) {
                    adj[i - 1] |= 1 << (j - 1);
                    adj[j - 1] |= 1 << (i - 1);
                }
            }
        }
        adj
    }

    pub fn complete(n: usize) -> Result<Self, GraphError> {
        let mut g = Self::empty(n)?;
        let bits = pair_count(n) as u32;
        g.edges = if bits == 128 { u128::MAX } else { (1u128 << bits) - 1 };
        Ok(g)
    }

    /// Path `1 - 2 - ... - n`.
    pub fn path(n: usize) -> Result<Self, GraphError> {
        let mut g = Self::empty(n)?;
        for v in 1..n {
            g.add_edge(v, v + 1);
        }
        Ok(g)
    }

    /// Cycle `1 - 2 - ... - n - 1` (requires `n >= 3`).
    pub fn cycle(n: usize) -> Result<Self, GraphError> {
        let mut g = Self::path(n)?;
        if n >= 3 {
            g.add_edge(n, 1);
        }
        Ok(g)
    }

    /// Star with center `1` and leaves `2..=n`.
    pub fn star(n: usize) -> Result<Self, GraphError> {
        let mut g = Self::empty(n)?;
        for v in 2..=n {
            g.add_edge(1, v);
        }
        Ok(g)
    }

    /// Standard graph6 encoding: header byte `n+63`, then the upper triangle
    /// of the adjacency matrix in column-major order, six bits per byte,
    /// zero-padded, each data byte offset by 63.
    pub fn to_graph6(&self) -> String {
        let n = self.n();
        let mut out = String::new();
        out.push((n as u8 + 63) as char);
        let mut bits: Vec<bool> = Vec::with_capacity(pair_count(n));
        for j in 2..=n {
            for i in 1..j {
                bits.push(self.has_edge(i, j));
            }
        }
        while !bits.len().is_multiple_of(6) {
            bits.push(false);
        }
        for chunk in bits.chunks(6) {
            let mut value = 0u8;
            for (pos, &bit) in chunk.iter().enumerate() {
                if bit {
                    value |= 1 << (5 - pos);
                }
            }
            out.push((value + 63) as char);
        }
        out
    }

    pub fn from_graph6(s: &str) -> Result<Self, Graph6Error> {
        let bytes = s.as_bytes();
        let first = *bytes.first().ok_or(Graph6Error::Empty)?;
        if first == b'~' {
            // Long form encodes n >= 63, always beyond our cap.
            return Err(Graph6Error::Unsupported { offset: 0 });
        }
        if !(63..=126).contains(&first) {
            return Err(Graph6Error::BadByte { offset: 0, byte: first });
        }
        let n = (first - 63) as usize;
        if n == 0 || n > MAX_VERTICES {
            return Err(Graph6Error::TooManyVertices { n });
        }
        let data = &bytes[1..];
        let expected = pair_count(n).div_ceil(6);
        if data.len() != expected {
            return Err(Graph6Error::BadLength { expected, found: data.len() });
        }
        let mut bits = Vec::with_capacity(expected * 6);
        for (idx, &b) in data.iter().enumerate() {
            if !(63..=126).contains(&b) {
                return Err(Graph6Error::BadByte { offset: idx + 1, byte: b });
            }
            let v = b - 63;
            for pos in 0..6 {
                bits.push(v >> (5 - pos) & 1 == 1);
            }
        }
        for (bi, &bit) in bits.iter().enumerate().skip(pair_count(n)) {
            if bit {
                return Err(Graph6Error::BadPadding { offset: bi / 6 + 1 });
            }
        }
        let mut g = Self::empty(n).expect("n validated above");
        let mut cursor = 0;
        for j in 2..=n {
            for i in 1..j {
                if bits[cursor] {
                    g.add_edge(i, j);
                }
                cursor += 1;
            }
        }
        Ok(g)
    }
}

impl std::fmt::Debug for LabeledGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "LabeledGraph(n={}, edges={:?})", self.n, self.edges())
    }
}

impl std::fmt::Display for LabeledGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_graph6())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_index_zero_is_empty() {
        let g = LabeledGraph::from_index(3, 0).unwrap();
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g, LabeledGraph::empty(3).unwrap());
    }

    #[test]
    fn from_index_all_ones_is_complete() {
        assert_eq!(LabeledGraph::from_index(3, 7).unwrap(), LabeledGraph::complete(3).unwrap());
        assert_eq!(LabeledGraph::from_index(4, 63).unwrap(), LabeledGraph::complete(4).unwrap());
    }

    #[test]
    fn from_index_rejects_out_of_range() {
        assert_eq!(
            LabeledGraph::from_index(3, 8),
            Err(GraphError::CodeOutOfRange { code: 8, n: 3, bits: 3 })
        );
    }

    #[test]
    fn index_roundtrip_exhaustive_small_n() {
        for n in 1..=5 {
            for code in 0..1u128 << pair_count(n) {
                assert_eq!(LabeledGraph::from_index(n, code).unwrap().index(), code);
            }
        }
    }

    #[test]
    fn edge_count_is_popcount() {
        for code in 0..1u128 << pair_count(5) {
            let g = LabeledGraph::from_index(5, code).unwrap();
            assert_eq!(g.edge_count(), code.count_ones() as usize);
        }
    }

    #[test]
    fn neighbors_examples() {
        let k3 = LabeledGraph::complete(3).unwrap();
        assert_eq!(k3.neighbors(1), vec![2, 3]);
        let empty = LabeledGraph::empty(4).unwrap();
        assert!(empty.neighbors(2).is_empty());
        let p4 = LabeledGraph::path(4).unwrap();
        assert_eq!(p4.neighbors(2), vec![1, 3]);
    }

    #[test]
    fn graph6_reference_values() {
        // Frozen against networkx's graph6 codec.
        assert_eq!(LabeledGraph::complete(3).unwrap().to_graph6(), "Bw");
        assert_eq!(LabeledGraph::empty(1).unwrap().to_graph6(), "@");
        assert_eq!(LabeledGraph::path(4).unwrap().to_graph6(), "Ch");
        assert_eq!(LabeledGraph::cycle(4).unwrap().to_graph6(), "Cl");
        assert_eq!(LabeledGraph::cycle(5).unwrap().to_graph6(), "Dhc");
        assert_eq!(LabeledGraph::complete(4).unwrap().to_graph6(), "C~");
        assert_eq!(LabeledGraph::from_graph6("DQc").unwrap().edges(), vec![(1, 3), (1, 5), (2, 4), (4, 5)]);
    }

    #[test]
    fn graph6_roundtrip_exhaustive_n4() {
        for n in 1..=4 {
            for code in 0..1u128 << pair_count(n) {
                let g = LabeledGraph::from_index(n, code).unwrap();
                assert_eq!(LabeledGraph::from_graph6(&g.to_graph6()).unwrap(), g);
            }
        }
    }

    #[test]
    fn graph6_errors_name_offsets() {
        assert_eq!(LabeledGraph::from_graph6(""), Err(Graph6Error::Empty));
        assert_eq!(
            LabeledGraph::from_graph6("B\x1f"),
            Err(Graph6Error::BadByte { offset: 1, byte: 0x1f })
        );
        assert_eq!(LabeledGraph::from_graph6("Bw_"), Err(Graph6Error::BadLength { expected: 1, found: 2 }));
        // K_3 data byte with a padding bit forced on.
        assert_eq!(LabeledGraph::from_graph6("B~"), Err(Graph6Error::BadPadding { offset: 1 }));
    }
}
