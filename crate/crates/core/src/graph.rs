//! Labelled simple graphs on `{1, ..., n}` stored as bitset adjacency rows.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// An unordered vertex pair, always stored as `(smaller, larger)` with 1-based labels.
pub type Edge = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("label {label} outside 1..={n}")]
    LabelOutOfRange { label: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("edge {0}-{1} is not present")]
    MissingEdge(usize, usize),
    #[error("graph has {graph} vertices but the class is on {spec}")]
    OrderMismatch { graph: usize, spec: usize },
    #[error("invalid class spec: {0}")]
    InvalidSpec(String),
}

/// Normalise a pair to `(min, max)`.
#[inline]
pub fn edge(u: usize, v: usize) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// A simple undirected graph on labels `1..=n`.
///
/// Rows are bitsets over 0-based vertex indices; every public method takes and
/// returns 1-based labels.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LabelledGraph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
    edge_count: usize,
}

impl LabelledGraph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        LabelledGraph {
            n,
            words,
            rows: vec![0; words * n],
            edge_count: 0,
        }
    }

    /// Build a graph, rejecting out-of-range labels, self-loops and repeated pairs.
    pub fn new<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::empty(n);
        for (u, v) in edges {
            g.check_label(u)?;
            g.check_label(v)?;
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if g.has_edge(u, v) {
                let (a, b) = edge(u, v);
                return Err(GraphError::DuplicateEdge(a, b));
            }
            g.set(u - 1, v - 1, true);
        }
        Ok(g)
    }

    /// Complete graph `K_n`.
    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for v in 1..n {
            for u in 0..v {
                g.set(u, v, true);
            }
        }
        g
    }

    /// Cycle `1-2-...-n-1`; requires `n >= 3`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let mut g = Self::empty(n);
        for i in 0..n {
            g.set(i, (i + 1) % n, true);
        }
        g
    }

    /// Path `1-2-...-n`.
    pub fn path(n: usize) -> Self {
        let mut g = Self::empty(n);
        for i in 1..n {
            g.set(i - 1, i, true);
        }
        g
    }

    /// Graph whose edge set is the bit pattern `mask` over pair slots, pair `{i, j}`
    /// (0-based, `i < j`) at bit `j(j-1)/2 + i`. Requires `n <= 11`.
    pub fn from_slot_mask(n: usize, mask: u64) -> Self {
        assert!(n <= 11, "slot masks cover at most 11 vertices");
        let mut g = Self::empty(n);
        let mut k = 0;
        for j in 1..n {
            for i in 0..j {
                if mask >> k & 1 == 1 {
                    g.set(i, j, true);
                }
                k += 1;
            }
        }
        g
    }

    /// Inverse of [`LabelledGraph::from_slot_mask`]; `None` above 11 vertices.
    pub fn slot_mask(&self) -> Option<u64> {
        if self.n > 11 {
            return None;
        }
        let mut mask = 0u64;
        for (u, v) in self.edges() {
            mask |= 1 << ((v - 1) * (v - 2) / 2 + (u - 1));
        }
        Some(mask)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.edge_count
    }

    fn check_label(&self, v: usize) -> Result<(), GraphError> {
        if v == 0 || v > self.n {
            Err(GraphError::LabelOutOfRange { label: v, n: self.n })
        } else {
            Ok(())
        }
    }

    #[inline]
    fn row(&self, i: usize) -> &[u64] {
        &self.rows[i * self.words..(i + 1) * self.words]
    }

    #[inline]
    fn bit(&self, i: usize, j: usize) -> bool {
        self.rows[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    fn set(&mut self, i: usize, j: usize, on: bool) {
        let was = self.bit(i, j);
        if was == on {
            return;
        }
        let (wi, bi) = (i * self.words + j / 64, j % 64);
        let (wj, bj) = (j * self.words + i / 64, i % 64);
        if on {
            self.rows[wi] |= 1 << bi;
            self.rows[wj] |= 1 << bj;
            self.edge_count += 1;
        } else {
            self.rows[wi] &= !(1 << bi);
            self.rows[wj] &= !(1 << bj);
            self.edge_count -= 1;
        }
    }

    /// Adjacency test; labels outside `1..=n` are simply non-adjacent.
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && u >= 1 && v >= 1 && u <= self.n && v <= self.n && self.bit(u - 1, v - 1)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v - 1).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (1..=self.n).map(|v| self.degree(v)).collect()
    }

    pub fn min_degree(&self) -> usize {
        (1..=self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        (1..=self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Neighbours of `v` in increasing label order.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(v - 1).iter().enumerate().flat_map(|(w, &bits)| {
            BitIter(bits).map(move |b| w * 64 + b + 1)
        })
    }

    /// All edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::with_capacity(self.edge_count);
        for u in 1..=self.n {
            out.extend(self.neighbors(u).filter(|&v| v > u).map(|v| (u, v)));
        }
        out
    }

    /// Return a copy with `deleted` removed and then `inserted` added.
    pub fn with_edits(&self, deleted: &[Edge], inserted: &[Edge]) -> Result<Self, GraphError> {
        let mut g = self.clone();
        for &(u, v) in deleted {
            if !g.has_edge(u, v) {
                let (a, b) = edge(u, v);
                return Err(GraphError::MissingEdge(a, b));
            }
            g.set(u - 1, v - 1, false);
        }
        for &(u, v) in inserted {
            g.check_label(u)?;
            g.check_label(v)?;
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if g.has_edge(u, v) {
                let (a, b) = edge(u, v);
                return Err(GraphError::DuplicateEdge(a, b));
            }
            g.set(u - 1, v - 1, true);
        }
        Ok(g)
    }

    /// Copy of this graph padded with `extra` isolated vertices.
    pub fn with_extra_vertices(&self, extra: usize) -> Self {
        let mut g = Self::empty(self.n + extra);
        for (u, v) in self.edges() {
            g.set(u - 1, v - 1, true);
        }
        g
    }

    /// Disjoint union; `other`'s labels are shifted up by `self.order()`.
    pub fn disjoint_union(&self, other: &LabelledGraph) -> Self {
        let shift = self.n;
        let mut g = self.with_extra_vertices(other.n);
        for (u, v) in other.edges() {
            g.set(u + shift - 1, v + shift - 1, true);
        }
        g
    }

    /// Induced subgraph on `vertices`, relabelled by the increasing bijection onto `1..=k`.
    pub fn induced(&self, vertices: &[usize]) -> Self {
        let mut sorted = vertices.to_vec();
        sorted.sort_unstable();
        let mut g = Self::empty(sorted.len());
        for (i, &u) in sorted.iter().enumerate() {
            for (j, &v) in sorted.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.set(i, j, true);
                }
            }
        }
        g
    }

    /// Relabel so that old vertex `v` becomes `perm[v - 1]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n);
        let mut g = Self::empty(self.n);
        for (u, v) in self.edges() {
            g.set(perm[u - 1] - 1, perm[v - 1] - 1, true);
        }
        g
    }

    pub fn components(&self) -> ComponentPartition {
        let mut seen = vec![false; self.n];
        let mut blocks = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut block = vec![start + 1];
            let mut stack = vec![start + 1];
            while let Some(v) = stack.pop() {
                for w in self.neighbors(v) {
                    if !seen[w - 1] {
                        seen[w - 1] = true;
                        block.push(w);
                        stack.push(w);
                    }
                }
            }
            block.sort_unstable();
            blocks.push(block);
        }
        ComponentPartition { blocks }
    }

    pub fn component_count(&self) -> usize {
        self.components().blocks.len()
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// BFS distance from `u` to `v`, ignoring the edges in `skip`.
    pub fn distance_avoiding(&self, u: usize, v: usize, skip: &[Edge]) -> Option<usize> {
        let mut dist = vec![usize::MAX; self.n];
        dist[u - 1] = 0;
        let mut queue = std::collections::VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            if x == v {
                return Some(dist[x - 1]);
            }
            for y in self.neighbors(x) {
                if dist[y - 1] == usize::MAX && !skip.contains(&edge(x, y)) {
                    dist[y - 1] = dist[x - 1] + 1;
                    queue.push_back(y);
                }
            }
        }
        None
    }

    pub fn distance(&self, u: usize, v: usize) -> Option<usize> {
        self.distance_avoiding(u, v, &[])
    }
}

impl fmt::Debug for LabelledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LabelledGraph(n={}, edges={:?})", self.n, self.edges())
    }
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(b)
    }
}

#[derive(Serialize, Deserialize)]
struct EdgeListRepr {
    n: usize,
    edges: Vec<Edge>,
}

impl Serialize for LabelledGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        EdgeListRepr {
            n: self.n,
            edges: self.edges(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LabelledGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = EdgeListRepr::deserialize(d)?;
        LabelledGraph::new(repr.n, repr.edges).map_err(serde::de::Error::custom)
    }
}

/// The class `P(n, d, D)`: planar graphs on `n` labelled vertices with all degrees in `[d, D]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassSpec {
    pub n: usize,
    #[serde(rename = "d")]
    pub min_deg: usize,
    #[serde(rename = "D")]
    pub max_deg: usize,
}

impl ClassSpec {
    /// `D` may exceed `n - 1`; the window is then effectively `[d, n - 1]`.
    pub fn new(n: usize, min_deg: usize, max_deg: usize) -> Result<Self, GraphError> {
        if min_deg > max_deg {
            return Err(GraphError::InvalidSpec(format!(
                "minimum degree {min_deg} exceeds maximum degree {max_deg}"
            )));
        }
        Ok(ClassSpec { n, min_deg, max_deg })
    }

    /// `P(n, 0, n - 1)`, the unrestricted planar class.
    pub fn unrestricted(n: usize) -> Self {
        ClassSpec {
            n,
            min_deg: 0,
            max_deg: n.saturating_sub(1),
        }
    }

    pub fn with_order(self, n: usize) -> Self {
        ClassSpec { n, ..self }
    }

    pub fn admits_degree(&self, deg: usize) -> bool {
        self.min_deg <= deg && deg <= self.max_deg
    }

    /// True when the class is empty for parity reasons alone (`d = D`, `n*D` odd).
    pub fn parity_obstructed(&self) -> bool {
        self.min_deg == self.max_deg && (self.n * self.max_deg) % 2 == 1
    }

    pub fn degrees_fit(&self, g: &LabelledGraph) -> bool {
        (1..=g.order()).all(|v| self.admits_degree(g.degree(v)))
    }
}

impl fmt::Display for ClassSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P({},{},{})", self.n, self.min_deg, self.max_deg)
    }
}

/// The connected components of a graph, each block sorted, blocks ordered by least label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentPartition {
    pub blocks: Vec<Vec<usize>>,
}

impl ComponentPartition {
    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    pub fn count(&self) -> usize {
        self.blocks.len()
    }

    /// Index of the block containing `v`.
    pub fn block_of(&self, v: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.binary_search(&v).is_ok())
    }
}

/// `in_class`: planar and every degree inside the window.
pub fn in_class(g: &LabelledGraph, spec: &ClassSpec) -> Result<bool, GraphError> {
    if g.order() != spec.n {
        return Err(GraphError::OrderMismatch {
            graph: g.order(),
            spec: spec.n,
        });
    }
    Ok(spec.degrees_fit(g) && crate::planarity::is_planar(g))
}

/// A handful of named graphs used throughout tests, examples and the CLI.
pub mod named {
    use super::LabelledGraph;

    pub fn k4() -> LabelledGraph {
        LabelledGraph::complete(4)
    }

    /// `K_5` minus the edge `1-2`.
    pub fn k5_minus_edge() -> LabelledGraph {
        let g = LabelledGraph::complete(5);
        g.with_edits(&[(1, 2)], &[]).expect("edge present")
    }

    pub fn k33() -> LabelledGraph {
        LabelledGraph::new(6, [(1, 4), (1, 5), (1, 6), (2, 4), (2, 5), (2, 6), (3, 4), (3, 5), (3, 6)])
            .expect("valid")
    }

    /// Triangular prism: triangles 1-2-3 and 4-5-6 with rungs i-(i+3).
    pub fn prism() -> LabelledGraph {
        LabelledGraph::new(6, [(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6), (1, 4), (2, 5), (3, 6)])
            .expect("valid")
    }

    /// Octahedron: `K_6` minus the perfect matching `{1-2, 3-4, 5-6}`.
    pub fn octahedron() -> LabelledGraph {
        LabelledGraph::complete(6)
            .with_edits(&[(1, 2), (3, 4), (5, 6)], &[])
            .expect("edges present")
    }

    /// Cube `Q_3`.
    pub fn cube() -> LabelledGraph {
        let mut edges = Vec::new();
        for a in 0..8usize {
            for b in 0..3 {
                let c = a ^ (1 << b);
                if a < c {
                    edges.push((a + 1, c + 1));
                }
            }
        }
        LabelledGraph::new(8, edges).expect("valid")
    }

    pub fn icosahedron() -> LabelledGraph {
        // apex 1, upper ring 2..6, lower ring 7..11, apex 12
        let mut edges = Vec::new();
        for i in 0..5 {
            let up = 2 + i;
            let up_next = 2 + (i + 1) % 5;
            let low = 7 + i;
            let low_next = 7 + (i + 1) % 5;
            edges.push((1, up));
            edges.push((up, up_next));
            edges.push((up, low));
            edges.push((up, low_next));
            edges.push((low, low_next));
            edges.push((low, 12));
        }
        LabelledGraph::new(12, edges).expect("valid")
    }
}
