//! Undirected simple graphs in compressed sparse row form.

use crate::error::{Error, Result};

/// An undirected simple graph on vertices `0..n`.
///
/// Neighbor lists are stored contiguously and are strictly increasing; there
/// are no self-loops and the adjacency relation is symmetric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
}

impl Graph {
    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            offsets: vec![0; n + 1],
            neighbors: Vec::new(),
        }
    }

    /// Complete graph `K_n`.
    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j));
            }
        }
        Self::from_edges_unchecked(n, &edges)
    }

    /// Path `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_edges_unchecked(n, &edges)
    }

    /// Star with center 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Self::from_edges_unchecked(leaves + 1, &edges)
    }

    /// Builds a graph from an edge list. Duplicate edges (in either
    /// orientation) are collapsed; self-loops and out-of-range ids are errors.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n > u32::MAX as usize {
            return Err(Error::InvalidArgument(format!("vertex count {n} exceeds u32 range")));
        }
        for &(u, v) in edges {
            if u == v {
                return Err(Error::InvalidArgument(format!("self-loop at vertex {u}")));
            }
            if u >= n || v >= n {
                return Err(Error::InvalidArgument(format!(
                    "edge ({u}, {v}) out of range for {n} vertices"
                )));
            }
        }
        Ok(Self::from_edges_unchecked(n, edges))
    }

    pub(crate) fn from_edges_unchecked(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut degree = vec![0usize; n];
        for &(u, v) in edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut cursor = offsets[..n].to_vec();
        let mut neighbors = vec![0u32; offsets[n]];
        for &(u, v) in edges {
            neighbors[cursor[u]] = v as u32;
            cursor[u] += 1;
            neighbors[cursor[v]] = u as u32;
            cursor[v] += 1;
        }
        Self::from_raw_lists(n, offsets, neighbors)
    }

    /// Sorts and deduplicates every neighbor list, then compacts.
    fn from_raw_lists(n: usize, offsets: Vec<usize>, mut neighbors: Vec<u32>) -> Self {
        let mut out_offsets = Vec::with_capacity(n + 1);
        out_offsets.push(0);
        let mut write = 0;
        for i in 0..n {
            let (s, e) = (offsets[i], offsets[i + 1]);
            neighbors[s..e].sort_unstable();
            let mut last = None;
            for r in s..e {
                let x = neighbors[r];
                if last != Some(x) {
                    neighbors[write] = x;
                    write += 1;
                    last = Some(x);
                }
            }
            out_offsets.push(write);
        }
        neighbors.truncate(write);
        Graph {
            offsets: out_offsets,
            neighbors,
        }
    }

    /// Builds a graph from per-vertex lists of higher-numbered neighbors.
    /// Each list must be strictly increasing with entries `> i`.
    pub(crate) fn from_upper_lists(upper: Vec<Vec<u32>>) -> Self {
        let n = upper.len();
        let mut degree = vec![0usize; n];
        for (i, row) in upper.iter().enumerate() {
            degree[i] += row.len();
            for &j in row {
                degree[j as usize] += 1;
            }
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut cursor = offsets[..n].to_vec();
        let mut neighbors = vec![0u32; offsets[n]];
        // Lower neighbors of j arrive in increasing i, upper ones are already
        // sorted, so every list comes out sorted without a second pass.
        for (i, row) in upper.iter().enumerate() {
            for &j in row {
                let j = j as usize;
                neighbors[cursor[j]] = i as u32;
                cursor[j] += 1;
            }
            for &j in row {
                neighbors[cursor[i]] = j;
                cursor[i] += 1;
            }
            debug_assert_eq!(cursor[i], offsets[i + 1]);
        }
        Graph { offsets, neighbors }
    }

    /// Number of vertices.
    #[inline]
    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of undirected edges.
    #[inline]
    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    /// Sorted neighbors of `v`.
    #[inline]
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && v < self.n() && self.neighbors(u).binary_search(&(v as u32)).is_ok()
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .map(|&v| v as usize)
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// Induced subgraph on `vertices`, relabeled so that `vertices[k]` becomes `k`.
    /// Vertex ids must be distinct and in range.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Graph {
        let mut label = vec![u32::MAX; self.n()];
        for (k, &v) in vertices.iter().enumerate() {
            debug_assert_eq!(label[v], u32::MAX, "duplicate vertex {v}");
            label[v] = k as u32;
        }
        let mut offsets = Vec::with_capacity(vertices.len() + 1);
        offsets.push(0);
        let mut neighbors = Vec::new();
        let mut sorted = true;
        for &v in vertices {
            let start = neighbors.len();
            neighbors.extend(
                self.neighbors(v)
                    .iter()
                    .map(|&w| label[w as usize])
                    .filter(|&l| l != u32::MAX),
            );
            sorted &= neighbors[start..].windows(2).all(|w| w[0] < w[1]);
            offsets.push(neighbors.len());
        }
        if sorted {
            Graph { offsets, neighbors }
        } else {
            Self::from_raw_lists(vertices.len(), offsets, neighbors)
        }
    }

    /// Applies a relabeling: vertex `v` of `self` becomes `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n());
        let edges: Vec<_> = self.edges().map(|(u, v)| (perm[u], perm[v])).collect();
        Self::from_edges_unchecked(self.n(), &edges)
    }

    /// Removes vertices of degree zero; returns the surviving graph and the
    /// original ids of the kept vertices.
    pub fn without_isolated(&self) -> (Graph, Vec<usize>) {
        let keep: Vec<usize> = (0..self.n()).filter(|&v| self.degree(v) > 0).collect();
        (self.induced_subgraph(&keep), keep)
    }

    /// Dense adjacency matrix (row-major, `n * n`).
    pub fn dense_adjacency(&self) -> nalgebra::DMatrix<f64> {
        let n = self.n();
        let mut m = nalgebra::DMatrix::zeros(n, n);
        for (u, v) in self.edges() {
            m[(u, v)] = 1.0;
            m[(v, u)] = 1.0;
        }
        m
    }

    /// `y = A x`.
    #[inline]
    pub fn mul_vec(&self, x: &[f64], y: &mut [f64]) {
        for (v, out) in y.iter_mut().enumerate() {
            *out = self.neighbors(v).iter().map(|&w| x[w as usize]).sum();
        }
    }

    /// Checks every structural invariant; used by tests and file readers.
    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        for v in 0..n {
            let nb = self.neighbors(v);
            if nb.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidArgument(format!("neighbors of {v} not strictly increasing")));
            }
            for &w in nb {
                let w = w as usize;
                if w == v {
                    return Err(Error::InvalidArgument(format!("self-loop at {v}")));
                }
                if w >= n || !self.has_edge(w, v) {
                    return Err(Error::InvalidArgument(format!("asymmetric edge ({v}, {w})")));
                }
            }
        }
        Ok(())
    }
}
