use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::{self, tag};

/// Splits the vertices uniformly at random into parts of sizes
/// `floor(fraction * n)` and the remainder; returns the two induced
/// subgraphs. Edges between the parts are discarded.
pub fn node_split(graph: &Graph, fraction: f64, seed: u64) -> Result<(Graph, Graph)> {
    let (a, b) = split_vertices(graph.n(), fraction, seed)?;
    Ok((graph.induced_subgraph(&a), graph.induced_subgraph(&b)))
}

/// The sorted vertex sets used by [`node_split`].
pub fn split_vertices(n: usize, fraction: f64, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::InvalidArgument(format!("split fraction {fraction} must lie in (0, 1)")));
    }
    let first = (fraction * n as f64).floor() as usize;
    if first < 2 || n - first < 2 {
        return Err(Error::InvalidArgument(format!(
            "split of {n} vertices at {fraction} leaves a part with fewer than 2 vertices"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng::stream(seed, &[tag::SPLIT]));
    let mut b = order.split_off(first);
    order.sort_unstable();
    b.sort_unstable();
    Ok((order, b))
}
