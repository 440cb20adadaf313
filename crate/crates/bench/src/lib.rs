//! Shared fixtures for the criterion benchmarks.

use netsub::{Graph, GraphonModel, Sparsity};

/// Three-block model graph at `nu = n^(-0.1)`.
pub fn block_model_graph(n: usize, seed: u64) -> Graph {
    GraphonModel::three_block(Sparsity::Exponent { gamma: 0.1 })
        .sample_graph(n, seed)
        .expect("valid model")
}

/// Gaussian latent space graph at `nu = n^(-0.1)`.
pub fn latent_space_graph(n: usize, seed: u64) -> Graph {
    GraphonModel::gaussian_latent_space(Sparsity::Exponent { gamma: 0.1 })
        .sample_graph(n, seed)
        .expect("valid model")
}
