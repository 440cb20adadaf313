//! Subsampling inference for networks generated by sparse graphons.
//!
//! The crate covers the whole pipeline: sampling graphs from block models and
//! latent-kernel graphons, spectral and subgraph-count statistics, vertex and
//! p-subsampling distributions with the confidence intervals they induce, and
//! the composite procedures built on top (two-sample tests with node
//! splitting, coverage experiments, clustering of network spectra).

pub mod counts;
pub mod eigen;
pub mod error;
pub mod graph;
pub mod inference;
pub mod io;
pub mod models;
pub mod rng;
pub mod spectral;
pub mod stats;
pub mod subsample;

pub use counts::Motif;
pub use error::{Error, Result};
pub use graph::Graph;
pub use models::{GraphonModel, Kernel, Sparsity};
pub use spectral::{Functional, Normalization, SpectrumRequest, StatisticSpec};
pub use subsample::{ConfidenceInterval, EmpiricalDistribution, SubsampleScheme};
pub use inference::{CoverageReport, Decision, Dendrogram, TwoSampleResult};
