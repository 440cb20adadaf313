//! Composite procedures built from the subsampling machinery.

mod cluster;
mod coverage;
mod rho_compare;
mod split;
mod two_sample;

pub use cluster::{cluster_spectra, Dendrogram, Merge};
pub use coverage::{
    coverage_experiment, population_parameter, CoverageCell, CoverageConfig, CoverageReport, RhoMode, SchemeSpec,
};
pub use rho_compare::{rho_mode_comparison, RhoComparison};
pub use split::{node_split, split_vertices};
pub use two_sample::{
    decide, normalized_spectrum, select_statistic, two_sample_test, Decision, TwoSampleOptions, TwoSampleResult,
};
