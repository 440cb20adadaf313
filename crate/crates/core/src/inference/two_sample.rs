use serde::{Deserialize, Serialize};

use super::split::node_split;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::{self, tag};
use crate::spectral::{rho_hat, top_eigenvalues, Normalization, SpectrumRequest, StatisticSpec};
use crate::subsample::{confidence_interval, ConfidenceInterval, SubsampleScheme};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Reject,
    FailToReject,
}

impl Decision {
    pub fn name(&self) -> &'static str {
        match self {
            Decision::Reject => "reject",
            Decision::FailToReject => "fail_to_reject",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoSampleOptions {
    /// Overall level; each interval is built at `1 - alpha / 2`.
    pub alpha: f64,
    /// Share of each graph's vertices used for exploration.
    pub split_fraction: f64,
    /// Subsample size as a share of the test part.
    pub b_fraction: f64,
    pub replicates: usize,
    pub k_max: usize,
}

impl Default for TwoSampleOptions {
    fn default() -> Self {
        TwoSampleOptions {
            alpha: 0.05,
            split_fraction: 0.5,
            b_fraction: 0.33,
            replicates: 500,
            k_max: 5,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TwoSampleResult {
    pub statistic: StatisticSpec,
    pub value_1: f64,
    pub value_2: f64,
    pub ci_1: ConfidenceInterval,
    pub ci_2: ConfidenceInterval,
    pub decision: Decision,
    pub alpha: f64,
    pub options: TwoSampleOptions,
    pub seed: u64,
    pub split_seed: u64,
    pub subsample_seed: u64,
    pub b_1: usize,
    pub b_2: usize,
    pub rho_hat_1: f64,
    pub rho_hat_2: f64,
    /// Normalized top eigenvalues of the exploration parts.
    pub exploration_1: Vec<f64>,
    pub exploration_2: Vec<f64>,
}

/// Top `k` eigenvalues of `A / (n rho_hat)`.
pub fn normalized_spectrum(graph: &Graph, k: usize) -> Result<Vec<f64>> {
    let rho = rho_hat(graph)?;
    if rho <= 0.0 {
        return Err(Error::DegenerateInput("graph has no edges".into()));
    }
    let scale = graph.n() as f64 * rho;
    Ok(top_eigenvalues(graph, SpectrumRequest::new(k, 0))?
        .top
        .iter()
        .map(|l| l / scale)
        .collect())
}

/// The eigenvalue index `r <= k_max` where the two normalized spectra differ
/// most; ties go to the smaller index.
pub fn select_statistic(spectrum_1: &[f64], spectrum_2: &[f64], k_max: usize) -> Result<StatisticSpec> {
    if k_max == 0 || spectrum_1.len() < k_max || spectrum_2.len() < k_max {
        return Err(Error::InvalidArgument(format!(
            "need {k_max} >= 1 eigenvalues from both spectra, got {} and {}",
            spectrum_1.len(),
            spectrum_2.len()
        )));
    }
    let mut best = 0;
    let mut best_diff = f64::NEG_INFINITY;
    for r in 0..k_max {
        let d = (spectrum_1[r] - spectrum_2[r]).abs();
        if d > best_diff {
            best = r;
            best_diff = d;
        }
    }
    Ok(StatisticSpec::eigenvalue(best as i32 + 1, Normalization::EstimatedRho))
}

/// Reject exactly when the intervals are disjoint.
pub fn decide(ci_1: &ConfidenceInterval, ci_2: &ConfidenceInterval) -> Decision {
    if ci_1.lower.max(ci_2.lower) > ci_1.upper.min(ci_2.upper) {
        Decision::Reject
    } else {
        Decision::FailToReject
    }
}

/// Node-split both graphs, choose the eigenvalue index on the exploration
/// parts, then compare level `1 - alpha/2` vertex-subsampling intervals on
/// the test parts.
///
/// Both graphs are split and subsampled with the same seeds, so passing the
/// same graph twice yields identical intervals.
pub fn two_sample_test(g1: &Graph, g2: &Graph, options: &TwoSampleOptions, seed: u64) -> Result<TwoSampleResult> {
    if !(options.alpha > 0.0 && options.alpha < 1.0) {
        return Err(Error::InvalidArgument(format!("alpha {} must lie in (0, 1)", options.alpha)));
    }
    if !(options.b_fraction > 0.0 && options.b_fraction < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "b_fraction {} must lie in (0, 1)",
            options.b_fraction
        )));
    }
    let split_seed = rng::derive(seed, &[tag::SPLIT]);
    let subsample_seed = rng::derive(seed, &[tag::REPLICATE]);
    let (explore_1, test_1) = node_split(g1, options.split_fraction, split_seed)?;
    let (explore_2, test_2) = node_split(g2, options.split_fraction, split_seed)?;

    let exploration_1 = normalized_spectrum(&explore_1, options.k_max)?;
    let exploration_2 = normalized_spectrum(&explore_2, options.k_max)?;
    let statistic = select_statistic(&exploration_1, &exploration_2, options.k_max)?;

    let level = 1.0 - options.alpha / 2.0;
    let ci = |g: &Graph| -> Result<(ConfidenceInterval, usize)> {
        let b = (options.b_fraction * g.n() as f64).round() as usize;
        if b < 10 {
            return Err(Error::InvalidArgument(format!(
                "test part of {} vertices gives subsample size {b} < 10",
                g.n()
            )));
        }
        let ci = confidence_interval(
            g,
            &statistic,
            SubsampleScheme::Vertex { b },
            options.replicates,
            level,
            subsample_seed,
        )?;
        Ok((ci, b))
    };
    let (ci_1, b_1) = ci(&test_1)?;
    let (ci_2, b_2) = ci(&test_2)?;
    Ok(TwoSampleResult {
        statistic,
        value_1: ci_1.statistic_value,
        value_2: ci_2.statistic_value,
        decision: decide(&ci_1, &ci_2),
        alpha: options.alpha,
        options: *options,
        seed,
        split_seed,
        subsample_seed,
        b_1,
        b_2,
        rho_hat_1: rho_hat(&test_1)?,
        rho_hat_2: rho_hat(&test_2)?,
        exploration_1,
        exploration_2,
        ci_1,
        ci_2,
    })
}
