//! Vertex subsampling and p-subsampling: empirical subsampling distributions,
//! their quantiles, and the confidence intervals obtained by inverting them.
//!
//! Every draw is `sqrt(B) * (theta_sub - theta_full)` where `B` is the vertex
//! count of the subsample. Statistics normalized by an estimated density are
//! evaluated on subsamples with the density of the full graph held fixed.

use rand::seq::index;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::{self, tag};
use crate::spectral::{self, Normalization, Solver, StatisticSpec};

/// Smallest number of replicates accepted for a subsampling distribution.
pub const MIN_REPLICATES: usize = 50;
/// Largest tolerated fraction of replicates on which the statistic is undefined.
pub const MAX_DEGENERATE_FRACTION: f64 = 0.2;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SubsampleScheme {
    /// Induced subgraph on `b` uniformly chosen vertices.
    Vertex { b: usize },
    /// Each vertex kept independently with probability `p`; isolated vertices dropped.
    PSample { p: f64 },
}

impl SubsampleScheme {
    pub fn validate(&self, n: usize) -> Result<()> {
        match *self {
            SubsampleScheme::Vertex { b } if b < 2 || b > n => Err(Error::InvalidArgument(format!(
                "subsample size {b} must lie in [2, {n}]"
            ))),
            SubsampleScheme::PSample { p } if !(p > 0.0 && p < 1.0) => {
                Err(Error::InvalidArgument(format!("inclusion probability {p} must lie in (0, 1)")))
            }
            _ => Ok(()),
        }
    }

    pub fn label(&self) -> String {
        match *self {
            SubsampleScheme::Vertex { b } => format!("vertex(b={b})"),
            SubsampleScheme::PSample { p } => format!("psample(p={p})"),
        }
    }
}

/// Sorted subsampling draws, i.e. the empirical CDF `L_{n,b}` or `L'_{n,B}`.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalDistribution {
    values: Vec<f64>,
    /// Vertex count `B_i` of each replicate after isolated-vertex removal, in replicate order.
    pub replicate_sizes: Vec<usize>,
    /// Vertex count before isolated-vertex removal (p-sampling only).
    pub pre_deletion_sizes: Vec<usize>,
    /// Replicates where the statistic was undefined and recorded as 0.
    pub degenerate_count: usize,
}

impl EmpiricalDistribution {
    /// Builds a distribution from unsorted draws.
    pub fn from_values(mut values: Vec<f64>) -> Self {
        values.sort_by(f64::total_cmp);
        EmpiricalDistribution {
            values,
            replicate_sizes: Vec::new(),
            pre_deletion_sizes: Vec::new(),
            degenerate_count: 0,
        }
    }

    /// Draws in ascending order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `L(t)`: fraction of draws `<= t`.
    pub fn cdf(&self, t: f64) -> f64 {
        if self.values.is_empty() {
            return 0.0;
        }
        self.values.partition_point(|&v| v <= t) as f64 / self.values.len() as f64
    }

    /// `inf { t : L(t) >= level }`, the `k`-th order statistic for the
    /// smallest `k` with `k / N >= level`.
    pub fn quantile(&self, level: f64) -> Result<f64> {
        let n = self.values.len();
        if n == 0 {
            return Err(Error::InvalidArgument("quantile of an empty distribution".into()));
        }
        if !(level > 0.0 && level <= 1.0) {
            return Err(Error::InvalidArgument(format!("quantile level {level} must lie in (0, 1]")));
        }
        let nf = n as f64;
        let mut k = ((level * nf).ceil() as usize).clamp(1, n);
        while k > 1 && (k - 1) as f64 / nf >= level {
            k -= 1;
        }
        while k < n && (k as f64) / nf < level {
            k += 1;
        }
        Ok(self.values[k - 1])
    }
}

/// Uniformly random `b`-vertex induced subgraph, relabeled `0..b`.
pub fn vertex_subsample<R: Rng + ?Sized>(graph: &Graph, b: usize, rng: &mut R) -> Result<Graph> {
    SubsampleScheme::Vertex { b }.validate(graph.n())?;
    let mut picked = index::sample(rng, graph.n(), b).into_vec();
    picked.sort_unstable();
    Ok(graph.induced_subgraph(&picked))
}

/// Outcome of one p-sample.
#[derive(Clone, Debug, PartialEq)]
pub struct PSampleDraw {
    /// Induced subgraph with isolated vertices removed.
    pub graph: Graph,
    /// Number of vertices included before isolated vertices were removed.
    pub pre_deletion_size: usize,
}

/// p-sample: keep each vertex with probability `p`, take the induced
/// subgraph, drop isolated vertices, relabel.
pub fn p_subsample<R: Rng + ?Sized>(graph: &Graph, p: f64, rng: &mut R) -> Result<PSampleDraw> {
    SubsampleScheme::PSample { p }.validate(graph.n())?;
    let kept: Vec<usize> = (0..graph.n()).filter(|_| rng.random::<f64>() < p).collect();
    let induced = graph.induced_subgraph(&kept);
    let (graph, _) = induced.without_isolated();
    Ok(PSampleDraw {
        graph,
        pre_deletion_size: kept.len(),
    })
}

/// Subsample for one replicate; returns the subgraph and its pre-deletion size.
fn draw_subsample(graph: &Graph, scheme: SubsampleScheme, seed: u64, replicate: u64) -> Result<(Graph, usize)> {
    let mut rng = rng::stream(seed, &[tag::REPLICATE, replicate]);
    match scheme {
        SubsampleScheme::Vertex { b } => vertex_subsample(graph, b, &mut rng).map(|g| (g, b)),
        SubsampleScheme::PSample { p } => p_subsample(graph, p, &mut rng).map(|d| (d.graph, d.pre_deletion_size)),
    }
}

/// Replaces estimated-density normalization by the full graph's density.
fn freeze_normalization(graph: &Graph, specs: &[StatisticSpec]) -> Result<Vec<StatisticSpec>> {
    let mut rho_full = None;
    specs
        .iter()
        .map(|s| match s.normalization {
            Normalization::EstimatedRho => {
                let rho = match rho_full {
                    Some(r) => r,
                    None => {
                        let r = spectral::rho_hat(graph)?;
                        rho_full = Some(r);
                        r
                    }
                };
                if rho <= 0.0 {
                    return Err(Error::DegenerateInput("full graph has no edges".into()));
                }
                Ok(s.with_known_rho(rho))
            }
            Normalization::KnownRho { .. } => Ok(*s),
        })
        .collect()
}

/// Subsampling distribution of one statistic.
pub fn subsample_distribution(
    graph: &Graph,
    spec: &StatisticSpec,
    scheme: SubsampleScheme,
    replicates: usize,
    seed: u64,
) -> Result<EmpiricalDistribution> {
    subsample_distributions(graph, std::slice::from_ref(spec), scheme, replicates, seed)
        .map(|(mut d, _)| d.remove(0))
}

/// Subsampling distributions of several statistics computed from the same
/// subsamples. Also returns the full-graph values `theta_hat_n`.
pub fn subsample_distributions(
    graph: &Graph,
    specs: &[StatisticSpec],
    scheme: SubsampleScheme,
    replicates: usize,
    seed: u64,
) -> Result<(Vec<EmpiricalDistribution>, Vec<f64>)> {
    if replicates < MIN_REPLICATES {
        return Err(Error::InvalidArgument(format!(
            "at least {MIN_REPLICATES} replicates required, got {replicates}"
        )));
    }
    if specs.is_empty() {
        return Err(Error::InvalidArgument("no statistic requested".into()));
    }
    scheme.validate(graph.n())?;
    let full = spectral::statistic_values(graph, specs, Solver::Auto)?;
    let frozen = freeze_normalization(graph, specs)?;

    struct Replicate {
        draws: Vec<f64>,
        size: usize,
        pre_size: usize,
        degenerate: Option<String>,
    }

    let reps: Vec<Replicate> = (0..replicates as u64)
        .into_par_iter()
        .map(|i| -> Result<Replicate> {
            let (sub, pre_size) = draw_subsample(graph, scheme, seed, i)?;
            let size = sub.n();
            let tau = (size as f64).sqrt();
            let zero_draws = || full.iter().map(|t| tau * (0.0 - t)).collect();
            if size < 2 {
                return Ok(Replicate {
                    draws: zero_draws(),
                    size,
                    pre_size,
                    degenerate: Some(format!("subsample has {size} vertices")),
                });
            }
            match spectral::statistic_values(&sub, &frozen, Solver::Auto) {
                Ok(vals) => Ok(Replicate {
                    draws: vals.iter().zip(&full).map(|(v, t)| tau * (v - t)).collect(),
                    size,
                    pre_size,
                    degenerate: None,
                }),
                Err(Error::DegenerateInput(msg)) => Ok(Replicate {
                    draws: zero_draws(),
                    size,
                    pre_size,
                    degenerate: Some(msg),
                }),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;

    let degenerate_count = reps.iter().filter(|r| r.degenerate.is_some()).count();
    if degenerate_count as f64 > MAX_DEGENERATE_FRACTION * replicates as f64 {
        let reason = reps.iter().find_map(|r| r.degenerate.clone()).unwrap_or_default();
        return Err(Error::DegenerateReplicates {
            degenerate: degenerate_count,
            total: replicates,
            reason,
        });
    }
    let replicate_sizes: Vec<usize> = reps.iter().map(|r| r.size).collect();
    let pre_deletion_sizes: Vec<usize> = match scheme {
        SubsampleScheme::PSample { .. } => reps.iter().map(|r| r.pre_size).collect(),
        SubsampleScheme::Vertex { .. } => Vec::new(),
    };
    let dists = (0..specs.len())
        .map(|s| {
            let mut d = EmpiricalDistribution::from_values(reps.iter().map(|r| r.draws[s]).collect());
            d.replicate_sizes = replicate_sizes.clone();
            d.pre_deletion_sizes = pre_deletion_sizes.clone();
            d.degenerate_count = degenerate_count;
            d
        })
        .collect();
    Ok((dists, full))
}

/// How the subsampling quantiles are turned into an interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CiConstruction {
    /// `[theta - q(1 - a/2) / sqrt(n), theta - q(a/2) / sqrt(n)]`
    EqualTailed,
    /// `[theta - q(1 - a) / sqrt(n), +inf)`
    OneSidedLower,
}

impl CiConstruction {
    pub fn name(&self) -> &'static str {
        match self {
            CiConstruction::EqualTailed => "equal_tailed_subsampling_inversion",
            CiConstruction::OneSidedLower => "one_sided_lower_subsampling_bound",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConfidenceInterval {
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
    /// `theta_hat_n` on the full graph.
    pub statistic_value: f64,
    pub statistic: StatisticSpec,
    /// Density actually used on subsamples (the full-graph value when estimated).
    pub rho_used: Option<f64>,
    pub scheme: SubsampleScheme,
    pub replicates: usize,
    pub seed: u64,
    pub n: usize,
    pub construction: CiConstruction,
    pub degenerate_replicates: usize,
}

impl ConfidenceInterval {
    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Interval bounds from a subsampling distribution.
pub fn invert(
    dist: &EmpiricalDistribution,
    theta_hat: f64,
    n: usize,
    level: f64,
    construction: CiConstruction,
) -> Result<(f64, f64)> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidArgument(format!("confidence level {level} must lie in (0, 1)")));
    }
    let alpha = 1.0 - level;
    let tau_n = (n as f64).sqrt();
    match construction {
        CiConstruction::EqualTailed => {
            let q_lo = dist.quantile(alpha / 2.0)?;
            let q_hi = dist.quantile(1.0 - alpha / 2.0)?;
            Ok((theta_hat - q_hi / tau_n, theta_hat - q_lo / tau_n))
        }
        CiConstruction::OneSidedLower => {
            let c = dist.quantile(1.0 - alpha)?;
            Ok((theta_hat - c / tau_n, f64::INFINITY))
        }
    }
}

/// Equal-tailed subsampling confidence interval.
pub fn confidence_interval(
    graph: &Graph,
    spec: &StatisticSpec,
    scheme: SubsampleScheme,
    replicates: usize,
    level: f64,
    seed: u64,
) -> Result<ConfidenceInterval> {
    confidence_intervals(graph, std::slice::from_ref(spec), scheme, replicates, level, seed, CiConstruction::EqualTailed)
        .map(|mut v| v.remove(0))
}

/// Confidence intervals for several statistics from shared subsamples.
pub fn confidence_intervals(
    graph: &Graph,
    specs: &[StatisticSpec],
    scheme: SubsampleScheme,
    replicates: usize,
    level: f64,
    seed: u64,
    construction: CiConstruction,
) -> Result<Vec<ConfidenceInterval>> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidArgument(format!("confidence level {level} must lie in (0, 1)")));
    }
    let (dists, full) = subsample_distributions(graph, specs, scheme, replicates, seed)?;
    let frozen = freeze_normalization(graph, specs)?;
    specs
        .iter()
        .zip(frozen)
        .zip(dists.iter().zip(full))
        .map(|((spec, frozen), (dist, theta))| {
            let (lower, upper) = invert(dist, theta, graph.n(), level, construction)?;
            let rho_used = match frozen.normalization {
                Normalization::KnownRho { rho } => Some(rho),
                Normalization::EstimatedRho => None,
            };
            Ok(ConfidenceInterval {
                lower,
                upper,
                level,
                statistic_value: theta,
                statistic: *spec,
                rho_used,
                scheme,
                replicates,
                seed,
                n: graph.n(),
                construction,
                degenerate_replicates: dist.degenerate_count,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Functional;

    #[test]
    fn quantile_examples() {
        let d = EmpiricalDistribution::from_values(vec![4.0, 2.0, 3.0, 1.0]);
        assert_eq!(d.quantile(0.5).unwrap(), 2.0);
        assert_eq!(d.quantile(1.0).unwrap(), 4.0);
        assert_eq!(d.quantile(0.25).unwrap(), 1.0);
        assert_eq!(d.quantile(0.2500001).unwrap(), 2.0);
        assert!(EmpiricalDistribution::from_values(vec![]).quantile(0.5).is_err());
        assert!(d.quantile(0.0).is_err());
    }

    #[test]
    fn quantile_handles_inexact_products() {
        // 0.975 * 200 = 195.00000000000003 in floating point
        let d = EmpiricalDistribution::from_values((1..=200).map(f64::from).collect());
        assert_eq!(d.quantile(0.975).unwrap(), 195.0);
    }

    #[test]
    fn vertex_subsample_of_complete_graph() {
        let mut rng = rng::stream(1, &[]);
        let g = vertex_subsample(&Graph::complete(10), 4, &mut rng).unwrap();
        assert_eq!(g, Graph::complete(4));
        assert!(vertex_subsample(&Graph::complete(10), 1, &mut rng).is_err());
        assert!(vertex_subsample(&Graph::complete(10), 11, &mut rng).is_err());
    }

    #[test]
    fn full_size_vertex_subsample_preserves_edges() {
        let g = Graph::path(7);
        let mut rng = rng::stream(5, &[]);
        let h = vertex_subsample(&g, 7, &mut rng).unwrap();
        assert_eq!(h.edge_count(), g.edge_count());
    }

    #[test]
    fn p_subsample_of_empty_graph_is_empty() {
        let mut rng = rng::stream(2, &[]);
        for _ in 0..20 {
            let d = p_subsample(&Graph::empty(20), 0.5, &mut rng).unwrap();
            assert_eq!(d.graph.n(), 0);
        }
        assert!(p_subsample(&Graph::empty(20), 1.0, &mut rng).is_err());
    }

    #[test]
    fn constant_statistic_gives_zero_width_interval() {
        // every induced subgraph of K_n is complete: triangle density is 1
        let g = Graph::complete(30);
        let spec = StatisticSpec::new(
            Functional::Count {
                motif: crate::counts::Motif::Triangle,
            },
            Normalization::EstimatedRho,
        );
        let ci = confidence_interval(&g, &spec, SubsampleScheme::Vertex { b: 10 }, 60, 0.95, 3).unwrap();
        assert_eq!(ci.lower, 1.0);
        assert_eq!(ci.upper, 1.0);
        assert_eq!(ci.statistic_value, 1.0);
    }

    #[test]
    fn too_few_replicates_rejected() {
        let g = Graph::complete(10);
        let spec = StatisticSpec::eigenvalue(1, Normalization::EstimatedRho);
        assert!(subsample_distribution(&g, &spec, SubsampleScheme::Vertex { b: 5 }, 10, 0).is_err());
    }

    #[test]
    fn degenerate_replicates_fail_loudly() {
        // a sparse graph whose p-samples are usually empty
        let g = Graph::from_edges(40, &[(0, 1)]).unwrap();
        let spec = StatisticSpec::eigenvalue(1, Normalization::EstimatedRho);
        let err = subsample_distribution(&g, &spec, SubsampleScheme::PSample { p: 0.3 }, 100, 0).unwrap_err();
        assert!(matches!(err, Error::DegenerateReplicates { .. }));
    }
}
