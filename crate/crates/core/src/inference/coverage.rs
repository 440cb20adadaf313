use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::counts::Motif;
use crate::error::{Error, Result};
use crate::models::{GraphonModel, Kernel, Sparsity};
use crate::rng::{self, tag};
use crate::spectral::{Functional, Normalization, StatisticSpec};
use crate::subsample::{confidence_intervals, CiConstruction, SubsampleScheme};

/// A subsampling scheme whose size may scale with `n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SchemeSpec {
    /// Vertex subsampling with `b = round(fraction * n)`.
    VertexFraction { fraction: f64 },
    /// Vertex subsampling with a fixed `b`.
    Vertex { b: usize },
    PSample { p: f64 },
}

impl SchemeSpec {
    pub fn resolve(&self, n: usize) -> SubsampleScheme {
        match *self {
            SchemeSpec::VertexFraction { fraction } => SubsampleScheme::Vertex {
                b: (fraction * n as f64).round() as usize,
            },
            SchemeSpec::Vertex { b } => SubsampleScheme::Vertex { b },
            SchemeSpec::PSample { p } => SubsampleScheme::PSample { p },
        }
    }

    /// Seed counters identifying the scheme by value.
    fn key(&self) -> [u64; 2] {
        match *self {
            SchemeSpec::VertexFraction { fraction } => [1, fraction.to_bits()],
            SchemeSpec::Vertex { b } => [2, b as u64],
            SchemeSpec::PSample { p } => [3, p.to_bits()],
        }
    }

    pub fn label(&self) -> String {
        match *self {
            SchemeSpec::VertexFraction { fraction } => format!("vertex(frac={fraction})"),
            SchemeSpec::Vertex { b } => format!("vertex(b={b})"),
            SchemeSpec::PSample { p } => format!("psample(p={p})"),
        }
    }
}

/// Density used to normalize statistics in a coverage run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RhoMode {
    /// The model's true `rho_n = nu_n * int int h`.
    Known,
    #[default]
    Estimated,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoverageConfig {
    /// Kernel of the data-generating model; its sparsity is taken from `sparsities`.
    pub model: GraphonModel,
    pub n_list: Vec<usize>,
    pub sparsities: Vec<Sparsity>,
    pub schemes: Vec<SchemeSpec>,
    pub functionals: Vec<Functional>,
    pub rho_mode: RhoMode,
    pub trials: usize,
    pub replicates: usize,
    pub level: f64,
    pub seed: u64,
}

impl CoverageConfig {
    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        let empty = |what: &str| Error::InvalidArgument(format!("coverage grid has no {what}"));
        if self.n_list.is_empty() {
            return Err(empty("sizes"));
        }
        if self.sparsities.is_empty() {
            return Err(empty("sparsity settings"));
        }
        if self.schemes.is_empty() {
            return Err(empty("schemes"));
        }
        if self.functionals.is_empty() {
            return Err(empty("statistics"));
        }
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be >= 1".into()));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(Error::InvalidArgument(format!("level {} must lie in (0, 1)", self.level)));
        }
        for &sparsity in &self.sparsities {
            GraphonModel {
                kernel: self.model.kernel.clone(),
                sparsity,
            }
            .validate()?;
        }
        for &n in &self.n_list {
            for s in &self.schemes {
                s.resolve(n).validate(n)?;
            }
        }
        for &f in &self.functionals {
            StatisticSpec::new(f, Normalization::EstimatedRho).validate()?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoverageCell {
    pub n: usize,
    pub sparsity: Sparsity,
    pub scheme: SchemeSpec,
    pub statistic: StatisticSpec,
    /// Population value, or why it is unavailable.
    pub parameter: std::result::Result<f64, String>,
    /// Fraction of successful trials whose interval contains the parameter.
    pub coverage: Option<f64>,
    pub std_error: Option<f64>,
    pub trials: usize,
    /// Trials whose interval could not be built.
    pub failed_trials: usize,
    pub mean_width: Option<f64>,
    pub replicates: usize,
    pub level: f64,
    /// Seed of the graph for trial `t` is `derive(graph_seed, [t])`.
    pub graph_seed: u64,
    /// Subsample seed of trial `t` is `derive(subsample_seed, [t])`.
    pub subsample_seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoverageReport {
    pub cells: Vec<CoverageCell>,
    pub seed: u64,
    pub construction: CiConstruction,
    pub rho_mode: RhoMode,
}

/// Sum over block labelings of `prod pi * prod B` across the motif's edges.
fn block_motif_density(probs: &[Vec<f64>], weights: &[f64], motif: Motif) -> f64 {
    let k = weights.len();
    let p = motif.vertices();
    let edges = motif.edge_list();
    let mut z = vec![0usize; p];
    let mut total = 0.0;
    loop {
        let mut term: f64 = z.iter().map(|&c| weights[c]).product();
        for &(u, v) in &edges {
            term *= probs[z[u]][z[v]];
        }
        total += term;
        let mut i = 0;
        loop {
            if i == p {
                return total;
            }
            z[i] += 1;
            if z[i] < k {
                break;
            }
            z[i] = 0;
            i += 1;
        }
    }
}

/// Limit of the statistic under `model`: eigenvalue functionals of the
/// normalized kernel, or the normalized injective homomorphism density for
/// counts. The limit does not depend on the density mode.
pub fn population_parameter(model: &GraphonModel, functional: Functional) -> Result<f64> {
    let unavailable = |why: &str| Error::UnavailableParameter(why.to_string());
    if let Functional::Count { motif } = functional {
        motif.validate()?;
        return match &model.kernel {
            Kernel::Sbm { probs, weights } => {
                let mean = model.dense_kernel_mean();
                if mean <= 0.0 {
                    return Err(unavailable("block model has zero edge density"));
                }
                Ok(block_motif_density(probs, weights, motif) / mean.powi(motif.edges() as i32))
            }
            _ => Err(unavailable("count limits are only available for block models")),
        };
    }
    let (k_pos, k_neg) = match functional {
        Functional::Eigenvalue { r } if r > 0 => (r as usize, 0),
        Functional::Eigenvalue { r } => (0, r.unsigned_abs() as usize),
        Functional::SpectralGap => (2, 0),
        Functional::EigRatio { k_prime } | Functional::Trace { k_prime, .. } => (k_prime, 0),
        Functional::Count { .. } => unreachable!(),
    };
    let spectrum = model.population_eigenvalues(k_pos, k_neg)?;
    // an exact spectrum lists every nonzero eigenvalue, so missing entries are zero
    let at = |r: i32| -> Result<f64> {
        spectrum.get(r).or(spectrum.exact.then_some(0.0)).ok_or_else(|| {
            unavailable(&format!("population eigenvalue {r} could not be resolved"))
        })
    };
    match functional {
        Functional::Eigenvalue { r } => at(r),
        Functional::SpectralGap => Ok(at(1)? - at(2)?),
        Functional::EigRatio { k_prime } => {
            let d = at(k_prime as i32)?;
            if d == 0.0 {
                return Err(unavailable(&format!("population eigenvalue {k_prime} is zero")));
            }
            Ok(at(1)? / d)
        }
        Functional::Trace { p, k_prime } => (1..=k_prime as i32).map(|r| at(r).map(|l| l.powi(p as i32))).sum(),
        Functional::Count { .. } => unreachable!(),
    }
}

struct TrialOutcome {
    // [scheme][functional] -> (contains, width)
    results: Vec<Vec<Option<(bool, f64)>>>,
}

/// Empirical coverage of equal-tailed subsampling intervals on a grid of
/// sizes, sparsity settings, schemes and statistics.
///
/// Seeds are keyed on cell contents, not grid positions: a trial's graph
/// depends only on `(seed, n, sparsity, trial)`, so all schemes and
/// statistics at a grid point see the same graphs, and subsamples depend on
/// `(seed, n, sparsity, scheme, trial)`. Any cell can be rerun alone.
pub fn coverage_experiment(config: &CoverageConfig) -> Result<CoverageReport> {
    config.validate()?;
    let mut cells = Vec::new();
    for &n in &config.n_list {
        for &sparsity in &config.sparsities {
            let model = GraphonModel {
                kernel: config.model.kernel.clone(),
                sparsity,
            };
            let params: Vec<std::result::Result<f64, String>> = config
                .functionals
                .iter()
                .map(|&f| population_parameter(&model, f).map_err(|e| e.to_string()))
                .collect();
            let specs: Vec<StatisticSpec> = config
                .functionals
                .iter()
                .map(|&f| {
                    let normalization = match config.rho_mode {
                        RhoMode::Known => Normalization::KnownRho {
                            rho: sparsity.nu(n) * model.dense_kernel_mean(),
                        },
                        RhoMode::Estimated => Normalization::EstimatedRho,
                    };
                    StatisticSpec::new(f, normalization)
                })
                .collect();
            let sparsity_key = match sparsity {
                Sparsity::Exponent { gamma } => [1, gamma.to_bits()],
                Sparsity::Constant { nu } => [2, nu.to_bits()],
            };
            let graph_seed = rng::derive(config.seed, &[tag::TRIAL, n as u64, sparsity_key[0], sparsity_key[1]]);
            let subsample_seeds: Vec<u64> = config
                .schemes
                .iter()
                .map(|s| {
                    let k = s.key();
                    rng::derive(config.seed, &[tag::CELL, n as u64, sparsity_key[0], sparsity_key[1], k[0], k[1]])
                })
                .collect();
            let wanted: Vec<usize> = (0..specs.len()).filter(|&i| params[i].is_ok()).collect();
            let wanted_specs: Vec<StatisticSpec> = wanted.iter().map(|&i| specs[i]).collect();

            let outcomes: Vec<TrialOutcome> = (0..config.trials as u64)
                .into_par_iter()
                .map(|t| -> Result<TrialOutcome> {
                    let mut results = vec![vec![None; specs.len()]; config.schemes.len()];
                    if wanted.is_empty() {
                        return Ok(TrialOutcome { results });
                    }
                    let graph = model.sample_graph(n, rng::derive(graph_seed, &[t]))?;
                    for (ci, scheme) in config.schemes.iter().enumerate() {
                        let cis = confidence_intervals(
                            &graph,
                            &wanted_specs,
                            scheme.resolve(n),
                            config.replicates,
                            config.level,
                            rng::derive(subsample_seeds[ci], &[t]),
                            CiConstruction::EqualTailed,
                        );
                        match cis {
                            Ok(cis) => {
                                for (ci_val, &fi) in cis.iter().zip(&wanted) {
                                    let theta = *params[fi].as_ref().expect("filtered");
                                    results[ci][fi] = Some((ci_val.contains(theta), ci_val.width()));
                                }
                            }
                            Err(Error::DegenerateInput(_) | Error::DegenerateReplicates { .. }) => {}
                            Err(e) => return Err(e),
                        }
                    }
                    Ok(TrialOutcome { results })
                })
                .collect::<Result<_>>()?;

            for (ci, scheme) in config.schemes.iter().enumerate() {
                for (fi, spec) in specs.iter().enumerate() {
                    let ok: Vec<(bool, f64)> = outcomes.iter().filter_map(|o| o.results[ci][fi]).collect();
                    let (coverage, std_error, mean_width) = if params[fi].is_ok() && !ok.is_empty() {
                        let m = ok.len() as f64;
                        let c = ok.iter().filter(|r| r.0).count() as f64 / m;
                        let w = ok.iter().map(|r| r.1).sum::<f64>() / m;
                        (Some(c), Some((c * (1.0 - c) / m).sqrt()), Some(w))
                    } else {
                        (None, None, None)
                    };
                    cells.push(CoverageCell {
                        n,
                        sparsity,
                        scheme: *scheme,
                        statistic: *spec,
                        parameter: params[fi].clone(),
                        coverage,
                        std_error,
                        trials: config.trials,
                        failed_trials: if params[fi].is_ok() { config.trials - ok.len() } else { 0 },
                        mean_width,
                        replicates: config.replicates,
                        level: config.level,
                        graph_seed,
                        subsample_seed: subsample_seeds[ci],
                    });
                }
            }
        }
    }
    Ok(CoverageReport {
        cells,
        seed: config.seed,
        construction: CiConstruction::EqualTailed,
        rho_mode: config.rho_mode,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_block_parameters() {
        let m = GraphonModel::three_block(Sparsity::Constant { nu: 1.0 });
        let l1 = population_parameter(&m, Functional::Eigenvalue { r: 1 }).unwrap();
        let lm1 = population_parameter(&m, Functional::Eigenvalue { r: -1 }).unwrap();
        assert!((l1 - 1.0355).abs() < 1e-3);
        assert!((lm1 + 0.2663).abs() < 1e-3);
        let edge = population_parameter(&m, Functional::Count { motif: Motif::Edge }).unwrap();
        assert!((edge - 1.0).abs() < 1e-12);
        let gap = population_parameter(&m, Functional::SpectralGap).unwrap();
        let l2 = population_parameter(&m, Functional::Eigenvalue { r: 2 }).unwrap();
        assert!((gap - (l1 - l2)).abs() < 1e-12);
    }

    #[test]
    fn triangle_density_matches_trace() {
        // injective triangle density of a block model equals sum of cubed eigenvalues of w
        let m = GraphonModel::three_block(Sparsity::Constant { nu: 1.0 });
        let spec = m.population_eigenvalues(3, 3).unwrap();
        let cubes: f64 = spec.positive.iter().chain(&spec.negative).map(|l| l.powi(3)).sum();
        let tri = population_parameter(&m, Functional::Count { motif: Motif::Triangle }).unwrap();
        assert!((tri - cubes).abs() < 1e-10, "{tri} vs {cubes}");
    }

    #[test]
    fn latent_counts_unavailable() {
        let m = GraphonModel::gaussian_latent_space(Sparsity::Constant { nu: 1.0 });
        assert!(matches!(
            population_parameter(&m, Functional::Count { motif: Motif::Triangle }),
            Err(Error::UnavailableParameter(_))
        ));
    }

    #[test]
    fn constant_statistic_has_full_coverage() {
        let model = GraphonModel::sbm(vec![vec![1.0]], vec![1.0], Sparsity::Constant { nu: 1.0 }).unwrap();
        let config = CoverageConfig {
            model,
            n_list: vec![40],
            sparsities: vec![Sparsity::Constant { nu: 1.0 }],
            schemes: vec![SchemeSpec::VertexFraction { fraction: 0.5 }],
            functionals: vec![Functional::Count { motif: Motif::Triangle }, Functional::Eigenvalue { r: 1 }],
            rho_mode: RhoMode::Estimated,
            trials: 1,
            replicates: 50,
            level: 0.95,
            seed: 5,
        };
        let report = coverage_experiment(&config).unwrap();
        assert_eq!(report.cells.len(), 2);
        // triangle density is exactly 1; lambda_1 of K_n / n is (n - 1) / n, below the limit
        assert_eq!(report.cells[0].coverage, Some(1.0));
        assert_eq!(report.cells[0].std_error, Some(0.0));
    }

    #[test]
    fn unavailable_cells_do_not_abort() {
        let config = CoverageConfig {
            model: GraphonModel::gaussian_latent_space(Sparsity::Constant { nu: 1.0 }),
            n_list: vec![60],
            sparsities: vec![Sparsity::Constant { nu: 1.0 }],
            schemes: vec![SchemeSpec::Vertex { b: 30 }],
            functionals: vec![Functional::Count { motif: Motif::Edge }],
            rho_mode: RhoMode::Estimated,
            trials: 2,
            replicates: 50,
            level: 0.9,
            seed: 1,
        };
        let report = coverage_experiment(&config).unwrap();
        assert!(report.cells[0].parameter.is_err());
        assert_eq!(report.cells[0].coverage, None);
    }
}
