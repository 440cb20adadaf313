//! Sparse graphon models and random graph generation.
//!
//! A model pairs a dense kernel `h` with a sparsity schedule `nu_n`; edges are
//! drawn independently with probability `min(nu_n * h(xi_i, xi_j), 1)` given
//! i.i.d. latent positions `xi_i`. Latents are never stored on the graph.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};
use statrs::function::erf::erf;

use crate::eigen::{self, LanczosOptions};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::{self, tag};

/// Nyström grid size for kernels without a closed-form spectrum.
pub const NYSTROM_POINTS: usize = 2000;

/// Distribution of the latent positions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LatentLaw {
    Uniform01,
    StandardNormal,
}

/// Closed-form kernel families of latent distances.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "family")]
pub enum KernelFamily {
    /// `h(u, v) = exp(-beta * (u - v)^2)`
    GaussianRbf { beta: f64 },
}

/// Orthonormal bases on `[0, 1]` for finite-rank kernels.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    /// `phi_0 = 1`, `phi_r(u) = sqrt(2) cos(pi r u)`.
    Cosine,
}

impl Basis {
    fn eval(self, r: usize, u: f64) -> f64 {
        match self {
            Basis::Cosine if r == 0 => 1.0,
            Basis::Cosine => std::f64::consts::SQRT_2 * (std::f64::consts::PI * r as f64 * u).cos(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Kernel {
    /// Stochastic block model: symmetric block probabilities and block weights.
    Sbm { probs: Vec<Vec<f64>>, weights: Vec<f64> },
    /// Kernel of the latent positions under the given latent law.
    Latent { family: KernelFamily, law: LatentLaw },
    /// `h(u, v) = sum_r eigenvalues[r] * phi_r(u) * phi_r(v)` with uniform latents.
    LowRank { eigenvalues: Vec<f64>, basis: Basis },
}

/// How the edge-probability scale `nu_n` depends on `n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Sparsity {
    /// `nu_n = n^(-gamma)`
    Exponent { gamma: f64 },
    /// `nu_n = nu`
    Constant { nu: f64 },
}

impl Sparsity {
    pub fn nu(&self, n: usize) -> f64 {
        match *self {
            Sparsity::Exponent { gamma } => (n as f64).powf(-gamma),
            Sparsity::Constant { nu } => nu,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphonModel {
    pub kernel: Kernel,
    pub sparsity: Sparsity,
}

/// Counters collected while sampling a graph.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GenerationReport {
    pub censored_pairs: u64,
    pub total_pairs: u64,
}

impl GenerationReport {
    pub fn censored_fraction(&self) -> f64 {
        if self.total_pairs == 0 {
            0.0
        } else {
            self.censored_pairs as f64 / self.total_pairs as f64
        }
    }

    /// True when more than 1% of vertex pairs hit the `min(., 1)` cap.
    pub fn censoring_warning(&self) -> bool {
        self.censored_fraction() > 0.01
    }
}

/// Nonzero eigenvalues of the integral operator of the normalized kernel `w`.
#[derive(Clone, Debug, PartialEq)]
pub struct PopulationSpectrum {
    /// Largest positive eigenvalues, descending.
    pub positive: Vec<f64>,
    /// Most negative eigenvalues, ascending.
    pub negative: Vec<f64>,
    /// False when obtained from a Nyström discretization.
    pub exact: bool,
}

impl PopulationSpectrum {
    /// Eigenvalue at a signed position: `1` is the largest, `-1` the most negative.
    pub fn get(&self, r: i32) -> Option<f64> {
        match r {
            r if r > 0 => self.positive.get(r as usize - 1).copied(),
            r if r < 0 => self.negative.get((-r) as usize - 1).copied(),
            _ => None,
        }
    }
}

/// Monte Carlo estimate with its standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
}

impl GraphonModel {
    pub fn new(kernel: Kernel, sparsity: Sparsity) -> Result<Self> {
        let m = GraphonModel { kernel, sparsity };
        m.validate()?;
        Ok(m)
    }

    /// Block model from row-major block probabilities and weights.
    pub fn sbm(probs: Vec<Vec<f64>>, weights: Vec<f64>, sparsity: Sparsity) -> Result<Self> {
        Self::new(Kernel::Sbm { probs, weights }, sparsity)
    }

    /// The three-block model with one positive and one negative eigenvalue.
    pub fn three_block(sparsity: Sparsity) -> Self {
        let probs = vec![
            vec![0.25, 0.5, 0.25],
            vec![0.5, 0.25, 0.25],
            vec![0.25, 0.25, 1.0 / 6.0],
        ];
        Self::sbm(probs, vec![0.3, 0.3, 0.4], sparsity).expect("three-block model is valid")
    }

    /// Gaussian latent space model: `h(u, v) = exp(-25 (u - v)^2)`, `xi ~ N(0, 1)`.
    pub fn gaussian_latent_space(sparsity: Sparsity) -> Self {
        Self::new(
            Kernel::Latent {
                family: KernelFamily::GaussianRbf { beta: 25.0 },
                law: LatentLaw::StandardNormal,
            },
            sparsity,
        )
        .expect("gaussian latent space model is valid")
    }

    pub fn validate(&self) -> Result<()> {
        match self.sparsity {
            Sparsity::Exponent { gamma } if !(gamma >= 0.0 && gamma.is_finite()) => {
                return Err(Error::InvalidModel(format!("sparsity exponent {gamma} must be >= 0")))
            }
            Sparsity::Constant { nu } if !(nu > 0.0 && nu <= 1.0) => {
                return Err(Error::InvalidModel(format!("constant sparsity {nu} must lie in (0, 1]")))
            }
            _ => {}
        }
        match &self.kernel {
            Kernel::Sbm { probs, weights } => {
                let k = weights.len();
                if k == 0 {
                    return Err(Error::InvalidModel("block model needs at least one block".into()));
                }
                if probs.len() != k || probs.iter().any(|row| row.len() != k) {
                    return Err(Error::InvalidModel(format!("block matrix must be {k}x{k}")));
                }
                for i in 0..k {
                    for j in 0..k {
                        let p = probs[i][j];
                        if !(0.0..=1.0).contains(&p) {
                            return Err(Error::InvalidModel(format!("block probability {p} outside [0, 1]")));
                        }
                        if p != probs[j][i] {
                            return Err(Error::InvalidModel("block matrix is not symmetric".into()));
                        }
                    }
                }
                if weights.iter().any(|&w| !(w >= 0.0)) {
                    return Err(Error::InvalidModel("block weights must be non-negative".into()));
                }
                let total: f64 = weights.iter().sum();
                if (total - 1.0).abs() > 1e-12 {
                    return Err(Error::InvalidModel(format!("block weights sum to {total}, not 1")));
                }
            }
            Kernel::Latent { family, .. } => match *family {
                KernelFamily::GaussianRbf { beta } if !(beta > 0.0 && beta.is_finite()) => {
                    return Err(Error::InvalidModel(format!("bandwidth {beta} must be positive")))
                }
                _ => {}
            },
            Kernel::LowRank { eigenvalues, .. } => {
                let lead = eigenvalues.first().copied().unwrap_or(0.0);
                let rest: f64 = eigenvalues.iter().skip(1).map(|l| 2.0 * l.abs()).sum();
                if !(lead > 0.0) || lead < rest {
                    return Err(Error::InvalidModel(
                        "finite-rank kernel needs eigenvalues[0] >= 2 * sum |eigenvalues[r>0]| > 0 to stay non-negative"
                            .into(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn latent_law(&self) -> LatentLaw {
        match &self.kernel {
            Kernel::Latent { law, .. } => *law,
            _ => LatentLaw::Uniform01,
        }
    }

    /// Block index of a uniform latent under cumulative block weights.
    fn block_of(weights: &[f64], u: f64) -> usize {
        let mut acc = 0.0;
        for (b, w) in weights.iter().enumerate() {
            acc += w;
            if u < acc {
                return b;
            }
        }
        // u sits in the rounding gap at the top of [0, 1)
        weights.iter().rposition(|&w| w > 0.0).unwrap_or(0)
    }

    /// Dense kernel `h(u, v)` before sparsification.
    pub fn kernel_value(&self, u: f64, v: f64) -> f64 {
        match &self.kernel {
            Kernel::Sbm { probs, weights } => probs[Self::block_of(weights, u)][Self::block_of(weights, v)],
            Kernel::Latent {
                family: KernelFamily::GaussianRbf { beta },
                ..
            } => (-beta * (u - v) * (u - v)).exp(),
            Kernel::LowRank { eigenvalues, basis } => eigenvalues
                .iter()
                .enumerate()
                .map(|(r, l)| l * basis.eval(r, u) * basis.eval(r, v))
                .sum::<f64>()
                .max(0.0),
        }
    }

    /// Edge probability `min(nu * h(u, v), 1)`.
    pub fn h_value(&self, u: f64, v: f64, nu: f64) -> f64 {
        (nu * self.kernel_value(u, v)).clamp(0.0, 1.0)
    }

    /// Latent position of vertex `i` for a given seed.
    pub fn draw_latent(&self, seed: u64, i: u64) -> f64 {
        match self.latent_law() {
            LatentLaw::Uniform01 => rng::uniform(seed, &[tag::LATENT, i]),
            LatentLaw::StandardNormal => rng::standard_normal(seed, &[tag::LATENT, i]),
        }
    }

    /// Samples an `n`-vertex graph; bit-identical for identical `(model, n, seed)`.
    pub fn sample_graph(&self, n: usize, seed: u64) -> Result<Graph> {
        self.sample_graph_with_report(n, seed).map(|(g, _)| g)
    }

    pub fn sample_graph_with_report(&self, n: usize, seed: u64) -> Result<(Graph, GenerationReport)> {
        self.validate()?;
        if n == 0 {
            return Err(Error::InvalidArgument("graph needs at least one vertex".into()));
        }
        if n > u32::MAX as usize {
            return Err(Error::InvalidArgument(format!("vertex count {n} exceeds u32 range")));
        }
        let nu = self.sparsity.nu(n);
        let latents: Vec<f64> = (0..n as u64).map(|i| self.draw_latent(seed, i)).collect();

        // For block models the probability depends only on the block pair.
        let block_probs = match &self.kernel {
            Kernel::Sbm { probs, weights } => {
                let blocks: Vec<usize> = latents.iter().map(|&u| Self::block_of(weights, u)).collect();
                let scaled: Vec<Vec<(f64, bool)>> = probs
                    .iter()
                    .map(|row| row.iter().map(|&p| ((nu * p).min(1.0), nu * p > 1.0)).collect())
                    .collect();
                Some((blocks, scaled))
            }
            _ => None,
        };

        let rows: Vec<(Vec<u32>, u64)> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut row = Vec::new();
                let mut censored = 0u64;
                for j in i + 1..n {
                    let (p, cut) = match &block_probs {
                        Some((blocks, scaled)) => scaled[blocks[i]][blocks[j]],
                        None => {
                            let raw = nu * self.kernel_value(latents[i], latents[j]);
                            (raw.clamp(0.0, 1.0), raw > 1.0)
                        }
                    };
                    censored += cut as u64;
                    if p > 0.0 && rng::uniform(seed, &[tag::EDGE, i as u64, j as u64]) < p {
                        row.push(j as u32);
                    }
                }
                (row, censored)
            })
            .collect();

        let censored_pairs = rows.iter().map(|r| r.1).sum();
        let total_pairs = (n as u64) * (n as u64 - 1) / 2;
        let graph = Graph::from_upper_lists(rows.into_iter().map(|r| r.0).collect());
        Ok((
            graph,
            GenerationReport {
                censored_pairs,
                total_pairs,
            },
        ))
    }

    /// `int int h` under the latent law, in closed form.
    pub fn dense_kernel_mean(&self) -> f64 {
        match &self.kernel {
            Kernel::Sbm { probs, weights } => {
                let mut s = 0.0;
                for (i, wi) in weights.iter().enumerate() {
                    for (j, wj) in weights.iter().enumerate() {
                        s += wi * probs[i][j] * wj;
                    }
                }
                s
            }
            Kernel::Latent {
                family: KernelFamily::GaussianRbf { beta },
                law,
            } => match law {
                // xi - xi' ~ N(0, 2): E exp(-beta X^2) = (1 + 4 beta)^(-1/2)
                LatentLaw::StandardNormal => 1.0 / (1.0 + 4.0 * beta).sqrt(),
                // 2 int_0^1 (1 - t) exp(-beta t^2) dt
                LatentLaw::Uniform01 => {
                    let b = *beta;
                    (std::f64::consts::PI / b).sqrt() * erf(b.sqrt()) - (1.0 - (-b).exp()) / b
                }
            },
            Kernel::LowRank { eigenvalues, .. } => eigenvalues[0],
        }
    }

    /// Monte Carlo estimate of `rho_n = P(A_ij = 1)` including censoring.
    pub fn rho_population(&self, n: usize, mc_pairs: usize, seed: u64) -> Result<McEstimate> {
        if mc_pairs == 0 {
            return Err(Error::InvalidArgument("mc_pairs must be >= 1".into()));
        }
        let nu = self.sparsity.nu(n);
        let draw = |i: u64, side: u64| match self.latent_law() {
            LatentLaw::Uniform01 => rng::uniform(seed, &[tag::MONTE_CARLO, i, side]),
            LatentLaw::StandardNormal => rng::standard_normal(seed, &[tag::MONTE_CARLO, i, side]),
        };
        let (sum, sum_sq) = (0..mc_pairs as u64)
            .into_par_iter()
            .map(|i| {
                let h = self.h_value(draw(i, 0), draw(i, 1), nu);
                (h, h * h)
            })
            .reduce(|| (0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
        let m = mc_pairs as f64;
        let mean = sum / m;
        let var = (sum_sq / m - mean * mean).max(0.0);
        Ok(McEstimate {
            value: mean,
            std_error: (var / m).sqrt(),
        })
    }

    /// Nonzero eigenvalues of `T_w` for `w = h / int int h`: up to `k_pos`
    /// positive and `k_neg` negative ones. Block models and finite-rank kernels
    /// are exact; other kernels use a Nyström grid of quantile-spaced latents.
    pub fn population_eigenvalues(&self, k_pos: usize, k_neg: usize) -> Result<PopulationSpectrum> {
        self.validate()?;
        let (all, exact) = match &self.kernel {
            Kernel::Sbm { probs, weights } => {
                let k = weights.len();
                let mean = self.dense_kernel_mean();
                if mean <= 0.0 {
                    return Ok(PopulationSpectrum {
                        positive: vec![],
                        negative: vec![],
                        exact: true,
                    });
                }
                // W diag(pi) is similar to diag(sqrt pi) W diag(sqrt pi)
                let s = nalgebra::DMatrix::from_fn(k, k, |i, j| {
                    weights[i].sqrt() * probs[i][j] / mean * weights[j].sqrt()
                });
                (eigen::dense_eigenvalues(&s), true)
            }
            Kernel::LowRank { eigenvalues, .. } => {
                let lead = eigenvalues[0];
                let mut ev: Vec<f64> = eigenvalues.iter().map(|l| l / lead).collect();
                ev.sort_by(|a, b| b.total_cmp(a));
                (ev, true)
            }
            Kernel::Latent { law, .. } => {
                let m = NYSTROM_POINTS;
                let normal = Normal::standard();
                let grid: Vec<f64> = (0..m)
                    .map(|i| {
                        let q = (i as f64 + 0.5) / m as f64;
                        match law {
                            LatentLaw::Uniform01 => q,
                            LatentLaw::StandardNormal => normal.inverse_cdf(q),
                        }
                    })
                    .collect();
                let kmat = nalgebra::DMatrix::from_fn(m, m, |i, j| self.kernel_value(grid[i], grid[j]) / m as f64);
                let mean = kmat.sum() / m as f64;
                let want_pos = k_pos.min(m);
                let want_neg = k_neg.min(m - want_pos);
                let ex = eigen::lanczos_extremes(&kmat, want_pos.max(1), want_neg, &LanczosOptions::default())?;
                let mut ev: Vec<f64> = ex.top.iter().chain(ex.bottom.iter()).map(|l| l / mean).collect();
                ev.sort_by(|a, b| b.total_cmp(a));
                (ev, false)
            }
        };
        let scale = all.iter().fold(0.0f64, |s, x| s.max(x.abs()));
        let cutoff = if exact { 1e-10 } else { 1e-8 } * scale.max(f64::MIN_POSITIVE);
        let positive: Vec<f64> = all.iter().copied().filter(|&l| l > cutoff).take(k_pos).collect();
        let negative: Vec<f64> = all.iter().rev().copied().filter(|&l| l < -cutoff).take(k_neg).collect();
        Ok(PopulationSpectrum {
            positive,
            negative,
            exact,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_block(p: f64) -> GraphonModel {
        GraphonModel::sbm(vec![vec![p]], vec![1.0], Sparsity::Constant { nu: 1.0 }).unwrap()
    }

    #[test]
    fn h_value_examples() {
        assert_eq!(single_block(1.0).h_value(0.3, 0.7, 1.0), 1.0);
        let glsm = GraphonModel::gaussian_latent_space(Sparsity::Constant { nu: 1.0 });
        assert_eq!(glsm.h_value(0.42, 0.42, 0.5), 0.5);
        let sbm = GraphonModel::three_block(Sparsity::Constant { nu: 1.0 });
        // block 1 is [0, 0.3), block 2 is [0.3, 0.6)
        assert_eq!(sbm.h_value(0.1, 0.45, 1.0), 0.5);
    }

    #[test]
    fn censoring_caps_at_one() {
        let sbm = GraphonModel::three_block(Sparsity::Constant { nu: 1.0 });
        assert_eq!(sbm.h_value(0.1, 0.45, 3.0), 1.0);
    }

    #[test]
    fn validation_errors() {
        assert!(GraphonModel::sbm(vec![vec![0.1, 0.2], vec![0.3, 0.1]], vec![0.5, 0.5], Sparsity::Constant { nu: 1.0 }).is_err());
        assert!(GraphonModel::sbm(vec![vec![1.2]], vec![1.0], Sparsity::Constant { nu: 1.0 }).is_err());
        assert!(GraphonModel::sbm(vec![vec![0.2]], vec![0.9], Sparsity::Constant { nu: 1.0 }).is_err());
        assert!(GraphonModel::sbm(vec![vec![0.2]], vec![1.0], Sparsity::Constant { nu: 0.0 }).is_err());
        assert!(GraphonModel::sbm(vec![vec![0.2]], vec![1.0], Sparsity::Exponent { gamma: -0.1 }).is_err());
        let lr = Kernel::LowRank {
            eigenvalues: vec![1.0, 0.8],
            basis: Basis::Cosine,
        };
        assert!(GraphonModel::new(lr, Sparsity::Constant { nu: 1.0 }).is_err());
    }

    #[test]
    fn trivial_graphs() {
        let empty = single_block(0.0).sample_graph(10, 3).unwrap();
        assert_eq!(empty.edge_count(), 0);
        let full = single_block(1.0).sample_graph(5, 3).unwrap();
        assert_eq!(full, Graph::complete(5));
    }

    #[test]
    fn generation_is_deterministic() {
        let m = GraphonModel::gaussian_latent_space(Sparsity::Exponent { gamma: 0.1 });
        let a = m.sample_graph(300, 99).unwrap();
        let b = m.sample_graph(300, 99).unwrap();
        a.validate().unwrap();
        assert_eq!(a, b);
        assert_ne!(a, m.sample_graph(300, 100).unwrap());
    }

    #[test]
    fn censoring_is_reported() {
        let m = GraphonModel::sbm(vec![vec![1.0]], vec![1.0], Sparsity::Constant { nu: 1.0 }).unwrap();
        let (_, rep) = m.sample_graph_with_report(20, 1).unwrap();
        assert_eq!(rep.censored_pairs, 0);
        let lr = GraphonModel::new(
            Kernel::LowRank {
                eigenvalues: vec![2.0, 0.5],
                basis: Basis::Cosine,
            },
            Sparsity::Constant { nu: 1.0 },
        )
        .unwrap();
        let (_, rep) = lr.sample_graph_with_report(200, 1).unwrap();
        assert!(rep.censoring_warning());
    }

    #[test]
    fn single_block_spectrum() {
        let spec = single_block(1.0).population_eigenvalues(3, 3).unwrap();
        assert_eq!(spec.positive.len(), 1);
        assert!((spec.positive[0] - 1.0).abs() < 1e-12);
        assert!(spec.negative.is_empty());
    }

    #[test]
    fn low_rank_spectrum_is_exact() {
        let lr = GraphonModel::new(
            Kernel::LowRank {
                eigenvalues: vec![0.5, 0.2, -0.05],
                basis: Basis::Cosine,
            },
            Sparsity::Constant { nu: 1.0 },
        )
        .unwrap();
        let spec = lr.population_eigenvalues(2, 1).unwrap();
        assert!(spec.exact);
        assert!((spec.positive[0] - 1.0).abs() < 1e-12);
        assert!((spec.positive[1] - 0.4).abs() < 1e-12);
        assert!((spec.negative[0] + 0.1).abs() < 1e-12);
    }

    #[test]
    fn uniform_gaussian_kernel_mean_matches_quadrature() {
        let m = GraphonModel::new(
            Kernel::Latent {
                family: KernelFamily::GaussianRbf { beta: 3.0 },
                law: LatentLaw::Uniform01,
            },
            Sparsity::Constant { nu: 1.0 },
        )
        .unwrap();
        let k = 2000;
        let mut s = 0.0;
        for i in 0..k {
            for j in 0..k {
                let (u, v) = ((i as f64 + 0.5) / k as f64, (j as f64 + 0.5) / k as f64);
                s += m.kernel_value(u, v);
            }
        }
        let quad = s / (k * k) as f64;
        assert!((quad - m.dense_kernel_mean()).abs() < 1e-6, "{quad} vs {}", m.dense_kernel_mean());
    }
}
