use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::models::GraphonModel;
use crate::rng::{self, tag};
use crate::spectral::{rho_hat, top_eigenvalues, SpectrumRequest};
use crate::stats;

/// Paired samples of `lambda_1(A) / (n rho)` under the true and the
/// estimated density.
#[derive(Clone, Debug, PartialEq)]
pub struct RhoComparison {
    pub n: usize,
    pub nu: f64,
    pub rho_known: f64,
    /// Graph seed of trial `t`.
    pub seeds: Vec<u64>,
    pub known: Vec<f64>,
    pub estimated: Vec<f64>,
    /// Unbiased variances; `None` with a single trial.
    pub var_known: Option<f64>,
    pub var_estimated: Option<f64>,
}

pub fn rho_mode_comparison(model: &GraphonModel, n: usize, trials: usize, seed: u64) -> Result<RhoComparison> {
    model.validate()?;
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be >= 1".into()));
    }
    let nu = model.sparsity.nu(n);
    let rho_known = nu * model.dense_kernel_mean();
    if !(rho_known > 0.0) {
        return Err(Error::UnavailableParameter("model has zero edge density".into()));
    }
    let seeds: Vec<u64> = (0..trials as u64).map(|t| rng::derive(seed, &[tag::TRIAL, t])).collect();
    let pairs: Vec<(f64, f64)> = seeds
        .par_iter()
        .map(|&s| -> Result<(f64, f64)> {
            let g = model.sample_graph(n, s)?;
            let lambda = top_eigenvalues(&g, SpectrumRequest::new(1, 0))?.top[0];
            let rho = rho_hat(&g)?;
            if rho <= 0.0 {
                return Err(Error::DegenerateInput("simulated graph has no edges".into()));
            }
            Ok((lambda / (n as f64 * rho_known), lambda / (n as f64 * rho)))
        })
        .collect::<Result<_>>()?;
    let (known, estimated): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    let var = |xs: &[f64]| (xs.len() > 1).then(|| stats::variance(xs));
    Ok(RhoComparison {
        n,
        nu,
        rho_known,
        seeds,
        var_known: var(&known),
        var_estimated: var(&estimated),
        known,
        estimated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::Sparsity;

    #[test]
    fn complete_graph_modes_agree() {
        let m = GraphonModel::sbm(vec![vec![1.0]], vec![1.0], Sparsity::Constant { nu: 1.0 }).unwrap();
        let r = rho_mode_comparison(&m, 30, 3, 2).unwrap();
        assert_eq!(r.known, r.estimated);
        assert_eq!(r.var_known, r.var_estimated);
    }

    #[test]
    fn single_trial() {
        let m = GraphonModel::three_block(Sparsity::Constant { nu: 1.0 });
        let r = rho_mode_comparison(&m, 100, 1, 2).unwrap();
        assert_eq!((r.known.len(), r.estimated.len()), (1, 1));
        assert!(r.known[0].is_finite() && r.estimated[0].is_finite());
        assert_eq!(r.var_known, None);
    }
}
