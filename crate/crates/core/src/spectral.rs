//! Adjacency spectra and the eigenvalue-based statistics built from them.

use serde::{Deserialize, Serialize};

use crate::counts::{self, Motif};
use crate::eigen::{self, Extremes, LanczosOptions};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest vertex count handled by the dense solver under [`Solver::Auto`].
pub const DENSE_MAX: usize = 128;

/// How many eigenvalues to compute from each end of the spectrum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpectrumRequest {
    pub k_pos: usize,
    pub k_neg: usize,
}

impl SpectrumRequest {
    pub fn new(k_pos: usize, k_neg: usize) -> Self {
        SpectrumRequest { k_pos, k_neg }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let k = self.k_pos + self.k_neg;
        if k == 0 || k > n {
            return Err(Error::InvalidArgument(format!(
                "spectrum request {}+{} invalid for {n} vertices",
                self.k_pos, self.k_neg
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Solver {
    /// Dense below [`DENSE_MAX`] vertices, Lanczos above.
    #[default]
    Auto,
    Dense,
    Lanczos,
}

/// The functional `theta_hat` evaluated on a graph.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Functional {
    /// `lambda_r(A) / (n rho)`; `r = -1` is the most negative eigenvalue.
    Eigenvalue { r: i32 },
    /// `(lambda_1 - lambda_2) / (n rho)`
    SpectralGap,
    /// `lambda_1 / lambda_k'`
    EigRatio { k_prime: usize },
    /// `sum_{r <= k'} (lambda_r / (n rho))^p`
    Trace { p: u32, k_prime: usize },
    /// Normalized subgraph count.
    Count { motif: Motif },
}

/// Which edge density divides the statistic.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Normalization {
    KnownRho { rho: f64 },
    EstimatedRho,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatisticSpec {
    pub functional: Functional,
    pub normalization: Normalization,
}

impl StatisticSpec {
    pub fn new(functional: Functional, normalization: Normalization) -> Self {
        StatisticSpec {
            functional,
            normalization,
        }
    }

    pub fn eigenvalue(r: i32, normalization: Normalization) -> Self {
        Self::new(Functional::Eigenvalue { r }, normalization)
    }

    pub fn validate(&self) -> Result<()> {
        match self.functional {
            Functional::Eigenvalue { r: 0 } => Err(Error::InvalidArgument("eigenvalue index 0 is undefined".into())),
            Functional::EigRatio { k_prime: 0 } | Functional::Trace { k_prime: 0, .. } => {
                Err(Error::InvalidArgument("k' must be >= 1".into()))
            }
            Functional::Trace { p, .. } if p < 2 => Err(Error::InvalidArgument(format!("trace power {p} must be >= 2"))),
            _ => match self.normalization {
                Normalization::KnownRho { rho } if !(rho > 0.0 && rho.is_finite()) => {
                    Err(Error::InvalidArgument(format!("known rho {rho} must be positive")))
                }
                _ => Ok(()),
            },
        }
    }

    /// Same functional with the density frozen at `rho`.
    pub fn with_known_rho(&self, rho: f64) -> Self {
        StatisticSpec {
            functional: self.functional,
            normalization: Normalization::KnownRho { rho },
        }
    }

    /// Eigenvalues needed from the top and bottom of the spectrum.
    fn spectrum_needs(&self) -> (usize, usize) {
        match self.functional {
            Functional::Eigenvalue { r } if r > 0 => (r as usize, 0),
            Functional::Eigenvalue { r } => (0, r.unsigned_abs() as usize),
            Functional::SpectralGap => (2, 0),
            Functional::EigRatio { k_prime } | Functional::Trace { k_prime, .. } => (k_prime, 0),
            Functional::Count { .. } => (0, 0),
        }
    }

    /// Short machine-readable label, e.g. `eigenvalue(-1)`.
    pub fn label(&self) -> String {
        match self.functional {
            Functional::Eigenvalue { r } => format!("eigenvalue({r})"),
            Functional::SpectralGap => "gap".to_string(),
            Functional::EigRatio { k_prime } => format!("ratio({k_prime})"),
            Functional::Trace { p, k_prime } => format!("trace({p},{k_prime})"),
            Functional::Count { motif } => format!("count({})", motif.label()),
        }
    }
}

/// Edge density `2 |E| / (n (n - 1))`.
pub fn rho_hat(graph: &Graph) -> Result<f64> {
    let n = graph.n();
    if n < 2 {
        return Err(Error::InvalidArgument(format!("edge density needs n >= 2, got {n}")));
    }
    Ok(2.0 * graph.edge_count() as f64 / (n as f64 * (n as f64 - 1.0)))
}

/// Extreme eigenvalues of the adjacency matrix: `top` descending, `bottom` ascending.
pub fn top_eigenvalues(graph: &Graph, request: SpectrumRequest) -> Result<Extremes> {
    top_eigenvalues_with(graph, request, Solver::Auto)
}

pub fn top_eigenvalues_with(graph: &Graph, request: SpectrumRequest, solver: Solver) -> Result<Extremes> {
    request.validate(graph.n())?;
    let dense = match solver {
        Solver::Auto => graph.n() <= DENSE_MAX,
        Solver::Dense => true,
        Solver::Lanczos => false,
    };
    if dense {
        let all = eigen::dense_eigenvalues(&graph.dense_adjacency());
        Ok(Extremes::from_sorted_desc(&all, request.k_pos, request.k_neg))
    } else {
        eigen::lanczos_extremes(graph, request.k_pos, request.k_neg, &LanczosOptions::default())
    }
}

/// Spectrum prefix large enough for a set of statistics.
fn spectrum_for(graph: &Graph, specs: &[StatisticSpec], solver: Solver) -> Result<Extremes> {
    let (mut k_pos, mut k_neg) = (0, 0);
    for s in specs {
        let (p, q) = s.spectrum_needs();
        k_pos = k_pos.max(p);
        k_neg = k_neg.max(q);
    }
    let n = graph.n();
    if k_pos > n || k_neg > n {
        return Err(Error::DegenerateInput(format!(
            "statistic needs {} eigenvalues but the graph has {n} vertices",
            k_pos.max(k_neg)
        )));
    }
    if k_pos + k_neg == 0 {
        return Ok(Extremes {
            top: vec![],
            bottom: vec![],
        });
    }
    if k_pos + k_neg > n {
        // overlapping ends: take the whole spectrum once
        let all = top_eigenvalues_with(graph, SpectrumRequest::new(n, 0), solver)?.top;
        return Ok(Extremes::from_sorted_desc(&all, k_pos, k_neg));
    }
    top_eigenvalues_with(graph, SpectrumRequest::new(k_pos, k_neg), solver)
}

fn resolve_rho(graph: &Graph, normalization: Normalization) -> Result<f64> {
    let rho = match normalization {
        Normalization::KnownRho { rho } => rho,
        Normalization::EstimatedRho => rho_hat(graph)?,
    };
    if rho <= 0.0 {
        return Err(Error::DegenerateInput("edge density is zero; normalization undefined".into()));
    }
    Ok(rho)
}

fn from_spectrum(graph: &Graph, spec: &StatisticSpec, spectrum: &Extremes) -> Result<f64> {
    let n = graph.n() as f64;
    let scale = || resolve_rho(graph, spec.normalization).map(|rho| n * rho);
    match spec.functional {
        Functional::Eigenvalue { r } => {
            let lambda = if r > 0 {
                spectrum.top[r as usize - 1]
            } else {
                spectrum.bottom[r.unsigned_abs() as usize - 1]
            };
            Ok(lambda / scale()?)
        }
        Functional::SpectralGap => Ok((spectrum.top[0] - spectrum.top[1]) / scale()?),
        Functional::EigRatio { k_prime } => {
            let denom = spectrum.top[k_prime - 1];
            if denom == 0.0 {
                return Err(Error::DegenerateInput(format!("lambda_{k_prime} is zero; ratio undefined")));
            }
            Ok(spectrum.top[0] / denom)
        }
        Functional::Trace { p, k_prime } => {
            let s = scale()?;
            Ok(spectrum.top[..k_prime].iter().map(|l| (l / s).powi(p as i32)).sum())
        }
        Functional::Count { motif } => counts::normalized_count(graph, motif, spec.normalization),
    }
}

/// Value of an eigenvalue-based statistic. Count statistics are rejected;
/// use [`statistic_value`] for those.
pub fn eigen_statistic(graph: &Graph, spec: &StatisticSpec) -> Result<f64> {
    if let Functional::Count { .. } = spec.functional {
        return Err(Error::InvalidArgument("count statistics belong to the counts module".into()));
    }
    statistic_value(graph, spec)
}

/// Value of any statistic, spectral or count.
pub fn statistic_value(graph: &Graph, spec: &StatisticSpec) -> Result<f64> {
    statistic_values(graph, std::slice::from_ref(spec), Solver::Auto).map(|v| v[0])
}

/// Several statistics on one graph, sharing one eigen-decomposition.
pub fn statistic_values(graph: &Graph, specs: &[StatisticSpec], solver: Solver) -> Result<Vec<f64>> {
    for s in specs {
        s.validate()?;
    }
    let spectrum = spectrum_for(graph, specs, solver)?;
    specs.iter().map(|s| from_spectrum(graph, s, &spectrum)).collect()
}
