use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use netsub::counts::{normalized_count, raw_count};
use netsub::inference::{
    cluster_spectra, coverage_experiment, normalized_spectrum, rho_mode_comparison, two_sample_test,
    TwoSampleOptions,
};
use netsub::io::{self, KvReport};
use netsub::spectral::{rho_hat, top_eigenvalues, SpectrumRequest};
use netsub::subsample::{confidence_intervals, CiConstruction};
use netsub::{Functional, GraphonModel, Motif, Normalization, Sparsity, StatisticSpec, SubsampleScheme};

#[derive(Parser)]
#[command(name = "netsub", version, about = "Subsampling inference for sparse graphon networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a graph from a model and write it as an edge list.
    Generate(GenerateArgs),
    /// Extreme eigenvalues of A / (n rho).
    Spectrum(SpectrumArgs),
    /// Normalized subgraph counts.
    Counts(CountsArgs),
    /// Subsampling confidence interval for one statistic.
    Ci(CiArgs),
    /// Node-split two-sample test on two graphs.
    TwoSample(TwoSampleArgs),
    /// Coverage experiment described by a TOML file.
    Coverage(CoverageArgs),
    /// Complete-linkage clustering of graphs by their top eigenvalues.
    Cluster(ClusterArgs),
    /// Paired lambda_1 samples under known and estimated density.
    RhoCompare(RhoCompareArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelName {
    ThreeBlock,
    GaussianLatentSpace,
}

#[derive(Args)]
#[group(id = "sparsity", required = true, multiple = false)]
struct SparsityArgs {
    /// nu_n = n^(-gamma)
    #[arg(long)]
    gamma: Option<f64>,
    /// Constant nu_n
    #[arg(long)]
    nu: Option<f64>,
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, value_enum)]
    model: ModelName,
    #[command(flatten)]
    sparsity: SparsityArgs,
}

impl ModelArgs {
    fn build(&self) -> GraphonModel {
        let sparsity = match (self.sparsity.gamma, self.sparsity.nu) {
            (Some(gamma), _) => Sparsity::Exponent { gamma },
            (_, Some(nu)) => Sparsity::Constant { nu },
            _ => unreachable!("clap enforces one sparsity flag"),
        };
        match self.model {
            ModelName::ThreeBlock => GraphonModel::three_block(sparsity),
            ModelName::GaussianLatentSpace => GraphonModel::gaussian_latent_space(sparsity),
        }
    }
}

#[derive(Args)]
#[group(id = "scheme", required = true, multiple = false)]
struct SchemeArgs {
    /// Vertex subsample size
    #[arg(long)]
    b: Option<usize>,
    /// Vertex subsample size as a fraction of n
    #[arg(long)]
    b_frac: Option<f64>,
    /// p-sampling inclusion probability
    #[arg(long)]
    p: Option<f64>,
}

impl SchemeArgs {
    fn resolve(&self, n: usize) -> anyhow::Result<SubsampleScheme> {
        Ok(match (self.b, self.b_frac, self.p) {
            (Some(b), _, _) => SubsampleScheme::Vertex { b },
            (_, Some(f), _) => {
                if !(f > 0.0 && f < 1.0) {
                    bail!(netsub::Error::InvalidArgument(format!("b-frac {f} must lie in (0, 1)")));
                }
                SubsampleScheme::Vertex {
                    b: (f * n as f64).round() as usize,
                }
            }
            (_, _, Some(p)) => SubsampleScheme::PSample { p },
            _ => unreachable!("clap enforces one scheme flag"),
        })
    }
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Edge-list destination
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SpectrumArgs {
    edges: PathBuf,
    #[arg(long, default_value_t = 3)]
    k_pos: usize,
    #[arg(long, default_value_t = 0)]
    k_neg: usize,
    /// `estimated` or `known:<rho>`
    #[arg(long, default_value = "estimated", value_parser = rho_mode)]
    rho_mode: Normalization,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CountsArgs {
    edges: PathBuf,
    /// edge, two_star, star3, star4, triangle, cycle4, cycle5
    #[arg(long = "motif", required = true, value_parser = motif)]
    motifs: Vec<Motif>,
    #[arg(long, default_value = "estimated", value_parser = rho_mode)]
    rho_mode: Normalization,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Construction {
    EqualTailed,
    OneSidedLower,
}

#[derive(Args)]
struct CiArgs {
    edges: PathBuf,
    /// eigenvalue(r), gap, ratio(k), trace(p,k) or count(motif)
    #[arg(long, value_parser = functional)]
    statistic: Functional,
    #[command(flatten)]
    scheme: SchemeArgs,
    #[arg(long, default_value = "estimated", value_parser = rho_mode)]
    rho_mode: Normalization,
    #[arg(long, default_value_t = 500)]
    replicates: usize,
    #[arg(long, default_value_t = 0.95)]
    level: f64,
    #[arg(long, value_enum, default_value = "equal-tailed")]
    construction: Construction,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TwoSampleArgs {
    first: PathBuf,
    second: PathBuf,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long, default_value_t = 0.33)]
    b_frac: f64,
    /// Share of vertices used for choosing the statistic
    #[arg(long, default_value_t = 0.5)]
    split: f64,
    #[arg(long, default_value_t = 500)]
    replicates: usize,
    #[arg(long, default_value_t = 5)]
    k_max: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CoverageArgs {
    #[arg(long)]
    config: PathBuf,
    /// Overrides the config's output path
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ClusterArgs {
    #[arg(required = true, num_args = 2..)]
    edges: Vec<PathBuf>,
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RhoCompareArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Paired-sample table destination; the summary goes to stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

fn rho_mode(s: &str) -> Result<Normalization, String> {
    io::parse_rho_mode(s).map_err(|e| e.to_string())
}

fn motif(s: &str) -> Result<Motif, String> {
    Motif::parse(s).map_err(|e| e.to_string())
}

fn functional(s: &str) -> Result<Functional, String> {
    io::parse_functional(s).map_err(|e| e.to_string())
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn read_graph(path: &Path) -> anyhow::Result<netsub::Graph> {
    io::read_edge_list(path).with_context(|| path.display().to_string())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Generate(a) => {
            let model = a.model.build();
            let (g, report) = model.sample_graph_with_report(a.n, a.seed)?;
            io::write_edge_list(&g, &a.out)?;
            let mut r = KvReport::new();
            r.push("kind", "generate");
            r.push("n", g.n());
            r.push("edges", g.edge_count());
            r.push_num("nu", model.sparsity.nu(a.n));
            r.push("seed", a.seed);
            r.push_num("censored_fraction", report.censored_fraction());
            if report.censoring_warning() {
                eprintln!("warning: more than 1% of pairs were censored at probability 1");
            }
            emit(None, &r.to_text())
        }
        Command::Spectrum(a) => {
            let g = read_graph(&a.edges)?;
            let ex = top_eigenvalues(&g, SpectrumRequest::new(a.k_pos, a.k_neg))?;
            let rho = match a.rho_mode {
                Normalization::KnownRho { rho } => rho,
                Normalization::EstimatedRho => rho_hat(&g)?,
            };
            if rho <= 0.0 {
                bail!(netsub::Error::DegenerateInput("graph has no edges".into()));
            }
            let scale = g.n() as f64 * rho;
            let mut r = KvReport::new();
            r.push("kind", "spectrum");
            r.push("n", g.n());
            r.push("rho_mode", io::rho_mode_label(a.rho_mode));
            r.push_num("rho_used", rho);
            for (i, l) in ex.top.iter().enumerate() {
                r.push_num(format!("eigenvalue({})", i + 1), l / scale);
            }
            for (i, l) in ex.bottom.iter().enumerate() {
                r.push_num(format!("eigenvalue(-{})", i + 1), l / scale);
            }
            emit(a.out.as_deref(), &r.to_text())
        }
        Command::Counts(a) => {
            let g = read_graph(&a.edges)?;
            let mut r = KvReport::new();
            r.push("kind", "counts");
            r.push("n", g.n());
            r.push("rho_mode", io::rho_mode_label(a.rho_mode));
            for m in a.motifs {
                r.push(format!("raw({})", m.label()), raw_count(&g, m)?);
                r.push_num(format!("count({})", m.label()), normalized_count(&g, m, a.rho_mode)?);
            }
            emit(a.out.as_deref(), &r.to_text())
        }
        Command::Ci(a) => {
            let g = read_graph(&a.edges)?;
            let spec = StatisticSpec::new(a.statistic, a.rho_mode);
            let construction = match a.construction {
                Construction::EqualTailed => CiConstruction::EqualTailed,
                Construction::OneSidedLower => CiConstruction::OneSidedLower,
            };
            let scheme = a.scheme.resolve(g.n())?;
            let ci = confidence_intervals(&g, &[spec], scheme, a.replicates, a.level, a.seed, construction)?.remove(0);
            emit(a.out.as_deref(), &io::ci_report(&ci).to_text())
        }
        Command::TwoSample(a) => {
            let g1 = read_graph(&a.first)?;
            let g2 = read_graph(&a.second)?;
            let options = TwoSampleOptions {
                alpha: a.alpha,
                split_fraction: a.split,
                b_fraction: a.b_frac,
                replicates: a.replicates,
                k_max: a.k_max,
            };
            let result = two_sample_test(&g1, &g2, &options, a.seed)?;
            emit(a.out.as_deref(), &io::two_sample_report(&result).to_text())
        }
        Command::Coverage(a) => {
            let cfg = io::read_experiment_config(&a.config).with_context(|| a.config.display().to_string())?;
            let report = coverage_experiment(&cfg.coverage)?;
            let out = a.out.or(cfg.output);
            emit(out.as_deref(), &io::coverage_table(&report).to_csv())
        }
        Command::Cluster(a) => {
            let items = a
                .edges
                .iter()
                .map(|p| -> anyhow::Result<(String, Vec<f64>)> {
                    let g = read_graph(p)?;
                    Ok((p.display().to_string(), normalized_spectrum(&g, a.k)?))
                })
                .collect::<anyhow::Result<Vec<_>>>()?;
            let d = cluster_spectra(&items)?;
            emit(a.out.as_deref(), &io::format_dendrogram(&d))
        }
        Command::RhoCompare(a) => {
            let c = rho_mode_comparison(&a.model.build(), a.n, a.trials, a.seed)?;
            let table = io::rho_comparison_table(&c).to_csv();
            match a.out.as_deref() {
                Some(path) => {
                    emit(Some(path), &table)?;
                    emit(None, &io::rho_comparison_summary(&c).to_text())
                }
                None => emit(None, &table),
            }
        }
    }
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("error: usage: {}", one_line(first));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let kind = e
                .chain()
                .find_map(|c| c.downcast_ref::<netsub::Error>())
                .map_or("error", |ne| ne.kind());
            eprintln!("error: {kind}: {}", one_line(&format!("{e:#}")));
            ExitCode::FAILURE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
