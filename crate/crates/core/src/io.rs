//! Edge-list files, experiment configuration and report serialization.

use std::fmt::Display;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::counts::Motif;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::inference::{
    CoverageConfig, CoverageReport, Dendrogram, Merge, RhoComparison, RhoMode, SchemeSpec, TwoSampleResult,
};
use crate::models::{GraphonModel, Kernel, KernelFamily, LatentLaw, Sparsity};
use crate::spectral::{Functional, Normalization, StatisticSpec};
use crate::subsample::{ConfidenceInterval, SubsampleScheme};

/// Description of the subsampling rate convention written into reports.
pub const TAU_CONVENTION: &str = "sqrt(size)";

// ---------------------------------------------------------------- edge lists

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Parses `u v` lines. `#` starts a comment line; an optional `n <count>`
/// line fixes the vertex count, otherwise it is `1 + max id`. Duplicate
/// edges are collapsed, self-loops rejected.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut header: Option<usize> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut max_id: Option<usize> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = t.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(parse_err(line, format!("expected two fields, found {}", fields.len())));
        }
        if fields[0] == "n" {
            if header.is_some() {
                return Err(parse_err(line, "duplicate 'n' header"));
            }
            if !edges.is_empty() {
                return Err(parse_err(line, "'n' header must precede the edges"));
            }
            let n: usize = fields[1]
                .parse()
                .map_err(|_| parse_err(line, format!("invalid vertex count '{}'", fields[1])))?;
            if n > u32::MAX as usize {
                return Err(parse_err(line, format!("vertex count {n} overflows 32-bit ids")));
            }
            header = Some(n);
            continue;
        }
        let id = |s: &str| -> Result<usize> {
            let v: u64 = s
                .parse()
                .map_err(|_| parse_err(line, format!("invalid vertex id '{s}'")))?;
            if v >= u32::MAX as u64 {
                return Err(parse_err(line, format!("vertex id {v} overflows 32-bit ids")));
            }
            Ok(v as usize)
        };
        let (u, v) = (id(fields[0])?, id(fields[1])?);
        if u == v {
            return Err(parse_err(line, format!("self-loop at vertex {u}")));
        }
        if let Some(n) = header {
            if u.max(v) >= n {
                return Err(parse_err(line, format!("vertex id {} exceeds declared n = {n}", u.max(v))));
            }
        }
        max_id = Some(max_id.map_or(u.max(v), |m: usize| m.max(u).max(v)));
        edges.push((u, v));
    }
    let n = header.unwrap_or_else(|| max_id.map_or(0, |m| m + 1));
    Graph::from_edges(n, &edges)
}

pub fn read_edge_list(path: &Path) -> Result<Graph> {
    parse_edge_list(&std::fs::read_to_string(path)?)
}

/// Canonical text: `n <count>`, then `u v` with `u < v` in lexicographic order.
pub fn format_edge_list(graph: &Graph) -> String {
    let mut out = format!("n {}\n", graph.n());
    for (u, v) in graph.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn write_edge_list(graph: &Graph, path: &Path) -> Result<()> {
    std::fs::write(path, format_edge_list(graph))?;
    Ok(())
}

// ---------------------------------------------------------------- parsing helpers

/// Parses `eigenvalue(r)`, `gap`, `ratio(k)`, `trace(p,k)` or `count(motif)`.
pub fn parse_functional(s: &str) -> Result<Functional> {
    let bad = || Error::InvalidArgument(format!("unknown statistic '{s}'"));
    let s = s.trim();
    if s == "gap" {
        return Ok(Functional::SpectralGap);
    }
    let (name, rest) = s.split_once('(').ok_or_else(bad)?;
    let args = rest.strip_suffix(')').ok_or_else(bad)?;
    let args: Vec<&str> = args.split(',').map(str::trim).collect();
    let f = match (name.trim(), args.as_slice()) {
        ("eigenvalue", [r]) => Functional::Eigenvalue {
            r: r.parse().map_err(|_| bad())?,
        },
        ("ratio", [k]) => Functional::EigRatio {
            k_prime: k.parse().map_err(|_| bad())?,
        },
        ("trace", [p, k]) => Functional::Trace {
            p: p.parse().map_err(|_| bad())?,
            k_prime: k.parse().map_err(|_| bad())?,
        },
        ("count", [m]) => Functional::Count {
            motif: Motif::parse(m)?,
        },
        _ => return Err(bad()),
    };
    StatisticSpec::new(f, Normalization::EstimatedRho).validate()?;
    Ok(f)
}

/// Parses `estimated` or `known:<rho>`.
pub fn parse_rho_mode(s: &str) -> Result<Normalization> {
    match s.trim() {
        "estimated" => Ok(Normalization::EstimatedRho),
        other => {
            let v = other
                .strip_prefix("known:")
                .and_then(|v| v.parse::<f64>().ok())
                .ok_or_else(|| Error::InvalidArgument(format!("rho mode must be 'estimated' or 'known:<value>', got '{other}'")))?;
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::InvalidArgument(format!("known rho {v} must lie in (0, 1]")));
            }
            Ok(Normalization::KnownRho { rho: v })
        }
    }
}

pub fn rho_mode_label(normalization: Normalization) -> String {
    match normalization {
        Normalization::KnownRho { rho } => format!("known:{}", fmt_num(rho)),
        Normalization::EstimatedRho => "estimated".into(),
    }
}

// ---------------------------------------------------------------- configuration

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    model: String,
    probs: Option<Vec<Vec<f64>>>,
    weights: Option<Vec<f64>>,
    beta: Option<f64>,
    n: Vec<usize>,
    #[serde(default)]
    gamma: Vec<f64>,
    #[serde(default)]
    nu: Vec<f64>,
    #[serde(default)]
    b_frac: Vec<f64>,
    #[serde(default)]
    b: Vec<usize>,
    #[serde(default)]
    p: Vec<f64>,
    statistics: Vec<String>,
    #[serde(default)]
    rho_mode: Option<String>,
    trials: usize,
    replicates: usize,
    level: f64,
    seed: u64,
    output: Option<PathBuf>,
}

/// A coverage run read from a TOML document.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub coverage: CoverageConfig,
    pub output: Option<PathBuf>,
}

fn model_from(raw: &RawConfig) -> Result<GraphonModel> {
    let placeholder = Sparsity::Constant { nu: 1.0 };
    let unused = |key: &str, present: bool| -> Result<()> {
        if present {
            Err(Error::InvalidArgument(format!("key '{key}' does not apply to model '{}'", raw.model)))
        } else {
            Ok(())
        }
    };
    match raw.model.as_str() {
        "three_block" => {
            unused("probs", raw.probs.is_some())?;
            unused("weights", raw.weights.is_some())?;
            unused("beta", raw.beta.is_some())?;
            Ok(GraphonModel::three_block(placeholder))
        }
        "gaussian_latent_space" => {
            unused("probs", raw.probs.is_some())?;
            unused("weights", raw.weights.is_some())?;
            let beta = raw.beta.unwrap_or(25.0);
            GraphonModel::new(
                Kernel::Latent {
                    family: KernelFamily::GaussianRbf { beta },
                    law: LatentLaw::StandardNormal,
                },
                placeholder,
            )
        }
        "sbm" => {
            unused("beta", raw.beta.is_some())?;
            let probs = raw
                .probs
                .clone()
                .ok_or_else(|| Error::InvalidArgument("model 'sbm' needs 'probs'".into()))?;
            let weights = raw
                .weights
                .clone()
                .ok_or_else(|| Error::InvalidArgument("model 'sbm' needs 'weights'".into()))?;
            GraphonModel::sbm(probs, weights, placeholder)
        }
        other => Err(Error::InvalidArgument(format!(
            "unknown model '{other}' (expected three_block, gaussian_latent_space or sbm)"
        ))),
    }
}

/// Parses and validates an experiment configuration.
pub fn parse_experiment_config(text: &str) -> Result<ExperimentConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| {
        let line = e.span().map_or(0, |s| text[..s.start].matches('\n').count() + 1);
        parse_err(line, e.message().to_string())
    })?;
    let model = model_from(&raw)?;
    let mut sparsities: Vec<Sparsity> = raw.gamma.iter().map(|&gamma| Sparsity::Exponent { gamma }).collect();
    sparsities.extend(raw.nu.iter().map(|&nu| Sparsity::Constant { nu }));
    let mut schemes: Vec<SchemeSpec> = raw
        .b_frac
        .iter()
        .map(|&fraction| SchemeSpec::VertexFraction { fraction })
        .collect();
    schemes.extend(raw.b.iter().map(|&b| SchemeSpec::Vertex { b }));
    schemes.extend(raw.p.iter().map(|&p| SchemeSpec::PSample { p }));
    let functionals = raw
        .statistics
        .iter()
        .map(|s| parse_functional(s))
        .collect::<Result<Vec<_>>>()?;
    let rho_mode = match raw.rho_mode.as_deref() {
        None | Some("estimated") => RhoMode::Estimated,
        Some("known") => RhoMode::Known,
        Some(other) => {
            return Err(Error::InvalidArgument(format!(
                "rho_mode must be 'known' or 'estimated', got '{other}'"
            )))
        }
    };
    if raw.b_frac.iter().any(|f| !(*f > 0.0 && *f < 1.0)) {
        return Err(Error::InvalidArgument("b_frac entries must lie in (0, 1)".into()));
    }
    let coverage = CoverageConfig {
        model,
        n_list: raw.n,
        sparsities,
        schemes,
        functionals,
        rho_mode,
        trials: raw.trials,
        replicates: raw.replicates,
        level: raw.level,
        seed: raw.seed,
    };
    coverage.validate()?;
    if coverage.replicates < crate::subsample::MIN_REPLICATES {
        return Err(Error::InvalidArgument(format!(
            "replicates must be >= {}",
            crate::subsample::MIN_REPLICATES
        )));
    }
    Ok(ExperimentConfig {
        coverage,
        output: raw.output,
    })
}

pub fn read_experiment_config(path: &Path) -> Result<ExperimentConfig> {
    parse_experiment_config(&std::fs::read_to_string(path)?)
}

// ---------------------------------------------------------------- numbers

/// Six significant digits; fixed notation for moderate magnitudes,
/// scientific otherwise.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    // round first so the exponent reflects the printed value
    let rounded: f64 = format!("{x:.5e}").parse().expect("formatted float parses");
    let e = rounded.abs().log10().floor() as i32;
    if (-4..6).contains(&e) {
        format!("{:.*}", (5 - e) as usize, rounded)
    } else {
        format!("{rounded:.5e}")
    }
}

pub fn parse_num(s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("invalid number '{s}'")))
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "na".into(), fmt_num)
}

// ---------------------------------------------------------------- key-value reports

/// Ordered `key=value` lines; nested fields use dotted keys.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct KvReport {
    pub entries: Vec<(String, String)>,
}

impl KvReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Display) {
        self.entries.push((key.into(), value.to_string()));
    }

    pub fn push_num(&mut self, key: impl Into<String>, value: f64) {
        self.push(key, fmt_num(value));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn to_text(&self) -> String {
        self.entries.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| parse_err(idx + 1, "expected key=value"))?;
            entries.push((k.to_string(), v.to_string()));
        }
        Ok(KvReport { entries })
    }

    fn extend_prefixed(&mut self, prefix: &str, other: KvReport) {
        for (k, v) in other.entries {
            self.entries.push((format!("{prefix}.{k}"), v));
        }
    }
}

fn push_scheme(report: &mut KvReport, scheme: SubsampleScheme) {
    report.push("scheme", scheme.label());
    match scheme {
        SubsampleScheme::Vertex { b } => report.push("b", b),
        SubsampleScheme::PSample { p } => report.push_num("p", p),
    }
}

/// Every field needed to rebuild the interval with the library.
pub fn ci_report(ci: &ConfidenceInterval) -> KvReport {
    let mut r = KvReport::new();
    r.push("kind", "confidence_interval");
    r.push("statistic", ci.statistic.label());
    r.push("rho_mode", rho_mode_label(ci.statistic.normalization));
    r.push("rho_used", fmt_opt(ci.rho_used));
    r.push("n", ci.n);
    push_scheme(&mut r, ci.scheme);
    r.push("replicates", ci.replicates);
    r.push("seed", ci.seed);
    r.push_num("level", ci.level);
    r.push("construction", ci.construction.name());
    r.push("tau", TAU_CONVENTION);
    r.push_num("statistic_value", ci.statistic_value);
    r.push_num("lower", ci.lower);
    r.push_num("upper", ci.upper);
    r.push("degenerate_replicates", ci.degenerate_replicates);
    r
}

pub fn two_sample_report(result: &TwoSampleResult) -> KvReport {
    let list = |xs: &[f64]| xs.iter().map(|&x| fmt_num(x)).collect::<Vec<_>>().join(" ");
    let mut r = KvReport::new();
    r.push("kind", "two_sample");
    r.push("decision", result.decision.name());
    r.push("statistic", result.statistic.label());
    r.push_num("alpha", result.alpha);
    r.push_num("ci_level", 1.0 - result.alpha / 2.0);
    r.push("seed", result.seed);
    r.push("split_seed", result.split_seed);
    r.push("subsample_seed", result.subsample_seed);
    r.push_num("split_fraction", result.options.split_fraction);
    r.push_num("b_fraction", result.options.b_fraction);
    r.push("k_max", result.options.k_max);
    r.push("replicates", result.options.replicates);
    r.push("b_1", result.b_1);
    r.push("b_2", result.b_2);
    r.push_num("rho_hat_1", result.rho_hat_1);
    r.push_num("rho_hat_2", result.rho_hat_2);
    r.push_num("value_1", result.value_1);
    r.push_num("value_2", result.value_2);
    r.push("exploration_1", list(&result.exploration_1));
    r.push("exploration_2", list(&result.exploration_2));
    r.extend_prefixed("ci_1", ci_report(&result.ci_1));
    r.extend_prefixed("ci_2", ci_report(&result.ci_2));
    r
}

pub fn rho_comparison_summary(c: &RhoComparison) -> KvReport {
    let mut r = KvReport::new();
    r.push("kind", "rho_comparison");
    r.push("n", c.n);
    r.push_num("nu", c.nu);
    r.push_num("rho_known", c.rho_known);
    r.push("trials", c.known.len());
    r.push("var_known", fmt_opt(c.var_known));
    r.push("var_estimated", fmt_opt(c.var_estimated));
    r
}

// ---------------------------------------------------------------- tables

/// Comma-separated table with a header row.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
    }

    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut rd = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
        let csv_err = |e: csv::Error| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_err(line, e.to_string())
        };
        let header = rd.headers().map_err(csv_err)?.iter().map(str::to_string).collect();
        let mut rows = Vec::new();
        for rec in rd.records() {
            rows.push(rec.map_err(csv_err)?.iter().map(str::to_string).collect());
        }
        Ok(Table { header, rows })
    }
}

fn sparsity_fields(s: Sparsity) -> (String, String) {
    match s {
        Sparsity::Exponent { gamma } => ("exponent".into(), fmt_num(gamma)),
        Sparsity::Constant { nu } => ("constant".into(), fmt_num(nu)),
    }
}

pub fn coverage_table(report: &CoverageReport) -> Table {
    let mut t = Table::new(&[
        "n",
        "sparsity",
        "sparsity_value",
        "nu",
        "scheme",
        "statistic",
        "rho_mode",
        "parameter",
        "coverage",
        "std_error",
        "mean_width",
        "trials",
        "failed_trials",
        "replicates",
        "level",
        "construction",
        "tau",
        "seed",
        "graph_seed",
        "subsample_seed",
        "note",
    ]);
    for c in &report.cells {
        let (kind, value) = sparsity_fields(c.sparsity);
        let (parameter, note) = match &c.parameter {
            Ok(v) => (fmt_num(*v), String::new()),
            Err(why) => ("na".into(), format!("unavailable: {why}")),
        };
        t.push(vec![
            c.n.to_string(),
            kind,
            value,
            fmt_num(c.sparsity.nu(c.n)),
            c.scheme.label(),
            c.statistic.label(),
            match report.rho_mode {
                RhoMode::Known => "known".into(),
                RhoMode::Estimated => "estimated".into(),
            },
            parameter,
            fmt_opt(c.coverage),
            fmt_opt(c.std_error),
            fmt_opt(c.mean_width),
            c.trials.to_string(),
            c.failed_trials.to_string(),
            c.replicates.to_string(),
            fmt_num(c.level),
            report.construction.name().into(),
            TAU_CONVENTION.into(),
            report.seed.to_string(),
            c.graph_seed.to_string(),
            c.subsample_seed.to_string(),
            note,
        ]);
    }
    t
}

pub fn rho_comparison_table(c: &RhoComparison) -> Table {
    let mut t = Table::new(&["trial", "seed", "known", "estimated"]);
    for (i, ((s, k), e)) in c.seeds.iter().zip(&c.known).zip(&c.estimated).enumerate() {
        t.push(vec![i.to_string(), s.to_string(), fmt_num(*k), fmt_num(*e)]);
    }
    t
}

// ---------------------------------------------------------------- dendrograms

/// `leaf <id> <label>` lines followed by `merge <a> <b> <height> <size>` lines.
pub fn format_dendrogram(d: &Dendrogram) -> String {
    let mut out = String::new();
    for (i, l) in d.labels.iter().enumerate() {
        out.push_str(&format!("leaf {i} {l}\n"));
    }
    for m in &d.merges {
        out.push_str(&format!("merge {} {} {} {}\n", m.a, m.b, fmt_num(m.height), m.size));
    }
    out
}

pub fn parse_dendrogram(text: &str) -> Result<Dendrogram> {
    let mut labels = Vec::new();
    let mut merges = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let bad = |what: &str| parse_err(line_no, what.to_string());
        let mut parts = line.splitn(3, ' ');
        match parts.next() {
            Some("leaf") => {
                let id: usize = parts.next().and_then(|s| s.parse().ok()).ok_or_else(|| bad("bad leaf id"))?;
                if id != labels.len() {
                    return Err(bad("leaf ids must be consecutive"));
                }
                labels.push(parts.next().unwrap_or("").to_string());
            }
            Some("merge") => {
                let f: Vec<&str> = line.split(' ').skip(1).collect();
                if f.len() != 4 {
                    return Err(bad("merge needs four fields"));
                }
                let int = |s: &str| s.parse::<usize>().map_err(|_| bad("bad integer"));
                merges.push(Merge {
                    a: int(f[0])?,
                    b: int(f[1])?,
                    height: parse_num(f[2]).map_err(|_| bad("bad height"))?,
                    size: int(f[3])?,
                });
            }
            Some("") | None => {}
            Some(other) => return Err(bad(&format!("unknown record '{other}'"))),
        }
    }
    Ok(Dendrogram { labels, merges })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_examples() {
        let g = parse_edge_list("0 1\n1 2").unwrap();
        assert_eq!((g.n(), g.edge_count()), (3, 2));
        let g = parse_edge_list("# comment\nn 5\n").unwrap();
        assert_eq!((g.n(), g.edge_count()), (5, 0));
        assert_eq!(format_edge_list(&Graph::complete(3)), "n 3\n0 1\n0 2\n1 2\n");
        assert_eq!(format_edge_list(&Graph::empty(2)), "n 2\n");
    }

    #[test]
    fn edge_list_errors_carry_line_numbers() {
        let line_of = |text: &str| match parse_edge_list(text) {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("expected parse error, got {other:?}"),
        };
        assert_eq!(line_of("0 1\n2 2\n"), 2);
        assert_eq!(line_of("0 1\n# c\n1 x\n"), 3);
        assert_eq!(line_of("0 1 2\n"), 1);
        assert_eq!(line_of("n 3\n0 3\n"), 2);
        assert_eq!(line_of("0 99999999999\n"), 1);
    }

    #[test]
    fn duplicates_collapse_and_canonicalize() {
        let g = parse_edge_list("2 1\n1 2\n0 2\n").unwrap();
        assert_eq!(format_edge_list(&g), "n 3\n0 2\n1 2\n");
    }

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(1.0355), "1.03550");
        assert_eq!(fmt_num(-0.266273), "-0.266273");
        assert_eq!(fmt_num(0.0), "0");
        assert_eq!(fmt_num(123456.7), "123457");
        assert_eq!(fmt_num(1234567.0), "1.23457e6");
        assert_eq!(fmt_num(9.9999996), "10.0000");
        assert_eq!(fmt_num(2.5e-7), "2.50000e-7");
        assert_eq!(parse_num(&fmt_num(2.5e-7)).unwrap(), 2.5e-7);
    }

    #[test]
    fn functional_and_rho_parsing() {
        assert_eq!(parse_functional("eigenvalue(-1)").unwrap(), Functional::Eigenvalue { r: -1 });
        assert_eq!(parse_functional("trace(3,2)").unwrap(), Functional::Trace { p: 3, k_prime: 2 });
        assert_eq!(
            parse_functional("count(triangle)").unwrap(),
            Functional::Count { motif: Motif::Triangle }
        );
        assert!(parse_functional("eigenvalue(0)").is_err());
        assert!(parse_functional("median").is_err());
        for f in ["eigenvalue(2)", "gap", "ratio(3)", "trace(2,4)", "count(cycle5)"] {
            let spec = StatisticSpec::new(parse_functional(f).unwrap(), Normalization::EstimatedRho);
            assert_eq!(spec.label(), f);
        }
        assert_eq!(parse_rho_mode("known:0.5").unwrap(), Normalization::KnownRho { rho: 0.5 });
        assert_eq!(parse_rho_mode("estimated").unwrap(), Normalization::EstimatedRho);
        assert!(parse_rho_mode("known:2").is_err());
        assert!(parse_rho_mode("guess").is_err());
    }

    #[test]
    fn config_parses() {
        let cfg = parse_experiment_config(
            r#"
model = "three_block"
n = [1000]
gamma = [0.1]
b_frac = [0.1, 0.3]
p = [0.3]
statistics = ["eigenvalue(1)", "eigenvalue(-1)"]
trials = 200
replicates = 300
level = 0.95
seed = 7
"#,
        )
        .unwrap();
        assert_eq!(cfg.coverage.schemes.len(), 3);
        assert_eq!(cfg.coverage.rho_mode, RhoMode::Estimated);
        assert_eq!(cfg.output, None);
    }

    #[test]
    fn config_errors() {
        let base = "model = \"three_block\"\nn = [100]\ngamma = [0.1]\nb_frac = [0.3]\nstatistics = [\"eigenvalue(1)\"]\ntrials = 2\nreplicates = 50\nseed = 1\n";
        assert!(parse_experiment_config(&format!("{base}level = 0.95\n")).is_ok());
        assert!(parse_experiment_config(&format!("{base}level = 1.5\n")).is_err());
        assert!(parse_experiment_config(&format!("{base}level = 0.9\nbogus = 1\n")).is_err());
        match parse_experiment_config(&format!("{base}level = \"high\"\n")) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 9),
            other => panic!("{other:?}"),
        }
        assert!(parse_experiment_config(&base.replace("three_block", "sbm")).is_err());
    }

    #[test]
    fn kv_and_table_round_trip() {
        let mut kv = KvReport::new();
        kv.push("statistic", "trace(3,2)");
        kv.push_num("lower", 0.123456789);
        let text = kv.to_text();
        assert_eq!(KvReport::parse(&text).unwrap(), kv);
        assert_eq!(kv.get("lower"), Some("0.123457"));

        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["trace(3,2)".into(), "1.00000".into()]);
        t.push(vec!["x".into(), "".into()]);
        assert_eq!(Table::parse_csv(&t.to_csv()).unwrap(), t);
    }

    #[test]
    fn dendrogram_round_trip() {
        let d = Dendrogram {
            labels: vec!["a b".into(), "c".into(), "d".into()],
            merges: vec![
                Merge { a: 0, b: 1, height: 0.5, size: 2 },
                Merge { a: 2, b: 3, height: 1.25, size: 3 },
            ],
        };
        assert_eq!(parse_dendrogram(&format_dendrogram(&d)).unwrap(), d);
    }
}
