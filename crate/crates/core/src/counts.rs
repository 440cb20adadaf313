//! Subgraph counts and their normalized estimators.
//!
//! Copies are counted as (not necessarily induced) subgraphs: every edge of
//! the motif must be present, non-edges are unconstrained.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::spectral::{rho_hat, Normalization};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "motif")]
pub enum Motif {
    Edge,
    TwoStar,
    /// Star with `k` leaves, `k` in {3, 4}.
    KStar { k: u8 },
    Triangle,
    /// Cycle on `p` vertices, `p` in {4, 5}.
    Cycle { p: u8 },
}

impl Motif {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Motif::KStar { k } if !(3..=4).contains(&k) => {
                Err(Error::InvalidArgument(format!("k-star needs k in {{3, 4}}, got {k}")))
            }
            Motif::Cycle { p } if !(4..=5).contains(&p) => {
                Err(Error::InvalidArgument(format!("cycle needs p in {{4, 5}}, got {p}")))
            }
            _ => Ok(()),
        }
    }

    /// Number of vertices.
    pub fn vertices(&self) -> usize {
        match *self {
            Motif::Edge => 2,
            Motif::TwoStar | Motif::Triangle => 3,
            Motif::KStar { k } => k as usize + 1,
            Motif::Cycle { p } => p as usize,
        }
    }

    /// Number of edges.
    pub fn edges(&self) -> usize {
        match *self {
            Motif::Edge => 1,
            Motif::TwoStar => 2,
            Motif::KStar { k } => k as usize,
            Motif::Triangle => 3,
            Motif::Cycle { p } => p as usize,
        }
    }

    /// Edge list of the motif on vertices `0..vertices()`.
    pub fn edge_list(&self) -> Vec<(usize, usize)> {
        match *self {
            Motif::Edge => vec![(0, 1)],
            Motif::TwoStar => vec![(0, 1), (0, 2)],
            Motif::KStar { k } => (1..=k as usize).map(|i| (0, i)).collect(),
            Motif::Triangle => vec![(0, 1), (1, 2), (0, 2)],
            Motif::Cycle { p } => {
                let p = p as usize;
                (0..p).map(|i| (i, (i + 1) % p)).collect()
            }
        }
    }

    /// Distinct copies of the motif on a fixed labeled vertex set: `p! / |Aut|`.
    pub fn iso_count(&self) -> u64 {
        match *self {
            Motif::Edge | Motif::Triangle => 1,
            Motif::TwoStar => 3,
            Motif::KStar { k } => k as u64 + 1,
            // p! / (2p)
            Motif::Cycle { p } => (1..p as u64).product::<u64>() / 2,
        }
    }

    pub fn label(&self) -> String {
        match *self {
            Motif::Edge => "edge".into(),
            Motif::TwoStar => "two_star".into(),
            Motif::KStar { k } => format!("star{k}"),
            Motif::Triangle => "triangle".into(),
            Motif::Cycle { p } => format!("cycle{p}"),
        }
    }

    pub fn parse(s: &str) -> Result<Motif> {
        let m = match s {
            "edge" => Motif::Edge,
            "two_star" | "star2" => Motif::TwoStar,
            "star3" => Motif::KStar { k: 3 },
            "star4" => Motif::KStar { k: 4 },
            "triangle" => Motif::Triangle,
            "cycle4" => Motif::Cycle { p: 4 },
            "cycle5" => Motif::Cycle { p: 5 },
            other => return Err(Error::InvalidArgument(format!("unknown motif '{other}'"))),
        };
        Ok(m)
    }
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Size of `a ∩ b ∩ (min, ∞)` for sorted slices.
fn intersect_above(a: &[u32], b: &[u32], min: u32) -> u64 {
    let (mut i, mut j) = (a.partition_point(|&x| x <= min), b.partition_point(|&x| x <= min));
    let mut c = 0;
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

fn triangles(g: &Graph) -> u128 {
    let mut total = 0u128;
    for u in 0..g.n() {
        let nu = g.neighbors(u);
        for &v in nu.iter().filter(|&&v| v as usize > u) {
            total += intersect_above(nu, g.neighbors(v as usize), v) as u128;
        }
    }
    total
}

fn four_cycles(g: &Graph) -> u128 {
    // Each 4-cycle has two diagonals; count pairs (u < w) with c common
    // neighbors, each contributing C(c, 2), then halve.
    let n = g.n();
    let mut common = vec![0u64; n];
    let mut touched = Vec::new();
    let mut total = 0u128;
    for u in 0..n {
        for &v in g.neighbors(u) {
            for &w in g.neighbors(v as usize) {
                let w = w as usize;
                if w > u {
                    if common[w] == 0 {
                        touched.push(w);
                    }
                    common[w] += 1;
                }
            }
        }
        for &w in &touched {
            let c = common[w] as u128;
            total += c * c.saturating_sub(1) / 2;
            common[w] = 0;
        }
        touched.clear();
    }
    total / 2
}

fn five_cycles(g: &Graph) -> u128 {
    // Anchor each cycle at its smallest vertex v with cycle neighbors a < d,
    // then count paths a - b - c - d through vertices above v.
    let mut total = 0u128;
    for v in 0..g.n() {
        let above: Vec<u32> = g.neighbors(v).iter().copied().filter(|&x| x as usize > v).collect();
        for (ia, &a) in above.iter().enumerate() {
            for &d in &above[ia + 1..] {
                let nd = g.neighbors(d as usize);
                let a_adj_d = g.has_edge(a as usize, d as usize);
                for &b in g.neighbors(a as usize) {
                    if b as usize <= v || b == d {
                        continue;
                    }
                    let mut c = intersect_above(g.neighbors(b as usize), nd, v as u32);
                    // c != a; b and d are excluded by adjacency
                    if a_adj_d {
                        c -= 1;
                    }
                    total += c as u128;
                }
            }
        }
    }
    total
}

/// Number of copies of `motif` contained in `graph`.
pub fn raw_count(graph: &Graph, motif: Motif) -> Result<u128> {
    motif.validate()?;
    if graph.n() < motif.vertices() {
        return Err(Error::InvalidArgument(format!(
            "graph with {} vertices cannot contain a {}-vertex motif",
            graph.n(),
            motif.vertices()
        )));
    }
    let stars = |k: u64| (0..graph.n()).map(|v| binomial(graph.degree(v) as u64, k)).sum::<u128>();
    Ok(match motif {
        Motif::Edge => graph.edge_count() as u128,
        Motif::TwoStar => stars(2),
        Motif::KStar { k } => stars(k as u64),
        Motif::Triangle => triangles(graph),
        Motif::Cycle { p: 4 } => four_cycles(graph),
        Motif::Cycle { .. } => five_cycles(graph),
    })
}

/// `rho^(-e) * raw_count / (C(n, p) * |Iso|)`.
pub fn normalized_count(graph: &Graph, motif: Motif, normalization: Normalization) -> Result<f64> {
    let raw = raw_count(graph, motif)?;
    let rho = match normalization {
        Normalization::KnownRho { rho } => rho,
        Normalization::EstimatedRho => rho_hat(graph)?,
    };
    if !(rho > 0.0) {
        return Err(Error::DegenerateInput("edge density is zero; count normalization undefined".into()));
    }
    let denom = binomial(graph.n() as u64, motif.vertices() as u64) as f64 * motif.iso_count() as f64;
    Ok(raw as f64 / denom / rho.powi(motif.edges() as i32))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_examples() {
        assert_eq!(raw_count(&Graph::complete(4), Motif::Triangle).unwrap(), 4);
        assert_eq!(raw_count(&Graph::path(3), Motif::TwoStar).unwrap(), 1);
        assert_eq!(raw_count(&Graph::complete(4), Motif::Cycle { p: 4 }).unwrap(), 3);
        assert_eq!(raw_count(&Graph::complete(5), Motif::Cycle { p: 5 }).unwrap(), 12);
        assert_eq!(raw_count(&Graph::star(5), Motif::KStar { k: 4 }).unwrap(), 5);
    }

    #[test]
    fn iso_counts() {
        assert_eq!(Motif::Edge.iso_count(), 1);
        assert_eq!(Motif::TwoStar.iso_count(), 3);
        assert_eq!(Motif::Triangle.iso_count(), 1);
        assert_eq!(Motif::Cycle { p: 4 }.iso_count(), 3);
        assert_eq!(Motif::Cycle { p: 5 }.iso_count(), 12);
        assert_eq!(Motif::KStar { k: 3 }.iso_count(), 4);
    }

    #[test]
    fn complete_graph_normalizes_to_one() {
        let g = Graph::complete(9);
        let one = Normalization::KnownRho { rho: 1.0 };
        for m in [
            Motif::Edge,
            Motif::TwoStar,
            Motif::KStar { k: 3 },
            Motif::KStar { k: 4 },
            Motif::Triangle,
            Motif::Cycle { p: 4 },
            Motif::Cycle { p: 5 },
        ] {
            let v = normalized_count(&g, m, one).unwrap();
            assert!((v - 1.0).abs() < 1e-12, "{m:?}: {v}");
        }
    }

    #[test]
    fn errors() {
        assert!(raw_count(&Graph::complete(2), Motif::Triangle).is_err());
        assert!(raw_count(&Graph::complete(6), Motif::Cycle { p: 6 }).is_err());
        assert!(matches!(
            normalized_count(&Graph::empty(4), Motif::Edge, Normalization::EstimatedRho),
            Err(Error::DegenerateInput(_))
        ));
        assert!(Motif::parse("hexagon").is_err());
    }
}
