//! Independent slow oracles shared by the integration suites.
#![allow(dead_code)]

use netsub::{Graph, Motif};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const ALL_MOTIFS: [Motif; 7] = [
    Motif::Edge,
    Motif::TwoStar,
    Motif::KStar { k: 3 },
    Motif::KStar { k: 4 },
    Motif::Triangle,
    Motif::Cycle { p: 4 },
    Motif::Cycle { p: 5 },
];

pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

/// Seeded small graphs with n <= 12 plus a few named ones.
pub fn small_corpus(count: usize) -> Vec<Graph> {
    let mut out = vec![
        Graph::complete(5),
        Graph::complete(12),
        Graph::path(12),
        Graph::star(11),
        Graph::empty(6),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    while out.len() < count {
        let n = rng.random_range(5..=12);
        let p = rng.random_range(0.1..0.9);
        out.push(erdos_renyi(n, p, rng.random()));
    }
    out
}

fn permutations(p: usize) -> Vec<Vec<usize>> {
    if p == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in permutations(p - 1) {
        for pos in 0..=rest.len() {
            let mut v = rest.clone();
            v.insert(pos, p - 1);
            out.push(v);
        }
    }
    out
}

fn normalized_edges(edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut e: Vec<_> = edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    e.sort_unstable();
    e
}

/// Automorphism group order by trying every vertex permutation.
pub fn automorphisms(motif: Motif) -> usize {
    let edges = normalized_edges(&motif.edge_list());
    permutations(motif.vertices())
        .iter()
        .filter(|perm| {
            let mapped: Vec<_> = edges.iter().map(|&(a, b)| (perm[a], perm[b])).collect();
            normalized_edges(&mapped) == edges
        })
        .count()
}

/// Copies of `motif` by enumerating injective vertex maps.
pub fn brute_force_count(g: &Graph, motif: Motif) -> u128 {
    let p = motif.vertices();
    let edges = motif.edge_list();
    let n = g.n();
    let mut map = vec![0usize; p];
    let mut used = vec![false; n];
    let mut maps = 0u128;
    fn rec(
        depth: usize,
        p: usize,
        g: &Graph,
        edges: &[(usize, usize)],
        map: &mut [usize],
        used: &mut [bool],
        maps: &mut u128,
    ) {
        if depth == p {
            if edges.iter().all(|&(a, b)| g.has_edge(map[a], map[b])) {
                *maps += 1;
            }
            return;
        }
        for v in 0..g.n() {
            if !used[v] {
                used[v] = true;
                map[depth] = v;
                rec(depth + 1, p, g, edges, map, used, maps);
                used[v] = false;
            }
        }
    }
    if n >= p {
        rec(0, p, g, &edges, &mut map, &mut used, &mut maps);
    }
    maps / automorphisms(motif) as u128
}

/// `tr(A^p)` in exact integer arithmetic.
pub fn closed_walks(g: &Graph, p: u32) -> i128 {
    let n = g.n();
    let a: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| g.has_edge(i, j) as i128).collect())
        .collect();
    let mut m = a.clone();
    for _ in 1..p {
        let mut next = vec![vec![0i128; n]; n];
        for i in 0..n {
            for k in 0..n {
                if m[i][k] != 0 {
                    for j in 0..n {
                        next[i][j] += m[i][k] * a[k][j];
                    }
                }
            }
        }
        m = next;
    }
    (0..n).map(|i| m[i][i]).sum()
}

/// `inf { t : #{x <= t} / N >= level }` by scanning candidate points.
pub fn linear_scan_quantile(values: &[f64], level: f64) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = values.len() as f64;
    for &t in &sorted {
        let below = values.iter().filter(|&&v| v <= t).count() as f64;
        if below / n >= level {
            return t;
        }
    }
    *sorted.last().unwrap()
}

/// Complete linkage by recomputing every cluster distance from scratch.
/// Returns `(a, b, height, size)` with scipy-style ids.
pub fn naive_complete_linkage(points: &[Vec<f64>]) -> Vec<(usize, usize, f64, usize)> {
    let n = points.len();
    let dist = |i: usize, j: usize| -> f64 {
        points[i]
            .iter()
            .zip(&points[j])
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    };
    let mut clusters: Vec<(usize, Vec<usize>)> = (0..n).map(|i| (i, vec![i])).collect();
    let mut out = Vec::new();
    while clusters.len() > 1 {
        let mut best = (0, 1, f64::INFINITY);
        for i in 0..clusters.len() {
            for j in i + 1..clusters.len() {
                let mut d: f64 = 0.0;
                for &x in &clusters[i].1 {
                    for &y in &clusters[j].1 {
                        d = d.max(dist(x, y));
                    }
                }
                if d < best.2 {
                    best = (i, j, d);
                }
            }
        }
        let (i, j, h) = best;
        let (id_j, members_j) = clusters.remove(j);
        let (id_i, mut members_i) = clusters[i].clone();
        members_i.extend(members_j);
        let size = members_i.len();
        out.push((id_i.min(id_j), id_i.max(id_j), h, size));
        clusters[i] = (n + out.len() - 1, members_i);
    }
    out
}
