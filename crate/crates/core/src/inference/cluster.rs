use crate::error::{Error, Result};

/// One agglomeration step. Leaves are `0..n`; the cluster formed at step `i`
/// gets id `n + i`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Merge {
    pub a: usize,
    pub b: usize,
    pub height: f64,
    /// Number of leaves in the merged cluster.
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dendrogram {
    pub labels: Vec<String>,
    pub merges: Vec<Merge>,
}

fn euclidean(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}

/// Complete-linkage agglomerative clustering under Euclidean distance.
///
/// Exact distance ties are broken by scan order: the merged cluster takes
/// the slot of its lower member.
pub fn cluster_spectra(items: &[(String, Vec<f64>)]) -> Result<Dendrogram> {
    let n = items.len();
    if n < 2 {
        return Err(Error::InvalidArgument(format!("clustering needs at least 2 items, got {n}")));
    }
    let k = items[0].1.len();
    if k == 0 {
        return Err(Error::InvalidArgument("eigenvalue vectors are empty".into()));
    }
    if let Some((label, v)) = items.iter().find(|(_, v)| v.len() != k) {
        return Err(Error::InvalidArgument(format!(
            "item '{label}' has {} eigenvalues, expected {k}",
            v.len()
        )));
    }
    if let Some((label, _)) = items.iter().find(|(_, v)| v.iter().any(|x| !x.is_finite())) {
        return Err(Error::InvalidArgument(format!("item '{label}' has a non-finite eigenvalue")));
    }

    // active slots: (cluster id, size); dist indexed by slot
    let mut active: Vec<(usize, usize)> = (0..n).map(|i| (i, 1)).collect();
    let mut dist: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| euclidean(&items[i].1, &items[j].1)).collect())
        .collect();
    let mut merges = Vec::with_capacity(n - 1);
    while active.len() > 1 {
        let m = active.len();
        let (mut bi, mut bj, mut best) = (0, 1, f64::INFINITY);
        for i in 0..m {
            for j in i + 1..m {
                if dist[i][j] < best {
                    (bi, bj, best) = (i, j, dist[i][j]);
                }
            }
        }
        let (ida, sa) = active[bi];
        let (idb, sb) = active[bj];
        merges.push(Merge {
            a: ida.min(idb),
            b: ida.max(idb),
            height: best,
            size: sa + sb,
        });
        // Lance-Williams update for complete linkage: d(k, i u j) = max(d(k, i), d(k, j))
        for t in 0..m {
            let d = dist[t][bi].max(dist[t][bj]);
            dist[t][bi] = d;
            dist[bi][t] = d;
        }
        dist[bi][bi] = 0.0;
        active[bi] = (n + merges.len() - 1, sa + sb);
        dist.remove(bj);
        for row in dist.iter_mut() {
            row.remove(bj);
        }
        active.remove(bj);
    }
    Ok(Dendrogram {
        labels: items.iter().map(|(l, _)| l.clone()).collect(),
        merges,
    })
}
