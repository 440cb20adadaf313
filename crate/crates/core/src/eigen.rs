//! Symmetric eigensolvers: a dense reference path and a Lanczos iteration with
//! full reorthogonalization for the extreme eigenvalues of large sparse
//! operators.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng;

/// A real symmetric linear operator.
pub trait SymmetricOperator {
    fn dim(&self) -> usize;
    /// `y = A x`
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

impl SymmetricOperator for Graph {
    fn dim(&self) -> usize {
        self.n()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.mul_vec(x, y)
    }
}

impl SymmetricOperator for DMatrix<f64> {
    fn dim(&self) -> usize {
        self.nrows()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let n = self.nrows();
        y.iter_mut().for_each(|v| *v = 0.0);
        // column-major: accumulate column by column
        for (j, &xj) in x.iter().enumerate() {
            if xj != 0.0 {
                let col = &self.as_slice()[j * n..(j + 1) * n];
                for (yi, &a) in y.iter_mut().zip(col) {
                    *yi += a * xj;
                }
            }
        }
    }
}

/// All eigenvalues of a dense symmetric matrix, sorted descending.
pub fn dense_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

/// Extreme eigenvalues as returned by the solvers: `top` descending, `bottom` ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct Extremes {
    pub top: Vec<f64>,
    pub bottom: Vec<f64>,
}

impl Extremes {
    pub(crate) fn from_sorted_desc(all: &[f64], k_pos: usize, k_neg: usize) -> Self {
        Extremes {
            top: all[..k_pos].to_vec(),
            bottom: all.iter().rev().take(k_neg).copied().collect(),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct LanczosOptions {
    /// Residual tolerance relative to `max(1, |theta|)`.
    pub tol: f64,
    /// Iteration cap; `None` means `10 * (k_pos + k_neg) + 200`.
    pub max_iter: Option<usize>,
    /// Seed for the start vector and for restarts after breakdown.
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        LanczosOptions {
            tol: 1e-8,
            max_iter: None,
            seed: 0x5eed,
        }
    }
}

/// Eigenvalues of a symmetric tridiagonal matrix together with the last
/// component of each normalized eigenvector (implicit QL with Wilkinson
/// shifts, accumulating a single row of the rotation product).
///
/// `diag` has length m, `off[i]` couples i and i+1 (length m - 1).
pub(crate) fn tridiagonal_eigen(diag: &[f64], off: &[f64]) -> Option<(Vec<f64>, Vec<f64>)> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n.saturating_sub(1)].copy_from_slice(&off[..n.saturating_sub(1)]);
    let mut z = vec![0.0; n];
    if n == 0 {
        return Some((d, z));
    }
    z[n - 1] = 1.0;

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return None;
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Some((d, z))
}

/// Extreme eigenvalues of a symmetric operator by Lanczos with full
/// reorthogonalization. Both ends of the spectrum are read off a single
/// Krylov sequence; convergence is declared when every requested Ritz pair
/// has residual `|beta_m * s_m| <= tol * max(1, |theta|)`.
pub fn lanczos_extremes<A: SymmetricOperator + ?Sized>(
    op: &A,
    k_pos: usize,
    k_neg: usize,
    opts: &LanczosOptions,
) -> Result<Extremes> {
    let n = op.dim();
    let k = k_pos + k_neg;
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!(
            "requested {k_pos}+{k_neg} eigenvalues of a {n}-dimensional operator"
        )));
    }
    let cap = opts.max_iter.unwrap_or(10 * k + 200).min(n).max(k);

    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(cap);
    let mut alpha: Vec<f64> = Vec::with_capacity(cap);
    let mut beta: Vec<f64> = Vec::with_capacity(cap);
    let mut restarts = 0u64;

    let mut v = fresh_direction(n, &basis, opts.seed, restarts)
        .ok_or_else(|| Error::DegenerateInput("could not draw a Lanczos start vector".into()))?;
    let mut w = vec![0.0; n];
    let mut next_check = (k + 10).min(cap);

    loop {
        op.apply(&v, &mut w);
        let a = dot(&w, &v);
        for (wi, vi) in w.iter_mut().zip(&v) {
            *wi -= a * vi;
        }
        if let (Some(prev), Some(&b)) = (basis.last(), beta.last()) {
            for (wi, pi) in w.iter_mut().zip(prev) {
                *wi -= b * pi;
            }
        }
        basis.push(std::mem::take(&mut v));
        alpha.push(a);
        reorthogonalize(&mut w, &basis);
        reorthogonalize(&mut w, &basis);
        let mut b = norm(&w);
        let m = basis.len();

        let scale = alpha.iter().chain(beta.iter()).fold(1.0f64, |s, x| s.max(x.abs()));
        let breakdown = b <= 1e-12 * scale;
        if breakdown {
            b = 0.0;
        }

        let exhausted = m == n;
        // A breakdown only proves the current Krylov block invariant; repeated
        // eigenvalues may still be missing, so restart before judging.
        if (m >= next_check && !breakdown) || exhausted || m == cap {
            let (theta, last_comp) = tridiagonal_eigen(&alpha, &beta).ok_or(Error::NonConvergence {
                iterations: m,
                converged: 0,
                requested: k,
            })?;
            let mut pairs: Vec<(f64, f64)> = theta
                .iter()
                .zip(&last_comp)
                .map(|(&t, &s)| (t, (b * s).abs()))
                .collect();
            pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
            let wanted = pairs[..k_pos.min(m)].iter().chain(pairs[m.saturating_sub(k_neg)..].iter());
            let converged = if m < k {
                0
            } else {
                wanted
                    .filter(|(t, res)| exhausted || *res <= opts.tol * t.abs().max(1.0))
                    .count()
            };
            if m >= k && converged == k {
                let sorted: Vec<f64> = pairs.iter().map(|p| p.0).collect();
                return Ok(Extremes::from_sorted_desc(&sorted, k_pos, k_neg));
            }
            if m == cap {
                return Err(Error::NonConvergence {
                    iterations: m,
                    converged,
                    requested: k,
                });
            }
            next_check = (m + (m / 8).max(5)).min(cap);
        }

        if breakdown {
            restarts += 1;
            match fresh_direction(n, &basis, opts.seed, restarts) {
                Some(fresh) => v = fresh,
                None => {
                    // Krylov space exhausted; the tridiagonal is exact.
                    let (theta, _) = tridiagonal_eigen(&alpha, &beta).ok_or(Error::NonConvergence {
                        iterations: m,
                        converged: 0,
                        requested: k,
                    })?;
                    let mut sorted = theta;
                    sorted.sort_by(|x, y| y.total_cmp(x));
                    if sorted.len() < k {
                        return Err(Error::NonConvergence {
                            iterations: m,
                            converged: sorted.len(),
                            requested: k,
                        });
                    }
                    return Ok(Extremes::from_sorted_desc(&sorted, k_pos, k_neg));
                }
            }
        } else {
            for x in w.iter_mut() {
                *x /= b;
            }
            v = std::mem::replace(&mut w, vec![0.0; n]);
        }
        beta.push(b);
    }
}

fn fresh_direction(n: usize, basis: &[Vec<f64>], seed: u64, restart: u64) -> Option<Vec<f64>> {
    for attempt in 0..4u64 {
        let mut v: Vec<f64> = (0..n)
            .map(|i| rng::uniform(seed, &[rng::tag::LANCZOS, restart, attempt, i as u64]) - 0.5)
            .collect();
        reorthogonalize(&mut v, basis);
        reorthogonalize(&mut v, basis);
        let nv = norm(&v);
        if nv > 1e-8 {
            v.iter_mut().for_each(|x| *x /= nv);
            return Some(v);
        }
    }
    None
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn reorthogonalize(w: &mut [f64], basis: &[Vec<f64>]) {
    for q in basis {
        let c = dot(w, q);
        for (wi, qi) in w.iter_mut().zip(q) {
            *wi -= c * qi;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol * x.abs().max(1.0), "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn tridiagonal_matches_dense() {
        let diag = [2.0, -1.0, 0.5, 3.0, 1.0];
        let off = [1.0, 0.3, -2.0, 0.7];
        let (mut ev, z) = tridiagonal_eigen(&diag, &off).unwrap();
        let mut t = DMatrix::zeros(5, 5);
        for i in 0..5 {
            t[(i, i)] = diag[i];
            if i < 4 {
                t[(i, i + 1)] = off[i];
                t[(i + 1, i)] = off[i];
            }
        }
        let eig = t.clone().symmetric_eigen();
        ev.sort_by(|a, b| b.total_cmp(a));
        assert_close(&ev, &dense_eigenvalues(&t), 1e-12);
        // last components agree in magnitude
        let mut ours: Vec<f64> = z.iter().map(|x| x.abs()).collect();
        let mut theirs: Vec<f64> = (0..5).map(|j| eig.eigenvectors[(4, j)].abs()).collect();
        ours.sort_by(f64::total_cmp);
        theirs.sort_by(f64::total_cmp);
        assert_close(&ours, &theirs, 1e-10);
    }

    #[test]
    fn complete_graph_spectrum() {
        let g = Graph::complete(30);
        let ex = lanczos_extremes(&g, 1, 3, &LanczosOptions::default()).unwrap();
        assert_close(&ex.top, &[29.0], 1e-10);
        assert_close(&ex.bottom, &[-1.0, -1.0, -1.0], 1e-10);
    }

    #[test]
    fn empty_graph_is_zero() {
        let g = Graph::empty(12);
        let ex = lanczos_extremes(&g, 2, 2, &LanczosOptions::default()).unwrap();
        assert_eq!(ex.top, vec![0.0, 0.0]);
        assert_eq!(ex.bottom, vec![0.0, 0.0]);
    }

    #[test]
    fn dense_operator_matches_dense_solver() {
        let n = 40;
        let m = DMatrix::from_fn(n, n, |i, j| ((i * j + i + j) % 7) as f64 - 3.0 + if i == j { 0.5 } else { 0.0 });
        let sym = (&m + m.transpose()) * 0.5;
        let all = dense_eigenvalues(&sym);
        let ex = lanczos_extremes(&sym, 3, 2, &LanczosOptions::default()).unwrap();
        assert_close(&ex.top, &all[..3], 1e-8);
        assert_close(&ex.bottom, &[all[n - 1], all[n - 2]], 1e-8);
    }

    #[test]
    fn rejects_oversized_request() {
        let g = Graph::complete(3);
        assert!(lanczos_extremes(&g, 2, 2, &LanczosOptions::default()).is_err());
    }
}
