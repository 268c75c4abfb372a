//! Euclidean projection onto the convex hull of a finite point set.
//!
//! Wolfe's minimum-norm-point method applied to the translated set
//! `{v - query}`. The active set (the "corral") stays affinely independent;
//! each major step adds the vertex minimising the support function in the
//! direction of the current point, each minor step moves to the affine
//! minimiser of the corral and drops vertices whose weight vanishes.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub(crate) struct Projection {
    pub point: Vec<f64>,
    pub distance: f64,
    pub iterations: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Nearest point of `conv(vertices)` to `query`. Stops early once the
/// distance drops below `inside_tol`.
pub(crate) fn project(
    vertices: &[Vec<f64>],
    query: &[f64],
    inside_tol: f64,
    max_iterations: usize,
) -> Result<Projection> {
    if vertices.is_empty() {
        return Err(Error::Parameter("empty vertex set".into()));
    }
    let shifted: Vec<Vec<f64>> = vertices
        .iter()
        .map(|v| v.iter().zip(query).map(|(a, b)| a - b).collect())
        .collect();
    let scale = shifted
        .iter()
        .map(|p| dot(p, p))
        .fold(0.0, f64::max)
        .max(1.0);
    let eps = 1e-12 * scale;

    let start = (0..shifted.len())
        .min_by(|&a, &b| dot(&shifted[a], &shifted[a]).total_cmp(&dot(&shifted[b], &shifted[b])))
        .expect("non-empty");
    let mut corral = vec![start];
    let mut weights = vec![1.0];
    let mut x = shifted[start].clone();

    for iteration in 0..max_iterations {
        let norm2 = dot(&x, &x);
        if norm2.sqrt() <= inside_tol {
            return Ok(finish(query, &x, iteration));
        }
        let (j, support) = shifted
            .iter()
            .enumerate()
            .map(|(k, p)| (k, dot(&x, p)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("non-empty");
        if norm2 - support <= eps || corral.contains(&j) {
            return Ok(finish(query, &x, iteration));
        }
        corral.push(j);
        weights.push(0.0);

        loop {
            let alpha = affine_minimizer(&shifted, &corral);
            if alpha.iter().all(|&a| a > 1e-15) {
                weights = alpha;
                break;
            }
            // step from the current weights towards alpha until one hits zero
            let mut theta = 1.0f64;
            for (w, a) in weights.iter().zip(&alpha) {
                if *a <= 1e-15 && w - a > 0.0 {
                    theta = theta.min(w / (w - a));
                }
            }
            for (w, a) in weights.iter_mut().zip(&alpha) {
                *w = (1.0 - theta) * *w + theta * a;
            }
            let mut k = 0;
            while k < corral.len() {
                if weights[k] <= 1e-15 {
                    corral.remove(k);
                    weights.remove(k);
                } else {
                    k += 1;
                }
            }
            let total: f64 = weights.iter().sum();
            weights.iter_mut().for_each(|w| *w /= total);
            if corral.len() == 1 {
                break;
            }
        }
        x = combine(&shifted, &corral, &weights);
    }
    Err(Error::NonConvergence {
        iterations: max_iterations,
        best_distance: dot(&x, &x).sqrt(),
    })
}

fn combine(points: &[Vec<f64>], corral: &[usize], weights: &[f64]) -> Vec<f64> {
    let mut x = vec![0.0; points[corral[0]].len()];
    for (&k, &w) in corral.iter().zip(weights) {
        for (xi, pi) in x.iter_mut().zip(&points[k]) {
            *xi += w * pi;
        }
    }
    x
}

/// Weights (summing to one) of the minimum-norm point in the affine hull of
/// the corral, by least squares on differences to the first member.
fn affine_minimizer(points: &[Vec<f64>], corral: &[usize]) -> Vec<f64> {
    let m = corral.len();
    if m == 1 {
        return vec![1.0];
    }
    let base = &points[corral[0]];
    let dim = base.len();
    let diffs = DMatrix::from_fn(dim, m - 1, |r, c| points[corral[c + 1]][r] - base[r]);
    let rhs = DVector::from_iterator(dim, base.iter().map(|v| -v));
    let svd = diffs.svd(true, true);
    let mu = svd
        .solve(&rhs, 1e-12)
        .unwrap_or_else(|_| DVector::zeros(m - 1));
    let mut alpha = Vec::with_capacity(m);
    alpha.push(1.0 - mu.sum());
    alpha.extend(mu.iter());
    alpha
}

fn finish(query: &[f64], x: &[f64], iterations: usize) -> Projection {
    Projection {
        point: query.iter().zip(x).map(|(q, d)| q + d).collect(),
        distance: dot(x, x).sqrt(),
        iterations,
    }
}
