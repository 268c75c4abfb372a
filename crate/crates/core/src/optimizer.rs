//! Violation maximisation: bouquet angle scans, coordinate ascent over unit
//! vectors, and ratio probes against the classical bound.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{check_guard, Error, Result};
use crate::inequality::{classical_bound_guarded, PairwiseInequality, DEFAULT_GUARD};
use crate::quantum::{dot, v12_formula, v2k1_formula, UnitVectorConfig};
use crate::webs::WebSpec;

/// Known values and bounds of the Grothendieck constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrothendieckBounds {
    pub kg2: f64,
    pub kg3_lower: f64,
    pub kg3_upper: f64,
    pub kg_lower: f64,
    pub kg_upper: f64,
}

impl GrothendieckBounds {
    pub const KNOWN: Self = Self {
        kg2: SQRT_2,
        kg3_lower: SQRT_2,
        kg3_upper: 1.5163,
        kg_lower: 1.6770,
        // pi / (2 ln(1 + sqrt 2))
        kg_upper: 1.782_213_978_191_369_3,
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ThetaFamily {
    /// 12-bouquet against the `(12, 3, 4)` clique-web inequality.
    Bouquet12,
    /// `(2k+1)`-bouquet against the `(2k+1, 2, k-1)` clique-web inequality.
    Bouquet2k1 { k: usize },
}

impl ThetaFamily {
    pub fn web(&self) -> Result<WebSpec> {
        match *self {
            Self::Bouquet12 => WebSpec::new(12, 3, 4),
            Self::Bouquet2k1 { k } => WebSpec::odd_ring(k),
        }
    }

    /// Closed-form normalised value at `theta`.
    pub fn value(&self, theta: f64) -> f64 {
        match *self {
            Self::Bouquet12 => v12_formula(theta),
            Self::Bouquet2k1 { k } => v2k1_formula(k, theta),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThetaScanResult {
    pub family: ThetaFamily,
    pub grid: Vec<(f64, f64)>,
    pub best_theta: f64,
    pub best_value: f64,
    /// Range of `theta` where the value exceeds one.
    pub violation_interval: Option<(f64, f64)>,
}

const THETA_TOLERANCE: f64 = 1e-10;

/// Uniform grid on the open interval `(0, pi/2)`, golden-section refinement
/// of the best grid point, and bisection for the edges of the violation
/// range.
pub fn scan_theta(family: ThetaFamily, grid_points: usize) -> Result<ThetaScanResult> {
    if grid_points < 10 {
        return Err(Error::Parameter(format!(
            "need at least 10 grid points, got {grid_points}"
        )));
    }
    family.web()?;
    let step = FRAC_PI_2 / (grid_points + 1) as f64;
    let grid: Vec<(f64, f64)> = (1..=grid_points)
        .map(|i| {
            let t = i as f64 * step;
            (t, family.value(t))
        })
        .collect();
    let best = (0..grid.len())
        .max_by(|&a, &b| grid[a].1.total_cmp(&grid[b].1).then(b.cmp(&a)))
        .expect("non-empty grid");
    let lo = if best == 0 { 0.0 } else { grid[best - 1].0 };
    let hi = if best + 1 == grid.len() {
        FRAC_PI_2
    } else {
        grid[best + 1].0
    };
    let (mut best_theta, mut best_value) = golden_max(|t| family.value(t), lo, hi);
    if grid[best].1 > best_value {
        (best_theta, best_value) = grid[best];
    }

    let above = |t: f64| family.value(t) > 1.0;
    let violation_interval = match (
        grid.iter().position(|g| g.1 > 1.0),
        grid.iter().rposition(|g| g.1 > 1.0),
    ) {
        (Some(first), Some(last)) => {
            let start = if first == 0 {
                0.0
            } else {
                bisect(above, grid[first - 1].0, grid[first].0)
            };
            let end = if last + 1 == grid.len() {
                FRAC_PI_2
            } else {
                bisect(above, grid[last + 1].0, grid[last].0)
            };
            Some((start, end))
        }
        _ => None,
    };
    Ok(ThetaScanResult {
        family,
        grid,
        best_theta,
        best_value,
        violation_interval,
    })
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > THETA_TOLERANCE {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let t = (a + b) / 2.0;
    (t, f(t))
}

/// Crossing between `outside` (predicate false) and `inside` (true).
fn bisect(pred: impl Fn(f64) -> bool, mut outside: f64, mut inside: f64) -> f64 {
    while (inside - outside).abs() > THETA_TOLERANCE {
        let mid = (inside + outside) / 2.0;
        if pred(mid) {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    (inside + outside) / 2.0
}

/// Default number of random restarts of [`gram_ascent`].
pub const DEFAULT_RESTARTS: usize = 32;
const IMPROVEMENT_TOLERANCE: f64 = 1e-10;
const MAX_SWEEPS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GramAscentResult {
    pub config: UnitVectorConfig,
    /// `sum a_ij x_i·x_j`.
    pub objective: f64,
    pub classical_bound: f64,
    /// `objective / classical_bound`; absent when the bound is not positive.
    pub ratio: Option<f64>,
    pub restarts_used: usize,
    /// Every restart stopped on the improvement tolerance.
    pub converged: bool,
    /// No single update decreased the objective, over all restarts.
    pub monotone: bool,
    /// Objective after each update of the winning restart.
    #[serde(skip)]
    pub history: Vec<f64>,
}

struct Run {
    vectors: Vec<Vec<f64>>,
    objective: f64,
    converged: bool,
    monotone: bool,
    history: Vec<f64>,
}

/// Round-robin `x_i <- normalize(sum_j a_ij x_j)` from `restarts` seeded
/// random starts; the best run is returned. A vanishing field leaves `x_i`
/// unchanged for that pass.
pub fn gram_ascent(
    a: &PairwiseInequality,
    dim: usize,
    restarts: usize,
    seed: u64,
) -> Result<GramAscentResult> {
    gram_ascent_guarded(a, dim, restarts, seed, DEFAULT_GUARD)
}

pub fn gram_ascent_guarded(
    a: &PairwiseInequality,
    dim: usize,
    restarts: usize,
    seed: u64,
    guard: usize,
) -> Result<GramAscentResult> {
    let a = a.to_complete_graph();
    let n = a.variable_count();
    if dim == 0 || (n > 0 && dim > n) {
        return Err(Error::Parameter(format!(
            "dimension {dim} must lie in 1..={n}"
        )));
    }
    if restarts == 0 {
        return Err(Error::Parameter("need at least one restart".into()));
    }
    let classical_bound = classical_bound_guarded(&a, guard)?.max_value;
    let mut matrix = vec![vec![0.0; n]; n];
    for (i, j, v) in a.flat_pairs() {
        matrix[i][j] += v;
        matrix[j][i] += v;
    }
    let runs = run_restarts(&matrix, dim, restarts, seed);
    let converged = runs.iter().all(|r| r.converged);
    let monotone = runs.iter().all(|r| r.monotone);
    let best = runs
        .into_iter()
        .reduce(|x, y| if y.objective > x.objective { y } else { x })
        .expect("at least one restart");
    let config = UnitVectorConfig::new(dim, best.vectors)?;
    Ok(GramAscentResult {
        objective: best.objective,
        ratio: (classical_bound > 0.0).then(|| best.objective / classical_bound),
        classical_bound,
        config,
        restarts_used: restarts,
        converged,
        monotone,
        history: best.history,
    })
}

#[cfg(feature = "parallel")]
fn run_restarts(matrix: &[Vec<f64>], dim: usize, restarts: usize, seed: u64) -> Vec<Run> {
    use rayon::prelude::*;
    (0..restarts)
        .into_par_iter()
        .map(|r| ascend(matrix, random_start(matrix.len(), dim, seed, r as u64)))
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn run_restarts(matrix: &[Vec<f64>], dim: usize, restarts: usize, seed: u64) -> Vec<Run> {
    (0..restarts)
        .map(|r| ascend(matrix, random_start(matrix.len(), dim, seed, r as u64)))
        .collect()
}

/// Uniform points on the sphere from stream `restart` of the seeded generator.
fn random_start(n: usize, dim: usize, seed: u64, restart: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart);
    (0..n)
        .map(|_| loop {
            let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
            let norm = dot(&v, &v).sqrt();
            if norm > 1e-12 {
                break v.into_iter().map(|c| c / norm).collect();
            }
        })
        .collect()
}

fn objective(matrix: &[Vec<f64>], x: &[Vec<f64>]) -> f64 {
    let mut total = 0.0;
    for i in 0..x.len() {
        for j in (i + 1)..x.len() {
            if matrix[i][j] != 0.0 {
                total += matrix[i][j] * dot(&x[i], &x[j]);
            }
        }
    }
    total
}

fn ascend(matrix: &[Vec<f64>], mut x: Vec<Vec<f64>>) -> Run {
    let n = x.len();
    let dim = x.first().map_or(0, Vec::len);
    let scale: f64 = matrix
        .iter()
        .flatten()
        .map(|v| v.abs())
        .sum::<f64>()
        .max(1.0);
    let mut current = objective(matrix, &x);
    let mut history = vec![current];
    let mut monotone = true;
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let start = current;
        for i in 0..n {
            let mut field = vec![0.0; dim];
            for (j, xj) in x.iter().enumerate() {
                let w = matrix[i][j];
                if j != i && w != 0.0 {
                    for (f, c) in field.iter_mut().zip(xj) {
                        *f += w * c;
                    }
                }
            }
            let norm = dot(&field, &field).sqrt();
            if norm <= 1e-300 {
                history.push(current);
                continue;
            }
            let new: Vec<f64> = field.iter().map(|f| f / norm).collect();
            // the objective is linear in x_i with gradient `field`
            let next = current + norm - dot(&field, &x[i]);
            if next < current - 1e-12 * scale {
                monotone = false;
            }
            x[i] = new;
            current = next;
            history.push(current);
        }
        current = objective(matrix, &x);
        if current - start < IMPROVEMENT_TOLERANCE {
            converged = true;
            break;
        }
    }
    Run {
        vectors: x,
        objective: current,
        converged,
        monotone,
        history,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioProbeSummary {
    pub n: usize,
    pub instances: usize,
    pub ratios: Vec<f64>,
    pub max_ratio: f64,
    pub mean_ratio: f64,
    /// Instances whose vector value beats the classical bound.
    pub violating_instances: usize,
    pub all_monotone: bool,
    pub bounds: GrothendieckBounds,
}

fn summarize(n: usize, ratios: Vec<f64>, all_monotone: bool) -> RatioProbeSummary {
    let max_ratio = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean_ratio = ratios.iter().sum::<f64>() / ratios.len() as f64;
    RatioProbeSummary {
        n,
        instances: ratios.len(),
        violating_instances: ratios.iter().filter(|&&r| r > 1.0 + 1e-9).count(),
        ratios,
        max_ratio,
        mean_ratio,
        all_monotone,
        bounds: GrothendieckBounds::KNOWN,
    }
}

fn probe_instance(n: usize, signs: impl Iterator<Item = f64>, seed: u64) -> Result<(f64, bool)> {
    let pairs = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j)));
    let a = PairwiseInequality::complete(n, pairs.zip(signs), 1.0)?;
    let result = gram_ascent(&a, n, DEFAULT_RESTARTS, seed)?;
    let ratio = result
        .ratio
        .ok_or_else(|| Error::Parameter("classical bound is not positive".into()))?;
    Ok((ratio, result.monotone))
}

/// Vector-to-classical ratio on `instances` random ±1 matrices over `K_n`.
pub fn ratio_probe(n: usize, instances: usize, seed: u64) -> Result<RatioProbeSummary> {
    check_guard("variable count", n, DEFAULT_GUARD)?;
    if n < 2 || instances == 0 {
        return Err(Error::Parameter(format!(
            "need n >= 2 and instances >= 1, got {n}, {instances}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = n * (n - 1) / 2;
    let mut ratios = Vec::with_capacity(instances);
    let mut all_monotone = true;
    for k in 0..instances {
        let signs: Vec<f64> = (0..pairs)
            .map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 })
            .collect();
        let (ratio, monotone) = probe_instance(n, signs.into_iter(), seed.wrapping_add(k as u64))?;
        ratios.push(ratio);
        all_monotone &= monotone;
    }
    Ok(summarize(n, ratios, all_monotone))
}

/// [`ratio_probe`] over every ±1 sign pattern on the pairs of `K_n`.
pub fn exhaustive_ratio_probe(n: usize) -> Result<RatioProbeSummary> {
    if !(2..=5).contains(&n) {
        return Err(Error::Parameter(format!(
            "exhaustive probe supports 2 <= n <= 5, got {n}"
        )));
    }
    let pairs = n * (n - 1) / 2;
    let mut ratios = Vec::with_capacity(1 << pairs);
    let mut all_monotone = true;
    for mask in 0u64..(1 << pairs) {
        let signs = (0..pairs).map(|k| if (mask >> k) & 1 == 1 { -1.0 } else { 1.0 });
        let (ratio, monotone) = probe_instance(n, signs, mask)?;
        ratios.push(ratio);
        all_monotone &= monotone;
    }
    Ok(summarize(n, ratios, all_monotone))
}

/// Ratios of random Gaussian bipartite `m x m` families with planar vectors.
pub fn planar_bipartite_ratios(m: usize, instances: usize, seed: u64) -> Result<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..instances)
        .map(|k| {
            let coeffs: Vec<((usize, usize), f64)> = (0..m * m)
                .map(|e| ((e / m, e % m), rng.sample(StandardNormal)))
                .collect();
            let b = PairwiseInequality::bipartite(m, m, coeffs, 1.0)?;
            let result = gram_ascent(&b, 2, 8, seed.wrapping_add(k as u64))?;
            result
                .ratio
                .ok_or_else(|| Error::Parameter("classical bound is not positive".into()))
        })
        .collect()
}

/// `pi / (2 ln(1 + sqrt 2))`.
pub fn krivine_bound() -> f64 {
    PI / (2.0 * (1.0 + SQRT_2).ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inequality::{chsh, triangle};
    use crate::quantum::{bouquet, quantum_value};
    use crate::webs::clique_web_inequality;

    #[test]
    fn constants() {
        assert!((GrothendieckBounds::KNOWN.kg_upper - krivine_bound()).abs() < 1e-12);
        assert!((krivine_bound() - 1.7822).abs() < 5e-5);
    }

    #[test]
    fn twelve_bouquet_scan() {
        let s = scan_theta(ThetaFamily::Bouquet12, 200).unwrap();
        assert!((s.best_value - 1.5209).abs() < 5e-4);
        assert!((s.best_theta / PI - 0.32477).abs() < 1e-3);
        let (lo, hi) = s.violation_interval.unwrap();
        assert!(lo < 0.1 && hi > s.best_theta);
        assert!(ThetaFamily::Bouquet12.value(hi - 1e-6) > 1.0);
        assert!(ThetaFamily::Bouquet12.value(hi + 1e-6) < 1.0);
        assert!(scan_theta(ThetaFamily::Bouquet12, 9).is_err());
    }

    #[test]
    fn odd_bouquet_scans() {
        let s = scan_theta(ThetaFamily::Bouquet2k1 { k: 5 }, 200).unwrap();
        assert!((s.best_value - 1.5168).abs() < 5e-4);
        assert!((s.best_theta / PI - 0.3303).abs() < 2e-3);
        let s = scan_theta(ThetaFamily::Bouquet2k1 { k: 1000 }, 200).unwrap();
        assert!((s.best_value - 1.5).abs() < 2e-3);
        assert!((s.best_theta - PI / 3.0).abs() < 2e-3);
        assert!(scan_theta(ThetaFamily::Bouquet2k1 { k: 0 }, 20).is_err());
    }

    #[test]
    fn scan_grid_matches_construction() {
        let family = ThetaFamily::Bouquet12;
        let ineq = clique_web_inequality(&family.web().unwrap());
        for (t, v) in scan_theta(family, 50).unwrap().grid {
            let q = quantum_value(&ineq, &bouquet(12, 3, t).unwrap(), true).unwrap();
            assert!((q.quantum_value - v).abs() < 1e-12);
        }
    }

    #[test]
    fn triangle_ascent() {
        let r = gram_ascent(&triangle(), 2, 8, 7).unwrap();
        assert!((r.objective - 1.5).abs() < 1e-9);
        assert!((r.ratio.unwrap() - 1.5).abs() < 1e-9);
        assert!(r.monotone && r.converged);
        for w in r.history.windows(2) {
            assert!(w[1] >= w[0] - 1e-12);
        }
        for v in r.config.vectors() {
            assert!((dot(v, v) - 1.0).abs() < 1e-12);
        }
        let g = r.config.gram();
        assert!((g[0][1] + 0.5).abs() < 1e-6);
    }

    #[test]
    fn chsh_ascent() {
        let r = gram_ascent(&chsh(), 2, 8, 3).unwrap();
        assert!((r.ratio.unwrap() - SQRT_2).abs() < 1e-9);
    }

    #[test]
    fn ascent_edge_cases() {
        let single = PairwiseInequality::complete(1, [], 1.0).unwrap();
        let r = gram_ascent(&single, 1, 1, 0).unwrap();
        assert_eq!(r.objective, 0.0);
        assert_eq!(r.ratio, None);
        assert!(gram_ascent(&triangle(), 4, 1, 0).is_err());
        assert!(gram_ascent(&triangle(), 2, 0, 0).is_err());
        let r1 = gram_ascent(&triangle(), 3, 4, 11).unwrap();
        let r2 = gram_ascent(&triangle(), 3, 4, 11).unwrap();
        assert_eq!(r1, r2);
    }

    #[test]
    fn small_probes() {
        let s = exhaustive_ratio_probe(3).unwrap();
        assert_eq!(s.instances, 8);
        assert!((s.max_ratio - 1.5).abs() < 1e-9);
        assert!(s.all_monotone);
        let s = ratio_probe(2, 10, 1).unwrap();
        assert!(s.ratios.iter().all(|r| (r - 1.0).abs() < 1e-12));
        assert!(ratio_probe(1, 10, 1).is_err());
    }

    #[test]
    fn planar_bipartite_stays_below_kg2() {
        for r in planar_bipartite_ratios(3, 40, 5).unwrap() {
            assert!(r <= SQRT_2 + 1e-9, "{r}");
        }
    }
}
