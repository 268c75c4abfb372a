//! Werner-state noise: correlations, thresholds and the MAX CUT noise term.
//!
//! Alice's side of a Werner state no longer carries perfect anticorrelation,
//! so transporting a term `X_i X_j` to her side costs up to `1 - eta` per
//! pair. All thresholds here take the worst case of that cost.
//!
//! Coefficient sums use the signed value `S = sum b_ij x_i·x_j`; the noisy
//! value is `eta S - (1 - eta) N` and a violation needs it to exceed one.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::inequality::{
    classical_bound_guarded, Mode, PairwiseInequality, SignAssignment, DEFAULT_GUARD,
};
use crate::quantum::{correlation_sum, dot, UnitVectorConfig, VIOLATION_TOLERANCE};
use crate::webs::WebSpec;

/// Werner states with `eta <= 1/3` are separable.
pub const SEPARABILITY_THRESHOLD: f64 = 1.0 / 3.0;
/// CHSH is violated by a Werner state iff `eta > 1/sqrt(2)`.
pub const CHSH_THRESHOLD: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Werner visibility `eta`, strictly between zero and one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WernerParams {
    eta: f64,
}

impl WernerParams {
    pub fn new(eta: f64) -> Result<Self> {
        if !(eta > 0.0 && eta < 1.0) {
            return Err(Error::Parameter(format!("eta = {eta} outside (0, 1)")));
        }
        Ok(Self { eta })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn is_separable(&self) -> bool {
        self.eta <= SEPARABILITY_THRESHOLD
    }
}

/// Accepts the noiseless end `eta = 1` as well.
fn check_eta(eta: f64) -> Result<()> {
    if eta > 0.0 && eta <= 1.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("eta = {eta} outside (0, 1]")))
    }
}

/// `tr[rho_eta (S_x ⊗ S_y)] = -eta x·y`.
pub fn werner_correlation(eta: f64, x: &[f64], y: &[f64]) -> Result<f64> {
    check_eta(eta)?;
    if x.len() != y.len() {
        return Err(Error::Dimension(format!("{} vs {}", x.len(), y.len())));
    }
    Ok(-eta * dot(x, y))
}

/// Admissible range of `E(X_i X_j)` when `E(X_i Y_j) = e_xy`.
pub fn symmetry_band(eta: f64, e_xy: f64) -> Result<(f64, f64)> {
    check_eta(eta)?;
    if e_xy.abs() > eta + 1e-12 {
        return Err(Error::Parameter(format!(
            "|e| = {} exceeds eta = {eta}",
            e_xy.abs()
        )));
    }
    let slack = 1.0 - eta;
    Ok((-slack - e_xy, slack - e_xy))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdSource {
    TriangleFormula,
    CliqueWebFormula,
    PartitionedGeneral,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdReport {
    /// Smallest visibility above which the inequality is violated; 1 when
    /// no visibility below one works.
    pub eta_threshold: f64,
    pub source: ThresholdSource,
    pub violation_possible: bool,
    /// Normalised quantum value (`V` or `S`).
    pub quantum_value: f64,
    /// `N{b}` where it enters the formula.
    pub noise: Option<f64>,
    pub web: Option<WebSpec>,
}

/// `eta = (N + 1) / (N + S)`, clamped to one when `S <= 1`.
fn threshold_from(noise: f64, sum: f64) -> (f64, bool) {
    if sum > 1.0 + VIOLATION_TOLERANCE {
        ((noise + 1.0) / (noise + sum), true)
    } else {
        (1.0, false)
    }
}

/// Threshold of the triangle inequality with three coplanar vectors at
/// mutual 120°: `S = 3/2`, `N = 1`, so `eta = 2 / (5/2) = 0.8`.
pub fn triangle_threshold() -> ThresholdReport {
    let (eta_threshold, violation_possible) = threshold_from(1.0, 1.5);
    ThresholdReport {
        eta_threshold,
        source: ThresholdSource::TriangleFormula,
        violation_possible,
        quantum_value: 1.5,
        noise: Some(1.0),
        web: None,
    }
}

/// Triangle threshold for an arbitrary triple of vectors.
pub fn triangle_threshold_for(config: &UnitVectorConfig) -> Result<ThresholdReport> {
    let mut report = partitioned_threshold(&crate::inequality::triangle(), config)?;
    report.source = ThresholdSource::TriangleFormula;
    Ok(report)
}

/// `eta = p / ((r + 1) V + p - r - 1)` for a clique-web inequality whose
/// normalised quantum value is `V`.
pub fn cliqueweb_threshold(spec: &WebSpec, v: f64) -> Result<ThresholdReport> {
    if !v.is_finite() {
        return Err(Error::Parameter(format!("V = {v} is not finite")));
    }
    let p = spec.p() as f64;
    let r1 = spec.r() as f64 + 1.0;
    let raw = p / (r1 * v + p - r1);
    let violation_possible = v > 1.0 + VIOLATION_TOLERANCE;
    Ok(ThresholdReport {
        eta_threshold: if violation_possible { raw } else { 1.0 },
        source: ThresholdSource::CliqueWebFormula,
        violation_possible,
        quantum_value: v,
        noise: None,
        web: Some(*spec),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoiseQuantity {
    /// Weight `sum |b_ij|` on pairs left uncut by the partition.
    pub value: f64,
    /// `Z_i = +1` marks the block `J`.
    pub argmin_partition: SignAssignment,
}

/// `N{b} = min_Z sum_{i<j} |b_ij| (1 + Z_i Z_j) / 2`: total weight minus the
/// maximum cut of the complete graph weighted by `|b_ij|`.
pub fn noise_quantity(b: &PairwiseInequality) -> Result<NoiseQuantity> {
    noise_quantity_guarded(b, DEFAULT_GUARD)
}

pub fn noise_quantity_guarded(b: &PairwiseInequality, guard: usize) -> Result<NoiseQuantity> {
    let b = b.to_complete_graph();
    let n = b.variable_count();
    // maximising sum -|b| Z_i Z_j is MAX CUT up to an affine change
    let flipped =
        PairwiseInequality::complete(n, b.flat_pairs().map(|(i, j, v)| ((i, j), -v.abs())), 0.0)?;
    let best = classical_bound_guarded(&flipped, guard)?;
    let z = best.argmax.values();
    let value = b
        .flat_pairs()
        .filter(|&(i, j, _)| z[i] == z[j])
        .map(|(_, _, v)| v.abs())
        .sum();
    Ok(NoiseQuantity {
        value,
        argmin_partition: best.argmax,
    })
}

/// `b` rescaled so that its classical bound is one.
fn normalized(b: &PairwiseInequality) -> Result<PairwiseInequality> {
    let complete = b.to_complete_graph();
    let bound = classical_bound_guarded(&complete, DEFAULT_GUARD)?.max_value;
    if !(bound > 0.0) {
        return Err(Error::Parameter(format!(
            "classical bound {bound} is not positive; cannot normalise"
        )));
    }
    complete.scaled(1.0 / bound)?.with_rhs(1.0)
}

fn sum_and_noise(b: &PairwiseInequality, config: &UnitVectorConfig) -> Result<(f64, f64)> {
    if b.mode() == Mode::Bipartite && config.len() != b.variable_count() {
        return Err(Error::Dimension(format!(
            "{} vectors for {} variables",
            config.len(),
            b.variable_count()
        )));
    }
    let b = normalized(b)?;
    let sum = correlation_sum(&b, config, true)?;
    let noise = noise_quantity(&b)?.value;
    Ok((sum, noise))
}

/// Threshold of a coefficient family `b` (normalised to classical bound one
/// internally) under the partition that minimises the noise term.
pub fn partitioned_threshold(
    b: &PairwiseInequality,
    config: &UnitVectorConfig,
) -> Result<ThresholdReport> {
    let (sum, noise) = sum_and_noise(b, config)?;
    let (eta_threshold, violation_possible) = threshold_from(noise, sum);
    Ok(ThresholdReport {
        eta_threshold,
        source: ThresholdSource::PartitionedGeneral,
        violation_possible,
        quantum_value: sum,
        noise: Some(noise),
        web: None,
    })
}

/// `V(eta) = eta S - (1 - eta) N`.
pub fn noisy_violation(b: &PairwiseInequality, config: &UnitVectorConfig, eta: f64) -> Result<f64> {
    check_eta(eta)?;
    let (sum, noise) = sum_and_noise(b, config)?;
    Ok(noisy_value(sum, noise, eta))
}

/// Samples `V(eta)` on a grid of visibilities.
pub fn noisy_curve(
    b: &PairwiseInequality,
    config: &UnitVectorConfig,
    etas: &[f64],
) -> Result<Vec<(f64, f64)>> {
    let (sum, noise) = sum_and_noise(b, config)?;
    etas.iter()
        .map(|&eta| {
            check_eta(eta)?;
            Ok((eta, noisy_value(sum, noise, eta)))
        })
        .collect()
}

fn noisy_value(sum: f64, noise: f64, eta: f64) -> f64 {
    eta * sum - (1.0 - eta) * noise
}
