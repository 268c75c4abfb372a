//! Unit-vector configurations and quantum values of pairwise inequalities.
//!
//! For spin measurements on the singlet, `E(X_i Y_j) = -x_i · y_j`. When Bob
//! measures along Alice's own directions the perfect anticorrelation forces
//! `Y_i = -X_i`, so a single-party product picks up the opposite sign:
//! `E(X_i X_j) = +x_i · x_j`. The `transported` flag selects between the two.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inequality::PairwiseInequality;

/// Accepted deviation of a vector norm from 1.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// A normalised value must exceed `1 + VIOLATION_TOLERANCE` to count as a
/// violation.
pub const VIOLATION_TOLERANCE: f64 = 1e-9;

pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Ordered list of unit vectors in `R^dim`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ConfigFile", into = "ConfigFile")]
pub struct UnitVectorConfig {
    dim: usize,
    vectors: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct ConfigFile {
    dim: usize,
    vectors: Vec<Vec<f64>>,
}

impl TryFrom<ConfigFile> for UnitVectorConfig {
    type Error = Error;
    fn try_from(file: ConfigFile) -> Result<Self> {
        UnitVectorConfig::new(file.dim, file.vectors)
    }
}

impl From<UnitVectorConfig> for ConfigFile {
    fn from(c: UnitVectorConfig) -> Self {
        ConfigFile {
            dim: c.dim,
            vectors: c.vectors,
        }
    }
}

impl UnitVectorConfig {
    pub fn new(dim: usize, vectors: Vec<Vec<f64>>) -> Result<Self> {
        for (k, v) in vectors.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::Dimension(format!(
                    "vector {k} has {} components, expected {dim}",
                    v.len()
                )));
            }
            let norm = dot(v, v).sqrt();
            if !((norm - 1.0).abs() <= NORM_TOLERANCE) {
                return Err(Error::Parameter(format!("vector {k} has norm {norm}")));
            }
        }
        Ok(Self { dim, vectors })
    }

    /// Normalises each direction first; zero vectors are rejected.
    pub fn from_directions(dim: usize, directions: Vec<Vec<f64>>) -> Result<Self> {
        let vectors = directions
            .into_iter()
            .enumerate()
            .map(|(k, v)| {
                let norm = dot(&v, &v).sqrt();
                if norm == 0.0 || !norm.is_finite() {
                    return Err(Error::Parameter(format!("direction {k} has norm {norm}")));
                }
                Ok(v.into_iter().map(|c| c / norm).collect())
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(dim, vectors)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    pub fn vector(&self, k: usize) -> &[f64] {
        &self.vectors[k]
    }

    pub fn gram(&self) -> Vec<Vec<f64>> {
        self.vectors
            .iter()
            .map(|x| self.vectors.iter().map(|y| dot(x, y)).collect())
            .collect()
    }

    /// Same vectors with zero coordinates appended up to `dim`.
    pub fn padded(&self, dim: usize) -> Result<Self> {
        if dim < self.dim {
            return Err(Error::Dimension(format!(
                "cannot pad {} to {dim}",
                self.dim
            )));
        }
        let vectors = self
            .vectors
            .iter()
            .map(|v| {
                let mut w = v.clone();
                w.resize(dim, 0.0);
                w
            })
            .collect();
        Ok(Self { dim, vectors })
    }

    /// Concatenation, `self` first.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::Dimension(format!("{} vs {}", self.dim, other.dim)));
        }
        let mut vectors = self.vectors.clone();
        vectors.extend(other.vectors.iter().cloned());
        Ok(Self {
            dim: self.dim,
            vectors,
        })
    }
}

/// Singlet expectation `<S_x ⊗ S_y> = -x · y`.
pub fn singlet_correlation(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Dimension(format!("{} vs {}", x.len(), y.len())));
    }
    Ok(-dot(x, y))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ViolationReport {
    /// Left-hand side under the vector substitution divided by the rhs.
    pub quantum_value: f64,
    /// Left-hand side before normalisation.
    pub raw_value: f64,
    pub classical_bound_normalized: f64,
    pub violated: bool,
    pub transported: bool,
    pub config: UnitVectorConfig,
    pub inequality: PairwiseInequality,
}

/// `sum c_ij E_ij` with `E_ij = +x_i·x_j` (transported) or `-x_i·x_j` (singlet).
/// Vectors are indexed like the flat variables of the inequality.
pub fn correlation_sum(
    ineq: &PairwiseInequality,
    config: &UnitVectorConfig,
    transported: bool,
) -> Result<f64> {
    if config.len() != ineq.variable_count() {
        return Err(Error::Dimension(format!(
            "{} vectors for {} variables",
            config.len(),
            ineq.variable_count()
        )));
    }
    let sign = if transported { 1.0 } else { -1.0 };
    Ok(ineq
        .flat_pairs()
        .map(|(i, j, c)| c * sign * dot(config.vector(i), config.vector(j)))
        .sum())
}

/// Quantum value normalised by the inequality's rhs (which must be positive).
pub fn quantum_value(
    ineq: &PairwiseInequality,
    config: &UnitVectorConfig,
    transported: bool,
) -> Result<ViolationReport> {
    if !(ineq.rhs() > 0.0) {
        return Err(Error::Parameter(format!(
            "normalisation needs a positive rhs, got {}",
            ineq.rhs()
        )));
    }
    let raw_value = correlation_sum(ineq, config, transported)?;
    let quantum_value = raw_value / ineq.rhs();
    Ok(ViolationReport {
        quantum_value,
        raw_value,
        classical_bound_normalized: 1.0,
        violated: quantum_value > 1.0 + VIOLATION_TOLERANCE,
        transported,
        config: config.clone(),
        inequality: ineq.clone(),
    })
}

/// The four measurement directions of the textbook CHSH violation,
/// ordered `x1, x2, y1, y2`.
pub fn chsh_directions() -> UnitVectorConfig {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    UnitVectorConfig::new(
        3,
        vec![
            vec![-h, h, 0.0],
            vec![h, h, 0.0],
            vec![0.0, -1.0, 0.0],
            vec![1.0, 0.0, 0.0],
        ],
    )
    .expect("unit vectors")
}

/// `count` coplanar unit vectors at equal angular spacing.
pub fn planar_star(count: usize) -> UnitVectorConfig {
    let vectors = (0..count)
        .map(|k| {
            let a = 2.0 * PI * k as f64 / count as f64;
            vec![a.cos(), a.sin()]
        })
        .collect();
    UnitVectorConfig::new(2, vectors).expect("unit vectors")
}

/// Bouquet: `p` vectors evenly spaced on the cone of half-angle `theta`
/// around the pole, followed by `q` copies of the pole `(0, 0, 1)`.
pub fn bouquet(p: usize, q: usize, theta: f64) -> Result<UnitVectorConfig> {
    bouquet_with_phase(p, q, theta, 0.0)
}

/// [`bouquet`] with the ring rotated by `phase` about the pole.
pub fn bouquet_with_phase(p: usize, q: usize, theta: f64, phase: f64) -> Result<UnitVectorConfig> {
    if p < 1 || q < 1 {
        return Err(Error::Parameter(format!(
            "bouquet needs p, q >= 1, got {p}, {q}"
        )));
    }
    if !(0.0..FRAC_PI_2).contains(&theta) {
        return Err(Error::Parameter(format!(
            "theta = {theta} outside [0, pi/2)"
        )));
    }
    let (s, c) = theta.sin_cos();
    let mut vectors: Vec<Vec<f64>> = (0..p)
        .map(|i| {
            let a = phase + 2.0 * PI * i as f64 / p as f64;
            vec![s * a.cos(), s * a.sin(), c]
        })
        .collect();
    vectors.extend((0..q).map(|_| vec![0.0, 0.0, 1.0]));
    UnitVectorConfig::new(3, vectors)
}

/// Closed-form violation of the `(12, 3, 4)` clique-web inequality on the
/// 12-bouquet.
pub fn v12_formula(theta: f64) -> f64 {
    let near = 1.0 - 2.0 * (PI / 12.0).cos().powi(2) * theta.sin().powi(2);
    (36.0 * theta.cos() - 6.0 * (2.0 * theta).cos() - 12.0 * near - 3.0) / 15.0
}

/// Closed-form violation of the `(2k+1, 2, k-1)` clique-web inequality on the
/// `(2k+1)`-bouquet.
pub fn v2k1_formula(k: usize, theta: f64) -> f64 {
    let kf = k as f64;
    let near = 1.0 - 2.0 * (PI / (4.0 * kf + 2.0)).cos().powi(2) * theta.sin().powi(2);
    ((2.0 * kf + 1.0) * (2.0 * theta.cos() - near) - 1.0) / (2.0 * kf)
}

/// `lim_{k→∞} V_{2k+1}^{k-1}(theta) = 2 cos θ − cos 2θ`.
pub fn v2k1_limit(theta: f64) -> f64 {
    2.0 * theta.cos() - (2.0 * theta).cos()
}
