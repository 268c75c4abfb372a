//! Explicit operator realisation of dot-product correlations.
//!
//! Given unit vectors `x_1..x_n`, the observables `A_i = sum_k x_ik γ_k` built
//! from pairwise anticommuting Hermitian involutions `γ_k` satisfy
//! `A_i A_j + A_j A_i = 2 (x_i · x_j) I`. With `B_j = A_jᵀ` and the maximally
//! entangled state `|Φ> = d^{-1/2} sum_m |m>|m>`, `<Φ|A_i ⊗ B_j|Φ> = x_i · x_j`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{check_guard, Error, Result};
use crate::quantum::{dot, UnitVectorConfig};

/// Largest number of generators built (local dimension 64).
pub const MAX_GENERATORS: usize = 12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn from_rows(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for {rows}x{cols}",
                entries.len()
            )));
        }
        if entries
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::Parameter("non-finite matrix entry".into()));
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m.entries[k * n + k] = ONE;
        }
        m
    }

    fn square(entries: [[Complex64; 2]; 2]) -> Self {
        Self {
            rows: 2,
            cols: 2,
            entries: entries.iter().flatten().copied().collect(),
        }
    }

    pub fn pauli_x() -> Self {
        Self::square([[ZERO, ONE], [ONE, ZERO]])
    }

    pub fn pauli_y() -> Self {
        Self::square([[ZERO, -I], [I, ZERO]])
    }

    pub fn pauli_z() -> Self {
        Self::square([[ONE, ZERO], [ZERO, -ONE]])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.entries[r * self.cols + c]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn kron(&self, other: &Self) -> Self {
        let (rows, cols) = (self.rows * other.rows, self.cols * other.cols);
        let mut entries = vec![ZERO; rows * cols];
        for r1 in 0..self.rows {
            for c1 in 0..self.cols {
                let a = self.get(r1, c1);
                if a == ZERO {
                    continue;
                }
                for r2 in 0..other.rows {
                    for c2 in 0..other.cols {
                        entries[(r1 * other.rows + r2) * cols + c1 * other.cols + c2] =
                            a * other.get(r2, c2);
                    }
                }
            }
        }
        Self {
            rows,
            cols,
            entries,
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == ZERO {
                    continue;
                }
                let row = &other.entries[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.entries[r * other.cols..(r + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "add shape"
        );
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a * factor).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.entries[c * self.rows + r] = self.get(r, c);
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let mut t = self.transpose();
        for z in &mut t.entries {
            *z = z.conj();
        }
        t
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|k| self.get(k, k)).sum()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return f64::INFINITY;
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Entries as `[[re, im], ...]` rows for JSON output.
    pub fn to_pairs(&self) -> Vec<Vec<[f64; 2]>> {
        (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| {
                        let z = self.get(r, c);
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect()
    }
}

impl Serialize for ComplexMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_pairs().serialize(s)
    }
}

/// Local dimension `2^⌈n/2⌉` used for `n` generators.
pub fn generator_dimension(n: usize) -> usize {
    1 << n.div_ceil(2)
}

/// `n` pairwise anticommuting Hermitian involutions of dimension
/// `2^⌈n/2⌉`, from the alternating chain `Z ⊗ … ⊗ Z ⊗ {X, Y} ⊗ I ⊗ … ⊗ I`.
pub fn clifford_generators(n: usize) -> Result<Vec<ComplexMatrix>> {
    if n == 0 {
        return Err(Error::Parameter("need at least one generator".into()));
    }
    check_guard("generator count", n, MAX_GENERATORS)?;
    let sites = n.div_ceil(2);
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let site = k / 2;
        let local = if k % 2 == 0 {
            ComplexMatrix::pauli_x()
        } else {
            ComplexMatrix::pauli_y()
        };
        let mut m = ComplexMatrix::identity(1);
        for s in 0..sites {
            let factor = match s.cmp(&site) {
                std::cmp::Ordering::Less => ComplexMatrix::pauli_z(),
                std::cmp::Ordering::Equal => local.clone(),
                std::cmp::Ordering::Greater => ComplexMatrix::identity(2),
            };
            m = m.kron(&factor);
        }
        out.push(m);
    }
    Ok(out)
}

/// Observables and a shared pure state realising a Gram matrix.
#[derive(Debug, Clone, Serialize)]
pub struct OperatorRealization {
    pub n: usize,
    pub d: usize,
    pub a_ops: Vec<ComplexMatrix>,
    pub b_ops: Vec<ComplexMatrix>,
    /// Amplitudes indexed `m * d + m'` for `|m>|m'>`, serialised as `[re, im]`.
    #[serde(serialize_with = "serialize_state")]
    pub state: Vec<Complex64>,
}

fn serialize_state<S: serde::Serializer>(
    state: &[Complex64],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    state
        .iter()
        .map(|z| [z.re, z.im])
        .collect::<Vec<_>>()
        .serialize(s)
}

/// Builds `A_i = sum_k x_ik γ_k`, `B_j = A_jᵀ` and the maximally entangled
/// state. Vectors are zero-padded to `n` coordinates when `dim < n`.
pub fn realize(config: &UnitVectorConfig) -> Result<OperatorRealization> {
    let n = config.len();
    if n == 0 {
        return Err(Error::Parameter("empty configuration".into()));
    }
    check_guard("vector count", n, MAX_GENERATORS)?;
    let generators_needed = n.max(config.dim());
    let padded = config.padded(generators_needed)?;
    let gammas = clifford_generators(generators_needed)?;
    let d = generator_dimension(generators_needed);
    let a_ops: Vec<ComplexMatrix> = padded
        .vectors()
        .iter()
        .map(|x| {
            x.iter()
                .zip(&gammas)
                .fold(ComplexMatrix::zeros(d, d), |acc, (&c, g)| {
                    acc.add(&g.scale(Complex64::new(c, 0.0)))
                })
        })
        .collect();
    let b_ops = a_ops.iter().map(ComplexMatrix::transpose).collect();
    let amp = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    let mut state = vec![ZERO; d * d];
    for m in 0..d {
        state[m * d + m] = amp;
    }
    Ok(OperatorRealization {
        n,
        d,
        a_ops,
        b_ops,
        state,
    })
}

impl OperatorRealization {
    fn state_matrix(&self) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.d,
            cols: self.d,
            entries: self.state.clone(),
        }
    }

    /// `<state| a ⊗ b |state>`; `None` stands for the identity.
    pub fn expectation(&self, a: Option<&ComplexMatrix>, b: Option<&ComplexMatrix>) -> Complex64 {
        // (A ⊗ B) vec(Ψ) = vec(A Ψ Bᵀ) for row-major vec
        let psi = self.state_matrix();
        let left = match a {
            Some(a) => a.matmul(&psi),
            None => psi.clone(),
        };
        let full = match b {
            Some(b) => left.matmul(&b.transpose()),
            None => left,
        };
        psi.entries
            .iter()
            .zip(&full.entries)
            .map(|(p, f)| p.conj() * f)
            .sum()
    }

    /// Matrix of `<A_i ⊗ B_j>`.
    pub fn correlations(&self) -> Vec<Vec<Complex64>> {
        self.a_ops
            .iter()
            .map(|a| {
                self.b_ops
                    .iter()
                    .map(|b| self.expectation(Some(a), Some(b)))
                    .collect()
            })
            .collect()
    }
}

/// Largest deviation found for each property.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RealizationReport {
    pub hermiticity: f64,
    pub squares_to_identity: f64,
    pub traceless: f64,
    pub state_norm: f64,
    pub marginals: f64,
    pub correlation_vs_gram: f64,
    pub anticommutator: f64,
}

impl RealizationReport {
    pub fn max_deviation(&self) -> f64 {
        [
            self.hermiticity,
            self.squares_to_identity,
            self.traceless,
            self.state_norm,
            self.marginals,
            self.correlation_vs_gram,
            self.anticommutator,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn passes(&self, tolerance: f64) -> bool {
        self.max_deviation() < tolerance
    }
}

/// Checks every claimed property of a realisation against `config`.
/// Each entry is a max deviation; a malformed realisation shows up as a large
/// deviation rather than an error.
pub fn verify_realization(
    real: &OperatorRealization,
    config: &UnitVectorConfig,
) -> RealizationReport {
    let d = real.d;
    let id = ComplexMatrix::identity(d);
    let ops = || real.a_ops.iter().chain(&real.b_ops);

    let hermiticity = ops()
        .map(|m| m.max_abs_diff(&m.adjoint()))
        .fold(0.0, f64::max);
    let squares_to_identity = ops()
        .map(|m| m.matmul(m).max_abs_diff(&id))
        .fold(0.0, f64::max);
    let traceless = ops().map(|m| m.trace().norm()).fold(0.0, f64::max);
    let norm: f64 = real.state.iter().map(|z| z.norm_sqr()).sum();
    let state_norm = (norm.sqrt() - 1.0).abs();
    let marginals = real
        .a_ops
        .iter()
        .map(|a| real.expectation(Some(a), None).norm())
        .chain(
            real.b_ops
                .iter()
                .map(|b| real.expectation(None, Some(b)).norm()),
        )
        .fold(0.0, f64::max);

    let gram = config.gram();
    let mut correlation_vs_gram: f64 =
        if real.a_ops.len() == config.len() && real.b_ops.len() == config.len() {
            0.0
        } else {
            f64::INFINITY
        };
    if correlation_vs_gram == 0.0 {
        for (i, row) in real.correlations().iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                let target = Complex64::new(gram[i][j], 0.0);
                correlation_vs_gram = correlation_vs_gram.max((c - target).norm());
            }
        }
    }

    let mut anticommutator: f64 = 0.0;
    for family in [&real.a_ops, &real.b_ops] {
        for (i, a) in family.iter().enumerate() {
            for (j, b) in family.iter().enumerate().skip(i) {
                let sum = a.matmul(b).add(&b.matmul(a));
                let target = match (config.vectors().get(i), config.vectors().get(j)) {
                    (Some(x), Some(y)) => dot(x, y),
                    _ => f64::NAN,
                };
                let expected = id.scale(Complex64::new(2.0 * target, 0.0));
                let dev = sum.max_abs_diff(&expected);
                anticommutator = anticommutator.max(if dev.is_nan() { f64::INFINITY } else { dev });
            }
        }
    }

    RealizationReport {
        hermiticity,
        squares_to_identity,
        traceless,
        state_norm,
        marginals,
        correlation_vs_gram,
        anticommutator,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::planar_star;

    #[test]
    fn two_generators_are_pauli_x_and_y() {
        let g = clifford_generators(2).unwrap();
        assert_eq!(g[0], ComplexMatrix::pauli_x());
        assert_eq!(g[1], ComplexMatrix::pauli_y());
        let id = ComplexMatrix::identity(2);
        assert_eq!(g[0].matmul(&g[0]), id);
        assert_eq!(
            g[0].matmul(&g[1]).add(&g[1].matmul(&g[0])),
            ComplexMatrix::zeros(2, 2)
        );
    }

    #[test]
    fn generator_algebra() {
        for n in 1..=7 {
            let g = clifford_generators(n).unwrap();
            let d = generator_dimension(n);
            assert_eq!(g.len(), n);
            for (k, a) in g.iter().enumerate() {
                assert_eq!(a.rows(), d);
                assert!(a.max_abs_diff(&a.adjoint()) < 1e-14);
                for (l, b) in g.iter().enumerate() {
                    let tr = a.matmul(b).trace();
                    let expected = if k == l { d as f64 } else { 0.0 };
                    assert!((tr - Complex64::new(expected, 0.0)).norm() < 1e-14);
                    if k != l {
                        let anti = a.matmul(b).add(&b.matmul(a));
                        assert!(anti.max_abs_diff(&ComplexMatrix::zeros(d, d)) < 1e-14);
                    }
                }
            }
        }
        assert_eq!(generator_dimension(3), 4);
        assert!(clifford_generators(0).is_err());
        assert!(matches!(
            clifford_generators(13),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn single_vector_is_perfectly_correlated() {
        let c = UnitVectorConfig::new(1, vec![vec![1.0]]).unwrap();
        let r = realize(&c).unwrap();
        assert!((r.correlations()[0][0] - ONE).norm() < 1e-14);
        assert!(verify_realization(&r, &c).passes(1e-10));
    }

    #[test]
    fn orthonormal_basis_gives_identity_correlations() {
        let n = 4;
        let basis: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|k| if k == i { 1.0 } else { 0.0 }).collect())
            .collect();
        let c = UnitVectorConfig::new(n, basis).unwrap();
        let r = realize(&c).unwrap();
        for (i, row) in r.correlations().iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((v - Complex64::new(expected, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn coplanar_triple_correlates_at_minus_half() {
        let c = planar_star(3);
        let r = realize(&c).unwrap();
        assert_eq!(r.d, 4);
        let corr = r.correlations();
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert!((corr[i][j].re + 0.5).abs() < 1e-14);
                    // transported sign of the singlet value
                    let singlet =
                        crate::quantum::singlet_correlation(c.vector(i), c.vector(j)).unwrap();
                    assert!((corr[i][j].re + singlet).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn planar_pairs_track_angle() {
        for step in 0..24 {
            let phi = step as f64 * std::f64::consts::PI / 12.0;
            let c =
                UnitVectorConfig::new(2, vec![vec![1.0, 0.0], vec![phi.cos(), phi.sin()]]).unwrap();
            let r = realize(&c).unwrap();
            assert!((r.correlations()[0][1].re - phi.cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn zeroed_observable_is_caught() {
        let c = planar_star(3);
        let mut r = realize(&c).unwrap();
        r.a_ops[1] = ComplexMatrix::zeros(r.d, r.d);
        let report = verify_realization(&r, &c);
        assert!((report.squares_to_identity - 1.0).abs() < 1e-14);
        assert!(!report.passes(1e-10));
    }

    #[test]
    fn matrices_serialise_as_pairs() {
        let json = serde_json::to_string(&ComplexMatrix::pauli_y()).unwrap();
        assert_eq!(json, "[[[0.0,0.0],[-0.0,-1.0]],[[0.0,1.0],[0.0,0.0]]]");
    }
}
