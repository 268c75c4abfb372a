//! Pairwise Bell inequalities over ±1 variables.
//!
//! An inequality is `sum c_ij X_i X_j <= rhs`, either over the pairs of a
//! single index set (`Complete`, one party measuring with perfect
//! anticorrelation transported to its own side) or over left × right pairs
//! (`Bipartite`, the usual two-party Bell scenario).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::enumerate::QuadraticForm;
use crate::error::{check_guard, Error, Result};

/// Default largest variable count enumerated without an explicit override.
pub const DEFAULT_GUARD: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Complete,
    Bipartite,
}

/// `sum coefficients[(i, j)] * X_i * X_j <= rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "InequalityFile", into = "InequalityFile")]
pub struct PairwiseInequality {
    mode: Mode,
    n_left: usize,
    n_right: usize,
    coefficients: BTreeMap<(usize, usize), f64>,
    rhs: f64,
}

impl PairwiseInequality {
    /// Inequality on the pairs of `n` variables. Keys may be given in either
    /// order; `(j, i)` is stored as `(i, j)`.
    pub fn complete<I>(n: usize, coefficients: I, rhs: f64) -> Result<Self>
    where
        I: IntoIterator<Item = ((usize, usize), f64)>,
    {
        let mut map = BTreeMap::new();
        for ((i, j), value) in coefficients {
            if i == j {
                return Err(Error::Parameter(format!("diagonal pair ({i}, {i})")));
            }
            let key = (i.min(j), i.max(j));
            if key.1 >= n {
                return Err(Error::Dimension(format!(
                    "pair ({i}, {j}) out of range for {n} variables"
                )));
            }
            insert_unique(&mut map, key, value)?;
        }
        Self::build(Mode::Complete, n, 0, map, rhs)
    }

    /// Inequality on `n_left × n_right` cross pairs; `(i, j)` couples left
    /// variable `i` with right variable `j`.
    pub fn bipartite<I>(n_left: usize, n_right: usize, coefficients: I, rhs: f64) -> Result<Self>
    where
        I: IntoIterator<Item = ((usize, usize), f64)>,
    {
        let mut map = BTreeMap::new();
        for ((i, j), value) in coefficients {
            if i >= n_left || j >= n_right {
                return Err(Error::Dimension(format!(
                    "pair ({i}, {j}) out of range for {n_left}x{n_right}"
                )));
            }
            insert_unique(&mut map, (i, j), value)?;
        }
        Self::build(Mode::Bipartite, n_left, n_right, map, rhs)
    }

    fn build(
        mode: Mode,
        n_left: usize,
        n_right: usize,
        coefficients: BTreeMap<(usize, usize), f64>,
        rhs: f64,
    ) -> Result<Self> {
        if !rhs.is_finite() {
            return Err(Error::Parameter("rhs must be finite".into()));
        }
        if let Some((k, v)) = coefficients.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::Parameter(format!("coefficient {k:?} is {v}")));
        }
        Ok(Self {
            mode,
            n_left,
            n_right,
            coefficients,
            rhs,
        })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn n_left(&self) -> usize {
        self.n_left
    }

    pub fn n_right(&self) -> usize {
        self.n_right
    }

    pub fn rhs(&self) -> f64 {
        self.rhs
    }

    pub fn coefficients(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.coefficients
    }

    pub fn coefficient(&self, i: usize, j: usize) -> f64 {
        let key = match self.mode {
            Mode::Complete => (i.min(j), i.max(j)),
            Mode::Bipartite => (i, j),
        };
        self.coefficients.get(&key).copied().unwrap_or(0.0)
    }

    /// Total number of ±1 variables.
    pub fn variable_count(&self) -> usize {
        self.n_left + self.n_right
    }

    /// Coefficients as pairs over the flat variable index (right block offset
    /// by `n_left` in bipartite mode).
    pub fn flat_pairs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let offset = match self.mode {
            Mode::Complete => 0,
            Mode::Bipartite => self.n_left,
        };
        self.coefficients
            .iter()
            .map(move |(&(i, j), &v)| (i, j + offset, v))
    }

    pub fn with_rhs(&self, rhs: f64) -> Result<Self> {
        Self::build(
            self.mode,
            self.n_left,
            self.n_right,
            self.coefficients.clone(),
            rhs,
        )
    }

    /// Multiplies coefficients and rhs by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let coefficients = self
            .coefficients
            .iter()
            .map(|(&k, &v)| (k, v * factor))
            .collect();
        Self::build(
            self.mode,
            self.n_left,
            self.n_right,
            coefficients,
            self.rhs * factor,
        )
    }

    /// The same inequality viewed on the complete graph over all
    /// `n_left + n_right` variables (no identification of parties).
    pub fn to_complete_graph(&self) -> Self {
        match self.mode {
            Mode::Complete => self.clone(),
            Mode::Bipartite => Self {
                mode: Mode::Complete,
                n_left: self.variable_count(),
                n_right: 0,
                coefficients: self.flat_pairs().map(|(i, j, v)| ((i, j), v)).collect(),
                rhs: self.rhs,
            },
        }
    }

    /// Left-hand side at a sign assignment.
    pub fn evaluate(&self, a: &SignAssignment) -> Result<f64> {
        self.check_len(a.len())?;
        let s = a.values();
        Ok(self
            .flat_pairs()
            .map(|(i, j, v)| v * f64::from(s[i] * s[j]))
            .sum())
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.variable_count() {
            return Err(Error::Dimension(format!(
                "assignment has {len} entries, inequality has {} variables",
                self.variable_count()
            )));
        }
        Ok(())
    }

    /// Coefficients doubled, if every doubled coefficient is an integer of
    /// moderate size.
    pub fn doubled_integer_coefficients(&self) -> Option<Vec<(usize, usize, i64)>> {
        const LIMIT: f64 = (1u64 << 40) as f64;
        self.flat_pairs()
            .map(|(i, j, v)| {
                let d = 2.0 * v;
                (d.fract() == 0.0 && d.abs() < LIMIT).then_some((i, j, d as i64))
            })
            .collect()
    }

    /// Translates to cut variables `a_i xor a_j = (1 - X_i X_j) / 2`.
    ///
    /// `sum c X_i X_j <= rhs` becomes `sum (-c) (a_i xor a_j) <= (rhs - sum c) / 2`.
    pub fn to_cut_form(&self) -> Result<CutInequality> {
        if self.mode != Mode::Complete {
            return Err(Error::Parameter(
                "cut form needs a complete-mode inequality".into(),
            ));
        }
        let total: f64 = self.coefficients.values().sum();
        Ok(CutInequality {
            n: self.n_left,
            coefficients: self.coefficients.iter().map(|(&k, &v)| (k, -v)).collect(),
            rhs: (self.rhs - total) / 2.0,
        })
    }

    /// Inverse of [`Self::to_cut_form`].
    pub fn from_cut_form(cut: &CutInequality) -> Result<Self> {
        let total: f64 = cut.coefficients.values().sum();
        Self::build(
            Mode::Complete,
            cut.n,
            0,
            cut.coefficients.iter().map(|(&k, &v)| (k, -v)).collect(),
            2.0 * cut.rhs - total,
        )
    }

    /// Identifies right variable `i` with left variable `i` (`Y_i = X_i`).
    /// Cross pairs `(i, j)` and `(j, i)` merge into `{i, j}`; diagonal terms
    /// become constants and move into the rhs.
    pub fn collapse_bipartite(&self) -> Result<Self> {
        if self.mode != Mode::Bipartite || self.n_left != self.n_right {
            return Err(Error::Dimension(format!(
                "collapse needs a square bipartite inequality, got {:?} {}x{}",
                self.mode, self.n_left, self.n_right
            )));
        }
        let mut map: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        let mut constant = 0.0;
        for (&(i, j), &v) in &self.coefficients {
            if i == j {
                constant += v;
            } else {
                *map.entry((i.min(j), i.max(j))).or_insert(0.0) += v;
            }
        }
        Self::build(Mode::Complete, self.n_left, 0, map, self.rhs - constant)
    }
}

fn insert_unique(
    map: &mut BTreeMap<(usize, usize), f64>,
    key: (usize, usize),
    value: f64,
) -> Result<()> {
    if map.insert(key, value).is_some() {
        return Err(Error::Parameter(format!("duplicate pair {key:?}")));
    }
    Ok(())
}

/// The CHSH inequality `½X₁Y₁ + ½X₁Y₂ + ½X₂Y₁ − ½X₂Y₂ ≤ 1`.
pub fn chsh() -> PairwiseInequality {
    PairwiseInequality::bipartite(
        2,
        2,
        [((0, 0), 0.5), ((0, 1), 0.5), ((1, 0), 0.5), ((1, 1), -0.5)],
        1.0,
    )
    .expect("static inequality")
}

/// `−X₁X₂ − X₁X₃ − X₂X₃ ≤ 1`.
pub fn triangle() -> PairwiseInequality {
    PairwiseInequality::complete(3, [((0, 1), -1.0), ((0, 2), -1.0), ((1, 2), -1.0)], 1.0)
        .expect("static inequality")
}

/// An inequality over 0/1 cut variables `a_i xor a_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct CutInequality {
    pub n: usize,
    pub coefficients: BTreeMap<(usize, usize), f64>,
    pub rhs: f64,
}

impl CutInequality {
    pub fn evaluate(&self, bits: &[bool]) -> Result<f64> {
        if bits.len() != self.n {
            return Err(Error::Dimension(format!(
                "{} bits for {} cut variables",
                bits.len(),
                self.n
            )));
        }
        Ok(self
            .coefficients
            .iter()
            .filter(|(&(i, j), _)| bits[i] != bits[j])
            .map(|(_, &v)| v)
            .sum())
    }

    pub fn accepts(&self, bits: &[bool]) -> Result<bool> {
        Ok(self.evaluate(bits)? <= self.rhs)
    }
}

/// A vector of ±1 values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct SignAssignment(Vec<i8>);

impl SignAssignment {
    pub fn new(values: Vec<i8>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| **v != 1 && **v != -1) {
            return Err(Error::Parameter(format!("sign entry {v} is not ±1")));
        }
        Ok(Self(values))
    }

    pub fn ones(n: usize) -> Self {
        Self(vec![1; n])
    }

    /// Bit `k` of `mask` set means entry `k` is `-1`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        Self(
            (0..n)
                .map(|k| if (mask >> k) & 1 == 1 { -1 } else { 1 })
                .collect(),
        )
    }

    pub fn values(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn negated(&self) -> Self {
        Self(self.0.iter().map(|v| -v).collect())
    }
}

impl TryFrom<Vec<i8>> for SignAssignment {
    type Error = Error;
    fn try_from(values: Vec<i8>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<SignAssignment> for Vec<i8> {
    fn from(a: SignAssignment) -> Self {
        a.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassicalBoundResult {
    pub max_value: f64,
    pub argmax: SignAssignment,
    pub evaluations: u64,
    /// True when the maximum came from exact integer accumulation.
    pub exact: bool,
}

/// Largest left-hand side over all ±1 assignments, with the default guard.
pub fn classical_bound(ineq: &PairwiseInequality) -> Result<ClassicalBoundResult> {
    classical_bound_guarded(ineq, DEFAULT_GUARD)
}

/// Largest left-hand side over all ±1 assignments.
///
/// Half-integer coefficient families are accumulated exactly in doubled
/// integers; anything else uses floating point. The argmax is the first
/// maximiser in Gray-code order with the first variable fixed to `+1`.
pub fn classical_bound_guarded(
    ineq: &PairwiseInequality,
    guard: usize,
) -> Result<ClassicalBoundResult> {
    let n = ineq.variable_count();
    check_guard("variable count", n, guard)?;
    if let Some(doubled) = ineq.doubled_integer_coefficients() {
        let mut form = QuadraticForm::<i64>::new(n);
        for (i, j, v) in doubled {
            form.add(i, j, v);
        }
        let max = form.maximize();
        let argmax = SignAssignment(max.signs);
        return Ok(ClassicalBoundResult {
            max_value: max.value as f64 / 2.0,
            argmax,
            evaluations: max.evaluations,
            exact: true,
        });
    }
    let mut form = QuadraticForm::<f64>::new(n);
    for (i, j, v) in ineq.flat_pairs() {
        form.add(i, j, v);
    }
    let max = form.maximize();
    let argmax = SignAssignment(max.signs);
    Ok(ClassicalBoundResult {
        max_value: ineq.evaluate(&argmax)?,
        argmax,
        evaluations: max.evaluations,
        exact: false,
    })
}

/// Exact doubled classical bound for half-integer coefficient families.
pub fn doubled_exact_bound(ineq: &PairwiseInequality, guard: usize) -> Result<Option<i64>> {
    check_guard("variable count", ineq.variable_count(), guard)?;
    Ok(ineq.doubled_integer_coefficients().map(|doubled| {
        let mut form = QuadraticForm::<i64>::new(ineq.variable_count());
        for (i, j, v) in doubled {
            form.add(i, j, v);
        }
        form.maximize().value
    }))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CoefficientEntry {
    i: usize,
    j: usize,
    value: f64,
}

/// On-disk layout, indices 0-based.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct InequalityFile {
    mode: Mode,
    n_left: usize,
    #[serde(default)]
    n_right: usize,
    coefficients: Vec<CoefficientEntry>,
    rhs: f64,
}

impl TryFrom<InequalityFile> for PairwiseInequality {
    type Error = Error;
    fn try_from(file: InequalityFile) -> Result<Self> {
        let entries = file.coefficients.into_iter().map(|e| ((e.i, e.j), e.value));
        match file.mode {
            Mode::Complete => {
                if file.n_right != 0 {
                    return Err(Error::Format("complete mode needs n_right = 0".into()));
                }
                Self::complete(file.n_left, entries, file.rhs)
            }
            Mode::Bipartite => Self::bipartite(file.n_left, file.n_right, entries, file.rhs),
        }
    }
}

impl From<PairwiseInequality> for InequalityFile {
    fn from(ineq: PairwiseInequality) -> Self {
        Self {
            mode: ineq.mode,
            n_left: ineq.n_left,
            n_right: ineq.n_right,
            coefficients: ineq
                .coefficients
                .iter()
                .map(|(&(i, j), &value)| CoefficientEntry { i, j, value })
                .collect(),
            rhs: ineq.rhs,
        }
    }
}
