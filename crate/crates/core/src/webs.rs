//! Webs, antiwebs, cuts and the clique-web inequality.
//!
//! Vertices are 0-based. The web `W_p^r` joins `i` to `i + r + 1, ..., i + r + q`
//! (mod `p`) where `q = p - 2r - 1`; the antiweb is its complement in `K_p`, i.e.
//! the circulant graph joining vertices at cyclic distance at most `r`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{check_guard, Error, Result};
use crate::inequality::PairwiseInequality;

/// Largest `p` accepted by [`verify_alon_theorem`].
pub const ALON_GUARD: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WebSpec {
    p: usize,
    q: usize,
    r: usize,
}

impl WebSpec {
    /// Requires `q >= 2` and `p - q = 2r + 1`.
    pub fn new(p: usize, q: usize, r: usize) -> Result<Self> {
        if q < 2 {
            return Err(Error::Parameter(format!("web needs q >= 2, got q = {q}")));
        }
        if p != q + 2 * r + 1 {
            return Err(Error::Parameter(format!(
                "web needs p - q = 2r + 1, got (p, q, r) = ({p}, {q}, {r})"
            )));
        }
        Ok(Self { p, q, r })
    }

    /// The spec with `q = p - 2r - 1`.
    pub fn from_pr(p: usize, r: usize) -> Result<Self> {
        let q = p
            .checked_sub(2 * r + 1)
            .ok_or_else(|| Error::Parameter(format!("p = {p} too small for r = {r}")))?;
        Self::new(p, q, r)
    }

    /// The `(2k+1)`-bouquet family: `p = 2k + 1`, `q = 2`, `r = k - 1`.
    pub fn odd_ring(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Parameter("odd ring needs k >= 1".into()));
        }
        Self::new(2 * k + 1, 2, k - 1)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Classical bound `q (r + 1)` of the clique-web inequality.
    pub fn clique_web_rhs(&self) -> usize {
        self.q * (self.r + 1)
    }
}

/// Undirected simple graph as a set of sorted vertex pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "EdgeFile", into = "EdgeFile")]
pub struct EdgeSet {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl EdgeSet {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (i, j) in edges {
            if i == j {
                return Err(Error::Parameter(format!("self-loop at {i}")));
            }
            if i >= n || j >= n {
                return Err(Error::Parameter(format!(
                    "edge ({i}, {j}) out of range {n}"
                )));
            }
            if !set.insert((i.min(j), i.max(j))) {
                return Err(Error::Parameter(format!("duplicate edge ({i}, {j})")));
            }
        }
        Ok(Self { n, edges: set })
    }

    pub fn complete(n: usize) -> Self {
        Self {
            n,
            edges: (0..n)
                .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&(i.min(j), i.max(j)))
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn union(&self, other: &Self) -> Self {
        Self {
            n: self.n.max(other.n),
            edges: self.edges.union(&other.edges).copied().collect(),
        }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        Self {
            n: self.n.max(other.n),
            edges: self.edges.intersection(&other.edges).copied().collect(),
        }
    }

    /// Edges of `K_n` not in `self`.
    pub fn complement(&self) -> Self {
        Self {
            n: self.n,
            edges: Self::complete(self.n)
                .edges
                .difference(&self.edges)
                .copied()
                .collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct EdgeFile {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<EdgeFile> for EdgeSet {
    type Error = Error;
    fn try_from(file: EdgeFile) -> Result<Self> {
        EdgeSet::new(file.n, file.edges.into_iter().map(|[i, j]| (i, j)))
    }
}

impl From<EdgeSet> for EdgeFile {
    fn from(set: EdgeSet) -> Self {
        EdgeFile {
            n: set.n,
            edges: set.edges.into_iter().map(|(i, j)| [i, j]).collect(),
        }
    }
}

/// The web `W_p^r`; it has `pq/2` edges.
pub fn web_edges(spec: &WebSpec) -> EdgeSet {
    let p = spec.p;
    let mut edges = BTreeSet::new();
    for i in 0..p {
        for offset in (spec.r + 1)..=(spec.r + spec.q) {
            let j = (i + offset) % p;
            edges.insert((i.min(j), i.max(j)));
        }
    }
    EdgeSet { n: p, edges }
}

/// The antiweb `AW_p^r = K_p \ W_p^r`.
pub fn antiweb_edges(spec: &WebSpec) -> EdgeSet {
    web_edges(spec).complement()
}

/// `delta(S)`: all pairs with exactly one endpoint in `subset`.
pub fn cut_edges(n: usize, subset: &[usize]) -> Result<EdgeSet> {
    let mut inside = vec![false; n];
    for &v in subset {
        if v >= n {
            return Err(Error::Parameter(format!("vertex {v} out of range {n}")));
        }
        inside[v] = true;
    }
    Ok(cut_from_indicator(&inside))
}

fn cut_from_indicator(inside: &[bool]) -> EdgeSet {
    let n = inside.len();
    let edges = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .filter(|&(i, j)| inside[i] != inside[j])
        .collect();
    EdgeSet { n, edges }
}

/// The clique-web inequality on `p + q` variables, `X` block first:
/// `sum X_i Z_j - sum_{W_p^r} X_i X_j - sum_{i<j} Z_i Z_j <= q (r + 1)`.
pub fn clique_web_inequality(spec: &WebSpec) -> PairwiseInequality {
    let (p, q) = (spec.p, spec.q);
    let cross = (0..p).flat_map(|i| (0..q).map(move |j| ((i, p + j), 1.0)));
    let web = web_edges(spec).edges.into_iter().map(|e| (e, -1.0));
    let poles = (0..q).flat_map(|i| ((i + 1)..q).map(move |j| ((p + i, p + j), -1.0)));
    PairwiseInequality::complete(
        p + q,
        cross.chain(web).chain(poles),
        spec.clique_web_rhs() as f64,
    )
    .expect("clique-web pairs are distinct and in range")
}

/// A subset for which the antiweb cut-size theorem failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlonViolation {
    pub subset: Vec<usize>,
    pub cut_size: usize,
    pub lower_bound: usize,
    pub reason: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlonReport {
    pub spec: WebSpec,
    /// Subsets with `1 <= |S| <= r`.
    pub small_checked: usize,
    pub small_equalities: usize,
    /// Subsets with `r + 1 <= |S| <= p / 2`.
    pub large_checked: usize,
    pub large_equalities: usize,
    pub violations: Vec<AlonViolation>,
}

impl AlonReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the cut sizes `|delta(S) ∩ AW_p^r|` for every subset of size up to
/// `p / 2`:
/// * `s <= r`: at least `s (2r + 1 - s)`, with equality iff `S` is a clique
///   in the antiweb;
/// * `r + 1 <= s <= p/2`: at least `r (r + 1)`, with equality iff `S` is a
///   cyclic interval.
pub fn verify_alon_theorem(spec: &WebSpec) -> Result<AlonReport> {
    let (p, r) = (spec.p, spec.r);
    if r < 1 || p < 2 * r + 3 {
        return Err(Error::Parameter(format!(
            "theorem needs r >= 1 and p >= 2r + 3, got p = {p}, r = {r}"
        )));
    }
    check_guard("web size p", p, ALON_GUARD)?;
    let antiweb = antiweb_edges(spec);
    let mut report = AlonReport {
        spec: *spec,
        small_checked: 0,
        small_equalities: 0,
        large_checked: 0,
        large_equalities: 0,
        violations: Vec::new(),
    };
    for mask in 1u32..(1u32 << p) {
        let s = mask.count_ones() as usize;
        if 2 * s > p {
            continue;
        }
        let inside: Vec<bool> = (0..p).map(|v| (mask >> v) & 1 == 1).collect();
        let cut = cut_from_indicator(&inside).intersection(&antiweb).len();
        let subset: Vec<usize> = (0..p).filter(|&v| inside[v]).collect();
        let (bound, tight_expected, reason) = if s <= r {
            report.small_checked += 1;
            let clique = subset
                .iter()
                .enumerate()
                .all(|(a, &u)| subset[a + 1..].iter().all(|&v| antiweb.contains(u, v)));
            (s * (2 * r + 1 - s), clique, "clique")
        } else {
            report.large_checked += 1;
            (r * (r + 1), is_cyclic_interval(&inside), "interval")
        };
        let tight = cut == bound;
        if cut < bound || tight != tight_expected {
            report.violations.push(AlonViolation {
                subset,
                cut_size: cut,
                lower_bound: bound,
                reason,
            });
        } else if tight {
            if s <= r {
                report.small_equalities += 1;
            } else {
                report.large_equalities += 1;
            }
        }
    }
    Ok(report)
}

/// True when the marked vertices form one contiguous run modulo `p`.
fn is_cyclic_interval(inside: &[bool]) -> bool {
    let p = inside.len();
    let count = inside.iter().filter(|&&b| b).count();
    if count == 0 || count == p {
        return true;
    }
    // a cyclic run has exactly one entry point
    (0..p)
        .filter(|&v| inside[v] && !inside[(v + p - 1) % p])
        .count()
        == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inequality::{classical_bound, SignAssignment};

    #[test]
    fn spec_validation() {
        assert!(WebSpec::new(5, 2, 1).is_ok());
        assert!(WebSpec::new(5, 1, 1).is_err());
        assert!(WebSpec::new(5, 1, 2).is_err());
        assert!(WebSpec::new(6, 2, 1).is_err());
        assert_eq!(WebSpec::from_pr(12, 4).unwrap().q(), 3);
        assert!(WebSpec::from_pr(3, 2).is_err());
        assert_eq!(
            WebSpec::odd_ring(5).unwrap(),
            WebSpec::new(11, 2, 4).unwrap()
        );
    }

    #[test]
    fn pentagram_web() {
        let web = web_edges(&WebSpec::new(5, 2, 1).unwrap());
        let expected: BTreeSet<_> = (0..5)
            .map(|i| (i, (i + 2) % 5))
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        assert_eq!(web.edges, expected);
        assert_eq!(web.len(), 5);
    }

    #[test]
    fn web_sizes() {
        let web = web_edges(&WebSpec::new(12, 3, 4).unwrap());
        assert_eq!(web.len(), 18);
        let dist = |(i, j): (usize, usize)| (j - i).min(12 - (j - i));
        assert_eq!(web.iter().filter(|&e| dist(e) == 5).count(), 12);
        assert_eq!(web.iter().filter(|&e| dist(e) == 6).count(), 6);
        assert_eq!(web_edges(&WebSpec::new(8, 3, 2).unwrap()).len(), 12);
    }

    #[test]
    fn antiweb_sizes_and_partition() {
        for (p, q, r, expected) in [(5, 2, 1, 5), (8, 3, 2, 16)] {
            let spec = WebSpec::new(p, q, r).unwrap();
            let (w, aw) = (web_edges(&spec), antiweb_edges(&spec));
            assert_eq!(aw.len(), expected);
            assert!(w.intersection(&aw).is_empty());
            assert_eq!(w.union(&aw), EdgeSet::complete(p));
        }
    }

    #[test]
    fn web_edge_count_is_pq_over_two() {
        for p in 3..=40 {
            for r in 0..p {
                if let Ok(spec) = WebSpec::from_pr(p, r) {
                    assert_eq!(web_edges(&spec).len(), p * spec.q() / 2, "p={p} r={r}");
                    assert_eq!(
                        web_edges(&spec).union(&antiweb_edges(&spec)),
                        EdgeSet::complete(p)
                    );
                }
            }
        }
    }

    #[test]
    fn cuts() {
        assert_eq!(
            cut_edges(3, &[0]).unwrap(),
            EdgeSet::new(3, [(0, 1), (0, 2)]).unwrap()
        );
        assert!(cut_edges(4, &[]).unwrap().is_empty());
        assert_eq!(cut_edges(5, &[0, 1]).unwrap().len(), 6);
        assert!(cut_edges(3, &[3]).is_err());
        assert!(cut_edges(4, &[0, 1, 2, 3]).unwrap().is_empty());
    }

    #[test]
    fn edge_set_validation() {
        assert!(EdgeSet::new(3, [(0, 0)]).is_err());
        assert!(EdgeSet::new(3, [(0, 3)]).is_err());
        assert!(EdgeSet::new(3, [(0, 1), (1, 0)]).is_err());
        let json = serde_json::to_string(&EdgeSet::new(3, [(2, 0)]).unwrap()).unwrap();
        assert_eq!(json, r#"{"n":3,"edges":[[0,2]]}"#);
    }

    #[test]
    fn alon_singletons_on_pentagon() {
        let report = verify_alon_theorem(&WebSpec::new(5, 2, 1).unwrap()).unwrap();
        assert!(report.holds());
        assert_eq!(report.small_checked, 5);
        assert_eq!(report.small_equalities, 5);
        let aw = antiweb_edges(&WebSpec::new(5, 2, 1).unwrap());
        for v in 0..5 {
            assert_eq!(cut_edges(5, &[v]).unwrap().intersection(&aw).len(), 2);
        }
    }

    #[test]
    fn alon_intervals_on_seven() {
        let spec = WebSpec::new(7, 2, 2).unwrap();
        let aw = antiweb_edges(&spec);
        let mut tight = 0;
        for mask in 0u32..128 {
            if mask.count_ones() != 3 {
                continue;
            }
            let s: Vec<usize> = (0..7).filter(|v| (mask >> v) & 1 == 1).collect();
            let size = cut_edges(7, &s).unwrap().intersection(&aw).len();
            assert!(size >= 6);
            if size == 6 {
                tight += 1;
            }
        }
        // exactly the 7 cyclic intervals of length 3
        assert_eq!(tight, 7);
        assert_eq!(cut_edges(7, &[6, 0, 1]).unwrap().intersection(&aw).len(), 6);
    }

    #[test]
    fn alon_rejects_bad_hypotheses() {
        assert!(verify_alon_theorem(&WebSpec::new(3, 2, 0).unwrap()).is_err());
        assert!(matches!(
            verify_alon_theorem(&WebSpec::from_pr(23, 1).unwrap()),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn cyclic_intervals() {
        let b = |s: &str| s.chars().map(|c| c == '1').collect::<Vec<_>>();
        assert!(is_cyclic_interval(&b("0110")));
        assert!(is_cyclic_interval(&b("1001")));
        assert!(!is_cyclic_interval(&b("1010")));
    }

    #[test]
    fn clique_web_rhs_and_bounds() {
        for (p, q, r, rhs) in [(3, 2, 0, 2.0), (5, 2, 1, 4.0)] {
            let ineq = clique_web_inequality(&WebSpec::new(p, q, r).unwrap());
            assert_eq!(ineq.rhs(), rhs);
            assert_eq!(classical_bound(&ineq).unwrap().max_value, rhs);
        }
        let ineq = clique_web_inequality(&WebSpec::new(5, 2, 1).unwrap());
        assert_eq!(ineq.evaluate(&SignAssignment::ones(7)).unwrap(), 4.0);
    }
}
