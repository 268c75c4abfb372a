//! Bell, cut and correlation polytopes at enumeration scale.
//!
//! Coordinates are ordered lexicographically over index pairs:
//! * `BELL(n)`: `X_i X_j` for `i < j`;
//! * `BELL(n, m)`: `X_i Y_j` for all `i`, `j`;
//! * `CUT(n)`: `a_i xor a_j` for `i < j`;
//! * `COR(n)`: `b_i b_j` for `i <= j`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{check_guard, Error, Result};
use crate::hull;

/// Largest `n` (or `n + m`) whose vertices are enumerated.
pub const VERTEX_GUARD: usize = 16;
/// Distance below which a point counts as inside.
pub const INSIDE_TOLERANCE: f64 = 1e-7;
/// Major-iteration cap of the projection.
pub const MAX_PROJECTION_ITERATIONS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PolytopeSpec {
    BellComplete { n: usize },
    BellBipartite { n: usize, m: usize },
    Cut { n: usize },
    Cor { n: usize },
}

impl PolytopeSpec {
    pub fn ambient_dim(&self) -> usize {
        match *self {
            Self::BellComplete { n } | Self::Cut { n } => n * n.saturating_sub(1) / 2,
            Self::BellBipartite { n, m } => n * m,
            Self::Cor { n } => n * (n + 1) / 2,
        }
    }

    fn check_guard(&self) -> Result<()> {
        let size = match *self {
            Self::BellBipartite { n, m } => n + m,
            Self::BellComplete { n } | Self::Cut { n } | Self::Cor { n } => n,
        };
        check_guard("polytope variable count", size, VERTEX_GUARD)
    }
}

impl fmt::Display for PolytopeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::BellComplete { n } => write!(f, "bell{n}"),
            Self::BellBipartite { n, m } => write!(f, "bell{n}x{m}"),
            Self::Cut { n } => write!(f, "cut{n}"),
            Self::Cor { n } => write!(f, "cor{n}"),
        }
    }
}

/// Parses `bell3`, `bell22` (two single digits: bipartite), `bell4x3`,
/// `bell4,3`, `cut5`, `cor3`.
impl FromStr for PolytopeSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Format(format!("unknown polytope '{s}'"));
        let num = |t: &str| t.parse::<usize>().map_err(|_| bad());
        let lower = s.to_ascii_lowercase();
        if let Some(rest) = lower.strip_prefix("bell") {
            if let Some((a, b)) = rest.split_once(['x', ',']) {
                return Ok(Self::BellBipartite {
                    n: num(a)?,
                    m: num(b)?,
                });
            }
            let digits: Vec<char> = rest.chars().collect();
            if digits.len() == 2 && digits.iter().all(|c| ('1'..='9').contains(c)) {
                return Ok(Self::BellBipartite {
                    n: num(&rest[..1])?,
                    m: num(&rest[1..])?,
                });
            }
            return Ok(Self::BellComplete { n: num(rest)? });
        }
        if let Some(rest) = lower.strip_prefix("cut") {
            return Ok(Self::Cut { n: num(rest)? });
        }
        if let Some(rest) = lower.strip_prefix("cor") {
            return Ok(Self::Cor { n: num(rest)? });
        }
        Err(bad())
    }
}

/// Distinct vertices with integer coordinates.
pub fn integer_vertices(spec: &PolytopeSpec) -> Result<Vec<Vec<i64>>> {
    spec.check_guard()?;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut push = |v: Vec<i64>| {
        if seen.insert(v.clone()) {
            out.push(v);
        }
    };
    let sign = |mask: u64, k: usize| if (mask >> k) & 1 == 1 { -1i64 } else { 1 };
    let bit = |mask: u64, k: usize| ((mask >> k) & 1) as i64;
    match *spec {
        PolytopeSpec::BellComplete { n } => {
            // X_1 = +1 covers every vertex once
            for mask in 0..(1u64 << n.saturating_sub(1)) {
                let x: Vec<i64> = (0..n)
                    .map(|k| if k == 0 { 1 } else { sign(mask, k - 1) })
                    .collect();
                push(upper_pairs(n).map(|(i, j)| x[i] * x[j]).collect());
            }
        }
        PolytopeSpec::BellBipartite { n, m } => {
            for mask in 0..(1u64 << (n + m)) {
                let x: Vec<i64> = (0..n + m).map(|k| sign(mask, k)).collect();
                push(
                    (0..n)
                        .flat_map(|i| (0..m).map(move |j| (i, j)))
                        .map(|(i, j)| x[i] * x[n + j])
                        .collect(),
                );
            }
        }
        PolytopeSpec::Cut { n } => {
            for mask in 0..(1u64 << n.saturating_sub(1)) {
                let a: Vec<i64> = (0..n)
                    .map(|k| if k == 0 { 0 } else { bit(mask, k - 1) })
                    .collect();
                push(upper_pairs(n).map(|(i, j)| a[i] ^ a[j]).collect());
            }
        }
        PolytopeSpec::Cor { n } => {
            for mask in 0..(1u64 << n) {
                let b: Vec<i64> = (0..n).map(|k| bit(mask, k)).collect();
                push(
                    (0..n)
                        .flat_map(|i| (i..n).map(move |j| (i, j)))
                        .map(|(i, j)| b[i] * b[j])
                        .collect(),
                );
            }
        }
    }
    Ok(out)
}

fn upper_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| ((i + 1)..n).map(move |j| (i, j)))
}

pub fn vertices(spec: &PolytopeSpec) -> Result<Vec<Vec<f64>>> {
    Ok(integer_vertices(spec)?
        .into_iter()
        .map(|v| v.into_iter().map(|c| c as f64).collect())
        .collect())
}

/// `<normal, v> <= offset` for every vertex `v`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparatingHyperplane {
    pub normal: Vec<f64>,
    pub offset: f64,
    /// `<normal, query> - offset`.
    pub margin: f64,
    /// Checked against the full vertex list.
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembershipCertificate {
    pub inside: bool,
    pub distance: f64,
    pub witness_point: Vec<f64>,
    pub separating: Option<SeparatingHyperplane>,
    pub iterations: usize,
}

/// Decides membership by projecting onto the vertex hull. Outside points get
/// a separating hyperplane with normal `query - projection`, exhaustively
/// checked against every vertex.
pub fn membership(spec: &PolytopeSpec, point: &[f64]) -> Result<MembershipCertificate> {
    if point.len() != spec.ambient_dim() {
        return Err(Error::Dimension(format!(
            "point has {} coordinates, {spec} lives in R^{}",
            point.len(),
            spec.ambient_dim()
        )));
    }
    let verts = vertices(spec)?;
    let proj = hull::project(
        &verts,
        point,
        INSIDE_TOLERANCE / 10.0,
        MAX_PROJECTION_ITERATIONS,
    )?;
    if proj.distance <= INSIDE_TOLERANCE {
        return Ok(MembershipCertificate {
            inside: true,
            distance: proj.distance,
            witness_point: proj.point,
            separating: None,
            iterations: proj.iterations,
        });
    }
    let normal: Vec<f64> = point.iter().zip(&proj.point).map(|(q, w)| q - w).collect();
    let ip = |v: &[f64]| v.iter().zip(&normal).map(|(a, b)| a * b).sum::<f64>();
    let offset = verts
        .iter()
        .map(|v| ip(v))
        .fold(f64::NEG_INFINITY, f64::max);
    let margin = ip(point) - offset;
    let verified = margin > 0.0 && verts.iter().all(|v| ip(v) <= offset);
    Ok(MembershipCertificate {
        inside: false,
        distance: proj.distance,
        witness_point: proj.point,
        separating: Some(SeparatingHyperplane {
            normal,
            offset,
            margin,
            verified,
        }),
        iterations: proj.iterations,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FacetReport {
    pub valid: bool,
    pub tight_count: usize,
    pub affine_rank: usize,
    pub ambient_dim: usize,
    pub is_facet: bool,
}

/// Validity and facet status of `<coefficients, v> <= rhs`, in exact rational
/// arithmetic. The four polytopes are full-dimensional, so a facet is a valid
/// inequality whose tight vertices span an affine space of dimension
/// `ambient_dim - 1`.
pub fn facet_check(spec: &PolytopeSpec, coefficients: &[f64], rhs: f64) -> Result<FacetReport> {
    let dim = spec.ambient_dim();
    if coefficients.len() != dim {
        return Err(Error::Dimension(format!(
            "{} coefficients for {spec} in R^{dim}",
            coefficients.len()
        )));
    }
    let to_rational = |v: f64| {
        BigRational::from_float(v).ok_or_else(|| Error::Parameter(format!("{v} is not finite")))
    };
    let coeffs = coefficients
        .iter()
        .map(|&c| to_rational(c))
        .collect::<Result<Vec<_>>>()?;
    let bound = to_rational(rhs)?;
    let verts = integer_vertices(spec)?;

    let mut valid = true;
    let mut tight = Vec::new();
    for v in &verts {
        let lhs: BigRational = coeffs
            .iter()
            .zip(v)
            .map(|(c, &x)| c * BigRational::from_integer(x.into()))
            .sum();
        if lhs > bound {
            valid = false;
        } else if lhs == bound {
            tight.push(v);
        }
    }
    let affine_rank = match tight.split_first() {
        None => 0,
        Some((base, rest)) => {
            let mut basis = EchelonBasis::new(dim);
            for v in rest {
                let diff: Vec<BigRational> = v
                    .iter()
                    .zip(base.iter())
                    .map(|(a, b)| BigRational::from_integer((a - b).into()))
                    .collect();
                basis.insert(diff);
                if basis.rank() == dim {
                    break;
                }
            }
            basis.rank()
        }
    };
    Ok(FacetReport {
        valid,
        tight_count: tight.len(),
        affine_rank,
        ambient_dim: dim,
        is_facet: valid && !tight.is_empty() && affine_rank + 1 == dim,
    })
}

/// Row-echelon basis over the rationals, grown one vector at a time.
struct EchelonBasis {
    rows: Vec<(usize, Vec<BigRational>)>,
}

impl EchelonBasis {
    fn new(_dim: usize) -> Self {
        Self { rows: Vec::new() }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn insert(&mut self, mut v: Vec<BigRational>) {
        for (pivot, row) in &self.rows {
            if !v[*pivot].is_zero() {
                let factor = v[*pivot].clone();
                for (x, r) in v.iter_mut().zip(row) {
                    if !r.is_zero() {
                        *x -= &factor * r;
                    }
                }
            }
        }
        if let Some(pivot) = v.iter().position(|x| !x.is_zero()) {
            let inv = BigRational::one() / v[pivot].clone();
            for x in v.iter_mut() {
                *x *= &inv;
            }
            // keep earlier rows reduced in the new pivot column
            for (_, row) in self.rows.iter_mut() {
                if !row[pivot].is_zero() {
                    let factor = row[pivot].clone();
                    for (r, x) in row.iter_mut().zip(&v) {
                        if !x.is_zero() {
                            *r -= &factor * x;
                        }
                    }
                }
            }
            debug_assert!(v[pivot].abs().is_one());
            self.rows.push((pivot, v));
        }
    }
}

/// `v_ij = 1 - 2 c_ij`: cut coordinates to Bell coordinates.
pub fn cut_to_bell(point: &[f64]) -> Vec<f64> {
    point.iter().map(|c| 1.0 - 2.0 * c).collect()
}

/// `c_ij = (1 - v_ij) / 2`: Bell coordinates to cut coordinates.
pub fn bell_to_cut(point: &[f64]) -> Vec<f64> {
    point.iter().map(|v| (1.0 - v) / 2.0).collect()
}

/// Embeds a `BELL(n)` point into `BELL(n, n)` as the symmetric matrix with
/// unit diagonal, flattened row-major.
pub fn bell_embed(n: usize, point: &[f64]) -> Result<Vec<f64>> {
    let dim = n * n.saturating_sub(1) / 2;
    if point.len() != dim {
        return Err(Error::Dimension(format!(
            "{} coordinates for BELL({n}) in R^{dim}",
            point.len()
        )));
    }
    let mut out = vec![1.0; n * n];
    for (k, (i, j)) in upper_pairs(n).enumerate() {
        out[i * n + j] = point[k];
        out[j * n + i] = point[k];
    }
    Ok(out)
}

/// Coefficient vector of a complete-mode inequality in `BELL(n)` coordinates.
pub fn complete_coefficients(ineq: &crate::inequality::PairwiseInequality) -> Vec<f64> {
    let n = ineq.variable_count();
    upper_pairs(n)
        .map(|(i, j)| ineq.coefficient(i, j))
        .collect()
}

/// Coefficient vector of a bipartite inequality in `BELL(n, m)` coordinates.
pub fn bipartite_coefficients(ineq: &crate::inequality::PairwiseInequality) -> Vec<f64> {
    let (n, m) = (ineq.n_left(), ineq.n_right());
    (0..n)
        .flat_map(|i| (0..m).map(move |j| (i, j)))
        .map(|(i, j)| ineq.coefficient(i, j))
        .collect()
}

/// Coefficient vector of a cut-form inequality in `CUT(n)` coordinates.
pub fn cut_coefficients(cut: &crate::inequality::CutInequality) -> Vec<f64> {
    upper_pairs(cut.n)
        .map(|k| cut.coefficients.get(&k).copied().unwrap_or(0.0))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inequality::{chsh, triangle};

    #[test]
    fn parse_names() {
        assert_eq!(
            "bell3".parse::<PolytopeSpec>().unwrap(),
            PolytopeSpec::BellComplete { n: 3 }
        );
        assert_eq!(
            "bell22".parse::<PolytopeSpec>().unwrap(),
            PolytopeSpec::BellBipartite { n: 2, m: 2 }
        );
        assert_eq!(
            "bell10".parse::<PolytopeSpec>().unwrap(),
            PolytopeSpec::BellComplete { n: 10 }
        );
        assert_eq!(
            "bell3x4".parse::<PolytopeSpec>().unwrap(),
            PolytopeSpec::BellBipartite { n: 3, m: 4 }
        );
        assert_eq!(
            "cut4".parse::<PolytopeSpec>().unwrap(),
            PolytopeSpec::Cut { n: 4 }
        );
        assert_eq!(
            "cor3".parse::<PolytopeSpec>().unwrap(),
            PolytopeSpec::Cor { n: 3 }
        );
        assert!("cube3".parse::<PolytopeSpec>().is_err());
        assert!("bell".parse::<PolytopeSpec>().is_err());
    }

    #[test]
    fn small_vertex_lists() {
        let bell3: BTreeSet<_> = integer_vertices(&PolytopeSpec::BellComplete { n: 3 })
            .unwrap()
            .into_iter()
            .collect();
        let expected: BTreeSet<Vec<i64>> = [
            vec![1, 1, 1],
            vec![1, -1, -1],
            vec![-1, 1, -1],
            vec![-1, -1, 1],
        ]
        .into_iter()
        .collect();
        assert_eq!(bell3, expected);
        let cut3: BTreeSet<_> = integer_vertices(&PolytopeSpec::Cut { n: 3 })
            .unwrap()
            .into_iter()
            .collect();
        let expected: BTreeSet<Vec<i64>> =
            [vec![0, 0, 0], vec![1, 1, 0], vec![1, 0, 1], vec![0, 1, 1]]
                .into_iter()
                .collect();
        assert_eq!(cut3, expected);
        assert_eq!(
            integer_vertices(&PolytopeSpec::Cor { n: 1 }).unwrap(),
            vec![vec![1], vec![0]].into_iter().rev().collect::<Vec<_>>()
        );
        assert_eq!(
            integer_vertices(&PolytopeSpec::BellBipartite { n: 2, m: 2 })
                .unwrap()
                .len(),
            8
        );
        assert_eq!(
            integer_vertices(&PolytopeSpec::BellComplete { n: 5 })
                .unwrap()
                .len(),
            16
        );
        assert!(integer_vertices(&PolytopeSpec::Cut { n: 17 }).is_err());
    }

    #[test]
    fn facet_examples() {
        let r = facet_check(
            &PolytopeSpec::BellBipartite { n: 2, m: 2 },
            &bipartite_coefficients(&chsh()),
            1.0,
        )
        .unwrap();
        assert!(r.valid && r.is_facet);
        assert_eq!(r.affine_rank, 3);
        let r = facet_check(
            &PolytopeSpec::BellComplete { n: 3 },
            &complete_coefficients(&triangle()),
            1.0,
        )
        .unwrap();
        assert!(r.valid && r.is_facet);
        assert_eq!((r.tight_count, r.affine_rank), (3, 2));
        let r = facet_check(&PolytopeSpec::BellComplete { n: 2 }, &[1.0], 2.0).unwrap();
        assert!(r.valid && !r.is_facet);
        assert_eq!(r.tight_count, 0);
        let r = facet_check(&PolytopeSpec::BellComplete { n: 3 }, &[1.0, 1.0, 1.0], 1.0).unwrap();
        assert!(!r.valid && !r.is_facet);
        assert!(facet_check(&PolytopeSpec::BellComplete { n: 3 }, &[1.0], 1.0).is_err());
    }

    #[test]
    fn trivial_bound_is_facet_but_face_is_not() {
        // X1X2 <= 1 on BELL(3): tight on two vertices, rank 1 < 2
        let r = facet_check(&PolytopeSpec::BellComplete { n: 3 }, &[1.0, 0.0, 0.0], 1.0).unwrap();
        assert!(r.valid && !r.is_facet);
        assert_eq!(r.affine_rank, 1);
    }

    #[test]
    fn vertices_are_members() {
        for spec in [
            PolytopeSpec::BellComplete { n: 4 },
            PolytopeSpec::BellBipartite { n: 2, m: 3 },
            PolytopeSpec::Cut { n: 4 },
            PolytopeSpec::Cor { n: 3 },
        ] {
            for v in vertices(&spec).unwrap() {
                let c = membership(&spec, &v).unwrap();
                assert!(c.inside && c.distance < 1e-10, "{spec} {v:?}");
            }
        }
    }

    #[test]
    fn outside_points_get_verified_hyperplanes() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let c = membership(&PolytopeSpec::BellBipartite { n: 2, m: 2 }, &[h, h, h, -h]).unwrap();
        assert!(!c.inside && c.distance > 0.0);
        assert!(c.separating.as_ref().unwrap().verified);
        let c = membership(&PolytopeSpec::BellComplete { n: 3 }, &[-0.5; 3]).unwrap();
        assert!(!c.inside);
        let sep = c.separating.unwrap();
        assert!(sep.verified);
        // the nearest point lies on the triangle facet: normal along (-1,-1,-1)
        assert!((c.distance - 0.5 / 3f64.sqrt()).abs() < 1e-9);
        assert!((sep.normal[0] - sep.normal[1]).abs() < 1e-9 && sep.normal[0] < 0.0);
        assert!(membership(&PolytopeSpec::BellComplete { n: 3 }, &[0.0; 2]).is_err());
    }

    #[test]
    fn correlation_point_from_a_probability_space() {
        // six atoms with weights, three events given by atom subsets
        let weights = [0.1, 0.25, 0.05, 0.3, 0.2, 0.1];
        let events: [&[usize]; 3] = [&[0, 1, 3], &[1, 2, 3, 5], &[3, 4]];
        let mu = |a: &[usize], b: &[usize]| -> f64 {
            a.iter()
                .filter(|k| b.contains(k))
                .map(|&k| weights[k])
                .sum()
        };
        let point: Vec<f64> = (0..3)
            .flat_map(|i| (i..3).map(move |j| (i, j)))
            .map(|(i, j)| mu(events[i], events[j]))
            .collect();
        let c = membership(&PolytopeSpec::Cor { n: 3 }, &point).unwrap();
        assert!(c.inside, "distance {}", c.distance);
    }

    #[test]
    fn coordinate_maps() {
        assert_eq!(cut_to_bell(&[1.0, 1.0, 0.0]), vec![-1.0, -1.0, 1.0]);
        assert_eq!(cut_to_bell(&[0.0; 6]), vec![1.0; 6]);
        let cut4 = integer_vertices(&PolytopeSpec::Cut { n: 4 }).unwrap();
        let bell4: BTreeSet<Vec<i64>> = integer_vertices(&PolytopeSpec::BellComplete { n: 4 })
            .unwrap()
            .into_iter()
            .collect();
        let mapped: BTreeSet<Vec<i64>> = cut4
            .iter()
            .map(|v| v.iter().map(|c| 1 - 2 * c).collect())
            .collect();
        assert_eq!(mapped, bell4);
    }

    #[test]
    fn embedding_into_bipartite() {
        let spec = PolytopeSpec::BellBipartite { n: 3, m: 3 };
        let e = bell_embed(3, &[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(e, vec![1.0; 9]);
        assert!(membership(&spec, &e).unwrap().inside);
        let e = bell_embed(3, &[1.0, -1.0, -1.0]).unwrap();
        assert_eq!(e, vec![1.0, 1.0, -1.0, 1.0, 1.0, -1.0, -1.0, -1.0, 1.0]);
        assert!(membership(&spec, &e).unwrap().inside);
        let e = bell_embed(3, &[-0.5; 3]).unwrap();
        let c = membership(&spec, &e).unwrap();
        assert!(!c.inside && c.separating.unwrap().verified);
        assert!(bell_embed(3, &[0.0; 2]).is_err());
    }

    #[test]
    fn clique_web_cut_form_on_cut_polytope() {
        use crate::webs::{clique_web_inequality, WebSpec};
        for (p, q, r) in [(5, 2, 1), (7, 2, 2), (5, 4, 0)] {
            let spec = WebSpec::new(p, q, r).unwrap();
            let cut = clique_web_inequality(&spec).to_cut_form().unwrap();
            let report = facet_check(
                &PolytopeSpec::Cut { n: p + q },
                &cut_coefficients(&cut),
                cut.rhs,
            )
            .unwrap();
            assert!(report.valid, "{p},{q},{r}");
            assert!(report.is_facet, "{p},{q},{r}: {report:?}");
        }
    }
}
