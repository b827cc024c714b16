use std::fmt;

use num::BigInt;
use serde::Serialize;

use super::bounds::two_disjoint_edges_closed_form;
use super::ExtremalError;
use crate::combinat::binomial;
use crate::exactla::Rational;
use crate::geometry::{collinear2, enumerate_affine_simplexes, find_small_flat, PointSet};
use crate::hypergraph::Hypergraph;

/// The configurations whose simplex counts have closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "id", rename_all = "kebab-case")]
pub enum ConstructionId {
    /// n moment-curve points of `Q^(d-1)` placed in the hyperplane `x_d = 0`.
    InplaneGeneric { d: usize },
    /// n - 1 in-plane generic points plus an apex off the hyperplane.
    Cone { d: usize },
    /// Points of `Q^3`: pairs on parallel lines in a plane plus an off-plane
    /// pair on a line of the same direction.
    ParallelPairs,
    /// Points of `Q^2`: n - 2 on one line, 3 on another, sharing one point.
    TwoLines,
    /// Hypergraph on 2n vertices with two disjoint n-edges, scored at `k`.
    TwoDisjointEdges { k: usize },
}

impl ConstructionId {
    pub fn slug(&self) -> &'static str {
        match self {
            ConstructionId::InplaneGeneric { .. } => "inplane-generic",
            ConstructionId::Cone { .. } => "cone",
            ConstructionId::ParallelPairs => "parallel-pairs",
            ConstructionId::TwoLines => "two-lines",
            ConstructionId::TwoDisjointEdges { .. } => "two-disjoint-edges",
        }
    }

    /// Parses a slug and its positional parameters: `cone 3 9`,
    /// `parallel-pairs 10`, `two-disjoint-edges 2 3` (k then n).
    pub fn parse(name: &str, params: &[usize]) -> Result<(ConstructionId, usize), ExtremalError> {
        let arity = |want: usize| -> Result<(), ExtremalError> {
            if params.len() == want {
                Ok(())
            } else {
                Err(ExtremalError::Infeasible {
                    id: name.to_string(),
                    reason: format!("expected {want} numeric parameter(s), got {}", params.len()),
                })
            }
        };
        match name {
            "inplane-generic" | "inplane" => {
                arity(2)?;
                Ok((ConstructionId::InplaneGeneric { d: params[0] }, params[1]))
            }
            "cone" => {
                arity(2)?;
                Ok((ConstructionId::Cone { d: params[0] }, params[1]))
            }
            "parallel-pairs" => {
                arity(1)?;
                Ok((ConstructionId::ParallelPairs, params[0]))
            }
            "two-lines" => {
                arity(1)?;
                Ok((ConstructionId::TwoLines, params[0]))
            }
            "two-disjoint-edges" => {
                arity(2)?;
                Ok((ConstructionId::TwoDisjointEdges { k: params[0] }, params[1]))
            }
            other => Err(ExtremalError::UnknownConstruction(other.to_string())),
        }
    }

    fn infeasible(&self, reason: impl Into<String>) -> ExtremalError {
        ExtremalError::Infeasible {
            id: self.to_string(),
            reason: reason.into(),
        }
    }

    fn check(&self, n: usize) -> Result<(), ExtremalError> {
        match *self {
            ConstructionId::InplaneGeneric { d } if d < 2 => Err(self.infeasible("needs d >= 2")),
            ConstructionId::InplaneGeneric { .. } if n < 1 => Err(self.infeasible("needs n >= 1")),
            ConstructionId::Cone { d } if d < 2 => Err(self.infeasible("needs d >= 2")),
            ConstructionId::Cone { .. } if n < 2 => Err(self.infeasible("needs n >= 2")),
            ConstructionId::ParallelPairs if n < 6 => Err(self.infeasible("needs n >= 6")),
            ConstructionId::TwoLines if n < 5 => Err(self.infeasible("needs n >= 5")),
            ConstructionId::TwoDisjointEdges { k } if k < 1 || k + 1 > 2 * n => {
                Err(self.infeasible("needs 1 <= k and k + 1 <= 2n"))
            }
            _ if n > crate::combinat::MAX_ELEMENTS => Err(self.infeasible("too many points")),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for ConstructionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstructionId::InplaneGeneric { d } | ConstructionId::Cone { d } => write!(f, "{}(d={d})", self.slug()),
            ConstructionId::TwoDisjointEdges { k } => write!(f, "{}(k={k})", self.slug()),
            _ => f.write_str(self.slug()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Construction {
    Points(PointSet),
    Hypergraph(Hypergraph),
}

/// A simplex count for point constructions, a YBLM sum for hypergraphs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Expected {
    Count(u64),
    Yblm(#[serde(serialize_with = "crate::io::ser_rational")] Rational),
}

impl fmt::Display for Expected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expected::Count(c) => write!(f, "{c}"),
            Expected::Yblm(r) => write!(f, "{r}"),
        }
    }
}

fn int_point(coords: &[i64]) -> Vec<Rational> {
    coords.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect()
}

/// Moment curve `(t, t^2, .., t^(d-1), 0)` for `t = 1..=count`.
fn inplane_points(d: usize, count: usize) -> Vec<Vec<Rational>> {
    (1..=count as i64)
        .map(|t| {
            let mut p = Vec::with_capacity(d);
            let mut x = BigInt::from(1);
            for _ in 0..d - 1 {
                x *= t;
                p.push(Rational::from_integer(x.clone()));
            }
            p.push(Rational::from_integer(BigInt::from(0)));
            p
        })
        .collect()
}

/// Plane points for the parallel-pairs construction: rows `y = 1..=pairs`
/// each holding two points, plus an optional lone point on row
/// `pairs + 1`. The x coordinates are the smallest nonnegative integers
/// keeping the planar set free of collinear triples.
fn parallel_rows(pairs: usize, lone: bool) -> Vec<[i64; 2]> {
    let mut placed: Vec<[i64; 2]> = Vec::new();
    let fits = |placed: &[[i64; 2]], p: [i64; 2]| {
        let q = int_point(&p);
        placed.iter().enumerate().all(|(i, a)| {
            placed[i + 1..]
                .iter()
                .all(|b| !collinear2(&int_point(a), &int_point(b), &q))
        })
    };
    let place_on_row = |placed: &mut Vec<[i64; 2]>, y: i64, from: i64| -> i64 {
        let x = (from..).find(|&x| fits(placed, [x, y])).expect("finitely many lines to avoid");
        placed.push([x, y]);
        x
    };
    for row in 1..=pairs as i64 {
        let first = place_on_row(&mut placed, row, 0);
        place_on_row(&mut placed, row, first + 1);
    }
    if lone {
        place_on_row(&mut placed, pairs as i64 + 1, 0);
    }
    placed
}

pub fn construct(id: ConstructionId, n: usize) -> Result<Construction, ExtremalError> {
    id.check(n)?;
    let fail = |reason: String| ExtremalError::ConstructionFailed {
        id: id.to_string(),
        reason,
    };
    match id {
        ConstructionId::InplaneGeneric { d } => {
            let ps = PointSet::new(d, inplane_points(d, n), None)?;
            if let Some(bad) = find_small_flat(&ps) {
                return Err(fail(format!("points {bad:?} are not in general position")));
            }
            Ok(Construction::Points(ps))
        }
        ConstructionId::Cone { d } => {
            let mut pts = inplane_points(d, n - 1);
            let mut apex = vec![Rational::from_integer(BigInt::from(0)); d];
            apex[d - 1] = Rational::from_integer(BigInt::from(1));
            pts.push(apex);
            let ps = PointSet::new(d, pts, None)?;
            if let Some(bad) = find_small_flat(&ps) {
                return Err(fail(format!("points {bad:?} are not in general position")));
            }
            Ok(Construction::Points(ps))
        }
        ConstructionId::ParallelPairs => {
            let pairs = if n.is_multiple_of(2) { (n - 2) / 2 } else { (n - 3) / 2 };
            let rows = parallel_rows(pairs, n % 2 == 1);
            let mut pts: Vec<Vec<Rational>> = rows.iter().map(|&[x, y]| int_point(&[x, y, 0])).collect();
            pts.push(int_point(&[0, 0, 1]));
            pts.push(int_point(&[1, 0, 1]));
            let ps = PointSet::new(3, pts, None)?;
            if let Some(bad) = find_small_flat(&ps) {
                return Err(fail(format!("points {bad:?} are collinear")));
            }
            // every in-plane pair and the apex pair point along (1, 0, 0)
            for (i, pair) in ps.points()[..2 * pairs].chunks(2).enumerate() {
                if pair[0][1] != pair[1][1] || pair[0][2] != pair[1][2] {
                    return Err(fail(format!("pair {i} is not parallel to the apex pair")));
                }
            }
            let distinct_rows: std::collections::HashSet<&Rational> =
                ps.points()[..n - 2].iter().map(|p| &p[1]).collect();
            if distinct_rows.len() != pairs + usize::from(n % 2 == 1) {
                return Err(fail("two pairs share a line".into()));
            }
            Ok(Construction::Points(ps))
        }
        ConstructionId::TwoLines => {
            let mut pts: Vec<Vec<Rational>> = (0..(n - 2) as i64).map(|x| int_point(&[x, 0])).collect();
            pts.push(int_point(&[0, 1]));
            pts.push(int_point(&[0, 2]));
            let ps = PointSet::new(2, pts, None)?;
            let on_b = [0, n - 2, n - 1];
            if !collinear2(ps.point(on_b[0]), ps.point(on_b[1]), ps.point(on_b[2])) {
                return Err(fail("second line is not a line".into()));
            }
            Ok(Construction::Points(ps))
        }
        ConstructionId::TwoDisjointEdges { .. } => {
            let h = Hypergraph::new(2 * n, vec![(0..n).collect(), (n..2 * n).collect()])?;
            Ok(Construction::Hypergraph(h))
        }
    }
}

pub fn expected_count(id: ConstructionId, n: usize) -> Result<Expected, ExtremalError> {
    id.check(n)?;
    let c = |a: usize, b: usize| binomial(a as u64, b as u64);
    let n64 = n as u64;
    Ok(match id {
        ConstructionId::InplaneGeneric { d } => Expected::Count(c(n, d + 1)),
        ConstructionId::Cone { d } => Expected::Count(c(n - 1, d + 1)),
        ConstructionId::ParallelPairs => {
            let correction = if n.is_multiple_of(2) {
                (n64 - 2) * (n64 - 5) / 2
            } else {
                (n64 - 3) * (n64 - 5) / 2
            };
            Expected::Count(c(n - 1, 4) - correction)
        }
        ConstructionId::TwoLines => Expected::Count(c(n - 2, 3) + c(n - 3, 2) + 1),
        ConstructionId::TwoDisjointEdges { k } => Expected::Yblm(two_disjoint_edges_closed_form(n64, k as u64)),
    })
}

/// The value the closed form predicts, computed by enumeration.
pub fn measured_value(id: ConstructionId, c: &Construction) -> Result<Expected, ExtremalError> {
    Ok(match (id, c) {
        (ConstructionId::TwoDisjointEdges { k }, Construction::Hypergraph(h)) => {
            Expected::Yblm(h.semi_simplexes(k)?.yblm())
        }
        (_, Construction::Points(ps)) => Expected::Count(enumerate_affine_simplexes(ps).total as u64),
        (_, Construction::Hypergraph(h)) => {
            return Err(ExtremalError::Infeasible {
                id: id.to_string(),
                reason: format!("unexpected hypergraph on {} vertices", h.n()),
            })
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstructionCheck {
    pub construction: ConstructionId,
    pub n: usize,
    pub expected: Expected,
    pub enumerated: Expected,
    pub agrees: bool,
}

pub fn check_construction(id: ConstructionId, n: usize) -> Result<(Construction, ConstructionCheck), ExtremalError> {
    let built = construct(id, n)?;
    let expected = expected_count(id, n)?;
    let enumerated = measured_value(id, &built)?;
    let agrees = expected == enumerated;
    Ok((
        built,
        ConstructionCheck {
            construction: id,
            n,
            expected,
            enumerated,
            agrees,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::rational;
    use crate::geometry::classify_r3_semi_simplexes;

    #[test]
    fn closed_forms() {
        assert_eq!(expected_count(ConstructionId::ParallelPairs, 6).unwrap(), Expected::Count(3));
        assert_eq!(expected_count(ConstructionId::ParallelPairs, 7).unwrap(), Expected::Count(11));
        assert_eq!(expected_count(ConstructionId::ParallelPairs, 10).unwrap(), Expected::Count(106));
        assert_eq!(expected_count(ConstructionId::TwoLines, 8).unwrap(), Expected::Count(31));
        assert_eq!(expected_count(ConstructionId::Cone { d: 3 }, 9).unwrap(), Expected::Count(70));
        assert_eq!(expected_count(ConstructionId::InplaneGeneric { d: 3 }, 8).unwrap(), Expected::Count(70));
        assert_eq!(
            expected_count(ConstructionId::TwoDisjointEdges { k: 2 }, 3).unwrap(),
            Expected::Yblm(rational(2, 5))
        );
    }

    #[test]
    fn infeasible_parameters() {
        assert!(matches!(construct(ConstructionId::ParallelPairs, 5), Err(ExtremalError::Infeasible { .. })));
        assert!(construct(ConstructionId::Cone { d: 1 }, 5).is_err());
        assert!(construct(ConstructionId::TwoDisjointEdges { k: 7 }, 3).is_err());
        assert!(matches!(ConstructionId::parse("spiral", &[3]), Err(ExtremalError::UnknownConstruction(_))));
        assert!(ConstructionId::parse("cone", &[3]).is_err());
        assert_eq!(ConstructionId::parse("cone", &[3, 9]).unwrap(), (ConstructionId::Cone { d: 3 }, 9));
    }

    #[test]
    fn small_parallel_pairs_geometry() {
        let Construction::Points(ps) = construct(ConstructionId::ParallelPairs, 6).unwrap() else { panic!() };
        let counts = classify_r3_semi_simplexes(&ps).unwrap();
        assert_eq!((counts.coplanar_quadruples, counts.generic_quintuples), (3, 0));
    }

    #[test]
    fn measured_matches_expected_on_samples() {
        for (id, n) in [
            (ConstructionId::ParallelPairs, 6),
            (ConstructionId::ParallelPairs, 9),
            (ConstructionId::TwoLines, 8),
            (ConstructionId::Cone { d: 3 }, 9),
            (ConstructionId::InplaneGeneric { d: 2 }, 7),
            (ConstructionId::TwoDisjointEdges { k: 3 }, 4),
        ] {
            let (_, check) = check_construction(id, n).unwrap();
            assert!(check.agrees, "{id} n={n}: {check:?}");
        }
    }
}
