//! Affine simplexes in exact rational point sets.
//!
//! A set of `k >= 3` points is an affine simplex when it lies on a
//! `(k-2)`-flat while every proper subset is affinely independent. Lifting
//! each point `p` to the vector `(p, 1)` turns affine simplexes into circuits
//! of size at least 3, which is how [`enumerate_affine_simplexes`] works.
//! The direct difference-vector definition lives in [`affine_rank`] and
//! [`is_affine_simplex`] and is what the tests compare against.

use std::collections::{BTreeMap, HashMap};

use num::{BigInt, One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::combinat::{k_subsets, SmallSet, MAX_ELEMENTS};
use crate::exactla::{clear_denominators, integer_rank, Rational};
use crate::matroid::{check_labels, enumerate_circuits, MatroidError, VectorConfiguration};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("point {index} has length {found}, expected dimension {expected}")]
    WrongLength {
        index: usize,
        found: usize,
        expected: usize,
    },
    #[error("points {first} and {second} coincide")]
    DuplicatePoint { first: usize, second: usize },
    #[error("at most {MAX_ELEMENTS} points are supported, got {0}")]
    TooMany(usize),
    #[error("invalid labels: {0}")]
    Labels(MatroidError),
    #[error("index {index} out of range for a set of {len} points")]
    InvalidIndex { index: usize, len: usize },
    #[error("an affine simplex has at least 3 points, subset has {0}")]
    SubsetTooSmall(usize),
    #[error("operation needs dimension {expected}, point set has dimension {found}")]
    WrongDimension { expected: usize, found: usize },
    #[error("points {0:?} lie on a common flat of too small a dimension")]
    SmallFlat(Vec<usize>),
    #[error("vector {0} is zero")]
    ZeroVector(usize),
    #[error("vectors {0} and {1} are parallel")]
    ParallelVectors(usize, usize),
    #[error("cannot project a 0-dimensional configuration")]
    NoDimension,
}

/// Ordered set of distinct points in `Q^d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    dimension: usize,
    points: Vec<Vec<Rational>>,
    labels: Option<Vec<String>>,
}

impl PointSet {
    pub fn new(
        dimension: usize,
        points: Vec<Vec<Rational>>,
        labels: Option<Vec<String>>,
    ) -> Result<Self, GeometryError> {
        if points.len() > MAX_ELEMENTS {
            return Err(GeometryError::TooMany(points.len()));
        }
        let mut seen: HashMap<&[Rational], usize> = HashMap::new();
        for (index, p) in points.iter().enumerate() {
            if p.len() != dimension {
                return Err(GeometryError::WrongLength {
                    index,
                    found: p.len(),
                    expected: dimension,
                });
            }
            if let Some(&first) = seen.get(p.as_slice()) {
                return Err(GeometryError::DuplicatePoint { first, second: index });
            }
            seen.insert(p, index);
        }
        if let Some(ls) = &labels {
            check_labels(ls, points.len()).map_err(GeometryError::Labels)?;
        }
        Ok(Self {
            dimension,
            points,
            labels,
        })
    }

    pub fn from_integers(dimension: usize, points: &[Vec<i64>]) -> Result<Self, GeometryError> {
        let ps = points
            .iter()
            .map(|p| p.iter().map(|&x| Rational::from_integer(x.into())).collect())
            .collect();
        Self::new(dimension, ps, None)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<Rational>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[Rational] {
        &self.points[i]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Applies `x -> A x + b` to every point. `A` must be invertible for the
    /// result to stay duplicate-free.
    pub fn map_affine(&self, a: &[Vec<Rational>], b: &[Rational]) -> Result<PointSet, GeometryError> {
        let pts = self
            .points
            .iter()
            .map(|p| {
                (0..self.dimension)
                    .map(|r| {
                        a[r].iter().zip(p).fold(b[r].clone(), |acc, (x, y)| acc + x * y)
                    })
                    .collect()
            })
            .collect();
        PointSet::new(self.dimension, pts, self.labels.clone())
    }

    /// Homogenized vectors `(p, 1)`; circuits of these are the affine dependencies.
    pub fn lift(&self) -> VectorConfiguration {
        let vs = self
            .points
            .iter()
            .map(|p| {
                let mut v = p.clone();
                v.push(Rational::one());
                v
            })
            .collect();
        VectorConfiguration::new(self.dimension + 1, vs, self.labels.clone())
            .expect("lifted vectors share one length")
    }

    fn check_indices(&self, subset: &[usize]) -> Result<(), GeometryError> {
        match subset.iter().find(|&&i| i >= self.len()) {
            Some(&index) => Err(GeometryError::InvalidIndex { index, len: self.len() }),
            None => Ok(()),
        }
    }
}

/// Dimension of the affine hull of `subset`: rank of the differences to its
/// first member. Panics on out-of-range indices.
pub fn affine_rank(ps: &PointSet, subset: &[usize]) -> usize {
    match subset.first() {
        None => 0,
        Some(&base) => affine_rank_from_base(ps, subset, base),
    }
}

/// Same as [`affine_rank`] but with an explicit base point, which need not
/// be first.
pub fn affine_rank_from_base(ps: &PointSet, subset: &[usize], base: usize) -> usize {
    let origin = &ps.points[base];
    let rows: Vec<Vec<BigInt>> = subset
        .iter()
        .filter(|&&i| i != base)
        .map(|&i| {
            let diff: Vec<Rational> = ps.points[i].iter().zip(origin).map(|(a, b)| a - b).collect();
            clear_denominators(&diff)
        })
        .collect();
    integer_rank(rows, ps.dimension)
}

fn affine_rank_set(ps: &PointSet, s: SmallSet) -> usize {
    affine_rank(ps, &s.to_vec())
}

pub fn is_affine_simplex(ps: &PointSet, subset: &[usize]) -> Result<bool, GeometryError> {
    ps.check_indices(subset)?;
    let s = SmallSet::from_indices(subset.iter().copied());
    let k = s.len();
    if k < 3 {
        return Err(GeometryError::SubsetTooSmall(k));
    }
    if affine_rank_set(ps, s) != k - 2 {
        return Ok(false);
    }
    Ok(s.iter().all(|x| affine_rank_set(ps, s.without(x)) == k - 2))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AffineSimplex {
    pub members: Vec<usize>,
    pub k: usize,
}

/// Affine simplexes grouped and counted by cardinality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimplexReport {
    pub dimension: usize,
    pub n: usize,
    pub simplexes: Vec<AffineSimplex>,
    pub counts: BTreeMap<usize, usize>,
    pub total: usize,
}

impl SimplexReport {
    pub(crate) fn from_member_lists(dimension: usize, n: usize, lists: Vec<Vec<usize>>) -> Self {
        let mut counts = BTreeMap::new();
        let simplexes: Vec<AffineSimplex> = lists
            .into_iter()
            .map(|members| {
                *counts.entry(members.len()).or_insert(0) += 1;
                AffineSimplex { k: members.len(), members }
            })
            .collect();
        let total = simplexes.len();
        Self {
            dimension,
            n,
            simplexes,
            counts,
            total,
        }
    }

    pub fn count(&self, k: usize) -> usize {
        self.counts.get(&k).copied().unwrap_or(0)
    }
}

/// All affine simplexes (sizes 3 through d + 2), sorted by member list.
pub fn enumerate_affine_simplexes(ps: &PointSet) -> SimplexReport {
    let lifted = ps.lift();
    let lists = enumerate_circuits(&lifted, 3, ps.dimension + 2)
        .into_iter()
        .map(|c| c.members)
        .collect();
    SimplexReport::from_member_lists(ps.dimension, ps.len(), lists)
}

/// A d-subset on a (d-2)-flat, if any.
pub fn find_small_flat(ps: &PointSet) -> Option<Vec<usize>> {
    let d = ps.dimension;
    if d == 0 || ps.len() < d {
        return None;
    }
    k_subsets(ps.len(), d)
        .find(|s| affine_rank_set(ps, *s) != d - 1)
        .map(|s| s.to_vec())
}

/// True iff no d points lie on a (d-2)-flat.
pub fn check_small_flat_hypothesis(ps: &PointSet) -> bool {
    find_small_flat(ps).is_none()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct R3SemiSimplexCounts {
    pub coplanar_quadruples: usize,
    pub generic_quintuples: usize,
}

impl R3SemiSimplexCounts {
    pub fn total(&self) -> usize {
        self.coplanar_quadruples + self.generic_quintuples
    }
}

/// For points of `Q^3` with no three collinear, the affine simplexes are the
/// coplanar quadruples and the quintuples without a coplanar quadruple.
pub fn classify_r3_semi_simplexes(ps: &PointSet) -> Result<R3SemiSimplexCounts, GeometryError> {
    if ps.dimension != 3 {
        return Err(GeometryError::WrongDimension {
            expected: 3,
            found: ps.dimension,
        });
    }
    if let Some(triple) = find_small_flat(ps) {
        return Err(GeometryError::SmallFlat(triple));
    }
    let report = enumerate_affine_simplexes(ps);
    debug_assert_eq!(report.count(3), 0);
    Ok(R3SemiSimplexCounts {
        coplanar_quadruples: report.count(4),
        generic_quintuples: report.count(5),
    })
}

/// Projects directions of a configuration in `Q^D` onto the hyperplane
/// `a.x = 1`, returning points of `Q^(D-1)`.
///
/// `a = (1, t, .., t^(D-1))` for the smallest positive integer `t` with
/// `a.v != 0` for every vector; each vector rules out at most `D - 1`
/// values of `t`. Since `a_0 = 1`, the first coordinate is determined by
/// the others on the hyperplane and is dropped.
pub fn project_to_affine(cfg: &VectorConfiguration) -> Result<PointSet, GeometryError> {
    let dim = cfg.dimension();
    if dim == 0 {
        return Err(GeometryError::NoDimension);
    }
    let ints: Vec<Vec<BigInt>> = cfg.vectors().iter().map(|v| clear_denominators(v)).collect();
    let mut directions: HashMap<Vec<BigInt>, usize> = HashMap::new();
    for (i, v) in ints.iter().enumerate() {
        if v.iter().all(|x| x.is_zero()) {
            return Err(GeometryError::ZeroVector(i));
        }
        let dir = crate::exactla::primitive_from_integers(v.clone()).expect("nonzero");
        if let Some(&j) = directions.get(&dir) {
            return Err(GeometryError::ParallelVectors(j, i));
        }
        directions.insert(dir, i);
    }

    let functional = (1i64..)
        .map(|t| {
            let mut a = Vec::with_capacity(dim);
            let mut p = BigInt::one();
            for _ in 0..dim {
                a.push(Rational::from_integer(p.clone()));
                p *= t;
            }
            a
        })
        .find(|a| {
            cfg.vectors().iter().all(|v| {
                !v.iter().zip(a).fold(Rational::zero(), |acc, (x, y)| acc + x * y).is_zero()
            })
        })
        .expect("finitely many t values are excluded");

    let points = cfg
        .vectors()
        .iter()
        .map(|v| {
            let scale = v.iter().zip(&functional).fold(Rational::zero(), |acc, (x, y)| acc + x * y);
            v[1..].iter().map(|x| x / &scale).collect()
        })
        .collect();
    PointSet::new(dim - 1, points, cfg.labels().map(|l| l.to_vec()))
}

/// Cross product sign test for points of `Q^2`, used by construction checks.
pub(crate) fn collinear2(a: &[Rational], b: &[Rational], c: &[Rational]) -> bool {
    let det = (&b[0] - &a[0]) * (&c[1] - &a[1]) - (&b[1] - &a[1]) * (&c[0] - &a[0]);
    det.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{int, rational};
    use crate::matroid::enumerate_circuits;
    use proptest::prelude::*;

    fn pts(d: usize, ps: &[&[i64]]) -> PointSet {
        let v: Vec<Vec<i64>> = ps.iter().map(|p| p.to_vec()).collect();
        PointSet::from_integers(d, &v).unwrap()
    }

    fn moment_in_plane(n: i64) -> PointSet {
        let v: Vec<Vec<i64>> = (1..=n).map(|t| vec![t, t * t, 0]).collect();
        PointSet::from_integers(3, &v).unwrap()
    }

    #[test]
    fn affine_rank_examples() {
        let p = pts(2, &[&[0, 0], &[1, 1], &[2, 2]]);
        assert_eq!(affine_rank(&p, &[0]), 0);
        assert_eq!(affine_rank(&p, &[0, 1, 2]), 1);
        let q = pts(3, &[&[0, 0, 0], &[1, 2, 0], &[3, -1, 1], &[2, 5, 7]]);
        assert_eq!(affine_rank(&q, &[0, 1, 2, 3]), 3);
    }

    #[test]
    fn simplex_kinds_in_space() {
        let collinear = pts(3, &[&[0, 0, 0], &[1, 1, 1], &[2, 2, 2]]);
        assert!(is_affine_simplex(&collinear, &[0, 1, 2]).unwrap());
        let square = pts(3, &[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 1, 0]]);
        assert!(is_affine_simplex(&square, &[0, 1, 2, 3]).unwrap());
        let with_line = pts(3, &[&[0, 0, 0], &[1, 0, 0], &[2, 0, 0], &[0, 1, 0]]);
        assert!(!is_affine_simplex(&with_line, &[0, 1, 2, 3]).unwrap());
        assert_eq!(is_affine_simplex(&with_line, &[0, 1]), Err(GeometryError::SubsetTooSmall(2)));
        assert!(is_affine_simplex(&with_line, &[0, 1, 9]).is_err());
    }

    #[test]
    fn duplicates_are_rejected() {
        let err = PointSet::from_integers(2, &[vec![0, 0], vec![1, 2], vec![0, 0]]).unwrap_err();
        assert_eq!(err, GeometryError::DuplicatePoint { first: 0, second: 2 });
    }

    #[test]
    fn coplanar_moment_curve_counts() {
        let p = moment_in_plane(8);
        let r = enumerate_affine_simplexes(&p);
        assert_eq!(r.total, 70);
        assert_eq!(r.count(4), 70);
        assert_eq!(classify_r3_semi_simplexes(&p).unwrap(), R3SemiSimplexCounts { coplanar_quadruples: 70, generic_quintuples: 0 });
    }

    #[test]
    fn cone_counts() {
        let mut v: Vec<Vec<i64>> = (1..=7).map(|t| vec![t, t * t, 0]).collect();
        v.push(vec![0, 0, 1]);
        let p = PointSet::from_integers(3, &v).unwrap();
        assert_eq!(enumerate_affine_simplexes(&p).total, 35);
    }

    #[test]
    fn triangle_has_no_simplex() {
        let p = pts(2, &[&[0, 0], &[1, 0], &[0, 1]]);
        assert_eq!(enumerate_affine_simplexes(&p).total, 0);
    }

    #[test]
    fn five_generic_points_in_space() {
        let p = pts(3, &[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 2, 3]]);
        assert_eq!(classify_r3_semi_simplexes(&p).unwrap(), R3SemiSimplexCounts { coplanar_quadruples: 0, generic_quintuples: 1 });
    }

    #[test]
    fn small_flat_hypothesis() {
        let v: Vec<Vec<i64>> = (1..=6).map(|t| vec![t, t * t, t * t * t]).collect();
        assert!(check_small_flat_hypothesis(&PointSet::from_integers(3, &v).unwrap()));
        let bad = pts(3, &[&[0, 0, 0], &[1, 1, 1], &[2, 2, 2], &[0, 1, 5]]);
        assert!(!check_small_flat_hypothesis(&bad));
        assert_eq!(classify_r3_semi_simplexes(&bad), Err(GeometryError::SmallFlat(vec![0, 1, 2])));
        assert!(check_small_flat_hypothesis(&pts(3, &[&[0, 0, 0], &[1, 1, 1]])));
        assert!(classify_r3_semi_simplexes(&pts(2, &[&[0, 0]])).is_err());
    }

    #[test]
    fn projection_of_plane_triple() {
        let c = VectorConfiguration::from_integers(2, &[vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        let p = project_to_affine(&c).unwrap();
        assert_eq!(p.dimension(), 1);
        assert_eq!(p.points(), &[vec![int(0)], vec![int(1)], vec![rational(1, 2)]]);
        let r = enumerate_affine_simplexes(&p);
        assert_eq!(r.total, 1);
        assert_eq!(r.simplexes[0].members, vec![0, 1, 2]);
    }

    #[test]
    fn projection_errors_and_single_vector() {
        let zero = VectorConfiguration::from_integers(2, &[vec![1, 0], vec![0, 0]]).unwrap();
        assert_eq!(project_to_affine(&zero), Err(GeometryError::ZeroVector(1)));
        let par = VectorConfiguration::from_integers(2, &[vec![1, 2], vec![0, 1], vec![-2, -4]]).unwrap();
        assert_eq!(project_to_affine(&par), Err(GeometryError::ParallelVectors(0, 2)));
        let one = VectorConfiguration::from_integers(3, &[vec![2, 0, 1]]).unwrap();
        assert_eq!(project_to_affine(&one).unwrap().len(), 1);
    }

    #[test]
    fn projection_skips_bad_functionals() {
        // (1, -1) is orthogonal to a = (1, 1), forcing t = 2
        let c = VectorConfiguration::from_integers(2, &[vec![1, -1], vec![1, 0]]).unwrap();
        let p = project_to_affine(&c).unwrap();
        assert_eq!(p.points(), &[vec![int(1)], vec![int(0)]]);
    }

    fn brute(ps: &PointSet) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for k in 3..=ps.len() {
            for s in k_subsets(ps.len(), k) {
                if is_affine_simplex(ps, &s.to_vec()).unwrap() {
                    out.push(s);
                }
            }
        }
        out.sort();
        out.into_iter().map(|s| s.to_vec()).collect()
    }

    fn distinct_points(max_d: usize, max_n: usize) -> impl Strategy<Value = PointSet> {
        (1..=max_d, 0..=max_n).prop_flat_map(|(d, n)| {
            prop::collection::vec(prop::collection::vec(-2i64..=2, d), n).prop_map(move |mut v| {
                v.sort();
                v.dedup();
                PointSet::from_integers(d, &v).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn enumeration_matches_direct_definition(ps in distinct_points(4, 9)) {
            let r = enumerate_affine_simplexes(&ps);
            let lists: Vec<Vec<usize>> = r.simplexes.iter().map(|s| s.members.clone()).collect();
            prop_assert_eq!(lists, brute(&ps));
        }

        #[test]
        fn base_point_does_not_matter(ps in distinct_points(4, 7)) {
            let all: Vec<usize> = (0..ps.len()).collect();
            let r = affine_rank(&ps, &all);
            for &b in &all {
                prop_assert_eq!(affine_rank_from_base(&ps, &all, b), r);
            }
        }

        #[test]
        fn invariant_under_affine_maps(ps in distinct_points(3, 7), shear in -3i64..=3, shift in -5i64..=5, scale in 1i64..=3) {
            let d = ps.dimension();
            let a: Vec<Vec<Rational>> = (0..d).map(|r| (0..d).map(|c| {
                if r == c { rational(scale, 2) } else if c == r + 1 { int(shear) } else { int(0) }
            }).collect()).collect();
            let b: Vec<Rational> = (0..d).map(|i| int(shift * i as i64)).collect();
            let mapped = ps.map_affine(&a, &b).unwrap();
            prop_assert_eq!(enumerate_affine_simplexes(&ps).simplexes, enumerate_affine_simplexes(&mapped).simplexes);
        }

        #[test]
        fn sizes_under_hypothesis(ps in distinct_points(3, 8)) {
            if check_small_flat_hypothesis(&ps) {
                let d = ps.dimension();
                for s in enumerate_affine_simplexes(&ps).simplexes {
                    prop_assert!(s.k == d + 1 || s.k == d + 2);
                }
            }
        }

        #[test]
        fn projection_preserves_circuits(vs in (2usize..=4, 1usize..=8).prop_flat_map(|(d, n)| {
            prop::collection::vec(prop::collection::vec(-3i64..=3, d), n).prop_map(move |v| (d, v))
        })) {
            let (d, v) = vs;
            let c = VectorConfiguration::from_integers(d, &v).unwrap();
            if let Ok(p) = project_to_affine(&c) {
                let circuits: Vec<Vec<usize>> = enumerate_circuits(&c, 1, usize::MAX).into_iter().map(|c| c.members).collect();
                let simplexes: Vec<Vec<usize>> = enumerate_affine_simplexes(&p).simplexes.into_iter().map(|s| s.members).collect();
                prop_assert_eq!(circuits, simplexes);
            }
        }
    }
}
