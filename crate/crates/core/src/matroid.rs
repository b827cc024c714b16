//! Circuits (minimal dependent subsets) of a finite vector configuration.

use std::collections::{BTreeMap, HashSet};

use num::{BigInt, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::combinat::{SmallSet, MAX_ELEMENTS};
use crate::exactla::{clear_denominators, integer_rank, primitive_integer_vector, Rational, RationalMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatroidError {
    #[error("vector {index} has length {found}, expected dimension {expected}")]
    WrongLength {
        index: usize,
        found: usize,
        expected: usize,
    },
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("{labels} labels given for {vectors} vectors")]
    LabelCount { labels: usize, vectors: usize },
    #[error("at most {MAX_ELEMENTS} vectors are supported, got {0}")]
    TooMany(usize),
    #[error("index {index} out of range for a configuration of {len} vectors")]
    InvalidIndex { index: usize, len: usize },
    #[error("index {0} repeated in subset")]
    RepeatedIndex(usize),
    #[error("empty subset")]
    EmptySubset,
}

/// Ordered list of rational vectors of a common dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorConfiguration {
    dimension: usize,
    vectors: Vec<Vec<Rational>>,
    labels: Option<Vec<String>>,
    // each vector scaled to integers; same span, so ranks agree
    integer: Vec<Vec<BigInt>>,
}

impl VectorConfiguration {
    pub fn new(
        dimension: usize,
        vectors: Vec<Vec<Rational>>,
        labels: Option<Vec<String>>,
    ) -> Result<Self, MatroidError> {
        if vectors.len() > MAX_ELEMENTS {
            return Err(MatroidError::TooMany(vectors.len()));
        }
        for (index, v) in vectors.iter().enumerate() {
            if v.len() != dimension {
                return Err(MatroidError::WrongLength {
                    index,
                    found: v.len(),
                    expected: dimension,
                });
            }
        }
        if let Some(ls) = &labels {
            check_labels(ls, vectors.len())?;
        }
        let integer = vectors.iter().map(|v| clear_denominators(v)).collect();
        Ok(Self {
            dimension,
            vectors,
            labels,
            integer,
        })
    }

    pub fn from_integers(dimension: usize, vectors: &[Vec<i64>]) -> Result<Self, MatroidError> {
        let vs = vectors
            .iter()
            .map(|v| v.iter().map(|&x| Rational::from_integer(x.into())).collect())
            .collect();
        Self::new(dimension, vs, None)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<Rational>] {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> &[Rational] {
        &self.vectors[i]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Display name: the label if present, else the index.
    pub fn name(&self, i: usize) -> String {
        match &self.labels {
            Some(ls) => ls[i].clone(),
            None => i.to_string(),
        }
    }

    pub fn is_zero(&self, i: usize) -> bool {
        self.integer[i].iter().all(|x| x.is_zero())
    }

    pub fn rank(&self) -> usize {
        self.subset_rank(SmallSet::full(self.len()))
    }

    pub fn subset_rank(&self, subset: SmallSet) -> usize {
        let rows: Vec<Vec<BigInt>> = subset.iter().map(|i| self.integer[i].clone()).collect();
        integer_rank(rows, self.dimension)
    }

    pub(crate) fn validate_subset(&self, subset: &[usize]) -> Result<SmallSet, MatroidError> {
        let mut s = SmallSet::EMPTY;
        for &i in subset {
            if i >= self.len() {
                return Err(MatroidError::InvalidIndex {
                    index: i,
                    len: self.len(),
                });
            }
            if s.contains(i) {
                return Err(MatroidError::RepeatedIndex(i));
            }
            s = s.with(i);
        }
        Ok(s)
    }

    /// Integer coefficient witness of a circuit: primitive, first entry positive.
    fn circuit_coefficients(&self, members: SmallSet) -> Vec<BigInt> {
        let cols: Vec<Vec<Rational>> = members.iter().map(|i| self.vectors[i].clone()).collect();
        let m = RationalMatrix::from_columns(self.dimension, &cols).expect("vector lengths checked at construction");
        let basis = m.nullspace_basis();
        debug_assert_eq!(basis.len(), 1, "circuit nullspace must be one-dimensional");
        primitive_integer_vector(&basis[0]).expect("nullspace basis vectors are nonzero")
    }
}

pub(crate) fn check_labels(labels: &[String], count: usize) -> Result<(), MatroidError> {
    if labels.len() != count {
        return Err(MatroidError::LabelCount {
            labels: labels.len(),
            vectors: count,
        });
    }
    let mut seen = HashSet::new();
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(MatroidError::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

/// A minimal dependent subset together with its dependency coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Circuit {
    pub members: Vec<usize>,
    #[serde(serialize_with = "crate::io::ser_bigints")]
    pub coefficients: Vec<BigInt>,
}

impl Circuit {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn set(&self) -> SmallSet {
        SmallSet::from_indices(self.members.iter().copied())
    }
}

/// True iff `subset` is dependent while every proper subset is independent.
pub fn is_circuit(cfg: &VectorConfiguration, subset: &[usize]) -> Result<bool, MatroidError> {
    if subset.is_empty() {
        return Err(MatroidError::EmptySubset);
    }
    let s = cfg.validate_subset(subset)?;
    let size = s.len();
    if cfg.subset_rank(s) != size - 1 {
        return Ok(false);
    }
    Ok(s.iter().all(|x| cfg.subset_rank(s.without(x)) == size - 1))
}

/// All circuits with `min_size <= |C| <= max_size`, sorted by member list.
///
/// Works level by level: a k-set is a candidate only if all of its
/// (k-1)-subsets are independent, so supersets of known circuits are never
/// rank-tested. A candidate is then a circuit iff its rank is k - 1.
pub fn enumerate_circuits(cfg: &VectorConfiguration, min_size: usize, max_size: usize) -> Vec<Circuit> {
    let n = cfg.len();
    let cap = max_size.min(cfg.rank() + 1);
    let mut found: Vec<SmallSet> = Vec::new();

    let mut independent: Vec<SmallSet> = Vec::new();
    for i in 0..n {
        if cfg.is_zero(i) {
            if min_size <= 1 && cap >= 1 {
                found.push(SmallSet::singleton(i));
            }
        } else {
            independent.push(SmallSet::singleton(i));
        }
    }

    let mut size = 1;
    while size < cap && !independent.is_empty() {
        size += 1;
        let known: HashSet<SmallSet> = independent.iter().copied().collect();
        let candidates: Vec<SmallSet> = independent
            .iter()
            .flat_map(|&base| {
                let start = base.last().map_or(0, |m| m + 1);
                let known = &known;
                (start..n).filter_map(move |j| {
                    if cfg.is_zero(j) {
                        return None;
                    }
                    let s = base.with(j);
                    base.iter().all(|x| known.contains(&s.without(x))).then_some(s)
                })
            })
            .collect();
        let ranked: Vec<(SmallSet, bool)> = candidates
            .into_par_iter()
            .map(|s| (s, cfg.subset_rank(s) == size - 1))
            .collect();
        independent = Vec::with_capacity(ranked.len());
        for (s, dependent) in ranked {
            if dependent {
                if size >= min_size {
                    found.push(s);
                }
            } else {
                independent.push(s);
            }
        }
    }

    found.sort();
    found
        .into_par_iter()
        .map(|s| Circuit {
            members: s.to_vec(),
            coefficients: cfg.circuit_coefficients(s),
        })
        .collect()
}

pub fn count_circuits_by_size(cfg: &VectorConfiguration) -> BTreeMap<usize, usize> {
    let mut counts = BTreeMap::new();
    for c in enumerate_circuits(cfg, 1, usize::MAX) {
        *counts.entry(c.len()).or_insert(0) += 1;
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::k_subsets;
    use num::Signed;
    use proptest::prelude::*;

    fn cfg(d: usize, vs: &[&[i64]]) -> VectorConfiguration {
        let vs: Vec<Vec<i64>> = vs.iter().map(|v| v.to_vec()).collect();
        VectorConfiguration::from_integers(d, &vs).unwrap()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn is_circuit_examples() {
        let c = cfg(2, &[&[1, 0], &[0, 1], &[1, 1]]);
        assert!(is_circuit(&c, &[0, 1, 2]).unwrap());
        assert!(!is_circuit(&c, &[0, 1]).unwrap());
        let p = cfg(2, &[&[1, 0], &[2, 0], &[0, 1]]);
        assert!(!is_circuit(&p, &[0, 1, 2]).unwrap());
        assert!(is_circuit(&p, &[0, 1]).unwrap());
        assert!(matches!(is_circuit(&p, &[0, 3]), Err(MatroidError::InvalidIndex { index: 3, .. })));
        assert!(is_circuit(&p, &[]).is_err());
        assert!(is_circuit(&p, &[1, 1]).is_err());
    }

    #[test]
    fn plane_triple_is_one_circuit() {
        let c = cfg(2, &[&[1, 0], &[0, 1], &[1, 1]]);
        let cs = enumerate_circuits(&c, 1, 3);
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].members, vec![0, 1, 2]);
        assert_eq!(cs[0].coefficients, big(&[1, 1, -1]));
    }

    #[test]
    fn parallel_pair_is_a_two_circuit() {
        let c = cfg(2, &[&[1, 0], &[2, 0], &[0, 1]]);
        let cs = enumerate_circuits(&c, 1, 3);
        assert_eq!(cs, vec![Circuit { members: vec![0, 1], coefficients: big(&[2, -1]) }]);
        let counts = count_circuits_by_size(&c);
        assert_eq!(counts.get(&2), Some(&1));
        assert_eq!(counts.get(&3), None);
    }

    #[test]
    fn empty_configuration() {
        let c = VectorConfiguration::new(3, vec![], None).unwrap();
        assert!(count_circuits_by_size(&c).is_empty());
    }

    #[test]
    fn zero_vector_is_a_loop() {
        let c = cfg(2, &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let cs = enumerate_circuits(&c, 1, 3);
        let members: Vec<Vec<usize>> = cs.iter().map(|c| c.members.clone()).collect();
        assert_eq!(members, vec![vec![0], vec![1, 2, 3]]);
        assert_eq!(cs[0].coefficients, big(&[1]));
    }

    #[test]
    fn size_window_is_respected() {
        let c = cfg(2, &[&[1, 0], &[2, 0], &[0, 1], &[1, 1]]);
        let all = enumerate_circuits(&c, 1, 9);
        let only3 = enumerate_circuits(&c, 3, 3);
        assert!(only3.iter().all(|c| c.len() == 3));
        assert_eq!(only3.len(), all.iter().filter(|c| c.len() == 3).count());
    }

    #[test]
    fn generic_vectors_give_all_top_subsets() {
        // moment curve (1, t, t^2, t^3) vectors, any 4 independent
        let vs: Vec<Vec<i64>> = (1..=6).map(|t: i64| vec![1, t, t * t, t * t * t]).collect();
        let c = VectorConfiguration::from_integers(4, &vs).unwrap();
        let cs = enumerate_circuits(&c, 1, 5);
        assert_eq!(cs.len(), 6);
        assert!(cs.iter().all(|c| c.len() == 5));
    }

    #[test]
    fn labels_must_be_unique() {
        let vs = vec![vec![Rational::from_integer(1.into())]; 2];
        let err = VectorConfiguration::new(1, vs, Some(vec!["a".into(), "a".into()])).unwrap_err();
        assert_eq!(err, MatroidError::DuplicateLabel("a".into()));
    }

    fn brute_force(c: &VectorConfiguration) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for k in 1..=c.len() {
            for s in k_subsets(c.len(), k) {
                if is_circuit(c, &s.to_vec()).unwrap() {
                    out.push(s);
                }
            }
        }
        out.sort();
        out.into_iter().map(|s| s.to_vec()).collect()
    }

    fn small_cfg() -> impl Strategy<Value = VectorConfiguration> {
        (1usize..=4, 0usize..=7).prop_flat_map(|(d, n)| {
            prop::collection::vec(prop::collection::vec(-2i64..=2, d), n)
                .prop_map(move |vs| VectorConfiguration::from_integers(d, &vs).unwrap())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn matches_brute_force_and_witnesses_hold(c in small_cfg()) {
            let cs = enumerate_circuits(&c, 1, usize::MAX);
            let members: Vec<Vec<usize>> = cs.iter().map(|c| c.members.clone()).collect();
            prop_assert_eq!(&members, &brute_force(&c));
            let r = c.rank();
            for circ in &cs {
                prop_assert!(circ.len() <= r + 1);
                prop_assert!(circ.coefficients.iter().all(|x| !x.is_zero()));
                prop_assert!(circ.coefficients[0].is_positive());
                for coord in 0..c.dimension() {
                    let sum = circ.members.iter().zip(&circ.coefficients).fold(Rational::zero(), |acc, (&i, k)| {
                        acc + &c.vector(i)[coord] * Rational::from_integer(k.clone())
                    });
                    prop_assert!(sum.is_zero());
                }
            }
            for a in &cs {
                for b in &cs {
                    prop_assert!(a == b || !a.set().is_subset(b.set()));
                }
            }
        }
    }
}
