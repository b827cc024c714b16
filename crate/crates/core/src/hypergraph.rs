//! Hypergraphs, k-sections, empty sections and semi-simplex families.

use std::collections::HashSet;

use num::{BigInt, One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::combinat::{binomial_big, k_subsets, k_subsets_of, SmallSet, MAX_ELEMENTS};
use crate::exactla::{clear_denominators, Rational, RationalMatrix};
use crate::geometry::{affine_rank, PointSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypergraphError {
    #[error("at most {MAX_ELEMENTS} vertices are supported, got {0}")]
    TooMany(usize),
    #[error("edge {edge} contains vertex {vertex}, outside 0..{n}")]
    VertexOutOfRange { edge: usize, vertex: usize, n: usize },
    #[error("edge {0} is empty")]
    EmptyEdge(usize),
    #[error("edges {0} and {1} are equal")]
    DuplicateEdge(usize, usize),
    #[error("edge {edge} repeats vertex {vertex}")]
    RepeatedVertex { edge: usize, vertex: usize },
    #[error("k = {k} needs 1 <= k and k + 1 <= n = {n}")]
    BadK { k: usize, n: usize },
    #[error("edges {first} and {second} share {shared} vertices, so the hypergraph is not {q}-linear")]
    NotLinear {
        q: usize,
        first: usize,
        second: usize,
        shared: usize,
    },
}

/// Vertex set `0..n` plus a family of distinct nonempty edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Hypergraph {
    n: usize,
    edges: Vec<SmallSet>,
}

impl Hypergraph {
    pub fn new(n: usize, edges: Vec<Vec<usize>>) -> Result<Self, HypergraphError> {
        if n > MAX_ELEMENTS {
            return Err(HypergraphError::TooMany(n));
        }
        let mut sets = Vec::with_capacity(edges.len());
        for (e, edge) in edges.iter().enumerate() {
            let mut s = SmallSet::EMPTY;
            for &v in edge {
                if v >= n {
                    return Err(HypergraphError::VertexOutOfRange { edge: e, vertex: v, n });
                }
                if s.contains(v) {
                    return Err(HypergraphError::RepeatedVertex { edge: e, vertex: v });
                }
                s = s.with(v);
            }
            sets.push(s);
        }
        Self::from_sets(n, sets)
    }

    pub fn from_sets(n: usize, edges: Vec<SmallSet>) -> Result<Self, HypergraphError> {
        if n > MAX_ELEMENTS {
            return Err(HypergraphError::TooMany(n));
        }
        let full = SmallSet::full(n);
        let mut seen = std::collections::HashMap::new();
        for (i, e) in edges.iter().enumerate() {
            if e.is_empty() {
                return Err(HypergraphError::EmptyEdge(i));
            }
            if !e.is_subset(full) {
                let vertex = e.iter().find(|&v| v >= n).unwrap_or(n);
                return Err(HypergraphError::VertexOutOfRange { edge: i, vertex, n });
            }
            if let Some(j) = seen.insert(*e, i) {
                return Err(HypergraphError::DuplicateEdge(j, i));
            }
        }
        Ok(Self { n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[SmallSet] {
        &self.edges
    }

    pub fn edge_lists(&self) -> Vec<Vec<usize>> {
        self.edges.iter().map(|e| e.to_vec()).collect()
    }

    /// Relabels vertices by `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Hypergraph {
        let edges = self
            .edges
            .iter()
            .map(|e| SmallSet::from_indices(e.iter().map(|v| perm[v])))
            .collect();
        Hypergraph { n: self.n, edges }
    }

    /// Pair of edges sharing at least `q` vertices, if any.
    pub fn linearity_violation(&self, q: usize) -> Option<(usize, usize, usize)> {
        for (i, a) in self.edges.iter().enumerate() {
            for (j, b) in self.edges.iter().enumerate().skip(i + 1) {
                let shared = a.intersection(*b).len();
                if shared >= q {
                    return Some((i, j, shared));
                }
            }
        }
        None
    }

    /// Every two distinct edges share fewer than `q` vertices.
    pub fn is_q_linear(&self, q: usize) -> bool {
        self.linearity_violation(q).is_none()
    }

    /// The k-section: every k-subset of some edge, sorted.
    pub fn k_section(&self, k: usize) -> Vec<SmallSet> {
        let mut out: Vec<SmallSet> = self
            .k_section_set(k)
            .into_iter()
            .collect();
        out.sort();
        out
    }

    fn k_section_set(&self, k: usize) -> HashSet<SmallSet> {
        let mut set = HashSet::new();
        for e in &self.edges {
            if e.len() >= k {
                set.extend(k_subsets_of(*e, k));
            }
        }
        set
    }

    /// The (k+1)-subsets of the vertex set containing no member of the k-section.
    pub fn empty_section(&self, k: usize) -> Vec<SmallSet> {
        if k + 1 > self.n {
            return Vec::new();
        }
        let section = self.k_section_set(k);
        empty_section_of(self.n, k, &section)
    }

    pub fn semi_simplexes(&self, k: usize) -> Result<SemiSimplexReport, HypergraphError> {
        if k == 0 || k + 1 > self.n {
            return Err(HypergraphError::BadK { k, n: self.n });
        }
        let section = self.k_section_set(k);
        let empty = empty_section_of(self.n, k, &section);
        let mut e_k: Vec<SmallSet> = section.into_iter().collect();
        e_k.sort();
        Ok(SemiSimplexReport {
            n: self.n,
            k,
            count_e_k: e_k.len(),
            count_e0_k1: empty.len(),
            e_k,
            e0_k1: empty,
        })
    }

    /// Edges of size at least `k`; smaller edges never touch the k-section.
    pub fn without_small_edges(&self, k: usize) -> Hypergraph {
        Hypergraph {
            n: self.n,
            edges: self.edges.iter().copied().filter(|e| e.len() >= k).collect(),
        }
    }
}

fn empty_section_of(n: usize, k: usize, section: &HashSet<SmallSet>) -> Vec<SmallSet> {
    let subsets: Vec<SmallSet> = k_subsets(n, k + 1).collect();
    subsets
        .into_par_iter()
        .filter(|f| f.iter().all(|x| !section.contains(&f.without(x))))
        .collect()
}

/// The semi-simplex family `E_k` together with `E0_{k+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SemiSimplexReport {
    pub n: usize,
    pub k: usize,
    #[serde(rename = "E_k")]
    pub e_k: Vec<SmallSet>,
    #[serde(rename = "E0_k1")]
    pub e0_k1: Vec<SmallSet>,
    pub count_e_k: usize,
    pub count_e0_k1: usize,
}

impl SemiSimplexReport {
    pub fn total(&self) -> usize {
        self.count_e_k + self.count_e0_k1
    }

    /// Both families as one list, k-sets first.
    pub fn family(&self) -> Vec<SmallSet> {
        self.e_k.iter().chain(&self.e0_k1).copied().collect()
    }

    pub fn yblm(&self) -> Rational {
        Rational::new(BigInt::from(self.count_e_k as u64), binomial_big(self.n as u64, self.k as u64))
            + Rational::new(
                BigInt::from(self.count_e0_k1 as u64),
                binomial_big(self.n as u64, self.k as u64 + 1),
            )
    }
}

/// `(C(n,k) - |E_k| - |E0_{k+1}|) / n^(k-1)` for a (k-1)-linear hypergraph.
pub fn semi_simplex_deficit(h: &Hypergraph, k: usize) -> Result<Rational, HypergraphError> {
    if k < 2 {
        return Err(HypergraphError::BadK { k, n: h.n });
    }
    if let Some((first, second, shared)) = h.linearity_violation(k - 1) {
        return Err(HypergraphError::NotLinear {
            q: k - 1,
            first,
            second,
            shared,
        });
    }
    let report = h.semi_simplexes(k)?;
    // (k-1)-linear: every k-set lies in at most one edge
    debug_assert_eq!(
        h.edges().iter().map(|e| crate::combinat::binomial(e.len() as u64, k as u64)).sum::<u64>(),
        report.count_e_k as u64
    );
    let n = h.n as u64;
    let deficit = binomial_big(n, k as u64) - BigInt::from(report.total() as u64);
    Ok(Rational::new(deficit, BigInt::from(n).pow(k as u32 - 1)))
}

/// No member contains another.
pub fn is_sperner(family: &[SmallSet]) -> bool {
    let mut sorted: Vec<SmallSet> = family.to_vec();
    sorted.sort_by_key(|s| s.len());
    for (i, a) in sorted.iter().enumerate() {
        for b in &sorted[i + 1..] {
            if a.is_subset(*b) {
                return false;
            }
        }
    }
    true
}

/// `sum over S of 1 / C(n, |S|)`.
pub fn yblm_sum(family: &[SmallSet], n: usize) -> Rational {
    let mut by_size = vec![0u64; n + 2];
    for s in family {
        by_size[s.len()] += 1;
    }
    by_size
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .fold(Rational::zero(), |acc, (size, &c)| {
            acc + Rational::new(BigInt::from(c), binomial_big(n as u64, size as u64))
        })
}

/// Maximal subsets lying on a common hyperplane, kept when they have at
/// least d + 1 points.
pub fn from_point_set(ps: &PointSet) -> Hypergraph {
    let d = ps.dimension();
    let n = ps.len();
    if d == 0 || n < d + 1 {
        return Hypergraph { n, edges: Vec::new() };
    }
    let all: Vec<usize> = (0..n).collect();
    if affine_rank(ps, &all) < d {
        return Hypergraph {
            n,
            edges: vec![SmallSet::full(n)],
        };
    }
    // Full affine rank: each maximal set spans a hyperplane through d of its points.
    let lifted: Vec<Vec<BigInt>> = ps
        .points()
        .iter()
        .map(|p| {
            let mut v = clear_denominators(p);
            let scale = p.iter().fold(BigInt::one(), |acc, x| num::Integer::lcm(&acc, x.denom()));
            v.push(scale);
            v
        })
        .collect();
    let spanning: Vec<SmallSet> = k_subsets(n, d)
        .filter(|s| affine_rank(ps, &s.to_vec()) == d - 1)
        .collect();
    let mut edges: Vec<SmallSet> = spanning
        .into_par_iter()
        .filter_map(|s| {
            let rows: Vec<Vec<Rational>> = s
                .iter()
                .map(|i| lifted[i].iter().cloned().map(Rational::from_integer).collect())
                .collect();
            let m = RationalMatrix::from_rows(d + 1, &rows).expect("rows share a length");
            let normal = m.nullspace_basis().pop()?;
            let on_plane = SmallSet::from_indices((0..n).filter(|&i| {
                lifted[i]
                    .iter()
                    .zip(&normal)
                    .fold(Rational::zero(), |acc, (x, a)| acc + a * Rational::from_integer(x.clone()))
                    .is_zero()
            }));
            // report each plane once, from its lexicographically first spanning d-set
            (on_plane.len() > d && s == first_spanning(ps, on_plane, d)).then_some(on_plane)
        })
        .collect();
    edges.sort();
    Hypergraph { n, edges }
}

fn first_spanning(ps: &PointSet, plane: SmallSet, d: usize) -> SmallSet {
    k_subsets_of(plane, d)
        .find(|s| affine_rank(ps, &s.to_vec()) == d - 1)
        .expect("plane spanned by at least one of its d-subsets")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::rational;
    use crate::geometry::{check_small_flat_hypothesis, classify_r3_semi_simplexes};
    use proptest::prelude::*;

    fn hg(n: usize, edges: &[&[usize]]) -> Hypergraph {
        Hypergraph::new(n, edges.iter().map(|e| e.to_vec()).collect()).unwrap()
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(Hypergraph::new(3, vec![vec![0, 3]]), Err(HypergraphError::VertexOutOfRange { vertex: 3, .. })));
        assert_eq!(Hypergraph::new(3, vec![vec![]]), Err(HypergraphError::EmptyEdge(0)));
        assert_eq!(Hypergraph::new(3, vec![vec![0, 1], vec![1, 0]]), Err(HypergraphError::DuplicateEdge(0, 1)));
    }

    #[test]
    fn linearity() {
        assert!(hg(4, &[&[0, 1], &[2, 3]]).is_q_linear(1));
        let h = hg(5, &[&[0, 1, 2], &[2, 3, 4]]);
        assert!(h.is_q_linear(2));
        assert!(!h.is_q_linear(1));
        assert!(hg(5, &[&[0, 1, 2, 3]]).is_q_linear(1));
    }

    #[test]
    fn sections() {
        assert_eq!(hg(4, &[&[0, 1, 2, 3]]).k_section(3).len(), 4);
        for n in 3..7 {
            let a: Vec<usize> = (0..n).collect();
            let b: Vec<usize> = (n..2 * n).collect();
            let h = Hypergraph::new(2 * n, vec![a, b]).unwrap();
            for k in 1..=n {
                assert_eq!(h.k_section(k).len() as u64, 2 * crate::combinat::binomial(n as u64, k as u64));
            }
        }
        assert!(hg(4, &[]).k_section(2).is_empty());
    }

    #[test]
    fn empty_sections() {
        assert_eq!(hg(4, &[]).empty_section(2).len(), 4);
        assert!(hg(6, &[&[0, 1, 2], &[3, 4, 5]]).empty_section(2).is_empty());
        assert!(hg(5, &[&[0, 1, 2, 3, 4]]).empty_section(3).is_empty());
    }

    #[test]
    fn semi_simplex_examples() {
        let r = hg(6, &[]).semi_simplexes(3).unwrap();
        assert_eq!((r.count_e_k, r.count_e0_k1), (0, 15));
        assert!(hg(3, &[]).semi_simplexes(3).is_err());
        assert!(is_sperner(&r.family()));
    }

    #[test]
    fn deficit_examples() {
        let h = hg(6, &[&[0, 1, 2, 3, 4, 5]]);
        assert!(semi_simplex_deficit(&h, 3).unwrap() <= Rational::zero());
        let empty = hg(6, &[]);
        // C(6,3) - 0 - C(6,4) = 20 - 15 over 36
        assert_eq!(semi_simplex_deficit(&empty, 3).unwrap(), rational(5, 36));
        let bad = hg(5, &[&[0, 1, 2], &[0, 1, 3]]);
        assert_eq!(
            semi_simplex_deficit(&bad, 3),
            Err(HypergraphError::NotLinear { q: 2, first: 0, second: 1, shared: 2 })
        );
    }

    #[test]
    fn two_lines_deficit() {
        // 8 points on one line, 3 on another, sharing one point
        let a: Vec<usize> = (0..8).collect();
        let h = Hypergraph::new(10, vec![a, vec![0, 8, 9]]).unwrap();
        let r = h.semi_simplexes(3).unwrap();
        assert_eq!(r.total(), 56 + 21 + 1);
        assert_eq!(semi_simplex_deficit(&h, 3).unwrap(), rational(120 - 78, 100));
    }

    #[test]
    fn sperner_checks() {
        let f = |v: &[&[usize]]| v.iter().map(|s| SmallSet::from_indices(s.iter().copied())).collect::<Vec<_>>();
        assert!(is_sperner(&f(&[&[0, 1], &[1, 2]])));
        assert!(!is_sperner(&f(&[&[0, 1], &[0, 1, 2]])));
    }

    #[test]
    fn yblm_examples() {
        let r = hg(6, &[&[0, 1, 2], &[3, 4, 5]]).semi_simplexes(2).unwrap();
        assert_eq!(yblm_sum(&r.family(), 6), rational(2, 5));
        assert_eq!(r.yblm(), rational(2, 5));
        for k in 2..6 {
            let edge: Vec<usize> = (0..k).collect();
            let h = Hypergraph::new(k + 1, vec![edge]).unwrap();
            let r = h.semi_simplexes(k).unwrap();
            assert_eq!(yblm_sum(&r.family(), k + 1), rational(1, k as i64 + 1));
        }
        let level: Vec<SmallSet> = k_subsets(6, 3).collect();
        assert_eq!(yblm_sum(&level, 6), Rational::one());
    }

    #[test]
    fn hyperplanes_of_point_sets() {
        let coplanar: Vec<Vec<i64>> = (1..=8).map(|t| vec![t, t * t, 0]).collect();
        let ps = PointSet::from_integers(3, &coplanar).unwrap();
        let h = from_point_set(&ps);
        assert_eq!(h.edges().len(), 1);
        assert_eq!(h.edges()[0].len(), 8);
        let r = h.semi_simplexes(4).unwrap();
        assert_eq!((r.count_e_k, r.count_e0_k1), (70, 0));

        let curve: Vec<Vec<i64>> = (1..=7).map(|t| vec![t, t * t, t * t * t]).collect();
        let ps = PointSet::from_integers(3, &curve).unwrap();
        assert!(from_point_set(&ps).edges().is_empty());
    }

    #[test]
    fn parallel_pair_hyperplanes() {
        // x1,x2 and x3,x4 in z = 0 on horizontal rows; x5,x6 above, also horizontal
        let v = vec![vec![1, 1, 0], vec![3, 1, 0], vec![4, 2, 0], vec![7, 2, 0], vec![0, 0, 1], vec![1, 0, 1]];
        let ps = PointSet::from_integers(3, &v).unwrap();
        let h = from_point_set(&ps);
        let lists = h.edge_lists();
        assert_eq!(lists, vec![vec![0, 1, 2, 3], vec![0, 1, 4, 5], vec![2, 3, 4, 5]]);
        let r = h.semi_simplexes(4).unwrap();
        assert_eq!(r.total(), 3);
        assert_eq!(classify_r3_semi_simplexes(&ps).unwrap().total(), 3);
    }

    fn random_hypergraph() -> impl Strategy<Value = Hypergraph> {
        (3usize..=8).prop_flat_map(|n| {
            prop::collection::hash_set(1u32..(1u32 << n), 0..6).prop_map(move |edges| {
                Hypergraph::from_sets(n, edges.into_iter().map(|b| SmallSet::from_bits(b as u128)).collect()).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn semi_simplexes_are_sperner_and_obey_yblm(h in random_hypergraph(), k in 1usize..5) {
            prop_assume!(k < h.n());
            let r = h.semi_simplexes(k).unwrap();
            let fam = r.family();
            prop_assert!(is_sperner(&fam));
            prop_assert!(yblm_sum(&fam, h.n()) <= Rational::one());
            prop_assert_eq!(yblm_sum(&fam, h.n()), r.yblm());
            let section: HashSet<SmallSet> = r.e_k.iter().copied().collect();
            for f in &r.e0_k1 {
                prop_assert_eq!(f.len(), k + 1);
                prop_assert!(k_subsets_of(*f, k).all(|s| !section.contains(&s)));
            }
        }

        #[test]
        fn point_hyperplanes_match_r3_classification(v in prop::collection::vec(prop::collection::vec(-2i64..=2, 3), 4..=8)) {
            let mut v = v;
            v.sort();
            v.dedup();
            let ps = PointSet::from_integers(3, &v).unwrap();
            prop_assume!(ps.len() >= 5 && check_small_flat_hypothesis(&ps));
            let h = from_point_set(&ps);
            prop_assert!(h.is_q_linear(3));
            let r = h.semi_simplexes(4).unwrap();
            prop_assert_eq!(r.total(), classify_r3_semi_simplexes(&ps).unwrap().total());
        }
    }
}
