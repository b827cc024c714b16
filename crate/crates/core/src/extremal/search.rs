//! Exhaustive minimization of `|E_k|/C(n,k) + |E0_{k+1}|/C(n,k+1)`.
//!
//! The semi-simplex family depends on a hypergraph only through its
//! k-section, so both searches score k-section bitmasks over the `C(n,k)`
//! k-subsets. The unconstrained search runs over every k-uniform family;
//! the (k-1)-linear search backtracks over pairwise compatible edges of
//! size at least k.

use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};

use itertools::Itertools;
use num::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use super::ExtremalError;
use crate::combinat::{binomial, k_subsets, k_subsets_of, SmallSet};
use crate::exactla::Rational;
use crate::hypergraph::Hypergraph;

/// Default cap on candidates examined by one search.
pub const DEFAULT_BUDGET: u64 = 1 << 25;

/// Raw minimizers kept before canonicalization.
const WITNESS_CAP: usize = 4096;

/// Largest order at which witnesses are reduced to canonical form.
const CANONICAL_MAX_N: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    /// Only (k-1)-linear hypergraphs.
    Linear,
    /// Every hypergraph.
    Free,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchResult {
    pub n: usize,
    pub k: usize,
    pub linear_constrained: bool,
    #[serde(serialize_with = "crate::io::ser_rational")]
    pub minimum: Rational,
    /// Minimizing hypergraphs, canonical and deduplicated up to relabeling
    /// when `n <= 8`.
    pub witnesses: Vec<Hypergraph>,
    pub witnesses_truncated: bool,
    pub search_space_size: u64,
}

/// Scoring tables shared by both searches.
struct Scorer {
    ksets: Vec<SmallSet>,
    index: HashMap<SmallSet, usize>,
    /// For each (k+1)-set, the bitmask of its k-subsets' indices.
    uppers: Vec<u128>,
    c_k: u64,
    c_k1: u64,
}

impl Scorer {
    fn new(n: usize, k: usize) -> Self {
        let ksets: Vec<SmallSet> = k_subsets(n, k).collect();
        let index: HashMap<SmallSet, usize> = ksets.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let uppers = k_subsets(n, k + 1)
            .map(|t| k_subsets_of(t, k).fold(0u128, |m, s| m | (1u128 << index[&s])))
            .collect();
        Self {
            ksets,
            index,
            uppers,
            c_k: binomial(n as u64, k as u64),
            c_k1: binomial(n as u64, k as u64 + 1),
        }
    }

    /// The YBLM sum scaled by `C(n,k) * C(n,k+1)`.
    fn score(&self, section: u128) -> u128 {
        let e_k = section.count_ones() as u128;
        let e0 = self.uppers.iter().filter(|&&u| u & section == 0).count() as u128;
        e_k * self.c_k1 as u128 + e0 * self.c_k as u128
    }

    fn value(&self, score: u128) -> Rational {
        Rational::new(
            BigInt::from(score),
            BigInt::from(self.c_k as u128 * self.c_k1 as u128),
        )
    }

    fn mask_of(&self, edge: SmallSet, k: usize) -> u128 {
        k_subsets_of(edge, k).fold(0u128, |m, s| m | (1u128 << self.index[&s]))
    }
}

/// Running minimum with the first few minimizers in enumeration order.
#[derive(Debug, Clone)]
struct Best<T> {
    score: u128,
    found: Vec<T>,
    overflow: bool,
}

impl<T> Best<T> {
    fn new() -> Self {
        Self {
            score: u128::MAX,
            found: Vec::new(),
            overflow: false,
        }
    }

    fn offer(&mut self, score: u128, item: impl FnOnce() -> T) {
        if score < self.score {
            self.score = score;
            self.found.clear();
            self.overflow = false;
        }
        if score == self.score {
            if self.found.len() < WITNESS_CAP {
                self.found.push(item());
            } else {
                self.overflow = true;
            }
        }
    }

    /// Order-respecting merge, so results do not depend on worker count.
    fn merge(mut self, other: Best<T>) -> Best<T> {
        if other.score < self.score {
            return other;
        }
        if other.score == self.score {
            for item in other.found {
                if self.found.len() < WITNESS_CAP {
                    self.found.push(item);
                } else {
                    self.overflow = true;
                }
            }
            self.overflow |= other.overflow;
        }
        self
    }
}

fn validate(n: usize, k: usize, budget: u64) -> Result<(), ExtremalError> {
    let bad = |reason: &str| ExtremalError::BadSearch {
        n,
        k,
        reason: reason.to_string(),
    };
    if k < 2 {
        return Err(bad("k must be at least 2"));
    }
    if k + 1 > n {
        return Err(bad("need n >= k + 1"));
    }
    if n > 64 {
        return Err(bad("n is far beyond exhaustive range"));
    }
    let c_k = binomial(n as u64, k as u64);
    if c_k > 128 {
        // k-sections are u128 masks; anything wider is also far past any budget
        return Err(ExtremalError::Budget {
            estimated: format!("2^{c_k}"),
            budget,
        });
    }
    Ok(())
}

/// Minimum over all (linear: all (k-1)-linear) hypergraphs on n vertices
/// of the YBLM sum of the semi-simplex family. Refuses when more than
/// `budget` candidates would be examined.
pub fn minimize_semi_simplex_sum(n: usize, k: usize, flavor: Flavor, budget: u64) -> Result<SearchResult, ExtremalError> {
    validate(n, k, budget)?;
    let scorer = Scorer::new(n, k);
    let (best, explored, witnesses): (u128, u64, (Vec<Hypergraph>, bool)) = match flavor {
        Flavor::Free => {
            let (best, explored) = free_search(&scorer, budget)?;
            let w = best
                .found
                .iter()
                .map(|&mask| {
                    let edges = (0..scorer.ksets.len())
                        .filter(|i| mask >> i & 1 == 1)
                        .map(|i| scorer.ksets[i])
                        .collect();
                    Hypergraph::from_sets(n, edges).expect("distinct k-sets")
                })
                .collect();
            (best.score, explored, (w, best.overflow))
        }
        Flavor::Linear => {
            let (best, explored) = linear_search(n, k, &scorer, budget)?;
            let w = best
                .found
                .into_iter()
                .map(|edges| Hypergraph::from_sets(n, edges).expect("compatible edges are distinct"))
                .collect();
            (best.score, explored, (w, best.overflow))
        }
    };
    let (raw, truncated) = witnesses;
    let witnesses = if n <= CANONICAL_MAX_N {
        raw.iter().map(canonical_form).collect::<BTreeMap<_, _>>().into_values().collect()
    } else {
        raw
    };
    Ok(SearchResult {
        n,
        k,
        linear_constrained: flavor == Flavor::Linear,
        minimum: scorer.value(best),
        witnesses,
        witnesses_truncated: truncated,
        search_space_size: explored,
    })
}

fn free_search(scorer: &Scorer, budget: u64) -> Result<(Best<u128>, u64), ExtremalError> {
    let m = scorer.ksets.len();
    if m >= 64 || (1u64 << m) > budget {
        return Err(ExtremalError::Budget {
            estimated: format!("2^{m}"),
            budget,
        });
    }
    let total = 1u64 << m;
    let chunk = total.min(1 << 14);
    let best = (0..total / chunk)
        .into_par_iter()
        .map(|c| {
            let mut best = Best::new();
            for mask in c * chunk..(c + 1) * chunk {
                best.offer(scorer.score(mask as u128), || mask as u128);
            }
            best
        })
        .collect::<Vec<_>>()
        .into_iter()
        .reduce(Best::merge)
        .expect("at least one chunk");
    Ok((best, total))
}

struct LinearSpace<'a> {
    scorer: &'a Scorer,
    edges: Vec<SmallSet>,
    masks: Vec<u128>,
    max_shared: usize,
    budget: u64,
    explored: &'a AtomicU64,
}

impl LinearSpace<'_> {
    fn dfs(&self, start: usize, chosen: &mut Vec<usize>, section: u128, best: &mut Best<Vec<SmallSet>>) -> Result<(), ()> {
        if self.explored.fetch_add(1, Ordering::Relaxed) >= self.budget {
            return Err(());
        }
        best.offer(self.scorer.score(section), || chosen.iter().map(|&i| self.edges[i]).collect());
        for i in start..self.edges.len() {
            let e = self.edges[i];
            if chosen.iter().all(|&j| self.edges[j].intersection(e).len() <= self.max_shared) {
                chosen.push(i);
                let r = self.dfs(i + 1, chosen, section | self.masks[i], best);
                chosen.pop();
                r?;
            }
        }
        Ok(())
    }
}

fn linear_search(n: usize, k: usize, scorer: &Scorer, budget: u64) -> Result<(Best<Vec<SmallSet>>, u64), ExtremalError> {
    if n > 16 {
        return Err(ExtremalError::Budget {
            estimated: format!("more than 2^{n} edge candidates"),
            budget,
        });
    }
    let edges: Vec<SmallSet> = (k..=n).flat_map(|size| k_subsets(n, size)).sorted().collect();
    let masks = edges.iter().map(|&e| scorer.mask_of(e, k)).collect();
    let explored = AtomicU64::new(0);
    let space = LinearSpace {
        scorer,
        edges,
        masks,
        max_shared: k - 2,
        budget,
        explored: &explored,
    };

    // the empty hypergraph, then one subtree per first edge
    let mut root = Best::new();
    explored.fetch_add(1, Ordering::Relaxed);
    root.offer(scorer.score(0), Vec::new);
    let subtrees: Vec<Result<Best<Vec<SmallSet>>, ()>> = (0..space.edges.len())
        .into_par_iter()
        .map(|i| {
            let mut best = Best::new();
            let mut chosen = vec![i];
            space.dfs(i + 1, &mut chosen, space.masks[i], &mut best)?;
            Ok(best)
        })
        .collect();
    let mut best = root;
    for sub in subtrees {
        match sub {
            Ok(b) => best = best.merge(b),
            Err(()) => {
                return Err(ExtremalError::Budget {
                    estimated: format!("more than {budget}"),
                    budget,
                })
            }
        }
    }
    Ok((best, explored.load(Ordering::Relaxed)))
}

/// Canonical relabeling: the permutation image whose sorted edge bitmasks
/// are lexicographically smallest. Returns the key with the relabeled graph.
pub fn canonical_form(h: &Hypergraph) -> (Vec<u128>, Hypergraph) {
    let n = h.n();
    let mut best: Option<Vec<u128>> = None;
    for perm in (0..n).permutations(n) {
        let mut key: Vec<u128> = h
            .edges()
            .iter()
            .map(|e| SmallSet::from_indices(e.iter().map(|v| perm[v])).bits())
            .collect();
        key.sort_unstable();
        if best.as_ref().is_none_or(|b| key < *b) {
            best = Some(key);
        }
    }
    let key = best.unwrap_or_default();
    let mut edges: Vec<SmallSet> = key.iter().map(|&b| SmallSet::from_bits(b)).collect();
    edges.sort();
    let g = Hypergraph::from_sets(n, edges).expect("relabeling keeps edges distinct");
    (key, g)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonotonicityRow {
    pub n: usize,
    #[serde(serialize_with = "crate::io::ser_rational")]
    pub linear: Rational,
    #[serde(serialize_with = "crate::io::ser_rational")]
    pub free: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonotonicityReport {
    pub k: usize,
    pub rows: Vec<MonotonicityRow>,
    pub non_decreasing: bool,
}

/// Computes both minima for `n = k+1 ..= n_max` and checks that each
/// sequence is non-decreasing.
pub fn monotonicity_check(k: usize, n_max: usize, budget: u64) -> Result<MonotonicityReport, ExtremalError> {
    let mut rows = Vec::new();
    for n in k + 1..=n_max {
        let linear = minimize_semi_simplex_sum(n, k, Flavor::Linear, budget)?.minimum;
        let free = minimize_semi_simplex_sum(n, k, Flavor::Free, budget)?.minimum;
        rows.push(MonotonicityRow { n, linear, free });
    }
    let non_decreasing = rows
        .windows(2)
        .all(|w| w[0].linear <= w[1].linear && w[0].free <= w[1].free);
    Ok(MonotonicityReport {
        k,
        rows,
        non_decreasing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::rational;
    use crate::extremal::{complement_is_balanced_complete_bipartite, exact_k2_minimum};
    use crate::hypergraph::yblm_sum;

    #[test]
    fn smallest_cases() {
        for flavor in [Flavor::Free, Flavor::Linear] {
            assert_eq!(minimize_semi_simplex_sum(3, 2, flavor, DEFAULT_BUDGET).unwrap().minimum, rational(1, 3));
            assert_eq!(minimize_semi_simplex_sum(4, 3, flavor, DEFAULT_BUDGET).unwrap().minimum, rational(1, 4));
        }
    }

    #[test]
    fn k2_matches_closed_form() {
        for n in 3..=6 {
            for flavor in [Flavor::Free, Flavor::Linear] {
                let r = minimize_semi_simplex_sum(n, 2, flavor, DEFAULT_BUDGET).unwrap();
                assert_eq!(r.minimum, exact_k2_minimum(n as u64), "n={n} {flavor:?}");
                assert!(!r.witnesses.is_empty());
                for w in &r.witnesses {
                    let fam = w.semi_simplexes(2).unwrap().family();
                    assert_eq!(yblm_sum(&fam, n), r.minimum);
                    assert!(complement_is_balanced_complete_bipartite(w));
                    if flavor == Flavor::Linear {
                        assert!(w.is_q_linear(1));
                    }
                }
            }
        }
    }

    #[test]
    fn canonical_witness_is_unique_for_k2() {
        let r = minimize_semi_simplex_sum(6, 2, Flavor::Free, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.witnesses.len(), 1);
        let r = minimize_semi_simplex_sum(6, 2, Flavor::Linear, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.witnesses.len(), 1);
    }

    #[test]
    fn budget_guard() {
        let err = minimize_semi_simplex_sum(12, 3, Flavor::Free, DEFAULT_BUDGET).unwrap_err();
        assert!(matches!(err, ExtremalError::Budget { .. }), "{err:?}");
        let err = minimize_semi_simplex_sum(6, 2, Flavor::Free, 1000).unwrap_err();
        assert_eq!(err, ExtremalError::Budget { estimated: "2^15".into(), budget: 1000 });
        let err = minimize_semi_simplex_sum(7, 3, Flavor::Linear, 50).unwrap_err();
        assert!(matches!(err, ExtremalError::Budget { .. }));
        assert!(minimize_semi_simplex_sum(3, 3, Flavor::Free, DEFAULT_BUDGET).is_err());
    }

    #[test]
    fn canonical_form_ignores_labels() {
        let a = Hypergraph::new(5, vec![vec![0, 1, 2], vec![2, 3]]).unwrap();
        let b = Hypergraph::new(5, vec![vec![4, 3], vec![0, 3, 1]]).unwrap();
        assert_eq!(canonical_form(&a), canonical_form(&b));
        let c = Hypergraph::new(5, vec![vec![0, 1, 2], vec![3, 4]]).unwrap();
        assert_ne!(canonical_form(&a).0, canonical_form(&c).0);
    }

    #[test]
    fn monotone_small_k3() {
        let r = monotonicity_check(3, 5, DEFAULT_BUDGET).unwrap();
        assert!(r.non_decreasing, "{r:?}");
        assert_eq!(r.rows[0].free, rational(1, 4));
        for row in &r.rows {
            assert!(row.linear >= row.free);
        }
    }
}
