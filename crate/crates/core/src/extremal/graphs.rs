use num::BigInt;

use super::ExtremalError;
use crate::combinat::SmallSet;
use crate::exactla::Rational;
use crate::hypergraph::Hypergraph;

fn adjacency(g: &Hypergraph) -> Result<Vec<SmallSet>, ExtremalError> {
    let mut adj = vec![SmallSet::EMPTY; g.n()];
    for (i, e) in g.edges().iter().enumerate() {
        if e.len() != 2 {
            return Err(ExtremalError::NotAGraph(i));
        }
        let (a, b) = (e.first().unwrap(), e.last().unwrap());
        adj[a] = adj[a].with(b);
        adj[b] = adj[b].with(a);
    }
    Ok(adj)
}

/// Number of vertex triples spanning three edges of a 2-uniform hypergraph.
pub fn count_triangles(g: &Hypergraph) -> Result<u64, ExtremalError> {
    let adj = adjacency(g)?;
    let mut count = 0u64;
    for a in 0..g.n() {
        for b in adj[a].iter().filter(|&b| b > a) {
            count += adj[a]
                .intersection(adj[b])
                .iter()
                .filter(|&c| c > b)
                .count() as u64;
        }
    }
    Ok(count)
}

/// `(4m^2 - m n^2) / (3n)`, the guaranteed triangle count of a graph with
/// n vertices and m edges.
pub fn triangle_lower_bound(n: u64, m: u64) -> Rational {
    let (n, m) = (BigInt::from(n), BigInt::from(m));
    let num = BigInt::from(4) * &m * &m - &m * &n * &n;
    Rational::new(num, BigInt::from(3) * n)
}

pub fn triangle_bound_check(g: &Hypergraph) -> Result<bool, ExtremalError> {
    let t = count_triangles(g)?;
    let bound = triangle_lower_bound(g.n() as u64, g.edges().len() as u64);
    Ok(Rational::from_integer(BigInt::from(t)) >= bound)
}

/// `floor(n^2 / 4)`, the largest triangle-free graph on n vertices.
pub fn turan_k2(n: u64) -> u64 {
    n * n / 4
}

/// True iff the complement of the 2-section of `h` is `K_{floor(n/2), ceil(n/2)}`,
/// i.e. the 2-section is two disjoint cliques of those orders covering all vertices.
pub fn complement_is_balanced_complete_bipartite(h: &Hypergraph) -> bool {
    let n = h.n();
    if n < 2 {
        return false;
    }
    let mut adj = vec![SmallSet::EMPTY; n];
    for pair in h.k_section(2) {
        let (a, b) = (pair.first().unwrap(), pair.last().unwrap());
        adj[a] = adj[a].with(b);
        adj[b] = adj[b].with(a);
    }
    let mut seen = SmallSet::EMPTY;
    let mut sizes = Vec::new();
    for v in 0..n {
        if seen.contains(v) {
            continue;
        }
        let block = adj[v].with(v);
        // a clique component: every member sees exactly the rest of the block
        if block.iter().any(|u| adj[u].with(u) != block) {
            return false;
        }
        seen = seen.union(block);
        sizes.push(block.len());
    }
    sizes.sort_unstable();
    sizes == vec![n / 2, n - n / 2]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::k_subsets;
    use crate::exactla::int;

    fn complete(n: usize) -> Hypergraph {
        Hypergraph::from_sets(n, k_subsets(n, 2).collect()).unwrap()
    }

    fn bipartite(a: usize, b: usize) -> Hypergraph {
        let edges = (0..a).flat_map(|i| (a..a + b).map(move |j| vec![i, j])).collect();
        Hypergraph::new(a + b, edges).unwrap()
    }

    #[test]
    fn triangle_counts() {
        assert_eq!(count_triangles(&complete(3)).unwrap(), 1);
        assert_eq!(count_triangles(&complete(4)).unwrap(), 4);
        assert_eq!(count_triangles(&bipartite(3, 3)).unwrap(), 0);
        let not_graph = Hypergraph::new(3, vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(count_triangles(&not_graph), Err(ExtremalError::NotAGraph(0)));
    }

    #[test]
    fn triangle_bounds() {
        assert_eq!(triangle_lower_bound(4, 6), int(4));
        assert!(triangle_bound_check(&complete(4)).unwrap());
        assert!(triangle_lower_bound(6, 9) <= int(0));
        assert!(triangle_bound_check(&bipartite(3, 3)).unwrap());
    }

    #[test]
    fn turan_values() {
        assert_eq!(turan_k2(4), 4);
        assert_eq!(turan_k2(5), 6);
        assert_eq!(turan_k2(1), 0);
    }

    #[test]
    fn bipartite_complement_detection() {
        let two_cliques = Hypergraph::new(7, vec![vec![0, 1, 2], vec![3, 4, 5, 6]]).unwrap();
        assert!(complement_is_balanced_complete_bipartite(&two_cliques));
        let lopsided = Hypergraph::new(7, vec![vec![0, 1], vec![2, 3, 4, 5, 6]]).unwrap();
        assert!(!complement_is_balanced_complete_bipartite(&lopsided));
        let path = Hypergraph::new(4, vec![vec![0, 1], vec![1, 2], vec![2, 3]]).unwrap();
        assert!(!complement_is_balanced_complete_bipartite(&path));
        let single = Hypergraph::new(3, vec![vec![1, 2]]).unwrap();
        assert!(complement_is_balanced_complete_bipartite(&single));
    }
}
