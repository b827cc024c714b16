//! Self-checks runnable from the command line. Each suite recomputes a
//! family of known values and reports one line per check.

use std::fmt;

use num::{BigInt, One};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::combinat::{k_subsets, SmallSet};
use crate::exactla::Rational;
use crate::extremal::{
    check_construction, complement_is_balanced_complete_bipartite, count_triangles, exact_k2_minimum,
    minimize_semi_simplex_sum, reference_bounds, triangle_lower_bound, Construction, ConstructionId, Flavor,
};
use crate::geometry::{enumerate_affine_simplexes, is_affine_simplex, project_to_affine, PointSet};
use crate::hypergraph::{from_point_set, is_sperner, semi_simplex_deficit, yblm_sum, Hypergraph};
use crate::matroid::{enumerate_circuits, is_circuit, VectorConfiguration};
use crate::stoichiometry::{parse_formula, AtomUniverse, ReactionSystem};

const SEED: u64 = 0x5eed_fa11;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Constructions,
    Sperner,
    SSmall,
    Oracle,
    Projection,
    Triangles,
    Stoichiometry,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Constructions,
        Suite::Sperner,
        Suite::SSmall,
        Suite::Oracle,
        Suite::Projection,
        Suite::Triangles,
        Suite::Stoichiometry,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Constructions => "constructions",
            Suite::Sperner => "sperner",
            Suite::SSmall => "s-small",
            Suite::Oracle => "oracle",
            Suite::Projection => "projection",
            Suite::Triangles => "triangles",
            Suite::Stoichiometry => "stoichiometry",
        }
    }

    /// A suite by name; `all` yields every suite.
    pub fn parse(name: &str) -> Option<Vec<Suite>> {
        if name == "all" {
            return Some(Self::ALL.to_vec());
        }
        Self::ALL.iter().find(|s| s.name() == name).map(|&s| vec![s])
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: bool,
    pub checks: Vec<CheckLine>,
}

struct Lines(Vec<CheckLine>);

impl Lines {
    fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.0.push(CheckLine {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }
}

pub fn run_suite(suite: Suite, budget: u64) -> SuiteReport {
    let mut lines = Lines(Vec::new());
    match suite {
        Suite::Constructions => constructions(&mut lines),
        Suite::Sperner => sperner(&mut lines),
        Suite::SSmall => s_small(&mut lines, budget),
        Suite::Oracle => oracle(&mut lines),
        Suite::Projection => projection(&mut lines),
        Suite::Triangles => triangles(&mut lines),
        Suite::Stoichiometry => stoichiometry(&mut lines),
    }
    let checks = lines.0;
    SuiteReport {
        suite,
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

/// Every construction with a closed form, over its tested parameter range.
pub fn construction_cases() -> Vec<(ConstructionId, usize)> {
    let mut cases = Vec::new();
    for n in 6..=14 {
        cases.push((ConstructionId::ParallelPairs, n));
    }
    for n in 6..=14 {
        cases.push((ConstructionId::TwoLines, n));
    }
    for d in 2..=3 {
        for n in d + 1..=12 {
            cases.push((ConstructionId::InplaneGeneric { d }, n));
        }
        for n in d + 2..=12 {
            cases.push((ConstructionId::Cone { d }, n));
        }
    }
    for k in 2..=3 {
        for n in 3..=6 {
            cases.push((ConstructionId::TwoDisjointEdges { k }, n));
        }
    }
    cases
}

fn constructions(lines: &mut Lines) {
    let results: Vec<_> = construction_cases()
        .into_par_iter()
        .map(|(id, n)| (id, n, check_construction(id, n)))
        .collect();
    for (id, n, r) in results {
        match r {
            Ok((_, check)) => lines.push(
                format!("{id} n={n}"),
                check.agrees,
                format!("expected {}, enumerated {}", check.expected, check.enumerated),
            ),
            Err(e) => lines.push(format!("{id} n={n}"), false, e.to_string()),
        }
    }
}

/// Random hypergraph whose edges pairwise share at most `k - 2` vertices.
pub fn random_linear_hypergraph(rng: &mut impl Rng, n: usize, k: usize) -> Hypergraph {
    let mut edges: Vec<SmallSet> = Vec::new();
    let vertices: Vec<usize> = (0..n).collect();
    for _ in 0..4 * n {
        let size = rng.gen_range(k..=(k + 3).min(n));
        let e = SmallSet::from_indices(vertices.choose_multiple(rng, size).copied());
        if edges.iter().all(|f| f.intersection(e).len() <= k - 2) {
            edges.push(e);
        }
    }
    Hypergraph::from_sets(n, edges).expect("compatible edges are distinct")
}

/// Point constructions as hyperplane hypergraphs, scored at k = d + 1.
fn construction_hypergraphs() -> Vec<(String, Hypergraph, usize)> {
    let mut out = Vec::new();
    let picks = [
        (ConstructionId::ParallelPairs, 10),
        (ConstructionId::ParallelPairs, 11),
        (ConstructionId::TwoLines, 10),
        (ConstructionId::InplaneGeneric { d: 3 }, 9),
        (ConstructionId::Cone { d: 3 }, 9),
        (ConstructionId::Cone { d: 2 }, 8),
    ];
    for (id, n) in picks {
        if let Ok((Construction::Points(ps), _)) = check_construction(id, n) {
            let k = ps.dimension() + 1;
            out.push((format!("{id} n={n}"), from_point_set(&ps), k));
        }
    }
    for k in 2..=4 {
        let h = Hypergraph::new(10, vec![(0..5).collect(), (5..10).collect()]).expect("two disjoint edges");
        out.push((format!("two disjoint 5-edges k={k}"), h, k));
    }
    out
}

/// Sperner property, YBLM sum and deficit on one instance; `None` when fine.
pub fn semi_simplex_instance_problem(h: &Hypergraph, k: usize) -> (Option<String>, Option<Rational>) {
    let report = match h.semi_simplexes(k) {
        Ok(r) => r,
        Err(e) => return (Some(e.to_string()), None),
    };
    let family = report.family();
    if !is_sperner(&family) {
        return (Some("semi-simplex family is not an antichain".into()), None);
    }
    let sum = yblm_sum(&family, h.n());
    if sum > Rational::one() {
        return (Some(format!("YBLM sum {sum} exceeds 1")), None);
    }
    match semi_simplex_deficit(h, k) {
        Ok(d) => {
            if d > Rational::from_integer(BigInt::from(h.n())) {
                (Some(format!("deficit {d} exceeds n")), Some(d))
            } else {
                (None, Some(d))
            }
        }
        Err(e) => (Some(e.to_string()), None),
    }
}

fn sperner(lines: &mut Lines) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut instances: Vec<(String, Hypergraph, usize)> = (0..50)
        .map(|i| {
            let k = 3 + i % 2;
            let n = rng.gen_range(k + 1..=20);
            (format!("random #{i} n={n} k={k}"), random_linear_hypergraph(&mut rng, n, k), k)
        })
        .collect();
    instances.extend(construction_hypergraphs());
    let mut max_deficit: Option<Rational> = None;
    let mut failures = Vec::new();
    for (name, h, k) in &instances {
        let (problem, deficit) = semi_simplex_instance_problem(h, *k);
        if let Some(p) = problem {
            failures.push(format!("{name}: {p}"));
        }
        if let Some(d) = deficit {
            if max_deficit.as_ref().is_none_or(|m| d > *m) {
                max_deficit = Some(d);
            }
        }
    }
    lines.push(
        format!("{} instances: antichain, YBLM <= 1, deficit <= n", instances.len()),
        failures.is_empty(),
        if failures.is_empty() {
            format!(
                "largest deficit {}",
                max_deficit.map_or_else(|| "none".to_string(), |d| d.to_string())
            )
        } else {
            failures.join("; ")
        },
    );
}

fn s_small(lines: &mut Lines, budget: u64) {
    for n in 3..=7 {
        for flavor in [Flavor::Linear, Flavor::Free] {
            let name = format!("s(n={n}, k=2) {flavor:?}");
            match minimize_semi_simplex_sum(n, 2, flavor, budget) {
                Ok(r) => {
                    let want = exact_k2_minimum(n as u64);
                    let witnesses_ok = flavor == Flavor::Linear
                        || r.witnesses.iter().all(complement_is_balanced_complete_bipartite);
                    lines.push(
                        name,
                        r.minimum == want && witnesses_ok,
                        format!("searched {}, closed form {want}, {} witness(es)", r.minimum, r.witnesses.len()),
                    );
                }
                Err(e) => lines.push(name, false, e.to_string()),
            }
        }
    }
    for k in 2..=4 {
        for flavor in [Flavor::Linear, Flavor::Free] {
            let name = format!("s(n={}, k={k}) {flavor:?}", k + 1);
            match minimize_semi_simplex_sum(k + 1, k, flavor, budget) {
                Ok(r) => {
                    let want = reference_bounds(k as u64).lower_start;
                    lines.push(name, r.minimum == want, format!("searched {}, expected {want}", r.minimum));
                }
                Err(e) => lines.push(name, false, e.to_string()),
            }
        }
    }
    match crate::extremal::monotonicity_check(2, 7, budget) {
        Ok(r) => lines.push(
            "k=2 minima non-decreasing in n",
            r.non_decreasing,
            r.rows
                .iter()
                .map(|row| format!("n={}: {} / {}", row.n, row.linear, row.free))
                .collect::<Vec<_>>()
                .join(", "),
        ),
        Err(e) => lines.push("k=2 minima non-decreasing in n", false, e.to_string()),
    }
}

/// Random integer vectors, `n <= 8`, `D <= 4`, entries in -2..=2.
pub fn random_vectors(rng: &mut impl Rng) -> VectorConfiguration {
    let d = rng.gen_range(1..=4);
    let n = rng.gen_range(1..=8);
    let vs: Vec<Vec<i64>> = (0..n).map(|_| (0..d).map(|_| rng.gen_range(-2..=2)).collect()).collect();
    VectorConfiguration::from_integers(d, &vs).expect("uniform length")
}

/// Random distinct integer points, `n <= 8`, `d <= 4`.
pub fn random_points(rng: &mut impl Rng) -> PointSet {
    let d = rng.gen_range(1..=4);
    let n = rng.gen_range(1..=8);
    let mut pts: Vec<Vec<i64>> = Vec::new();
    while pts.len() < n {
        let p: Vec<i64> = (0..d).map(|_| rng.gen_range(-2..=2)).collect();
        if !pts.contains(&p) {
            pts.push(p);
        }
        if d == 1 && pts.len() == 5 {
            break;
        }
    }
    PointSet::from_integers(d, &pts).expect("distinct points")
}

fn all_subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (1..=n).flat_map(move |k| k_subsets(n, k).map(|s| s.to_vec()))
}

fn brute_circuits(cfg: &VectorConfiguration) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = all_subsets(cfg.len())
        .filter(|s| is_circuit(cfg, s).expect("valid subset"))
        .collect();
    out.sort();
    out
}

fn brute_simplexes(ps: &PointSet) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = all_subsets(ps.len())
        .filter(|s| s.len() >= 3 && is_affine_simplex(ps, s).expect("valid subset"))
        .collect();
    out.sort();
    out
}

fn oracle(lines: &mut Lines) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    let mut bad = Vec::new();
    for i in 0..100 {
        if i % 2 == 0 {
            let cfg = random_vectors(&mut rng);
            let got: Vec<Vec<usize>> = enumerate_circuits(&cfg, 1, usize::MAX).into_iter().map(|c| c.members).collect();
            if got != brute_circuits(&cfg) {
                bad.push(format!("vectors #{i}"));
            }
        } else {
            let ps = random_points(&mut rng);
            let got: Vec<Vec<usize>> = enumerate_affine_simplexes(&ps).simplexes.into_iter().map(|s| s.members).collect();
            if got != brute_simplexes(&ps) {
                bad.push(format!("points #{i}"));
            }
        }
    }
    lines.push(
        "100 random instances agree with all-subset enumeration",
        bad.is_empty(),
        if bad.is_empty() { "all agree".to_string() } else { bad.join(", ") },
    );
}

/// Random configuration with no zero and no parallel vectors.
pub fn random_admissible_vectors(rng: &mut impl Rng) -> VectorConfiguration {
    loop {
        let cfg = random_vectors(rng);
        if cfg.dimension() >= 2 && enumerate_circuits(&cfg, 1, 2).is_empty() {
            return cfg;
        }
    }
}

fn projection(lines: &mut Lines) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 2);
    let mut bad = Vec::new();
    for i in 0..25 {
        let cfg = random_admissible_vectors(&mut rng);
        let ok = match project_to_affine(&cfg) {
            Ok(ps) => {
                let circuits: Vec<Vec<usize>> =
                    enumerate_circuits(&cfg, 1, usize::MAX).into_iter().map(|c| c.members).collect();
                let simplexes: Vec<Vec<usize>> =
                    enumerate_affine_simplexes(&ps).simplexes.into_iter().map(|s| s.members).collect();
                circuits == simplexes
            }
            Err(_) => false,
        };
        if !ok {
            bad.push(format!("#{i}"));
        }
    }
    lines.push(
        "25 random configurations: circuits equal projected simplexes",
        bad.is_empty(),
        if bad.is_empty() { "all agree".to_string() } else { bad.join(", ") },
    );
}

fn triangles(lines: &mut Lines) {
    for n in 1..=7usize {
        let pairs: Vec<SmallSet> = k_subsets(n, 2).collect();
        let total = 1u64 << pairs.len();
        let violations: u64 = (0..total)
            .into_par_iter()
            .filter(|&mask| {
                let edges = (0..pairs.len()).filter(|i| mask >> i & 1 == 1).map(|i| pairs[i]).collect();
                let g = Hypergraph::from_sets(n, edges).expect("distinct pairs");
                let t = count_triangles(&g).expect("graph");
                let bound = triangle_lower_bound(n as u64, mask.count_ones() as u64);
                Rational::from_integer(BigInt::from(t)) < bound
            })
            .count() as u64;
        lines.push(
            format!("all {total} graphs on {n} vertices"),
            violations == 0,
            format!("{violations} below (4m^2 - mn^2)/(3n)"),
        );
    }
}

fn stoichiometry(lines: &mut Lines) {
    match ReactionSystem::from_formulas(&["H2", "O2", "H2O"], None) {
        Ok(sys) => {
            let eqs: Vec<String> = sys.reactions.iter().map(ToString::to_string).collect();
            lines.push("H2, O2, H2O", eqs == ["2 H2 + O2 -> 2 H2O"], eqs.join("; "));
        }
        Err(e) => lines.push("H2, O2, H2O", false, e.to_string()),
    }
    let u = AtomUniverse::new(["C", "H", "O"]).expect("distinct symbols");
    for (f, want) in [("H2O", vec![0u64, 2, 1]), ("CH3COOH", vec![2, 4, 2])] {
        match parse_formula(f, &u) {
            Ok(s) => lines.push(format!("{f} over [C,H,O]"), s.composition == want, format!("{:?}", s.composition)),
            Err(e) => lines.push(format!("{f} over [C,H,O]"), false, e.to_string()),
        }
    }
}
