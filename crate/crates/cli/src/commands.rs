use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use affsimp_core::exactla::decimal;
use affsimp_core::extremal::{
    check_construction, exact_k2_minimum, minimize_semi_simplex_sum, reference_bounds, Construction, ConstructionId,
    ExtremalError, Flavor, DEFAULT_BUDGET,
};
use affsimp_core::geometry::GeometryError;
use affsimp_core::hypergraph::{is_sperner, semi_simplex_deficit, yblm_sum};
use affsimp_core::io::{self, IoError};
use affsimp_core::stoichiometry::{reaction_count_report, AtomUniverse, ReactionSystem};
use affsimp_core::suites::{run_suite, Suite};
use affsimp_core::{enumerate_affine_simplexes, enumerate_circuits, project_to_affine, Circuit, Rational, SimplexReport};
use serde::Serialize;

use crate::{ConstructArgs, Format, ReactArgs, SearchArgs, SimplexesArgs, SpernerArgs, VerifyArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Input,
    Invariant,
    Budget,
}

impl ErrorKind {
    pub fn code(self) -> u8 {
        match self {
            ErrorKind::Input => 2,
            ErrorKind::Invariant => 3,
            ErrorKind::Budget => 4,
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

type Result<T> = std::result::Result<T, CliError>;

fn input(message: impl Into<String>) -> CliError {
    CliError {
        kind: ErrorKind::Input,
        message: message.into(),
    }
}

fn invariant(message: impl Into<String>) -> CliError {
    CliError {
        kind: ErrorKind::Invariant,
        message: message.into(),
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        if e.is_invariant_violation() {
            invariant(e.to_string())
        } else {
            input(e.to_string())
        }
    }
}

impl From<ExtremalError> for CliError {
    fn from(e: ExtremalError) -> Self {
        let kind = match e {
            ExtremalError::Budget { .. } => ErrorKind::Budget,
            ExtremalError::ConstructionFailed { .. } => ErrorKind::Invariant,
            _ => ErrorKind::Input,
        };
        CliError {
            kind,
            message: e.to_string(),
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn csv_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

fn exact(q: &Rational) -> String {
    format!("{q} ({})", decimal(q, 6))
}

fn joined(members: &[usize]) -> String {
    members.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn counts_text(out: &mut String, counts: &BTreeMap<usize, usize>) {
    for (size, count) in counts {
        let _ = writeln!(out, "  size {size}: {count}");
    }
}

// ---------- simplexes ----------

#[derive(Serialize)]
struct CircuitReport {
    dimension: usize,
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    circuits: Option<Vec<Circuit>>,
    counts: BTreeMap<usize, usize>,
    total: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    projection: Option<ProjectionReport>,
}

#[derive(Serialize)]
struct ProjectionReport {
    dimension: usize,
    counts: BTreeMap<usize, usize>,
    total: usize,
    counts_match: bool,
    supports_match: bool,
}

fn counts_of<'a>(sizes: impl Iterator<Item = &'a [usize]>) -> BTreeMap<usize, usize> {
    let mut m = BTreeMap::new();
    for s in sizes {
        *m.entry(s.len()).or_insert(0) += 1;
    }
    m
}

pub fn simplexes(a: &SimplexesArgs, format: Format) -> Result<()> {
    let text = if let Some(p) = &a.points {
        let ps = io::read_points(&read(p)?)?;
        let mut report = enumerate_affine_simplexes(&ps);
        if a.counts_only {
            report.simplexes.clear();
        }
        render_simplexes(&report, a.counts_only, format)
    } else {
        let path = a.vectors.as_ref().expect("clap requires one input");
        let cfg = io::read_vectors(&read(path)?)?;
        let circuits = enumerate_circuits(&cfg, 1, usize::MAX);
        let counts = counts_of(circuits.iter().map(|c| c.members.as_slice()));
        let projection = if a.project {
            let ps = project_to_affine(&cfg).map_err(|e| match e {
                GeometryError::NoDimension => input(e.to_string()),
                _ => invariant(format!("cannot project: {e}")),
            })?;
            let simplexes = enumerate_affine_simplexes(&ps);
            let supports_match = simplexes
                .simplexes
                .iter()
                .map(|s| &s.members)
                .eq(circuits.iter().map(|c| &c.members));
            Some(ProjectionReport {
                dimension: ps.dimension(),
                counts_match: simplexes.counts == counts,
                counts: simplexes.counts,
                total: simplexes.total,
                supports_match,
            })
        } else {
            None
        };
        let report = CircuitReport {
            dimension: cfg.dimension(),
            n: cfg.len(),
            total: circuits.len(),
            circuits: (!a.counts_only).then_some(circuits),
            counts,
            projection,
        };
        let out = render_circuits(&report, format);
        if let Some(p) = &report.projection {
            if !(p.counts_match && p.supports_match) {
                emit(&out, a.out.as_deref())?;
                return Err(invariant("circuits and projected simplexes differ"));
            }
        }
        out
    };
    emit(&text, a.out.as_deref())
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn render_simplexes(r: &SimplexReport, counts_only: bool, format: Format) -> String {
    match format {
        Format::Json => json(r),
        Format::Csv if counts_only => csv_table(
            &["size", "count"],
            &r.counts.iter().map(|(s, c)| vec![s.to_string(), c.to_string()]).collect::<Vec<_>>(),
        ),
        Format::Csv => csv_table(
            &["size", "members"],
            &r.simplexes.iter().map(|s| vec![s.k.to_string(), joined(&s.members)]).collect::<Vec<_>>(),
        ),
        Format::Text => {
            let mut out = format!("{} points in dimension {}\n", r.n, r.dimension);
            let _ = writeln!(out, "affine simplexes: {}", r.total);
            counts_text(&mut out, &r.counts);
            for s in &r.simplexes {
                let _ = writeln!(out, "{}", joined(&s.members));
            }
            out
        }
    }
}

fn render_circuits(r: &CircuitReport, format: Format) -> String {
    match format {
        Format::Json => json(r),
        Format::Csv => match &r.circuits {
            Some(cs) => csv_table(
                &["size", "members", "coefficients"],
                &cs.iter()
                    .map(|c| {
                        let coeffs = c.coefficients.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
                        vec![c.len().to_string(), joined(&c.members), coeffs]
                    })
                    .collect::<Vec<_>>(),
            ),
            None => csv_table(
                &["size", "count"],
                &r.counts.iter().map(|(s, c)| vec![s.to_string(), c.to_string()]).collect::<Vec<_>>(),
            ),
        },
        Format::Text => {
            let mut out = format!("{} vectors in dimension {}\n", r.n, r.dimension);
            let _ = writeln!(out, "circuits: {}", r.total);
            counts_text(&mut out, &r.counts);
            for c in r.circuits.iter().flatten() {
                let coeffs = c.coefficients.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
                let _ = writeln!(out, "{}  [{coeffs}]", joined(&c.members));
            }
            if let Some(p) = &r.projection {
                let _ = writeln!(out, "projected to dimension {}: {} affine simplexes", p.dimension, p.total);
                counts_text(&mut out, &p.counts);
                let _ = writeln!(
                    out,
                    "counts {}, supports {}",
                    if p.counts_match { "match" } else { "differ" },
                    if p.supports_match { "match" } else { "differ" }
                );
            }
            out
        }
    }
}

// ---------- construct ----------

#[derive(Serialize)]
struct ConstructOutput<'a> {
    check: &'a affsimp_core::extremal::ConstructionCheck,
    configuration: serde_json::Value,
}

pub fn construct(a: &ConstructArgs, format: Format) -> Result<()> {
    let (id, n) = ConstructionId::parse(&a.id, &a.params)?;
    let (built, check) = check_construction(id, n)?;
    let config_json = match &built {
        Construction::Points(ps) => io::points_to_json(ps),
        Construction::Hypergraph(h) => io::hypergraph_to_json(h),
    };
    if let Some(out) = &a.out {
        write(out, &(config_json.clone() + "\n"))?;
        let mut sidecar = out.as_os_str().to_owned();
        sidecar.push(".check.json");
        write(Path::new(&sidecar), &json(&check))?;
    }
    let text = match format {
        Format::Json => json(&ConstructOutput {
            check: &check,
            configuration: serde_json::from_str(&config_json).expect("own output parses"),
        }),
        Format::Csv => csv_table(
            &["construction", "n", "expected", "enumerated", "agrees"],
            &[vec![
                id.to_string(),
                n.to_string(),
                check.expected.to_string(),
                check.enumerated.to_string(),
                check.agrees.to_string(),
            ]],
        ),
        Format::Text => format!(
            "{id} n={n}\nexpected:   {}\nenumerated: {}\n{}\n",
            check.expected,
            check.enumerated,
            if check.agrees { "agrees" } else { "DISAGREES" }
        ),
    };
    print!("{text}");
    if check.agrees {
        Ok(())
    } else {
        Err(invariant(format!(
            "{id} n={n}: enumerated {} but the closed form gives {}",
            check.enumerated, check.expected
        )))
    }
}

// ---------- search ----------

pub fn search(a: &SearchArgs, format: Format) -> Result<()> {
    let flavor = if a.linear { Flavor::Linear } else { Flavor::Free };
    let budget = a.budget.unwrap_or(DEFAULT_BUDGET);
    let r = minimize_semi_simplex_sum(a.n, a.k, flavor, budget)?;
    if let Some(out) = &a.out {
        write(out, &json(&r))?;
    }
    let text = match format {
        Format::Json => json(&r),
        Format::Csv => csv_table(
            &["n", "k", "flavor", "minimum", "decimal", "witnesses", "search_space"],
            &[vec![
                r.n.to_string(),
                r.k.to_string(),
                if r.linear_constrained { "linear" } else { "free" }.to_string(),
                r.minimum.to_string(),
                decimal(&r.minimum, 6),
                r.witnesses.len().to_string(),
                r.search_space_size.to_string(),
            ]],
        ),
        Format::Text => {
            let bounds = reference_bounds(r.k as u64);
            let mut out = format!(
                "minimum over {} hypergraphs, n={}, k={}: {}\n",
                if r.linear_constrained { "(k-1)-linear" } else { "all" },
                r.n,
                r.k,
                exact(&r.minimum)
            );
            let _ = writeln!(out, "candidates examined: {}", r.search_space_size);
            let _ = writeln!(
                out,
                "witnesses: {}{}",
                r.witnesses.len(),
                if r.witnesses_truncated { " (truncated)" } else { "" }
            );
            let _ = writeln!(out, "value at n = k+1: {}", exact(&bounds.lower_start));
            let (label, bound) = if r.linear_constrained {
                ("limit upper bound 1 - k/2^k", &bounds.upper_linear)
            } else {
                ("limit upper bound (1 - 1/k)^(k-1)", &bounds.upper_free)
            };
            let _ = writeln!(out, "{label}: {}", exact(bound));
            if r.k == 2 {
                let closed = exact_k2_minimum(r.n as u64);
                let _ = writeln!(
                    out,
                    "closed form 1 - floor(n^2/4)/C(n,2): {} ({})",
                    exact(&closed),
                    if closed == r.minimum { "matches" } else { "differs" }
                );
            }
            for w in r.witnesses.iter().take(5) {
                let _ = writeln!(out, "  {:?}", w.edge_lists());
            }
            out
        }
    };
    print!("{text}");
    Ok(())
}

// ---------- react ----------

pub fn react(a: &ReactArgs, format: Format) -> Result<()> {
    let universe = match &a.universe {
        Some(symbols) => Some(AtomUniverse::new(symbols.iter().map(|s| s.trim().to_string())).map_err(|e| input(e.to_string()))?),
        None => None,
    };
    let (universe, species) = io::read_species(&read(&a.file)?, universe)?;
    let sys = ReactionSystem::new(universe, species).map_err(|e| input(e.to_string()))?;
    let summary = if a.summary {
        Some(reaction_count_report(&sys.species, 2).map_err(|e| input(e.to_string()))?)
    } else {
        None
    };
    let text = match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                #[serde(flatten)]
                system: &'a ReactionSystem,
                #[serde(skip_serializing_if = "Option::is_none")]
                summary: Option<&'a affsimp_core::stoichiometry::ReactionCountReport>,
            }
            json(&Out {
                system: &sys,
                summary: summary.as_ref(),
            })
        }
        Format::Csv => csv_table(
            &["equation", "kind", "members", "coefficients"],
            &sys.reactions
                .iter()
                .map(|r| {
                    vec![
                        r.equation.clone(),
                        serde_json::to_value(r.kind).expect("enum").as_str().unwrap_or_default().to_string(),
                        joined(&r.members),
                        r.coefficients.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
        Format::Text => {
            let mut out = String::new();
            for r in &sys.reactions {
                let tag = match r.kind {
                    affsimp_core::stoichiometry::ReactionKind::IsomerOrMultipleDose => "  [isomer or multiple dose]",
                    affsimp_core::stoichiometry::ReactionKind::Combination => "",
                };
                let _ = writeln!(out, "{}{tag}", r.equation);
            }
            if let Some(s) = &summary {
                let _ = writeln!(
                    out,
                    "{} species, rank {}, {} minimal reactions; C(n, rank+1) = {}",
                    s.species, s.rank, s.total, s.benchmark
                );
                counts_text(&mut out, &s.by_size);
            }
            out
        }
    };
    print!("{text}");
    Ok(())
}

// ---------- verify ----------

pub fn verify(a: &VerifyArgs, format: Format) -> Result<()> {
    let suites = Suite::parse(&a.suite).ok_or_else(|| {
        let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
        input(format!("unknown suite {:?}; choose one of {} or all", a.suite, names.join(", ")))
    })?;
    let budget = a.budget.unwrap_or(DEFAULT_BUDGET);
    let reports: Vec<_> = suites.into_iter().map(|s| run_suite(s, budget)).collect();
    let text = match format {
        Format::Json => json(&reports),
        Format::Csv => csv_table(
            &["suite", "check", "passed", "detail"],
            &reports
                .iter()
                .flat_map(|r| {
                    r.checks
                        .iter()
                        .map(|c| vec![r.suite.to_string(), c.name.clone(), c.passed.to_string(), c.detail.clone()])
                })
                .collect::<Vec<_>>(),
        ),
        Format::Text => {
            let mut out = String::new();
            for r in &reports {
                let _ = writeln!(out, "[{}] {}", r.suite, if r.passed { "PASS" } else { "FAIL" });
                for c in &r.checks {
                    let _ = writeln!(out, "  {} {}: {}", if c.passed { "ok  " } else { "FAIL" }, c.name, c.detail);
                }
            }
            out
        }
    };
    print!("{text}");
    let failed: Vec<String> = reports.iter().filter(|r| !r.passed).map(|r| r.suite.to_string()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(invariant(format!("suites failed: {}", failed.join(", "))))
    }
}

// ---------- sperner ----------

#[derive(Serialize)]
struct SpernerOutput {
    n: usize,
    k: usize,
    count_e_k: usize,
    count_e0_k1: usize,
    total: usize,
    #[serde(serialize_with = "io::ser_rational")]
    yblm: Rational,
    is_sperner: bool,
    /// Present when the hypergraph is (k-1)-linear.
    deficit: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    family: Option<Vec<Vec<usize>>>,
}

pub fn sperner(a: &SpernerArgs, format: Format) -> Result<()> {
    let h = io::read_hypergraph(&read(&a.hypergraph)?)?;
    let report = h.semi_simplexes(a.k).map_err(|e| input(e.to_string()))?;
    let family = report.family();
    let out = SpernerOutput {
        n: h.n(),
        k: a.k,
        count_e_k: report.count_e_k,
        count_e0_k1: report.count_e0_k1,
        total: report.total(),
        yblm: yblm_sum(&family, h.n()),
        is_sperner: is_sperner(&family),
        deficit: semi_simplex_deficit(&h, a.k).ok().map(|d| d.to_string()),
        family: a.list.then(|| family.iter().map(|s| s.to_vec()).collect()),
    };
    let text = match format {
        Format::Json => json(&out),
        Format::Csv => csv_table(
            &["n", "k", "e_k", "e0_k1", "total", "yblm", "decimal", "sperner", "deficit"],
            &[vec![
                out.n.to_string(),
                out.k.to_string(),
                out.count_e_k.to_string(),
                out.count_e0_k1.to_string(),
                out.total.to_string(),
                out.yblm.to_string(),
                decimal(&out.yblm, 6),
                out.is_sperner.to_string(),
                out.deficit.clone().unwrap_or_default(),
            ]],
        ),
        Format::Text => {
            let mut t = format!("n={} k={}\n", out.n, out.k);
            let _ = writeln!(t, "k-sets inside an edge: {}", out.count_e_k);
            let _ = writeln!(t, "(k+1)-sets with no such k-set: {}", out.count_e0_k1);
            let _ = writeln!(t, "semi-simplexes: {}", out.total);
            let _ = writeln!(t, "YBLM sum: {}", exact(&out.yblm));
            let _ = writeln!(t, "antichain: {}", if out.is_sperner { "yes" } else { "no" });
            match &out.deficit {
                Some(d) => {
                    let _ = writeln!(t, "deficit (C(n,k) - total) / n^(k-1): {d}");
                }
                None => {
                    let _ = writeln!(t, "deficit: not (k-1)-linear");
                }
            }
            for s in out.family.iter().flatten() {
                let _ = writeln!(t, "{}", joined(s));
            }
            t
        }
    };
    print!("{text}");
    if out.is_sperner && out.yblm <= Rational::from_integer(1.into()) {
        Ok(())
    } else {
        Err(invariant("semi-simplex family violates the antichain or YBLM property"))
    }
}
