//! Chemical species as atom-count vectors, and minimal balanced reactions
//! as the circuits of those vectors.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::combinat::binomial_big;
use crate::exactla::Rational;
use crate::matroid::{enumerate_circuits, MatroidError, VectorConfiguration};

const MAX_GROUP_DEPTH: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StoichiometryError {
    #[error("atom {0} appears twice in the universe")]
    DuplicateAtom(String),
    #[error("{formula:?}, column {column}: {message}")]
    Syntax {
        formula: String,
        column: usize,
        message: String,
    },
    #[error("{formula:?}, column {column}: element {symbol} is not in the atom universe")]
    UnknownElement {
        formula: String,
        column: usize,
        symbol: String,
    },
    #[error("species {0} has no atoms")]
    Empty(String),
    #[error("species {name} has {found} atom counts, the universe has {expected}")]
    WrongLength {
        name: String,
        found: usize,
        expected: usize,
    },
    #[error(transparent)]
    Matroid(#[from] MatroidError),
}

/// Ordered, duplicate-free list of atom symbols. Composition vectors follow
/// this order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AtomUniverse {
    symbols: Vec<String>,
}

impl AtomUniverse {
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = S>) -> Result<Self, StoichiometryError> {
        let mut out: Vec<String> = Vec::new();
        for s in symbols {
            let s = s.into();
            if out.contains(&s) {
                return Err(StoichiometryError::DuplicateAtom(s));
            }
            out.push(s);
        }
        Ok(Self { symbols: out })
    }

    /// Every element of `formulas`, in order of first appearance.
    pub fn infer<S: AsRef<str>>(formulas: &[S]) -> Result<Self, StoichiometryError> {
        let mut symbols: Vec<String> = Vec::new();
        for f in formulas {
            for (sym, _, _) in parse_counts(f.as_ref())? {
                if !symbols.contains(&sym) {
                    symbols.push(sym);
                }
            }
        }
        Ok(Self { symbols })
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn index_of(&self, symbol: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == symbol)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Species {
    pub name: String,
    pub composition: Vec<u64>,
}

impl Species {
    pub fn new(name: impl Into<String>, composition: Vec<u64>) -> Result<Self, StoichiometryError> {
        let name = name.into();
        if composition.iter().all(|&c| c == 0) {
            return Err(StoichiometryError::Empty(name));
        }
        Ok(Self { name, composition })
    }
}

struct Parser<'a> {
    formula: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn syntax(&self, message: impl Into<String>) -> StoichiometryError {
        StoichiometryError::Syntax {
            formula: self.formula.to_string(),
            column: self.pos + 1,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn count(&mut self) -> Result<u64, StoichiometryError> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Ok(1);
        }
        let digits = &self.formula[start..self.pos];
        match digits.parse::<u64>() {
            Ok(0) => {
                self.pos = start;
                Err(self.syntax("multiplier must be positive"))
            }
            Ok(v) => Ok(v),
            Err(_) => {
                self.pos = start;
                Err(self.syntax("multiplier too large"))
            }
        }
    }

    fn group(&mut self, depth: usize, out: &mut Vec<Count>) -> Result<(), StoichiometryError> {
        let opened = self.pos;
        loop {
            match self.peek() {
                None => {
                    if depth > 0 {
                        self.pos = opened - 1;
                        return Err(self.syntax("unclosed parenthesis"));
                    }
                    return Ok(());
                }
                Some(b')') => {
                    if depth == 0 {
                        return Err(self.syntax("unmatched ')'"));
                    }
                    return Ok(());
                }
                Some(b'(') => {
                    if depth == MAX_GROUP_DEPTH {
                        return Err(self.syntax(format!("parentheses nested deeper than {MAX_GROUP_DEPTH}")));
                    }
                    self.pos += 1;
                    let inner_start = self.pos;
                    let mut inner = Vec::new();
                    self.group(depth + 1, &mut inner)?;
                    if inner.is_empty() {
                        self.pos = inner_start;
                        return Err(self.syntax("empty group"));
                    }
                    self.pos += 1; // the ')'
                    let m = self.count()?;
                    for (sym, c, col) in inner {
                        let c = c.checked_mul(m).ok_or_else(|| self.syntax("atom count overflows"))?;
                        push_count(out, sym, c, col).map_err(|_| self.syntax("atom count overflows"))?;
                    }
                }
                Some(b) if b.is_ascii_uppercase() => {
                    let start = self.pos;
                    self.pos += 1;
                    while self.peek().is_some_and(|b| b.is_ascii_lowercase()) {
                        self.pos += 1;
                    }
                    let sym = self.formula[start..self.pos].to_string();
                    let c = self.count()?;
                    push_count(out, sym, c, start + 1).map_err(|_| self.syntax("atom count overflows"))?;
                }
                Some(_) => {
                    let ch = self.formula[self.pos..].chars().next().unwrap_or('?');
                    return Err(self.syntax(format!("unexpected character {ch:?}")));
                }
            }
        }
    }
}

/// Symbol, total count, column of first occurrence.
type Count = (String, u64, usize);

fn push_count(out: &mut Vec<Count>, sym: String, c: u64, column: usize) -> Result<(), ()> {
    match out.iter_mut().find(|(s, _, _)| *s == sym) {
        Some((_, total, _)) => *total = total.checked_add(c).ok_or(())?,
        None => out.push((sym, c, column)),
    }
    Ok(())
}

fn parse_counts(formula: &str) -> Result<Vec<Count>, StoichiometryError> {
    let mut p = Parser {
        formula,
        bytes: formula.as_bytes(),
        pos: 0,
    };
    let mut out = Vec::new();
    p.group(0, &mut out)?;
    if out.is_empty() {
        return Err(p.syntax("no elements"));
    }
    Ok(out)
}

/// Parses a formula such as `CH3COOH` or `Ca(OH)2` into a species named by
/// the formula itself.
pub fn parse_formula(formula: &str, universe: &AtomUniverse) -> Result<Species, StoichiometryError> {
    let mut composition = vec![0u64; universe.len()];
    for (sym, c, column) in parse_counts(formula)? {
        let Some(i) = universe.index_of(&sym) else {
            return Err(StoichiometryError::UnknownElement {
                formula: formula.to_string(),
                column,
                symbol: sym,
            });
        };
        composition[i] = c;
    }
    Species::new(formula, composition)
}

/// Hill order: carbon, then hydrogen, then the rest alphabetically; with no
/// carbon everything is alphabetical.
pub fn hill_formula(composition: &[u64], universe: &AtomUniverse) -> String {
    let mut present: Vec<(&str, u64)> = universe
        .symbols()
        .iter()
        .zip(composition)
        .filter(|(_, &c)| c > 0)
        .map(|(s, &c)| (s.as_str(), c))
        .collect();
    let has_carbon = present.iter().any(|(s, _)| *s == "C");
    present.sort_by_key(|&(s, _)| match (has_carbon, s) {
        (true, "C") => (0, s),
        (true, "H") => (1, s),
        _ => (2, s),
    });
    present
        .into_iter()
        .map(|(s, c)| if c == 1 { s.to_string() } else { format!("{s}{c}") })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReactionKind {
    /// Two species with proportional compositions.
    IsomerOrMultipleDose,
    Combination,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReactionTerm {
    pub species: usize,
    pub name: String,
    #[serde(serialize_with = "crate::io::ser_bigint")]
    pub coefficient: BigInt,
}

/// A minimal balanced reaction. `coefficients[i]` belongs to species
/// `members[i]`; reactants carry negative coefficients, and the first member
/// is always a reactant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reaction {
    pub members: Vec<usize>,
    #[serde(serialize_with = "crate::io::ser_bigints")]
    pub coefficients: Vec<BigInt>,
    pub reactants: Vec<ReactionTerm>,
    pub products: Vec<ReactionTerm>,
    pub kind: ReactionKind,
    pub equation: String,
}

fn side(terms: &[ReactionTerm]) -> String {
    terms
        .iter()
        .map(|t| {
            if t.coefficient == BigInt::from(1) {
                t.name.clone()
            } else {
                format!("{} {}", t.coefficient, t.name)
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

impl fmt::Display for Reaction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.equation)
    }
}

fn composition_config(species: &[Species]) -> Result<VectorConfiguration, StoichiometryError> {
    let dim = species.first().map_or(0, |s| s.composition.len());
    let mut vectors = Vec::with_capacity(species.len());
    for s in species {
        if s.composition.len() != dim {
            return Err(StoichiometryError::WrongLength {
                name: s.name.clone(),
                found: s.composition.len(),
                expected: dim,
            });
        }
        vectors.push(s.composition.iter().map(|&c| Rational::from_integer(c.into())).collect());
    }
    Ok(VectorConfiguration::new(dim, vectors, None)?)
}

/// One reaction per circuit of the composition vectors, sorted by member list.
pub fn minimal_reactions(species: &[Species]) -> Result<Vec<Reaction>, StoichiometryError> {
    if species.len() < 2 {
        composition_config(species)?;
        return Ok(Vec::new());
    }
    let cfg = composition_config(species)?;
    Ok(enumerate_circuits(&cfg, 2, usize::MAX)
        .into_iter()
        .map(|c| {
            let flip = c.coefficients[0].is_positive();
            let coefficients: Vec<BigInt> =
                c.coefficients.into_iter().map(|x| if flip { -x } else { x }).collect();
            let mut reactants = Vec::new();
            let mut products = Vec::new();
            for (&i, x) in c.members.iter().zip(&coefficients) {
                let term = ReactionTerm {
                    species: i,
                    name: species[i].name.clone(),
                    coefficient: x.abs(),
                };
                if x.is_negative() {
                    reactants.push(term);
                } else {
                    products.push(term);
                }
            }
            let kind = if c.members.len() == 2 {
                ReactionKind::IsomerOrMultipleDose
            } else {
                ReactionKind::Combination
            };
            let equation = format!("{} -> {}", side(&reactants), side(&products));
            Reaction {
                members: c.members,
                coefficients,
                reactants,
                products,
                kind,
                equation,
            }
        })
        .collect())
}

/// True iff the signed coefficients annihilate the composition vectors.
pub fn is_balanced(species: &[Species], reaction: &Reaction) -> bool {
    let dim = species.first().map_or(0, |s| s.composition.len());
    (0..dim).all(|a| {
        reaction
            .members
            .iter()
            .zip(&reaction.coefficients)
            .map(|(&i, x)| x * BigInt::from(species[i].composition[a]))
            .sum::<BigInt>()
            .is_zero()
    })
}

/// Parsed species, their atom universe and every minimal reaction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReactionSystem {
    pub universe: AtomUniverse,
    pub species: Vec<Species>,
    pub reactions: Vec<Reaction>,
}

impl ReactionSystem {
    pub fn new(universe: AtomUniverse, species: Vec<Species>) -> Result<Self, StoichiometryError> {
        for s in &species {
            if s.composition.len() != universe.len() {
                return Err(StoichiometryError::WrongLength {
                    name: s.name.clone(),
                    found: s.composition.len(),
                    expected: universe.len(),
                });
            }
        }
        let reactions = minimal_reactions(&species)?;
        Ok(Self {
            universe,
            species,
            reactions,
        })
    }

    /// Parses formulas, inferring the universe when none is given.
    pub fn from_formulas<S: AsRef<str>>(formulas: &[S], universe: Option<AtomUniverse>) -> Result<Self, StoichiometryError> {
        let universe = match universe {
            Some(u) => u,
            None => AtomUniverse::infer(formulas)?,
        };
        let species = formulas
            .iter()
            .map(|f| parse_formula(f.as_ref(), &universe))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(universe, species)
    }
}

/// Reaction counts by number of participants, next to `C(n, rank + 1)`,
/// the count when every (rank+1)-subset is a reaction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReactionCountReport {
    pub species: usize,
    pub rank: usize,
    pub min_size: usize,
    pub by_size: BTreeMap<usize, usize>,
    pub total: usize,
    #[serde(serialize_with = "crate::io::ser_bigint")]
    pub benchmark: BigInt,
}

pub fn reaction_count_report(species: &[Species], min_size: usize) -> Result<ReactionCountReport, StoichiometryError> {
    let min_size = min_size.max(2);
    if species.is_empty() {
        return Ok(ReactionCountReport {
            species: 0,
            rank: 0,
            min_size,
            by_size: BTreeMap::new(),
            total: 0,
            benchmark: BigInt::zero(),
        });
    }
    let cfg = composition_config(species)?;
    let mut by_size = BTreeMap::new();
    for c in enumerate_circuits(&cfg, min_size, usize::MAX) {
        *by_size.entry(c.len()).or_insert(0) += 1;
    }
    let rank = cfg.rank();
    Ok(ReactionCountReport {
        species: species.len(),
        rank,
        min_size,
        total: by_size.values().sum(),
        by_size,
        benchmark: binomial_big(species.len() as u64, rank as u64 + 1),
    })
}
