//! Alphabets, finite patterns and pattern sets.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::cellspace::{translate_set, Cell, CellSet, Space};

pub type Symbol = u8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PatternError {
    #[error("alphabet must be non-empty with distinct symbols")]
    BadAlphabet,
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("pattern has {got} symbols for a domain of {want} cells")]
    LengthMismatch { got: usize, want: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self, PatternError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let distinct: HashSet<&String> = names.iter().collect();
        if names.is_empty() || distinct.len() != names.len() || names.len() > 255 || names.iter().any(|n| n.is_empty()) {
            return Err(PatternError::BadAlphabet);
        }
        Ok(Alphabet { names })
    }
    pub fn binary() -> Self {
        Alphabet::new(["0", "1"]).unwrap()
    }
    pub fn len(&self) -> usize {
        self.names.len()
    }
    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
    pub fn names(&self) -> &[String] {
        &self.names
    }
    pub fn name(&self, s: Symbol) -> &str {
        &self.names[s as usize]
    }
    pub fn index(&self, name: &str) -> Result<Symbol, PatternError> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| i as Symbol)
            .ok_or_else(|| PatternError::UnknownSymbol(name.to_string()))
    }
    fn single_chars(&self) -> bool {
        self.names.iter().all(|n| n.chars().count() == 1)
    }
    /// Parses a word: character by character for one-character alphabets, otherwise comma separated.
    pub fn parse_word(&self, s: &str) -> Result<Vec<Symbol>, PatternError> {
        if self.single_chars() && !s.contains(',') {
            s.chars().map(|c| self.index(&c.to_string())).collect()
        } else if s.trim().is_empty() {
            Ok(Vec::new())
        } else {
            s.split(',').map(|t| self.index(t.trim())).collect()
        }
    }
    pub fn format_word(&self, values: &[Symbol]) -> String {
        let parts: Vec<&str> = values.iter().map(|&v| self.name(v)).collect();
        if self.single_chars() {
            parts.concat()
        } else {
            parts.join(",")
        }
    }
}

/// A map from a finite domain to symbols; values follow the domain's canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pattern {
    domain: Arc<CellSet>,
    values: Vec<Symbol>,
}

impl Pattern {
    pub fn new(domain: Arc<CellSet>, values: Vec<Symbol>) -> Result<Self, PatternError> {
        if domain.len() != values.len() {
            return Err(PatternError::LengthMismatch {
                got: values.len(),
                want: domain.len(),
            });
        }
        Ok(Pattern { domain, values })
    }
    pub fn from_cells(space: &dyn Space, entries: impl IntoIterator<Item = (Cell, Symbol)>) -> Self {
        let entries: Vec<(Cell, Symbol)> = entries.into_iter().collect();
        let domain = CellSet::new(space, entries.iter().map(|(c, _)| c.clone()));
        let mut values = vec![0; domain.len()];
        for (c, v) in entries {
            values[domain.index_of(&c).unwrap()] = v;
        }
        Pattern {
            domain: Arc::new(domain),
            values,
        }
    }
    /// Builds a pattern on consecutive integers `start, start+1, …` from a word.
    pub fn on_interval(space: &dyn Space, start: i64, word: &[Symbol]) -> Self {
        Pattern::from_cells(space, word.iter().enumerate().map(|(i, &v)| (Cell::Int(start + i as i64), v)))
    }
    pub fn domain(&self) -> &CellSet {
        &self.domain
    }
    pub fn domain_arc(&self) -> &Arc<CellSet> {
        &self.domain
    }
    pub fn values(&self) -> &[Symbol] {
        &self.values
    }
    pub fn len(&self) -> usize {
        self.values.len()
    }
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
    pub fn get(&self, c: &Cell) -> Option<Symbol> {
        self.domain.index_of(c).map(|i| self.values[i])
    }
    pub fn entries(&self) -> impl Iterator<Item = (&Cell, Symbol)> + '_ {
        self.domain.iter().zip(self.values.iter().copied())
    }
    /// Restriction to `sub`; cells of `sub` outside the domain are an error.
    pub fn restrict(&self, sub: &CellSet) -> Option<Pattern> {
        let values = sub.iter().map(|c| self.get(c)).collect::<Option<Vec<_>>>()?;
        Some(Pattern {
            domain: Arc::new(sub.clone()),
            values,
        })
    }
    /// Values listed by increasing integer coordinate, for line spaces.
    pub fn line_word(&self, space: &dyn Space) -> Vec<(i64, Symbol)> {
        let mut v: Vec<(i64, Symbol)> = self
            .entries()
            .map(|(c, s)| (space.line_coordinate(c).expect("line space"), s))
            .collect();
        v.sort_unstable();
        v
    }
    /// `self` agrees with `other` wherever both are defined.
    pub fn agrees_with(&self, other: &Pattern) -> bool {
        self.entries().all(|(c, v)| other.get(c).is_none_or(|w| w == v))
    }
    pub fn display(&self, space: &dyn Space, alphabet: &Alphabet) -> String {
        let parts: Vec<String> = self
            .entries()
            .map(|(c, v)| format!("{}:{}", space.format_cell(c), alphabet.name(v)))
            .collect();
        parts.join(" ")
    }
}

/// `m ⊛ p`: the pattern on `m ⊳ dom(p)` with `(m ⊛ p)(m ⊳ a) = p(a)`.
pub fn shift_pattern(space: &dyn Space, m: &Cell, p: &Pattern) -> Pattern {
    Pattern::from_cells(space, p.entries().map(|(a, v)| (space.translate(m, a), v)))
}

/// `h ▷ p` for a stabiliser element: the pattern on `h ▷ dom(p)` with `(h ▷ p)(h ▷ a) = p(a)`.
pub fn rotate_pattern(space: &dyn Space, h: usize, p: &Pattern) -> Pattern {
    Pattern::from_cells(space, p.entries().map(|(a, v)| (space.stabilise(h, a), v)))
}

/// Whether `p` semi-occurs at `m` in `q`: some stabiliser element `h` has
/// `q(m ⊳ (h ▷ a)) = p(a)` for every `a` in the domain of `p`.
pub fn semi_occurs(space: &dyn Space, p: &Pattern, m: &Cell, q: &Pattern) -> bool {
    (0..space.stabiliser_order()).any(|h| {
        p.entries()
            .all(|(a, v)| q.get(&space.translate(m, &space.stabilise(h, a))) == Some(v))
    })
}

/// Cells `m` at which `p` semi-occurs in `q`.
pub fn semi_occurrences(space: &dyn Space, p: &Pattern, q: &Pattern) -> CellSet {
    q.domain().filter(|m| semi_occurs(space, p, m, q))
}

/// Domain `m ⊳ dom(p)` without building the pattern.
pub fn shifted_domain(space: &dyn Space, m: &Cell, p: &Pattern) -> CellSet {
    translate_set(space, m, p.domain())
}

/// How much a result can be trusted: exactly, or up to the extension radius used to certify it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exactness {
    Exact,
    Certified(usize),
}

impl Exactness {
    /// The weaker of the two.
    pub fn meet(self, other: Exactness) -> Exactness {
        match (self, other) {
            (Exactness::Exact, e) | (e, Exactness::Exact) => e,
            (Exactness::Certified(a), Exactness::Certified(b)) => Exactness::Certified(a.min(b)),
        }
    }
    pub fn is_exact(self) -> bool {
        self == Exactness::Exact
    }
}

impl fmt::Display for Exactness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exactness::Exact => write!(f, "exact"),
            Exactness::Certified(r) => write!(f, "certified({r})"),
        }
    }
}

/// All patterns of a subshift on one domain, in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternSet {
    pub domain: Arc<CellSet>,
    pub members: Vec<Vec<Symbol>>,
    pub exactness: Exactness,
}

impl PatternSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
    pub fn contains(&self, values: &[Symbol]) -> bool {
        self.members.binary_search_by(|m| m.as_slice().cmp(values)).is_ok()
    }
    pub fn patterns(&self) -> impl Iterator<Item = Pattern> + '_ {
        self.members.iter().map(|v| Pattern {
            domain: self.domain.clone(),
            values: v.clone(),
        })
    }
}
