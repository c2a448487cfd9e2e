//! Subshifts given by forbidden blocks or, on the line, by a labelled graph.

mod certify;
pub mod line;
pub mod structure;

use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::BigUint;
use thiserror::Error;

use crate::cellspace::{ball, closure, Cell, CellSet, SpaceError, SpaceRef};
use crate::pattern::{semi_occurs, Alphabet, Exactness, Pattern, PatternError, PatternSet, Symbol};

pub use certify::block_radius;
use certify::Window;
pub use line::LineAutomaton;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubshiftError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error("`{0}` needs a one-dimensional space")]
    NeedsLine(String),
    #[error("unknown shift `{0}`")]
    UnknownShift(String),
    #[error("forbidden block uses symbol {symbol} outside an alphabet of {size}")]
    SymbolOutOfRange { symbol: Symbol, size: usize },
}

/// How far beyond a domain to look when exactness is not available.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cert {
    /// Exact where an oracle exists, otherwise the block radius (at least 1).
    Auto,
    Radius(usize),
}

#[derive(Clone, Debug)]
pub enum Constraint {
    Forbidden(Vec<Pattern>),
    Graph(LineAutomaton),
}

#[derive(Clone, Debug)]
pub struct SubshiftSpec {
    pub name: String,
    pub space: SpaceRef,
    pub alphabet: Alphabet,
    pub constraint: Constraint,
    oracle: Option<LineAutomaton>,
}

enum Mode<'a> {
    Line(&'a LineAutomaton),
    Window(usize, Exactness),
}

impl SubshiftSpec {
    pub fn forbidden(
        name: impl Into<String>,
        space: SpaceRef,
        alphabet: Alphabet,
        blocks: Vec<Pattern>,
    ) -> Result<Self, SubshiftError> {
        for b in &blocks {
            for (c, v) in b.entries() {
                if v as usize >= alphabet.len() {
                    return Err(SubshiftError::SymbolOutOfRange {
                        symbol: v,
                        size: alphabet.len(),
                    });
                }
                if !space.contains(c) {
                    return Err(SpaceError::MalformedCell(format!("{c:?}")).into());
                }
            }
        }
        let oracle = (space.is_line() && !space.is_finite()).then(|| {
            let mut words = Vec::new();
            for b in &blocks {
                for h in 0..space.stabiliser_order() {
                    words.push(
                        b.entries()
                            .map(|(c, v)| (space.line_coordinate(&space.stabilise(h, c)).unwrap(), v))
                            .collect::<Vec<_>>(),
                    );
                }
            }
            LineAutomaton::from_blocks(alphabet.len(), &words)
        });
        Ok(SubshiftSpec {
            name: name.into(),
            space,
            alphabet,
            constraint: Constraint::Forbidden(blocks),
            oracle,
        })
    }

    pub fn graph(
        name: impl Into<String>,
        space: SpaceRef,
        alphabet: Alphabet,
        automaton: LineAutomaton,
    ) -> Result<Self, SubshiftError> {
        let name = name.into();
        if !space.is_line() || space.is_finite() {
            return Err(SubshiftError::NeedsLine(name));
        }
        if automaton.symbols() != alphabet.len() {
            return Err(PatternError::BadAlphabet.into());
        }
        Ok(SubshiftSpec {
            name,
            space,
            alphabet,
            constraint: Constraint::Graph(automaton.clone()),
            oracle: Some(automaton),
        })
    }

    /// Words laid along the first generator starting at the origin.
    fn segment_blocks(space: &SpaceRef, words: &[&[Symbol]]) -> Vec<Pattern> {
        words
            .iter()
            .map(|w| {
                let mut m = space.origin();
                let mut entries = Vec::new();
                for &v in w.iter() {
                    entries.push((m.clone(), v));
                    m = space.step(&m, 0);
                }
                Pattern::from_cells(space.as_ref(), entries)
            })
            .collect()
    }

    /// Built-in shifts: `full`, `full:<q>`, `empty`, `golden_mean`, `even`, `alt_00_11`,
    /// `f010_111` and `gg_mean:<q>:<cells>/<cells>/…` with `;`-separated cells.
    pub fn named(name: &str, space: SpaceRef) -> Result<Self, SubshiftError> {
        let bin = Alphabet::binary();
        match name {
            "full" => Self::forbidden(name, space, bin, vec![]),
            "empty" => {
                let blocks = Self::segment_blocks(&space, &[&[0], &[1]]);
                Self::forbidden(name, space, bin, blocks)
            }
            "golden_mean" => {
                let blocks = Self::segment_blocks(&space, &[&[1, 1]]);
                Self::forbidden(name, space, bin, blocks)
            }
            "alt_00_11" => {
                let blocks = Self::segment_blocks(&space, &[&[0, 0], &[1, 1]]);
                Self::forbidden(name, space, bin, blocks)
            }
            "f010_111" => {
                let blocks = Self::segment_blocks(&space, &[&[0, 1, 0], &[1, 1, 1]]);
                Self::forbidden(name, space, bin, blocks)
            }
            "even" => Self::graph(name, space, bin, LineAutomaton::even()),
            _ => {
                if let Some(q) = name.strip_prefix("full:") {
                    let q: usize = q.parse().map_err(|_| SubshiftError::UnknownShift(name.into()))?;
                    let alphabet = Alphabet::new((0..q).map(|i| i.to_string()))?;
                    return Self::forbidden(name, space, alphabet, vec![]);
                }
                if let Some(rest) = name.strip_prefix("gg_mean:") {
                    return Self::generalised_golden_mean(name, space, rest);
                }
                Err(SubshiftError::UnknownShift(name.into()))
            }
        }
    }

    /// Symbols `0..=q`; every listed cell set must contain a `0`.
    fn generalised_golden_mean(name: &str, space: SpaceRef, params: &str) -> Result<Self, SubshiftError> {
        let bad = || SubshiftError::UnknownShift(name.into());
        let (q, sets) = params.split_once(':').ok_or_else(bad)?;
        let q: usize = q.parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        let alphabet = Alphabet::new((0..=q).map(|i| i.to_string()))?;
        let mut blocks = Vec::new();
        for set in sets.split('/') {
            let cells = set
                .split(';')
                .map(|c| space.parse_cell(c))
                .collect::<Result<Vec<Cell>, _>>()?;
            let domain = CellSet::new(space.as_ref(), cells);
            if !domain.contains(&space.origin()) {
                return Err(bad());
            }
            let domain = Arc::new(domain);
            let n = domain.len();
            let mut values = vec![1 as Symbol; n];
            loop {
                blocks.push(Pattern::new(domain.clone(), values.clone())?);
                let Some(i) = (0..n).rev().find(|&i| (values[i] as usize) < q) else { break };
                values[i] += 1;
                for v in values.iter_mut().skip(i + 1) {
                    *v = 1;
                }
            }
        }
        Self::forbidden(name, space, alphabet, blocks)
    }

    pub fn blocks(&self) -> Option<&[Pattern]> {
        match &self.constraint {
            Constraint::Forbidden(b) => Some(b),
            Constraint::Graph(_) => None,
        }
    }

    pub fn is_finite_type(&self) -> bool {
        matches!(self.constraint, Constraint::Forbidden(_))
    }

    /// Radius of a ball holding every forbidden block domain; `None` for graph presentations.
    pub fn memory(&self) -> Option<usize> {
        self.blocks().map(|b| block_radius(self.space.as_ref(), b))
    }

    pub fn line_oracle(&self) -> Option<&LineAutomaton> {
        self.oracle.as_ref()
    }

    fn mode(&self, cert: Cert) -> Mode<'_> {
        if let Some(n) = self.space.cell_count() {
            return Mode::Window(n, Exactness::Exact);
        }
        match (&self.constraint, &self.oracle, cert) {
            (Constraint::Graph(g), _, _) => Mode::Line(g),
            (_, Some(o), Cert::Auto) => Mode::Line(o),
            (_, _, Cert::Radius(r)) => Mode::Window(r, Exactness::Certified(r)),
            (_, None, Cert::Auto) => {
                let r = self.memory().unwrap_or(1).max(1);
                Mode::Window(r, Exactness::Certified(r))
            }
        }
    }

    /// Exactness that `cert` yields for this shift.
    pub fn exactness(&self, cert: Cert) -> Exactness {
        match self.mode(cert) {
            Mode::Line(_) => Exactness::Exact,
            Mode::Window(_, e) => e,
        }
    }

    fn line_word(&self, p: &Pattern) -> Vec<(i64, Symbol)> {
        p.line_word(self.space.as_ref())
    }

    /// No forbidden block semi-occurs inside `p`; for graph presentations, the word is accepted.
    pub fn locally_admissible(&self, p: &Pattern) -> bool {
        let space = self.space.as_ref();
        match &self.constraint {
            Constraint::Graph(g) => g.accepts(&self.line_word(p)),
            Constraint::Forbidden(blocks) => {
                let anchors = closure(space, p.domain(), block_radius(space, blocks));
                !blocks.iter().any(|b| anchors.iter().any(|m| semi_occurs(space, b, m, p)))
            }
        }
    }

    fn window(&self, order: &[Cell]) -> Window {
        let blocks = self.blocks().expect("window search needs forbidden blocks");
        Window::new(self.space.as_ref(), self.alphabet.len(), blocks, order)
    }

    /// Assignment order: `front` first, then the rest of `front^{+r}`.
    fn extended_order(&self, front: &CellSet, r: usize) -> Vec<Cell> {
        let space = self.space.as_ref();
        let outer = if front.is_empty() {
            ball(space, &space.origin(), r)
        } else {
            closure(space, front, r)
        };
        front.iter().chain(outer.difference(front).iter()).cloned().collect()
    }

    /// Whether `p` is a restriction of some point.
    pub fn allowed(&self, p: &Pattern, cert: Cert) -> (bool, Exactness) {
        match self.mode(cert) {
            Mode::Line(o) => (o.accepts(&self.line_word(p)), Exactness::Exact),
            Mode::Window(r, e) => {
                let order = self.extended_order(p.domain(), r);
                let mut fixed: Vec<Option<Symbol>> = p.values().iter().map(|&v| Some(v)).collect();
                fixed.resize(order.len(), None);
                (self.window(&order).satisfiable(&fixed), e)
            }
        }
    }

    /// `X_F` in canonical order.
    pub fn enumerate(&self, f: &CellSet, cert: Cert) -> PatternSet {
        let domain = Arc::new(f.clone());
        match self.mode(cert) {
            Mode::Line(o) => {
                let (coords, slots) = self.line_layout(f);
                let mut members: Vec<Vec<Symbol>> = o
                    .enumerate(&coords)
                    .into_iter()
                    .map(|w| {
                        let mut v = vec![0; w.len()];
                        for (k, s) in w.into_iter().enumerate() {
                            v[slots[k]] = s;
                        }
                        v
                    })
                    .collect();
                members.sort_unstable();
                PatternSet {
                    domain,
                    members,
                    exactness: Exactness::Exact,
                }
            }
            Mode::Window(r, e) => {
                let order = self.extended_order(f, r);
                PatternSet {
                    domain,
                    members: self.window(&order).enumerate_front(f.len()),
                    exactness: e,
                }
            }
        }
    }

    /// `|X_F|`, without materialising the patterns when an exact line oracle is available.
    pub fn count(&self, f: &CellSet, cert: Cert) -> (BigUint, Exactness) {
        match self.mode(cert) {
            Mode::Line(o) => (o.count(&self.line_layout(f).0), Exactness::Exact),
            Mode::Window(..) => {
                let s = self.enumerate(f, cert);
                (BigUint::from(s.len()), s.exactness)
            }
        }
    }

    /// Sorted coordinates and, for each, the canonical index of its cell.
    fn line_layout(&self, f: &CellSet) -> (Vec<i64>, Vec<usize>) {
        let mut pairs: Vec<(i64, usize)> = f
            .iter()
            .enumerate()
            .map(|(i, c)| (self.space.line_coordinate(c).expect("line space"), i))
            .collect();
        pairs.sort_unstable();
        pairs.into_iter().unzip()
    }

    /// Lexicographically least member of `X_target` extending `p`, if any.
    pub fn first_extension(&self, p: &Pattern, target: &CellSet, cert: Cert) -> Option<Pattern> {
        match self.mode(cert) {
            Mode::Line(_) => {
                let set = self.enumerate(target, cert);
                let found = set.patterns().find(|q| p.agrees_with(q));
                found
            }
            Mode::Window(r, _) => {
                let outer = closure(self.space.as_ref(), target, r);
                let order: Vec<Cell> = target.iter().chain(outer.difference(target).iter()).cloned().collect();
                let fixed: Vec<Option<Symbol>> = order.iter().map(|c| p.get(c)).collect();
                let sol = self.window(&order).first_solution(&fixed)?;
                Pattern::new(Arc::new(target.clone()), sol[..target.len()].to_vec()).ok()
            }
        }
    }

    /// The shift whose allowed `κ`-ball patterns are exactly those listed.
    pub fn from_allowed_balls(name: impl Into<String>, base: &SubshiftSpec, allowed: &PatternSet) -> Result<Self, SubshiftError> {
        let space = base.space.clone();
        let q = base.alphabet.len();
        let n = allowed.domain.len();
        let keep: HashSet<&Vec<Symbol>> = allowed.members.iter().collect();
        let mut blocks = Vec::new();
        let mut values = vec![0 as Symbol; n];
        loop {
            if !keep.contains(&values) {
                blocks.push(Pattern::new(allowed.domain.clone(), values.clone())?);
            }
            let Some(i) = (0..n).rev().find(|&i| (values[i] as usize) + 1 < q) else { break };
            values[i] += 1;
            for v in values.iter_mut().skip(i + 1) {
                *v = 0;
            }
        }
        Self::forbidden(name, space, base.alphabet.clone(), blocks)
    }
}

#[cfg(test)]
mod tests;
