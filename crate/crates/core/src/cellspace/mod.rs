//! Cell spaces: built-in groups and homogeneous spaces with a chosen origin,
//! the right semi-action, the word metric and the boundary calculus.

mod builtin;
pub mod laws;

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use indexmap::IndexSet;
use thiserror::Error;

pub use builtin::{Cycle, Dihedral, FreeGroup, Grid, IntLine};

/// A cell of a built-in space.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cell {
    Int(i64),
    Pair(i64, i64),
    Word(Vec<u8>),
}

impl Cell {
    pub fn int(&self) -> i64 {
        match self {
            Cell::Int(z) => *z,
            other => panic!("expected an integer cell, got {other:?}"),
        }
    }
    pub fn pair(&self) -> (i64, i64) {
        match self {
            Cell::Pair(x, y) => (*x, *y),
            other => panic!("expected a lattice cell, got {other:?}"),
        }
    }
    pub fn word(&self) -> &[u8] {
        match self {
            Cell::Word(w) => w,
            other => panic!("expected a word cell, got {other:?}"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpaceError {
    #[error("unknown space `{0}`")]
    UnknownSpace(String),
    #[error("malformed cell `{0}`")]
    MalformedCell(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("neighbourhood is not invariant under the stabiliser: element {element} sends {cell} outside")]
    InvalidNeighbourhood { element: usize, cell: String },
}

/// A cell space with a fixed origin and finite symmetric generating set.
///
/// `translate(m, a)` is `m ⊳ a` where `a` names the coset of the element
/// carrying the origin to `a`. Stabiliser elements are indexed `0..stabiliser_order()`,
/// with `0` the identity.
pub trait Space: Send + Sync + fmt::Debug {
    fn name(&self) -> String;
    fn origin(&self) -> Cell;
    fn generator_labels(&self) -> Vec<String>;
    /// `origin ⊳ s` for the `s`-th generator.
    fn generator_cell(&self, s: usize) -> Cell;
    fn translate(&self, m: &Cell, a: &Cell) -> Cell;
    fn distance(&self, a: &Cell, b: &Cell) -> usize;
    /// The lexicographically least geodesic generator word from the origin.
    fn geodesic_word(&self, m: &Cell) -> Vec<u8>;
    fn parse_cell_literal(&self, s: &str) -> Option<Cell>;
    fn format_cell(&self, m: &Cell) -> String;
    fn contains(&self, m: &Cell) -> bool;
    /// Closed-form size of a ball, `None` on overflow.
    fn ball_size(&self, radius: usize) -> Option<u128>;

    fn stabiliser_order(&self) -> usize {
        1
    }
    fn stabilise(&self, h: usize, a: &Cell) -> Cell {
        debug_assert_eq!(h, 0);
        a.clone()
    }
    fn cell_count(&self) -> Option<usize> {
        None
    }
    fn is_amenable(&self) -> bool {
        true
    }
    /// Integer coordinate for spaces whose cells are the integers with the usual order.
    fn line_coordinate(&self, _m: &Cell) -> Option<i64> {
        None
    }

    fn generator_count(&self) -> usize {
        self.generator_labels().len()
    }
    fn step(&self, m: &Cell, s: usize) -> Cell {
        self.translate(m, &self.generator_cell(s))
    }
    fn is_finite(&self) -> bool {
        self.cell_count().is_some()
    }
    fn is_line(&self) -> bool {
        self.line_coordinate(&self.origin()).is_some()
    }
    fn canonical_key(&self, m: &Cell) -> (usize, Vec<u8>) {
        let w = self.geodesic_word(m);
        (w.len(), w)
    }
    /// Parses either the space's literal syntax or a dotted generator word read from the origin.
    fn parse_cell(&self, s: &str) -> Result<Cell, SpaceError> {
        if let Some(c) = self.parse_cell_literal(s) {
            return Ok(c);
        }
        let labels = self.generator_labels();
        let mut m = self.origin();
        for part in s.trim().split('.') {
            let s_idx = labels
                .iter()
                .position(|l| l == part)
                .ok_or_else(|| SpaceError::MalformedCell(s.to_string()))?;
            m = self.step(&m, s_idx);
        }
        Ok(m)
    }
}

pub type SpaceRef = Arc<dyn Space>;

/// Parses `Z`, `Z2`, `Dinf`, `free:<k>` or `cycle:<n>`.
pub fn parse_space(s: &str) -> Result<SpaceRef, SpaceError> {
    let t = s.trim();
    match t {
        "Z" => return Ok(Arc::new(IntLine)),
        "Z2" => return Ok(Arc::new(Grid)),
        "Dinf" => return Ok(Arc::new(Dihedral)),
        _ => {}
    }
    let bad = || SpaceError::UnknownSpace(t.to_string());
    if let Some(k) = t.strip_prefix("free:") {
        return Ok(Arc::new(FreeGroup::new(k.parse().map_err(|_| bad())?)?));
    }
    if let Some(n) = t.strip_prefix("cycle:") {
        return Ok(Arc::new(Cycle::new(n.parse().map_err(|_| bad())?)?));
    }
    Err(bad())
}

/// Applies a dotted generator word to `m`: `m ⊳ (s₁ s₂ …)`.
pub fn semi_act(space: &dyn Space, m: &Cell, word: &str) -> Result<Cell, SpaceError> {
    let labels = space.generator_labels();
    let mut cur = m.clone();
    if word.trim().is_empty() {
        return Ok(cur);
    }
    for part in word.trim().split('.') {
        let s = labels
            .iter()
            .position(|l| l == part)
            .ok_or_else(|| SpaceError::UnknownGenerator(part.to_string()))?;
        cur = space.step(&cur, s);
    }
    Ok(cur)
}

/// A finite set of cells kept in canonical order (distance from the origin, then least geodesic word).
#[derive(Clone, Debug, Default)]
pub struct CellSet {
    cells: IndexSet<Cell>,
}

impl PartialEq for CellSet {
    fn eq(&self, other: &Self) -> bool {
        self.cells.len() == other.cells.len() && self.cells.iter().eq(other.cells.iter())
    }
}
impl Eq for CellSet {}

impl Hash for CellSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.cells.len().hash(state);
        for c in &self.cells {
            c.hash(state);
        }
    }
}

impl CellSet {
    pub fn new<I: IntoIterator<Item = Cell>>(space: &dyn Space, cells: I) -> Self {
        let mut v: Vec<Cell> = cells.into_iter().collect::<HashSet<_>>().into_iter().collect();
        v.sort_by_cached_key(|c| space.canonical_key(c));
        CellSet {
            cells: v.into_iter().collect(),
        }
    }
    pub fn empty() -> Self {
        CellSet::default()
    }
    pub fn len(&self) -> usize {
        self.cells.len()
    }
    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
    pub fn iter(&self) -> impl Iterator<Item = &Cell> + '_ {
        self.cells.iter()
    }
    pub fn contains(&self, c: &Cell) -> bool {
        self.cells.contains(c)
    }
    pub fn index_of(&self, c: &Cell) -> Option<usize> {
        self.cells.get_index_of(c)
    }
    pub fn get(&self, i: usize) -> Option<&Cell> {
        self.cells.get_index(i)
    }
    pub fn is_subset(&self, other: &CellSet) -> bool {
        self.cells.iter().all(|c| other.contains(c))
    }
    pub fn is_disjoint(&self, other: &CellSet) -> bool {
        self.cells.iter().all(|c| !other.contains(c))
    }
    /// Keeps the cells satisfying `keep`; order is preserved.
    pub fn filter(&self, mut keep: impl FnMut(&Cell) -> bool) -> CellSet {
        CellSet {
            cells: self.cells.iter().filter(|c| keep(c)).cloned().collect(),
        }
    }
    pub fn difference(&self, other: &CellSet) -> CellSet {
        self.filter(|c| !other.contains(c))
    }
    pub fn intersection(&self, other: &CellSet) -> CellSet {
        self.filter(|c| other.contains(c))
    }
    pub fn union(&self, space: &dyn Space, other: &CellSet) -> CellSet {
        CellSet::new(space, self.iter().chain(other.iter()).cloned())
    }
    pub fn to_vec(&self) -> Vec<Cell> {
        self.cells.iter().cloned().collect()
    }
    pub fn format(&self, space: &dyn Space) -> Vec<String> {
        self.cells.iter().map(|c| space.format_cell(c)).collect()
    }
}

impl<'a> IntoIterator for &'a CellSet {
    type Item = &'a Cell;
    type IntoIter = indexmap::set::Iter<'a, Cell>;
    fn into_iter(self) -> Self::IntoIter {
        self.cells.iter()
    }
}

/// Multi-source breadth-first search up to `radius` steps.
fn bfs_region<'a>(space: &dyn Space, sources: impl Iterator<Item = &'a Cell>, radius: usize) -> HashSet<Cell> {
    let mut seen: HashSet<Cell> = HashSet::new();
    let mut queue = VecDeque::new();
    for s in sources {
        if seen.insert(s.clone()) {
            queue.push_back((s.clone(), 0usize));
        }
    }
    let gens = space.generator_count();
    while let Some((m, d)) = queue.pop_front() {
        if d == radius {
            continue;
        }
        for s in 0..gens {
            let n = space.step(&m, s);
            if seen.insert(n.clone()) {
                queue.push_back((n, d + 1));
            }
        }
    }
    seen
}

pub fn ball(space: &dyn Space, m: &Cell, radius: usize) -> CellSet {
    CellSet::new(space, bfs_region(space, std::iter::once(m), radius))
}

pub fn sphere(space: &dyn Space, m: &Cell, radius: usize) -> CellSet {
    let b = bfs_region(space, std::iter::once(m), radius);
    CellSet::new(space, b.into_iter().filter(|c| space.distance(m, c) == radius))
}

/// `m ⊳ A`.
pub fn translate_set(space: &dyn Space, m: &Cell, a: &CellSet) -> CellSet {
    CellSet::new(space, a.iter().map(|c| space.translate(m, c)))
}

/// `A^{+θ}`: cells within distance `θ` of `A`.
pub fn closure(space: &dyn Space, a: &CellSet, theta: usize) -> CellSet {
    CellSet::new(space, bfs_region(space, a.iter(), theta))
}

/// `A^{−θ}`: cells of `A` whose `θ`-ball stays inside `A`.
pub fn interior(space: &dyn Space, a: &CellSet, theta: usize) -> CellSet {
    // ball(m, k) ⊆ A iff m ∈ A and every neighbour n has ball(n, k − 1) ⊆ A
    let mut inner = a.clone();
    for _ in 0..theta {
        let next = inner.filter(|m| (0..space.generator_count()).all(|s| inner.contains(&space.step(m, s))));
        if next.len() == inner.len() {
            break;
        }
        inner = next;
    }
    inner
}

/// `A^{+θ} ∖ A^{−θ}`.
pub fn boundary(space: &dyn Space, a: &CellSet, theta: usize) -> CellSet {
    closure(space, a, theta).difference(&interior(space, a, theta))
}

/// `A ∖ A^{−θ}`.
pub fn internal_boundary(space: &dyn Space, a: &CellSet, theta: usize) -> CellSet {
    a.difference(&interior(space, a, theta))
}

/// `A^{+θ} ∖ A`.
pub fn external_boundary(space: &dyn Space, a: &CellSet, theta: usize) -> CellSet {
    closure(space, a, theta).difference(a)
}

/// Minimum distance between two non-empty sets; `None` if either is empty.
pub fn set_distance(space: &dyn Space, a: &CellSet, b: &CellSet) -> Option<usize> {
    a.iter().flat_map(|x| b.iter().map(move |y| space.distance(x, y))).min()
}

/// The permutations of `n` induced by the stabiliser, one per element in index order.
///
/// `perm[i] = j` means element `h` sends `n[i]` to `n[j]`.
pub fn stabiliser_orbit(space: &dyn Space, n: &CellSet) -> Result<Vec<Vec<usize>>, SpaceError> {
    (0..space.stabiliser_order())
        .map(|h| {
            n.iter()
                .map(|c| {
                    let image = space.stabilise(h, c);
                    n.index_of(&image).ok_or_else(|| SpaceError::InvalidNeighbourhood {
                        element: h,
                        cell: space.format_cell(c),
                    })
                })
                .collect()
        })
        .collect()
}

/// Distance by breadth-first search over the generator graph, independent of the closed forms.
pub fn bfs_distance(space: &dyn Space, a: &Cell, b: &Cell, limit: usize) -> Option<usize> {
    let mut seen = HashSet::from([a.clone()]);
    let mut frontier = vec![a.clone()];
    for d in 0..=limit {
        if frontier.contains(b) {
            return Some(d);
        }
        let mut next = Vec::new();
        for m in &frontier {
            for s in 0..space.generator_count() {
                let n = space.step(m, s);
                if seen.insert(n.clone()) {
                    next.push(n);
                }
            }
        }
        frontier = next;
    }
    None
}

/// Every cell of a finite space in canonical order.
pub fn all_cells(space: &dyn Space) -> Option<CellSet> {
    let n = space.cell_count()?;
    Some(ball(space, &space.origin(), n))
}
