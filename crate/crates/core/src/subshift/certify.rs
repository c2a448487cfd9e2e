//! Backtracking over a finite window with forbidden-block placements.
//!
//! Cells are assigned in a fixed order; each placement is checked once its
//! last cell is assigned.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;

use crate::cellspace::{closure, Cell, CellSet, Space};
use crate::pattern::{Pattern, Symbol};

/// A forbidden block laid onto window positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Placement {
    cells: Vec<usize>,
    values: Vec<Symbol>,
}

pub(crate) struct Window {
    len: usize,
    symbols: usize,
    by_trigger: Vec<Vec<Placement>>,
}

/// Radius of the smallest ball around the origin holding every block domain.
pub fn block_radius(space: &dyn Space, blocks: &[Pattern]) -> usize {
    let o = space.origin();
    blocks
        .iter()
        .flat_map(|b| b.domain().iter().map(|c| space.distance(&o, c)).collect::<Vec<_>>())
        .max()
        .unwrap_or(0)
}

impl Window {
    /// `order` lists the window cells in assignment order.
    pub(crate) fn new(space: &dyn Space, symbols: usize, blocks: &[Pattern], order: &[Cell]) -> Self {
        let index: HashMap<&Cell, usize> = order.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let region = CellSet::new(space, order.iter().cloned());
        let anchors = closure(space, &region, block_radius(space, blocks));
        let mut seen = HashSet::new();
        let mut by_trigger = vec![Vec::new(); order.len()];
        for block in blocks {
            for h in 0..space.stabiliser_order() {
                let rotated: Vec<Cell> = block.domain().iter().map(|a| space.stabilise(h, a)).collect();
                for m in anchors.iter() {
                    let cells: Option<Vec<usize>> = rotated
                        .iter()
                        .map(|a| index.get(&space.translate(m, a)).copied())
                        .collect();
                    let Some(cells) = cells else { continue };
                    let p = Placement {
                        cells,
                        values: block.values().to_vec(),
                    };
                    if seen.insert(p.clone()) {
                        let trigger = *p.cells.iter().max().unwrap();
                        by_trigger[trigger].push(p);
                    }
                }
            }
        }
        Window {
            len: order.len(),
            symbols,
            by_trigger,
        }
    }

    fn ok_at(&self, i: usize, assignment: &[Symbol]) -> bool {
        self.by_trigger[i]
            .iter()
            .all(|p| !p.cells.iter().zip(&p.values).all(|(&c, &v)| assignment[c] == v))
    }

    fn candidates(&self, fixed: &[Option<Symbol>], i: usize) -> std::ops::Range<Symbol> {
        match fixed.get(i).copied().flatten() {
            Some(v) => v..v + 1,
            None => 0..self.symbols as Symbol,
        }
    }

    /// Whether positions `from..` can be completed, given the first `from` assigned.
    fn complete(&self, fixed: &[Option<Symbol>], assignment: &mut Vec<Symbol>, from: usize) -> bool {
        if from == self.len {
            return true;
        }
        for v in self.candidates(fixed, from) {
            assignment.push(v);
            if self.ok_at(from, assignment) && self.complete(fixed, assignment, from + 1) {
                assignment.pop();
                return true;
            }
            assignment.pop();
        }
        false
    }

    /// Whether a locally admissible assignment exists with the given fixed values.
    pub(crate) fn satisfiable(&self, fixed: &[Option<Symbol>]) -> bool {
        self.complete(fixed, &mut Vec::with_capacity(self.len), 0)
    }

    /// Lexicographically least locally admissible assignment honouring `fixed`.
    pub(crate) fn first_solution(&self, fixed: &[Option<Symbol>]) -> Option<Vec<Symbol>> {
        let mut a = Vec::with_capacity(self.len);
        self.first_rec(fixed, &mut a, 0).then_some(a)
    }

    fn first_rec(&self, fixed: &[Option<Symbol>], a: &mut Vec<Symbol>, i: usize) -> bool {
        if i == self.len {
            return true;
        }
        for v in self.candidates(fixed, i) {
            a.push(v);
            if self.ok_at(i, a) && self.first_rec(fixed, a, i + 1) {
                return true;
            }
            a.pop();
        }
        false
    }

    /// All assignments of the first `front` positions that complete to the whole window,
    /// in lexicographic order.
    pub(crate) fn enumerate_front(&self, front: usize) -> Vec<Vec<Symbol>> {
        let free = vec![None; self.len];
        if front == 0 {
            return if self.satisfiable(&free) { vec![Vec::new()] } else { Vec::new() };
        }
        (0..self.symbols as Symbol)
            .into_par_iter()
            .map(|v| {
                let mut out = Vec::new();
                let mut a = vec![v];
                if self.ok_at(0, &a) {
                    self.front_rec(front, &free, &mut a, &mut out);
                }
                out
            })
            .collect::<Vec<_>>()
            .concat()
    }

    fn front_rec(&self, front: usize, free: &[Option<Symbol>], a: &mut Vec<Symbol>, out: &mut Vec<Vec<Symbol>>) {
        let i = a.len();
        if i == front {
            let mut probe = a.clone();
            if self.complete(free, &mut probe, front) {
                out.push(a.clone());
            }
            return;
        }
        for v in 0..self.symbols as Symbol {
            a.push(v);
            if self.ok_at(i, a) {
                self.front_rec(front, free, a, out);
            }
            a.pop();
        }
    }
}
