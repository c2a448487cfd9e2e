//! Edge-labelled graph presentations of one-dimensional shifts.
//!
//! A configuration is in the shift when it labels a bi-infinite path. After
//! trimming, every vertex lies on such a path, so a finite word with holes is
//! allowed exactly when the subset run over it never dies.

use std::collections::{HashMap, HashSet};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::pattern::Symbol;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StateSet(Vec<u64>);

impl StateSet {
    fn empty(n: usize) -> Self {
        StateSet(vec![0; n.div_ceil(64).max(1)])
    }
    fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for i in 0..n {
            s.insert(i);
        }
        s
    }
    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }
}

/// A finite graph whose edges carry symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineAutomaton {
    states: usize,
    symbols: usize,
    /// `next[q][a]`: targets of the `a`-labelled edges leaving `q`.
    next: Vec<Vec<Vec<usize>>>,
}

impl LineAutomaton {
    pub fn from_edges(states: usize, symbols: usize, edges: &[(usize, Symbol, usize)]) -> Self {
        let mut next = vec![vec![Vec::new(); symbols]; states];
        for &(from, a, to) in edges {
            next[from][a as usize].push(to);
        }
        LineAutomaton { states, symbols, next }.trimmed()
    }

    /// Graph on words of length `L − 1`, where `L` is the widest block span.
    ///
    /// Each block is a list of `(offset, symbol)` pairs; offsets may have gaps.
    pub fn from_blocks(symbols: usize, blocks: &[Vec<(i64, Symbol)>]) -> Self {
        let normal: Vec<Vec<(usize, Symbol)>> = blocks
            .iter()
            .map(|b| {
                let lo = b.iter().map(|e| e.0).min().unwrap_or(0);
                let mut n: Vec<(usize, Symbol)> = b.iter().map(|&(o, v)| ((o - lo) as usize, v)).collect();
                n.sort_unstable();
                n
            })
            .collect();
        let span = normal
            .iter()
            .map(|b| b.iter().map(|e| e.0 + 1).max().unwrap_or(1))
            .max()
            .unwrap_or(1);
        let mut full: HashSet<Vec<Symbol>> = HashSet::new();
        let mut partial = Vec::new();
        for b in normal {
            if b.len() == span && b.iter().enumerate().all(|(i, e)| e.0 == i) {
                full.insert(b.iter().map(|e| e.1).collect());
            } else {
                partial.push(b);
            }
        }
        let memory = span - 1;
        let states = symbols.pow(memory as u32);
        let mut edges = Vec::new();
        let mut window = vec![0 as Symbol; span];
        for q in 0..states {
            let mut code = q;
            for k in (0..memory).rev() {
                window[k] = (code % symbols) as Symbol;
                code /= symbols;
            }
            for a in 0..symbols {
                window[memory] = a as Symbol;
                let hit = full.contains(&window) || partial.iter().any(|b| {
                    let width = b.iter().map(|e| e.0 + 1).max().unwrap_or(1);
                    (0..=span - width).any(|s| b.iter().all(|&(o, v)| window[s + o] == v))
                });
                if hit {
                    continue;
                }
                let to = if memory == 0 { 0 } else { (q * symbols + a) % states };
                edges.push((q, a as Symbol, to));
            }
        }
        Self::from_edges(states, symbols, &edges)
    }

    /// Runs of `0` between consecutive `1`s have even length.
    pub fn even() -> Self {
        Self::from_edges(2, 2, &[(0, 1, 0), (0, 0, 1), (1, 0, 0)])
    }

    /// Keeps only vertices that lie on a bi-infinite path.
    fn trimmed(self) -> Self {
        let n = self.states;
        let mut alive = vec![true; n];
        loop {
            let mut has_in = vec![false; n];
            let mut has_out = vec![false; n];
            for q in (0..n).filter(|&q| alive[q]) {
                for targets in &self.next[q] {
                    for &t in targets.iter().filter(|&&t| alive[t]) {
                        has_out[q] = true;
                        has_in[t] = true;
                    }
                }
            }
            let mut changed = false;
            for q in 0..n {
                if alive[q] && !(has_in[q] && has_out[q]) {
                    alive[q] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut renumber = vec![usize::MAX; n];
        let mut k = 0;
        for q in 0..n {
            if alive[q] {
                renumber[q] = k;
                k += 1;
            }
        }
        let next = (0..n)
            .filter(|&q| alive[q])
            .map(|q| {
                self.next[q]
                    .iter()
                    .map(|ts| ts.iter().filter(|&&t| alive[t]).map(|&t| renumber[t]).collect())
                    .collect()
            })
            .collect();
        LineAutomaton {
            states: k,
            symbols: self.symbols,
            next,
        }
    }

    pub fn states(&self) -> usize {
        self.states
    }
    pub fn symbols(&self) -> usize {
        self.symbols
    }
    pub fn is_empty(&self) -> bool {
        self.states == 0
    }
    /// At most one edge per label leaves each vertex.
    pub fn is_deterministic(&self) -> bool {
        self.next.iter().all(|row| row.iter().all(|ts| ts.len() <= 1))
    }

    pub fn all_states(&self) -> StateSet {
        StateSet::full(self.states)
    }

    pub fn step(&self, s: &StateSet, a: Symbol) -> StateSet {
        let mut out = StateSet::empty(self.states);
        for q in (0..self.states).filter(|&q| s.contains(q)) {
            for &t in &self.next[q][a as usize] {
                out.insert(t);
            }
        }
        out
    }

    pub fn step_any(&self, s: &StateSet) -> StateSet {
        let mut out = StateSet::empty(self.states);
        for q in (0..self.states).filter(|&q| s.contains(q)) {
            for ts in &self.next[q] {
                for &t in ts {
                    out.insert(t);
                }
            }
        }
        out
    }

    /// Whether the partial word (sorted coordinates, with symbols) is allowed.
    pub fn accepts(&self, word: &[(i64, Symbol)]) -> bool {
        if self.is_empty() {
            return false;
        }
        let mut s = self.all_states();
        let mut prev: Option<i64> = None;
        for &(z, a) in word {
            if let Some(p) = prev {
                for _ in p + 1..z {
                    s = self.step_any(&s);
                }
            }
            s = self.step(&s, a);
            if s.is_empty() {
                return false;
            }
            prev = Some(z);
        }
        true
    }

    /// Number of allowed assignments to the given sorted coordinates.
    pub fn count(&self, coords: &[i64]) -> BigUint {
        if self.is_empty() {
            return BigUint::zero();
        }
        let mut layer: HashMap<StateSet, BigUint> = HashMap::from([(self.all_states(), BigUint::one())]);
        let mut prev: Option<i64> = None;
        for &z in coords {
            let gap = prev.map_or(0, |p| z - p - 1);
            let mut next: HashMap<StateSet, BigUint> = HashMap::new();
            for (set, c) in layer {
                let mut s = set;
                for _ in 0..gap {
                    s = self.step_any(&s);
                }
                for a in 0..self.symbols as Symbol {
                    let t = self.step(&s, a);
                    if !t.is_empty() {
                        *next.entry(t).or_insert_with(BigUint::zero) += &c;
                    }
                }
            }
            layer = next;
            prev = Some(z);
        }
        layer.into_values().sum()
    }

    /// All allowed assignments to the sorted coordinates, as value lists in coordinate order.
    pub fn enumerate(&self, coords: &[i64]) -> Vec<Vec<Symbol>> {
        let mut out = Vec::new();
        if self.is_empty() {
            return out;
        }
        let mut current = Vec::with_capacity(coords.len());
        self.enumerate_rec(coords, 0, self.all_states(), &mut current, &mut out);
        out
    }

    fn enumerate_rec(
        &self,
        coords: &[i64],
        i: usize,
        state: StateSet,
        current: &mut Vec<Symbol>,
        out: &mut Vec<Vec<Symbol>>,
    ) {
        if i == coords.len() {
            out.push(current.clone());
            return;
        }
        let mut s = state;
        if i > 0 {
            for _ in coords[i - 1] + 1..coords[i] {
                s = self.step_any(&s);
            }
        }
        for a in 0..self.symbols as Symbol {
            let t = self.step(&s, a);
            if !t.is_empty() {
                current.push(a);
                self.enumerate_rec(coords, i + 1, t, current, out);
                current.pop();
            }
        }
    }

    /// Whether the periodic configuration `…www…` labels a bi-infinite path.
    pub fn accepts_periodic(&self, word: &[Symbol]) -> bool {
        if self.is_empty() || word.is_empty() {
            return false;
        }
        let mut s = self.all_states();
        loop {
            let mut t = s.clone();
            for &a in word {
                t = self.step(&t, a);
            }
            if t.is_empty() {
                return false;
            }
            if t == s {
                return true;
            }
            s = t;
        }
    }

    /// Largest eigenvalue of the adjacency matrix, `None` for the empty graph.
    ///
    /// Computed per strongly connected component with power iteration on `A + I`,
    /// which is primitive on each component; stops when the Collatz-Wielandt
    /// bounds are within `tol`.
    pub fn perron_root(&self, tol: f64) -> Option<f64> {
        if self.is_empty() {
            return None;
        }
        let mut best = 0.0f64;
        for comp in self.components() {
            let idx: HashMap<usize, usize> = comp.iter().enumerate().map(|(i, &q)| (q, i)).collect();
            let k = comp.len();
            let mut a = vec![vec![0.0f64; k]; k];
            for (i, &q) in comp.iter().enumerate() {
                for ts in &self.next[q] {
                    for t in ts {
                        if let Some(&j) = idx.get(t) {
                            a[i][j] += 1.0;
                        }
                    }
                }
            }
            if a.iter().all(|row| row.iter().all(|&x| x == 0.0)) {
                continue;
            }
            best = best.max(power_iteration(&a, tol));
        }
        Some(best)
    }

    /// Strongly connected components (Kosaraju).
    fn components(&self) -> Vec<Vec<usize>> {
        let n = self.states;
        let succ: Vec<Vec<usize>> = (0..n)
            .map(|q| {
                let mut v: Vec<usize> = self.next[q].iter().flatten().copied().collect();
                v.sort_unstable();
                v.dedup();
                v
            })
            .collect();
        let mut pred = vec![Vec::new(); n];
        for (q, ts) in succ.iter().enumerate() {
            for &t in ts {
                pred[t].push(q);
            }
        }
        let mut seen = vec![false; n];
        let mut order = Vec::with_capacity(n);
        for root in 0..n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut stack = vec![(root, 0usize)];
            while let Some((q, i)) = stack.pop() {
                if i < succ[q].len() {
                    stack.push((q, i + 1));
                    let t = succ[q][i];
                    if !seen[t] {
                        seen[t] = true;
                        stack.push((t, 0));
                    }
                } else {
                    order.push(q);
                }
            }
        }
        let mut comp_of = vec![usize::MAX; n];
        let mut comps = Vec::new();
        for &root in order.iter().rev() {
            if comp_of[root] != usize::MAX {
                continue;
            }
            let c = comps.len();
            let mut members = vec![root];
            comp_of[root] = c;
            let mut i = 0;
            while i < members.len() {
                let q = members[i];
                for &p in &pred[q] {
                    if comp_of[p] == usize::MAX {
                        comp_of[p] = c;
                        members.push(p);
                    }
                }
                i += 1;
            }
            members.sort_unstable();
            comps.push(members);
        }
        comps
    }
}

/// Spectral radius of an irreducible non-negative matrix.
fn power_iteration(a: &[Vec<f64>], tol: f64) -> f64 {
    let k = a.len();
    let mut x = vec![1.0f64; k];
    for _ in 0..1_000_000 {
        let y: Vec<f64> = (0..k)
            .map(|i| x[i] + (0..k).map(|j| a[i][j] * x[j]).sum::<f64>())
            .collect();
        let ratios = y.iter().zip(&x).map(|(p, q)| p / q);
        let (lo, hi) = ratios.fold((f64::INFINITY, 0.0f64), |(lo, hi), r| (lo.min(r), hi.max(r)));
        if hi - lo <= tol {
            return (lo + hi) / 2.0 - 1.0;
        }
        let norm = y.iter().cloned().fold(0.0, f64::max);
        x = y.into_iter().map(|v| v / norm).collect();
    }
    panic!("power iteration did not converge")
}
