use super::{Cell, Space, SpaceError};

fn parse_int(s: &str) -> Option<i64> {
    let t = s.trim();
    let t = t.strip_prefix('+').unwrap_or(t);
    t.parse().ok()
}

/// The integers acting on themselves by translation.
#[derive(Debug, Clone, Copy, Default)]
pub struct IntLine;

impl Space for IntLine {
    fn name(&self) -> String {
        "Z".into()
    }
    fn origin(&self) -> Cell {
        Cell::Int(0)
    }
    fn generator_labels(&self) -> Vec<String> {
        vec!["+1".into(), "-1".into()]
    }
    fn generator_cell(&self, s: usize) -> Cell {
        Cell::Int(if s == 0 { 1 } else { -1 })
    }
    fn translate(&self, m: &Cell, a: &Cell) -> Cell {
        Cell::Int(m.int() + a.int())
    }
    fn distance(&self, a: &Cell, b: &Cell) -> usize {
        (a.int() - b.int()).unsigned_abs() as usize
    }
    fn geodesic_word(&self, m: &Cell) -> Vec<u8> {
        let z = m.int();
        vec![if z >= 0 { 0 } else { 1 }; z.unsigned_abs() as usize]
    }
    fn parse_cell_literal(&self, s: &str) -> Option<Cell> {
        parse_int(s).map(Cell::Int)
    }
    fn format_cell(&self, m: &Cell) -> String {
        m.int().to_string()
    }
    fn contains(&self, m: &Cell) -> bool {
        matches!(m, Cell::Int(_))
    }
    fn line_coordinate(&self, m: &Cell) -> Option<i64> {
        Some(m.int())
    }
    fn ball_size(&self, radius: usize) -> Option<u128> {
        Some(2 * radius as u128 + 1)
    }
}

/// The infinite dihedral group acting on the integers; the origin is fixed by the reflection.
#[derive(Debug, Clone, Copy, Default)]
pub struct Dihedral;

impl Space for Dihedral {
    fn name(&self) -> String {
        "Dinf".into()
    }
    fn origin(&self) -> Cell {
        Cell::Int(0)
    }
    fn generator_labels(&self) -> Vec<String> {
        vec!["+1".into(), "-1".into()]
    }
    fn generator_cell(&self, s: usize) -> Cell {
        Cell::Int(if s == 0 { 1 } else { -1 })
    }
    fn translate(&self, m: &Cell, a: &Cell) -> Cell {
        Cell::Int(m.int() + a.int())
    }
    fn stabiliser_order(&self) -> usize {
        2
    }
    fn stabilise(&self, h: usize, a: &Cell) -> Cell {
        if h == 0 {
            a.clone()
        } else {
            Cell::Int(-a.int())
        }
    }
    fn distance(&self, a: &Cell, b: &Cell) -> usize {
        (a.int() - b.int()).unsigned_abs() as usize
    }
    fn geodesic_word(&self, m: &Cell) -> Vec<u8> {
        IntLine.geodesic_word(m)
    }
    fn parse_cell_literal(&self, s: &str) -> Option<Cell> {
        parse_int(s).map(Cell::Int)
    }
    fn format_cell(&self, m: &Cell) -> String {
        m.int().to_string()
    }
    fn contains(&self, m: &Cell) -> bool {
        matches!(m, Cell::Int(_))
    }
    fn line_coordinate(&self, m: &Cell) -> Option<i64> {
        Some(m.int())
    }
    fn ball_size(&self, radius: usize) -> Option<u128> {
        Some(2 * radius as u128 + 1)
    }
}

/// The square lattice with the four unit steps.
#[derive(Debug, Clone, Copy, Default)]
pub struct Grid;

impl Space for Grid {
    fn name(&self) -> String {
        "Z2".into()
    }
    fn origin(&self) -> Cell {
        Cell::Pair(0, 0)
    }
    fn generator_labels(&self) -> Vec<String> {
        vec!["+x".into(), "-x".into(), "+y".into(), "-y".into()]
    }
    fn generator_cell(&self, s: usize) -> Cell {
        match s {
            0 => Cell::Pair(1, 0),
            1 => Cell::Pair(-1, 0),
            2 => Cell::Pair(0, 1),
            _ => Cell::Pair(0, -1),
        }
    }
    fn translate(&self, m: &Cell, a: &Cell) -> Cell {
        let (x, y) = m.pair();
        let (u, v) = a.pair();
        Cell::Pair(x + u, y + v)
    }
    fn distance(&self, a: &Cell, b: &Cell) -> usize {
        let (x, y) = a.pair();
        let (u, v) = b.pair();
        ((x - u).unsigned_abs() + (y - v).unsigned_abs()) as usize
    }
    fn geodesic_word(&self, m: &Cell) -> Vec<u8> {
        let (x, y) = m.pair();
        let mut w = vec![if x >= 0 { 0 } else { 1 }; x.unsigned_abs() as usize];
        w.extend(std::iter::repeat(if y >= 0 { 2 } else { 3 }).take(y.unsigned_abs() as usize));
        w
    }
    fn parse_cell_literal(&self, s: &str) -> Option<Cell> {
        let t = s.trim();
        let t = t.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(t);
        let (a, b) = t.split_once(',')?;
        Some(Cell::Pair(parse_int(a)?, parse_int(b)?))
    }
    fn format_cell(&self, m: &Cell) -> String {
        let (x, y) = m.pair();
        format!("({x},{y})")
    }
    fn contains(&self, m: &Cell) -> bool {
        matches!(m, Cell::Pair(..))
    }
    fn ball_size(&self, radius: usize) -> Option<u128> {
        let r = radius as u128;
        Some(2 * r * r + 2 * r + 1)
    }
}

/// The free group on `k` letters acting on itself; cells are reduced words.
///
/// Letter `2i` is the `i`-th generator, `2i + 1` its inverse.
#[derive(Debug, Clone, Copy)]
pub struct FreeGroup {
    pub rank: usize,
}

impl FreeGroup {
    pub fn new(rank: usize) -> Result<Self, SpaceError> {
        if rank == 0 || rank > 26 {
            return Err(SpaceError::UnknownSpace(format!("free:{rank}")));
        }
        Ok(FreeGroup { rank })
    }

    fn letter(g: u8) -> char {
        let c = (b'a' + g / 2) as char;
        if g % 2 == 0 {
            c
        } else {
            c.to_ascii_uppercase()
        }
    }

    fn reduce_into(out: &mut Vec<u8>, tail: &[u8]) {
        for &g in tail {
            if out.last() == Some(&(g ^ 1)) {
                out.pop();
            } else {
                out.push(g);
            }
        }
    }
}

impl Space for FreeGroup {
    fn name(&self) -> String {
        format!("free:{}", self.rank)
    }
    fn origin(&self) -> Cell {
        Cell::Word(Vec::new())
    }
    fn generator_labels(&self) -> Vec<String> {
        (0..2 * self.rank as u8).map(|g| Self::letter(g).to_string()).collect()
    }
    fn generator_cell(&self, s: usize) -> Cell {
        Cell::Word(vec![s as u8])
    }
    fn translate(&self, m: &Cell, a: &Cell) -> Cell {
        let mut w = m.word().to_vec();
        Self::reduce_into(&mut w, a.word());
        Cell::Word(w)
    }
    fn distance(&self, a: &Cell, b: &Cell) -> usize {
        let mut w: Vec<u8> = a.word().iter().rev().map(|g| g ^ 1).collect();
        Self::reduce_into(&mut w, b.word());
        w.len()
    }
    fn geodesic_word(&self, m: &Cell) -> Vec<u8> {
        m.word().to_vec()
    }
    fn parse_cell_literal(&self, s: &str) -> Option<Cell> {
        let t = s.trim();
        if t == "e" || t.is_empty() {
            return Some(self.origin());
        }
        if t.contains('.') {
            return None;
        }
        let mut w = Vec::new();
        for c in t.chars() {
            let lower = c.to_ascii_lowercase();
            if !lower.is_ascii_lowercase() {
                return None;
            }
            let i = (lower as u8 - b'a') as usize;
            if i >= self.rank {
                return None;
            }
            let g = (2 * i + usize::from(c.is_ascii_uppercase())) as u8;
            Self::reduce_into(&mut w, &[g]);
        }
        Some(Cell::Word(w))
    }
    fn format_cell(&self, m: &Cell) -> String {
        if m.word().is_empty() {
            "e".into()
        } else {
            m.word().iter().map(|&g| Self::letter(g)).collect()
        }
    }
    fn contains(&self, m: &Cell) -> bool {
        match m {
            Cell::Word(w) => {
                w.iter().all(|&g| (g as usize) < 2 * self.rank)
                    && w.windows(2).all(|p| p[0] != p[1] ^ 1)
            }
            _ => false,
        }
    }
    fn is_amenable(&self) -> bool {
        self.rank == 1
    }
    fn ball_size(&self, radius: usize) -> Option<u128> {
        let k = self.rank as u128;
        if k == 1 {
            return Some(2 * radius as u128 + 1);
        }
        let mut total: u128 = 1;
        let mut sphere: u128 = 2 * k;
        for _ in 0..radius {
            total = total.checked_add(sphere)?;
            sphere = sphere.checked_mul(2 * k - 1)?;
        }
        Some(total)
    }
}

/// A cyclic group of order `n` acting on itself; the finite toy space.
#[derive(Debug, Clone, Copy)]
pub struct Cycle {
    pub order: usize,
}

impl Cycle {
    pub fn new(order: usize) -> Result<Self, SpaceError> {
        if order == 0 {
            return Err(SpaceError::UnknownSpace("cycle:0".into()));
        }
        Ok(Cycle { order })
    }
    fn wrap(&self, z: i64) -> i64 {
        z.rem_euclid(self.order as i64)
    }
}

impl Space for Cycle {
    fn name(&self) -> String {
        format!("cycle:{}", self.order)
    }
    fn origin(&self) -> Cell {
        Cell::Int(0)
    }
    fn generator_labels(&self) -> Vec<String> {
        vec!["+1".into(), "-1".into()]
    }
    fn generator_cell(&self, s: usize) -> Cell {
        Cell::Int(self.wrap(if s == 0 { 1 } else { -1 }))
    }
    fn translate(&self, m: &Cell, a: &Cell) -> Cell {
        Cell::Int(self.wrap(m.int() + a.int()))
    }
    fn distance(&self, a: &Cell, b: &Cell) -> usize {
        let d = self.wrap(a.int() - b.int()) as usize;
        d.min(self.order - d)
    }
    fn geodesic_word(&self, m: &Cell) -> Vec<u8> {
        let k = self.wrap(m.int()) as usize;
        if 2 * k <= self.order {
            vec![0; k]
        } else {
            vec![1; self.order - k]
        }
    }
    fn parse_cell_literal(&self, s: &str) -> Option<Cell> {
        parse_int(s).map(|z| Cell::Int(self.wrap(z)))
    }
    fn format_cell(&self, m: &Cell) -> String {
        m.int().to_string()
    }
    fn contains(&self, m: &Cell) -> bool {
        matches!(m, Cell::Int(z) if (0..self.order as i64).contains(z))
    }
    fn cell_count(&self) -> Option<usize> {
        Some(self.order)
    }
    fn ball_size(&self, radius: usize) -> Option<u128> {
        Some((2 * radius as u128 + 1).min(self.order as u128))
    }
}
