//! Local rules and the maps they induce between subshifts.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use thiserror::Error;

use crate::cellspace::{ball, closure, interior, stabiliser_orbit, Cell, CellSet, Space, SpaceError};
use crate::pattern::{Exactness, Pattern, PatternSet, Symbol};
use crate::subshift::{Cert, SubshiftError, SubshiftSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Subshift(#[from] SubshiftError),
    #[error("neighbourhood cell {0} lies outside the ball of radius kappa")]
    OutsideBall(String),
    #[error("no table entry for neighbourhood pattern {0:?}")]
    MissingEntry(Vec<Symbol>),
    #[error("rule is not invariant under stabiliser element {element}: {pattern:?} and its image differ")]
    NotInvariant { element: usize, pattern: Vec<Symbol> },
    #[error("output symbol {0} is outside the codomain alphabet")]
    OutputOutOfRange(Symbol),
    #[error("input pattern is not admissible in the domain")]
    InadmissibleInput,
    #[error("maps do not compose: {0}")]
    Incompatible(String),
}

/// `δ` on neighbourhood patterns, keyed by values in the neighbourhood's canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalRule {
    pub kappa: usize,
    pub neighbourhood: CellSet,
    pub table: HashMap<Vec<Symbol>, Symbol>,
    pub default: Option<Symbol>,
}

impl LocalRule {
    pub fn new(
        space: &dyn Space,
        kappa: usize,
        neighbourhood: CellSet,
        table: HashMap<Vec<Symbol>, Symbol>,
        default: Option<Symbol>,
    ) -> Result<Self, MapError> {
        let o = space.origin();
        if let Some(c) = neighbourhood.iter().find(|c| space.distance(&o, c) > kappa) {
            return Err(MapError::OutsideBall(space.format_cell(c)));
        }
        Ok(LocalRule {
            kappa,
            neighbourhood,
            table,
            default,
        })
    }

    /// Builds a rule whose table keys list values in the order of `cells`.
    pub fn from_listed(
        space: &dyn Space,
        kappa: usize,
        cells: &[Cell],
        entries: &[(Vec<Symbol>, Symbol)],
        default: Option<Symbol>,
    ) -> Result<Self, MapError> {
        let neighbourhood = CellSet::new(space, cells.iter().cloned());
        let slot: Vec<usize> = cells.iter().map(|c| neighbourhood.index_of(c).unwrap()).collect();
        let mut table = HashMap::new();
        for (listed, out) in entries {
            let mut key = vec![0; neighbourhood.len()];
            for (k, &v) in listed.iter().enumerate() {
                key[slot[k]] = v;
            }
            table.insert(key, *out);
        }
        Self::new(space, kappa, neighbourhood, table, default)
    }

    /// A total rule given by a function of the neighbourhood values in canonical order.
    pub fn from_fn(
        space: &dyn Space,
        kappa: usize,
        neighbourhood: CellSet,
        symbols: usize,
        f: impl Fn(&[Symbol]) -> Symbol,
    ) -> Result<Self, MapError> {
        let n = neighbourhood.len();
        let mut table = HashMap::new();
        let mut key = vec![0 as Symbol; n];
        loop {
            table.insert(key.clone(), f(&key));
            let Some(i) = (0..n).rev().find(|&i| (key[i] as usize) + 1 < symbols) else { break };
            key[i] += 1;
            for v in key.iter_mut().skip(i + 1) {
                *v = 0;
            }
        }
        Self::new(space, kappa, neighbourhood, table, None)
    }

    pub fn eval(&self, local: &[Symbol]) -> Result<Symbol, MapError> {
        self.table
            .get(local)
            .copied()
            .or(self.default)
            .ok_or_else(|| MapError::MissingEntry(local.to_vec()))
    }

    /// Table entries in key order.
    pub fn entries(&self) -> Vec<(Vec<Symbol>, Symbol)> {
        let mut v: Vec<_> = self.table.iter().map(|(k, &o)| (k.clone(), o)).collect();
        v.sort();
        v
    }
}

/// A rule together with the shifts it maps between.
#[derive(Clone, Debug)]
pub struct LocalMap {
    pub name: String,
    pub rule: LocalRule,
    pub domain: Arc<SubshiftSpec>,
    pub codomain: Arc<SubshiftSpec>,
}

impl LocalMap {
    pub fn new(
        name: impl Into<String>,
        rule: LocalRule,
        domain: Arc<SubshiftSpec>,
        codomain: Arc<SubshiftSpec>,
    ) -> Result<Self, MapError> {
        if domain.space.name() != codomain.space.name() {
            return Err(MapError::Incompatible("domain and codomain live on different spaces".into()));
        }
        let q = codomain.alphabet.len();
        if let Some(&bad) = rule.table.values().chain(rule.default.iter()).find(|&&v| v as usize >= q) {
            return Err(MapError::OutputOutOfRange(bad));
        }
        Ok(LocalMap {
            name: name.into(),
            rule,
            domain,
            codomain,
        })
    }

    pub fn space(&self) -> &dyn Space {
        self.domain.space.as_ref()
    }

    pub fn kappa(&self) -> usize {
        self.rule.kappa
    }

    /// Value of the image at `m`, read from `p`; `None` if `m ⊳ N` leaves the domain of `p`.
    pub fn value_at(&self, p: &Pattern, m: &Cell) -> Option<Result<Symbol, MapError>> {
        let space = self.space();
        let local: Option<Vec<Symbol>> = self
            .rule
            .neighbourhood
            .iter()
            .map(|n| p.get(&space.translate(m, n)))
            .collect();
        local.map(|l| self.rule.eval(&l))
    }

    fn apply_on(&self, p: &Pattern, targets: &CellSet) -> Result<Pattern, MapError> {
        let mut out = Vec::with_capacity(targets.len());
        for m in targets.iter() {
            match self.value_at(p, m) {
                Some(v) => out.push(v?),
                None => return Err(MapError::Incompatible("neighbourhood leaves the pattern".into())),
            }
        }
        Ok(Pattern::new(Arc::new(targets.clone()), out).expect("sized"))
    }

    /// Cells of `A` whose translated neighbourhood lies inside `A`.
    pub fn fit_domain(&self, a: &CellSet) -> CellSet {
        let space = self.space();
        a.filter(|m| self.rule.neighbourhood.iter().all(|n| a.contains(&space.translate(m, n))))
    }

    /// `Δ_A⁻(p)`: the image on `A^{−κ}`, for `p` locally admissible on `A`.
    pub fn apply_windowed(&self, p: &Pattern) -> Result<Pattern, MapError> {
        if !self.domain.locally_admissible(p) {
            return Err(MapError::InadmissibleInput);
        }
        self.apply_on(p, &interior(self.space(), p.domain(), self.kappa()))
    }

    /// The image at every cell where the neighbourhood fits inside the domain of `p`,
    /// a superset of `A^{−κ}`.
    pub fn apply_sliding(&self, p: &Pattern) -> Result<Pattern, MapError> {
        if !self.domain.locally_admissible(p) {
            return Err(MapError::InadmissibleInput);
        }
        self.apply_on(p, &self.fit_domain(p.domain()))
    }

    /// Image without the admissibility check; used on patterns already known to be allowed.
    pub(crate) fn apply_unchecked(&self, p: &Pattern, targets: &CellSet) -> Result<Pattern, MapError> {
        self.apply_on(p, targets)
    }

    /// `{Δ_{F^{+κ}}⁻(p)↾F : p ∈ X_{F^{+κ}}}`, the patterns of the image on `F`.
    pub fn image_patterns(&self, f: &CellSet, cert: Cert) -> Result<PatternSet, MapError> {
        let outer = closure(self.space(), f, self.kappa());
        let source = self.domain.enumerate(&outer, cert);
        let mut seen = BTreeSet::new();
        for p in source.patterns() {
            seen.insert(self.apply_on(&p, f)?.values().to_vec());
        }
        Ok(PatternSet {
            domain: Arc::new(f.clone()),
            members: seen.into_iter().collect(),
            exactness: source.exactness,
        })
    }

    /// Checks the neighbourhood, totality on `X_N` and stabiliser invariance of the rule.
    pub fn validate(&self, cert: Cert) -> Result<Exactness, MapError> {
        let space = self.space();
        let n = &self.rule.neighbourhood;
        let o = space.origin();
        if let Some(c) = n.iter().find(|c| space.distance(&o, c) > self.kappa()) {
            return Err(MapError::OutsideBall(space.format_cell(c)));
        }
        let perms = stabiliser_orbit(space, n)?;
        let local = self.domain.enumerate(n, cert);
        for l in &local.members {
            let out = self.rule.eval(l)?;
            for (h, perm) in perms.iter().enumerate().skip(1) {
                let mut rotated = vec![0; l.len()];
                for (i, &j) in perm.iter().enumerate() {
                    rotated[j] = l[i];
                }
                if self.rule.eval(&rotated)? != out {
                    return Err(MapError::NotInvariant {
                        element: h,
                        pattern: l.clone(),
                    });
                }
            }
        }
        Ok(local.exactness)
    }

    /// `Δ₂ ∘ Δ₁` with neighbourhood `{n₂ ⊳ n₁}` and radius `κ₁ + κ₂`; the table covers `X_N`.
    pub fn compose(&self, then: &LocalMap, cert: Cert) -> Result<LocalMap, MapError> {
        if self.codomain.alphabet != then.domain.alphabet || self.space().name() != then.space().name() {
            return Err(MapError::Incompatible(format!("{} then {}", self.name, then.name)));
        }
        let space = self.space();
        let cells = then
            .rule
            .neighbourhood
            .iter()
            .flat_map(|n2| self.rule.neighbourhood.iter().map(move |n1| space.translate(n2, n1)));
        let n = CellSet::new(space, cells);
        let kappa = self.kappa() + then.kappa();
        let inner = then.rule.neighbourhood.clone();
        let mut table = HashMap::new();
        for l in self.domain.enumerate(&n, cert).patterns() {
            let mid = self.apply_on(&l, &inner)?;
            let relabelled = Pattern::new(Arc::new(then.rule.neighbourhood.clone()), mid.values().to_vec()).unwrap();
            if let Ok(v) = then.rule.eval(relabelled.values()) {
                table.insert(l.values().to_vec(), v);
            }
        }
        let rule = LocalRule::new(space, kappa, n, table, None)?;
        LocalMap::new(format!("{}>{}", self.name, then.name), rule, self.domain.clone(), then.codomain.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConjugacyVerdict {
    Passes { radius: usize, exactness: Exactness },
    /// `forward` is true when `inverse ∘ map` failed to restore a domain pattern.
    Fails { forward: bool, pattern: Pattern },
}

/// Checks that `inverse ∘ map` and `map ∘ inverse` act as the identity on every allowed pattern
/// of the balls of radius up to `radius + κ₁ + κ₂`, restricted to where both images are defined.
pub fn check_conjugacy_pair(map: &LocalMap, inverse: &LocalMap, radius: usize, cert: Cert) -> ConjugacyVerdict {
    let space = map.space();
    let o = space.origin();
    let total = map.kappa() + inverse.kappa();
    let mut exactness = Exactness::Exact;
    for (forward, first, second) in [(true, map, inverse), (false, inverse, map)] {
        for r in total..=radius + total {
            let w = ball(space, &o, r);
            let mid_dom = interior(space, &w, first.kappa());
            let end_dom = interior(space, &mid_dom, second.kappa());
            let set = first.domain.enumerate(&w, cert);
            exactness = exactness.meet(set.exactness);
            for p in set.patterns() {
                let back = first
                    .apply_unchecked(&p, &mid_dom)
                    .and_then(|q| second.apply_unchecked(&q, &end_dom));
                let restored = match back {
                    Ok(b) => p.restrict(&end_dom).is_some_and(|orig| orig == b),
                    Err(_) => false,
                };
                if !restored {
                    return ConjugacyVerdict::Fails { forward, pattern: p };
                }
            }
        }
    }
    ConjugacyVerdict::Passes { radius, exactness }
}

/// Built-in rules, each with its natural domain and codomain on `space`:
/// `golden_to_even`, `identity`, `bit_flip`, `constant0`, `xor`, `and`, `majority`,
/// `dinf_symmetric_rule` and `shift_left`.
pub fn named_map(name: &str, space: crate::cellspace::SpaceRef) -> Result<LocalMap, MapError> {
    let sp = space.as_ref();
    let o = sp.origin();
    let plus = sp.step(&o, 0);
    let minus = sp.step(&o, 1);
    let full = || SubshiftSpec::named("full", space.clone()).map(Arc::new);
    let pair = CellSet::new(sp, [o.clone(), plus.clone()]);
    let triple = CellSet::new(sp, [minus.clone(), o.clone(), plus.clone()]);
    let single = CellSet::new(sp, [o.clone()]);
    let at = |n: &CellSet, c: &Cell| n.index_of(c).unwrap();
    let (ip, io) = (at(&pair, &plus), at(&pair, &o));
    let (tm, to, tp) = (at(&triple, &minus), at(&triple, &o), at(&triple, &plus));
    let map = |rule: LocalRule, d: Arc<SubshiftSpec>, c: Arc<SubshiftSpec>| LocalMap::new(name, rule, d, c);
    match name {
        "golden_to_even" => {
            let rule = LocalRule::from_listed(sp, 1, &[o.clone(), plus], &[(vec![0, 0], 1), (vec![0, 1], 0), (vec![1, 0], 0)], None)?;
            let d = Arc::new(SubshiftSpec::named("golden_mean", space.clone())?);
            let c = Arc::new(SubshiftSpec::named("even", space.clone())?);
            map(rule, d, c)
        }
        "identity" => map(LocalRule::from_fn(sp, 0, single, 2, |l| l[0])?, full()?, full()?),
        "bit_flip" => map(LocalRule::from_fn(sp, 0, single, 2, |l| 1 - l[0])?, full()?, full()?),
        "constant0" => map(LocalRule::from_fn(sp, 0, single, 2, |_| 0)?, full()?, full()?),
        "shift_left" => {
            let n = CellSet::new(sp, [plus]);
            map(LocalRule::from_fn(sp, 1, n, 2, |l| l[0])?, full()?, full()?)
        }
        "xor" => map(LocalRule::from_fn(sp, 1, pair, 2, |l| l[io] ^ l[ip])?, full()?, full()?),
        "and" => map(LocalRule::from_fn(sp, 1, pair, 2, |l| l[io] & l[ip])?, full()?, full()?),
        "majority" => {
            let rule = LocalRule::from_fn(sp, 1, triple, 2, |l| u8::from(l[tm] + l[to] + l[tp] >= 2))?;
            let d = Arc::new(SubshiftSpec::named("golden_mean", space.clone())?);
            map(rule, d, full()?)
        }
        "dinf_symmetric_rule" => map(LocalRule::from_fn(sp, 1, triple, 2, |l| l[tm] ^ l[to] ^ l[tp])?, full()?, full()?),
        _ => Err(MapError::Incompatible(format!("unknown rule `{name}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cellspace::{parse_space, Dihedral, IntLine};

    fn z() -> crate::cellspace::SpaceRef {
        parse_space("Z").unwrap()
    }

    fn word(p: &Pattern) -> (i64, Vec<u8>) {
        let w = p.line_word(&IntLine);
        (w[0].0, w.iter().map(|e| e.1).collect())
    }

    /// Direct table application on a word: output `i` reads `w[i..i+2]`.
    fn slide(w: &[u8]) -> Vec<u8> {
        w.windows(2)
            .map(|x| match (x[0], x[1]) {
                (0, 0) => 1,
                _ => 0,
            })
            .collect()
    }

    #[test]
    fn golden_to_even_on_windows() {
        let m = named_map("golden_to_even", z()).unwrap();
        let p = Pattern::on_interval(&IntLine, 0, &[0, 1, 0, 1, 0]);
        assert_eq!(word(&m.apply_sliding(&p).unwrap()), (0, vec![0, 0, 0, 0]));
        assert_eq!(word(&m.apply_windowed(&p).unwrap()), (1, vec![0, 0, 0]));
        let p = Pattern::on_interval(&IntLine, 0, &[0, 0, 0]);
        assert_eq!(word(&m.apply_sliding(&p).unwrap()), (0, vec![1, 1]));
        let bad = Pattern::on_interval(&IntLine, 0, &[1, 1, 0]);
        assert_eq!(m.apply_sliding(&bad), Err(MapError::InadmissibleInput));
        assert_eq!(slide(&[0, 1, 0, 1, 0]), vec![0, 0, 0, 0]);
    }

    #[test]
    fn validation() {
        let m = named_map("golden_to_even", z()).unwrap();
        assert_eq!(m.validate(Cert::Auto), Ok(Exactness::Exact));
        let d = parse_space("Dinf").unwrap();
        let sym = named_map("dinf_symmetric_rule", d.clone()).unwrap();
        assert!(sym.validate(Cert::Auto).is_ok());
        // depends on the left neighbour only
        let n = CellSet::new(&Dihedral, [Cell::Int(-1), Cell::Int(0), Cell::Int(1)]);
        let left = n.index_of(&Cell::Int(-1)).unwrap();
        let rule = LocalRule::from_fn(&Dihedral, 1, n, 2, move |l| l[left]).unwrap();
        let full = Arc::new(SubshiftSpec::named("full", d).unwrap());
        let lopsided = LocalMap::new("left", rule, full.clone(), full).unwrap();
        assert!(matches!(lopsided.validate(Cert::Auto), Err(MapError::NotInvariant { element: 1, .. })));
        // a neighbourhood the reflection does not preserve
        let n = CellSet::new(&Dihedral, [Cell::Int(0), Cell::Int(1)]);
        let rule = LocalRule::from_fn(&Dihedral, 1, n, 2, |l| l[0]).unwrap();
        let sp = parse_space("Dinf").unwrap();
        let f = Arc::new(SubshiftSpec::named("full", sp).unwrap());
        let m = LocalMap::new("half", rule, f.clone(), f).unwrap();
        assert!(matches!(m.validate(Cert::Auto), Err(MapError::Space(SpaceError::InvalidNeighbourhood { .. }))));
        assert!(matches!(
            LocalRule::new(&IntLine, 0, CellSet::new(&IntLine, [Cell::Int(1)]), HashMap::new(), None),
            Err(MapError::OutsideBall(_))
        ));
    }

    #[test]
    fn image_on_three_cells_is_the_even_shift() {
        let m = named_map("golden_to_even", z()).unwrap();
        let f = CellSet::new(&IntLine, (0..3).map(Cell::Int));
        let img = m.image_patterns(&f, Cert::Auto).unwrap();
        let even = m.codomain.enumerate(&f, Cert::Auto);
        assert_eq!(img, even);
        assert_eq!(img.len(), 7);
    }

    #[test]
    fn conjugacy_pairs() {
        let id = named_map("identity", z()).unwrap();
        let flip = named_map("bit_flip", z()).unwrap();
        assert!(matches!(check_conjugacy_pair(&id, &id, 3, Cert::Auto), ConjugacyVerdict::Passes { .. }));
        assert!(matches!(check_conjugacy_pair(&flip, &flip, 3, Cert::Auto), ConjugacyVerdict::Passes { .. }));
        let shift = named_map("shift_left", z()).unwrap();
        assert!(matches!(check_conjugacy_pair(&id, &shift, 2, Cert::Auto), ConjugacyVerdict::Fails { .. }));
        let m = named_map("golden_to_even", z()).unwrap();
        let even = m.codomain.clone();
        let golden = m.domain.clone();
        for candidate in ["identity", "bit_flip", "constant0"] {
            let base = named_map(candidate, z()).unwrap();
            let inv = LocalMap::new(candidate, base.rule, even.clone(), golden.clone()).unwrap();
            assert!(matches!(check_conjugacy_pair(&m, &inv, 3, Cert::Auto), ConjugacyVerdict::Fails { .. }));
        }
    }

    #[test]
    fn composition_matches_sequential_application() {
        let xor = named_map("xor", z()).unwrap();
        let and = named_map("and", z()).unwrap();
        let both = xor.compose(&and, Cert::Auto).unwrap();
        assert_eq!(both.kappa(), 2);
        let p = Pattern::on_interval(&IntLine, 0, &[0, 1, 1, 0, 1, 0, 0, 1]);
        let step = and.apply_sliding(&xor.apply_sliding(&p).unwrap()).unwrap();
        assert_eq!(both.apply_sliding(&p).unwrap(), step);
    }
}
