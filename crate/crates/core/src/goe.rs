//! Garden-of-Eden searches: patterns outside the image, mutually erasable patterns,
//! non-injectivity witnesses, gluing, exchange, and the experiment harness tying them together.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigUint;
use thiserror::Error;

use crate::cellspace::{all_cells, ball, closure, external_boundary, interior, set_distance, translate_set, Cell, CellSet};
use crate::entropy::{exact_entropy_1d, entropy_estimate, EntropyValue, FolnerPrefix, LogBase};
use crate::localmap::{LocalMap, MapError};
use crate::pattern::{shift_pattern, Exactness, Pattern, Symbol};
use crate::subshift::structure::{check_strong_irreducibility, segment, IrreducibilityVerdict};
use crate::subshift::{Cert, SubshiftSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GoeError {
    #[error("gluing precondition failed for {}: {reason}", piece_name(*.index))]
    Gluing { index: Option<usize>, reason: String },
    #[error("exchange precondition failed: {0}")]
    Exchange(String),
    #[error("exchange postcondition failed: {0}")]
    ExchangePost(String),
    #[error(transparent)]
    Map(#[from] MapError),
}

fn piece_name(index: Option<usize>) -> String {
    index.map_or_else(|| "the base pattern".into(), |i| format!("piece {i}"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SurjectivityVerdict {
    SurjectiveUpTo { rho: usize, exactness: Exactness },
    /// Allowed in the codomain on `ball(rho)`, never produced by the map.
    GardenOfEden { pattern: Pattern, rho: usize, exactness: Exactness },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PreInjectivityVerdict {
    PreInjectiveUpTo { r: usize, exactness: Exactness },
    /// Two patterns on `F^{+3κ}`, `F = ball(r)`, equal outside `F^{+κ}`, distinct, with equal images.
    Erasable { first: Pattern, second: Pattern, core: CellSet, r: usize, exactness: Exactness },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InjectivityVerdict {
    /// Two distinct points with the same image: periodic points shown on `[0, 4p)`
    /// (line spaces) or whole configurations (finite spaces).
    Witness { first: Pattern, second: Pattern, image: Pattern, period: Option<usize> },
    NoPeriodicWitness { period: usize },
    /// All points of a finite space have distinct images.
    Injective,
    Unsupported(String),
}

impl SurjectivityVerdict {
    pub fn is_surjective(&self) -> bool {
        matches!(self, SurjectivityVerdict::SurjectiveUpTo { .. })
    }
}

impl PreInjectivityVerdict {
    pub fn is_pre_injective(&self) -> bool {
        matches!(self, PreInjectivityVerdict::PreInjectiveUpTo { .. })
    }
}

/// For `ρ = 0..=ρ_max`, the first pattern of `Y_{ball(ρ)}` outside the image on `ball(ρ)`.
pub fn find_goe_pattern(map: &LocalMap, rho_max: usize, cert: Cert) -> Result<SurjectivityVerdict, MapError> {
    let space = map.space();
    let o = space.origin();
    let mut exactness = Exactness::Exact;
    for rho in 0..=rho_max {
        let f = ball(space, &o, rho);
        let target = map.codomain.enumerate(&f, cert);
        let image = map.image_patterns(&f, cert)?;
        exactness = exactness.meet(target.exactness).meet(image.exactness);
        let missing = target.patterns().find(|p| !image.contains(p.values()));
        if let Some(pattern) = missing {
            return Ok(SurjectivityVerdict::GardenOfEden { pattern, rho, exactness });
        }
    }
    Ok(SurjectivityVerdict::SurjectiveUpTo { rho: rho_max, exactness })
}

/// For `F = ball(r)`, `r = 0..=r_max`: two distinct patterns of `X_{F^{+3κ}}` equal on
/// `F^{+3κ} ∖ F^{+κ}` with equal images on `(F^{+3κ})^{−κ}`.
pub fn find_mutually_erasable(map: &LocalMap, r_max: usize, cert: Cert) -> Result<PreInjectivityVerdict, MapError> {
    let space = map.space();
    let o = space.origin();
    let k = map.kappa();
    let mut exactness = Exactness::Exact;
    for r in 0..=r_max {
        let core = ball(space, &o, r);
        let mid = closure(space, &core, k);
        let outer = closure(space, &core, 3 * k);
        let rim = outer.difference(&mid);
        let inner = interior(space, &outer, k);
        let rim_idx: Vec<usize> = rim.iter().map(|c| outer.index_of(c).unwrap()).collect();
        let set = map.domain.enumerate(&outer, cert);
        exactness = exactness.meet(set.exactness);
        let mut seen: HashMap<(Vec<Symbol>, Vec<Symbol>), usize> = HashMap::new();
        for (i, p) in set.patterns().enumerate() {
            let rim_vals: Vec<Symbol> = rim_idx.iter().map(|&j| p.values()[j]).collect();
            let img = map.apply_unchecked(&p, &inner)?.values().to_vec();
            if let Some(&j) = seen.get(&(rim_vals.clone(), img.clone())) {
                let first = Pattern::new(set.domain.clone(), set.members[j].clone()).unwrap();
                return Ok(PreInjectivityVerdict::Erasable {
                    first,
                    second: p,
                    core,
                    r,
                    exactness,
                });
            }
            seen.insert((rim_vals, img), i);
        }
    }
    Ok(PreInjectivityVerdict::PreInjectiveUpTo { r: r_max, exactness })
}

/// Searches periodic points of period `≤ max_period` on line spaces, or all points on finite
/// spaces, for two with the same image.
pub fn find_injectivity_witness(map: &LocalMap, max_period: usize) -> InjectivityVerdict {
    let space = map.space();
    if let Some(all) = all_cells(space) {
        let set = map.domain.enumerate(&all, Cert::Auto);
        let mut seen: HashMap<Vec<Symbol>, Pattern> = HashMap::new();
        for p in set.patterns() {
            let Ok(img) = map.apply_unchecked(&p, &all) else {
                return InjectivityVerdict::Unsupported("rule undefined on an allowed pattern".into());
            };
            if let Some(q) = seen.get(img.values()) {
                return InjectivityVerdict::Witness {
                    first: q.clone(),
                    second: p,
                    image: img,
                    period: None,
                };
            }
            seen.insert(img.values().to_vec(), p);
        }
        return InjectivityVerdict::Injective;
    }
    let Some(oracle) = map.domain.line_oracle() else {
        return InjectivityVerdict::Unsupported(format!("no periodic-point search on {}", space.name()));
    };
    let q = map.domain.alphabet.len();
    let k = map.kappa() as i64;
    for p in 1..=max_period {
        let mut seen: HashMap<Vec<Symbol>, Vec<Symbol>> = HashMap::new();
        for word in words(q, p) {
            if !oracle.accepts_periodic(&word) {
                continue;
            }
            let periodic = |lo: i64, n: i64| -> Vec<Symbol> { (lo..lo + n).map(|i| word[i.rem_euclid(p as i64) as usize]).collect() };
            let around = Pattern::on_interval(space, -k, &periodic(-k, p as i64 + 2 * k));
            let targets = CellSet::new(space, (0..p as i64).map(Cell::Int));
            let Ok(img) = map.apply_unchecked(&around, &targets) else {
                return InjectivityVerdict::Unsupported("rule undefined on an allowed pattern".into());
            };
            if let Some(other) = seen.get(img.values()) {
                let n = 4 * p;
                let show = |w: &[Symbol]| -> Pattern {
                    let v: Vec<Symbol> = (0..n).map(|i| w[i % p]).collect();
                    Pattern::on_interval(space, 0, &v)
                };
                let first = show(other);
                let image = map.apply_sliding(&first).expect("allowed periodic point");
                return InjectivityVerdict::Witness {
                    first,
                    second: show(&word),
                    image,
                    period: Some(p),
                };
            }
            seen.insert(img.values().to_vec(), word);
        }
    }
    InjectivityVerdict::NoPeriodicWitness { period: max_period }
}

/// All words of length `n` over `q` symbols in lexicographic order.
fn words(q: usize, n: usize) -> impl Iterator<Item = Vec<Symbol>> {
    let total = (q as u64).pow(n as u32);
    (0..total).map(move |mut i| {
        let mut w = vec![0; n];
        for v in w.iter_mut().rev() {
            *v = (i % q as u64) as Symbol;
            i /= q as u64;
        }
        w
    })
}

/// Cells of the shared domain where two patterns differ; `None` if the domains differ.
pub fn difference(a: &Pattern, b: &Pattern) -> Option<CellSet> {
    (a.domain() == b.domain()).then(|| {
        let differ: Vec<bool> = a.values().iter().zip(b.values()).map(|(x, y)| x != y).collect();
        let mut i = 0;
        a.domain().filter(|_| {
            i += 1;
            differ[i - 1]
        })
    })
}

/// `x` overwritten by `x_i` on each `A_i`.
///
/// Requires each `A_i^{+2κ}` inside `W^{−2κ}` and disjoint from the others, `x_i` equal to `x`
/// on `∂⁺_{2κ} A_i`, and all patterns locally admissible on `W`.
pub fn glue(spec: &SubshiftSpec, kappa: usize, x: &Pattern, pieces: &[(CellSet, Pattern)]) -> Result<Pattern, GoeError> {
    let space = spec.space.as_ref();
    let w = x.domain();
    let fail = |index: Option<usize>, reason: &str| GoeError::Gluing {
        index,
        reason: reason.into(),
    };
    if !spec.locally_admissible(x) {
        return Err(fail(None, "not locally admissible"));
    }
    let safe = interior(space, w, 2 * kappa);
    let mut grown: Vec<CellSet> = Vec::new();
    for (i, (a, xi)) in pieces.iter().enumerate() {
        let g = closure(space, a, 2 * kappa);
        if xi.domain() != w {
            return Err(fail(Some(i), "pattern is not defined on the window"));
        }
        if !g.is_subset(&safe) {
            return Err(fail(Some(i), "grown region leaves the window interior"));
        }
        if grown.iter().any(|h| !h.is_disjoint(&g)) {
            return Err(fail(Some(i), "grown region overlaps an earlier piece"));
        }
        let rim = external_boundary(space, a, 2 * kappa);
        if rim.iter().any(|c| xi.get(c) != x.get(c)) {
            return Err(fail(Some(i), "pattern differs from the base on the boundary"));
        }
        if !spec.locally_admissible(xi) {
            return Err(fail(Some(i), "not locally admissible"));
        }
        grown.push(g);
    }
    let values = w
        .iter()
        .zip(x.values())
        .map(|(c, &v)| {
            pieces
                .iter()
                .find(|(a, _)| a.contains(c))
                .map_or(v, |(_, xi)| xi.get(c).unwrap())
        })
        .collect();
    Ok(Pattern::new(x.domain_arc().clone(), values).unwrap())
}

/// Replaces the occurrence of `p` at each `t ∈ T` in `c` by `p′`.
///
/// `p` and `p′` live on `A^{+2κ}`, agree off `A`, and have equal windowed images; the translates
/// `t ⊳ A^{+2κ}` must be pairwise disjoint and inside `W^{−κ}`. The result is checked to be
/// locally admissible with the same windowed image as `c`.
pub fn exchange_occurrences(map: &LocalMap, c: &Pattern, core: &CellSet, p: &Pattern, p2: &Pattern, targets: &CellSet) -> Result<Pattern, GoeError> {
    let space = map.space();
    let k = map.kappa();
    let pre = |s: &str| GoeError::Exchange(s.into());
    let grown = closure(space, core, 2 * k);
    if p.domain() != &grown || p2.domain() != &grown {
        return Err(pre("patterns must live on the core grown by 2κ"));
    }
    if !map.domain.locally_admissible(p) || !map.domain.locally_admissible(p2) || !map.domain.locally_admissible(c) {
        return Err(pre("patterns must be locally admissible"));
    }
    let rim = grown.difference(core);
    if rim.iter().any(|m| p.get(m) != p2.get(m)) {
        return Err(pre("patterns differ outside the core"));
    }
    if map.apply_windowed(p)? != map.apply_windowed(p2)? {
        return Err(pre("patterns have different images"));
    }
    let w = c.domain();
    let safe = interior(space, w, k);
    let mut placed: Vec<CellSet> = Vec::new();
    for t in targets.iter() {
        let region = translate_set(space, t, &grown);
        if !region.is_subset(&safe) {
            return Err(pre("a translate leaves the window interior"));
        }
        if placed.iter().any(|r| !r.is_disjoint(&region)) {
            return Err(pre("translates overlap"));
        }
        if !shift_pattern(space, t, p).agrees_with(c) {
            return Err(pre("pattern does not occur at a target"));
        }
        placed.push(region);
    }
    let moved: Vec<Pattern> = targets.iter().map(|t| shift_pattern(space, t, p2)).collect();
    let values = w
        .iter()
        .zip(c.values())
        .map(|(m, &v)| moved.iter().find_map(|q| q.get(m)).unwrap_or(v))
        .collect();
    let out = Pattern::new(c.domain_arc().clone(), values).unwrap();
    let post = |s: &str| GoeError::ExchangePost(s.into());
    if !map.domain.locally_admissible(&out) {
        return Err(post("result is not locally admissible"));
    }
    if map.apply_windowed(c)? != map.apply_windowed(&out)? {
        return Err(post("images differ"));
    }
    if p != p2 && targets.iter().any(|t| shift_pattern(space, t, p).agrees_with(&out)) {
        return Err(post("pattern still occurs"));
    }
    Ok(out)
}

/// Both sides of `|X_F ∖ ⋃_{s∈S} π_s⁻¹(p_s)| ≤ (1 − ξ⁻¹)^{|S|} · |X_F|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountingReport {
    pub lhs: BigUint,
    pub window_count: BigUint,
    /// `|X_{ball(θ)^{+κ}}|`.
    pub xi: BigUint,
    /// `T ∩ F^{−(θ+κ)}`.
    pub s: CellSet,
    pub exactness: Exactness,
    /// Failed hypotheses; the inequality is not asserted when non-empty.
    pub hypotheses: Vec<String>,
}

impl CountingReport {
    /// Compares `lhs · ξ^{|S|}` with `|X_F| · (ξ − 1)^{|S|}` exactly.
    pub fn holds(&self) -> bool {
        let n = self.s.len() as u32;
        let xi_less = if self.xi > BigUint::from(0u32) { &self.xi - 1u32 } else { BigUint::from(0u32) };
        &self.lhs * self.xi.pow(n) <= &self.window_count * xi_less.pow(n)
    }

    pub fn rhs(&self) -> f64 {
        let xi: f64 = self.xi.to_string().parse().unwrap_or(f64::INFINITY);
        let count: f64 = self.window_count.to_string().parse().unwrap_or(f64::INFINITY);
        (1.0 - 1.0 / xi).powi(self.s.len() as i32) * count
    }
}

/// `pinned` gives a pattern on `ball(t, θ)` for each `t ∈ T`.
pub fn counting_inequality_check(
    spec: &SubshiftSpec,
    f: &CellSet,
    theta: usize,
    kappa: usize,
    pinned: &[(Cell, Pattern)],
    cert: Cert,
) -> CountingReport {
    let space = spec.space.as_ref();
    let o = space.origin();
    let mut hypotheses = Vec::new();
    let balls: Vec<CellSet> = pinned.iter().map(|(t, _)| ball(space, t, theta)).collect();
    for (i, (t, pt)) in pinned.iter().enumerate() {
        if pt.domain() != &balls[i] {
            hypotheses.push(format!("pattern at {} is not on ball({}, {theta})", space.format_cell(t), space.format_cell(t)));
        } else if !spec.allowed(pt, cert).0 {
            hypotheses.push(format!("pattern at {} is not allowed", space.format_cell(t)));
        }
        for (j, b) in balls.iter().enumerate().skip(i + 1) {
            if set_distance(space, &balls[i], b).is_some_and(|d| d <= kappa) {
                hypotheses.push(format!("balls {i} and {j} are closer than {}", kappa + 1));
            }
        }
    }
    let shape = [ball(space, &o, theta)];
    if let IrreducibilityVerdict::Counterexample { .. } = check_strong_irreducibility(spec, kappa, &shape, 2 * theta + kappa + 3, cert) {
        hypotheses.push(format!("not {kappa}-strongly irreducible"));
    }
    let inner = interior(space, f, theta + kappa);
    let s: Vec<usize> = (0..pinned.len()).filter(|&i| inner.contains(&pinned[i].0)).collect();
    let (xi, e1) = spec.count(&closure(space, &shape[0], kappa), cert);
    let set = spec.enumerate(f, cert);
    let lhs = set
        .patterns()
        .filter(|x| {
            !s.iter().any(|&i| match x.restrict(&balls[i]) {
                Some(r) => r == pinned[i].1,
                None => false,
            })
        })
        .count();
    CountingReport {
        lhs: BigUint::from(lhs),
        window_count: BigUint::from(set.len()),
        xi,
        s: CellSet::new(space, s.iter().map(|&i| pinned[i].0.clone())),
        exactness: set.exactness.meet(e1),
        hypotheses,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GoeBounds {
    pub rho_max: usize,
    pub r_max: usize,
    pub max_period: usize,
    /// Largest `κ` tried for strong irreducibility, and the radius of that check.
    pub si_kappa_max: usize,
    pub si_radius: usize,
    pub cert: Cert,
}

impl Default for GoeBounds {
    fn default() -> Self {
        GoeBounds {
            rho_max: 8,
            r_max: 6,
            max_period: 6,
            si_kappa_max: 4,
            si_radius: 8,
            cert: Cert::Auto,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Hypotheses {
    pub non_empty: bool,
    pub finite_type: bool,
    pub amenable: bool,
    /// Least `κ ≤ si_kappa_max` with a certified strong-irreducibility check.
    pub strongly_irreducible: Option<usize>,
    pub domain_entropy: Option<EntropyValue>,
    pub codomain_entropy: Option<EntropyValue>,
    pub entropy_tolerance: f64,
}

impl Hypotheses {
    pub fn entropy_parity(&self) -> bool {
        match (self.domain_entropy, self.codomain_entropy) {
            (Some(EntropyValue::Finite(a)), Some(EntropyValue::Finite(b))) => (a - b).abs() <= self.entropy_tolerance,
            (Some(EntropyValue::Empty), Some(EntropyValue::Empty)) => true,
            _ => false,
        }
    }

    pub fn all_hold(&self) -> bool {
        self.non_empty && self.finite_type && self.amenable && self.strongly_irreducible.is_some() && self.entropy_parity()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Consistency {
    Consistent,
    OutOfHypothesis,
    Violation,
}

impl Consistency {
    pub fn exit_code(self) -> i32 {
        match self {
            Consistency::Consistent => 0,
            Consistency::OutOfHypothesis => 2,
            Consistency::Violation => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GoeReport {
    pub map_id: String,
    pub hypotheses: Hypotheses,
    pub surjectivity: SurjectivityVerdict,
    pub pre_injectivity: PreInjectivityVerdict,
    pub injectivity: InjectivityVerdict,
    pub bounds: GoeBounds,
    pub consistency: Consistency,
}

/// Entropy of a shift: the line value when available, else the estimate on the largest ball
/// of radius `≤ 3`.
fn shift_entropy(spec: &SubshiftSpec, cert: Cert) -> Option<EntropyValue> {
    if let Ok(v) = exact_entropy_1d(spec, LogBase::Two) {
        return Some(v);
    }
    let prefix = FolnerPrefix::balls(spec.space.clone(), 3..=3).ok()?;
    entropy_estimate(spec, &prefix, cert, LogBase::Two).ok().map(|e| e.values[0])
}

pub fn check_hypotheses(map: &LocalMap, bounds: &GoeBounds) -> Hypotheses {
    let space = map.space();
    let dom = &map.domain;
    let non_empty = !dom.enumerate(&CellSet::new(space, [space.origin()]), bounds.cert).is_empty();
    let finite_type = dom.is_finite_type();
    let amenable = space.is_amenable();
    let shapes = [segment(space, 1), segment(space, 2)];
    let strongly_irreducible = if non_empty && amenable {
        (0..=bounds.si_kappa_max).find(|&k| {
            matches!(
                check_strong_irreducibility(dom, k, &shapes, bounds.si_radius.max(k + 3), bounds.cert),
                IrreducibilityVerdict::Certified { .. }
            )
        })
    } else {
        None
    };
    let (domain_entropy, codomain_entropy) = if amenable {
        if Arc::ptr_eq(&map.domain, &map.codomain) {
            let e = shift_entropy(dom, bounds.cert);
            (e, e)
        } else {
            (shift_entropy(dom, bounds.cert), shift_entropy(&map.codomain, bounds.cert))
        }
    } else {
        (None, None)
    };
    Hypotheses {
        non_empty,
        finite_type,
        amenable,
        strongly_irreducible,
        domain_entropy,
        codomain_entropy,
        entropy_tolerance: 1e-9,
    }
}

/// Runs the three searches and checks "surjective iff pre-injective" at the given bounds.
pub fn goe_experiment(map: &LocalMap, bounds: GoeBounds) -> Result<GoeReport, MapError> {
    let hypotheses = check_hypotheses(map, &bounds);
    let surjectivity = find_goe_pattern(map, bounds.rho_max, bounds.cert)?;
    let pre_injectivity = find_mutually_erasable(map, bounds.r_max, bounds.cert)?;
    let injectivity = find_injectivity_witness(map, bounds.max_period);
    let consistency = if !hypotheses.all_hold() {
        Consistency::OutOfHypothesis
    } else if surjectivity.is_surjective() == pre_injectivity.is_pre_injective() {
        Consistency::Consistent
    } else {
        Consistency::Violation
    };
    Ok(GoeReport {
        map_id: map.name.clone(),
        hypotheses,
        surjectivity,
        pre_injectivity,
        injectivity,
        bounds,
        consistency,
    })
}
