//! Finite-window checks of memory, bounded propagation and strong irreducibility.

use std::collections::HashMap;

use crate::cellspace::{ball, set_distance, translate_set, Cell, CellSet, Space};
use crate::pattern::{shift_pattern, Exactness, Pattern, Symbol};

use super::{Cert, SubshiftError, SubshiftSpec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepVerdict {
    Holds { radius: usize, exactness: Exactness },
    /// Every `κ`-ball of the pattern is allowed, but the pattern is not.
    Counterexample { pattern: Pattern, exactness: Exactness },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PropagationVerdict {
    Holds { windows: usize, exactness: Exactness },
    Violation { pattern: Pattern, exactness: Exactness },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IrreducibilityVerdict {
    Certified { radius: usize, exactness: Exactness },
    Counterexample { first: Pattern, second: Pattern, exactness: Exactness },
}

/// `n` cells from the origin along the first generator.
pub fn segment(space: &dyn Space, n: usize) -> CellSet {
    let mut cells = Vec::with_capacity(n);
    let mut m = space.origin();
    for _ in 0..n {
        cells.push(m.clone());
        m = space.step(&m, 0);
    }
    CellSet::new(space, cells)
}

/// Searches balls of radius `κ+1 ..= R` for a pattern of the `κ`-step approximation of `spec`
/// that `spec` does not allow. The approximation is the shift generated by the allowed
/// `κ`-ball patterns, so witnesses extend to points all of whose `κ`-balls are allowed.
///
/// A witness found on a smaller ball is padded to radius `R` with the least admissible extension.
pub fn check_kappa_step(spec: &SubshiftSpec, kappa: usize, radius: usize, cert: Cert) -> Result<StepVerdict, SubshiftError> {
    let space = spec.space.as_ref();
    let o = space.origin();
    let base = spec.enumerate(&ball(space, &o, kappa), cert);
    let approx = SubshiftSpec::from_allowed_balls(format!("{}#step{kappa}", spec.name), spec, &base)?;
    let mut exactness = base.exactness.meet(approx.exactness(cert));
    for r in kappa + 1..=radius {
        let window = ball(space, &o, r);
        let candidates = approx.enumerate(&window, cert);
        exactness = exactness.meet(candidates.exactness);
        for q in candidates.patterns() {
            let (ok, e) = spec.allowed(&q, cert);
            if !ok {
                let full = ball(space, &o, radius);
                let pattern = approx.first_extension(&q, &full, cert).unwrap_or(q);
                return Ok(StepVerdict::Counterexample {
                    pattern,
                    exactness: exactness.meet(e),
                });
            }
        }
    }
    Ok(StepVerdict::Holds { radius, exactness })
}

/// Subsets of `{0, s, s², …, s^{w−1}}` along the first generator that contain both ends,
/// for every width `w ≤ max_width`, ordered by width then by membership mask.
pub fn segment_windows(space: &dyn Space, max_width: usize) -> Vec<CellSet> {
    let mut out = Vec::new();
    for w in 1..=max_width {
        let cells: Vec<Cell> = segment(space, w).to_vec();
        let inner = w.saturating_sub(2);
        for mask in 0u64..1 << inner {
            let chosen = cells.iter().enumerate().filter(|(i, _)| {
                *i == 0 || *i == w - 1 || mask >> (i - 1) & 1 == 1
            });
            out.push(CellSet::new(space, chosen.map(|(_, c)| c.clone())));
        }
    }
    out
}

/// Subsets of the ball of the given radius that contain the origin.
pub fn ball_windows(space: &dyn Space, radius: usize) -> Vec<CellSet> {
    let b = ball(space, &space.origin(), radius).to_vec();
    let rest = &b[1..];
    (0u64..1 << rest.len())
        .map(|mask| {
            let chosen = rest.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, c)| c.clone());
            CellSet::new(space, std::iter::once(b[0].clone()).chain(chosen))
        })
        .collect()
}

/// For each window `F` and `p ∈ Q^F`: if every `p↾(ball(f,ρ) ∩ F)` is allowed then `p` must be.
pub fn check_bounded_propagation(spec: &SubshiftSpec, rho: usize, windows: &[CellSet], cert: Cert) -> PropagationVerdict {
    let space = spec.space.as_ref();
    let q = spec.alphabet.len();
    let exactness = spec.exactness(cert);
    let mut memo: HashMap<Vec<(Cell, Symbol)>, bool> = HashMap::new();
    let mut allowed = |p: &Pattern| -> bool {
        let key: Vec<(Cell, Symbol)> = p.entries().map(|(c, v)| (c.clone(), v)).collect();
        *memo.entry(key).or_insert_with(|| spec.allowed(p, cert).0)
    };
    for f in windows {
        let locals: Vec<CellSet> = f.iter().map(|c| ball(space, c, rho).intersection(f)).collect();
        let domain = std::sync::Arc::new(f.clone());
        let n = f.len();
        let mut values = vec![0 as Symbol; n];
        loop {
            let p = Pattern::new(domain.clone(), values.clone()).expect("sized");
            let locally_ok = locals.iter().all(|l| allowed(&p.restrict(l).expect("subset")));
            if locally_ok && !allowed(&p) {
                return PropagationVerdict::Violation { pattern: p, exactness };
            }
            let Some(i) = (0..n).rev().find(|&i| (values[i] as usize) + 1 < q) else { break };
            values[i] += 1;
            for v in values.iter_mut().skip(i + 1) {
                *v = 0;
            }
        }
    }
    PropagationVerdict::Holds {
        windows: windows.len(),
        exactness,
    }
}

/// Places a sample pattern on each shape at the origin and a second one on a translate of each
/// shape inside `ball(R)` at distance at least `κ + 1`, and tries to embed both in one point.
///
/// Placements are tried by increasing distance, then by the canonical order of the translation;
/// pattern pairs in lexicographic order.
pub fn check_strong_irreducibility(
    spec: &SubshiftSpec,
    kappa: usize,
    shapes: &[CellSet],
    radius: usize,
    cert: Cert,
) -> IrreducibilityVerdict {
    let space = spec.space.as_ref();
    let region = ball(space, &space.origin(), radius);
    let samples: Vec<Vec<Pattern>> = shapes.iter().map(|d| spec.enumerate(d, cert).patterns().collect()).collect();
    let mut exactness = spec.exactness(cert);
    let mut trials = Vec::new();
    for (i, d1) in shapes.iter().enumerate() {
        for (j, d2) in shapes.iter().enumerate() {
            for (k, t) in region.iter().enumerate() {
                let moved = translate_set(space, t, d2);
                if !moved.is_subset(&region) {
                    continue;
                }
                match set_distance(space, d1, &moved) {
                    Some(d) if d > kappa => trials.push((d, k, i, j)),
                    _ => {}
                }
            }
        }
    }
    trials.sort_unstable();
    for (_, k, i, j) in trials {
        let t = region.get(k).expect("index");
        for p in &samples[i] {
            for p2 in &samples[j] {
                let second = shift_pattern(space, t, p2);
                let joint = Pattern::from_cells(space, p.entries().chain(second.entries()).map(|(c, v)| (c.clone(), v)));
                let (ok, e) = spec.allowed(&joint, cert);
                exactness = exactness.meet(e);
                if !ok {
                    return IrreducibilityVerdict::Counterexample {
                        first: p.clone(),
                        second,
                        exactness,
                    };
                }
            }
        }
    }
    IrreducibilityVerdict::Certified { radius, exactness }
}
