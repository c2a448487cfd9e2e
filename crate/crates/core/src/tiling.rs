//! `⟨θ, κ, θ′⟩`-tilings built sphere by sphere, and their verification on finite regions.

use thiserror::Error;

use crate::cellspace::{ball, interior, internal_boundary, sphere, Cell, CellSet, Space};

/// Largest ball the tiling routines will materialise.
pub const MAX_REGION: u128 = 4_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TilingError {
    #[error("tilings of finite spaces are not supported")]
    FiniteSpace,
    #[error("ball of radius {radius} has {cells} cells, above the limit of {MAX_REGION}")]
    RegionTooLarge { radius: usize, cells: String },
    #[error("window leaves the safe region ball({0})")]
    OutsideSafeRegion(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tiling {
    pub points: CellSet,
    pub theta: usize,
    pub kappa: usize,
    pub theta_prime: usize,
    pub working_radius: usize,
}

impl Tiling {
    /// Distance between consecutive spheres of the construction, `2θ + κ + 1`.
    pub fn spacing(&self) -> usize {
        2 * self.theta + self.kappa + 1
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TilingVerdict {
    /// Pairs of points whose `θ`-balls are closer than `κ + 1`.
    pub too_close: Vec<(Cell, Cell)>,
    /// Cells of `ball(R − θ′)` outside every `ball(t, θ′)`.
    pub uncovered: Vec<Cell>,
}

impl TilingVerdict {
    pub fn passes(&self) -> bool {
        self.too_close.is_empty() && self.uncovered.is_empty()
    }
}

pub(crate) fn check_region(space: &dyn Space, radius: usize) -> Result<(), TilingError> {
    match space.ball_size(radius) {
        Some(n) if n <= MAX_REGION => Ok(()),
        n => Err(TilingError::RegionTooLarge {
            radius,
            cells: n.map_or_else(|| "more than 2^128".into(), |n| n.to_string()),
        }),
    }
}

/// Points on the spheres of radius `i(2θ+κ+1) ≤ R`, chosen greedily in canonical order so that
/// points on one sphere are at least `2θ+κ+1` apart.
pub fn greedy_tiling(space: &dyn Space, theta: usize, kappa: usize, radius: usize) -> Result<Tiling, TilingError> {
    if space.is_finite() {
        return Err(TilingError::FiniteSpace);
    }
    check_region(space, radius)?;
    let o = space.origin();
    let d = 2 * theta + kappa + 1;
    let mut points = Vec::new();
    for i in 0..=radius / d {
        let mut chosen: Vec<Cell> = Vec::new();
        for m in sphere(space, &o, i * d).iter() {
            if chosen.iter().all(|c| space.distance(c, m) >= d) {
                chosen.push(m.clone());
            }
        }
        points.extend(chosen);
    }
    Ok(Tiling {
        points: CellSet::new(space, points),
        theta,
        kappa,
        theta_prime: 4 * theta + 2 * kappa,
        working_radius: radius,
    })
}

/// Checks pairwise apartness of the `θ`-balls and covering of `ball(R − θ′)` by the `θ′`-balls.
pub fn verify_tiling(space: &dyn Space, points: &CellSet, theta: usize, kappa: usize, theta_prime: usize, radius: usize) -> TilingVerdict {
    let pts = points.to_vec();
    let mut verdict = TilingVerdict::default();
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            if space.distance(a, b).saturating_sub(2 * theta) < kappa + 1 {
                verdict.too_close.push((a.clone(), b.clone()));
            }
        }
    }
    if let Some(safe) = radius.checked_sub(theta_prime) {
        for m in ball(space, &space.origin(), safe).iter() {
            if !pts.iter().any(|t| space.distance(t, m) <= theta_prime) {
                verdict.uncovered.push(m.clone());
            }
        }
    }
    verdict
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityReport {
    /// `|T ∩ F_i^{−(θ+κ)}|` per window.
    pub counts: Vec<usize>,
    pub ratios: Vec<f64>,
    /// `1 / (2|ball(θ′)|)`.
    pub epsilon: f64,
    /// First index from which every ratio is at least `epsilon`.
    pub i0: Option<usize>,
    /// Windows not contained in the covered region, where the bound need not apply.
    pub outside: Vec<usize>,
}

pub fn folner_density(space: &dyn Space, tiling: &Tiling, windows: &[CellSet]) -> DensityReport {
    let rho = tiling.theta + tiling.kappa;
    let o = space.origin();
    let safe = tiling.working_radius.saturating_sub(tiling.theta_prime);
    let epsilon = 1.0 / (2.0 * ball(space, &o, tiling.theta_prime).len() as f64);
    let mut counts = Vec::new();
    let mut ratios = Vec::new();
    let mut outside = Vec::new();
    for (i, f) in windows.iter().enumerate() {
        let inner = interior(space, f, rho);
        let c = tiling.points.iter().filter(|t| inner.contains(t)).count();
        counts.push(c);
        ratios.push(c as f64 / f.len() as f64);
        if f.iter().any(|m| space.distance(&o, m) > safe) {
            outside.push(i);
        }
    }
    let i0 = (0..=ratios.len())
        .find(|&i| ratios[i..].iter().all(|&r| r >= epsilon))
        .filter(|&i| i < ratios.len());
    DensityReport {
        counts,
        ratios,
        epsilon,
        i0,
        outside,
    }
}

/// Terms of `|F| ≤ |S|·|ball(θ′)| + |∂⁻_{θ+κ+θ′} F|` with `S = T ∩ F^{−(θ+κ)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringBound {
    pub window: usize,
    pub s: usize,
    pub ball: usize,
    pub boundary: usize,
}

impl CoveringBound {
    pub fn holds(&self) -> bool {
        self.window <= self.s * self.ball + self.boundary
    }
}

/// Requires `F ⊆ ball(R − θ′)`, where the tiling is known to cover.
pub fn covering_bound(space: &dyn Space, tiling: &Tiling, f: &CellSet) -> Result<CoveringBound, TilingError> {
    let o = space.origin();
    let safe = tiling.working_radius.saturating_sub(tiling.theta_prime);
    if f.iter().any(|m| space.distance(&o, m) > safe) {
        return Err(TilingError::OutsideSafeRegion(safe));
    }
    let rho = tiling.theta + tiling.kappa;
    let inner = interior(space, f, rho);
    Ok(CoveringBound {
        window: f.len(),
        s: tiling.points.iter().filter(|t| inner.contains(t)).count(),
        ball: ball(space, &o, tiling.theta_prime).len(),
        boundary: internal_boundary(space, f, rho + tiling.theta_prime).len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cellspace::{parse_space, Grid, IntLine};
    use proptest::prelude::*;

    fn ints(c: &CellSet) -> Vec<i64> {
        let mut v: Vec<i64> = c.iter().map(Cell::int).collect();
        v.sort();
        v
    }

    #[test]
    fn line_examples() {
        let t = greedy_tiling(&IntLine, 0, 0, 5).unwrap();
        assert_eq!(ints(&t.points), (-5..=5).collect::<Vec<_>>());
        let t = greedy_tiling(&IntLine, 1, 2, 20).unwrap();
        assert_eq!(ints(&t.points), vec![-20, -15, -10, -5, 0, 5, 10, 15, 20]);
        assert_eq!((t.spacing(), t.theta_prime), (5, 8));
        assert!(verify_tiling(&IntLine, &t.points, 1, 2, 8, 20).passes());
        let g = greedy_tiling(&Grid, 0, 1, 6).unwrap();
        assert!(verify_tiling(&Grid, &g.points, 0, 1, 2, 6).passes());
        assert_eq!(greedy_tiling(parse_space("cycle:6").unwrap().as_ref(), 0, 0, 2), Err(TilingError::FiniteSpace));
    }

    #[test]
    fn hand_built_point_sets() {
        let close = CellSet::new(&IntLine, [Cell::Int(0), Cell::Int(1)]);
        let v = verify_tiling(&IntLine, &close, 1, 0, 4, 1);
        assert_eq!(v.too_close, vec![(Cell::Int(0), Cell::Int(1))]);
        let tens = CellSet::new(&IntLine, (-5..=5).map(|k| Cell::Int(10 * k)));
        let v = verify_tiling(&IntLine, &tens, 1, 2, 8, 50);
        // 5 is covered by 0, but 45 ± 1 would need a point at 40 or 50: both present
        assert!(v.passes(), "{v:?}");
        let sparse = CellSet::new(&IntLine, (-2..=2).map(|k| Cell::Int(20 * k)));
        let v = verify_tiling(&IntLine, &sparse, 1, 2, 8, 40);
        assert_eq!(ints(&CellSet::new(&IntLine, v.uncovered.clone())), vec![-31, -30, -29, -11, -10, -9, 9, 10, 11, 29, 30, 31]);
    }

    #[test]
    fn density_on_the_line() {
        let t = greedy_tiling(&IntLine, 1, 2, 60).unwrap();
        let windows: Vec<CellSet> = (10..=40).map(|i| CellSet::new(&IntLine, (-i..=i).map(Cell::Int))).collect();
        let r = folner_density(&IntLine, &t, &windows);
        assert_eq!(r.epsilon, 1.0 / 34.0);
        assert_eq!(r.i0, Some(0));
        assert!(r.outside.is_empty());
        // [−i, i]^{−3} = [−i+3, i−3] holds 2⌊(i−3)/5⌋ + 1 points
        for (k, i) in (10..=40).enumerate() {
            assert_eq!(r.counts[k], 2 * ((i - 3) / 5) + 1);
        }
        let full = greedy_tiling(&IntLine, 0, 0, 30).unwrap();
        let r = folner_density(&IntLine, &full, &windows[..5]);
        assert!(r.ratios.iter().all(|&x| x == 1.0));
    }

    #[test]
    fn free_group_budget() {
        let f = parse_space("free:2").unwrap();
        assert!(matches!(greedy_tiling(f.as_ref(), 1, 1, 30), Err(TilingError::RegionTooLarge { .. })));
        let t = greedy_tiling(f.as_ref(), 1, 1, 6).unwrap();
        assert!(verify_tiling(f.as_ref(), &t.points, 1, 1, 6, 6).passes());
    }

    #[test]
    fn larger_radius_extends_the_tiling() {
        for sp in ["Z", "Z2", "Dinf"] {
            let s = parse_space(sp).unwrap();
            let small = greedy_tiling(s.as_ref(), 1, 1, 8).unwrap();
            let large = greedy_tiling(s.as_ref(), 1, 1, 16).unwrap();
            assert!(small.points.is_subset(&large.points));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn covering_bound_holds(
            on_grid in any::<bool>(),
            theta in 0usize..2,
            kappa in 0usize..3,
            cells in proptest::collection::vec((-8i64..=8, -8i64..=8), 1..60),
        ) {
            let space: &dyn Space = if on_grid { &Grid } else { &IntLine };
            let t = greedy_tiling(space, theta, kappa, 20 + 4 * theta + 2 * kappa).unwrap();
            let f = if on_grid {
                CellSet::new(space, cells.iter().map(|&(x, y)| Cell::Pair(x, y)))
            } else {
                CellSet::new(space, cells.iter().map(|&(x, _)| Cell::Int(x)))
            };
            let b = covering_bound(space, &t, &f).unwrap();
            prop_assert!(b.holds(), "{:?}", b);
        }
    }
}
