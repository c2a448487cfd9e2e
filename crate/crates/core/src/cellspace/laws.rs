//! Structural laws every space must satisfy, checked on concrete inputs.

use super::*;

/// Largest ball searched when cross-checking a closed-form distance.
const SEARCH_LIMIT: u128 = 5_000;

/// Checks the metric, semi-action and boundary laws on the given sample.
///
/// `cells` needs at least three entries; `set` is an arbitrary finite region.
pub fn check_laws(space: &dyn Space, cells: &[Cell], set: &CellSet, theta: usize, eta: usize) -> Result<(), String> {
    let (a, b, c) = (&cells[0], &cells[1], &cells[2]);
    let fmt = |m: &Cell| space.format_cell(m);

    let dab = space.distance(a, b);
    if space.distance(a, a) != 0 {
        return Err(format!("d({0},{0}) != 0", fmt(a)));
    }
    if dab != space.distance(b, a) {
        return Err(format!("d not symmetric on {} {}", fmt(a), fmt(b)));
    }
    if space.distance(a, c) > dab + space.distance(b, c) {
        return Err(format!("triangle fails on {} {} {}", fmt(a), fmt(b), fmt(c)));
    }
    let searchable = space.ball_size(dab).is_some_and(|n| n <= SEARCH_LIMIT);
    if searchable && bfs_distance(space, a, b, dab) != Some(dab) {
        return Err(format!("closed-form distance disagrees with search on {} {}", fmt(a), fmt(b)));
    }
    if a != b && dab == 0 {
        return Err("distinct cells at distance 0".into());
    }

    let origin = space.origin();
    let base = ball(space, &origin, theta);
    let moved = translate_set(space, a, &base);
    if moved.len() != base.len() || moved != ball(space, a, theta) {
        return Err(format!("{} ⊳ ball({theta}) is not the ball around it", fmt(a)));
    }
    if space.translate(a, &origin) != *a {
        return Err("translation by the origin moves a cell".into());
    }
    for s in 0..space.generator_count() {
        let g = space.generator_cell(s);
        for h in 0..space.stabiliser_order() {
            let image = space.stabilise(h, &g);
            if !(0..space.generator_count()).any(|t| space.generator_cell(t) == image) {
                return Err(format!("stabiliser element {h} moves generator {s} off the generating set"));
            }
        }
    }

    let outer = closure(space, set, theta);
    let inner = interior(space, set, theta);
    if !inner.is_subset(set) || !set.is_subset(&outer) {
        return Err("interior ⊆ A ⊆ closure fails".into());
    }
    if closure(space, &outer, eta) != closure(space, set, theta + eta) {
        return Err("closures do not compose additively".into());
    }
    if interior(space, &inner, eta) != interior(space, set, theta + eta) {
        return Err("interiors do not compose additively".into());
    }
    if !set.is_subset(&interior(space, &outer, theta)) {
        return Err("A ⊄ (A^{+θ})^{−θ}".into());
    }
    if !closure(space, &inner, theta).is_subset(set) {
        return Err("(A^{−θ})^{+θ} ⊄ A".into());
    }
    let whole = boundary(space, set, theta);
    let int_b = internal_boundary(space, set, theta);
    let ext_b = external_boundary(space, set, theta);
    if !int_b.is_disjoint(&ext_b) || int_b.union(space, &ext_b) != whole {
        return Err("boundary is not the disjoint union of its internal and external parts".into());
    }
    for m in set.iter() {
        let in_interior = ball(space, m, theta).is_subset(set);
        if in_interior != inner.contains(m) {
            return Err(format!("interior membership of {} disagrees with the ball test", fmt(m)));
        }
    }
    Ok(())
}
