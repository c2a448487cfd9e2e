use std::collections::BTreeSet;

use num_bigint::BigUint;
use proptest::prelude::*;

use super::structure::*;
use super::*;
use crate::cellspace::{parse_space, IntLine};

fn shift(name: &str, space: &str) -> SubshiftSpec {
    SubshiftSpec::named(name, parse_space(space).unwrap()).unwrap()
}

fn interval(a: i64, b: i64) -> CellSet {
    CellSet::new(&IntLine, (a..b).map(Cell::Int))
}

/// Members as words read left to right.
fn words(spec: &SubshiftSpec, f: &CellSet, cert: Cert) -> BTreeSet<String> {
    spec.enumerate(f, cert)
        .patterns()
        .map(|p| p.line_word(spec.space.as_ref()).iter().map(|&(_, v)| spec.alphabet.name(v)).collect())
        .collect()
}

fn set(ws: &[&str]) -> BTreeSet<String> {
    ws.iter().map(|s| s.to_string()).collect()
}

/// Words on `[lo - margin, hi + margin)` avoiding every block at every offset, projected to `coords`.
fn brute(blocks: &[&[u8]], coords: &[i64], margin: i64) -> BTreeSet<Vec<u8>> {
    let lo = coords.iter().min().copied().unwrap_or(0) - margin;
    let hi = coords.iter().max().copied().unwrap_or(0) + margin + 1;
    let n = (hi - lo) as usize;
    let mut out = BTreeSet::new();
    for w in 0u32..1 << n {
        let word: Vec<u8> = (0..n).map(|i| (w >> i & 1) as u8).collect();
        let clean = blocks
            .iter()
            .all(|b| !word.windows(b.len()).any(|x| x == *b));
        if clean {
            out.insert(coords.iter().map(|&z| word[(z - lo) as usize]).collect());
        }
    }
    out
}

#[test]
fn golden_mean_on_three_cells() {
    let g = shift("golden_mean", "Z");
    assert_eq!(words(&g, &interval(0, 3), Cert::Auto), set(&["000", "001", "010", "100", "101"]));
    assert_eq!(g.enumerate(&interval(0, 3), Cert::Auto).exactness, Exactness::Exact);
}

#[test]
fn alternating_shift_on_four_cells() {
    let a = shift("alt_00_11", "Z");
    assert_eq!(words(&a, &interval(0, 4), Cert::Auto), set(&["0101", "1010"]));
}

#[test]
fn full_and_empty_shifts() {
    let f = shift("full:3", "Z2");
    let o = f.space.origin();
    let b = ball(f.space.as_ref(), &o, 1);
    assert_eq!(f.count(&b, Cert::Auto).0, BigUint::from(243u32));
    let e = shift("empty", "Z");
    assert!(e.enumerate(&interval(0, 2), Cert::Auto).is_empty());
    assert!(e.enumerate(&CellSet::empty(), Cert::Auto).is_empty());
    let e2 = shift("empty", "Z2");
    assert!(e2.enumerate(&CellSet::empty(), Cert::Radius(1)).is_empty());
}

#[test]
fn local_admissibility() {
    let g = shift("golden_mean", "Z");
    assert!(g.locally_admissible(&Pattern::on_interval(&IntLine, 0, &[0, 1, 0, 1])));
    assert!(!g.locally_admissible(&Pattern::on_interval(&IntLine, 0, &[0, 1, 1, 0])));
    let e = shift("even", "Z");
    assert!(!e.locally_admissible(&Pattern::on_interval(&IntLine, 0, &[1, 0, 1])));
}

fn fib(n: usize) -> BigUint {
    let (mut a, mut b) = (BigUint::from(0u32), BigUint::from(1u32));
    for _ in 0..n {
        let c = &a + &b;
        a = b;
        b = c;
    }
    a
}

#[test]
fn golden_mean_counts_are_fibonacci() {
    let g = shift("golden_mean", "Z");
    for n in 1..=20 {
        let coords: Vec<i64> = (0..n as i64).collect();
        let got = g.count(&interval(0, n as i64), Cert::Auto).0;
        if n <= 12 {
            assert_eq!(got, BigUint::from(brute(&[&[1, 1]], &coords, 0).len()));
        }
        assert_eq!(got, fib(n + 2), "n = {n}");
    }
}

#[test]
fn named_variants_agree() {
    let f = interval(-4, 5);
    let g = shift("golden_mean", "Z");
    let gg = shift("gg_mean:1:0;+1", "Z");
    assert_eq!(g.enumerate(&f, Cert::Auto), gg.enumerate(&f, Cert::Auto));
    let gd = shift("golden_mean", "Dinf");
    assert_eq!(g.count(&f, Cert::Auto), gd.count(&f, Cert::Auto));
    let gc = shift("golden_mean", "cycle:4");
    let all = crate::cellspace::all_cells(gc.space.as_ref()).unwrap();
    assert_eq!(gc.count(&all, Cert::Auto), (BigUint::from(7u32), Exactness::Exact));
}

#[test]
fn generalised_golden_mean_on_the_grid() {
    // three symbols, no horizontal or vertical pair of non-zero symbols
    let s = shift("gg_mean:2:(0,0);(1,0)/(0,0);(0,1)", "Z2");
    assert_eq!(s.alphabet.len(), 3);
    let b = ball(s.space.as_ref(), &s.space.origin(), 1);
    // the centre is non-zero only if its four neighbours are 0: 2 + 3^4
    assert_eq!(s.count(&b, Cert::Radius(2)).0, BigUint::from(2u32 + 81));
}

#[test]
fn grid_golden_mean_matches_brute_force() {
    let s = shift("golden_mean", "Z2");
    let b = ball(s.space.as_ref(), &s.space.origin(), 1);
    let cells = b.to_vec();
    let brute = (0u32..1 << cells.len())
        .filter(|w| {
            cells.iter().enumerate().all(|(i, c)| {
                let (x, y) = c.pair();
                let right = cells.iter().position(|d| *d == Cell::Pair(x + 1, y));
                !(w >> i & 1 == 1 && right.is_some_and(|j| w >> j & 1 == 1))
            })
        })
        .count();
    assert_eq!(s.count(&b, Cert::Radius(1)).0, BigUint::from(brute));
    assert_eq!(s.count(&b, Cert::Radius(1)).1, Exactness::Certified(1));
}

#[test]
fn certified_sets_shrink_towards_exact() {
    let s = shift("f010_111", "Z");
    let f = CellSet::new(&IntLine, [0, 1, 4, 5].map(Cell::Int));
    let exact = s.enumerate(&f, Cert::Auto);
    let mut prev: Option<PatternSet> = None;
    for r in 0..5 {
        let c = s.enumerate(&f, Cert::Radius(r));
        for m in &exact.members {
            assert!(c.contains(m));
        }
        if let Some(p) = &prev {
            for m in &c.members {
                assert!(p.contains(m));
            }
        }
        prev = Some(c);
    }
    assert_eq!(prev.unwrap().members, exact.members);
}

#[test]
fn kappa_step() {
    let g = shift("golden_mean", "Z");
    assert!(matches!(
        structure::check_kappa_step(&g, 1, 4, Cert::Auto).unwrap(),
        StepVerdict::Holds { radius: 4, exactness: Exactness::Exact }
    ));
    let full = shift("full", "Z2");
    assert!(matches!(
        structure::check_kappa_step(&full, 0, 2, Cert::Auto).unwrap(),
        StepVerdict::Holds { .. }
    ));
    let e = shift("even", "Z");
    match structure::check_kappa_step(&e, 2, 5, Cert::Auto).unwrap() {
        StepVerdict::Counterexample { pattern, exactness } => {
            let w: Vec<(i64, u8)> = pattern.line_word(&IntLine);
            assert_eq!(w.first().unwrap().0, -5);
            let vals: Vec<u8> = w.iter().map(|e| e.1).collect();
            assert_eq!(vals, vec![0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0]);
            assert_eq!(exactness, Exactness::Exact);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn bounded_propagation() {
    let g = shift("golden_mean", "Z");
    let windows = segment_windows(&IntLine, 8);
    assert!(matches!(
        check_bounded_propagation(&g, 1, &windows, Cert::Auto),
        PropagationVerdict::Holds { .. }
    ));
    let full = shift("full", "Z");
    assert!(matches!(
        check_bounded_propagation(&full, 0, &windows, Cert::Auto),
        PropagationVerdict::Holds { .. }
    ));
    let f = shift("f010_111", "Z");
    match check_bounded_propagation(&f, 0, &windows, Cert::Auto) {
        PropagationVerdict::Violation { pattern, .. } => {
            assert_eq!(pattern.line_word(&IntLine), vec![(0, 0), (1, 1), (2, 0)]);
        }
        other => panic!("{other:?}"),
    }
    match check_bounded_propagation(&f, 2, &windows, Cert::Auto) {
        PropagationVerdict::Violation { pattern, .. } => {
            assert_eq!(pattern.line_word(&IntLine), vec![(0, 0), (1, 1), (4, 1), (5, 0)]);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn strong_irreducibility() {
    let two = [segment(&IntLine, 1), segment(&IntLine, 2), segment(&IntLine, 3)];
    let g = shift("golden_mean", "Z");
    assert!(matches!(
        check_strong_irreducibility(&g, 1, &two, 8, Cert::Auto),
        IrreducibilityVerdict::Certified { radius: 8, exactness: Exactness::Exact }
    ));
    let e = shift("even", "Z");
    assert!(matches!(
        check_strong_irreducibility(&e, 2, &two, 8, Cert::Auto),
        IrreducibilityVerdict::Certified { .. }
    ));
    assert!(matches!(
        check_strong_irreducibility(&e, 1, &two, 8, Cert::Auto),
        IrreducibilityVerdict::Counterexample { .. }
    ));
    let a = shift("alt_00_11", "Z");
    match check_strong_irreducibility(&a, 4, &[segment(&IntLine, 2)], 10, Cert::Auto) {
        IrreducibilityVerdict::Counterexample { first, second, .. } => {
            assert_eq!(first.line_word(&IntLine), vec![(0, 0), (1, 1)]);
            assert_eq!(second.line_word(&IntLine), vec![(6, 1), (7, 0)]);
        }
        other => panic!("{other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn exact_enumeration_matches_brute_force(
        which in 0usize..3,
        coords in proptest::collection::btree_set(-4i64..5, 0..7),
    ) {
        let (name, blocks): (&str, Vec<&[u8]>) = match which {
            0 => ("golden_mean", vec![&[1, 1]]),
            1 => ("alt_00_11", vec![&[0, 0], &[1, 1]]),
            _ => ("f010_111", vec![&[0, 1, 0], &[1, 1, 1]]),
        };
        let s = shift(name, "Z");
        let coords: Vec<i64> = coords.into_iter().collect();
        let f = CellSet::new(&IntLine, coords.iter().map(|&z| Cell::Int(z)));
        let got: BTreeSet<Vec<u8>> = s
            .enumerate(&f, Cert::Auto)
            .patterns()
            .map(|p| p.line_word(&IntLine).into_iter().map(|e| e.1).collect())
            .collect();
        prop_assert_eq!(got, brute(&blocks, &coords, 3));
    }
}

#[test]
fn allowed_patterns_are_locally_admissible_and_sorted() {
    for (name, sp, radius) in [("golden_mean", "Z2", 2), ("f010_111", "Dinf", 3), ("alt_00_11", "free:2", 1), ("golden_mean", "cycle:5", 2)] {
        let s = shift(name, sp);
        let f = ball(s.space.as_ref(), &s.space.origin(), radius);
        let set = s.enumerate(&f, Cert::Auto);
        assert!(!set.is_empty());
        let mut sorted = set.members.clone();
        sorted.sort();
        assert_eq!(&sorted, &set.members);
        for p in set.patterns() {
            assert!(s.locally_admissible(&p));
            assert!(s.allowed(&p, Cert::Auto).0);
        }
    }
}
