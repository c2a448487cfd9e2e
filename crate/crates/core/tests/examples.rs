//! Worked examples checked against brute force over all binary words.

use num_bigint::BigUint;
use shiftlab::cellspace::{parse_space, Cell, CellSet, IntLine};
use shiftlab::entropy::{entropy_estimate, exact_entropy_1d, FolnerPrefix, LogBase};
use shiftlab::localmap::named_map;
use shiftlab::pattern::{Exactness, Pattern};
use shiftlab::subshift::{Cert, SubshiftSpec};

fn shift(name: &str) -> SubshiftSpec {
    SubshiftSpec::named(name, parse_space("Z").unwrap()).unwrap()
}

fn interval(n: usize) -> CellSet {
    CellSet::new(&IntLine, (0..n as i64).map(Cell::Int))
}

fn words(n: usize) -> impl Iterator<Item = String> {
    (0u32..1 << n).map(move |w| (0..n).map(|i| if w >> i & 1 == 1 { '1' } else { '0' }).collect())
}

fn word_of(p: &Pattern) -> String {
    p.line_word(&IntLine).iter().map(|e| char::from(b'0' + e.1)).collect()
}

/// Words of the even shift: every run of 0s between two 1s has even length.
fn in_even_shift(w: &str) -> bool {
    let inner = w.trim_matches('0');
    inner.split('1').all(|run| run.len() % 2 == 0)
}

/// Extendable words of the shift forbidding 010 and 111: checked by padding both sides.
fn in_f010_111(w: &str) -> bool {
    let ok = |s: &str| !s.contains("010") && !s.contains("111");
    ["", "0", "00", "1", "11", "01", "10"]
        .iter()
        .any(|l| ["", "0", "00", "1", "11", "01", "10"].iter().any(|r| ok(&format!("{l}{w}{r}"))))
        && ok(w)
}

#[test]
fn golden_mean_patterns_are_the_words_without_11() {
    let g = shift("golden_mean");
    for n in 1..=12 {
        let set = g.enumerate(&interval(n), Cert::Auto);
        assert_eq!(set.exactness, Exactness::Exact);
        let mut got: Vec<String> = set.patterns().map(|p| word_of(&p)).collect();
        let mut want: Vec<String> = words(n).filter(|w| !w.contains("11")).collect();
        got.sort();
        want.sort();
        assert_eq!(got, want, "n = {n}");
    }
}

#[test]
fn even_shift_counts_match_brute_force() {
    let e = shift("even");
    for n in 1..=12 {
        let (count, exactness) = e.count(&interval(n), Cert::Auto);
        assert_eq!(exactness, Exactness::Exact);
        assert_eq!(count, BigUint::from(words(n).filter(|w| in_even_shift(w)).count()), "n = {n}");
    }
}

#[test]
fn f010_111_counts_match_brute_force() {
    let f = shift("f010_111");
    for n in 1..=10 {
        let (count, _) = f.count(&interval(n), Cert::Auto);
        assert_eq!(count, BigUint::from(words(n).filter(|w| in_f010_111(w)).count()), "n = {n}");
    }
}

#[test]
fn certified_counts_agree_with_the_oracle() {
    let g = shift("golden_mean");
    for n in 1..=10 {
        let exact = g.count(&interval(n), Cert::Auto);
        let certified = g.count(&interval(n), Cert::Radius(3));
        assert_eq!(exact.0, certified.0);
        assert_eq!(certified.1, Exactness::Certified(3));
    }
}

#[test]
fn entropy_bases_differ_by_ln_2() {
    let g = shift("golden_mean");
    let two = exact_entropy_1d(&g, LogBase::Two).unwrap().finite().unwrap();
    let e = exact_entropy_1d(&g, LogBase::E).unwrap().finite().unwrap();
    assert!((two * std::f64::consts::LN_2 - e).abs() < 1e-12);
    let prefix = FolnerPrefix::intervals(parse_space("Z").unwrap(), 1..=30).unwrap();
    let est = entropy_estimate(&g, &prefix, Cert::Auto, LogBase::Two).unwrap();
    let last = est.values.last().unwrap().finite().unwrap();
    assert!(last > two && last - two < 0.05);
    // estimates decrease towards the oracle from above on intervals
    for pair in est.values.windows(2) {
        assert!(pair[1].finite().unwrap() <= pair[0].finite().unwrap() + 1e-12);
    }
}

#[test]
fn paper_map_slides_its_table() {
    let m = named_map("golden_to_even", parse_space("Z").unwrap()).unwrap();
    for w in words(10).filter(|w| !w.contains("11")) {
        let p = Pattern::on_interval(&IntLine, 0, &w.bytes().map(|b| b - b'0').collect::<Vec<_>>());
        let image = word_of(&m.apply_sliding(&p).unwrap());
        let by_hand: String = w.as_bytes().windows(2).map(|x| if x == b"00" { '1' } else { '0' }).collect();
        assert_eq!(image, by_hand, "{w}");
        assert!(in_even_shift(&image), "{w} -> {image}");
    }
}
