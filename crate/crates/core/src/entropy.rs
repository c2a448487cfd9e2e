//! Entropy estimates along finite prefixes of Følner nets, and the exact value on the line.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::cellspace::{all_cells, ball, boundary, CellSet, SpaceRef};
use crate::localmap::{LocalMap, MapError};
use crate::pattern::Exactness;
use crate::subshift::structure::segment;
use crate::subshift::{Cert, SubshiftSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EntropyError {
    #[error("space {0} is not amenable: no Følner net")]
    NotAmenable(String),
    #[error("interval windows need a line space, got {0}")]
    NeedsLine(String),
    #[error("shift {0} has no line automaton")]
    NoOracle(String),
    #[error("space {0} is infinite")]
    InfiniteSpace(String),
    #[error("empty window range")]
    NoWindows,
    #[error("unknown log base `{0}` (expected 2 or e)")]
    BadBase(String),
    #[error(transparent)]
    Map(#[from] MapError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum LogBase {
    #[default]
    Two,
    E,
}

impl LogBase {
    /// `log_base(n)` of a positive integer.
    pub fn log_big(self, n: &BigUint) -> f64 {
        let bits = n.bits();
        let l2 = if bits <= 64 {
            n.to_u64().unwrap() as f64
        } else {
            let top = (n >> (bits - 64)).to_u64().unwrap() as f64;
            return self.from_log2(top.log2() + (bits - 64) as f64);
        }
        .log2();
        self.from_log2(l2)
    }

    pub fn log(self, x: f64) -> f64 {
        self.from_log2(x.log2())
    }

    fn from_log2(self, l2: f64) -> f64 {
        match self {
            LogBase::Two => l2,
            LogBase::E => l2 * std::f64::consts::LN_2,
        }
    }

    pub fn exp(self, x: f64) -> f64 {
        match self {
            LogBase::Two => x.exp2(),
            LogBase::E => x.exp(),
        }
    }
}

impl FromStr for LogBase {
    type Err = EntropyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "2" => Ok(LogBase::Two),
            "e" => Ok(LogBase::E),
            _ => Err(EntropyError::BadBase(s.into())),
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LogBase::Two => "2",
            LogBase::E => "e",
        })
    }
}

/// Entropy of a possibly empty shift; `Empty` sorts below every finite value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EntropyValue {
    Empty,
    Finite(f64),
}

impl EntropyValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            EntropyValue::Finite(v) => Some(v),
            EntropyValue::Empty => None,
        }
    }

    pub fn compare(self, other: EntropyValue) -> Ordering {
        match (self, other) {
            (EntropyValue::Empty, EntropyValue::Empty) => Ordering::Equal,
            (EntropyValue::Empty, _) => Ordering::Less,
            (_, EntropyValue::Empty) => Ordering::Greater,
            (EntropyValue::Finite(a), EntropyValue::Finite(b)) => a.total_cmp(&b),
        }
    }

    fn of_count(count: &BigUint, cells: usize, base: LogBase) -> Self {
        if count.is_zero() {
            EntropyValue::Empty
        } else if cells == 0 {
            EntropyValue::Finite(0.0)
        } else {
            EntropyValue::Finite(base.log_big(count) / cells as f64)
        }
    }
}

impl fmt::Display for EntropyValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntropyValue::Empty => f.write_str("empty"),
            EntropyValue::Finite(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct FolnerPrefix {
    pub space: SpaceRef,
    pub windows: Vec<CellSet>,
}

impl FolnerPrefix {
    fn amenable(space: &SpaceRef) -> Result<(), EntropyError> {
        if space.is_amenable() {
            Ok(())
        } else {
            Err(EntropyError::NotAmenable(space.name()))
        }
    }

    /// `[0, n)` along the first generator for `n` in `sizes`.
    pub fn intervals(space: SpaceRef, sizes: std::ops::RangeInclusive<usize>) -> Result<Self, EntropyError> {
        Self::amenable(&space)?;
        if !space.is_line() {
            return Err(EntropyError::NeedsLine(space.name()));
        }
        let windows: Vec<CellSet> = sizes.filter(|&n| n > 0).map(|n| segment(space.as_ref(), n)).collect();
        if windows.is_empty() {
            return Err(EntropyError::NoWindows);
        }
        Ok(FolnerPrefix { space, windows })
    }

    pub fn balls(space: SpaceRef, radii: std::ops::RangeInclusive<usize>) -> Result<Self, EntropyError> {
        Self::amenable(&space)?;
        let o = space.origin();
        let windows: Vec<CellSet> = radii.map(|r| ball(space.as_ref(), &o, r)).collect();
        if windows.is_empty() {
            return Err(EntropyError::NoWindows);
        }
        Ok(FolnerPrefix { space, windows })
    }

    /// `|∂_ρ F_i| / |F_i|` per window.
    pub fn boundary_ratios(&self, rho: usize) -> Vec<f64> {
        self.windows
            .iter()
            .map(|f| boundary(self.space.as_ref(), f, rho).len() as f64 / f.len() as f64)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntropyEstimate {
    pub sizes: Vec<usize>,
    pub counts: Vec<BigUint>,
    pub values: Vec<EntropyValue>,
    pub exactness: Exactness,
    pub oracle: Option<EntropyValue>,
    pub base: LogBase,
}

fn estimate_from_counts(sizes: Vec<usize>, counts: Vec<(BigUint, Exactness)>, oracle: Option<EntropyValue>, base: LogBase) -> EntropyEstimate {
    let exactness = counts.iter().fold(Exactness::Exact, |e, c| e.meet(c.1));
    let counts: Vec<BigUint> = counts.into_iter().map(|c| c.0).collect();
    let values = counts.iter().zip(&sizes).map(|(c, &n)| EntropyValue::of_count(c, n, base)).collect();
    EntropyEstimate {
        sizes,
        counts,
        values,
        exactness,
        oracle,
        base,
    }
}

/// `log |X_{F_i}| / |F_i|` for each window of the prefix.
pub fn entropy_estimate(spec: &SubshiftSpec, prefix: &FolnerPrefix, cert: Cert, base: LogBase) -> Result<EntropyEstimate, EntropyError> {
    FolnerPrefix::amenable(&spec.space)?;
    let counts: Vec<(BigUint, Exactness)> = prefix.windows.par_iter().map(|f| spec.count(f, cert)).collect();
    let sizes = prefix.windows.iter().map(CellSet::len).collect();
    let oracle = exact_entropy_1d(spec, base).ok();
    Ok(estimate_from_counts(sizes, counts, oracle, base))
}

/// Log of the Perron root of the shift's line automaton.
pub fn exact_entropy_1d(spec: &SubshiftSpec, base: LogBase) -> Result<EntropyValue, EntropyError> {
    let g = spec.line_oracle().ok_or_else(|| EntropyError::NoOracle(spec.name.clone()))?;
    Ok(match g.perron_root(1e-12) {
        None => EntropyValue::Empty,
        Some(lambda) => EntropyValue::Finite(base.log(lambda)),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntropyComparison {
    pub first: EntropyEstimate,
    pub second: EntropyEstimate,
    /// `first` against `second` per window.
    pub order: Vec<Ordering>,
    pub oracle_gap: Option<f64>,
}

fn comparison(first: EntropyEstimate, second: EntropyEstimate) -> EntropyComparison {
    let order = first.values.iter().zip(&second.values).map(|(a, b)| a.compare(*b)).collect();
    let oracle_gap = match (first.oracle.and_then(EntropyValue::finite), second.oracle.and_then(EntropyValue::finite)) {
        (Some(a), Some(b)) => Some(a - b),
        _ => None,
    };
    EntropyComparison {
        first,
        second,
        order,
        oracle_gap,
    }
}

pub fn compare_shifts(a: &SubshiftSpec, b: &SubshiftSpec, prefix: &FolnerPrefix, cert: Cert, base: LogBase) -> Result<EntropyComparison, EntropyError> {
    Ok(comparison(entropy_estimate(a, prefix, cert, base)?, entropy_estimate(b, prefix, cert, base)?))
}

/// Domain of `map` against its image, counted through `image_patterns`.
pub fn compare_image(map: &LocalMap, prefix: &FolnerPrefix, cert: Cert, base: LogBase) -> Result<EntropyComparison, EntropyError> {
    let domain = entropy_estimate(&map.domain, prefix, cert, base)?;
    let counts = prefix
        .windows
        .par_iter()
        .map(|f| map.image_patterns(f, cert).map(|s| (BigUint::from(s.len()), s.exactness)))
        .collect::<Result<Vec<_>, _>>()?;
    let sizes = prefix.windows.iter().map(CellSet::len).collect();
    Ok(comparison(domain, estimate_from_counts(sizes, counts, None, base)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct FiniteCount {
    pub cells: usize,
    pub count: BigUint,
    pub entropy: EntropyValue,
    /// `exp(|M| · ent)`, rounded; zero for the empty shift.
    pub reconstructed: BigUint,
}

impl FiniteCount {
    pub fn identity_holds(&self) -> bool {
        self.count == self.reconstructed
    }
}

/// `|X|` on a finite space, where the constant net `F_i = M` gives `ent = log|X| / |M|`.
pub fn finite_space_count(spec: &SubshiftSpec, base: LogBase) -> Result<FiniteCount, EntropyError> {
    let all = all_cells(spec.space.as_ref()).ok_or_else(|| EntropyError::InfiniteSpace(spec.space.name()))?;
    let (count, _) = spec.count(&all, Cert::Auto);
    let entropy = EntropyValue::of_count(&count, all.len(), base);
    let reconstructed = match entropy {
        EntropyValue::Empty => BigUint::zero(),
        EntropyValue::Finite(h) => BigUint::from(base.exp(all.len() as f64 * h).round() as u128),
    };
    Ok(FiniteCount {
        cells: all.len(),
        count,
        entropy,
        reconstructed,
    })
}
