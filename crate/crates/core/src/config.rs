//! Declarative experiment configuration in TOML.
//!
//! ```toml
//! space = "Z"
//! shift = "golden_mean"
//!
//! [rule]
//! kappa = 1
//! neighbourhood = ["0", "+1"]
//! codomain = "even"
//! table = [{ in = "00", out = "1" }, { in = "01", out = "0" }, { in = "10", out = "0" }]
//! ```
//!
//! Instead of `shift`, a generic shift of finite type lists `alphabet` and `[[forbidden]]`
//! blocks with `cells` and `values`.

use std::ops::RangeInclusive;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cellspace::{parse_space, Cell, SpaceRef};
use crate::localmap::{named_map, LocalMap, LocalRule, MapError};
use crate::pattern::{Alphabet, Pattern};
use crate::subshift::{Cert, SubshiftError, SubshiftSpec};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{0}")]
    Parse(#[from] toml::de::Error),
    #[error("field `{field}`: {message}")]
    Invalid { field: String, message: String },
    #[error(transparent)]
    Subshift(#[from] SubshiftError),
    #[error(transparent)]
    Map(#[from] MapError),
}

fn invalid(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        field: field.into(),
        message: message.into(),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub space: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphabet: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub forbidden: Vec<BlockConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule: Option<RuleConfig>,
    #[serde(default, skip_serializing_if = "Params::is_empty")]
    pub params: Params,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockConfig {
    pub cells: Vec<String>,
    /// One symbol per cell, as a word over the alphabet.
    pub values: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleConfig {
    /// A built-in rule; the other fields are then ignored except `codomain`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub named: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub neighbourhood: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub table: Vec<TableEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default: Option<String>,
    /// Named codomain shift; the full shift over the domain alphabet when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub codomain: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntry {
    /// Values on the neighbourhood, in the order listed.
    #[serde(rename = "in")]
    pub input: String,
    pub out: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cert_radius: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub log_base: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub windows: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u32>,
}

impl Params {
    pub fn is_empty(&self) -> bool {
        *self == Params::default()
    }
}

/// Parses `a..b` (inclusive).
pub fn parse_range(s: &str) -> Result<RangeInclusive<usize>, ConfigError> {
    let bad = || invalid("windows", format!("expected `a..b`, got `{s}`"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let c: ExperimentConfig = toml::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    fn validate(&self) -> Result<(), ConfigError> {
        if self.shift.is_some() && (self.alphabet.is_some() || !self.forbidden.is_empty()) {
            return Err(invalid("shift", "give either a named shift or an alphabet with forbidden blocks"));
        }
        if self.shift.is_none() && self.alphabet.is_none() {
            return Err(invalid("shift", "missing: give `shift` or `alphabet`"));
        }
        if let Some(w) = &self.params.windows {
            parse_range(w)?;
        }
        Ok(())
    }

    pub fn space_ref(&self) -> Result<SpaceRef, ConfigError> {
        parse_space(&self.space).map_err(|e| invalid("space", e.to_string()))
    }

    pub fn cert(&self) -> Cert {
        self.params.cert_radius.map_or(Cert::Auto, Cert::Radius)
    }

    pub fn subshift(&self) -> Result<SubshiftSpec, ConfigError> {
        let space = self.space_ref()?;
        if let Some(name) = &self.shift {
            return Ok(SubshiftSpec::named(name, space)?);
        }
        let alphabet = Alphabet::new(self.alphabet.clone().unwrap_or_default()).map_err(|e| invalid("alphabet", e.to_string()))?;
        let mut blocks = Vec::new();
        for (i, b) in self.forbidden.iter().enumerate() {
            let field = format!("forbidden[{i}]");
            let cells = b
                .cells
                .iter()
                .map(|c| space.parse_cell(c))
                .collect::<Result<Vec<Cell>, _>>()
                .map_err(|e| invalid(&field, e.to_string()))?;
            let values = alphabet.parse_word(&b.values).map_err(|e| invalid(&field, e.to_string()))?;
            if values.len() != cells.len() {
                return Err(invalid(&field, "one value per cell expected"));
            }
            blocks.push(Pattern::from_cells(space.as_ref(), cells.into_iter().zip(values)));
        }
        let name = self.name.clone().unwrap_or_else(|| "custom".into());
        Ok(SubshiftSpec::forbidden(name, space, alphabet, blocks)?)
    }

    /// The configured map, with the configured shift as its domain.
    pub fn local_map(&self) -> Result<Option<LocalMap>, ConfigError> {
        let Some(rule) = &self.rule else { return Ok(None) };
        let space = self.space_ref()?;
        let domain = Arc::new(self.subshift()?);
        let codomain = match &rule.codomain {
            Some(name) if name == "same" => domain.clone(),
            Some(name) => Arc::new(SubshiftSpec::named(name, space.clone())?),
            None => Arc::new(SubshiftSpec::forbidden("full", space.clone(), domain.alphabet.clone(), vec![])?),
        };
        if let Some(name) = &rule.named {
            let base = named_map(name, space)?;
            let codomain = if rule.codomain.is_some() { codomain } else { base.codomain };
            return Ok(Some(LocalMap::new(name.clone(), base.rule, domain, codomain)?));
        }
        let kappa = rule.kappa.ok_or_else(|| invalid("rule.kappa", "missing"))?;
        let cells = rule
            .neighbourhood
            .iter()
            .map(|c| space.parse_cell(c))
            .collect::<Result<Vec<Cell>, _>>()
            .map_err(|e| invalid("rule.neighbourhood", e.to_string()))?;
        if cells.is_empty() {
            return Err(invalid("rule.neighbourhood", "missing"));
        }
        let out_symbol = |s: &str, field: &str| -> Result<u8, ConfigError> { codomain.alphabet.index(s).map_err(|e| invalid(field, e.to_string())) };
        let mut entries = Vec::new();
        for (i, e) in rule.table.iter().enumerate() {
            let field = format!("rule.table[{i}]");
            let input = domain.alphabet.parse_word(&e.input).map_err(|err| invalid(&field, err.to_string()))?;
            if input.len() != cells.len() {
                return Err(invalid(&field, "one input value per neighbourhood cell expected"));
            }
            entries.push((input, out_symbol(&e.out, &field)?));
        }
        let default = rule.default.as_deref().map(|d| out_symbol(d, "rule.default")).transpose()?;
        let local = LocalRule::from_listed(space.as_ref(), kappa, &cells, &entries, default)?;
        let name = self.name.clone().unwrap_or_else(|| "rule".into());
        Ok(Some(LocalMap::new(name, local, domain, codomain)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::Exactness;
    use crate::subshift::Cert;
    use proptest::prelude::*;

    const PAPER_MAP: &str = r#"
name = "paper_map"
space = "Z"
shift = "golden_mean"

[rule]
kappa = 1
neighbourhood = ["0", "+1"]
codomain = "even"
table = [{ in = "00", out = "1" }, { in = "01", out = "0" }, { in = "10", out = "0" }]

[params]
rho_max = 8
r_max = 6
"#;

    #[test]
    fn paper_map_config() {
        let c = ExperimentConfig::parse(PAPER_MAP).unwrap();
        let m = c.local_map().unwrap().unwrap();
        let named = named_map("golden_to_even", parse_space("Z").unwrap()).unwrap();
        assert_eq!(m.rule, named.rule);
        assert_eq!(m.codomain.name, "even");
        assert_eq!(m.validate(Cert::Auto).unwrap(), Exactness::Exact);
    }

    #[test]
    fn generic_shift_of_finite_type() {
        let text = r#"
space = "Z2"
alphabet = ["0", "1"]
[[forbidden]]
cells = ["(0,0)", "(1,0)"]
values = "11"
[[forbidden]]
cells = ["(0,0)", "(0,1)"]
values = "11"
"#;
        let c = ExperimentConfig::parse(text).unwrap();
        let s = c.subshift().unwrap();
        let named = SubshiftSpec::named("gg_mean:1:(0,0);(1,0)/(0,0);(0,1)", c.space_ref().unwrap()).unwrap();
        let b = crate::cellspace::ball(s.space.as_ref(), &s.space.origin(), 1);
        assert_eq!(s.enumerate(&b, Cert::Radius(1)), named.enumerate(&b, Cert::Radius(1)));
    }

    #[test]
    fn schema_errors() {
        assert!(matches!(ExperimentConfig::parse(""), Err(ConfigError::Parse(_))));
        let e = ExperimentConfig::parse("space = \"Z\"\nshfit = \"x\"\n").unwrap_err().to_string();
        assert!(e.contains("shfit") && e.contains("line 2"), "{e}");
        assert!(matches!(ExperimentConfig::parse("space = \"Z\"\n"), Err(ConfigError::Invalid { .. })));
        let c = ExperimentConfig::parse("space = \"Q\"\nshift = \"full\"\n").unwrap();
        assert!(matches!(c.subshift(), Err(ConfigError::Invalid { field, .. }) if field == "space"));
        let bad_len = "space = \"Z\"\nalphabet = [\"0\",\"1\"]\n[[forbidden]]\ncells = [\"0\"]\nvalues = \"11\"\n";
        let c = ExperimentConfig::parse(bad_len).unwrap();
        assert!(matches!(c.subshift(), Err(ConfigError::Invalid { field, .. }) if field == "forbidden[0]"));
        assert!(parse_range("3..1").is_err());
        assert_eq!(parse_range("1..40").unwrap(), 1..=40);
    }

    #[test]
    fn named_rule_with_overrides() {
        let text = "space = \"Z\"\nshift = \"golden_mean\"\n[rule]\nnamed = \"identity\"\ncodomain = \"same\"\n";
        let m = ExperimentConfig::parse(text).unwrap().local_map().unwrap().unwrap();
        assert!(Arc::ptr_eq(&m.domain, &m.codomain));
    }

    fn arb_config() -> impl Strategy<Value = ExperimentConfig> {
        let shift = prop_oneof![
            Just((Some("golden_mean".to_string()), None, vec![])),
            Just((
                None,
                Some(vec!["a".to_string(), "b".to_string()]),
                vec![BlockConfig { cells: vec!["0".into(), "+1".into()], values: "ab".into() }]
            )),
        ];
        let rule = prop_oneof![
            Just(None),
            Just(Some(RuleConfig { named: Some("xor".into()), ..RuleConfig::default() })),
            (0usize..3).prop_map(|k| Some(RuleConfig {
                kappa: Some(k),
                neighbourhood: vec!["0".into()],
                table: vec![TableEntry { input: "0".into(), out: "1".into() }],
                default: Some("0".into()),
                ..RuleConfig::default()
            })),
        ];
        (shift, rule, proptest::option::of(0usize..9), proptest::option::of("[0-9]\\.\\.[1-9][0-9]"), proptest::option::of(any::<u32>()))
            .prop_map(|((shift, alphabet, forbidden), rule, cert_radius, windows, seed)| ExperimentConfig {
                name: Some("sample".into()),
                space: "Z".into(),
                shift,
                alphabet,
                forbidden,
                rule,
                params: Params { cert_radius, windows, seed, ..Params::default() },
            })
    }

    proptest! {
        #[test]
        fn configs_round_trip(c in arb_config()) {
            let text = c.to_toml();
            let back: ExperimentConfig = toml::from_str(&text).unwrap();
            prop_assert_eq!(back, c);
        }
    }
}
