//! Command-line driver: loads an experiment configuration, runs one command and writes
//! JSON-lines records (or an aligned table).

pub mod bundled;
mod render;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use shiftlab::cellspace::{parse_space, Cell, CellSet, Space};
use shiftlab::config::{parse_range, ConfigError, ExperimentConfig};
use shiftlab::entropy::{entropy_estimate, EntropyError, FolnerPrefix, LogBase};
use shiftlab::goe::{glue, goe_experiment, GoeBounds, GoeError};
use shiftlab::pattern::Pattern;
use shiftlab::subshift::structure::{
    ball_windows, check_bounded_propagation, check_kappa_step, check_strong_irreducibility, segment, segment_windows,
    IrreducibilityVerdict, PropagationVerdict, StepVerdict,
};
use shiftlab::subshift::{Cert, SubshiftError};
use shiftlab::tiling::{greedy_tiling, verify_tiling, TilingError};

pub use render::pattern_text;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Config { path: String, source: ConfigError },
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Subshift(#[from] SubshiftError),
    #[error(transparent)]
    Entropy(#[from] EntropyError),
    #[error(transparent)]
    Tiling(#[from] TilingError),
    #[error(transparent)]
    Goe(#[from] GoeError),
    #[error(transparent)]
    Output(#[from] std::io::Error),
}

impl From<shiftlab::localmap::MapError> for CliError {
    fn from(e: shiftlab::localmap::MapError) -> Self {
        CliError::Goe(e.into())
    }
}

#[derive(Parser, Debug)]
#[command(name = "shiftlab", version, about = "Subshifts, local maps, tilings and Garden-of-Eden checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutFormat::Json, global = true)]
    pub out: OutFormat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Json,
    Table,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Config file, or `bundled:<name>` for a bundled example.
    #[arg(long)]
    pub config: String,
    /// Certify window results by extension to this radius instead of the exact oracle.
    #[arg(long)]
    pub cert_radius: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Allowed patterns on a ball or an explicit cell list.
    Enumerate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        radius: Option<usize>,
        /// Cells separated by `;`.
        #[arg(long)]
        cells: Option<String>,
    },
    /// Searches for a pattern whose κ-balls are allowed but which is not.
    CheckStep {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        kappa: Option<usize>,
        #[arg(long)]
        radius: Option<usize>,
    },
    /// Bounded propagation over segment windows (line spaces) or subsets of a ball.
    CheckBp {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        rho: Option<usize>,
        /// Largest window width on line spaces, ball radius elsewhere.
        #[arg(long)]
        radius: Option<usize>,
    },
    /// Strong irreducibility for pairs of two-cell patterns inside a ball.
    CheckSi {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        kappa: Option<usize>,
        #[arg(long)]
        radius: Option<usize>,
    },
    /// Builds and verifies a tiling.
    Tile {
        #[arg(long)]
        config: Option<String>,
        #[arg(long)]
        space: Option<String>,
        #[arg(long)]
        theta: Option<usize>,
        #[arg(long)]
        kappa: Option<usize>,
        #[arg(long)]
        radius: Option<usize>,
    },
    /// Entropy estimates along intervals `[0, n)` (or balls with `--balls`).
    Entropy {
        #[command(flatten)]
        common: Common,
        /// Window sizes (interval lengths or ball radii) as `a..b`.
        #[arg(long)]
        windows: Option<String>,
        /// `2` or `e`.
        #[arg(long)]
        log_base: Option<String>,
        #[arg(long)]
        balls: bool,
    },
    /// Garden-of-Eden report for the configured rule.
    Goe {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        rho_max: Option<usize>,
        #[arg(long)]
        r_max: Option<usize>,
        #[arg(long)]
        max_period: Option<usize>,
    },
    /// Glues patterns into a base pattern on a line window.
    Glue {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        kappa: Option<usize>,
        /// First coordinate of the window.
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        start: i64,
        /// Base word on the window.
        #[arg(long)]
        base: String,
        /// `<cells>@<word>`: the piece's cells (`;`-separated) and its word on the window.
        #[arg(long)]
        piece: Vec<String>,
    },
    /// Lists bundled examples, or prints one with `--show`.
    Examples {
        #[arg(long)]
        show: Option<String>,
    },
}

/// One output line.
#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct ResultRecord {
    pub command: String,
    pub config_hash: String,
    pub tool_version: String,
    pub payload: Value,
}

fn hash_text(text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

pub fn load_config(source: &str) -> Result<ExperimentConfig, CliError> {
    let text = match source.strip_prefix("bundled:") {
        Some(name) => bundled::find(name)
            .ok_or_else(|| CliError::Usage(format!("no bundled example `{name}`")))?
            .toml
            .to_string(),
        None => std::fs::read_to_string(PathBuf::from(source)).map_err(|e| CliError::Io {
            path: source.into(),
            source: e,
        })?,
    };
    ExperimentConfig::parse(&text).map_err(|e| CliError::Config {
        path: source.into(),
        source: e,
    })
}

struct Emitter {
    command: String,
    hash: String,
    records: Vec<ResultRecord>,
}

impl Emitter {
    fn new(command: &str, canonical: &str) -> Self {
        Emitter {
            command: command.into(),
            hash: hash_text(canonical),
            records: Vec::new(),
        }
    }

    fn push(&mut self, payload: Value) {
        self.records.push(ResultRecord {
            command: self.command.clone(),
            config_hash: self.hash.clone(),
            tool_version: VERSION.into(),
            payload,
        });
    }
}

fn write_json(records: &[ResultRecord], out: &mut dyn Write) -> std::io::Result<()> {
    for r in records {
        writeln!(out, "{}", serde_json::to_string(r).expect("records serialise"))?;
    }
    Ok(())
}

fn cell_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn write_table(records: &[ResultRecord], out: &mut dyn Write) -> std::io::Result<()> {
    let Some(first) = records.first() else { return Ok(()) };
    let keys: Vec<String> = match &first.payload {
        Value::Object(m) => m.keys().cloned().collect(),
        _ => vec!["value".into()],
    };
    let rows: Vec<Vec<String>> = records
        .iter()
        .map(|r| match &r.payload {
            Value::Object(m) => keys.iter().map(|k| m.get(k).map_or("-".into(), cell_text)).collect(),
            other => vec![cell_text(other)],
        })
        .collect();
    let widths: Vec<usize> = (0..keys.len())
        .map(|i| rows.iter().map(|r| r[i].chars().count()).chain([keys[i].len()]).max().unwrap_or(0))
        .collect();
    let line = |cells: &[String]| -> String {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
        padded.join("  ").trim_end().to_string()
    };
    writeln!(out, "{}", line(&keys))?;
    for r in &rows {
        writeln!(out, "{}", line(r))?;
    }
    Ok(())
}

fn cert_of(common: &Common, config: &ExperimentConfig) -> Cert {
    common.cert_radius.map_or_else(|| config.cert(), Cert::Radius)
}

fn parse_cells(space: &dyn Space, text: &str) -> Result<CellSet, CliError> {
    let cells = text
        .split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|c| space.parse_cell(c.trim()))
        .collect::<Result<Vec<Cell>, _>>()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(CellSet::new(space, cells))
}

/// Runs one command, writing its records to `out`; returns the process exit code.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let (records, code) = execute(&cli.command)?;
    match cli.out {
        OutFormat::Json => write_json(&records, out)?,
        OutFormat::Table => write_table(&records, out)?,
    }
    Ok(code)
}

/// Runs one command and returns its records with the exit code.
pub fn execute(command: &Command) -> Result<(Vec<ResultRecord>, i32), CliError> {
    match command {
        Command::Enumerate { common, radius, cells } => {
            let config = load_config(&common.config)?;
            let spec = config.subshift().map_err(|e| cfg_err(common, e))?;
            let space = spec.space.as_ref();
            let f = match cells {
                Some(c) => parse_cells(space, c)?,
                None => shiftlab::cellspace::ball(space, &space.origin(), radius.or(config.params.radius).unwrap_or(1)),
            };
            let set = spec.enumerate(&f, cert_of(common, &config));
            let mut em = Emitter::new("enumerate", &config.to_toml());
            for p in set.patterns() {
                let text = pattern_text(space, &spec.alphabet, &p);
                em.push(json!({ "hash": hash_text(&text), "pattern": text, "exactness": set.exactness.to_string() }));
            }
            Ok((em.records, 0))
        }
        Command::CheckStep { common, kappa, radius } => {
            let config = load_config(&common.config)?;
            let spec = config.subshift().map_err(|e| cfg_err(common, e))?;
            let kappa = kappa.or(config.params.kappa).unwrap_or(1);
            let radius = radius.or(config.params.radius).unwrap_or(kappa + 3);
            let mut em = Emitter::new("check-step", &config.to_toml());
            let payload = match check_kappa_step(&spec, kappa, radius, cert_of(common, &config))? {
                StepVerdict::Holds { radius, exactness } => {
                    json!({ "kappa": kappa, "verdict": "holds", "radius": radius, "exactness": exactness.to_string() })
                }
                StepVerdict::Counterexample { pattern, exactness } => json!({
                    "kappa": kappa,
                    "verdict": "counterexample",
                    "radius": radius,
                    "pattern": pattern_text(spec.space.as_ref(), &spec.alphabet, &pattern),
                    "exactness": exactness.to_string(),
                }),
            };
            em.push(payload);
            Ok((em.records, 0))
        }
        Command::CheckBp { common, rho, radius } => {
            let config = load_config(&common.config)?;
            let spec = config.subshift().map_err(|e| cfg_err(common, e))?;
            let space = spec.space.as_ref();
            let rho = rho.or(config.params.rho).unwrap_or(1);
            let windows = if space.is_line() {
                segment_windows(space, radius.or(config.params.radius).unwrap_or(6))
            } else {
                ball_windows(space, radius.or(config.params.radius).unwrap_or(1))
            };
            let mut em = Emitter::new("check-bp", &config.to_toml());
            let payload = match check_bounded_propagation(&spec, rho, &windows, cert_of(common, &config)) {
                PropagationVerdict::Holds { windows, exactness } => {
                    json!({ "rho": rho, "verdict": "holds", "windows": windows, "exactness": exactness.to_string() })
                }
                PropagationVerdict::Violation { pattern, exactness } => json!({
                    "rho": rho,
                    "verdict": "violation",
                    "pattern": pattern_text(space, &spec.alphabet, &pattern),
                    "exactness": exactness.to_string(),
                }),
            };
            em.push(payload);
            Ok((em.records, 0))
        }
        Command::CheckSi { common, kappa, radius } => {
            let config = load_config(&common.config)?;
            let spec = config.subshift().map_err(|e| cfg_err(common, e))?;
            let space = spec.space.as_ref();
            let kappa = kappa.or(config.params.kappa).unwrap_or(1);
            let radius = radius.or(config.params.radius).unwrap_or(2 * kappa + 4);
            let shapes = [segment(space, 2)];
            let mut em = Emitter::new("check-si", &config.to_toml());
            let payload = match check_strong_irreducibility(&spec, kappa, &shapes, radius, cert_of(common, &config)) {
                IrreducibilityVerdict::Certified { radius, exactness } => {
                    json!({ "kappa": kappa, "verdict": "certified", "radius": radius, "exactness": exactness.to_string() })
                }
                IrreducibilityVerdict::Counterexample { first, second, exactness } => json!({
                    "kappa": kappa,
                    "verdict": "counterexample",
                    "first": pattern_text(space, &spec.alphabet, &first),
                    "second": pattern_text(space, &spec.alphabet, &second),
                    "exactness": exactness.to_string(),
                }),
            };
            em.push(payload);
            Ok((em.records, 0))
        }
        Command::Tile { config, space, theta, kappa, radius } => {
            let cfg = config.as_deref().map(load_config).transpose()?;
            let space_name = space
                .clone()
                .or_else(|| cfg.as_ref().map(|c| c.space.clone()))
                .ok_or_else(|| CliError::Usage("tile needs --space or --config".into()))?;
            let sp = parse_space(&space_name).map_err(|e| CliError::Usage(e.to_string()))?;
            let params = cfg.as_ref().map(|c| c.params.clone()).unwrap_or_default();
            let theta = theta.or(params.theta).unwrap_or(1);
            let kappa = kappa.or(params.kappa).unwrap_or(1);
            let radius = radius.or(params.radius).unwrap_or(10);
            let t = greedy_tiling(sp.as_ref(), theta, kappa, radius)?;
            let v = verify_tiling(sp.as_ref(), &t.points, theta, kappa, t.theta_prime, radius);
            let mut em = Emitter::new("tile", &format!("space = {space_name:?}\ntheta = {theta}\nkappa = {kappa}\nradius = {radius}\n"));
            for p in t.points.iter() {
                em.push(json!({ "point": sp.format_cell(p) }));
            }
            em.push(json!({
                "theta": theta,
                "kappa": kappa,
                "theta_prime": t.theta_prime,
                "radius": radius,
                "points": t.points.len(),
                "passes": v.passes(),
                "too_close": v.too_close.iter().map(|(a, b)| format!("{} {}", sp.format_cell(a), sp.format_cell(b))).collect::<Vec<_>>(),
                "uncovered": v.uncovered.iter().map(|c| sp.format_cell(c)).collect::<Vec<_>>(),
            }));
            Ok((em.records, 0))
        }
        Command::Entropy { common, windows, log_base, balls } => {
            let config = load_config(&common.config)?;
            let spec = config.subshift().map_err(|e| cfg_err(common, e))?;
            let range_text = windows.clone().or(config.params.windows.clone()).unwrap_or_else(|| "1..10".into());
            let range = parse_range(&range_text).map_err(|e| cfg_err(common, e))?;
            let base: LogBase = log_base.clone().or(config.params.log_base.clone()).unwrap_or_else(|| "2".into()).parse()?;
            let prefix = if *balls || !spec.space.is_line() {
                FolnerPrefix::balls(spec.space.clone(), range.clone())?
            } else {
                FolnerPrefix::intervals(spec.space.clone(), range.clone())?
            };
            let e = entropy_estimate(&spec, &prefix, cert_of(common, &config), base)?;
            let mut em = Emitter::new("entropy", &config.to_toml());
            for (k, n) in range.enumerate() {
                em.push(json!({
                    "i": n,
                    "size": e.sizes[k],
                    "count": render::big(&e.counts[k]),
                    "estimate": render::entropy_value(e.values[k]),
                    "exactness": e.exactness.to_string(),
                    "oracle": e.oracle.map(render::entropy_value),
                    "log_base": base.to_string(),
                }));
            }
            Ok((em.records, 0))
        }
        Command::Goe { common, rho_max, r_max, max_period } => {
            let config = load_config(&common.config)?;
            let map = config
                .local_map()
                .map_err(|e| cfg_err(common, e))?
                .ok_or_else(|| CliError::Usage("goe needs a [rule] section".into()))?;
            map.validate(cert_of(common, &config))?;
            let defaults = GoeBounds::default();
            let bounds = GoeBounds {
                rho_max: rho_max.or(config.params.rho_max).unwrap_or(defaults.rho_max),
                r_max: r_max.or(config.params.r_max).unwrap_or(defaults.r_max),
                max_period: max_period.unwrap_or(defaults.max_period),
                cert: cert_of(common, &config),
                ..defaults
            };
            let report = goe_experiment(&map, bounds)?;
            let mut em = Emitter::new("goe", &config.to_toml());
            em.push(render::goe_report(map.space(), &map.domain.alphabet, &map.codomain.alphabet, &report));
            Ok((em.records, report.consistency.exit_code()))
        }
        Command::Glue { common, kappa, start, base, piece } => {
            let config = load_config(&common.config)?;
            let spec = config.subshift().map_err(|e| cfg_err(common, e))?;
            let space = spec.space.as_ref();
            if !space.is_line() {
                return Err(CliError::Usage("glue from the command line needs a line space".into()));
            }
            let kappa = kappa.or(config.params.kappa).or(spec.memory()).unwrap_or(1);
            let word = |w: &str| -> Result<Pattern, CliError> {
                let v = spec.alphabet.parse_word(w).map_err(|e| CliError::Usage(e.to_string()))?;
                Ok(Pattern::on_interval(space, *start, &v))
            };
            let x = word(base)?;
            let pieces = piece
                .iter()
                .map(|p| {
                    let (cells, w) = p.split_once('@').ok_or_else(|| CliError::Usage(format!("piece `{p}` is not <cells>@<word>")))?;
                    Ok((parse_cells(space, cells)?, word(w)?))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            let out = glue(&spec, kappa, &x, &pieces)?;
            let mut em = Emitter::new("glue", &config.to_toml());
            em.push(json!({
                "kappa": kappa,
                "result": pattern_text(space, &spec.alphabet, &out),
                "locally_admissible": spec.locally_admissible(&out),
            }));
            Ok((em.records, 0))
        }
        Command::Examples { show } => {
            if let Some(name) = show {
                let b = bundled::find(name).ok_or_else(|| CliError::Usage(format!("no bundled example `{name}`")))?;
                let mut em = Emitter::new("examples", b.toml);
                em.push(json!({ "name": b.name, "config": b.toml }));
                return Ok((em.records, 0));
            }
            let mut em = Emitter::new("examples", "");
            for b in bundled::BUNDLED {
                let config = ExperimentConfig::parse(b.toml).map_err(|e| CliError::Config {
                    path: format!("bundled:{}", b.name),
                    source: e,
                })?;
                let spec = config.subshift().map_err(|e| CliError::Config {
                    path: format!("bundled:{}", b.name),
                    source: e,
                })?;
                em.push(json!({
                    "name": b.name,
                    "description": b.description,
                    "space": config.space,
                    "finite_type": spec.is_finite_type(),
                    "has_rule": config.rule.is_some(),
                    "command": b.command.join(" "),
                }));
            }
            Ok((em.records, 0))
        }
    }
}

fn cfg_err(common: &Common, e: ConfigError) -> CliError {
    CliError::Config {
        path: common.config.clone(),
        source: e,
    }
}

/// Arguments that run a bundled example's default command.
pub fn bundled_args(b: &bundled::Bundled) -> Vec<String> {
    let mut args = vec!["shiftlab".to_string()];
    args.extend(b.command.iter().map(|s| s.to_string()));
    args.push("--config".into());
    args.push(format!("bundled:{}", b.name));
    args
}

#[cfg(test)]
mod tests;
