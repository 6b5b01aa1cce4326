//! Versioned JSON configuration, overridable from the command line.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use lpbridge::cclpd::ChannelModel;
use lpbridge::lp::Mode;
use lpbridge::tanner::{construct, read_alist_file, ConstructionKind, ConstructionSpec};
use lpbridge::{corpus, Gf2Matrix};
use serde::{Deserialize, Serialize};

pub const SCHEMA: u32 = 1;

/// Where the matrix comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum MatrixSource {
    Construct(ConstructionSpec),
    Alist(PathBuf),
    Corpus(String),
}

impl MatrixSource {
    pub fn load(&self) -> Result<Gf2Matrix> {
        match self {
            MatrixSource::Construct(spec) => construct(spec)?
                .into_binary()
                .context("construction does not produce a zero-one matrix"),
            MatrixSource::Alist(path) => read_alist_file(path).with_context(|| format!("reading {}", path.display())),
            MatrixSource::Corpus(name) => corpus_matrix(name),
        }
    }
}

pub fn corpus_matrix(name: &str) -> Result<Gf2Matrix> {
    if name == "petersen_incidence" {
        return Ok(corpus::petersen_incidence());
    }
    match corpus::small_corpus().into_iter().find(|(n, _)| *n == name) {
        Some((_, h)) => Ok(h),
        None => {
            let known: Vec<&str> = corpus::small_corpus().iter().map(|(n, _)| *n).collect();
            bail!("unknown corpus matrix {name:?}; known: {}, petersen_incidence", known.join(", "))
        }
    }
}

/// `corpus:NAME`, `alist:PATH`, a path ending in `.alist`, or
/// `KIND:DV:DC:N[:SEED]` with KIND one of `gallager`, `peg`, `random`, `dense`.
impl FromStr for MatrixSource {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(name) = s.strip_prefix("corpus:") {
            return Ok(MatrixSource::Corpus(name.to_string()));
        }
        if let Some(path) = s.strip_prefix("alist:") {
            return Ok(MatrixSource::Alist(path.into()));
        }
        if s.ends_with(".alist") {
            return Ok(MatrixSource::Alist(s.into()));
        }
        let parts: Vec<&str> = s.split(':').collect();
        let kind = match parts[0] {
            "gallager" => ConstructionKind::GallagerRegular,
            "peg" => ConstructionKind::GirthPeg,
            "random" => ConstructionKind::RandomColumnWeight,
            "dense" => ConstructionKind::DensePm1,
            _ => bail!("unrecognized matrix source {s:?}"),
        };
        if !(4..=5).contains(&parts.len()) {
            bail!("expected KIND:DV:DC:N[:SEED], got {s:?}");
        }
        let num = |i: usize| -> Result<u64> { parts[i].parse().with_context(|| format!("bad number in {s:?}")) };
        let seed = if parts.len() == 5 { num(4)? } else { 0 };
        Ok(MatrixSource::Construct(ConstructionSpec::new(kind, num(1)? as usize, num(2)? as usize, num(3)? as usize, seed)))
    }
}

impl fmt::Display for MatrixSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixSource::Construct(s) => {
                let kind = match s.kind {
                    ConstructionKind::GallagerRegular => "gallager",
                    ConstructionKind::GirthPeg => "peg",
                    ConstructionKind::RandomColumnWeight => "random",
                    ConstructionKind::DensePm1 => "dense",
                };
                write!(f, "{kind}:{}:{}:{}:{}", s.dv, s.dc, s.n, s.seed)
            }
            MatrixSource::Alist(p) => write!(f, "{}", p.display()),
            MatrixSource::Corpus(name) => write!(f, "{name}"),
        }
    }
}

/// Channel family with its parameter grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ChannelSweep {
    Bsc(Vec<f64>),
    Awgn(Vec<f64>),
    Bec(Vec<f64>),
}

impl ChannelSweep {
    pub fn parse(family: &str, values: Vec<f64>) -> Result<Self> {
        Ok(match family {
            "bsc" => ChannelSweep::Bsc(values),
            "awgn" => ChannelSweep::Awgn(values),
            "bec" => ChannelSweep::Bec(values),
            _ => bail!("unknown channel {family:?}; expected bsc, awgn or bec"),
        })
    }

    /// `(column label, channel)` for every grid point.
    pub fn points(&self) -> Vec<(&'static str, f64, ChannelModel)> {
        match self {
            ChannelSweep::Bsc(v) => v.iter().map(|&e| ("bsc_epsilon", e, ChannelModel::Bsc { epsilon: e })).collect(),
            ChannelSweep::Awgn(v) => v.iter().map(|&s| ("awgn_snr", s, ChannelModel::Awgn { snr: s })).collect(),
            ChannelSweep::Bec(v) => v.iter().map(|&p| ("bec_p", p, ChannelModel::Bec { p })).collect(),
        }
    }
}

fn default_trials() -> usize {
    100
}

fn default_c() -> f64 {
    1.0
}

fn default_true() -> bool {
    true
}

fn default_m_set() -> Vec<usize> {
    vec![2, 3]
}

fn default_cap() -> u64 {
    1 << 20
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub schema: u32,
    /// Required by every command except `pseudoweight` with `omega`.
    #[serde(default)]
    pub matrix: Option<MatrixSource>,
    /// Master seed; trial `t` of grid point `p` uses `trial_seed(seed, p << 32 | t)`.
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub mode: Mode,
    /// Sparsity grid for recovery and nullspace checks.
    #[serde(default)]
    pub k: Vec<usize>,
    /// Sparsity fractions; each becomes `k = round(alpha * n)`.
    #[serde(default)]
    pub alpha: Vec<f64>,
    #[serde(default)]
    pub channel: Option<ChannelSweep>,
    /// Nullspace-property constant.
    #[serde(default = "default_c")]
    pub c: f64,
    #[serde(default = "default_true")]
    pub strict: bool,
    #[serde(default)]
    pub gamma: Option<f64>,
    #[serde(default)]
    pub delta: Option<f64>,
    /// Explicit vector for `pseudoweight`.
    #[serde(default)]
    pub omega: Option<Vec<f64>>,
    /// Cover degrees for `cover-check`.
    #[serde(default = "default_m_set")]
    pub m_set: Vec<usize>,
    /// Budget for exhaustive enumerations.
    #[serde(default = "default_cap")]
    pub cap: u64,
}

impl Config {
    pub fn new(matrix: Option<MatrixSource>) -> Self {
        Config {
            schema: SCHEMA,
            matrix,
            seed: 0,
            trials: default_trials(),
            out: None,
            mode: Mode::Float,
            k: Vec::new(),
            alpha: Vec::new(),
            channel: None,
            c: default_c(),
            strict: true,
            gamma: None,
            delta: None,
            omega: None,
            m_set: default_m_set(),
            cap: default_cap(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let cfg: Config = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        if cfg.schema != SCHEMA {
            bail!("unsupported config schema {} (expected {SCHEMA})", cfg.schema);
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema != SCHEMA {
            bail!("unsupported config schema {}", self.schema);
        }
        if self.trials == 0 {
            bail!("trials must be at least 1");
        }
        if let Some(a) = self.alpha.iter().find(|a| !(0.0..=1.0).contains(*a)) {
            bail!("alpha {a} outside [0, 1]");
        }
        Ok(())
    }

    /// The sparsity grid: explicit `k` values, then those implied by `alpha`.
    pub fn k_grid(&self, n: usize) -> Vec<usize> {
        let mut ks = self.k.clone();
        ks.extend(self.alpha.iter().map(|a| (a * n as f64).round() as usize));
        ks
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_are_rejected() {
        let text = r#"{"schema": 1, "matrix": {"corpus": "chain_3x4"}, "trails": 5}"#;
        assert!(serde_json::from_str::<Config>(text).is_err());
    }

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg: Config = serde_json::from_str(r#"{"schema": 1, "matrix": {"corpus": "chain_3x4"}}"#).unwrap();
        assert_eq!(cfg, Config::new(Some(MatrixSource::Corpus("chain_3x4".into()))));
    }

    #[test]
    fn construct_source_round_trips() {
        let text = r#"{"schema": 1, "matrix": {"construct": {"kind": "girth_peg", "dv": 3, "dc": 6, "n": 48}},
                       "channel": {"bsc": [0.01, 0.02]}, "k": [1, 2]}"#;
        let cfg: Config = serde_json::from_str(text).unwrap();
        let m = cfg.matrix.unwrap();
        assert_eq!(m, "peg:3:6:48".parse().unwrap());
        assert_eq!(m.to_string(), "peg:3:6:48:0");
        assert_eq!(cfg.channel.unwrap().points().len(), 2);
    }

    #[test]
    fn matrix_strings() {
        assert_eq!("corpus:hamming_7_4".parse::<MatrixSource>().unwrap(), MatrixSource::Corpus("hamming_7_4".into()));
        assert_eq!("h.alist".parse::<MatrixSource>().unwrap(), MatrixSource::Alist("h.alist".into()));
        assert!("peg:3:6".parse::<MatrixSource>().is_err());
        assert!(corpus_matrix("nope").is_err());
    }

    #[test]
    fn alpha_maps_to_k() {
        let mut cfg = Config::new(None);
        cfg.k = vec![1];
        cfg.alpha = vec![0.01, 0.1];
        assert_eq!(cfg.k_grid(512), vec![1, 5, 51]);
    }
}
