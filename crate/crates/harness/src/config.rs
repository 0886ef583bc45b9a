//! Experiment configuration files.
//!
//! One `key = value` pair per line; `#` starts a comment. Keys:
//!
//! | key          | meaning                                                       |
//! |--------------|---------------------------------------------------------------|
//! | `algorithm`  | `matroid`, `general`, `core-sim`, `agent`, `agent-core-sim`, `assignment` |
//! | `source`     | instance file path                                            |
//! | `p`          | a number or `paper-optimal`                                   |
//! | `oocs`       | `rank1`, `partition` or `combine` (agent only, default `partition`) |
//! | `trials`     | positive integer                                              |
//! | `seed`       | master seed (default 0)                                       |
//! | `confidence` | two-sided level in (0, 1); default is the 3σ band             |
//! | `bound`      | ratio to compare against (default: none)                      |
//! | `mode`       | `utility` (default) or `probability`                          |
//! | `out_csv`    | per-trial CSV path                                            |
//! | `out_json`   | summary JSON path                                             |

use std::collections::HashMap;
use std::path::PathBuf;
use std::str::FromStr;

use secretary_core::{Error, Result};

use crate::estimate::{z_for_confidence, Mode, DEFAULT_Z};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Matroid,
    General,
    CoreSim,
    Agent,
    AgentCoreSim,
    Assignment,
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "matroid" => Algorithm::Matroid,
            "general" => Algorithm::General,
            "core-sim" => Algorithm::CoreSim,
            "agent" => Algorithm::Agent,
            "agent-core-sim" => Algorithm::AgentCoreSim,
            "assignment" => Algorithm::Assignment,
            _ => return Err(Error::Input(format!("unknown algorithm `{s}`"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PSpec {
    Fixed(f64),
    PaperOptimal,
}

impl FromStr for PSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "paper-optimal" {
            return Ok(PSpec::PaperOptimal);
        }
        s.parse()
            .map(PSpec::Fixed)
            .map_err(|_| Error::Input(format!("p must be a number or `paper-optimal`, got `{s}`")))
    }
}

/// What the sampling rule depends on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PRule {
    /// Single matroid: fixed half split, no relevance sample.
    Matroid,
    /// All components matroids, each element in at most `k` of them.
    Matchoid(usize),
    /// General `k`-growth combination.
    Growth(usize),
    /// `k`-bounded bundles with agent arrivals.
    Assignment(usize),
}

pub fn paper_optimal_p(rule: PRule) -> f64 {
    match rule {
        PRule::Matroid => 0.0,
        PRule::Matchoid(k) => 1.0 - 1.0 / (2.0 * k.max(1) as f64),
        PRule::Growth(k) => (1.0 - 1.0 / (k as f64 + 1.0)).sqrt(),
        PRule::Assignment(k) => secretary_core::assignment::optimal_p(k),
    }
}

impl PSpec {
    pub fn resolve(self, rule: PRule) -> f64 {
        match self {
            PSpec::Fixed(p) => p,
            PSpec::PaperOptimal => paper_optimal_p(rule),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub algorithm: Algorithm,
    pub source: PathBuf,
    pub p: PSpec,
    pub oocs: String,
    pub trials: u64,
    pub seed: u64,
    pub z: f64,
    pub bound: Option<f64>,
    pub mode: Mode,
    pub out_csv: Option<PathBuf>,
    pub out_json: Option<PathBuf>,
}

const KEYS: &[&str] = &[
    "algorithm",
    "source",
    "p",
    "oocs",
    "trials",
    "seed",
    "confidence",
    "bound",
    "mode",
    "out_csv",
    "out_json",
];

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut kv: HashMap<&str, (usize, &str)> = HashMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| parse_err(i + 1, format!("expected key = value, found `{line}`")))?;
            let (k, v) = (k.trim(), v.trim());
            if !KEYS.contains(&k) {
                return Err(parse_err(i + 1, format!("unknown key `{k}`")));
            }
            if kv.insert(k, (i + 1, v)).is_some() {
                return Err(parse_err(i + 1, format!("duplicate key `{k}`")));
            }
        }
        let get = |k: &str| kv.get(k).copied();
        let need = |k: &str| get(k).ok_or_else(|| Error::Input(format!("missing key `{k}`")));
        let num = |k: &str| -> Result<Option<f64>> {
            get(k)
                .map(|(l, v)| v.parse::<f64>().map_err(|_| parse_err(l, format!("`{k}` is not a number"))))
                .transpose()
        };
        let algorithm = need("algorithm")?.1.parse()?;
        let trials: u64 = {
            let (l, v) = need("trials")?;
            v.parse().map_err(|_| parse_err(l, "`trials` is not an integer"))?
        };
        if trials == 0 {
            return Err(Error::Precondition("trials must be positive".into()));
        }
        let seed = match get("seed") {
            Some((l, v)) => v.parse().map_err(|_| parse_err(l, "`seed` is not an integer"))?,
            None => 0,
        };
        let z = match num("confidence")? {
            Some(c) => z_for_confidence(c)?,
            None => DEFAULT_Z,
        };
        let mode = match get("mode").map(|x| x.1) {
            None | Some("utility") => Mode::Utility,
            Some("probability") => Mode::Probability,
            Some(m) => return Err(Error::Input(format!("unknown mode `{m}`"))),
        };
        Ok(ExperimentConfig {
            algorithm,
            source: need("source")?.1.into(),
            p: need("p")?.1.parse()?,
            oocs: get("oocs").map_or("partition", |x| x.1).to_string(),
            trials,
            seed,
            z,
            bound: num("bound")?,
            mode,
            out_csv: get("out_csv").map(|x| x.1.into()),
            out_json: get("out_json").map(|x| x.1.into()),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# matroid check
algorithm = matroid
source = graph.sys
p = paper-optimal
trials = 1000
seed = 42
mode = probability
bound = 0.25
";

    #[test]
    fn parses_sample() {
        let c = ExperimentConfig::parse(SAMPLE).unwrap();
        assert_eq!(c.algorithm, Algorithm::Matroid);
        assert_eq!(c.p, PSpec::PaperOptimal);
        assert_eq!((c.trials, c.seed, c.z), (1000, 42, DEFAULT_Z));
        assert_eq!(c.mode, Mode::Probability);
        assert_eq!(c.bound, Some(0.25));
    }

    #[test]
    fn rejects_zero_trials_and_unknown_keys() {
        assert!(ExperimentConfig::parse(&SAMPLE.replace("1000", "0")).is_err());
        let err = ExperimentConfig::parse("colour = red").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn paper_optimal_rule() {
        assert_eq!(paper_optimal_p(PRule::Matroid), 0.0);
        assert_eq!(paper_optimal_p(PRule::Matchoid(2)), 0.75);
        assert!((paper_optimal_p(PRule::Growth(3)) - 0.75f64.sqrt()).abs() < 1e-12);
        assert!((paper_optimal_p(PRule::Assignment(1)) - (-1.0f64).exp()).abs() < 1e-12);
        assert_eq!(paper_optimal_p(PRule::Assignment(2)), 0.5);
        assert_eq!(PSpec::Fixed(0.3).resolve(PRule::Matchoid(2)), 0.3);
    }
}
