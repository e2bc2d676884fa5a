use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::generators::{gen_gp, gen_multiplicative_cube, gen_random_integers};
use super::HarnessError;
use crate::distinct::DEFAULT_ENUMERATION_BUDGET;
use crate::setcore::{FiniteSet, Scalar, SetError, DEFAULT_ELEMENT_CAP};
use crate::witness::Thinning;

/// Where a run's set comes from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Family {
    Gp { a: Scalar, r: Scalar, n: usize },
    Cube { primes: Vec<u64>, dims: Vec<usize> },
    /// Drawn with the run's seed.
    Random { n: usize, lo: i64, hi: i64 },
    /// A set file, relative to the experiment file's directory.
    File { path: PathBuf },
}

impl Family {
    pub fn generate(&self, seed: u64, base: &Path) -> Result<FiniteSet, SetError> {
        match self {
            Family::Gp { a, r, n } => gen_gp(a, r, *n),
            Family::Cube { primes, dims } => gen_multiplicative_cube(primes, dims),
            Family::Random { n, lo, hi } => gen_random_integers(*n, *lo, *hi, seed),
            Family::File { path } => FiniteSet::load(base.join(path)),
        }
    }

    pub fn uses_seed(&self) -> bool {
        matches!(self, Family::Random { .. })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: Vec<String>| v.join("x");
        match self {
            Family::Gp { a, r, n } => write!(f, "gp(a={a} r={r} n={n})"),
            Family::Cube { primes, dims } => write!(
                f,
                "cube(primes={} dims={})",
                join(primes.iter().map(u64::to_string).collect()),
                join(dims.iter().map(usize::to_string).collect())
            ),
            Family::Random { n, lo, hi } => write!(f, "random(n={n} lo={lo} hi={hi})"),
            Family::File { path } => write!(f, "file({})", path.display()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pipeline {
    Theorem1,
    Theorem2,
    Audit,
    RawGrowth,
}

impl Pipeline {
    pub fn name(self) -> &'static str {
        match self {
            Pipeline::Theorem1 => "theorem1",
            Pipeline::Theorem2 => "theorem2",
            Pipeline::Audit => "audit",
            Pipeline::RawGrowth => "raw-growth",
        }
    }
}

/// Limits applied to a run; exceeding one is recorded in the row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunCaps {
    /// Largest iterated sumset or product set computed.
    pub max_elements: usize,
    /// Largest number of weighted sums a certificate may enumerate.
    pub enumeration_budget: u64,
    /// `|KA - LA|` is cross-checked only below this size.
    pub cross_check: usize,
}

impl Default for RunCaps {
    fn default() -> Self {
        RunCaps {
            max_elements: DEFAULT_ELEMENT_CAP,
            enumeration_budget: DEFAULT_ENUMERATION_BUDGET,
            cross_check: 1_000_000,
        }
    }
}

fn default_k() -> usize {
    2
}

fn default_one() -> usize {
    1
}

/// One line of an experiment: a set family, a pipeline and its parameters.
///
/// `repeat > 1` expands into runs with seeds `seed, seed + 1, ...`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub label: String,
    pub family: Family,
    pub pipeline: Pipeline,
    #[serde(default = "default_k")]
    pub k: usize,
    /// Block exponent for the certificate pipelines.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<Scalar>,
    /// Iterated sumsets `hA` and `h(A.A)` to tabulate.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub h: Vec<usize>,
    /// Negative count for the audit pipeline, which checks `kA - ℓA`.
    #[serde(default = "default_one")]
    pub ell: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_one")]
    pub repeat: usize,
    #[serde(default)]
    pub thinning: Thinning,
    #[serde(default)]
    pub caps: RunCaps,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: String| Err(HarnessError::InvalidSpec { label: self.label.clone(), message: m });
        if self.label.is_empty() || !self.label.chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c)) {
            return bad("label must be nonempty and use only [A-Za-z0-9._-]".into());
        }
        if self.repeat == 0 {
            return bad("repeat must be at least 1".into());
        }
        if self.h.contains(&0) {
            return bad("h values must be at least 1".into());
        }
        match self.pipeline {
            Pipeline::Theorem1 | Pipeline::Theorem2 => {
                if self.k < 2 {
                    return bad(format!("{} needs k >= 2", self.pipeline.name()));
                }
                let Some(d) = &self.delta else {
                    return bad(format!("{} needs delta", self.pipeline.name()));
                };
                if !(d.is_positive() && *d < Scalar::new(1, 2).expect("nonzero")) {
                    return bad(format!("delta must lie in (0, 1/2), got {d}"));
                }
            }
            Pipeline::Audit => {
                if self.k + self.ell == 0 {
                    return bad("audit needs k + ell >= 1".into());
                }
            }
            Pipeline::RawGrowth => {
                if self.h.is_empty() {
                    return bad("raw-growth needs at least one h".into());
                }
            }
        }
        if let Family::Gp { r, n, .. } = &self.family {
            if *n == 0 || *r <= Scalar::one() {
                return bad("gp needs n >= 1 and r > 1".into());
            }
        }
        Ok(())
    }

    pub fn seeds(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.repeat as u64).map(move |i| self.seed.wrapping_add(i))
    }
}

/// A named list of runs, the on-disk experiment format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentFile {
    pub name: String,
    pub runs: Vec<ExperimentSpec>,
}

impl ExperimentFile {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let file: ExperimentFile = serde_json::from_str(text)?;
        file.validate()?;
        Ok(file)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.name.is_empty() || !self.name.chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c)) {
            return Err(HarnessError::InvalidSpec {
                label: self.name.clone(),
                message: "experiment name must be nonempty and use only [A-Za-z0-9._-]".into(),
            });
        }
        let mut seen = BTreeSet::new();
        for run in &self.runs {
            run.validate()?;
            for seed in run.seeds() {
                if !seen.insert((run.label.clone(), seed)) {
                    return Err(HarnessError::InvalidSpec {
                        label: run.label.clone(),
                        message: format!("label and seed {seed} repeat an earlier run"),
                    });
                }
            }
        }
        Ok(())
    }
}
