use std::path::PathBuf;

use facering::scalars::FieldKind;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    /// Symbolic parameters over K(t).
    Exact,
    /// Parameters specialized to random points, agreement checked at three.
    Evaluated,
    Both,
}

impl Backend {
    pub fn exact(self) -> bool {
        matches!(self, Backend::Exact | Backend::Both)
    }

    pub fn evaluated(self) -> bool {
        matches!(self, Backend::Evaluated | Backend::Both)
    }
}

/// Built-in example complexes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Example {
    SimplexBoundary { d: usize },
    CrossPolytope { d: usize },
    CyclicPolytope { n: usize, d: usize },
    Rp2,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "name")]
pub enum Command {
    Gen { example: Example },
    Homology,
    ConditionStar,
    Artinian { up_to: Option<usize> },
    Degree,
    Gorenstein { matrices: bool },
    Anisotropy { k: usize, samples: usize, certificates: usize },
    PmAnisotropy { m: usize, k: usize },
    Certificate { k: usize, count: usize },
    TmCheck,
    Lefschetz { k: Option<usize> },
    RationalAnisotropy { m: usize, samples: usize },
    BracketCheck { p: u64, samples: usize },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Gen { .. } => "gen",
            Command::Homology => "homology",
            Command::ConditionStar => "condition-star",
            Command::Artinian { .. } => "artinian",
            Command::Degree => "degree",
            Command::Gorenstein { .. } => "gorenstein",
            Command::Anisotropy { .. } => "anisotropy",
            Command::PmAnisotropy { .. } => "pm-anisotropy",
            Command::Certificate { .. } => "certificate",
            Command::TmCheck => "tm-check",
            Command::Lefschetz { .. } => "lefschetz",
            Command::RationalAnisotropy { .. } => "rational-anisotropy",
            Command::BracketCheck { .. } => "bracket-check",
        }
    }
}

/// A fully resolved job. The input path is not part of the echoed config;
/// the report carries the hash of the canonical input instead.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JobConfig {
    #[serde(skip)]
    pub input: Option<PathBuf>,
    /// Explicit field; `None` defers to the input file, then to `Q`.
    #[serde(serialize_with = "serialize_field")]
    pub field: Option<FieldKind>,
    pub command: Command,
    pub backend: Backend,
    pub seed: u64,
    pub retries: usize,
    #[serde(skip)]
    pub cache_dir: Option<PathBuf>,
    #[serde(skip)]
    pub output: Option<PathBuf>,
    #[serde(skip)]
    pub timings: bool,
}

fn serialize_field<S: serde::Serializer>(field: &Option<FieldKind>, s: S) -> Result<S::Ok, S::Error> {
    match field {
        Some(f) => s.serialize_some(&f.to_string()),
        None => s.serialize_none(),
    }
}

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_RETRIES: usize = 3;

impl JobConfig {
    pub fn new(command: Command) -> Self {
        JobConfig {
            input: None,
            field: None,
            command,
            backend: Backend::Exact,
            seed: DEFAULT_SEED,
            retries: DEFAULT_RETRIES,
            cache_dir: None,
            output: None,
            timings: true,
        }
    }
}
