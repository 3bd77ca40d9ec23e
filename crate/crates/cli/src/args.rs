//! Command-line grammar.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use facering::scalars::FieldKind;
use thiserror::Error;

use crate::config::{Backend, Command, Example, JobConfig, DEFAULT_RETRIES, DEFAULT_SEED};

#[derive(Debug, Parser)]
#[command(name = "facering", version, about = "Face rings of simplicial cycles on the moment curve")]
struct Cli {
    /// Coefficient field: a supported prime or Q. Overrides the input file.
    #[arg(long, global = true)]
    field: Option<String>,
    #[arg(long, global = true, value_enum, default_value = "exact")]
    backend: Backend,
    #[arg(long, global = true, env = "FACERING_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Fresh random attempts after a failed randomized check.
    #[arg(long, global = true, default_value_t = DEFAULT_RETRIES)]
    retries: usize,
    #[arg(long, global = true, env = "FACERING_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Write the report (or generated complex) here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Leave runtime data out of the report.
    #[arg(long, global = true)]
    no_timings: bool,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Args)]
struct Input {
    /// Complex or cycle file.
    input: PathBuf,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Print a built-in example complex in the input format.
    Gen {
        #[command(subcommand)]
        example: GenCmd,
    },
    /// Reduced homology, f- and h-vectors.
    Homology(Input),
    /// Link condition on every face of the cycle's support.
    ConditionStar(Input),
    /// Graded dimensions and bases of the Artinian reduction.
    Artinian {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        up_to: Option<usize>,
    },
    /// Lee's formula against the linear-algebra degree on face monomials.
    Degree(Input),
    /// Gorenstein quotient dimensions and pairing ranks.
    Gorenstein {
        #[command(flatten)]
        input: Input,
        /// Include pairing matrices in the report.
        #[arg(long)]
        matrices: bool,
    },
    /// Injectivity of u -> u^p on B^k in characteristic p.
    Anisotropy {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 20)]
        certificates: usize,
    },
    /// u^(p m) != 0 on B^k by descent through p-th powers.
    PmAnisotropy {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
    },
    /// Derivative certificates for random u in B^k.
    Certificate {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
    /// Closed form of the facet terms of Lee's formula for deg(x_sigma^p x_iota).
    TmCheck {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        p: Option<u64>,
    },
    /// Rank of multiplication by a random l^(d-2k): B^k -> B^(d-k).
    Lefschetz {
        #[command(flatten)]
        input: Input,
        /// Only this degree; all k <= d/2 by default.
        #[arg(long)]
        k: Option<usize>,
    },
    /// u^m != 0 over Q(t) from the characteristic-p statements.
    RationalAnisotropy {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
    /// [deg(v)] = deg([v]) for random v in A^d over Q(t).
    BracketCheck {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
}

#[derive(Debug, Subcommand)]
enum GenCmd {
    SimplexBoundary { d: usize },
    CrossPolytope { d: usize },
    CyclicPolytope { n: usize, d: usize },
    Rp2,
}

#[derive(Debug, Error)]
pub enum ArgsError {
    #[error(transparent)]
    Clap(#[from] clap::Error),
    #[error("configuration error: {0}")]
    Config(String),
}

impl ArgsError {
    /// Help and version requests are not failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            ArgsError::Clap(e) => match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 3,
            },
            ArgsError::Config(_) => 3,
        }
    }
}

fn parse_field(s: &str) -> Result<FieldKind, ArgsError> {
    let f = FieldKind::parse(s).map_err(|e| ArgsError::Config(e.to_string()))?;
    if let FieldKind::Prime(p) = f {
        if !facering::scalars::SUPPORTED_PRIMES.contains(&p) {
            return Err(ArgsError::Config(format!(
                "unsupported prime {p}; supported primes are {:?}",
                facering::scalars::SUPPORTED_PRIMES
            )));
        }
    }
    Ok(f)
}

/// `--p` selects F_p unless `--field` names a different field.
fn merge_prime(field: Option<FieldKind>, p: Option<u64>) -> Result<Option<FieldKind>, ArgsError> {
    match (field, p) {
        (f, None) => Ok(f),
        (None, Some(p)) => parse_field(&p.to_string()).map(Some),
        (Some(f), Some(p)) if f == FieldKind::Prime(p) => Ok(Some(f)),
        (Some(f), Some(p)) => Err(ArgsError::Config(format!("--p {p} conflicts with --field {f}"))),
    }
}

pub fn parse_args<I, T>(args: I) -> Result<JobConfig, ArgsError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    let mut field = cli.field.as_deref().map(parse_field).transpose()?;
    let (command, input) = match cli.command {
        Cmd::Gen { example } => {
            let example = match example {
                GenCmd::SimplexBoundary { d } => Example::SimplexBoundary { d },
                GenCmd::CrossPolytope { d } => Example::CrossPolytope { d },
                GenCmd::CyclicPolytope { n, d } => Example::CyclicPolytope { n, d },
                GenCmd::Rp2 => Example::Rp2,
            };
            (Command::Gen { example }, None)
        }
        Cmd::Homology(i) => (Command::Homology, Some(i.input)),
        Cmd::ConditionStar(i) => (Command::ConditionStar, Some(i.input)),
        Cmd::Artinian { input, up_to } => (Command::Artinian { up_to }, Some(input.input)),
        Cmd::Degree(i) => (Command::Degree, Some(i.input)),
        Cmd::Gorenstein { input, matrices } => (Command::Gorenstein { matrices }, Some(input.input)),
        Cmd::Anisotropy {
            input,
            p,
            k,
            samples,
            certificates,
        } => {
            field = merge_prime(field, p)?;
            (Command::Anisotropy { k, samples, certificates }, Some(input.input))
        }
        Cmd::PmAnisotropy { input, p, m, k } => {
            field = merge_prime(field, p)?;
            (Command::PmAnisotropy { m, k }, Some(input.input))
        }
        Cmd::Certificate { input, p, k, count } => {
            field = merge_prime(field, p)?;
            (Command::Certificate { k, count }, Some(input.input))
        }
        Cmd::TmCheck { input, p } => {
            field = merge_prime(field, p)?;
            (Command::TmCheck, Some(input.input))
        }
        Cmd::Lefschetz { input, k } => (Command::Lefschetz { k }, Some(input.input)),
        Cmd::RationalAnisotropy { input, m, samples } => (Command::RationalAnisotropy { m, samples }, Some(input.input)),
        Cmd::BracketCheck { input, p, samples } => {
            parse_field(&p.to_string())?;
            (Command::BracketCheck { p, samples }, Some(input.input))
        }
    };
    Ok(JobConfig {
        input,
        field,
        command,
        backend: cli.backend,
        seed: cli.seed,
        retries: cli.retries,
        cache_dir: cli.cache_dir,
        output: cli.output,
        timings: !cli.no_timings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_flag_selects_field() {
        let c = parse_args(["facering", "anisotropy", "x.txt", "--p", "2", "--k", "1"]).unwrap();
        assert_eq!(c.field, Some(FieldKind::Prime(2)));
        assert_eq!(
            c.command,
            Command::Anisotropy {
                k: 1,
                samples: 200,
                certificates: 20
            }
        );
        let err = parse_args(["facering", "--field", "3", "anisotropy", "x.txt", "--p", "2", "--k", "1"]).unwrap_err();
        assert!(matches!(err, ArgsError::Config(_)));
    }

    #[test]
    fn exit_codes_for_usage() {
        assert_eq!(parse_args(["facering", "frobnicate"]).unwrap_err().exit_code(), 3);
        assert_eq!(parse_args(["facering", "--help"]).unwrap_err().exit_code(), 0);
        assert_eq!(parse_args(["facering", "--field", "4", "homology", "x"]).unwrap_err().exit_code(), 3);
    }

    #[test]
    fn gen_needs_no_input() {
        let c = parse_args(["facering", "gen", "cyclic-polytope", "6", "3"]).unwrap();
        assert_eq!(c.command, Command::Gen { example: Example::CyclicPolytope { n: 6, d: 3 } });
        assert!(c.input.is_none());
    }
}
