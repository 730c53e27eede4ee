use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::Serialize;

use shadiv_core::divisibility::{CharacterMode, CurveMetadata, VerdictConfig};

use crate::VerdictArgs;

pub const THREADS_ENV: &str = "SHA_DIV_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
pub enum OutputFormat {
    Json,
    Tsv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
pub enum CharacterChoice {
    Cyclotomic,
    Dirichlet,
}

/// Everything a verdict-producing command runs with; every default is explicit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub verdict: VerdictConfig,
    pub format: OutputFormat,
}

impl RunConfig {
    pub fn from_verdict_args(args: &VerdictArgs) -> Self {
        let character_mode = match args.characters {
            CharacterChoice::Cyclotomic => CharacterMode::Cyclotomic,
            CharacterChoice::Dirichlet => CharacterMode::Dirichlet { modulus_cap: args.modulus_cap },
        };
        RunConfig {
            verdict: VerdictConfig {
                trace_bound: args.trace_bound,
                character_mode,
                assume_minimal: args.assume_minimal,
                metadata: CurveMetadata {
                    analytic_rank: args.analytic_rank,
                    semistable: args.semistable.then_some(true),
                },
            },
            format: args.format,
        }
    }
}

/// Sizes the global rayon pool from `--threads` or `SHA_DIV_THREADS`.
pub fn init_threads(flag: Option<usize>) -> Result<()> {
    let n = match flag {
        Some(n) => Some(n),
        None => match std::env::var(THREADS_ENV) {
            Ok(v) => Some(v.trim().parse::<usize>().with_context(|| format!("{THREADS_ENV}={v:?} is not an integer"))?),
            Err(_) => None,
        },
    };
    if let Some(n) = n {
        rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global().context("configuring thread pool")?;
    }
    Ok(())
}
