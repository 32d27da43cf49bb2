//! Run configuration from flags and `WEYLWALK_*` environment variables.

use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Args, ValueEnum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Md,
}

/// Largest curve degree computed without `--long`.
pub const SHORT_MAX_DEGREE: u32 = 10;
/// Largest curve degree with `--long`.
pub const LONG_MAX_DEGREE: u32 = 14;
pub const DEFAULT_MAX_DEGREE: u32 = 9;

#[derive(Clone, Debug, Args)]
pub struct GlobalArgs {
    /// Directory holding cached chambers.
    #[arg(long, env = "WEYLWALK_CACHE", global = true)]
    pub cache: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, env = "WEYLWALK_JOBS", global = true)]
    pub jobs: Option<usize>,
    /// Seed for the generic points used by wordify.
    #[arg(long, env = "WEYLWALK_SEED", global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, env = "WEYLWALK_FORMAT", global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Largest curve degree for `curves`.
    #[arg(long, env = "WEYLWALK_MAX_DEGREE", global = true)]
    pub max_degree: Option<u32>,
    /// Allow curve degrees above 10.
    #[arg(long, env = "WEYLWALK_LONG", global = true)]
    pub long: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub cache_dir: PathBuf,
    pub jobs: usize,
    pub seed: u64,
    pub max_degree: u32,
    pub format: Format,
    pub long: bool,
}

impl RunConfig {
    pub fn from_args(a: &GlobalArgs) -> Result<Self> {
        let jobs = match a.jobs {
            Some(0) => bail!("--jobs must be at least 1"),
            Some(j) => j,
            None => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
        };
        let max_degree = a.max_degree.unwrap_or(if a.long { LONG_MAX_DEGREE } else { DEFAULT_MAX_DEGREE });
        if max_degree == 0 {
            bail!("--max-degree must be at least 1");
        }
        if max_degree > SHORT_MAX_DEGREE && !a.long {
            bail!("curve degrees above {SHORT_MAX_DEGREE} need --long");
        }
        Ok(RunConfig {
            cache_dir: a.cache.clone().unwrap_or_else(|| PathBuf::from(".weylwalk-cache")),
            jobs,
            seed: a.seed,
            max_degree,
            format: a.format,
            long: a.long,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args() -> GlobalArgs {
        GlobalArgs {
            cache: None,
            jobs: Some(2),
            seed: 7,
            format: Format::Json,
            max_degree: None,
            long: false,
        }
    }

    #[test]
    fn defaults() {
        let c = RunConfig::from_args(&args()).unwrap();
        assert_eq!(c.jobs, 2);
        assert_eq!(c.max_degree, DEFAULT_MAX_DEGREE);
        assert_eq!(c.cache_dir, PathBuf::from(".weylwalk-cache"));
    }

    #[test]
    fn long_degrees_are_gated() {
        let mut a = args();
        a.max_degree = Some(13);
        assert!(RunConfig::from_args(&a).is_err());
        a.long = true;
        assert_eq!(RunConfig::from_args(&a).unwrap().max_degree, 13);
        a.max_degree = None;
        assert_eq!(RunConfig::from_args(&a).unwrap().max_degree, LONG_MAX_DEGREE);
    }

    #[test]
    fn zero_jobs_rejected() {
        let mut a = args();
        a.jobs = Some(0);
        assert!(RunConfig::from_args(&a).is_err());
    }
}
