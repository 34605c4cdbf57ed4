//! Where a chain comes from: a built-in family, a graph file or a matrix file.

use std::path::PathBuf;

use chainmix::families::degree_distribution;
use chainmix::io::{parse_chain, parse_edge_list};
use chainmix::{lazy_walk, stationary, Distribution, Family, StochasticMatrix, STATIONARY_TOL, VALIDATION_TOL};
use clap::Args;

use crate::error::CliError;
use crate::output::read;

#[derive(Debug, Args)]
pub struct ChainArgs {
    /// Built-in chain: wsr, lazy-wsr, cgb, or lazy-walk (with --graph).
    #[arg(long)]
    pub family: Option<String>,

    /// State count for wsr, lazy-wsr and cgb.
    #[arg(long)]
    pub n: Option<usize>,

    /// Edge list (one 1-based `i j` pair per line) for lazy-walk.
    #[arg(long)]
    pub graph: Option<PathBuf>,

    /// Matrix file: `n` on the first line, then n rows of n probabilities.
    #[arg(long, conflicts_with_all = ["family", "graph"])]
    pub chain: Option<PathBuf>,
}

pub struct LoadedChain {
    pub label: String,
    pub family: Option<Family>,
    pub p: StochasticMatrix,
    pub pi: Distribution,
}

impl ChainArgs {
    pub fn load(&self) -> Result<LoadedChain, CliError> {
        if let Some(path) = &self.chain {
            let p = parse_chain(&read(path)?, VALIDATION_TOL).map_err(|source| CliError::Input {
                path: path.clone(),
                source,
            })?;
            let pi = stationary(&p, STATIONARY_TOL)?;
            return Ok(LoadedChain {
                label: path.display().to_string(),
                family: None,
                p,
                pi,
            });
        }
        let family = self
            .family
            .as_deref()
            .ok_or_else(|| CliError::Usage("give --family or --chain".into()))?;
        if family == "lazy-walk" {
            let path = self
                .graph
                .as_ref()
                .ok_or_else(|| CliError::Usage("--family lazy-walk needs --graph <file>".into()))?;
            let adj = parse_edge_list(&read(path)?).map_err(|source| CliError::Input {
                path: path.clone(),
                source,
            })?;
            let p = lazy_walk(&adj)?;
            return Ok(LoadedChain {
                label: format!("lazy-walk:{}", path.display()),
                family: None,
                pi: degree_distribution(&adj),
                p,
            });
        }
        if self.graph.is_some() {
            return Err(CliError::Usage("--graph only applies to --family lazy-walk".into()));
        }
        let fam: Family = family
            .parse()
            .map_err(|e| CliError::Usage(format!("{e} (or lazy-walk with --graph)")))?;
        let n = self
            .n
            .ok_or_else(|| CliError::Usage(format!("--family {family} needs --n")))?;
        Ok(LoadedChain {
            label: format!("{}:{n}", fam.name()),
            family: Some(fam),
            p: fam.build(n)?,
            pi: fam.stationary(n)?,
        })
    }
}

/// A restart law given on the command line.
pub enum SigmaSpec {
    Law(Distribution),
    Adversarial,
}

/// Parses `uniform`, `pi`, `point:<state>` (1-based) or `adversarial`.
pub fn parse_sigma(spec: &str, pi: &Distribution) -> Result<SigmaSpec, CliError> {
    let n = pi.n();
    match spec {
        "uniform" => Ok(SigmaSpec::Law(Distribution::uniform(n)?)),
        "pi" => Ok(SigmaSpec::Law(pi.clone())),
        "adversarial" => Ok(SigmaSpec::Adversarial),
        other => {
            let state = other
                .strip_prefix("point:")
                .and_then(|s| s.parse::<usize>().ok())
                .ok_or_else(|| {
                    CliError::Usage(format!(
                        "unknown --sigma {other:?}; expected uniform, pi, point:<state> or adversarial"
                    ))
                })?;
            if state == 0 || state > n {
                return Err(CliError::Usage(format!("point:{state} is outside states 1..={n}")));
            }
            Ok(SigmaSpec::Law(Distribution::point(n, state - 1)?))
        }
    }
}
