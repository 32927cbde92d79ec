use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use serde_json::{json, Value};

use ringlab_core::ResourceGuard;

use crate::args::{Format, GlobalArgs};

pub const DEFAULT_MAX_SIZE: usize = 65536;
pub const DEFAULT_N_RANGE: (u64, u64) = (1, 24);
const MAX_N: u64 = 1 << 20;

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments, unparsable input or a guard violation: exit 2.
    Usage(String),
    Io(io::Error),
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

pub fn usage(msg: impl std::fmt::Display) -> CliError {
    CliError::Usage(msg.to_string())
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub max_size: usize,
    pub threads: usize,
    pub n_range: (u64, u64),
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub corpus: Option<PathBuf>,
}

/// "a..b" (inclusive) or a single "n".
pub fn parse_n_range(s: &str) -> Result<(u64, u64), String> {
    let parse = |t: &str| {
        t.trim()
            .parse::<u64>()
            .map_err(|_| format!("invalid n-range '{s}': expected A..B with positive integers"))
    };
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let n = parse(s)?;
            (n, n)
        }
    };
    if a < 1 || b < a {
        return Err(format!("invalid n-range '{s}': need 1 <= A <= B"));
    }
    if b > MAX_N {
        return Err(format!("invalid n-range '{s}': upper bound above {MAX_N}"));
    }
    Ok((a, b))
}

impl RunConfig {
    pub fn from_args(g: &GlobalArgs) -> Result<RunConfig, CliError> {
        let max_size = match g.max_size {
            Some(n) => n,
            None => match std::env::var("RINGLAB_MAX_SIZE") {
                Ok(v) => v
                    .trim()
                    .parse()
                    .map_err(|_| usage(format!("RINGLAB_MAX_SIZE must be a positive integer, got '{v}'")))?,
                Err(_) => DEFAULT_MAX_SIZE,
            },
        };
        if max_size < 1 {
            return Err(usage("--max-size must be at least 1"));
        }
        let threads = g
            .threads
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
        if threads < 1 {
            return Err(usage("--threads must be at least 1"));
        }
        let n_range = match &g.n_range {
            Some(s) => parse_n_range(s).map_err(usage)?,
            None => DEFAULT_N_RANGE,
        };
        Ok(RunConfig {
            max_size,
            threads,
            n_range,
            format: g.format,
            out: g.out.clone(),
            seed: g.seed,
            corpus: g.corpus.clone(),
        })
    }

    pub fn ns(&self) -> Vec<u64> {
        (self.n_range.0..=self.n_range.1).collect()
    }

    pub fn guard(&self) -> ResourceGuard {
        ResourceGuard {
            max_ring_size: self.max_size,
            threads: self.threads,
            ..ResourceGuard::default()
        }
    }

    pub fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    /// Settings echoed into every JSON record. The thread count is left out
    /// so that output does not depend on it.
    pub fn echo(&self) -> Value {
        json!({
            "max_size": self.max_size,
            "n_range": format!("{}..{}", self.n_range.0, self.n_range.1),
            "seed": self.seed,
            "corpus": self.corpus.as_ref().map(|p| p.display().to_string()),
        })
    }

    pub fn writer(&self) -> Result<Box<dyn Write>, CliError> {
        Ok(match &self.out {
            Some(p) => Box::new(BufWriter::new(
                File::create(p).map_err(|e| usage(format!("cannot write {}: {e}", p.display())))?,
            )),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }
}
