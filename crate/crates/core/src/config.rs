//! Run configuration: flat `key = value` files merged under command-line flags.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Pretty,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "pretty" => Ok(Format::Pretty),
            other => Err(Error::Unknown { kind: "format", name: other.to_string() }),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Pretty => "pretty",
        })
    }
}

/// `"a,b"` or a single `"a"`, which expands to `(a, a+1)`.
pub fn parse_seed(text: &str) -> Result<(u64, u64)> {
    let bad = |pos: usize| Error::parse(pos, format!("bad seed {text:?}"));
    match text.split_once(',') {
        Some((a, b)) => Ok((a.trim().parse().map_err(|_| bad(0))?, b.trim().parse().map_err(|_| bad(a.len() + 1))?)),
        None => {
            let a: u64 = text.trim().parse().map_err(|_| bad(0))?;
            Ok((a, a.wrapping_add(1)))
        }
    }
}

/// Every field optional; `None` means "not given here".
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PartialConfig {
    pub domain: Option<String>,
    pub weights: Option<String>,
    pub weights2: Option<String>,
    pub max_weight: Option<u64>,
    pub tol: Option<f64>,
    pub seed: Option<(u64, u64)>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
}

impl PartialConfig {
    /// Fields of `over` win.
    pub fn merged(self, over: PartialConfig) -> PartialConfig {
        PartialConfig {
            domain: over.domain.or(self.domain),
            weights: over.weights.or(self.weights),
            weights2: over.weights2.or(self.weights2),
            max_weight: over.max_weight.or(self.max_weight),
            tol: over.tol.or(self.tol),
            seed: over.seed.or(self.seed),
            format: over.format.or(self.format),
            out: over.out.or(self.out),
        }
    }
}

/// Parses `key = value` lines; `#` starts a comment, blank lines are skipped.
pub fn parse_config(text: &str) -> Result<PartialConfig> {
    let mut cfg = PartialConfig::default();
    let mut offset = 0;
    for raw in text.split_inclusive('\n') {
        let start = offset;
        offset += raw.len();
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::parse(start, format!("expected key = value, got {line:?}")));
        };
        let value = value.trim();
        let vpos = start + raw.find('=').unwrap_or(0) + 1;
        let wrap = |e: Error| match e {
            Error::Parse { position, message } => Error::Parse { position: vpos + position, message },
            other => other,
        };
        let number = |what: &str| Error::parse(vpos, format!("bad {what} {value:?}"));
        match key.trim().replace('-', "_").as_str() {
            "domain" => cfg.domain = Some(value.to_string()),
            "weights" => cfg.weights = Some(value.to_string()),
            "weights2" => cfg.weights2 = Some(value.to_string()),
            "max_weight" => cfg.max_weight = Some(value.parse().map_err(|_| number("max_weight"))?),
            "tol" => {
                let t: f64 = value.parse().map_err(|_| number("tolerance"))?;
                if !(t > 0.0 && t.is_finite()) {
                    return Err(Error::ParameterBound(format!("tolerance must be positive, got {value}")));
                }
                cfg.tol = Some(t);
            }
            "seed" => cfg.seed = Some(parse_seed(value).map_err(wrap)?),
            "format" => cfg.format = Some(value.parse()?),
            "out" => cfg.out = Some(PathBuf::from(value)),
            other => return Err(Error::Unknown { kind: "config key", name: other.to_string() }),
        }
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_merges() {
        let text = "# run\ndomain = I:2,2\nweights=bergman:3  # trailing\nmax-weight = 4\nseed = 7\nformat = csv\n\ntol = 1e-9\n";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.domain.as_deref(), Some("I:2,2"));
        assert_eq!(cfg.max_weight, Some(4));
        assert_eq!(cfg.seed, Some((7, 8)));
        assert_eq!(cfg.format, Some(Format::Csv));
        let over = PartialConfig { max_weight: Some(2), ..Default::default() };
        let merged = cfg.merged(over);
        assert_eq!(merged.max_weight, Some(2));
        assert_eq!(merged.weights.as_deref(), Some("bergman:3"));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_config("domain I:2,2"), Err(Error::Parse { position: 0, .. })));
        assert!(matches!(parse_config("colour = red"), Err(Error::Unknown { .. })));
        assert!(matches!(parse_config("\nmax_weight = x"), Err(Error::Parse { position: 13, .. })));
        assert!(parse_config("tol = -1").is_err());
        assert!(parse_config("seed = 1,z").is_err());
        assert!(parse_config("format = xml").is_err());
    }

    #[test]
    fn seed_forms() {
        assert_eq!(parse_seed("3,9").unwrap(), (3, 9));
        assert_eq!(parse_seed(" 5 ").unwrap(), (5, 6));
    }
}
