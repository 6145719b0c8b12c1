//! Size guards for the exponential constructions. Defaults suit interactive
//! use; the `SEPSYS_LIMITS` environment variable raises or lowers them, e.g.
//! `SEPSYS_LIMITS=graph_vertices=10,powerset_n=14,oracle_pairs=26`.

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub graph_vertices: u32,
    pub powerset_n: u32,
    pub oracle_pairs: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { graph_vertices: 8, powerset_n: 12, oracle_pairs: 24 }
    }
}

impl Limits {
    /// Defaults overridden by `SEPSYS_LIMITS` when set. Unknown keys and
    /// malformed entries are rejected rather than ignored.
    pub fn from_env() -> Result<Self> {
        match std::env::var("SEPSYS_LIMITS") {
            Ok(spec) => Self::parse(&spec),
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn parse(spec: &str) -> Result<Self> {
        let mut limits = Self::default();
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item.split_once('=').ok_or_else(|| {
                Error::InvalidInstance(format!("SEPSYS_LIMITS entry `{item}` is not key=value"))
            })?;
            let value: u32 = value.trim().parse().map_err(|_| {
                Error::InvalidInstance(format!("SEPSYS_LIMITS value in `{item}` is not a number"))
            })?;
            match key.trim() {
                "graph_vertices" => limits.graph_vertices = value,
                "powerset_n" => limits.powerset_n = value,
                "oracle_pairs" => limits.oracle_pairs = value,
                other => {
                    return Err(Error::InvalidInstance(format!(
                        "unknown SEPSYS_LIMITS key `{other}`"
                    )))
                }
            }
        }
        Ok(limits)
    }

    pub fn check(&self, what: &'static str, limit: u32, requested: u32) -> Result<()> {
        if requested > limit {
            return Err(Error::LimitExceeded { what, limit, requested });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_overrides_and_rejects_junk() {
        let l = Limits::parse("graph_vertices=10, oracle_pairs=26").unwrap();
        assert_eq!(l.graph_vertices, 10);
        assert_eq!(l.powerset_n, 12);
        assert_eq!(l.oracle_pairs, 26);
        assert!(Limits::parse("bogus=1").is_err());
        assert!(Limits::parse("graph_vertices=abc").is_err());
    }
}
