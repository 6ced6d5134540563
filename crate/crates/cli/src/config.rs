//! Flat `key = value` run configuration, one dotted key per line.

use std::path::PathBuf;

use reduce_core::geometry::{Scenario, ScenarioId};
use reduce_core::lie::Representation;
use reduce_core::oracle::OracleId;
use reduce_core::reduce::{BoundaryCondition, GridConfig};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const MIN_NODES: usize = 16;

const KEYS: [&str; 11] = [
    "scenario",
    "representation",
    "grid.x_min",
    "grid.x_max",
    "grid.N",
    "grid.order",
    "bc",
    "eigenvalues",
    "oracle",
    "output_dir",
    "seed",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub scenario: ScenarioId,
    pub representation: String,
    pub grid: GridConfig,
    pub bc: BoundaryCondition,
    pub eigenvalues: usize,
    pub oracle: Option<OracleId>,
    pub output_dir: PathBuf,
    pub seed: u64,
}

impl RunConfig {
    /// Parses and validates. `#` starts a comment; blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut pairs: Vec<(&str, &str)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected `key = value`", lineno + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            if !KEYS.contains(&k) {
                return Err(CliError::Config(format!("line {}: unknown key `{k}`", lineno + 1)));
            }
            if pairs.iter().any(|(seen, _)| *seen == k) {
                return Err(CliError::Config(format!("line {}: duplicate key `{k}`", lineno + 1)));
            }
            pairs.push((k, v));
        }
        let get = |k: &str| pairs.iter().find(|(key, _)| *key == k).map(|(_, v)| *v);
        let require = |k: &str| get(k).ok_or_else(|| CliError::Config(format!("missing key `{k}`")));
        fn num<T: std::str::FromStr>(k: &str, v: &str) -> Result<T, CliError> {
            v.parse()
                .map_err(|_| CliError::Config(format!("`{k}`: cannot parse `{v}`")))
        }

        let scenario: ScenarioId = require("scenario")?.parse()?;
        let representation = require("representation")?.to_string();
        let n: usize = num("grid.N", require("grid.N")?)?;
        let sc = Scenario::catalog(scenario);
        let default = GridConfig::default_for(&sc, n);
        let grid = GridConfig {
            x_min: get("grid.x_min").map(|v| num("grid.x_min", v)).transpose()?.unwrap_or(default.x_min),
            x_max: get("grid.x_max").map(|v| num("grid.x_max", v)).transpose()?.unwrap_or(default.x_max),
            n,
            order: get("grid.order").map(|v| num("grid.order", v)).transpose()?.unwrap_or(2),
            nodes: None,
        };
        let config = RunConfig {
            scenario,
            representation,
            grid,
            bc: get("bc").unwrap_or("dirichlet").parse()?,
            eigenvalues: get("eigenvalues").map(|v| num("eigenvalues", v)).transpose()?.unwrap_or(6),
            oracle: get("oracle").map(str::parse).transpose()?,
            output_dir: PathBuf::from(get("output_dir").unwrap_or("out")),
            seed: get("seed").map(|v| num("seed", v)).transpose()?.unwrap_or(0),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.grid.n < MIN_NODES {
            return Err(CliError::Config(format!(
                "grid.N = {} is below the minimum of {MIN_NODES}",
                self.grid.n
            )));
        }
        if self.eigenvalues == 0 {
            return Err(CliError::Config("eigenvalues must be positive".into()));
        }
        let sc = Scenario::catalog(self.scenario);
        Representation::parse(sc.group, &self.representation)?;
        self.grid.validate(&sc)?;
        if let Some(o) = self.oracle {
            if o.scenario() != self.scenario {
                return Err(CliError::Config(format!("oracle {o} does not apply to {}", self.scenario)));
            }
        }
        Ok(())
    }

    /// Canonical text form; parses back to an equal config.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "scenario = {}\nrepresentation = {}\ngrid.x_min = {}\ngrid.x_max = {}\ngrid.N = {}\ngrid.order = {}\nbc = {}\neigenvalues = {}\n",
            self.scenario, self.representation, self.grid.x_min, self.grid.x_max, self.grid.n, self.grid.order, self.bc, self.eigenvalues
        );
        if let Some(o) = self.oracle {
            s.push_str(&format!("oracle = {o}\n"));
        }
        s.push_str(&format!("output_dir = {}\nseed = {}\n", self.output_dir.display(), self.seed));
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SU2: &str = "# su(2) characters\nscenario = su2-conj\nrepresentation = trivial\ngrid.N = 400\noracle = su2-casimir\n";

    #[test]
    fn defaults_and_round_trip() {
        let c = RunConfig::parse(SU2).unwrap();
        assert_eq!(c.grid.x_min, 0.0);
        assert!((c.grid.x_max - 2.0 * std::f64::consts::PI).abs() < 1e-15);
        assert_eq!(c.grid.order, 2);
        assert_eq!(c.eigenvalues, 6);
        assert_eq!(c.oracle, Some(OracleId::Su2Casimir));
        assert_eq!(RunConfig::parse(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn rejections() {
        for bad in [
            SU2.replace("400", "4"),
            SU2.replace("su2-conj", "su5-conj"),
            SU2.replace("trivial", "spin:x"),
            SU2.replace("oracle = su2-casimir", "oracle = u1-bessel"),
            format!("{SU2}grid.order = 3\n"),
            format!("{SU2}bc = neumann\n"),
            format!("{SU2}colour = red\n"),
            format!("{SU2}grid.N = 500\n"),
            format!("{SU2}grid.x_max = 7.0\n"),
            "scenario = su2-conj\n".to_string(),
            "not a pair\n".to_string(),
        ] {
            let err = RunConfig::parse(&bad).unwrap_err();
            assert_eq!(err.exit_code(), 2, "{bad}: {err}");
        }
    }
}
