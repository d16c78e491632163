use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Seeded,
    Quantum,
    Meanfield,
    IsotropicCompare,
    Stability,
    Estimate,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Seeded => "seeded",
            Experiment::Quantum => "quantum",
            Experiment::Meanfield => "meanfield",
            Experiment::IsotropicCompare => "isotropic-compare",
            Experiment::Stability => "stability",
            Experiment::Estimate => "estimate",
        }
    }

    /// Default `(dt, horizon)`; `None` for experiments without a time axis.
    pub fn default_grid(self) -> Option<(f64, f64)> {
        match self {
            Experiment::Seeded => Some((1e-3, crate::seeded::DEFAULT_HORIZON)),
            Experiment::Quantum => Some((1e-2, 10.0)),
            Experiment::Meanfield => Some((1e-3, 10.0)),
            Experiment::IsotropicCompare => Some((5e-3, 60.0)),
            Experiment::Stability => Some((1e-3, crate::stability::DEFAULT_GROWTH_HORIZON)),
            Experiment::Estimate => None,
        }
    }

    pub fn schema(self) -> &'static [ParamSpec] {
        match self {
            Experiment::Seeded => SEEDED,
            Experiment::Quantum => QUANTUM,
            Experiment::Meanfield => MEANFIELD,
            Experiment::IsotropicCompare => ISOTROPIC,
            Experiment::Stability => STABILITY,
            Experiment::Estimate => ESTIMATE,
        }
    }

    fn spec(self, name: &str) -> Option<&'static ParamSpec> {
        self.schema().iter().find(|s| s.name == name)
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamKind {
    Float,
    Int,
    Choice(&'static [&'static str]),
}

impl ParamKind {
    fn is_numeric(self) -> bool {
        matches!(self, ParamKind::Float | ParamKind::Int)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Fallback {
    F(f64),
    I(i64),
    T(&'static str),
    Absent,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamSpec {
    pub name: &'static str,
    pub kind: ParamKind,
    pub default: Fallback,
}

const fn spec(name: &'static str, kind: ParamKind, default: Fallback) -> ParamSpec {
    ParamSpec {
        name,
        kind,
        default,
    }
}

use Fallback::{Absent, F, I, T};
use ParamKind::{Choice, Float, Int};

const SEEDED: &[ParamSpec] = &[
    spec("seed", Float, F(1e-3)),
    spec("seed_b", Float, Absent),
    spec("n_a", Float, F(1.0)),
    spec("n_b", Float, F(1.0)),
];
const QUANTUM: &[ParamSpec] = &[
    spec("n", Int, I(512)),
    spec("lambda", Float, F(0.0)),
    spec("method", Choice(&["spectral", "stepping"]), T("spectral")),
];
const MEANFIELD: &[ParamSpec] = &[
    spec("n", Float, F(512.0)),
    spec("seed", Float, F(1.0)),
    spec("seed_phase", Float, F(0.0)),
    spec("lambda", Float, F(0.0)),
];
const ISOTROPIC: &[ParamSpec] = &[
    spec("n", Float, F(512.0)),
    spec("m", Int, I(64)),
    spec("seed", Float, F(1.0)),
    spec("sampling", Choice(&["fibonacci", "random"]), T("fibonacci")),
    spec("rng_seed", Int, I(0)),
];
const STABILITY: &[ParamSpec] = &[
    spec("lambda", Float, F(0.0)),
    spec("growth_seed", Float, F(crate::stability::DEFAULT_GROWTH_SEED)),
];
const ESTIMATE: &[ParamSpec] = &[
    spec("luminosity_erg_per_s", Float, F(3.6e56)),
    spec("frequency_hz", Float, F(250.0)),
    spec("density_mev3", Float, Absent),
    spec("duration_inv_mev", Float, Absent),
    spec("photon_energy_mev", Float, Absent),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Int(i64),
    Float(f64),
    Text(String),
}

impl ParamValue {
    fn from_default(d: Fallback) -> Option<Self> {
        match d {
            Fallback::F(v) => Some(ParamValue::Float(v)),
            Fallback::I(v) => Some(ParamValue::Int(v)),
            Fallback::T(v) => Some(ParamValue::Text(v.to_string())),
            Fallback::Absent => None,
        }
    }

    fn as_f64(&self) -> Option<f64> {
        match *self {
            ParamValue::Int(v) => Some(v as f64),
            ParamValue::Float(v) => Some(v),
            ParamValue::Text(_) => None,
        }
    }
}

fn coerce(spec: &ParamSpec, raw: &ParamValue) -> Result<ParamValue> {
    let bad = || {
        Error::param(format!(
            "parameter '{}' expects {}, got {:?}",
            spec.name,
            match spec.kind {
                ParamKind::Float => "a number".to_string(),
                ParamKind::Int => "an integer".to_string(),
                ParamKind::Choice(opts) => format!("one of {}", opts.join("|")),
            },
            raw
        ))
    };
    match spec.kind {
        ParamKind::Float => {
            let v = match raw {
                ParamValue::Text(s) => s.trim().parse::<f64>().map_err(|_| bad())?,
                other => other.as_f64().ok_or_else(bad)?,
            };
            if !v.is_finite() {
                return Err(bad());
            }
            Ok(ParamValue::Float(v))
        }
        ParamKind::Int => match raw {
            ParamValue::Int(v) => Ok(ParamValue::Int(*v)),
            ParamValue::Float(v) if v.fract() == 0.0 && v.abs() < 9.0e15 => {
                Ok(ParamValue::Int(*v as i64))
            }
            ParamValue::Text(s) => s.trim().parse::<i64>().map(ParamValue::Int).map_err(|_| bad()),
            _ => Err(bad()),
        },
        ParamKind::Choice(opts) => match raw {
            ParamValue::Text(s) if opts.contains(&s.as_str()) => Ok(ParamValue::Text(s.clone())),
            _ => Err(bad()),
        },
    }
}

/// Validated parameter values of one experiment, defaults filled in.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Parameters(BTreeMap<String, ParamValue>);

impl Parameters {
    pub fn resolve(experiment: Experiment, given: &BTreeMap<String, ParamValue>) -> Result<Self> {
        for name in given.keys() {
            if experiment.spec(name).is_none() {
                let known: Vec<&str> = experiment.schema().iter().map(|s| s.name).collect();
                return Err(Error::param(format!(
                    "unknown parameter '{name}' for {experiment} (known: {})",
                    known.join(", ")
                )));
            }
        }
        let mut values = BTreeMap::new();
        for spec in experiment.schema() {
            let value = match given.get(spec.name) {
                Some(raw) => Some(coerce(spec, raw)?),
                None => ParamValue::from_default(spec.default),
            };
            if let Some(v) = value {
                values.insert(spec.name.to_string(), v);
            }
        }
        Ok(Parameters(values))
    }

    fn with(&self, name: &str, value: ParamValue) -> Self {
        let mut p = self.clone();
        p.0.insert(name.to_string(), value);
        p
    }

    pub fn f64(&self, name: &str) -> f64 {
        self.opt_f64(name)
            .unwrap_or_else(|| panic!("parameter '{name}' missing from schema"))
    }

    pub fn opt_f64(&self, name: &str) -> Option<f64> {
        self.0.get(name).and_then(ParamValue::as_f64)
    }

    pub fn int(&self, name: &str) -> i64 {
        match self.0.get(name) {
            Some(ParamValue::Int(v)) => *v,
            other => panic!("parameter '{name}' is not an integer: {other:?}"),
        }
    }

    /// A non-negative integer parameter.
    pub fn count(&self, name: &str) -> Result<usize> {
        usize::try_from(self.int(name))
            .map_err(|_| Error::param(format!("parameter '{name}' must be non-negative")))
    }

    pub fn text(&self, name: &str) -> &str {
        match self.0.get(name) {
            Some(ParamValue::Text(v)) => v,
            other => panic!("parameter '{name}' is not text: {other:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub name: String,
    pub values: Vec<f64>,
}

impl Sweep {
    /// Parse `name=v1,v2,...`.
    pub fn parse(s: &str) -> Result<Self> {
        let (name, list) = s
            .split_once('=')
            .ok_or_else(|| Error::param(format!("sweep '{s}' must look like name=v1,v2")))?;
        let values = list
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::param(format!("sweep value '{v}' is not a number")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Sweep {
            name: name.trim().to_string(),
            values,
        })
    }
}

/// Contents of a `--config` JSON file. Every field is optional.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub parameters: BTreeMap<String, ParamValue>,
    pub out: Option<PathBuf>,
    pub dt: Option<f64>,
    pub horizon: Option<f64>,
    pub workers: Option<usize>,
    pub stride: Option<usize>,
    pub sweep: Option<Sweep>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::param(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::param(format!("invalid config {}: {e}", path.display())))
    }
}

/// Values given on the command line; each one overrides the config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub params: Vec<String>,
    pub out: Option<PathBuf>,
    pub dt: Option<f64>,
    pub horizon: Option<f64>,
    pub workers: Option<usize>,
    pub stride: Option<usize>,
    pub sweep: Option<String>,
}

/// Fully resolved and validated settings of one CLI invocation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub parameters: Parameters,
    pub output_path: PathBuf,
    pub sweep: Option<Sweep>,
    pub workers: Option<usize>,
    pub dt: Option<f64>,
    pub horizon: Option<f64>,
    pub stride: usize,
}

pub const DEFAULT_OUT: &str = "out";

impl RunConfig {
    pub fn resolve(experiment: Experiment, file: ConfigFile, flags: Overrides) -> Result<Self> {
        let mut given = file.parameters;
        for kv in &flags.params {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::param(format!("--param '{kv}' must look like key=value")))?;
            given.insert(k.trim().to_string(), ParamValue::Text(v.trim().to_string()));
        }
        let parameters = Parameters::resolve(experiment, &given)?;

        let sweep = match flags.sweep {
            Some(s) => Some(Sweep::parse(&s)?),
            None => file.sweep,
        };
        if let Some(sweep) = &sweep {
            let spec = experiment.spec(&sweep.name).ok_or_else(|| {
                Error::param(format!("sweep names unknown parameter '{}'", sweep.name))
            })?;
            if !spec.kind.is_numeric() {
                return Err(Error::param(format!(
                    "sweep parameter '{}' is not numeric",
                    sweep.name
                )));
            }
            if sweep.values.is_empty() {
                return Err(Error::param("sweep needs at least one value"));
            }
            for v in &sweep.values {
                coerce(spec, &ParamValue::Float(*v))?;
            }
        }

        let dt = flags.dt.or(file.dt);
        let horizon = flags.horizon.or(file.horizon);
        let (dt, horizon) = match experiment.default_grid() {
            Some((d, h)) => (Some(dt.unwrap_or(d)), Some(horizon.unwrap_or(h))),
            None => {
                if dt.is_some() || horizon.is_some() {
                    return Err(Error::param(format!(
                        "{experiment} has no time axis; --dt and --horizon do not apply"
                    )));
                }
                (None, None)
            }
        };
        if let (Some(dt), Some(h)) = (dt, horizon) {
            crate::numerics::TimeGrid::horizon(h, dt)?;
        }

        let workers = flags.workers.or(file.workers);
        if workers == Some(0) {
            return Err(Error::param("--workers must be at least 1"));
        }
        let stride = flags.stride.or(file.stride).unwrap_or(1);
        if stride == 0 {
            return Err(Error::param("--stride must be at least 1"));
        }
        Ok(RunConfig {
            experiment,
            parameters,
            output_path: flags
                .out
                .or(file.out)
                .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT)),
            sweep,
            workers,
            dt,
            horizon,
            stride,
        })
    }

    /// Parameter sets of the individual runs, in sweep order.
    pub fn points(&self) -> Vec<Parameters> {
        match &self.sweep {
            None => vec![self.parameters.clone()],
            Some(sweep) => {
                let spec = self
                    .experiment
                    .spec(&sweep.name)
                    .expect("sweep validated against schema");
                sweep
                    .values
                    .iter()
                    .map(|&v| {
                        let value = coerce(spec, &ParamValue::Float(v)).expect("sweep validated");
                        self.parameters.with(&sweep.name, value)
                    })
                    .collect()
            }
        }
    }

    pub fn grid(&self) -> Result<crate::numerics::TimeGrid> {
        match (self.dt, self.horizon) {
            (Some(dt), Some(h)) => crate::numerics::TimeGrid::horizon(h, dt),
            _ => Err(Error::param(format!("{} has no time grid", self.experiment))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags(params: &[&str]) -> Overrides {
        Overrides {
            params: params.iter().map(|s| s.to_string()).collect(),
            ..Overrides::default()
        }
    }

    #[test]
    fn defaults_fill_in() {
        let c = RunConfig::resolve(Experiment::Quantum, ConfigFile::default(), flags(&[])).unwrap();
        assert_eq!(c.parameters.int("n"), 512);
        assert_eq!(c.parameters.f64("lambda"), 0.0);
        assert_eq!(c.dt, Some(1e-2));
        assert_eq!(c.points().len(), 1);
    }

    #[test]
    fn unknown_parameter_rejected() {
        let e = RunConfig::resolve(Experiment::Seeded, ConfigFile::default(), flags(&["bogus=1"]))
            .unwrap_err();
        assert!(e.to_string().contains("bogus"));
    }

    #[test]
    fn type_errors() {
        for bad in ["n=1.5", "n=abc", "method=exact", "lambda=nan"] {
            assert!(
                RunConfig::resolve(Experiment::Quantum, ConfigFile::default(), flags(&[bad])).is_err(),
                "{bad}"
            );
        }
    }

    #[test]
    fn flags_override_file() {
        let file: ConfigFile =
            serde_json::from_str(r#"{"parameters": {"n": 64, "lambda": 0.5}, "dt": 0.05}"#).unwrap();
        let mut f = flags(&["n=128"]);
        f.dt = Some(0.02);
        let c = RunConfig::resolve(Experiment::Quantum, file, f).unwrap();
        assert_eq!(c.parameters.int("n"), 128);
        assert_eq!(c.parameters.f64("lambda"), 0.5);
        assert_eq!(c.dt, Some(0.02));
    }

    #[test]
    fn sweep_validation() {
        let mut f = flags(&[]);
        f.sweep = Some("lambda=0,0.5,1,1.5".into());
        let c = RunConfig::resolve(Experiment::Stability, ConfigFile::default(), f).unwrap();
        let lambdas: Vec<f64> = c.points().iter().map(|p| p.f64("lambda")).collect();
        assert_eq!(lambdas, vec![0.0, 0.5, 1.0, 1.5]);

        for bad in ["method=1,2", "nope=1,2", "n=16,16.5", "n=", "n"] {
            let mut f = flags(&[]);
            f.sweep = Some(bad.into());
            assert!(
                RunConfig::resolve(Experiment::Quantum, ConfigFile::default(), f).is_err(),
                "{bad}"
            );
        }
    }

    #[test]
    fn estimate_has_no_grid() {
        let mut f = flags(&[]);
        f.dt = Some(0.1);
        assert!(RunConfig::resolve(Experiment::Estimate, ConfigFile::default(), f).is_err());
    }

    #[test]
    fn config_file_rejects_unknown_keys() {
        assert!(serde_json::from_str::<ConfigFile>(r#"{"paramters": {}}"#).is_err());
    }
}
