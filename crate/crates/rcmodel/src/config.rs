//! Experiment configuration: a flat TOML file with no silent defaults for
//! seed or geometry, and hard errors on unknown or inapplicable keys.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::exact::Bc;
use crate::sampler::Schedule;

/// The experiments the harness can run.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ExperimentKind {
    ExactCheck,
    DualityCheck,
    SelfdualCrossing,
    Threshold,
    Decay,
    MengerCheck,
    InfluenceProfile,
    InequalitySuite,
    EstimatePc,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::ExactCheck => "exact-check",
            ExperimentKind::DualityCheck => "duality-check",
            ExperimentKind::SelfdualCrossing => "selfdual-crossing",
            ExperimentKind::Threshold => "threshold",
            ExperimentKind::Decay => "decay",
            ExperimentKind::MengerCheck => "menger-check",
            ExperimentKind::InfluenceProfile => "influence-profile",
            ExperimentKind::InequalitySuite => "inequality-suite",
            ExperimentKind::EstimatePc => "estimate-pc",
        }
    }

    pub fn all() -> [ExperimentKind; 9] {
        [
            ExperimentKind::ExactCheck,
            ExperimentKind::DualityCheck,
            ExperimentKind::SelfdualCrossing,
            ExperimentKind::Threshold,
            ExperimentKind::Decay,
            ExperimentKind::MengerCheck,
            ExperimentKind::InfluenceProfile,
            ExperimentKind::InequalitySuite,
            ExperimentKind::EstimatePc,
        ]
    }
}

impl std::str::FromStr for ExperimentKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<ExperimentKind> {
        ExperimentKind::all()
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown experiment {s:?}")))
    }
}

/// Raw key-value view of the config file. Every key the harness understands
/// appears here; anything else fails deserialization.
#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    experiment: Option<String>,
    seed: Option<u64>,
    /// edge probabilities, dimensionless in [0,1]
    p: Option<Vec<f64>>,
    /// cluster weights, dimensionless, >= 1
    q: Option<Vec<f64>>,
    /// boundary conditions: "free" or "wired"
    bc: Option<Vec<String>>,
    /// event scale, lattice units
    n: Option<i32>,
    /// box half-width or width, lattice units (kind-specific)
    a: Option<i32>,
    /// box half-height or height, lattice units (kind-specific)
    b: Option<i32>,
    /// simulation box linear-size multiplier, dimensionless
    margin: Option<i32>,
    /// total sweeps per chain, count
    sweeps: Option<u64>,
    /// sweeps discarded before sampling, count
    burnin: Option<u64>,
    /// sweeps between retained samples, count
    thin: Option<u64>,
    /// connection distances for decay fits, lattice units
    distances: Option<Vec<i32>>,
    /// target interval width for the critical-point search, dimensionless
    tolerance: Option<f64>,
    /// probability increment for the Hamming bound, dimensionless
    delta: Option<f64>,
    /// output CSV file name, relative to the output directory
    out: Option<String>,
}

/// A validated experiment description.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub seed: u64,
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    pub bc: Vec<Bc>,
    pub n: i32,
    pub a: i32,
    pub b: i32,
    pub margin: i32,
    pub schedule: Option<Schedule>,
    pub distances: Vec<i32>,
    pub tolerance: f64,
    pub delta: f64,
    pub out: String,
}

/// Which keys a kind consumes; everything else present is an error.
struct FieldUse {
    p: bool,
    q: bool,
    bc: bool,
    n: bool,
    ab: bool,
    margin: bool,
    schedule: bool,
    distances: bool,
    tolerance: bool,
    delta: bool,
}

fn field_use(kind: ExperimentKind) -> FieldUse {
    let base = FieldUse {
        p: false,
        q: false,
        bc: false,
        n: false,
        ab: false,
        margin: false,
        schedule: false,
        distances: false,
        tolerance: false,
        delta: false,
    };
    match kind {
        ExperimentKind::ExactCheck => FieldUse { p: true, q: true, bc: true, ab: true, ..base },
        ExperimentKind::DualityCheck => FieldUse { p: true, q: true, ab: true, ..base },
        ExperimentKind::SelfdualCrossing => {
            FieldUse { q: true, n: true, margin: true, schedule: true, ..base }
        }
        ExperimentKind::Threshold => {
            FieldUse { p: true, q: true, n: true, margin: true, schedule: true, ..base }
        }
        ExperimentKind::Decay => FieldUse { p: true, q: true, distances: true, schedule: true, ..base },
        ExperimentKind::MengerCheck => FieldUse { ab: true, ..base },
        ExperimentKind::InfluenceProfile => FieldUse {
            p: true,
            q: true,
            bc: true,
            ab: true,
            margin: true,
            schedule: true,
            ..base
        },
        ExperimentKind::InequalitySuite => FieldUse {
            p: true,
            q: true,
            n: true,
            margin: true,
            schedule: true,
            delta: true,
            ..base
        },
        ExperimentKind::EstimatePc => FieldUse {
            q: true,
            n: true,
            margin: true,
            schedule: true,
            tolerance: true,
            ..base
        },
    }
}

fn require<T>(value: Option<T>, key: &str, kind: ExperimentKind) -> Result<T> {
    value.ok_or_else(|| Error::Config(format!("{} requires the key {key:?}", kind.name())))
}

fn forbid<T>(value: &Option<T>, key: &str, kind: ExperimentKind) -> Result<()> {
    if value.is_some() {
        return Err(Error::Config(format!("{} does not take the key {key:?}", kind.name())));
    }
    Ok(())
}

impl ExperimentConfig {
    /// Parses and validates a TOML config string.
    pub fn from_toml(text: &str) -> Result<ExperimentConfig> {
        let raw: RawConfig =
            toml::from_str(text).map_err(|e| Error::Config(format!("config parse: {e}")))?;
        ExperimentConfig::from_raw(raw)
    }

    /// Reads and validates a config file.
    pub fn load(path: &std::path::Path) -> Result<ExperimentConfig> {
        let text = std::fs::read_to_string(path)?;
        ExperimentConfig::from_toml(&text)
    }

    fn from_raw(raw: RawConfig) -> Result<ExperimentConfig> {
        let kind: ExperimentKind = raw
            .experiment
            .as_deref()
            .ok_or_else(|| Error::Config("missing key \"experiment\"".into()))?
            .parse()?;
        let seed = raw
            .seed
            .ok_or_else(|| Error::Config("missing key \"seed\" (chains must be reproducible)".into()))?;
        let uses = field_use(kind);

        let p = if uses.p {
            let p = require(raw.p, "p", kind)?;
            if p.is_empty() {
                return Err(Error::Config("p grid is empty".into()));
            }
            for &x in &p {
                if !(0.0..=1.0).contains(&x) {
                    return Err(Error::Config(format!("p = {x} outside [0,1]")));
                }
            }
            p
        } else {
            forbid(&raw.p, "p", kind)?;
            Vec::new()
        };

        let q = if uses.q {
            let q = require(raw.q, "q", kind)?;
            if q.is_empty() {
                return Err(Error::Config("q grid is empty".into()));
            }
            for &x in &q {
                if !(x >= 1.0) {
                    return Err(Error::Config(format!("q = {x} below 1")));
                }
            }
            q
        } else {
            forbid(&raw.q, "q", kind)?;
            Vec::new()
        };

        let bc = if uses.bc {
            let names = require(raw.bc, "bc", kind)?;
            if names.is_empty() {
                return Err(Error::Config("bc list is empty".into()));
            }
            names
                .iter()
                .map(|s| s.parse::<Bc>().map_err(|e| Error::Config(e.to_string())))
                .collect::<Result<Vec<Bc>>>()?
        } else {
            forbid(&raw.bc, "bc", kind)?;
            Vec::new()
        };

        let n = if uses.n {
            let n = require(raw.n, "n", kind)?;
            if n < 1 {
                return Err(Error::Config(format!("n = {n} below 1")));
            }
            n
        } else {
            forbid(&raw.n, "n", kind)?;
            0
        };

        let (a, b) = if uses.ab {
            let a = require(raw.a, "a", kind)?;
            let b = require(raw.b, "b", kind)?;
            if a < 0 || b < 0 || (a, b) == (0, 0) {
                return Err(Error::Config(format!("degenerate box a={a} b={b}")));
            }
            (a, b)
        } else {
            forbid(&raw.a, "a", kind)?;
            forbid(&raw.b, "b", kind)?;
            (0, 0)
        };

        let margin = if uses.margin {
            let m = require(raw.margin, "margin", kind)?;
            if m < 1 {
                return Err(Error::Config(format!("margin = {m} below 1")));
            }
            m
        } else {
            forbid(&raw.margin, "margin", kind)?;
            1
        };

        let schedule = if uses.schedule {
            let sweeps = require(raw.sweeps, "sweeps", kind)?;
            let burnin = require(raw.burnin, "burnin", kind)?;
            let thin = require(raw.thin, "thin", kind)?;
            Some(Schedule::new(sweeps, burnin, thin).map_err(|e| Error::Config(e.to_string()))?)
        } else {
            forbid(&raw.sweeps, "sweeps", kind)?;
            forbid(&raw.burnin, "burnin", kind)?;
            forbid(&raw.thin, "thin", kind)?;
            None
        };

        let distances = if uses.distances {
            let d = require(raw.distances, "distances", kind)?;
            if d.len() < 4 {
                return Err(Error::Config(format!(
                    "decay needs at least 4 distances, got {}",
                    d.len()
                )));
            }
            d
        } else {
            forbid(&raw.distances, "distances", kind)?;
            Vec::new()
        };

        let tolerance = if uses.tolerance {
            let t = require(raw.tolerance, "tolerance", kind)?;
            if t < 0.005 {
                return Err(Error::Config(format!("tolerance = {t} below 0.005")));
            }
            t
        } else {
            forbid(&raw.tolerance, "tolerance", kind)?;
            0.0
        };

        let delta = if uses.delta {
            let d = require(raw.delta, "delta", kind)?;
            if !(0.0..=1.0).contains(&d) {
                return Err(Error::Config(format!("delta = {d} outside [0,1]")));
            }
            d
        } else {
            forbid(&raw.delta, "delta", kind)?;
            0.0
        };

        let out = raw.out.unwrap_or_else(|| format!("{}.csv", kind.name()));

        Ok(ExperimentConfig {
            kind,
            seed,
            p,
            q,
            bc,
            n,
            a,
            b,
            margin,
            schedule,
            distances,
            tolerance,
            delta,
            out,
        })
    }
}
