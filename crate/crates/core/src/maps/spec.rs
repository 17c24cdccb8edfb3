use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{CircleLiftMap, SolenoidLeafMap, TorusLiftMap, TrigTerm};
use crate::abelian::{GroupKind, DEFAULT_DEPTH};
use crate::rational::{self, Rational};
use crate::{Error, Result};

/// A rotation amount written as a JSON number or as a string `"a/b"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AngleSpec {
    Real(f64),
    Text(String),
}

impl AngleSpec {
    pub fn resolve(&self) -> Result<(f64, Option<Rational>)> {
        match self {
            AngleSpec::Real(x) if x.is_finite() => Ok((*x, None)),
            AngleSpec::Real(_) => Err(Error::Invalid("non-finite angle".into())),
            AngleSpec::Text(s) => {
                let q = rational::parse_rational(s)?;
                Ok((rational::to_f64(&q), Some(q)))
            }
        }
    }
}

/// Torus perturbation: trig terms or a pair of expressions in `x`, `y`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PerturbationSpec {
    Terms(Vec<TrigTerm>),
    Exprs([String; 2]),
}

impl Default for PerturbationSpec {
    fn default() -> Self {
        PerturbationSpec::Terms(Vec::new())
    }
}

fn default_depth() -> u32 {
    DEFAULT_DEPTH
}

/// Level maps are JSON objects, so their keys travel as strings.
mod level_keys {
    use std::collections::BTreeMap;

    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &BTreeMap<u64, f64>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_map(m.iter().map(|(k, v)| (k.to_string(), v)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<u64, f64>, D::Error> {
        BTreeMap::<String, f64>::deserialize(d)?
            .into_iter()
            .map(|(k, v)| {
                k.trim()
                    .parse::<u64>()
                    .map(|b| (b, v))
                    .map_err(|_| D::Error::custom(format!("level key {k:?} is not a positive integer")))
            })
            .collect()
    }
}

/// JSON description of a map, e.g. `{"type":"arnold","c":0.3,"a":0.1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum MapSpec {
    Rigid {
        alpha: AngleSpec,
    },
    Arnold {
        c: f64,
        a: f64,
    },
    Parsed {
        lift: String,
    },
    Solenoid {
        #[serde(default = "default_depth")]
        depth: u32,
        c: f64,
        #[serde(default, with = "level_keys")]
        levels: BTreeMap<u64, f64>,
    },
    Torus {
        v: [f64; 2],
        #[serde(default)]
        perturbation: PerturbationSpec,
    },
    Doubling,
}

/// A constructed map.
#[derive(Clone, Debug, PartialEq)]
pub enum MapModel {
    Circle(CircleLiftMap),
    Torus(TorusLiftMap),
    Solenoid(SolenoidLeafMap),
    /// `x ↦ 2x mod 1`, not a homeomorphism; only used for entropy.
    Doubling,
}

impl MapSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("map spec: {e}")))
    }

    pub fn build(&self) -> Result<MapModel> {
        Ok(match self {
            MapSpec::Rigid { alpha } => match alpha.resolve()? {
                (_, Some(q)) => MapModel::Circle(CircleLiftMap::rigid_exact(q)),
                (x, None) => MapModel::Circle(CircleLiftMap::rigid(x)),
            },
            MapSpec::Arnold { c, a } => MapModel::Circle(CircleLiftMap::arnold(*c, *a)?),
            MapSpec::Parsed { lift } => MapModel::Circle(CircleLiftMap::parsed(lift)?),
            MapSpec::Solenoid { depth, c, levels } => {
                MapModel::Solenoid(SolenoidLeafMap::new(*depth, *c, levels.clone())?)
            }
            MapSpec::Torus { v, perturbation } => MapModel::Torus(match perturbation {
                PerturbationSpec::Terms(t) => TorusLiftMap::trig(*v, t.clone())?,
                PerturbationSpec::Exprs([a, b]) => TorusLiftMap::parsed(*v, [a, b])?,
            }),
            MapSpec::Doubling => MapModel::Doubling,
        })
    }
}

impl MapModel {
    /// The group the map acts on.
    pub fn group(&self) -> GroupKind {
        match self {
            MapModel::Circle(_) | MapModel::Doubling => GroupKind::Circle,
            MapModel::Torus(_) => GroupKind::Torus,
            MapModel::Solenoid(f) => GroupKind::Solenoid { depth: f.depth() },
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            MapModel::Circle(_) => "circle",
            MapModel::Torus(_) => "torus",
            MapModel::Solenoid(_) => "solenoid",
            MapModel::Doubling => "doubling",
        }
    }
}
