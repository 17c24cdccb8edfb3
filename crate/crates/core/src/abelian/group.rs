use serde::{Deserialize, Serialize};

use super::{CirclePoint, ProfiniteInt, SolenoidPoint, TorusPoint};
use crate::{Error, Result};

/// Which group a point, character or translation lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "group", rename_all = "lowercase")]
pub enum GroupKind {
    Circle,
    Torus,
    Profinite { depth: u32 },
    Solenoid { depth: u32 },
}

impl GroupKind {
    pub fn name(&self) -> &'static str {
        match self {
            GroupKind::Circle => "circle",
            GroupKind::Torus => "torus",
            GroupKind::Profinite { .. } => "profinite",
            GroupKind::Solenoid { .. } => "solenoid",
        }
    }
}

/// A point of any group in scope.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "group", content = "point", rename_all = "lowercase")]
pub enum GroupPoint {
    Circle(CirclePoint),
    Torus(TorusPoint),
    Profinite(ProfiniteInt),
    Solenoid(SolenoidPoint),
}

impl GroupPoint {
    pub fn identity(kind: &GroupKind) -> Result<Self> {
        Ok(match *kind {
            GroupKind::Circle => GroupPoint::Circle(CirclePoint::zero()),
            GroupKind::Torus => GroupPoint::Torus(TorusPoint::zero()),
            GroupKind::Profinite { depth } => GroupPoint::Profinite(ProfiniteInt::zero(depth)?),
            GroupKind::Solenoid { depth } => GroupPoint::Solenoid(SolenoidPoint::identity(depth)?),
        })
    }

    pub fn kind(&self) -> GroupKind {
        match self {
            GroupPoint::Circle(_) => GroupKind::Circle,
            GroupPoint::Torus(_) => GroupKind::Torus,
            GroupPoint::Profinite(x) => GroupKind::Profinite { depth: x.depth() },
            GroupPoint::Solenoid(p) => GroupKind::Solenoid { depth: p.depth() },
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(match (self, other) {
            (GroupPoint::Circle(a), GroupPoint::Circle(b)) => GroupPoint::Circle(a.add(b)),
            (GroupPoint::Torus(a), GroupPoint::Torus(b)) => GroupPoint::Torus(a.add(b)),
            (GroupPoint::Profinite(a), GroupPoint::Profinite(b)) => {
                GroupPoint::Profinite(a.add(b))
            }
            (GroupPoint::Solenoid(a), GroupPoint::Solenoid(b)) => GroupPoint::Solenoid(a.add(b)),
            _ => {
                return Err(Error::GroupMismatch(format!(
                    "cannot add a {} point to a {} point",
                    other.kind().name(),
                    self.kind().name()
                )))
            }
        })
    }

    pub fn neg(&self) -> Self {
        match self {
            GroupPoint::Circle(a) => GroupPoint::Circle(a.neg()),
            GroupPoint::Torus(a) => GroupPoint::Torus(a.neg()),
            GroupPoint::Profinite(a) => GroupPoint::Profinite(a.neg()),
            GroupPoint::Solenoid(a) => GroupPoint::Solenoid(a.neg()),
        }
    }
}

impl From<CirclePoint> for GroupPoint {
    fn from(p: CirclePoint) -> Self {
        GroupPoint::Circle(p)
    }
}

impl From<TorusPoint> for GroupPoint {
    fn from(p: TorusPoint) -> Self {
        GroupPoint::Torus(p)
    }
}

impl From<ProfiniteInt> for GroupPoint {
    fn from(p: ProfiniteInt) -> Self {
        GroupPoint::Profinite(p)
    }
}

impl From<SolenoidPoint> for GroupPoint {
    fn from(p: SolenoidPoint) -> Self {
        GroupPoint::Solenoid(p)
    }
}
