use serde::{Deserialize, Serialize};

use super::{CircleLiftMap, LiftMap, SolenoidLeafMap, TorusLiftMap};
use crate::abelian::{GroupKind, GroupPoint};
use crate::{Error, Result};

/// A self-map of a group acting on [`GroupPoint`]s.
pub trait GroupMap: Send + Sync {
    fn apply(&self, g: &GroupPoint) -> Result<GroupPoint>;
}

/// The translation `R_α(g) = g + α`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Translation {
    pub alpha: GroupPoint,
}

impl Translation {
    pub fn new(alpha: GroupPoint) -> Self {
        Translation { alpha }
    }

    pub fn kind(&self) -> GroupKind {
        self.alpha.kind()
    }
}

impl GroupMap for Translation {
    fn apply(&self, g: &GroupPoint) -> Result<GroupPoint> {
        g.add(&self.alpha)
    }
}

fn mismatch(expected: &str, g: &GroupPoint) -> Error {
    Error::GroupMismatch(format!(
        "a {expected} map cannot act on a {} point",
        g.kind().name()
    ))
}

impl GroupMap for CircleLiftMap {
    fn apply(&self, g: &GroupPoint) -> Result<GroupPoint> {
        match g {
            GroupPoint::Circle(z) => Ok(GroupPoint::Circle(self.step(z).0)),
            _ => Err(mismatch("circle", g)),
        }
    }
}

impl GroupMap for TorusLiftMap {
    fn apply(&self, g: &GroupPoint) -> Result<GroupPoint> {
        match g {
            GroupPoint::Torus(z) => Ok(GroupPoint::Torus(self.step(z).0)),
            _ => Err(mismatch("torus", g)),
        }
    }
}

impl GroupMap for SolenoidLeafMap {
    fn apply(&self, g: &GroupPoint) -> Result<GroupPoint> {
        match g {
            GroupPoint::Solenoid(p) => Ok(GroupPoint::Solenoid(self.step(p).0)),
            _ => Err(mismatch("solenoid", g)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::{CirclePoint, ProfiniteInt};
    use num_rational::Ratio;

    #[test]
    fn adding_machine_steps() {
        let r = Translation::new(GroupPoint::Profinite(ProfiniteInt::one(3).unwrap()));
        let mut g = GroupPoint::identity(&r.kind()).unwrap();
        for _ in 0..6 {
            g = r.apply(&g).unwrap();
        }
        assert_eq!(g, GroupPoint::identity(&r.kind()).unwrap());
    }

    #[test]
    fn rigid_lift_agrees_with_translation() {
        let q = Ratio::new(2, 7);
        let r = Translation::new(GroupPoint::Circle(CirclePoint::from_rational(q)));
        let f = CircleLiftMap::rigid_exact(q);
        let z = GroupPoint::Circle(CirclePoint::from_rational(Ratio::new(1, 3)));
        assert_eq!(r.apply(&z).unwrap(), f.apply(&z).unwrap());
        assert!(f.apply(&GroupPoint::identity(&GroupKind::Torus).unwrap()).is_err());
    }
}
