use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::{GroupKind, GroupPoint, UnitComplex};
use crate::rational::{self, frac, serde_rational, to_f64, Rational};
use crate::{Error, Result};

/// An element of a dual group.
///
/// * `Char(ℝ/ℤ) ≅ ℤ`: `z ↦ exp(2πi·k·z)`
/// * `Char(𝕋²) ≅ ℤ²`: `(z₁, z₂) ↦ exp(2πi·(k₁z₁ + k₂z₂))`
/// * `Char(Ẑ) ≅ ℚ/ℤ`: `x ↦ exp(2πi·(a/b)·(x mod b))`
/// * `Char(𝕊) ≅ ℚ`: `(t, x) ↦ exp(2πi·(a/b)·(t + (x mod b)))`
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "group", rename_all = "lowercase")]
pub enum Character {
    Circle {
        k: i64,
    },
    Torus {
        k: [i64; 2],
    },
    Profinite {
        #[serde(with = "serde_rational")]
        q: Rational,
    },
    Solenoid {
        #[serde(with = "serde_rational")]
        q: Rational,
    },
}

impl Character {
    /// A character of Ẑ, reduced into `[0, 1)`.
    pub fn profinite(q: Rational) -> Self {
        Character::Profinite {
            q: rational::frac_q(&q),
        }
    }

    pub fn solenoid(q: Rational) -> Self {
        Character::Solenoid { q }
    }

    pub fn group_name(&self) -> &'static str {
        match self {
            Character::Circle { .. } => "circle",
            Character::Torus { .. } => "torus",
            Character::Profinite { .. } => "profinite",
            Character::Solenoid { .. } => "solenoid",
        }
    }

    pub fn is_trivial(&self) -> bool {
        match self {
            Character::Circle { k } => *k == 0,
            Character::Torus { k } => k[0] == 0 && k[1] == 0,
            Character::Profinite { q } => q.is_integer(),
            Character::Solenoid { q } => *q.numer() == 0,
        }
    }

    /// Whether the character can be evaluated on points of `kind`.
    pub fn accepts(&self, kind: &GroupKind) -> bool {
        match (self, kind) {
            (Character::Circle { .. }, GroupKind::Circle) => true,
            (Character::Torus { .. }, GroupKind::Torus) => true,
            (Character::Profinite { q }, GroupKind::Profinite { depth })
            | (Character::Solenoid { q }, GroupKind::Solenoid { depth }) => {
                rational::factorial(*depth) % (*q.denom() as u64) == 0
            }
            _ => false,
        }
    }

    /// Group product (pointwise multiplication of characters).
    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(match (self, other) {
            (Character::Circle { k: a }, Character::Circle { k: b }) => {
                Character::Circle { k: a + b }
            }
            (Character::Torus { k: a }, Character::Torus { k: b }) => Character::Torus {
                k: [a[0] + b[0], a[1] + b[1]],
            },
            (Character::Profinite { q: a }, Character::Profinite { q: b }) => {
                Character::profinite(a + b)
            }
            (Character::Solenoid { q: a }, Character::Solenoid { q: b }) => {
                Character::Solenoid { q: a + b }
            }
            _ => {
                return Err(Error::GroupMismatch(format!(
                    "cannot multiply a {} character by a {} character",
                    self.group_name(),
                    other.group_name()
                )))
            }
        })
    }

    /// Evaluates the pairing `⟨χ, g⟩`.
    ///
    /// The angle is exact whenever the point carries exact coordinates (Ẑ
    /// points always do).
    pub fn eval(&self, g: &GroupPoint) -> Result<UnitComplex> {
        match (self, g) {
            (Character::Circle { k }, GroupPoint::Circle(z)) => {
                Ok(UnitComplex::from_circle(z.scale(*k)))
            }
            (Character::Torus { k }, GroupPoint::Torus(z)) => Ok(UnitComplex::from_circle(
                z.0[0].scale(k[0]).add(&z.0[1].scale(k[1])),
            )),
            (Character::Profinite { q }, GroupPoint::Profinite(x)) => {
                let (b, a) = (*q.denom(), *q.numer());
                let r = x.project(b as u64).map_err(|_| depth_error(q, x.depth()))?;
                Ok(UnitComplex::from_rational(fiber_angle(a, b, r)))
            }
            (Character::Solenoid { q }, GroupPoint::Solenoid(p)) => {
                let (b, a) = (*q.denom(), *q.numer());
                let r = p
                    .fiber()
                    .project(b as u64)
                    .map_err(|_| depth_error(q, p.depth()))?;
                let fiber_part = fiber_angle(a, b, r);
                let exact = p
                    .leaf_exact()
                    .and_then(|t| rational::checked_mul(q, &t))
                    .and_then(|qt| rational::checked_add(&qt, &fiber_part));
                Ok(match exact {
                    Some(angle) => UnitComplex::from_rational(angle),
                    None => UnitComplex::from_angle(frac(to_f64(q) * p.leaf()) + to_f64(&fiber_part)),
                })
            }
            _ => Err(Error::GroupMismatch(format!(
                "a {} character cannot be evaluated on a {} point",
                self.group_name(),
                g.kind().name()
            ))),
        }
    }

    /// Real frequency multiplying a leaf (or circle) displacement.
    pub fn frequency(&self) -> Option<f64> {
        match self {
            Character::Circle { k } => Some(*k as f64),
            Character::Solenoid { q } => Some(to_f64(q)),
            _ => None,
        }
    }
}

fn depth_error(q: &Rational, depth: u32) -> Error {
    Error::Depth(format!(
        "denominator {} does not divide {depth}! = {}",
        q.denom(),
        rational::factorial(depth)
    ))
}

/// `(a·r mod b)/b`
fn fiber_angle(a: i64, b: i64, r: u64) -> Rational {
    let num = (a as i128).rem_euclid(b as i128) * r as i128 % b as i128;
    Ratio::new(num as i64, b)
}
