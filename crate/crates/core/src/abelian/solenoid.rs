use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::{CirclePoint, ProfiniteInt};
use crate::rational::{self, serde_rational_opt, Rational};
use crate::{Error, Result};

/// A point of the universal solenoid 𝕊 = (ℝ × Ẑ)/ℤ.
///
/// The deck group ℤ acts by `n·(t, x) = (t + n, x - n·𝟏)`, so a point is stored
/// by its canonical representative with leaf coordinate `t ∈ [0, 1)`. Moving
/// one unit along the leaf therefore carries `𝟏` into the fiber:
/// `σ(1) = (0, 𝟏)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSolenoid", into = "RawSolenoid")]
pub struct SolenoidPoint {
    leaf: CirclePoint,
    fiber: ProfiniteInt,
}

#[derive(Serialize, Deserialize)]
struct RawSolenoid {
    leaf: f64,
    #[serde(
        with = "serde_rational_opt",
        skip_serializing_if = "Option::is_none",
        default
    )]
    leaf_exact: Option<Rational>,
    fiber: ProfiniteInt,
}

impl TryFrom<RawSolenoid> for SolenoidPoint {
    type Error = Error;
    fn try_from(raw: RawSolenoid) -> Result<Self> {
        match raw.leaf_exact {
            Some(q) => Ok(SolenoidPoint::from_lift_exact(q, raw.fiber)),
            None if raw.leaf.is_finite() => Ok(SolenoidPoint::from_lift(raw.leaf, raw.fiber)),
            None => Err(Error::Invalid("non-finite leaf coordinate".into())),
        }
    }
}

impl From<SolenoidPoint> for RawSolenoid {
    fn from(p: SolenoidPoint) -> Self {
        RawSolenoid {
            leaf: p.leaf.value(),
            leaf_exact: p.leaf.exact(),
            fiber: p.fiber,
        }
    }
}

impl SolenoidPoint {
    /// Canonicalizes an arbitrary representative `(t, x)`.
    pub fn from_lift(t: f64, fiber: ProfiniteInt) -> Self {
        let mut n = t.floor();
        let mut f = t - n;
        if f >= 1.0 {
            f = 0.0;
            n += 1.0;
        }
        SolenoidPoint {
            leaf: CirclePoint::new(f),
            fiber: fiber.add_integer(n as i64),
        }
    }

    pub fn from_lift_exact(t: Rational, fiber: ProfiniteInt) -> Self {
        let n = t.floor();
        SolenoidPoint {
            leaf: CirclePoint::from_rational(t - n),
            fiber: fiber.add_integer(*n.numer()),
        }
    }

    /// The one-parameter subgroup `σ(t) = [(t, 0)]`.
    pub fn sigma(t: f64, depth: u32) -> Result<Self> {
        Ok(SolenoidPoint::from_lift(t, ProfiniteInt::zero(depth)?))
    }

    pub fn sigma_exact(t: Rational, depth: u32) -> Result<Self> {
        Ok(SolenoidPoint::from_lift_exact(t, ProfiniteInt::zero(depth)?))
    }

    pub fn identity(depth: u32) -> Result<Self> {
        SolenoidPoint::sigma_exact(Ratio::from_integer(0), depth)
    }

    /// A point of the canonical fiber over 0.
    pub fn from_fiber(fiber: ProfiniteInt) -> Self {
        SolenoidPoint {
            leaf: CirclePoint::zero(),
            fiber,
        }
    }

    pub fn leaf(&self) -> f64 {
        self.leaf.value()
    }

    pub fn leaf_point(&self) -> CirclePoint {
        self.leaf
    }

    pub fn leaf_exact(&self) -> Option<Rational> {
        self.leaf.exact()
    }

    pub fn fiber(&self) -> ProfiniteInt {
        self.fiber
    }

    pub fn depth(&self) -> u32 {
        self.fiber.depth()
    }

    /// Moves `t` along the leaf: `[(leaf + t, fiber)]`.
    pub fn flow(&self, t: f64) -> Self {
        SolenoidPoint::from_lift(self.leaf.value() + t, self.fiber)
    }

    pub fn add(&self, other: &Self) -> Self {
        let fiber = self.fiber.add(&other.fiber);
        match (self.leaf.exact(), other.leaf.exact()) {
            (Some(a), Some(b)) => match rational::checked_add(&a, &b) {
                Some(s) => SolenoidPoint::from_lift_exact(s, fiber),
                None => SolenoidPoint::from_lift(self.leaf() + other.leaf(), fiber),
            },
            _ => SolenoidPoint::from_lift(self.leaf() + other.leaf(), fiber),
        }
    }

    pub fn neg(&self) -> Self {
        let fiber = self.fiber.neg();
        match self.leaf.exact() {
            Some(q) => SolenoidPoint::from_lift_exact(-q, fiber),
            None => SolenoidPoint::from_lift(-self.leaf(), fiber),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// The projection `pr_b : 𝕊 → ℝ/bℤ`, `(t, x) ↦ t + (x mod b)`.
    pub fn project(&self, b: u64) -> Result<f64> {
        let r = self.fiber.project(b)?;
        Ok(self.leaf.value() + r as f64)
    }

    /// Exact projection when the leaf coordinate is rational.
    pub fn project_exact(&self, b: u64) -> Result<Option<Rational>> {
        let r = self.fiber.project(b)? as i64;
        Ok(self
            .leaf
            .exact()
            .and_then(|q| rational::checked_add(&q, &Ratio::from_integer(r))))
    }

    /// Distance in the product metric on one representative each: leaf
    /// distance if the fibers agree at `level`, otherwise 1.
    pub fn level_dist(&self, other: &Self, level: u64) -> Result<f64> {
        let a = self.project(level)?;
        let b = other.project(level)?;
        Ok(rational::circle_dist_mod(a, b, level as f64))
    }
}
