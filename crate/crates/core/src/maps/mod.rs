//! Homeomorphism models given by lifts, translations, and orbit iteration.
//!
//! Every model works in canonical coordinates of its group and reports, at
//! each step, the lift displacement `F(z̃) − z̃` in the covering space (a real
//! number for circle and solenoid-leaf maps, a vector for torus maps). Summing
//! these displacements along an orbit gives `F^n(z̃) − z̃` without ever leaving
//! a bounded domain.

mod circle;
mod solenoid;
mod spec;
mod torus;
mod translation;

use std::fmt::Debug;
use std::ops::{Add, Neg, Sub};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::abelian::Character;
use crate::{Error, Result};

pub use circle::CircleLiftMap;
pub use solenoid::{InducedCircleMap, SolenoidLeafMap};
pub use spec::{AngleSpec, MapModel, MapSpec, PerturbationSpec};
pub use torus::{Perturbation, TorusLiftMap, TrigTerm, Wave};
pub use translation::{GroupMap, Translation};

/// Grid size for the equivariance / monotonicity checks run at construction.
pub const CHECK_GRID: usize = 1024;
/// Tolerance for the equivariance / periodicity checks.
pub const CHECK_TOL: f64 = 1e-9;
/// Bisection tolerance and iteration cap for backward iteration.
pub const INVERSE_TOL: f64 = 1e-12;
pub const INVERSE_MAX_ITER: usize = 200;

/// A lift displacement: `f64` on the circle and along solenoid leaves,
/// [`Vec2`] on the torus.
pub trait Delta:
    Copy
    + Default
    + Debug
    + PartialEq
    + Send
    + Sync
    + Serialize
    + Add<Output = Self>
    + Sub<Output = Self>
    + Neg<Output = Self>
{
    fn norm(&self) -> f64;
    fn components(&self) -> Vec<f64>;
    fn scale(self, s: f64) -> Self;
    /// `⟨frequency(χ), δ⟩`, the amount by which χ winds along the displacement.
    fn pair(&self, ch: &Character) -> Result<f64>;
}

impl Delta for f64 {
    fn norm(&self) -> f64 {
        self.abs()
    }

    fn components(&self) -> Vec<f64> {
        vec![*self]
    }

    fn scale(self, s: f64) -> Self {
        self * s
    }

    fn pair(&self, ch: &Character) -> Result<f64> {
        ch.frequency().map(|q| q * self).ok_or_else(|| {
            Error::GroupMismatch(format!(
                "a {} character does not pair with a scalar displacement",
                ch.group_name()
            ))
        })
    }
}

/// A displacement in ℝ².
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Vec2(pub [f64; 2]);

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2([self.0[0] + o.0[0], self.0[1] + o.0[1]])
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2([self.0[0] - o.0[0], self.0[1] - o.0[1]])
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2([-self.0[0], -self.0[1]])
    }
}

impl Delta for Vec2 {
    fn norm(&self) -> f64 {
        self.0[0].hypot(self.0[1])
    }

    fn components(&self) -> Vec<f64> {
        self.0.to_vec()
    }

    fn scale(self, s: f64) -> Self {
        Vec2([self.0[0] * s, self.0[1] * s])
    }

    fn pair(&self, ch: &Character) -> Result<f64> {
        match ch {
            Character::Torus { k } => Ok(k[0] as f64 * self.0[0] + k[1] as f64 * self.0[1]),
            _ => Err(Error::GroupMismatch(format!(
                "a {} character does not pair with a torus displacement",
                ch.group_name()
            ))),
        }
    }
}

/// A group homeomorphism isotopic to the identity, presented through a lift.
pub trait LiftMap: Send + Sync {
    type Point: Clone + Debug + Send + Sync;
    type Delta: Delta;

    /// `F(z̃) − z̃` at the canonical representative of `p`.
    fn displacement(&self, p: &Self::Point) -> Self::Delta;

    /// Canonical image of `p` and the displacement taken.
    fn step(&self, p: &Self::Point) -> (Self::Point, Self::Delta);

    /// Canonical preimage `p'` of `p` and the displacement `F(p̃') − p̃'`.
    fn step_back(&self, p: &Self::Point) -> Result<(Self::Point, Self::Delta)>;

    /// Canonical coordinates, for CSV dumps.
    fn coordinates(&self, p: &Self::Point) -> Vec<f64>;

    /// Distance between canonical points.
    fn distance(&self, a: &Self::Point, b: &Self::Point) -> f64;

    /// A Haar-distributed point of the underlying group.
    fn haar_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Point;

    /// True when the map is a group translation (so Haar measure is invariant).
    fn is_translation(&self) -> bool;
}

/// An orbit with its cumulative lift displacement.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitTrace<P, D> {
    /// `z, f(z), …, f^n(z)` in canonical coordinates.
    pub points: Vec<P>,
    /// `F^k(z̃) − z̃` for `k = 0..=n`.
    pub cumulative: Vec<D>,
}

/// `n` forward steps from `start`.
pub fn iterate<L: LiftMap>(map: &L, start: &L::Point, n: usize) -> OrbitTrace<L::Point, L::Delta> {
    let mut points = Vec::with_capacity(n + 1);
    let mut cumulative = Vec::with_capacity(n + 1);
    let mut p = start.clone();
    let mut acc = L::Delta::default();
    points.push(p.clone());
    cumulative.push(acc);
    for _ in 0..n {
        let (q, d) = map.step(&p);
        acc = acc + d;
        p = q;
        points.push(p.clone());
        cumulative.push(acc);
    }
    OrbitTrace { points, cumulative }
}

impl<P, D: Delta> OrbitTrace<P, D> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn total_displacement(&self) -> D {
        self.cumulative.last().copied().unwrap_or_default()
    }

    /// `step, coordinates…, cumulative displacement…` with a header row.
    pub fn to_csv<L>(&self, map: &L) -> String
    where
        L: LiftMap<Point = P, Delta = D>,
    {
        let mut out = String::new();
        let ncoord = self.points.first().map_or(0, |p| map.coordinates(p).len());
        let ndisp = self.cumulative.first().map_or(0, |d| d.components().len());
        out.push_str("step");
        for i in 0..ncoord {
            out.push_str(&format!(",z{i}"));
        }
        if ndisp == 1 {
            out.push_str(",displacement");
        } else {
            for i in 0..ndisp {
                out.push_str(&format!(",displacement{i}"));
            }
        }
        out.push('\n');
        for (k, (p, d)) in self.points.iter().zip(&self.cumulative).enumerate() {
            out.push_str(&k.to_string());
            for c in map.coordinates(p) {
                out.push_str(&format!(",{c}"));
            }
            for c in d.components() {
                out.push_str(&format!(",{c}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Finds `y` with `lift(y) = target` for a strictly increasing degree-one lift.
pub(crate) fn invert_monotone(lift: impl Fn(f64) -> f64, target: f64, guess: f64) -> Result<f64> {
    let mut lo = guess - 1.0;
    let mut hi = guess + 1.0;
    let mut expand = 0;
    while lift(lo) > target {
        lo -= 1.0;
        expand += 1;
        if expand > 64 {
            return Err(Error::Inverse { at: target });
        }
    }
    while lift(hi) < target {
        hi += 1.0;
        expand += 1;
        if expand > 128 {
            return Err(Error::Inverse { at: target });
        }
    }
    for _ in 0..INVERSE_MAX_ITER {
        if hi - lo <= INVERSE_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if lift(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if hi - lo > INVERSE_TOL && (hi - lo) > 4.0 * f64::EPSILON * hi.abs().max(1.0) {
        return Err(Error::Inverse { at: target });
    }
    Ok(0.5 * (lo + hi))
}
