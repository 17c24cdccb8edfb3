use std::collections::BTreeMap;
use std::f64::consts::TAU;

use rand::Rng;

use super::{invert_monotone, LiftMap};
use crate::abelian::{ProfiniteInt, SolenoidPoint};
use crate::rational::{self, circle_dist_mod};
use crate::{Error, Result};

/// A leafwise map of the solenoid fixing fibers:
/// `F(t, x) = (t + φ(t, x), x)` with
/// `φ(t, x) = c + Σ_b a_b · sin(2π(t + (x mod b))/b)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SolenoidLeafMap {
    depth: u32,
    c: f64,
    levels: BTreeMap<u64, f64>,
}

impl SolenoidLeafMap {
    /// Checks `b | K!` for every level and `1 + ∂φ/∂t > 0` on a grid.
    pub fn new(depth: u32, c: f64, levels: BTreeMap<u64, f64>) -> Result<Self> {
        ProfiniteInt::zero(depth)?;
        let m = rational::factorial(depth);
        for (&b, &a) in &levels {
            if b == 0 || m % b != 0 {
                return Err(Error::Depth(format!(
                    "level {b} does not divide {depth}! = {m}"
                )));
            }
            if !a.is_finite() {
                return Err(Error::Invalid(format!("non-finite amplitude at level {b}")));
            }
        }
        if !c.is_finite() {
            return Err(Error::Invalid("non-finite constant displacement".into()));
        }
        let map = SolenoidLeafMap { depth, c, levels };
        let l = map.level_lcm() as f64;
        let samples = 4096;
        for i in 0..samples {
            let u = l * i as f64 / samples as f64;
            if map.leaf_derivative(u) <= 0.0 {
                return Err(Error::Monotonicity { at: u });
            }
        }
        Ok(map)
    }

    /// The translation by `σ(c)`.
    pub fn rigid(depth: u32, c: f64) -> Result<Self> {
        SolenoidLeafMap::new(depth, c, BTreeMap::new())
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn levels(&self) -> &BTreeMap<u64, f64> {
        &self.levels
    }

    /// Least common multiple of the levels (1 when there are none).
    pub fn level_lcm(&self) -> u64 {
        self.levels.keys().fold(1, |acc, &b| rational::lcm(acc, b))
    }

    /// `φ` as a function of the level coordinate `u = t + (x mod L)` for any
    /// `L` divisible by every level.
    #[inline]
    pub fn phi(&self, u: f64) -> f64 {
        let mut s = self.c;
        for (&b, &a) in &self.levels {
            s += a * (TAU * u / b as f64).sin();
        }
        s
    }

    fn leaf_derivative(&self, u: f64) -> f64 {
        let mut s = 1.0;
        for (&b, &a) in &self.levels {
            let w = TAU / b as f64;
            s += a * w * (w * u).cos();
        }
        s
    }

    fn level_coordinate(&self, p: &SolenoidPoint) -> f64 {
        let l = self.level_lcm();
        let r = p.fiber().project(l).expect("levels divide the fiber modulus");
        p.leaf() + r as f64
    }

    /// `φ(t, x)` at the canonical representative.
    pub fn disp(&self, p: &SolenoidPoint) -> f64 {
        if self.levels.is_empty() {
            return self.c;
        }
        self.phi(self.level_coordinate(p))
    }

    /// The induced circle map on `ℝ/Lℤ`; every level must divide `L`, and
    /// `L` must divide `K!`.
    pub fn induced(&self, level: u64) -> Result<InducedCircleMap> {
        let m = rational::factorial(self.depth);
        if level == 0 || m % level != 0 {
            return Err(Error::Depth(format!(
                "level {level} does not divide {}! = {m}",
                self.depth
            )));
        }
        if let Some(b) = self.levels.keys().find(|&&b| level % b != 0) {
            return Err(Error::Invalid(format!(
                "the map has a level-{b} term and does not descend to ℝ/{level}ℤ"
            )));
        }
        Ok(InducedCircleMap {
            level,
            map: self.clone(),
        })
    }
}

impl LiftMap for SolenoidLeafMap {
    type Point = SolenoidPoint;
    type Delta = f64;

    fn displacement(&self, p: &SolenoidPoint) -> f64 {
        self.disp(p)
    }

    fn step(&self, p: &SolenoidPoint) -> (SolenoidPoint, f64) {
        let d = self.disp(p);
        (p.flow(d), d)
    }

    fn step_back(&self, p: &SolenoidPoint) -> Result<(SolenoidPoint, f64)> {
        if self.levels.is_empty() {
            return Ok((p.flow(-self.c), self.c));
        }
        // Solve s + φ(s, x) = t along the leaf through the canonical representative.
        let u0 = self.level_coordinate(p);
        let t = p.leaf();
        let s = invert_monotone(|s| s + self.phi(u0 - t + s), t, t - self.phi(u0))?;
        Ok((p.flow(s - t), t - s))
    }

    fn coordinates(&self, p: &SolenoidPoint) -> Vec<f64> {
        vec![p.leaf(), p.fiber().residue() as f64]
    }

    /// Distance of the projections to `ℝ/Lℤ`, `L` the level lcm.
    fn distance(&self, a: &SolenoidPoint, b: &SolenoidPoint) -> f64 {
        a.level_dist(b, self.level_lcm()).unwrap_or(f64::INFINITY)
    }

    fn haar_point<R: Rng + ?Sized>(&self, rng: &mut R) -> SolenoidPoint {
        let m = rational::factorial(self.depth);
        let fiber = ProfiniteInt::new(self.depth, rng.random_range(0..m)).expect("valid depth");
        SolenoidPoint::from_lift(rng.random::<f64>(), fiber)
    }

    fn is_translation(&self) -> bool {
        self.levels.values().all(|&a| a == 0.0)
    }
}

/// `u ↦ u + φ(u)` on `ℝ/Lℤ`; canonical points lie in `[0, L)`.
#[derive(Clone, Debug, PartialEq)]
pub struct InducedCircleMap {
    level: u64,
    map: SolenoidLeafMap,
}

impl InducedCircleMap {
    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn reduce(&self, u: f64) -> f64 {
        let l = self.level as f64;
        let r = u.rem_euclid(l);
        if r >= l {
            0.0
        } else {
            r
        }
    }

    /// The image of a solenoid point under `pr_L`.
    pub fn project(&self, p: &SolenoidPoint) -> Result<f64> {
        p.project(self.level)
    }
}

impl LiftMap for InducedCircleMap {
    type Point = f64;
    type Delta = f64;

    fn displacement(&self, u: &f64) -> f64 {
        self.map.phi(*u)
    }

    fn step(&self, u: &f64) -> (f64, f64) {
        let d = self.map.phi(*u);
        (self.reduce(u + d), d)
    }

    fn step_back(&self, u: &f64) -> Result<(f64, f64)> {
        let y = *u;
        let s = invert_monotone(|s| s + self.map.phi(s), y, y - self.map.phi(y))?;
        Ok((self.reduce(s), y - s))
    }

    fn coordinates(&self, u: &f64) -> Vec<f64> {
        vec![*u]
    }

    fn distance(&self, a: &f64, b: &f64) -> f64 {
        circle_dist_mod(*a, *b, self.level as f64)
    }

    fn haar_point<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.reduce(rng.random::<f64>() * self.level as f64)
    }

    fn is_translation(&self) -> bool {
        self.map.is_translation()
    }
}
