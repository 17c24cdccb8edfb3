use std::f64::consts::TAU;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{LiftMap, Vec2, CHECK_TOL, INVERSE_MAX_ITER, INVERSE_TOL};
use crate::abelian::TorusPoint;
use crate::expr::{self, ParsedExpr};
use crate::rational::frac;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Wave {
    #[default]
    Sin,
    Cos,
}

/// `amp · wave(2π(k₁x + k₂y) + phase)` added to coordinate `coord`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrigTerm {
    pub coord: usize,
    pub amp: f64,
    pub k: [i64; 2],
    #[serde(default)]
    pub wave: Wave,
    #[serde(default)]
    pub phase: f64,
}

impl TrigTerm {
    fn eval(&self, x: [f64; 2]) -> f64 {
        let arg = TAU * (self.k[0] as f64 * x[0] + self.k[1] as f64 * x[1]) + self.phase;
        self.amp
            * match self.wave {
                Wave::Sin => arg.sin(),
                Wave::Cos => arg.cos(),
            }
    }
}

/// ℤ²-periodic part `P` of a torus lift.
#[derive(Clone, Debug, PartialEq)]
pub enum Perturbation {
    Trig(Vec<TrigTerm>),
    Parsed(Box<[ParsedExpr; 2]>),
}

/// `F(x) = x + v + P(x)` on ℝ².
///
/// Whether `F` is a homeomorphism is the caller's responsibility;
/// [`TorusLiftMap::min_jacobian`] offers a spot check.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusLiftMap {
    v: [f64; 2],
    perturbation: Perturbation,
}

impl TorusLiftMap {
    pub fn translation(v: [f64; 2]) -> Self {
        TorusLiftMap {
            v,
            perturbation: Perturbation::Trig(Vec::new()),
        }
    }

    pub fn trig(v: [f64; 2], terms: Vec<TrigTerm>) -> Result<Self> {
        if let Some(t) = terms.iter().find(|t| t.coord > 1) {
            return Err(Error::Invalid(format!("term coordinate {} is not 0 or 1", t.coord)));
        }
        Ok(TorusLiftMap {
            v,
            perturbation: Perturbation::Trig(terms),
        })
    }

    /// Two expressions in `x`, `y` for the components of `P`; checked for
    /// ℤ²-periodicity on a grid.
    pub fn parsed(v: [f64; 2], sources: [&str; 2]) -> Result<Self> {
        let p = [expr::parse(sources[0])?, expr::parse(sources[1])?];
        let map = TorusLiftMap {
            v,
            perturbation: Perturbation::Parsed(Box::new(p)),
        };
        map.validate()?;
        Ok(map)
    }

    pub fn v(&self) -> [f64; 2] {
        self.v
    }

    pub fn perturbation(&self) -> &Perturbation {
        &self.perturbation
    }

    /// Grid check of `F(x + m) = F(x) + m` for `m ∈ {(1,0), (0,1)}`.
    pub fn validate(&self) -> Result<()> {
        const G: usize = 32;
        for i in 0..=G {
            for j in 0..=G {
                let x = [i as f64 / G as f64, j as f64 / G as f64];
                let base = self.periodic(x);
                for m in [[1.0, 0.0], [0.0, 1.0]] {
                    let moved = self.periodic([x[0] + m[0], x[1] + m[1]]);
                    for c in 0..2 {
                        let defect = moved[c] - base[c];
                        if !defect.is_finite() || defect.abs() > CHECK_TOL {
                            return Err(Error::Equivariance { at: x[c], defect });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn periodic(&self, x: [f64; 2]) -> [f64; 2] {
        match &self.perturbation {
            Perturbation::Trig(terms) => {
                let mut out = [0.0; 2];
                for t in terms {
                    out[t.coord] += t.eval(x);
                }
                out
            }
            Perturbation::Parsed(p) => [p[0].eval2(x[0], x[1]), p[1].eval2(x[0], x[1])],
        }
    }

    /// `F(x) − x = v + P(x)`.
    #[inline]
    pub fn disp(&self, x: [f64; 2]) -> [f64; 2] {
        let p = self.periodic(x);
        [self.v[0] + p[0], self.v[1] + p[1]]
    }

    /// Minimum of `det DF` over a 32×32 grid (central differences). A
    /// negative value shows `F` is not a homeomorphism; a positive value is
    /// only evidence.
    pub fn min_jacobian(&self) -> f64 {
        const G: usize = 32;
        let h = 1e-6;
        let mut min = f64::INFINITY;
        for i in 0..G {
            for j in 0..G {
                let x = [i as f64 / G as f64, j as f64 / G as f64];
                let dx = |c: usize, dir: usize| {
                    let mut a = x;
                    let mut b = x;
                    a[dir] += h;
                    b[dir] -= h;
                    let id = if c == dir { 1.0 } else { 0.0 };
                    id + (self.disp(a)[c] - self.disp(b)[c]) / (2.0 * h)
                };
                let det = dx(0, 0) * dx(1, 1) - dx(0, 1) * dx(1, 0);
                min = min.min(det);
            }
        }
        min
    }

    /// The map with the two coordinates exchanged.
    pub fn swapped(&self) -> Self {
        let perturbation = match &self.perturbation {
            Perturbation::Trig(terms) => Perturbation::Trig(
                terms
                    .iter()
                    .map(|t| TrigTerm {
                        coord: 1 - t.coord,
                        k: [t.k[1], t.k[0]],
                        ..*t
                    })
                    .collect(),
            ),
            Perturbation::Parsed(p) => {
                Perturbation::Parsed(Box::new([p[1].swap_vars(), p[0].swap_vars()]))
            }
        };
        TorusLiftMap {
            v: [self.v[1], self.v[0]],
            perturbation,
        }
    }

    /// `F^{-1}(y)` by the fixed-point iteration `x ← y − v − P(x)`.
    pub fn inverse_lift(&self, y: [f64; 2]) -> Result<[f64; 2]> {
        let mut x = [y[0] - self.v[0], y[1] - self.v[1]];
        for _ in 0..INVERSE_MAX_ITER {
            let d = self.disp(x);
            let next = [y[0] - d[0], y[1] - d[1]];
            let err = (next[0] - x[0]).abs().max((next[1] - x[1]).abs());
            x = next;
            if err <= INVERSE_TOL {
                return Ok(x);
            }
        }
        Err(Error::Inverse { at: y[0] })
    }

    pub fn is_rigid(&self) -> bool {
        match &self.perturbation {
            Perturbation::Trig(t) => t.iter().all(|t| t.amp == 0.0),
            Perturbation::Parsed(_) => false,
        }
    }
}

impl LiftMap for TorusLiftMap {
    type Point = TorusPoint;
    type Delta = Vec2;

    fn displacement(&self, p: &TorusPoint) -> Vec2 {
        Vec2(self.disp(p.values()))
    }

    fn step(&self, p: &TorusPoint) -> (TorusPoint, Vec2) {
        let x = p.values();
        let d = self.disp(x);
        (TorusPoint::new(x[0] + d[0], x[1] + d[1]), Vec2(d))
    }

    fn step_back(&self, p: &TorusPoint) -> Result<(TorusPoint, Vec2)> {
        let y = p.values();
        let x = self.inverse_lift(y)?;
        Ok((
            TorusPoint::new(frac(x[0]), frac(x[1])),
            Vec2([y[0] - x[0], y[1] - x[1]]),
        ))
    }

    fn coordinates(&self, p: &TorusPoint) -> Vec<f64> {
        p.values().to_vec()
    }

    fn distance(&self, a: &TorusPoint, b: &TorusPoint) -> f64 {
        a.dist(b)
    }

    fn haar_point<R: Rng + ?Sized>(&self, rng: &mut R) -> TorusPoint {
        let x = rng.random::<f64>();
        let y = rng.random::<f64>();
        TorusPoint::new(x, y)
    }

    fn is_translation(&self) -> bool {
        self.is_rigid()
    }
}
