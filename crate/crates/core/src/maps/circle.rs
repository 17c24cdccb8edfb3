use std::f64::consts::TAU;

use rand::Rng;

use super::{invert_monotone, LiftMap, CHECK_GRID, CHECK_TOL};
use crate::abelian::CirclePoint;
use crate::expr::{self, ParsedExpr};
use crate::rational::{self, frac, Rational};
use crate::{Error, Result};

/// An orientation-preserving circle homeomorphism given by a degree-one lift.
#[derive(Clone, Debug, PartialEq)]
pub enum CircleLiftMap {
    /// `F(x) = x + α`, optionally with α known exactly.
    Rigid { alpha: f64, exact: Option<Rational> },
    /// `F(x) = x + c + a·sin(2πx)`, a homeomorphism iff `|2πa| < 1`.
    Arnold { c: f64, a: f64 },
    /// A lift written in the expression language.
    Parsed(ParsedExpr),
}

impl CircleLiftMap {
    pub fn rigid(alpha: f64) -> Self {
        CircleLiftMap::Rigid { alpha, exact: None }
    }

    pub fn rigid_exact(alpha: Rational) -> Self {
        CircleLiftMap::Rigid {
            alpha: rational::to_f64(&alpha),
            exact: Some(alpha),
        }
    }

    pub fn arnold(c: f64, a: f64) -> Result<Self> {
        if !(c.is_finite() && a.is_finite()) {
            return Err(Error::Invalid("non-finite Arnold parameters".into()));
        }
        if (TAU * a).abs() >= 1.0 {
            return Err(Error::Monotonicity { at: 0.5 });
        }
        Ok(CircleLiftMap::Arnold { c, a })
    }

    /// Parses and registers a lift, rejecting lifts that fail the degree-one
    /// or monotonicity grid checks.
    pub fn parsed(source: &str) -> Result<Self> {
        let e = expr::parse(source)?;
        if e.uses_y() {
            return Err(Error::Invalid(
                "a circle lift may only use the variable x".into(),
            ));
        }
        let map = CircleLiftMap::Parsed(e);
        map.validate()?;
        Ok(map)
    }

    /// Grid check of `F(x+1) = F(x) + 1` and strict monotonicity on `[0, 1]`.
    pub fn validate(&self) -> Result<()> {
        let grid = || (0..=CHECK_GRID).map(|i| i as f64 / CHECK_GRID as f64);
        let mut worst: Option<(f64, f64)> = None;
        for x in grid() {
            let defect = self.lift(x + 1.0) - self.lift(x) - 1.0;
            let bad = !defect.is_finite() || defect.abs() > CHECK_TOL;
            if bad && worst.map_or(true, |(_, d)| !(defect.abs() <= d.abs())) {
                worst = Some((x, defect));
            }
        }
        if let Some((at, defect)) = worst {
            return Err(Error::Equivariance { at, defect });
        }
        let mut prev = f64::NEG_INFINITY;
        for x in grid() {
            let fx = self.lift(x);
            if !(fx > prev) {
                return Err(Error::Monotonicity { at: x });
            }
            prev = fx;
        }
        Ok(())
    }

    /// `F(x) − x`; 1-periodic.
    #[inline]
    pub fn disp(&self, x: f64) -> f64 {
        match self {
            CircleLiftMap::Rigid { alpha, .. } => *alpha,
            CircleLiftMap::Arnold { c, a } => c + a * (TAU * x).sin(),
            CircleLiftMap::Parsed(e) => e.eval(x) - x,
        }
    }

    /// The lift `F`.
    #[inline]
    pub fn lift(&self, x: f64) -> f64 {
        match self {
            CircleLiftMap::Parsed(e) => e.eval(x),
            _ => x + self.disp(x),
        }
    }

    /// One step in canonical coordinates: `(F(x) mod 1, F(x) − x)`.
    #[inline]
    pub fn step_f64(&self, x: f64) -> (f64, f64) {
        let d = self.disp(x);
        (frac(x + d), d)
    }

    /// `F^{-1}(y)` on the real line, by monotone bisection.
    pub fn inverse_lift(&self, y: f64) -> Result<f64> {
        match self {
            CircleLiftMap::Rigid { alpha, .. } => Ok(y - alpha),
            _ => invert_monotone(|x| self.lift(x), y, y - self.disp(y)),
        }
    }

    /// The exact rotation amount for rigid rotations given by a rational.
    pub fn exact_rotation(&self) -> Option<Rational> {
        match self {
            CircleLiftMap::Rigid { exact, .. } => *exact,
            _ => None,
        }
    }

    /// The lift formula as text.
    pub fn describe(&self) -> String {
        match self {
            CircleLiftMap::Rigid {
                exact: Some(q), ..
            } => format!("x + {}", rational::format_rational(q)),
            CircleLiftMap::Rigid { alpha, .. } => format!("x + {alpha}"),
            CircleLiftMap::Arnold { c, a } => format!("x + {c} + {a}*sin(2*pi*x)"),
            CircleLiftMap::Parsed(e) => e.source().to_string(),
        }
    }
}

impl LiftMap for CircleLiftMap {
    type Point = CirclePoint;
    type Delta = f64;

    fn displacement(&self, p: &CirclePoint) -> f64 {
        self.disp(p.value())
    }

    fn step(&self, p: &CirclePoint) -> (CirclePoint, f64) {
        if let (Some(q), Some(_)) = (self.exact_rotation(), p.exact()) {
            let next = p.add(&CirclePoint::from_rational(q));
            return (next, rational::to_f64(&q));
        }
        let (x, d) = self.step_f64(p.value());
        (CirclePoint::new(x), d)
    }

    fn step_back(&self, p: &CirclePoint) -> Result<(CirclePoint, f64)> {
        if let (Some(q), Some(_)) = (self.exact_rotation(), p.exact()) {
            let prev = p.add(&CirclePoint::from_rational(-q));
            return Ok((prev, rational::to_f64(&q)));
        }
        let y = self.inverse_lift(p.value())?;
        Ok((CirclePoint::new(y), p.value() - y))
    }

    fn coordinates(&self, p: &CirclePoint) -> Vec<f64> {
        vec![p.value()]
    }

    fn distance(&self, a: &CirclePoint, b: &CirclePoint) -> f64 {
        a.dist(b)
    }

    fn haar_point<R: Rng + ?Sized>(&self, rng: &mut R) -> CirclePoint {
        CirclePoint::new(rng.random::<f64>())
    }

    fn is_translation(&self) -> bool {
        matches!(self, CircleLiftMap::Rigid { .. })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::iterate;
    use num_rational::Ratio;

    #[test]
    fn quarter_rotation_orbit() {
        let f = CircleLiftMap::rigid_exact(Ratio::new(1, 4));
        let tr = iterate(&f, &CirclePoint::zero(), 4);
        let pts: Vec<_> = tr.points[..4].iter().map(|p| p.exact().unwrap()).collect();
        assert_eq!(
            pts,
            vec![
                Ratio::new(0, 1),
                Ratio::new(1, 4),
                Ratio::new(1, 2),
                Ratio::new(3, 4)
            ]
        );
        assert_eq!(tr.points[4], CirclePoint::zero());
        assert_eq!(tr.total_displacement(), 1.0);
    }

    #[test]
    fn zero_steps() {
        let f = CircleLiftMap::arnold(0.3, 0.1).unwrap();
        let tr = iterate(&f, &CirclePoint::new(0.2), 0);
        assert_eq!(tr.points, vec![CirclePoint::new(0.2)]);
        assert_eq!(tr.total_displacement(), 0.0);
    }

    #[test]
    fn arnold_matches_manual_composition() {
        // independent oracle: compose the lift on the real line, no reduction
        let (c, a) = (0.3, 0.1);
        let mut x = 0.0f64;
        for _ in 0..10 {
            x = x + c + a * (2.0 * std::f64::consts::PI * x).sin();
        }
        let f = CircleLiftMap::arnold(c, a).unwrap();
        let tr = iterate(&f, &CirclePoint::new(0.0), 10);
        assert!((tr.total_displacement() - x).abs() < 1e-12);
    }

    #[test]
    fn displacement_values() {
        assert_eq!(CircleLiftMap::rigid(0.37).disp(0.81), 0.37);
        let f = CircleLiftMap::arnold(0.3, 0.1).unwrap();
        assert!((f.disp(0.25) - 0.4).abs() < 1e-15);
    }

    #[test]
    fn representative_independence() {
        let f = CircleLiftMap::parsed("x + 0.3 + 0.1*sin(2*pi*x)").unwrap();
        for i in 0..50 {
            let x = i as f64 / 50.0;
            for n in [-3.0, 1.0, 7.0] {
                assert!((f.disp(x) - f.disp(x + n)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn parsed_lift_validation() {
        assert!(CircleLiftMap::parsed("x + 0.3 + 0.1*sin(2*pi*x)").is_ok());
        match CircleLiftMap::parsed("x + sin(pi*x)") {
            Err(Error::Equivariance { at, defect }) => {
                assert_eq!(at, 0.5);
                assert!((defect + 2.0).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            CircleLiftMap::parsed("x + 0.3*sin(2*pi*x)"),
            Err(Error::Monotonicity { .. })
        ));
        assert!(matches!(
            CircleLiftMap::parsed("x + ("),
            Err(Error::Syntax { position: 5, .. })
        ));
        assert!(CircleLiftMap::parsed("x + y").is_err());
    }

    #[test]
    fn arnold_parameter_range() {
        assert!(CircleLiftMap::arnold(0.5, 0.15).is_ok());
        assert!(CircleLiftMap::arnold(0.5, 0.2).is_err());
    }

    #[test]
    fn backward_step_inverts_forward_step() {
        let f = CircleLiftMap::arnold(0.5, 0.15).unwrap();
        for i in 0..20 {
            let p = CirclePoint::new(i as f64 / 20.0 + 0.013);
            let (q, d) = f.step(&p);
            let (back, db) = f.step_back(&q).unwrap();
            assert!(back.dist(&p) < 1e-11);
            assert!((d - db).abs() < 1e-11);
        }
    }
}
