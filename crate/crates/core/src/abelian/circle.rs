use std::f64::consts::TAU;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::rational::{self, frac, frac_q, serde_rational_opt, to_f64, Rational};
use crate::{Error, Result};

/// A point of ℝ/ℤ in canonical coordinates `[0, 1)`.
///
/// Points built from rational data keep an exact copy of the coordinate;
/// exactness survives addition with other exact points and is dropped as
/// soon as a floating-point operand appears (or a rational would overflow).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCircle")]
pub struct CirclePoint {
    value: f64,
    #[serde(
        with = "serde_rational_opt",
        skip_serializing_if = "Option::is_none",
        default
    )]
    exact: Option<Rational>,
}

#[derive(Deserialize)]
struct RawCircle {
    value: f64,
    #[serde(with = "serde_rational_opt", default)]
    exact: Option<Rational>,
}

impl TryFrom<RawCircle> for CirclePoint {
    type Error = Error;
    fn try_from(raw: RawCircle) -> Result<Self> {
        match raw.exact {
            Some(q) => Ok(CirclePoint::from_rational(q)),
            None if raw.value.is_finite() => Ok(CirclePoint::new(raw.value)),
            None => Err(Error::Invalid("non-finite circle coordinate".into())),
        }
    }
}

impl CirclePoint {
    pub fn new(x: f64) -> Self {
        CirclePoint {
            value: frac(x),
            exact: None,
        }
    }

    pub fn from_rational(q: Rational) -> Self {
        let q = frac_q(&q);
        CirclePoint {
            value: to_f64(&q),
            exact: Some(q),
        }
    }

    pub fn zero() -> Self {
        CirclePoint::from_rational(Ratio::from_integer(0))
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn exact(&self) -> Option<Rational> {
        self.exact
    }

    pub fn add(&self, other: &Self) -> Self {
        match (self.exact, other.exact) {
            (Some(a), Some(b)) => match rational::checked_add(&a, &b) {
                Some(s) => CirclePoint::from_rational(s),
                None => CirclePoint::new(self.value + other.value),
            },
            _ => CirclePoint::new(self.value + other.value),
        }
    }

    /// Translate by a real amount (drops exactness).
    pub fn shift(&self, t: f64) -> Self {
        CirclePoint::new(self.value + t)
    }

    pub fn neg(&self) -> Self {
        match self.exact {
            Some(q) => CirclePoint::from_rational(-q),
            None => CirclePoint::new(-self.value),
        }
    }

    /// `k·self`
    pub fn scale(&self, k: i64) -> Self {
        match self.exact {
            Some(q) => match rational::checked_mul(&q, &Ratio::from_integer(k)) {
                Some(p) => CirclePoint::from_rational(p),
                None => CirclePoint::new(k as f64 * self.value),
            },
            None => CirclePoint::new(k as f64 * self.value),
        }
    }

    pub fn dist(&self, other: &Self) -> f64 {
        rational::circle_dist(self.value, other.value)
    }
}

/// A point of 𝕋² = ℝ²/ℤ².
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorusPoint(pub [CirclePoint; 2]);

impl TorusPoint {
    pub fn new(x: f64, y: f64) -> Self {
        TorusPoint([CirclePoint::new(x), CirclePoint::new(y)])
    }

    pub fn from_rationals(x: Rational, y: Rational) -> Self {
        TorusPoint([CirclePoint::from_rational(x), CirclePoint::from_rational(y)])
    }

    pub fn zero() -> Self {
        TorusPoint([CirclePoint::zero(), CirclePoint::zero()])
    }

    pub fn values(&self) -> [f64; 2] {
        [self.0[0].value(), self.0[1].value()]
    }

    pub fn add(&self, other: &Self) -> Self {
        TorusPoint([self.0[0].add(&other.0[0]), self.0[1].add(&other.0[1])])
    }

    pub fn neg(&self) -> Self {
        TorusPoint([self.0[0].neg(), self.0[1].neg()])
    }

    /// Max-coordinate distance.
    pub fn dist(&self, other: &Self) -> f64 {
        self.0[0].dist(&other.0[0]).max(self.0[1].dist(&other.0[1]))
    }
}

/// A point `exp(2πi·angle)` of the unit circle in ℂ.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitComplex {
    pub angle: f64,
    #[serde(
        with = "serde_rational_opt",
        skip_serializing_if = "Option::is_none",
        default
    )]
    pub exact: Option<Rational>,
}

impl UnitComplex {
    pub fn one() -> Self {
        UnitComplex::from_rational(Ratio::from_integer(0))
    }

    pub fn from_angle(angle: f64) -> Self {
        UnitComplex {
            angle: frac(angle),
            exact: None,
        }
    }

    pub fn from_rational(angle: Rational) -> Self {
        let a = frac_q(&angle);
        UnitComplex {
            angle: to_f64(&a),
            exact: Some(a),
        }
    }

    pub(crate) fn from_circle(p: CirclePoint) -> Self {
        UnitComplex {
            angle: p.value,
            exact: p.exact,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        UnitComplex::from_circle(
            CirclePoint {
                value: self.angle,
                exact: self.exact,
            }
            .add(&CirclePoint {
                value: other.angle,
                exact: other.exact,
            }),
        )
    }

    pub fn conj(&self) -> Self {
        match self.exact {
            Some(q) => UnitComplex::from_rational(-q),
            None => UnitComplex::from_angle(-self.angle),
        }
    }

    pub fn re(&self) -> f64 {
        (TAU * self.angle).cos()
    }

    pub fn im(&self) -> f64 {
        (TAU * self.angle).sin()
    }

    /// Exactly 1; only decidable for exact angles.
    pub fn is_exactly_one(&self) -> Option<bool> {
        self.exact.map(|q| q == Ratio::from_integer(0))
    }

    /// Distance between angles on ℝ/ℤ.
    pub fn angle_dist(&self, other: &Self) -> f64 {
        rational::circle_dist(self.angle, other.angle)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_addition_wraps() {
        let a = CirclePoint::from_rational(Ratio::new(3, 4));
        let b = CirclePoint::from_rational(Ratio::new(1, 2));
        let s = a.add(&b);
        assert_eq!(s.exact(), Some(Ratio::new(1, 4)));
        assert_eq!(s.value(), 0.25);
    }

    #[test]
    fn float_operand_drops_exactness() {
        let a = CirclePoint::from_rational(Ratio::new(1, 3));
        let s = a.add(&CirclePoint::new(0.1));
        assert!(s.exact().is_none());
    }

    #[test]
    fn json_keeps_exact_copy() {
        let a = CirclePoint::from_rational(Ratio::new(2, 5));
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"value":0.4,"exact":"2/5"}"#);
        let b: CirclePoint = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
        let c: CirclePoint = serde_json::from_str(r#"{"value":1.25}"#).unwrap();
        assert_eq!(c.value(), 0.25);
    }

    #[test]
    fn unit_complex_identity() {
        let u = UnitComplex::from_rational(Ratio::new(5, 8));
        assert_eq!(u.mul(&u.conj()).is_exactly_one(), Some(true));
        assert!((UnitComplex::from_angle(0.25).im() - 1.0).abs() < 1e-15);
    }
}
