//! Suspension flows `Σ_f(G) = G × [0,1] / (z,1) ~ (f(z),0)`, their
//! characters, and the real 1-cocycles attached to those characters.
//!
//! The flow is `φ_t(z, s) = (f^m(z), t + s − m)` with `m = ⌊t + s⌋`. A
//! suspension character `χ_{k,n}(z, s) = χ_k(z)·exp(2πi·n·s)` satisfies
//! `χ(φ_t p) = exp(2πi·C(t, p))·χ(p)` with
//! `C(t, (z, s)) = ⟨k, F^m(z̃) − z̃⟩ + n·t`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::abelian::{seeded_rng, Character, GroupPoint, UnitComplex};
use crate::maps::{Delta, LiftMap};
use crate::{Error, Result};

/// A point `(z, s)` of the suspension with `s ∈ [0, 1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuspensionPoint<P> {
    pub base: P,
    pub time: f64,
}

impl<P> SuspensionPoint<P> {
    pub fn new(base: P, time: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&time) {
            return Err(Error::Invalid(format!("fiber time {time} is not in [0, 1)")));
        }
        Ok(SuspensionPoint { base, time })
    }
}

/// `χ_{k,n}`: a base character paired with an integer frequency along the flow.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuspensionChar {
    pub base: Character,
    pub n: i64,
}

impl SuspensionChar {
    pub fn new(base: Character, n: i64) -> Self {
        SuspensionChar { base, n }
    }

    pub fn is_trivial(&self) -> bool {
        self.n == 0 && self.base.is_trivial()
    }
}

/// `φ_t(p)` together with the lift displacement `F^m(z̃) − z̃` and `m`.
pub fn flow_with_delta<L: LiftMap>(
    map: &L,
    p: &SuspensionPoint<L::Point>,
    t: f64,
) -> Result<(SuspensionPoint<L::Point>, L::Delta, i64)> {
    let total = t + p.time;
    let mut m = total.floor();
    let mut time = total - m;
    if time >= 1.0 {
        time = 0.0;
        m += 1.0;
    }
    let m = m as i64;
    let mut z = p.base.clone();
    let mut acc = L::Delta::default();
    if m >= 0 {
        for _ in 0..m {
            let (next, d) = map.step(&z);
            acc = acc + d;
            z = next;
        }
    } else {
        for _ in 0..-m {
            let (prev, d) = map.step_back(&z)?;
            acc = acc - d;
            z = prev;
        }
    }
    Ok((SuspensionPoint { base: z, time }, acc, m))
}

/// The suspension flow `φ_t`.
pub fn flow<L: LiftMap>(
    map: &L,
    p: &SuspensionPoint<L::Point>,
    t: f64,
) -> Result<SuspensionPoint<L::Point>> {
    flow_with_delta(map, p, t).map(|(q, _, _)| q)
}

/// `C_χ(t, p) = ⟨χ_base, F^m(z̃) − z̃⟩ + n·t`.
pub fn cocycle<L: LiftMap>(
    map: &L,
    chi: &SuspensionChar,
    t: f64,
    p: &SuspensionPoint<L::Point>,
) -> Result<f64> {
    let (_, delta, _) = flow_with_delta(map, p, t)?;
    Ok(pair_base(&chi.base, &delta)? + chi.n as f64 * t)
}

fn pair_base<D: Delta>(base: &Character, delta: &D) -> Result<f64> {
    if base.is_trivial() {
        return Ok(0.0);
    }
    delta.pair(base)
}

/// `χ_{k,n}(z, s) = χ_k(z)·exp(2πi·n·s)`.
pub fn char_eval_suspension<P>(chi: &SuspensionChar, p: &SuspensionPoint<P>) -> Result<UnitComplex>
where
    P: Clone + Into<GroupPoint>,
{
    let base = chi.base.eval(&p.base.clone().into())?;
    Ok(base.mul(&UnitComplex::from_angle(chi.n as f64 * p.time)))
}

/// Base measure for sampling the suspension's product measure `μ × ds`.
#[derive(Clone, Debug, PartialEq)]
pub enum BaseMeasure<P> {
    Haar,
    /// Uniform over `z, f(z), …, f^{length−1}(z)`.
    Empirical { start: P, length: usize },
}

/// Samples of `μ × Lebesgue` on the suspension, deterministic in `seed`.
pub fn sample_product_measure<L: LiftMap>(
    map: &L,
    base: &BaseMeasure<L::Point>,
    count: usize,
    seed: u64,
) -> Result<Vec<SuspensionPoint<L::Point>>> {
    let mut rng = seeded_rng(seed);
    let orbit = match base {
        BaseMeasure::Haar => None,
        BaseMeasure::Empirical { length: 0, .. } => {
            return Err(Error::Invalid("empirical measure needs a positive length".into()))
        }
        BaseMeasure::Empirical { start, length } => {
            Some(crate::maps::iterate(map, start, length - 1).points)
        }
    };
    Ok((0..count)
        .map(|_| {
            let z = match &orbit {
                None => map.haar_point(&mut rng),
                Some(pts) => pts[rng.random_range(0..pts.len())].clone(),
            };
            SuspensionPoint {
                base: z,
                time: rng.random::<f64>(),
            }
        })
        .collect())
}

/// Maximum residuals of the flow, cocycle and character identities.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SuspensionCheck {
    pub samples: usize,
    /// `d(φ_{t+u} p, φ_u φ_t p)`
    pub flow_residual: f64,
    /// `|C(t+u, p) − C(u, φ_t p) − C(t, p)|`
    pub cocycle_residual: f64,
    /// Angle distance between `χ(φ_t p)` and `exp(2πi·C(t, p))·χ(p)`.
    pub relation_residual: f64,
}

impl SuspensionCheck {
    pub fn max_residual(&self) -> f64 {
        self.flow_residual
            .max(self.cocycle_residual)
            .max(self.relation_residual)
    }
}

/// Runs the identity suite on `samples` random triples `(t, u, p)` per
/// character, with `t, u` uniform in `[−t_max, t_max]` and `p` drawn from
/// Haar × Lebesgue.
pub fn check_suite<L>(
    map: &L,
    chars: &[SuspensionChar],
    samples: usize,
    t_max: f64,
    seed: u64,
) -> Result<SuspensionCheck>
where
    L: LiftMap,
    L::Point: Into<GroupPoint>,
{
    let mut rng = seeded_rng(seed);
    let mut out = SuspensionCheck {
        samples: samples * chars.len(),
        ..Default::default()
    };
    for chi in chars {
        for _ in 0..samples {
            let p = SuspensionPoint {
                base: map.haar_point(&mut rng),
                time: rng.random::<f64>(),
            };
            let t = rng.random_range(-t_max..=t_max);
            let u = rng.random_range(-t_max..=t_max);

            let pt = flow(map, &p, t)?;
            let direct = flow(map, &p, t + u)?;
            let composed = flow(map, &pt, u)?;
            let flow_res = map.distance(&direct.base, &composed.base)
                + (direct.time - composed.time).abs();
            out.flow_residual = out.flow_residual.max(flow_res);

            let c_tu = cocycle(map, chi, t + u, &p)?;
            let c_t = cocycle(map, chi, t, &p)?;
            let c_u = cocycle(map, chi, u, &pt)?;
            out.cocycle_residual = out.cocycle_residual.max((c_tu - c_u - c_t).abs());

            let lhs = char_eval_suspension(chi, &pt)?;
            let rhs = UnitComplex::from_angle(c_t).mul(&char_eval_suspension(chi, &p)?);
            out.relation_residual = out.relation_residual.max(lhs.angle_dist(&rhs));
        }
    }
    Ok(out)
}

/// `|Σ_{k<n} C(1, φ_k p) − C(n, p)|`, the time-1 telescoping defect.
pub fn telescoping_residual<L: LiftMap>(
    map: &L,
    chi: &SuspensionChar,
    p: &SuspensionPoint<L::Point>,
    n: usize,
) -> Result<f64> {
    let mut q = p.clone();
    let mut sum = 0.0;
    for _ in 0..n {
        let (next, delta, _) = flow_with_delta(map, &q, 1.0)?;
        sum += pair_base(&chi.base, &delta)? + chi.n as f64;
        q = next;
    }
    Ok((sum - cocycle(map, chi, n as f64, p)?).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::{CirclePoint, ProfiniteInt, SolenoidPoint};
    use crate::maps::{CircleLiftMap, SolenoidLeafMap};
    use num_rational::Ratio;
    use std::collections::BTreeMap;

    fn arnold() -> CircleLiftMap {
        CircleLiftMap::arnold(0.3, 0.1).unwrap()
    }

    #[test]
    fn time_zero_is_identity() {
        let p = SuspensionPoint::new(CirclePoint::new(0.4), 0.3).unwrap();
        assert_eq!(flow(&arnold(), &p, 0.0).unwrap(), p);
    }

    #[test]
    fn time_one_returns_to_base() {
        let f = arnold();
        let z = CirclePoint::new(0.4);
        let p = SuspensionPoint::new(z, 0.0).unwrap();
        let q = flow(&f, &p, 1.0).unwrap();
        assert_eq!(q.base, f.step(&z).0);
        assert_eq!(q.time, 0.0);
    }

    #[test]
    fn negative_time_inverts() {
        let f = arnold();
        let p = SuspensionPoint::new(CirclePoint::new(0.4), 0.3).unwrap();
        let back = flow(&f, &flow(&f, &p, 2.6).unwrap(), -2.6).unwrap();
        assert!(back.base.dist(&p.base) < 1e-11);
        assert!((back.time - p.time).abs() < 1e-12);
    }

    #[test]
    fn time_one_cocycle_value() {
        // k = 2, n = 3, f(z) − z = 0.25
        let f = CircleLiftMap::rigid(0.25);
        let chi = SuspensionChar::new(Character::Circle { k: 2 }, 3);
        let p = SuspensionPoint::new(CirclePoint::new(0.1), 0.0).unwrap();
        assert_eq!(cocycle(&f, &chi, 1.0, &p).unwrap(), 3.5);
    }

    #[test]
    fn trivial_character_gives_zero() {
        let chi = SuspensionChar::new(Character::Circle { k: 0 }, 0);
        let p = SuspensionPoint::new(CirclePoint::new(0.7), 0.5).unwrap();
        for t in [-2.5, 0.0, 0.3, 7.9] {
            assert_eq!(cocycle(&arnold(), &chi, t, &p).unwrap(), 0.0);
        }
    }

    #[test]
    fn suspension_character_values() {
        let p = SuspensionPoint::new(CirclePoint::new(0.5), 0.25).unwrap();
        let v = char_eval_suspension(&SuspensionChar::new(Character::Circle { k: 0 }, 1), &p);
        assert_eq!(v.unwrap().angle, 0.25);
        let q = SuspensionPoint::new(CirclePoint::from_rational(Ratio::new(1, 2)), 0.7).unwrap();
        let v = char_eval_suspension(&SuspensionChar::new(Character::Circle { k: 1 }, 0), &q);
        assert_eq!(v.unwrap().angle, 0.5);
    }

    #[test]
    fn identities_hold_on_circle_and_solenoid() {
        let chars = [
            SuspensionChar::new(Character::Circle { k: 1 }, 0),
            SuspensionChar::new(Character::Circle { k: -3 }, 2),
        ];
        let r = check_suite(&arnold(), &chars, 50, 3.0, 7).unwrap();
        assert!(r.max_residual() < 1e-9, "{r:?}");

        let f = SolenoidLeafMap::new(8, 0.2, BTreeMap::from([(2, 0.05)])).unwrap();
        let chars = [SuspensionChar::new(Character::solenoid(Ratio::new(1, 2)), 1)];
        let r = check_suite(&f, &chars, 50, 3.0, 8).unwrap();
        assert!(r.max_residual() < 1e-9, "{r:?}");
    }

    #[test]
    fn telescoping() {
        let chi = SuspensionChar::new(Character::Circle { k: 2 }, 1);
        let p = SuspensionPoint::new(CirclePoint::new(0.2), 0.4).unwrap();
        assert!(telescoping_residual(&arnold(), &chi, &p, 1000).unwrap() < 1e-6);
    }

    #[test]
    fn empirical_samples_lie_on_the_orbit() {
        let f = SolenoidLeafMap::rigid(4, 0.25).unwrap();
        let start = SolenoidPoint::from_fiber(ProfiniteInt::zero(4).unwrap());
        let base = BaseMeasure::Empirical { start, length: 4 };
        let s = sample_product_measure(&f, &base, 100, 1).unwrap();
        assert!(s.iter().all(|p| p.base.fiber().is_zero() && (0.0..1.0).contains(&p.time)));
        assert_eq!(s, sample_product_measure(&f, &base, 100, 1).unwrap());
    }
}
