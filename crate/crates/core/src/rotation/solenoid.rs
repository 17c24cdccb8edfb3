use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::{require_iterations, scalar_rotation, RotationReport};
use crate::abelian::{Character, SolenoidPoint};
use crate::maps::{LiftMap, SolenoidLeafMap};
use crate::rational::{self, circle_dist_mod, frac, serde_rational};
use crate::suspension::{self, SuspensionChar, SuspensionPoint};
use crate::{Error, Rational, Result};

/// Rotation number of the map induced on `ℝ/bℤ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelRotation {
    pub level: u64,
    /// The circle `ℝ/Lℤ` actually iterated (`L = lcm(b, levels of the map)`).
    pub induced_level: u64,
    /// Unreduced average displacement of the induced map.
    pub estimate: f64,
    /// `estimate mod b`.
    pub residue: f64,
    pub oscillation: f64,
    pub error_bound: f64,
    /// Distance in `ℝ/bℤ` between `residue` and the leaf average `r mod b`.
    pub leaf_defect: f64,
}

/// `χ_q(σ(r))` against the Birkhoff average of the time-1 cocycle of `χ_q`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharacterCheck {
    #[serde(with = "serde_rational")]
    pub q: Rational,
    pub element_angle: f64,
    pub cocycle_angle: f64,
    pub defect: f64,
}

/// Solenoid-specific part of a [`RotationReport`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolenoidRotation {
    /// Birkhoff average `r` of the leaf displacement.
    pub leaf: f64,
    /// `σ(r)`, canonicalized.
    pub element: SolenoidPoint,
    pub levels: Vec<LevelRotation>,
    /// Largest `ρ_b' mod b` versus `ρ_b` mismatch over `b | b'`.
    pub coherence_defect: f64,
    pub coherence_tolerance: f64,
    pub coherent: bool,
    pub characters: Vec<CharacterCheck>,
}

/// Rotation element of a solenoid leaf map from one orbit.
///
/// `levels` lists the `b` for which the induced circle maps are iterated;
/// an empty list means the levels of the map (or `1` if it has none).
pub fn rotation_element_solenoid(
    map: &SolenoidLeafMap,
    start: &SolenoidPoint,
    n: usize,
    levels: &[u64],
) -> Result<RotationReport> {
    require_iterations(n)?;
    let modulus = rational::factorial(map.depth());
    let mut levels: Vec<u64> = if levels.is_empty() {
        map.levels().keys().copied().collect()
    } else {
        levels.to_vec()
    };
    if levels.is_empty() {
        levels.push(1);
    }
    levels.sort_unstable();
    levels.dedup();
    if start.depth() != map.depth() {
        return Err(Error::Depth(format!(
            "start point has depth {} but the map has depth {}",
            start.depth(),
            map.depth()
        )));
    }

    let base_lcm = map.level_lcm();
    let mut report = scalar_rotation(map, start, n, base_lcm as f64)?;
    let r = report.estimate.scalar().expect("scalar estimate");

    let mut per_level = Vec::with_capacity(levels.len());
    for &b in &levels {
        if b == 0 || modulus % b != 0 {
            return Err(Error::Depth(format!(
                "level {b} does not divide {}! = {modulus}",
                map.depth()
            )));
        }
        let l = rational::lcm(b, base_lcm);
        if modulus % l != 0 {
            return Err(Error::Depth(format!(
                "level lcm({b}, {base_lcm}) = {l} does not divide {}! = {modulus}",
                map.depth()
            )));
        }
        let induced = map.induced(l)?;
        let u0 = start.project(l)?;
        let rep = scalar_rotation(&induced, &u0, n, l as f64)?;
        let estimate = rep.estimate.scalar().expect("scalar estimate");
        let residue = estimate.rem_euclid(b as f64);
        per_level.push(LevelRotation {
            level: b,
            induced_level: l,
            estimate,
            residue,
            oscillation: rep.oscillation,
            error_bound: rep.error_bound.unwrap_or(0.0),
            leaf_defect: circle_dist_mod(residue, r.rem_euclid(b as f64), b as f64),
        });
    }

    let mut defect: f64 = 0.0;
    let mut tolerance: f64 = 0.0;
    for a in &per_level {
        for c in &per_level {
            if c.level % a.level == 0 && c.level != a.level {
                let bf = a.level as f64;
                defect = defect.max(circle_dist_mod(c.residue.rem_euclid(bf), a.residue, bf));
                tolerance = tolerance.max(2.0 * a.error_bound.max(c.error_bound));
            }
        }
    }

    let element = SolenoidPoint::sigma(r, map.depth())?;
    let mut characters = Vec::with_capacity(levels.len());
    for &b in &levels {
        let q = Ratio::new(1, b as i64);
        let chi = Character::solenoid(q);
        let element_angle = chi.eval(&element.into())?.angle;
        let cocycle_angle = frac(cocycle_average(map, start, n, &chi)?);
        characters.push(CharacterCheck {
            q,
            element_angle,
            cocycle_angle,
            defect: rational::circle_dist(element_angle, cocycle_angle),
        });
    }

    report.solenoid = Some(SolenoidRotation {
        leaf: r,
        element,
        levels: per_level,
        coherence_defect: defect,
        coherence_tolerance: tolerance,
        coherent: defect <= tolerance,
        characters,
    });
    Ok(report)
}

/// `(1/n) Σ_{k<n} C_χ(1, φ_k(z, 0))`.
fn cocycle_average(
    map: &SolenoidLeafMap,
    start: &SolenoidPoint,
    n: usize,
    chi: &Character,
) -> Result<f64> {
    let schi = SuspensionChar::new(*chi, 0);
    let mut p = SuspensionPoint::new(*start, 0.0)?;
    let mut mean = 0.0;
    for k in 1..=n {
        let c = suspension::cocycle(map, &schi, 1.0, &p)?;
        mean += (c - mean) / k as f64;
        let (next, _) = map.step(&p.base);
        p = SuspensionPoint::new(next, 0.0)?;
    }
    Ok(mean)
}
