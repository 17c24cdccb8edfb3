use super::{
    average_displacement, require_iterations, window_schedule, Estimate, RotationReport,
};
use crate::abelian::seeded_rng;
use crate::maps::{Delta, LiftMap};
use crate::{Error, Result};

/// Label of reports integrating against an invariant measure.
pub const ROTATION_ELEMENT: &str = "rotation element";
/// Label of reports whose measure is not known to be invariant.
pub const FORMAL_INTEGRAL: &str = "formal integral";

/// Tolerance on the total mass of an atom list.
pub const WEIGHT_TOL: f64 = 1e-12;
/// Two atoms closer than this are matched when checking invariance.
pub const ATOM_MATCH_TOL: f64 = 1e-9;

/// A probability measure on the group of a map.
#[derive(Clone, Debug, PartialEq)]
pub enum Measure<P> {
    /// The empirical measure of the orbit segment `z, …, f^{n−1}(z)`.
    Empirical { start: P, n: usize },
    /// Haar measure, integrated by Monte Carlo.
    Haar { samples: usize, seed: u64 },
    /// A finite list of `(point, weight)` atoms.
    Atoms(Vec<(P, f64)>),
}

/// `∫ (f(z) − z) dμ`.
///
/// Only the empirical measure is invariant by construction; Haar measure is
/// invariant for translations and an atom list when `f` permutes its atoms
/// preserving weights. Other cases are labelled as a formal integral.
pub fn rotation_element_measure<L: LiftMap>(
    map: &L,
    measure: &Measure<L::Point>,
) -> Result<RotationReport> {
    match measure {
        Measure::Empirical { start, n } => {
            require_iterations(*n)?;
            let avg = average_displacement(map, start, *n, &window_schedule(*n));
            let mut r = RotationReport::from_average(avg, *n);
            r.label = Some(ROTATION_ELEMENT.into());
            Ok(r)
        }
        Measure::Haar { samples, seed } => {
            require_iterations(*samples)?;
            let mut rng = seeded_rng(*seed);
            let mut mean = L::Delta::default();
            let mut m2 = 0.0;
            for k in 1..=*samples {
                let d = map.displacement(&map.haar_point(&mut rng));
                let before = mean;
                mean = mean + (d - mean).scale(1.0 / k as f64);
                m2 += (d - before).norm() * (d - mean).norm();
            }
            let var = if *samples > 1 { m2 / (*samples - 1) as f64 } else { 0.0 };
            let mut r = bare_report(mean, *samples);
            r.standard_error = Some((var / *samples as f64).sqrt());
            r.label = Some(
                if map.is_translation() {
                    ROTATION_ELEMENT
                } else {
                    FORMAL_INTEGRAL
                }
                .into(),
            );
            Ok(r)
        }
        Measure::Atoms(atoms) => {
            let sum: f64 = atoms.iter().map(|(_, w)| w).sum();
            if atoms.is_empty() || (sum - 1.0).abs() > WEIGHT_TOL || atoms.iter().any(|(_, w)| *w < 0.0)
            {
                return Err(Error::Weight { sum });
            }
            let mut total = L::Delta::default();
            let mut pushed = vec![0.0; atoms.len()];
            let mut invariant = true;
            for (z, w) in atoms {
                let (image, d) = map.step(z);
                total = total + d.scale(*w);
                match atoms
                    .iter()
                    .position(|(a, _)| map.distance(a, &image) < ATOM_MATCH_TOL)
                {
                    Some(j) => pushed[j] += w,
                    None => invariant = false,
                }
            }
            invariant &= atoms
                .iter()
                .zip(&pushed)
                .all(|((_, w), p)| (w - p).abs() <= WEIGHT_TOL);
            let mut r = bare_report(total, atoms.len());
            r.label = Some(if invariant { ROTATION_ELEMENT } else { FORMAL_INTEGRAL }.into());
            Ok(r)
        }
    }
}

fn bare_report(mean: impl Delta, n: usize) -> RotationReport {
    RotationReport {
        estimate: Estimate::from_components(&mean.components()),
        exact: None,
        iterations: n,
        windows: Vec::new(),
        oscillation: 0.0,
        error_bound: None,
        rational_detection: None,
        detection: None,
        label: None,
        standard_error: None,
        solenoid: None,
        warnings: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::CirclePoint;
    use crate::maps::CircleLiftMap;

    #[test]
    fn dirac_at_fixed_point() {
        // x + 0.1 sin(2πx) fixes 0
        let f = CircleLiftMap::arnold(0.0, 0.1).unwrap();
        let r = rotation_element_measure(&f, &Measure::Atoms(vec![(CirclePoint::zero(), 1.0)]))
            .unwrap();
        assert_eq!(r.estimate, Estimate::Scalar(0.0));
        assert_eq!(r.label.as_deref(), Some(ROTATION_ELEMENT));
    }

    #[test]
    fn haar_on_rigid_rotation() {
        let f = CircleLiftMap::rigid(0.3);
        let r = rotation_element_measure(&f, &Measure::Haar { samples: 1000, seed: 5 }).unwrap();
        assert_eq!(r.estimate, Estimate::Scalar(0.3));
        assert_eq!(r.standard_error, Some(0.0));
        assert_eq!(r.label.as_deref(), Some(ROTATION_ELEMENT));
    }

    #[test]
    fn haar_on_arnold_is_formal() {
        let f = CircleLiftMap::arnold(0.3, 0.1).unwrap();
        let r = rotation_element_measure(&f, &Measure::Haar { samples: 20_000, seed: 5 }).unwrap();
        let se = r.standard_error.unwrap();
        // ∫ (0.3 + 0.1 sin 2πx) dx = 0.3
        assert!((r.estimate.scalar().unwrap() - 0.3).abs() < 3.0 * se);
        assert_eq!(r.label.as_deref(), Some(FORMAL_INTEGRAL));
    }

    #[test]
    fn weights_must_sum_to_one() {
        let f = CircleLiftMap::rigid(0.3);
        let atoms = vec![(CirclePoint::new(0.1), 0.5), (CirclePoint::new(0.2), 0.4)];
        assert!(matches!(
            rotation_element_measure(&f, &Measure::Atoms(atoms)),
            Err(Error::Weight { .. })
        ));
    }

    #[test]
    fn non_invariant_atoms_are_formal() {
        let f = CircleLiftMap::rigid(0.3);
        let atoms = vec![(CirclePoint::new(0.1), 1.0)];
        let r = rotation_element_measure(&f, &Measure::Atoms(atoms)).unwrap();
        assert_eq!(r.label.as_deref(), Some(FORMAL_INTEGRAL));
    }
}
