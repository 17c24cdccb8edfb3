//! Rotation numbers, vectors and elements, and rotation sets.
//!
//! All estimators average lift displacements along orbits with a running
//! mean, so a constant displacement (a rigid rotation) is reproduced exactly.

mod hull;
mod measure;
mod punctual;
mod set;
mod solenoid;

use serde::{Deserialize, Serialize};

use crate::abelian::{CirclePoint, TorusPoint};
use crate::maps::{CircleLiftMap, Delta, LiftMap, TorusLiftMap};
use crate::rational::{self, serde_rational_opt, Rational};
use crate::{Error, Result};

pub use hull::{convex_hull, Hull};
pub use measure::{rotation_element_measure, Measure, FORMAL_INTEGRAL, ROTATION_ELEMENT};
pub use punctual::{default_schedule, punctual_rotation_set, PunctualReport};
pub use set::{rotation_interval, rotation_set_torus, RotationSetReport};
pub use solenoid::{rotation_element_solenoid, CharacterCheck, LevelRotation, SolenoidRotation};

/// Denominator cap for rational detection.
pub const MAX_DENOMINATOR: i64 = 64;
/// Oscillation above which a report carries a warning.
pub const OSCILLATION_WARNING: f64 = 1e-3;
/// Number of trailing windows entering the oscillation bound.
pub const TAIL_WINDOWS: usize = 5;

/// A scalar or planar estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Estimate {
    Scalar(f64),
    Vector([f64; 2]),
}

impl Estimate {
    pub fn from_components(c: &[f64]) -> Self {
        match c {
            [x] => Estimate::Scalar(*x),
            [x, y] => Estimate::Vector([*x, *y]),
            _ => panic!("estimates have one or two components"),
        }
    }

    pub fn components(&self) -> Vec<f64> {
        match self {
            Estimate::Scalar(x) => vec![*x],
            Estimate::Vector(v) => v.to_vec(),
        }
    }

    pub fn scalar(&self) -> Option<f64> {
        match self {
            Estimate::Scalar(x) => Some(*x),
            Estimate::Vector(_) => None,
        }
    }

    pub fn vector(&self) -> Option<[f64; 2]> {
        match self {
            Estimate::Vector(v) => Some(*v),
            Estimate::Scalar(_) => None,
        }
    }
}

/// Partial average after `n` iterations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub n: usize,
    pub average: Estimate,
}

/// Supporting data for a detected rational.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Detection {
    pub distance: f64,
    pub tolerance: f64,
    pub max_denominator: i64,
}

/// Output of the rotation estimators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotationReport {
    pub estimate: Estimate,
    /// The estimate as an exact rational, when computed in rational mode.
    #[serde(
        with = "serde_rational_opt",
        skip_serializing_if = "Option::is_none",
        default
    )]
    pub exact: Option<Rational>,
    pub iterations: usize,
    pub windows: Vec<Window>,
    /// Max − min of the last windows (largest over components).
    pub oscillation: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error_bound: Option<f64>,
    #[serde(with = "serde_rational_opt", default)]
    pub rational_detection: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detection: Option<Detection>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub label: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub standard_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub solenoid: Option<SolenoidRotation>,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl RotationReport {
    /// `n,average…` rows of the partial averages.
    pub fn windows_csv(&self) -> String {
        let dim = self.estimate.components().len();
        let mut out = String::from("n");
        if dim == 1 {
            out.push_str(",average");
        } else {
            for i in 0..dim {
                out.push_str(&format!(",average{i}"));
            }
        }
        out.push('\n');
        for w in &self.windows {
            out.push_str(&w.n.to_string());
            for c in w.average.components() {
                out.push_str(&format!(",{c}"));
            }
            out.push('\n');
        }
        out
    }

    fn from_average(avg: Averaged<impl Delta>, n: usize) -> Self {
        let estimate = Estimate::from_components(&avg.mean.components());
        let windows: Vec<Window> = avg
            .windows
            .iter()
            .map(|(k, d)| Window {
                n: *k,
                average: Estimate::from_components(&d.components()),
            })
            .collect();
        let oscillation = oscillation(&windows);
        let mut report = RotationReport {
            estimate,
            exact: None,
            iterations: n,
            windows,
            oscillation,
            error_bound: None,
            rational_detection: None,
            detection: None,
            label: None,
            standard_error: None,
            solenoid: None,
            warnings: Vec::new(),
        };
        report.check_oscillation();
        report
    }

    fn check_oscillation(&mut self) {
        if self.oscillation > OSCILLATION_WARNING {
            self.warnings.push(format!(
                "oscillation {:e} of the last {TAIL_WINDOWS} windows exceeds {OSCILLATION_WARNING:e}",
                self.oscillation
            ));
        }
    }

    /// Continued-fraction detection with acceptance `|estimate − p/q| < 2/n`.
    fn detect(&mut self) {
        let Some(x) = self.estimate.scalar() else {
            return;
        };
        let tolerance = 2.0 / self.iterations as f64;
        if let Some(q) = rational::detect_rational(x, MAX_DENOMINATOR, tolerance) {
            self.rational_detection = Some(q);
            self.detection = Some(Detection {
                distance: (x - rational::to_f64(&q)).abs(),
                tolerance,
                max_denominator: MAX_DENOMINATOR,
            });
        }
    }
}

/// `n/10, 2n/10, …, n` with duplicates and zero removed.
pub fn window_schedule(n: usize) -> Vec<usize> {
    let mut w: Vec<usize> = (1..=10).map(|j| n * j / 10).filter(|&k| k > 0).collect();
    w.dedup();
    w
}

fn oscillation(windows: &[Window]) -> f64 {
    let tail = &windows[windows.len().saturating_sub(TAIL_WINDOWS)..];
    let Some(first) = tail.first() else {
        return 0.0;
    };
    let dim = first.average.components().len();
    (0..dim)
        .map(|i| {
            let vals = tail.iter().map(|w| w.average.components()[i]);
            let (lo, hi) = vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                (lo.min(v), hi.max(v))
            });
            hi - lo
        })
        .fold(0.0, f64::max)
}

pub(crate) struct Averaged<D> {
    pub mean: D,
    pub windows: Vec<(usize, D)>,
}

/// Running mean of the lift displacement over `n` steps, recorded at the
/// given checkpoints (which must be increasing).
pub(crate) fn average_displacement<L: LiftMap>(
    map: &L,
    start: &L::Point,
    n: usize,
    checkpoints: &[usize],
) -> Averaged<L::Delta> {
    let mut z = start.clone();
    let mut mean = L::Delta::default();
    let mut windows = Vec::with_capacity(checkpoints.len());
    let mut next = checkpoints.iter().peekable();
    for k in 1..=n {
        let (q, d) = map.step(&z);
        mean = mean + (d - mean).scale(1.0 / k as f64);
        z = q;
        while next.peek().is_some_and(|&&c| c == k) {
            windows.push((k, mean));
            next.next();
        }
    }
    Averaged { mean, windows }
}

fn require_iterations(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Invalid("the number of iterations must be at least 1".into()));
    }
    Ok(())
}

/// `(F^n(x̃) − x̃)/n` for a scalar lift, with error bound `scale/n + oscillation`
/// (`scale` is the period of the circle the map lives on).
pub(crate) fn scalar_rotation<L: LiftMap<Delta = f64>>(
    map: &L,
    start: &L::Point,
    n: usize,
    scale: f64,
) -> Result<RotationReport> {
    require_iterations(n)?;
    let avg = average_displacement(map, start, n, &window_schedule(n));
    let mut report = RotationReport::from_average(avg, n);
    report.error_bound = Some(scale / n as f64 + report.oscillation);
    Ok(report)
}

/// Rotation number of a circle homeomorphism from one orbit.
///
/// For rigid rotations by an exact rational and an exact start point the
/// estimate is computed in rational arithmetic.
pub fn rotation_number_circle(
    map: &CircleLiftMap,
    start: &CirclePoint,
    n: usize,
) -> Result<RotationReport> {
    require_iterations(n)?;
    if let (Some(q), Some(_)) = (map.exact_rotation(), start.exact()) {
        let x = rational::to_f64(&q);
        let windows = window_schedule(n)
            .into_iter()
            .map(|k| Window {
                n: k,
                average: Estimate::Scalar(x),
            })
            .collect();
        let within_cap = *q.denom() <= MAX_DENOMINATOR;
        return Ok(RotationReport {
            estimate: Estimate::Scalar(x),
            exact: Some(q),
            iterations: n,
            windows,
            oscillation: 0.0,
            error_bound: Some(1.0 / n as f64),
            rational_detection: within_cap.then_some(q),
            detection: within_cap.then(|| Detection {
                distance: 0.0,
                tolerance: 2.0 / n as f64,
                max_denominator: MAX_DENOMINATOR,
            }),
            label: None,
            standard_error: None,
            solenoid: None,
            warnings: Vec::new(),
        });
    }
    let mut report = scalar_rotation(map, start, n, 1.0)?;
    report.detect();
    Ok(report)
}

/// Rotation vector `(F^n(x̃) − x̃)/n` of a torus map from one orbit; no a
/// priori error bound exists, so only the oscillation is reported.
pub fn rotation_vector_torus(
    map: &TorusLiftMap,
    start: &TorusPoint,
    n: usize,
) -> Result<RotationReport> {
    require_iterations(n)?;
    let avg = average_displacement(map, start, n, &window_schedule(n));
    Ok(RotationReport::from_average(avg, n))
}
