use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::{DiagnosticReport, Verdict, Witness};
use crate::abelian::{Character, GroupPoint};
use crate::expr::{self, ParsedExpr};
use crate::maps::{GroupMap, Translation};
use crate::rational::{serde_rational_opt, Rational};
use crate::rotation::{window_schedule, TAIL_WINDOWS};
use crate::{Error, Result};

/// Attached to every single-orbit average.
pub const TYPICALITY_NOTE: &str =
    "single-orbit average; whether the start point is typical for the measure is not verified";

/// A bounded function on a group.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Observable {
    Constant { value: f64 },
    Character { character: Character },
    /// An expression in `x` and `y`. On the circle `x` is the coordinate; on
    /// the torus `(x, y)` are the coordinates; on Ẑ `x = residue / K!`; on the
    /// solenoid `x` is the leaf coordinate and `y = (fiber residue) / K!`.
    Function { expr: String },
    /// Indicator of `{x ≡ residue mod modulus}` on Ẑ or on the solenoid fiber.
    ResidueIndicator { modulus: u64, residue: u64 },
    /// Indicator of `[lo, hi)` on the circle or on the solenoid leaf coordinate.
    Interval { lo: f64, hi: f64 },
}

enum Compiled<'a> {
    Constant(f64),
    Character(&'a Character),
    Function(ParsedExpr),
    Residue(u64, u64),
    Interval(f64, f64),
}

pub(crate) enum Sample {
    Hit(bool),
    Complex(f64, f64),
}

impl Sample {
    pub(crate) fn complex(&self) -> (f64, f64) {
        match *self {
            Sample::Hit(b) => (if b { 1.0 } else { 0.0 }, 0.0),
            Sample::Complex(re, im) => (re, im),
        }
    }
}

pub(crate) struct Evaluator<'a>(Compiled<'a>);

impl Observable {
    pub(crate) fn compile(&self) -> Result<Evaluator<'_>> {
        Ok(Evaluator(match self {
            Observable::Constant { value } => Compiled::Constant(*value),
            Observable::Character { character } => Compiled::Character(character),
            Observable::Function { expr } => Compiled::Function(expr::parse(expr)?),
            Observable::ResidueIndicator { modulus, residue } => {
                if *modulus == 0 {
                    return Err(Error::Invalid("residue modulus must be positive".into()));
                }
                Compiled::Residue(*modulus, residue % modulus)
            }
            Observable::Interval { lo, hi } => {
                if !(lo.is_finite() && hi.is_finite() && lo <= hi && hi - lo <= 1.0) {
                    return Err(Error::Invalid(format!("bad interval [{lo}, {hi})")));
                }
                Compiled::Interval(*lo, *hi)
            }
        }))
    }

    /// Whether averages of this observable are hit counts.
    pub fn is_indicator(&self) -> bool {
        matches!(
            self,
            Observable::ResidueIndicator { .. } | Observable::Interval { .. }
        )
    }
}

fn fiber_fraction(x: &crate::abelian::ProfiniteInt) -> f64 {
    x.residue() as f64 / x.modulus() as f64
}

impl Evaluator<'_> {
    pub(crate) fn eval(&self, g: &GroupPoint) -> Result<Sample> {
        Ok(match &self.0 {
            Compiled::Constant(v) => Sample::Complex(*v, 0.0),
            Compiled::Character(chi) => {
                let v = chi.eval(g)?;
                Sample::Complex(v.re(), v.im())
            }
            Compiled::Function(e) => {
                let (x, y) = match g {
                    GroupPoint::Circle(z) => (z.value(), 0.0),
                    GroupPoint::Torus(z) => (z.0[0].value(), z.0[1].value()),
                    GroupPoint::Profinite(x) => (fiber_fraction(x), 0.0),
                    GroupPoint::Solenoid(p) => (p.leaf(), fiber_fraction(&p.fiber())),
                };
                Sample::Complex(e.eval2(x, y), 0.0)
            }
            Compiled::Residue(m, r) => {
                let x = match g {
                    GroupPoint::Profinite(x) => *x,
                    GroupPoint::Solenoid(p) => p.fiber(),
                    _ => {
                        return Err(Error::GroupMismatch(format!(
                            "a residue indicator needs a profinite or solenoid point, got {}",
                            g.kind().name()
                        )))
                    }
                };
                Sample::Hit(x.project(*m)? == *r)
            }
            Compiled::Interval(lo, hi) => {
                let t = match g {
                    GroupPoint::Circle(z) => z.value(),
                    GroupPoint::Solenoid(p) => p.leaf(),
                    _ => {
                        return Err(Error::GroupMismatch(format!(
                            "an interval indicator needs a circle or solenoid point, got {}",
                            g.kind().name()
                        )))
                    }
                };
                let u = (t - lo).rem_euclid(1.0);
                Sample::Hit(u < hi - lo)
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BirkhoffWindow {
    pub n: usize,
    pub re: f64,
    pub im: f64,
}

/// `(1/n) Σ_{k<n} obs(T^k z)` with partial averages.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BirkhoffReport {
    pub observable: Observable,
    pub iterations: usize,
    pub re: f64,
    pub im: f64,
    pub abs: f64,
    /// `hits / n` for indicator observables.
    #[serde(
        with = "serde_rational_opt",
        skip_serializing_if = "Option::is_none",
        default
    )]
    pub exact: Option<Rational>,
    pub windows: Vec<BirkhoffWindow>,
    /// Largest modulus difference among the last windows.
    pub oscillation: f64,
    pub notes: Vec<String>,
}

pub fn birkhoff_average<M: GroupMap + ?Sized>(
    map: &M,
    observable: &Observable,
    start: &GroupPoint,
    n: usize,
) -> Result<BirkhoffReport> {
    if n == 0 {
        return Err(Error::Invalid("need at least one iterate".into()));
    }
    let eval = observable.compile()?;
    let schedule = window_schedule(n);
    let mut windows = Vec::with_capacity(schedule.len());
    let mut next = schedule.iter().peekable();
    let (mut sre, mut sim) = (0.0, 0.0);
    let mut hits: u64 = 0;
    let mut g = start.clone();
    for k in 1..=n {
        match eval.eval(&g)? {
            Sample::Hit(true) => hits += 1,
            Sample::Hit(false) => {}
            Sample::Complex(re, im) => {
                sre += re;
                sim += im;
            }
        }
        if next.peek() == Some(&&k) {
            next.next();
            let (re, im) = if observable.is_indicator() {
                (hits as f64 / k as f64, 0.0)
            } else {
                (sre / k as f64, sim / k as f64)
            };
            windows.push(BirkhoffWindow { n: k, re, im });
        }
        if k < n {
            g = map.apply(&g)?;
        }
    }
    let (re, im) = if observable.is_indicator() {
        (hits as f64 / n as f64, 0.0)
    } else {
        (sre / n as f64, sim / n as f64)
    };
    let tail = &windows[windows.len().saturating_sub(TAIL_WINDOWS)..];
    let mut oscillation: f64 = 0.0;
    for a in tail {
        for b in tail {
            oscillation = oscillation.max((a.re - b.re).hypot(a.im - b.im));
        }
    }
    Ok(BirkhoffReport {
        observable: observable.clone(),
        iterations: n,
        re,
        im,
        abs: re.hypot(im),
        exact: observable
            .is_indicator()
            .then(|| Ratio::new(hits as i64, n as i64)),
        windows,
        oscillation,
        notes: vec![TYPICALITY_NOTE.to_string()],
    })
}

/// Cells used by [`equidistribution_report`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Partition {
    /// Residues mod `level` (Ẑ, or the solenoid fiber).
    Residues { level: u64 },
    /// `bins` equal intervals of the circle (or the solenoid leaf); `bins`
    /// must be a power of two.
    Dyadic { bins: u64 },
}

/// Occupancy of the orbit of the identity under `R_α` against Haar weights.
///
/// Positive when every cell frequency is within `3/√n` of its weight. This
/// is a statistical diagnostic, not a proof of equidistribution.
pub fn equidistribution_report(
    translation: &Translation,
    partition: Partition,
    n: usize,
) -> Result<DiagnosticReport> {
    if n == 0 {
        return Err(Error::Invalid("need at least one iterate".into()));
    }
    let kind = translation.kind();
    let cells = match partition {
        Partition::Residues { level } => {
            let x = match &translation.alpha {
                GroupPoint::Profinite(x) => *x,
                GroupPoint::Solenoid(p) => p.fiber(),
                _ => {
                    return Err(Error::Invalid(format!(
                        "residue cells need a profinite or solenoid translation, got {}",
                        kind.name()
                    )))
                }
            };
            // validates that the level divides K!
            x.project(level.max(1))?;
            level
        }
        Partition::Dyadic { bins } => {
            if !bins.is_power_of_two() {
                return Err(Error::Invalid(format!("{bins} is not a power of two")));
            }
            if !matches!(translation.alpha, GroupPoint::Circle(_) | GroupPoint::Solenoid(_)) {
                return Err(Error::Invalid(format!(
                    "dyadic cells need a circle or solenoid translation, got {}",
                    kind.name()
                )));
            }
            bins
        }
    };
    if cells == 0 {
        return Err(Error::Invalid("the partition has no cells".into()));
    }
    let mut counts = vec![0u64; cells as usize];
    let mut g = GroupPoint::identity(&kind)?;
    for k in 0..n {
        let cell = match (&g, partition) {
            (GroupPoint::Profinite(x), _) => x.project(cells)?,
            (GroupPoint::Solenoid(p), Partition::Residues { .. }) => p.fiber().project(cells)?,
            (GroupPoint::Solenoid(p), Partition::Dyadic { .. }) => {
                ((p.leaf() * cells as f64) as u64).min(cells - 1)
            }
            (GroupPoint::Circle(z), _) => ((z.value() * cells as f64) as u64).min(cells - 1),
            (GroupPoint::Torus(_), _) => unreachable!(),
        };
        counts[cell as usize] += 1;
        if k + 1 < n {
            g = translation.apply(&g)?;
        }
    }
    let weight = 1.0 / cells as f64;
    let frequencies: Vec<f64> = counts.iter().map(|&c| c as f64 / n as f64).collect();
    let (worst, max_dev) = frequencies
        .iter()
        .map(|f| (f - weight).abs())
        .enumerate()
        .fold((0, 0.0), |acc, (i, d)| if d > acc.1 { (i, d) } else { acc });
    let threshold = 3.0 / (n as f64).sqrt();
    let mut report = if max_dev < threshold {
        DiagnosticReport::new(Verdict::Positive, format!("{cells} cells, n = {n}"))
    } else {
        DiagnosticReport::new(Verdict::Negative, format!("{cells} cells, n = {n}")).witness(
            Witness::Cell {
                index: worst,
                frequency: frequencies[worst],
                weight,
            },
        )
    };
    report = report
        .stat("iterations", n)
        .stat("counts", &counts)
        .stat("frequencies", &frequencies)
        .stat("weight", weight)
        .stat("max_deviation", max_dev)
        .stat("threshold", threshold)
        .stat("empty_cells", counts.iter().filter(|&&c| c == 0).count());
    Ok(report)
}
