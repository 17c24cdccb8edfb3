use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::hull::{convex_hull, Hull};
use super::{average_displacement, require_iterations, window_schedule, TAIL_WINDOWS};
use crate::abelian::TorusPoint;
use crate::maps::{Delta, LiftMap, TorusLiftMap};
use crate::{Error, Result};

/// Diameter below which a rotation set is flagged as a single point.
pub const DEGENERATE_DIAMETER: f64 = 1e-6;

/// Approximate rotation set from a sweep of start points.
///
/// The displacement averages are taken at `n` and at `n/10`; the report says
/// whether the fine set lies in the coarse one inflated by `inflation`, the
/// largest spread of any orbit's partial averages between the two.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotationSetReport {
    pub grid: usize,
    pub iterations: usize,
    pub coarse_iterations: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub hull: Option<Hull>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub coarse_hull: Option<Hull>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub interval: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub coarse_interval: Option<[f64; 2]>,
    pub diameter: f64,
    pub degenerate: bool,
    /// Largest tail oscillation over the orbits.
    pub oscillation: f64,
    pub inflation: f64,
    pub nested: bool,
    /// Sampled orbit averages only reach into the rotation set.
    pub inner_approximation: bool,
    pub outer_approximation: bool,
}

struct OrbitSummary {
    coarse: Vec<f64>,
    fine: Vec<f64>,
    spread: f64,
    oscillation: f64,
}

fn summarize<L: LiftMap>(map: &L, start: &L::Point, n: usize) -> OrbitSummary {
    let schedule = window_schedule(n);
    let avg = average_displacement(map, start, n, &schedule);
    let comps: Vec<Vec<f64>> = avg.windows.iter().map(|(_, d)| d.components()).collect();
    let dim = comps[0].len();
    let spread_of = |rows: &[Vec<f64>]| {
        (0..dim)
            .map(|i| {
                let (lo, hi) = rows.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
                    (lo.min(r[i]), hi.max(r[i]))
                });
                hi - lo
            })
            .fold(0.0, f64::max)
    };
    OrbitSummary {
        coarse: comps[0].clone(),
        fine: avg.mean.components(),
        spread: spread_of(&comps),
        oscillation: spread_of(&comps[comps.len().saturating_sub(TAIL_WINDOWS)..]),
    }
}

/// Rotation set of a torus map from the `k × k` grid of starts `(i/k, j/k)`.
pub fn rotation_set_torus(map: &TorusLiftMap, k: usize, n: usize) -> Result<RotationSetReport> {
    if k < 2 {
        return Err(Error::Invalid("the start grid needs k ≥ 2".into()));
    }
    require_iterations(n)?;
    let summaries: Vec<OrbitSummary> = (0..k * k)
        .into_par_iter()
        .map(|idx| {
            let start = TorusPoint::new((idx / k) as f64 / k as f64, (idx % k) as f64 / k as f64);
            summarize(map, &start, n)
        })
        .collect();
    let fine: Vec<[f64; 2]> = summaries.iter().map(|s| [s.fine[0], s.fine[1]]).collect();
    let coarse: Vec<[f64; 2]> = summaries.iter().map(|s| [s.coarse[0], s.coarse[1]]).collect();
    let hull = convex_hull(&fine);
    let coarse_hull = convex_hull(&coarse);
    let inflation = std::f64::consts::SQRT_2 * summaries.iter().map(|s| s.spread).fold(0.0, f64::max);
    let diameter = hull.diameter();
    Ok(RotationSetReport {
        grid: k,
        iterations: n,
        coarse_iterations: window_schedule(n)[0],
        nested: hull.within(&coarse_hull, inflation),
        hull: Some(hull),
        coarse_hull: Some(coarse_hull),
        interval: None,
        coarse_interval: None,
        diameter,
        degenerate: diameter < DEGENERATE_DIAMETER,
        oscillation: summaries.iter().map(|s| s.oscillation).fold(0.0, f64::max),
        inflation,
        inner_approximation: true,
        outer_approximation: false,
    })
}

/// Rotation interval `[lo, hi]` of a scalar map from a list of start points.
pub fn rotation_interval<L>(map: &L, starts: &[L::Point], n: usize) -> Result<RotationSetReport>
where
    L: LiftMap<Delta = f64>,
{
    if starts.is_empty() {
        return Err(Error::Invalid("no start points".into()));
    }
    require_iterations(n)?;
    let summaries: Vec<OrbitSummary> = starts.par_iter().map(|s| summarize(map, s, n)).collect();
    let range = |f: &dyn Fn(&OrbitSummary) -> f64| {
        summaries
            .iter()
            .map(f)
            .fold([f64::INFINITY, f64::NEG_INFINITY], |[lo, hi], v| [lo.min(v), hi.max(v)])
    };
    let interval = range(&|s| s.fine[0]);
    let coarse = range(&|s| s.coarse[0]);
    let inflation = summaries.iter().map(|s| s.spread).fold(0.0, f64::max);
    let diameter = interval[1] - interval[0];
    Ok(RotationSetReport {
        grid: starts.len(),
        iterations: n,
        coarse_iterations: window_schedule(n)[0],
        hull: None,
        coarse_hull: None,
        interval: Some(interval),
        coarse_interval: Some(coarse),
        diameter,
        degenerate: diameter < DEGENERATE_DIAMETER,
        oscillation: summaries.iter().map(|s| s.oscillation).fold(0.0, f64::max),
        inflation,
        nested: interval[0] >= coarse[0] - inflation && interval[1] <= coarse[1] + inflation,
        inner_approximation: true,
        outer_approximation: false,
    })
}
