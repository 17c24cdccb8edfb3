//! Topological entropy by counting `(n, ε)`-separated sets.
//!
//! A start grid `(i + θ)/M` (a product grid on the torus) is shuffled with a
//! seeded generator and scanned greedily: a point joins the set when its
//! Bowen distance `max_{k<n} d(f^k x, f^k y)` to every member exceeds `ε`.
//! The entropy estimate for each `ε` is the slope of `log s(n, ε)` against
//! `n` over the longest tail of the schedule that is linear to within 5%.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::abelian::seeded_rng;
use crate::conjugation::least_squares_slope;
use crate::maps::{CircleLiftMap, MapModel, TorusLiftMap};
use crate::rational::{circle_dist, frac};
use crate::rotation::rotation_number_circle;
use crate::{CirclePoint, Error, Result};

/// Largest number of start points.
pub const MAX_POINTS: usize = 10_000_000;
/// A fitted point may be off by this much in `log s` (about 5% in `s`).
pub const LINEARITY_TOL: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyParams {
    /// Start points per coordinate; forced odd.
    pub grid: usize,
    pub eps: Vec<f64>,
    /// Orbit lengths, strictly increasing.
    pub n_values: Vec<usize>,
    pub seed: u64,
}

impl EntropyParams {
    /// `ε = 1/64`, `n = 4, 8, …, 64`; for the doubling map `n = 1, …, 6`.
    pub fn default_for(model: &MapModel) -> Self {
        let (grid, n_values) = match model {
            MapModel::Doubling => (16_385, (1..=6).collect()),
            MapModel::Torus(_) => (257, (1..=16).map(|k| 4 * k).collect()),
            _ => (16_385, (1..=16).map(|k| 4 * k).collect()),
        };
        EntropyParams {
            grid,
            eps: vec![1.0 / 64.0],
            n_values,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsEstimate {
    pub eps: f64,
    pub slope: f64,
    /// `[n_first, n_last]` of the fitted tail.
    pub fit_range: [usize; 2],
    pub estimate: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub model: String,
    pub params: EntropyParams,
    pub theta: f64,
    pub points: usize,
    /// Largest separated set allowed (`points / 8`).
    pub cap: usize,
    /// Greedy counts, `raw_counts[i][j]` for `eps[i]`, `n_values[j]`.
    pub raw_counts: Vec<Vec<usize>>,
    /// Counts made non-decreasing in `n` and non-increasing in `ε`.
    pub counts: Vec<Vec<usize>>,
    pub per_eps: Vec<EpsEstimate>,
    /// The estimate at the smallest `ε`.
    pub estimate: f64,
    /// `max − min` of the per-`ε` estimates.
    pub spread: f64,
    /// False when the cap was hit; counts past that point are missing.
    pub complete: bool,
}

enum Model<'a> {
    Circle(&'a CircleLiftMap),
    Doubling,
    Torus(&'a TorusLiftMap),
}

impl Model<'_> {
    fn dim(&self) -> usize {
        match self {
            Model::Torus(_) => 2,
            _ => 1,
        }
    }

    fn step(&self, x: [f64; 2]) -> [f64; 2] {
        match self {
            Model::Circle(f) => [f.step_f64(x[0]).0, 0.0],
            Model::Doubling => [frac(2.0 * x[0]), 0.0],
            Model::Torus(f) => {
                let d = f.disp(x);
                [frac(x[0] + d[0]), frac(x[1] + d[1])]
            }
        }
    }
}

fn validate(params: &EntropyParams) -> Result<()> {
    if params.grid < 3 {
        return Err(Error::Invalid("the start grid needs at least 3 points".into()));
    }
    if params.eps.is_empty() || params.eps.iter().any(|&e| !(e > 0.0 && e < 0.5)) {
        return Err(Error::Invalid("every ε must lie in (0, 1/2)".into()));
    }
    if params.n_values.is_empty()
        || params.n_values[0] == 0
        || params.n_values.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(Error::Invalid(
            "orbit lengths must be positive and strictly increasing".into(),
        ));
    }
    Ok(())
}

pub fn estimate_entropy(model: &MapModel, params: &EntropyParams) -> Result<EntropyReport> {
    validate(params)?;
    let m = match model {
        MapModel::Circle(f) => Model::Circle(f),
        MapModel::Doubling => Model::Doubling,
        MapModel::Torus(f) => Model::Torus(f),
        MapModel::Solenoid(_) => {
            return Err(Error::Invalid(
                "entropy estimation covers circle, torus and doubling maps".into(),
            ))
        }
    };
    let dim = m.dim();
    let side = params.grid | 1;
    let points = side.checked_pow(dim as u32).unwrap_or(usize::MAX);
    if points > MAX_POINTS {
        return Err(Error::Invalid(format!(
            "{points} start points exceed the budget of {MAX_POINTS}"
        )));
    }
    let mut rng = seeded_rng(params.seed);
    let theta: f64 = rng.random();
    let mut starts: Vec<[f64; 2]> = (0..points)
        .map(|i| {
            let c = |j: usize| (j as f64 + theta) / side as f64;
            if dim == 1 {
                [c(i), 0.0]
            } else {
                [c(i / side), c(i % side)]
            }
        })
        .collect();
    starts.shuffle(&mut rng);

    let n_max = *params.n_values.last().unwrap();
    let orbits: Vec<Vec<[f64; 2]>> = starts
        .par_iter()
        .map(|&x| {
            let mut o = Vec::with_capacity(n_max);
            let mut y = x;
            for _ in 0..n_max {
                o.push(y);
                y = m.step(y);
            }
            o
        })
        .collect();

    let cap = points / 8;
    let jobs: Vec<(usize, usize)> = (0..params.eps.len())
        .flat_map(|i| (0..params.n_values.len()).map(move |j| (i, j)))
        .collect();
    let found: Vec<Option<usize>> = jobs
        .par_iter()
        .map(|&(i, j)| separated_count(&orbits, dim, params.n_values[j], params.eps[i], cap))
        .collect();

    let ne = params.eps.len();
    let nn = params.n_values.len();
    let mut raw_counts = vec![vec![0; nn]; ne];
    let mut complete = true;
    // counts beyond the first overflow (in n) are dropped for that ε
    let mut valid_len = vec![nn; ne];
    for (&(i, j), c) in jobs.iter().zip(&found) {
        match c {
            Some(c) => raw_counts[i][j] = *c,
            None => {
                complete = false;
                valid_len[i] = valid_len[i].min(j);
            }
        }
    }

    let mut order: Vec<usize> = (0..ne).collect();
    order.sort_by(|&a, &b| params.eps[b].total_cmp(&params.eps[a]));
    let mut counts = raw_counts.clone();
    for row in counts.iter_mut() {
        for j in 1..nn {
            row[j] = row[j].max(row[j - 1]);
        }
    }
    // from the largest ε down, counts can only grow
    for w in 1..order.len() {
        let (coarse, fine) = (order[w - 1], order[w]);
        for j in 0..nn {
            counts[fine][j] = counts[fine][j].max(counts[coarse][j]);
        }
    }

    let per_eps: Vec<EpsEstimate> = (0..ne)
        .map(|i| {
            let len = valid_len[i];
            let pts: Vec<(f64, f64)> = (0..len)
                .map(|j| (params.n_values[j] as f64, (counts[i][j].max(1) as f64).ln()))
                .collect();
            let (slope, first) = tail_fit(&pts);
            EpsEstimate {
                eps: params.eps[i],
                slope,
                fit_range: if len == 0 {
                    [0, 0]
                } else {
                    [params.n_values[first], params.n_values[len - 1]]
                },
                estimate: slope.max(0.0),
            }
        })
        .collect();
    let finest = order[ne - 1];
    let estimate = per_eps[finest].estimate;
    let spread = per_eps.iter().map(|e| e.estimate).fold(f64::NEG_INFINITY, f64::max)
        - per_eps.iter().map(|e| e.estimate).fold(f64::INFINITY, f64::min);

    let report = EntropyReport {
        model: model.name().to_string(),
        params: params.clone(),
        theta,
        points,
        cap,
        raw_counts,
        counts,
        per_eps,
        estimate,
        spread,
        complete,
    };
    if complete {
        Ok(report)
    } else {
        Err(Error::BudgetExceeded(Box::new(report)))
    }
}

/// Slope over the longest tail whose least-squares residuals stay within
/// [`LINEARITY_TOL`]; returns the slope and the index of the first point used.
fn tail_fit(pts: &[(f64, f64)]) -> (f64, usize) {
    match pts.len() {
        0 | 1 => return (0.0, 0),
        _ => {}
    }
    let mut first = pts.len() - 2;
    let mut slope = least_squares_slope(&pts[first..]).unwrap_or(0.0);
    while first > 0 {
        let cand = &pts[first - 1..];
        let Some(s) = least_squares_slope(cand) else {
            break;
        };
        let k = cand.len() as f64;
        let mx = cand.iter().map(|p| p.0).sum::<f64>() / k;
        let my = cand.iter().map(|p| p.1).sum::<f64>() / k;
        let worst = cand
            .iter()
            .map(|p| (p.1 - (my + s * (p.0 - mx))).abs())
            .fold(0.0, f64::max);
        if worst > LINEARITY_TOL {
            break;
        }
        first -= 1;
        slope = s;
    }
    (slope, first)
}

fn cell(x: f64, cells: i64) -> i64 {
    ((x * cells as f64) as i64).min(cells - 1)
}

/// Greedy `(n, ε)`-separated subset of the orbits; `None` once it exceeds `cap`.
fn separated_count(
    orbits: &[Vec<[f64; 2]>],
    dim: usize,
    n: usize,
    eps: f64,
    cap: usize,
) -> Option<usize> {
    // cells at least ε wide, so ε-close points sit in neighbouring cells
    let cells = ((1.0 / eps).floor() as i64).max(1);
    let mut offsets: Vec<i64> = vec![-1, 0, 1];
    offsets.iter_mut().for_each(|o| *o = o.rem_euclid(cells));
    offsets.sort_unstable();
    offsets.dedup();
    let key = |o: &[[f64; 2]]| -> [i64; 4] {
        let (a, b) = (o[0], o[n - 1]);
        [
            cell(a[0], cells),
            if dim == 2 { cell(a[1], cells) } else { 0 },
            cell(b[0], cells),
            if dim == 2 { cell(b[1], cells) } else { 0 },
        ]
    };
    let coord_offsets: Vec<[i64; 4]> = {
        let per: Vec<Vec<i64>> = (0..4)
            .map(|c| {
                if dim == 1 && (c == 1 || c == 3) {
                    vec![0]
                } else {
                    offsets.clone()
                }
            })
            .collect();
        let mut out = Vec::new();
        for &a in &per[0] {
            for &b in &per[1] {
                for &c in &per[2] {
                    for &d in &per[3] {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
        out
    };
    let bowen_close = |x: &[[f64; 2]], y: &[[f64; 2]]| {
        (0..n).all(|k| {
            circle_dist(x[k][0], y[k][0]) <= eps
                && (dim == 1 || circle_dist(x[k][1], y[k][1]) <= eps)
        })
    };
    let mut buckets: HashMap<[i64; 4], Vec<usize>> = HashMap::new();
    let mut count = 0usize;
    for (idx, o) in orbits.iter().enumerate() {
        let k = key(o);
        let blocked = coord_offsets.iter().any(|off| {
            let nk = [
                (k[0] + off[0]).rem_euclid(cells),
                (k[1] + off[1]).rem_euclid(cells),
                (k[2] + off[2]).rem_euclid(cells),
                (k[3] + off[3]).rem_euclid(cells),
            ];
            buckets
                .get(&nk)
                .is_some_and(|members| members.iter().any(|&j| bowen_close(o, &orbits[j])))
        });
        if !blocked {
            buckets.entry(k).or_default().push(idx);
            count += 1;
            if count > cap {
                return None;
            }
        }
    }
    Some(count)
}

/// One cell of [`entropy_vs_rotation_scan`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub c: f64,
    pub a: f64,
    pub rotation: f64,
    pub entropy: f64,
}

/// Rotation number and entropy estimate over an Arnold `(c, a)` grid.
pub fn entropy_vs_rotation_scan(
    cs: &[f64],
    amps: &[f64],
    rotation_iterations: usize,
    params: &EntropyParams,
) -> Result<Vec<ScanRow>> {
    let cells: Vec<(f64, f64)> = cs
        .iter()
        .flat_map(|&c| amps.iter().map(move |&a| (c, a)))
        .collect();
    cells
        .par_iter()
        .map(|&(c, a)| {
            let f = CircleLiftMap::arnold(c, a)?;
            let rotation = rotation_number_circle(&f, &CirclePoint::zero(), rotation_iterations)?
                .estimate
                .scalar()
                .unwrap_or(f64::NAN);
            let entropy = estimate_entropy(&MapModel::Circle(f), params)?.estimate;
            Ok(ScanRow {
                c,
                a,
                rotation,
                entropy,
            })
        })
        .collect()
}
