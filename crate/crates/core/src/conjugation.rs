//! Periodic orbits, semiconjugacies to rotations and bounded mean variation.

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::maps::{CircleLiftMap, Delta, LiftMap};
use crate::rational::{self, circle_dist, frac, serde_rational, Rational};
use crate::rotation::MAX_DENOMINATOR;
use crate::{Error, Result};

/// Grid used to bracket zeros of `F^q(x) − x − p`.
pub const ORBIT_GRID: usize = 4096;
/// Bisection stops once the bracket is this narrow.
pub const BISECTION_TOL: f64 = 1e-12;
pub const MAX_PERIOD: u32 = 256;
/// Two orbit points closer than this are the same point.
const SAME_POINT: f64 = 1e-9;

/// Periodic orbits of type `(p, q)`: `F^q(x̃) = x̃ + p`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodicOrbitReport {
    pub p: i64,
    pub q: u32,
    /// `(p, q)` divided by their gcd.
    pub reduced: [i64; 2],
    /// Each orbit as `x, f(x), …, f^{q−1}(x)` in `[0, 1)`.
    pub orbits: Vec<Vec<f64>>,
    /// `max |F^q(x̃) − x̃ − p|` over the returned orbit points.
    pub residual: f64,
    pub tolerance: f64,
}

/// `F^q(x) − x − p`.
fn g(map: &CircleLiftMap, x: f64, p: i64, q: u32) -> f64 {
    let mut y = x;
    for _ in 0..q {
        y = map.lift(y);
    }
    y - x - p as f64
}

fn bisect(map: &CircleLiftMap, mut lo: f64, mut hi: f64, p: i64, q: u32) -> f64 {
    let mut glo = g(map, lo, p, q);
    for _ in 0..200 {
        if hi - lo < BISECTION_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let gm = g(map, mid, p, q);
        if gm == 0.0 {
            return mid;
        }
        if (gm < 0.0) == (glo < 0.0) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Locates the `(p, q)`-periodic orbits visible on a 4096-point grid.
///
/// Grid points with `|g| ≤ tol` count as roots; every sign change of `g`
/// between neighbours is refined by bisection. Fails with
/// [`Error::NotFound`] when no root turns up.
pub fn find_periodic_orbit(
    map: &CircleLiftMap,
    p: i64,
    q: u32,
    tol: f64,
) -> Result<PeriodicOrbitReport> {
    if q == 0 || q > MAX_PERIOD {
        return Err(Error::Invalid(format!("the period must be in 1..={MAX_PERIOD}")));
    }
    let xs: Vec<f64> = (0..=ORBIT_GRID).map(|i| i as f64 / ORBIT_GRID as f64).collect();
    let gs: Vec<f64> = xs.par_iter().map(|&x| g(map, x, p, q)).collect();
    let min_residual = gs.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));

    let mut roots = Vec::new();
    for i in 0..ORBIT_GRID {
        if gs[i].abs() <= tol {
            roots.push(xs[i]);
        } else if gs[i + 1].abs() > tol && (gs[i] < 0.0) != (gs[i + 1] < 0.0) {
            roots.push(bisect(map, xs[i], xs[i + 1], p, q));
        }
    }

    let mut covered: Vec<f64> = Vec::new();
    let mut orbits = Vec::new();
    let mut residual: f64 = 0.0;
    for x in roots {
        if covered.iter().any(|&c| circle_dist(c, x) < SAME_POINT) {
            continue;
        }
        let r = g(map, x, p, q).abs();
        if r > tol.max(BISECTION_TOL * 1e3) {
            // a sign change across a jump of g, not a zero
            continue;
        }
        residual = residual.max(r);
        let mut orbit = Vec::with_capacity(q as usize);
        let mut y = x;
        for _ in 0..q {
            orbit.push(frac(y));
            y = map.lift(y);
        }
        covered.extend(&orbit);
        orbits.push(orbit);
    }
    if orbits.is_empty() {
        return Err(Error::NotFound { p, q, min_residual });
    }
    let d = p.gcd(&(q as i64)).max(1);
    Ok(PeriodicOrbitReport {
        p,
        q,
        reduced: [p / d, q as i64 / d],
        orbits,
        residual,
        tolerance: tol,
    })
}

/// The empirical distribution function `h` of an orbit, tabulated on a grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SemiconjugacyTable {
    pub rho: f64,
    pub iterations: usize,
    pub grid_size: usize,
    /// Distinct points of the orbit.
    pub atoms: usize,
    /// `(x, h(x))` for `x = j/m`, `j = 0..m`.
    pub table: Vec<[f64; 2]>,
    pub monotone: bool,
    /// Grid cells on which `h` is constant.
    pub plateaus: usize,
    /// `max_x dist(h(f(x)), h(x) + ρ)` on ℝ/ℤ over the grid.
    pub defect: f64,
    pub defect_at: f64,
}

impl SemiconjugacyTable {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("x,h\n");
        for [x, h] in &self.table {
            s.push_str(&format!("{x},{h}\n"));
        }
        s
    }
}

/// `h(x) = #{k < n : f^k(x₀) ∈ [0, x)} / n` with `h(0) = 0` and `h(x+1) = h(x) + 1`.
///
/// The defect `D` measures how far `h` is from conjugating `f` to `R_ρ`; it is
/// reported, not asserted.
pub fn build_semiconjugacy(
    map: &CircleLiftMap,
    rho: f64,
    start: f64,
    n: usize,
    m: usize,
) -> Result<SemiconjugacyTable> {
    if n == 0 || m == 0 {
        return Err(Error::Invalid("orbit length and grid size must be positive".into()));
    }
    let mut orbit = Vec::with_capacity(n);
    let mut x = frac(start);
    for _ in 0..n {
        orbit.push(x);
        x = map.step_f64(x).0;
    }
    orbit.sort_by(f64::total_cmp);
    let atoms = 1 + orbit.windows(2).filter(|w| w[1] - w[0] > BISECTION_TOL).count();
    if let Some(q) = rational::detect_rational(rho, MAX_DENOMINATOR, (2.0 / n as f64).min(1e-3)) {
        let period = *q.denom();
        if (atoms as i64) < period {
            return Err(Error::DegenerateMeasure { atoms, q: period });
        }
    }
    let h = |y: f64| orbit.partition_point(|&o| o < frac(y)) as f64 / n as f64;
    let table: Vec<[f64; 2]> = (0..m)
        .map(|j| {
            let x = j as f64 / m as f64;
            [x, h(x)]
        })
        .collect();
    let monotone = table.windows(2).all(|w| w[1][1] >= w[0][1]);
    let plateaus = table.windows(2).filter(|w| w[1][1] == w[0][1]).count();
    let (defect_at, defect) = table
        .iter()
        .map(|&[x, hx]| (x, circle_dist(h(map.step_f64(x).0), hx + rho)))
        .fold((0.0, 0.0), |acc, v| if v.1 > acc.1 { v } else { acc });
    Ok(SemiconjugacyTable {
        rho,
        iterations: n,
        grid_size: m,
        atoms,
        table,
        monotone,
        plateaus,
        defect,
        defect_at,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BmvVerdict {
    #[serde(rename = "bounded-at-N")]
    BoundedAtN,
    #[serde(rename = "growing")]
    Growing,
}

/// Relative change of `C_N` over `C_{N/2}` still counted as stable.
pub const STABLE_RATIO: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub n: usize,
    pub c: f64,
}

/// Best rational approximation of one component of `τ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Approximation {
    #[serde(with = "serde_rational")]
    pub rational: Rational,
    pub distance: f64,
}

/// `C_N = max_{n ≤ N} ‖F^n(x̃) − x̃ − nτ‖` over a sample of starts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BmvReport {
    pub tau: Vec<f64>,
    pub iterations: usize,
    pub starts: usize,
    /// `C_N` at `N/2^j`, increasing in `N`.
    pub profile: Vec<ProfilePoint>,
    pub bound: f64,
    pub verdict: BmvVerdict,
    /// Least-squares slope of `log C_N` against `log N` over the positive entries.
    pub slope: Option<f64>,
    /// How close each component of `τ` is to a rational with denominator ≤ 64.
    pub tau_approximations: Vec<Approximation>,
}

/// `N, N/2, N/4, …` down to 1, at most 20 entries, increasing.
pub fn bmv_checkpoints(n: usize) -> Vec<usize> {
    let mut c: Vec<usize> = (0..20).map(|j| n >> j).filter(|&k| k > 0).collect();
    c.reverse();
    c.dedup();
    c
}

pub fn bmv_detector<L: LiftMap>(
    map: &L,
    tau: L::Delta,
    n: usize,
    starts: &[L::Point],
) -> Result<BmvReport> {
    if n == 0 || starts.is_empty() {
        return Err(Error::Invalid("need iterations and at least one start point".into()));
    }
    let checkpoints = bmv_checkpoints(n);
    let per_start: Vec<Vec<f64>> = starts
        .par_iter()
        .map(|s| {
            let mut z = s.clone();
            let mut dev = L::Delta::default();
            let mut max: f64 = 0.0;
            let mut out = Vec::with_capacity(checkpoints.len());
            let mut next = checkpoints.iter().peekable();
            for k in 1..=n {
                let (q, d) = map.step(&z);
                dev = dev + (d - tau);
                max = max.max(dev.norm());
                z = q;
                if next.peek() == Some(&&k) {
                    next.next();
                    out.push(max);
                }
            }
            out
        })
        .collect();
    let profile: Vec<ProfilePoint> = checkpoints
        .iter()
        .enumerate()
        .map(|(i, &n)| ProfilePoint {
            n,
            c: per_start.iter().map(|v| v[i]).fold(0.0, f64::max),
        })
        .collect();
    let bound = profile.last().map_or(0.0, |p| p.c);
    let half = if profile.len() >= 2 {
        profile[profile.len() - 2].c
    } else {
        bound
    };
    let verdict = if bound <= half * (1.0 + STABLE_RATIO) {
        BmvVerdict::BoundedAtN
    } else {
        BmvVerdict::Growing
    };
    let pts: Vec<(f64, f64)> = profile
        .iter()
        .filter(|p| p.c > 0.0)
        .map(|p| ((p.n as f64).ln(), p.c.ln()))
        .collect();
    let slope = least_squares_slope(&pts);
    let tau_c = tau.components();
    Ok(BmvReport {
        tau_approximations: tau_c
            .iter()
            .map(|&t| {
                let r = rational::best_approximation(t, MAX_DENOMINATOR);
                Approximation {
                    rational: r,
                    distance: (t - rational::to_f64(&r)).abs(),
                }
            })
            .collect(),
        tau: tau_c,
        iterations: n,
        starts: starts.len(),
        profile,
        bound,
        verdict,
        slope,
    })
}

pub(crate) fn least_squares_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::{CirclePoint, SolenoidPoint, TorusPoint};
    use crate::maps::{SolenoidLeafMap, TorusLiftMap, Vec2};
    use num_rational::Ratio;

    #[test]
    fn rigid_third_is_periodic_everywhere() {
        let f = CircleLiftMap::rigid_exact(Ratio::new(1, 3));
        let r = find_periodic_orbit(&f, 1, 3, 1e-10).unwrap();
        assert!(r.residual < 1e-15);
        assert!(r.orbits.len() > 1000);
        assert!(r.orbits.iter().all(|o| o.len() == 3));
    }

    #[test]
    fn locked_arnold_half_orbit() {
        let f = CircleLiftMap::arnold(0.5, 0.15).unwrap();
        let r = find_periodic_orbit(&f, 1, 2, 1e-10).unwrap();
        assert!(r.residual < 1e-10);
        assert_eq!(r.reduced, [1, 2]);
        // an attracting and a repelling orbit
        assert_eq!(r.orbits.len(), 2);
    }

    #[test]
    fn irrational_arnold_has_no_third_orbit() {
        let f = CircleLiftMap::arnold(0.3, 0.1).unwrap();
        match find_periodic_orbit(&f, 1, 3, 1e-10) {
            Err(Error::NotFound { min_residual, .. }) => assert!(min_residual > 0.01),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rigid_semiconjugacy_is_identity() {
        let alpha = (5f64.sqrt() - 1.0) / 2.0;
        let f = CircleLiftMap::rigid(alpha);
        let m = 512;
        let t = build_semiconjugacy(&f, alpha, 0.0, 200_000, m).unwrap();
        assert!(t.defect < 2.0 / m as f64);
        assert!(t.table.iter().all(|[x, h]| (x - h).abs() < 2.0 / m as f64));
        assert!(t.monotone);
        assert_eq!(t.table[0], [0.0, 0.0]);
    }

    #[test]
    fn arnold_semiconjugacy_defect() {
        let f = CircleLiftMap::arnold(0.3, 0.1).unwrap();
        let t = build_semiconjugacy(&f, 0.28852216, 0.0, 1_000_000, 1024).unwrap();
        assert!(t.defect < 5e-3, "{}", t.defect);
        assert!(t.monotone);
    }

    #[test]
    fn locked_semiconjugacy_has_plateaus() {
        let f = CircleLiftMap::arnold(0.5, 0.15).unwrap();
        let t = build_semiconjugacy(&f, 0.5, 0.1, 10_000, 256).unwrap();
        assert!(t.monotone);
        assert!(t.plateaus > 100);
    }

    #[test]
    fn too_few_atoms() {
        let f = CircleLiftMap::rigid_exact(Ratio::new(1, 5));
        assert!(matches!(
            build_semiconjugacy(&f, 0.2, 0.0, 3, 16),
            Err(Error::DegenerateMeasure { atoms: 3, q: 5 })
        ));
    }

    #[test]
    fn rigid_maps_have_zero_deviation() {
        let f = CircleLiftMap::rigid(0.3);
        let r = bmv_detector(&f, 0.3, 4096, &[CirclePoint::new(0.1)]).unwrap();
        assert_eq!(r.bound, 0.0);
        assert_eq!(r.verdict, BmvVerdict::BoundedAtN);

        let t = TorusLiftMap::translation([0.3, 0.5]);
        let r = bmv_detector(&t, Vec2([0.3, 0.5]), 4096, &[TorusPoint::new(0.2, 0.7)]).unwrap();
        assert_eq!(r.bound, 0.0);

        let s = SolenoidLeafMap::rigid(8, 0.2).unwrap();
        let r = bmv_detector(&s, 0.2, 4096, &[SolenoidPoint::identity(8).unwrap()]).unwrap();
        assert_eq!(r.bound, 0.0);
    }

    #[test]
    fn profile_is_non_decreasing() {
        let f = CircleLiftMap::arnold(0.3, 0.1).unwrap();
        let starts: Vec<CirclePoint> = (0..4).map(|i| CirclePoint::new(i as f64 / 4.0)).collect();
        let r = bmv_detector(&f, 0.28852216, 100_000, &starts).unwrap();
        assert!(r.profile.windows(2).all(|w| w[1].c >= w[0].c));
        assert_eq!(r.verdict, BmvVerdict::BoundedAtN);
        // circle homeomorphisms satisfy |F^n(x) − x − nρ| < 1
        assert!(r.bound < 1.0);
    }
}
