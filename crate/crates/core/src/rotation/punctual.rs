use serde::{Deserialize, Serialize};

use super::{average_displacement, Estimate};
use crate::maps::{Delta, LiftMap};
use crate::{Error, Result};

/// Accumulation data of `(F^n(z̃) − z̃)/n` along a window schedule.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PunctualReport {
    pub schedule: Vec<usize>,
    /// The raw estimate at each window.
    pub estimates: Vec<Estimate>,
    /// Componentwise `[min, max]` of the estimates from window `j` on; the
    /// entry for the second half of the schedule is reported as `interval`.
    pub tail_boxes: Vec<Vec<[f64; 2]>>,
    /// Largest side of each tail box; non-increasing by construction.
    pub tail_widths: Vec<f64>,
    pub interval: Vec<[f64; 2]>,
}

/// `n/32 · 2^j` for `j = 0..=5`, dropping zeros.
pub fn default_schedule(n: usize) -> Vec<usize> {
    let mut s: Vec<usize> = (0..=5).map(|j| n / 32 * (1 << j)).filter(|&k| k > 0).collect();
    if s.last() != Some(&n) && n > 0 {
        s.push(n);
    }
    s.dedup();
    s
}

/// Tail hulls of the rotation estimates along one orbit.
pub fn punctual_rotation_set<L: LiftMap>(
    map: &L,
    start: &L::Point,
    schedule: &[usize],
) -> Result<PunctualReport> {
    if schedule.is_empty() || schedule[0] == 0 || schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Invalid(
            "the window schedule must be positive and strictly increasing".into(),
        ));
    }
    let n = *schedule.last().unwrap();
    let avg = average_displacement(map, start, n, schedule);
    let estimates: Vec<Estimate> = avg
        .windows
        .iter()
        .map(|(_, d)| Estimate::from_components(&d.components()))
        .collect();
    let dim = estimates[0].components().len();
    let mut tail_boxes = vec![Vec::new(); estimates.len()];
    let mut current = vec![[f64::INFINITY, f64::NEG_INFINITY]; dim];
    for j in (0..estimates.len()).rev() {
        for (i, c) in estimates[j].components().into_iter().enumerate() {
            current[i] = [current[i][0].min(c), current[i][1].max(c)];
        }
        tail_boxes[j] = current.clone();
    }
    let tail_widths = tail_boxes
        .iter()
        .map(|b| b.iter().map(|[lo, hi]| hi - lo).fold(0.0, f64::max))
        .collect();
    let interval = tail_boxes[estimates.len() / 2].clone();
    Ok(PunctualReport {
        schedule: schedule.to_vec(),
        estimates,
        tail_boxes,
        tail_widths,
        interval,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::CirclePoint;
    use crate::maps::CircleLiftMap;

    #[test]
    fn rigid_rotation_has_zero_width() {
        let f = CircleLiftMap::rigid(0.3);
        let r = punctual_rotation_set(&f, &CirclePoint::new(0.1), &default_schedule(3200)).unwrap();
        assert_eq!(r.interval, vec![[0.3, 0.3]]);
        assert!(r.tail_widths.iter().all(|&w| w == 0.0));
    }

    #[test]
    fn schedule_shape() {
        assert_eq!(default_schedule(3200), vec![100, 200, 400, 800, 1600, 3200]);
        assert_eq!(default_schedule(10), vec![10]);
        let f = CircleLiftMap::rigid(0.3);
        assert!(punctual_rotation_set(&f, &CirclePoint::new(0.1), &[10, 5]).is_err());
    }

    #[test]
    fn widths_do_not_increase() {
        let f = CircleLiftMap::arnold(0.3, 0.1).unwrap();
        let r = punctual_rotation_set(&f, &CirclePoint::new(0.1), &default_schedule(64_000)).unwrap();
        assert!(r.tail_widths.windows(2).all(|w| w[1] <= w[0] + 1e-6));
    }
}
