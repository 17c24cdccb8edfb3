use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CirclePoint, GroupKind, GroupPoint, ProfiniteInt, SolenoidPoint, TorusPoint};
use crate::Result;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One Haar-distributed point: uniform coordinates on ℝ/ℤ and 𝕋², a uniform
/// residue mod `K!` on Ẑ, and uniform leaf × uniform fiber on 𝕊.
pub fn haar_sample<R: Rng + ?Sized>(kind: &GroupKind, rng: &mut R) -> Result<GroupPoint> {
    Ok(match *kind {
        GroupKind::Circle => GroupPoint::Circle(CirclePoint::new(rng.random::<f64>())),
        GroupKind::Torus => {
            let x = rng.random::<f64>();
            let y = rng.random::<f64>();
            GroupPoint::Torus(TorusPoint::new(x, y))
        }
        GroupKind::Profinite { depth } => {
            let m = ProfiniteInt::zero(depth)?.modulus();
            GroupPoint::Profinite(ProfiniteInt::new(depth, rng.random_range(0..m))?)
        }
        GroupKind::Solenoid { depth } => {
            let m = ProfiniteInt::zero(depth)?.modulus();
            let t = rng.random::<f64>();
            let x = ProfiniteInt::new(depth, rng.random_range(0..m))?;
            GroupPoint::Solenoid(SolenoidPoint::from_lift(t, x))
        }
    })
}

/// `count` Haar samples from a fresh generator seeded with `seed`.
pub fn haar_samples(kind: &GroupKind, seed: u64, count: usize) -> Result<Vec<GroupPoint>> {
    let mut rng = seeded_rng(seed);
    (0..count).map(|_| haar_sample(kind, &mut rng)).collect()
}
