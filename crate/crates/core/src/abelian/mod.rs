//! Compact abelian groups in scope (ℝ/ℤ, 𝕋², Ẑ, 𝕊), their characters and
//! the duality pairing, plus Haar sampling.

mod character;
mod circle;
mod group;
mod haar;
mod profinite;
mod solenoid;

pub use character::Character;
pub use circle::{CirclePoint, TorusPoint, UnitComplex};
pub use group::{GroupKind, GroupPoint};
pub use haar::{haar_sample, haar_samples, seeded_rng};
pub use profinite::{ProfiniteInt, DEFAULT_DEPTH, MAX_DEPTH};
pub use solenoid::SolenoidPoint;
