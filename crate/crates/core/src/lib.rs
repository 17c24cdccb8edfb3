//! Rotation theory on compact abelian groups, made computable.
//!
//! The crate covers exact arithmetic on the circle, the 2-torus, the profinite
//! integers and the universal solenoid together with their character groups;
//! homeomorphism models given by lifts; suspension flows and their 1-cocycles;
//! rotation number / vector / element estimators; translation diagnostics;
//! semiconjugacy and bounded-mean-variation checks; and a separated-set
//! entropy estimator.
//!
//! Modules map one-to-one onto the subsystems:
//!
//! | module          | contents                                                   |
//! |-----------------|------------------------------------------------------------|
//! | [`abelian`]     | group points, characters, duality pairing, Haar sampling   |
//! | [`expr`]        | the lift expression language                               |
//! | [`maps`]        | circle / torus / solenoid lift maps, translations, orbits  |
//! | [`suspension`]  | suspension flow, suspension characters, cocycles           |
//! | [`rotation`]    | rotation numbers, vectors, elements and rotation sets      |
//! | [`translation`] | monothetic / ergodicity / equidistribution diagnostics     |
//! | [`conjugation`] | periodic orbits, semiconjugacies, bounded mean variation   |
//! | [`entropy`]     | (n, ε)-separated set counting                              |

pub mod abelian;
pub mod conjugation;
pub mod entropy;
mod error;
pub mod expr;
pub mod maps;
pub mod rational;
pub mod rotation;
pub mod suspension;
pub mod translation;

pub use abelian::{
    Character, CirclePoint, GroupKind, GroupPoint, ProfiniteInt, SolenoidPoint, TorusPoint,
    UnitComplex,
};
pub use error::{Error, Result};
pub use maps::{
    CircleLiftMap, Delta, LiftMap, MapModel, MapSpec, SolenoidLeafMap, TorusLiftMap, Translation,
    Vec2,
};
pub use rational::Rational;
