//! Diagnostics for translations `R_α(g) = g + α`.
//!
//! Negative verdicts are certified exactly (a character with `χ(α) = 1`, a
//! level where `α` fails to generate, an integer multiple of `α` in ℤ).
//! Positive verdicts only hold up to the depth or cap that was searched, and
//! floating-point inputs without a rational certificate are reported as
//! undecidable.

mod birkhoff;
mod fourier;
mod halmos;

use std::collections::BTreeMap;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::abelian::{Character, GroupPoint, UnitComplex};
use crate::rational::{self, serde_rational, Rational};

pub use birkhoff::{
    birkhoff_average, equidistribution_report, BirkhoffReport, BirkhoffWindow, Observable,
    Partition,
};
pub use fourier::{fourier_coefficient, FourierEstimate, Quadrature};
pub use halmos::halmos_automorphism_test;

/// Default cap on character denominators / frequencies.
pub const DEFAULT_CAP: u64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Positive,
    Negative,
    UndecidableAtDepth,
}

/// Evidence attached to a verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// A nontrivial character with `χ(α)` as given.
    Character { character: Character, value: UnitComplex },
    /// At level `n` the orbit of `α` stays in the subgroup `gcd·ℤ/nℤ`.
    Level { level: u64, gcd: u64, orbit_size: u64 },
    /// `multiple · α ∈ ℤ` (or ℤ² on the torus).
    Multiple { multiple: i64 },
    /// Best rational approximation found for a floating-point input.
    Approximation {
        #[serde(with = "serde_rational")]
        rational: Rational,
        distance: f64,
    },
    /// A finite orbit of an automorphism of the character group.
    Orbit { orbit: Vec<String> },
    /// A partition cell whose occupancy departs from its Haar weight.
    Cell { index: usize, frequency: f64, weight: f64 },
    /// The input that blocks a decision.
    Blocking { reason: String },
}

/// `{"verdict": …, "witnesses": […], "stats": {…}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticReport {
    pub verdict: Verdict,
    /// What the verdict is relative to, e.g. "depth 8" or "cap 64".
    pub scope: String,
    pub witnesses: Vec<Witness>,
    pub stats: BTreeMap<String, Value>,
}

impl DiagnosticReport {
    fn new(verdict: Verdict, scope: impl Into<String>) -> Self {
        DiagnosticReport {
            verdict,
            scope: scope.into(),
            witnesses: Vec::new(),
            stats: BTreeMap::new(),
        }
    }

    fn stat(mut self, key: &str, value: impl Serialize) -> Self {
        self.stats.insert(
            key.to_string(),
            serde_json::to_value(value).unwrap_or(Value::Null),
        );
        self
    }

    fn witness(mut self, w: Witness) -> Self {
        self.witnesses.push(w);
        self
    }
}

fn floating_blocker(alpha: f64, cap: u64) -> DiagnosticReport {
    let q = rational::best_approximation(alpha, cap as i64);
    DiagnosticReport::new(Verdict::UndecidableAtDepth, format!("cap {cap}"))
        .witness(Witness::Blocking {
            reason: "floating-point angle without a rational certificate".into(),
        })
        .witness(Witness::Approximation {
            rational: q,
            distance: (alpha - rational::to_f64(&q)).abs(),
        })
}

/// Whether `α` generates a dense subgroup.
///
/// * Ẑ at depth `K`: positive iff `gcd(α mod n, n) = 1` for every `n ≤ K`.
/// * circle: negative with `q·α ∈ ℤ` for exact rational `α`, otherwise undecidable.
/// * torus: negative with a character found by search when the coordinates
///   are exact, otherwise undecidable.
/// * solenoid: the character search of [`character_ergodicity_test`].
pub fn monothetic_test(alpha: &GroupPoint, cap: u64) -> DiagnosticReport {
    match alpha {
        GroupPoint::Profinite(x) => {
            let k = x.depth() as u64;
            for n in 2..=k {
                let r = x.project(n).expect("n ≤ K divides K!");
                let g = r.gcd(&n);
                if g != 1 {
                    return DiagnosticReport::new(Verdict::Negative, format!("depth {k}"))
                        .witness(Witness::Level {
                            level: n,
                            gcd: g,
                            orbit_size: n / g,
                        })
                        .stat("residue", x.residue());
                }
            }
            DiagnosticReport::new(Verdict::Positive, format!("depth {k}"))
                .stat("residue", x.residue())
                .stat("levels_checked", k.saturating_sub(1))
        }
        GroupPoint::Circle(z) => match z.exact() {
            Some(q) => DiagnosticReport::new(Verdict::Negative, "exact")
                .witness(Witness::Multiple {
                    multiple: *q.denom(),
                })
                .stat("alpha", rational::format_rational(&q)),
            None => floating_blocker(z.value(), cap).stat("alpha", z.value()),
        },
        GroupPoint::Torus(_) | GroupPoint::Solenoid(_) => {
            let mut r = character_ergodicity_test(alpha, cap);
            if r.verdict == Verdict::Negative {
                if let GroupPoint::Torus(z) = alpha {
                    if let (Some(a), Some(b)) = (z.0[0].exact(), z.0[1].exact()) {
                        r.witnesses.push(Witness::Multiple {
                            multiple: a.denom().lcm(b.denom()),
                        });
                    }
                }
            }
            r
        }
    }
}

/// Enumerates nontrivial characters, by increasing denominator (or
/// frequency) and then numerator, and looks for `χ(α) = 1`. Exact
/// coordinates also contribute their own denominator character, whatever
/// the cap.
///
/// A character whose value cannot be decided exactly (floating-point
/// coordinates) makes a positive verdict impossible; the report is then
/// undecidable unless some other character certifies a negative.
pub fn character_ergodicity_test(alpha: &GroupPoint, cap: u64) -> DiagnosticReport {
    let scope = format!("cap {cap}");
    let mut checked = 0u64;
    let mut undecided = 0u64;
    let mut closest = f64::INFINITY;
    let mut candidates = enumerate_characters(alpha, cap);
    candidates.extend(exact_witness(alpha).filter(|w| !candidates.contains(w)));
    for chi in candidates {
        let Some(v) = exact_eval(&chi, alpha) else {
            continue;
        };
        checked += 1;
        closest = closest.min(v.angle.min(1.0 - v.angle));
        match v.is_exactly_one() {
            Some(true) => {
                return DiagnosticReport::new(Verdict::Negative, scope)
                    .witness(Witness::Character {
                        character: chi,
                        value: v,
                    })
                    .stat("characters_checked", checked)
            }
            Some(false) => {}
            None => undecided += 1,
        }
    }
    if undecided > 0 {
        let value = match alpha {
            GroupPoint::Circle(z) => z.value(),
            GroupPoint::Torus(z) => z.0.iter().find(|c| c.exact().is_none()).map_or(0.0, |c| c.value()),
            GroupPoint::Solenoid(p) => p.leaf(),
            GroupPoint::Profinite(_) => 0.0,
        };
        return floating_blocker(value, cap)
            .stat("characters_checked", checked)
            .stat("undecided", undecided)
            .stat("closest_angle", closest);
    }
    DiagnosticReport::new(Verdict::Positive, scope)
        .stat("characters_checked", checked)
        .stat("closest_angle", closest)
}

/// `χ(α)`, exact whenever the coordinates the character sees are exact.
fn exact_eval(chi: &Character, alpha: &GroupPoint) -> Option<UnitComplex> {
    if let (Character::Torus { k }, GroupPoint::Torus(z)) = (chi, alpha) {
        let mut angle = Ratio::from_integer(0);
        for i in 0..2 {
            if k[i] == 0 {
                continue;
            }
            let term = z.0[i]
                .exact()
                .and_then(|q| rational::checked_mul(&q, &Ratio::from_integer(k[i])))
                .and_then(|t| rational::checked_add(&angle, &t));
            match term {
                Some(a) => angle = a,
                None => return chi.eval(alpha).ok(),
            }
        }
        return Some(UnitComplex::from_rational(angle));
    }
    chi.eval(alpha).ok()
}

/// A character that is exactly 1 at `alpha` whenever the exact coordinates
/// already decide non-ergodicity, so denominators above the cap are not missed.
fn exact_witness(alpha: &GroupPoint) -> Option<Character> {
    match alpha {
        GroupPoint::Circle(z) => z.exact().map(|q| Character::Circle { k: *q.denom() }),
        GroupPoint::Torus(z) => match (z.0[0].exact(), z.0[1].exact()) {
            (Some(q), _) => Some(Character::Torus { k: [*q.denom(), 0] }),
            (None, Some(q)) => Some(Character::Torus { k: [0, *q.denom()] }),
            _ => None,
        },
        GroupPoint::Solenoid(p) => p
            .leaf_exact()
            .map(|q| Character::solenoid(Ratio::from_integer(*q.denom()))),
        GroupPoint::Profinite(x) => {
            let g = x.residue().gcd(&x.modulus());
            (g > 1).then(|| Character::profinite(Ratio::new(1, g as i64)))
        }
    }
}

/// Nontrivial characters of the group of `alpha` up to `cap`, one of each
/// conjugate pair `χ, χ̄` (they share the kernel).
fn enumerate_characters(alpha: &GroupPoint, cap: u64) -> Vec<Character> {
    let cap_i = cap as i64;
    match alpha {
        GroupPoint::Circle(_) => (1..=cap_i).map(|k| Character::Circle { k }).collect(),
        GroupPoint::Torus(_) => {
            let mut out = Vec::new();
            for r in 1..=cap_i {
                for k1 in 0..=r {
                    for k2 in -r..=r {
                        let on_shell = k1.max(k2.abs()) == r;
                        let positive = k1 > 0 || k2 > 0;
                        if on_shell && positive {
                            out.push(Character::Torus { k: [k1, k2] });
                        }
                    }
                }
            }
            out
        }
        GroupPoint::Profinite(x) => {
            let m = x.modulus();
            let mut out = Vec::new();
            for b in (2..=cap.min(m)).filter(|b| m % b == 0) {
                for a in (1..b).filter(|a| a.gcd(&b) == 1) {
                    out.push(Character::profinite(Ratio::new(a as i64, b as i64)));
                }
            }
            out
        }
        GroupPoint::Solenoid(p) => {
            let m = p.fiber().modulus();
            let mut out = Vec::new();
            for b in (1..=cap).filter(|b| m % b == 0) {
                for a in (1..=cap).filter(|a| a.gcd(&b) == 1) {
                    out.push(Character::solenoid(Ratio::new(a as i64, b as i64)));
                }
            }
            out
        }
    }
}
