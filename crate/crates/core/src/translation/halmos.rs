use num_integer::Integer;
use num_rational::Ratio;

use super::{DiagnosticReport, Verdict, Witness};
use crate::rational::{self, format_rational, Rational};
use crate::{Error, Result};

/// Most finite orbits listed as witnesses.
const MAX_WITNESSES: usize = 4;

/// Finite orbits of `q ↦ m·q` on `ℚ ∖ {0}`, the dual of multiplication by
/// `m` on the solenoid.
///
/// Characters `a/b` with `1 ≤ b ≤ cap`, `0 < |a| ≤ cap` are followed for at
/// most `cap` steps (or until the arithmetic overflows). No finite orbit
/// means the automorphism is ergodic, up to the cap.
pub fn halmos_automorphism_test(m: Rational, cap: u64) -> Result<DiagnosticReport> {
    if rational::is_zero(&m) {
        return Err(Error::Invalid("the multiplier must be nonzero".into()));
    }
    if cap == 0 {
        return Err(Error::Invalid("the cap must be positive".into()));
    }
    let cap_i = cap as i64;
    let mut searched = 0u64;
    let mut finite = 0u64;
    let mut witnesses = Vec::new();
    for b in 1..=cap_i {
        for a in (-cap_i..=cap_i).filter(|a| *a != 0 && a.gcd(&b) == 1) {
            searched += 1;
            let q = Ratio::new(a, b);
            if let Some(orbit) = finite_orbit(q, m, cap as usize) {
                finite += 1;
                if witnesses.len() < MAX_WITNESSES {
                    witnesses.push(Witness::Orbit {
                        orbit: orbit.iter().map(format_rational).collect(),
                    });
                }
            }
        }
    }
    let scope = format!("cap {cap}");
    let mut report = if finite == 0 {
        DiagnosticReport::new(Verdict::Positive, scope)
    } else {
        DiagnosticReport::new(Verdict::Negative, scope)
    };
    report.witnesses = witnesses;
    Ok(report
        .stat("multiplier", format_rational(&m))
        .stat("characters_searched", searched)
        .stat("finite_orbits", finite))
}

fn finite_orbit(q: Rational, m: Rational, steps: usize) -> Option<Vec<Rational>> {
    let mut orbit = vec![q];
    let mut x = q;
    for _ in 0..steps {
        x = rational::checked_mul(&x, &m)?;
        if x == q {
            return Some(orbit);
        }
        orbit.push(x);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doubling_is_ergodic() {
        let r = halmos_automorphism_test(Ratio::from_integer(2), 16).unwrap();
        assert_eq!(r.verdict, Verdict::Positive);
        assert!(r.witnesses.is_empty());
        assert_eq!(
            halmos_automorphism_test(Ratio::new(3, 2), 16).unwrap().verdict,
            Verdict::Positive
        );
    }

    #[test]
    fn identity_and_flip_have_finite_orbits() {
        let r = halmos_automorphism_test(Ratio::from_integer(1), 8).unwrap();
        assert_eq!(r.verdict, Verdict::Negative);
        assert_eq!(
            r.witnesses[0],
            Witness::Orbit {
                orbit: vec!["-8/1".into()]
            }
        );
        let r = halmos_automorphism_test(Ratio::from_integer(-1), 8).unwrap();
        assert_eq!(r.verdict, Verdict::Negative);
        assert!(matches!(&r.witnesses[0], Witness::Orbit { orbit } if orbit.len() == 2));
    }

    #[test]
    fn zero_multiplier() {
        assert!(halmos_automorphism_test(Ratio::from_integer(0), 8).is_err());
    }
}
