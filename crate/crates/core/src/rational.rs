//! Rational helpers: parsing/formatting as `"a/b"`, reduction mod 1,
//! continued-fraction convergents and small integer utilities.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedMul, ToPrimitive, Zero};

use crate::{Error, Result};

pub type Rational = Ratio<i64>;

/// Fractional part in `[0, 1)`.
#[inline]
pub fn frac(x: f64) -> f64 {
    let f = x - x.floor();
    // x slightly below an integer can round up to exactly 1.0
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

/// Distance on ℝ/ℤ, in `[0, 1/2]`.
#[inline]
pub fn circle_dist(a: f64, b: f64) -> f64 {
    let d = frac(a - b);
    d.min(1.0 - d)
}

/// Distance on ℝ/pℤ.
#[inline]
pub fn circle_dist_mod(a: f64, b: f64, period: f64) -> f64 {
    let d = (a - b).rem_euclid(period);
    d.min(period - d)
}

pub fn frac_q(q: &Rational) -> Rational {
    q - q.floor()
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn checked_add(a: &Rational, b: &Rational) -> Option<Rational> {
    a.checked_add(b)
}

pub fn checked_mul(a: &Rational, b: &Rational) -> Option<Rational> {
    a.checked_mul(b)
}

/// Parses `"a/b"`, `"-a/b"` or a bare integer `"a"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Invalid(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(Error::Invalid(format!("zero denominator in {s:?}")));
            }
            Ok(Ratio::new(n, d))
        }
        None => Ok(Ratio::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Always `"a/b"`, denominator positive, reduced.
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// `#[serde(with = "serde_rational")]`
pub mod serde_rational {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(de::Error::custom)
    }
}

/// `#[serde(with = "serde_rational_opt")]`
pub mod serde_rational_opt {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.serialize_some(&format_rational(q)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        let s: Option<String> = Option::deserialize(d)?;
        s.map(|s| parse_rational(&s).map_err(de::Error::custom))
            .transpose()
    }
}

/// Continued-fraction convergents of `x` with denominator at most `max_den`.
pub fn convergents(x: f64, max_den: i64) -> Vec<Rational> {
    let mut out = Vec::new();
    if !x.is_finite() {
        return out;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_den as i128 {
            break;
        }
        out.push(Ratio::new(h2 as i64, k2 as i64));
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let rem = r - a;
        if rem.abs() < 1e-15 {
            break;
        }
        r = 1.0 / rem;
    }
    out
}

/// Best rational approximation with denominator ≤ `max_den` among the convergents.
pub fn best_approximation(x: f64, max_den: i64) -> Rational {
    convergents(x, max_den)
        .pop()
        .unwrap_or_else(|| Ratio::from_integer(x.round() as i64))
}

/// Smallest-denominator convergent within `tol` of `x`.
pub fn detect_rational(x: f64, max_den: i64, tol: f64) -> Option<Rational> {
    convergents(x, max_den)
        .into_iter()
        .find(|q| (to_f64(q) - x).abs() < tol)
}

const FACTORIALS: [u64; 21] = {
    let mut t = [1u64; 21];
    let mut i = 1;
    while i < 21 {
        t[i] = t[i - 1] * i as u64;
        i += 1;
    }
    t
};

/// `k!` for `k ≤ 20`.
pub fn factorial(k: u32) -> u64 {
    FACTORIALS[k as usize]
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn is_zero(q: &Rational) -> bool {
    q.is_zero()
}
