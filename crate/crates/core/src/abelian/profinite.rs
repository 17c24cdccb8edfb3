use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::rational::factorial;
use crate::{Error, Result};

/// Largest depth whose modulus `K!` fits in a machine word.
pub const MAX_DEPTH: u32 = 20;

/// Depth used by the CLI when none is given (`8! = 40320`).
pub const DEFAULT_DEPTH: u32 = 8;

/// An element of Ẑ truncated at level `K!`.
///
/// The residue mod `K!` determines the residue mod every `n ≤ K`, so the
/// inverse-limit coordinates along the cofinal chain `1!, 2!, …, K!` are all
/// recoverable from a single integer.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawProfinite")]
pub struct ProfiniteInt {
    depth: u32,
    residue: u64,
}

#[derive(Deserialize)]
struct RawProfinite {
    depth: u32,
    residue: u64,
}

impl TryFrom<RawProfinite> for ProfiniteInt {
    type Error = Error;
    fn try_from(raw: RawProfinite) -> Result<Self> {
        ProfiniteInt::new(raw.depth, raw.residue)
    }
}

fn check_depth(depth: u32) -> Result<()> {
    if depth == 0 || depth > MAX_DEPTH {
        return Err(Error::Depth(format!(
            "depth must lie in 1..={MAX_DEPTH}, got {depth}"
        )));
    }
    Ok(())
}

impl ProfiniteInt {
    /// `residue` must already be reduced mod `depth!`.
    pub fn new(depth: u32, residue: u64) -> Result<Self> {
        check_depth(depth)?;
        let m = factorial(depth);
        if residue >= m {
            return Err(Error::Invalid(format!(
                "residue {residue} is not reduced mod {depth}! = {m}"
            )));
        }
        Ok(ProfiniteInt { depth, residue })
    }

    /// The image of an ordinary integer under ℤ → Ẑ.
    pub fn from_integer(depth: u32, n: i64) -> Result<Self> {
        check_depth(depth)?;
        let m = factorial(depth) as i128;
        let residue = (n as i128).rem_euclid(m) as u64;
        Ok(ProfiniteInt { depth, residue })
    }

    pub fn zero(depth: u32) -> Result<Self> {
        Self::from_integer(depth, 0)
    }

    /// The topological generator `𝟏`.
    pub fn one(depth: u32) -> Result<Self> {
        Self::from_integer(depth, 1)
    }

    /// Imports a list of `(residue, modulus)` pairs, verifying that they are
    /// pairwise coherent.
    ///
    /// The combined modulus `L = lcm(moduli)` is truncated to the largest
    /// factorial level `K!` dividing it.
    pub fn from_residues(pairs: &[(u64, u64)]) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::Invalid("no residues given".into()));
        }
        let (mut r, mut m) = (0i128, 1i128);
        for &(ri, mi) in pairs {
            if mi == 0 {
                return Err(Error::Invalid("modulus 0".into()));
            }
            let (ri, mi) = ((ri % mi) as i128, mi as i128);
            let g = m.gcd(&mi);
            if (ri - r).rem_euclid(g) != 0 {
                return Err(Error::Incoherent(format!(
                    "{ri} mod {mi} disagrees with {r} mod {m} on the common level {g}"
                )));
            }
            let l = m / g * mi;
            if l > factorial(MAX_DEPTH) as i128 * MAX_DEPTH as i128 {
                return Err(Error::Depth(format!("combined modulus {l} is too large")));
            }
            // r + m·t ≡ ri (mod mi)  ⇒  t ≡ (ri - r)/g · (m/g)^{-1}  (mod mi/g)
            let mg = m / g;
            let mig = mi / g;
            let t = if mig == 1 {
                0
            } else {
                let inv = mod_inverse(mg.rem_euclid(mig), mig);
                (((ri - r) / g).rem_euclid(mig) * inv).rem_euclid(mig)
            };
            r = (r + m * t).rem_euclid(l);
            m = l;
        }
        let mut depth = 1;
        while depth < MAX_DEPTH && m % factorial(depth + 1) as i128 == 0 {
            depth += 1;
        }
        let modulus = factorial(depth) as i128;
        Ok(ProfiniteInt {
            depth,
            residue: r.rem_euclid(modulus) as u64,
        })
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    /// `depth!`
    pub fn modulus(&self) -> u64 {
        factorial(self.depth)
    }

    /// Same element viewed at a smaller depth.
    pub fn truncate(&self, depth: u32) -> Result<Self> {
        check_depth(depth)?;
        if depth > self.depth {
            return Err(Error::Depth(format!(
                "cannot refine depth {} to {depth}",
                self.depth
            )));
        }
        Ok(ProfiniteInt {
            depth,
            residue: self.residue % factorial(depth),
        })
    }

    /// Residue mod `n`; requires `n | depth!`.
    pub fn project(&self, n: u64) -> Result<u64> {
        if n == 0 || self.modulus() % n != 0 {
            return Err(Error::Depth(format!(
                "level {n} does not divide {}! = {}",
                self.depth,
                self.modulus()
            )));
        }
        Ok(self.residue % n)
    }

    /// `self + n·𝟏`
    pub fn add_integer(&self, n: i64) -> Self {
        let m = self.modulus() as i128;
        let residue = (self.residue as i128 + n as i128).rem_euclid(m) as u64;
        ProfiniteInt {
            depth: self.depth,
            residue,
        }
    }

    /// `k·self`
    pub fn mul_integer(&self, k: i64) -> Self {
        let m = self.modulus() as i128;
        let residue = (self.residue as i128 * k as i128).rem_euclid(m) as u64;
        ProfiniteInt {
            depth: self.depth,
            residue,
        }
    }

    /// Group addition. Mismatched depths are truncated to the smaller one.
    pub fn add(&self, other: &Self) -> Self {
        let depth = self.depth.min(other.depth);
        let m = factorial(depth);
        let a = self.residue % m;
        let b = other.residue % m;
        ProfiniteInt {
            depth,
            residue: ((a as u128 + b as u128) % m as u128) as u64,
        }
    }

    pub fn neg(&self) -> Self {
        let m = self.modulus();
        ProfiniteInt {
            depth: self.depth,
            residue: (m - self.residue) % m,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn is_zero(&self) -> bool {
        self.residue == 0
    }
}

fn mod_inverse(a: i128, m: i128) -> i128 {
    // a and m are coprime here
    let (mut old_r, mut r) = (a, m);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    old_s.rem_euclid(m)
}

impl fmt::Debug for ProfiniteInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {}!)", self.residue, self.depth)
    }
}

impl Add for ProfiniteInt {
    type Output = ProfiniteInt;
    fn add(self, rhs: Self) -> Self {
        ProfiniteInt::add(&self, &rhs)
    }
}

impl Sub for ProfiniteInt {
    type Output = ProfiniteInt;
    fn sub(self, rhs: Self) -> Self {
        ProfiniteInt::sub(&self, &rhs)
    }
}

impl Neg for ProfiniteInt {
    type Output = ProfiniteInt;
    fn neg(self) -> Self {
        ProfiniteInt::neg(&self)
    }
}
