//! Exact roots of unity as reduced exponent/modulus pairs.
//!
//! A value `exp/modulus` stands for `exp(2πi · exp/modulus)`. Every
//! constructor reduces the fraction, so the stored modulus is the exact
//! multiplicative order (1 for the value 1) and equality is plain field
//! equality. Mixed-modulus arithmetic lifts to the lcm.

use std::fmt;

use num::integer::{gcd, lcm};
use serde::{Deserialize, Serialize};

use crate::error::ValueError;

/// Hard ceiling on moduli; reaching it means an instance is far outside the
/// intended desk scale and exponent arithmetic may be about to overflow.
pub const MODULUS_CEILING: u64 = 1 << 24;

/// A root of unity `e^{2πi·exp/modulus}` in lowest terms.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootOfUnity {
    exp: u64,
    modulus: u64,
}

impl RootOfUnity {
    /// Reduces `exp/modulus` to lowest terms. `modulus` must be ≥ 1.
    pub fn new(exp: i64, modulus: u64) -> Self {
        assert!(modulus >= 1, "root of unity needs modulus >= 1");
        let m = modulus as i64;
        let e = exp.rem_euclid(m) as u64;
        if e == 0 {
            return RootOfUnity { exp: 0, modulus: 1 };
        }
        let g = gcd(e, modulus);
        RootOfUnity {
            exp: e / g,
            modulus: modulus / g,
        }
    }

    pub fn one() -> Self {
        RootOfUnity { exp: 0, modulus: 1 }
    }

    pub fn is_one(&self) -> bool {
        self.exp == 0
    }

    /// `-1`.
    pub fn minus_one() -> Self {
        RootOfUnity { exp: 1, modulus: 2 }
    }

    /// Exponent in lowest terms.
    pub fn exp(&self) -> u64 {
        self.exp
    }

    /// Modulus in lowest terms, i.e. the multiplicative order.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        self.modulus
    }

    /// Exponent lifted to a larger modulus. `to` must be a multiple of
    /// `self.modulus()`.
    pub fn lift(&self, to: u64) -> u64 {
        debug_assert!(to.is_multiple_of(self.modulus), "lift target must be a multiple");
        self.exp * (to / self.modulus)
    }

    pub fn mul(&self, other: &RootOfUnity) -> RootOfUnity {
        let m = lcm(self.modulus, other.modulus);
        RootOfUnity::new((self.lift(m) + other.lift(m)) as i64, m)
    }

    pub fn inv(&self) -> RootOfUnity {
        RootOfUnity::new(-(self.exp as i64), self.modulus)
    }

    /// Complex conjugate; same as the inverse on the unit circle.
    pub fn conj(&self) -> RootOfUnity {
        self.inv()
    }

    pub fn pow(&self, k: i64) -> RootOfUnity {
        let e = (self.exp as i128 * k as i128).rem_euclid(self.modulus as i128);
        RootOfUnity::new(e as i64, self.modulus)
    }

    /// Common modulus of two values, with an overflow/ceiling guard.
    pub fn common_modulus(a: &RootOfUnity, b: &RootOfUnity) -> Result<u64, ValueError> {
        let m = lcm(a.modulus, b.modulus);
        if m > MODULUS_CEILING {
            return Err(ValueError::ModulusOverflow(m));
        }
        Ok(m)
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.exp, self.modulus)
    }
}

impl fmt::Debug for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ζ({self})")
    }
}

/// `lcm` with a ceiling check, for adaptive-modulus growth sites.
pub fn checked_lcm(a: u64, b: u64, limit: u64) -> Result<u64, ValueError> {
    let m = lcm(a, b);
    if m > limit || m > MODULUS_CEILING {
        return Err(ValueError::ModulusLimit { modulus: m, limit });
    }
    Ok(m)
}
