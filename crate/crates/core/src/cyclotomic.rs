//! Exact arithmetic in cyclotomic fields ℚ(ζ_M).
//!
//! Values are stored as sparse rational combinations of powers of a fixed
//! primitive M-th root of unity. The powers ζ^0, …, ζ^{M-1} are not a basis,
//! so equality, zero tests and rationality tests go through reduction modulo
//! the M-th cyclotomic polynomial; that reduced form lives in the honest
//! ℚ-basis 1, ζ, …, ζ^{φ(M)-1} and is therefore decisive.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::roots::RootOfUnity;

/// Coefficients of the M-th cyclotomic polynomial, ascending degree.
///
/// Computed by exact division of x^M − 1 by all lower Φ_d, d | M.
pub fn cyclotomic_polynomial(m: u64) -> Vec<i128> {
    assert!(m >= 1);
    // x^m - 1
    let mut num = vec![0i128; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m.is_multiple_of(d) {
            let phi_d = cyclotomic_polynomial(d);
            num = divide_exact(&num, &phi_d);
        }
    }
    num
}

/// Exact division of integer polynomials by a monic divisor.
fn divide_exact(num: &[i128], den: &[i128]) -> Vec<i128> {
    let dd = den.len() - 1;
    assert_eq!(den[dd], 1, "divisor must be monic");
    let mut rem: Vec<i128> = num.to_vec();
    let nd = rem.len() - 1;
    let mut quot = vec![0i128; nd - dd + 1];
    for k in (0..=nd - dd).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        if c != 0 {
            for (j, dc) in den.iter().enumerate() {
                rem[k + j] -= c * dc;
            }
        }
    }
    assert!(rem.iter().all(|&c| c == 0), "division was not exact");
    quot
}

/// A sparse element of ℤ[ζ_M] ⊗ ℚ.
#[derive(Clone, PartialEq, Eq)]
pub struct Cyclotomic {
    modulus: u64,
    /// exponent (mod modulus) → nonzero rational coefficient
    terms: BTreeMap<u64, BigRational>,
}

impl Cyclotomic {
    pub fn zero(modulus: u64) -> Self {
        Cyclotomic {
            modulus,
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Cyclotomic::from_rational(BigRational::one())
    }

    pub fn from_rational(q: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(0, q);
        }
        Cyclotomic { modulus: 1, terms }
    }

    pub fn from_root(root: RootOfUnity) -> Self {
        Cyclotomic::term(BigRational::one(), root)
    }

    /// The single term `q · root`.
    pub fn term(q: BigRational, root: RootOfUnity) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(root.exp(), q);
        }
        Cyclotomic {
            modulus: root.modulus(),
            terms,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Re-expresses the value over a multiple of the current modulus.
    pub fn lift(&self, to: u64) -> Cyclotomic {
        assert!(to.is_multiple_of(self.modulus), "lift target must be a multiple");
        let f = to / self.modulus;
        Cyclotomic {
            modulus: to,
            terms: self
                .terms
                .iter()
                .map(|(e, q)| (e * f, q.clone()))
                .collect(),
        }
    }

    fn common(a: &Cyclotomic, b: &Cyclotomic) -> (Cyclotomic, Cyclotomic) {
        let m = num::integer::lcm(a.modulus, b.modulus);
        (a.lift(m), b.lift(m))
    }

    pub fn add(&self, other: &Cyclotomic) -> Cyclotomic {
        let (mut a, b) = Cyclotomic::common(self, other);
        for (e, q) in b.terms {
            let entry = a.terms.entry(e).or_insert_with(BigRational::zero);
            *entry += q;
            if entry.is_zero() {
                a.terms.remove(&e);
            }
        }
        a
    }

    pub fn neg(&self) -> Cyclotomic {
        Cyclotomic {
            modulus: self.modulus,
            terms: self.terms.iter().map(|(e, q)| (*e, -q.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Cyclotomic) -> Cyclotomic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Cyclotomic) -> Cyclotomic {
        let (a, b) = Cyclotomic::common(self, other);
        let m = a.modulus;
        let mut out = Cyclotomic::zero(m);
        for (e1, q1) in &a.terms {
            for (e2, q2) in &b.terms {
                let e = (e1 + e2) % m;
                let entry = out.terms.entry(e).or_insert_with(BigRational::zero);
                *entry += q1 * q2;
            }
        }
        out.terms.retain(|_, q| !q.is_zero());
        out
    }

    pub fn scale(&self, q: &BigRational) -> Cyclotomic {
        if q.is_zero() {
            return Cyclotomic::zero(self.modulus);
        }
        Cyclotomic {
            modulus: self.modulus,
            terms: self.terms.iter().map(|(e, c)| (*e, c * q)).collect(),
        }
    }

    /// Complex conjugation ζ ↦ ζ̄ (rational coefficients are fixed).
    pub fn conj(&self) -> Cyclotomic {
        Cyclotomic {
            modulus: self.modulus,
            terms: self
                .terms
                .iter()
                .map(|(e, q)| ((self.modulus - e) % self.modulus, q.clone()))
                .collect(),
        }
    }

    /// Canonical coordinates in the basis 1, ζ, …, ζ^{φ(M)−1}:
    /// remainder modulo Φ_M.
    pub fn reduced(&self) -> Vec<BigRational> {
        let m = self.modulus as usize;
        let phi = cyclotomic_polynomial(self.modulus);
        let deg = phi.len() - 1;
        let mut rem = vec![BigRational::zero(); m.max(deg + 1)];
        for (e, q) in &self.terms {
            rem[*e as usize] = q.clone();
        }
        for k in (deg..rem.len()).rev() {
            if rem[k].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut rem[k], BigRational::zero());
            // x^k ≡ x^{k-deg} · (x^deg - Φ_M) (mod Φ_M)
            for (j, pc) in phi.iter().enumerate().take(deg) {
                let coeff = BigRational::from(BigInt::from(*pc));
                rem[k - deg + j] -= &c * coeff;
            }
        }
        rem.truncate(deg);
        rem
    }

    pub fn is_zero(&self) -> bool {
        if self.terms.is_empty() {
            return true;
        }
        self.reduced().iter().all(|q| q.is_zero())
    }

    pub fn equals(&self, other: &Cyclotomic) -> bool {
        self.sub(other).is_zero()
    }

    /// The value as a rational number, if it is one.
    pub fn as_rational(&self) -> Option<BigRational> {
        let red = self.reduced();
        if red.iter().skip(1).all(|q| q.is_zero()) {
            Some(red.first().cloned().unwrap_or_else(BigRational::zero))
        } else {
            None
        }
    }

    /// Exact test for "is a strictly positive rational number".
    pub fn is_positive_rational(&self) -> bool {
        matches!(self.as_rational(), Some(q) if q.is_positive())
    }

    pub fn is_nonzero_rational(&self) -> bool {
        matches!(self.as_rational(), Some(q) if !q.is_zero())
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, q)| format!("{q}·ζ{}^{e}", self.modulus))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn cyclotomic_polynomials_small() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn minus_one_is_zeta2() {
        let a = Cyclotomic::from_root(RootOfUnity::minus_one());
        let b = Cyclotomic::from_rational(rat(-1, 1));
        assert!(a.equals(&b));
        assert_eq!(a.as_rational(), Some(rat(-1, 1)));
        assert!(!a.is_positive_rational());
    }

    #[test]
    fn sum_of_all_mth_roots_vanishes() {
        for m in 2..=12u64 {
            let mut s = Cyclotomic::zero(m);
            for e in 0..m {
                s = s.add(&Cyclotomic::from_root(RootOfUnity::new(e as i64, m)));
            }
            assert!(s.is_zero(), "sum of μ_{m} should vanish");
        }
    }

    #[test]
    fn i_is_not_rational() {
        let i = Cyclotomic::from_root(RootOfUnity::new(1, 4));
        assert_eq!(i.as_rational(), None);
        assert!(i.mul(&i.conj()).is_positive_rational());
    }

    proptest! {
        #[test]
        fn root_products_match_root_arithmetic(
            e1 in 0i64..24, m1 in 1u64..13, e2 in 0i64..24, m2 in 1u64..13,
        ) {
            let r1 = RootOfUnity::new(e1, m1);
            let r2 = RootOfUnity::new(e2, m2);
            let prod = Cyclotomic::from_root(r1).mul(&Cyclotomic::from_root(r2));
            prop_assert!(prod.equals(&Cyclotomic::from_root(r1.mul(&r2))));
        }

        #[test]
        fn conj_is_involutive_and_multiplicative(
            e1 in 0i64..12, m in 1u64..13, q1 in -5i64..5, q2 in 1i64..5,
        ) {
            let v = Cyclotomic::term(rat(q1, q2), RootOfUnity::new(e1, m))
                .add(&Cyclotomic::one());
            prop_assert!(v.conj().conj().equals(&v));
            let w = Cyclotomic::from_root(RootOfUnity::new(1, 3));
            prop_assert!(v.mul(&w).conj().equals(&v.conj().mul(&w.conj())));
        }
    }
}
