//! Small multivariate integer polynomials over a fixed variable set, used
//! by the rotation engine to verify exponent identities symbolically.

use std::collections::BTreeMap;
use std::fmt;

/// Variables g₁, g₂, h₁, h₂, r of the rotation identities.
pub const NVARS: usize = 5;
pub const G1: usize = 0;
pub const G2: usize = 1;
pub const H1: usize = 2;
pub const H2: usize = 3;
pub const R: usize = 4;

type Monomial = [u8; NVARS];

/// Sparse polynomial with i128 coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, i128>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn constant(c: i128) -> Poly {
        let mut p = Poly::default();
        if c != 0 {
            p.terms.insert([0; NVARS], c);
        }
        p
    }

    pub fn var(i: usize) -> Poly {
        let mut mono = [0u8; NVARS];
        mono[i] = 1;
        let mut p = Poly::default();
        p.terms.insert(mono, 1);
        p
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (&m, &c) in &other.terms {
            let entry = out.terms.entry(m).or_insert(0);
            *entry += c;
            if *entry == 0 {
                out.terms.remove(&m);
            }
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(&m, &c)| (m, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::default();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let mut m = *m1;
                for (a, b) in m.iter_mut().zip(m2) {
                    *a += b;
                }
                let entry = out.terms.entry(m).or_insert(0);
                *entry += c1 * c2;
                if *entry == 0 {
                    out.terms.remove(&m);
                }
            }
        }
        out
    }

    pub fn scale(&self, c: i128) -> Poly {
        if c == 0 {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(&m, &v)| (m, v * c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// All coefficients divisible by `m`.
    pub fn divisible_by(&self, m: i128) -> bool {
        self.terms.values().all(|c| c % m == 0)
    }

    pub fn eval(&self, point: &[i128; NVARS]) -> i128 {
        let mut acc = 0i128;
        for (m, c) in &self.terms {
            let mut t = *c;
            for (i, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    t *= point[i];
                }
            }
            acc += t;
        }
        acc
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        const NAMES: [&str; NVARS] = ["g1", "g2", "h1", "h2", "r"];
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let vars: String = m
                    .iter()
                    .enumerate()
                    .filter(|&(_, &e)| e > 0)
                    .map(|(i, &e)| {
                        if e == 1 {
                            NAMES[i].to_string()
                        } else {
                            format!("{}^{}", NAMES[i], e)
                        }
                    })
                    .collect::<Vec<_>>()
                    .join("·");
                if vars.is_empty() {
                    format!("{c}")
                } else if *c == 1 {
                    vars
                } else {
                    format!("{c}·{vars}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
