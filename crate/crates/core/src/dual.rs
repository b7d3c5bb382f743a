//! The twisted Pontryagin dual: T-equivariant characters of the isotropy
//! fibers E_S(u), the Gelfand functionals φ_κ, and the actions of E and of
//! G/S on the dual.
//!
//! A character is stored by its values on the section s ↦ (1; s) only; the
//! full T-equivariant map is κ(z;s) = z·κ(1;s), so equivariance holds by
//! representation and never needs checking.

use std::collections::BTreeMap;

use num::integer::lcm;

use crate::cocycle::{solve_coboundary, TwistElement, TwistedGroupoid};
use crate::cyclotomic::Cyclotomic;
use crate::error::TwistError;
use crate::gpd::{abelian_basis, Subgroupoid};
use crate::roots::RootOfUnity;

/// A T-equivariant character on one fiber E_S(u), stored on the section.
///
/// The stored values satisfy values(s)·values(t) = c(s,t)·values(st), the
/// projective relation induced by the section.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TwistedCharacter {
    pub unit: usize,
    pub values: BTreeMap<usize, RootOfUnity>,
}

impl TwistedCharacter {
    /// κ(z; s) = z · values(s).
    pub fn eval(&self, e: TwistElement) -> RootOfUnity {
        self.values
            .get(&e.base)
            .unwrap_or_else(|| panic!("character at unit {} has no value at {}", self.unit, e.base))
            .mul(&e.phase)
    }

    pub fn modulus(&self) -> u64 {
        self.values.values().fold(1, |acc, v| lcm(acc, v.modulus()))
    }
}

/// All characters over one unit; a torsor over the dual group of S(u).
#[derive(Clone, Debug)]
pub struct DualFiber {
    pub unit: usize,
    pub characters: Vec<TwistedCharacter>,
}

/// Enumerates the dual fiber at `u` through the coboundary trivialization:
/// κ_χ(1;s) = d(s)·χ(s) as χ runs over the plain dual group of S(u).
pub fn enumerate_dual_fiber(
    tw: &TwistedGroupoid,
    s: &Subgroupoid,
    u: usize,
) -> Result<DualFiber, TwistError> {
    let fiber = s.fiber(&tw.gpd, u);
    assert!(!fiber.is_empty(), "a wide subgroupoid has nonempty fibers");
    let d = solve_coboundary(tw, &fiber).map_err(|e| match e {
        TwistError::NotCoboundary => TwistError::NotAbelian(u),
        other => other,
    })?;
    let basis = abelian_basis(&tw.gpd, &fiber);
    let mut characters = Vec::with_capacity(fiber.len());
    let mut tuple = vec![0u64; basis.len()];
    loop {
        // χ(bᵢ) = ζ_{oᵢ}^{tuple[i]}, spread over the fiber along coordinates.
        let mut chi: BTreeMap<usize, RootOfUnity> = BTreeMap::new();
        chi.insert(u, RootOfUnity::one());
        let mut frontier = vec![u];
        while let Some(e) = frontier.pop() {
            for (i, &(b, o)) in basis.iter().enumerate() {
                let eb = tw.gpd.mul(e, b);
                if !chi.contains_key(&eb) {
                    let v = chi[&e].mul(&RootOfUnity::new(tuple[i] as i64, o));
                    chi.insert(eb, v);
                    frontier.push(eb);
                }
            }
        }
        debug_assert_eq!(chi.len(), fiber.len());
        let values: BTreeMap<usize, RootOfUnity> = chi
            .iter()
            .map(|(&e, v)| (e, d.values[&e].mul(v)))
            .collect();
        characters.push(TwistedCharacter { unit: u, values });
        if !advance(&mut tuple, &basis) {
            break;
        }
    }
    characters.sort();
    characters.dedup();
    assert_eq!(
        characters.len(),
        fiber.len(),
        "dual fiber must be a torsor over the dual group"
    );
    Ok(DualFiber {
        unit: u,
        characters,
    })
}

/// Odometer step over mixed-radix exponent tuples; false when exhausted.
fn advance(tuple: &mut [u64], basis: &[(usize, u64)]) -> bool {
    for (t, &(_, o)) in tuple.iter_mut().zip(basis) {
        *t += 1;
        if *t < o {
            return true;
        }
        *t = 0;
    }
    false
}

/// Brute-force oracle: tries every section assignment on a basis over
/// μ_{M·exp(A)} and keeps those satisfying the projective relation on all
/// pairs. Exponential; intended for fibers with at most ~16 elements.
pub fn enumerate_dual_fiber_bruteforce(
    tw: &TwistedGroupoid,
    s: &Subgroupoid,
    u: usize,
) -> Result<DualFiber, TwistError> {
    let fiber = s.fiber(&tw.gpd, u);
    let basis = abelian_basis(&tw.gpd, &fiber);
    let exp_a = basis.iter().fold(1u64, |acc, &(_, o)| lcm(acc, o));
    let m2 = tw.cocycle.modulus() * exp_a.max(1);
    let fake_basis: Vec<(usize, u64)> = basis.iter().map(|&(b, _)| (b, m2)).collect();
    let mut characters: Vec<TwistedCharacter> = Vec::new();
    let mut tuple = vec![0u64; basis.len()];
    loop {
        // candidate values forced along coordinates by the relation
        // v(e)·v(b) = c(e,b)·v(e·b)
        let mut values: BTreeMap<usize, RootOfUnity> = BTreeMap::new();
        values.insert(u, RootOfUnity::one());
        let mut frontier = vec![u];
        while let Some(e) = frontier.pop() {
            for (i, &(b, _)) in basis.iter().enumerate() {
                let eb = tw.gpd.mul(e, b);
                if !values.contains_key(&eb) {
                    let v = values[&e]
                        .mul(&RootOfUnity::new(tuple[i] as i64, m2))
                        .mul(&tw.cocycle.value(&tw.gpd, e, b).conj());
                    values.insert(eb, v);
                    frontier.push(eb);
                }
            }
        }
        let ok = fiber.iter().all(|&a| {
            fiber.iter().all(|&b| {
                let ab = tw.gpd.mul(a, b);
                values[&a].mul(&values[&b])
                    == tw.cocycle.value(&tw.gpd, a, b).mul(&values[&ab])
            })
        });
        if ok {
            let cand = TwistedCharacter { unit: u, values };
            if !characters.contains(&cand) {
                characters.push(cand);
            }
        }
        if !advance(&mut tuple, &fake_basis) {
            break;
        }
    }
    characters.sort();
    Ok(DualFiber {
        unit: u,
        characters,
    })
}

/// (e ▷ κ)(τ) = κ(e⁻¹τe): a character at r(e) from one at s(e).
/// The phase of `e` cancels, so all lifts of a groupoid element act alike.
pub fn act(
    tw: &TwistedGroupoid,
    s: &Subgroupoid,
    e: TwistElement,
    kappa: &TwistedCharacter,
) -> Result<TwistedCharacter, TwistError> {
    if tw.gpd.source(e.base) != kappa.unit {
        return Err(TwistError::FiberMismatch(tw.gpd.source(e.base), kappa.unit));
    }
    let v = tw.gpd.range(e.base);
    let mut values = BTreeMap::new();
    for t in s.fiber(&tw.gpd, v) {
        let moved = tw.conj_twist(e, TwistElement::section(t))?;
        if !s.contains(moved.base) {
            return Err(TwistError::IllDefined(format!(
                "conjugation leaves the subgroupoid at {t}; S is not normal"
            )));
        }
        values.insert(t, kappa.eval(moved));
    }
    Ok(TwistedCharacter { unit: v, values })
}

/// The induced action of G/S through any representative of the coset.
pub fn act_coset(
    tw: &TwistedGroupoid,
    s: &Subgroupoid,
    rep: usize,
    kappa: &TwistedCharacter,
) -> Result<TwistedCharacter, TwistError> {
    act(tw, s, TwistElement::section(rep), kappa)
}

/// A finitely supported equivariant function on one fiber E_S(u), stored by
/// one cyclotomic value per supported section point.
#[derive(Clone, Debug)]
pub struct FiberFunction {
    pub unit: usize,
    pub values: BTreeMap<usize, Cyclotomic>,
}

impl FiberFunction {
    pub fn delta(unit: usize, s: usize, value: Cyclotomic) -> FiberFunction {
        let mut values = BTreeMap::new();
        values.insert(s, value);
        FiberFunction { unit, values }
    }

    /// Twisted convolution on the fiber algebra:
    /// (f₁*f₂)(σ') = Σ f₁(σ) f₂(σ⁻¹σ'). On section values the surviving
    /// term for σ = (1;t), σ' = (1;tr) is f₁(1;t)·conj(c(t,r))·f₂(1;r),
    /// because (1;t)⁻¹(1;tr) = conj(c(t,r))·(1;r).
    pub fn convolve(
        &self,
        tw: &TwistedGroupoid,
        other: &FiberFunction,
    ) -> Result<FiberFunction, TwistError> {
        assert_eq!(self.unit, other.unit);
        let mut values: BTreeMap<usize, Cyclotomic> = BTreeMap::new();
        for (&t, ft) in &self.values {
            for (&r, gr) in &other.values {
                let prod = tw.twist_mul(TwistElement::section(t), TwistElement::section(r))?;
                let term = ft.mul(gr).mul(&Cyclotomic::from_root(prod.phase.conj()));
                values
                    .entry(prod.base)
                    .and_modify(|v| *v = v.add(&term))
                    .or_insert(term);
            }
        }
        values.retain(|_, v| !v.is_zero());
        Ok(FiberFunction {
            unit: self.unit,
            values,
        })
    }

    /// f*(σ) = conj(f(σ⁻¹)).
    pub fn adjoint(&self, tw: &TwistedGroupoid) -> FiberFunction {
        let mut values = BTreeMap::new();
        for (&s, fs) in &self.values {
            let inv = tw.twist_inv(TwistElement::section(s));
            // f evaluated at (1;s)⁻¹ = inv.phase · (1; inv.base)
            let val = fs.mul(&Cyclotomic::from_root(inv.phase)).conj();
            values.insert(inv.base, val);
        }
        FiberFunction {
            unit: self.unit,
            values,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(|v| v.is_zero())
    }
}

/// φ_κ(f) = Σ_σ conj(κ(σ)) f(σ), summed over the section; exact cyclotomic.
pub fn phi_kappa(f: &FiberFunction, kappa: &TwistedCharacter) -> Cyclotomic {
    assert_eq!(f.unit, kappa.unit);
    let mut acc = Cyclotomic::zero(1);
    for (&s, fs) in &f.values {
        let coeff = Cyclotomic::from_root(kappa.values[&s].conj());
        acc = acc.add(&coeff.mul(fs));
    }
    acc
}
