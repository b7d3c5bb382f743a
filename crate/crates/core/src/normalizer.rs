//! Desk-scale model of the normalizer set N: compactly supported
//! equivariant functions whose open support is a bisection, with exact
//! convolution and involution, the conditional expectation onto the
//! subgroupoid, the induced partial action α_n on the twisted dual, and
//! Renault's Weyl equivalence criteria.
//!
//! Function values are restricted to (positive rational)·μ_M so that the
//! positivity appearing in the twist-equivalence criteria is exactly
//! decidable. Functions are stored by their section values f(1;g); the
//! equivariant extension f(z·e) = z·f(e) is implied throughout.

use std::collections::BTreeMap;

use num::{BigRational, Signed};

use crate::cocycle::{TwistElement, TwistedGroupoid};
use crate::cyclotomic::Cyclotomic;
use crate::dual::{act, phi_kappa, FiberFunction, TwistedCharacter};
use crate::error::{CheckError, TwistError};
use crate::gpd::{Groupoid, Subgroupoid};
use crate::roots::RootOfUnity;

/// One function value q·ζ with q a positive rational and ζ ∈ μ_M.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Value {
    pub coeff: BigRational,
    pub phase: RootOfUnity,
}

impl Value {
    pub fn new(coeff: BigRational, phase: RootOfUnity) -> Value {
        assert!(coeff.is_positive(), "normalizer values have positive size");
        Value { coeff, phase }
    }

    pub fn one() -> Value {
        Value {
            coeff: BigRational::from_integer(1.into()),
            phase: RootOfUnity::one(),
        }
    }

    pub fn cyclotomic(&self) -> Cyclotomic {
        Cyclotomic::term(self.coeff.clone(), self.phase)
    }
}

/// An element of N: section values over a support that is a bisection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BisectionFunction {
    values: BTreeMap<usize, Value>,
}

impl BisectionFunction {
    /// Validates the bisection property of the support.
    pub fn new(
        gpd: &Groupoid,
        values: BTreeMap<usize, Value>,
    ) -> Result<BisectionFunction, TwistError> {
        let mut seen_r = BTreeMap::new();
        let mut seen_s = BTreeMap::new();
        for &g in values.keys() {
            if let Some(&other) = seen_r.get(&gpd.range(g)) {
                return Err(TwistError::IllDefined(format!(
                    "support is not a bisection: {other} and {g} share a range"
                )));
            }
            if let Some(&other) = seen_s.get(&gpd.source(g)) {
                return Err(TwistError::IllDefined(format!(
                    "support is not a bisection: {other} and {g} share a source"
                )));
            }
            seen_r.insert(gpd.range(g), g);
            seen_s.insert(gpd.source(g), g);
        }
        Ok(BisectionFunction { values })
    }

    pub fn singleton(g: usize, value: Value) -> BisectionFunction {
        let mut values = BTreeMap::new();
        values.insert(g, value);
        BisectionFunction { values }
    }

    /// The indicator of the unit space, the identity for convolution.
    pub fn unit_indicator(gpd: &Groupoid) -> BisectionFunction {
        BisectionFunction {
            values: gpd.unit_ids().map(|u| (u, Value::one())).collect(),
        }
    }

    pub fn values(&self) -> &BTreeMap<usize, Value> {
        &self.values
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.values.keys().copied()
    }

    pub fn scaled(&self, z: RootOfUnity, q: &BigRational) -> BisectionFunction {
        BisectionFunction {
            values: self
                .values
                .iter()
                .map(|(&g, v)| {
                    (
                        g,
                        Value::new(&v.coeff * q, v.phase.mul(&z)),
                    )
                })
                .collect(),
        }
    }

    /// The unique support element with the given source, if any.
    pub fn over_source(&self, gpd: &Groupoid, u: usize) -> Option<usize> {
        self.values.keys().copied().find(|&g| gpd.source(g) == u)
    }

    /// The unique positive lift over the support element `g`: the twist
    /// element e with π(e) = g and f(e) > 0.
    pub fn positive_lift(&self, g: usize) -> TwistElement {
        TwistElement::new(self.values[&g].phase.conj(), g)
    }
}

/// Convolution f₁ * f₂(e') = Σ f₁(e) f₂(e⁻¹e'). With bisection supports at
/// most one pair contributes per product element, so the value class
/// (positive rational)·μ_M is preserved; the product support is checked to
/// be a bisection again.
pub fn convolve(
    tw: &TwistedGroupoid,
    f1: &BisectionFunction,
    f2: &BisectionFunction,
) -> Result<BisectionFunction, TwistError> {
    let mut values = BTreeMap::new();
    for (&g, v1) in f1.values() {
        for (&h, v2) in f2.values() {
            if tw.gpd.composable(g, h) {
                let gh = tw.gpd.mul(g, h);
                // section value: f₁(1;g) · f₂((1;g)⁻¹(1;gh)) with
                // (1;g)⁻¹(1;gh) = conj(c(g,h))·(1;h)
                let phase = v1
                    .phase
                    .mul(&v2.phase)
                    .mul(&tw.cocycle.value(&tw.gpd, g, h).conj());
                let prev = values.insert(gh, Value::new(&v1.coeff * &v2.coeff, phase));
                assert!(prev.is_none(), "bisection supports cannot collide");
            }
        }
    }
    BisectionFunction::new(&tw.gpd, values)
}

/// f*(e) = conj(f(e⁻¹)); on section values
/// f*(1; g⁻¹) = c(g⁻¹, g) · conj(f(1; g)).
pub fn adjoint(tw: &TwistedGroupoid, f: &BisectionFunction) -> BisectionFunction {
    let values = f
        .values()
        .iter()
        .map(|(&g, v)| {
            let gi = tw.gpd.inverse(g);
            let phase = v.phase.conj().mul(&tw.cocycle.value(&tw.gpd, gi, g));
            (gi, Value::new(v.coeff.clone(), phase))
        })
        .collect();
    BisectionFunction { values }
}

/// The conditional expectation: restriction of the section values to S.
pub fn expect(s: &Subgroupoid, f: &BisectionFunction) -> BisectionFunction {
    BisectionFunction {
        values: f
            .values()
            .iter()
            .filter(|(&g, _)| s.contains(g))
            .map(|(&g, v)| (g, v.clone()))
            .collect(),
    }
}

/// φ_κ applied to a function supported in E_S: Σ conj(κ(σ)) f(σ).
pub fn phi_kappa_bisection(f: &BisectionFunction, kappa: &TwistedCharacter) -> Cyclotomic {
    let mut fiber = FiberFunction {
        unit: kappa.unit,
        values: BTreeMap::new(),
    };
    for (&g, v) in f.values() {
        if kappa.values.contains_key(&g) {
            fiber.values.insert(g, v.cyclotomic());
        }
    }
    phi_kappa(&fiber, kappa)
}

/// α_n(φ_κ) = φ_{e ▷ κ} for the unique e in the support of n over the
/// fiber of κ; the choice of phase lift does not matter.
pub fn alpha_n(
    tw: &TwistedGroupoid,
    s: &Subgroupoid,
    n: &BisectionFunction,
    kappa: &TwistedCharacter,
) -> Result<TwistedCharacter, CheckError> {
    let Some(g) = n.over_source(&tw.gpd, kappa.unit) else {
        return Err(CheckError::NotInDomain);
    };
    Ok(act(tw, s, n.positive_lift(g), kappa)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeylMode {
    Twist,
    Groupoid,
}

/// Decides ⟦n,φ_κ⟧ = ⟦m,φ_κ⟧ (twist mode) or [n,φ_κ] = [m,φ_κ] (groupoid
/// mode) by evaluating the support criterion and the expectation criterion
/// independently and insisting that they agree.
///
/// Twist mode: the support criterion asks for e, σ with n(e) > 0,
/// m(eσ) > 0 and κ(σ) = 1; it also serves as the operational definition of
/// the abstract class equality. The expectation criterion asks for
/// φ_κ(Φ(m*·n)) to be a positive rational, decided exactly. Groupoid mode
/// replaces "κ(σ) = 1" by "σ exists" and positivity by nonvanishing.
pub fn weyl_equivalent(
    tw: &TwistedGroupoid,
    s: &Subgroupoid,
    n: &BisectionFunction,
    m: &BisectionFunction,
    kappa: &TwistedCharacter,
    mode: WeylMode,
) -> Result<bool, CheckError> {
    let u = kappa.unit;
    let Some(gn) = n.over_source(&tw.gpd, u) else {
        return Err(CheckError::NotInDomain);
    };
    let Some(gm) = m.over_source(&tw.gpd, u) else {
        return Err(CheckError::NotInDomain);
    };

    // Support criterion. Supports over different range units can never be
    // equivalent: their cosets differ already in the quotient.
    let same_coset = tw.gpd.range(gn) == tw.gpd.range(gm)
        && s.contains(tw.gpd.mul(tw.gpd.inverse(gn), gm));
    let support_verdict = {
        if !same_coset {
            false
        } else {
            match mode {
                WeylMode::Groupoid => true,
                WeylMode::Twist => {
                    // σ := e⁻¹·f with e, f the positive lifts of n over gn
                    // and of m over gm; then m(eσ) = m(f) > 0.
                    let e = n.positive_lift(gn);
                    let f = m.positive_lift(gm);
                    let sigma = tw.twist_mul(tw.twist_inv(e), f)?;
                    kappa.eval(sigma).is_one()
                }
            }
        }
    };

    // Expectation criterion: φ_κ(Φ(m* · n)).
    let conv = convolve(tw, &adjoint(tw, m), n)?;
    let phi = phi_kappa_bisection(&expect(s, &conv), kappa);
    let expectation_verdict = match mode {
        WeylMode::Twist => phi.is_positive_rational(),
        WeylMode::Groupoid => !phi.is_zero(),
    };

    if support_verdict != expectation_verdict {
        return Err(CheckError::CriteriaDisagree(format!(
            "support criterion {support_verdict} vs expectation criterion {expectation_verdict} \
             for {mode:?} equivalence at unit {u}"
        )));
    }
    Ok(support_verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::Cocycle;
    use crate::dual::enumerate_dual_fiber;
    use crate::gpd::Groupoid;
    use num::BigInt;

    fn heisenberg() -> (TwistedGroupoid, Subgroupoid) {
        let g = Groupoid::abelian_grid(&[2, 2]);
        let c = Cocycle::bilinear_grid(&g, 2, vec![vec![0, 0], vec![1, 0]]).unwrap();
        let tw = TwistedGroupoid::new(g, c);
        let s = Subgroupoid::new(&tw.gpd, [0usize, 1]).unwrap();
        (tw, s)
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn unit_indicator_is_identity() {
        let (tw, _) = heisenberg();
        let id = BisectionFunction::unit_indicator(&tw.gpd);
        let f = BisectionFunction::singleton(2, Value::new(rat(3, 2), RootOfUnity::new(1, 2)));
        assert_eq!(convolve(&tw, &id, &f).unwrap(), f);
        assert_eq!(convolve(&tw, &f, &id).unwrap(), f);
    }

    #[test]
    fn singleton_products_carry_the_conjugate_cocycle_phase() {
        let (tw, _) = heisenberg();
        // bases (0,1) = 1 and (1,0) = 2: c(1, 2) has exponent 1·1 = 1
        let a = BisectionFunction::singleton(1, Value::one());
        let b = BisectionFunction::singleton(2, Value::one());
        let ab = convolve(&tw, &a, &b).unwrap();
        let expected = tw.cocycle.value(&tw.gpd, 1, 2).conj();
        assert_eq!(ab.values()[&3].phase, expected);
        assert_eq!(ab.values()[&3].phase, RootOfUnity::minus_one());
        // the other order is untwisted here
        let ba = convolve(&tw, &b, &a).unwrap();
        assert!(ba.values()[&3].phase.is_one());
    }

    #[test]
    fn adjoint_is_involutive() {
        let (tw, _) = heisenberg();
        for g in tw.gpd.elements() {
            let f = BisectionFunction::singleton(
                g,
                Value::new(rat(5, 3), RootOfUnity::new(1, 2)),
            );
            assert_eq!(adjoint(&tw, &adjoint(&tw, &f)), f);
            // f·f* is supported on the unit with positive value
            let ff = convolve(&tw, &f, &adjoint(&tw, &f)).unwrap();
            let u = tw.gpd.range(g);
            assert!(ff.values()[&u].phase.is_one());
            assert_eq!(ff.values()[&u].coeff, rat(25, 9));
        }
    }

    #[test]
    fn pair_groupoid_bisections_multiply() {
        let tw = TwistedGroupoid::untwisted(crate::catalog::pair_groupoid(3));
        // a 3-element bisection: a cyclic permutation's graph
        let g = &tw.gpd;
        let arrow = |i: usize, j: usize| {
            g.elements()
                .find(|&e| g.range(e) == i && g.source(e) == j)
                .unwrap()
        };
        let mut vals = BTreeMap::new();
        vals.insert(arrow(1, 0), Value::one());
        vals.insert(arrow(2, 1), Value::one());
        vals.insert(arrow(0, 2), Value::one());
        let f = BisectionFunction::new(g, vals).unwrap();
        let sq = convolve(&tw, &f, &f).unwrap();
        assert_eq!(sq.values().len(), 3);
        assert!(sq.values().contains_key(&arrow(2, 0)));
        // f · f* = unit indicator
        let id = convolve(&tw, &f, &adjoint(&tw, &f)).unwrap();
        assert_eq!(id, BisectionFunction::unit_indicator(g));
    }

    #[test]
    fn expectation_restricts_support() {
        let (tw, s) = heisenberg();
        let mut vals = BTreeMap::new();
        vals.insert(1usize, Value::one());
        let f = BisectionFunction::new(&tw.gpd, vals).unwrap();
        assert_eq!(expect(&s, &f), f);
        let g = BisectionFunction::singleton(2, Value::one());
        assert!(expect(&s, &g).values().is_empty());
    }

    #[test]
    fn alpha_n_matches_the_dual_action() {
        let (tw, s) = heisenberg();
        let fiber = enumerate_dual_fiber(&tw, &s, 0).unwrap();
        let k0 = &fiber.characters[0];
        // unit indicator induces the identity
        let id = BisectionFunction::unit_indicator(&tw.gpd);
        assert_eq!(&alpha_n(&tw, &s, &id, k0).unwrap(), k0);
        // singleton over g acts like (1;g); scaling n changes nothing
        let n = BisectionFunction::singleton(2, Value::new(rat(2, 1), RootOfUnity::one()));
        let expected = act(&tw, &s, TwistElement::section(2), k0).unwrap();
        assert_eq!(alpha_n(&tw, &s, &n, k0).unwrap(), expected);
        let n_scaled = n.scaled(RootOfUnity::new(1, 2), &rat(7, 5));
        assert_eq!(alpha_n(&tw, &s, &n_scaled, k0).unwrap(), expected);
        // composition law α_{m*n} = α_m ∘ α_n
        let m = BisectionFunction::singleton(3, Value::one());
        let mn = convolve(&tw, &m, &n).unwrap();
        let through = alpha_n(&tw, &s, &m, &alpha_n(&tw, &s, &n, k0).unwrap()).unwrap();
        assert_eq!(alpha_n(&tw, &s, &mn, k0).unwrap(), through);
    }

    #[test]
    fn weyl_equivalence_reflexive_and_scaling_invariant() {
        let (tw, s) = heisenberg();
        let fiber = enumerate_dual_fiber(&tw, &s, 0).unwrap();
        for kappa in &fiber.characters {
            let n = BisectionFunction::singleton(2, Value::new(rat(1, 2), RootOfUnity::one()));
            assert!(weyl_equivalent(&tw, &s, &n, &n, kappa, WeylMode::Twist).unwrap());
            assert!(weyl_equivalent(&tw, &s, &n, &n, kappa, WeylMode::Groupoid).unwrap());
            // convolving with a positively-valued unit-supported b keeps the class
            let b = BisectionFunction::unit_indicator(&tw.gpd).scaled(
                RootOfUnity::one(),
                &rat(4, 3),
            );
            let m = convolve(&tw, &n, &b).unwrap();
            assert!(weyl_equivalent(&tw, &s, &n, &m, kappa, WeylMode::Twist).unwrap());
        }
    }

    #[test]
    fn multi_element_bisections_on_an_action_groupoid() {
        // ℤ/4 acting on 4 points by rotation, S = units: normalizers with
        // full four-point bisection supports
        let g = crate::catalog::action_groupoid(&crate::catalog::cyclic(4), 4, |g, x| {
            (x + g) % 4
        });
        let tw = TwistedGroupoid::untwisted(g);
        let s = Subgroupoid::new(&tw.gpd, tw.gpd.unit_ids()).unwrap();
        // the rotation-by-one bisection: all arrows of group element 1
        let arrows: Vec<usize> = tw
            .gpd
            .elements()
            .filter(|&e| !tw.gpd.is_unit(e) && tw.gpd.range(e) == (tw.gpd.source(e) + 1) % 4)
            .collect();
        assert_eq!(arrows.len(), 4);
        let mut vals = BTreeMap::new();
        for &a in &arrows {
            vals.insert(a, Value::new(rat(2, 1), RootOfUnity::one()));
        }
        let n = BisectionFunction::new(&tw.gpd, vals).unwrap();
        let nn = convolve(&tw, &n, &n).unwrap();
        assert_eq!(nn.values().len(), 4);
        for u in tw.gpd.unit_ids() {
            let fiber = enumerate_dual_fiber(&tw, &s, u).unwrap();
            let kappa = &fiber.characters[0];
            // n against itself: equivalent in both modes
            assert!(weyl_equivalent(&tw, &s, &n, &n, kappa, WeylMode::Twist).unwrap());
            // n against its square: disjoint cosets
            assert!(!weyl_equivalent(&tw, &s, &n, &nn, kappa, WeylMode::Groupoid).unwrap());
            assert!(!weyl_equivalent(&tw, &s, &n, &nn, kappa, WeylMode::Twist).unwrap());
            // α_n moves the character to the next unit
            let moved = alpha_n(&tw, &s, &n, kappa).unwrap();
            assert_eq!(moved.unit, (u + 1) % 4);
        }
    }

    #[test]
    fn twist_classes_refine_groupoid_classes() {
        let (tw, s) = heisenberg();
        let fiber = enumerate_dual_fiber(&tw, &s, 0).unwrap();
        // n over (1,0), m over (1,1) = (1,0)+(0,1): connected by σ over (0,1)
        let n = BisectionFunction::singleton(2, Value::one());
        let m = BisectionFunction::singleton(3, Value::one());
        for kappa in &fiber.characters {
            let grp = weyl_equivalent(&tw, &s, &n, &m, kappa, WeylMode::Groupoid).unwrap();
            assert!(grp, "same S-coset, groupoid classes must match");
            let tws = weyl_equivalent(&tw, &s, &n, &m, kappa, WeylMode::Twist).unwrap();
            // the connecting σ has κ(σ) = ±1 depending on the character
            let e = n.positive_lift(2);
            let f = m.positive_lift(3);
            let sigma = tw.twist_mul(tw.twist_inv(e), f).unwrap();
            assert_eq!(tws, kappa.eval(sigma).is_one());
        }
        // and the two characters disagree on it
        let verdicts: Vec<bool> = fiber
            .characters
            .iter()
            .map(|k| weyl_equivalent(&tw, &s, &n, &m, k, WeylMode::Twist).unwrap())
            .collect();
        assert_eq!(verdicts.iter().filter(|&&v| v).count(), 1);
    }
}
