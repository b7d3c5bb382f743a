//! The Weyl groupoid ŜE ⋊ (G/S) and the Weyl twist (ŜE ⋊ E)/K as finite
//! objects: construction, isotropy, freeness, trivializability of the
//! twist, and the cross-checks against the normalizer-algebra picture.

use std::collections::BTreeMap;

use num::integer::lcm;
use num::{BigInt, BigRational};

use crate::cocycle::{TwistElement, TwistedGroupoid};
use crate::dual::{act_coset, enumerate_dual_fiber, TwistedCharacter};
use crate::error::{CheckError, TwistError};
use crate::gpd::{is_wide_normal, quotient, validate_groupoid, Groupoid, RawGroupoid, Subgroupoid};
use crate::normalizer::{weyl_equivalent, BisectionFunction, Value, WeylMode};
use crate::roots::RootOfUnity;
use crate::snf::{mat_from_i64, solve_mod_one};
use crate::{cocycle::Cocycle, normalizer};

/// The action groupoid ŜE ⋊ (G/S): the acting quotient, the dual as the
/// point space with its momentum map, and the full action table.
#[derive(Clone, Debug)]
pub struct WeylGroupoid {
    pub acting: Groupoid,
    /// G element → coset id in `acting`.
    pub proj: Vec<usize>,
    /// coset id → minimal representative in G.
    pub coset_rep: Vec<usize>,
    /// all dual points, fibers concatenated in unit order
    pub space: Vec<TwistedCharacter>,
    /// point → unit of G
    pub momentum: Vec<usize>,
    point_of: BTreeMap<TwistedCharacter, usize>,
    /// (coset, point) → point, defined when source(coset) = momentum(point)
    action: BTreeMap<(usize, usize), usize>,
}

impl WeylGroupoid {
    pub fn point_index(&self, kappa: &TwistedCharacter) -> usize {
        self.point_of[kappa]
    }

    pub fn act(&self, coset: usize, point: usize) -> usize {
        self.action[&(coset, point)]
    }

    /// All arrows (ċ, κ) with s(ċ) = P(κ).
    pub fn arrows(&self) -> Vec<(usize, usize)> {
        self.action.keys().copied().collect()
    }

    /// Arrows fixing their point; units are isotropy trivially.
    pub fn isotropy_points(&self) -> Vec<(usize, usize)> {
        self.action
            .iter()
            .filter(|(&(_, x), &y)| x == y)
            .map(|(&k, _)| k)
            .collect()
    }

    /// Principal ⇔ every isotropy arrow has a unit coset.
    pub fn is_principal(&self) -> bool {
        self.isotropy_points()
            .iter()
            .all(|&(c, _)| self.acting.is_unit(c))
    }

    /// Free action ⇔ principal action groupoid.
    pub fn is_free(&self) -> bool {
        self.is_principal()
    }

    /// In the finite discrete case all sets are open, so topological
    /// freeness ("free on a dense set") coincides with freeness.
    pub fn is_topologically_free_finite(&self) -> bool {
        self.is_free()
    }

    /// Flattens the action groupoid into plain validated tables; returns
    /// the groupoid together with the arrow list indexed by element id.
    pub fn to_groupoid(&self) -> (Groupoid, Vec<(usize, usize)>) {
        let points = self.space.len();
        let mut arrows: Vec<(usize, usize)> = Vec::new();
        for x in 0..points {
            arrows.push((self.momentum[x], x)); // unit coset id = unit id
        }
        for &(c, x) in self.action.keys() {
            if !self.acting.is_unit(c) {
                arrows.push((c, x));
            }
        }
        let index: BTreeMap<(usize, usize), usize> = arrows
            .iter()
            .enumerate()
            .map(|(i, &a)| (a, i))
            .collect();
        let mut compose = Vec::new();
        for (&(c, x), &cx) in &self.action {
            for &(c2, x2) in self.action.keys() {
                if x2 == cx && self.acting.composable(c2, c) {
                    let c3 = self.acting.mul(c2, c);
                    compose.push((index[&(c2, x2)], index[&(c, x)], index[&(c3, x)]));
                }
            }
        }
        let raw = RawGroupoid {
            n: arrows.len(),
            unit_ids: (0..points).collect(),
            range: arrows.iter().map(|&(c, x)| self.action[&(c, x)]).collect(),
            source: arrows.iter().map(|&(_, x)| x).collect(),
            inverse: arrows
                .iter()
                .map(|&(c, x)| index[&(self.acting.inverse(c), self.action[&(c, x)])])
                .collect(),
            compose,
        };
        let (gpd, perm) = validate_groupoid(&raw).expect("action groupoid laws");
        let mut out = vec![(0usize, 0usize); arrows.len()];
        for (i, &a) in arrows.iter().enumerate() {
            out[perm[i]] = a;
        }
        (gpd, out)
    }
}

fn require_preconditions(
    tw: &TwistedGroupoid,
    s: &Subgroupoid,
) -> Result<(), CheckError> {
    let rep = is_wide_normal(&tw.gpd, s);
    if !rep.wide || !rep.normal {
        return Err(CheckError::PreconditionFailed(
            "S must be a wide normal subgroupoid".into(),
        ));
    }
    if !tw.is_abelian_twist(s) {
        return Err(CheckError::PreconditionFailed(
            "the restricted twist E_S must be abelian".into(),
        ));
    }
    Ok(())
}

/// Builds ŜE ⋊ (G/S): space = disjoint union of dual fibers, acting
/// groupoid = G/S, action = the conjugation action through coset
/// representatives.
pub fn build_weyl_groupoid(
    tw: &TwistedGroupoid,
    s: &Subgroupoid,
) -> Result<WeylGroupoid, CheckError> {
    require_preconditions(tw, s)?;
    let (acting, proj) = quotient(&tw.gpd, s)?;
    let mut coset_rep = vec![usize::MAX; acting.n_elements()];
    for g in tw.gpd.elements() {
        if coset_rep[proj[g]] == usize::MAX {
            coset_rep[proj[g]] = g; // ids scanned ascending: minimal rep
        }
    }
    let mut space = Vec::new();
    let mut momentum = Vec::new();
    for u in tw.gpd.unit_ids() {
        let fiber = enumerate_dual_fiber(tw, s, u)?;
        for kappa in fiber.characters {
            momentum.push(u);
            space.push(kappa);
        }
    }
    let point_of: BTreeMap<TwistedCharacter, usize> = space
        .iter()
        .enumerate()
        .map(|(i, k)| (k.clone(), i))
        .collect();
    let mut action = BTreeMap::new();
    for c in acting.elements() {
        let rep = coset_rep[c];
        for (x, kappa) in space.iter().enumerate() {
            if momentum[x] == tw.gpd.source(rep) {
                let moved = act_coset(tw, s, rep, kappa)?;
                action.insert((c, x), point_of[&moved]);
            }
        }
    }
    Ok(WeylGroupoid {
        acting,
        proj,
        coset_rep,
        space,
        momentum,
        point_of,
        action,
    })
}

/// Checks the isotropy characterization: (ė, κ) is isotropy in W exactly
/// when r(e) = s(e) and κ kills the commutator set [e, E_S].
pub fn check_iso_characterization(
    tw: &TwistedGroupoid,
    s: &Subgroupoid,
    w: &WeylGroupoid,
) -> Result<bool, CheckError> {
    for (c, x) in w.arrows() {
        let rep = w.coset_rep[c];
        let kappa = &w.space[x];
        let actual = w.act(c, x) == x;
        let predicted = tw.gpd.is_isotropy(rep) && {
            let comms = tw.commutator_set(TwistElement::section(rep), s)?;
            comms.iter().all(|&f| kappa.eval(f).is_one())
        };
        if actual != predicted {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The reduced Weyl twist (ŜE ⋊ E)/K: the Weyl groupoid as base, the phase
/// modulus M'', and a 2-cocycle on the flattened base derived from the
/// canonical section. Fibers of the projection are μ_{M''}-torsors.
#[derive(Clone, Debug)]
pub struct WeylTwist {
    pub weyl: WeylGroupoid,
    pub modulus: u64,
    pub flat: Groupoid,
    /// flat element id → (coset, point)
    pub arrows: Vec<(usize, usize)>,
    arrow_of: BTreeMap<(usize, usize), usize>,
    pub cocycle: Cocycle,
}

impl WeylTwist {
    pub fn arrow_index(&self, coset: usize, point: usize) -> usize {
        self.arrow_of[&(coset, point)]
    }

    /// The reduced Weyl twist as an ordinary twisted-groupoid instance.
    pub fn as_instance(&self) -> TwistedGroupoid {
        TwistedGroupoid::new(self.flat.clone(), self.cocycle.clone())
    }
}

/// Canonical representative of the coset (e,κ)K = {conj(κ(τ))·eτ}: the
/// member over the minimal base id (each base carries exactly one member).
pub fn coset_canonical(
    tw: &TwistedGroupoid,
    s: &Subgroupoid,
    e: TwistElement,
    kappa: &TwistedCharacter,
) -> Result<TwistElement, TwistError> {
    let u = tw.gpd.source(e.base);
    if u != kappa.unit {
        return Err(TwistError::FiberMismatch(u, kappa.unit));
    }
    let mut best: Option<TwistElement> = None;
    for t in s.fiber(&tw.gpd, u) {
        let tau = TwistElement::section(t);
        let cand = tw
            .twist_mul(e, tau)?
            .scaled(kappa.eval(tau).conj());
        match best {
            Some(b) if b.base <= cand.base => {}
            _ => best = Some(cand),
        }
    }
    Ok(best.expect("fibers of a wide subgroupoid are nonempty"))
}

/// Builds the reduced Weyl twist with its derived 2-cocycle.
///
/// The section lifts a W-arrow (ġ, κ) to the coset of ((1;g₀), κ) for the
/// canonical coset representative g₀; the derived cocycle records the
/// phase by which a product of section lifts misses the section lift of
/// the product.
pub fn build_weyl_twist(
    tw: &TwistedGroupoid,
    s: &Subgroupoid,
) -> Result<WeylTwist, CheckError> {
    let weyl = build_weyl_groupoid(tw, s)?;
    let (flat, arrows) = weyl.to_groupoid();
    let arrow_of: BTreeMap<(usize, usize), usize> = arrows
        .iter()
        .enumerate()
        .map(|(i, &a)| (a, i))
        .collect();
    let modulus = tw
        .check_limit(
            weyl.space
                .iter()
                .fold(tw.cocycle.modulus(), |acc, k| lcm(acc, k.modulus())),
        )
        .map_err(TwistError::from)?;

    let mut entries: Vec<((usize, usize), u64)> = Vec::new();
    for (x_id, &(cx, px)) in arrows.iter().enumerate() {
        for (y_id, &(cy, py)) in arrows.iter().enumerate() {
            if flat.composable(x_id, y_id) {
                debug_assert_eq!(weyl.act(cy, py), px);
                let kappa = &weyl.space[py];
                let gx = weyl.coset_rep[cx];
                let gy = weyl.coset_rep[cy];
                let prod = tw
                    .twist_mul(TwistElement::section(gx), TwistElement::section(gy))?;
                // translate to the canonical representative of the product coset
                let g0 = weyl.coset_rep[weyl.proj[prod.base]];
                let t = tw.gpd.mul(tw.gpd.inverse(prod.base), g0);
                debug_assert!(s.contains(t));
                let tau = TwistElement::section(t);
                let phase = tw
                    .twist_mul(prod, tau)?
                    .phase
                    .mul(&kappa.eval(tau).conj());
                let exp = phase.lift(modulus);
                if exp != 0 {
                    entries.push(((x_id, y_id), exp));
                }
            }
        }
    }
    // from_table re-validates normalization and the cocycle identity, which
    // is exactly the invariant the derived cocycle must satisfy.
    let cocycle = Cocycle::from_table(&flat, modulus, entries)
        .expect("derived Weyl cocycle must satisfy the cocycle identity");
    Ok(WeylTwist {
        weyl,
        modulus,
        flat,
        arrows,
        arrow_of,
        cocycle,
    })
}

/// A Weyl class: the image of (e, κ) in the Weyl twist (canonical coset
/// representative) or in the Weyl groupoid (coset and character).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeylClass {
    Twist {
        rep: TwistElement,
        kappa: TwistedCharacter,
    },
    Groupoid {
        coset: usize,
        kappa: TwistedCharacter,
    },
}

/// Δ̃(e, κ): the twist-level Weyl class of (e, κ).
pub fn delta_tilde(
    tw: &TwistedGroupoid,
    s: &Subgroupoid,
    e: TwistElement,
    kappa: &TwistedCharacter,
) -> Result<WeylClass, TwistError> {
    Ok(WeylClass::Twist {
        rep: coset_canonical(tw, s, e, kappa)?,
        kappa: kappa.clone(),
    })
}

/// δ(ė, κ): the groupoid-level Weyl class.
pub fn delta_map(
    w: &WeylGroupoid,
    e: TwistElement,
    kappa: &TwistedCharacter,
) -> WeylClass {
    WeylClass::Groupoid {
        coset: w.proj[e.base],
        kappa: kappa.clone(),
    }
}

/// A trivializing homomorphism F, stored by its values on the canonical
/// section lifts (one per W-arrow).
#[derive(Clone, Debug)]
pub struct Trivialization {
    pub values: BTreeMap<(usize, usize), RootOfUnity>,
}

impl Trivialization {
    /// F(e, κ) from the section values: write e = z·(1;g₀)·τ_s and use
    /// F(z·X) = z F(X), F(Xτ, κ) = F(X, κ)κ(τ).
    pub fn evaluate(
        &self,
        tw: &TwistedGroupoid,
        w: &WeylGroupoid,
        e: TwistElement,
        kappa: &TwistedCharacter,
    ) -> RootOfUnity {
        let g = e.base;
        let coset = w.proj[g];
        let g0 = w.coset_rep[coset];
        let t = tw.gpd.mul(tw.gpd.inverse(g0), g);
        let tau = TwistElement::section(t);
        // (1;g₀)(1;t) = (c(g₀,t); g): e = e.phase·conj(c(g₀,t))·(1;g₀)τ
        let c = tw.cocycle.value(&tw.gpd, g0, t);
        e.phase
            .mul(&c.conj())
            .mul(&self.values[&(coset, w.point_index(kappa))])
            .mul(&kappa.eval(tau))
    }
}

/// Decides trivializability of the Weyl twist: a homomorphism
/// F: ŜE ⋊ E → T with F(τ,κ) = κ(τ) exists iff the derived cocycle is a
/// coboundary, an integer-linear system over ℚ/ℤ solved by Smith reduction.
/// Returns the witness on section representatives when solvable.
///
/// Over finite instances the Weyl groupoid of a Cartan pair is principal,
/// hence a disjoint union of pair groupoids whose twists all trivialize;
/// the value of the decision procedure is the explicit witness (and its
/// exhaustive verification), not the yes/no answer.
pub fn weyl_twist_trivializable(
    tw: &TwistedGroupoid,
    s: &Subgroupoid,
) -> Result<Option<Trivialization>, CheckError> {
    let verdict = crate::diag::check_cartan(tw, s);
    if !verdict.cartan {
        return Err(CheckError::PreconditionFailed(
            "the Weyl twist is only constructed over Cartan instances".into(),
        ));
    }
    let wt = build_weyl_twist(tw, s)?;
    solve_trivialization(&wt).map_err(CheckError::from)
}

/// The linear-system core of the trivializability decision, applicable to
/// any built Weyl twist.
pub fn solve_trivialization(wt: &WeylTwist) -> Result<Option<Trivialization>, TwistError> {
    let n = wt.arrows.len();
    let mut rows: Vec<Vec<i64>> = Vec::new();
    let mut rhs: Vec<BigRational> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for x in 0..n {
        for y in 0..n {
            if wt.flat.composable(x, y) {
                let xy = wt.flat.mul(x, y);
                let mut row = vec![0i64; n];
                row[x] += 1;
                row[y] += 1;
                row[xy] -= 1;
                let gamma = wt.cocycle.exponent(&wt.flat, x, y);
                if seen.insert((row.clone(), gamma)) {
                    rows.push(row);
                    rhs.push(BigRational::new(
                        BigInt::from(gamma),
                        BigInt::from(wt.modulus),
                    ));
                }
            }
        }
    }
    let Some(solution) = solve_mod_one(&mat_from_i64(&rows), &rhs) else {
        return Ok(None);
    };
    let mut values = BTreeMap::new();
    for (i, q) in solution.iter().enumerate() {
        // q = p/d in [0,1) becomes the root of unity with exponent p mod d
        let exp = i64::try_from(q.numer().clone()).expect("small exponent");
        let den = u64::try_from(q.denom().clone()).expect("small modulus");
        values.insert(wt.arrows[i], RootOfUnity::new(exp, den));
    }
    Ok(Some(Trivialization { values }))
}

/// Exhaustive verification that a trivialization is a homomorphism with
/// the required restriction to E_S; the executable content of the witness.
pub fn verify_trivialization(
    tw: &TwistedGroupoid,
    s: &Subgroupoid,
    w: &WeylGroupoid,
    f: &Trivialization,
) -> Result<bool, TwistError> {
    // F(τ, κ) = κ(τ) on the subgroupoid part.
    for kappa in &w.space {
        for t in s.fiber(&tw.gpd, kappa.unit) {
            let tau = TwistElement::section(t);
            if f.evaluate(tw, w, tau, kappa) != kappa.eval(tau) {
                return Ok(false);
            }
        }
    }
    // Homomorphism on all composable action pairs of section lifts.
    for kappa in &w.space {
        for g in tw.gpd.elements() {
            if tw.gpd.source(g) != kappa.unit {
                continue;
            }
            let e = TwistElement::section(g);
            let moved = crate::dual::act(tw, s, e, kappa)?;
            for g2 in tw.gpd.elements() {
                if tw.gpd.source(g2) != tw.gpd.range(g) {
                    continue;
                }
                let e2 = TwistElement::section(g2);
                let prod = tw.twist_mul(e2, e)?;
                let lhs = f
                    .evaluate(tw, w, e2, &moved)
                    .mul(&f.evaluate(tw, w, e, kappa));
                if lhs != f.evaluate(tw, w, prod, kappa) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Brute-force oracle for trivializability on tiny instances: depth-first
/// search with constraint propagation over phases in μ_domain.
pub fn trivialization_search_oracle(wt: &WeylTwist, domain: u64) -> Option<Trivialization> {
    let n = wt.arrows.len();
    let m = lcm(wt.modulus, domain);
    // equations (x, y, xy, gamma) with all exponents lifted to m
    let mut eqs: Vec<(usize, usize, usize, u64)> = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if wt.flat.composable(x, y) {
                let xy = wt.flat.mul(x, y);
                let gamma =
                    wt.cocycle.exponent(&wt.flat, x, y) * (m / wt.modulus) % m;
                eqs.push((x, y, xy, gamma));
            }
        }
    }
    fn propagate(
        assign: &mut Vec<Option<u64>>,
        eqs: &[(usize, usize, usize, u64)],
        m: u64,
    ) -> bool {
        loop {
            let mut progress = false;
            for &(x, y, xy, gamma) in eqs {
                let known = [assign[x], assign[y], assign[xy]];
                match known {
                    [Some(a), Some(b), Some(c)] => {
                        if (a + b) % m != (gamma + c) % m {
                            return false;
                        }
                    }
                    [Some(a), Some(b), None] => {
                        assign[xy] = Some((a + b + m - gamma) % m);
                        progress = true;
                    }
                    [Some(a), None, Some(c)] => {
                        assign[y] = Some((gamma + c + m - a % m) % m);
                        progress = true;
                    }
                    [None, Some(b), Some(c)] => {
                        assign[x] = Some((gamma + c + m - b % m) % m);
                        progress = true;
                    }
                    _ => {}
                }
            }
            if !progress {
                return true;
            }
        }
    }
    fn dfs(
        assign: &mut Vec<Option<u64>>,
        eqs: &[(usize, usize, usize, u64)],
        m: u64,
    ) -> bool {
        let Some(i) = assign.iter().position(|a| a.is_none()) else {
            return true;
        };
        for v in 0..m {
            let mut trial = assign.clone();
            trial[i] = Some(v);
            if propagate(&mut trial, eqs, m) && dfs(&mut trial, eqs, m) {
                *assign = trial;
                return true;
            }
        }
        false
    }
    let mut assign: Vec<Option<u64>> = vec![None; n];
    if !propagate(&mut assign, &eqs, m) || !dfs(&mut assign, &eqs, m) {
        return None;
    }
    let values = assign
        .iter()
        .enumerate()
        .map(|(i, a)| (wt.arrows[i], RootOfUnity::new(a.unwrap() as i64, m)))
        .collect();
    Some(Trivialization { values })
}

/// Cross-checks the normalizer-algebra maps against the finite Weyl
/// construction: Δ̃ must be independent of the chosen singleton normalizer,
/// and equality of Δ̃-images (resp. δ-images) must match equality of
/// canonical K-cosets (resp. W-arrows). Returns false on any mismatch.
pub fn cross_check_delta(
    tw: &TwistedGroupoid,
    s: &Subgroupoid,
) -> Result<bool, CheckError> {
    require_preconditions(tw, s)?;
    let w = build_weyl_groupoid(tw, s)?;
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let two = BigRational::from(BigInt::from(2));
    for kappa in &w.space {
        let u = kappa.unit;
        let lifts: Vec<TwistElement> = tw
            .gpd
            .elements()
            .filter(|&g| tw.gpd.source(g) == u)
            .flat_map(|g| {
                [
                    TwistElement::section(g),
                    TwistElement::new(
                        RootOfUnity::new(1, tw.cocycle.modulus().max(2)),
                        g,
                    ),
                ]
            })
            .collect();
        for &e in &lifts {
            // Two independent singleton normalizers positive at e.
            let n1 = BisectionFunction::singleton(
                e.base,
                Value::new(two.clone(), e.phase.conj()),
            );
            let n2 = BisectionFunction::singleton(
                e.base,
                Value::new(half.clone(), e.phase.conj()),
            );
            if !weyl_equivalent(tw, s, &n1, &n2, kappa, WeylMode::Twist)? {
                return Ok(false);
            }
            for &f in &lifts {
                let nf = BisectionFunction::singleton(
                    f.base,
                    Value::new(two.clone(), f.phase.conj()),
                );
                let same_twist_class =
                    weyl_equivalent(tw, s, &n1, &nf, kappa, WeylMode::Twist)?;
                let same_coset = coset_canonical(tw, s, e, kappa)?
                    == coset_canonical(tw, s, f, kappa)?;
                if same_twist_class != same_coset {
                    return Ok(false);
                }
                let same_groupoid_class =
                    weyl_equivalent(tw, s, &n1, &nf, kappa, WeylMode::Groupoid)?;
                let same_arrow = w.proj[e.base] == w.proj[f.base];
                if same_groupoid_class != same_arrow {
                    return Ok(false);
                }
            }
        }
    }
    // α_n agrees with the W-action on every arrow.
    for (c, x) in w.arrows() {
        let rep = w.coset_rep[c];
        let n = BisectionFunction::singleton(rep, Value::one());
        let through_alpha = normalizer::alpha_n(tw, s, &n, &w.space[x])?;
        if w.point_index(&through_alpha) != w.act(c, x) {
            return Ok(false);
        }
    }
    Ok(true)
}
