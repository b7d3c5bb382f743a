//! Finite groupoids as validated lookup tables.
//!
//! Elements are dense integer ids and the units always occupy a prefix of
//! the id range; validation renumbers raw tables into that normal form.
//! Composition follows the convention that `g·h` is defined exactly when
//! `source(g) = range(h)`; this is asserted during validation and assumed
//! everywhere else.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::GroupoidError;

/// A finite groupoid over dense element ids `0..n`, units first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Groupoid {
    n: usize,
    units: usize,
    range: Vec<usize>,
    source: Vec<usize>,
    inverse: Vec<usize>,
    rule: ComposeRule,
}

/// Backing store for the partial composition map.
///
/// Small hand-built instances use an explicit table. Large abelian groups
/// (the ℤ² reduction shadows) compose coordinatewise, which keeps memory
/// linear in the element count instead of quadratic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComposeRule {
    Table(BTreeMap<(usize, usize), usize>),
    Grid(Vec<u64>),
}

impl Groupoid {
    pub fn n_elements(&self) -> usize {
        self.n
    }

    pub fn n_units(&self) -> usize {
        self.units
    }

    pub fn is_unit(&self, e: usize) -> bool {
        e < self.units
    }

    pub fn unit_ids(&self) -> impl Iterator<Item = usize> {
        0..self.units
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> {
        0..self.n
    }

    pub fn range(&self, e: usize) -> usize {
        self.range[e]
    }

    pub fn source(&self, e: usize) -> usize {
        self.source[e]
    }

    pub fn inverse(&self, e: usize) -> usize {
        self.inverse[e]
    }

    pub fn rule(&self) -> &ComposeRule {
        &self.rule
    }

    pub fn composable(&self, g: usize, h: usize) -> bool {
        self.source[g] == self.range[h]
    }

    pub fn compose(&self, g: usize, h: usize) -> Option<usize> {
        if !self.composable(g, h) {
            return None;
        }
        Some(match &self.rule {
            ComposeRule::Table(t) => *t
                .get(&(g, h))
                .expect("validated groupoid is missing a composable pair"),
            ComposeRule::Grid(dims) => grid_add(dims, g, h),
        })
    }

    /// Composition that panics on non-composable input.
    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.compose(g, h)
            .unwrap_or_else(|| panic!("elements {g} and {h} are not composable"))
    }

    /// `g · s · g⁻¹` for `s` in the isotropy at `source(g)`.
    pub fn conj(&self, g: usize, s: usize) -> usize {
        self.mul(self.mul(g, s), self.inverse[g])
    }

    pub fn is_isotropy(&self, e: usize) -> bool {
        self.range[e] == self.source[e]
    }

    /// Number of composable pairs (quadratic for grids; callers guard size).
    pub fn n_composable_pairs(&self) -> usize {
        match &self.rule {
            ComposeRule::Table(t) => t.len(),
            ComposeRule::Grid(_) => self.n * self.n,
        }
    }

    pub fn composable_pairs(&self) -> Box<dyn Iterator<Item = (usize, usize)> + '_> {
        match &self.rule {
            ComposeRule::Table(t) => Box::new(t.keys().copied()),
            ComposeRule::Grid(_) => {
                Box::new((0..self.n).flat_map(move |g| (0..self.n).map(move |h| (g, h))))
            }
        }
    }

    /// The full isotropy fiber G(u).
    pub fn isotropy_fiber(&self, u: usize) -> Vec<usize> {
        self.elements()
            .filter(|&e| self.range[e] == u && self.source[e] == u)
            .collect()
    }

    /// Order of an isotropy element in its fiber group.
    pub fn elem_order(&self, e: usize) -> u64 {
        assert!(self.is_isotropy(e));
        let mut acc = e;
        let mut k = 1u64;
        while !self.is_unit(acc) {
            acc = self.mul(acc, e);
            k += 1;
        }
        k
    }

    /// Single-unit abelian group ∏ ℤ/dᵢ with mixed-radix element ids.
    pub fn abelian_grid(dims: &[u64]) -> Groupoid {
        assert!(!dims.is_empty() && dims.iter().all(|&d| d >= 1));
        let n: u64 = dims.iter().product();
        let n = usize::try_from(n).expect("grid too large");
        let dims = dims.to_vec();
        let inverse = (0..n).map(|e| grid_neg(&dims, e)).collect();
        Groupoid {
            n,
            units: 1,
            range: vec![0; n],
            source: vec![0; n],
            inverse,
            rule: ComposeRule::Grid(dims),
        }
    }

    /// Coordinates of a grid element; panics for table-backed groupoids.
    pub fn grid_coords(&self, e: usize) -> Vec<u64> {
        match &self.rule {
            ComposeRule::Grid(dims) => grid_decode(dims, e),
            ComposeRule::Table(_) => panic!("not a grid groupoid"),
        }
    }

    pub fn grid_elem(&self, coords: &[u64]) -> usize {
        match &self.rule {
            ComposeRule::Grid(dims) => grid_encode(dims, coords),
            ComposeRule::Table(_) => panic!("not a grid groupoid"),
        }
    }
}

fn grid_decode(dims: &[u64], e: usize) -> Vec<u64> {
    let mut rest = e as u64;
    let mut out = vec![0u64; dims.len()];
    for i in (0..dims.len()).rev() {
        out[i] = rest % dims[i];
        rest /= dims[i];
    }
    out
}

fn grid_encode(dims: &[u64], coords: &[u64]) -> usize {
    let mut acc = 0u64;
    for (d, c) in dims.iter().zip(coords) {
        acc = acc * d + (c % d);
    }
    acc as usize
}

fn grid_add(dims: &[u64], g: usize, h: usize) -> usize {
    let (a, b) = (grid_decode(dims, g), grid_decode(dims, h));
    let sum: Vec<u64> = dims
        .iter()
        .zip(a.iter().zip(&b))
        .map(|(d, (x, y))| (x + y) % d)
        .collect();
    grid_encode(dims, &sum)
}

fn grid_neg(dims: &[u64], g: usize) -> usize {
    let a = grid_decode(dims, g);
    let neg: Vec<u64> = dims.iter().zip(&a).map(|(d, x)| (d - x) % d).collect();
    grid_encode(dims, &neg)
}

/// Unvalidated groupoid tables as they come off disk or a constructor.
#[derive(Clone, Debug, Default)]
pub struct RawGroupoid {
    pub n: usize,
    pub unit_ids: Vec<usize>,
    pub range: Vec<usize>,
    pub source: Vec<usize>,
    pub inverse: Vec<usize>,
    pub compose: Vec<(usize, usize, usize)>,
}

/// Checks every groupoid axiom on raw tables and renumbers so that units
/// form a prefix. Returns the groupoid and the id permutation (old → new).
pub fn validate_groupoid(raw: &RawGroupoid) -> Result<(Groupoid, Vec<usize>), GroupoidError> {
    let n = raw.n;
    let bad = |m: String| Err(GroupoidError::DomainMismatch(m));
    if raw.range.len() != n || raw.source.len() != n || raw.inverse.len() != n {
        return bad(format!("tables must all have length {n}"));
    }
    let unit_set: BTreeSet<usize> = raw.unit_ids.iter().copied().collect();
    if unit_set.len() != raw.unit_ids.len() {
        return bad("duplicate unit ids".into());
    }
    for &u in &unit_set {
        if u >= n {
            return bad(format!("unit id {u} out of range"));
        }
    }
    for e in 0..n {
        if raw.range[e] >= n || raw.source[e] >= n || raw.inverse[e] >= n {
            return bad(format!("entry out of range at element {e}"));
        }
        if !unit_set.contains(&raw.range[e]) || !unit_set.contains(&raw.source[e]) {
            return bad(format!("range/source of {e} is not a unit"));
        }
    }

    // Renumber: units first (ascending), then the rest (ascending).
    let mut perm = vec![0usize; n];
    let mut next = 0usize;
    for &u in &unit_set {
        perm[u] = next;
        next += 1;
    }
    for e in 0..n {
        if !unit_set.contains(&e) {
            perm[e] = next;
            next += 1;
        }
    }
    let units = unit_set.len();
    let mut range = vec![0usize; n];
    let mut source = vec![0usize; n];
    let mut inverse = vec![0usize; n];
    for e in 0..n {
        range[perm[e]] = perm[raw.range[e]];
        source[perm[e]] = perm[raw.source[e]];
        inverse[perm[e]] = perm[raw.inverse[e]];
    }
    let mut table = BTreeMap::new();
    for &(g, h, gh) in &raw.compose {
        if g >= n || h >= n || gh >= n {
            return bad(format!("compose entry ({g},{h}) out of range"));
        }
        if table.insert((perm[g], perm[h]), perm[gh]).is_some() {
            return bad(format!("duplicate compose entry for ({g},{h})"));
        }
    }

    // compose is defined exactly on pairs with source(g) = range(h)
    for (&(g, h), &gh) in &table {
        if source[g] != range[h] {
            return bad(format!("compose defined on non-composable pair ({g},{h})"));
        }
        if range[gh] != range[g] || source[gh] != source[h] {
            return bad(format!("range/source of product ({g},{h}) inconsistent"));
        }
    }
    for g in 0..n {
        for h in 0..n {
            if source[g] == range[h] && !table.contains_key(&(g, h)) {
                return bad(format!("missing compose entry for composable ({g},{h})"));
            }
        }
    }

    let gpd = Groupoid {
        n,
        units,
        range,
        source,
        inverse,
        rule: ComposeRule::Table(table),
    };

    // Units are two-sided identities.
    for u in 0..units {
        if gpd.range(u) != u || gpd.source(u) != u {
            return Err(GroupoidError::BadUnit(u));
        }
    }
    for e in 0..n {
        if gpd.mul(gpd.range(e), e) != e || gpd.mul(e, gpd.source(e)) != e {
            return Err(GroupoidError::BadUnit(e));
        }
    }
    // Inversion is an involution exchanging range and source.
    for e in 0..n {
        let i = gpd.inverse(e);
        if gpd.inverse(i) != e || gpd.range(i) != gpd.source(e) || gpd.source(i) != gpd.range(e) {
            return Err(GroupoidError::BadInverse(e));
        }
        if gpd.mul(e, i) != gpd.range(e) || gpd.mul(i, e) != gpd.source(e) {
            return Err(GroupoidError::BadInverse(e));
        }
    }
    // Associativity on all composable triples.
    for (g, h) in gpd.composable_pairs().collect::<Vec<_>>() {
        let gh = gpd.mul(g, h);
        for k in 0..n {
            if gpd.composable(h, k) {
                let hk = gpd.mul(h, k);
                if gpd.mul(gh, k) != gpd.mul(g, hk) {
                    return Err(GroupoidError::NonAssociative(g, h, k));
                }
            }
        }
    }

    Ok((gpd, perm))
}

/// A subset of a groupoid's elements closed under composition and inversion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroupoid {
    members: Vec<usize>,
    mask: Vec<bool>,
}

impl Subgroupoid {
    /// Validates closure under composition and inversion.
    pub fn new<I: IntoIterator<Item = usize>>(
        gpd: &Groupoid,
        iter: I,
    ) -> Result<Subgroupoid, GroupoidError> {
        let set: BTreeSet<usize> = iter.into_iter().collect();
        for &e in &set {
            if e >= gpd.n_elements() {
                return Err(GroupoidError::DomainMismatch(format!(
                    "member {e} out of range"
                )));
            }
            if !set.contains(&gpd.inverse(e)) {
                return Err(GroupoidError::NotClosed(format!(
                    "inverse of {e} is missing"
                )));
            }
        }
        for &g in &set {
            for &h in &set {
                if gpd.composable(g, h) && !set.contains(&gpd.mul(g, h)) {
                    return Err(GroupoidError::NotClosed(format!(
                        "product of ({g},{h}) is missing"
                    )));
                }
            }
        }
        let mut mask = vec![false; gpd.n_elements()];
        for &e in &set {
            mask[e] = true;
        }
        Ok(Subgroupoid {
            members: set.into_iter().collect(),
            mask,
        })
    }

    /// Closure-free constructor for sets already known to be closed.
    pub(crate) fn from_closed(gpd: &Groupoid, members: Vec<usize>) -> Subgroupoid {
        let mut mask = vec![false; gpd.n_elements()];
        for &e in &members {
            mask[e] = true;
        }
        Subgroupoid { members, mask }
    }

    pub fn contains(&self, e: usize) -> bool {
        self.mask[e]
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The isotropy fiber S(u).
    pub fn fiber(&self, gpd: &Groupoid, u: usize) -> Vec<usize> {
        self.members
            .iter()
            .copied()
            .filter(|&e| gpd.range(e) == u && gpd.source(e) == u)
            .collect()
    }
}

/// The isotropy bundle {g : range(g) = source(g)}, always a subgroupoid.
pub fn isotropy(gpd: &Groupoid) -> Subgroupoid {
    let members: Vec<usize> = gpd.elements().filter(|&e| gpd.is_isotropy(e)).collect();
    Subgroupoid::from_closed(gpd, members)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WideNormalReport {
    pub wide: bool,
    pub in_isotropy: bool,
    pub normal: bool,
}

/// Wideness, isotropy containment and normality of a subgroupoid.
///
/// Normality uses the finite form: S ⊆ Iso(G) and g·S(s(g))·g⁻¹ = S(r(g))
/// for every g, which is equivalent to Sg = gS.
pub fn is_wide_normal(gpd: &Groupoid, s: &Subgroupoid) -> WideNormalReport {
    let wide = gpd.unit_ids().all(|u| s.contains(u));
    let in_isotropy = s.members().iter().all(|&e| gpd.is_isotropy(e));
    let normal = in_isotropy && {
        match gpd.rule() {
            // Grid groupoids are abelian groups: conjugation is trivial.
            ComposeRule::Grid(_) => true,
            ComposeRule::Table(_) => gpd.elements().all(|g| {
                s.members()
                    .iter()
                    .filter(|&&e| gpd.range(e) == gpd.source(g))
                    .all(|&e| s.contains(gpd.conj(g, e)))
            }),
        }
    };
    WideNormalReport {
        wide,
        in_isotropy,
        normal,
    }
}

/// Iso(G) = G⁽⁰⁾.
pub fn is_principal(gpd: &Groupoid) -> bool {
    gpd.elements().all(|e| !gpd.is_isotropy(e) || gpd.is_unit(e))
}

/// In the finite discrete case the interior of the isotropy is the isotropy
/// itself, so effectiveness coincides with principality.
pub fn is_effective_finite(gpd: &Groupoid) -> bool {
    is_principal(gpd)
}

/// Quotient by a wide normal subgroupoid. Elements of the quotient are the
/// cosets gS with the minimal member id as canonical representative; returns
/// the quotient together with the projection map.
pub fn quotient(
    gpd: &Groupoid,
    s: &Subgroupoid,
) -> Result<(Groupoid, Vec<usize>), GroupoidError> {
    let report = is_wide_normal(gpd, s);
    if !report.wide || !report.normal {
        return Err(GroupoidError::NotNormal(
            "quotient needs a wide normal subgroupoid".into(),
        ));
    }
    let n = gpd.n_elements();
    let mut coset_of = vec![usize::MAX; n];
    let mut reps: Vec<usize> = Vec::new();
    for g in 0..n {
        if coset_of[g] != usize::MAX {
            continue;
        }
        let id = reps.len();
        reps.push(g);
        // gS = { g·σ : σ ∈ S(s(g)) }; g is the minimal id in its coset
        // because ids are scanned in increasing order.
        coset_of[g] = id;
        for &sig in s.members() {
            if gpd.range(sig) == gpd.source(g) {
                coset_of[gpd.mul(g, sig)] = id;
            }
        }
    }
    let m = reps.len();
    // Units of G are scanned first and each unit coset S(u) has u as its
    // representative, so quotient units again form a prefix.
    let units = gpd.n_units();
    debug_assert!(reps.iter().take(units).all(|&r| gpd.is_unit(r)));
    let range: Vec<usize> = reps.iter().map(|&r| coset_of[gpd.range(r)]).collect();
    let source: Vec<usize> = reps.iter().map(|&r| coset_of[gpd.source(r)]).collect();
    let inverse: Vec<usize> = reps.iter().map(|&r| coset_of[gpd.inverse(r)]).collect();
    let mut table = BTreeMap::new();
    for a in 0..m {
        for b in 0..m {
            // Every member of a coset has the same range and source, and
            // unit cosets carry their unit's id, so matching quotient
            // source/range makes the representatives composable.
            if source[a] == range[b] {
                debug_assert!(gpd.composable(reps[a], reps[b]));
                table.insert((a, b), coset_of[gpd.mul(reps[a], reps[b])]);
            }
        }
    }
    let q = Groupoid {
        n: m,
        units,
        range,
        source,
        inverse,
        rule: ComposeRule::Table(table),
    };
    Ok((q, coset_of))
}

/// Closure of a generating set inside the isotropy bundle.
pub fn subgroupoid_closure(gpd: &Groupoid, gens: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut set: BTreeSet<usize> = gpd.unit_ids().collect();
    let mut stack: Vec<usize> = Vec::new();
    for &g in gens {
        if set.insert(g) {
            stack.push(g);
        }
    }
    while let Some(g) = stack.pop() {
        let gi = gpd.inverse(g);
        if set.insert(gi) {
            stack.push(gi);
        }
        let snapshot: Vec<usize> = set.iter().copied().collect();
        for h in snapshot {
            if gpd.composable(g, h) {
                let gh = gpd.mul(g, h);
                if set.insert(gh) {
                    stack.push(gh);
                }
            }
            if gpd.composable(h, g) {
                let hg = gpd.mul(h, g);
                if set.insert(hg) {
                    stack.push(hg);
                }
            }
        }
    }
    set
}

/// All wide subgroupoids of the isotropy bundle, via closure BFS.
pub fn enumerate_wide_isotropy_subgroupoids(gpd: &Groupoid) -> Vec<Subgroupoid> {
    let iso: Vec<usize> = gpd
        .elements()
        .filter(|&e| gpd.is_isotropy(e) && !gpd.is_unit(e))
        .collect();
    let start: BTreeSet<usize> = gpd.unit_ids().collect();
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut queue: Vec<BTreeSet<usize>> = vec![start.clone()];
    found.insert(start.into_iter().collect());
    while let Some(current) = queue.pop() {
        for &x in &iso {
            if current.contains(&x) {
                continue;
            }
            let mut gens = current.clone();
            gens.insert(x);
            let closed = subgroupoid_closure(gpd, &gens);
            let key: Vec<usize> = closed.iter().copied().collect();
            if found.insert(key) {
                queue.push(closed);
            }
        }
    }
    found
        .into_iter()
        .map(|members| Subgroupoid::from_closed(gpd, members))
        .collect()
}

/// A small generating set of a group given as an isotropy fiber, by greedy
/// span growth with constant-time membership. Linear in the fiber size.
pub fn generating_set(gpd: &Groupoid, fiber: &[usize]) -> Vec<usize> {
    assert!(!fiber.is_empty());
    let mut gens: Vec<usize> = Vec::new();
    let mut in_span = vec![false; gpd.n_elements()];
    let mut span: Vec<usize> = vec![gpd.range(fiber[0])];
    in_span[span[0]] = true;
    for &e in fiber {
        if in_span[e] {
            continue;
        }
        gens.push(e);
        // close the span under products with the new generator (both sides)
        let mut frontier: Vec<usize> = span.clone();
        while let Some(x) = frontier.pop() {
            for y in [gpd.mul(x, e), gpd.mul(e, x), gpd.mul(gpd.inverse(e), x)] {
                if !in_span[y] {
                    in_span[y] = true;
                    span.push(y);
                    frontier.push(y);
                }
            }
        }
    }
    gens
}

/// Basis (independent generators with their orders) of a finite abelian
/// group given as an isotropy fiber. Brute-force order analysis; intended
/// for fibers of at most a few thousand elements.
pub fn abelian_basis(gpd: &Groupoid, fiber: &[usize]) -> Vec<(usize, u64)> {
    assert!(!fiber.is_empty());
    let unit = gpd.range(fiber[0]);
    if fiber.len() == 1 {
        return Vec::new();
    }
    let mut primes: Vec<u64> = Vec::new();
    let mut n = fiber.len() as u64;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            primes.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        primes.push(n);
    }
    let mut basis = Vec::new();
    for p in primes {
        let component: Vec<usize> = fiber
            .iter()
            .copied()
            .filter(|&e| {
                let mut o = gpd.elem_order(e);
                while o.is_multiple_of(p) {
                    o /= p;
                }
                o == 1
            })
            .collect();
        basis.extend(p_group_basis(gpd, unit, &component));
    }
    basis
}

fn p_group_basis(gpd: &Groupoid, unit: usize, elems: &[usize]) -> Vec<(usize, u64)> {
    if elems.len() <= 1 {
        return Vec::new();
    }
    let g = *elems
        .iter()
        .max_by_key(|&&e| (gpd.elem_order(e), std::cmp::Reverse(e)))
        .unwrap();
    let g_span = cyclic_span(gpd, unit, g);
    // A maximal subgroup meeting ⟨g⟩ trivially complements ⟨g⟩; grow one
    // greedily until no single element can be added.
    let mut comp: BTreeSet<usize> = BTreeSet::from([unit]);
    loop {
        let mut grew = false;
        for &x in elems {
            if comp.contains(&x) {
                continue;
            }
            let mut gens = comp.clone();
            gens.insert(x);
            let k = fiber_closure(gpd, unit, &gens);
            if k.iter().filter(|e| g_span.contains(e)).count() == 1 {
                comp = k;
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }
    assert_eq!(
        comp.len() * g_span.len(),
        elems.len(),
        "complement construction must split the p-group"
    );
    let comp_elems: Vec<usize> = comp.into_iter().collect();
    let mut out = vec![(g, gpd.elem_order(g))];
    out.extend(p_group_basis(gpd, unit, &comp_elems));
    out
}

fn cyclic_span(gpd: &Groupoid, unit: usize, g: usize) -> BTreeSet<usize> {
    let mut set = BTreeSet::from([unit]);
    let mut acc = g;
    while !set.contains(&acc) {
        set.insert(acc);
        acc = gpd.mul(acc, g);
    }
    set
}

/// Closure of generators inside one isotropy fiber.
fn fiber_closure(gpd: &Groupoid, unit: usize, gens: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut set = BTreeSet::from([unit]);
    let mut stack: Vec<usize> = Vec::new();
    for &g in gens {
        if set.insert(g) {
            stack.push(g);
        }
    }
    while let Some(g) = stack.pop() {
        let gi = gpd.inverse(g);
        if set.insert(gi) {
            stack.push(gi);
        }
        for h in set.iter().copied().collect::<Vec<_>>() {
            let gh = gpd.mul(g, h);
            if set.insert(gh) {
                stack.push(gh);
            }
        }
    }
    set
}
