//! Builders for the built-in instance catalog: every group of order at most
//! 16 (all 42 isomorphism classes via standard presentations), group
//! bundles, action groupoids, and cocycle families over μ_M.

use std::collections::BTreeMap;

use crate::cocycle::{Cocycle, TwistedGroupoid};
use crate::gpd::{
    enumerate_wide_isotropy_subgroupoids, is_wide_normal, quotient, validate_groupoid, Groupoid,
    RawGroupoid, Subgroupoid,
};

/// Builds a single-unit groupoid (a group) from a multiplication law.
/// Element 0 must be the identity.
pub fn from_group_law(n: usize, mul: impl Fn(usize, usize) -> usize) -> Groupoid {
    let mut compose = Vec::with_capacity(n * n);
    let mut inverse = vec![usize::MAX; n];
    for a in 0..n {
        for b in 0..n {
            let ab = mul(a, b);
            compose.push((a, b, ab));
            if ab == 0 {
                inverse[a] = b;
            }
        }
    }
    let raw = RawGroupoid {
        n,
        unit_ids: vec![0],
        range: vec![0; n],
        source: vec![0; n],
        inverse,
        compose,
    };
    let (g, _) = validate_groupoid(&raw).expect("group law must satisfy the axioms");
    g
}

pub fn cyclic(n: u64) -> Groupoid {
    Groupoid::abelian_grid(&[n])
}

/// Dihedral group of order 2n: a^i b^ε with b a b⁻¹ = a⁻¹.
pub fn dihedral(n: usize) -> Groupoid {
    assert!(n >= 1);
    from_group_law(2 * n, |x, y| {
        let (i, e) = (x % n, x / n);
        let (j, d) = (y % n, y / n);
        let k = if e == 0 { (i + j) % n } else { (i + n - j) % n };
        k + n * ((e + d) % 2)
    })
}

pub fn symmetric_3() -> Groupoid {
    dihedral(3)
}

/// Dicyclic group of order 4n: a^i b^ε with a^{2n} = 1, b² = aⁿ,
/// b a b⁻¹ = a⁻¹. n = 2 gives the quaternion group Q₈.
pub fn dicyclic(n: usize) -> Groupoid {
    assert!(n >= 1);
    let nn = 2 * n;
    from_group_law(4 * n, move |x, y| {
        let (i, e) = (x % nn, x / nn);
        let (j, d) = (y % nn, y / nn);
        let k = if e == 0 {
            (i + j) % nn
        } else {
            (i + nn - j + n * d) % nn
        };
        k + nn * ((e + d) % 2)
    })
}

/// ℤ/n ⋊ ℤ/m with b a b⁻¹ = a^k; requires k^m ≡ 1 (mod n).
pub fn semidirect_cyclic(n: u64, m: u64, k: u64) -> Groupoid {
    let mut pow = 1u64;
    for _ in 0..m {
        pow = pow * k % n;
    }
    assert!(pow % n == 1 % n, "k must have order dividing m mod n");
    let (n, m, k) = (n as usize, m as usize, k as usize);
    from_group_law(n * m, move |x, y| {
        let (i, t) = (x / m, x % m);
        let (j, u) = (y / m, y % m);
        // φ^t(j) = j·k^t
        let mut f = j;
        for _ in 0..t {
            f = f * k % n;
        }
        ((i + f) % n) * m + (t + u) % m
    })
}

/// (∏ ℤ/dᵢ) ⋊ ℤ/m with the automorphism given by an integer matrix.
pub fn semidirect_grid(dims: &[u64], m: u64, auto: &[Vec<u64>]) -> Groupoid {
    let a = Groupoid::abelian_grid(dims);
    let na = a.n_elements();
    let dims = dims.to_vec();
    let apply = {
        let dims = dims.clone();
        let auto = auto.to_vec();
        move |e: usize, times: usize| -> usize {
            let mut coords = {
                let mut rest = e as u64;
                let mut out = vec![0u64; dims.len()];
                for i in (0..dims.len()).rev() {
                    out[i] = rest % dims[i];
                    rest /= dims[i];
                }
                out
            };
            for _ in 0..times {
                let mut next = vec![0u64; dims.len()];
                for (i, row) in auto.iter().enumerate() {
                    let mut acc = 0u64;
                    for (j, &c) in row.iter().enumerate() {
                        acc = (acc + c * coords[j]) % dims[i];
                    }
                    next[i] = acc;
                }
                coords = next;
            }
            let mut acc = 0u64;
            for (d, c) in dims.iter().zip(&coords) {
                acc = acc * d + c % d;
            }
            acc as usize
        }
    };
    for e in 0..na {
        assert_eq!(apply(e, m as usize), e, "automorphism order must divide m");
    }
    let m = m as usize;
    let a2 = a.clone();
    from_group_law(na * m, move |x, y| {
        let (i, t) = (x / m, x % m);
        let (j, u) = (y / m, y % m);
        a2.mul(i, apply(j, t)) * m + (t + u) % m
    })
}

/// The alternating group A₄ as even permutations of four points.
pub fn alternating_4() -> Groupoid {
    let mut perms: Vec<[usize; 4]> = Vec::new();
    let mut items = [0usize, 1, 2, 3];
    permute(&mut items, 0, &mut perms);
    perms.retain(|p| parity(p) == 0);
    perms.sort();
    from_group_law(12, move |x, y| {
        let (p, q) = (perms[x], perms[y]);
        let comp = [p[q[0]], p[q[1]], p[q[2]], p[q[3]]];
        perms.iter().position(|r| *r == comp).unwrap()
    })
}

fn permute(items: &mut [usize; 4], k: usize, out: &mut Vec<[usize; 4]>) {
    if k == 4 {
        out.push(*items);
        return;
    }
    for i in k..4 {
        items.swap(k, i);
        permute(items, k + 1, out);
        items.swap(k, i);
    }
}

fn parity(p: &[usize; 4]) -> usize {
    let mut inv = 0;
    for i in 0..4 {
        for j in i + 1..4 {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    inv % 2
}

/// Direct product of two single-unit groupoids.
pub fn direct_product(a: &Groupoid, b: &Groupoid) -> Groupoid {
    assert!(a.n_units() == 1 && b.n_units() == 1);
    let nb = b.n_elements();
    let (a, b) = (a.clone(), b.clone());
    from_group_law(a.n_elements() * nb, move |x, y| {
        a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb)
    })
}

/// The central product D₄ ∘ ℤ/4 of order 16 (the Pauli group), realized as
/// a quotient of D₄ × ℤ/4 by the diagonal central ℤ/2.
pub fn pauli_16() -> Groupoid {
    let prod = direct_product(&dihedral(4), &cyclic(4));
    // a² in D₄ has id 2; c² in ℤ/4 has id 2; the diagonal is {(0,0), (a²,c²)}.
    let diag = Subgroupoid::new(&prod, [0usize, 2 * 4 + 2]).unwrap();
    let (q, _) = quotient(&prod, &diag).unwrap();
    assert_eq!(q.n_elements(), 16);
    q
}

/// Disjoint union of groupoids (a group bundle when the parts are groups).
pub fn bundle(parts: &[Groupoid]) -> Groupoid {
    let total: usize = parts.iter().map(|g| g.n_elements()).sum();
    let units: usize = parts.iter().map(|g| g.n_units()).sum();
    // Units of every part first, then all remaining elements.
    let mut id_of: Vec<Vec<usize>> = Vec::new();
    let mut next_unit = 0usize;
    let mut next_rest = units;
    for g in parts {
        let mut ids = vec![0usize; g.n_elements()];
        for e in g.elements() {
            if g.is_unit(e) {
                ids[e] = next_unit;
                next_unit += 1;
            } else {
                ids[e] = next_rest;
                next_rest += 1;
            }
        }
        id_of.push(ids);
    }
    let mut range = vec![0usize; total];
    let mut source = vec![0usize; total];
    let mut inverse = vec![0usize; total];
    let mut compose = Vec::new();
    for (g, ids) in parts.iter().zip(&id_of) {
        for e in g.elements() {
            range[ids[e]] = ids[g.range(e)];
            source[ids[e]] = ids[g.source(e)];
            inverse[ids[e]] = ids[g.inverse(e)];
        }
        for (x, y) in g.composable_pairs() {
            compose.push((ids[x], ids[y], ids[g.mul(x, y)]));
        }
    }
    let raw = RawGroupoid {
        n: total,
        unit_ids: (0..units).collect(),
        range,
        source,
        inverse,
        compose,
    };
    validate_groupoid(&raw).expect("disjoint union of valid groupoids").0
}

/// The pair groupoid on n points: arrows (i ← j) with (i,j)·(j,k) = (i,k).
pub fn pair_groupoid(n: usize) -> Groupoid {
    let mut id = vec![vec![0usize; n]; n];
    let mut next = n;
    for (i, row) in id.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            if i == j {
                *entry = i;
            } else {
                *entry = next;
                next += 1;
            }
        }
    }
    let id = move |i: usize, j: usize| id[i][j];
    let mut compose = Vec::new();
    let mut range = vec![0usize; n * n];
    let mut source = vec![0usize; n * n];
    let mut inverse = vec![0usize; n * n];
    for i in 0..n {
        for j in 0..n {
            range[id(i, j)] = i;
            source[id(i, j)] = j;
            inverse[id(i, j)] = id(j, i);
            for k in 0..n {
                compose.push((id(i, j), id(j, k), id(i, k)));
            }
        }
    }
    let raw = RawGroupoid {
        n: n * n,
        unit_ids: (0..n).collect(),
        range,
        source,
        inverse,
        compose,
    };
    validate_groupoid(&raw).expect("pair groupoid").0
}

/// Transformation groupoid of a left action of a group on `points`,
/// with arrows (g, x): x → g▷x and (h, g▷x)(g, x) = (hg, x).
pub fn action_groupoid(
    group: &Groupoid,
    points: usize,
    act: impl Fn(usize, usize) -> usize,
) -> Groupoid {
    action_groupoid_with_map(group, points, act).0
}

/// As `action_groupoid`, also returning the projection arrow ↦ group element.
pub fn action_groupoid_with_map(
    group: &Groupoid,
    points: usize,
    act: impl Fn(usize, usize) -> usize,
) -> (Groupoid, Vec<usize>) {
    assert_eq!(group.n_units(), 1);
    let ng = group.n_elements();
    for x in 0..points {
        assert_eq!(act(0, x), x, "unit must act trivially");
    }
    for g in 0..ng {
        for h in 0..ng {
            for x in 0..points {
                assert_eq!(
                    act(group.mul(g, h), x),
                    act(g, act(h, x)),
                    "action law violated"
                );
            }
        }
    }
    let n = ng * points;
    // ids: (0, x) = x for x < points, then (g, x) = points + (g-1)·points + x
    let id = |g: usize, x: usize| {
        if g == 0 {
            x
        } else {
            points + (g - 1) * points + x
        }
    };
    let mut range = vec![0usize; n];
    let mut source = vec![0usize; n];
    let mut inverse = vec![0usize; n];
    let mut compose = Vec::new();
    for g in 0..ng {
        for x in 0..points {
            let e = id(g, x);
            range[e] = act(g, x);
            source[e] = x;
            inverse[e] = id(group.inverse(g), act(g, x));
        }
    }
    for g in 0..ng {
        for h in 0..ng {
            for x in 0..points {
                // (g, h▷x) · (h, x) = (gh, x)
                compose.push((id(g, act(h, x)), id(h, x), id(group.mul(g, h), x)));
            }
        }
    }
    let raw = RawGroupoid {
        n,
        unit_ids: (0..points).collect(),
        range,
        source,
        inverse,
        compose,
    };
    let (gpd, perm) = validate_groupoid(&raw).expect("action groupoid");
    let mut group_of = vec![0usize; n];
    for g in 0..ng {
        for x in 0..points {
            group_of[perm[id(g, x)]] = g;
        }
    }
    (gpd, group_of)
}

/// Pulls a group cocycle back along a projection map arrow ↦ group element;
/// the pullback of a cocycle along a homomorphism is again a cocycle.
pub fn pullback_cocycle(
    gpd: &Groupoid,
    map: &[usize],
    base: &Groupoid,
    beta: &Cocycle,
) -> Option<Cocycle> {
    let mut entries = Vec::new();
    for (a, b) in gpd.composable_pairs() {
        let e = beta.exponent(base, map[a], map[b]);
        if e != 0 {
            entries.push(((a, b), e));
        }
    }
    if entries.is_empty() {
        return None;
    }
    Some(
        Cocycle::from_table(gpd, beta.modulus(), entries)
            .expect("pullbacks of cocycles satisfy the identity"),
    )
}

/// All 42 isomorphism classes of groups of order ≤ 16, with stable names.
pub fn groups_up_to_16() -> Vec<(String, Groupoid)> {
    let mut out: Vec<(String, Groupoid)> = Vec::new();
    // Abelian groups: one per partition-style invariant factor list.
    let abelian: &[&[u64]] = &[
        &[1],
        &[2],
        &[3],
        &[4],
        &[2, 2],
        &[5],
        &[6],
        &[7],
        &[8],
        &[4, 2],
        &[2, 2, 2],
        &[9],
        &[3, 3],
        &[10],
        &[11],
        &[12],
        &[6, 2],
        &[13],
        &[14],
        &[15],
        &[16],
        &[8, 2],
        &[4, 4],
        &[4, 2, 2],
        &[2, 2, 2, 2],
    ];
    for dims in abelian {
        let name = format!(
            "ab{}",
            dims.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("x")
        );
        out.push((name, Groupoid::abelian_grid(dims)));
    }
    // Dihedral D₃ … D₈ (orders 6, 8, 10, 12, 14, 16).
    for n in 3..=8 {
        out.push((format!("d{n}"), dihedral(n)));
    }
    // Dicyclic: Q₈, Dic₃, Q₁₆.
    out.push(("q8".into(), dicyclic(2)));
    out.push(("dic3".into(), dicyclic(3)));
    out.push(("q16".into(), dicyclic(4)));
    // Remaining order-16 classes.
    out.push(("sd16".into(), semidirect_cyclic(8, 2, 3)));
    out.push(("m4_2".into(), semidirect_cyclic(8, 2, 5)));
    out.push(("c4sdc4".into(), semidirect_cyclic(4, 4, 3)));
    out.push((
        "c22sdc4".into(),
        semidirect_grid(&[2, 2], 4, &[vec![0, 1], vec![1, 0]]),
    ));
    out.push(("pauli16".into(), pauli_16()));
    out.push(("d4xc2".into(), direct_product(&dihedral(4), &cyclic(2))));
    out.push(("q8xc2".into(), direct_product(&dicyclic(2), &cyclic(2))));
    out.push(("a4".into(), alternating_4()));
    out
}

/// Coordinates of every element in the abelianization G/[G,G], as a grid
/// shape plus a coordinate vector per element. Used to pull bicharacter
/// cocycles back along the abelianization map.
fn abelianization_coords(g: &Groupoid) -> (Vec<u64>, Vec<Vec<u64>>) {
    use std::collections::BTreeSet;
    assert_eq!(g.n_units(), 1);
    let mut comms = BTreeSet::new();
    for a in g.elements() {
        for b in g.elements() {
            comms.insert(g.mul(g.mul(g.inverse(a), g.inverse(b)), g.mul(a, b)));
        }
    }
    let commutator_subgroup = crate::gpd::subgroupoid_closure(g, &comms);
    let sub = Subgroupoid::from_closed(g, commutator_subgroup.into_iter().collect());
    let (ab, proj) = quotient(g, &sub).expect("commutator subgroup is normal");
    let fiber: Vec<usize> = ab.elements().collect();
    let basis = crate::gpd::abelian_basis(&ab, &fiber);
    // coordinates by enumeration over the basis span
    let dims: Vec<u64> = basis.iter().map(|&(_, o)| o).collect();
    let mut coord_of: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
    let mut frontier = vec![(0usize, vec![0u64; basis.len()])];
    coord_of.insert(0, vec![0; basis.len()]);
    while let Some((e, coords)) = frontier.pop() {
        for (i, &(b, _)) in basis.iter().enumerate() {
            let eb = ab.mul(e, b);
            if let std::collections::btree_map::Entry::Vacant(e) = coord_of.entry(eb) {
                let mut c = coords.clone();
                c[i] = (c[i] + 1) % dims[i];
                e.insert(c.clone());
                frontier.push((eb, c));
            }
        }
    }
    let coords: Vec<Vec<u64>> = g
        .elements()
        .map(|e| coord_of[&proj[e]].clone())
        .collect();
    (dims, coords)
}

/// Bicharacter cocycle c(g,h) = ζ_M^{Σ bᵢⱼ·x(g)ᵢ·x(h)ⱼ} pulled back along
/// the abelianization. Returns None when the form collapses to the trivial
/// cocycle (e.g. perfect or low-rank abelianizations).
pub fn bicharacter_cocycle(
    g: &Groupoid,
    modulus: u64,
    picker: impl Fn(usize, usize) -> u64,
) -> Option<Cocycle> {
    let (dims, coords) = abelianization_coords(g);
    if dims.is_empty() {
        return None;
    }
    let r = dims.len();
    let mut b = vec![vec![0u64; r]; r];
    for (i, row) in b.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            // Only coefficients killed by both periods are well defined.
            let step = modulus / num::integer::gcd(modulus, dims[i]);
            let step = num::integer::lcm(
                step,
                modulus / num::integer::gcd(modulus, dims[j]),
            );
            *entry = picker(i, j) % (modulus / step).max(1) * step % modulus;
        }
    }
    if b.iter().all(|row| row.iter().all(|&x| x == 0)) {
        return None;
    }
    let mut entries = Vec::new();
    for (x, y) in g.composable_pairs() {
        let mut acc = 0u64;
        for i in 0..r {
            for j in 0..r {
                acc = (acc + b[i][j] * (coords[x][i] % modulus) % modulus * (coords[y][j] % modulus))
                    % modulus;
            }
        }
        if acc != 0 {
            entries.push(((x, y), acc));
        }
    }
    if entries.is_empty() {
        return None;
    }
    Some(Cocycle::from_table(g, modulus, entries).expect("bicharacters satisfy the identity"))
}

/// Coboundary cocycle ∂d for a phase assignment d (with d = 1 on units):
/// c(g,h) = d(g)·d(h)·d(gh)⁻¹, always a valid normalized cocycle.
pub fn coboundary_cocycle(
    g: &Groupoid,
    modulus: u64,
    d: impl Fn(usize) -> u64,
) -> Option<Cocycle> {
    let d_of = |e: usize| if g.is_unit(e) { 0 } else { d(e) % modulus };
    let mut entries = Vec::new();
    for (x, y) in g.composable_pairs() {
        let e = (d_of(x) + d_of(y) + modulus - d_of(g.mul(x, y)) % modulus) % modulus;
        if e != 0 {
            entries.push(((x, y), e));
        }
    }
    if entries.is_empty() {
        return None;
    }
    Some(Cocycle::from_table(g, modulus, entries).expect("coboundaries satisfy the identity"))
}

/// A named instance of the catalog: groupoid, cocycle, and a label.
pub struct CatalogInstance {
    pub name: String,
    pub twisted: TwistedGroupoid,
}

/// The built-in catalog: all groups of order ≤ 16 with trivial, bicharacter
/// and coboundary-twisted cocycles over μ_M for M ∈ {1, 2, 4}, plus group
/// bundles and action groupoids up to 24 elements.
pub fn builtin_catalog() -> Vec<CatalogInstance> {
    let mut out = Vec::new();
    let mut push = |name: String, g: &Groupoid, c: Cocycle| {
        out.push(CatalogInstance {
            name,
            twisted: TwistedGroupoid::new(g.clone(), c),
        });
    };

    for (name, g) in groups_up_to_16() {
        push(format!("{name}/c1"), &g, Cocycle::trivial());
        for m in [2u64, 4] {
            if let Some(c) = bicharacter_cocycle(&g, m, |i, j| u64::from(j == i + 1)) {
                push(format!("{name}/bichar{m}"), &g, c);
            }
            if let Some(c) = bicharacter_cocycle(&g, m, |i, j| (i + 2 * j + 1) as u64) {
                push(format!("{name}/bichar{m}b"), &g, c);
            }
            if let Some(c) = coboundary_cocycle(&g, m, |e| (7 * e + 3) as u64) {
                push(format!("{name}/cobound{m}"), &g, c);
            }
            if let Some(c) = coboundary_cocycle(&g, m, |e| (e * e + 5 * e) as u64) {
                push(format!("{name}/cobound{m}b"), &g, c);
            }
        }
    }

    // Group bundles (≤ 24 elements).
    let bundles: Vec<(String, Groupoid)> = vec![
        ("bundle_z4_z2".into(), bundle(&[cyclic(4), cyclic(2)])),
        ("bundle_z3_z3".into(), bundle(&[cyclic(3), cyclic(3)])),
        (
            "bundle_s3_z4_v4".into(),
            bundle(&[symmetric_3(), cyclic(4), Groupoid::abelian_grid(&[2, 2])]),
        ),
        ("bundle_q8_z8".into(), bundle(&[dicyclic(2), cyclic(8)])),
        ("bundle_d4_d4".into(), bundle(&[dihedral(4), dihedral(4)])),
    ];
    for (name, g) in bundles {
        push(format!("{name}/c1"), &g, Cocycle::trivial());
        for m in [2u64, 4] {
            if let Some(c) = coboundary_cocycle(&g, m, |e| (5 * e + 1) as u64) {
                push(format!("{name}/cobound{m}"), &g, c);
            }
        }
    }

    // Action groupoids (≤ 24 elements), each with the projection onto its
    // acting group so that group cocycles can be pulled back.
    let mut actions: Vec<(String, Groupoid, Groupoid, Vec<usize>)> = Vec::new();
    let mut add_action =
        |name: &str, base: Groupoid, points: usize, act: &dyn Fn(usize, usize) -> usize| {
            let (g, map) = action_groupoid_with_map(&base, points, act);
            actions.push((name.to_string(), g, base, map));
        };
    add_action("act_z2_flip2", cyclic(2), 2, &|g, x| {
        if g == 1 {
            1 - x
        } else {
            x
        }
    });
    // one fixed point and one swapped pair
    add_action("act_z2_fix3", cyclic(2), 3, &|g, x| {
        if g == 1 && x > 0 {
            3 - x
        } else {
            x
        }
    });
    add_action("act_z4_rot4", cyclic(4), 4, &|g, x| (x + g) % 4);
    // ℤ/4 acting through its quotient ℤ/2: isotropy ℤ/2 everywhere
    add_action("act_z4_halfturn2", cyclic(4), 2, &|g, x| (x + g) % 2);
    // dihedral(3) encoding: g = i + 3e acts as x ↦ εx + i
    add_action("act_s3_perm3", symmetric_3(), 3, &|g, x| {
        let (i, e) = (g % 3, g / 3);
        if e == 0 {
            (x + i) % 3
        } else {
            (3 + i - x) % 3
        }
    });
    add_action("act_v4_pairs", Groupoid::abelian_grid(&[2, 2]), 4, &|g, x| {
        let (a, b) = (g / 2, g % 2);
        let (x1, x2) = (x / 2, x % 2);
        ((x1 + a) % 2) * 2 + (x2 + b) % 2
    });
    add_action("act_z6_rot3", cyclic(6), 3, &|g, x| (x + g) % 3);
    for (name, g, base, map) in actions {
        push(format!("{name}/c1"), &g, Cocycle::trivial());
        for m in [2u64, 4] {
            let beta = bicharacter_cocycle(&base, m, |i, j| u64::from(j <= i));
            if let Some(c) = beta.and_then(|b| pullback_cocycle(&g, &map, &base, &b)) {
                push(format!("{name}/bichar{m}"), &g, c);
            }
            if let Some(c) = coboundary_cocycle(&g, m, |e| (3 * e + 2) as u64) {
                push(format!("{name}/cobound{m}"), &g, c);
            }
        }
    }

    out
}

/// All wide normal subgroupoids with abelian restricted twist, the pairing
/// partner for every catalog instance.
pub fn abelian_twist_subgroupoids(tw: &TwistedGroupoid) -> Vec<Subgroupoid> {
    enumerate_wide_isotropy_subgroupoids(&tw.gpd)
        .into_iter()
        .filter(|s| {
            let rep = is_wide_normal(&tw.gpd, s);
            rep.wide && rep.normal && tw.is_abelian_twist(s)
        })
        .collect()
}
