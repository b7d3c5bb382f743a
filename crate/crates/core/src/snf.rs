//! Integer matrix normal forms: Smith normal form over arbitrary-precision
//! integers, a 2×2 column-style Hermite form, and a solver for linear
//! systems over the circle group ℚ/ℤ built on the Smith decomposition.
//!
//! Transform matrices of a Smith reduction can grow far beyond the input
//! magnitudes, so all Smith arithmetic is over `BigInt`.

use num::bigint::Sign;
use num::{BigInt, BigRational, Integer, One, Signed, Zero};

pub type Mat = Vec<Vec<BigInt>>;

pub fn mat_from_i64(rows: &[Vec<i64>]) -> Mat {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let (n, k) = (a.len(), b.len());
    let m = if k == 0 { 0 } else { b[0].len() };
    let mut out = vec![vec![BigInt::zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                let prod = &a[i][l] * &b[l][j];
                out[i][j] += prod;
            }
        }
    }
    out
}

pub fn det2(m: &Mat) -> BigInt {
    &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
}

/// Result of `smith_normal_form`: unimodular `p`, `q` with `p · m · q = d`
/// and `d` diagonal with the divisibility chain d₁ | d₂ | ….
#[derive(Debug, Clone)]
pub struct Snf {
    pub d: Mat,
    pub p: Mat,
    pub q: Mat,
}

pub fn smith_normal_form(input: &Mat) -> Snf {
    let rows = input.len();
    let cols = if rows == 0 { 0 } else { input[0].len() };
    let mut d = input.clone();
    let mut p = identity(rows);
    let mut q = identity(cols);

    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = pivot(&d, t) else { break };
        swap_rows(&mut d, &mut p, t, pi);
        swap_cols(&mut d, &mut q, t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if !d[i][t].is_zero() {
                    let f = d[i][t].div_floor(&d[t][t]);
                    add_row(&mut d, &mut p, i, t, &-f);
                    if !d[i][t].is_zero() {
                        swap_rows(&mut d, &mut p, t, i);
                        clean = false;
                    }
                }
            }
            for j in t + 1..cols {
                if !d[t][j].is_zero() {
                    let f = d[t][j].div_floor(&d[t][t]);
                    add_col(&mut d, &mut q, j, t, &-f);
                    if !d[t][j].is_zero() {
                        swap_cols(&mut d, &mut q, t, j);
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
        // Divisibility: fold any row the pivot misses back into row t.
        let non_div = (t + 1..rows)
            .find(|&i| (t + 1..cols).any(|j| !(&d[i][j] % &d[t][t]).is_zero()));
        if let Some(i) = non_div {
            add_row(&mut d, &mut p, t, i, &BigInt::one());
            continue;
        }
        if d[t][t].sign() == Sign::Minus {
            negate_row(&mut d, &mut p, t);
        }
        t += 1;
    }
    Snf { d, p, q }
}

fn pivot(d: &Mat, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.len() {
        for j in t..d[i].len() {
            if !d[i][j].is_zero() {
                match best {
                    Some((bi, bj)) if d[bi][bj].abs() <= d[i][j].abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
    }
    best
}

fn swap_rows(d: &mut Mat, p: &mut Mat, a: usize, b: usize) {
    if a != b {
        d.swap(a, b);
        p.swap(a, b);
    }
}

fn swap_cols(d: &mut Mat, q: &mut Mat, a: usize, b: usize) {
    if a == b {
        return;
    }
    for row in d.iter_mut() {
        row.swap(a, b);
    }
    for row in q.iter_mut() {
        row.swap(a, b);
    }
}

/// row_i += f · row_j (and mirror on p).
fn add_row(d: &mut Mat, p: &mut Mat, i: usize, j: usize, f: &BigInt) {
    for c in 0..d[i].len() {
        let v = f * &d[j][c];
        d[i][c] += v;
    }
    for c in 0..p[i].len() {
        let v = f * &p[j][c];
        p[i][c] += v;
    }
}

/// col_i += f · col_j (and mirror on q).
fn add_col(d: &mut Mat, q: &mut Mat, i: usize, j: usize, f: &BigInt) {
    for row in d.iter_mut() {
        let v = f * &row[j];
        row[i] += v;
    }
    for row in q.iter_mut() {
        let v = f * &row[j];
        row[i] += v;
    }
}

fn negate_row(d: &mut Mat, p: &mut Mat, i: usize) {
    for c in d[i].iter_mut() {
        *c = -&*c;
    }
    for c in p[i].iter_mut() {
        *c = -&*c;
    }
}

/// Column-style Hermite form of a 2×2 integer matrix: returns `(h, u)` with
/// `m · u = h`, `u` unimodular, and `h = [[k, m'], [0, n]]` upper triangular
/// with k, n ≥ 0 and 0 ≤ m' < k whenever k, n > 0.
pub fn hermite_2x2(m: &Mat) -> (Mat, Mat) {
    assert!(m.len() == 2 && m[0].len() == 2);
    let mut h = m.clone();
    let mut u = identity(2);
    let swap = |h: &mut Mat, u: &mut Mat| {
        for row in h.iter_mut() {
            row.swap(0, 1);
        }
        for row in u.iter_mut() {
            row.swap(0, 1);
        }
    };
    let sub_col = |h: &mut Mat, u: &mut Mat, f: &BigInt| {
        // col0 -= f · col1
        for row in h.iter_mut() {
            let v = f * &row[1];
            row[0] -= v;
        }
        for row in u.iter_mut() {
            let v = f * &row[1];
            row[0] -= v;
        }
    };
    let negate_col = |h: &mut Mat, u: &mut Mat, c: usize| {
        for row in h.iter_mut() {
            row[c] = -&row[c];
        }
        for row in u.iter_mut() {
            row[c] = -&row[c];
        }
    };

    // Euclid on the bottom row until h[1][0] = 0.
    while !h[1][0].is_zero() {
        if h[1][1].is_zero() {
            swap(&mut h, &mut u);
            break;
        }
        let f = h[1][0].div_floor(&h[1][1]);
        sub_col(&mut h, &mut u, &f);
        if !h[1][0].is_zero() {
            swap(&mut h, &mut u);
        }
    }
    if h[1][1].sign() == Sign::Minus {
        negate_col(&mut h, &mut u, 1);
    }
    if h[0][0].sign() == Sign::Minus {
        negate_col(&mut h, &mut u, 0);
    }
    // Reduce the off-diagonal entry mod k when possible.
    if h[0][0].is_positive() && h[1][1].is_positive() {
        let f = h[0][1].div_floor(&h[0][0]);
        for row in h.iter_mut() {
            let v = &f * &row[0];
            row[1] -= v;
        }
        for row in u.iter_mut() {
            let v = &f * &row[0];
            row[1] -= v;
        }
    }
    (h, u)
}

/// Solves `a · x ≡ b (mod 1)` for `x` over ℚ/ℤ. Entries of `b` are rational.
///
/// Using `p·a·q = d`, the system is solvable iff every zero row of `d` sends
/// `p·b` to an integer; a particular solution is assembled from `y_i =
/// (p·b)_i / d_i`. Returns one solution's entries as rationals in [0, 1).
pub fn solve_mod_one(a: &Mat, b: &[BigRational]) -> Option<Vec<BigRational>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    assert_eq!(rows, b.len());
    let snf = smith_normal_form(a);
    let mut pb = vec![BigRational::zero(); rows];
    for i in 0..rows {
        for (j, bj) in b.iter().enumerate() {
            if !snf.p[i][j].is_zero() {
                pb[i] += BigRational::from(snf.p[i][j].clone()) * bj;
            }
        }
    }
    let mut y = vec![BigRational::zero(); cols];
    for i in 0..rows {
        let dii = if i < cols {
            snf.d[i][i].clone()
        } else {
            BigInt::zero()
        };
        if dii.is_zero() {
            if !pb[i].is_integer() {
                return None;
            }
        } else if i < cols {
            y[i] = &pb[i] / BigRational::from(dii);
        }
    }
    // x = q · y, folded into [0, 1)
    let mut x = vec![BigRational::zero(); cols];
    for i in 0..cols {
        for (j, yj) in y.iter().enumerate() {
            if !snf.q[i][j].is_zero() {
                x[i] += BigRational::from(snf.q[i][j].clone()) * yj;
            }
        }
        let fl = x[i].floor();
        x[i] -= fl;
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn is_unimodular(m: &Mat) -> bool {
        match m.len() {
            0 => true,
            2 => det2(m).abs().is_one(),
            _ => unreachable!("tests only use 2x2 transforms"),
        }
    }

    #[test]
    fn snf_of_spec_triangle() {
        // columns (2,0) and (1,3): the normal form is diag(1, 6)
        let m = mat_from_i64(&[vec![2, 1], vec![0, 3]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.d, mat_from_i64(&[vec![1, 0], vec![0, 6]]));
        assert_eq!(mat_mul(&mat_mul(&snf.p, &m), &snf.q), snf.d);
    }

    #[test]
    fn solve_mod_one_detects_obstruction() {
        // x + y = 1/2, x + y = 0 is unsolvable; x + y = 1/2 alone is solvable.
        let a = mat_from_i64(&[vec![1, 1], vec![1, 1]]);
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert!(solve_mod_one(&a, &[half.clone(), BigRational::zero()]).is_none());
        let one_eq = mat_from_i64(&[vec![1, 1]]);
        let x = solve_mod_one(&one_eq, std::slice::from_ref(&half)).unwrap();
        let s = &x[0] + &x[1];
        assert!((s - half).is_integer());
    }

    proptest! {
        #[test]
        fn snf_identity_and_divisibility(
            a in -1000i64..1000, b in -1000i64..1000,
            c in -1000i64..1000, d in -1000i64..1000,
        ) {
            let m = mat_from_i64(&[vec![a, b], vec![c, d]]);
            let snf = smith_normal_form(&m);
            prop_assert_eq!(mat_mul(&mat_mul(&snf.p, &m), &snf.q), snf.d.clone());
            prop_assert!(is_unimodular(&snf.p));
            prop_assert!(is_unimodular(&snf.q));
            prop_assert!(snf.d[0][1].is_zero());
            prop_assert!(snf.d[1][0].is_zero());
            prop_assert!(!snf.d[0][0].is_negative() && !snf.d[1][1].is_negative());
            if !snf.d[0][0].is_zero() {
                prop_assert!((&snf.d[1][1] % &snf.d[0][0]).is_zero());
            } else {
                prop_assert!(snf.d[1][1].is_zero());
            }
        }

        #[test]
        fn hermite_identity(
            a in -1000i64..1000, b in -1000i64..1000,
            c in -1000i64..1000, d in -1000i64..1000,
        ) {
            let m = mat_from_i64(&[vec![a, b], vec![c, d]]);
            let (h, u) = hermite_2x2(&m);
            prop_assert_eq!(mat_mul(&m, &u), h.clone());
            prop_assert!(is_unimodular(&u));
            prop_assert!(h[1][0].is_zero());
            prop_assert!(!h[0][0].is_negative() && !h[1][1].is_negative());
            if h[0][0].is_positive() && h[1][1].is_positive() {
                prop_assert!(!h[0][1].is_negative() && h[0][1] < h[0][0]);
            }
        }
    }
}
