//! Integer helpers: gcd, factorization, Smith normal form and invariant
//! factor bookkeeping for finite abelian groups.

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Result of a Smith normal form reduction `U * A * V = diag(d)`.
/// Only the column transform is kept, together with its inverse.
#[derive(Debug, Clone)]
pub struct Smith {
    pub diagonal: Vec<i64>,
    pub v: Vec<Vec<i64>>,
    pub v_inv: Vec<Vec<i64>>,
}

/// Smith normal form of an integer matrix with `cols` columns.
pub fn smith_normal_form(rows: &[Vec<i64>], cols: usize) -> Smith {
    let mut a: Vec<Vec<i64>> = rows.to_vec();
    let m = a.len();
    let n = cols;
    let mut v = identity(n);
    let mut v_inv = identity(n);
    let mut diagonal = Vec::new();

    for t in 0..m.min(n) {
        let Some((pi, pj)) = min_nonzero(&a, t, t) else {
            break;
        };
        a.swap(t, pi);
        swap_cols(&mut a, &mut v, &mut v_inv, t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..m {
                let q = a[i][t].div_euclid(a[t][t]);
                if q != 0 {
                    for j in t..n {
                        a[i][j] -= q * a[t][j];
                    }
                }
                if a[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..n {
                let q = a[t][j].div_euclid(a[t][t]);
                if q != 0 {
                    add_col(&mut a, &mut v, &mut v_inv, t, j, -q);
                }
                if a[t][j] != 0 {
                    clean = false;
                }
            }
            if !clean {
                // move the smallest remainder of row t / column t onto the pivot
                let mut best = (t, t);
                let mut best_abs = a[t][t].abs();
                for i in t + 1..m {
                    if a[i][t] != 0 && a[i][t].abs() < best_abs {
                        best = (i, t);
                        best_abs = a[i][t].abs();
                    }
                }
                for j in t + 1..n {
                    if a[t][j] != 0 && a[t][j].abs() < best_abs {
                        best = (t, j);
                        best_abs = a[t][j].abs();
                    }
                }
                if best.0 != t {
                    a.swap(t, best.0);
                } else if best.1 != t {
                    swap_cols(&mut a, &mut v, &mut v_inv, t, best.1);
                }
                continue;
            }
            let pivot = a[t][t];
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| a[i][j] % pivot != 0));
            match offender {
                Some(i) => {
                    for j in t..n {
                        a[t][j] += a[i][j];
                    }
                }
                None => break,
            }
        }
        if a[t][t] < 0 {
            for j in t..n {
                a[t][j] = -a[t][j];
            }
        }
        diagonal.push(a[t][t]);
    }
    Smith { diagonal, v, v_inv }
}

fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

fn min_nonzero(a: &[Vec<i64>], r0: usize, c0: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, i64)> = None;
    for (i, row) in a.iter().enumerate().skip(r0) {
        for (j, &x) in row.iter().enumerate().skip(c0) {
            if x != 0 && best.is_none_or(|(_, _, b)| x.abs() < b) {
                best = Some((i, j, x.abs()));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

fn swap_cols(a: &mut [Vec<i64>], v: &mut [Vec<i64>], v_inv: &mut [Vec<i64>], x: usize, y: usize) {
    if x == y {
        return;
    }
    for row in a.iter_mut().chain(v.iter_mut()) {
        row.swap(x, y);
    }
    v_inv.swap(x, y);
}

/// col_dst += k * col_src, mirrored on the inverse as row_src -= k * row_dst.
fn add_col(
    a: &mut [Vec<i64>],
    v: &mut [Vec<i64>],
    v_inv: &mut [Vec<i64>],
    src: usize,
    dst: usize,
    k: i64,
) {
    for row in a.iter_mut().chain(v.iter_mut()) {
        row[dst] += k * row[src];
    }
    let dst_row = v_inv[dst].clone();
    for (x, d) in v_inv[src].iter_mut().zip(dst_row) {
        *x -= k * d;
    }
}

/// Invariant factors `d_1 | d_2 | ... | d_k` (all > 1, ascending) of the
/// group `Z_{o_1} x ... x Z_{o_t}`, via Smith normal form of the diagonal
/// relation matrix.
pub fn invariant_factors(orders: &[u64]) -> Vec<u64> {
    let rows: Vec<Vec<i64>> = orders
        .iter()
        .enumerate()
        .map(|(i, &o)| {
            let mut r = vec![0; orders.len()];
            r[i] = o as i64;
            r
        })
        .collect();
    let snf = smith_normal_form(&rows, orders.len());
    let mut d: Vec<u64> = snf
        .diagonal
        .into_iter()
        .map(|x| x as u64)
        .filter(|&x| x > 1)
        .collect();
    d.sort_unstable();
    d
}

/// Invariant factors from per-prime exponent partitions.
pub fn invariant_factors_from_partitions(parts: &[(u64, Vec<u32>)]) -> Vec<u64> {
    let len = parts.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
    let mut out = vec![1u64; len];
    for (p, exps) in parts {
        let mut exps = exps.clone();
        exps.sort_unstable_by(|a, b| b.cmp(a));
        for (i, e) in exps.into_iter().enumerate() {
            out[len - 1 - i] *= p.pow(e);
        }
    }
    out
}

/// Whether a finite abelian group with invariant factors `small` is
/// isomorphic to a subgroup (equivalently, a quotient) of one with
/// invariant factors `big`. Both lists ascending.
pub fn invariant_factors_embed(small: &[u64], big: &[u64]) -> bool {
    if small.len() > big.len() {
        return false;
    }
    small
        .iter()
        .rev()
        .zip(big.iter().rev())
        .all(|(&s, &b)| b % s == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorization() {
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factorize(97), vec![(97, 1)]);
    }

    #[test]
    fn smith_form_of_small_matrices() {
        let s = smith_normal_form(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]], 3);
        assert_eq!(s.diagonal, vec![2, 6, 12]);
        assert_eq!(invariant_factors(&[4, 6]), vec![2, 12]);
        assert_eq!(invariant_factors(&[2, 16]), vec![2, 16]);
        assert_eq!(invariant_factors(&[1]), Vec::<u64>::new());
        assert_eq!(invariant_factors(&[6, 10, 15]), vec![30, 30]);
    }

    #[test]
    fn v_inverse_is_inverse() {
        let rows = vec![vec![4, 0, 2], vec![0, 6, 3], vec![1, 1, 1], vec![8, 0, 0]];
        let s = smith_normal_form(&rows, 3);
        for i in 0..3 {
            for j in 0..3 {
                let x: i64 = (0..3).map(|k| s.v[i][k] * s.v_inv[k][j]).sum();
                assert_eq!(x, i64::from(i == j));
            }
        }
    }

    #[test]
    fn embedding_of_invariant_factor_lists() {
        assert!(invariant_factors_embed(&[2], &[16]));
        assert!(!invariant_factors_embed(&[4], &[2, 2]));
        assert!(invariant_factors_embed(&[], &[3]));
        assert!(invariant_factors_embed(&[2, 4], &[2, 2, 8]));
        assert!(!invariant_factors_embed(&[2, 2, 2], &[4, 8]));
    }

    #[test]
    fn partitions_to_invariant_factors() {
        assert_eq!(
            invariant_factors_from_partitions(&[(2, vec![1, 2]), (3, vec![1])]),
            vec![2, 12]
        );
    }
}
