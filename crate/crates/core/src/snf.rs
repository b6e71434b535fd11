//! Smith normal form diagonal for the small integer relation matrices that
//! arise when reconstructing finite abelian group structures. Matrices here
//! are at most ~12x12 with entries bounded by the group order, so a plain
//! elimination with remainder swaps is plenty.

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Diagonal of the Smith normal form of a square integer matrix, as
/// nonnegative values d1 | d2 | ... (zeros last if the matrix is singular).
pub fn smith_diagonal(mut m: Vec<Vec<i128>>) -> Vec<i128> {
    let n = m.len();
    if n == 0 {
        return Vec::new();
    }
    debug_assert!(m.iter().all(|r| r.len() == n));
    for t in 0..n {
        loop {
            // bring the submatrix entry of least nonzero magnitude to (t, t)
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if m[i][j] != 0
                        && pivot.map_or(true, |(pi, pj)| m[i][j].abs() < m[pi][pj].abs())
                    {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                return finish(m, n, t);
            };
            m.swap(t, pi);
            for row in &mut m {
                row.swap(t, pj);
            }
            let mut dirty = false;
            for i in t + 1..n {
                if m[i][t] != 0 {
                    let q = m[i][t].div_euclid(m[t][t]);
                    for j in 0..n {
                        m[i][j] -= q * m[t][j];
                    }
                    if m[i][t] != 0 {
                        dirty = true; // remainder becomes the smaller new pivot
                    }
                }
            }
            for j in t + 1..n {
                if m[t][j] != 0 {
                    let q = m[t][j].div_euclid(m[t][t]);
                    for row in m.iter_mut() {
                        row[j] -= q * row[t];
                    }
                    if m[t][j] != 0 {
                        dirty = true;
                    }
                }
            }
            if !dirty {
                break;
            }
        }
    }
    finish(m, n, n)
}

fn finish(m: Vec<Vec<i128>>, n: usize, rank: usize) -> Vec<i128> {
    let mut diag: Vec<i128> = (0..rank).map(|i| m[i][i].abs()).collect();
    diag.resize(n, 0);
    // enforce the divisibility chain: diag(a, b) ~ diag(gcd, lcm)
    loop {
        let mut changed = false;
        for i in 0..n.saturating_sub(1) {
            let (a, b) = (diag[i], diag[i + 1]);
            if a != 0 && b % a != 0 {
                let g = gcd(a, b);
                diag[i] = g;
                diag[i + 1] = a / g * b;
                changed = true;
            }
            if a == 0 && b != 0 {
                diag.swap(i, i + 1);
                changed = true;
            }
        }
        if !changed {
            return diag;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_matrix_is_sorted_by_divisibility() {
        let d = smith_diagonal(vec![
            vec![6, 0, 0],
            vec![0, 4, 0],
            vec![0, 0, 2],
        ]);
        assert_eq!(d, vec![2, 2, 12]);
    }

    #[test]
    fn known_small_cases() {
        assert_eq!(smith_diagonal(vec![vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(
            smith_diagonal(vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]),
            vec![2, 2, 156]
        );
        assert_eq!(smith_diagonal(vec![vec![1]]), vec![1]);
        assert_eq!(smith_diagonal(vec![]), Vec::<i128>::new());
    }

    #[test]
    fn singular_matrix_gets_trailing_zero() {
        let d = smith_diagonal(vec![vec![2, 2], vec![2, 2]]);
        assert_eq!(d, vec![2, 0]);
    }

    #[test]
    fn triangular_relation_matrix() {
        // relations m1*e1 = 0, m2*e2 = v*e1 style rows
        let d = smith_diagonal(vec![vec![2, 0], vec![-1, 2]]);
        assert_eq!(d, vec![1, 4]); // the group is cyclic of order 4
    }
}
