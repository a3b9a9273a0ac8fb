//! Exact linear solving over a field, used for closure decompositions.

use crate::scalar::Scalar;

/// Solves `Σ_j x_j · columns[j] = target` exactly.
///
/// Each column and the target are sparse vectors keyed by `K`. Returns the
/// unique solution when the columns are independent and the system is
/// consistent, `None` when it is inconsistent. With dependent columns the
/// free variables are set to zero.
pub fn solve_sparse<K: Ord + Clone, C: Scalar>(
    columns: &[Vec<(K, C)>],
    target: &[(K, C)],
) -> Option<Vec<C>> {
    let mut keys: Vec<K> = columns
        .iter()
        .flatten()
        .chain(target)
        .map(|(k, _)| k.clone())
        .collect();
    keys.sort();
    keys.dedup();
    let row_of = |k: &K| keys.binary_search(k).expect("key collected above");
    let n = columns.len();
    let mut a = vec![vec![C::zero(); n + 1]; keys.len()];
    for (j, col) in columns.iter().enumerate() {
        for (k, v) in col {
            let r = row_of(k);
            a[r][j] = a[r][j].clone() + v.clone();
        }
    }
    for (k, v) in target {
        let r = row_of(k);
        a[r][n] = a[r][n].clone() + v.clone();
    }
    solve_dense(a, n)
}

/// Gauss-Jordan elimination on an augmented matrix with `n` unknowns.
pub fn solve_dense<C: Scalar>(mut a: Vec<Vec<C>>, n: usize) -> Option<Vec<C>> {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = C::one() / a[r][col].clone();
        for v in a[r].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in col..=n {
                    let d = f.clone() * a[r][j].clone();
                    a[i][j] = a[i][j].clone() - d;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows {
            break;
        }
    }
    if a[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    let mut x = vec![C::zero(); n];
    for (i, &col) in pivots.iter().enumerate() {
        x[col] = a[i][n].clone();
    }
    Some(x)
}
