//! Diagonal form of a small integer matrix under unimodular row and column
//! operations.

pub(super) type Mat = Vec<Vec<i64>>;

fn identity(n: usize) -> Mat {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

/// Returns `(u, d, v)` with `u m v = d` diagonal and `u`, `v` unimodular.
pub(super) fn diagonalize(m: &Mat) -> (Mat, Mat, Mat) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut d = m.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);
    for t in 0..rows.min(cols) {
        loop {
            let pivot = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| d[i][j] != 0)
                .min_by_key(|&(i, j)| d[i][j].abs());
            let Some((pi, pj)) = pivot else { return (u, d, v) };
            d.swap(t, pi);
            u.swap(t, pi);
            for row in d.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }
            let p = d[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let q = d[i][t] / p;
                if q != 0 {
                    for j in 0..cols {
                        d[i][j] -= q * d[t][j];
                    }
                    for j in 0..rows {
                        u[i][j] -= q * u[t][j];
                    }
                }
                clean &= d[i][t] == 0;
            }
            for j in t + 1..cols {
                let q = d[t][j] / p;
                if q != 0 {
                    for i in 0..rows {
                        d[i][j] -= q * d[i][t];
                    }
                    for i in 0..cols {
                        v[i][j] -= q * v[i][t];
                    }
                }
                clean &= d[t][j] == 0;
            }
            if clean {
                break;
            }
        }
    }
    (u, d, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mul(a: &Mat, b: &Mat) -> Mat {
        let k = b.len();
        a.iter()
            .map(|r| (0..b[0].len()).map(|j| (0..k).map(|x| r[x] * b[x][j]).sum()).collect())
            .collect()
    }

    #[test]
    fn diagonalizes_weight_pairings() {
        // weights of the 5-dimensional orthogonal model of B2
        let m: Mat = vec![vec![1, 0], vec![-1, 2], vec![0, 0], vec![1, -2], vec![-1, 0]];
        let (u, d, v) = diagonalize(&m);
        assert_eq!(mul(&mul(&u, &m), &v), d);
        for (i, row) in d.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                assert!(i == j || x == 0);
            }
        }
        let mut diag: Vec<i64> = (0..2).map(|i| d[i][i].abs()).collect();
        diag.sort();
        assert_eq!(diag, vec![1, 2]);
    }
}
