//! Sparse square matrices over the integers.

use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    pub n: usize,
    /// Row-wise `(column, value)` pairs, columns increasing, no zeros.
    pub rows: Vec<Vec<(usize, i64)>>,
}

impl IntMatrix {
    pub fn zero(n: usize) -> IntMatrix {
        IntMatrix { n, rows: vec![Vec::new(); n] }
    }

    pub fn identity(n: usize) -> IntMatrix {
        IntMatrix { n, rows: (0..n).map(|i| vec![(i, 1)]).collect() }
    }

    pub fn from_entries(n: usize, entries: impl IntoIterator<Item = (usize, usize, i64)>) -> IntMatrix {
        let mut acc: Vec<BTreeMap<usize, i64>> = vec![BTreeMap::new(); n];
        for (i, j, v) in entries {
            *acc[i].entry(j).or_insert(0) += v;
        }
        IntMatrix {
            n,
            rows: acc
                .into_iter()
                .map(|r| r.into_iter().filter(|&(_, v)| v != 0).collect())
                .collect(),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |&(j, v)| (i, j, v)))
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.rows[i]
            .binary_search_by_key(&j, |&(c, _)| c)
            .map(|k| self.rows[i][k].1)
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        let mut out = Vec::with_capacity(self.n);
        for row in &self.rows {
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            for &(k, a) in row {
                for &(j, b) in &other.rows[k] {
                    *acc.entry(j).or_insert(0) += a * b;
                }
            }
            out.push(acc.into_iter().filter(|&(_, v)| v != 0).collect());
        }
        IntMatrix { n: self.n, rows: out }
    }

    pub fn add_scaled(&self, other: &IntMatrix, k: i64) -> IntMatrix {
        IntMatrix::from_entries(
            self.n,
            self.entries().chain(other.entries().map(|(i, j, v)| (i, j, k * v))),
        )
    }

    /// `XY - YX`
    pub fn bracket(&self, other: &IntMatrix) -> IntMatrix {
        self.mul(other).add_scaled(&other.mul(self), -1)
    }

    /// Exact division of every entry; `None` if some entry is not divisible.
    pub fn div_exact(&self, d: i64) -> Option<IntMatrix> {
        let mut rows = Vec::with_capacity(self.n);
        for r in &self.rows {
            let mut out = Vec::with_capacity(r.len());
            for &(j, v) in r {
                if v % d != 0 {
                    return None;
                }
                out.push((j, v / d));
            }
            rows.push(out);
        }
        Some(IntMatrix { n: self.n, rows })
    }

    /// Divided powers `X^k / k!` for `k = 1, 2, ...` until `X^k = 0`;
    /// `None` if some divided power is not integral.
    pub fn divided_powers(&self) -> Option<Vec<IntMatrix>> {
        let mut out = Vec::new();
        let mut cur = self.clone();
        let mut k = 1;
        while !cur.is_zero() {
            out.push(cur.clone());
            k += 1;
            // X^k/k! = (X^{k-1}/(k-1)!) X / k
            cur = cur.mul(self).div_exact(k)?;
            if k > 8 {
                return None;
            }
        }
        Some(out)
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_entries(self.n, self.entries().map(|(i, j, v)| (j, i, v)))
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut d = vec![vec![0; self.n]; self.n];
        for (i, j, v) in self.entries() {
            d[i][j] = v;
        }
        d
    }
}
