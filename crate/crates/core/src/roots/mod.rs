//! Reduced irreducible root systems in integer realizations.
//!
//! Roots are stored by index. Positive roots occupy `0..P` in increasing
//! height order and the negative of root `i` is root `i + P`. Coordinates are
//! integer vectors in an ambient lattice; `F4`, `E6`, `E7` and `E8` are scaled
//! by two, and `G2` uses the basis `{k, c}` with `k` long and `c` short.

mod weyl;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use weyl::WeylWord;

/// Index of a root inside its [`RootSystem`].
pub type Root = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootError {
    #[error("no reduced irreducible root system of type {0}{1}")]
    InvalidType(char, usize),
    #[error("cannot parse root system label `{0}`")]
    BadLabel(String),
    #[error("commutator of a root with its negative is excluded")]
    OppositeRoots,
    #[error("roots {0:?} and {1:?} have different lengths")]
    DifferentLengths(Vec<i64>, Vec<i64>),
    #[error("simple root {0} is not an end node of the Dynkin diagram")]
    NotExtremal(usize),
    #[error("vector {0:?} is not a root")]
    NotARoot(Vec<i64>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }
}

/// Type label such as `A2` or `G2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CartanType {
    pub family: Family,
    pub rank: usize,
}

impl CartanType {
    pub fn new(family: Family, rank: usize) -> Result<CartanType, RootError> {
        let ok = match family {
            Family::A => rank >= 2,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 3,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(CartanType { family, rank })
        } else {
            Err(RootError::InvalidType(family.letter(), rank))
        }
    }

    pub fn is_simply_laced(self) -> bool {
        matches!(self.family, Family::A | Family::D | Family::E)
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

impl FromStr for CartanType {
    type Err = RootError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let mut chars = s.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            Some('E') => Family::E,
            Some('F') => Family::F,
            Some('G') => Family::G,
            _ => return Err(RootError::BadLabel(s.to_string())),
        };
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| RootError::BadLabel(s.to_string()))?;
        CartanType::new(family, rank)
    }
}

/// An entry `(i, j, iα + jβ)` of a commutator root list.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CommutatorTerm {
    pub i: u32,
    pub j: u32,
    pub root: Root,
}

/// Partition of a (sub)system by whether a simple root occurs in a root.
#[derive(Clone, Debug)]
pub struct TavgenSplit {
    pub alpha: usize,
    /// Simple indices spanning the remaining subsystem.
    pub remaining: Vec<usize>,
    pub phi0_pos: Vec<Root>,
    pub phi0_neg: Vec<Root>,
    pub phi1_pos: Vec<Root>,
    pub phi1_neg: Vec<Root>,
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    cartan: CartanType,
    /// Ambient Gram matrix.
    gram: Vec<Vec<i64>>,
    vectors: Vec<Vec<i64>>,
    coeffs: Vec<Vec<i64>>,
    norms: Vec<i64>,
    simple: Vec<Root>,
    index: HashMap<Vec<i64>, Root>,
    positive: usize,
    sums: Vec<Option<Root>>,
    simple_reflections: Vec<Vec<Root>>,
}

fn unit(dim: usize, i: usize, scale: i64) -> Vec<i64> {
    let mut v = vec![0; dim];
    v[i] = scale;
    v
}

fn diff(dim: usize, i: usize, j: usize, scale: i64) -> Vec<i64> {
    let mut v = vec![0; dim];
    v[i] = scale;
    v[j] = -scale;
    v
}

fn identity_gram(dim: usize) -> Vec<Vec<i64>> {
    (0..dim).map(|i| unit(dim, i, 1)).collect()
}

impl RootSystem {
    pub fn new(cartan: CartanType) -> RootSystem {
        let l = cartan.rank;
        let (gram, simples) = match cartan.family {
            Family::A => {
                let d = l + 1;
                (identity_gram(d), (0..l).map(|i| diff(d, i, i + 1, 1)).collect())
            }
            Family::B => {
                let mut s: Vec<Vec<i64>> = (0..l - 1).map(|i| diff(l, i, i + 1, 1)).collect();
                s.push(unit(l, l - 1, 1));
                (identity_gram(l), s)
            }
            Family::C => {
                let mut s: Vec<Vec<i64>> = (0..l - 1).map(|i| diff(l, i, i + 1, 1)).collect();
                s.push(unit(l, l - 1, 2));
                (identity_gram(l), s)
            }
            Family::D => {
                let mut s: Vec<Vec<i64>> = (0..l - 1).map(|i| diff(l, i, i + 1, 1)).collect();
                let mut last = vec![0; l];
                last[l - 2] = 1;
                last[l - 1] = 1;
                s.push(last);
                (identity_gram(l), s)
            }
            Family::F => {
                let s = vec![
                    vec![0, 2, -2, 0],
                    vec![0, 0, 2, -2],
                    vec![0, 0, 0, 2],
                    vec![1, -1, -1, -1],
                ];
                (identity_gram(4), s)
            }
            Family::E => {
                let mut s = vec![vec![1, -1, -1, -1, -1, -1, -1, 1], {
                    let mut v = vec![0; 8];
                    v[0] = 2;
                    v[1] = 2;
                    v
                }];
                for i in 0..6 {
                    s.push(diff(8, i + 1, i, 2));
                }
                s.truncate(l);
                (identity_gram(8), s)
            }
            Family::G => (vec![vec![6, -3], vec![-3, 2]], vec![vec![1, 0], vec![0, 1]]),
        };
        RootSystem::from_simple(cartan, gram, simples)
    }

    /// The rank-one system used as the base of inductive algorithms.
    pub fn a1() -> RootSystem {
        RootSystem::from_simple(
            CartanType { family: Family::A, rank: 1 },
            identity_gram(2),
            vec![vec![1, -1]],
        )
    }

    pub fn parse(label: &str) -> Result<RootSystem, RootError> {
        Ok(RootSystem::new(label.parse()?))
    }

    fn from_simple(cartan: CartanType, gram: Vec<Vec<i64>>, simples: Vec<Vec<i64>>) -> RootSystem {
        let l = simples.len();
        let ip = |a: &[i64], b: &[i64]| -> i64 {
            let mut s = 0;
            for (i, x) in a.iter().enumerate() {
                if *x == 0 {
                    continue;
                }
                for (j, y) in b.iter().enumerate() {
                    s += x * gram[i][j] * y;
                }
            }
            s
        };
        let mut found: HashMap<Vec<i64>, Vec<i64>> = HashMap::new();
        let mut queue: Vec<(Vec<i64>, Vec<i64>)> = simples
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), unit(l, i, 1)))
            .collect();
        while let Some((v, c)) = queue.pop() {
            if found.contains_key(&v) {
                continue;
            }
            found.insert(v.clone(), c.clone());
            for (i, s) in simples.iter().enumerate() {
                let k = 2 * ip(&v, s) / ip(s, s);
                let w: Vec<i64> = v.iter().zip(s).map(|(a, b)| a - k * b).collect();
                if !found.contains_key(&w) {
                    let mut d = c.clone();
                    d[i] -= k;
                    queue.push((w, d));
                }
            }
        }
        let mut pos: Vec<(Vec<i64>, Vec<i64>)> = found
            .into_iter()
            .filter(|(_, c)| c.iter().all(|&x| x >= 0))
            .collect();
        pos.sort_by(|(_, a), (_, b)| {
            let ha: i64 = a.iter().sum();
            let hb: i64 = b.iter().sum();
            ha.cmp(&hb).then_with(|| b.cmp(a))
        });
        let p = pos.len();
        let mut vectors = Vec::with_capacity(2 * p);
        let mut coeffs = Vec::with_capacity(2 * p);
        for (v, c) in &pos {
            vectors.push(v.clone());
            coeffs.push(c.clone());
        }
        for (v, c) in &pos {
            vectors.push(v.iter().map(|x| -x).collect());
            coeffs.push(c.iter().map(|x| -x).collect());
        }
        let index: HashMap<Vec<i64>, Root> =
            vectors.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        let norms: Vec<i64> = vectors.iter().map(|v| ip(v, v)).collect();
        let simple: Vec<Root> = simples.iter().map(|s| index[s]).collect();
        let n = vectors.len();
        let mut sums = vec![None; n * n];
        for a in 0..n {
            for b in 0..n {
                let v: Vec<i64> = vectors[a].iter().zip(&vectors[b]).map(|(x, y)| x + y).collect();
                sums[a * n + b] = index.get(&v).copied();
            }
        }
        let simple_reflections = simple
            .iter()
            .map(|&s| {
                (0..n)
                    .map(|r| {
                        let k = 2 * ip(&vectors[r], &vectors[s]) / norms[s];
                        let w: Vec<i64> =
                            vectors[r].iter().zip(&vectors[s]).map(|(a, b)| a - k * b).collect();
                        index[&w]
                    })
                    .collect()
            })
            .collect();
        RootSystem {
            cartan,
            gram,
            vectors,
            coeffs,
            norms,
            simple,
            index,
            positive: p,
            sums,
            simple_reflections,
        }
    }

    pub fn cartan(&self) -> CartanType {
        self.cartan
    }

    pub fn label(&self) -> String {
        self.cartan.to_string()
    }

    pub fn rank(&self) -> usize {
        self.simple.len()
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn num_positive(&self) -> usize {
        self.positive
    }

    pub fn roots(&self) -> std::ops::Range<Root> {
        0..self.vectors.len()
    }

    pub fn positive_roots(&self) -> std::ops::Range<Root> {
        0..self.positive
    }

    pub fn negative_roots(&self) -> std::ops::Range<Root> {
        self.positive..self.vectors.len()
    }

    pub fn simple_roots(&self) -> &[Root] {
        &self.simple
    }

    pub fn simple_root(&self, i: usize) -> Root {
        self.simple[i]
    }

    pub fn vector(&self, r: Root) -> &[i64] {
        &self.vectors[r]
    }

    /// Coefficients in the simple roots.
    pub fn coefficients(&self, r: Root) -> &[i64] {
        &self.coeffs[r]
    }

    pub fn height(&self, r: Root) -> i64 {
        self.coeffs[r].iter().sum()
    }

    pub fn is_positive(&self, r: Root) -> bool {
        r < self.positive
    }

    pub fn neg(&self, r: Root) -> Root {
        if r < self.positive {
            r + self.positive
        } else {
            r - self.positive
        }
    }

    pub fn find(&self, v: &[i64]) -> Option<Root> {
        self.index.get(v).copied()
    }

    pub fn lookup(&self, v: &[i64]) -> Result<Root, RootError> {
        self.find(v).ok_or_else(|| RootError::NotARoot(v.to_vec()))
    }

    pub fn inner_vectors(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut s = 0;
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                s += x * self.gram[i][j] * y;
            }
        }
        s
    }

    pub fn inner(&self, a: Root, b: Root) -> i64 {
        self.inner_vectors(&self.vectors[a], &self.vectors[b])
    }

    pub fn norm(&self, r: Root) -> i64 {
        self.norms[r]
    }

    /// `<a, b^vee> = 2(a,b)/(b,b)`.
    pub fn pairing(&self, a: Root, b: Root) -> i64 {
        2 * self.inner(a, b) / self.norms[b]
    }

    pub fn max_norm(&self) -> i64 {
        *self.norms.iter().max().unwrap()
    }

    pub fn is_long(&self, r: Root) -> bool {
        self.norms[r] == self.max_norm()
    }

    pub fn has_two_lengths(&self) -> bool {
        self.norms.iter().any(|&n| n != self.norms[0])
    }

    /// `a + b` when it is a root.
    pub fn sum(&self, a: Root, b: Root) -> Option<Root> {
        self.sums[a * self.len() + b]
    }

    /// `i a + j b` when it is a root.
    pub fn combination(&self, i: i64, a: Root, j: i64, b: Root) -> Option<Root> {
        let v: Vec<i64> = self.vectors[a]
            .iter()
            .zip(&self.vectors[b])
            .map(|(x, y)| i * x + j * y)
            .collect();
        self.find(&v)
    }

    /// Reflection of `b` in the hyperplane orthogonal to `a`.
    pub fn reflect(&self, a: Root, b: Root) -> Root {
        let k = self.pairing(b, a);
        self.combination(1, b, -k, a).expect("reflections permute roots")
    }

    pub fn simple_reflection(&self, i: usize, r: Root) -> Root {
        self.simple_reflections[i][r]
    }

    /// Simple indices adjacent to `i` in the Dynkin diagram.
    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        (0..self.rank())
            .filter(|&j| j != i && self.inner(self.simple[i], self.simple[j]) != 0)
            .collect()
    }

    /// Largest `p` with `b - p a` a root.
    pub fn string_below(&self, a: Root, b: Root) -> i64 {
        let mut p = 0;
        while self.combination(1, b, -(p + 1), a).is_some() {
            p += 1;
        }
        p
    }

    /// All `(i, j, iα + jβ)` with `i, j >= 1`, ordered by `(i + j, i)`.
    pub fn commutator_root_list(&self, a: Root, b: Root) -> Result<Vec<CommutatorTerm>, RootError> {
        if b == self.neg(a) {
            return Err(RootError::OppositeRoots);
        }
        let mut out = Vec::new();
        for total in 2..=8u32 {
            for i in 1..total {
                let j = total - i;
                if let Some(root) = self.combination(i as i64, a, j as i64, b) {
                    out.push(CommutatorTerm { i, j, root });
                }
            }
        }
        Ok(out)
    }

    /// Roots whose support lies inside the given simple indices.
    pub fn subsystem(&self, simples: &[usize]) -> Vec<Root> {
        self.roots()
            .filter(|&r| {
                self.coeffs[r]
                    .iter()
                    .enumerate()
                    .all(|(i, &c)| c == 0 || simples.contains(&i))
            })
            .collect()
    }

    /// True when the simple indices span a connected Dynkin subdiagram.
    pub fn is_connected(&self, simples: &[usize]) -> bool {
        let Some(&first) = simples.first() else { return true };
        let mut seen = vec![first];
        let mut stack = vec![first];
        while let Some(i) = stack.pop() {
            for j in self.neighbors(i) {
                if simples.contains(&j) && !seen.contains(&j) {
                    seen.push(j);
                    stack.push(j);
                }
            }
        }
        seen.len() == simples.len()
    }

    /// Split of the subsystem spanned by `within` at the simple index `alpha`.
    pub fn tavgen_split_within(&self, within: &[usize], alpha: usize) -> Result<TavgenSplit, RootError> {
        let degree = self
            .neighbors(alpha)
            .iter()
            .filter(|j| within.contains(j))
            .count();
        let remaining: Vec<usize> = within.iter().copied().filter(|&i| i != alpha).collect();
        if !within.contains(&alpha) || degree > 1 || !self.is_connected(&remaining) {
            return Err(RootError::NotExtremal(alpha));
        }
        let mut split = TavgenSplit {
            alpha,
            remaining,
            phi0_pos: vec![],
            phi0_neg: vec![],
            phi1_pos: vec![],
            phi1_neg: vec![],
        };
        for r in self.subsystem(within) {
            let bucket = match (self.coeffs[r][alpha] == 0, self.is_positive(r)) {
                (true, true) => &mut split.phi0_pos,
                (true, false) => &mut split.phi0_neg,
                (false, true) => &mut split.phi1_pos,
                (false, false) => &mut split.phi1_neg,
            };
            bucket.push(r);
        }
        Ok(split)
    }

    pub fn tavgen_split(&self, alpha: usize) -> Result<TavgenSplit, RootError> {
        let all: Vec<usize> = (0..self.rank()).collect();
        self.tavgen_split_within(&all, alpha)
    }

    /// An extremal simple index of the subdiagram `within` not in `avoid`.
    pub fn extremal_avoiding(&self, within: &[usize], avoid: &[i64]) -> Option<usize> {
        within.iter().copied().find(|&i| {
            avoid[i] == 0 && self.tavgen_split_within(within, i).is_ok()
        })
    }

    pub fn format_root(&self, r: Root) -> String {
        let parts: Vec<String> = self.vectors[r].iter().map(|x| x.to_string()).collect();
        format!("[{}]", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(label: &str) -> usize {
        RootSystem::parse(label).unwrap().len()
    }

    #[test]
    fn classical_counts() {
        for l in 2..=5 {
            assert_eq!(count(&format!("A{l}")), l * (l + 1));
            assert_eq!(count(&format!("B{l}")), 2 * l * l);
            assert_eq!(count(&format!("C{l}")), 2 * l * l);
        }
        for l in 3..=6 {
            assert_eq!(count(&format!("D{l}")), 2 * l * (l - 1));
        }
        assert_eq!(count("E6"), 72);
        assert_eq!(count("E7"), 126);
        assert_eq!(count("E8"), 240);
        assert_eq!(count("F4"), 48);
        assert_eq!(count("G2"), 12);
        assert_eq!(RootSystem::a1().len(), 2);
    }

    #[test]
    fn invalid_types() {
        assert!(matches!("F5".parse::<CartanType>(), Err(RootError::InvalidType('F', 5))));
        assert!("A1".parse::<CartanType>().is_err());
        assert!("E9".parse::<CartanType>().is_err());
        assert!("D2".parse::<CartanType>().is_err());
        assert!("X3".parse::<CartanType>().is_err());
    }

    #[test]
    fn a2_roots_are_differences() {
        let rs = RootSystem::parse("A2").unwrap();
        let mut expected = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    expected.push(diff(3, i, j, 1));
                }
            }
        }
        let mut got: Vec<Vec<i64>> = rs.roots().map(|r| rs.vector(r).to_vec()).collect();
        got.sort();
        expected.sort();
        assert_eq!(got, expected);
    }

    #[test]
    fn b2_and_g2_roots() {
        let rs = RootSystem::parse("B2").unwrap();
        let mut got: Vec<Vec<i64>> = rs.roots().map(|r| rs.vector(r).to_vec()).collect();
        got.sort();
        let mut expected = vec![];
        for (a, b) in [(1, 0), (0, 1), (1, 1), (1, -1)] {
            expected.push(vec![a, b]);
            expected.push(vec![-a, -b]);
        }
        expected.sort();
        assert_eq!(got, expected);

        let g = RootSystem::parse("G2").unwrap();
        let mut short: Vec<Vec<i64>> = g
            .roots()
            .filter(|&r| !g.is_long(r))
            .map(|r| g.vector(r).to_vec())
            .collect();
        short.sort();
        // (k-coefficient, c-coefficient): ±c, ±(c+k), ±(2c+k)
        let mut expected = vec![vec![0, 1], vec![1, 1], vec![1, 2]];
        expected.extend(expected.clone().into_iter().map(|v| v.iter().map(|x| -x).collect()));
        expected.sort();
        assert_eq!(short, expected);
    }

    #[test]
    fn commutator_lists() {
        let a2 = RootSystem::parse("A2").unwrap();
        let a = a2.lookup(&[1, -1, 0]).unwrap();
        let b = a2.lookup(&[0, 1, -1]).unwrap();
        let l = a2.commutator_root_list(a, b).unwrap();
        assert_eq!(l.len(), 1);
        assert_eq!(a2.vector(l[0].root), &[1, 0, -1]);

        let b2 = RootSystem::parse("B2").unwrap();
        let a = b2.lookup(&[1, 1]).unwrap();
        let b = b2.lookup(&[0, -1]).unwrap();
        let l = b2.commutator_root_list(a, b).unwrap();
        let mut scan = Vec::new();
        for i in 1..=4i64 {
            for j in 1..=4i64 {
                let v = vec![i, i - j];
                if b2.find(&v).is_some() {
                    scan.push((i + j, i, v));
                }
            }
        }
        scan.sort();
        let got: Vec<(i64, i64, Vec<i64>)> = l
            .iter()
            .map(|t| ((t.i + t.j) as i64, t.i as i64, b2.vector(t.root).to_vec()))
            .collect();
        assert_eq!(got, scan);
        assert_eq!(got[0].2, vec![1, 0]);
        assert_eq!(got[1].2, vec![1, -1]);

        let g2 = RootSystem::parse("G2").unwrap();
        let k = g2.lookup(&[1, 0]).unwrap();
        let c = g2.lookup(&[0, 1]).unwrap();
        let l = g2.commutator_root_list(k, c).unwrap();
        let got: Vec<(u32, u32, Vec<i64>)> =
            l.iter().map(|t| (t.i, t.j, g2.vector(t.root).to_vec())).collect();
        assert_eq!(
            got,
            vec![
                (1, 1, vec![1, 1]),
                (1, 2, vec![1, 2]),
                (1, 3, vec![1, 3]),
                (2, 3, vec![2, 3])
            ]
        );
        assert_eq!(g2.commutator_root_list(k, g2.neg(k)), Err(RootError::OppositeRoots));
    }

    #[test]
    fn splits() {
        let a3 = RootSystem::parse("A3").unwrap();
        let s = a3.tavgen_split(0).unwrap();
        assert_eq!(s.phi0_pos.len() + s.phi0_neg.len(), 6);
        assert_eq!(s.phi1_pos.len() + s.phi1_neg.len(), 6);
        assert!(matches!(a3.tavgen_split(1), Err(RootError::NotExtremal(1))));

        let b2 = RootSystem::parse("B2").unwrap();
        let s = b2.tavgen_split(0).unwrap();
        assert_eq!(s.phi0_pos.len(), 1);

        let g2 = RootSystem::parse("G2").unwrap();
        let s = g2.tavgen_split(1).unwrap();
        assert_eq!(s.phi0_pos, vec![g2.lookup(&[1, 0]).unwrap()]);
    }
}
