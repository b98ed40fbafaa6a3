//! Chevalley bases of the split simple Lie algebras over the integers.
//!
//! Structure constants follow the extraspecial-pair construction: for each
//! positive non-simple root `ξ`, the pair `(α, β)` with `α` smallest in the
//! root order and `α + β = ξ` gets `N_{α,β} = p + 1 > 0`; every other constant
//! is forced by antisymmetry, `N_{-r,-s} = -N_{r,s}`, the three-root identity
//! and the four-root identity.

mod symbolic;

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::intmat::IntMatrix;
use crate::roots::{CommutatorTerm, Root, RootError, RootSystem};

/// One commutator coefficient `N^{i,j}_{α,β}` with its root `iα + jβ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CommutatorCoefficient {
    pub term: CommutatorTerm,
    pub value: i64,
}

pub struct ChevalleyBasis {
    rs: Arc<RootSystem>,
    n: Vec<i64>,
    coroots: Vec<Vec<i64>>,
    extraspecial: Vec<(Root, Root, Root)>,
    ad: OnceLock<Vec<Vec<IntMatrix>>>,
    coefficients: OnceLock<Vec<Vec<CommutatorCoefficient>>>,
}

impl std::fmt::Debug for ChevalleyBasis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ChevalleyBasis({})", self.rs.label())
    }
}

type Q = Ratio<i64>;

struct ConstantSolver<'a> {
    rs: &'a RootSystem,
    extra: HashMap<Root, (Root, Root, i64)>,
    memo: HashMap<(Root, Root), Q>,
}

impl ConstantSolver<'_> {
    fn norm(&self, r: Root) -> Q {
        Q::from_integer(self.rs.norm(r))
    }

    fn n(&mut self, r: Root, s: Root) -> Q {
        if self.rs.sum(r, s).is_none() {
            return Q::from_integer(0);
        }
        if let Some(&v) = self.memo.get(&(r, s)) {
            return v;
        }
        let rs = self.rs;
        let v = match (rs.is_positive(r), rs.is_positive(s)) {
            (true, true) => self.n_positive(r, s),
            (false, false) => -self.n_positive(rs.neg(r), rs.neg(s)),
            (false, true) => -self.n(s, r),
            (true, false) => {
                let t = rs.neg(rs.sum(r, s).unwrap());
                if rs.is_positive(t) {
                    // N_{rs}/(t,t) = N_{tr}/(s,s)
                    self.norm(t) / self.norm(s) * self.n_positive(t, r)
                } else {
                    // N_{rs}/(t,t) = N_{st}/(r,r)
                    self.norm(t) / self.norm(r) * -self.n_positive(rs.neg(s), rs.neg(t))
                }
            }
        };
        self.memo.insert((r, s), v);
        v
    }

    fn n_positive(&mut self, r: Root, s: Root) -> Q {
        if r > s {
            return -self.n_positive(s, r);
        }
        let rs = self.rs;
        let xi = rs.sum(r, s).expect("sum is a root");
        let (a, b, p) = self.extra[&xi];
        if r == a {
            return Q::from_integer(p + 1);
        }
        let (g, d) = (r, s);
        let nab = Q::from_integer(p + 1);
        let mut acc = Q::from_integer(0);
        if let Some(u) = rs.sum(b, rs.neg(g)) {
            acc += self.n(b, rs.neg(g)) * self.n(a, rs.neg(d)) / self.norm(u);
        }
        if let Some(u) = rs.sum(a, rs.neg(g)) {
            acc += self.n(rs.neg(g), a) * self.n(b, rs.neg(d)) / self.norm(u);
        }
        self.norm(xi) / nab * acc
    }
}

impl ChevalleyBasis {
    pub fn new(rs: Arc<RootSystem>) -> ChevalleyBasis {
        let mut extra = HashMap::new();
        let mut extraspecial = Vec::new();
        for xi in rs.positive_roots() {
            if let Some(a) = rs.positive_roots().find(|&a| {
                rs.sum(xi, rs.neg(a)).is_some_and(|b| rs.is_positive(b))
            }) {
                let b = rs.sum(xi, rs.neg(a)).unwrap();
                let p = rs.string_below(a, b);
                extra.insert(xi, (a, b, p));
                extraspecial.push((xi, a, b));
            }
        }
        let mut solver = ConstantSolver { rs: &rs, extra, memo: HashMap::new() };
        let len = rs.len();
        let mut n = vec![0i64; len * len];
        for r in rs.roots() {
            for s in rs.roots() {
                let v = solver.n(r, s);
                assert!(v.is_integer(), "non-integral structure constant");
                n[r * len + s] = v.to_integer();
            }
        }
        let coroots = rs
            .roots()
            .map(|r| {
                let k = rs.coefficients(r);
                (0..rs.rank())
                    .map(|i| {
                        let num = k[i] * rs.norm(rs.simple_root(i));
                        assert_eq!(num % rs.norm(r), 0);
                        num / rs.norm(r)
                    })
                    .collect()
            })
            .collect();
        ChevalleyBasis {
            rs,
            n,
            coroots,
            extraspecial,
            ad: OnceLock::new(),
            coefficients: OnceLock::new(),
        }
    }

    pub fn root_system(&self) -> &Arc<RootSystem> {
        &self.rs
    }

    /// Basis size `|Φ| + ℓ`: index `r < |Φ|` is `e_r`, index `|Φ| + i` is `h_i`.
    pub fn dim(&self) -> usize {
        self.rs.len() + self.rs.rank()
    }

    pub fn n(&self, r: Root, s: Root) -> i64 {
        self.n[r * self.rs.len() + s]
    }

    /// Triples `(ξ, α, β)` with `(α, β)` the extraspecial pair of `ξ`.
    pub fn extraspecial_pairs(&self) -> &[(Root, Root, Root)] {
        &self.extraspecial
    }

    /// `h_r` in terms of the simple coroots.
    pub fn coroot(&self, r: Root) -> &[i64] {
        &self.coroots[r]
    }

    pub fn basis_label(&self, x: usize) -> String {
        if x < self.rs.len() {
            format!("e{}", self.rs.format_root(x))
        } else {
            format!("h{}", x - self.rs.len() + 1)
        }
    }

    /// `[x, y]` of two basis elements.
    pub fn bracket(&self, x: usize, y: usize) -> Vec<(usize, i64)> {
        let rs = &self.rs;
        let m = rs.len();
        match (x < m, y < m) {
            (false, false) => vec![],
            (false, true) => {
                let k = rs.pairing(y, rs.simple_root(x - m));
                if k == 0 { vec![] } else { vec![(y, k)] }
            }
            (true, false) => {
                let k = rs.pairing(x, rs.simple_root(y - m));
                if k == 0 { vec![] } else { vec![(x, -k)] }
            }
            (true, true) => {
                if y == rs.neg(x) {
                    self.coroots[x]
                        .iter()
                        .enumerate()
                        .filter(|(_, &c)| c != 0)
                        .map(|(i, &c)| (m + i, c))
                        .collect()
                } else if let Some(z) = rs.sum(x, y) {
                    vec![(z, self.n(x, y))]
                } else {
                    vec![]
                }
            }
        }
    }

    fn bracket_vec(&self, x: usize, v: &[(usize, i64)]) -> Vec<(usize, i64)> {
        let mut acc: HashMap<usize, i64> = HashMap::new();
        for &(y, c) in v {
            for (z, d) in self.bracket(x, y) {
                *acc.entry(z).or_insert(0) += c * d;
            }
        }
        let mut out: Vec<(usize, i64)> = acc.into_iter().filter(|&(_, c)| c != 0).collect();
        out.sort();
        out
    }

    fn jacobi_at(&self, x: usize, y: usize, z: usize) -> bool {
        let mut acc: HashMap<usize, i64> = HashMap::new();
        for (a, b, c) in [(x, y, z), (y, z, x), (z, x, y)] {
            for (k, v) in self.bracket_vec(a, &self.bracket(b, c)) {
                *acc.entry(k).or_insert(0) += v;
            }
        }
        acc.values().all(|&v| v == 0)
    }

    /// Jacobi identity on all basis triples, or on `samples` seeded random
    /// triples when the cube of the dimension exceeds `exhaustive_limit`.
    pub fn jacobi_check(&self, exhaustive_limit: usize, samples: usize, seed: u64) -> bool {
        let d = self.dim();
        if d * d * d <= exhaustive_limit {
            (0..d).all(|x| (0..d).all(|y| (0..d).all(|z| self.jacobi_at(x, y, z))))
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..samples).all(|_| {
                let (x, y, z) = (rng.gen_range(0..d), rng.gen_range(0..d), rng.gen_range(0..d));
                self.jacobi_at(x, y, z)
            })
        }
    }

    /// `|N_{α,β}| = p + 1` and `N_{α,β} = -N_{β,α}` for every summable pair.
    pub fn string_property_check(&self) -> bool {
        let rs = &self.rs;
        rs.roots().all(|a| {
            rs.roots().all(|b| match rs.sum(a, b) {
                Some(_) => {
                    self.n(a, b) == -self.n(b, a) && self.n(a, b).abs() == rs.string_below(a, b) + 1
                }
                None => self.n(a, b) == 0,
            })
        })
    }

    /// Matrices of `ad(e_r)^k / k!` for `k >= 1` in the basis order of [`Self::bracket`].
    pub fn adjoint_divided_powers(&self) -> &Vec<Vec<IntMatrix>> {
        self.ad.get_or_init(|| {
            let d = self.dim();
            self.rs
                .roots()
                .map(|r| {
                    let x = IntMatrix::from_entries(
                        d,
                        (0..d).flat_map(|y| self.bracket(r, y).into_iter().map(move |(z, v)| (z, y, v))),
                    );
                    x.divided_powers().expect("adjoint exponentials are integral")
                })
                .collect()
        })
    }

    /// Coefficients `N^{i,j}_{α,β}` ordered as in
    /// [`RootSystem::commutator_root_list`].
    pub fn commutator_coefficients(&self, a: Root, b: Root) -> Result<&[CommutatorCoefficient], RootError> {
        if b == self.rs.neg(a) {
            return Err(RootError::OppositeRoots);
        }
        let all = self.coefficients.get_or_init(|| {
            let m = self.rs.len();
            let mut out = vec![Vec::new(); m * m];
            for a in self.rs.roots() {
                for b in self.rs.roots() {
                    if b != self.rs.neg(a) {
                        out[a * m + b] = symbolic::commutator_coefficients(self, a, b);
                    }
                }
            }
            out
        });
        Ok(&all[a * self.rs.len() + b])
    }
}
