use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chevalley::ChevalleyBasis;
use crate::intmat::IntMatrix;
use crate::roots::{Family, Root, RootSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RepKind {
    Defining,
    Adjoint,
}

impl fmt::Display for RepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RepKind::Defining => "defining",
            RepKind::Adjoint => "adjoint",
        })
    }
}

impl FromStr for RepKind {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "defining" => Ok(RepKind::Defining),
            "adjoint" => Ok(RepKind::Adjoint),
            _ => Err(GroupError::UnknownRep(s.to_string())),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("unknown representation `{0}` (expected defining or adjoint)")]
    UnknownRep(String),
    #[error("no defining representation is implemented for type {0}")]
    Unsupported(String),
    #[error("representation or ring mismatch")]
    Mismatch,
    #[error("{0} is not a unit")]
    NotUnit(String),
    #[error("matrix does not preserve the invariant of the {0} representation")]
    NotInGroup(String),
    #[error("closure exceeded the cap of {0} elements")]
    CapExceeded(usize),
    #[error("malformed matrix: {0}")]
    BadMatrix(String),
    #[error(transparent)]
    Ring(#[from] crate::ring::RingError),
    #[error(transparent)]
    Root(#[from] crate::roots::RootError),
}

/// The invariant a defining representation preserves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Invariant {
    /// Determinant one.
    Determinant,
    /// `g^T J g = J` for the given Gram matrix.
    Form(IntMatrix),
    /// Conjugation preserves the structure constants.
    Bracket,
}

/// A faithful-on-unipotents integral representation of a Chevalley group.
pub struct Representation {
    pub kind: RepKind,
    basis: Arc<ChevalleyBasis>,
    dim: usize,
    generators: Vec<IntMatrix>,
    divided: Vec<Vec<IntMatrix>>,
    weights: Vec<Vec<i64>>,
    pairings: Vec<Vec<i64>>,
    invariant: Invariant,
    labels: Vec<String>,
    /// Adjoint only: structure-table index of each basis position.
    table_order: Option<(Vec<usize>, Vec<usize>)>,
}

impl fmt::Debug for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Representation({} {})", self.root_system().label(), self.kind)
    }
}

type Q = Ratio<i64>;
type QMat = Vec<Vec<Q>>;

fn qzero(n: usize) -> QMat {
    vec![vec![Q::from_integer(0); n]; n]
}

fn qmul(a: &QMat, b: &QMat) -> QMat {
    let n = a.len();
    let mut c = qzero(n);
    for i in 0..n {
        for k in 0..n {
            if *a[i][k].numer() == 0 {
                continue;
            }
            for j in 0..n {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    c
}

fn qsub(a: &QMat, b: &QMat) -> QMat {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect())
        .collect()
}

fn qtranspose(a: &QMat) -> QMat {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i]).collect()).collect()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Scales to a primitive integer matrix whose entry at `(a, b)` is positive.
fn primitive(m: &QMat, a: usize, b: usize) -> QMat {
    let mut l = 1i64;
    for r in m {
        for x in r {
            l = l / gcd(l, *x.denom()) * x.denom();
        }
    }
    let mut g = 0i64;
    for r in m {
        for x in r {
            g = gcd(g, (x * l).to_integer());
        }
    }
    let mut k = Q::new(l, g.max(1));
    if m[a][b] * k < Q::from_integer(0) {
        k = -k;
    }
    m.iter().map(|r| r.iter().map(|x| x * k).collect()).collect()
}

fn to_int(m: &QMat) -> IntMatrix {
    let n = m.len();
    IntMatrix::from_entries(
        n,
        (0..n).flat_map(|i| {
            (0..n).map(move |j| {
                assert!(m[i][j].is_integer(), "non-integral generator");
                (i, j, m[i][j].to_integer())
            })
        }),
    )
}

fn to_q(m: &IntMatrix) -> QMat {
    m.to_dense()
        .into_iter()
        .map(|r| r.into_iter().map(Q::from_integer).collect())
        .collect()
}

struct DefiningModel {
    weights: Vec<Vec<i64>>,
    form: Option<IntMatrix>,
}

fn defining_model(rs: &RootSystem) -> Option<DefiningModel> {
    let l = rs.rank();
    let eps = |i: usize, s: i64| {
        let mut v = vec![0; l];
        v[i] = s;
        v
    };
    match rs.cartan().family {
        Family::A => Some(DefiningModel {
            weights: (0..=l)
                .map(|a| {
                    let mut v = vec![0; l + 1];
                    v[a] = 1;
                    v
                })
                .collect(),
            form: None,
        }),
        Family::C | Family::D => {
            let n = 2 * l;
            let weights = (0..n)
                .map(|a| if a < l { eps(a, 1) } else { eps(n - 1 - a, -1) })
                .collect();
            let skew = rs.cartan().family == Family::C;
            let form = IntMatrix::from_entries(
                n,
                (0..n).map(|a| (a, n - 1 - a, if skew && a >= l { -1 } else { 1 })),
            );
            Some(DefiningModel { weights, form: Some(form) })
        }
        Family::B => {
            let n = 2 * l + 1;
            let weights = (0..n)
                .map(|a| match a.cmp(&l) {
                    std::cmp::Ordering::Less => eps(a, 1),
                    std::cmp::Ordering::Equal => vec![0; l],
                    std::cmp::Ordering::Greater => eps(n - 1 - a, -1),
                })
                .collect();
            let form = IntMatrix::from_entries(n, (0..n).map(|a| (a, n - 1 - a, if a == l { 2 } else { 1 })));
            Some(DefiningModel { weights, form: Some(form) })
        }
        _ => None,
    }
}

impl Representation {
    pub fn new(basis: Arc<ChevalleyBasis>, kind: RepKind) -> Result<Representation, GroupError> {
        match kind {
            RepKind::Adjoint => Ok(Representation::adjoint(basis)),
            RepKind::Defining => Representation::defining(basis),
        }
    }

    pub fn for_type(label: &str, kind: RepKind) -> Result<Arc<Representation>, GroupError> {
        let rs = match label.trim() {
            "A1" => RootSystem::a1(),
            l => RootSystem::parse(l)?,
        };
        let rs = Arc::new(rs);
        Ok(Arc::new(Representation::new(Arc::new(ChevalleyBasis::new(rs)), kind)?))
    }

    /// `SL_2` as the defining representation of the rank-one system.
    pub fn sl2() -> Arc<Representation> {
        let basis = Arc::new(ChevalleyBasis::new(Arc::new(RootSystem::a1())));
        Arc::new(Representation::defining(basis).expect("A1 has a defining model"))
    }

    fn adjoint(basis: Arc<ChevalleyBasis>) -> Representation {
        let rs = basis.root_system().clone();
        let d = basis.dim();
        let m = rs.len();
        // decreasing height, Cartan elements at height zero
        let mut order: Vec<usize> = (0..d).collect();
        let height = |x: usize| if x < m { rs.height(x) } else { 0 };
        order.sort_by_key(|&x| (-height(x), x));
        let mut position = vec![0; d];
        for (p, &x) in order.iter().enumerate() {
            position[x] = p;
        }
        let pos = &position;
        let generators: Vec<IntMatrix> = rs
            .roots()
            .map(|r| {
                IntMatrix::from_entries(
                    d,
                    (0..d).flat_map(|y| {
                        basis
                            .bracket(r, y)
                            .into_iter()
                            .map(move |(z, v)| (pos[z], pos[y], v))
                            .collect::<Vec<_>>()
                    }),
                )
            })
            .collect();
        let weights: Vec<Vec<i64>> = order
            .iter()
            .map(|&x| if x < m { rs.vector(x).to_vec() } else { vec![0; rs.vector(0).len()] })
            .collect();
        let labels = order.iter().map(|&x| basis.basis_label(x)).collect();
        let mut rep = Representation::finish(basis, RepKind::Adjoint, generators, weights, Invariant::Bracket, labels);
        rep.table_order = Some((order, position));
        rep
    }

    fn defining(basis: Arc<ChevalleyBasis>) -> Result<Representation, GroupError> {
        let rs = basis.root_system().clone();
        let model = defining_model(&rs).ok_or_else(|| GroupError::Unsupported(rs.label()))?;
        let n = model.weights.len();
        let sigma: Box<dyn Fn(&QMat) -> QMat> = match &model.form {
            None => Box::new(|x: &QMat| qzero(x.len())),
            Some(j) => {
                let jq = to_q(j);
                let mut jinv = qzero(n);
                for (a, b, v) in j.entries() {
                    jinv[b][a] = Q::new(1, v);
                }
                Box::new(move |x: &QMat| qmul(&qmul(&jinv, &qtranspose(x)), &jq))
            }
        };
        let find_unit = |root: &[i64]| -> (usize, usize) {
            for a in 0..n {
                for b in 0..n {
                    let d: Vec<i64> = model.weights[a]
                        .iter()
                        .zip(&model.weights[b])
                        .map(|(x, y)| x - y)
                        .collect();
                    if d == root {
                        return (a, b);
                    }
                }
            }
            panic!("no matrix unit of weight {root:?}");
        };
        let root_vector = |root: &[i64]| -> QMat {
            let (a, b) = find_unit(root);
            let mut e = qzero(n);
            e[a][b] = Q::from_integer(1);
            primitive(&qsub(&e, &sigma(&e)), a, b)
        };
        let bracket = |x: &QMat, y: &QMat| qsub(&qmul(x, y), &qmul(y, x));
        let mut gens: Vec<Option<QMat>> = vec![None; rs.len()];
        for &s in rs.simple_roots() {
            let x = root_vector(rs.vector(s));
            let y0 = root_vector(rs.vector(rs.neg(s)));
            let h = bracket(&x, &y0);
            let hx = bracket(&h, &x);
            let (a, b) = find_unit(rs.vector(s));
            let lambda = hx[a][b] / x[a][b];
            let k = Q::from_integer(2) / lambda;
            let y: QMat = y0.iter().map(|r| r.iter().map(|v| v * k).collect()).collect();
            gens[s] = Some(x);
            gens[rs.neg(s)] = Some(y);
        }
        for &(xi, a, b) in basis.extraspecial_pairs() {
            for (t, p, q) in [(xi, a, b), (rs.neg(xi), rs.neg(a), rs.neg(b))] {
                let c = bracket(gens[p].as_ref().unwrap(), gens[q].as_ref().unwrap());
                let k = Q::new(1, basis.n(p, q));
                gens[t] = Some(c.iter().map(|r| r.iter().map(|v| v * k).collect()).collect());
            }
        }
        let generators: Vec<IntMatrix> = gens.iter().map(|g| to_int(g.as_ref().unwrap())).collect();
        let invariant = match model.form {
            None => Invariant::Determinant,
            Some(j) => Invariant::Form(j),
        };
        let labels = (0..n).map(|a| format!("v{}", a + 1)).collect();
        Ok(Representation::finish(basis, RepKind::Defining, generators, model.weights, invariant, labels))
    }

    fn finish(
        basis: Arc<ChevalleyBasis>,
        kind: RepKind,
        generators: Vec<IntMatrix>,
        weights: Vec<Vec<i64>>,
        invariant: Invariant,
        labels: Vec<String>,
    ) -> Representation {
        let rs = basis.root_system().clone();
        let divided: Vec<Vec<IntMatrix>> = generators
            .iter()
            .map(|x| x.divided_powers().expect("integral divided powers"))
            .collect();
        let pairings = weights
            .iter()
            .map(|w| {
                rs.simple_roots()
                    .iter()
                    .map(|&s| 2 * rs.inner_vectors(w, rs.vector(s)) / rs.norm(s))
                    .collect()
            })
            .collect();
        let dim = generators[0].n;
        Representation {
            kind,
            basis,
            dim,
            generators,
            divided,
            weights,
            pairings,
            invariant,
            labels,
            table_order: None,
        }
    }

    /// Lie bracket of two adjoint basis vectors, in basis positions.
    pub fn adjoint_bracket(&self, p: usize, q: usize) -> Vec<(usize, i64)> {
        let (order, position) = self.table_order.as_ref().expect("adjoint representation");
        self.basis
            .bracket(order[p], order[q])
            .into_iter()
            .map(|(z, v)| (position[z], v))
            .collect()
    }

    pub fn basis(&self) -> &Arc<ChevalleyBasis> {
        &self.basis
    }

    pub fn root_system(&self) -> &Arc<RootSystem> {
        self.basis.root_system()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generator(&self, r: Root) -> &IntMatrix {
        &self.generators[r]
    }

    /// `X_r^k / k!` for `k = 1, 2, ...`.
    pub fn divided_powers(&self, r: Root) -> &[IntMatrix] {
        &self.divided[r]
    }

    pub fn weight(&self, a: usize) -> &[i64] {
        &self.weights[a]
    }

    /// `<wt(v_a), α_i^∨>` for each simple index `i`.
    pub fn weight_pairings(&self, a: usize) -> &[i64] {
        &self.pairings[a]
    }

    pub fn invariant(&self) -> &Invariant {
        &self.invariant
    }

    pub fn basis_labels(&self) -> &[String] {
        &self.labels
    }

    pub fn describe(&self) -> String {
        let rs = self.root_system();
        let model = match (self.kind, rs.cartan().family) {
            (RepKind::Adjoint, _) => "adjoint",
            (_, Family::A) => "SL",
            (_, Family::C) => "Sp",
            (_, Family::B) | (_, Family::D) => "SO",
            _ => "defining",
        };
        format!("{} {} (degree {})", rs.label(), model, self.dim)
    }

    /// True when this matrix model is the simply connected group; `SO` and
    /// adjoint models differ from it by a central kernel.
    pub fn is_universal(&self) -> bool {
        let f = self.root_system().cartan().family;
        match self.kind {
            RepKind::Defining => matches!(f, Family::A | Family::C),
            RepKind::Adjoint => matches!(f, Family::G | Family::F) || (f == Family::E && self.root_system().rank() == 8),
        }
    }

    /// Checks every bracket of generators against the structure table and
    /// the diagonal action of the Cartan elements on weights.
    pub fn verify_structure(&self) -> bool {
        let rs = self.root_system();
        let b = &self.basis;
        let h: Vec<IntMatrix> = rs
            .simple_roots()
            .iter()
            .map(|&s| self.generators[s].bracket(&self.generators[rs.neg(s)]))
            .collect();
        for (i, hi) in h.iter().enumerate() {
            let expected = IntMatrix::from_entries(self.dim, (0..self.dim).map(|a| (a, a, self.pairings[a][i])));
            if *hi != expected {
                return false;
            }
        }
        for r in rs.roots() {
            for s in rs.roots() {
                let c = self.generators[r].bracket(&self.generators[s]);
                let expected = if s == rs.neg(r) {
                    b.coroot(r)
                        .iter()
                        .zip(&h)
                        .fold(IntMatrix::zero(self.dim), |acc, (&k, hi)| acc.add_scaled(hi, k))
                } else if let Some(t) = rs.sum(r, s) {
                    IntMatrix::zero(self.dim).add_scaled(&self.generators[t], b.n(r, s))
                } else {
                    IntMatrix::zero(self.dim)
                };
                if c != expected {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defining_models_match_structure_table() {
        for l in ["A2", "A3", "B2", "B3", "C2", "C3", "D4"] {
            let rep = Representation::for_type(l, RepKind::Defining).unwrap();
            assert!(rep.verify_structure(), "{l}");
            for r in rep.root_system().roots() {
                assert!(rep.divided_powers(r).len() <= 3, "{l}");
            }
        }
        assert!(Representation::sl2().verify_structure());
    }

    #[test]
    fn adjoint_models_match_structure_table() {
        for l in ["A2", "B2", "G2", "C3"] {
            let rep = Representation::for_type(l, RepKind::Adjoint).unwrap();
            assert!(rep.verify_structure(), "{l}");
            assert_eq!(rep.dim(), rep.root_system().len() + rep.root_system().rank());
        }
    }

    #[test]
    fn positive_roots_are_upper_triangular() {
        for (l, k) in [("A3", RepKind::Defining), ("B3", RepKind::Defining), ("C2", RepKind::Defining), ("G2", RepKind::Adjoint)] {
            let rep = Representation::for_type(l, k).unwrap();
            let rs = rep.root_system().clone();
            for r in rs.positive_roots() {
                assert!(rep.generator(r).entries().all(|(i, j, _)| i < j), "{l}");
                assert!(rep.generator(rs.neg(r)).entries().all(|(i, j, _)| i > j), "{l}");
            }
        }
    }

    #[test]
    fn unsupported_defining() {
        assert!(matches!(Representation::for_type("G2", RepKind::Defining), Err(GroupError::Unsupported(_))));
    }
}
