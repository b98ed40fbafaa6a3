use serde::Serialize;

use super::smith::diagonalize;
use super::DecompositionError;
use crate::group::{ElementaryWord, GroupElement};
use crate::ring::{Code, RingSpec};
use crate::roots::{Root, RootSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Sign {
    Positive,
    Negative,
}

/// `g = u- t u+` with coordinates in the fixed height order and one torus
/// unit per simple root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigCellFactorization {
    pub lower: Vec<(Root, Code)>,
    pub torus: Vec<Code>,
    pub upper: Vec<(Root, Code)>,
}

impl BigCellFactorization {
    pub fn word(&self, rs: &RootSystem, ring: &RingSpec) -> ElementaryWord {
        let mut w = ElementaryWord::new();
        for &(r, c) in &self.lower {
            w.push(r, c);
        }
        for (i, &a) in self.torus.iter().enumerate() {
            if a != ring.one() {
                w.extend(&torus_as_elementaries(rs, ring, rs.simple_root(i), a).expect("torus units"));
            }
        }
        for &(r, c) in &self.upper {
            w.push(r, c);
        }
        w.trimmed()
    }
}

/// `e_α(-1) e_{-α}(1-a) e_α(a^{-1}) e_{-α}(a(a-1))`, which evaluates to `h_α(a)`.
pub fn torus_as_elementaries(rs: &RootSystem, ring: &RingSpec, root: Root, a: Code) -> Result<ElementaryWord, DecompositionError> {
    let ai = ring.inv(a).ok_or_else(|| crate::group::GroupError::NotUnit(ring.format_element(a)))?;
    let one = ring.one();
    let neg = rs.neg(root);
    let mut w = ElementaryWord::new();
    w.push(root, ring.neg(one));
    w.push(neg, ring.sub(one, a));
    w.push(root, ai);
    w.push(neg, ring.mul(a, ring.sub(a, one)));
    Ok(w)
}

fn read_coordinate(u: &GroupElement, r: Root) -> Result<Code, DecompositionError> {
    let ring = u.ring();
    for (p, row) in u.rep().generator(r).rows.iter().enumerate() {
        for &(q, x) in row {
            if let Some(xi) = ring.inv(ring.from_int(x)) {
                return Ok(ring.mul(u.get(p, q), xi));
            }
        }
    }
    Err(DecompositionError::NotUnipotent)
}

/// Coordinates `c_r` with `u = Π e_r(c_r)` over the roots of one sign in
/// the fixed height order.
pub fn unipotent_coordinates(u: &GroupElement, sign: Sign) -> Result<Vec<(Root, Code)>, DecompositionError> {
    let rs = u.rep().root_system();
    let ring = u.ring();
    let roots: Vec<Root> = match sign {
        Sign::Positive => rs.positive_roots().collect(),
        Sign::Negative => rs.negative_roots().collect(),
    };
    let mut rest = u.clone();
    let mut coords = Vec::with_capacity(roots.len());
    let mut k = 0;
    while k < roots.len() {
        let h = rs.height(roots[k]);
        let level: Vec<Root> = roots[k..].iter().copied().take_while(|&r| rs.height(r) == h).collect();
        let start = coords.len();
        for &r in &level {
            coords.push((r, read_coordinate(&rest, r)?));
        }
        for &(r, c) in &coords[start..] {
            rest.left_mul_elementary(r, ring.neg(c));
        }
        k += level.len();
    }
    if !rest.is_identity() {
        return Err(DecompositionError::NotUnipotent);
    }
    Ok(coords)
}

fn pow_signed(ring: &RingSpec, a: Code, e: i64) -> Code {
    if e >= 0 {
        ring.pow(a, e as u64)
    } else {
        ring.pow(ring.inv(a).expect("unit"), e.unsigned_abs())
    }
}

/// Units `a_i` with `Π_i a_i^{<λ_p, α_i^∨>} = d_p` for every basis weight.
fn solve_torus(g: &GroupElement, diag: &[Code]) -> Result<Vec<Code>, DecompositionError> {
    let rep = g.rep();
    let ring = g.ring();
    let l = rep.root_system().rank();
    let m: Vec<Vec<i64>> = (0..rep.dim()).map(|p| rep.weight_pairings(p).to_vec()).collect();
    let (u, d, v) = diagonalize(&m);
    let units = ring.units();
    let mut b = vec![ring.one(); l];
    for p in 0..rep.dim() {
        let y = (0..rep.dim()).fold(ring.one(), |acc, q| ring.mul(acc, pow_signed(ring, diag[q], u[p][q])));
        let s = if p < l { d[p][p] } else { 0 };
        if s == 0 {
            if y != ring.one() {
                return Err(DecompositionError::TorusUnsolvable);
            }
        } else {
            b[p] = *units
                .iter()
                .find(|&&x| pow_signed(ring, x, s) == y)
                .ok_or(DecompositionError::TorusUnsolvable)?;
        }
    }
    let a: Vec<Code> = (0..l)
        .map(|i| (0..l).fold(ring.one(), |acc, j| ring.mul(acc, pow_signed(ring, b[j], v[i][j]))))
        .collect();
    for (p, row) in m.iter().enumerate() {
        let x = row.iter().zip(&a).fold(ring.one(), |acc, (&e, &ai)| ring.mul(acc, pow_signed(ring, ai, e)));
        if x != diag[p] {
            return Err(DecompositionError::TorusUnsolvable);
        }
    }
    Ok(a)
}

/// Factors `g` through `U- × T × U+`; `NotInBigCell` when a pivot of the
/// triangular factorization is not a unit.
pub fn big_cell_factor(g: &GroupElement) -> Result<BigCellFactorization, DecompositionError> {
    let ring = g.ring();
    if !ring.is_local().0 {
        return Err(DecompositionError::NotLocal(ring.label().to_string()));
    }
    let n = g.dim();
    let mut a: Vec<Vec<Code>> = (0..n).map(|i| (0..n).map(|j| g.get(i, j)).collect()).collect();
    let mut lower = GroupElement::identity(g.rep(), ring);
    for k in 0..n {
        let inv = ring.inv(a[k][k]).ok_or(DecompositionError::NotInBigCell)?;
        for i in k + 1..n {
            let f = ring.mul(a[i][k], inv);
            if f == 0 {
                continue;
            }
            lower.set(i, k, f);
            for j in k..n {
                a[i][j] = ring.sub(a[i][j], ring.mul(f, a[k][j]));
            }
        }
    }
    let diag: Vec<Code> = (0..n).map(|k| a[k][k]).collect();
    let mut upper = GroupElement::identity(g.rep(), ring);
    for k in 0..n {
        let inv = ring.inv(diag[k]).expect("pivot");
        for j in k + 1..n {
            upper.set(k, j, ring.mul(a[k][j], inv));
        }
    }
    let f = BigCellFactorization {
        lower: unipotent_coordinates(&lower, Sign::Negative)?,
        torus: solve_torus(g, &diag)?,
        upper: unipotent_coordinates(&upper, Sign::Positive)?,
    };
    if GroupElement::evaluate(g.rep(), ring, &f.word(g.rep().root_system(), ring)) != *g {
        return Err(DecompositionError::VerificationFailed);
    }
    Ok(f)
}
