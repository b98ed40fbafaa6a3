use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::rep::{GroupError, Invariant, RepKind, Representation};
use crate::ring::{Code, Projection, RingSpec};
use crate::roots::{Root, RootSystem};

/// A square matrix over a finite ring in a fixed representation.
#[derive(Clone)]
pub struct GroupElement {
    rep: Arc<Representation>,
    ring: RingSpec,
    n: usize,
    m: Vec<Code>,
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.ring == other.ring && Arc::ptr_eq(&self.rep, &other.rep)
    }
}
impl Eq for GroupElement {}

impl Hash for GroupElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.m.hash(state);
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} over {}", self.rep.describe(), self.ring)?;
        for row in self.rows_formatted() {
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// One factor `e_root(t)` of an elementary word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub root: Root,
    pub t: Code,
}

/// Serialized letter: root as an integer vector, parameter as an element string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LetterJson {
    pub root: Vec<i64>,
    pub t: String,
}

/// A product of elementary root elements, read left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ElementaryWord {
    pub letters: Vec<Letter>,
}

impl ElementaryWord {
    pub fn new() -> ElementaryWord {
        ElementaryWord::default()
    }

    pub fn single(root: Root, t: Code) -> ElementaryWord {
        ElementaryWord { letters: vec![Letter { root, t }] }
    }

    pub fn push(&mut self, root: Root, t: Code) {
        self.letters.push(Letter { root, t });
    }

    pub fn extend(&mut self, other: &ElementaryWord) {
        self.letters.extend_from_slice(&other.letters);
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Drops letters with parameter zero.
    pub fn trimmed(&self) -> ElementaryWord {
        ElementaryWord { letters: self.letters.iter().copied().filter(|l| l.t != 0).collect() }
    }

    pub fn inverse(&self, ring: &RingSpec) -> ElementaryWord {
        ElementaryWord {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| Letter { root: l.root, t: ring.neg(l.t) })
                .collect(),
        }
    }

    pub fn to_json(&self, rs: &RootSystem, ring: &RingSpec) -> Vec<LetterJson> {
        self.letters
            .iter()
            .map(|l| LetterJson { root: rs.vector(l.root).to_vec(), t: ring.format_element(l.t) })
            .collect()
    }

    pub fn from_json(items: &[LetterJson], rs: &RootSystem, ring: &RingSpec) -> Result<ElementaryWord, GroupError> {
        let mut w = ElementaryWord::new();
        for it in items {
            w.push(rs.lookup(&it.root)?, ring.parse_element(&it.t)?);
        }
        Ok(w)
    }

    pub fn format(&self, rs: &RootSystem, ring: &RingSpec) -> String {
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|l| format!("e{}({})", rs.format_root(l.root), ring.format_element(l.t)))
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }
}

impl GroupElement {
    pub fn identity(rep: &Arc<Representation>, ring: &RingSpec) -> GroupElement {
        let n = rep.dim();
        let mut m = vec![0; n * n];
        for i in 0..n {
            m[i * n + i] = ring.one();
        }
        GroupElement { rep: rep.clone(), ring: ring.clone(), n, m }
    }

    /// Wraps a matrix without checking the group invariant.
    pub fn from_codes(rep: &Arc<Representation>, ring: &RingSpec, m: Vec<Code>) -> Result<GroupElement, GroupError> {
        let n = rep.dim();
        if m.len() != n * n {
            return Err(GroupError::BadMatrix(format!("expected {} entries, found {}", n * n, m.len())));
        }
        if m.iter().any(|&c| c >= ring.size()) {
            return Err(GroupError::BadMatrix("entry outside the ring".into()));
        }
        Ok(GroupElement { rep: rep.clone(), ring: ring.clone(), n, m })
    }

    /// Parses a row-major matrix of element strings and checks the invariant.
    pub fn from_strings(rep: &Arc<Representation>, ring: &RingSpec, rows: &[Vec<String>]) -> Result<GroupElement, GroupError> {
        let n = rep.dim();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(GroupError::BadMatrix(format!("expected a {n}x{n} matrix")));
        }
        let mut m = Vec::with_capacity(n * n);
        for r in rows {
            for s in r {
                m.push(ring.parse_element(s)?);
            }
        }
        let g = GroupElement::from_codes(rep, ring, m)?;
        if !g.preserves_invariant() {
            return Err(GroupError::NotInGroup(rep.describe()));
        }
        Ok(g)
    }

    pub fn elementary(rep: &Arc<Representation>, ring: &RingSpec, root: Root, t: Code) -> GroupElement {
        let mut g = GroupElement::identity(rep, ring);
        g.left_mul_elementary(root, t);
        g
    }

    pub fn evaluate(rep: &Arc<Representation>, ring: &RingSpec, word: &ElementaryWord) -> GroupElement {
        let mut g = GroupElement::identity(rep, ring);
        for l in &word.letters {
            g.right_mul_elementary(l.root, l.t);
        }
        g
    }

    pub fn rep(&self) -> &Arc<Representation> {
        &self.rep
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Code {
        self.m[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Code) {
        self.m[i * self.n + j] = v;
    }

    pub fn codes(&self) -> &[Code] {
        &self.m
    }

    pub fn rows_formatted(&self) -> Vec<Vec<String>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.ring.format_element(self.get(i, j))).collect())
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        let one = self.ring.one();
        (0..self.n).all(|i| (0..self.n).all(|j| self.get(i, j) == if i == j { one } else { 0 }))
    }

    fn check(&self, other: &GroupElement) -> Result<(), GroupError> {
        if !Arc::ptr_eq(&self.rep, &other.rep) || self.ring != other.ring {
            return Err(GroupError::Mismatch);
        }
        Ok(())
    }

    /// `self <- e_root(t) self`, as row operations with the divided powers.
    pub fn left_mul_elementary(&mut self, root: Root, t: Code) {
        if t == 0 {
            return;
        }
        let r = &self.ring;
        let n = self.n;
        let src = self.m.clone();
        let mut tk = r.one();
        let rep = self.rep.clone();
        for d in rep.divided_powers(root) {
            tk = r.mul(tk, t);
            for (row, entries) in d.rows.iter().enumerate() {
                for &(col, v) in entries {
                    let c = r.mul(tk, r.from_int(v));
                    for j in 0..n {
                        let x = src[col * n + j];
                        if x != 0 {
                            let cur = self.m[row * n + j];
                            self.m[row * n + j] = r.add(cur, r.mul(c, x));
                        }
                    }
                }
            }
        }
    }

    /// `self <- self e_root(t)`, as column operations.
    pub fn right_mul_elementary(&mut self, root: Root, t: Code) {
        if t == 0 {
            return;
        }
        let r = &self.ring;
        let n = self.n;
        let src = self.m.clone();
        let mut tk = r.one();
        let rep = self.rep.clone();
        for d in rep.divided_powers(root) {
            tk = r.mul(tk, t);
            for (row, entries) in d.rows.iter().enumerate() {
                for &(col, v) in entries {
                    let c = r.mul(tk, r.from_int(v));
                    for i in 0..n {
                        let x = src[i * n + row];
                        if x != 0 {
                            let cur = self.m[i * n + col];
                            self.m[i * n + col] = r.add(cur, r.mul(x, c));
                        }
                    }
                }
            }
        }
    }

    pub fn mul(&self, other: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &GroupElement) -> GroupElement {
        let r = &self.ring;
        let n = self.n;
        let mut m = vec![0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.m[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let b = other.m[k * n + j];
                    if b != 0 {
                        m[i * n + j] = r.add(m[i * n + j], r.mul(a, b));
                    }
                }
            }
        }
        GroupElement { rep: self.rep.clone(), ring: self.ring.clone(), n, m }
    }

    /// Characteristic polynomial `det(xI - g)` by the division-free
    /// Berkowitz recursion, coefficients from the leading one down.
    pub fn characteristic_polynomial(&self) -> Vec<Code> {
        let r = &self.ring;
        let n = self.n;
        let a = |i: usize, j: usize| self.m[i * n + j];
        let mut poly = vec![r.one(), r.neg(a(0, 0))];
        for k in 1..n {
            // leading principal block of size k and the border of row/column k
            let row: Vec<Code> = (0..k).map(|j| a(k, j)).collect();
            let mut col: Vec<Code> = (0..k).map(|i| a(i, k)).collect();
            let mut toeplitz = vec![r.one(), r.neg(a(k, k))];
            for _ in 0..k {
                let v: Code = row.iter().zip(&col).fold(0, |s, (&x, &y)| r.add(s, r.mul(x, y)));
                toeplitz.push(r.neg(v));
                let mut next = vec![0; k];
                for (i, slot) in next.iter_mut().enumerate() {
                    *slot = (0..k).fold(0, |s, j| r.add(s, r.mul(a(i, j), col[j])));
                }
                col = next;
            }
            let mut out = vec![0; k + 2];
            for (i, o) in out.iter_mut().enumerate() {
                for (j, &p) in poly.iter().enumerate() {
                    if i >= j && i - j < toeplitz.len() {
                        *o = r.add(*o, r.mul(toeplitz[i - j], p));
                    }
                }
            }
            poly = out;
        }
        poly
    }

    pub fn determinant(&self) -> Code {
        let c = self.characteristic_polynomial();
        let d = c[self.n];
        if self.n % 2 == 1 {
            self.ring.neg(d)
        } else {
            d
        }
    }

    /// Inverse from the Cayley-Hamilton identity.
    pub fn inv(&self) -> Result<GroupElement, GroupError> {
        let r = &self.ring;
        let n = self.n;
        let c = self.characteristic_polynomial();
        let c0 = c[n];
        let c0_inv = r
            .inv(c0)
            .ok_or_else(|| GroupError::NotUnit(r.format_element(self.determinant())))?;
        // g^{-1} = -(1/c0) (g^{n-1} + c_1 g^{n-2} + ... + c_{n-1})
        let mut acc = GroupElement::identity(&self.rep, r);
        for &ck in &c[1..n] {
            acc = acc.mul_unchecked(self);
            for i in 0..n {
                acc.m[i * n + i] = r.add(acc.m[i * n + i], ck);
            }
        }
        let scale = r.neg(c0_inv);
        for x in acc.m.iter_mut() {
            *x = r.mul(*x, scale);
        }
        Ok(acc)
    }

    /// `g h g^{-1} h^{-1}`.
    pub fn commutator(&self, other: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check(other)?;
        let gi = self.inv()?;
        let hi = other.inv()?;
        Ok(self.mul_unchecked(other).mul_unchecked(&gi).mul_unchecked(&hi))
    }

    pub fn transpose(&self) -> GroupElement {
        let n = self.n;
        let mut m = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                m[j * n + i] = self.m[i * n + j];
            }
        }
        GroupElement { rep: self.rep.clone(), ring: self.ring.clone(), n, m }
    }

    /// Entrywise image under a ring surjection.
    pub fn reduce(&self, proj: &Projection) -> GroupElement {
        GroupElement {
            rep: self.rep.clone(),
            ring: proj.target.clone(),
            n: self.n,
            m: self.m.iter().map(|&c| proj.apply(c)).collect(),
        }
    }

    pub fn in_congruence_kernel(&self, proj: &Projection) -> bool {
        self.reduce(proj).is_identity()
    }

    /// Determinant one, form preservation, or bracket preservation on the
    /// simple root vectors and their negatives.
    pub fn preserves_invariant(&self) -> bool {
        let r = &self.ring;
        let n = self.n;
        match self.rep.invariant() {
            Invariant::Determinant => self.determinant() == r.one(),
            Invariant::Form(j) => {
                let jm = GroupElement {
                    rep: self.rep.clone(),
                    ring: r.clone(),
                    n,
                    m: {
                        let mut m = vec![0; n * n];
                        for (a, b, v) in j.entries() {
                            m[a * n + b] = r.from_int(v);
                        }
                        m
                    },
                };
                let lhs = self.transpose().mul_unchecked(&jm).mul_unchecked(self);
                lhs.m == jm.m && (r.is_unit(self.determinant()))
            }
            Invariant::Bracket => self.preserves_bracket(),
        }
    }

    fn preserves_bracket(&self) -> bool {
        let rep = &self.rep;
        debug_assert_eq!(rep.kind, RepKind::Adjoint);
        let rs = rep.root_system();
        let r = &self.ring;
        let n = self.n;
        if !r.is_unit(self.determinant()) {
            return false;
        }
        let mut probes: Vec<usize> = Vec::new();
        for &s in rs.simple_roots() {
            for x in [s, rs.neg(s)] {
                probes.push((0..n).find(|&p| rep.weight(p) == rs.vector(x)).expect("root vector position"));
            }
        }
        let column = |q: usize| -> Vec<Code> { (0..n).map(|i| self.get(i, q)).collect() };
        let bracket_vecs = |u: &[Code], v: &[Code]| -> Vec<Code> {
            let mut out = vec![0; n];
            for (a, &x) in u.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (b, &y) in v.iter().enumerate() {
                    if y == 0 {
                        continue;
                    }
                    let xy = r.mul(x, y);
                    for (z, c) in rep.adjoint_bracket(a, b) {
                        out[z] = r.add(out[z], r.mul(xy, r.from_int(c)));
                    }
                }
            }
            out
        };
        for &p in &probes {
            for &q in &probes {
                let lhs = bracket_vecs(&column(p), &column(q));
                let mut rhs = vec![0; n];
                for (z, c) in rep.adjoint_bracket(p, q) {
                    let col = column(z);
                    for i in 0..n {
                        rhs[i] = r.add(rhs[i], r.mul(col[i], r.from_int(c)));
                    }
                }
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }
}

/// `w_α(u) = e_α(u) e_{-α}(-u^{-1}) e_α(u)` as a word.
pub fn weyl_word(rs: &RootSystem, ring: &RingSpec, root: Root, u: Code) -> Result<ElementaryWord, GroupError> {
    let ui = ring.inv(u).ok_or_else(|| GroupError::NotUnit(ring.format_element(u)))?;
    let mut w = ElementaryWord::new();
    w.push(root, u);
    w.push(rs.neg(root), ring.neg(ui));
    w.push(root, u);
    Ok(w)
}

/// `(w_α(u), h_α(u))` with `h_α(u) = w_α(u) w_α(1)^{-1}`.
pub fn torus_and_weyl(
    rep: &Arc<Representation>,
    ring: &RingSpec,
    root: Root,
    u: Code,
) -> Result<(GroupElement, GroupElement), GroupError> {
    let rs = rep.root_system();
    let w = GroupElement::evaluate(rep, ring, &weyl_word(rs, ring, root, u)?);
    // w_α(1)^{-1} = w_α(-1)
    let w1_inv = GroupElement::evaluate(rep, ring, &weyl_word(rs, ring, root, ring.neg(ring.one()))?);
    let h = w.mul_unchecked(&w1_inv);
    Ok((w, h))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl3() -> Arc<Representation> {
        Representation::for_type("A2", RepKind::Defining).unwrap()
    }

    #[test]
    fn elementary_in_sl3() {
        let rep = sl3();
        let ring = RingSpec::zmod(5).unwrap();
        let rs = rep.root_system();
        let a = rs.lookup(&[1, -1, 0]).unwrap();
        let g = GroupElement::elementary(&rep, &ring, a, 3);
        assert_eq!(g.codes(), &[1, 3, 0, 0, 1, 0, 0, 0, 1]);
        assert!(GroupElement::elementary(&rep, &ring, a, 0).is_identity());
    }

    #[test]
    fn a2_commutator_relation_over_z6() {
        let rep = sl3();
        let ring = RingSpec::zmod(6).unwrap();
        let rs = rep.root_system();
        let e12 = rs.lookup(&[1, -1, 0]).unwrap();
        let e23 = rs.lookup(&[0, 1, -1]).unwrap();
        let e13 = rs.lookup(&[1, 0, -1]).unwrap();
        for r in ring.elements() {
            for s in ring.elements() {
                let c = GroupElement::elementary(&rep, &ring, e12, r)
                    .commutator(&GroupElement::elementary(&rep, &ring, e23, s))
                    .unwrap();
                assert_eq!(c, GroupElement::elementary(&rep, &ring, e13, ring.mul(r, s)));
            }
        }
    }

    #[test]
    fn torus_in_sl3_mod_5() {
        let rep = sl3();
        let ring = RingSpec::zmod(5).unwrap();
        let a = rep.root_system().lookup(&[1, -1, 0]).unwrap();
        let (w, h) = torus_and_weyl(&rep, &ring, a, 2).unwrap();
        assert_eq!(h.codes(), &[2, 0, 0, 0, 3, 0, 0, 0, 1]);
        let (w1, h1) = torus_and_weyl(&rep, &ring, a, 1).unwrap();
        assert!(h1.is_identity());
        // w_α(1) restricted to the α block is antidiagonal (1, -1)
        assert_eq!(&w1.codes()[..5], &[0, 1, 0, 4, 0]);
        assert!(w.preserves_invariant());
        assert!(torus_and_weyl(&rep, &ring, a, 0).is_err());
    }

    #[test]
    fn inverse_and_determinant() {
        let ring = RingSpec::parse("Z/9").unwrap();
        for (l, k) in [("A3", RepKind::Defining), ("C2", RepKind::Defining), ("B2", RepKind::Defining), ("G2", RepKind::Adjoint)] {
            let rep = Representation::for_type(l, k).unwrap();
            let rs = rep.root_system().clone();
            let mut word = ElementaryWord::new();
            for (i, r) in rs.roots().enumerate() {
                word.push(r, ring.from_int(i as i64 + 2));
            }
            let g = GroupElement::evaluate(&rep, &ring, &word);
            let gi = g.inv().unwrap();
            assert!(g.mul(&gi).unwrap().is_identity(), "{l}");
            assert_eq!(gi, GroupElement::evaluate(&rep, &ring, &word.inverse(&ring)), "{l}");
            assert!(g.preserves_invariant(), "{l}");
            assert_eq!(g.determinant(), 1, "{l}");
        }
    }

    #[test]
    fn invariant_rejects_non_members() {
        let ring = RingSpec::zmod(5).unwrap();
        let rep = Representation::for_type("C2", RepKind::Defining).unwrap();
        let mut g = GroupElement::identity(&rep, &ring);
        g.set(0, 1, 1);
        assert!(!g.preserves_invariant());
        let adj = Representation::for_type("A2", RepKind::Adjoint).unwrap();
        let mut g = GroupElement::identity(&adj, &ring);
        g.set(0, 0, 2);
        assert!(!g.preserves_invariant());
    }
}
