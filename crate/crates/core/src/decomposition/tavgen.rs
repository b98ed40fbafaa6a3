//! Left multiplication on `(U+ U-)^4`, by induction on the rank.
//!
//! For a letter `e_γ(t)` with `γ` negative, a simple root `α` outside the
//! support of `γ` splits each block as `u = u0 u1` with `u0` in the Levi part
//! `E_0` and `u1` in the unipotent radical `U_1^±`. Since `E_0` normalizes
//! `U_1^±`, the product regroups as `(u0_1 ... u0_8) Π V_k` with
//! `V_k = P_k^{-1} u1_k P_k`, `P_k = u0_{k+1} ... u0_8`. The letter then acts
//! on the `E_0` part only, and the blocks are reassembled.

use std::collections::HashMap;
use std::sync::Arc;

use super::bigcell::{unipotent_coordinates, Sign};
use super::{check_supported, Bounds, DecompositionError, DecompositionReport};
use crate::group::{weyl_conjugation_check, weyl_lift_inverse_word, weyl_lift_word, ElementaryWord, GroupElement, Representation};
use crate::ring::{Code, RingSpec};
use crate::roots::Root;

/// Eight unipotent blocks `u1+ u1- u2+ u2- u3+ u3- u4+ u4-`, each as
/// coordinates in the fixed height order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TavgenBlocks {
    pub blocks: Vec<Vec<(Root, Code)>>,
}

impl TavgenBlocks {
    pub fn word(&self) -> ElementaryWord {
        let mut w = ElementaryWord::new();
        for b in &self.blocks {
            for &(r, c) in b {
                w.push(r, c);
            }
        }
        w.trimmed()
    }
}

fn sign_of(k: usize) -> Sign {
    if k.is_multiple_of(2) {
        Sign::Positive
    } else {
        Sign::Negative
    }
}

struct Context<'a> {
    rep: &'a Arc<Representation>,
    ring: &'a RingSpec,
}

impl Context<'_> {
    fn identity(&self) -> GroupElement {
        GroupElement::identity(self.rep, self.ring)
    }

    /// Rewrites letters so that every negative root is simple:
    /// `e_γ(t) = ŵ e_{α_i}(ε t) ŵ^{-1}` with `w(α_i) = γ`.
    fn simple_letters(&self, word: &ElementaryWord) -> Result<ElementaryWord, DecompositionError> {
        let rs = self.rep.root_system();
        let mut cache: HashMap<Root, (ElementaryWord, Root, i64, ElementaryWord)> = HashMap::new();
        let mut out = ElementaryWord::new();
        for l in &word.letters {
            if rs.is_positive(l.root) || rs.height(l.root) == -1 {
                out.push(l.root, l.t);
                continue;
            }
            if let std::collections::hash_map::Entry::Vacant(e) = cache.entry(l.root) {
                let a = *rs
                    .simple_roots()
                    .iter()
                    .find(|&&a| rs.norm(a) == rs.norm(l.root))
                    .expect("every length occurs among simple roots");
                let w = rs.same_length_conjugator(a, l.root).map_err(crate::group::GroupError::from)?;
                debug_assert_eq!(w.act(rs, a), l.root);
                let eps = weyl_conjugation_check(self.rep, self.ring, &w, a, 0).ok_or(DecompositionError::VerificationFailed)?;
                let entry = (weyl_lift_word(self.rep, self.ring, &w), a, eps, weyl_lift_inverse_word(self.rep, self.ring, &w));
                e.insert(entry);
            }
            let (lift, a, eps, lift_inv) = &cache[&l.root];
            out.extend(lift);
            out.push(*a, self.ring.mul(self.ring.from_int(*eps), l.t));
            out.extend(lift_inv);
        }
        Ok(out)
    }

    /// `blocks <- e_γ(t) blocks` within the subsystem on `simples`.
    fn left_mul(&self, blocks: &mut [GroupElement], simples: &[usize], gamma: Root, t: Code) -> Result<(), DecompositionError> {
        let rs = self.rep.root_system();
        if rs.is_positive(gamma) {
            blocks[0].left_mul_elementary(gamma, t);
            return Ok(());
        }
        if simples.len() == 1 {
            return self.base_case(blocks, gamma, t);
        }
        let j = *simples
            .iter()
            .find(|&&j| rs.coefficients(gamma)[j] == 0)
            .expect("negative letters are simple");
        let ring = self.ring;
        let mut u0 = Vec::with_capacity(8);
        let mut u0_inv = Vec::with_capacity(8);
        let mut u1 = Vec::with_capacity(8);
        for (k, b) in blocks.iter().enumerate() {
            let coords = unipotent_coordinates(b, sign_of(k))?;
            let levi: Vec<_> = coords.into_iter().filter(|&(r, c)| c != 0 && rs.coefficients(r)[j] == 0).collect();
            let mut x = self.identity();
            for &(r, c) in &levi {
                x.right_mul_elementary(r, c);
            }
            let mut xi = self.identity();
            for &(r, c) in levi.iter().rev() {
                xi.right_mul_elementary(r, ring.neg(c));
            }
            u1.push(xi.mul_unchecked(b));
            u0.push(x);
            u0_inv.push(xi);
        }
        let (p, p_inv) = suffix_products(&u0, &u0_inv, self.identity());
        let v: Vec<GroupElement> = (0..8).map(|k| p_inv[k].mul_unchecked(&u1[k]).mul_unchecked(&p[k])).collect();
        let rest: Vec<usize> = simples.iter().copied().filter(|&i| i != j).collect();
        self.left_mul(&mut u0, &rest, gamma, t)?;
        let new_inv = u0.iter().map(GroupElement::inv).collect::<Result<Vec<_>, _>>()?;
        let (p, p_inv) = suffix_products(&u0, &new_inv, self.identity());
        for k in 0..8 {
            blocks[k] = u0[k].mul_unchecked(&p[k]).mul_unchecked(&v[k]).mul_unchecked(&p_inv[k]);
        }
        Ok(())
    }

    /// Rank one: compute in `SL_2` and rewrite as `u+ u- u+`, after one
    /// extra `e_-(1)` when the lower left entry is not a unit.
    fn base_case(&self, blocks: &mut [GroupElement], gamma: Root, t: Code) -> Result<(), DecompositionError> {
        let rs = self.rep.root_system();
        let ring = self.ring;
        let beta = rs.neg(gamma);
        let mut m = [ring.one(), 0, 0, ring.one()];
        let mul = |m: [Code; 4], upper: bool, x: Code| -> [Code; 4] {
            if upper {
                [m[0], ring.add(ring.mul(m[0], x), m[1]), m[2], ring.add(ring.mul(m[2], x), m[3])]
            } else {
                [ring.add(m[0], ring.mul(m[1], x)), m[1], ring.add(m[2], ring.mul(m[3], x)), m[3]]
            }
        };
        m = mul(m, false, t);
        for (k, b) in blocks.iter().enumerate() {
            let root = if k % 2 == 0 { beta } else { gamma };
            let coords = unipotent_coordinates(b, sign_of(k))?;
            for (r, c) in coords {
                if c != 0 && r != root {
                    return Err(DecompositionError::NotUnipotent);
                }
                if r == root {
                    m = mul(m, k % 2 == 0, c);
                }
            }
        }
        let mut params = [0; 8];
        if ring.is_unit(m[2]) {
            params[..3].copy_from_slice(&sl2_triple(ring, m));
        } else {
            let m2 = mul_lower_left(ring, m, ring.one());
            if !ring.is_unit(m2[2]) {
                return Err(DecompositionError::NotLocal(ring.label().to_string()));
            }
            params[1] = ring.neg(ring.one());
            params[2..5].copy_from_slice(&sl2_triple(ring, m2));
        }
        for (k, b) in blocks.iter_mut().enumerate() {
            let root = if k % 2 == 0 { beta } else { gamma };
            *b = GroupElement::elementary(self.rep, self.ring, root, params[k]);
        }
        Ok(())
    }
}

/// `(x, c, y)` with `m = e_+(x) e_-(c) e_+(y)`, for a unit lower left entry `c`.
fn sl2_triple(ring: &RingSpec, m: [Code; 4]) -> [Code; 3] {
    let ci = ring.inv(m[2]).expect("unit");
    [ring.mul(ring.sub(m[0], ring.one()), ci), m[2], ring.mul(ring.sub(m[3], ring.one()), ci)]
}

/// `e_-(x) m` in `SL_2`.
fn mul_lower_left(ring: &RingSpec, m: [Code; 4], x: Code) -> [Code; 4] {
    [m[0], m[1], ring.add(m[2], ring.mul(x, m[0])), ring.add(m[3], ring.mul(x, m[1]))]
}

/// `P_k = u_{k+1} ... u_8` and its inverse, with `P_8 = 1`.
fn suffix_products(u: &[GroupElement], u_inv: &[GroupElement], one: GroupElement) -> (Vec<GroupElement>, Vec<GroupElement>) {
    let n = u.len();
    let mut p = vec![one.clone(); n];
    let mut p_inv = vec![one; n];
    for k in (0..n - 1).rev() {
        p[k] = u[k + 1].mul_unchecked(&p[k + 1]);
        p_inv[k] = p_inv[k + 1].mul_unchecked(&u_inv[k + 1]);
    }
    (p, p_inv)
}

/// Expresses the product of `word` in `(U+ U-)^4`.
pub fn tavgen_decompose(rep: &Arc<Representation>, ring: &RingSpec, word: &ElementaryWord) -> Result<TavgenBlocks, DecompositionError> {
    let rs = rep.root_system();
    check_supported(rs)?;
    if !ring.is_local().0 {
        return Err(DecompositionError::NotLocal(ring.label().to_string()));
    }
    let ctx = Context { rep, ring };
    let letters = ctx.simple_letters(word)?;
    let mut blocks = vec![ctx.identity(); 8];
    let simples: Vec<usize> = (0..rs.rank()).collect();
    for l in letters.letters.iter().rev() {
        ctx.left_mul(&mut blocks, &simples, l.root, l.t)?;
    }
    let blocks = blocks
        .iter()
        .enumerate()
        .map(|(k, b)| unipotent_coordinates(b, sign_of(k)))
        .collect::<Result<Vec<_>, _>>()?;
    let out = TavgenBlocks { blocks };
    if GroupElement::evaluate(rep, ring, &out.word()) != GroupElement::evaluate(rep, ring, word) {
        return Err(DecompositionError::VerificationFailed);
    }
    Ok(out)
}

/// Report for `g`, given any word evaluating to it.
pub fn tavgen_report(g: &GroupElement, word: &ElementaryWord) -> Result<DecompositionReport, DecompositionError> {
    if GroupElement::evaluate(g.rep(), g.ring(), word) != *g {
        return Err(DecompositionError::VerificationFailed);
    }
    let blocks = tavgen_decompose(g.rep(), g.ring(), word)?;
    DecompositionReport::new(g, blocks.word(), Bounds::of(g.rep().root_system()).tavgen, "4*|Phi|")
}
