use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::element::{weyl_word, ElementaryWord, GroupElement};
use super::rep::{GroupError, Representation};
use crate::ring::{Code, RingSpec};
use crate::roots::{Root, WeylWord};

/// Loops up to this many parameter tuples run exhaustively.
pub const EXHAUSTIVE_LIMIT: usize = 1 << 16;
/// Sample count beyond [`EXHAUSTIVE_LIMIT`].
pub const SAMPLE_COUNT: usize = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RelationMode {
    R1,
    R2,
    Both,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationFailure {
    pub relation: &'static str,
    pub alpha: Vec<i64>,
    pub beta: Vec<i64>,
    pub s: String,
    pub t: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RelationReport {
    pub r1_checks: usize,
    pub r2_checks: usize,
    /// Pairs `(α, -α)`, outside the commutator formula.
    pub excluded_pairs: usize,
    pub sampled: bool,
    pub failures: Vec<RelationFailure>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// All `(s, t)` pairs, or a seeded sample when there are too many.
pub(crate) fn parameter_pairs(ring: &RingSpec, rng: &mut ChaCha8Rng) -> (Vec<(Code, Code)>, bool) {
    let q = ring.size() as usize;
    if q * q <= EXHAUSTIVE_LIMIT {
        let all = ring.elements().flat_map(|s| ring.elements().map(move |t| (s, t))).collect();
        (all, false)
    } else {
        let sample = (0..SAMPLE_COUNT)
            .map(|_| (rng.gen_range(0..ring.size()), rng.gen_range(0..ring.size())))
            .collect();
        (sample, true)
    }
}

/// Right side of the commutator formula for `[e_α(s), e_β(t)]`.
pub fn commutator_word(rep: &Representation, ring: &RingSpec, a: Root, b: Root, s: Code, t: Code) -> Result<ElementaryWord, GroupError> {
    let mut w = ElementaryWord::new();
    for c in rep.basis().commutator_coefficients(a, b)? {
        let si = ring.pow(s, c.term.i as u64);
        let tj = ring.pow(t, c.term.j as u64);
        w.push(c.term.root, ring.mul(ring.from_int(c.value), ring.mul(si, tj)));
    }
    Ok(w)
}

/// `e_α(s) e_β(t) e_α(-s) e_β(-t)` evaluated without inverting matrices.
pub fn elementary_commutator(rep: &Arc<Representation>, ring: &RingSpec, a: Root, b: Root, s: Code, t: Code) -> GroupElement {
    let mut w = ElementaryWord::new();
    w.push(a, s);
    w.push(b, t);
    w.push(a, ring.neg(s));
    w.push(b, ring.neg(t));
    GroupElement::evaluate(rep, ring, &w)
}

pub fn verify_steinberg_relations(rep: &Arc<Representation>, ring: &RingSpec, mode: RelationMode, seed: u64) -> RelationReport {
    let rs = rep.root_system().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = RelationReport::default();
    let fail = |rel: &'static str, a: Root, b: Root, s: Code, t: Code| RelationFailure {
        relation: rel,
        alpha: rs.vector(a).to_vec(),
        beta: rs.vector(b).to_vec(),
        s: ring.format_element(s),
        t: ring.format_element(t),
    };
    if matches!(mode, RelationMode::R1 | RelationMode::Both) {
        for a in rs.roots() {
            let (pairs, sampled) = parameter_pairs(ring, &mut rng);
            report.sampled |= sampled;
            for (s, t) in pairs {
                let mut w = ElementaryWord::single(a, s);
                w.push(a, t);
                let lhs = GroupElement::evaluate(rep, ring, &w);
                let rhs = GroupElement::elementary(rep, ring, a, ring.add(s, t));
                report.r1_checks += 1;
                if lhs != rhs {
                    report.failures.push(fail("R1", a, a, s, t));
                }
            }
        }
    }
    if matches!(mode, RelationMode::R2 | RelationMode::Both) {
        for a in rs.roots() {
            for b in rs.roots() {
                if b == rs.neg(a) {
                    report.excluded_pairs += 1;
                    continue;
                }
                let (pairs, sampled) = parameter_pairs(ring, &mut rng);
                report.sampled |= sampled;
                for (s, t) in pairs {
                    let lhs = elementary_commutator(rep, ring, a, b, s, t);
                    let w = commutator_word(rep, ring, a, b, s, t).expect("β ≠ -α");
                    let rhs = GroupElement::evaluate(rep, ring, &w);
                    report.r2_checks += 1;
                    if lhs != rhs {
                        report.failures.push(fail("R2", a, b, s, t));
                    }
                }
            }
        }
    }
    report
}

/// `ŵ = w_{α_{i_1}}(1) ... w_{α_{i_k}}(1)` as an elementary word.
pub fn weyl_lift_word(rep: &Representation, ring: &RingSpec, w: &WeylWord) -> ElementaryWord {
    let rs = rep.root_system();
    let mut out = ElementaryWord::new();
    for &i in &w.0 {
        out.extend(&weyl_word(rs, ring, rs.simple_root(i), ring.one()).expect("1 is a unit"));
    }
    out
}

/// `ŵ^{-1}`, using `w_α(1)^{-1} = w_α(-1)`.
pub fn weyl_lift_inverse_word(rep: &Representation, ring: &RingSpec, w: &WeylWord) -> ElementaryWord {
    let rs = rep.root_system();
    let mut out = ElementaryWord::new();
    for &i in w.0.iter().rev() {
        out.extend(&weyl_word(rs, ring, rs.simple_root(i), ring.neg(ring.one())).expect("-1 is a unit"));
    }
    out
}

/// Checks `ŵ e_α(t) ŵ^{-1} = e_{w(α)}(ε t)` and returns `ε`, or `None`
/// when no constant sign works.
pub fn weyl_conjugation_check(rep: &Arc<Representation>, ring: &RingSpec, w: &WeylWord, a: Root, seed: u64) -> Option<i64> {
    let rs = rep.root_system();
    let target = w.act(rs, a);
    let lift = weyl_lift_word(rep, ring, w);
    let lift_inv = weyl_lift_inverse_word(rep, ring, w);
    let conj = |t: Code| {
        let mut word = lift.clone();
        word.push(a, t);
        word.extend(&lift_inv);
        GroupElement::evaluate(rep, ring, &word)
    };
    let one = conj(ring.one());
    let sign = if one == GroupElement::elementary(rep, ring, target, ring.one()) {
        1
    } else if one == GroupElement::elementary(rep, ring, target, ring.neg(ring.one())) {
        -1
    } else {
        return None;
    };
    let ts: Vec<Code> = if ring.size() as usize <= SAMPLE_COUNT {
        ring.elements().collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..SAMPLE_COUNT).map(|_| rng.gen_range(0..ring.size())).collect()
    };
    let ok = ts
        .into_iter()
        .all(|t| conj(t) == GroupElement::elementary(rep, ring, target, ring.mul(ring.from_int(sign), t)));
    ok.then_some(sign)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::RepKind;

    #[test]
    fn a2_z4_all_relations() {
        let rep = Representation::for_type("A2", RepKind::Defining).unwrap();
        let ring = RingSpec::zmod(4).unwrap();
        let r = verify_steinberg_relations(&rep, &ring, RelationMode::Both, 1);
        assert!(r.passed());
        assert_eq!(r.excluded_pairs, 6);
        assert_eq!(r.r1_checks, 6 * 16);
        assert_eq!(r.r2_checks, 30 * 16);
        assert!(!r.sampled);
    }

    #[test]
    fn g2_adjoint_gf3() {
        let rep = Representation::for_type("G2", RepKind::Adjoint).unwrap();
        let ring = RingSpec::gf(3).unwrap();
        assert!(verify_steinberg_relations(&rep, &ring, RelationMode::Both, 1).passed());
    }

    #[test]
    fn weyl_signs_constant() {
        let rep = Representation::for_type("A2", RepKind::Defining).unwrap();
        let ring = RingSpec::zmod(5).unwrap();
        let a = rep.root_system().simple_root(0);
        assert!(weyl_conjugation_check(&rep, &ring, &WeylWord(vec![1]), a, 0).is_some());
        assert_eq!(weyl_conjugation_check(&rep, &ring, &WeylWord::identity(), a, 0), Some(1));

        let rep = Representation::for_type("B2", RepKind::Defining).unwrap();
        let ring = RingSpec::zmod(9).unwrap();
        let rs = rep.root_system().clone();
        let e1 = rs.lookup(&[1, 0]).unwrap();
        let e2 = rs.lookup(&[0, 1]).unwrap();
        let w = rs.same_length_conjugator(e1, e2).unwrap();
        assert!(weyl_conjugation_check(&rep, &ring, &w, e1, 0).is_some());
    }
}
