use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::CongruenceError;
use crate::group::{subgroup_closure, GroupElement, GroupError, Invariant, Representation};
use crate::ring::{Code, RingSpec};
use crate::roots::Root;

/// Cross-factor loops up to this ring size run exhaustively.
const CROSS_EXHAUSTIVE: u32 = 64;

/// All `e_α(t)` with `t ≠ 0`.
pub fn elementary_generators(rep: &Arc<Representation>, ring: &RingSpec) -> Vec<GroupElement> {
    rep.root_system()
        .roots()
        .flat_map(|r| ring.elements().skip(1).map(move |t| (r, t)))
        .map(|(r, t)| GroupElement::elementary(rep, ring, r, t))
        .collect()
}

/// Whether the elementaries away from `α` generate the whole elementary group.
pub fn omit_root_generation_check(rep: &Arc<Representation>, ring: &RingSpec, a: Root, cap: usize) -> Result<bool, CongruenceError> {
    let rs = rep.root_system();
    if rs.rank() < 2 {
        return Ok(false);
    }
    let all = subgroup_closure(&elementary_generators(rep, ring), cap)?;
    let omitted: Vec<GroupElement> = rs
        .roots()
        .filter(|&r| r != a)
        .flat_map(|r| ring.elements().skip(1).map(move |t| (r, t)))
        .map(|(r, t)| GroupElement::elementary(rep, ring, r, t))
        .collect();
    let part = subgroup_closure(&omitted, cap)?;
    Ok(part.len() == all.len())
}

/// `(|E(R)|, |<E(R), extra>|)`.
pub fn elementary_index(
    rep: &Arc<Representation>,
    ring: &RingSpec,
    extra: &[GroupElement],
    cap: usize,
) -> Result<(usize, usize), CongruenceError> {
    let mut gens = elementary_generators(rep, ring);
    let e = subgroup_closure(&gens, cap)?.len();
    gens.extend_from_slice(extra);
    let g = subgroup_closure(&gens, cap)?.len();
    Ok((e, g))
}

/// A uniformly random matrix of determinant 1, for `SL` models.
pub fn random_determinant_one(rep: &Arc<Representation>, ring: &RingSpec, rng: &mut ChaCha8Rng) -> Result<GroupElement, CongruenceError> {
    if !matches!(rep.invariant(), Invariant::Determinant) {
        return Err(GroupError::Unsupported(rep.describe()).into());
    }
    let n = rep.dim();
    loop {
        let m: Vec<Code> = (0..n * n).map(|_| rng.gen_range(0..ring.size())).collect();
        let g = GroupElement::from_codes(rep, ring, m)?;
        if g.determinant() == ring.one() {
            return Ok(g);
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossFactorReport {
    pub ring: String,
    pub root_pairs: usize,
    pub opposite_pairs: usize,
    pub instances: usize,
    pub sampled: bool,
    pub failures: Vec<String>,
}

impl CrossFactorReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `[e_α(r e), e_β(s (1 - e))] = 1` for the idempotent `e` of the first factor.
pub fn cross_factor_commute_check(rep: &Arc<Representation>, ring: &RingSpec, seed: u64) -> Result<CrossFactorReport, CongruenceError> {
    let factors = ring.factors();
    if factors.len() < 2 {
        return Err(CongruenceError::NotProduct(ring.label().to_string()));
    }
    let parts: Vec<Code> = (0..factors.len()).map(|i| if i == 0 { factors[0].one() } else { 0 }).collect();
    let e = ring.join(&parts);
    let left: Vec<Code> = ring.elements().filter(|&a| ring.mul(a, e) == a).collect();
    let right: Vec<Code> = ring.elements().filter(|&a| ring.mul(a, e) == 0).collect();
    let sampled = ring.size() > CROSS_EXHAUSTIVE;
    let pairs: Vec<(Code, Code)> = if sampled {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..512)
            .map(|_| (left[rng.gen_range(0..left.len())], right[rng.gen_range(0..right.len())]))
            .collect()
    } else {
        left.iter().flat_map(|&r| right.iter().map(move |&s| (r, s))).collect()
    };
    let rs = rep.root_system();
    let mut report = CrossFactorReport {
        ring: ring.label().to_string(),
        root_pairs: 0,
        opposite_pairs: 0,
        instances: 0,
        sampled,
        failures: Vec::new(),
    };
    for a in rs.roots() {
        for b in rs.roots() {
            report.root_pairs += 1;
            if b == rs.neg(a) {
                report.opposite_pairs += 1;
            }
            for &(r, s) in &pairs {
                let x = GroupElement::elementary(rep, ring, a, r);
                let y = GroupElement::elementary(rep, ring, b, s);
                report.instances += 1;
                if x.mul_unchecked(&y) != y.mul_unchecked(&x) {
                    report.failures.push(format!(
                        "e_{}({}) and e_{}({}) do not commute",
                        rs.format_root(a),
                        ring.format_element(r),
                        rs.format_root(b),
                        ring.format_element(s)
                    ));
                }
            }
        }
    }
    Ok(report)
}
