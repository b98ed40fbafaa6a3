//! Level sets of normal subgroups of the elementary group and the ideal
//! certificate `e_α(𝔞) ⊆ N`.

mod certificate;
mod generation;

use std::collections::BTreeSet;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::group::{subgroup_closure, weyl_conjugation_check, Closure, GroupElement, GroupError, Representation};
use crate::ring::{Code, IdealHandle, Projection, RingError, RingSpec};
use crate::roots::{Root, RootError};

pub use certificate::{ideal_certificate, CertificateTrace, RootCheck, TraceStep};
pub use generation::{
    cross_factor_commute_check, elementary_generators, elementary_index, omit_root_generation_check, random_determinant_one,
    CrossFactorReport,
};

#[derive(Debug, Error)]
pub enum CongruenceError {
    #[error("the root system has rank 1; rank at least 2 is required")]
    RankOne,
    #[error("2 is not a unit in {0}; type {1} requires it")]
    TwoNotUnit(String, String),
    #[error("subgroup is not normal: {0}")]
    NotNormal(String),
    #[error("level set of {0} is not an ideal")]
    NotIdeal(String),
    #[error("ring {0} is not a product of at least two factors")]
    NotProduct(String),
    #[error("malformed subgroup description {0:?}")]
    BadSubgroup(String),
    #[error("replayed step failed: {0}")]
    StepFailed(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// `kernel:(g1,g2,...)`, `full`, or `trivial`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubgroupSpec {
    Kernel(Vec<String>),
    Full,
    Trivial,
}

/// Splits on commas outside brackets and parentheses.
fn split_top_level(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(cur.trim().to_string());
                cur.clear();
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    out.push(cur.trim().to_string());
    out
}

impl FromStr for SubgroupSpec {
    type Err = CongruenceError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CongruenceError::BadSubgroup(s.to_string());
        match s.trim() {
            "full" => Ok(SubgroupSpec::Full),
            "trivial" => Ok(SubgroupSpec::Trivial),
            t => {
                let body = t.strip_prefix("kernel:").ok_or_else(bad)?.trim();
                let inner = body.strip_prefix('(').and_then(|b| b.strip_suffix(')')).ok_or_else(bad)?;
                let gens = split_top_level(inner);
                if gens.iter().any(String::is_empty) {
                    return Err(bad());
                }
                Ok(SubgroupSpec::Kernel(gens))
            }
        }
    }
}

#[derive(Clone, Debug)]
enum Membership {
    Kernel { ideal: IdealHandle, projection: Projection },
    Materialized(Arc<Closure>),
}

/// A subgroup of `G(R)` given by a membership predicate.
#[derive(Clone, Debug)]
pub struct NormalSubgroupHandle {
    rep: Arc<Representation>,
    ring: RingSpec,
    membership: Membership,
    description: String,
}

impl NormalSubgroupHandle {
    /// Kernel of reduction modulo an ideal.
    pub fn kernel(rep: &Arc<Representation>, ring: &RingSpec, ideal: IdealHandle) -> NormalSubgroupHandle {
        let description = format!("kernel mod {}", ideal.describe());
        let projection = ideal.quotient();
        NormalSubgroupHandle {
            rep: rep.clone(),
            ring: ring.clone(),
            membership: Membership::Kernel { ideal, projection },
            description,
        }
    }

    pub fn from_spec(rep: &Arc<Representation>, ring: &RingSpec, spec: &SubgroupSpec) -> Result<NormalSubgroupHandle, CongruenceError> {
        let ideal = match spec {
            SubgroupSpec::Full => IdealHandle::unit(ring),
            SubgroupSpec::Trivial => IdealHandle::zero(ring),
            SubgroupSpec::Kernel(gens) => {
                let codes = gens.iter().map(|g| ring.parse_element(g)).collect::<Result<Vec<_>, _>>()?;
                IdealHandle::from_generators(ring, &codes)
            }
        };
        Ok(NormalSubgroupHandle::kernel(rep, ring, ideal))
    }

    /// Normal closure of `generators` under conjugation by all elementaries.
    pub fn normal_closure(generators: &[GroupElement], cap: usize) -> Result<NormalSubgroupHandle, CongruenceError> {
        let first = generators.first().ok_or(GroupError::Mismatch)?;
        let (rep, ring) = (first.rep().clone(), first.ring().clone());
        let conj = generation::elementary_generators(&rep, &ring);
        let mut gens = generators.to_vec();
        loop {
            let closure = subgroup_closure(&gens, cap)?;
            let mut added = false;
            for g in closure.generators().to_vec() {
                for e in &conj {
                    let x = e.mul(&g)?.mul(&e.inv()?)?;
                    if !closure.contains(&x) && !gens.contains(&x) {
                        gens.push(x);
                        added = true;
                    }
                }
            }
            if !added {
                let description = format!("normal closure of {} elements ({} total)", generators.len(), closure.len());
                return Ok(NormalSubgroupHandle {
                    rep,
                    ring,
                    membership: Membership::Materialized(Arc::new(closure)),
                    description,
                });
            }
        }
    }

    pub fn rep(&self) -> &Arc<Representation> {
        &self.rep
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn describe(&self) -> &str {
        &self.description
    }

    /// The defining ideal of a kernel handle.
    pub fn kernel_ideal(&self) -> Option<&IdealHandle> {
        match &self.membership {
            Membership::Kernel { ideal, .. } => Some(ideal),
            Membership::Materialized(_) => None,
        }
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        match &self.membership {
            Membership::Kernel { projection, .. } => g.in_congruence_kernel(projection),
            Membership::Materialized(c) => c.contains(g),
        }
    }

    /// Conjugation closure under every `e_α(t)`: all elements for
    /// materialized handles, the root elements in `N` for kernels.
    pub fn verify_normal(&self) -> Result<(), CongruenceError> {
        let conj = generation::elementary_generators(&self.rep, &self.ring);
        let members: Vec<GroupElement> = match &self.membership {
            Membership::Materialized(c) => c.elements().to_vec(),
            Membership::Kernel { .. } => {
                let rs = self.rep.root_system();
                rs.roots()
                    .flat_map(|r| self.ring.elements().map(move |t| (r, t)))
                    .map(|(r, t)| GroupElement::elementary(&self.rep, &self.ring, r, t))
                    .filter(|g| self.contains(g))
                    .collect()
            }
        };
        for e in &conj {
            let ei = e.inv()?;
            for g in &members {
                if !self.contains(&e.mul_unchecked(g).mul_unchecked(&ei)) {
                    return Err(CongruenceError::NotNormal(self.description.clone()));
                }
            }
        }
        Ok(())
    }
}

/// `𝔞(α) = {t : e_α(t) ∈ N}`.
#[derive(Clone, Debug, Serialize)]
pub struct LevelSet {
    pub root: Vec<i64>,
    #[serde(skip)]
    pub root_index: Root,
    #[serde(skip)]
    pub elements: Vec<Code>,
    pub members: Vec<String>,
    pub additively_closed: bool,
    /// Generators of the ideal when the set is closed under multiplication by `R`.
    pub ideal: Option<String>,
}

impl LevelSet {
    pub fn contains(&self, t: Code) -> bool {
        self.elements.binary_search(&t).is_ok()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

pub fn level_set(n: &NormalSubgroupHandle, a: Root) -> LevelSet {
    let ring = &n.ring;
    let rs = n.rep.root_system();
    let elements: Vec<Code> = ring
        .elements()
        .filter(|&t| n.contains(&GroupElement::elementary(&n.rep, ring, a, t)))
        .collect();
    let set: BTreeSet<Code> = elements.iter().copied().collect();
    let additively_closed = set.contains(&0) && elements.iter().all(|&x| elements.iter().all(|&y| set.contains(&ring.add(x, y))));
    let multiplicative = elements.iter().all(|&x| ring.elements().all(|r| set.contains(&ring.mul(r, x))));
    let ideal = (additively_closed && multiplicative).then(|| IdealHandle::from_generators(ring, &elements).describe());
    LevelSet {
        root: rs.vector(a).to_vec(),
        root_index: a,
        members: elements.iter().map(|&t| ring.format_element(t)).collect(),
        elements,
        additively_closed,
        ideal,
    }
}

/// Compares `𝔞(α1)` and `𝔞(α2)` through `ŵ e_{α1}(t) ŵ^{-1} = e_{α2}(ε t)`.
pub fn weyl_level_equality(n: &NormalSubgroupHandle, a1: Root, a2: Root) -> Result<bool, CongruenceError> {
    let rs = n.rep.root_system();
    let w = rs.same_length_conjugator(a1, a2)?;
    let eps = weyl_conjugation_check(&n.rep, &n.ring, &w, a1, 0)
        .ok_or_else(|| CongruenceError::StepFailed("Weyl conjugation sign is not constant".into()))?;
    let l1 = level_set(n, a1);
    let l2 = level_set(n, a2);
    let moved: BTreeSet<Code> = l1.elements.iter().map(|&t| n.ring.mul(n.ring.from_int(eps), t)).collect();
    Ok(moved == l2.elements.iter().copied().collect())
}

/// Level equality for every ordered pair of roots of equal length.
pub fn all_weyl_level_equalities(n: &NormalSubgroupHandle) -> Result<(usize, Vec<(Root, Root)>), CongruenceError> {
    let rs = n.rep.root_system();
    let mut checked = 0;
    let mut failures = Vec::new();
    for a in rs.roots() {
        for b in rs.roots() {
            if rs.norm(a) != rs.norm(b) {
                continue;
            }
            checked += 1;
            if !weyl_level_equality(n, a, b)? {
                failures.push((a, b));
            }
        }
    }
    Ok((checked, failures))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::RepKind;

    #[test]
    fn parses_subgroup_specs() {
        assert_eq!("kernel:(3)".parse::<SubgroupSpec>().unwrap(), SubgroupSpec::Kernel(vec!["3".into()]));
        assert_eq!(
            "kernel:((1,0), (0,2))".parse::<SubgroupSpec>().unwrap(),
            SubgroupSpec::Kernel(vec!["(1,0)".into(), "(0,2)".into()])
        );
        assert_eq!("full".parse::<SubgroupSpec>().unwrap(), SubgroupSpec::Full);
        assert!("kernel:3".parse::<SubgroupSpec>().is_err());
        assert!("kernel:()".parse::<SubgroupSpec>().is_err());
    }

    #[test]
    fn level_sets_of_kernels() {
        let rep = Representation::for_type("A2", RepKind::Defining).unwrap();
        let ring = RingSpec::zmod(4).unwrap();
        let n = NormalSubgroupHandle::from_spec(&rep, &ring, &"kernel:(2)".parse().unwrap()).unwrap();
        for a in rep.root_system().roots() {
            let l = level_set(&n, a);
            assert_eq!(l.elements, vec![0, 2]);
            assert_eq!(l.ideal.as_deref(), Some("(2)"));
        }
        let full = NormalSubgroupHandle::from_spec(&rep, &ring, &SubgroupSpec::Full).unwrap();
        assert_eq!(level_set(&full, 0).len(), 4);
        let gf2 = RingSpec::gf(2).unwrap();
        let triv = NormalSubgroupHandle::from_spec(&rep, &gf2, &SubgroupSpec::Trivial).unwrap();
        assert_eq!(level_set(&triv, 0).elements, vec![0]);
        let rs = rep.root_system();
        let (a, b) = (rs.lookup(&[1, -1, 0]).unwrap(), rs.lookup(&[0, 1, -1]).unwrap());
        assert!(weyl_level_equality(&n, a, b).unwrap());
        assert!(weyl_level_equality(&n, a, a).unwrap());
        n.verify_normal().unwrap();
    }

    #[test]
    fn materialized_normal_closure() {
        let rep = Representation::for_type("A2", RepKind::Defining).unwrap();
        let ring = RingSpec::zmod(4).unwrap();
        let g = GroupElement::elementary(&rep, &ring, 0, 2);
        let n = NormalSubgroupHandle::normal_closure(&[g], 100_000).unwrap();
        n.verify_normal().unwrap();
        let k = NormalSubgroupHandle::from_spec(&rep, &ring, &"kernel:(2)".parse().unwrap()).unwrap();
        for a in rep.root_system().roots() {
            assert_eq!(level_set(&n, a).elements, level_set(&k, a).elements);
        }
    }
}
