use std::collections::BTreeSet;

use serde::Serialize;

use super::{all_weyl_level_equalities, level_set, weyl_level_equality, CongruenceError, NormalSubgroupHandle};
use crate::chevalley::ChevalleyBasis;
use crate::group::{elementary_commutator, ElementaryWord, GroupElement};
use crate::ring::{Code, IdealHandle, RingSpec};
use crate::roots::{Family, Root, RootSystem};

const SAMPLE: usize = 4;

/// One replayed identity with the number of parameter instances checked.
#[derive(Clone, Debug, Serialize)]
pub struct TraceStep {
    pub identity: &'static str,
    pub statement: String,
    pub instances: usize,
    pub sample: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RootCheck {
    pub root: Vec<i64>,
    pub level_size: usize,
    pub contains_ideal: bool,
    pub equals_ideal: bool,
}

/// The B-type short root identity as commonly stated and as computed.
#[derive(Clone, Debug, Serialize)]
pub struct BIdentity {
    pub stated: String,
    pub stated_holds: bool,
    pub verified: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateTrace {
    pub type_label: String,
    pub ring: String,
    pub subgroup: String,
    pub route: &'static str,
    pub ideal: String,
    pub ideal_size: usize,
    #[serde(skip)]
    pub ideal_handle: IdealHandle,
    pub steps: Vec<TraceStep>,
    pub signs: Vec<(String, i64)>,
    pub b_identity: Option<BIdentity>,
    pub roots: Vec<RootCheck>,
    /// Whether every `𝔞(α)` equals the ideal or only contains it.
    pub branch: &'static str,
    pub weyl_pairs_checked: usize,
    pub memberships_verified: usize,
}

struct Replay<'a> {
    n: &'a NormalSubgroupHandle,
    rs: &'a RootSystem,
    basis: &'a ChevalleyBasis,
    ring: &'a RingSpec,
    steps: Vec<TraceStep>,
}

impl Replay<'_> {
    fn e(&self, r: Root, t: Code) -> GroupElement {
        GroupElement::elementary(self.n.rep(), self.ring, r, t)
    }

    fn eval(&self, terms: &[(Root, Code)]) -> GroupElement {
        let mut w = ElementaryWord::new();
        for &(r, t) in terms {
            w.push(r, t);
        }
        GroupElement::evaluate(self.n.rep(), self.ring, &w)
    }

    fn comm(&self, a: Root, s: Code, b: Root, t: Code) -> GroupElement {
        elementary_commutator(self.n.rep(), self.ring, a, b, s, t)
    }

    fn fmt(&self, r: Root) -> String {
        self.rs.format_root(r)
    }

    fn el(&self, t: Code) -> String {
        self.ring.format_element(t)
    }

    fn ensure(&self, ok: bool, what: impl FnOnce() -> String) -> Result<(), CongruenceError> {
        if ok {
            Ok(())
        } else {
            Err(CongruenceError::StepFailed(what()))
        }
    }

    fn member(&self, g: &GroupElement, what: impl FnOnce() -> String) -> Result<(), CongruenceError> {
        self.ensure(self.n.contains(g), what)
    }

    fn log(&mut self, identity: &'static str, statement: String, instances: Vec<String>) {
        let count = instances.len();
        self.steps.push(TraceStep { identity, statement, instances: count, sample: instances.into_iter().take(SAMPLE).collect() });
    }

    fn coefficient(&self, a: Root, b: Root, i: u32, j: u32) -> Result<(Root, i64), CongruenceError> {
        table(self.basis, a, b)
            .unwrap_or_default()
            .into_iter()
            .find(|c| c.0 == i && c.1 == j)
            .map(|c| (c.2, c.3))
            .ok_or_else(|| CongruenceError::StepFailed(format!("no ({i},{j}) term for {} and {}", self.fmt(a), self.fmt(b))))
    }

    /// `[e_x(r), e_y(s)] = e_{x+y}(c rs)` with all three roots of one length
    /// shows `𝔞(x)` is an ideal.
    fn a2_route(&mut self, norm: i64) -> Result<BTreeSet<Code>, CongruenceError> {
        let rs = self.rs;
        let basis = self.basis;
        let (x, y, z, c) = rs
            .roots()
            .flat_map(|x| rs.roots().map(move |y| (x, y)))
            .filter(|&(x, y)| rs.norm(x) == norm && rs.norm(y) == norm && y != rs.neg(x))
            .find_map(|(x, y)| {
                let t = table(basis, x, y)?;
                match t.as_slice() {
                    [(1, 1, z, c)] if rs.norm(*z) == norm && c.abs() == 1 => Some((x, y, *z, *c)),
                    _ => None,
                }
            })
            .ok_or_else(|| CongruenceError::StepFailed("no A2 subsystem".into()))?;
        let level: BTreeSet<Code> = level_set(self.n, x).elements.into_iter().collect();
        let level_z = level_set(self.n, z);
        let mut inst = Vec::new();
        for &r in &level {
            for s in self.ring.elements() {
                let rs_c = self.ring.mul(self.ring.from_int(c), self.ring.mul(r, s));
                let g = self.comm(x, r, y, s);
                self.ensure(g == self.e(z, rs_c), || format!("A2 commutator at r={}, s={}", self.el(r), self.el(s)))?;
                self.member(&g, || "commutator with an element of N".into())?;
                self.ensure(level_z.contains(rs_c), || "product in the level set".into())?;
                inst.push(format!("r={}, s={}", self.el(r), self.el(s)));
            }
        }
        self.ensure(weyl_level_equality(self.n, z, x)?, || "Weyl level equality".into())?;
        let closed = level.iter().all(|&r| self.ring.elements().all(|s| level.contains(&self.ring.mul(r, s))));
        self.ensure(closed, || format!("level set of {} is not an ideal", self.fmt(x)))?;
        let statement = format!("[e_{}(r), e_{}(s)] = e_{}({}rs)", self.fmt(x), self.fmt(y), self.fmt(z), sign_prefix(c));
        self.log("a2-commutator", statement, inst);
        Ok(level)
    }

    /// `[e_α(r), e_β(1)] = e_ρ(c r) e_λ(d r)` with `α, λ` long and `ρ` short.
    fn b_short_route(&mut self, ideal: &BTreeSet<Code>) -> Result<BIdentity, CongruenceError> {
        let rs = self.rs;
        let basis = self.basis;
        let long = rs.max_norm();
        let preferred = {
            let mut a = vec![0; rs.vector(0).len()];
            let mut b = a.clone();
            a[0] = 1;
            a[1] = 1;
            b[1] = -1;
            rs.find(&a).zip(rs.find(&b))
        };
        let pattern = |a: Root, b: Root| -> Option<(Root, i64, Root, i64)> {
            let t = table(basis, a, b)?;
            match t.as_slice() {
                [(1, 1, p, c), (1, 2, l, d)] if rs.norm(*p) < long && rs.norm(*l) == long && c.abs() == 1 => Some((*p, *c, *l, *d)),
                _ => None,
            }
        };
        let (a, b, (p, c, l, d)) = preferred
            .and_then(|(a, b)| pattern(a, b).map(|x| (a, b, x)))
            .or_else(|| {
                rs.roots()
                    .flat_map(|a| rs.roots().map(move |b| (a, b)))
                    .filter(|&(a, b)| rs.norm(a) == long && rs.norm(b) < long && b != rs.neg(a))
                    .find_map(|(a, b)| pattern(a, b).map(|x| (a, b, x)))
            })
            .ok_or_else(|| CongruenceError::StepFailed("no long/short pair for the short root step".into()))?;
        let ring = self.ring;
        let one = ring.one();
        let mut inst = Vec::new();
        for &r in ideal {
            let g = self.comm(a, r, b, one);
            let cr = ring.mul(ring.from_int(c), r);
            let dr = ring.mul(ring.from_int(d), r);
            self.ensure(g == self.eval(&[(p, cr), (l, dr)]), || format!("short root identity at r={}", self.el(r)))?;
            self.member(&g, || "commutator with an element of N".into())?;
            self.member(&self.e(l, dr), || "long root factor".into())?;
            self.member(&g.mul_unchecked(&self.e(l, ring.neg(dr))), || "short root factor".into())?;
            inst.push(format!("r={}, s=1", self.el(r)));
        }
        let verified = format!("[e_{}(r), e_{}(s)] = e_{}({}rs) e_{}({}rs^2)", self.fmt(a), self.fmt(b), self.fmt(p), sign_prefix(c), self.fmt(l), sign_prefix(d));
        self.log("b-short-root", verified.clone(), inst);
        let stated_holds = self.stated_b_identity_holds(a, b);
        let stated = format!(
            "[e_{}(r), e_{}(s)] = e_{}(rs) e_{}(-rs^2)",
            self.fmt(a),
            self.fmt(b),
            self.fmt(rs.sum(a, b).expect("sum is a root")),
            self.fmt(rs.neg(a))
        );
        Ok(BIdentity { stated, stated_holds, verified })
    }

    fn stated_b_identity_holds(&self, a: Root, b: Root) -> bool {
        let Some(p) = self.rs.sum(a, b) else { return false };
        let ring = self.ring;
        ring.elements().all(|r| {
            ring.elements().all(|s| {
                let rs_ = ring.mul(r, s);
                let rs2 = ring.neg(ring.mul(rs_, s));
                self.comm(a, r, b, s) == self.eval(&[(p, rs_), (self.rs.neg(a), rs2)])
            })
        })
    }

    /// Orthogonal short roots `σ1, σ2` with long sum `λ`; needs 2 invertible.
    fn b2_route(&mut self, two_inv: Code) -> Result<(BTreeSet<Code>, Vec<(String, i64)>), CongruenceError> {
        let rs = self.rs;
        let ring = self.ring;
        let long = rs.max_norm();
        let (s1, s2, lam) = rs
            .roots()
            .flat_map(|a| rs.roots().map(move |b| (a, b)))
            .filter(|&(a, b)| rs.norm(a) < long && rs.norm(b) < long && rs.inner(a, b) == 0)
            .find_map(|(a, b)| rs.sum(a, b).filter(|&l| rs.norm(l) == long).map(|l| (a, b, l)))
            .ok_or_else(|| CongruenceError::StepFailed("no orthogonal short pair".into()))?;
        let (_, c) = self.coefficient(s1, s2, 1, 1)?;
        let (_, a) = self.coefficient(lam, rs.neg(s2), 1, 1)?;
        let c_inv = ring
            .inv(ring.from_int(c))
            .ok_or_else(|| CongruenceError::StepFailed("structure constant is not a unit".into()))?;
        let level: BTreeSet<Code> = level_set(self.n, s1).elements.into_iter().collect();
        let one = ring.one();
        let neg_s2 = rs.neg(s2);
        let mut half_inst = Vec::new();
        let mut pair_inst = Vec::new();
        for &r in &level {
            for s in ring.elements() {
                // y with c r y = r s / 2
                let y = ring.mul(s, ring.mul(two_inv, c_inv));
                let u = ring.mul(ring.mul(r, s), two_inv);
                let g = self.comm(s1, r, s2, y);
                self.ensure(g == self.e(lam, u), || format!("half commutator at r={}, s={}", self.el(r), self.el(s)))?;
                self.member(&g, || "commutator with an element of N".into())?;
                half_inst.push(format!("r={}, s={}", self.el(r), self.el(s)));
                let x = self
                    .comm(lam, u, neg_s2, one)
                    .mul_unchecked(&self.comm(lam, u, neg_s2, ring.neg(one)).inv()?);
                let target = ring.mul(ring.from_int(2 * a), u);
                self.ensure(x == self.e(s1, target), || format!("opposite pair product at u={}", self.el(u)))?;
                self.member(&x, || "product of commutators with elements of N".into())?;
                self.ensure(level.contains(&target), || "product in the level set".into())?;
                pair_inst.push(format!("u={}", self.el(u)));
            }
        }
        self.log(
            "b2-half-commutator",
            format!("[e_{}(r), e_{}(s/(2c))] = e_{}(rs/2), c = {c}", self.fmt(s1), self.fmt(s2), self.fmt(lam)),
            half_inst,
        );
        self.log(
            "b2-opposite-pair",
            format!("[e_{}(u), e_{}(1)] [e_{}(u), e_{}(-1)]^-1 = e_{}({}2u)", self.fmt(lam), self.fmt(neg_s2), self.fmt(lam), self.fmt(neg_s2), self.fmt(s1), sign_prefix(a)),
            pair_inst,
        );
        let mut long_inst = Vec::new();
        for &r in &level {
            let g = self.comm(s1, r, s2, c_inv);
            self.ensure(g == self.e(lam, r), || format!("long root step at r={}", self.el(r)))?;
            self.member(&g, || "long root element".into())?;
            long_inst.push(format!("r={}", self.el(r)));
        }
        self.log("b2-long-root", format!("[e_{}(r), e_{}(1/c)] = e_{}(r)", self.fmt(s1), self.fmt(s2), self.fmt(lam)), long_inst);
        Ok((level, vec![("c".into(), c), ("a".into(), a)]))
    }

    /// Short roots of `G2` from `[e_k(s/2), e_c(1)] [e_k(s/2), e_c(-1)]`.
    fn g2_route(&mut self, ideal: &BTreeSet<Code>, two_inv: Code) -> Result<Vec<(String, i64)>, CongruenceError> {
        let rs = self.rs;
        let ring = self.ring;
        let k = rs.lookup(&[1, 0])?;
        let c = rs.lookup(&[0, 1])?;
        let ck = rs.lookup(&[1, 1])?;
        let c2k = rs.lookup(&[1, 2])?;
        let top = rs.lookup(&[2, 3])?;
        let (_, e1) = self.coefficient(k, c, 1, 1)?;
        let (_, e2) = self.coefficient(k, c, 1, 2)?;
        let (_, e3) = self.coefficient(k, c, 1, 3)?;
        let (_, e4) = self.coefficient(k, c, 2, 3)?;
        let (_, three_e5) = self.coefficient(ck, c2k, 1, 1)?;
        let one = ring.one();
        let mut inst = Vec::new();
        for &s in ideal {
            let u = ring.mul(s, two_inv);
            let x = self.comm(k, u, c, one).mul_unchecked(&self.comm(k, u, c, ring.neg(one)));
            let top_t = ring.mul(ring.from_int(three_e5 * e1 * e2), ring.mul(u, u));
            let short_t = ring.mul(ring.from_int(2 * e2), u);
            self.ensure(x == self.eval(&[(top, top_t), (c2k, short_t)]), || format!("G2 product at s={}", self.el(s)))?;
            self.member(&x, || "product of commutators with elements of N".into())?;
            self.member(&self.e(top, top_t), || "highest root factor".into())?;
            self.member(&self.e(c2k, short_t), || "short root factor".into())?;
            inst.push(format!("s={}", self.el(s)));
        }
        let statement = format!(
            "[e_k(s/2), e_c(1)] [e_k(s/2), e_c(-1)] = e_{}({}s^2/4) e_{}({}s)",
            self.fmt(top),
            three_e5 * e1 * e2,
            self.fmt(c2k),
            sign_prefix(e2)
        );
        self.log("g2-short-root", statement, inst);
        Ok(vec![
            ("eps1".into(), e1),
            ("eps2".into(), e2),
            ("eps3".into(), e3),
            ("eps4".into(), e4),
            ("eps5".into(), three_e5 / 3),
        ])
    }
}

/// Commutator coefficients as `(i, j, root, value)`.
fn table(basis: &ChevalleyBasis, a: Root, b: Root) -> Option<Vec<(u32, u32, Root, i64)>> {
    let t = basis.commutator_coefficients(a, b).ok()?;
    Some(t.iter().map(|c| (c.term.i, c.term.j, c.term.root, c.value)).collect())
}

fn sign_prefix(c: i64) -> String {
    match c {
        1 => String::new(),
        -1 => "-".into(),
        c => c.to_string(),
    }
}

/// Finds an ideal `𝔞` with `e_α(𝔞) ⊆ N` for every root, replaying each step
/// as a matrix identity and re-verifying every membership at the end.
pub fn ideal_certificate(n: &NormalSubgroupHandle) -> Result<CertificateTrace, CongruenceError> {
    let rep = n.rep();
    let rs = rep.root_system();
    let ring = n.ring();
    if rs.rank() < 2 {
        return Err(CongruenceError::RankOne);
    }
    let family = rs.cartan().family;
    let needs_two = matches!(family, Family::C | Family::G) || (family == Family::B && rs.rank() == 2);
    let two_inv = ring.inv(ring.from_int(2));
    if needs_two && two_inv.is_none() {
        return Err(CongruenceError::TwoNotUnit(ring.label().to_string(), rs.label()));
    }
    n.verify_normal()?;
    let mut replay = Replay { n, rs, basis: rep.basis(), ring, steps: Vec::new() };
    let mut signs = Vec::new();
    let mut b_identity = None;
    let (route, level) = if rs.cartan().is_simply_laced() {
        ("simply-laced", replay.a2_route(rs.max_norm())?)
    } else if needs_two && family != Family::G {
        let (level, s) = replay.b2_route(two_inv.expect("checked"))?;
        signs = s;
        ("b2-half", level)
    } else if family == Family::G {
        let level = replay.a2_route(rs.max_norm())?;
        signs = replay.g2_route(&level, two_inv.expect("checked"))?;
        ("g2-long-then-short", level)
    } else {
        let level = replay.a2_route(rs.max_norm())?;
        b_identity = Some(replay.b_short_route(&level)?);
        ("long-a-then-short", level)
    };
    let elements: Vec<Code> = level.iter().copied().collect();
    let ideal = IdealHandle::from_generators(ring, &elements);
    if ideal.elements().iter().copied().collect::<BTreeSet<_>>() != level {
        return Err(CongruenceError::NotIdeal(ring.label().to_string()));
    }
    let mut roots = Vec::new();
    let mut memberships = 0;
    for a in rs.roots() {
        for &t in ideal.elements() {
            if !n.contains(&GroupElement::elementary(rep, ring, a, t)) {
                return Err(CongruenceError::StepFailed(format!("e_{}({}) is not in N", rs.format_root(a), ring.format_element(t))));
            }
            memberships += 1;
        }
        let l = level_set(n, a);
        roots.push(RootCheck {
            root: rs.vector(a).to_vec(),
            level_size: l.len(),
            contains_ideal: ideal.elements().iter().all(|&t| l.contains(t)),
            equals_ideal: l.len() == ideal.len(),
        });
    }
    let (weyl_pairs_checked, failures) = all_weyl_level_equalities(n)?;
    if let Some(&(a, b)) = failures.first() {
        return Err(CongruenceError::NotNormal(format!("level sets of {} and {} differ", rs.format_root(a), rs.format_root(b))));
    }
    let branch = if roots.iter().all(|r| r.equals_ideal) { "level sets are the ideal" } else { "level sets contain the ideal" };
    Ok(CertificateTrace {
        type_label: rs.label(),
        ring: ring.label().to_string(),
        subgroup: n.describe().to_string(),
        route,
        ideal: ideal.describe(),
        ideal_size: ideal.len(),
        ideal_handle: ideal,
        steps: replay.steps,
        signs,
        b_identity,
        roots,
        branch,
        weyl_pairs_checked,
        memberships_verified: memberships,
    })
}
