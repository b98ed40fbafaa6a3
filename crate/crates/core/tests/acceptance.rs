use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use chevalley_core::congruence::{
    all_weyl_level_equalities, cross_factor_commute_check, elementary_index, ideal_certificate, omit_root_generation_check,
    random_determinant_one, CongruenceError, NormalSubgroupHandle, SubgroupSpec,
};
use chevalley_core::decomposition::{decompose, local_decompose, tavgen_decompose, Bounds};
use chevalley_core::group::{
    subgroup_closure, verify_steinberg_relations, ElementaryWord, GroupElement, RelationMode,
    RepKind, Representation,
};
use chevalley_core::ring::RingSpec;

type Check = Result<String, String>;

fn rep(label: &str, kind: RepKind) -> Arc<Representation> {
    Representation::for_type(label, kind).unwrap()
}

fn ring(label: &str) -> RingSpec {
    RingSpec::parse(label).unwrap()
}

fn random_word(rep: &Representation, ring: &RingSpec, len: usize, rng: &mut ChaCha8Rng) -> ElementaryWord {
    let rs = rep.root_system();
    let mut w = ElementaryWord::new();
    for _ in 0..len {
        w.push(rng.gen_range(0..rs.len()), rng.gen_range(0..ring.size()));
    }
    w
}

fn a1() -> Check {
    let types = [
        ("A2", RepKind::Defining),
        ("A3", RepKind::Defining),
        ("B2", RepKind::Defining),
        ("B3", RepKind::Defining),
        ("C3", RepKind::Defining),
        ("D4", RepKind::Defining),
        ("G2", RepKind::Adjoint),
    ];
    let mut checks = 0;
    for (t, kind) in types {
        let rep = rep(t, kind);
        for r in ["Z/4", "Z/9", "GF(2)", "GF(3)", "GF(4)"] {
            let report = verify_steinberg_relations(&rep, &ring(r), RelationMode::Both, 7);
            if let Some(f) = report.failures.first() {
                return Err(format!("{t} over {r}: {f:?}"));
            }
            checks += report.r1_checks + report.r2_checks;
        }
    }
    Ok(format!("{checks} relation instances"))
}

/// `lhs = [g, h]` against the product of `e_γ(c s^i t^j)` by matrix multiplication.
fn identity_holds(rep: &Arc<Representation>, ring: &RingSpec, a: Vec<i64>, b: Vec<i64>, s_scale: u32, expect: &[(u32, u32, Vec<i64>, i64)]) -> Result<usize, String> {
    let rs = rep.root_system();
    let (ra, rb) = (rs.lookup(&a).unwrap(), rs.lookup(&b).unwrap());
    let mut n = 0;
    for s in ring.elements() {
        for t in ring.elements() {
            let t_scaled = ring.mul(t, s_scale);
            let g = GroupElement::elementary(rep, ring, ra, s);
            let h = GroupElement::elementary(rep, ring, rb, t_scaled);
            let lhs = g.commutator(&h).unwrap();
            let mut rhs = GroupElement::identity(rep, ring);
            for (i, j, root, c) in expect {
                let p = ring.mul(ring.pow(s, *i as u64), ring.pow(t_scaled, *j as u64));
                let e = GroupElement::elementary(rep, ring, rs.lookup(root).unwrap(), ring.mul(ring.from_int(*c), p));
                rhs = rhs.mul(&e).unwrap();
            }
            if lhs != rhs {
                return Err(format!("{a:?},{b:?} over {} at s={s} t={t}", ring.label()));
            }
            n += 1;
        }
    }
    Ok(n)
}

fn coefficient_terms(rep: &Representation, a: &[i64], b: &[i64]) -> Vec<(u32, u32, Vec<i64>, i64)> {
    let rs = rep.root_system();
    let co = rep.basis().commutator_coefficients(rs.lookup(a).unwrap(), rs.lookup(b).unwrap()).unwrap();
    co.iter().map(|c| (c.term.i, c.term.j, rs.vector(c.term.root).to_vec(), c.value)).collect()
}

fn a2() -> Check {
    let mut n = identity_holds(&rep("A2", RepKind::Defining), &ring("Z/6"), vec![1, -1, 0], vec![0, 1, -1], 1, &[(1, 1, vec![1, 0, -1], 1)])?;

    let b2 = rep("B2", RepKind::Defining);
    let terms = coefficient_terms(&b2, &[1, 1], &[0, -1]);
    let shape: Vec<_> = terms.iter().map(|(i, j, r, c)| (*i, *j, r.clone(), c.abs())).collect();
    if shape != vec![(1, 1, vec![1, 0], 1), (1, 2, vec![1, -1], 1)] {
        return Err(format!("B-type commutator shape {terms:?}"));
    }
    for r in ["Z/4", "Z/9"] {
        n += identity_holds(&b2, &ring(r), vec![1, 1], vec![0, -1], 1, &terms)?;
        let stated = [(1, 1, vec![1, 0], 1), (1, 2, vec![-1, -1], -1)];
        if identity_holds(&b2, &ring(r), vec![1, 1], vec![0, -1], 1, &stated).is_ok() {
            return Err(format!("printed B-type form unexpectedly holds over {r}"));
        }
    }

    // [e_ε1(r), e_ε2(s/4)] = e_{ε1+ε2}(±rs/2) with a constant sign.
    let z9 = ring("Z/9");
    let quarter = z9.inv(4).unwrap();
    let half = z9.inv(2).unwrap();
    let sign = coefficient_terms(&b2, &[1, 0], &[0, 1])[0].3.signum();
    n += identity_holds(&b2, &z9, vec![1, 0], vec![0, 1], quarter, &[(1, 1, vec![1, 1], sign * 2)])?;
    let lhs = GroupElement::elementary(&b2, &z9, b2.root_system().lookup(&[1, 1]).unwrap(), z9.from_int(sign * half as i64));
    if lhs != GroupElement::elementary(&b2, &z9, b2.root_system().lookup(&[1, 1]).unwrap(), z9.mul(z9.from_int(2 * sign), quarter)) {
        return Err("s/4 scaling".into());
    }

    let g2 = rep("G2", RepKind::Adjoint);
    let gf3 = ring("GF(3)");
    let t6 = coefficient_terms(&g2, &[1, 0], &[0, 1]);
    let shape6: Vec<_> = t6.iter().map(|(i, j, r, _)| (*i, *j, r.clone())).collect();
    if shape6 != vec![(1, 1, vec![1, 1]), (1, 2, vec![1, 2]), (1, 3, vec![1, 3]), (2, 3, vec![2, 3])] {
        return Err(format!("G2 long-short shape {t6:?}"));
    }
    let t7 = coefficient_terms(&g2, &[1, 1], &[1, 2]);
    if t7.len() != 1 || t7[0].3.abs() != 3 || t7[0].2 != vec![2, 3] {
        return Err(format!("G2 short-short shape {t7:?}"));
    }
    n += identity_holds(&g2, &gf3, vec![1, 0], vec![0, 1], 1, &t6)?;
    n += identity_holds(&g2, &gf3, vec![1, 1], vec![1, 2], 1, &t7)?;
    let signs: Vec<i64> = t6.iter().chain(&t7).map(|t| t.3.signum()).collect();
    Ok(format!("{n} instances; G2 signs {signs:?}"))
}

fn a3() -> Check {
    let mut out = Vec::new();
    for (t, r) in [("A2", "Z/8"), ("C2", "Z/9")] {
        let rep = rep(t, RepKind::Defining);
        let ring = ring(r);
        let bound = Bounds::of(rep.root_system());
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut longest = 0;
        for k in 0..1000 {
            let g = if t == "A2" && k % 2 == 0 {
                random_determinant_one(&rep, &ring, &mut rng).unwrap()
            } else {
                GroupElement::evaluate(&rep, &ring, &random_word(&rep, &ring, 40, &mut rng))
            };
            let report = local_decompose(&g).map_err(|e| format!("{t} over {r}: {e}"))?;
            if !report.verified || report.len() > bound.n || GroupElement::evaluate(&rep, &ring, &report.word) != g {
                return Err(format!("{t} over {r}: element {k} failed"));
            }
            longest = longest.max(report.len());
        }
        out.push(format!("{t}/{r} N1={} N2={} N={} longest={longest}", bound.n1, bound.n2, bound.n));
    }
    Ok(out.join("; "))
}

fn a4() -> Check {
    let mut out = Vec::new();
    for (t, r, expect) in [("A1", "GF(3)", 24), ("A1", "Z/4", 48), ("A2", "GF(2)", 168)] {
        let rep = rep(t, RepKind::Defining);
        let ring = ring(r);
        let rs = rep.root_system().clone();
        let letters: Vec<_> = rs.roots().flat_map(|a| ring.elements().skip(1).map(move |s| (a, s))).collect();
        let gens: Vec<_> = letters.iter().map(|&(a, s)| GroupElement::elementary(&rep, &ring, a, s)).collect();
        let closure = subgroup_closure(&gens, 1 << 20).map_err(|e| e.to_string())?;
        let mut covered = 0;
        for g in closure.elements() {
            let mut word = ElementaryWord::new();
            for i in closure.word_for(g).unwrap() {
                let k = gens.iter().position(|x| *x == closure.generators()[i]).unwrap();
                word.push(letters[k].0, letters[k].1);
            }
            let blocks = tavgen_decompose(&rep, &ring, &word).map_err(|e| format!("{t} over {r}: {e}"))?;
            if blocks.blocks.len() == 8 && GroupElement::evaluate(&rep, &ring, &blocks.word()) == *g {
                covered += 1;
            }
        }
        if covered != expect || closure.len() != expect {
            return Err(format!("{t} over {r}: {covered}/{} covered, expected {expect}", closure.len()));
        }
        out.push(format!("{t}/{r} {covered}/{expect}"));
    }
    Ok(out.join("; "))
}

fn a5() -> Check {
    let z360 = ring("Z/360");
    let ad = z360.artinian_decompose();
    let labels: Vec<&str> = ad.factors.iter().map(|f| f.label()).collect();
    if labels != ["Z/8", "Z/9", "Z/5"] || !ad.verify() {
        return Err(format!("Z/360 factors {labels:?}"));
    }
    let rep = rep("A2", RepKind::Defining);
    let prod = ring("Z/4 x GF(3)");
    let bound = Bounds::of(rep.root_system()).product;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut longest = 0;
    for k in 0..100 {
        let g = GroupElement::evaluate(&rep, &prod, &random_word(&rep, &prod, 30, &mut rng));
        let report = decompose(&g).map_err(|e| format!("element {k}: {e}"))?;
        if !report.verified || report.len() > bound || GroupElement::evaluate(&rep, &prod, &report.word) != g {
            return Err(format!("element {k} failed"));
        }
        longest = longest.max(report.len());
    }
    Ok(format!("Z/360 = {}; 100 elements over Z/4 x GF(3), longest {longest} <= {bound}", labels.join(" x ")))
}

fn certify(t: &str, r: &str, spec: &str) -> Result<(String, usize, usize), CongruenceError> {
    let rep = rep(t, RepKind::Defining);
    let n = NormalSubgroupHandle::from_spec(&rep, &ring(r), &spec.parse::<SubgroupSpec>()?)?;
    let trace = ideal_certificate(&n)?;
    let (pairs, failures) = all_weyl_level_equalities(&n)?;
    assert!(failures.is_empty(), "Weyl level equality failed");
    Ok((trace.ideal, trace.memberships_verified, pairs))
}

fn a6() -> Check {
    let mut out = Vec::new();
    for (t, r, a) in [("A2", "Z/4", "(2)"), ("C2", "Z/9", "(3)")] {
        let (ideal, members, pairs) = certify(t, r, &format!("kernel:{a}")).map_err(|e| e.to_string())?;
        if ideal != a {
            return Err(format!("{t} over {r}: ideal {ideal}"));
        }
        out.push(format!("{t}/{r} {ideal}, {members} memberships, {pairs} Weyl pairs"));
    }
    match certify("C2", "Z/4", "kernel:(2)") {
        Err(e @ CongruenceError::TwoNotUnit(..)) => out.push(format!("C2/Z/4 refused: {e}")),
        other => return Err(format!("C2 over Z/4 did not refuse: {other:?}")),
    }
    Ok(out.join("; "))
}

fn a7() -> Check {
    let rep3 = rep("A2", RepKind::Defining);
    let z4 = ring("Z/4");
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let extra: Vec<_> = (0..100).map(|_| random_determinant_one(&rep3, &z4, &mut rng).unwrap()).collect();
    let (e, g) = elementary_index(&rep3, &z4, &extra, 1 << 20).map_err(|e| e.to_string())?;
    if e != g || e != 43008 {
        return Err(format!("|E| = {e}, |<E, extra>| = {g}"));
    }
    let mut roots = 0;
    for t in ["A2", "B2"] {
        let rep = rep(t, RepKind::Defining);
        for r in ["GF(2)", "GF(3)"] {
            for a in rep.root_system().roots() {
                if !omit_root_generation_check(&rep, &ring(r), a, 1 << 20).map_err(|e| e.to_string())? {
                    return Err(format!("{t} over {r}: root {a} not generated"));
                }
                roots += 1;
            }
        }
    }
    Ok(format!("index 1 ({e} elements); {roots} omitted-root checks"))
}

fn a8() -> Check {
    let rep = rep("A2", RepKind::Defining);
    let mut out = Vec::new();
    for r in ["Z/2 x Z/3", "Z/2 x Z/2"] {
        let report = cross_factor_commute_check(&rep, &ring(r), 8).map_err(|e| e.to_string())?;
        if !report.passed() || report.sampled || report.opposite_pairs == 0 {
            return Err(format!("{r}: {:?}", report.failures.first()));
        }
        out.push(format!("{r} {} instances", report.instances));
    }
    Ok(out.join("; "))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 8] = [("A1", a1), ("A2", a2), ("A3", a3), ("A4", a4), ("A5", a5), ("A6", a6), ("A7", a7), ("A8", a8)];
    let mut ok = true;
    for (name, f) in criteria {
        let start = Instant::now();
        let result = f();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("{name} pass ({secs:.2}s): {detail}"),
            Err(why) => {
                ok = false;
                println!("{name} FAIL ({secs:.2}s): {why}");
            }
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
