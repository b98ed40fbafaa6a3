use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use super::{CommandRequest, OutputFormat, Outcome, Payload, Subcommand, SCHEMA};
use crate::chevalley::ChevalleyBasis;
use crate::congruence::{
    all_weyl_level_equalities, elementary_generators, ideal_certificate, level_set, CongruenceError, NormalSubgroupHandle,
    SubgroupSpec,
};
use crate::decomposition::{decompose, tavgen_decompose, tavgen_report, Algorithm, Bounds, DecompositionError};
use crate::group::{
    subgroup_closure, verify_steinberg_relations, ElementaryWord, GroupElement, GroupError, RelationMode, Representation,
};
use crate::ring::{Code, RingSpec};
use crate::roots::{Root, RootSystem};

enum CliError {
    /// Exit 2.
    Malformed(String),
    /// Exit 1.
    Failed(String),
}

struct Report {
    ok: bool,
    text: String,
    result: Value,
}

type CmdResult = Result<Report, CliError>;

fn malformed(e: impl std::fmt::Display) -> CliError {
    CliError::Malformed(e.to_string())
}

fn failed(e: impl std::fmt::Display) -> CliError {
    CliError::Failed(e.to_string())
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn required<'a>(field: &'a Option<String>, name: &str) -> Result<&'a str, CliError> {
    field.as_deref().ok_or_else(|| CliError::Malformed(format!("missing {name}")))
}

fn ring_of(req: &CommandRequest) -> Result<RingSpec, CliError> {
    RingSpec::parse(required(&req.ring, "ring")?).map_err(malformed)
}

fn rep_of(req: &CommandRequest) -> Result<Arc<Representation>, CliError> {
    Representation::for_type(required(&req.type_label, "type")?, req.rep).map_err(malformed)
}

fn group_error(e: GroupError) -> CliError {
    match e {
        GroupError::CapExceeded(_) => failed(e),
        e => malformed(e),
    }
}

fn decomposition_error(e: DecompositionError) -> CliError {
    match e {
        DecompositionError::NotLocal(_) | DecompositionError::NotField(_) | DecompositionError::Unsupported(_) => malformed(e),
        DecompositionError::Group(g) => group_error(g),
        e => failed(e),
    }
}

fn congruence_error(e: CongruenceError) -> CliError {
    match e {
        CongruenceError::BadSubgroup(_) | CongruenceError::Ring(_) | CongruenceError::Root(_) => malformed(e),
        CongruenceError::Group(g) => group_error(g),
        e => failed(e),
    }
}

fn ring_decompose(req: &CommandRequest) -> CmdResult {
    let ring = ring_of(req)?;
    let ad = ring.artinian_decompose();
    let verified = ad.verify();
    let factors: Vec<String> = ad.factors.iter().map(|f| f.label().to_string()).collect();
    let idempotents: Vec<String> = (0..factors.len()).map(|i| ring.format_element(ad.idempotent(i))).collect();
    let mut text = format!("{} = {}\n", ring.label(), factors.join(" x "));
    writeln!(text, "idempotents: {}", idempotents.join(", ")).unwrap();
    writeln!(text, "isomorphism {} on {} elements", if verified { "verified" } else { "FAILED" }, ring.size()).unwrap();
    Ok(Report {
        ok: verified,
        text,
        result: json!({"ring": ring.label(), "factors": factors, "idempotents": idempotents, "elements_checked": ring.size(), "verified": verified}),
    })
}

fn roots_show(req: &CommandRequest) -> CmdResult {
    let rs = RootSystem::parse(required(&req.type_label, "type")?).map_err(malformed)?;
    let weyl = rs.weyl_elements(100_000).map(|w| w.len());
    let cartan: Vec<Vec<i64>> = (0..rs.rank())
        .map(|i| (0..rs.rank()).map(|j| rs.pairing(rs.simple_root(j), rs.simple_root(i))).collect())
        .collect();
    let positive: Vec<Value> = rs
        .positive_roots()
        .map(|r| json!({"root": rs.vector(r), "height": rs.height(r), "long": rs.is_long(r)}))
        .collect();
    let mut text = format!("{}: rank {}, {} roots, {} positive\n", rs.label(), rs.rank(), rs.len(), rs.num_positive());
    match weyl {
        Some(n) => writeln!(text, "Weyl group order {n}").unwrap(),
        None => writeln!(text, "Weyl group order > 100000").unwrap(),
    }
    writeln!(text, "Cartan matrix {cartan:?}").unwrap();
    for r in rs.positive_roots() {
        writeln!(text, "  {} height {}{}", rs.format_root(r), rs.height(r), if rs.has_two_lengths() && !rs.is_long(r) { " short" } else { "" }).unwrap();
    }
    Ok(Report {
        ok: true,
        text,
        result: json!({"type": rs.label(), "rank": rs.rank(), "roots": rs.len(), "positive": positive, "simple": rs.simple_roots().iter().map(|&r| rs.vector(r)).collect::<Vec<_>>(), "cartan": cartan, "weyl_order": weyl}),
    })
}

#[derive(Serialize)]
struct CoefficientJson {
    alpha: Vec<i64>,
    beta: Vec<i64>,
    i: u32,
    j: u32,
    root: Vec<i64>,
    value: i64,
}

/// Commutator coefficients for pairs of positive roots.
fn coefficient_table(basis: &ChevalleyBasis) -> Vec<CoefficientJson> {
    let rs = basis.root_system();
    let mut out = Vec::new();
    for a in rs.positive_roots() {
        for b in rs.positive_roots() {
            for c in basis.commutator_coefficients(a, b).expect("positive pair") {
                out.push(CoefficientJson {
                    alpha: rs.vector(a).to_vec(),
                    beta: rs.vector(b).to_vec(),
                    i: c.term.i,
                    j: c.term.j,
                    root: rs.vector(c.term.root).to_vec(),
                    value: c.value,
                });
            }
        }
    }
    out
}

fn coefficient_lines(table: &[CoefficientJson], text: &mut String) {
    for c in table {
        writeln!(text, "  N[{:?},{:?}]^({},{}) -> {:?}: {}", c.alpha, c.beta, c.i, c.j, c.root, c.value).unwrap();
    }
}

fn chevalley_constants(req: &CommandRequest) -> CmdResult {
    let rs = Arc::new(RootSystem::parse(required(&req.type_label, "type")?).map_err(malformed)?);
    let basis = ChevalleyBasis::new(rs.clone());
    let bounds = Bounds::of(&rs);
    let extraspecial: Vec<Value> = basis
        .extraspecial_pairs()
        .iter()
        .map(|&(x, a, b)| json!({"sum": rs.vector(x), "alpha": rs.vector(a), "beta": rs.vector(b), "n": basis.n(a, b)}))
        .collect();
    let mut text = format!("{}: N1 = {}, N2 = {}, N = {}, N*|Phi| = {}\n", rs.label(), bounds.n1, bounds.n2, bounds.n, bounds.product);
    writeln!(text, "extraspecial pairs:").unwrap();
    for &(x, a, b) in basis.extraspecial_pairs() {
        writeln!(text, "  {} = {} + {}: N = {}", rs.format_root(x), rs.format_root(a), rs.format_root(b), basis.n(a, b)).unwrap();
    }
    let table = if rs.rank() <= 4 { Some(coefficient_table(&basis)) } else { None };
    if let Some(t) = &table {
        writeln!(text, "commutator coefficients:").unwrap();
        coefficient_lines(t, &mut text);
    }
    Ok(Report {
        ok: true,
        text,
        result: json!({"type": rs.label(), "bounds": bounds, "dim": basis.dim(), "extraspecial": extraspecial, "commutator_coefficients": table}),
    })
}

fn verify_relations(req: &CommandRequest) -> CmdResult {
    let rep = rep_of(req)?;
    let ring = ring_of(req)?;
    let report = verify_steinberg_relations(&rep, &ring, RelationMode::Both, req.seed);
    let table = (rep.root_system().rank() <= 4).then(|| coefficient_table(rep.basis()));
    let mut text = format!(
        "{} over {}: R1 {} checks, R2 {} checks ({} opposite pairs excluded), {}\n",
        rep.describe(),
        ring.label(),
        report.r1_checks,
        report.r2_checks,
        report.excluded_pairs,
        if report.sampled { format!("sampled with seed {}", req.seed) } else { "exhaustive".into() }
    );
    match report.failures.first() {
        None => writeln!(text, "all relations hold").unwrap(),
        Some(f) => writeln!(text, "{} failures; first: {} alpha={:?} beta={:?} s={} t={}", report.failures.len(), f.relation, f.alpha, f.beta, f.s, f.t).unwrap(),
    }
    if let Some(t) = &table {
        writeln!(text, "signs:").unwrap();
        coefficient_lines(t, &mut text);
    }
    Ok(Report {
        ok: report.passed(),
        text,
        result: json!({"rep": rep.describe(), "ring": ring.label(), "report": report, "commutator_coefficients": table}),
    })
}

fn group_decompose(req: &CommandRequest) -> CmdResult {
    let rep = rep_of(req)?;
    let ring = ring_of(req)?;
    let rs = rep.root_system();
    let algorithm = req.algorithm.unwrap_or(Algorithm::Prop2);
    let (g, word) = match req.input.as_ref().ok_or_else(|| malformed("missing input"))? {
        Payload::Matrix(rows) => (GroupElement::from_strings(&rep, &ring, rows).map_err(malformed)?, None),
        Payload::Word(letters) => {
            let w = ElementaryWord::from_json(letters, rs, &ring).map_err(malformed)?;
            (GroupElement::evaluate(&rep, &ring, &w), Some(w))
        }
    };
    let report = match algorithm {
        Algorithm::Prop2 => decompose(&g).map_err(decomposition_error)?,
        Algorithm::Tavgen => {
            let w = match word {
                Some(w) => w,
                None => decompose(&g).map_err(decomposition_error)?.word,
            };
            tavgen_report(&g, &w).map_err(decomposition_error)?
        }
    };
    let bounds = Bounds::of(rs);
    let text = format!(
        "{} over {}: word of length {} (bound {} = {}), verified\n{}\n",
        rep.describe(),
        ring.label(),
        report.len(),
        report.bound_name,
        report.bound,
        report.word.format(rs, &ring)
    );
    Ok(Report { ok: report.verified, text, result: json!({"algorithm": algorithm, "bounds": bounds, "report": report.to_json()}) })
}

fn generator_letters(rep: &Arc<Representation>, ring: &RingSpec) -> (Vec<GroupElement>, HashMap<GroupElement, (Root, Code)>) {
    let gens = elementary_generators(rep, ring);
    let rs = rep.root_system();
    let letters = rs.roots().flat_map(|r| ring.elements().skip(1).map(move |t| (r, t)));
    let map = gens.iter().cloned().zip(letters).collect();
    (gens, map)
}

fn group_closure(req: &CommandRequest) -> CmdResult {
    let rep = rep_of(req)?;
    let ring = ring_of(req)?;
    let closure = subgroup_closure(&elementary_generators(&rep, &ring), req.cap).map_err(group_error)?;
    let text = format!("elementary subgroup of {} over {} has order {}\n", rep.describe(), ring.label(), closure.len());
    Ok(Report { ok: true, text, result: json!({"rep": rep.describe(), "ring": ring.label(), "order": closure.len()}) })
}

fn subgroup_of(req: &CommandRequest, rep: &Arc<Representation>, ring: &RingSpec) -> Result<NormalSubgroupHandle, CliError> {
    let spec: SubgroupSpec = required(&req.subgroup, "subgroup")?.parse().map_err(congruence_error)?;
    NormalSubgroupHandle::from_spec(rep, ring, &spec).map_err(congruence_error)
}

fn congruence_certify(req: &CommandRequest) -> CmdResult {
    let rep = rep_of(req)?;
    let ring = ring_of(req)?;
    let n = subgroup_of(req, &rep, &ring)?;
    let trace = ideal_certificate(&n).map_err(congruence_error)?;
    let mut text = format!("{} over {}, N = {}\nideal {} ({} elements) via {}\n", rep.describe(), ring.label(), trace.subgroup, trace.ideal, trace.ideal_size, trace.route);
    for s in &trace.steps {
        writeln!(text, "  {}: {} [{} instances]", s.identity, s.statement, s.instances).unwrap();
    }
    if let Some(b) = &trace.b_identity {
        writeln!(text, "  stated form {} ({})", b.stated, if b.stated_holds { "holds" } else { "does not hold" }).unwrap();
        writeln!(text, "  verified form {}", b.verified).unwrap();
    }
    for (name, v) in &trace.signs {
        writeln!(text, "  {name} = {v}").unwrap();
    }
    writeln!(text, "{}; {} memberships re-verified; {} Weyl pairs agree", trace.branch, trace.memberships_verified, trace.weyl_pairs_checked).unwrap();
    Ok(Report { ok: true, text, result: to_value(&trace) })
}

fn congruence_levels(req: &CommandRequest) -> CmdResult {
    let rep = rep_of(req)?;
    let ring = ring_of(req)?;
    let n = subgroup_of(req, &rep, &ring)?;
    let rs = rep.root_system();
    let levels: Vec<_> = rs.roots().map(|a| level_set(&n, a)).collect();
    let (pairs, failures) = all_weyl_level_equalities(&n).map_err(congruence_error)?;
    let mut text = String::new();
    for l in &levels {
        writeln!(text, "{}: {{{}}}{}", rs.format_root(l.root_index), l.members.join(", "), l.ideal.as_ref().map(|i| format!(" = ideal {i}")).unwrap_or_default()).unwrap();
    }
    writeln!(text, "Weyl level equality: {}/{} same-length pairs agree", pairs - failures.len(), pairs).unwrap();
    let fails: Vec<_> = failures.iter().map(|&(a, b)| json!([rs.vector(a), rs.vector(b)])).collect();
    Ok(Report {
        ok: failures.is_empty() && levels.iter().all(|l| l.additively_closed),
        text,
        result: json!({"subgroup": n.describe(), "levels": levels, "weyl_pairs": pairs, "weyl_failures": fails}),
    })
}

fn ebg_check(req: &CommandRequest) -> CmdResult {
    let rep = rep_of(req)?;
    let ring = ring_of(req)?;
    let rs = rep.root_system();
    let (gens, letters) = generator_letters(&rep, &ring);
    let closure = subgroup_closure(&gens, req.cap).map_err(group_error)?;
    let mut covered = 0;
    let mut witness = None;
    for g in closure.elements() {
        let mut word = ElementaryWord::new();
        for s in closure.word_for(g).expect("element of the closure") {
            let (r, t) = letters[&closure.generators()[s]];
            word.push(r, t);
        }
        match tavgen_decompose(&rep, &ring, &word) {
            Ok(b) if GroupElement::evaluate(&rep, &ring, &b.word()) == *g => covered += 1,
            Ok(_) => witness = witness.or(Some((g.rows_formatted(), "verification failed".to_string()))),
            Err(DecompositionError::NotLocal(_) | DecompositionError::Unsupported(_)) => {
                return Err(malformed(format!("(U+U-)^4 check needs a local ring and rank at most 4; got {} over {}", rs.label(), ring.label())));
            }
            Err(e) => witness = witness.or(Some((g.rows_formatted(), e.to_string()))),
        }
    }
    let total = closure.len();
    let mut text = format!("{covered}/{total} elements in (U+U-)^4\n");
    if let Some((m, e)) = &witness {
        writeln!(text, "witness {m:?}: {e}").unwrap();
    }
    Ok(Report {
        ok: covered == total,
        text,
        result: json!({"rep": rep.describe(), "ring": ring.label(), "covered": covered, "total": total, "witness": witness.map(|(m, e)| json!({"matrix": m, "error": e}))}),
    })
}

fn envelope(command: &str, ok: bool, body: (&str, Value)) -> String {
    let mut v = json!({"schema": SCHEMA, "command": command, "ok": ok});
    v[body.0] = body.1;
    serde_json::to_string_pretty(&v).expect("json") + "\n"
}

pub(super) fn malformed_outcome(format: OutputFormat, command: &str, msg: &str) -> Outcome {
    let output = match format {
        OutputFormat::Text => format!("error: {msg}\n"),
        OutputFormat::Json => envelope(command, false, ("error", json!(msg))),
    };
    Outcome { code: 2, output }
}

/// Runs one request and renders its output.
pub fn run(req: &CommandRequest) -> Outcome {
    let result = match req.subcommand {
        Subcommand::RingDecomposeArtinian => ring_decompose(req),
        Subcommand::RootsShow => roots_show(req),
        Subcommand::ChevalleyConstants => chevalley_constants(req),
        Subcommand::GroupVerifyRelations => verify_relations(req),
        Subcommand::GroupDecompose => group_decompose(req),
        Subcommand::GroupClosure => group_closure(req),
        Subcommand::CongruenceCertify => congruence_certify(req),
        Subcommand::CongruenceLevels => congruence_levels(req),
        Subcommand::EbgCheck => ebg_check(req),
    };
    let command = req.subcommand.name();
    match result {
        Ok(r) => {
            let output = match req.format {
                OutputFormat::Text => r.text,
                OutputFormat::Json => envelope(command, r.ok, ("result", r.result)),
            };
            Outcome { code: if r.ok { 0 } else { 1 }, output }
        }
        Err(CliError::Malformed(msg)) => malformed_outcome(req.format, command, &msg),
        Err(CliError::Failed(msg)) => {
            let output = match req.format {
                OutputFormat::Text => format!("failed: {msg}\n"),
                OutputFormat::Json => envelope(command, false, ("error", json!(msg))),
            };
            Outcome { code: 1, output }
        }
    }
}
