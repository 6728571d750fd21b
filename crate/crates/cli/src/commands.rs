use std::fmt::Write as _;

use serde_json::{json, Value};

use occ_core::classifier::{check_exhaustiveness, classify, DimRegime, OverallVerdict, VanishingVerdict};
use occ_core::frobenius::{
    euler_number, orientation_squares_to_zero, restriction_kills_orientation, verify_all_identities,
    verify_euler_composite, EmbeddingData,
};
use occ_core::io::print_occ;
use occ_core::par::Exec;
use occ_core::sewing::sew;
use occ_core::surface::{canonical_key, invariants, total_invariants, Cobordism};
use occ_core::tqft::family::{check_classifier_consistency, FamilyBounds};
use occ_core::tqft::{
    check_sewing, decompose, evaluate_decomposition, Assignment, OperationMatrix, ShadowAssignment,
};
use occ_core::Q;

use crate::load::{self, CliError};
use crate::{Command, FamilyArgs, ShadowArgs};

/// A finished report: human text, its JSON mirror, and whether every check
/// in it passed.
pub struct Report {
    pub text: String,
    pub json: Value,
    pub ok: bool,
}

pub fn run(cmd: Command) -> Result<Report, CliError> {
    match cmd {
        Command::Invariants { file } => Ok(invariants_report(&load::cobordism(&file)?)),
        Command::Classify { file, d, strict_dims } => {
            let regime = if strict_dims { DimRegime::Strict } else { DimRegime::AllBelow };
            Ok(classify_report(&load::cobordism(&file)?, d, regime))
        }
        Command::Canonical { file } => {
            let key = canonical_key(&load::cobordism(&file)?).to_string();
            Ok(Report {
                text: format!("{key}\n"),
                json: json!({ "canonical": key }),
                ok: true,
            })
        }
        Command::Sew { a, b, plan, check, shadow } => {
            let (a, b, plan) = (load::strict_cobordism(&a)?, load::strict_cobordism(&b)?, load::plan(&plan)?);
            sew_report(&a, &b, &plan, check.then_some(shadow))
        }
        Command::Eval { file, model, assignment, shadow } => {
            let c = load::strict_cobordism(&file)?;
            match (model.as_deref(), assignment) {
                (_, Some(path)) => {
                    let table = load::assignment(&path)?;
                    let branes: Vec<String> = c.branes.iter().map(|b| b.name.clone()).collect();
                    table
                        .validate(&branes)
                        .map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))?;
                    eval_report(&c, &table, "assignment file")
                }
                (None | Some("shadow"), None) => {
                    let s = ShadowAssignment::new(shadow.d, shadow.chi_m, &c.branes);
                    let oversized = ShadowAssignment::oversized(shadow.d, &c.branes);
                    if !oversized.is_empty() {
                        return Err(CliError::Domain(format!(
                            "shadow assignment needs every brane below dimension {}: {}",
                            shadow.d,
                            oversized.join(", ")
                        )));
                    }
                    eval_report(&c, &s, &format!("shadow d={} chiM={}", shadow.d, shadow.chi_m))
                }
                (Some(other), None) => Err(CliError::Usage(format!(
                    "unknown evaluation model `{other}`: use `shadow` or --assignment"
                ))),
            }
        }
        Command::VerifyTransfers { model, embedding } => Ok(transfers_report(&load::embeddings(
            model.as_deref(),
            embedding.as_deref(),
        )?)),
        Command::Enumerate { bound, family, family_bounds, sequential } => {
            let exec = if sequential { Exec::Sequential } else { Exec::Parallel };
            Ok(enumerate_report(bound, family.then_some(family_bounds), exec))
        }
    }
}

fn invariants_report(c: &Cobordism) -> Report {
    let mut text = String::new();
    let mut comps = Vec::new();
    for (k, x) in invariants(c).iter().enumerate() {
        let _ = writeln!(text, "component {k}: {x} chi={}", occ_core::surface::euler_char(&c.components[k]));
        comps.push(json!({ "component": k, "tuple": x.as_array(), "chi": occ_core::surface::euler_char(&c.components[k]) }));
    }
    let total = total_invariants(c);
    let _ = writeln!(text, "total: {total} chi={}", c.euler_char());
    Report {
        text,
        json: json!({ "components": comps, "total": total.as_array(), "chi": c.euler_char() }),
        ok: true,
    }
}

fn classify_report(c: &Cobordism, d: u32, regime: DimRegime) -> Report {
    let cl = classify(c, d, regime);
    let mut text = String::new();
    let mut comps = Vec::new();
    for cv in &cl.components {
        let v = &cv.verdict;
        let rule = v.rule().map(|r| format!("{r:?}"));
        let btype = v.btype().map(|t| t.to_string());
        let detail = match v {
            VanishingVerdict::Inconclusive(missing) => missing
                .iter()
                .map(|m| format!("{:?}:{:?}", m.rule, m.hypothesis))
                .collect::<Vec<_>>()
                .join(","),
            VanishingVerdict::Invalid(reason) => reason.clone(),
            _ => String::new(),
        };
        let _ = write!(text, "component {}: {} {}", cv.component, cv.tuple, v.kind().to_uppercase());
        if let Some(r) = &rule {
            let _ = write!(text, " rule={r}");
        }
        if let Some(t) = &btype {
            let _ = write!(text, " btype={t}");
        }
        if let Some(cite) = v.citation() {
            let _ = write!(text, " cite={cite}");
        }
        if !detail.is_empty() {
            let _ = write!(text, " detail={detail}");
        }
        text.push('\n');
        comps.push(json!({
            "component": cv.component,
            "tuple": cv.tuple.as_array(),
            "verdict": v.kind(),
            "rule": rule,
            "citation": v.citation(),
            "btype": btype,
            "detail": (!detail.is_empty()).then_some(detail),
        }));
    }
    let _ = writeln!(text, "overall: {}", cl.overall);
    Report {
        text,
        json: json!({ "components": comps, "overall": cl.overall.to_string() }),
        ok: !matches!(cl.overall, OverallVerdict::Invalid),
    }
}

fn sew_report(
    a: &Cobordism,
    b: &Cobordism,
    plan: &occ_core::sewing::SewPlan,
    check: Option<ShadowArgs>,
) -> Result<Report, CliError> {
    let domain = |e: &dyn std::fmt::Display| CliError::Domain(format!("sewing failed: {e}"));
    let sewn = sew(a, b, plan).map_err(|e| domain(&e))?;
    let inv = invariants_report(&sewn);
    let occ = print_occ(&sewn);
    let mut text = occ.clone();
    text.push_str(&inv.text);
    let mut json = json!({ "cobordism": occ, "invariants": inv.json });
    let mut ok = true;
    if let Some(shadow) = check {
        let s = ShadowAssignment::new(shadow.d, shadow.chi_m, &sewn.branes);
        let res = check_sewing(a, b, plan, &s).map_err(|e| domain(&e))?;
        let _ = writeln!(text, "{res}");
        ok = res.passed();
        json["check"] = json!({
            "euler": res.euler,
            "euler_consistent": res.euler.consistent(),
            "direct": res.direct.to_string(),
            "composite": res.composite.to_string(),
            "sign": res.sign,
            "passed": ok,
        });
    }
    Ok(Report { text, json, ok })
}

fn matrix_json(m: &OperationMatrix) -> Value {
    let entries: Vec<Value> = m
        .entries
        .iter()
        .map(|(&(r, c), q)| json!([r, c, q.to_string()]))
        .collect();
    json!({
        "profile": m.profile(),
        "rows": m.rows(),
        "cols": m.cols(),
        "zero": m.is_zero(),
        "map": m.to_string(),
        "entries": entries,
    })
}

fn eval_report(c: &Cobordism, assignment: &dyn Assignment, label: &str) -> Result<Report, CliError> {
    let dec = decompose(c).map_err(|e| CliError::Domain(format!("cannot evaluate: {e}")))?;
    let m = evaluate_decomposition(&dec, assignment).map_err(|e| CliError::Domain(format!("cannot evaluate: {e}")))?;
    let text = format!(
        "assignment: {label}\nword: {dec}\nprofile: {}\nmap: {m}\n",
        m.profile()
    );
    let mut json = matrix_json(&m);
    json["assignment"] = json!(label);
    json["word"] = json!(dec.render());
    Ok(Report { text, json, ok: true })
}

fn status(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn transfers_report(embeddings: &[EmbeddingData]) -> Report {
    let mut text = String::new();
    let mut items = Vec::new();
    let mut all_ok = true;
    for e in embeddings {
        let (l, m) = (e.source(), e.target());
        let _ = writeln!(text, "embedding {} ({} -> {}, codim {})", e.name(), l.name(), m.name(), e.codim());
        let reports = verify_all_identities(e);
        for r in &reports {
            let _ = writeln!(text, "  {r}");
        }
        let identities_ok = reports.iter().all(|r| r.passed);
        let _ = writeln!(text, "  identities 1..9: {}", status(identities_ok));
        let composite = verify_euler_composite(e);
        let _ = writeln!(text, "  euler composite: {} over {} case(s)", status(composite.passed), composite.cases);
        let mut facts = Vec::new();
        if m.dim() >= 1 {
            facts.push(("orientation squares to zero", orientation_squares_to_zero(m)));
        }
        if l.dim() < m.dim() {
            facts.push(("restriction kills orientation", restriction_kills_orientation(e)));
        }
        let mut euler = None;
        if e.name().starts_with("diag-") {
            let n = euler_number(e);
            let chi = l.euler_char();
            let _ = writeln!(text, "  euler number of the diagonal: {n} (chi = {chi})");
            facts.push(("diagonal euler number equals chi", n == Q::from_integer(chi)));
            euler = Some(json!({ "value": n.to_string(), "chi": chi }));
        }
        for (name, ok) in &facts {
            let _ = writeln!(text, "  {name}: {}", status(*ok));
        }
        let ok = identities_ok && composite.passed && facts.iter().all(|f| f.1);
        all_ok &= ok;
        items.push(json!({
            "embedding": e.name(),
            "source": l.name(),
            "target": m.name(),
            "codim": e.codim(),
            "identities": reports,
            "identities_passed": identities_ok,
            "euler_composite": composite,
            "facts": facts.iter().map(|(n, ok)| json!({ "fact": n, "passed": ok })).collect::<Vec<_>>(),
            "diagonal_euler_number": euler,
            "passed": ok,
        }));
    }
    let _ = writeln!(text, "summary: {} embedding(s), {}", embeddings.len(), status(all_ok));
    Report {
        text,
        json: json!({ "embeddings": items, "passed": all_ok }),
        ok: all_ok,
    }
}

fn enumerate_report(bound: u32, family: Option<FamilyArgs>, exec: Exec) -> Report {
    let ex = check_exhaustiveness(bound, exec);
    let mut text = ex.to_string();
    let mut ok = ex.passed();
    let mut json = json!({ "exhaustiveness": ex });
    if let Some(f) = family {
        let bounds = FamilyBounds {
            genus: f.genus,
            windows: f.windows,
            circles: f.circles,
            arcs: f.arcs,
            ..FamilyBounds::default()
        };
        let report = check_classifier_consistency(bounds, exec);
        text.push_str(&report.to_string());
        ok &= report.passed();
        json["family"] = serde_json::to_value(&report).expect("report serializes");
    }
    json["passed"] = json!(ok);
    Report { text, json, ok }
}
