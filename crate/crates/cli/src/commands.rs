//! The subcommands. Each returns a JSON value for stdout and whether the
//! checked property held.

use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Value};

use diffrest::dra::{isomorphism_search, AlgebraMap, FiniteAlgebra, OpTable, Operator, AXIOMS};
use diffrest::duality::{
    check_completion, check_counit_naturality, check_triangle_identities,
    check_triangle_identities_space, check_unit_naturality, complete, counit_lambda, f_morphism,
    f_object, g_morphism, g_object, unit_eta,
};
use diffrest::fixtures;
use diffrest::operators::{
    check_relation_properties, classify_concrete_ops, classify_operator, complete_with_operators,
    expected_compat_preserving_operator, operation_from_relation, relation_from_operator,
    Classification, OperatorReport, Verdict,
};
use diffrest::pfun::ConcreteOp;
use diffrest::space::{check_space_map, SpaceMorphism};

use crate::doc::{
    self, algebra_map_to_doc, algebra_to_doc, emit, operator_from_doc, pfalgebra_doc_of,
    point_names, relation_to_doc, render, space_map_to_doc, space_to_doc, to_value, Diagnostic,
    Document,
};

#[derive(Debug)]
pub enum CliError {
    Input(Diagnostic),
    Library(diffrest::Error),
    Io(String),
}

impl From<Diagnostic> for CliError {
    fn from(d: Diagnostic) -> Self {
        CliError::Input(d)
    }
}

impl From<diffrest::Error> for CliError {
    fn from(e: diffrest::Error) -> Self {
        CliError::Library(e)
    }
}

impl CliError {
    pub fn to_json(&self) -> Value {
        match self {
            CliError::Input(d) => d.to_json(),
            CliError::Library(diffrest::Error::Internal(m)) => {
                json!({ "error": "internal", "message": m })
            }
            CliError::Library(e) => {
                json!({ "error": "input", "path": "", "message": e.to_string() })
            }
            CliError::Io(m) => json!({ "error": "io", "message": m }),
        }
    }
}

pub type CmdResult = Result<Outcome, CliError>;

#[derive(Debug)]
pub struct Outcome {
    pub output: Value,
    /// False when a checked property failed (exit code 1).
    pub ok: bool,
}

impl Outcome {
    fn ok(output: Value) -> Self {
        Outcome { output, ok: true }
    }
}

fn wrong_kind(doc: &Document, expected: &str) -> CliError {
    CliError::Input(Diagnostic::new(
        "/kind",
        format!("expected {expected}, found {}", doc.kind()),
    ))
}

fn need_algebra(doc: &Document) -> Result<&Arc<FiniteAlgebra>, CliError> {
    doc.as_algebra()
        .ok_or_else(|| wrong_kind(doc, "an algebra or pfalgebra"))
}

/// An algebra document whose tables satisfy the axioms.
fn need_valid_algebra(doc: &Document) -> Result<&Arc<FiniteAlgebra>, CliError> {
    let a = need_algebra(doc)?;
    let failed = a.validate_axioms().failed_axioms();
    if !failed.is_empty() {
        return Err(CliError::Library(diffrest::Error::InvalidAlgebra(format!(
            "tables fail axioms {failed:?}; run validate for counterexamples"
        ))));
    }
    Ok(a)
}

fn names(a: &FiniteAlgebra, xs: &[usize]) -> Vec<String> {
    xs.iter().map(|&x| a.name(x).to_string()).collect()
}

fn checks(items: &[(&str, bool)]) -> Value {
    Value::Array(
        items
            .iter()
            .map(|(n, ok)| json!({ "check": n, "holds": ok }))
            .collect(),
    )
}

fn axiom_report(a: &FiniteAlgebra) -> (Value, bool) {
    let report = a.validate_axioms();
    let axioms: Vec<Value> = (1u8..=5)
        .map(|k| {
            let first = report.failures.iter().find(|f| f.axiom == k);
            json!({
                "axiom": k,
                "law": AXIOMS[k as usize - 1],
                "holds": first.is_none(),
                "failures": report.failures.iter().filter(|f| f.axiom == k).count(),
                "counterexample": first.map(|f| json!({
                    "args": names(a, &f.args),
                    "lhs": a.name(f.lhs),
                    "rhs": a.name(f.rhs),
                })),
            })
        })
        .collect();
    let missing = a
        .first_missing_compatible_join()
        .map(|(x, y)| names(a, &[x, y]));
    let value = json!({
        "report": "algebra",
        "valid": report.is_valid(),
        "elements": a.len(),
        "axioms": axioms,
        "fin_compatibly_complete": missing.is_none(),
        "missing_compatible_join": missing,
        "subtraction_algebra": a.is_subtraction_algebra(),
    });
    (value, report.is_valid())
}

fn hom_report(h: &AlgebraMap) -> (Value, bool) {
    let r = h.hom_check();
    let (s, t) = (h.source(), h.target());
    let violations: Vec<Value> = r
        .violations
        .iter()
        .map(|v| {
            json!({
                "operation": v.op,
                "args": names(s, &v.args),
                "image_of_result": t.name(v.image_of_result),
                "result_of_images": t.name(v.result_of_images),
            })
        })
        .collect();
    let value = json!({
        "report": "homomorphism",
        "hom": r.is_hom(),
        "embedding": r.is_embedding(),
        "isomorphism": r.is_isomorphism(),
        "injective": r.injective,
        "surjective": r.surjective,
        "proper": h.is_proper(),
        "arity_mismatches": r.arity_mismatches,
        "violations": violations,
    });
    (value, r.is_hom())
}

pub fn validate(doc: &Document) -> CmdResult {
    match doc {
        Document::Algebra(_) | Document::PfAlgebra(_) => {
            let (output, ok) = axiom_report(need_algebra(doc)?);
            Ok(Outcome { output, ok })
        }
        Document::Space(s) => {
            let r = s.validate();
            let ok = r.is_valid();
            Ok(Outcome {
                output: json!({ "report": "space", "valid": ok, "checks": checks(&r.items()) }),
                ok,
            })
        }
        Document::AlgebraMorphism(h) => {
            let (output, ok) = hom_report(h);
            Ok(Outcome { output, ok })
        }
        Document::SpaceMorphism(m) => {
            let r = check_space_map(&m.source, &m.target, &m.map)?;
            let ok = r.is_valid();
            Ok(Outcome {
                output: json!({ "report": "space_morphism", "valid": ok, "checks": checks(&r.items()) }),
                ok,
            })
        }
        Document::Relation(s, r) => {
            let p = check_relation_properties(s, r)?;
            let ok = p.compatibility_property && p.spectral && p.tight;
            Ok(Outcome {
                output: json!({ "report": "relation", "valid": ok, "checks": checks(&p.items()) }),
                ok,
            })
        }
        Document::Operator(_) => Err(CliError::Input(Diagnostic::new(
            "/kind",
            "operator documents are checked against an algebra with check-op",
        ))),
    }
}

pub fn filters(doc: &Document) -> CmdResult {
    let a = need_valid_algebra(doc)?;
    let fa = f_object(a)?;
    let s = &fa.space;
    let m = &fa.filters;
    let points: Vec<Value> = (0..m.len())
        .map(|p| {
            json!({
                "point": s.point_names()[p],
                "generator": a.name(m.generator(a, p)),
                "filter": names(a, &m.points()[p].iter().collect::<Vec<_>>()),
            })
        })
        .collect();
    let classes: Vec<Vec<String>> = m
        .classes()
        .iter()
        .map(|c| c.iter().map(|&p| s.point_names()[p].clone()).collect())
        .collect();
    let hats: Vec<Value> = a
        .elements()
        .map(|x| json!({ "element": a.name(x), "hat": point_names(s, m.hat(x)) }))
        .collect();
    Ok(Outcome::ok(
        json!({ "report": "filters", "points": points, "classes": classes, "hats": hats }),
    ))
}

pub fn dualize(doc: &Document) -> CmdResult {
    let out = match doc {
        Document::Algebra(_) | Document::PfAlgebra(_) => {
            to_value(&space_to_doc(&f_object(need_valid_algebra(doc)?)?.space))
        }
        Document::Space(s) => to_value(&algebra_to_doc(&g_object(s)?.algebra)),
        Document::AlgebraMorphism(h) => {
            let phi = f_morphism(h)?;
            to_value(&space_map_to_doc(phi.source(), phi.target(), phi.map()))
        }
        Document::SpaceMorphism(m) => {
            let phi = SpaceMorphism::new(m.source.clone(), m.target.clone(), m.map.clone())?;
            to_value(&algebra_map_to_doc(&g_morphism(&phi)?))
        }
        Document::Relation(s, r) => {
            let (dual, op) = operation_from_relation(s, r)?;
            let a = dual.algebra.reduct().with_operator(op)?;
            to_value(&algebra_to_doc(&a))
        }
        Document::Operator(_) => {
            return Err(wrong_kind(doc, "an algebra, space, morphism or relation"))
        }
    };
    Ok(Outcome::ok(out))
}

/// An operator named on the command line: a table carried by the algebra,
/// `meet`, or a concrete operation the pfalgebra is closed under.
fn named_operator(doc: &Document, name: &str) -> Result<Operator, CliError> {
    let a = need_algebra(doc)?;
    if let Some(op) = a.operator(name) {
        return Ok(op.clone());
    }
    if name == "meet" {
        return Ok(Operator::new(
            "meet",
            OpTable::from_fn(a.len(), 2, |t| a.meet(t[0], t[1]))?,
        ));
    }
    if let (Document::PfAlgebra(p), Some(op)) = (doc, ConcreteOp::from_name(name)) {
        if let Some(table) = p.concrete.operator_table(op)? {
            return Ok(Operator::new(op.name(), table));
        }
    }
    Err(CliError::Input(Diagnostic::new(
        "",
        format!("no operator `{name}` on this algebra"),
    )))
}

pub fn complete_cmd(doc: &Document, with_ops: &[String]) -> CmdResult {
    let a = need_valid_algebra(doc)?;
    let ops = with_ops
        .iter()
        .map(|n| named_operator(doc, n))
        .collect::<Result<Vec<_>, _>>()?;
    let (algebra, embedding) = if ops.is_empty() {
        let c = complete(&Arc::new(a.reduct()))?;
        (c.algebra.clone(), c.embedding)
    } else {
        let oc = complete_with_operators(a, &ops)?;
        (oc.algebra.clone(), oc.embedding)
    };
    let check = check_completion(&embedding);
    let src = embedding.source();
    let density: Vec<Value> = algebra
        .elements()
        .map(|c| {
            let below: Vec<usize> = src
                .elements()
                .filter(|&x| algebra.leq(embedding.apply(x), c))
                .collect();
            let images: Vec<usize> = below.iter().map(|&x| embedding.apply(x)).collect();
            json!({
                "element": algebra.name(c),
                "join_of": names(src, &below),
                "holds": algebra.join_if_exists(&images) == Some(c),
            })
        })
        .collect();
    let output = json!({
        "report": "completion",
        "algebra": to_value(&algebra_to_doc(&algebra)),
        "embedding": src.elements().map(|x| json!([src.name(x), algebra.name(embedding.apply(x))])).collect::<Vec<_>>(),
        "embedding_preserves_operations": check.embedding,
        "complete": check.target_complete,
        "dense": check.dense,
        "density": density,
    });
    Ok(Outcome {
        output,
        ok: check.is_completion(),
    })
}

/// Emit, parse and emit again; true when both emissions agree.
fn document_round_trip(value: &Value) -> Result<bool, CliError> {
    let text = render(value);
    let again = render(&emit(&doc::parse(&text)?));
    Ok(text == again)
}

fn isomorphic(a: &Arc<FiniteAlgebra>, b: &Arc<FiniteAlgebra>) -> Result<bool, CliError> {
    Ok(isomorphism_search(a, b)?.is_some())
}

pub fn roundtrip(doc: &Document) -> CmdResult {
    let mut items: Vec<(&str, bool)> = Vec::new();
    match doc {
        Document::Algebra(_) | Document::PfAlgebra(_) => {
            let a = Arc::new(need_valid_algebra(doc)?.reduct());
            let t = check_triangle_identities(&a)?;
            items.push(("triangle_f_eta_after_lambda", t.f_eta_after_lambda));
            items.push(("triangle_g_lambda_after_eta", t.g_lambda_after_eta));
            let eta = unit_eta(&a)?;
            items.push((
                "unit_natural_for_identity",
                check_unit_naturality(&AlgebraMap::identity(a.clone()))?,
            ));
            items.push(("unit_natural_for_eta", check_unit_naturality(&eta)?));
            let fa = f_object(&a)?;
            let lambda = counit_lambda(&fa.space)?;
            items.push((
                "counit_natural_for_f_eta",
                check_counit_naturality(&f_morphism(&eta)?)?,
            ));
            items.push(("counit_iso_on_dual", lambda.is_isomorphism()));
            items.push(("eta_is_completion", check_completion(&eta).is_completion()));
            items.push((
                "eta_iso_iff_complete",
                eta.hom_check().is_isomorphism() == a.is_fin_compatibly_complete(),
            ));
            let c = complete(&a)?;
            let cc = complete(&c.algebra)?;
            items.push((
                "completion_idempotent",
                isomorphic(&c.algebra, &cc.algebra)?,
            ));
            items.push((
                "algebra_document_stable",
                document_round_trip(&to_value(&algebra_to_doc(&a)))?,
            ));
            items.push((
                "dual_document_stable",
                document_round_trip(&to_value(&space_to_doc(&fa.space)))?,
            ));
        }
        Document::Space(s) => {
            let v = s.validate();
            if !v.is_valid() {
                return Err(CliError::Library(diffrest::Error::InvalidSpace(format!(
                    "not an étale space: {:?}",
                    v.items()
                        .iter()
                        .filter(|(_, ok)| !ok)
                        .map(|(n, _)| *n)
                        .collect::<Vec<_>>()
                ))));
            }
            let t = check_triangle_identities_space(s)?;
            items.push(("triangle_f_eta_after_lambda", t.f_eta_after_lambda));
            items.push(("triangle_g_lambda_after_eta", t.g_lambda_after_eta));
            let lambda = counit_lambda(s)?;
            items.push((
                "counit_natural_for_identity",
                check_counit_naturality(&SpaceMorphism::identity(s.clone()))?,
            ));
            items.push((
                "counit_natural_for_lambda",
                check_counit_naturality(&lambda)?,
            ));
            items.push(("counit_iso", lambda.is_isomorphism()));
            let g = g_object(s)?;
            let eta = unit_eta(&g.algebra)?;
            items.push((
                "unit_natural_for_g_lambda",
                check_unit_naturality(&g_morphism(&lambda)?)?,
            ));
            items.push(("unit_iso_on_dual", eta.hom_check().is_isomorphism()));
            let c = complete(&g.algebra)?;
            items.push(("dual_is_complete", isomorphic(&c.algebra, &g.algebra)?));
            items.push((
                "space_document_stable",
                document_round_trip(&to_value(&space_to_doc(s)))?,
            ));
            items.push((
                "dual_document_stable",
                document_round_trip(&to_value(&algebra_to_doc(&g.algebra)))?,
            ));
        }
        _ => return Err(wrong_kind(doc, "an algebra, pfalgebra or space")),
    }
    let ok = items.iter().all(|(_, holds)| *holds);
    Ok(Outcome {
        output: json!({ "report": "roundtrip", "holds": ok, "checks": checks(&items) }),
        ok,
    })
}

pub fn check_hom(doc: &Document, dualize_it: bool) -> CmdResult {
    match doc {
        Document::AlgebraMorphism(h) => {
            let (report, ok) = hom_report(h);
            if dualize_it && ok {
                let phi = f_morphism(h)?;
                return Ok(Outcome::ok(to_value(&space_map_to_doc(
                    phi.source(),
                    phi.target(),
                    phi.map(),
                ))));
            }
            Ok(Outcome { output: report, ok })
        }
        Document::SpaceMorphism(m) => {
            let r = check_space_map(&m.source, &m.target, &m.map)?;
            let ok = r.is_valid();
            if dualize_it && ok {
                let phi = SpaceMorphism::new(m.source.clone(), m.target.clone(), m.map.clone())?;
                return Ok(Outcome::ok(to_value(&algebra_map_to_doc(&g_morphism(
                    &phi,
                )?))));
            }
            Ok(Outcome {
                output: json!({ "report": "space_morphism", "valid": ok, "checks": checks(&r.items()) }),
                ok,
            })
        }
        _ => Err(wrong_kind(doc, "a morphism")),
    }
}

fn verdict(a: &FiniteAlgebra, v: &Verdict) -> Value {
    json!({
        "holds": v.holds,
        "witness": v.witness.as_ref().map(|w| w.iter().map(|t| names(a, t)).collect::<Vec<_>>()),
    })
}

fn operator_report(a: &FiniteAlgebra, r: &OperatorReport) -> Value {
    json!({
        "compat_preserving": verdict(a, &r.compat_preserving),
        "normal": verdict(a, &r.normal),
        "additive": verdict(a, &r.additive),
        "monotone": verdict(a, &r.monotone),
        "operator": r.is_operator(),
        "compat_preserving_operator": r.is_compat_preserving_operator(),
    })
}

/// `op` is a path to an operator document or the name of an operator.
pub fn check_op(doc: &Document, op: &str, relation: bool) -> CmdResult {
    let a = need_valid_algebra(doc)?;
    let operator = if Path::new(op).is_file() {
        match crate::read_document(op)? {
            Document::Operator(o) => operator_from_doc(&o, a, "")?,
            other => return Err(wrong_kind(&other, "an operator")),
        }
    } else {
        named_operator(doc, op)?
    };
    let algebra = a.reduct();
    let report = classify_operator(&algebra, &operator)?;
    let ok = report.is_compat_preserving_operator();
    if relation {
        let fa = f_object(&algebra)?;
        let r = relation_from_operator(&algebra, &operator)?;
        return Ok(Outcome {
            output: to_value(&relation_to_doc(&fa.space, &r)),
            ok,
        });
    }
    let mut output =
        json!({ "report": "operator", "name": operator.name, "arity": operator.arity() });
    if let (Value::Object(out), Value::Object(body)) =
        (&mut output, operator_report(&algebra, &report))
    {
        out.extend(body);
    }
    Ok(Outcome { output, ok })
}

pub fn classify_op(doc: &Document) -> CmdResult {
    let Document::PfAlgebra(p) = doc else {
        return Err(wrong_kind(doc, "a pfalgebra"));
    };
    let mut ok = true;
    let rows: Vec<Value> = classify_concrete_ops(&p.concrete)?
        .into_iter()
        .map(|c| {
            let expected = ConcreteOp::from_name(&c.name).and_then(expected_compat_preserving_operator);
            match &c.classification {
                Classification::Checked { algebra_size, extended, report } => {
                    let agrees = expected.is_none_or(|e| e == report.is_compat_preserving_operator());
                    ok &= agrees;
                    json!({
                        "operation": c.name,
                        "status": "checked",
                        "algebra_size": algebra_size,
                        "extended": extended,
                        "compat_preserving": report.compat_preserving.holds,
                        "normal": report.normal.holds,
                        "additive": report.additive.holds,
                        "monotone": report.monotone.holds,
                        "compat_preserving_operator": report.is_compat_preserving_operator(),
                        "expected": expected,
                        "agrees": agrees,
                    })
                }
                Classification::NotApplicable(why) => {
                    json!({ "operation": c.name, "status": "not_applicable", "reason": why, "expected": expected })
                }
                Classification::Skipped(why) => {
                    json!({ "operation": c.name, "status": "skipped", "reason": why, "expected": expected })
                }
                Classification::NotImplemented => {
                    json!({ "operation": c.name, "status": "not_implemented", "reason": "no fixed definition" })
                }
            }
        })
        .collect();
    Ok(Outcome {
        output: json!({ "report": "classification", "agrees": ok, "operations": rows }),
        ok,
    })
}

/// Every fixture file, as `(file name, document)`, in a fixed order.
pub fn catalog_files() -> Result<Vec<(String, Value)>, CliError> {
    let mut out = Vec::new();
    for fx in fixtures::catalog() {
        let pf = pfalgebra_doc_of(&fx.concrete, fx.algebra.names());
        out.push((format!("{}.pfalgebra.json", fx.name), to_value(&pf)));
        out.push((
            format!("{}.algebra.json", fx.name),
            to_value(&algebra_to_doc(&fx.algebra)),
        ));
        out.push((
            format!("{}.space.json", fx.name),
            to_value(&space_to_doc(&f_object(&fx.algebra)?.space)),
        ));
    }
    out.push((
        "A3c_broken_restriction.algebra.json".into(),
        to_value(&algebra_to_doc(&fixtures::a3c_broken_restriction())),
    ));
    for (name, h) in fixtures::fixture_homs()? {
        if name.starts_with("id_") || name.starts_with("eta_") {
            continue;
        }
        out.push((
            format!("{name}.morphism.json"),
            to_value(&algebra_map_to_doc(&h)),
        ));
    }
    let b4 = fixtures::b4();
    if let Some(d) = b4.concrete_operator(ConcreteOp::Domain)? {
        out.push((
            "B4_domain.operator.json".into(),
            to_value(&doc::operator_to_doc(&b4.algebra, &d)),
        ));
    }
    Ok(out)
}

pub fn catalog(out_dir: Option<&Path>) -> CmdResult {
    let files = catalog_files()?;
    match out_dir {
        None => {
            let entries: Vec<Value> = files
                .into_iter()
                .map(|(n, d)| json!({ "file": n, "document": d }))
                .collect();
            Ok(Outcome::ok(
                json!({ "report": "catalog", "fixtures": entries }),
            ))
        }
        Some(dir) => {
            std::fs::create_dir_all(dir)
                .map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
            let mut written = Vec::new();
            for (name, value) in files {
                let path = dir.join(&name);
                std::fs::write(&path, render(&value))
                    .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                written.push(name);
            }
            Ok(Outcome::ok(
                json!({ "report": "catalog", "written": written }),
            ))
        }
    }
}

pub fn normalize(doc: &Document) -> CmdResult {
    Ok(Outcome::ok(emit(doc)))
}
