//! JSON documents: schemas, parsing with positioned diagnostics, and
//! canonical emission.
//!
//! Every document is an object with a `kind` and a `version` (currently 1).
//! Tables are row-major arrays of element names; spaces and relations refer
//! to points by name.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use diffrest::bitset::PointSet;
use diffrest::dra::{AlgebraMap, FiniteAlgebra, OpTable, Operator};
use diffrest::operators::SpaceRelation;
use diffrest::pfun::{closure_generate, Carrier, ConcreteOp, ConcretePFAlgebra, PartialFunction};
use diffrest::space::EtaleSpace;

pub const VERSION: u64 = 1;

/// A problem with an input document, located by a JSON pointer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub path: String,
    pub message: String,
}

impl Diagnostic {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic {
            path: path.into(),
            message: message.into(),
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({ "error": "input", "path": self.path, "message": self.message })
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path = if self.path.is_empty() {
            "/"
        } else {
            &self.path
        };
        write!(f, "{path}: {}", self.message)
    }
}

type DResult<T> = Result<T, Diagnostic>;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct OperatorBody {
    pub name: String,
    pub arity: usize,
    pub table: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDoc {
    pub kind: String,
    pub version: u64,
    pub elements: Vec<String>,
    pub minus: Vec<Vec<String>>,
    pub rest: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub operators: Vec<OperatorBody>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub graph: Vec<(String, String)>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct PfAlgebraDoc {
    pub kind: String,
    pub version: u64,
    pub carrier: Vec<String>,
    pub generators: Vec<GeneratorDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub close_under: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct SpaceDoc {
    pub kind: String,
    pub version: u64,
    pub points: Vec<String>,
    pub base: Vec<String>,
    /// The base point under each point, aligned with `points`.
    pub projection: Vec<String>,
    pub basis: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Algebra,
    Space,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MorphismDoc {
    pub kind: String,
    pub version: u64,
    pub category: Category,
    pub source: Value,
    pub target: Value,
    /// `[source, target]` pairs in source order; `null` targets mark
    /// points where a space map is undefined.
    pub map: Vec<(String, Option<String>)>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct OperatorDoc {
    pub kind: String,
    pub version: u64,
    pub name: String,
    pub arity: usize,
    pub table: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RelationDoc {
    pub kind: String,
    pub version: u64,
    pub name: String,
    pub arity: usize,
    pub space: SpaceDoc,
    pub tuples: Vec<Vec<String>>,
}

/// A concrete algebra with the names its elements were given.
#[derive(Debug, Clone)]
pub struct PfAlgebra {
    pub doc: PfAlgebraDoc,
    pub concrete: ConcretePFAlgebra,
    /// The `{−, ⇂}` algebra, carrying an operator for every extra
    /// operation it was closed under.
    pub algebra: Arc<FiniteAlgebra>,
}

/// A space map as written, checked only by the commands that need it.
#[derive(Debug, Clone)]
pub struct RawSpaceMap {
    pub source: Arc<EtaleSpace>,
    pub target: Arc<EtaleSpace>,
    pub map: Vec<Option<usize>>,
}

#[derive(Debug, Clone)]
pub enum Document {
    Algebra(Arc<FiniteAlgebra>),
    PfAlgebra(PfAlgebra),
    Space(Arc<EtaleSpace>),
    AlgebraMorphism(AlgebraMap),
    SpaceMorphism(RawSpaceMap),
    Operator(OperatorDoc),
    Relation(Arc<EtaleSpace>, SpaceRelation),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Algebra(_) => "algebra",
            Document::PfAlgebra(_) => "pfalgebra",
            Document::Space(_) => "space",
            Document::AlgebraMorphism(_) | Document::SpaceMorphism(_) => "morphism",
            Document::Operator(_) => "operator",
            Document::Relation(..) => "relation",
        }
    }

    /// The abstract algebra behind an algebra or pfalgebra document.
    pub fn as_algebra(&self) -> Option<&Arc<FiniteAlgebra>> {
        match self {
            Document::Algebra(a) => Some(a),
            Document::PfAlgebra(p) => Some(&p.algebra),
            _ => None,
        }
    }
}

fn pointer(prefix: &str, rest: &str) -> String {
    format!("{prefix}{rest}")
}

fn path_to_pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } => {
                out.push_str(&format!("/{}", key.replace('~', "~0").replace('/', "~1")))
            }
            Segment::Enum { variant } => out.push_str(&format!("/{variant}")),
            Segment::Unknown => out.push_str("/?"),
        }
    }
    out
}

fn typed<T: DeserializeOwned>(value: &Value, prefix: &str) -> DResult<T> {
    serde_path_to_error::deserialize(value.clone()).map_err(|e| {
        let message = e.inner().to_string();
        Diagnostic::new(pointer(prefix, &path_to_pointer(e.path())), message)
    })
}

/// Parse document text.
pub fn parse(text: &str) -> DResult<Document> {
    let value: Value = serde_json::from_str(text).map_err(|e| {
        Diagnostic::new("", format!("line {} column {}: {e}", e.line(), e.column()))
    })?;
    parse_value(&value, "")
}

/// Parse an already-decoded document whose position is `prefix`.
pub fn parse_value(value: &Value, prefix: &str) -> DResult<Document> {
    let obj = value
        .as_object()
        .ok_or_else(|| Diagnostic::new(prefix, "document must be an object"))?;
    let kind = obj
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| Diagnostic::new(pointer(prefix, "/kind"), "missing string field `kind`"))?;
    match obj.get("version").and_then(Value::as_u64) {
        Some(VERSION) => {}
        Some(v) => {
            return Err(Diagnostic::new(
                pointer(prefix, "/version"),
                format!("unsupported version {v}"),
            ))
        }
        None => {
            return Err(Diagnostic::new(
                pointer(prefix, "/version"),
                "missing integer field `version`",
            ))
        }
    }
    match kind {
        "algebra" => Ok(Document::Algebra(Arc::new(algebra_from_doc(&typed(value, prefix)?, prefix)?))),
        "pfalgebra" => Ok(Document::PfAlgebra(pfalgebra_from_doc(typed(value, prefix)?, prefix)?)),
        "space" => Ok(Document::Space(Arc::new(space_from_doc(&typed(value, prefix)?, prefix)?))),
        "morphism" => morphism_from_doc(&typed(value, prefix)?, prefix),
        "operator" => Ok(Document::Operator(typed(value, prefix)?)),
        "relation" => {
            let doc: RelationDoc = typed(value, prefix)?;
            let (space, rel) = relation_from_doc(&doc, prefix)?;
            Ok(Document::Relation(space, rel))
        }
        other => Err(Diagnostic::new(
            pointer(prefix, "/kind"),
            format!("unknown kind `{other}` (expected algebra, pfalgebra, space, morphism, operator or relation)"),
        )),
    }
}

fn index_names(names: &[String], path: &str, what: &str) -> DResult<BTreeMap<String, usize>> {
    let mut index = BTreeMap::new();
    for (i, n) in names.iter().enumerate() {
        if index.insert(n.clone(), i).is_some() {
            return Err(Diagnostic::new(
                format!("{path}/{i}"),
                format!("duplicate {what} `{n}`"),
            ));
        }
    }
    Ok(index)
}

fn resolve(
    index: &BTreeMap<String, usize>,
    name: &str,
    path: String,
    what: &str,
) -> DResult<usize> {
    index
        .get(name)
        .copied()
        .ok_or_else(|| Diagnostic::new(path, format!("unknown {what} `{name}`")))
}

fn binary_table(
    rows: &[Vec<String>],
    index: &BTreeMap<String, usize>,
    path: &str,
    field: &str,
) -> DResult<OpTable> {
    let n = index.len();
    if rows.len() != n {
        return Err(Diagnostic::new(
            format!("{path}/{field}"),
            format!("table has {} rows, expected {n}", rows.len()),
        ));
    }
    let mut entries = Vec::with_capacity(n * n);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(Diagnostic::new(
                format!("{path}/{field}/{i}"),
                format!("row has {} entries, expected {n}", row.len()),
            ));
        }
        for (j, name) in row.iter().enumerate() {
            entries.push(resolve(
                index,
                name,
                format!("{path}/{field}/{i}/{j}"),
                "element",
            )?);
        }
    }
    OpTable::new(n, 2, entries)
        .map_err(|e| Diagnostic::new(format!("{path}/{field}"), e.to_string()))
}

/// Resolve an operator table against the element names of `a`.
pub fn operator_from_body(body: &OperatorBody, a: &FiniteAlgebra, path: &str) -> DResult<Operator> {
    let index: BTreeMap<String, usize> = a
        .names()
        .iter()
        .enumerate()
        .map(|(i, n)| (n.clone(), i))
        .collect();
    let expected = a
        .len()
        .checked_pow(body.arity as u32)
        .filter(|&e| e <= 1 << 20)
        .ok_or_else(|| {
            Diagnostic::new(
                format!("{path}/arity"),
                format!("arity {} is too large", body.arity),
            )
        })?;
    if body.table.len() != expected {
        return Err(Diagnostic::new(
            format!("{path}/table"),
            format!(
                "table has {} entries, expected {expected} for arity {} over {} elements",
                body.table.len(),
                body.arity,
                a.len()
            ),
        ));
    }
    let entries = body
        .table
        .iter()
        .enumerate()
        .map(|(i, n)| resolve(&index, n, format!("{path}/table/{i}"), "element"))
        .collect::<DResult<Vec<_>>>()?;
    let table = OpTable::new(a.len(), body.arity, entries)
        .map_err(|e| Diagnostic::new(path, e.to_string()))?;
    Ok(Operator::new(body.name.clone(), table))
}

pub fn operator_from_doc(doc: &OperatorDoc, a: &FiniteAlgebra, path: &str) -> DResult<Operator> {
    let body = OperatorBody {
        name: doc.name.clone(),
        arity: doc.arity,
        table: doc.table.clone(),
    };
    operator_from_body(&body, a, path)
}

pub fn algebra_from_doc(doc: &AlgebraDoc, prefix: &str) -> DResult<FiniteAlgebra> {
    if doc.elements.is_empty() {
        return Err(Diagnostic::new(
            pointer(prefix, "/elements"),
            "an algebra needs at least one element",
        ));
    }
    let index = index_names(&doc.elements, &pointer(prefix, "/elements"), "element")?;
    let minus = binary_table(&doc.minus, &index, prefix, "minus")?;
    let rest = binary_table(&doc.rest, &index, prefix, "rest")?;
    let mut a = FiniteAlgebra::new(doc.elements.clone(), minus, rest)
        .map_err(|e| Diagnostic::new(prefix, e.to_string()))?;
    for (k, body) in doc.operators.iter().enumerate() {
        let path = pointer(prefix, &format!("/operators/{k}"));
        let op = operator_from_body(body, &a, &path)?;
        a = a
            .with_operator(op)
            .map_err(|e| Diagnostic::new(format!("{path}/name"), e.to_string()))?;
    }
    Ok(a)
}

pub fn algebra_to_doc(a: &FiniteAlgebra) -> AlgebraDoc {
    let name = |i: usize| a.name(i).to_string();
    let table = |f: &dyn Fn(usize, usize) -> usize| -> Vec<Vec<String>> {
        a.elements()
            .map(|x| a.elements().map(|y| name(f(x, y))).collect())
            .collect()
    };
    AlgebraDoc {
        kind: "algebra".into(),
        version: VERSION,
        elements: a.names().to_vec(),
        minus: table(&|x, y| a.minus(x, y)),
        rest: table(&|x, y| a.rest(x, y)),
        operators: a
            .operators()
            .iter()
            .map(|op| OperatorBody {
                name: op.name.clone(),
                arity: op.arity(),
                table: op.table.entries().iter().map(|&e| name(e)).collect(),
            })
            .collect(),
    }
}

pub fn operator_to_doc(a: &FiniteAlgebra, op: &Operator) -> OperatorDoc {
    OperatorDoc {
        kind: "operator".into(),
        version: VERSION,
        name: op.name.clone(),
        arity: op.arity(),
        table: op
            .table
            .entries()
            .iter()
            .map(|&e| a.name(e).to_string())
            .collect(),
    }
}

fn pfalgebra_from_doc(mut doc: PfAlgebraDoc, prefix: &str) -> DResult<PfAlgebra> {
    if doc.carrier.is_empty() {
        return Err(Diagnostic::new(
            pointer(prefix, "/carrier"),
            "the carrier needs at least one point",
        ));
    }
    let points = index_names(&doc.carrier, &pointer(prefix, "/carrier"), "carrier point")?;
    let carrier = Carrier::with_labels(doc.carrier.clone())
        .map_err(|e| Diagnostic::new(prefix, e.to_string()))?;
    let n = carrier.size();
    let mut seeds = Vec::new();
    for (i, g) in doc.generators.iter_mut().enumerate() {
        let path = pointer(prefix, &format!("/generators/{i}/graph"));
        let mut pairs = Vec::new();
        for (j, (x, y)) in g.graph.iter().enumerate() {
            let x = resolve(&points, x, format!("{path}/{j}/0"), "carrier point")?;
            let y = resolve(&points, y, format!("{path}/{j}/1"), "carrier point")?;
            pairs.push((x, y));
        }
        let f = PartialFunction::from_pairs(n, &pairs)
            .map_err(|e| Diagnostic::new(path, e.to_string()))?;
        g.graph = f
            .pairs()
            .map(|(x, y)| (doc.carrier[x].clone(), doc.carrier[y].clone()))
            .collect();
        seeds.push(f);
    }
    let mut extra = Vec::new();
    for (i, name) in doc.close_under.iter().enumerate() {
        let op = ConcreteOp::from_name(name).ok_or_else(|| {
            Diagnostic::new(
                pointer(prefix, &format!("/close_under/{i}")),
                format!("unknown operation `{name}`"),
            )
        })?;
        if !matches!(op, ConcreteOp::Difference | ConcreteOp::Restrict) && !extra.contains(&op) {
            extra.push(op);
        }
    }
    let mut ops = vec![ConcreteOp::Difference, ConcreteOp::Restrict];
    ops.extend(&extra);
    let concrete = closure_generate(&carrier, &seeds, &ops)
        .map_err(|e| Diagnostic::new(prefix, e.to_string()))?;
    let mut names = Vec::new();
    for f in concrete.elements() {
        let given = doc
            .generators
            .iter()
            .zip(&seeds)
            .filter(|(g, s)| *s == f && g.name.is_some())
            .map(|(g, _)| g.name.clone().unwrap())
            .next();
        names.push(match given {
            Some(n) => n,
            None if f.is_empty() => "0".into(),
            None => f.display_with(&carrier),
        });
    }
    let distinct: BTreeSet<&String> = names.iter().collect();
    if distinct.len() != names.len() {
        return Err(Diagnostic::new(
            pointer(prefix, "/generators"),
            "element names are not distinct",
        ));
    }
    let mut algebra = concrete
        .to_named_algebra(names)
        .map_err(|e| Diagnostic::new(prefix, e.to_string()))?;
    for op in extra {
        let table = concrete
            .operator_table(op)
            .map_err(|e| Diagnostic::new(prefix, e.to_string()))?
            .ok_or_else(|| Diagnostic::new(prefix, format!("closure is not closed under {op}")))?;
        algebra = algebra
            .with_operator(Operator::new(op.name(), table))
            .map_err(|e| Diagnostic::new(prefix, e.to_string()))?;
    }
    doc.close_under = ops[2..].iter().map(|op| op.name().to_string()).collect();
    Ok(PfAlgebra {
        doc,
        concrete,
        algebra: Arc::new(algebra),
    })
}

/// A pfalgebra document listing every nonzero element as a generator.
pub fn pfalgebra_doc_of(concrete: &ConcretePFAlgebra, names: &[String]) -> PfAlgebraDoc {
    let carrier = concrete.carrier();
    let labels: Vec<String> = (0..carrier.size()).map(|i| carrier.label(i)).collect();
    let generators = concrete
        .elements()
        .iter()
        .zip(names)
        .filter(|(f, _)| !f.is_empty())
        .map(|(f, n)| GeneratorDoc {
            name: (*n != f.display_with(carrier)).then(|| n.clone()),
            graph: f
                .pairs()
                .map(|(x, y)| (labels[x].clone(), labels[y].clone()))
                .collect(),
        })
        .collect();
    PfAlgebraDoc {
        kind: "pfalgebra".into(),
        version: VERSION,
        carrier: labels,
        generators,
        close_under: vec![],
    }
}

pub fn space_from_doc(doc: &SpaceDoc, prefix: &str) -> DResult<EtaleSpace> {
    let points = index_names(&doc.points, &pointer(prefix, "/points"), "point")?;
    let base = index_names(&doc.base, &pointer(prefix, "/base"), "base point")?;
    if points.len() > PointSet::CAPACITY {
        return Err(Diagnostic::new(
            pointer(prefix, "/points"),
            format!("at most {} points are supported", PointSet::CAPACITY),
        ));
    }
    if doc.projection.len() != doc.points.len() {
        return Err(Diagnostic::new(
            pointer(prefix, "/projection"),
            format!(
                "projection has {} entries for {} points",
                doc.projection.len(),
                doc.points.len()
            ),
        ));
    }
    let projection = doc
        .projection
        .iter()
        .enumerate()
        .map(|(i, b)| {
            resolve(
                &base,
                b,
                pointer(prefix, &format!("/projection/{i}")),
                "base point",
            )
        })
        .collect::<DResult<Vec<_>>>()?;
    let mut basis = Vec::new();
    for (i, set) in doc.basis.iter().enumerate() {
        let mut u = PointSet::EMPTY;
        for (j, p) in set.iter().enumerate() {
            u = u.with(resolve(
                &points,
                p,
                pointer(prefix, &format!("/basis/{i}/{j}")),
                "point",
            )?);
        }
        basis.push(u);
    }
    EtaleSpace::new(doc.points.clone(), doc.base.clone(), projection, basis)
        .map_err(|e| Diagnostic::new(prefix, e.to_string()))
}

pub fn point_names(s: &EtaleSpace, u: PointSet) -> Vec<String> {
    u.iter().map(|p| s.point_names()[p].clone()).collect()
}

pub fn space_to_doc(s: &EtaleSpace) -> SpaceDoc {
    SpaceDoc {
        kind: "space".into(),
        version: VERSION,
        points: s.point_names().to_vec(),
        base: s.base_names().to_vec(),
        projection: (0..s.len())
            .map(|p| s.base_names()[s.project(p)].clone())
            .collect(),
        basis: s.basis().iter().map(|&u| point_names(s, u)).collect(),
    }
}

fn morphism_from_doc(doc: &MorphismDoc, prefix: &str) -> DResult<Document> {
    let source = parse_value(&doc.source, &pointer(prefix, "/source"))?;
    let target = parse_value(&doc.target, &pointer(prefix, "/target"))?;
    let (src_names, tgt_names): (Vec<String>, Vec<String>) = match (doc.category, &source, &target)
    {
        (Category::Algebra, s, t) => {
            let s = s.as_algebra().ok_or_else(|| {
                Diagnostic::new(pointer(prefix, "/source"), "expected an algebra")
            })?;
            let t = t.as_algebra().ok_or_else(|| {
                Diagnostic::new(pointer(prefix, "/target"), "expected an algebra")
            })?;
            (s.names().to_vec(), t.names().to_vec())
        }
        (Category::Space, Document::Space(s), Document::Space(t)) => {
            (s.point_names().to_vec(), t.point_names().to_vec())
        }
        (Category::Space, Document::Space(_), _) => {
            return Err(Diagnostic::new(
                pointer(prefix, "/target"),
                "expected a space",
            ))
        }
        (Category::Space, _, _) => {
            return Err(Diagnostic::new(
                pointer(prefix, "/source"),
                "expected a space",
            ))
        }
    };
    let src_index: BTreeMap<String, usize> = src_names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.clone(), i))
        .collect();
    let tgt_index: BTreeMap<String, usize> = tgt_names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.clone(), i))
        .collect();
    let mut map: Vec<Option<Option<usize>>> = vec![None; src_names.len()];
    for (i, (x, y)) in doc.map.iter().enumerate() {
        let path = pointer(prefix, &format!("/map/{i}"));
        let xi = resolve(&src_index, x, format!("{path}/0"), "source name")?;
        if map[xi].is_some() {
            return Err(Diagnostic::new(
                format!("{path}/0"),
                format!("`{x}` is mapped twice"),
            ));
        }
        let yi = match y {
            Some(y) => Some(resolve(&tgt_index, y, format!("{path}/1"), "target name")?),
            None if doc.category == Category::Algebra => {
                return Err(Diagnostic::new(
                    format!("{path}/1"),
                    "algebra maps are total",
                ))
            }
            None => None,
        };
        map[xi] = Some(yi);
    }
    if let Some(missing) = map.iter().position(Option::is_none) {
        return Err(Diagnostic::new(
            pointer(prefix, "/map"),
            format!(
                "`{}` has no entry (use null for undefined)",
                src_names[missing]
            ),
        ));
    }
    let map: Vec<Option<usize>> = map.into_iter().map(Option::unwrap).collect();
    match doc.category {
        Category::Algebra => {
            let (s, t) = (
                source.as_algebra().unwrap().clone(),
                target.as_algebra().unwrap().clone(),
            );
            let table = map.into_iter().map(Option::unwrap).collect();
            let h =
                AlgebraMap::new(s, t, table).map_err(|e| Diagnostic::new(prefix, e.to_string()))?;
            Ok(Document::AlgebraMorphism(h))
        }
        Category::Space => match (source, target) {
            (Document::Space(source), Document::Space(target)) => {
                Ok(Document::SpaceMorphism(RawSpaceMap {
                    source,
                    target,
                    map,
                }))
            }
            _ => unreachable!("categories checked above"),
        },
    }
}

pub fn algebra_map_to_doc(h: &AlgebraMap) -> MorphismDoc {
    let (s, t) = (h.source(), h.target());
    MorphismDoc {
        kind: "morphism".into(),
        version: VERSION,
        category: Category::Algebra,
        source: to_value(&algebra_to_doc(s)),
        target: to_value(&algebra_to_doc(t)),
        map: s
            .elements()
            .map(|x| (s.name(x).to_string(), Some(t.name(h.apply(x)).to_string())))
            .collect(),
    }
}

pub fn space_map_to_doc(
    source: &EtaleSpace,
    target: &EtaleSpace,
    map: &[Option<usize>],
) -> MorphismDoc {
    MorphismDoc {
        kind: "morphism".into(),
        version: VERSION,
        category: Category::Space,
        source: to_value(&space_to_doc(source)),
        target: to_value(&space_to_doc(target)),
        map: map
            .iter()
            .enumerate()
            .map(|(x, y)| {
                (
                    source.point_names()[x].clone(),
                    y.map(|y| target.point_names()[y].clone()),
                )
            })
            .collect(),
    }
}

fn relation_from_doc(doc: &RelationDoc, prefix: &str) -> DResult<(Arc<EtaleSpace>, SpaceRelation)> {
    let space = space_from_doc(&doc.space, &pointer(prefix, "/space"))?;
    let index: BTreeMap<String, usize> = space
        .point_names()
        .iter()
        .enumerate()
        .map(|(i, n)| (n.clone(), i))
        .collect();
    let mut tuples = BTreeSet::new();
    for (i, t) in doc.tuples.iter().enumerate() {
        let path = pointer(prefix, &format!("/tuples/{i}"));
        if t.len() != doc.arity {
            return Err(Diagnostic::new(
                path,
                format!("tuple has {} entries, expected {}", t.len(), doc.arity),
            ));
        }
        let t = t
            .iter()
            .enumerate()
            .map(|(j, p)| resolve(&index, p, format!("{path}/{j}"), "point"))
            .collect::<DResult<Vec<_>>>()?;
        tuples.insert(t);
    }
    let rel = SpaceRelation::new(doc.name.clone(), doc.arity, tuples)
        .map_err(|e| Diagnostic::new(prefix, e.to_string()))?;
    Ok((Arc::new(space), rel))
}

pub fn relation_to_doc(s: &EtaleSpace, r: &SpaceRelation) -> RelationDoc {
    RelationDoc {
        kind: "relation".into(),
        version: VERSION,
        name: r.name.clone(),
        arity: r.arity,
        space: space_to_doc(s),
        tuples: r
            .tuples
            .iter()
            .map(|t| t.iter().map(|&p| s.point_names()[p].clone()).collect())
            .collect(),
    }
}

pub fn to_value<T: Serialize>(doc: &T) -> Value {
    serde_json::to_value(doc).expect("documents serialize")
}

/// The canonical document for a parsed value.
pub fn emit(doc: &Document) -> Value {
    match doc {
        Document::Algebra(a) => to_value(&algebra_to_doc(a)),
        Document::PfAlgebra(p) => to_value(&p.doc),
        Document::Space(s) => to_value(&space_to_doc(s)),
        Document::AlgebraMorphism(h) => to_value(&algebra_map_to_doc(h)),
        Document::SpaceMorphism(m) => to_value(&space_map_to_doc(&m.source, &m.target, &m.map)),
        Document::Operator(o) => to_value(o),
        Document::Relation(s, r) => to_value(&relation_to_doc(s, r)),
    }
}

/// Pretty JSON with a trailing newline.
pub fn render(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("values serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const A3C: &str = r#"{
        "kind": "algebra", "version": 1,
        "elements": ["0", "a", "b"],
        "minus": [["0","0","0"], ["a","0","a"], ["b","b","0"]],
        "rest":  [["0","0","0"], ["0","a","0"], ["0","0","b"]]
    }"#;

    #[test]
    fn parses_a3c() {
        let Document::Algebra(a) = parse(A3C).unwrap() else {
            panic!()
        };
        assert_eq!(a.len(), 3);
        assert!(a.validate_axioms().is_valid());
    }

    #[test]
    fn emission_is_idempotent() {
        let once = render(&emit(&parse(A3C).unwrap()));
        let twice = render(&emit(&parse(&once).unwrap()));
        assert_eq!(once, twice);
    }

    #[test]
    fn bad_row_is_located() {
        let bad = A3C.replace(r#"["a","0","a"]"#, r#"["a","0"]"#);
        let d = parse(&bad).unwrap_err();
        assert_eq!(d.path, "/minus/1");
        let bad = A3C.replace(r#"["b","b","0"]"#, r#"["b","c","0"]"#);
        let d = parse(&bad).unwrap_err();
        assert_eq!(d.path, "/minus/2/1");
        assert!(d.message.contains("`c`"));
    }

    #[test]
    fn schema_errors_are_located() {
        let bad = A3C.replace(
            r#""elements": ["0", "a", "b"]"#,
            r#""elements": ["0", 7, "b"]"#,
        );
        assert_eq!(parse(&bad).unwrap_err().path, "/elements/1");
        let bad = A3C.replace(r#""version": 1"#, r#""version": 2"#);
        assert_eq!(parse(&bad).unwrap_err().path, "/version");
        let bad = A3C.replace(r#""kind": "algebra""#, r#""kind": "lattice""#);
        assert_eq!(parse(&bad).unwrap_err().path, "/kind");
    }

    #[test]
    fn operator_arity_mismatch_names_the_table() {
        let with_op = A3C.replace(
            r#""rest":"#,
            r#""operators": [{"name": "d", "arity": 1, "table": ["0", "a"]}], "rest":"#,
        );
        let d = parse(&with_op).unwrap_err();
        assert_eq!(d.path, "/operators/0/table");
    }

    #[test]
    fn pfalgebra_names_and_normalises() {
        let text = r#"{"kind": "pfalgebra", "version": 1, "carrier": ["x", "y"],
            "generators": [{"name": "a", "graph": [["x", "x"]]}, {"graph": [["y","y"]]}],
            "close_under": ["compose", "compose"]}"#;
        let Document::PfAlgebra(p) = parse(text).unwrap() else {
            panic!()
        };
        assert_eq!(
            p.algebra.names(),
            &["0".to_string(), "{(y,y)}".into(), "a".into()]
        );
        assert_eq!(p.doc.close_under, vec!["compose".to_string()]);
        assert!(p.algebra.operator("compose").is_some());
    }

    #[test]
    fn nested_morphism_paths() {
        let text = format!(
            r#"{{"kind": "morphism", "version": 1, "category": "algebra", "source": {A3C}, "target": {A3C},
                "map": [["0","0"], ["a","a"], ["b","q"]]}}"#
        );
        assert_eq!(parse(&text).unwrap_err().path, "/map/2/1");
        let text = text.replace(
            r#""elements": ["0", "a", "b"]"#,
            r#""elements": ["0", "a", "a"]"#,
        );
        assert_eq!(parse(&text).unwrap_err().path, "/source/elements/2");
    }
}
