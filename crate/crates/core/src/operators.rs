//! Extra operations on algebras and their dual relations on spaces.
//!
//! An `n`-ary operation `Ω` on `A` gives an `(n+1)`-ary relation `R_Ω` on
//! the maximal filters, and a relation `R` on a space gives an operation
//! `Ω_R` on sections. The checks here decide, exhaustively, the properties
//! that make these constructions inverse to each other.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::bitset::PointSet;
use crate::dra::{AlgebraMap, FiniteAlgebra, OpTable, Operator};
use crate::duality::{complete, f_object, g_object, Completion, DualAlgebra};
use crate::error::{Error, Result};
use crate::limits::{check_cap, Limits};
use crate::pfun::{closure_generate, tuples, ConcreteOp, ConcretePFAlgebra};
use crate::space::{EtaleSpace, SpaceMorphism};

/// An `(n+1)`-ary relation on the points of a space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpaceRelation {
    pub name: String,
    pub arity: usize,
    pub tuples: BTreeSet<Vec<usize>>,
}

impl SpaceRelation {
    pub fn new(
        name: impl Into<String>,
        arity: usize,
        tuples: BTreeSet<Vec<usize>>,
    ) -> Result<Self> {
        if arity == 0 {
            return Err(Error::Precondition(
                "relations have arity at least 1".into(),
            ));
        }
        if tuples.iter().any(|t| t.len() != arity) {
            return Err(Error::Precondition(format!(
                "relation tuples must have length {arity}"
            )));
        }
        Ok(SpaceRelation {
            name: name.into(),
            arity,
            tuples,
        })
    }

    pub fn contains(&self, t: &[usize]) -> bool {
        self.tuples.contains(t)
    }

    fn check_points(&self, s: &EtaleSpace) -> Result<()> {
        if self.tuples.iter().flatten().any(|&x| x >= s.len()) {
            return Err(Error::Precondition(format!(
                "relation {} mentions unknown points",
                self.name
            )));
        }
        Ok(())
    }
}

/// Outcome of one exhaustive property check, with a counterexample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    /// The argument tuples that break the property.
    pub witness: Option<Vec<Vec<usize>>>,
}

impl Verdict {
    fn from_witness(witness: Option<Vec<Vec<usize>>>) -> Self {
        Verdict {
            holds: witness.is_none(),
            witness,
        }
    }
}

fn check_operator_caps(a: &FiniteAlgebra, op: &Operator) -> Result<()> {
    let limits = Limits::current();
    check_cap(
        "algebra for operator checks",
        a.len(),
        limits.operator_elements,
    )?;
    check_cap("operator arity", op.arity(), limits.operator_arity)?;
    if op.table.size() != a.len() {
        return Err(Error::MalformedTable(format!(
            "operator {} is over {} elements, algebra has {}",
            op.name,
            op.table.size(),
            a.len()
        )));
    }
    Ok(())
}

/// Coordinate-wise compatible arguments give compatible results.
pub fn check_compat_preserving(a: &FiniteAlgebra, op: &Operator) -> Result<Verdict> {
    check_operator_caps(a, op)?;
    let pairs: Vec<(usize, usize)> = a
        .elements()
        .flat_map(|x| a.elements().map(move |y| (x, y)))
        .filter(|&(x, y)| a.compatible(x, y))
        .collect();
    for choice in tuples(pairs.len(), op.arity()) {
        let left: Vec<usize> = choice.iter().map(|&i| pairs[i].0).collect();
        let right: Vec<usize> = choice.iter().map(|&i| pairs[i].1).collect();
        if !a.compatible(op.table.get(&left), op.table.get(&right)) {
            return Ok(Verdict::from_witness(Some(vec![left, right])));
        }
    }
    Ok(Verdict::from_witness(None))
}

/// `Ω(..., 0, ...) = 0` in every coordinate.
pub fn check_normal(a: &FiniteAlgebra, op: &Operator) -> Result<Verdict> {
    check_operator_caps(a, op)?;
    let witness = tuples(a.len(), op.arity())
        .find(|t| t.contains(&a.bottom()) && op.table.get(t) != a.bottom())
        .map(|t| vec![t]);
    Ok(Verdict::from_witness(witness))
}

/// `Ω(..., b + c, ...) = Ω(..., b, ...) + Ω(..., c, ...)` whenever `b + c`
/// exists. The witness is the pair of tuples with `b` and with `c`.
pub fn check_additive(a: &FiniteAlgebra, op: &Operator) -> Result<Verdict> {
    check_operator_caps(a, op)?;
    let joins: Vec<(usize, usize, usize)> = a
        .elements()
        .flat_map(|b| a.elements().map(move |c| (b, c)))
        .filter_map(|(b, c)| a.join_if_exists(&[b, c]).map(|j| (b, c, j)))
        .collect();
    for t in tuples(a.len(), op.arity()) {
        for i in 0..op.arity() {
            for &(b, c, j) in &joins {
                let (mut tb, mut tc, mut tj) = (t.clone(), t.clone(), t.clone());
                tb[i] = b;
                tc[i] = c;
                tj[i] = j;
                let rhs = a.join_if_exists(&[op.table.get(&tb), op.table.get(&tc)]);
                if rhs != Some(op.table.get(&tj)) {
                    return Ok(Verdict::from_witness(Some(vec![tb, tc])));
                }
            }
        }
    }
    Ok(Verdict::from_witness(None))
}

/// Order preserving in each coordinate. The witness is `(smaller, larger)`.
pub fn check_monotone(a: &FiniteAlgebra, op: &Operator) -> Result<Verdict> {
    check_operator_caps(a, op)?;
    for t in tuples(a.len(), op.arity()) {
        for i in 0..op.arity() {
            for y in a.elements().filter(|&y| a.leq(t[i], y)) {
                let mut u = t.clone();
                u[i] = y;
                if !a.leq(op.table.get(&t), op.table.get(&u)) {
                    return Ok(Verdict::from_witness(Some(vec![t, u])));
                }
            }
        }
    }
    Ok(Verdict::from_witness(None))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorReport {
    pub compat_preserving: Verdict,
    pub normal: Verdict,
    pub additive: Verdict,
    pub monotone: Verdict,
}

impl OperatorReport {
    pub fn is_operator(&self) -> bool {
        self.normal.holds && self.additive.holds
    }

    pub fn is_compat_preserving_operator(&self) -> bool {
        self.compat_preserving.holds && self.is_operator()
    }
}

pub fn classify_operator(a: &FiniteAlgebra, op: &Operator) -> Result<OperatorReport> {
    Ok(OperatorReport {
        compat_preserving: check_compat_preserving(a, op)?,
        normal: check_normal(a, op)?,
        additive: check_additive(a, op)?,
        monotone: check_monotone(a, op)?,
    })
}

/// `R_Ω μ₁…μₙ₊₁` iff `Ω(a₁, …, aₙ) ∈ μₙ₊₁` whenever each `aᵢ ∈ μᵢ`, over
/// the points of `F(A)`.
pub fn relation_from_operator(a: &FiniteAlgebra, op: &Operator) -> Result<SpaceRelation> {
    check_operator_caps(a, op)?;
    let fa = f_object(a)?;
    let points = fa.filters.points();
    let n = op.arity();
    let mut out = BTreeSet::new();
    for mus in tuples(points.len(), n) {
        let members: Vec<Vec<usize>> = mus.iter().map(|&m| points[m].iter().collect()).collect();
        let images: BTreeSet<usize> = tuples_over(&members)
            .map(|args| op.table.get(&args))
            .collect();
        for (last, nu) in points.iter().enumerate() {
            if images.iter().all(|&x| nu.contains(x)) {
                let mut t = mus.clone();
                t.push(last);
                out.insert(t);
            }
        }
    }
    SpaceRelation::new(op.name.clone(), n + 1, out)
}

/// All tuples choosing one entry from each list.
fn tuples_over(lists: &[Vec<usize>]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let sizes: Vec<usize> = lists.iter().map(Vec::len).collect();
    let total: usize = sizes.iter().product();
    (0..total).map(move |mut code| {
        let mut t = vec![0; lists.len()];
        for k in (0..lists.len()).rev() {
            t[k] = lists[k][code % sizes[k]];
            code /= sizes[k];
        }
        t
    })
}

/// `Ω_R(S₁, …, Sₙ) = {xₙ₊₁ | ∃ xᵢ ∈ Sᵢ, R x₁…xₙ₊₁}`.
pub fn omega_r(r: &SpaceRelation, args: &[PointSet]) -> PointSet {
    r.tuples
        .iter()
        .filter(|t| {
            t[..t.len() - 1]
                .iter()
                .zip(args)
                .all(|(&x, s)| s.contains(x))
        })
        .map(|t| t[t.len() - 1])
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RelationReport {
    pub compatibility_property: bool,
    pub continuous: bool,
    pub spectral: bool,
    pub tight: bool,
}

impl RelationReport {
    pub fn items(&self) -> [(&'static str, bool); 4] {
        [
            ("compatibility_property", self.compatibility_property),
            ("continuous", self.continuous),
            ("spectral", self.spectral),
            ("tight", self.tight),
        ]
    }
}

/// `x C y` iff `π(x) = π(y)` forces `x = y`.
fn point_compatible(s: &EtaleSpace, x: usize, y: usize) -> bool {
    s.project(x) != s.project(y) || x == y
}

pub fn check_relation_properties(s: &EtaleSpace, r: &SpaceRelation) -> Result<RelationReport> {
    r.check_points(s)?;
    let n = r.arity - 1;
    let rel: Vec<&Vec<usize>> = r.tuples.iter().collect();
    let compatibility_property = rel.iter().all(|t| {
        rel.iter().all(|u| {
            !(0..n).all(|i| point_compatible(s, t[i], u[i])) || point_compatible(s, t[n], u[n])
        })
    });
    // Ω_R commutes with unions in each argument and every open set is a
    // union of minimal neighbourhoods, so those tuples decide continuity.
    // In a finite space every set is compact, so spectral reduces to it.
    let nbhd_tuples: Vec<Vec<PointSet>> = tuples(s.len(), n)
        .map(|xs| xs.iter().map(|&x| s.nbhd(x)).collect())
        .collect();
    let continuous = nbhd_tuples.iter().all(|args| s.is_open(omega_r(r, args)));
    let spectral = continuous
        && nbhd_tuples
            .iter()
            .all(|args| s.is_compact(omega_r(r, args)));
    // Ω_R is monotone, so the condition over all compact opens around the
    // xᵢ is decided at their minimal neighbourhoods.
    let tight = tuples(s.len(), n + 1).all(|t| {
        let args: Vec<PointSet> = t[..n].iter().map(|&x| s.nbhd(x)).collect();
        !omega_r(r, &args).contains(t[n]) || r.contains(&t)
    });
    Ok(RelationReport {
        compatibility_property,
        continuous,
        spectral,
        tight,
    })
}

/// `Ω_R` as an operation table on `G(S)`.
pub fn operation_from_relation(
    s: &Arc<EtaleSpace>,
    r: &SpaceRelation,
) -> Result<(DualAlgebra, Operator)> {
    let report = check_relation_properties(s, r)?;
    if !report.spectral {
        return Err(Error::Precondition(format!(
            "relation {} is not spectral",
            r.name
        )));
    }
    if !report.compatibility_property {
        return Err(Error::Precondition(format!(
            "relation {} lacks the compatibility property",
            r.name
        )));
    }
    let g = g_object(s)?;
    let n = r.arity - 1;
    check_cap("operator arity", n, Limits::current().operator_arity)?;
    let entries = tuples(g.sections.len(), n)
        .map(|idx| {
            let args: Vec<PointSet> = idx.iter().map(|&i| g.sections[i]).collect();
            let out = omega_r(r, &args);
            g.index_of(out)
                .ok_or_else(|| Error::Internal(format!("Ω_R gave non-section {out:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let table = OpTable::new(g.sections.len(), n, entries)?;
    Ok((g, Operator::new(r.name.clone(), table)))
}

/// `hat(Ω(a₁, …, aₙ)) = Ω_{R_Ω}(hat a₁, …, hat aₙ)` for every argument tuple.
pub fn check_eta_preserves_operator(a: &FiniteAlgebra, op: &Operator) -> Result<bool> {
    let report = classify_operator(a, op)?;
    if !report.is_compat_preserving_operator() {
        return Err(Error::Precondition(format!(
            "{} is not a compatibility preserving operator",
            op.name
        )));
    }
    let fa = f_object(a)?;
    let r = relation_from_operator(a, op)?;
    Ok(tuples(a.len(), op.arity()).all(|args| {
        let hats: Vec<PointSet> = args.iter().map(|&x| fa.filters.hat(x)).collect();
        fa.filters.hat(op.table.get(&args)) == omega_r(&r, &hats)
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BackForthReport {
    pub reverse_forth: bool,
    pub back: bool,
}

impl BackForthReport {
    pub fn holds(&self) -> bool {
        self.reverse_forth && self.back
    }
}

/// The reverse forth and back conditions for `φ` against `R_src`, `R_tgt`.
pub fn check_morphism_back_forth(
    phi: &SpaceMorphism,
    r_src: &SpaceRelation,
    r_tgt: &SpaceRelation,
) -> Result<BackForthReport> {
    if r_src.arity != r_tgt.arity {
        return Err(Error::Precondition(
            "relations have different arities".into(),
        ));
    }
    r_src.check_points(phi.source())?;
    r_tgt.check_points(phi.target())?;
    let n = r_src.arity - 1;
    let reverse_forth = r_src.tuples.iter().all(|t| {
        let images: Option<Vec<usize>> = t[..n].iter().map(|&x| phi.apply(x)).collect();
        match images {
            None => true,
            Some(mut ys) => match phi.apply(t[n]) {
                None => false,
                Some(last) => {
                    ys.push(last);
                    r_tgt.contains(&ys)
                }
            },
        }
    });
    let back = (0..phi.source().len()).all(|x| {
        let Some(y_last) = phi.apply(x) else {
            return true;
        };
        r_tgt.tuples.iter().filter(|u| u[n] == y_last).all(|u| {
            r_src
                .tuples
                .iter()
                .any(|t| t[n] == x && (0..n).all(|i| phi.apply(t[i]) == Some(u[i])))
        })
    });
    Ok(BackForthReport {
        reverse_forth,
        back,
    })
}

/// The completion with each operator lifted along the dual relation.
#[derive(Debug, Clone)]
pub struct OperatorCompletion {
    pub completion: Completion,
    /// The completion carrying the lifted operators.
    pub algebra: Arc<FiniteAlgebra>,
    /// `ι` between the expanded algebras.
    pub embedding: AlgebraMap,
    pub relations: Vec<SpaceRelation>,
}

pub fn complete_with_operators(
    a: &Arc<FiniteAlgebra>,
    ops: &[Operator],
) -> Result<OperatorCompletion> {
    let mut expanded = a.reduct();
    for op in ops {
        if !classify_operator(a, op)?.is_compat_preserving_operator() {
            return Err(Error::Precondition(format!(
                "{} is not a compatibility preserving operator",
                op.name
            )));
        }
        expanded = expanded.with_operator(op.clone())?;
    }
    let completion = complete(&Arc::new(a.reduct()))?;
    let space = completion.dual.space.clone();
    let mut lifted = completion.algebra.reduct();
    let mut relations = Vec::new();
    for op in ops {
        let r = relation_from_operator(a, op)?;
        let (_, lifted_op) = operation_from_relation(&space, &r)?;
        if !classify_operator(&lifted, &lifted_op)?.is_compat_preserving_operator() {
            return Err(Error::Internal(format!(
                "lifted {} is not a compatibility preserving operator",
                op.name
            )));
        }
        lifted = lifted.with_operator(lifted_op)?;
        relations.push(r);
    }
    let lifted = Arc::new(lifted);
    let embedding = AlgebraMap::new(
        Arc::new(expanded),
        lifted.clone(),
        completion.embedding.table().to_vec(),
    )?;
    if !embedding.hom_check().is_embedding() {
        return Err(Error::Internal(
            "completion embedding does not preserve the operators".into(),
        ));
    }
    Ok(OperatorCompletion {
        completion,
        algebra: lifted,
        embedding,
        relations,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    Checked {
        /// Size of the algebra the table was taken on.
        algebra_size: usize,
        /// Whether the input had to be closed under the operation first.
        extended: bool,
        report: OperatorReport,
    },
    NotApplicable(String),
    Skipped(String),
    NotImplemented,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifiedOp {
    pub name: String,
    pub classification: Classification,
}

/// Whether a named operation is listed as a compatibility preserving
/// operator on algebras of partial functions.
pub fn expected_compat_preserving_operator(op: ConcreteOp) -> Option<bool> {
    use ConcreteOp::*;
    match op {
        Meet | Compose | Domain | Range | Fixset | Identity | RangeRestrict => Some(true),
        Antidomain | Antirange | AntidomainRestrict | Override | Converse => Some(false),
        Difference | Restrict => None,
    }
}

/// The operations classified by [`classify_concrete_ops`].
pub const CLASSIFIED_OPS: [ConcreteOp; 12] = [
    ConcreteOp::Meet,
    ConcreteOp::Compose,
    ConcreteOp::Domain,
    ConcreteOp::Range,
    ConcreteOp::Fixset,
    ConcreteOp::Identity,
    ConcreteOp::RangeRestrict,
    ConcreteOp::Antidomain,
    ConcreteOp::Antirange,
    ConcreteOp::AntidomainRestrict,
    ConcreteOp::Override,
    ConcreteOp::Converse,
];

/// Classify one concrete operation on `p`, closing `p` under it first if
/// needed.
pub fn classify_concrete_op(p: &ConcretePFAlgebra, op: ConcreteOp) -> Result<Classification> {
    if op == ConcreteOp::Converse {
        if let Some(f) = p.elements().iter().find(|f| !f.is_injective()) {
            return Ok(Classification::NotApplicable(format!(
                "converse of non-injective {}",
                f.display_with(p.carrier())
            )));
        }
    }
    let (alg, extended) = if p.is_closed_under(op)? {
        (p.clone(), false)
    } else {
        let ops = [ConcreteOp::Difference, ConcreteOp::Restrict, op];
        (closure_generate(p.carrier(), p.elements(), &ops)?, true)
    };
    let cap = Limits::current().operator_elements;
    if alg.len() > cap {
        return Ok(Classification::Skipped(format!(
            "closure under {op} has {} elements, above the cap of {cap}",
            alg.len()
        )));
    }
    let table = alg
        .operator_table(op)?
        .ok_or_else(|| Error::Internal(format!("closure is not closed under {op}")))?;
    let abstract_alg = alg.to_algebra();
    let report = classify_operator(&abstract_alg, &Operator::new(op.name(), table))?;
    Ok(Classification::Checked {
        algebra_size: alg.len(),
        extended,
        report,
    })
}

/// Classify every listed operation on `p`; update has no fixed definition
/// and is reported as not implemented.
pub fn classify_concrete_ops(p: &ConcretePFAlgebra) -> Result<Vec<ClassifiedOp>> {
    let mut out = Vec::new();
    for op in CLASSIFIED_OPS {
        out.push(ClassifiedOp {
            name: op.name().into(),
            classification: classify_concrete_op(p, op)?,
        });
    }
    out.push(ClassifiedOp {
        name: "update".into(),
        classification: Classification::NotImplemented,
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::duality::{counit_lambda, f_morphism, unit_eta};
    use crate::pfun::{Carrier, PartialFunction};

    fn concrete(size: usize, seeds: &[&[(usize, usize)]]) -> ConcretePFAlgebra {
        let x = Carrier::new(size).unwrap();
        let seeds: Vec<_> = seeds
            .iter()
            .map(|p| PartialFunction::from_pairs(size, p).unwrap())
            .collect();
        closure_generate(&x, &seeds, &[ConcreteOp::Difference, ConcreteOp::Restrict]).unwrap()
    }

    fn op_on(p: &ConcretePFAlgebra, op: ConcreteOp) -> Operator {
        Operator::new(op.name(), p.operator_table(op).unwrap().unwrap())
    }

    fn meet_op(a: &FiniteAlgebra) -> Operator {
        Operator::new(
            "meet",
            OpTable::from_fn(a.len(), 2, |t| a.meet(t[0], t[1])).unwrap(),
        )
    }

    #[test]
    fn meet_and_domain_are_compat_preserving_operators() {
        let p = concrete(2, &[&[(0, 0)], &[(1, 1)]]);
        let a = p.to_algebra();
        assert!(classify_operator(&a, &meet_op(&a))
            .unwrap()
            .is_compat_preserving_operator());
        assert!(classify_operator(&a, &op_on(&p, ConcreteOp::Domain))
            .unwrap()
            .is_compat_preserving_operator());
    }

    #[test]
    fn constant_zero_and_mutants() {
        let a = concrete(2, &[&[(0, 0)], &[(1, 1)]]).to_algebra();
        let zero = Operator::new("zero", OpTable::from_fn(3, 1, |_| a.bottom()).unwrap());
        let r = classify_operator(&a, &zero).unwrap();
        assert!(r.normal.holds && r.additive.holds);
        let other = (a.bottom() + 1) % 3;
        let shifted = Operator::new("shift", OpTable::from_fn(3, 1, |_| other).unwrap());
        let r = classify_operator(&a, &shifted).unwrap();
        assert!(!r.normal.holds);
        assert_eq!(r.normal.witness, Some(vec![vec![a.bottom()]]));
        assert!(relation_from_operator(&a, &zero).unwrap().tuples.is_empty());
    }

    #[test]
    fn domain_relation_on_a3c() {
        let p = concrete(2, &[&[(0, 0)], &[(1, 1)]]);
        let a = p.to_algebra();
        let r = relation_from_operator(&a, &op_on(&p, ConcreteOp::Domain)).unwrap();
        let expected: BTreeSet<Vec<usize>> = [vec![0, 0], vec![1, 1]].into_iter().collect();
        assert_eq!(r.tuples, expected);
        let s = f_object(&a).unwrap().space;
        let report = check_relation_properties(&s, &r).unwrap();
        assert!(report.items().iter().all(|(_, ok)| *ok));
        assert!(check_eta_preserves_operator(&a, &op_on(&p, ConcreteOp::Domain)).unwrap());
    }

    #[test]
    fn identity_operator_gives_diagonal() {
        let a = concrete(2, &[&[(0, 0)], &[(0, 1)]]).to_algebra();
        let id = Operator::new("id", OpTable::from_fn(3, 1, |t| t[0]).unwrap());
        let r = relation_from_operator(&a, &id).unwrap();
        assert!(r.tuples.iter().all(|t| t[0] == t[1]));
        assert_eq!(r.tuples.len(), 2);
        let s = f_object(&a).unwrap().space;
        let (g, lifted) = operation_from_relation(&s, &r).unwrap();
        assert!((0..g.sections.len()).all(|i| lifted.table.get(&[i]) == i));
    }

    #[test]
    fn full_relation_on_a_fibre_lacks_compatibility() {
        let a = concrete(2, &[&[(0, 0)], &[(0, 1)]]).to_algebra();
        let s = f_object(&a).unwrap().space;
        let full = SpaceRelation::new("full", 2, tuples(2, 2).collect()).unwrap();
        let r = check_relation_properties(&s, &full).unwrap();
        assert!(!r.compatibility_property);
        assert!(operation_from_relation(&s, &full).is_err());
        let empty = SpaceRelation::new("empty", 2, BTreeSet::new()).unwrap();
        let (g, op) = operation_from_relation(&s, &empty).unwrap();
        let bottom = g.index_of(PointSet::EMPTY).unwrap();
        assert!(op.table.entries().iter().all(|&e| e == bottom));
    }

    #[test]
    fn converse_and_antidomain_witnesses() {
        let i2 = concrete(2, &[&[(0, 0), (1, 1)], &[(0, 1), (1, 0)], &[(0, 0)]]);
        assert_eq!(i2.len(), 7);
        let Classification::Checked { report, .. } =
            classify_concrete_op(&i2, ConcreteOp::Converse).unwrap()
        else {
            panic!("converse should be checked on partial injections");
        };
        assert!(!report.compat_preserving.holds && report.is_operator());

        let p2 = concrete(
            2,
            &[
                &[(0, 0), (1, 1)],
                &[(0, 1), (1, 0)],
                &[(0, 0), (1, 0)],
                &[(0, 1), (1, 1)],
            ],
        );
        assert_eq!(p2.len(), 9);
        assert!(matches!(
            classify_concrete_op(&p2, ConcreteOp::Converse).unwrap(),
            Classification::NotApplicable(_)
        ));
        let Classification::Checked { report, .. } =
            classify_concrete_op(&p2, ConcreteOp::Antidomain).unwrap()
        else {
            panic!("antidomain should be checked");
        };
        assert!(!report.is_compat_preserving_operator());
        assert!(!report.normal.holds && !report.monotone.holds);
    }

    #[test]
    fn back_and_forth_for_dual_maps() {
        let p = concrete(2, &[&[(0, 0)], &[(1, 1)]]);
        let a = Arc::new(p.to_algebra());
        let d = op_on(&p, ConcreteOp::Domain);
        let c = complete_with_operators(&a, std::slice::from_ref(&d)).unwrap();
        // η preserves D, so F(η) satisfies both conditions.
        let phi = f_morphism(&c.embedding).unwrap();
        let r_c =
            relation_from_operator(&c.algebra, c.algebra.operator("domain").unwrap()).unwrap();
        let r_a = relation_from_operator(&a, &d).unwrap();
        assert!(check_morphism_back_forth(&phi, &r_c, &r_a).unwrap().holds());

        let s = f_object(&a).unwrap().space;
        let lambda = counit_lambda(&s).unwrap();
        let (g, lifted) = operation_from_relation(&s, &r_a).unwrap();
        let with_op = g.algebra.reduct().with_operator(lifted).unwrap();
        let r_lifted =
            relation_from_operator(&with_op, with_op.operator("domain").unwrap()).unwrap();
        assert!(check_morphism_back_forth(&lambda, &r_a, &r_lifted)
            .unwrap()
            .holds());
        let _ = unit_eta(&a).unwrap();
    }

    #[test]
    fn lifted_domain_on_b4_is_identity() {
        let p = concrete(2, &[&[(0, 0)], &[(1, 1)]]);
        let a = Arc::new(p.to_algebra());
        let c = complete_with_operators(&a, &[op_on(&p, ConcreteOp::Domain)]).unwrap();
        assert_eq!(c.algebra.len(), 4);
        let d = c.algebra.operator("domain").unwrap();
        assert!((0..4).all(|i| d.table.get(&[i]) == i));
    }
}
