//! Abstract finite `{−, ⇂}`-algebras given by operation tables.
//!
//! An algebra here is just names plus total tables. [`FiniteAlgebra::new`]
//! checks shape and the existence of a bottom; the five axioms are checked
//! separately by [`FiniteAlgebra::validate_axioms`] so that broken inputs can
//! still be loaded and reported on.

mod hom;
mod search;

use std::collections::BTreeSet;

pub use hom::{AlgebraMap, HomReport, HomViolation};
pub use search::{embedding_search, find_maps, isomorphism_search, MapKind};

use crate::error::{Error, Result};
use crate::pfun::tuples;

/// A total `n`-ary table over elements `0..size`, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OpTable {
    size: usize,
    arity: usize,
    entries: Vec<usize>,
}

impl OpTable {
    pub fn new(size: usize, arity: usize, entries: Vec<usize>) -> Result<Self> {
        let expected = size.checked_pow(arity as u32).ok_or_else(|| {
            Error::MalformedTable(format!(
                "table of arity {arity} over {size} elements is too large"
            ))
        })?;
        if entries.len() != expected {
            return Err(Error::MalformedTable(format!(
                "expected {expected} entries for arity {arity} over {size} elements, got {}",
                entries.len()
            )));
        }
        if let Some((pos, &e)) = entries.iter().enumerate().find(|(_, &e)| e >= size) {
            return Err(Error::MalformedTable(format!(
                "entry {pos} is {e}, outside 0..{size}"
            )));
        }
        Ok(OpTable {
            size,
            arity,
            entries,
        })
    }

    pub fn from_fn(size: usize, arity: usize, f: impl Fn(&[usize]) -> usize) -> Result<Self> {
        let entries = tuples(size, arity).map(|t| f(&t)).collect();
        Self::new(size, arity, entries)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    fn offset(&self, args: &[usize]) -> usize {
        debug_assert_eq!(args.len(), self.arity);
        args.iter().fold(0, |acc, &a| acc * self.size + a)
    }

    pub fn get(&self, args: &[usize]) -> usize {
        self.entries[self.offset(args)]
    }

    pub fn get2(&self, a: usize, b: usize) -> usize {
        self.entries[a * self.size + b]
    }

    /// The table with elements renamed by `perm` (old index → new index).
    pub fn relabel(&self, perm: &[usize]) -> OpTable {
        let mut entries = vec![0; self.entries.len()];
        for (t, &v) in tuples(self.size, self.arity).zip(&self.entries) {
            let moved: Vec<usize> = t.iter().map(|&i| perm[i]).collect();
            let off = moved.iter().fold(0, |acc, &a| acc * self.size + a);
            entries[off] = perm[v];
        }
        OpTable {
            size: self.size,
            arity: self.arity,
            entries,
        }
    }
}

/// A named operation table carried alongside `−` and `⇂`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Operator {
    pub name: String,
    pub table: OpTable,
}

impl Operator {
    pub fn new(name: impl Into<String>, table: OpTable) -> Self {
        Operator {
            name: name.into(),
            table,
        }
    }

    pub fn arity(&self) -> usize {
        self.table.arity()
    }
}

/// One failed instance of an axiom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomFailure {
    /// Axiom number, 1 to 5.
    pub axiom: u8,
    pub args: Vec<usize>,
    pub lhs: usize,
    pub rhs: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub failures: Vec<AxiomFailure>,
}

impl AxiomReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }

    /// The distinct axiom numbers that failed.
    pub fn failed_axioms(&self) -> BTreeSet<u8> {
        self.failures.iter().map(|f| f.axiom).collect()
    }
}

pub const AXIOMS: [&str; 5] = [
    "a - (b - a) = a",
    "a . b = b . a",
    "(a - b) - c = (a - c) - b",
    "(a |> c) . (b |> c) = (a |> b) |> c",
    "(a . b) |> a = a . b",
];

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteAlgebra {
    names: Vec<String>,
    minus: OpTable,
    rest: OpTable,
    extras: Vec<Operator>,
    bottom: usize,
}

impl FiniteAlgebra {
    /// Structural construction: distinct names, binary tables of the right
    /// size, and a constant `a − a`.
    pub fn new(names: Vec<String>, minus: OpTable, rest: OpTable) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::MalformedTable("algebra has no elements".into()));
        }
        let distinct: BTreeSet<&String> = names.iter().collect();
        if distinct.len() != n {
            return Err(Error::MalformedTable(
                "element names must be distinct".into(),
            ));
        }
        for (label, t) in [("minus", &minus), ("rest", &rest)] {
            if t.arity() != 2 || t.size() != n {
                return Err(Error::MalformedTable(format!(
                    "{label} must be binary over {n} elements, got arity {} over {}",
                    t.arity(),
                    t.size()
                )));
            }
        }
        let bottom = minus.get2(0, 0);
        if let Some(a) = (0..n).find(|&a| minus.get2(a, a) != bottom) {
            return Err(Error::NoBottom(format!(
                "{} - {} = {} but {} - {} = {}",
                names[0],
                names[0],
                names[bottom],
                names[a],
                names[a],
                names[minus.get2(a, a)]
            )));
        }
        Ok(FiniteAlgebra {
            names,
            minus,
            rest,
            extras: Vec::new(),
            bottom,
        })
    }

    /// Attach an extra operator. Names must be unique.
    pub fn with_operator(mut self, op: Operator) -> Result<Self> {
        if op.table.size() != self.len() {
            return Err(Error::MalformedTable(format!(
                "operator {} has {} elements, algebra has {}",
                op.name,
                op.table.size(),
                self.len()
            )));
        }
        if self.operator(&op.name).is_some() || op.name == "minus" || op.name == "rest" {
            return Err(Error::MalformedTable(format!(
                "duplicate operator name {}",
                op.name
            )));
        }
        self.extras.push(op);
        Ok(self)
    }

    /// The same algebra without extra operators.
    pub fn reduct(&self) -> FiniteAlgebra {
        FiniteAlgebra {
            extras: Vec::new(),
            ..self.clone()
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn minus_table(&self) -> &OpTable {
        &self.minus
    }

    pub fn rest_table(&self) -> &OpTable {
        &self.rest
    }

    pub fn operators(&self) -> &[Operator] {
        &self.extras
    }

    pub fn operator(&self, name: &str) -> Option<&Operator> {
        self.extras.iter().find(|o| o.name == name)
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    pub fn minus(&self, a: usize, b: usize) -> usize {
        self.minus.get2(a, b)
    }

    pub fn rest(&self, a: usize, b: usize) -> usize {
        self.rest.get2(a, b)
    }

    /// `a · b = a − (a − b)`.
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.minus(a, self.minus(a, b))
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.meet(a, b) == a
    }

    /// `a ⪯ b` iff `a ≤ b ⇂ a`: the domain of `a` is inside that of `b`.
    pub fn domain_preorder(&self, a: usize, b: usize) -> bool {
        self.leq(a, self.rest(b, a))
    }

    pub fn domain_equiv(&self, a: usize, b: usize) -> bool {
        self.domain_preorder(a, b) && self.domain_preorder(b, a)
    }

    /// Classes of `⪯ ∩ ⪰`, each sorted, ordered by least member.
    pub fn domain_equiv_classes(&self) -> Vec<Vec<usize>> {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for a in self.elements() {
            match classes.iter_mut().find(|c| self.domain_equiv(c[0], a)) {
                Some(c) => c.push(a),
                None => classes.push(vec![a]),
            }
        }
        classes
    }

    pub fn compatible(&self, a: usize, b: usize) -> bool {
        self.rest(a, b) == self.rest(b, a)
    }

    pub fn downset(&self, a: usize) -> Vec<usize> {
        self.elements().filter(|&x| self.leq(x, a)).collect()
    }

    pub fn upset(&self, a: usize) -> Vec<usize> {
        self.elements().filter(|&x| self.leq(a, x)).collect()
    }

    /// Least upper bound of `set` in `≤`, if there is one. The empty set
    /// has join `0`.
    pub fn join_if_exists(&self, set: &[usize]) -> Option<usize> {
        let uppers: Vec<usize> = self
            .elements()
            .filter(|&u| set.iter().all(|&s| self.leq(s, u)))
            .collect();
        uppers
            .iter()
            .copied()
            .find(|&u| uppers.iter().all(|&v| self.leq(u, v)))
    }

    /// Every compatible pair has a join. Pairs suffice: the join of a
    /// pairwise-compatible finite set is built up two at a time.
    pub fn is_fin_compatibly_complete(&self) -> bool {
        self.first_missing_compatible_join().is_none()
    }

    /// A compatible pair with no join, if any.
    pub fn first_missing_compatible_join(&self) -> Option<(usize, usize)> {
        for a in self.elements() {
            for b in a + 1..self.len() {
                if self.compatible(a, b) && self.join_if_exists(&[a, b]).is_none() {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// `a ⊕ b = a ∨ (b − (a ⇂ b))`. The two joinands are always compatible,
    /// so a missing join means the algebra is not compatibly complete.
    pub fn derived_override(&self, a: usize, b: usize) -> Result<usize> {
        let tail = self.minus(b, self.rest(a, b));
        self.join_if_exists(&[a, tail]).ok_or_else(|| {
            Error::Precondition(format!(
                "override of {} and {}: join of {} and {} missing, algebra is not compatibly complete",
                self.name(a),
                self.name(b),
                self.name(a),
                self.name(tail)
            ))
        })
    }

    /// `⇂` coincides with the derived meet.
    pub fn is_subtraction_algebra(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.rest(a, b) == self.meet(a, b)))
    }

    /// Check all five axioms at every instance.
    pub fn validate_axioms(&self) -> AxiomReport {
        let n = self.len();
        let mut failures = Vec::new();
        let mut check = |axiom: u8, args: Vec<usize>, lhs: usize, rhs: usize| {
            if lhs != rhs {
                failures.push(AxiomFailure {
                    axiom,
                    args,
                    lhs,
                    rhs,
                });
            }
        };
        for a in 0..n {
            for b in 0..n {
                check(1, vec![a, b], self.minus(a, self.minus(b, a)), a);
                check(2, vec![a, b], self.meet(a, b), self.meet(b, a));
                check(
                    5,
                    vec![a, b],
                    self.rest(self.meet(a, b), a),
                    self.meet(a, b),
                );
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    check(
                        3,
                        vec![a, b, c],
                        self.minus(self.minus(a, b), c),
                        self.minus(self.minus(a, c), b),
                    );
                    check(
                        4,
                        vec![a, b, c],
                        self.meet(self.rest(a, c), self.rest(b, c)),
                        self.rest(self.rest(a, b), c),
                    );
                }
            }
        }
        failures.sort_by_key(|f| f.axiom);
        AxiomReport { failures }
    }

    /// Rename elements: element `i` becomes element `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<FiniteAlgebra> {
        let n = self.len();
        let distinct: BTreeSet<usize> = perm.iter().copied().collect();
        if perm.len() != n || distinct.len() != n || distinct.iter().any(|&p| p >= n) {
            return Err(Error::Precondition(
                "relabelling must be a permutation".into(),
            ));
        }
        let mut names = vec![String::new(); n];
        for (i, &p) in perm.iter().enumerate() {
            names[p] = self.names[i].clone();
        }
        let mut out = FiniteAlgebra::new(names, self.minus.relabel(perm), self.rest.relabel(perm))?;
        for op in &self.extras {
            out = out.with_operator(Operator::new(op.name.clone(), op.table.relabel(perm)))?;
        }
        Ok(out)
    }

    /// Same tables, new names.
    pub fn rename(&self, names: Vec<String>) -> Result<FiniteAlgebra> {
        let mut out = FiniteAlgebra::new(names, self.minus.clone(), self.rest.clone())?;
        out.extras = self.extras.clone();
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pfun::{closure_generate, Carrier, ConcreteOp, PartialFunction};

    fn closure(size: usize, seeds: &[&[(usize, usize)]]) -> FiniteAlgebra {
        let x = Carrier::new(size).unwrap();
        let seeds: Vec<_> = seeds
            .iter()
            .map(|p| PartialFunction::from_pairs(size, p).unwrap())
            .collect();
        closure_generate(&x, &seeds, &[ConcreteOp::Difference, ConcreteOp::Restrict])
            .unwrap()
            .to_algebra()
    }

    fn idx(a: &FiniteAlgebra, name: &str) -> usize {
        a.index_of(name).unwrap()
    }

    // Element names come from the concrete graphs, so each test looks up
    // the concrete function it means.
    const A: &str = "{(0,0)}";
    const B: &str = "{(1,1)}";
    const G: &str = "{(0,1)}";

    #[test]
    fn table_shape_is_checked() {
        assert!(OpTable::new(2, 2, vec![0, 0, 0]).is_err());
        assert!(OpTable::new(2, 2, vec![0, 0, 0, 2]).is_err());
        let t = OpTable::new(2, 2, vec![0, 1, 1, 0]).unwrap();
        assert_eq!(t.get(&[1, 0]), 1);
        assert_eq!(t.get2(1, 1), 0);
    }

    #[test]
    fn nonconstant_self_difference_is_rejected() {
        let names = vec!["p".to_string(), "q".to_string()];
        let minus = OpTable::new(2, 2, vec![0, 0, 1, 1]).unwrap();
        let rest = OpTable::new(2, 2, vec![0, 0, 0, 1]).unwrap();
        assert!(matches!(
            FiniteAlgebra::new(names, minus, rest),
            Err(Error::NoBottom(_))
        ));
    }

    #[test]
    fn concrete_closures_satisfy_axioms() {
        assert!(closure(2, &[&[(0, 0)], &[(1, 1)]])
            .validate_axioms()
            .is_valid());
        assert!(closure(2, &[&[(0, 0)], &[(0, 1)]])
            .validate_axioms()
            .is_valid());
        assert!(closure(1, &[]).validate_axioms().is_valid());
    }

    #[test]
    fn corrupted_restriction_fails_axiom_four() {
        let a3c = closure(2, &[&[(0, 0)], &[(1, 1)]]);
        let (a, b) = (idx(&a3c, A), idx(&a3c, B));
        let mut entries = a3c.rest_table().entries().to_vec();
        entries[a * 3 + b] = a;
        let rest = OpTable::new(3, 2, entries).unwrap();
        let mutant =
            FiniteAlgebra::new(a3c.names().to_vec(), a3c.minus_table().clone(), rest).unwrap();
        assert!(mutant.validate_axioms().failed_axioms().contains(&4));
    }

    #[test]
    fn order_and_meet_on_small_fixtures() {
        let a3c = closure(2, &[&[(0, 0)], &[(1, 1)]]);
        let (a, b) = (idx(&a3c, A), idx(&a3c, B));
        assert_eq!(a3c.meet(a, b), a3c.bottom());
        assert!(!a3c.leq(a, b));
        assert!(a3c
            .elements()
            .all(|x| a3c.leq(a3c.bottom(), x) && a3c.leq(x, x)));
        assert!(!a3c.domain_preorder(a, b));
        assert!(a3c.compatible(a, b));
        assert_eq!(a3c.join_if_exists(&[a, b]), None);
        assert_eq!(a3c.join_if_exists(&[a]), Some(a));
        assert!(!a3c.is_fin_compatibly_complete());
        assert_eq!(a3c.domain_equiv_classes().len(), 3);

        let a3i = closure(2, &[&[(0, 0)], &[(0, 1)]]);
        let (f, g) = (idx(&a3i, A), idx(&a3i, G));
        assert_eq!(a3i.meet(f, g), a3i.bottom());
        assert!(a3i.domain_preorder(f, g));
        assert!(!a3i.compatible(f, g));
        assert!(a3i.is_fin_compatibly_complete());
        assert!(!a3i.is_subtraction_algebra());
        let classes = a3i.domain_equiv_classes();
        assert_eq!(classes.len(), 2);
        assert!(classes.contains(&vec![f.min(g), f.max(g)]));
    }

    #[test]
    fn boolean_fixture_joins_and_override() {
        let b4 = closure(2, &[&[(0, 0)], &[(1, 1)], &[(0, 0), (1, 1)]]);
        let (a, b) = (idx(&b4, A), idx(&b4, B));
        let top = idx(&b4, "{(0,0),(1,1)}");
        assert_eq!(b4.join_if_exists(&[a, b]), Some(top));
        assert!(b4.is_fin_compatibly_complete());
        assert!(b4.is_subtraction_algebra());
        assert_eq!(b4.derived_override(a, b), Ok(top));
        for x in b4.elements() {
            assert_eq!(b4.derived_override(x, b4.bottom()), Ok(x));
            assert_eq!(b4.derived_override(b4.bottom(), x), Ok(x));
        }
    }

    #[test]
    fn override_needs_joins() {
        let i = closure(2, &[&[(0, 0)], &[(1, 0)]]);
        let (a, c) = (idx(&i, A), idx(&i, "{(1,0)}"));
        assert!(i.derived_override(a, c).is_err());
    }

    #[test]
    fn relabel_preserves_structure() {
        let a3i = closure(2, &[&[(0, 0)], &[(0, 1)]]);
        let r = a3i.relabel(&[2, 0, 1]).unwrap();
        assert!(r.validate_axioms().is_valid());
        for x in 0..3 {
            for y in 0..3 {
                let (px, py) = ([2, 0, 1][x], [2, 0, 1][y]);
                assert_eq!(r.rest(px, py), [2, 0, 1][a3i.rest(x, y)]);
            }
        }
        assert!(a3i.relabel(&[0, 0, 1]).is_err());
    }
}
