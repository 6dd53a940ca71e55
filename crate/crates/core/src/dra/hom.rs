use std::sync::Arc;

use super::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::pfun::tuples;

/// A total map between the elements of two algebras.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraMap {
    source: Arc<FiniteAlgebra>,
    target: Arc<FiniteAlgebra>,
    table: Vec<usize>,
}

/// `h(op(args)) != op(h(args))` for one argument tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomViolation {
    pub op: String,
    pub args: Vec<usize>,
    pub image_of_result: usize,
    pub result_of_images: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomReport {
    pub violations: Vec<HomViolation>,
    /// Extra operators present on both sides with different arities.
    pub arity_mismatches: Vec<String>,
    pub injective: bool,
    pub surjective: bool,
}

impl HomReport {
    pub fn is_hom(&self) -> bool {
        self.violations.is_empty() && self.arity_mismatches.is_empty()
    }

    pub fn is_embedding(&self) -> bool {
        self.is_hom() && self.injective
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_embedding() && self.surjective
    }
}

impl AlgebraMap {
    pub fn new(
        source: impl Into<Arc<FiniteAlgebra>>,
        target: impl Into<Arc<FiniteAlgebra>>,
        table: Vec<usize>,
    ) -> Result<Self> {
        let (source, target) = (source.into(), target.into());
        if table.len() != source.len() {
            return Err(Error::InvalidMorphism(format!(
                "map has {} entries, source has {} elements",
                table.len(),
                source.len()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&t| t >= target.len()) {
            return Err(Error::InvalidMorphism(format!(
                "image {bad} outside target of {} elements",
                target.len()
            )));
        }
        Ok(AlgebraMap {
            source,
            target,
            table,
        })
    }

    pub fn identity(a: impl Into<Arc<FiniteAlgebra>>) -> Self {
        let a = a.into();
        let table = a.elements().collect();
        AlgebraMap {
            source: a.clone(),
            target: a,
            table,
        }
    }

    /// Send everything to the bottom of `target`.
    pub fn constant_bottom(
        source: impl Into<Arc<FiniteAlgebra>>,
        target: impl Into<Arc<FiniteAlgebra>>,
    ) -> Self {
        let (source, target) = (source.into(), target.into());
        let table = vec![target.bottom(); source.len()];
        AlgebraMap {
            source,
            target,
            table,
        }
    }

    pub fn source(&self) -> &FiniteAlgebra {
        &self.source
    }

    pub fn target(&self) -> &FiniteAlgebra {
        &self.target
    }

    pub fn source_arc(&self) -> &Arc<FiniteAlgebra> {
        &self.source
    }

    pub fn target_arc(&self) -> &Arc<FiniteAlgebra> {
        &self.target
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, a: usize) -> usize {
        self.table[a]
    }

    /// `other ∘ self`. The target of `self` must equal the source of `other`.
    pub fn then(&self, other: &AlgebraMap) -> Result<AlgebraMap> {
        if *self.target != *other.source {
            return Err(Error::InvalidMorphism(
                "composite of maps with mismatched algebras".into(),
            ));
        }
        let table = self.table.iter().map(|&b| other.table[b]).collect();
        Ok(AlgebraMap {
            source: self.source.clone(),
            target: other.target.clone(),
            table,
        })
    }

    pub fn is_identity(&self) -> bool {
        *self.source == *self.target && self.table.iter().enumerate().all(|(i, &t)| i == t)
    }

    /// Preservation of `−`, `⇂` and every extra operator both sides carry.
    pub fn hom_check(&self) -> HomReport {
        let (s, t) = (&*self.source, &*self.target);
        let h = |a: usize| self.table[a];
        let mut violations = Vec::new();
        let mut arity_mismatches = Vec::new();
        for a in s.elements() {
            for b in s.elements() {
                for (op, lhs, rhs) in [
                    ("minus", h(s.minus(a, b)), t.minus(h(a), h(b))),
                    ("rest", h(s.rest(a, b)), t.rest(h(a), h(b))),
                ] {
                    if lhs != rhs {
                        violations.push(HomViolation {
                            op: op.into(),
                            args: vec![a, b],
                            image_of_result: lhs,
                            result_of_images: rhs,
                        });
                    }
                }
            }
        }
        for op in s.operators() {
            let Some(top) = t.operator(&op.name) else {
                continue;
            };
            if top.arity() != op.arity() {
                arity_mismatches.push(op.name.clone());
                continue;
            }
            for args in tuples(s.len(), op.arity()) {
                let lhs = h(op.table.get(&args));
                let mapped: Vec<usize> = args.iter().map(|&a| h(a)).collect();
                let rhs = top.table.get(&mapped);
                if lhs != rhs {
                    violations.push(HomViolation {
                        op: op.name.clone(),
                        args,
                        image_of_result: lhs,
                        result_of_images: rhs,
                    });
                }
            }
        }
        let mut seen = vec![false; t.len()];
        let mut injective = true;
        for &b in &self.table {
            injective &= !std::mem::replace(&mut seen[b], true);
        }
        let surjective = seen.iter().all(|&x| x);
        HomReport {
            violations,
            arity_mismatches,
            injective,
            surjective,
        }
    }

    /// Every target element lies below the image of some source element.
    pub fn is_proper(&self) -> bool {
        let t = &*self.target;
        t.elements()
            .all(|b| self.table.iter().any(|&img| t.leq(b, img)))
    }

    /// The inverse of a bijective map.
    pub fn inverse(&self) -> Result<AlgebraMap> {
        let mut inv = vec![usize::MAX; self.target.len()];
        for (a, &b) in self.table.iter().enumerate() {
            if inv[b] != usize::MAX {
                return Err(Error::InvalidMorphism("map is not injective".into()));
            }
            inv[b] = a;
        }
        if inv.contains(&usize::MAX) {
            return Err(Error::InvalidMorphism("map is not surjective".into()));
        }
        Ok(AlgebraMap {
            source: self.target.clone(),
            target: self.source.clone(),
            table: inv,
        })
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

    /// Inclusion by element name.
    fn inclusion(a: &FiniteAlgebra, b: &FiniteAlgebra) -> AlgebraMap {
        let table = a.names().iter().map(|n| b.index_of(n).unwrap()).collect();
        AlgebraMap::new(a.clone(), b.clone(), table).unwrap()
    }

    #[test]
    fn identity_is_an_embedding_and_proper() {
        let a3c = closure(2, &[&[(0, 0)], &[(1, 1)]]);
        let id = AlgebraMap::identity(a3c);
        let r = id.hom_check();
        assert!(r.is_isomorphism());
        assert!(id.is_proper());
        assert!(id.is_identity());
    }

    #[test]
    fn constant_bottom_is_a_hom_but_not_embedding() {
        let a3c = closure(2, &[&[(0, 0)], &[(1, 1)]]);
        let z = AlgebraMap::constant_bottom(a3c.clone(), a3c);
        let r = z.hom_check();
        assert!(r.is_hom());
        assert!(!r.is_embedding());
    }

    #[test]
    fn inclusions_and_properness() {
        let a3c = closure(2, &[&[(0, 0)], &[(1, 1)]]);
        let b4 = closure(2, &[&[(0, 0)], &[(1, 1)], &[(0, 0), (1, 1)]]);
        let zero = closure(2, &[]);
        let m = inclusion(&a3c, &b4);
        assert!(m.hom_check().is_embedding());
        // The top of B4 is below neither a nor b.
        assert!(!m.is_proper());
        let z = inclusion(&zero, &a3c);
        assert!(z.hom_check().is_embedding());
        assert!(!z.is_proper());
    }

    #[test]
    fn non_hom_reports_violations() {
        let a3c = closure(2, &[&[(0, 0)], &[(1, 1)]]);
        let a = a3c.index_of("{(0,0)}").unwrap();
        // Everything to a: 0 - 0 = 0 must map to a - a = 0, not a.
        let m = AlgebraMap::new(a3c.clone(), a3c, vec![a; 3]).unwrap();
        let r = m.hom_check();
        assert!(!r.is_hom());
        assert!(r.violations.iter().any(|v| v.op == "minus"));
    }

    #[test]
    fn composition_and_inverse() {
        let a3c = closure(2, &[&[(0, 0)], &[(1, 1)]]);
        let swap = a3c.relabel(&[0, 2, 1]).unwrap();
        let m = AlgebraMap::new(a3c.clone(), swap, vec![0, 2, 1]).unwrap();
        assert!(m.hom_check().is_isomorphism());
        let back = m.inverse().unwrap();
        assert!(m.then(&back).unwrap().is_identity());
        assert!(AlgebraMap::new(a3c.clone(), a3c, vec![0, 0]).is_err());
    }
}
