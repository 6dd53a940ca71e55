//! Backtracking search for homomorphisms between finite algebras.
//!
//! Each choice is propagated: once every argument of a table entry is
//! mapped, the image of the result is forced. Candidates are pruned by
//! invariants that homomorphisms of the requested kind preserve.

use std::sync::Arc;

use super::{AlgebraMap, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::limits::{check_cap, Limits};
use crate::pfun::tuples;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapKind {
    Hom,
    Embedding,
    Isomorphism,
}

/// Per-element invariants: size of the down-set, size of the domain
/// class, number of compatible elements.
fn invariants(a: &FiniteAlgebra) -> Vec<[usize; 3]> {
    a.elements()
        .map(|x| {
            [
                a.elements().filter(|&y| a.leq(y, x)).count(),
                a.elements().filter(|&y| a.domain_equiv(x, y)).count(),
                a.elements().filter(|&y| a.compatible(x, y)).count(),
            ]
        })
        .collect()
}

struct Search<'a> {
    s: &'a FiniteAlgebra,
    t: &'a FiniteAlgebra,
    kind: MapKind,
    /// Shared extra operators as (source index, target index) pairs.
    ops: Vec<(usize, usize)>,
    candidates: Vec<Vec<usize>>,
    map: Vec<Option<usize>>,
    used: Vec<bool>,
    found: Vec<Vec<usize>>,
    limit: usize,
}

impl Search<'_> {
    fn assign(&mut self, a: usize, b: usize, trail: &mut Vec<usize>) -> bool {
        if let Some(old) = self.map[a] {
            return old == b;
        }
        if !self.candidates[a].contains(&b) {
            return false;
        }
        if self.kind != MapKind::Hom && self.used[b] {
            return false;
        }
        self.map[a] = Some(b);
        self.used[b] = true;
        trail.push(a);
        true
    }

    /// Assign `a ↦ b` and everything it forces. Returns false on conflict;
    /// the trail records what to undo either way.
    fn propagate(&mut self, a: usize, b: usize, trail: &mut Vec<usize>) -> bool {
        if !self.assign(a, b, trail) {
            return false;
        }
        let mut next = trail.len() - 1;
        while next < trail.len() {
            let k = trail[next];
            next += 1;
            let assigned: Vec<usize> = self
                .s
                .elements()
                .filter(|&x| self.map[x].is_some())
                .collect();
            for &j in &assigned {
                for (x, y) in [(k, j), (j, k)] {
                    let (hx, hy) = (self.map[x].unwrap(), self.map[y].unwrap());
                    let forced = [
                        (self.s.minus(x, y), self.t.minus(hx, hy)),
                        (self.s.rest(x, y), self.t.rest(hx, hy)),
                    ];
                    for (r, hr) in forced {
                        if !self.assign(r, hr, trail) {
                            return false;
                        }
                    }
                }
            }
            for &(si, ti) in &self.ops.clone() {
                let (sop, top) = (&self.s.operators()[si], &self.t.operators()[ti]);
                let arity = sop.arity();
                for idx in tuples(assigned.len(), arity) {
                    let args: Vec<usize> = idx.iter().map(|&i| assigned[i]).collect();
                    if arity > 0 && !args.contains(&k) {
                        continue;
                    }
                    let images: Vec<usize> = args.iter().map(|&x| self.map[x].unwrap()).collect();
                    if !self.assign(sop.table.get(&args), top.table.get(&images), trail) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn undo(&mut self, trail: &[usize]) {
        for &a in trail.iter().rev() {
            let b = self.map[a].take().unwrap();
            // In hom mode several sources may share an image.
            self.used[b] = self.map.contains(&Some(b));
        }
    }

    fn run(&mut self) {
        if self.found.len() >= self.limit {
            return;
        }
        let Some(a) = self.s.elements().find(|&x| self.map[x].is_none()) else {
            if self.kind != MapKind::Isomorphism || self.used.iter().all(|&u| u) {
                self.found
                    .push(self.map.iter().map(|m| m.unwrap()).collect());
            }
            return;
        };
        for b in self.candidates[a].clone() {
            let mut trail = Vec::new();
            if self.propagate(a, b, &mut trail) {
                self.run();
            }
            self.undo(&trail);
            if self.found.len() >= self.limit {
                return;
            }
        }
    }
}

/// Up to `limit` maps of the given kind extending `fixed` (source index →
/// required image), in lexicographic order of their tables.
pub fn find_maps(
    source: &Arc<FiniteAlgebra>,
    target: &Arc<FiniteAlgebra>,
    kind: MapKind,
    fixed: &[Option<usize>],
    limit: usize,
) -> Result<Vec<AlgebraMap>> {
    let (s, t) = (&**source, &**target);
    let cap = Limits::current().search_elements;
    check_cap("algebra for map search", s.len().max(t.len()), cap)?;
    if fixed.len() > s.len() {
        return Err(Error::Precondition(
            "more fixed values than source elements".into(),
        ));
    }
    if kind == MapKind::Isomorphism && s.len() != t.len() {
        return Ok(Vec::new());
    }
    if kind != MapKind::Hom && s.len() > t.len() {
        return Ok(Vec::new());
    }

    let mut ops = Vec::new();
    for (si, op) in s.operators().iter().enumerate() {
        if let Some(ti) = t.operators().iter().position(|o| o.name == op.name) {
            if t.operators()[ti].arity() != op.arity() {
                return Ok(Vec::new());
            }
            ops.push((si, ti));
        }
    }

    let (is, it) = (invariants(s), invariants(t));
    let candidates = s
        .elements()
        .map(|a| {
            t.elements()
                .filter(|&b| match kind {
                    MapKind::Hom => true,
                    MapKind::Isomorphism => is[a] == it[b],
                    MapKind::Embedding => (0..3).all(|k| is[a][k] <= it[b][k]),
                })
                .collect()
        })
        .collect();
    let mut search = Search {
        s,
        t,
        kind,
        ops,
        candidates,
        map: vec![None; s.len()],
        used: vec![false; t.len()],
        found: Vec::new(),
        limit,
    };

    // Homomorphisms send 0 to 0, so start there.
    let mut trail = Vec::new();
    if !search.propagate(s.bottom(), t.bottom(), &mut trail) {
        return Ok(Vec::new());
    }
    for (a, f) in fixed.iter().enumerate() {
        if let Some(b) = *f {
            if b >= t.len() || !search.propagate(a, b, &mut trail) {
                return Ok(Vec::new());
            }
        }
    }
    search.run();
    let found = std::mem::take(&mut search.found);
    found
        .into_iter()
        .map(|table| AlgebraMap::new(source.clone(), target.clone(), table))
        .collect()
}

/// The first isomorphism in search order, if the algebras are isomorphic.
pub fn isomorphism_search(
    a: &Arc<FiniteAlgebra>,
    b: &Arc<FiniteAlgebra>,
) -> Result<Option<AlgebraMap>> {
    Ok(find_maps(a, b, MapKind::Isomorphism, &[], 1)?.pop())
}

/// The first embedding in search order, if one exists.
pub fn embedding_search(
    a: &Arc<FiniteAlgebra>,
    b: &Arc<FiniteAlgebra>,
) -> Result<Option<AlgebraMap>> {
    Ok(find_maps(a, b, MapKind::Embedding, &[], 1)?.pop())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pfun::{closure_generate, Carrier, ConcreteOp, PartialFunction};

    fn closure(size: usize, seeds: &[&[(usize, usize)]]) -> Arc<FiniteAlgebra> {
        let x = Carrier::new(size).unwrap();
        let seeds: Vec<_> = seeds
            .iter()
            .map(|p| PartialFunction::from_pairs(size, p).unwrap())
            .collect();
        Arc::new(
            closure_generate(&x, &seeds, &[ConcreteOp::Difference, ConcreteOp::Restrict])
                .unwrap()
                .to_algebra(),
        )
    }

    /// Oracle: try every total map.
    fn brute_force(s: &FiniteAlgebra, t: &FiniteAlgebra, kind: MapKind) -> Vec<Vec<usize>> {
        tuples(t.len(), s.len())
            .filter(|table| {
                let m = AlgebraMap::new(s.clone(), t.clone(), table.clone()).unwrap();
                let r = m.hom_check();
                match kind {
                    MapKind::Hom => r.is_hom(),
                    MapKind::Embedding => r.is_embedding(),
                    MapKind::Isomorphism => r.is_isomorphism(),
                }
            })
            .collect()
    }

    #[test]
    fn matches_brute_force_on_small_algebras() {
        let algs = [
            closure(1, &[]),
            closure(1, &[&[(0, 0)]]),
            closure(2, &[&[(0, 0)], &[(1, 1)]]),
            closure(2, &[&[(0, 0)], &[(0, 1)]]),
            closure(2, &[&[(0, 0)], &[(1, 1)], &[(0, 0), (1, 1)]]),
        ];
        for s in &algs {
            for t in &algs {
                for kind in [MapKind::Hom, MapKind::Embedding, MapKind::Isomorphism] {
                    let found: Vec<Vec<usize>> = find_maps(s, t, kind, &[], usize::MAX)
                        .unwrap()
                        .iter()
                        .map(|m| m.table().to_vec())
                        .collect();
                    assert_eq!(found, brute_force(s, t, kind), "{kind:?}");
                }
            }
        }
    }

    #[test]
    fn isomorphism_examples() {
        let a3c = closure(2, &[&[(0, 0)], &[(1, 1)]]);
        let a3i = closure(2, &[&[(0, 0)], &[(0, 1)]]);
        let id = isomorphism_search(&a3c, &a3c).unwrap().unwrap();
        assert!(id.is_identity());
        assert!(isomorphism_search(&a3c, &a3i).unwrap().is_none());
    }

    #[test]
    fn fixed_values_constrain_the_search() {
        let a3c = closure(2, &[&[(0, 0)], &[(1, 1)]]);
        let all = find_maps(&a3c, &a3c, MapKind::Isomorphism, &[], 10).unwrap();
        assert_eq!(all.len(), 2);
        let a = a3c.index_of("{(0,0)}").unwrap();
        let b = a3c.index_of("{(1,1)}").unwrap();
        let mut fixed = vec![None; 3];
        fixed[a] = Some(b);
        let swapped = find_maps(&a3c, &a3c, MapKind::Isomorphism, &fixed, 10).unwrap();
        assert_eq!(swapped.len(), 1);
        assert_eq!(swapped[0].apply(b), a);
    }
}
