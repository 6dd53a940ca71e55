//! Filters and maximal filters of a finite algebra.
//!
//! Maximal filters are the points of the dual space. They are found along
//! two independent routes that must agree: inclusion-maximal proper
//! filters among up-sets generated by antichains, and the principal
//! up-sets singled out by the "exactly one of `a·b`, `a−b`" test.

use std::collections::BTreeSet;

use crate::bitset::{ElemSet, PointSet};
use crate::dra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::limits::{check_cap, Limits};

pub fn up_closure(a: &FiniteAlgebra, s: &ElemSet) -> ElemSet {
    a.elements()
        .filter(|&x| s.iter().any(|y| a.leq(y, x)))
        .collect()
}

pub fn principal_filter(a: &FiniteAlgebra, x: usize) -> ElemSet {
    a.upset(x).into_iter().collect()
}

/// Nonempty, upward closed and closed under the derived meet.
pub fn is_filter(a: &FiniteAlgebra, s: &ElemSet) -> bool {
    if s.is_empty() || s.iter().any(|x| x >= a.len()) {
        return false;
    }
    let up = s
        .iter()
        .all(|x| a.elements().all(|y| !a.leq(x, y) || s.contains(y)));
    up && s.iter().all(|x| s.iter().all(|y| s.contains(a.meet(x, y))))
}

/// A filter missing `0`.
pub fn is_proper(a: &FiniteAlgebra, s: &ElemSet) -> bool {
    is_filter(a, s) && !s.contains(a.bottom())
}

/// For a proper filter `f`: for all `x ∈ f` and all `y`, exactly one of
/// `x·y` and `x−y` lies in `f`. This characterises maximality.
pub fn satisfies_maximality_test(a: &FiniteAlgebra, f: &ElemSet) -> bool {
    is_proper(a, f)
        && f.iter().all(|x| {
            a.elements()
                .all(|y| f.contains(a.meet(x, y)) != f.contains(a.minus(x, y)))
        })
}

/// `μ ≈ ν`: `x ⇂ y ∈ ν` for all `x ∈ μ`, `y ∈ ν`.
pub fn filter_equiv(a: &FiniteAlgebra, mu: &ElemSet, nu: &ElemSet) -> bool {
    mu.iter()
        .all(|x| nu.iter().all(|y| nu.contains(a.rest(x, y))))
}

/// `F ⇂ G`: the up-closure of `{f ⇂ g | f ∈ F, g ∈ G}`.
pub fn filter_rest(a: &FiniteAlgebra, f: &ElemSet, g: &ElemSet) -> ElemSet {
    let generated: ElemSet = f
        .iter()
        .flat_map(|x| g.iter().map(move |y| a.rest(x, y)))
        .collect();
    up_closure(a, &generated)
}

/// `F ⪯ G` on filters: `G ⇂ F ⊆ F`.
pub fn filter_domain_rel(a: &FiniteAlgebra, f: &ElemSet, g: &ElemSet) -> bool {
    g.iter().all(|y| f.iter().all(|x| f.contains(a.rest(y, x))))
}

/// Antichains of nonzero elements, each as a sorted list.
fn antichains(a: &FiniteAlgebra) -> Vec<Vec<usize>> {
    fn go(a: &FiniteAlgebra, cands: &[usize], chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let Some((&first, rest)) = cands.split_first() else {
            if !chosen.is_empty() {
                out.push(chosen.clone());
            }
            return;
        };
        go(a, rest, chosen, out);
        if chosen.iter().all(|&c| !a.leq(c, first) && !a.leq(first, c)) {
            chosen.push(first);
            go(a, rest, chosen, out);
            chosen.pop();
        }
    }
    let cands: Vec<usize> = a.elements().filter(|&x| x != a.bottom()).collect();
    let mut out = Vec::new();
    go(a, &cands, &mut Vec::new(), &mut out);
    out
}

fn inclusion_maximal(sets: BTreeSet<ElemSet>) -> Vec<ElemSet> {
    sets.iter()
        .filter(|s| !sets.iter().any(|t| t != *s && s.is_subset(t)))
        .cloned()
        .collect()
}

/// Maximal filters as inclusion-maximal proper filters among up-sets
/// generated by antichains.
pub fn maximal_filters_by_antichains(a: &FiniteAlgebra) -> Vec<ElemSet> {
    let proper: BTreeSet<ElemSet> = antichains(a)
        .into_iter()
        .map(|ac| up_closure(a, &ac.into_iter().collect()))
        .filter(|s| is_proper(a, s))
        .collect();
    inclusion_maximal(proper)
}

/// Maximal filters as the principal up-sets passing the maximality test.
pub fn maximal_filters_by_test(a: &FiniteAlgebra) -> Vec<ElemSet> {
    let found: BTreeSet<ElemSet> = a
        .elements()
        .map(|x| principal_filter(a, x))
        .filter(|f| satisfies_maximality_test(a, f))
        .collect();
    found.into_iter().collect()
}

/// Every proper filter, found by scanning all subsets.
pub fn proper_filters_by_scan(a: &FiniteAlgebra) -> Result<Vec<ElemSet>> {
    check_cap(
        "algebra for subset scan",
        a.len(),
        Limits::current().filter_elements.min(24),
    )?;
    let n = a.len();
    Ok((1u64..1 << n)
        .map(|bits| {
            (0..n)
                .filter(|&i| bits & (1 << i) != 0)
                .collect::<ElemSet>()
        })
        .filter(|s| is_proper(a, s))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect())
}

/// The two scan-based answers: inclusion-maximal proper filters, and
/// proper filters passing the maximality test.
pub fn maximal_filters_by_scan(a: &FiniteAlgebra) -> Result<(Vec<ElemSet>, Vec<ElemSet>)> {
    let proper = proper_filters_by_scan(a)?;
    let by_test = proper
        .iter()
        .filter(|f| satisfies_maximality_test(a, f))
        .cloned()
        .collect();
    Ok((inclusion_maximal(proper.into_iter().collect()), by_test))
}

/// The points of the dual space with their `≈` classes and the basic
/// open `â` of each element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxFilterSpace {
    points: Vec<ElemSet>,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    hats: Vec<PointSet>,
}

impl MaxFilterSpace {
    pub fn points(&self) -> &[ElemSet] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `≈` classes as sorted point lists, ordered by least point.
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, point: usize) -> usize {
        self.class_of[point]
    }

    /// `â = {μ | a ∈ μ}`.
    pub fn hat(&self, a: usize) -> PointSet {
        self.hats[a]
    }

    pub fn hats(&self) -> &[PointSet] {
        &self.hats
    }

    pub fn index_of(&self, filter: &ElemSet) -> Option<usize> {
        self.points.binary_search(filter).ok()
    }

    /// The least element of a point; finite filters are principal.
    pub fn generator(&self, a: &FiniteAlgebra, point: usize) -> usize {
        let f = &self.points[point];
        f.iter()
            .find(|&x| f.iter().all(|y| a.leq(x, y)))
            .expect("finite filters are principal")
    }
}

/// All maximal filters of `a`, cross-checked along two routes.
pub fn maximal_filters(a: &FiniteAlgebra) -> Result<MaxFilterSpace> {
    check_cap(
        "algebra for maximal filters",
        a.len(),
        Limits::current().filter_elements,
    )?;
    let points = maximal_filters_by_antichains(a);
    let by_test = maximal_filters_by_test(a);
    if points != by_test {
        return Err(Error::Internal(format!(
            "maximal filter routes disagree: {points:?} vs {by_test:?}"
        )));
    }
    check_cap("maximal filters", points.len(), PointSet::CAPACITY)?;

    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut class_of = vec![0; points.len()];
    for (p, mu) in points.iter().enumerate() {
        match classes
            .iter()
            .position(|c| filter_equiv(a, &points[c[0]], mu))
        {
            Some(ci) => {
                classes[ci].push(p);
                class_of[p] = ci;
            }
            None => {
                class_of[p] = classes.len();
                classes.push(vec![p]);
            }
        }
    }
    // ≈ must be an equivalence; check it rather than trust the grouping.
    for p in 0..points.len() {
        for q in 0..points.len() {
            let same = class_of[p] == class_of[q];
            if filter_equiv(a, &points[p], &points[q]) != same {
                return Err(Error::Internal(format!(
                    "filter equivalence is not transitive at {p}, {q}"
                )));
            }
        }
    }
    let hats = a
        .elements()
        .map(|x| {
            (0..points.len())
                .filter(|&p| points[p].contains(x))
                .collect()
        })
        .collect();
    Ok(MaxFilterSpace {
        points,
        classes,
        class_of,
        hats,
    })
}
