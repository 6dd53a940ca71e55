//! Finite étale spaces `π: X ↠ X₀` and partial maps between them.
//!
//! A space is given by a basis of opens on `X`; the topology is the one
//! the basis generates and `X₀` carries the quotient topology. Everything
//! is computed through minimal neighbourhoods: in a finite space each point
//! `x` has a least open `N(x)`, and `U` is open iff `N(x) ⊆ U` for all
//! `x ∈ U`. A finite Hausdorff space is discrete; the validator records
//! that rather than assuming it.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::bitset::PointSet;
use crate::error::{Error, Result};
use crate::limits::{check_cap, Limits};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EtaleSpace {
    point_names: Vec<String>,
    base_names: Vec<String>,
    projection: Vec<usize>,
    basis: Vec<PointSet>,
    nbhd: Vec<PointSet>,
    base_nbhd: Vec<PointSet>,
}

fn check_names(what: &str, names: &[String]) -> Result<()> {
    check_cap("space points", names.len(), PointSet::CAPACITY)?;
    let distinct: BTreeSet<&String> = names.iter().collect();
    if distinct.len() != names.len() {
        return Err(Error::InvalidSpace(format!(
            "{what} names must be distinct"
        )));
    }
    Ok(())
}

impl EtaleSpace {
    /// Structural construction. The étale conditions are checked by
    /// [`EtaleSpace::validate`].
    pub fn new(
        point_names: Vec<String>,
        base_names: Vec<String>,
        projection: Vec<usize>,
        basis: Vec<PointSet>,
    ) -> Result<Self> {
        check_names("point", &point_names)?;
        check_names("base point", &base_names)?;
        if projection.len() != point_names.len() {
            return Err(Error::InvalidSpace(format!(
                "projection has {} entries for {} points",
                projection.len(),
                point_names.len()
            )));
        }
        if let Some(&p) = projection.iter().find(|&&p| p >= base_names.len()) {
            return Err(Error::InvalidSpace(format!(
                "projection value {p} is not a base point"
            )));
        }
        let all = PointSet::full(point_names.len());
        if let Some(b) = basis.iter().find(|b| !b.is_subset(all)) {
            return Err(Error::InvalidSpace(format!(
                "basis set {b:?} mentions unknown points"
            )));
        }
        let basis: Vec<PointSet> = basis
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let nbhd: Vec<PointSet> = (0..point_names.len())
            .map(|x| {
                basis
                    .iter()
                    .filter(|b| b.contains(x))
                    .fold(all, |acc, b| acc.intersection(*b))
            })
            .collect();
        let mut space = EtaleSpace {
            point_names,
            base_names,
            projection,
            basis,
            nbhd,
            base_nbhd: Vec::new(),
        };
        space.base_nbhd = (0..space.base_len())
            .map(|p| space.quotient_nbhd(p))
            .collect();
        Ok(space)
    }

    /// Least quotient-open set containing base point `p`.
    fn quotient_nbhd(&self, p: usize) -> PointSet {
        let mut v = PointSet::singleton(p);
        loop {
            let up = self.preimage(v);
            let grown = up
                .iter()
                .fold(v, |acc, x| acc.union(self.image(self.nbhd[x])));
            if grown == v {
                return v;
            }
            v = grown;
        }
    }

    pub fn len(&self) -> usize {
        self.point_names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.point_names.is_empty()
    }

    pub fn base_len(&self) -> usize {
        self.base_names.len()
    }

    pub fn point_names(&self) -> &[String] {
        &self.point_names
    }

    pub fn base_names(&self) -> &[String] {
        &self.base_names
    }

    pub fn projection(&self) -> &[usize] {
        &self.projection
    }

    pub fn project(&self, x: usize) -> usize {
        self.projection[x]
    }

    pub fn basis(&self) -> &[PointSet] {
        &self.basis
    }

    pub fn all_points(&self) -> PointSet {
        PointSet::full(self.len())
    }

    /// The least open set containing `x`.
    pub fn nbhd(&self, x: usize) -> PointSet {
        self.nbhd[x]
    }

    /// The least open set of `X₀` containing base point `p`.
    pub fn base_nbhd(&self, p: usize) -> PointSet {
        self.base_nbhd[p]
    }

    pub fn is_open(&self, u: PointSet) -> bool {
        u.iter().all(|x| self.nbhd[x].is_subset(u))
    }

    pub fn is_base_open(&self, v: PointSet) -> bool {
        v.iter().all(|p| self.base_nbhd[p].is_subset(v))
    }

    /// Every subset of a finite space is compact: an open cover has
    /// finitely many members to begin with.
    pub fn is_compact(&self, _u: PointSet) -> bool {
        true
    }

    /// `U` is the union of the basis sets it contains.
    pub fn is_finite_union_of_basis(&self, u: PointSet) -> bool {
        self.basis
            .iter()
            .filter(|b| b.is_subset(u))
            .fold(PointSet::EMPTY, |acc, b| acc.union(*b))
            == u
    }

    /// `π(U)` as a set of base points.
    pub fn image(&self, u: PointSet) -> PointSet {
        u.iter().map(|x| self.projection[x]).collect()
    }

    /// `π⁻¹(V)` for a set of base points.
    pub fn preimage(&self, v: PointSet) -> PointSet {
        (0..self.len())
            .filter(|&x| v.contains(self.projection[x]))
            .collect()
    }

    pub fn is_injective_on(&self, u: PointSet) -> bool {
        self.image(u).len() == u.len()
    }

    /// `π⁻¹(π(x))`.
    pub fn fibre_of(&self, x: usize) -> PointSet {
        self.preimage(PointSet::singleton(self.projection[x]))
    }

    /// All open sets, in increasing numeric order. Fails beyond `cap`.
    pub fn open_sets(&self, cap: usize) -> Result<Vec<PointSet>> {
        self.grow_opens(cap, |_| true)
    }

    /// Open sets on which `π` is injective: the candidate sections.
    pub fn injective_opens(&self, cap: usize) -> Result<Vec<PointSet>> {
        self.grow_opens(cap, |u| self.is_injective_on(u))
    }

    /// Every open is a union of minimal neighbourhoods, and an injective
    /// open is a union of injective ones, so growing from `∅` by adding
    /// one `N(x)` at a time reaches every set satisfying `keep`.
    fn grow_opens(&self, cap: usize, keep: impl Fn(PointSet) -> bool) -> Result<Vec<PointSet>> {
        let mut seen: BTreeSet<PointSet> = BTreeSet::from([PointSet::EMPTY]);
        let mut queue = vec![PointSet::EMPTY];
        while let Some(u) = queue.pop() {
            for x in 0..self.len() {
                let v = u.union(self.nbhd[x]);
                if v != u && keep(v) && seen.insert(v) {
                    if seen.len() > cap {
                        return Err(Error::SizeCap {
                            what: "open sets",
                            limit: cap,
                            actual: seen.len(),
                        });
                    }
                    queue.push(v);
                }
            }
        }
        Ok(seen.into_iter().collect())
    }

    /// Itemised étale and separation checks.
    pub fn validate(&self) -> EtaleReport {
        let n = self.len();
        let all = self.all_points();
        let surjective = self.image(all) == PointSet::full(self.base_len());
        let basis_covers = self.basis.iter().fold(PointSet::EMPTY, |a, b| a.union(*b)) == all;
        let basis_property = (0..n).all(|x| self.basis.contains(&self.nbhd[x]));
        let projection_continuous = (0..self.base_len())
            .all(|p| self.is_open(self.preimage(self.base_nbhd[p])))
            && self.is_open(self.preimage(PointSet::full(self.base_len())));
        let projection_open = (0..n).all(|x| self.is_base_open(self.image(self.nbhd[x])));
        let local_homeomorphism = (0..n).all(|x| {
            let u = self.nbhd[x];
            self.is_injective_on(u)
                && self.is_base_open(self.image(u))
                && u.iter().all(|y| {
                    u.iter().all(|z| {
                        self.nbhd[y].contains(z)
                            == self.base_nbhd[self.projection[y]].contains(self.projection[z])
                    })
                })
        });
        let hausdorff = (0..n).all(|x| (x + 1..n).all(|y| self.nbhd[x].is_disjoint(self.nbhd[y])));
        let discrete = (0..n).all(|x| self.nbhd[x] == PointSet::singleton(x));
        let zero_dimensional = (0..n).all(|x| self.is_open(all.difference(self.nbhd[x])));
        let locally_compact = (0..n).all(|x| self.is_compact(self.nbhd[x]));
        EtaleReport {
            surjective,
            basis_covers,
            basis_property,
            projection_continuous,
            projection_open,
            local_homeomorphism,
            hausdorff,
            discrete,
            zero_dimensional,
            locally_compact,
        }
    }

    /// The discrete space over itself: `π` the identity.
    pub fn identity_space(names: Vec<String>) -> Result<Self> {
        let n = names.len();
        let basis = (0..n).map(PointSet::singleton).collect();
        EtaleSpace::new(names.clone(), names, (0..n).collect(), basis)
    }

    pub fn point_index(&self, name: &str) -> Option<usize> {
        self.point_names.iter().position(|p| p == name)
    }

    pub fn base_index(&self, name: &str) -> Option<usize> {
        self.base_names.iter().position(|p| p == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EtaleReport {
    pub surjective: bool,
    pub basis_covers: bool,
    /// Each minimal neighbourhood is itself a basis set.
    pub basis_property: bool,
    pub projection_continuous: bool,
    pub projection_open: bool,
    pub local_homeomorphism: bool,
    pub hausdorff: bool,
    pub discrete: bool,
    pub zero_dimensional: bool,
    pub locally_compact: bool,
}

impl EtaleReport {
    /// A Hausdorff étale space.
    pub fn is_valid(&self) -> bool {
        self.surjective
            && self.basis_covers
            && self.projection_continuous
            && self.projection_open
            && self.local_homeomorphism
            && self.hausdorff
    }

    pub fn items(&self) -> [(&'static str, bool); 10] {
        [
            ("surjective", self.surjective),
            ("basis_covers", self.basis_covers),
            ("basis_property", self.basis_property),
            ("projection_continuous", self.projection_continuous),
            ("projection_open", self.projection_open),
            ("local_homeomorphism", self.local_homeomorphism),
            ("hausdorff", self.hausdorff),
            ("discrete", self.discrete),
            ("zero_dimensional", self.zero_dimensional),
            ("locally_compact", self.locally_compact),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MorphismReport {
    pub continuous: bool,
    pub proper: bool,
    pub preserves_equivalence: bool,
    pub fibrewise_injective: bool,
    pub fibrewise_surjective: bool,
}

impl MorphismReport {
    pub fn is_valid(&self) -> bool {
        self.continuous
            && self.proper
            && self.preserves_equivalence
            && self.fibrewise_injective
            && self.fibrewise_surjective
    }

    pub fn items(&self) -> [(&'static str, bool); 5] {
        [
            ("continuous", self.continuous),
            ("proper", self.proper),
            ("preserves_equivalence", self.preserves_equivalence),
            ("fibrewise_injective", self.fibrewise_injective),
            ("fibrewise_surjective", self.fibrewise_surjective),
        ]
    }
}

/// Check the morphism conditions for a partial map without constructing it.
pub fn check_space_map(
    source: &EtaleSpace,
    target: &EtaleSpace,
    map: &[Option<usize>],
) -> Result<MorphismReport> {
    if map.len() != source.len() {
        return Err(Error::InvalidMorphism(format!(
            "map has {} entries, source has {} points",
            map.len(),
            source.len()
        )));
    }
    if map.iter().flatten().any(|&y| y >= target.len()) {
        return Err(Error::InvalidMorphism("image outside target".into()));
    }
    let pre = |v: PointSet| -> PointSet {
        (0..source.len())
            .filter(|&x| map[x].is_some_and(|y| v.contains(y)))
            .collect()
    };
    // Opens are unions of minimal neighbourhoods and preimage commutes
    // with unions, so these generate every case.
    let mut opens: Vec<PointSet> = (0..target.len()).map(|y| target.nbhd(y)).collect();
    opens.push(target.all_points());
    let continuous = opens.iter().all(|&v| source.is_open(pre(v)));
    let proper = opens
        .iter()
        .chain(std::iter::once(&PointSet::EMPTY))
        .filter(|&&v| target.is_compact(v))
        .all(|&v| source.is_compact(pre(v)));

    let defined: Vec<usize> = (0..source.len()).filter(|&x| map[x].is_some()).collect();
    let mut preserves_equivalence = true;
    let mut fibrewise_injective = true;
    for &x in &defined {
        for &x2 in &defined {
            if source.project(x) != source.project(x2) {
                continue;
            }
            let (y, y2) = (map[x].unwrap(), map[x2].unwrap());
            preserves_equivalence &= target.project(y) == target.project(y2);
            fibrewise_injective &= x == x2 || y != y2;
        }
    }
    let fibrewise_surjective = defined.iter().all(|&x| {
        let hit: PointSet = source.fibre_of(x).iter().filter_map(|x2| map[x2]).collect();
        target.fibre_of(map[x].unwrap()).is_subset(hit)
    });
    Ok(MorphismReport {
        continuous,
        proper,
        preserves_equivalence,
        fibrewise_injective,
        fibrewise_surjective,
    })
}

/// A partial map of étale spaces satisfying every morphism condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceMorphism {
    source: Arc<EtaleSpace>,
    target: Arc<EtaleSpace>,
    map: Vec<Option<usize>>,
}

impl SpaceMorphism {
    /// Validates eagerly and refuses maps that fail any condition.
    pub fn new(
        source: impl Into<Arc<EtaleSpace>>,
        target: impl Into<Arc<EtaleSpace>>,
        map: Vec<Option<usize>>,
    ) -> Result<Self> {
        let (source, target) = (source.into(), target.into());
        let report = check_space_map(&source, &target, &map)?;
        if let Some((name, _)) = report.items().into_iter().find(|(_, ok)| !ok) {
            return Err(Error::InvalidMorphism(format!(
                "partial map is not {}",
                name.replace('_', " ")
            )));
        }
        Ok(SpaceMorphism {
            source,
            target,
            map,
        })
    }

    pub fn identity(s: impl Into<Arc<EtaleSpace>>) -> Self {
        let s = s.into();
        let map = (0..s.len()).map(Some).collect();
        SpaceMorphism {
            source: s.clone(),
            target: s,
            map,
        }
    }

    pub fn source(&self) -> &EtaleSpace {
        &self.source
    }

    pub fn target(&self) -> &EtaleSpace {
        &self.target
    }

    pub fn source_arc(&self) -> &Arc<EtaleSpace> {
        &self.source
    }

    pub fn target_arc(&self) -> &Arc<EtaleSpace> {
        &self.target
    }

    pub fn map(&self) -> &[Option<usize>] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> Option<usize> {
        self.map[x]
    }

    pub fn preimage(&self, v: PointSet) -> PointSet {
        (0..self.source.len())
            .filter(|&x| self.map[x].is_some_and(|y| v.contains(y)))
            .collect()
    }

    pub fn image(&self, u: PointSet) -> PointSet {
        u.iter().filter_map(|x| self.map[x]).collect()
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &SpaceMorphism) -> Result<SpaceMorphism> {
        if *self.target != *other.source {
            return Err(Error::InvalidMorphism(
                "composite of maps with mismatched spaces".into(),
            ));
        }
        let map = self
            .map
            .iter()
            .map(|m| m.and_then(|y| other.map[y]))
            .collect();
        SpaceMorphism::new(self.source.clone(), other.target.clone(), map)
    }

    pub fn is_identity(&self) -> bool {
        *self.source == *self.target && self.map.iter().enumerate().all(|(i, m)| *m == Some(i))
    }

    /// A total bijective homeomorphism that also reflects equivalence.
    pub fn is_isomorphism(&self) -> bool {
        let (s, t) = (&*self.source, &*self.target);
        if s.len() != t.len() || self.map.iter().any(Option::is_none) {
            return false;
        }
        let phi: Vec<usize> = self.map.iter().map(|m| m.unwrap()).collect();
        let distinct: BTreeSet<usize> = phi.iter().copied().collect();
        if distinct.len() != phi.len() {
            return false;
        }
        let homeo = (0..s.len()).all(|x| self.image(s.nbhd(x)) == t.nbhd(phi[x]));
        let fibres = (0..s.len()).all(|x| {
            (0..s.len()).all(|x2| {
                (s.project(x) == s.project(x2)) == (t.project(phi[x]) == t.project(phi[x2]))
            })
        });
        homeo && fibres
    }
}

/// Section search cap from the process limits.
pub(crate) fn section_cap() -> usize {
    Limits::current().max_sections
}

pub(crate) fn check_points(n: usize) -> Result<()> {
    check_cap("space points", n, PointSet::CAPACITY)
}
