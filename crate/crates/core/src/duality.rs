//! The functors between algebras and étale spaces, their unit and counit,
//! and the finitary compatible completion built from them.
//!
//! `F` sends an algebra to its space of maximal filters fibred over the
//! `≈` classes. `G` sends a space to its compact open sets on which the
//! projection is injective, with `U − V = U \ V` and
//! `U ⇂ V = π⁻¹(π(U)) ∩ V`. The completion of `A` is `GF(A)` with the unit
//! `a ↦ â` as embedding.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::bitset::{ElemSet, PointSet};
use crate::dra::{find_maps, AlgebraMap, FiniteAlgebra, MapKind, OpTable};
use crate::error::{Error, Result};
use crate::filters::{maximal_filters, MaxFilterSpace};
use crate::pfun::{pf_override, PartialFunction};
use crate::space::{check_points, section_cap, EtaleSpace, SpaceMorphism};

/// `F(A)`: the maximal filters of `A` as an étale space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FSpace {
    pub filters: MaxFilterSpace,
    pub space: Arc<EtaleSpace>,
}

fn set_name(names: &[String], members: impl Iterator<Item = usize>) -> String {
    let parts: Vec<&str> = members.map(|i| names[i].as_str()).collect();
    format!("{{{}}}", parts.join(","))
}

/// Use `preferred` if its entries are distinct, else `prefix0, prefix1, ...`.
fn distinct_or_indexed(preferred: Vec<String>, prefix: &str) -> Vec<String> {
    let distinct: BTreeSet<&String> = preferred.iter().collect();
    if distinct.len() == preferred.len() {
        preferred
    } else {
        (0..preferred.len())
            .map(|i| format!("{prefix}{i}"))
            .collect()
    }
}

pub fn f_object(a: &FiniteAlgebra) -> Result<FSpace> {
    let filters = maximal_filters(a)?;
    let point_names = distinct_or_indexed(
        (0..filters.len())
            .map(|p| format!("up({})", a.name(filters.generator(a, p))))
            .collect(),
        "m",
    );
    let base_names = distinct_or_indexed(
        filters
            .classes()
            .iter()
            .map(|c| set_name(&point_names, c.iter().copied()))
            .collect(),
        "c",
    );
    let projection = (0..filters.len()).map(|p| filters.class_of(p)).collect();
    let space = EtaleSpace::new(point_names, base_names, projection, filters.hats().to_vec())?;
    let report = space.validate();
    if !report.is_valid() {
        return Err(Error::Internal(format!(
            "dual space of an algebra failed validation: {report:?}"
        )));
    }
    Ok(FSpace {
        filters,
        space: Arc::new(space),
    })
}

/// `G(S)`: the compact open injective sections of `S` as an algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualAlgebra {
    pub space: Arc<EtaleSpace>,
    pub sections: Vec<PointSet>,
    pub algebra: Arc<FiniteAlgebra>,
}

impl DualAlgebra {
    pub fn index_of(&self, u: PointSet) -> Option<usize> {
        self.sections.binary_search(&u).ok()
    }

    pub fn section(&self, i: usize) -> PointSet {
        self.sections[i]
    }
}

/// `U ⇂ V = π⁻¹(π(U)) ∩ V`.
pub fn section_rest(s: &EtaleSpace, u: PointSet, v: PointSet) -> PointSet {
    s.preimage(s.image(u)).intersection(v)
}

pub fn g_object(s: &Arc<EtaleSpace>) -> Result<DualAlgebra> {
    let report = s.validate();
    if !report.is_valid() {
        let failed: Vec<&str> = report
            .items()
            .iter()
            .filter(|(_, ok)| !ok)
            .map(|(n, _)| *n)
            .collect();
        return Err(Error::InvalidSpace(format!(
            "failed: {}",
            failed.join(", ")
        )));
    }
    check_points(s.len())?;
    let sections: Vec<PointSet> = s
        .injective_opens(section_cap())?
        .into_iter()
        .filter(|&u| s.is_compact(u) && s.is_finite_union_of_basis(u))
        .collect();
    let n = sections.len();
    let index = |u: PointSet| {
        sections
            .binary_search(&u)
            .map_err(|_| Error::Internal(format!("sections not closed: {u:?} missing")))
    };
    let mut minus = Vec::with_capacity(n * n);
    let mut rest = Vec::with_capacity(n * n);
    for &u in &sections {
        for &v in &sections {
            minus.push(index(u.difference(v))?);
            rest.push(index(section_rest(s, u, v))?);
        }
    }
    let names = distinct_or_indexed(
        sections
            .iter()
            .map(|u| set_name(s.point_names(), u.iter()))
            .collect(),
        "s",
    );
    let algebra = FiniteAlgebra::new(names, OpTable::new(n, 2, minus)?, OpTable::new(n, 2, rest)?)?;
    Ok(DualAlgebra {
        space: s.clone(),
        sections,
        algebra: Arc::new(algebra),
    })
}

/// The unit `η_A: A → GF(A)`, `a ↦ â`, with the objects it was built from.
#[derive(Debug, Clone)]
pub struct Unit {
    pub fspace: FSpace,
    pub dual: DualAlgebra,
    pub map: AlgebraMap,
}

pub fn unit(a: &Arc<FiniteAlgebra>) -> Result<Unit> {
    let fspace = f_object(a)?;
    let dual = g_object(&fspace.space)?;
    let table = a
        .elements()
        .map(|x| {
            let h = fspace.filters.hat(x);
            dual.index_of(h)
                .ok_or_else(|| Error::Internal(format!("hat of {} is not a section", a.name(x))))
        })
        .collect::<Result<Vec<_>>>()?;
    let map = AlgebraMap::new(a.clone(), dual.algebra.clone(), table)?;
    Ok(Unit { fspace, dual, map })
}

pub fn unit_eta(a: &Arc<FiniteAlgebra>) -> Result<AlgebraMap> {
    Ok(unit(a)?.map)
}

/// The counit `λ_S: S ⇀ FG(S)`, with the objects it was built from.
#[derive(Debug, Clone)]
pub struct Counit {
    pub dual: DualAlgebra,
    pub fspace: FSpace,
    pub map: SpaceMorphism,
}

/// `x ↦` the filter of sections containing `x`; undefined where no
/// section contains `x`.
pub fn counit(s: &Arc<EtaleSpace>) -> Result<Counit> {
    let dual = g_object(s)?;
    let fspace = f_object(&dual.algebra)?;
    let map = (0..s.len())
        .map(|x| {
            let filter: ElemSet = (0..dual.sections.len())
                .filter(|&i| dual.sections[i].contains(x))
                .collect();
            if filter.is_empty() {
                return Ok(None);
            }
            fspace.filters.index_of(&filter).map(Some).ok_or_else(|| {
                Error::Internal(format!(
                    "sections at {} do not form a maximal filter",
                    s.point_names()[x]
                ))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let map = SpaceMorphism::new(s.clone(), fspace.space.clone(), map)
        .map_err(|e| Error::Internal(format!("counit is not a morphism: {e}")))?;
    Ok(Counit { dual, fspace, map })
}

pub fn counit_lambda(s: &Arc<EtaleSpace>) -> Result<SpaceMorphism> {
    Ok(counit(s)?.map)
}

/// `F(h): F(B) ⇀ F(A)`, `ξ ↦ h⁻¹(ξ)`, defined on `⋃ ĥ(a)`.
pub fn f_morphism(h: &AlgebraMap) -> Result<SpaceMorphism> {
    if !h.hom_check().is_hom() {
        return Err(Error::Precondition("map is not a homomorphism".into()));
    }
    let (a, b) = (h.source(), h.target());
    let (fa, fb) = (f_object(a)?, f_object(b)?);
    let map =
        fb.filters
            .points()
            .iter()
            .map(|xi| {
                let pre: ElemSet = a.elements().filter(|&x| xi.contains(h.apply(x))).collect();
                if pre.is_empty() {
                    return Ok(None);
                }
                fa.filters.index_of(&pre).map(Some).ok_or_else(|| {
                    Error::Internal(format!("preimage {pre:?} is not a maximal filter"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
    let phi = SpaceMorphism::new(fb.space.clone(), fa.space.clone(), map)
        .map_err(|e| Error::Internal(format!("dual of a homomorphism is not a morphism: {e}")))?;
    for x in a.elements() {
        if phi.preimage(fa.filters.hat(x)) != fb.filters.hat(h.apply(x)) {
            return Err(Error::Internal(format!(
                "preimage of hat({}) is not hat of its image",
                a.name(x)
            )));
        }
    }
    Ok(phi)
}

/// `G(φ): G(T) → G(S)`, `U ↦ φ⁻¹(U)`.
pub fn g_morphism(phi: &SpaceMorphism) -> Result<AlgebraMap> {
    let gs = g_object(phi.source_arc())?;
    let gt = g_object(phi.target_arc())?;
    let table = gt
        .sections
        .iter()
        .map(|&u| {
            gs.index_of(phi.preimage(u))
                .ok_or_else(|| Error::Internal(format!("preimage of {u:?} is not a section")))
        })
        .collect::<Result<Vec<_>>>()?;
    let m = AlgebraMap::new(gt.algebra.clone(), gs.algebra.clone(), table)?;
    if !m.hom_check().is_hom() {
        return Err(Error::Internal("preimage map is not a homomorphism".into()));
    }
    Ok(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TriangleReport {
    /// `Fη ∘ λ_F = Id` at the relevant `F`-object.
    pub f_eta_after_lambda: bool,
    /// `Gλ ∘ η_G = Id` at the relevant `G`-object.
    pub g_lambda_after_eta: bool,
}

impl TriangleReport {
    pub fn holds(&self) -> bool {
        self.f_eta_after_lambda && self.g_lambda_after_eta
    }
}

fn f_side(a: &Arc<FiniteAlgebra>) -> Result<bool> {
    let fa = f_object(a)?;
    let lambda = counit_lambda(&fa.space)?;
    let f_eta = f_morphism(&unit_eta(a)?)?;
    Ok(lambda.then(&f_eta)?.is_identity())
}

fn g_side(s: &Arc<EtaleSpace>) -> Result<bool> {
    let gs = g_object(s)?;
    let eta = unit_eta(&gs.algebra)?;
    let g_lambda = g_morphism(&counit_lambda(s)?)?;
    Ok(eta.then(&g_lambda)?.is_identity())
}

/// Both triangle identities at objects built from `a`:
/// `Fη_A ∘ λ_{FA} = Id` and `Gλ_{FA} ∘ η_{GFA} = Id`.
pub fn check_triangle_identities(a: &Arc<FiniteAlgebra>) -> Result<TriangleReport> {
    let fa = f_object(a)?;
    Ok(TriangleReport {
        f_eta_after_lambda: f_side(a)?,
        g_lambda_after_eta: g_side(&fa.space)?,
    })
}

/// Both triangle identities at objects built from `s`:
/// `Gλ_S ∘ η_{GS} = Id` and `Fη_{GS} ∘ λ_{FGS} = Id`.
pub fn check_triangle_identities_space(s: &Arc<EtaleSpace>) -> Result<TriangleReport> {
    let gs = g_object(s)?;
    Ok(TriangleReport {
        f_eta_after_lambda: f_side(&gs.algebra)?,
        g_lambda_after_eta: g_side(s)?,
    })
}

/// `GF(h) ∘ η_A = η_B ∘ h`.
pub fn check_unit_naturality(h: &AlgebraMap) -> Result<bool> {
    let gfh = g_morphism(&f_morphism(h)?)?;
    let eta_a = unit_eta(h.source_arc())?;
    let eta_b = unit_eta(h.target_arc())?;
    let left = eta_a.then(&gfh)?;
    let right = h.then(&eta_b)?;
    Ok(left == right)
}

/// `FG(φ) ∘ λ_S = λ_T ∘ φ` as partial maps.
pub fn check_counit_naturality(phi: &SpaceMorphism) -> Result<bool> {
    let fg_phi = f_morphism(&g_morphism(phi)?)?;
    let lambda_s = counit_lambda(phi.source_arc())?;
    let lambda_t = counit_lambda(phi.target_arc())?;
    Ok(lambda_s.then(&fg_phi)? == phi.then(&lambda_t)?)
}

/// Every element of the target is the join of the embedded elements below it.
pub fn is_join_dense(m: &AlgebraMap) -> bool {
    let c = m.target();
    c.elements().all(|x| {
        let below: Vec<usize> = m.table().iter().copied().filter(|&y| c.leq(y, x)).collect();
        c.join_if_exists(&below) == Some(x)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompletionCheck {
    pub embedding: bool,
    pub target_complete: bool,
    pub dense: bool,
}

impl CompletionCheck {
    pub fn is_completion(&self) -> bool {
        self.embedding && self.target_complete && self.dense
    }
}

pub fn check_completion(m: &AlgebraMap) -> CompletionCheck {
    CompletionCheck {
        embedding: m.hom_check().is_embedding(),
        target_complete: m.target().is_fin_compatibly_complete(),
        dense: is_join_dense(m),
    }
}

/// `GF(A)` with `η_A`, plus the dual space it came from.
#[derive(Debug, Clone)]
pub struct Completion {
    pub algebra: Arc<FiniteAlgebra>,
    pub embedding: AlgebraMap,
    pub dual: DualAlgebra,
}

pub fn complete(a: &Arc<FiniteAlgebra>) -> Result<Completion> {
    let u = unit(a)?;
    let check = check_completion(&u.map);
    if !check.is_completion() {
        return Err(Error::Internal(format!(
            "unit failed completion postconditions: {check:?}"
        )));
    }
    Ok(Completion {
        algebra: u.dual.algebra.clone(),
        embedding: u.map,
        dual: u.dual,
    })
}

/// The unique isomorphism `θ: C → C′` with `θ ∘ ι = ι′`, sending
/// `Σ ι(aᵢ)` to `Σ ι′(aᵢ)`.
pub fn unique_completion_iso(iota: &AlgebraMap, iota2: &AlgebraMap) -> Result<AlgebraMap> {
    if iota.source() != iota2.source() {
        return Err(Error::Precondition(
            "embeddings have different sources".into(),
        ));
    }
    for (label, m) in [("first", iota), ("second", iota2)] {
        let c = check_completion(m);
        if !c.is_completion() {
            return Err(Error::Precondition(format!(
                "{label} map is not a completion: {c:?}"
            )));
        }
    }
    let (c, c2) = (iota.target(), iota2.target());
    let a = iota.source();
    let table = c
        .elements()
        .map(|x| {
            let images: Vec<usize> = a
                .elements()
                .filter(|&y| c.leq(iota.apply(y), x))
                .map(|y| iota2.apply(y))
                .collect();
            c2.join_if_exists(&images)
                .ok_or_else(|| Error::Internal(format!("no join for the image of {}", c.name(x))))
        })
        .collect::<Result<Vec<_>>>()?;
    let theta = AlgebraMap::new(iota.target_arc().clone(), iota2.target_arc().clone(), table)?;
    if !theta.hom_check().is_isomorphism() || iota.then(&theta)? != *iota2 {
        return Err(Error::Internal(
            "join-extension of completions is not the compatible isomorphism".into(),
        ));
    }
    Ok(theta)
}

/// How one test extension `κ: A ↪ B` fared.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionOutcome {
    /// `B` is finitarily compatibly complete.
    pub complete_target: bool,
    /// An embedding `C ↪ B` over `A`, when `B` is complete.
    pub factors_from_c: Option<bool>,
    /// `κ` has join-dense image.
    pub dense: bool,
    /// An embedding `B ↪ C` over `A`, when `κ` is dense.
    pub factors_into_c: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterizationReport {
    /// `C` complete and `ι` dense.
    pub complete_and_dense: bool,
    /// `C` complete and it embeds over `A` into every complete extension tested.
    pub smallest_complete: bool,
    /// `ι` dense and every dense extension tested embeds into `C` over `A`.
    pub largest_dense: bool,
    pub outcomes: Vec<ExtensionOutcome>,
}

impl CharacterizationReport {
    pub fn consistent(&self) -> bool {
        self.complete_and_dense == self.smallest_complete
            && self.smallest_complete == self.largest_dense
    }
}

/// An embedding `from ↪ to` with `ε ∘ first = second`.
fn factor(first: &AlgebraMap, second: &AlgebraMap) -> Result<bool> {
    let mut fixed = vec![None; first.target().len()];
    for a in first.source().elements() {
        fixed[first.apply(a)] = Some(second.apply(a));
    }
    Ok(!find_maps(
        first.target_arc(),
        second.target_arc(),
        MapKind::Embedding,
        &fixed,
        1,
    )?
    .is_empty())
}

/// Decide the three descriptions of a completion for `ι`, quantifying
/// over `tests` together with the unit of `A`.
pub fn completion_characterizations(
    iota: &AlgebraMap,
    tests: &[AlgebraMap],
) -> Result<CharacterizationReport> {
    if !iota.hom_check().is_embedding() {
        return Err(Error::Precondition("map is not an embedding".into()));
    }
    let own = check_completion(iota);
    let mut family = vec![unit_eta(iota.source_arc())?];
    for k in tests {
        if k.source() != iota.source() {
            return Err(Error::Precondition(
                "test extension has a different source".into(),
            ));
        }
        if !k.hom_check().is_embedding() {
            return Err(Error::Precondition(
                "test extension is not an embedding".into(),
            ));
        }
        family.push(k.clone());
    }
    let mut outcomes = Vec::new();
    for k in &family {
        let complete_target = k.target().is_fin_compatibly_complete();
        let dense = is_join_dense(k);
        outcomes.push(ExtensionOutcome {
            complete_target,
            factors_from_c: if complete_target {
                Some(factor(iota, k)?)
            } else {
                None
            },
            dense,
            factors_into_c: if dense { Some(factor(k, iota)?) } else { None },
        });
    }
    let smallest_complete =
        own.target_complete && outcomes.iter().all(|o| o.factors_from_c != Some(false));
    let largest_dense = own.dense && outcomes.iter().all(|o| o.factors_into_c != Some(false));
    outcomes.remove(0);
    Ok(CharacterizationReport {
        complete_and_dense: own.target_complete && own.dense,
        smallest_complete,
        largest_dense,
        outcomes,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StoneReport {
    /// The input is a subtraction algebra (or a space over itself).
    pub applicable: bool,
    pub equivalence_is_equality: bool,
    pub dual_points: usize,
    pub dual_discrete: bool,
    pub identity_space_dual_is_subtraction: bool,
    /// `a ∧ (b − a) = 0` for all pairs of the completion.
    pub disjoint_law: bool,
    /// `a ∨ (b − a) = a ∨ b` for all pairs of the completion.
    pub union_law: bool,
    pub distributive: bool,
}

impl StoneReport {
    pub fn holds(&self) -> bool {
        !self.applicable
            || (self.equivalence_is_equality
                && self.identity_space_dual_is_subtraction
                && self.disjoint_law
                && self.union_law
                && self.distributive)
    }

    fn skipped() -> Self {
        StoneReport {
            applicable: false,
            equivalence_is_equality: false,
            dual_points: 0,
            dual_discrete: false,
            identity_space_dual_is_subtraction: false,
            disjoint_law: false,
            union_law: false,
            distributive: false,
        }
    }
}

/// The generalised Boolean algebra laws on a subtraction algebra whose
/// pairs all have joins.
fn gba_laws(c: &FiniteAlgebra) -> (bool, bool, bool) {
    let join = |x: usize, y: usize| c.join_if_exists(&[x, y]);
    let mut disjoint = true;
    let mut union = true;
    let mut distributive = true;
    for a in c.elements() {
        for b in c.elements() {
            disjoint &= c.meet(a, c.minus(b, a)) == c.bottom();
            union &= match (join(a, c.minus(b, a)), join(a, b)) {
                (Some(l), Some(r)) => l == r,
                _ => false,
            };
            for d in c.elements() {
                distributive &= match (join(b, d), join(c.meet(a, b), c.meet(a, d))) {
                    (Some(bd), Some(r)) => c.meet(a, bd) == r,
                    _ => false,
                };
            }
        }
    }
    (disjoint, union, distributive)
}

/// Checks specific to subtraction algebras, where `⇂` is the meet.
pub fn stone_restriction_checks(a: &Arc<FiniteAlgebra>) -> Result<StoneReport> {
    if !a.is_subtraction_algebra() {
        return Ok(StoneReport::skipped());
    }
    let fa = f_object(a)?;
    let equivalence_is_equality = fa.filters.classes().iter().all(|c| c.len() == 1);
    let flat = Arc::new(EtaleSpace::identity_space(fa.space.point_names().to_vec())?);
    let identity_space_dual_is_subtraction = g_object(&flat)?.algebra.is_subtraction_algebra();
    let completion = complete(a)?;
    let (disjoint_law, union_law, distributive) = gba_laws(&completion.algebra);
    Ok(StoneReport {
        applicable: true,
        equivalence_is_equality,
        dual_points: fa.space.len(),
        dual_discrete: fa.space.validate().discrete,
        identity_space_dual_is_subtraction,
        disjoint_law,
        union_law,
        distributive,
    })
}

/// The same checks for a space whose projection is injective.
pub fn stone_restriction_checks_space(s: &Arc<EtaleSpace>) -> Result<StoneReport> {
    if !s.is_injective_on(s.all_points()) {
        return Ok(StoneReport::skipped());
    }
    let g = g_object(s)?;
    let mut report = stone_restriction_checks(&g.algebra)?;
    report.identity_space_dual_is_subtraction &= g.algebra.is_subtraction_algebra();
    report.applicable = true;
    Ok(report)
}

/// The partial function representing section `U`: `π(x) ↦ |X₀| + x`
/// on a carrier of `|X₀| + |X|` points.
pub fn section_as_pfun(s: &EtaleSpace, u: PointSet) -> PartialFunction {
    let n = s.base_len() + s.len();
    let pairs: Vec<(usize, usize)> = u.iter().map(|x| (s.project(x), s.base_len() + x)).collect();
    PartialFunction::from_pairs(n, &pairs).expect("π is injective on a section")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverrideReport {
    pub pairs_checked: usize,
    /// Pairs where the abstract override, the section formula and the
    /// concrete override do not all agree.
    pub mismatches: Vec<(usize, usize)>,
}

/// Compare `a ⊕ b` in the completion with the concrete override of the
/// representing partial functions and with `U ∪ (V \ (U ⇂ V))`.
pub fn override_coherence(c: &Completion) -> Result<OverrideReport> {
    let d = &c.dual;
    let s = &*d.space;
    let alg = &*c.algebra;
    let mut mismatches = Vec::new();
    let mut pairs_checked = 0;
    for x in alg.elements() {
        for y in alg.elements() {
            pairs_checked += 1;
            let abstract_result = d.section(alg.derived_override(x, y)?);
            let (u, v) = (d.section(x), d.section(y));
            let formula = u.union(v.difference(section_rest(s, u, v)));
            let concrete = pf_override(&section_as_pfun(s, u), &section_as_pfun(s, v))?;
            if abstract_result != formula || section_as_pfun(s, abstract_result) != concrete {
                mismatches.push((x, y));
            }
        }
    }
    Ok(OverrideReport {
        pairs_checked,
        mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dra::isomorphism_search;
    use crate::pfun::{closure_generate, Carrier, ConcreteOp};

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

    fn a3c() -> Arc<FiniteAlgebra> {
        closure(2, &[&[(0, 0)], &[(1, 1)]])
    }

    fn a3i() -> Arc<FiniteAlgebra> {
        closure(2, &[&[(0, 0)], &[(0, 1)]])
    }

    fn b4() -> Arc<FiniteAlgebra> {
        closure(2, &[&[(0, 0)], &[(1, 1)], &[(0, 0), (1, 1)]])
    }

    #[test]
    fn f_objects_of_fixtures() {
        let f = f_object(&closure(1, &[&[(0, 0)]])).unwrap();
        assert_eq!((f.space.len(), f.space.base_len()), (1, 1));
        let f = f_object(&a3c()).unwrap();
        assert_eq!((f.space.len(), f.space.base_len()), (2, 2));
        let f = f_object(&a3i()).unwrap();
        assert_eq!((f.space.len(), f.space.base_len()), (2, 1));
    }

    #[test]
    fn g_objects_of_fixtures() {
        assert_eq!(
            g_object(&f_object(&a3i()).unwrap().space)
                .unwrap()
                .sections
                .len(),
            3
        );
        assert_eq!(
            g_object(&f_object(&a3c()).unwrap().space)
                .unwrap()
                .sections
                .len(),
            4
        );
        let point = Arc::new(EtaleSpace::identity_space(vec!["x".into()]).unwrap());
        let g = g_object(&point).unwrap();
        assert_eq!(g.sections, vec![PointSet::EMPTY, PointSet::singleton(0)]);
    }

    #[test]
    fn g_refuses_invalid_spaces() {
        let bad = Arc::new(
            EtaleSpace::new(
                vec!["x".into(), "y".into()],
                vec!["p".into()],
                vec![0, 0],
                vec![PointSet::full(2)],
            )
            .unwrap(),
        );
        assert!(matches!(g_object(&bad), Err(Error::InvalidSpace(_))));
    }

    #[test]
    fn unit_is_an_embedding() {
        for a in [a3c(), a3i(), b4(), closure(1, &[])] {
            let eta = unit_eta(&a).unwrap();
            assert!(eta.hom_check().is_embedding());
            assert_eq!(eta.target().index_of("{}"), Some(eta.apply(a.bottom())));
        }
    }

    #[test]
    fn completions_of_fixtures() {
        let c = complete(&a3c()).unwrap();
        assert!(isomorphism_search(&c.algebra, &b4()).unwrap().is_some());
        let c = complete(&a3i()).unwrap();
        assert!(isomorphism_search(&c.algebra, &a3i()).unwrap().is_some());
        let c = complete(&b4()).unwrap();
        assert!(isomorphism_search(&c.algebra, &b4()).unwrap().is_some());
    }

    #[test]
    fn triangles_hold() {
        for a in [a3c(), a3i(), b4(), closure(1, &[])] {
            assert!(check_triangle_identities(&a).unwrap().holds());
        }
        let point = Arc::new(EtaleSpace::identity_space(vec!["x".into()]).unwrap());
        assert!(check_triangle_identities_space(&point).unwrap().holds());
    }

    #[test]
    fn counit_undefined_off_sections() {
        // One base point, two sheets: each point lies in a section.
        let s = Arc::new(
            EtaleSpace::new(
                vec!["x".into(), "y".into()],
                vec!["p".into()],
                vec![0, 0],
                vec![PointSet::singleton(0), PointSet::singleton(1)],
            )
            .unwrap(),
        );
        let l = counit_lambda(&s).unwrap();
        assert!(l.map().iter().all(Option::is_some));
        assert!(l.is_isomorphism());
    }

    #[test]
    fn unique_iso_between_labellings() {
        let c = complete(&a3c()).unwrap();
        let id = unique_completion_iso(&c.embedding, &c.embedding).unwrap();
        assert!(id.is_identity());
        let perm: Vec<usize> = (0..4).rev().collect();
        let relabelled = Arc::new(c.algebra.relabel(&perm).unwrap());
        let iota2 = AlgebraMap::new(
            c.embedding.source_arc().clone(),
            relabelled,
            c.embedding.table().iter().map(|&x| perm[x]).collect(),
        )
        .unwrap();
        let theta = unique_completion_iso(&c.embedding, &iota2).unwrap();
        assert_eq!(theta.table(), &perm[..]);
    }

    #[test]
    fn non_dense_extension_is_refused() {
        let a = a3c();
        let p2 = closure(
            2,
            &[
                &[(0, 0)],
                &[(1, 1)],
                &[(0, 1)],
                &[(1, 0)],
                &[(0, 0), (1, 1)],
            ],
        );
        let table = a.names().iter().map(|n| p2.index_of(n).unwrap()).collect();
        let into_p2 = AlgebraMap::new(a.clone(), p2, table).unwrap();
        let c = complete(&a).unwrap();
        assert!(matches!(
            unique_completion_iso(&c.embedding, &into_p2),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn characterizations_agree() {
        let a = a3c();
        let b = b4();
        let c = complete(&a).unwrap();
        let table = a.names().iter().map(|n| b.index_of(n).unwrap()).collect();
        let kappa = AlgebraMap::new(a.clone(), b, table).unwrap();
        let r = completion_characterizations(
            &c.embedding,
            &[kappa.clone(), AlgebraMap::identity(a.clone())],
        )
        .unwrap();
        assert!(r.consistent() && r.complete_and_dense);
        assert_eq!(r.outcomes[0].factors_from_c, Some(true));
        assert_eq!(r.outcomes[0].factors_into_c, Some(true));
        assert_eq!(r.outcomes[1].factors_from_c, None);

        let r = completion_characterizations(&AlgebraMap::identity(a), &[kappa]).unwrap();
        assert!(r.consistent() && !r.complete_and_dense);
    }

    #[test]
    fn stone_checks() {
        let r = stone_restriction_checks(&b4()).unwrap();
        assert!(r.applicable && r.holds());
        assert_eq!(r.dual_points, 2);
        assert!(r.dual_discrete);
        assert!(!stone_restriction_checks(&a3i()).unwrap().applicable);
        assert!(stone_restriction_checks(&closure(1, &[])).unwrap().holds());
    }

    #[test]
    fn override_matches_concrete() {
        for a in [a3c(), a3i(), b4()] {
            let r = override_coherence(&complete(&a).unwrap()).unwrap();
            assert!(r.mismatches.is_empty());
        }
    }
}
