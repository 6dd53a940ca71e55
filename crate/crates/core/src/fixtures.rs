//! Built-in example algebras, all generated from concrete partial functions.
//!
//! | name | carrier | generators | elements |
//! |------|---------|------------|----------|
//! | `A0` | 1 | none | `{0}` |
//! | `A1` | 1 | `e = {(0,0)}` | `{0, e}` |
//! | `A3c` | 2 | `a = {(0,0)}`, `b = {(1,1)}` | `{0, a, b}` |
//! | `A3i` | 2 | `f = {(0,0)}`, `g = {(0,1)}` | `{0, f, g}` |
//! | `A4` | 2 | `{(0,0)}`, `{(0,1)}`, `{(1,1)}` | 4 |
//! | `B4` | 2 | `a`, `b`, `top = {(0,0),(1,1)}` | `{0, a, b, top}` |
//! | `I2` | 2 | identity, swap, `{(0,0)}` | the 7 partial injections |
//! | `P2` | 2 | enough to generate everything | all 9 partial functions |

use std::sync::Arc;

use crate::dra::{AlgebraMap, FiniteAlgebra, OpTable, Operator};
use crate::duality::{f_morphism, unit_eta};
use crate::error::Result;
use crate::pfun::{closure_generate, Carrier, ConcreteOp, ConcretePFAlgebra, PartialFunction};
use crate::space::SpaceMorphism;

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub concrete: ConcretePFAlgebra,
    pub algebra: Arc<FiniteAlgebra>,
}

impl Fixture {
    /// The table of a concrete operation, if the fixture is closed under it.
    pub fn concrete_operator(&self, op: ConcreteOp) -> Result<Option<Operator>> {
        Ok(self
            .concrete
            .operator_table(op)?
            .map(|t| Operator::new(op.name(), t)))
    }
}

fn pf(size: usize, pairs: &[(usize, usize)]) -> PartialFunction {
    PartialFunction::from_pairs(size, pairs).expect("fixture pairs are functional")
}

/// Closure under `−` and `⇂`, named: `0` for the empty function, the
/// given names for the given functions, the graph otherwise.
fn build(
    name: &'static str,
    size: usize,
    named: &[(&str, &[(usize, usize)])],
    extra: &[&[(usize, usize)]],
) -> Fixture {
    let carrier = Carrier::new(size).expect("fixture carriers are nonempty");
    let mut seeds: Vec<PartialFunction> = named.iter().map(|(_, p)| pf(size, p)).collect();
    seeds.extend(extra.iter().map(|p| pf(size, p)));
    let concrete = closure_generate(
        &carrier,
        &seeds,
        &[ConcreteOp::Difference, ConcreteOp::Restrict],
    )
    .expect("fixture carriers are within the closure cap");
    let names = concrete
        .elements()
        .iter()
        .map(|f| {
            if f.is_empty() {
                return "0".to_string();
            }
            named
                .iter()
                .find(|(_, p)| pf(size, p) == *f)
                .map(|(n, _)| n.to_string())
                .unwrap_or_else(|| f.display_with(&carrier))
        })
        .collect();
    let algebra = Arc::new(concrete.to_named_algebra(names).expect("closed fixture"));
    Fixture {
        name,
        concrete,
        algebra,
    }
}

pub fn a0() -> Fixture {
    build("A0", 1, &[], &[])
}

pub fn a1() -> Fixture {
    build("A1", 1, &[("e", &[(0, 0)])], &[])
}

pub fn a3c() -> Fixture {
    build("A3c", 2, &[("a", &[(0, 0)]), ("b", &[(1, 1)])], &[])
}

pub fn a3i() -> Fixture {
    build("A3i", 2, &[("f", &[(0, 0)]), ("g", &[(0, 1)])], &[])
}

pub fn a4() -> Fixture {
    build("A4", 2, &[], &[&[(0, 0)], &[(0, 1)], &[(1, 1)]])
}

pub fn b4() -> Fixture {
    build(
        "B4",
        2,
        &[
            ("a", &[(0, 0)]),
            ("b", &[(1, 1)]),
            ("top", &[(0, 0), (1, 1)]),
        ],
        &[],
    )
}

pub fn i2() -> Fixture {
    build(
        "I2",
        2,
        &[("id", &[(0, 0), (1, 1)]), ("swap", &[(0, 1), (1, 0)])],
        &[&[(0, 0)]],
    )
}

pub fn p2() -> Fixture {
    build(
        "P2",
        2,
        &[("id", &[(0, 0), (1, 1)]), ("swap", &[(0, 1), (1, 0)])],
        &[&[(0, 0), (1, 0)], &[(0, 1), (1, 1)]],
    )
}

/// Every built-in fixture, smallest first.
pub fn catalog() -> Vec<Fixture> {
    vec![a0(), a1(), a3c(), a3i(), a4(), b4(), i2(), p2()]
}

pub fn by_name(name: &str) -> Option<Fixture> {
    catalog().into_iter().find(|f| f.name == name)
}

/// `A3c` with `a ⇂ b` changed from `0` to `a`, which breaks the fourth axiom.
pub fn a3c_broken_restriction() -> FiniteAlgebra {
    let base = a3c().algebra;
    let (a, b) = (base.index_of("a").unwrap(), base.index_of("b").unwrap());
    let mut entries = base.rest_table().entries().to_vec();
    entries[a * base.len() + b] = a;
    let rest = OpTable::new(base.len(), 2, entries).unwrap();
    FiniteAlgebra::new(base.names().to_vec(), base.minus_table().clone(), rest).unwrap()
}

/// The map sending each element to the element of the same name.
pub fn inclusion(source: &Fixture, target: &Fixture) -> Result<AlgebraMap> {
    let table = source
        .algebra
        .names()
        .iter()
        .map(|n| {
            target.algebra.index_of(n).ok_or_else(|| {
                crate::Error::Precondition(format!(
                    "{n} of {} missing from {}",
                    source.name, target.name
                ))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    AlgebraMap::new(source.algebra.clone(), target.algebra.clone(), table)
}

/// The map sending each concrete function to the function with the same
/// graph (carriers may differ in size).
pub fn concrete_inclusion(source: &Fixture, target: &Fixture) -> Result<AlgebraMap> {
    let table = source
        .concrete
        .elements()
        .iter()
        .map(|f| {
            let pairs: Vec<_> = f.pairs().collect();
            target
                .concrete
                .elements()
                .iter()
                .position(|g| g.pairs().eq(pairs.iter().copied()))
                .ok_or_else(|| {
                    crate::Error::Precondition(format!(
                        "{f} of {} missing from {}",
                        source.name, target.name
                    ))
                })
        })
        .collect::<Result<Vec<_>>>()?;
    AlgebraMap::new(source.algebra.clone(), target.algebra.clone(), table)
}

/// Named homomorphisms between fixtures: identities, inclusions,
/// constant-zero maps, `e ↦ a`, and every unit `η`.
pub fn fixture_homs() -> Result<Vec<(String, AlgebraMap)>> {
    let mut out = Vec::new();
    let cat = catalog();
    for f in &cat {
        out.push((
            format!("id_{}", f.name),
            AlgebraMap::identity(f.algebra.clone()),
        ));
        out.push((format!("eta_{}", f.name), unit_eta(&f.algebra)?));
    }
    let get = |n: &str| by_name(n).expect("fixture exists");
    for (s, t) in [
        ("A0", "A3c"),
        ("A3c", "B4"),
        ("A3c", "I2"),
        ("A3i", "I2"),
        ("A3i", "A4"),
        ("I2", "P2"),
        ("B4", "P2"),
    ] {
        out.push((
            format!("{s}_into_{t}"),
            concrete_inclusion(&get(s), &get(t))?,
        ));
    }
    let (a1, a3c, a3i) = (get("A1"), get("A3c"), get("A3i"));
    let e_to_a = AlgebraMap::new(
        a1.algebra.clone(),
        a3c.algebra.clone(),
        vec![a3c.algebra.bottom(), a3c.algebra.index_of("a").unwrap()],
    )?;
    out.push(("A1_e_to_a".into(), e_to_a));
    out.push((
        "zero_A3c_A3c".into(),
        AlgebraMap::constant_bottom(a3c.algebra.clone(), a3c.algebra.clone()),
    ));
    out.push((
        "zero_A3i_A1".into(),
        AlgebraMap::constant_bottom(a3i.algebra.clone(), a1.algebra.clone()),
    ));
    Ok(out)
}

/// The duals `F(h)` of the fixture homomorphisms, plus identities.
pub fn fixture_space_morphisms() -> Result<Vec<(String, SpaceMorphism)>> {
    fixture_homs()?
        .into_iter()
        .map(|(name, h)| Ok((format!("F({name})"), f_morphism(&h)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_sizes() {
        let sizes: Vec<(&str, usize)> = catalog()
            .iter()
            .map(|f| (f.name, f.algebra.len()))
            .collect();
        assert_eq!(
            sizes,
            vec![
                ("A0", 1),
                ("A1", 2),
                ("A3c", 3),
                ("A3i", 3),
                ("A4", 4),
                ("B4", 4),
                ("I2", 7),
                ("P2", 9)
            ]
        );
    }

    #[test]
    fn catalog_is_valid() {
        for f in catalog() {
            assert!(f.algebra.validate_axioms().is_valid(), "{}", f.name);
        }
        assert!(!a3c_broken_restriction().validate_axioms().is_valid());
    }

    #[test]
    fn fixture_homs_are_homs() {
        for (name, h) in fixture_homs().unwrap() {
            assert!(h.hom_check().is_hom(), "{name}");
        }
    }

    #[test]
    fn closure_properties_used_elsewhere() {
        let p2 = p2();
        for op in ConcreteOp::ALL {
            if op != ConcreteOp::Converse {
                assert!(p2.concrete.is_closed_under(op).unwrap(), "{op}");
            }
        }
        assert!(i2().concrete.is_closed_under(ConcreteOp::Converse).unwrap());
        for f in [a3c(), a3i(), b4(), i2()] {
            assert!(
                f.concrete.is_closed_under(ConcreteOp::Compose).unwrap(),
                "{}",
                f.name
            );
            assert!(
                f.concrete.is_closed_under(ConcreteOp::Domain).unwrap(),
                "{}",
                f.name
            );
        }
    }
}
