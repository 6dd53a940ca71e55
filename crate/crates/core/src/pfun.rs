//! Concrete partial functions on a finite carrier `{0, ..., n-1}`.
//!
//! These are the semantic objects every abstract computation is measured
//! against: algebras built here by [`closure_generate`] are genuine algebras
//! of partial functions and serve as oracles for the abstract layer.

use std::collections::BTreeSet;
use std::fmt;

use crate::dra::{FiniteAlgebra, OpTable};
use crate::error::{Error, Result};
use crate::limits::{check_cap, Limits};

/// The base set. Points are 0-based indices; labels are cosmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Carrier {
    size: usize,
    labels: Option<Vec<String>>,
}

impl Carrier {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::Precondition(
                "carrier must have at least one point".into(),
            ));
        }
        Ok(Carrier { size, labels: None })
    }

    pub fn with_labels(labels: Vec<String>) -> Result<Self> {
        let distinct: BTreeSet<&String> = labels.iter().collect();
        if distinct.len() != labels.len() {
            return Err(Error::Precondition(
                "carrier labels must be distinct".into(),
            ));
        }
        let mut c = Carrier::new(labels.len())?;
        c.labels = Some(labels);
        Ok(c)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => i.to_string(),
        }
    }
}

/// A partial self-map of the carrier, stored as its value vector.
///
/// The derived `Ord` is the canonical order: lexicographic on the value
/// vector with "undefined" below every defined value.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartialFunction {
    values: Vec<Option<usize>>,
}

impl PartialFunction {
    pub fn empty(size: usize) -> Self {
        PartialFunction {
            values: vec![None; size],
        }
    }

    pub fn identity(size: usize) -> Self {
        PartialFunction {
            values: (0..size).map(Some).collect(),
        }
    }

    /// Build from `(x, y)` pairs. Fails on out-of-range points or on two
    /// different values for one point.
    pub fn from_pairs(size: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut values = vec![None; size];
        for &(x, y) in pairs {
            if x >= size || y >= size {
                return Err(Error::Precondition(format!(
                    "pair ({x},{y}) outside carrier of size {size}"
                )));
            }
            match values[x] {
                Some(old) if old != y => {
                    return Err(Error::Precondition(format!(
                        "point {x} mapped to both {old} and {y}"
                    )))
                }
                _ => values[x] = Some(y),
            }
        }
        Ok(PartialFunction { values })
    }

    pub fn from_values(values: Vec<Option<usize>>) -> Result<Self> {
        let size = values.len();
        if values.iter().flatten().any(|&y| y >= size) {
            return Err(Error::Precondition("value outside carrier".into()));
        }
        Ok(PartialFunction { values })
    }

    pub fn size(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, x: usize) -> Option<usize> {
        self.values.get(x).copied().flatten()
    }

    pub fn values(&self) -> &[Option<usize>] {
        &self.values
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(x, v)| v.map(|y| (x, y)))
    }

    pub fn is_empty(&self) -> bool {
        self.values.iter().all(Option::is_none)
    }

    pub fn in_domain(&self, x: usize) -> bool {
        self.get(x).is_some()
    }

    pub fn in_range(&self, y: usize) -> bool {
        self.values.contains(&Some(y))
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.values.iter().flatten().all(|y| seen.insert(*y))
    }

    /// Graph inclusion.
    pub fn is_subset(&self, other: &Self) -> bool {
        self.pairs().all(|(x, y)| other.get(x) == Some(y))
    }

    /// Agreement on the shared domain.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.values
            .iter()
            .zip(&other.values)
            .all(|(a, b)| a.is_none() || b.is_none() || a == b)
    }

    pub fn display_with(&self, carrier: &Carrier) -> String {
        let body: Vec<String> = self
            .pairs()
            .map(|(x, y)| format!("({},{})", carrier.label(x), carrier.label(y)))
            .collect();
        format!("{{{}}}", body.join(","))
    }

    fn map_points(size: usize, f: impl Fn(usize) -> Option<usize>) -> Self {
        PartialFunction {
            values: (0..size).map(f).collect(),
        }
    }

    fn partial_identity(size: usize, keep: impl Fn(usize) -> bool) -> Self {
        Self::map_points(size, |x| keep(x).then_some(x))
    }
}

impl fmt::Display for PartialFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (x, y)) in self.pairs().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "({x},{y})")?;
        }
        write!(f, "}}")
    }
}

fn same_carrier(f: &PartialFunction, g: &PartialFunction) -> Result<usize> {
    if f.size() != g.size() {
        return Err(Error::CarrierMismatch {
            left: f.size(),
            right: g.size(),
        });
    }
    Ok(f.size())
}

/// Relative complement: the pairs of `f` absent from `g`.
pub fn pf_difference(f: &PartialFunction, g: &PartialFunction) -> Result<PartialFunction> {
    let n = same_carrier(f, g)?;
    Ok(PartialFunction::map_points(n, |x| match f.get(x) {
        Some(y) if g.get(x) != Some(y) => Some(y),
        _ => None,
    }))
}

/// Domain restriction: `g` restricted to `dom(f)`.
pub fn pf_restrict(f: &PartialFunction, g: &PartialFunction) -> Result<PartialFunction> {
    let n = same_carrier(f, g)?;
    Ok(PartialFunction::map_points(n, |x| {
        if f.in_domain(x) {
            g.get(x)
        } else {
            None
        }
    }))
}

/// Graph intersection.
pub fn pf_meet(f: &PartialFunction, g: &PartialFunction) -> Result<PartialFunction> {
    let n = same_carrier(f, g)?;
    Ok(PartialFunction::map_points(n, |x| {
        match (f.get(x), g.get(x)) {
            (Some(a), Some(b)) if a == b => Some(a),
            _ => None,
        }
    }))
}

/// Preferential union: `f` together with `g` off `dom(f)`.
pub fn pf_override(f: &PartialFunction, g: &PartialFunction) -> Result<PartialFunction> {
    let n = same_carrier(f, g)?;
    Ok(PartialFunction::map_points(n, |x| f.get(x).or(g.get(x))))
}

/// Composition `f ∘ g`: first `g`, then `f`.
pub fn pf_compose(f: &PartialFunction, g: &PartialFunction) -> Result<PartialFunction> {
    let n = same_carrier(f, g)?;
    Ok(PartialFunction::map_points(n, |x| {
        g.get(x).and_then(|y| f.get(y))
    }))
}

pub fn pf_domain(f: &PartialFunction) -> PartialFunction {
    PartialFunction::partial_identity(f.size(), |x| f.in_domain(x))
}

pub fn pf_range(f: &PartialFunction) -> PartialFunction {
    PartialFunction::partial_identity(f.size(), |x| f.in_range(x))
}

pub fn pf_fixset(f: &PartialFunction) -> PartialFunction {
    PartialFunction::partial_identity(f.size(), |x| f.get(x) == Some(x))
}

pub fn pf_antidomain(f: &PartialFunction) -> PartialFunction {
    PartialFunction::partial_identity(f.size(), |x| !f.in_domain(x))
}

pub fn pf_antirange(f: &PartialFunction) -> PartialFunction {
    PartialFunction::partial_identity(f.size(), |x| !f.in_range(x))
}

/// Range restriction: the pairs `(x, y)` of `g` with `y ∈ dom(f)`.
pub fn pf_range_restrict(f: &PartialFunction, g: &PartialFunction) -> Result<PartialFunction> {
    let n = same_carrier(f, g)?;
    Ok(PartialFunction::map_points(n, |x| {
        g.get(x).filter(|&y| f.in_domain(y))
    }))
}

/// Antidomain restriction: `g` restricted to the complement of `dom(f)`.
pub fn pf_antidomain_restrict(f: &PartialFunction, g: &PartialFunction) -> Result<PartialFunction> {
    let n = same_carrier(f, g)?;
    Ok(PartialFunction::map_points(n, |x| {
        if f.in_domain(x) {
            None
        } else {
            g.get(x)
        }
    }))
}

/// Converse. Defined only on injective partial functions.
pub fn pf_converse(f: &PartialFunction) -> Option<PartialFunction> {
    if !f.is_injective() {
        return None;
    }
    let mut values = vec![None; f.size()];
    for (x, y) in f.pairs() {
        values[y] = Some(x);
    }
    Some(PartialFunction { values })
}

/// `f ∪ g` when that union is still a function.
pub fn pf_union_if_compatible(f: &PartialFunction, g: &PartialFunction) -> Option<PartialFunction> {
    if f.size() != g.size() || !f.agrees_with(g) {
        return None;
    }
    Some(PartialFunction::map_points(f.size(), |x| {
        f.get(x).or(g.get(x))
    }))
}

/// The named concrete operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConcreteOp {
    Difference,
    Restrict,
    Meet,
    Override,
    Compose,
    Domain,
    Range,
    Fixset,
    Identity,
    RangeRestrict,
    Antidomain,
    Antirange,
    AntidomainRestrict,
    Converse,
}

impl ConcreteOp {
    pub const ALL: [ConcreteOp; 14] = [
        ConcreteOp::Difference,
        ConcreteOp::Restrict,
        ConcreteOp::Meet,
        ConcreteOp::Override,
        ConcreteOp::Compose,
        ConcreteOp::Domain,
        ConcreteOp::Range,
        ConcreteOp::Fixset,
        ConcreteOp::Identity,
        ConcreteOp::RangeRestrict,
        ConcreteOp::Antidomain,
        ConcreteOp::Antirange,
        ConcreteOp::AntidomainRestrict,
        ConcreteOp::Converse,
    ];

    pub fn arity(self) -> usize {
        use ConcreteOp::*;
        match self {
            Identity => 0,
            Domain | Range | Fixset | Antidomain | Antirange | Converse => 1,
            Difference | Restrict | Meet | Override | Compose | RangeRestrict
            | AntidomainRestrict => 2,
        }
    }

    pub fn name(self) -> &'static str {
        use ConcreteOp::*;
        match self {
            Difference => "difference",
            Restrict => "restrict",
            Meet => "meet",
            Override => "override",
            Compose => "compose",
            Domain => "domain",
            Range => "range",
            Fixset => "fixset",
            Identity => "identity",
            RangeRestrict => "range_restrict",
            Antidomain => "antidomain",
            Antirange => "antirange",
            AntidomainRestrict => "antidomain_restrict",
            Converse => "converse",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|op| op.name() == name)
    }

    /// Apply to `args` (length = arity) on a carrier of `size` points.
    pub fn apply(self, size: usize, args: &[&PartialFunction]) -> Result<PartialFunction> {
        use ConcreteOp::*;
        if args.len() != self.arity() {
            return Err(Error::Precondition(format!(
                "{} takes {} arguments, got {}",
                self.name(),
                self.arity(),
                args.len()
            )));
        }
        if let Some(f) = args.iter().find(|f| f.size() != size) {
            return Err(Error::CarrierMismatch {
                left: size,
                right: f.size(),
            });
        }
        match self {
            Identity => Ok(PartialFunction::identity(size)),
            Domain => Ok(pf_domain(args[0])),
            Range => Ok(pf_range(args[0])),
            Fixset => Ok(pf_fixset(args[0])),
            Antidomain => Ok(pf_antidomain(args[0])),
            Antirange => Ok(pf_antirange(args[0])),
            Converse => pf_converse(args[0])
                .ok_or_else(|| Error::Undefined(format!("converse of non-injective {}", args[0]))),
            Difference => pf_difference(args[0], args[1]),
            Restrict => pf_restrict(args[0], args[1]),
            Meet => pf_meet(args[0], args[1]),
            Override => pf_override(args[0], args[1]),
            Compose => pf_compose(args[0], args[1]),
            RangeRestrict => pf_range_restrict(args[0], args[1]),
            AntidomainRestrict => pf_antidomain_restrict(args[0], args[1]),
        }
    }
}

impl fmt::Display for ConcreteOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A finite algebra of partial functions, closed under `−` and `⇂`.
///
/// Elements are kept in canonical order and contain the empty function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcretePFAlgebra {
    carrier: Carrier,
    elements: Vec<PartialFunction>,
}

impl ConcretePFAlgebra {
    /// Wrap a set of functions, checking closure under `−` and `⇂`.
    pub fn from_elements(carrier: Carrier, elements: Vec<PartialFunction>) -> Result<Self> {
        let mut elements = elements;
        elements.sort();
        elements.dedup();
        if let Some(f) = elements.iter().find(|f| f.size() != carrier.size()) {
            return Err(Error::CarrierMismatch {
                left: carrier.size(),
                right: f.size(),
            });
        }
        let alg = ConcretePFAlgebra { carrier, elements };
        if alg
            .index_of(&PartialFunction::empty(alg.carrier.size()))
            .is_none()
        {
            return Err(Error::Precondition(
                "algebra must contain the empty function".into(),
            ));
        }
        for op in [ConcreteOp::Difference, ConcreteOp::Restrict] {
            if !alg.is_closed_under(op)? {
                return Err(Error::Precondition(format!(
                    "elements not closed under {op}"
                )));
            }
        }
        Ok(alg)
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn elements(&self) -> &[PartialFunction] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, f: &PartialFunction) -> Option<usize> {
        self.elements.binary_search(f).ok()
    }

    pub fn is_closed_under(&self, op: ConcreteOp) -> Result<bool> {
        Ok(self.operator_table(op)?.is_some())
    }

    /// The table of `op` over the elements, or `None` if some result falls
    /// outside the algebra (or is undefined).
    pub fn operator_table(&self, op: ConcreteOp) -> Result<Option<OpTable>> {
        let n = self.len();
        let arity = op.arity();
        let mut entries = Vec::with_capacity(n.pow(arity as u32));
        for args in tuples(n, arity) {
            let fs: Vec<&PartialFunction> = args.iter().map(|&i| &self.elements[i]).collect();
            let out = match op.apply(self.carrier.size(), &fs) {
                Ok(out) => out,
                Err(Error::Undefined(_)) => return Ok(None),
                Err(e) => return Err(e),
            };
            match self.index_of(&out) {
                Some(i) => entries.push(i),
                None => return Ok(None),
            }
        }
        OpTable::new(n, arity, entries).map(Some)
    }

    /// Default element names: the graph in set notation.
    pub fn default_names(&self) -> Vec<String> {
        self.elements
            .iter()
            .map(|f| f.display_with(&self.carrier))
            .collect()
    }

    /// The abstract `{−, ⇂}`-algebra with default names.
    pub fn to_algebra(&self) -> FiniteAlgebra {
        self.to_named_algebra(self.default_names())
            .expect("closed concrete algebra has well-formed tables")
    }

    pub fn to_named_algebra(&self, names: Vec<String>) -> Result<FiniteAlgebra> {
        let minus = self
            .operator_table(ConcreteOp::Difference)?
            .ok_or_else(|| Error::Precondition("not closed under difference".into()))?;
        let rest = self
            .operator_table(ConcreteOp::Restrict)?
            .ok_or_else(|| Error::Precondition("not closed under restriction".into()))?;
        FiniteAlgebra::new(names, minus, rest)
    }
}

/// All tuples over `0..n` of the given arity, in lexicographic order.
pub(crate) fn tuples(n: usize, arity: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = if n == 0 && arity > 0 {
        0
    } else {
        n.pow(arity as u32)
    };
    (0..total).map(move |mut code| {
        let mut t = vec![0; arity];
        for slot in t.iter_mut().rev() {
            *slot = code % n.max(1);
            code /= n.max(1);
        }
        t
    })
}

/// Every partial function on the carrier, in canonical order.
pub fn enumerate_all_pfs(carrier: &Carrier) -> Result<Vec<PartialFunction>> {
    let n = carrier.size();
    check_cap(
        "carrier for enumeration",
        n,
        Limits::current().enumerate_carrier,
    )?;
    Ok(tuples(n + 1, n)
        .map(|code| PartialFunction {
            values: code.into_iter().map(|c| c.checked_sub(1)).collect(),
        })
        .collect())
}

/// The least set containing `seeds` and the empty function that is closed
/// under every operation in `ops`. `ops` must include difference and
/// restriction.
pub fn closure_generate(
    carrier: &Carrier,
    seeds: &[PartialFunction],
    ops: &[ConcreteOp],
) -> Result<ConcretePFAlgebra> {
    let n = carrier.size();
    check_cap("carrier for closure", n, Limits::current().closure_carrier)?;
    for required in [ConcreteOp::Difference, ConcreteOp::Restrict] {
        if !ops.contains(&required) {
            return Err(Error::Precondition(format!(
                "closure ops must include {required}"
            )));
        }
    }
    if let Some(f) = seeds.iter().find(|f| f.size() != n) {
        return Err(Error::CarrierMismatch {
            left: n,
            right: f.size(),
        });
    }

    let mut seen: BTreeSet<PartialFunction> = BTreeSet::new();
    let mut order: Vec<PartialFunction> = Vec::new();
    let push = |f: PartialFunction, seen: &mut BTreeSet<_>, order: &mut Vec<_>| {
        if seen.insert(f.clone()) {
            order.push(f);
        }
    };
    push(PartialFunction::empty(n), &mut seen, &mut order);
    for s in seeds {
        push(s.clone(), &mut seen, &mut order);
    }
    for op in ops.iter().filter(|op| op.arity() == 0) {
        push(op.apply(n, &[])?, &mut seen, &mut order);
    }

    // Semi-naive fixpoint: each round only looks at tuples touching an
    // element added in the previous round.
    let mut done = 0;
    while done < order.len() {
        let frontier_start = done;
        let end = order.len();
        let mut fresh = Vec::new();
        for &op in ops.iter().filter(|op| op.arity() > 0) {
            for args in tuples(end, op.arity()) {
                if args.iter().all(|&i| i < frontier_start) {
                    continue;
                }
                let fs: Vec<&PartialFunction> = args.iter().map(|&i| &order[i]).collect();
                fresh.push(op.apply(n, &fs)?);
            }
        }
        done = end;
        for f in fresh {
            push(f, &mut seen, &mut order);
        }
    }

    Ok(ConcretePFAlgebra {
        carrier: carrier.clone(),
        elements: seen.into_iter().collect(),
    })
}
