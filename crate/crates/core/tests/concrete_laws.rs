//! Exhaustive checks of the axioms and of compatibility directly on
//! partial functions, without going through operation tables.

use diffrest::pfun::{
    enumerate_all_pfs, pf_difference, pf_meet, pf_restrict, Carrier, PartialFunction,
};

fn all(size: usize) -> Vec<PartialFunction> {
    enumerate_all_pfs(&Carrier::new(size).unwrap()).unwrap()
}

fn minus(a: &PartialFunction, b: &PartialFunction) -> PartialFunction {
    pf_difference(a, b).unwrap()
}

fn rest(a: &PartialFunction, b: &PartialFunction) -> PartialFunction {
    pf_restrict(a, b).unwrap()
}

#[test]
fn enumeration_counts() {
    for (size, count) in [(1, 2), (2, 9), (3, 64)] {
        assert_eq!(all(size).len(), count);
    }
}

#[test]
fn two_variable_axioms_hold_on_every_small_carrier() {
    for size in 1..=3 {
        let pfs = all(size);
        for a in &pfs {
            for b in &pfs {
                assert_eq!(minus(a, &minus(b, a)), *a);
                assert_eq!(pf_meet(a, b).unwrap(), pf_meet(b, a).unwrap());
                assert_eq!(pf_meet(a, b).unwrap(), minus(a, &minus(a, b)));
                let ab = pf_meet(a, b).unwrap();
                assert_eq!(rest(&ab, a), ab);
            }
        }
    }
}

#[test]
fn three_variable_axioms_hold_on_every_small_carrier() {
    for size in 1..=3 {
        let pfs = all(size);
        for a in &pfs {
            for b in &pfs {
                for c in &pfs {
                    assert_eq!(minus(&minus(a, b), c), minus(&minus(a, c), b));
                    let lhs = pf_meet(&rest(a, c), &rest(b, c)).unwrap();
                    assert_eq!(lhs, rest(&rest(a, b), c));
                }
            }
        }
    }
}

#[test]
fn compatibility_is_agreement_on_shared_domain() {
    for size in 1..=3 {
        let pfs = all(size);
        for a in &pfs {
            for b in &pfs {
                let agree = (0..size).all(|x| match (a.get(x), b.get(x)) {
                    (Some(u), Some(v)) => u == v,
                    _ => true,
                });
                assert_eq!(rest(a, b) == rest(b, a), agree, "{a} {b}");
                assert_eq!(a.agrees_with(b), agree, "{a} {b}");
            }
        }
    }
}

#[test]
fn order_is_graph_inclusion() {
    let pfs = all(3);
    for a in &pfs {
        for b in &pfs {
            assert_eq!(pf_meet(a, b).unwrap() == *a, a.is_subset(b));
        }
    }
}
