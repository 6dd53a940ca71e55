use proptest::prelude::*;
use serde_json::json;

use diffrest_cli::doc::{algebra_to_doc, emit, parse, render, space_to_doc, to_value, Document};

fn arb_pfalgebra_text() -> impl Strategy<Value = String> {
    (1usize..=3)
        .prop_flat_map(|n| {
            let graph = prop::collection::vec(prop::option::of(0..n), n);
            (Just(n), prop::collection::vec((graph, any::<bool>()), 0..=3))
        })
        .prop_map(|(n, gens)| {
            let carrier: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
            let generators: Vec<_> = gens
                .iter()
                .enumerate()
                .map(|(k, (values, named))| {
                    let graph: Vec<_> = values
                        .iter()
                        .enumerate()
                        .rev()
                        .filter_map(|(x, y)| y.map(|y| json!([carrier[x], carrier[y]])))
                        .collect();
                    if *named {
                        json!({ "name": format!("g{k}"), "graph": graph })
                    } else {
                        json!({ "graph": graph })
                    }
                })
                .collect();
            json!({ "kind": "pfalgebra", "version": 1, "carrier": carrier, "generators": generators }).to_string()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn emission_is_idempotent(text in arb_pfalgebra_text()) {
        let doc = parse(&text).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let once = render(&emit(&doc));
        let twice = render(&emit(&parse(&once).unwrap()));
        prop_assert_eq!(&once, &twice);

        let Document::PfAlgebra(p) = doc else { unreachable!() };
        let alg = render(&to_value(&algebra_to_doc(&p.algebra)));
        prop_assert_eq!(&alg, &render(&emit(&parse(&alg).unwrap())));

        let f = diffrest::duality::f_object(&p.algebra).unwrap();
        let space = render(&to_value(&space_to_doc(&f.space)));
        prop_assert_eq!(&space, &render(&emit(&parse(&space).unwrap())));
    }
}
