use pdakit::construct::{construct_pmt, g2_base_pda};
use pdakit::io::{format_grid, parse_grid, read_any, PdaDocument, Provenance};
use pdakit::{BuildOptions, Cell, Grid, PdaArray};
use proptest::prelude::*;

fn any_array() -> impl Strategy<Value = PdaArray> {
    (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
        proptest::collection::vec(prop_oneof![Just(Cell::Star), (1u32..500).prop_map(Cell::Symbol)], r * c)
            .prop_map(move |cells| PdaArray::new(Grid::new(r, c, cells)))
    })
}

fn any_labels(count: usize) -> impl Strategy<Value = Vec<Vec<u32>>> {
    proptest::collection::vec(proptest::collection::vec(0u32..100, 1..4), count)
}

proptest! {
    #[test]
    fn plain_grid_round_trips(a in any_array()) {
        let text = format_grid(&a);
        prop_assert_eq!(parse_grid(&text).unwrap(), a.clone());
        let noisy = format!("# header\n\n{}", text.replace(' ', "   "));
        prop_assert_eq!(parse_grid(&noisy).unwrap(), a);
    }

    #[test]
    fn json_round_trips_byte_for_byte(
        (a, labels) in any_array().prop_flat_map(|a| {
            let n = a.max_symbol() as usize;
            (Just(a), proptest::option::of(any_labels(n)))
        }),
        tag in "[a-z]{1,8}",
    ) {
        let a = match labels {
            Some(l) => a.with_labels(l),
            None => a,
        };
        let doc = PdaDocument::from_array(&a, Some(Provenance::new(&tag, [("n", 1)])));
        let text = doc.to_json();
        let back = PdaDocument::from_json(&text).unwrap();
        prop_assert_eq!(back.to_json(), text.clone());
        prop_assert_eq!(back.to_array().unwrap(), a);
        prop_assert_eq!(read_any(&text).unwrap(), doc);
    }
}

#[test]
fn constructed_array_keeps_labels_through_json() {
    let base = g2_base_pda(2).unwrap();
    let p = construct_pmt(&base, 2, 1, BuildOptions::default()).unwrap();
    let text = PdaDocument::from_array(&p, None).to_json();
    let back = PdaDocument::from_json(&text).unwrap();
    assert_eq!(back.to_array().unwrap(), p);
    assert_eq!(back.params.unwrap().k, 8);
}

#[test]
fn unknown_fields_are_rejected() {
    let text = PdaDocument::from_array(&pdakit::fixtures::mn_q2(), None)
        .to_json()
        .replacen('{', "{\n  \"extra\": 1,", 1);
    assert!(PdaDocument::from_json(&text).is_err());
}
